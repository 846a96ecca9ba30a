//! The built-in invariant corpus behind `hyplab check`: fast self-contained
//! verifications of the algebraic identities and convergence behavior the
//! library is built on. Prints one line per section; returns overall success.

use hypcore::bounds::{bronshtein_bound, roots_curve};
use hypcore::curve::max_difference_quotient;
use hypcore::metric::{dist, dist_bruteforce, UnorderedTuple};
use hypcore::poly::vieta;
use hypcore::sturm::{is_hyperbolic, ordered_roots};
use hypcore::tschirn::{check_b2_bound, check_dominance, nuij, split, tschirnhausen, Split};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::corpus::{builtin_corpus, corpus_interval, corpus_nest};
use crate::family::parse_spec;
use crate::runner::{run_convergence, RunConfig};

fn report(name: &str, ok: bool, detail: &str) -> bool {
    if ok {
        println!("ok    {name}{}{detail}", if detail.is_empty() { "" } else { ": " });
    } else {
        println!("FAIL  {name}{}{detail}", if detail.is_empty() { "" } else { ": " });
    }
    ok
}

fn random_roots(rng: &mut ChaCha8Rng, d: usize, with_ties: bool) -> Vec<f64> {
    let mut roots: Vec<f64> = (0..d).map(|_| rng.gen_range(-3.0..3.0)).collect();
    if with_ties && d >= 2 && rng.gen_bool(0.4) {
        let i = rng.gen_range(0..d - 1);
        roots[i + 1] = roots[i];
    }
    roots
}

fn check_round_trip(rng: &mut ChaCha8Rng) -> bool {
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let d = rng.gen_range(1..=6);
        let mut roots = random_roots(rng, d, false);
        roots.sort_by(f64::total_cmp);
        let p = vieta(&roots).unwrap();
        match ordered_roots(&p, 1e-12) {
            Ok(got) => {
                for (g, w) in got.as_slice().iter().zip(&roots) {
                    worst = worst.max((g - w).abs());
                }
            }
            Err(_) => return report("vieta round trip", false, "root extraction failed"),
        }
    }
    report(
        "vieta round trip",
        worst < 1e-8,
        &format!("worst error {worst:.2e}"),
    )
}

fn check_identities(rng: &mut ChaCha8Rng) -> bool {
    let mut ok = true;
    for _ in 0..200 {
        let d = rng.gen_range(2..=6);
        let roots = random_roots(rng, d, true);
        let p = vieta(&roots).unwrap();
        ok &= is_hyperbolic(&p, 1e-12).hyperbolic;
        let t = tschirnhausen(&p);
        ok &= check_dominance(&t).ok;
        let mean = roots.iter().sum::<f64>() / d as f64;
        let ss: f64 = roots.iter().map(|r| (r - mean) * (r - mean)).sum();
        ok &= (-2.0 * t.coeff(2) - ss).abs() <= 1e-8 * (1.0 + ss);
    }
    report("dominance and centered-coefficient identities", ok, "")
}

fn check_split(rng: &mut ChaCha8Rng) -> bool {
    let mut ok = true;
    for _ in 0..100 {
        let d = rng.gen_range(2..=6);
        let roots = random_roots(rng, d, false);
        let p = vieta(&roots).unwrap();
        if let Ok(Split::Pair(pair)) = split(&p, 1e-9) {
            let prod = pair.left.mul(&pair.right);
            let scale = p.coeffs().iter().fold(1.0f64, |m, c| m.max(c.abs()));
            for (a, b) in prod.coeffs().iter().zip(p.coeffs()) {
                ok &= (a - b).abs() <= 1e-8 * scale;
            }
            ok &= check_b2_bound(&p, &pair).ok;
        }
    }
    report("split reconstruction and factor bounds", ok, "")
}

fn check_separation(rng: &mut ChaCha8Rng) -> bool {
    let mut ok = true;
    let mut min_ratio = f64::INFINITY;
    for _ in 0..40 {
        let d = rng.gen_range(2..=4);
        let p = vieta(&random_roots(rng, d, true)).unwrap();
        for s in [0.1, -0.1, 0.01] {
            match nuij(&p, s) {
                Ok((out, rep)) => {
                    ok &= is_hyperbolic(&out, 1e-12).hyperbolic;
                    ok &= rep.min_gap > 0.0;
                    min_ratio = min_ratio.min(rep.min_gap / s.abs());
                }
                Err(_) => ok = false,
            }
        }
    }
    report(
        "separation operator",
        ok && min_ratio > 0.0,
        &format!("fitted gap constant {min_ratio:.3}"),
    )
}

fn check_metric(rng: &mut ChaCha8Rng) -> bool {
    let mut ok = true;
    for _ in 0..200 {
        let d = rng.gen_range(1..=5);
        let x = UnorderedTuple::new((0..d).map(|_| rng.gen_range(-4.0..4.0)).collect()).unwrap();
        let y = UnorderedTuple::new((0..d).map(|_| rng.gen_range(-4.0..4.0)).collect()).unwrap();
        let fast = dist(&x, &y).unwrap();
        let slow = dist_bruteforce(&x, &y).unwrap();
        ok &= (fast - slow).abs() <= 1e-12;
    }
    report("sorted-representative distance vs brute force", ok, "")
}

fn check_counterexample() -> bool {
    let text = "degree = 2\ninterval = -2, 2\nouter = -1.5, 1.5\ninner = -1, 1\ngrid = 1024\n\
         ns = 1, 4, 16\nqs = 1\ngammas = 1\nmode = coefficients\n\
         coeff.1 = 0\ncoeff.2 = -(x^2 + 1/n^2)\nlimit.coeff.1 = 0\nlimit.coeff.2 = -(x^2)\n";
    let spec = parse_spec(text, "builtin").unwrap();
    let res = match run_convergence(&spec, &RunConfig::default()) {
        Ok(r) => r,
        Err(e) => return report("Lipschitz-gap family", false, &e.to_string()),
    };
    let floor = 2.0 - 2.0f64.sqrt() - 1e-6;
    let mut ok = true;
    for n in [1, 4, 16] {
        ok &= res.value("lip_diff", n, Some(1.0)).unwrap_or(0.0) >= floor;
    }
    // Sobolev differences do decay
    let w1 = res.value("w1q_diff", 1, Some(1.0)).unwrap_or(0.0);
    let w16 = res.value("w1q_diff", 16, Some(1.0)).unwrap_or(f64::INFINITY);
    ok &= w16 < w1;
    report(
        "Lipschitz-gap family",
        ok,
        &format!("lip stays above {floor:.6}, W^{{1,1}} decays {w1:.3} -> {w16:.3}"),
    )
}

fn check_corpus() -> bool {
    let grid = match hypcore::curve::Grid::new(corpus_interval().lo, corpus_interval().hi, 512) {
        Ok(g) => g,
        Err(_) => return report("coefficient-bound corpus", false, "grid"),
    };
    let nest = corpus_nest();
    let mut kappa = 0.0f64;
    for fam in builtin_corpus(10) {
        let a = fam.coeff_curve(grid);
        let roots = match roots_curve(&a, 1e-12) {
            Ok(r) => r,
            Err(e) => return report("coefficient-bound corpus", false, &e.to_string()),
        };
        let quot = max_difference_quotient(&roots, nest.inner).unwrap_or(f64::INFINITY);
        let bound = bronshtein_bound(&a, nest).unwrap_or(0.0);
        if bound <= 0.0 || !quot.is_finite() {
            return report("coefficient-bound corpus", false, "degenerate bound");
        }
        kappa = kappa.max(quot / bound);
    }
    report(
        "coefficient-bound corpus",
        kappa.is_finite() && kappa > 0.0,
        &format!("fitted corpus constant {kappa:.4}"),
    )
}

/// Runs every built-in check; returns `true` when all pass.
pub fn run_check() -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut ok = true;
    ok &= check_round_trip(&mut rng);
    ok &= check_identities(&mut rng);
    ok &= check_split(&mut rng);
    ok &= check_separation(&mut rng);
    ok &= check_metric(&mut rng);
    ok &= check_counterexample();
    ok &= check_corpus();
    ok
}
