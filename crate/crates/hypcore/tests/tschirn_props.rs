//! Centered-form identities, dominance, splitting, and separation-operator
//! properties on randomly constructed hyperbolic polynomials.

use hypcore::poly::vieta;
use hypcore::sturm::{is_hyperbolic, ordered_roots};
use hypcore::tschirn::{
    check_b2_bound, check_dominance, nuij, split, tschirnhausen, Split,
};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

fn random_roots(rng: &mut ChaCha8Rng, d: usize, with_ties: bool) -> Vec<f64> {
    let mut roots: Vec<f64> = (0..d).map(|_| rng.gen_range(-3.0..3.0)).collect();
    if with_ties && d >= 2 && rng.gen_bool(0.5) {
        let i = rng.gen_range(0..d - 1);
        roots[i + 1] = roots[i];
    }
    roots
}

#[test]
fn centered_second_coefficient_is_sum_of_squares() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..500 {
        let d = rng.gen_range(2..=8);
        let roots = random_roots(&mut rng, d, true);
        let p = vieta(&roots).unwrap();
        let t = tschirnhausen(&p);
        let mean = roots.iter().sum::<f64>() / d as f64;
        let sum_sq: f64 = roots.iter().map(|r| (r - mean) * (r - mean)).sum();
        assert!(
            (-2.0 * t.coeff(2) - sum_sq).abs() <= 1e-8 * (1.0 + sum_sq),
            "roots {roots:?}"
        );
        assert!(t.coeff(2) <= 1e-12);
    }
}

#[test]
fn centering_preserves_roots_up_to_shift() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for _ in 0..200 {
        let d = rng.gen_range(1..=6);
        let roots = random_roots(&mut rng, d, false);
        let p = vieta(&roots).unwrap();
        let t = tschirnhausen(&p);
        let centered = ordered_roots(&t.to_poly(), 1e-12).unwrap();
        let base = ordered_roots(&p, 1e-12).unwrap();
        for (c, b) in centered.as_slice().iter().zip(base.as_slice()) {
            assert!((c - t.shift - b).abs() < 1e-8, "{c} - {} vs {b}", t.shift);
        }
    }
}

#[test]
fn dominance_holds_for_1000_random_hyperbolic_inputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..1000 {
        let d = rng.gen_range(2..=8);
        let roots = random_roots(&mut rng, d, true);
        let t = tschirnhausen(&vieta(&roots).unwrap());
        let rep = check_dominance(&t);
        assert!(rep.ok, "roots {roots:?}: {rep:?}");
    }
}

#[test]
fn split_reconstructs_and_separates() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    let mut splits = 0;
    for _ in 0..500 {
        let d = rng.gen_range(2..=7);
        let roots = random_roots(&mut rng, d, false);
        let p = vieta(&roots).unwrap();
        match split(&p, 1e-9).unwrap() {
            Split::Pair(pair) => {
                splits += 1;
                // product reproduces the source coefficientwise
                let prod = pair.left.mul(&pair.right);
                let scale = p
                    .coeffs()
                    .iter()
                    .fold(1.0f64, |m, c| m.max(c.abs()));
                for (a, b) in prod.coeffs().iter().zip(p.coeffs()) {
                    assert!((a - b).abs() <= 1e-8 * scale, "{a} vs {b}");
                }
                // both factors hyperbolic, root clusters strictly separated
                assert!(is_hyperbolic(&pair.left, 1e-12).hyperbolic);
                assert!(is_hyperbolic(&pair.right, 1e-12).hyperbolic);
                let lr = ordered_roots(&pair.left, 1e-12).unwrap();
                let rr = ordered_roots(&pair.right, 1e-12).unwrap();
                assert!(
                    lr.as_slice().last().unwrap() < rr.as_slice().first().unwrap()
                );
                // factor-coefficient bound
                let rep = check_b2_bound(&p, &pair);
                assert!(rep.ok, "roots {roots:?}: {rep:?}");
            }
            Split::NoGap => {}
        }
    }
    assert!(splits >= 490, "only {splits} of 500 random instances split");
}

#[test]
fn separation_operator_properties() {
    // 200 random hyperbolic inputs across d <= 6, with repeated roots in
    // half of them so the fitted gap constant is exercised at degeneracies
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut inputs = Vec::new();
    for _ in 0..200 {
        let d = rng.gen_range(2..=6);
        inputs.push(vieta(&random_roots(&mut rng, d, true)).unwrap());
    }
    for s_abs in [1e-3, 1e-2, 1e-1] {
        for sign in [-1.0, 1.0] {
            let s = sign * s_abs;
            let mut c1_hat = f64::INFINITY;
            let mut c2_hat = 0.0f64;
            for p in &inputs {
                let (out, rep) = nuij(p, s).unwrap();
                assert!(is_hyperbolic(&out, 1e-12).hyperbolic);
                assert!(rep.min_gap > 0.0, "distinct roots required, s={s}");
                c1_hat = c1_hat.min(rep.min_gap / s_abs);
                c2_hat = c2_hat.max(rep.max_shift / s_abs);
            }
            assert!(c1_hat > 0.0, "fitted gap constant must be positive");
            assert!(c2_hat.is_finite(), "fitted shift constant must be finite");
        }
    }
}

#[test]
fn separation_operator_is_identity_at_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for _ in 0..50 {
        let d = rng.gen_range(2..=6);
        let p = vieta(&random_roots(&mut rng, d, true)).unwrap();
        let (out, rep) = nuij(&p, 0.0).unwrap();
        assert_eq!(out.coeffs(), p.coeffs());
        assert_eq!(rep.max_shift, 0.0);
        assert!(rep.shift_sign_ok);
    }
}

#[test]
fn separation_shift_signs_match_on_generic_inputs() {
    // strict sign agreement holds off the degenerate set; use distinct roots
    let mut rng = ChaCha8Rng::seed_from_u64(47);
    for _ in 0..100 {
        let d = rng.gen_range(2..=5);
        let p = vieta(&random_roots(&mut rng, d, false)).unwrap();
        for s in [0.05, -0.05] {
            let (_, rep) = nuij(&p, s).unwrap();
            assert!(rep.shift_sign_ok, "s={s}, p={:?}", p.coeffs());
        }
    }
}
