//! Root-map properties: vieta round trips, hyperbolicity closure, Sturm
//! exactness against a scan oracle, and translation equivariance.

use hypcore::poly::{vieta, PolyCoeffs};
use hypcore::sturm::{is_hyperbolic, ordered_roots, SturmChain};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

fn random_roots(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    (0..d).map(|_| rng.gen_range(-5.0..5.0)).collect()
}

#[test]
fn round_trip_500_random_root_vectors() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for case in 0..500 {
        let d = rng.gen_range(1..=8);
        let mut roots = random_roots(&mut rng, d);
        roots.sort_by(f64::total_cmp);
        let p = vieta(&roots).unwrap();
        let got = ordered_roots(&p, 1e-12).unwrap();
        for (g, w) in got.as_slice().iter().zip(&roots) {
            assert!(
                (g - w).abs() < 1e-8,
                "case {case}: d={d}, got {g} want {w}"
            );
        }
    }
}

#[test]
fn hyperbolicity_closure_under_vieta() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..300 {
        let d = rng.gen_range(1..=8);
        let mut roots = random_roots(&mut rng, d);
        // force repeated roots in a third of the cases
        if d >= 2 && rng.gen_bool(0.33) {
            let i = rng.gen_range(0..d - 1);
            roots[i + 1] = roots[i];
        }
        let p = vieta(&roots).unwrap();
        let rep = is_hyperbolic(&p, 1e-12);
        assert!(rep.hyperbolic, "roots {roots:?}: {rep:?}");
    }
}

/// Sign-change scan at resolution 1e-4, plus a near-zero-touch detector for
/// even-multiplicity roots. Independent of the Sturm machinery.
fn scan_distinct_roots(p: &PolyCoeffs) -> usize {
    let bound = p.cauchy_bound();
    let step = 1e-4;
    let n = ((2.0 * bound) / step).ceil() as usize;
    let vals: Vec<f64> = (0..=n)
        .map(|i| p.eval(-bound + step * i as f64))
        .collect();
    let mut count = 0;
    let mut last_sign = 0i8;
    let mut i = 0;
    while i <= n {
        if vals[i] == 0.0 {
            // a sample landing exactly on a root: count the run once and
            // forget the previous sign so the crossing is not recounted
            count += 1;
            while i <= n && vals[i] == 0.0 {
                i += 1;
            }
            last_sign = 0;
            continue;
        }
        let s = if vals[i] > 0.0 { 1i8 } else { -1i8 };
        if last_sign != 0 && s != last_sign {
            count += 1;
        }
        last_sign = s;
        i += 1;
    }
    // even-multiplicity roots: local minima of |P| that touch near zero
    // without an exact hit or a sign change
    let scale = vals.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    for i in 1..vals.len() - 1 {
        let (a, b, c) = (vals[i - 1], vals[i], vals[i + 1]);
        if a * c > 0.0
            && b != 0.0
            && b.abs() <= a.abs()
            && b.abs() <= c.abs()
            && b.abs() <= 1e-12 * scale
        {
            count += 1;
        }
    }
    count
}

#[test]
fn sturm_count_matches_scan_oracle_on_integer_polys() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..200 {
        let d = rng.gen_range(1..=6usize);
        let coeffs: Vec<f64> = (0..d).map(|_| rng.gen_range(-10..=10) as f64).collect();
        let p = PolyCoeffs::new(coeffs).unwrap();
        let chain = SturmChain::new(&p);
        let got = chain.distinct_real_roots();
        let want = scan_distinct_roots(&p);
        assert_eq!(got, want, "case {case}: {:?}", p.coeffs());
    }
}

#[test]
fn sturm_count_on_constructed_multiplicities() {
    // squares and prime powers where the distinct count is known exactly
    let cases: Vec<(Vec<f64>, usize)> = vec![
        (vec![1.0, 1.0, -2.0], 2),             // (Z-1)^2 (Z+2)
        (vec![3.0, 3.0, 3.0], 1),              // (Z-3)^3
        (vec![0.0, 0.0, 0.0, 0.0], 1),         // Z^4
        (vec![-1.0, -1.0, 1.0, 1.0], 2),       // (Z+1)^2 (Z-1)^2
        (vec![2.0, 2.0, -3.0, -3.0, 5.0], 3),  // (Z-2)^2 (Z+3)^2 (Z-5)
    ];
    for (roots, want) in cases {
        let p = vieta(&roots).unwrap();
        let chain = SturmChain::new(&p);
        assert_eq!(chain.distinct_real_roots(), want, "roots {roots:?}");
        let rep = is_hyperbolic(&p, 1e-12);
        assert!(rep.hyperbolic);
        assert_eq!(rep.distinct_real_roots, want);
    }
}

#[test]
fn translation_equivariance_of_roots() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..100 {
        let d = rng.gen_range(1..=6);
        let roots = random_roots(&mut rng, d);
        let c = rng.gen_range(-3.0..3.0);
        let p = vieta(&roots).unwrap();
        // P(Z - c) has roots shifted by +c
        let shifted = p.shift(-c);
        let got = ordered_roots(&shifted, 1e-12).unwrap();
        let base = ordered_roots(&p, 1e-12).unwrap();
        for (g, b) in got.as_slice().iter().zip(base.as_slice()) {
            assert!((g - (b + c)).abs() < 1e-8, "{g} vs {}", b + c);
        }
    }
}

#[test]
fn residual_scale_certificate_holds() {
    // post-condition of the root extraction: |P(r)| <= tol * max(1,B)^d
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..100 {
        let d = rng.gen_range(1..=8);
        let roots = random_roots(&mut rng, d);
        let p = vieta(&roots).unwrap();
        let tol = 1e-12;
        let got = ordered_roots(&p, tol).unwrap();
        let scale = p.cauchy_bound().max(1.0).powi(d as i32);
        for &r in got.as_slice() {
            assert!(p.eval(r).abs() <= tol * scale);
        }
    }
}
