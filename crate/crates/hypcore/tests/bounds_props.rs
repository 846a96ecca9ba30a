//! Window-bound domination at non-collapsed nodes, Lipschitz h-stability of
//! ordered-root curves, and coefficient-bound sanity.

use hypcore::bounds::{a_delta, bronshtein_bound, collapse_scan, roots_curve, tschirn_curve};
use hypcore::curve::{
    first_derivative, holder_seminorm, Grid, Interval, IntervalNest, SampledCurve,
};
use hypcore::poly::vieta;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// Smooth low-degree family with crossings: sections are polynomials of x.
fn family_curve(rng: &mut ChaCha8Rng, d: usize, grid: Grid) -> SampledCurve {
    let coeffs: Vec<[f64; 3]> = (0..d)
        .map(|_| {
            [
                rng.gen_range(-1.5..1.5),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ]
        })
        .collect();
    let mut polys = Vec::with_capacity(grid.num_nodes());
    for i in 0..grid.num_nodes() {
        let x = grid.node(i);
        let roots: Vec<f64> = coeffs
            .iter()
            .map(|c| c[0] + c[1] * x + c[2] * x * x)
            .collect();
        polys.push(vieta(&roots).unwrap());
    }
    SampledCurve::from_polys(grid, &polys).unwrap()
}

#[test]
fn window_bound_dominates_at_non_collapsed_nodes() {
    // |(ordered root)'(x0)| <= kappa * A(delta) away from collapse
    // candidates, with one fitted kappa per degree
    let grid = Grid::new(-1.5, 1.5, 512).unwrap();
    let delta = 0.25;
    let mut rng = ChaCha8Rng::seed_from_u64(97);
    for d in [2usize, 3] {
        let mut kappa = 0.0f64;
        for _ in 0..8 {
            let a = family_curve(&mut rng, d, grid);
            let (t, _) = tschirn_curve(&a).unwrap();
            let t_roots = roots_curve(&t, 1e-12).unwrap();
            let fd = first_derivative(&t_roots).unwrap();
            let scan = collapse_scan(&t, 1e-10, 1e-6).unwrap();
            let (i0, i1) = grid
                .index_range(Interval::new(-1.0, 1.0).unwrap())
                .unwrap();
            for i in i0..=i1 {
                if scan.candidates.contains(&i) {
                    continue;
                }
                let x0 = grid.node(i);
                let rep = a_delta(&t, x0, delta).unwrap();
                let speed = fd.ae_norm(i);
                if rep.a > 1e-12 {
                    kappa = kappa.max(speed / rep.a);
                } else {
                    // a vanishing window bound forces a vanishing derivative
                    assert!(speed < 1e-6, "node {i}: speed {speed} with zero bound");
                }
            }
        }
        assert!(kappa.is_finite() && kappa > 0.0, "d={d}: kappa={kappa}");
    }
}

#[test]
fn root_curve_lipschitz_seminorm_is_h_stable() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for d in [2usize, 3, 4] {
        // same family on a grid and its refinement
        let coarse = Grid::new(-1.5, 1.5, 512).unwrap();
        let fine = Grid::new(-1.5, 1.5, 1024).unwrap();
        let seed_state = rng.clone();
        let a1 = family_curve(&mut rng, d, coarse);
        let mut rng2 = seed_state;
        let a2 = family_curve(&mut rng2, d, fine);
        let j = Interval::new(-1.0, 1.0).unwrap();
        let l1 = holder_seminorm(&roots_curve(&a1, 1e-12).unwrap(), 1.0, j).unwrap();
        let l2 = holder_seminorm(&roots_curve(&a2, 1e-12).unwrap(), 1.0, j).unwrap();
        assert!(l1.is_finite() && l2.is_finite());
        assert!(
            (l1 - l2).abs() <= 0.2 * l1.max(l2),
            "d={d}: {l1} vs {l2} not h-stable"
        );
    }
}

#[test]
fn bound_is_positive_for_constant_families() {
    // constant hyperbolic coefficients: roots constant, any positive bound
    // is consistent
    let grid = Grid::new(-2.0, 2.0, 256).unwrap();
    let p = vieta(&[-1.0, 0.5, 2.0]).unwrap();
    let polys = vec![p; grid.num_nodes()];
    let a = SampledCurve::from_polys(grid, &polys).unwrap();
    let nest = IntervalNest::new(
        Interval::new(-1.0, 1.0).unwrap(),
        Interval::new(-1.5, 1.5).unwrap(),
    )
    .unwrap();
    let bound = bronshtein_bound(&a, nest).unwrap();
    assert!(bound > 0.0);
    let roots = roots_curve(&a, 1e-12).unwrap();
    let quot =
        hypcore::curve::max_difference_quotient(&roots, nest.inner).unwrap();
    assert!(quot <= 1e-10, "constant roots must have zero quotients");
}
