//! Experiment-level behavior of the shipped regularized-crossing family:
//! Sobolev decay against its closed form, the persistent Lipschitz gap, the
//! derivative-functional convergence, and zero-set areas under the
//! separation operator.

use hypcore::curve::{lq_norm, Grid, Interval, SampledCurve};
use hyplab::{parse_spec, run_convergence, run_nuij, FamilySpec, RunConfig};

const SQRT2: f64 = std::f64::consts::SQRT_2;

fn family(grid: usize, ns: &str) -> FamilySpec {
    let text = format!(
        "degree = 2\ninterval = -2, 2\nouter = -1.5, 1.5\ninner = -1, 1\ngrid = {grid}\n\
         ns = {ns}\nqs = 1, 2\ngammas = 0.5, 1\nmode = coefficients\n\
         coeff.1 = 0\ncoeff.2 = -(x^2 + 1/n^2)\nlimit.coeff.1 = 0\nlimit.coeff.2 = -(x^2)\n"
    );
    parse_spec(&text, "mem").unwrap()
}

#[test]
fn sobolev_columns_decay_and_match_the_closed_form_ratio() {
    let spec = family(2048, "1, 2, 4, 8, 16, 32, 64");
    let res = run_convergence(&spec, &RunConfig::default()).unwrap();
    for q in [1.0, 2.0] {
        let values: Vec<f64> = spec
            .ns
            .iter()
            .map(|&n| res.value("w1q_diff", n, Some(q)).unwrap())
            .collect();
        assert!(
            values.windows(2).all(|w| w[1] < w[0]),
            "q={q}: column not decreasing: {values:?}"
        );
    }
    // the q = 1 terminal ratio has a closed form:
    // (||g||_1 + ||g'||_1)(64) / (same)(1) with
    // ||g||_1 = a^2 asinh(1/a) + sqrt(1+a^2) - 1 over [-1,1] and
    // ||g'||_1 = 2(1+a-sqrt(1+a^2))
    let closed = |a: f64| {
        (a * a * (1.0 / a).asinh() + (1.0 + a * a).sqrt() - 1.0)
            + 2.0 * (1.0 + a - (1.0 + a * a).sqrt())
    };
    let want = closed(1.0 / 64.0) / closed(1.0);
    let got = res.value("w1q_diff", 64, Some(1.0)).unwrap()
        / res.value("w1q_diff", 1, Some(1.0)).unwrap();
    assert!(
        (got - want).abs() < 5e-4,
        "terminal W^{{1,1}} ratio {got:.6} vs closed form {want:.6}"
    );
}

#[test]
fn lipschitz_column_never_drops_below_the_gap() {
    let spec = family(2048, "1, 2, 4, 8, 16, 32, 64");
    let res = run_convergence(&spec, &RunConfig::default()).unwrap();
    let floor = 2.0 - SQRT2 - 1e-6;
    for &n in &spec.ns {
        let v = res.value("lip_diff", n, Some(1.0)).unwrap();
        assert!(v >= floor, "n={n}: {v} < {floor}");
    }
}

#[test]
fn regularized_roots_have_unit_lipschitz_bound() {
    // each root section of the regularized family has |derivative| < 1, so
    // every per-root grid quotient stays at or below 1
    let grid = Grid::new(-2.0, 2.0, 2048).unwrap();
    let inner = Interval::new(-1.0, 1.0).unwrap();
    for n in [1u32, 4, 16, 64] {
        let nf = f64::from(n);
        for sign in [-1.0f64, 1.0] {
            let curve = SampledCurve::from_scalar_fn(grid, |x| {
                sign * (x * x + 1.0 / (nf * nf)).sqrt()
            })
            .unwrap();
            let quot = hypcore::curve::max_difference_quotient(&curve, inner).unwrap();
            assert!(quot <= 1.0 + 1e-9, "n={n}: quotient {quot}");
        }
    }
}

#[test]
fn derivative_functional_converges_with_its_closed_form() {
    // R(X1, X2) = X1 X2 applied to the ordered-root derivatives: the L^1
    // difference against the limit family is 2a arctan(1/a), a = 1/n
    let grid = Grid::new(-1.0, 1.0, 4096).unwrap();
    let limit_prod = {
        let c = SampledCurve::from_scalar_fn(grid, |x| x.abs()).unwrap();
        let fd = hypcore::curve::fd_derivative(&c, 1).unwrap();
        // product of the two root derivatives (-f)' * f' = -(f')^2
        let vals: Vec<f64> = (0..grid.num_nodes())
            .map(|i| -fd.value_scalar(i) * fd.value_scalar(i))
            .collect();
        SampledCurve::from_values(grid, 1, vals, hypcore::curve::CurveKind::Scalar).unwrap()
    };
    let mut prev = f64::INFINITY;
    for n in [1u32, 4, 16, 64] {
        let nf = f64::from(n);
        let c =
            SampledCurve::from_scalar_fn(grid, |x| (x * x + 1.0 / (nf * nf)).sqrt()).unwrap();
        let fd = hypcore::curve::fd_derivative(&c, 1).unwrap();
        let vals: Vec<f64> = (0..grid.num_nodes())
            .map(|i| -fd.value_scalar(i) * fd.value_scalar(i))
            .collect();
        let prod =
            SampledCurve::from_values(grid, 1, vals, hypcore::curve::CurveKind::Scalar).unwrap();
        let diff = limit_prod.sub(&prod).unwrap();
        let got = lq_norm(&diff, 1.0, grid.interval()).unwrap();
        let a = 1.0 / nf;
        let want = 2.0 * a * (1.0 / a).atan();
        assert!((got - want).abs() < 2e-3, "n={n}: {got} vs {want}");
        assert!(got < prev, "L^1 distance must decrease");
        prev = got;
    }
}

#[test]
fn separation_run_reports_gaps_and_area_limit() {
    let spec = family(1024, "1");
    let s_list = [0.1, 0.01, 0.001];
    let res = run_nuij(&spec, &s_list, &RunConfig::default()).unwrap();
    // strict separation scales with s
    let mut prev_gap = f64::INFINITY;
    for (idx, &s) in s_list.iter().enumerate() {
        let n = (idx + 1) as u32;
        assert_eq!(res.value("s_value", n, None).unwrap(), s);
        let gap = res.value("min_root_gap", n, None).unwrap();
        assert!(gap > 0.0, "s={s}");
        assert!(gap >= 1.5 * s, "s={s}: gap {gap}");
        assert!(gap < prev_gap);
        prev_gap = gap;
    }
    // the perturbed zero-set areas increase toward the limit configuration
    // (two V-graphs of total area 4 sqrt(2)) as s shrinks, staying below it
    let limit_area = 4.0 * SQRT2;
    let mut prev = 0.0;
    for idx in 1..=3u32 {
        let area = res.value("zero_set_area", idx, None).unwrap();
        assert!(area > prev, "areas must grow as s shrinks");
        assert!(area <= limit_area + 1e-6);
        prev = area;
    }
    assert!((prev - limit_area).abs() < 0.02, "{prev} vs {limit_area}");
    // coefficient C^d distance decays with s
    let c1 = res.value("cd_coeff_diff", 1, None).unwrap();
    let c3 = res.value("cd_coeff_diff", 3, None).unwrap();
    assert!(c3 < c1 / 50.0, "{c3} vs {c1}");
}

#[test]
fn energy_rows_converge_to_the_limit_energy() {
    let spec = family(2048, "1, 4, 16, 64");
    let res = run_convergence(&spec, &RunConfig::default()).unwrap();
    // the limit roots (-|x|, |x|) have unit speed: E_q over [-1,1] is 2
    for q in [1.0, 2.0] {
        let e = res.value("energy", 0, Some(q)).unwrap();
        assert!((e - 2.0).abs() < 1e-9, "q={q}: {e}");
    }
    let d1 = res.value("energy_diff", 1, Some(1.0)).unwrap();
    let d64 = res.value("energy_diff", 64, Some(1.0)).unwrap();
    assert!(d64 < 0.05 * d1, "{d64} vs {d1}");
}
