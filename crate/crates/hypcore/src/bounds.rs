//! Derivative bounds for ordered-root curves: the coefficient-norm Lipschitz
//! bound, the pointwise window bound `A(delta)`, the local Glaeser and
//! interpolation inequalities, and the scan for parameters where a root
//! cluster collapses at an isolated point.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::curve::{
    ck_norm, fd_derivative, holder_seminorm, sup_norm, Interval, IntervalNest, SampledCurve,
};
use crate::error::{Error, Result};
use crate::math;
use crate::poly::PolyCoeffs;
use crate::sturm::ordered_roots;
use crate::tschirn::tschirnhausen;

/// `C^{k,1}` norm on `j`: the `C^k` norm plus the grid Lipschitz seminorm of
/// the `k`-th finite-difference derivative.
pub fn ck1_norm(c: &SampledCurve, k: usize, j: Interval) -> Result<f64> {
    let base = ck_norm(c, k, j)?;
    let dk = fd_derivative(c, k)?;
    let lip = holder_seminorm(&dk, 1.0, j)?;
    Ok(base + lip)
}

/// The Lipschitz bound for ordered roots of a hyperbolic coefficient curve:
/// `max(delta^-1, 1) * max_j ||a_j||_{C^{d-1,1}(outer)}^{1/j}`.
///
/// The degree constant in front is reported as 1; consumers fit it
/// empirically.
pub fn bronshtein_bound(a: &SampledCurve, nest: IntervalNest) -> Result<f64> {
    let d = a.dim();
    let delta = nest.delta();
    let mut worst = 0.0f64;
    for j in 1..=d {
        let comp = a.component(j - 1);
        let norm = ck1_norm(&comp, d - 1, nest.outer)?;
        worst = math::max(worst, math::powf(norm, 1.0 / j as f64));
    }
    Ok(math::max(1.0 / delta, 1.0) * worst)
}

/// The two window quantities behind the pointwise root-derivative bound at
/// `x0` with window radius `delta`, and their combination `a = 6 max(a1,a2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointwiseBoundReport {
    pub x0: f64,
    pub delta: f64,
    pub a1: f64,
    pub a2: f64,
    /// `6 * max(a1, a2)`
    pub a: f64,
    /// the quantity that bounds `|root'(x0)|` up to a degree constant
    /// (equal to `a`; kept separate so consumers can rescale it)
    pub lambda_prime_bound_factor: f64,
}

/// Evaluates the window bound for a centered coefficient curve (`dim = d`,
/// first component identically zero).
pub fn a_delta(t: &SampledCurve, x0: f64, delta: f64) -> Result<PointwiseBoundReport> {
    if !(delta > 0.0) {
        return Err(Error::Domain(format!("window radius must be > 0: {delta}")));
    }
    let d = t.dim();
    if d < 2 {
        return Err(Error::Domain("window bound needs degree >= 2".into()));
    }
    let window = Interval::new(x0 - delta, x0 + delta)?;
    let ix0 = t.grid().nearest_node(x0)?;
    t.grid().index_range(window)?; // window must sit inside the grid

    let c2 = t.component(1);
    let c2_at_x0 = math::abs(c2.value_scalar(ix0));
    let c2_prime = fd_derivative(&c2, 1)?;
    let a1 = math::max(
        math::sqrt(c2_at_x0) / delta,
        math::sqrt(holder_seminorm(&c2_prime, 1.0, window)?),
    );

    let c2_sup = sup_norm(&c2, window)?;
    let mut a2 = 0.0f64;
    for j in 2..=d {
        let comp = t.component(j - 1);
        let lip = holder_seminorm(&fd_derivative(&comp, d - 1)?, 1.0, window)?;
        let weight = math::powf(c2_sup, (d - j) as f64 / 2.0);
        a2 = math::max(a2, math::powf(lip * weight, 1.0 / d as f64));
    }

    let a = 6.0 * math::max(a1, a2);
    Ok(PointwiseBoundReport {
        x0,
        delta,
        a1,
        a2,
        a,
        lambda_prime_bound_factor: a,
    })
}

/// Local Glaeser inequality for a sign-definite scalar curve at `x0`.
///
/// Returns `(ineq1, ineq2)` where `ineq1` checks
/// `|f'(x0)| <= (M + M^-1 |f'|_{C^{0,1}(I0)}) |f(x0)|^{1/2}` on the window
/// `I0 = I(x0, M^-1 |f(x0)|^{1/2})`, and `ineq2` checks
/// `|f'(x0)| <= 2 M |f(x0)|^{1/2}` only when `|f'|_{C^{0,1}(I0)} <= M^2`.
pub fn glaeser_check(f: &SampledCurve, x0: f64, m: f64) -> Result<(bool, Option<bool>)> {
    if f.dim() != 1 {
        return Err(Error::Domain("Glaeser check needs a scalar curve".into()));
    }
    if !(m > 0.0) {
        return Err(Error::Domain(format!("M must be positive, got {m}")));
    }
    let nodes = f.grid().num_nodes();
    let mut has_pos = false;
    let mut has_neg = false;
    for i in 0..nodes {
        let v = f.value_scalar(i);
        has_pos |= v > 0.0;
        has_neg |= v < 0.0;
    }
    if has_pos && has_neg {
        return Err(Error::Domain("curve is not sign-definite".into()));
    }

    let ix0 = f.grid().nearest_node(x0)?;
    let fx0 = math::abs(f.value_scalar(ix0));
    let radius = math::sqrt(fx0) / m;
    let fd = fd_derivative(f, 1)?;
    let fp_x0 = math::abs(fd.value_scalar(ix0));

    let lip = if radius > f.grid().h() {
        let window = Interval::new(x0 - radius, x0 + radius)?;
        f.grid().index_range(window)?; // must fit in the grid
        holder_seminorm(&fd, 1.0, window)?
    } else {
        0.0 // the window contains a single node
    };

    let slack = 1e-12;
    let ineq1 = fp_x0 <= (m + lip / m) * math::sqrt(fx0) + slack;
    let ineq2 = if lip <= m * m {
        Some(fp_x0 <= 2.0 * m * math::sqrt(fx0) + slack)
    } else {
        None
    };
    Ok((ineq1, ineq2))
}

/// Worst ratio of the interpolation inequality for intermediate derivatives:
/// `max_{1<=j<=k} sup |f^(j)| / (|J|^{-j} (sup|f| + |f^(k)|_{C^{0,1}} |J|^{k+1}))`.
///
/// The unknown constant in the inequality means tests assert stability of the
/// ratio across a family rather than an absolute threshold.
pub fn interpolation_check(f: &SampledCurve, k: usize, j: Interval) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain("interpolation check needs k >= 1".into()));
    }
    let len = j.length();
    let sup_f = sup_norm(f, j)?;
    let lip_k = holder_seminorm(&fd_derivative(f, k)?, 1.0, j)?;
    let mut worst = 0.0f64;
    for order in 1..=k {
        let dj = fd_derivative(f, order)?;
        let sup_dj = sup_norm(&dj, j)?;
        let denom = math::powf(len, -(order as f64))
            * (sup_f + lip_k * math::powf(len, (k + 1) as f64));
        if denom > 0.0 {
            worst = math::max(worst, sup_dj / denom);
        } else if sup_dj > 0.0 {
            worst = f64::INFINITY;
        }
    }
    Ok(worst)
}

/// Result of [`collapse_scan`]: grid components where the centered second
/// coefficient (numerically) vanishes, which of them are isolated single
/// nodes, and all candidate isolated-collapse nodes (from the direct scan and from
/// collapsed clusters inside a full numerical splitting).
#[derive(Debug, Clone, PartialEq)]
pub struct CollapseScan {
    /// inclusive node-index ranges with `|c_2| <= tau_zero`
    pub zero_components: Vec<(usize, usize)>,
    /// per component: single interior node with sign-definite neighbors
    pub isolated_flags: Vec<bool>,
    /// candidate isolated-collapse node indices, sorted
    pub candidates: Vec<usize>,
}

/// Groups flagged nodes into maximal runs.
fn components(flags: &[bool]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, &f) in flags.iter().enumerate() {
        match (f, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                out.push((s, i - 1));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, flags.len() - 1));
    }
    out
}

fn isolated(range: (usize, usize), last: usize) -> bool {
    range.0 == range.1 && range.0 > 0 && range.1 < last
}

/// Scans a centered hyperbolic coefficient curve for nodes where either the
/// second coefficient has an isolated single-node zero, or — away from its
/// zero set — some factor of the full numerical splitting has one (all roots
/// of a sub-cluster coincide at that node only).
pub fn collapse_scan(
    t: &SampledCurve,
    tau_zero: f64,
    split_tol: f64,
) -> Result<CollapseScan> {
    let d = t.dim();
    if d < 2 {
        return Err(Error::Domain("scan needs degree >= 2".into()));
    }
    let nodes = t.grid().num_nodes();
    let last = nodes - 1;
    let c2_flag: Vec<bool> = (0..nodes)
        .map(|i| math::abs(t.value(i)[1]) <= tau_zero)
        .collect();
    let zero_components = components(&c2_flag);
    let isolated_flags: Vec<bool> = zero_components
        .iter()
        .map(|&r| isolated(r, last))
        .collect();

    let mut candidates: Vec<usize> = zero_components
        .iter()
        .zip(&isolated_flags)
        .filter(|(_, &iso)| iso)
        .map(|(&(s, _), _)| s)
        .collect();

    // away from the zero set of c_2, look for collapsed clusters of the full
    // numerical splitting: beta = min |b_2| over sub-clusters of size >= 2
    let mut beta_flag = vec![false; nodes];
    for i in 0..nodes {
        if c2_flag[i] {
            continue;
        }
        let p = PolyCoeffs::new(t.value(i).to_vec())?;
        let roots = ordered_roots(&p, 1e-12)?;
        let beta = min_cluster_b2(roots.as_slice(), split_tol);
        beta_flag[i] = beta <= tau_zero;
    }
    for range in components(&beta_flag) {
        if isolated(range, last) && !c2_flag[range.0] {
            candidates.push(range.0);
        }
    }
    candidates.sort_unstable();
    candidates.dedup();
    Ok(CollapseScan {
        zero_components,
        isolated_flags,
        candidates,
    })
}

/// Recursively splits a sorted root slice at maximal gaps until no gap
/// exceeds `tol * (1 + spread)` and returns the smallest `|b_2|` (centered
/// second coefficient) over terminal clusters of size >= 2.
fn min_cluster_b2(roots: &[f64], tol: f64) -> f64 {
    if roots.len() < 2 {
        return f64::INFINITY;
    }
    let spread = roots[roots.len() - 1] - roots[0];
    let mut k_best = 0;
    let mut g_best = -1.0;
    for k in 0..roots.len() - 1 {
        let g = roots[k + 1] - roots[k];
        if g > g_best {
            g_best = g;
            k_best = k;
        }
    }
    if g_best > tol * (1.0 + spread) {
        math::min(
            min_cluster_b2(&roots[..=k_best], tol),
            min_cluster_b2(&roots[k_best + 1..], tol),
        )
    } else {
        // terminal cluster: b_2 = -1/2 sum (r - mean)^2
        let mean = roots.iter().sum::<f64>() / roots.len() as f64;
        let b2 = -0.5 * roots.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>();
        math::abs(b2)
    }
}

/// Per-node Tschirnhausen transform of a coefficient curve: returns the
/// centered coefficient curve (same dimension, first component exactly zero)
/// and the scalar shift curve.
pub fn tschirn_curve(a: &SampledCurve) -> Result<(SampledCurve, SampledCurve)> {
    let d = a.dim();
    let nodes = a.grid().num_nodes();
    let mut centered = Vec::with_capacity(nodes * d);
    let mut shifts = Vec::with_capacity(nodes);
    for i in 0..nodes {
        let p = PolyCoeffs::new(a.value(i).to_vec())?;
        let t = tschirnhausen(&p);
        centered.push(0.0);
        centered.extend_from_slice(t.coeffs());
        shifts.push(t.shift);
    }
    Ok((
        SampledCurve::from_values(*a.grid(), d, centered, crate::curve::CurveKind::Coefficients)?,
        SampledCurve::from_values(*a.grid(), 1, shifts, crate::curve::CurveKind::Scalar)?,
    ))
}

/// Ordered-root curve of a hyperbolic coefficient curve; fails with the node
/// location when some node is not hyperbolic.
pub fn roots_curve(a: &SampledCurve, tol: f64) -> Result<SampledCurve> {
    let nodes = a.grid().num_nodes();
    let mut roots = Vec::with_capacity(nodes);
    for i in 0..nodes {
        let p = PolyCoeffs::new(a.value(i).to_vec())?;
        let r = ordered_roots(&p, tol).map_err(|e| match e {
            Error::Hyperbolicity { .. } => Error::Hyperbolicity {
                distinct: i,
                total_multiplicity: 0,
                degree: p.degree(),
            },
            other => Error::Internal(format!(
                "root extraction failed at node {i} (x = {}): {other}",
                a.grid().node(i)
            )),
        })?;
        roots.push(r);
    }
    SampledCurve::from_root_vectors(*a.grid(), &roots)
}
