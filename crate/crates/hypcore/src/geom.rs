//! Jacobian-minor norms and graph surface areas of ordered-root fields over
//! one- and two-parameter boxes.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::curve::{Grid, SampledCurve};
use crate::error::{Error, Result};
use crate::math;

const KINK_FACTOR: f64 = 10.0;
const SHEET_MERGE_FACTOR: f64 = 10.0;

/// A vector-valued field (typically ordered roots) sampled on a uniform grid
/// over an interval (`m = 1`) or a rectangle (`m = 2`).
#[derive(Debug, Clone, PartialEq)]
pub struct SampledField {
    xgrid: Grid,
    ygrid: Option<Grid>,
    d: usize,
    /// row-major over (iy, ix), then component
    values: Vec<f64>,
}

impl SampledField {
    pub fn new_1d(xgrid: Grid, d: usize, values: Vec<f64>) -> Result<Self> {
        if d == 0 || values.len() != xgrid.num_nodes() * d {
            return Err(Error::Grid("value count mismatch".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("non-finite sample".into()));
        }
        Ok(Self {
            xgrid,
            ygrid: None,
            d,
            values,
        })
    }

    pub fn new_2d(xgrid: Grid, ygrid: Grid, d: usize, values: Vec<f64>) -> Result<Self> {
        if d == 0 || values.len() != xgrid.num_nodes() * ygrid.num_nodes() * d {
            return Err(Error::Grid("value count mismatch".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("non-finite sample".into()));
        }
        Ok(Self {
            xgrid,
            ygrid: Some(ygrid),
            d,
            values,
        })
    }

    pub fn from_fn_1d(xgrid: Grid, d: usize, f: impl Fn(f64) -> Vec<f64>) -> Result<Self> {
        let mut values = Vec::with_capacity(xgrid.num_nodes() * d);
        for i in 0..xgrid.num_nodes() {
            let v = f(xgrid.node(i));
            if v.len() != d {
                return Err(Error::Domain("field function arity mismatch".into()));
            }
            values.extend_from_slice(&v);
        }
        Self::new_1d(xgrid, d, values)
    }

    pub fn from_fn_2d(
        xgrid: Grid,
        ygrid: Grid,
        d: usize,
        f: impl Fn(f64, f64) -> Vec<f64>,
    ) -> Result<Self> {
        let mut values = Vec::with_capacity(xgrid.num_nodes() * ygrid.num_nodes() * d);
        for iy in 0..ygrid.num_nodes() {
            for ix in 0..xgrid.num_nodes() {
                let v = f(xgrid.node(ix), ygrid.node(iy));
                if v.len() != d {
                    return Err(Error::Domain("field function arity mismatch".into()));
                }
                values.extend_from_slice(&v);
            }
        }
        Self::new_2d(xgrid, ygrid, d, values)
    }

    /// Reinterprets an ordered-root curve as a 1-parameter field.
    pub fn from_curve(c: &SampledCurve) -> Self {
        let nodes = c.grid().num_nodes();
        let mut values = Vec::with_capacity(nodes * c.dim());
        for i in 0..nodes {
            values.extend_from_slice(c.value(i));
        }
        Self {
            xgrid: *c.grid(),
            ygrid: None,
            d: c.dim(),
            values,
        }
    }

    /// Number of parameters (1 or 2).
    pub fn m(&self) -> usize {
        if self.ygrid.is_some() {
            2
        } else {
            1
        }
    }

    pub fn components(&self) -> usize {
        self.d
    }

    fn nx(&self) -> usize {
        self.xgrid.num_nodes()
    }

    fn ny(&self) -> usize {
        self.ygrid.map_or(1, |g| g.num_nodes())
    }

    fn value(&self, ix: usize, iy: usize) -> &[f64] {
        let idx = (iy * self.nx() + ix) * self.d;
        &self.values[idx..idx + self.d]
    }

    /// Measure of the base box.
    pub fn base_measure(&self) -> f64 {
        let lx = self.xgrid.interval().length();
        match self.ygrid {
            Some(g) => lx * g.interval().length(),
            None => lx,
        }
    }
}

/// One-sided and central partial derivatives along one axis, per node and
/// component, with a per-node kink flag where the sides disagree.
struct AxisDeriv {
    central: Vec<f64>,
    left: Vec<f64>,
    right: Vec<f64>,
    kink: Vec<bool>,
}

fn axis_derivative(field: &SampledField, axis: usize) -> Result<AxisDeriv> {
    let (nx, ny, d) = (field.nx(), field.ny(), field.d);
    let (len, h) = if axis == 0 {
        (nx, field.xgrid.h())
    } else {
        (
            ny,
            field
                .ygrid
                .ok_or_else(|| Error::Grid("no second axis".into()))?
                .h(),
        )
    };
    if len < 3 {
        return Err(Error::Grid("need at least 3 nodes per axis".into()));
    }
    let nodes = nx * ny;
    let mut central = vec![0.0; nodes * d];
    let mut left = vec![0.0; nodes * d];
    let mut right = vec![0.0; nodes * d];
    let mut kink = vec![false; nodes];

    let at = |ix: usize, iy: usize, k: usize| field.value(ix, iy)[k];
    for iy in 0..ny {
        for ix in 0..nx {
            let pos = if axis == 0 { ix } else { iy };
            let node = iy * nx + ix;
            let mut disagree2 = 0.0;
            for k in 0..d {
                let fetch = |p: usize| -> f64 {
                    if axis == 0 {
                        at(p, iy, k)
                    } else {
                        at(ix, p, k)
                    }
                };
                let cen = if pos >= 1 && pos + 1 < len {
                    (fetch(pos + 1) - fetch(pos - 1)) / (2.0 * h)
                } else if pos == 0 {
                    (-3.0 * fetch(0) + 4.0 * fetch(1) - fetch(2)) / (2.0 * h)
                } else {
                    (3.0 * fetch(pos) - 4.0 * fetch(pos - 1) + fetch(pos - 2)) / (2.0 * h)
                };
                // single-cell quotients so a crossing touches only its node
                let bwd = (pos >= 1).then(|| (fetch(pos) - fetch(pos - 1)) / h);
                let fwd = (pos + 1 < len).then(|| (fetch(pos + 1) - fetch(pos)) / h);
                let l = bwd.or(fwd).expect("len >= 3");
                let r = fwd.or(bwd).expect("len >= 3");
                central[node * d + k] = cen;
                left[node * d + k] = l;
                right[node * d + k] = r;
                let dd = l - r;
                disagree2 += dd * dd;
            }
            kink[node] = math::sqrt(disagree2) > KINK_FACTOR * h;
        }
    }
    Ok(AxisDeriv {
        central,
        left,
        right,
        kink,
    })
}

/// Tensor trapezoid integral of a per-node integrand.
fn trapezoid(field: &SampledField, integrand: &[f64]) -> f64 {
    let (nx, ny) = (field.nx(), field.ny());
    let hx = field.xgrid.h();
    let hy = field.ygrid.map_or(1.0, |g| g.h());
    let mut acc = 0.0;
    for iy in 0..ny {
        let wy = if field.ygrid.is_some() && (iy == 0 || iy == ny - 1) {
            0.5
        } else {
            1.0
        };
        for ix in 0..nx {
            let wx = if ix == 0 || ix == nx - 1 { 0.5 } else { 1.0 };
            acc += wx * wy * integrand[iy * nx + ix];
        }
    }
    acc * hx * hy
}

/// Evaluates `g` on every sided combination of the per-axis derivatives at a
/// node (two options per kinked axis, the central value otherwise) and
/// averages, matching the almost-everywhere convention at root crossings.
fn sided_average(
    derivs: &[AxisDeriv],
    node: usize,
    d: usize,
    g: &mut dyn FnMut(&[&[f64]]) -> f64,
) -> f64 {
    let m = derivs.len();
    let mut total = 0.0;
    let mut count = 0.0;
    let combos = 1usize << m;
    let mut rows: Vec<&[f64]> = Vec::with_capacity(m);
    for mask in 0..combos {
        let mut skip = false;
        rows.clear();
        for (axis, dv) in derivs.iter().enumerate() {
            let pick_right = mask & (1 << axis) != 0;
            if dv.kink[node] {
                let src = if pick_right { &dv.right } else { &dv.left };
                rows.push(&src[node * d..(node + 1) * d]);
            } else {
                if pick_right {
                    // only one combination for a smooth axis
                    skip = true;
                    break;
                }
                rows.push(&dv.central[node * d..(node + 1) * d]);
            }
        }
        if skip {
            continue;
        }
        total += g(&rows);
        count += 1.0;
    }
    total / count
}

/// `L^q` norm over the base box of the root-sum-square of all `k x k` minors
/// (`k = min(m, d)`) of the derivative matrix of the field.
pub fn jacobian_minor_norm(field: &SampledField, q: f64) -> Result<f64> {
    if !(q >= 1.0 && q.is_finite()) {
        return Err(Error::Domain(format!("invalid exponent q = {q}")));
    }
    let m = field.m();
    let d = field.d;
    let mut derivs = Vec::with_capacity(m);
    for axis in 0..m {
        derivs.push(axis_derivative(field, axis)?);
    }
    let nodes = field.nx() * field.ny();
    let mut integrand = vec![0.0; nodes];
    let k = m.min(d);
    for (node, out) in integrand.iter_mut().enumerate() {
        let mut g = |rows: &[&[f64]]| -> f64 {
            let mut sum = 0.0;
            if k == 1 {
                // minors are the single entries
                for row in rows {
                    for &v in row.iter() {
                        sum += v * v;
                    }
                }
            } else {
                // m = d = 2 ... k = 2: determinants over column pairs
                let (r0, r1) = (rows[0], rows[1]);
                for j1 in 0..d {
                    for j2 in j1 + 1..d {
                        let det = r0[j1] * r1[j2] - r0[j2] * r1[j1];
                        sum += det * det;
                    }
                }
            }
            math::sqrt(sum)
        };
        let jf = sided_average(&derivs, node, d, &mut g);
        *out = math::powf(jf, q);
    }
    Ok(math::powf(trapezoid(field, &integrand), 1.0 / q))
}

/// Surface area of the graph of root sheet `j` (0-based) over the base box:
/// the integral of `sqrt(1 + sum_i (d_i lambda_j)^2)` (arc length for
/// `m = 1`).
pub fn graph_area(field: &SampledField, j: usize) -> Result<f64> {
    if j >= field.d {
        return Err(Error::Domain(format!(
            "root index {j} out of range for {} sheets",
            field.d
        )));
    }
    let m = field.m();
    let d = field.d;
    let mut derivs = Vec::with_capacity(m);
    for axis in 0..m {
        derivs.push(axis_derivative(field, axis)?);
    }
    let nodes = field.nx() * field.ny();
    let mut integrand = vec![0.0; nodes];
    for (node, out) in integrand.iter_mut().enumerate() {
        let mut g = |rows: &[&[f64]]| -> f64 {
            let mut sum = 1.0;
            for row in rows {
                sum += row[j] * row[j];
            }
            math::sqrt(sum)
        };
        *out = sided_average(&derivs, node, d, &mut g);
    }
    Ok(trapezoid(field, &integrand))
}

/// Area estimate of the full zero set (union of all root graphs).
///
/// With `distinct = true` all sheets are assumed separated and their graph
/// areas are summed. Otherwise sheets that stay within `10 h` of each other
/// everywhere are counted once; partial tangencies are still double-counted,
/// so the estimate is documented as biased for merged configurations.
pub fn zero_set_area(field: &SampledField, distinct: bool) -> Result<f64> {
    let d = field.d;
    if distinct {
        let mut total = 0.0;
        for j in 0..d {
            total += graph_area(field, j)?;
        }
        return Ok(total);
    }
    let hmax = math::max(field.xgrid.h(), field.ygrid.map_or(0.0, |g| g.h()));
    let tol = SHEET_MERGE_FACTOR * hmax;
    // group consecutive sheets whose sup distance is below tol
    let nodes = field.nx() * field.ny();
    let mut total = 0.0;
    let mut j = 0;
    while j < d {
        let mut k = j;
        while k + 1 < d {
            let mut sup = 0.0f64;
            for node in 0..nodes {
                let ix = node % field.nx();
                let iy = node / field.nx();
                let v = field.value(ix, iy);
                sup = math::max(sup, math::abs(v[k + 1] - v[k]));
            }
            if sup < tol {
                k += 1;
            } else {
                break;
            }
        }
        total += graph_area(field, j)?;
        j = k + 1;
    }
    Ok(total)
}

/// Per-sheet graph areas and Jacobian-minor `L^q` norms in one bundle.
#[derive(Debug, Clone, PartialEq)]
pub struct AreaReport {
    pub per_root_area: Vec<f64>,
    pub jacobian_norm_lq: Vec<(f64, f64)>,
}

pub fn area_report(field: &SampledField, qs: &[f64]) -> Result<AreaReport> {
    let mut per_root_area = Vec::with_capacity(field.d);
    for j in 0..field.d {
        per_root_area.push(graph_area(field, j)?);
    }
    let mut jacobian_norm_lq = Vec::with_capacity(qs.len());
    for &q in qs {
        jacobian_norm_lq.push((q, jacobian_minor_norm(field, q)?));
    }
    Ok(AreaReport {
        per_root_area,
        jacobian_norm_lq,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(lo: f64, hi: f64, n: usize) -> Grid {
        Grid::new(lo, hi, n).unwrap()
    }

    #[test]
    fn identity_sheet_has_unit_jacobian() {
        let f = SampledField::from_fn_1d(grid(0.0, 1.0, 100), 1, |x| alloc::vec![x]).unwrap();
        for q in [1.0, 2.0, 3.0] {
            let v = jacobian_minor_norm(&f, q).unwrap();
            assert!((v - 1.0).abs() < 1e-12, "q={q}: {v}");
        }
    }

    #[test]
    fn crossing_sheets_jacobian() {
        // (-|x|, |x|) on [-1,1]: |Jf| = sqrt(2) a.e., L^1 norm 2 sqrt(2)
        let f = SampledField::from_fn_1d(grid(-1.0, 1.0, 256), 2, |x| {
            alloc::vec![-x.abs(), x.abs()]
        })
        .unwrap();
        let v = jacobian_minor_norm(&f, 1.0).unwrap();
        assert!((v - 2.0 * 2.0f64.sqrt()).abs() < 1e-9, "{v}");
        // constant field
        let c = SampledField::from_fn_1d(grid(-1.0, 1.0, 64), 2, |_| alloc::vec![0.0, 1.0])
            .unwrap();
        assert_eq!(jacobian_minor_norm(&c, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn graph_area_examples() {
        // |x| on [-1,1]: two unit-slope segments
        let f =
            SampledField::from_fn_1d(grid(-1.0, 1.0, 256), 1, |x| alloc::vec![x.abs()]).unwrap();
        let a = graph_area(&f, 0).unwrap();
        assert!((a - 2.0 * 2.0f64.sqrt()).abs() < 1e-9, "{a}");
        // flat sheet over a box
        let f = SampledField::from_fn_2d(grid(0.0, 2.0, 32), grid(0.0, 3.0, 32), 1, |_, _| {
            alloc::vec![7.0]
        })
        .unwrap();
        let a = graph_area(&f, 0).unwrap();
        assert!((a - 6.0).abs() < 1e-9, "{a}");
    }

    #[test]
    fn affine_sheets_are_exact() {
        let alpha = 1.75;
        let f = SampledField::from_fn_1d(grid(0.0, 1.0, 100), 1, |x| alloc::vec![alpha * x + 0.3])
            .unwrap();
        let a = graph_area(&f, 0).unwrap();
        assert!((a - (1.0 + alpha * alpha).sqrt()).abs() < 1e-10, "{a}");
        // affine sheet over a box: area = sqrt(1 + |grad|^2) * |box|
        let f = SampledField::from_fn_2d(grid(0.0, 1.0, 40), grid(0.0, 1.0, 40), 1, |x, y| {
            alloc::vec![x + 2.0 * y]
        })
        .unwrap();
        let a = graph_area(&f, 0).unwrap();
        assert!((a - 6.0f64.sqrt()).abs() < 1e-9, "{a}");
    }

    #[test]
    fn two_parameter_identity_pair() {
        // sorted sheets (x - 5, y + 5) over the unit box: the only 2x2 minor
        // is the identity determinant
        let f = SampledField::from_fn_2d(grid(0.0, 1.0, 24), grid(0.0, 1.0, 24), 2, |x, y| {
            alloc::vec![x - 5.0, y + 5.0]
        })
        .unwrap();
        let v = jacobian_minor_norm(&f, 1.0).unwrap();
        assert!((v - 1.0).abs() < 1e-10, "{v}");
    }

    #[test]
    fn zero_set_area_examples() {
        // Z^2 - x^2: two V-graphs meeting at one point; sheets separate
        let f = SampledField::from_fn_1d(grid(-1.0, 1.0, 512), 2, |x| {
            alloc::vec![-x.abs(), x.abs()]
        })
        .unwrap();
        let a = zero_set_area(&f, false).unwrap();
        assert!((a - 4.0 * 2.0f64.sqrt()).abs() < 1e-8, "{a}");
        // a single sheet equals its graph area
        let f =
            SampledField::from_fn_1d(grid(0.0, 1.0, 64), 1, |x| alloc::vec![2.0 * x]).unwrap();
        assert_eq!(
            zero_set_area(&f, false).unwrap(),
            graph_area(&f, 0).unwrap()
        );
        // exactly coincident sheets merge
        let f = SampledField::from_fn_1d(grid(0.0, 1.0, 64), 2, |x| alloc::vec![x, x]).unwrap();
        let merged = zero_set_area(&f, false).unwrap();
        assert!((merged - 2.0f64.sqrt()).abs() < 1e-10, "{merged}");
    }

    #[test]
    fn area_report_bundles_and_dominates_base_measure() {
        let f = SampledField::from_fn_1d(grid(-1.0, 1.0, 200), 2, |x| {
            alloc::vec![-x.abs(), x.abs()]
        })
        .unwrap();
        let rep = area_report(&f, &[1.0, 2.0]).unwrap();
        assert_eq!(rep.per_root_area.len(), 2);
        for &a in &rep.per_root_area {
            assert!(a >= f.base_measure());
        }
        assert_eq!(rep.jacobian_norm_lq.len(), 2);
    }

    #[test]
    fn minor_norm_matches_speed_integrand_in_one_parameter() {
        // m = 1 consistency: same stencils as the curve derivative norm
        let g = grid(-1.0, 1.0, 128);
        let c = SampledCurve::from_scalar_fn(g, |x| libm::sin(2.0 * x)).unwrap();
        let f = SampledField::from_curve(&c);
        let direct = crate::curve::deriv_lq_norm(&c, 2.0, g.interval()).unwrap();
        let viaminors = jacobian_minor_norm(&f, 2.0).unwrap();
        assert!((direct - viaminors).abs() < 1e-12, "{direct} vs {viaminors}");
    }
}
