//! Uniform-grid sampled curves, second-order finite differences with
//! kink-aware derivative handling, and grid estimators for C^k, Hölder, L^q,
//! and W^{1,q} norms.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::math::SplitMix64;
use crate::poly::{PolyCoeffs, RootVector};

/// A closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::Domain(format!("invalid interval [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }
}

/// A uniform partition of `[lo, hi]` into `n` cells (`n + 1` nodes).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    lo: f64,
    hi: f64,
    n: usize,
}

impl Grid {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::Grid(format!("invalid grid interval [{lo}, {hi}]")));
        }
        if n < 2 {
            return Err(Error::Grid(format!("grid needs at least 2 cells, got {n}")));
        }
        Ok(Self { lo, hi, n })
    }

    pub fn h(&self) -> f64 {
        (self.hi - self.lo) / self.n as f64
    }

    pub fn cells(&self) -> usize {
        self.n
    }

    pub fn num_nodes(&self) -> usize {
        self.n + 1
    }

    pub fn node(&self, i: usize) -> f64 {
        self.lo + self.h() * i as f64
    }

    pub fn interval(&self) -> Interval {
        Interval {
            lo: self.lo,
            hi: self.hi,
        }
    }

    /// Index of the node nearest to `x`.
    pub fn nearest_node(&self, x: f64) -> Result<usize> {
        if x < self.lo - 0.5 * self.h() || x > self.hi + 0.5 * self.h() {
            return Err(Error::Grid(format!("{x} outside grid")));
        }
        let i = libm::round((x - self.lo) / self.h()) as isize;
        Ok(i.clamp(0, self.n as isize) as usize)
    }

    /// Node index range `[i0, i1]` covering `j` (nodes strictly inside count;
    /// endpoints snap with a small slack so dyadic intervals hit exactly).
    pub fn index_range(&self, j: Interval) -> Result<(usize, usize)> {
        let h = self.h();
        let eps = 1e-9 * h;
        if j.lo < self.lo - eps || j.hi > self.hi + eps {
            return Err(Error::Grid(format!(
                "interval [{}, {}] not inside grid [{}, {}]",
                j.lo, j.hi, self.lo, self.hi
            )));
        }
        let i0 = libm::ceil((j.lo - self.lo) / h - 1e-9) as isize;
        let i1 = libm::floor((j.hi - self.lo) / h + 1e-9) as isize;
        let i0 = i0.clamp(0, self.n as isize) as usize;
        let i1 = i1.clamp(0, self.n as isize) as usize;
        if i1 < i0 + 1 {
            return Err(Error::Grid(format!(
                "interval [{}, {}] covers fewer than two nodes",
                j.lo, j.hi
            )));
        }
        Ok((i0, i1))
    }
}

/// A strictly nested interval pair `inner` inside `outer`, with the margin
/// `delta = dist(inner, complement of outer)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalNest {
    pub inner: Interval,
    pub outer: Interval,
}

impl IntervalNest {
    pub fn new(inner: Interval, outer: Interval) -> Result<Self> {
        if !(outer.lo < inner.lo && inner.hi < outer.hi) {
            return Err(Error::Domain(format!(
                "inner [{}, {}] must lie strictly inside outer [{}, {}]",
                inner.lo, inner.hi, outer.lo, outer.hi
            )));
        }
        Ok(Self { inner, outer })
    }

    pub fn delta(&self) -> f64 {
        math::min(self.inner.lo - self.outer.lo, self.outer.hi - self.inner.hi)
    }
}

/// What a curve's node values mean; informational.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    Coefficients,
    Roots,
    Scalar,
}

/// A (possibly vector-valued) function sampled on a uniform grid.
///
/// `boundary_skip` counts the nodes at each end whose derived values involve
/// one-sided stencils; Lipschitz-seminorm maxima exclude those rows, while
/// quadrature keeps them so integration intervals stay closed.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledCurve {
    grid: Grid,
    dim: usize,
    values: Vec<f64>,
    kind: CurveKind,
    boundary_skip: usize,
}

impl SampledCurve {
    pub fn from_values(grid: Grid, dim: usize, values: Vec<f64>, kind: CurveKind) -> Result<Self> {
        if dim == 0 || values.len() != grid.num_nodes() * dim {
            return Err(Error::Grid(format!(
                "expected {} x {dim} values, got {}",
                grid.num_nodes(),
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("non-finite sample".into()));
        }
        Ok(Self {
            grid,
            dim,
            values,
            kind,
            boundary_skip: 0,
        })
    }

    pub fn from_scalar_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = (0..grid.num_nodes()).map(|i| f(grid.node(i))).collect();
        Self::from_values(grid, 1, values, CurveKind::Scalar)
    }

    pub fn from_root_vectors(grid: Grid, roots: &[RootVector]) -> Result<Self> {
        if roots.len() != grid.num_nodes() {
            return Err(Error::Grid("one root vector per node required".into()));
        }
        let dim = roots[0].len();
        let mut values = Vec::with_capacity(roots.len() * dim);
        for r in roots {
            if r.len() != dim {
                return Err(Error::Domain("root vectors of mixed degree".into()));
            }
            values.extend_from_slice(r.as_slice());
        }
        Self::from_values(grid, dim, values, CurveKind::Roots)
    }

    pub fn from_polys(grid: Grid, polys: &[PolyCoeffs]) -> Result<Self> {
        if polys.len() != grid.num_nodes() {
            return Err(Error::Grid("one polynomial per node required".into()));
        }
        let dim = polys[0].degree();
        let mut values = Vec::with_capacity(polys.len() * dim);
        for p in polys {
            if p.degree() != dim {
                return Err(Error::Domain("polynomials of mixed degree".into()));
            }
            values.extend_from_slice(p.coeffs());
        }
        Self::from_values(grid, dim, values, CurveKind::Coefficients)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> CurveKind {
        self.kind
    }

    pub fn boundary_skip(&self) -> usize {
        self.boundary_skip
    }

    /// Node value as a slice of length `dim`.
    pub fn value(&self, i: usize) -> &[f64] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }

    pub fn value_scalar(&self, i: usize) -> f64 {
        debug_assert_eq!(self.dim, 1);
        self.values[i]
    }

    /// Linear interpolation of the curve at `x`.
    pub fn value_at(&self, x: f64) -> Result<Vec<f64>> {
        let g = &self.grid;
        if x < g.lo - 1e-12 * g.h() || x > g.hi + 1e-12 * g.h() {
            return Err(Error::Grid(format!("{x} outside grid")));
        }
        let t = (x - g.lo) / g.h();
        let i = (libm::floor(t) as usize).min(g.n - 1);
        let w = t - i as f64;
        Ok(self
            .value(i)
            .iter()
            .zip(self.value(i + 1))
            .map(|(a, b)| a * (1.0 - w) + b * w)
            .collect())
    }

    /// Extracts component `j` (0-based) as a scalar curve.
    pub fn component(&self, j: usize) -> SampledCurve {
        debug_assert!(j < self.dim);
        let values = (0..self.grid.num_nodes())
            .map(|i| self.values[i * self.dim + j])
            .collect();
        SampledCurve {
            grid: self.grid,
            dim: 1,
            values,
            kind: CurveKind::Scalar,
            boundary_skip: self.boundary_skip,
        }
    }

    /// The node-aligned restriction of the curve to a subinterval.
    pub fn restrict(&self, j: Interval) -> Result<SampledCurve> {
        let (i0, i1) = self.grid.index_range(j)?;
        let grid = Grid::new(self.grid.node(i0), self.grid.node(i1), i1 - i0)?;
        let values = self.values[i0 * self.dim..(i1 + 1) * self.dim].to_vec();
        Ok(SampledCurve {
            grid,
            dim: self.dim,
            values,
            kind: self.kind,
            boundary_skip: 0,
        })
    }

    /// Pointwise difference; grids and dimensions must agree.
    pub fn sub(&self, other: &SampledCurve) -> Result<SampledCurve> {
        if self.grid != other.grid || self.dim != other.dim {
            return Err(Error::Domain("curve mismatch in difference".into()));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a - b)
            .collect();
        Ok(SampledCurve {
            grid: self.grid,
            dim: self.dim,
            values,
            kind: self.kind,
            boundary_skip: self.boundary_skip.max(other.boundary_skip),
        })
    }

    fn norm_at(&self, i: usize) -> f64 {
        if self.dim == 1 {
            math::abs(self.values[i])
        } else {
            math::norm2(self.value(i))
        }
    }
}

/// First derivative of a curve with both one-sided values retained.
///
/// `kink[i]` marks nodes where the backward and forward difference quotients
/// disagree by more than `10 h` — the grid stand-in for a point of
/// non-differentiability. Almost-everywhere quantities let such a node
/// contribute the average of its one-sided values. The sided values are
/// plain single-cell quotients so that a kink contaminates only the node it
/// sits on; where both sides agree in sign their average coincides with the
/// central value up to stencil accuracy.
#[derive(Debug, Clone)]
pub struct FirstDeriv {
    pub central: SampledCurve,
    left: Vec<f64>,
    right: Vec<f64>,
    pub kink: Vec<bool>,
}

const KINK_FACTOR: f64 = 10.0;

impl FirstDeriv {
    pub fn left(&self, i: usize) -> &[f64] {
        let d = self.central.dim;
        &self.left[i * d..(i + 1) * d]
    }

    pub fn right(&self, i: usize) -> &[f64] {
        let d = self.central.dim;
        &self.right[i * d..(i + 1) * d]
    }

    /// Integrand value for almost-everywhere integrals: the Euclidean norm of
    /// the derivative, with kink nodes contributing their one-sided average.
    pub fn ae_norm(&self, i: usize) -> f64 {
        if self.kink[i] {
            0.5 * (math::norm2(self.left(i)) + math::norm2(self.right(i)))
        } else {
            self.central.norm_at(i)
        }
    }
}

/// First derivative with one-sided bookkeeping: second-order central values,
/// single-cell sided quotients.
pub fn first_derivative(c: &SampledCurve) -> Result<FirstDeriv> {
    let g = c.grid;
    let n = g.n;
    if n < 2 {
        return Err(Error::Grid("need at least 3 nodes for derivatives".into()));
    }
    let (dim, h) = (c.dim, g.h());
    let nodes = g.num_nodes();
    let mut central = vec![0.0; nodes * dim];
    let mut left = vec![0.0; nodes * dim];
    let mut right = vec![0.0; nodes * dim];
    let v = |i: usize, k: usize| c.values[i * dim + k];
    for i in 0..nodes {
        for k in 0..dim {
            let cen = if i >= 1 && i < n {
                (v(i + 1, k) - v(i - 1, k)) / (2.0 * h)
            } else if i == 0 {
                (-3.0 * v(0, k) + 4.0 * v(1, k) - v(2, k)) / (2.0 * h)
            } else {
                (3.0 * v(n, k) - 4.0 * v(n - 1, k) + v(n - 2, k)) / (2.0 * h)
            };
            // single-cell quotients so a kink touches only its own node
            let bwd = (i >= 1).then(|| (v(i, k) - v(i - 1, k)) / h);
            let fwd = (i < n).then(|| (v(i + 1, k) - v(i, k)) / h);
            central[i * dim + k] = cen;
            left[i * dim + k] = bwd.or(fwd).expect("n >= 2");
            right[i * dim + k] = fwd.or(bwd).expect("n >= 2");
        }
    }
    let kink = (0..nodes)
        .map(|i| {
            let mut d2 = 0.0;
            for k in 0..dim {
                let d = left[i * dim + k] - right[i * dim + k];
                d2 += d * d;
            }
            math::sqrt(d2) > KINK_FACTOR * h
        })
        .collect();
    let central = SampledCurve {
        grid: g,
        dim,
        values: central,
        kind: c.kind,
        boundary_skip: c.boundary_skip + 1,
    };
    Ok(FirstDeriv {
        central,
        left,
        right,
        kink,
    })
}

/// `k`-th finite-difference derivative on the same grid: central stencils of
/// second-order accuracy inside, one-sided at the ends, applied `k` times.
pub fn fd_derivative(c: &SampledCurve, k: usize) -> Result<SampledCurve> {
    if k > 0 && c.grid.n < 2 * k {
        return Err(Error::Grid(format!(
            "grid with {} cells cannot support order-{k} differences",
            c.grid.n
        )));
    }
    let mut cur = c.clone();
    for _ in 0..k {
        cur = first_derivative(&cur)?.central;
    }
    Ok(cur)
}

/// Node rows of `j` that seminorm maxima may use, honoring the curve's
/// one-sided band.
fn seminorm_rows(c: &SampledCurve, j: Interval) -> Result<(usize, usize)> {
    let (i0, i1) = c.grid.index_range(j)?;
    let skip = c.boundary_skip;
    let lo = i0.max(skip);
    let hi = i1.min(c.grid.n - skip.min(c.grid.n));
    if hi < lo + 1 {
        return Err(Error::Grid(
            "interval too small after excluding one-sided rows".into(),
        ));
    }
    Ok((lo, hi))
}

/// `max_{0<=j<=k} sup_J |f^(j)|` with node suprema and Euclidean norms.
pub fn ck_norm(c: &SampledCurve, k: usize, j: Interval) -> Result<f64> {
    let mut worst = 0.0f64;
    let mut cur = c.clone();
    for level in 0..=k {
        if level > 0 {
            cur = first_derivative(&cur)?.central;
        }
        let (i0, i1) = cur.grid.index_range(j)?;
        for i in i0..=i1 {
            worst = math::max(worst, cur.norm_at(i));
        }
    }
    Ok(worst)
}

/// Supremum of the pointwise Euclidean norm over `j`.
pub fn sup_norm(c: &SampledCurve, j: Interval) -> Result<f64> {
    ck_norm(c, 0, j)
}

/// Default seed for the pair subsample in [`holder_seminorm`].
pub const DEFAULT_SUBSAMPLE_SEED: u64 = 0x005E_ED0F_1234;

/// Number of nodes up to which the Hölder estimator scans all pairs.
pub const HOLDER_EXACT_LIMIT: usize = 4096;

/// Hölder seminorm `sup |f(x)-f(y)| / |x-y|^gamma` over node pairs in `j`.
///
/// All pairs are scanned when `j` covers at most [`HOLDER_EXACT_LIMIT`]
/// nodes; beyond that a deterministic stratified subsample is used (adjacent
/// pairs, dyadic-offset ladders, an all-anchors-times-skeleton sweep, and
/// seeded random pairs).
pub fn holder_seminorm(c: &SampledCurve, gamma: f64, j: Interval) -> Result<f64> {
    holder_seminorm_seeded(c, gamma, j, DEFAULT_SUBSAMPLE_SEED)
}

pub fn holder_seminorm_seeded(
    c: &SampledCurve,
    gamma: f64,
    j: Interval,
    seed: u64,
) -> Result<f64> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::Domain(format!("invalid Hölder exponent {gamma}")));
    }
    let (lo, hi) = seminorm_rows(c, j)?;
    let m = hi - lo + 1;
    let h = c.grid.h();
    // quotient denominators depend only on the index distance
    let mut pow_table = vec![0.0; m];
    for (delta, entry) in pow_table.iter_mut().enumerate().skip(1) {
        *entry = math::powf(delta as f64 * h, gamma);
    }
    let quot = |a: usize, b: usize| -> f64 {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        let mut d2 = 0.0;
        for (x, y) in c.value(a).iter().zip(c.value(b)) {
            let d = x - y;
            d2 += d * d;
        }
        math::sqrt(d2) / pow_table[b - a]
    };

    let mut worst = 0.0f64;
    if m <= HOLDER_EXACT_LIMIT {
        for a in lo..hi {
            for b in a + 1..=hi {
                worst = math::max(worst, quot(a, b));
            }
        }
        return Ok(worst);
    }

    // adjacent pairs and dyadic ladders from every anchor
    for a in lo..=hi {
        let mut step = 1usize;
        while a + step <= hi {
            worst = math::max(worst, quot(a, a + step));
            step <<= 1;
        }
    }
    // every anchor against a coarse skeleton
    let stride = m.div_ceil(1024).max(1);
    for a in lo..=hi {
        let mut b = lo;
        while b <= hi {
            if b != a {
                worst = math::max(worst, quot(a, b));
            }
            b += stride;
        }
    }
    // seeded random pairs
    let mut rng = SplitMix64::new(seed);
    for _ in 0..(1usize << 17) {
        let a = lo + rng.next_index(m);
        let b = lo + rng.next_index(m);
        if a != b {
            worst = math::max(worst, quot(a, b));
        }
    }
    Ok(worst)
}

/// Largest adjacent-node difference quotient `|f(x_{i+1}) - f(x_i)| / h`
/// over `j` (the grid Lipschitz constant of the sampled values).
pub fn max_difference_quotient(c: &SampledCurve, j: Interval) -> Result<f64> {
    let (i0, i1) = c.grid.index_range(j)?;
    let h = c.grid.h();
    let mut worst = 0.0f64;
    for i in i0..i1 {
        let mut d2 = 0.0;
        for (x, y) in c.value(i).iter().zip(c.value(i + 1)) {
            let d = x - y;
            d2 += d * d;
        }
        worst = math::max(worst, math::sqrt(d2) / h);
    }
    Ok(worst)
}

/// `L^q` norm by composite trapezoid quadrature of `|f|^q` over `j`.
pub fn lq_norm(c: &SampledCurve, q: f64, j: Interval) -> Result<f64> {
    if !(q >= 1.0 && q.is_finite()) {
        return Err(Error::Domain(format!("invalid exponent q = {q}")));
    }
    let (i0, i1) = c.grid.index_range(j)?;
    let h = c.grid.h();
    let mut acc = 0.0;
    for i in i0..=i1 {
        let w = if i == i0 || i == i1 { 0.5 } else { 1.0 };
        acc += w * math::powf(c.norm_at(i), q);
    }
    Ok(math::powf(acc * h, 1.0 / q))
}

/// `L^q` norm of the first derivative, with kink nodes contributing the
/// average of their one-sided values.
pub fn deriv_lq_norm(c: &SampledCurve, q: f64, j: Interval) -> Result<f64> {
    if !(q >= 1.0 && q.is_finite()) {
        return Err(Error::Domain(format!("invalid exponent q = {q}")));
    }
    let fd = first_derivative(c)?;
    let (i0, i1) = c.grid.index_range(j)?;
    let h = c.grid.h();
    let mut acc = 0.0;
    for i in i0..=i1 {
        let w = if i == i0 || i == i1 { 0.5 } else { 1.0 };
        acc += w * math::powf(fd.ae_norm(i), q);
    }
    Ok(math::powf(acc * h, 1.0 / q))
}

/// `W^{1,q}` norm: `L^q` norm of the values plus `L^q` norm of the first
/// derivative.
pub fn w1q_norm(c: &SampledCurve, q: f64, j: Interval) -> Result<f64> {
    Ok(lq_norm(c, q, j)? + deriv_lq_norm(c, q, j)?)
}

/// Bundle of norm values for a curve on a nested interval pair (all norms
/// taken on the inner interval).
#[derive(Debug, Clone, PartialEq)]
pub struct NormReport {
    pub ck: Vec<(usize, f64)>,
    pub holder: Vec<(f64, f64)>,
    pub lq: Vec<(f64, f64)>,
    pub w1q: Vec<(f64, f64)>,
    pub interval: IntervalNest,
}

pub fn norm_report(
    c: &SampledCurve,
    nest: IntervalNest,
    k_max: usize,
    gammas: &[f64],
    qs: &[f64],
) -> Result<NormReport> {
    let j = nest.inner;
    let mut ck = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        ck.push((k, ck_norm(c, k, j)?));
    }
    let mut holder = Vec::with_capacity(gammas.len());
    for &g in gammas {
        holder.push((g, holder_seminorm(c, g, j)?));
    }
    let mut lq = Vec::with_capacity(qs.len());
    let mut w1q = Vec::with_capacity(qs.len());
    for &q in qs {
        lq.push((q, lq_norm(c, q, j)?));
        w1q.push((q, w1q_norm(c, q, j)?));
    }
    Ok(NormReport {
        ck,
        holder,
        lq,
        w1q,
        interval: nest,
    })
}
