//! Real-root counting and isolation: numerical square-free decomposition via
//! a gcd cascade, Sturm chains, bisection with Newton polishing, and the
//! ordered root map for hyperbolic polynomials.
//!
//! Remainder sequences cancel catastrophically in plain f64, so the cascade
//! and the chain are carried in double-double arithmetic; refinement then
//! polishes on the original coefficients with compensated evaluation.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::math::Dd;
use crate::poly::{eval_accurate_dense, PolyCoeffs, RootVector};

/// Relative threshold below which a whole remainder counts as zero in the
/// gcd (i.e. the divisor is accepted as a factor).
const TAU_GCD: f64 = 1e-10;

/// Escalation ladder for the gcd threshold. Coefficient rounding turns a
/// constructed multiple root into a complex pair ~1e-8 off the axis, and the
/// Euclidean residual it leaves is amplified rounding noise (observed up to
/// ~1e-6 relative at degree 8), far above the strict threshold. The looser
/// rungs are tried only when degree accounting fails at the strict one, so
/// exactly-representable inputs are never affected.
const TAU_LADDER: [f64; 3] = [TAU_GCD, 1e-6, 3e-5];

/// Relative noise floor of the double-double remainder arithmetic. Leading
/// coefficients may only be trimmed below this: a small-but-genuine leading
/// coefficient changes chain degrees and would corrupt variation counts.
const DD_NOISE: f64 = 1e-26;

// ---------------------------------------------------------------------------
// dense double-double polynomials (descending coefficients)
// ---------------------------------------------------------------------------

type DPoly = Vec<Dd>;

fn dpoly(p: &[f64]) -> DPoly {
    p.iter().map(|&c| Dd::from(c)).collect()
}

fn rounded(p: &[Dd]) -> Vec<f64> {
    p.iter().map(|c| c.to_f64()).collect()
}

/// Horner in double-double; the sign of the result is what matters.
fn eval_dd(p: &[Dd], x: f64) -> f64 {
    let xd = Dd::from(x);
    let mut acc = Dd::ZERO;
    for &c in p {
        acc = acc.mul(xd).add(c);
    }
    acc.to_f64()
}

fn deriv_dd(p: &[Dd]) -> DPoly {
    let n = p.len();
    if n <= 1 {
        return vec![Dd::ZERO];
    }
    (0..n - 1)
        .map(|i| p[i].mul(Dd::from((n - 1 - i) as f64)))
        .collect()
}

fn max_abs_dd(p: &[Dd]) -> f64 {
    p.iter().fold(0.0f64, |m, c| math::max(m, c.abs_hi()))
}

/// Drops leading coefficients at or below `tau`; a slice that truncates away
/// completely becomes the zero polynomial.
fn trimmed_dd(p: &[Dd], tau: f64) -> DPoly {
    let mut i = 0;
    while i < p.len() && p[i].abs_hi() <= tau {
        i += 1;
    }
    if i == p.len() {
        vec![Dd::ZERO]
    } else {
        p[i..].to_vec()
    }
}

fn is_zero_dd(p: &[Dd]) -> bool {
    p.len() == 1 && p[0].is_zero()
}

/// Remainder of `a` by monic `b` (`deg b >= 1`).
fn rem_by_monic_dd(a: &[Dd], b: &[Dd]) -> DPoly {
    let (na, nb) = (a.len(), b.len());
    if na < nb {
        return a.to_vec();
    }
    let mut cur = a.to_vec();
    for i in 0..=na - nb {
        let f = cur[i];
        if !f.is_zero() {
            for j in 1..nb {
                cur[i + j] = cur[i + j].sub(f.mul(b[j]));
            }
        }
        cur[i] = Dd::ZERO;
    }
    cur[na - nb + 1..].to_vec()
}

/// Quotient of `a` by monic `b`, discarding the (numerically tiny) remainder.
fn div_by_monic_dd(a: &[Dd], b: &[Dd]) -> DPoly {
    let (na, nb) = (a.len(), b.len());
    debug_assert!(na >= nb);
    let mut cur = a.to_vec();
    let mut q = vec![Dd::ZERO; na - nb + 1];
    for i in 0..=na - nb {
        let f = cur[i];
        q[i] = f;
        if !f.is_zero() {
            for j in 1..nb {
                cur[i + j] = cur[i + j].sub(f.mul(b[j]));
            }
        }
    }
    q
}

fn make_monic_dd(p: &mut [Dd]) {
    let lc = p[0];
    if lc != Dd::ONE {
        for c in p.iter_mut() {
            *c = c.div(lc);
        }
        p[0] = Dd::ONE;
    }
}

/// Positive rescale to unit max-coefficient (sign-preserving).
fn normalize_scale_dd(p: &mut [Dd]) {
    let s = Dd::from(max_abs_dd(p));
    if s.hi > 0.0 && s.hi != 1.0 {
        for c in p.iter_mut() {
            *c = c.div(s);
        }
    }
}

/// Monic gcd by the Euclidean algorithm with per-step monic normalization.
/// A remainder below `TAU_GCD` relative to its step's coefficient scale
/// counts as zero (the divisor is accepted as a factor); this is what merges
/// float-perturbed multiple roots. Otherwise only noise-floor leading
/// coefficients are trimmed.
fn gcd_monic_dd(a: &[Dd], b: &[Dd], tau: f64) -> DPoly {
    let mut a = a.to_vec();
    let mut b = trimmed_dd(b, DD_NOISE * max_abs_dd(b));
    make_monic_dd(&mut a);
    if max_abs_dd(&b) <= tau * math::max(1.0, max_abs_dd(&a)) {
        b = vec![Dd::ZERO];
    }
    if !is_zero_dd(&b) {
        make_monic_dd(&mut b);
    }
    while !is_zero_dd(&b) && b.len() > 1 {
        let r = rem_by_monic_dd(&a, &b);
        let step_scale = math::max(1.0, math::max(max_abs_dd(&a), max_abs_dd(&b)));
        let mut r = if max_abs_dd(&r) <= tau * step_scale {
            vec![Dd::ZERO]
        } else {
            trimmed_dd(&r, DD_NOISE * max_abs_dd(&r))
        };
        if !is_zero_dd(&r) {
            make_monic_dd(&mut r);
        }
        a = b;
        b = r;
    }
    if is_zero_dd(&b) {
        a
    } else {
        vec![Dd::ONE] // nonzero constant remainder: coprime
    }
}

// ---------------------------------------------------------------------------
// Sturm chain
// ---------------------------------------------------------------------------

/// A Sturm chain of the numerically square-free part of a polynomial.
///
/// The first entry is the square-free part, the second its derivative, and
/// each following entry the negated remainder of the previous two. Entries
/// are rescaled by positive constants (sign-preserving), so the
/// sign-variation count at `-cauchy_bound` minus the count at
/// `+cauchy_bound` is the number of distinct real roots.
#[derive(Debug, Clone)]
pub struct SturmChain {
    chain: Vec<DPoly>,
    pub cauchy_bound: f64,
}

impl SturmChain {
    /// Chain of the square-free part of `p`.
    pub fn new(p: &PolyCoeffs) -> SturmChain {
        let dense = dpoly(&p.dense());
        let g = gcd_monic_dd(&dense, &deriv_dd(&dense), TAU_GCD);
        let w = if g.len() > 1 {
            div_by_monic_dd(&dense, &g)
        } else {
            dense
        };
        Self::from_squarefree(w, p.cauchy_bound())
    }

    fn from_squarefree(w: DPoly, cauchy_bound: f64) -> SturmChain {
        let mut chain = Vec::new();
        let mut a = w;
        make_monic_dd(&mut a);
        let mut b = deriv_dd(&a);
        normalize_scale_dd(&mut b);
        chain.push(a.clone());
        if a.len() > 1 {
            chain.push(b.clone());
            // the divisor may be rescaled freely (remainders are invariant
            // under divisor scaling), but the dividend must stay the actual
            // chain entry so the negation pattern is preserved; only
            // noise-floor leading coefficients may be trimmed
            while b.len() > 1 {
                let mut b_monic = b.clone();
                make_monic_dd(&mut b_monic);
                let r = rem_by_monic_dd(&a, &b_monic);
                let mut r: DPoly = trimmed_dd(&r, DD_NOISE * max_abs_dd(&r))
                    .into_iter()
                    .map(Dd::neg)
                    .collect();
                if is_zero_dd(&r) {
                    break;
                }
                normalize_scale_dd(&mut r);
                chain.push(r.clone());
                a = b;
                b = r;
            }
        }
        SturmChain {
            chain,
            cauchy_bound,
        }
    }

    /// The chain's coefficient vectors (rounded to f64 for inspection).
    pub fn chain(&self) -> Vec<Vec<f64>> {
        self.chain.iter().map(|p| rounded(p)).collect()
    }

    /// Sign-variation count of the chain at `x` (zeros skipped).
    pub fn variations(&self, x: f64) -> usize {
        let mut count = 0;
        let mut last = 0i8;
        for p in &self.chain {
            let v = eval_dd(p, x);
            let s = if v > 0.0 {
                1i8
            } else if v < 0.0 {
                -1i8
            } else {
                0i8
            };
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    /// Number of distinct real roots in `(lo, hi]`.
    pub fn count_in(&self, lo: f64, hi: f64) -> usize {
        self.variations(lo).saturating_sub(self.variations(hi))
    }

    /// Number of distinct real roots of the square-free part.
    pub fn distinct_real_roots(&self) -> usize {
        let b = self.cauchy_bound;
        self.count_in(-b, b)
    }
}

// ---------------------------------------------------------------------------
// isolation and refinement
// ---------------------------------------------------------------------------

/// Isolates and refines all real roots of a square-free polynomial.
fn isolate_squarefree(w: &[Dd], bound: f64, tol: f64) -> Result<Vec<f64>> {
    if w.len() <= 1 {
        return Ok(Vec::new());
    }
    let chain = SturmChain::from_squarefree(w.to_vec(), bound);
    let w = &chain.chain[0];
    let b = bound;
    let (vlo, vhi) = (chain.variations(-b), chain.variations(b));
    let total = vlo.saturating_sub(vhi);
    if total == 0 {
        return Ok(Vec::new());
    }

    let mut stack = vec![(-b, b, vlo, vhi)];
    let mut singles: Vec<(f64, f64)> = Vec::new();
    let mut roots: Vec<f64> = Vec::new();
    while let Some((lo, hi, vl, vh)) = stack.pop() {
        let count = vl.saturating_sub(vh);
        if count == 0 {
            continue;
        }
        if count == 1 {
            singles.push((lo, hi));
            continue;
        }
        if hi - lo <= 8.0 * f64::EPSILON * math::max(1.0, math::abs(lo) + math::abs(hi)) {
            // interval at the resolution floor still reporting several roots:
            // a sub-truncation cluster; record the midpoint for each
            let mid = 0.5 * (lo + hi);
            for _ in 0..count {
                roots.push(mid);
            }
            continue;
        }
        let mut mid = 0.5 * (lo + hi);
        let mut guard = 0;
        while eval_dd(w, mid) == 0.0 && guard < 64 {
            mid += (hi - lo) * 1e-9;
            guard += 1;
        }
        let vm = chain.variations(mid);
        stack.push((lo, mid, vl, vm));
        stack.push((mid, hi, vm, vh));
    }

    let wd = deriv_dd(w);
    let coarse = 1e-3 * math::max(1.0, bound);
    let fine = math::max(tol, 1e-13) * math::max(1.0, bound);
    for (mut lo, mut hi) in singles {
        let mut flo = eval_dd(w, lo);
        // bisect down to a coarse bracket, then switch to safeguarded Newton
        while hi - lo > coarse {
            let mid = 0.5 * (lo + hi);
            let fm = eval_dd(w, mid);
            if fm == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if (fm > 0.0) == (flo > 0.0) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        let mut x = 0.5 * (lo + hi);
        for _ in 0..120 {
            let f = eval_dd(w, x);
            if f == 0.0 {
                break;
            }
            // narrow the bracket first so the bisection fallback below is
            // guaranteed to make progress
            if (f > 0.0) == (flo > 0.0) {
                lo = x;
                flo = f;
            } else {
                hi = x;
            }
            if hi - lo <= fine {
                x = 0.5 * (lo + hi);
                break;
            }
            let fp = eval_dd(&wd, x);
            let mut next = if fp != 0.0 { x - f / fp } else { f64::NAN };
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            let step = math::abs(next - x);
            x = next;
            if step <= f64::EPSILON * (1.0 + math::abs(x)) {
                break;
            }
        }
        if !x.is_finite() {
            return Err(Error::Tolerance(format!(
                "refinement failed in [{lo}, {hi}]"
            )));
        }
        roots.push(x);
    }
    roots.sort_by(f64::total_cmp);
    Ok(roots)
}

// ---------------------------------------------------------------------------
// multiplicity analysis via the gcd cascade
// ---------------------------------------------------------------------------

struct Analysis {
    /// distinct real roots, increasing
    distinct: Vec<f64>,
    /// multiplicity per distinct root
    mult: Vec<usize>,
    /// relative gcd threshold at which the multiplicities were resolved
    tau_used: f64,
}

/// Repeated-gcd cascade `G_0 = p`, `G_{k+1} = gcd(G_k, G_k')`; the square-free
/// levels `G_k / G_{k+1}` carry exactly the roots of multiplicity `> k`.
/// Starts at the strict gcd threshold and escalates only while the total
/// multiplicity falls short of the degree.
fn analyze(p: &PolyCoeffs, tol: f64) -> Result<Analysis> {
    let mut out = analyze_at(p, tol, TAU_LADDER[0])?;
    for &tau in &TAU_LADDER[1..] {
        if out.mult.iter().sum::<usize>() == p.degree() {
            break;
        }
        out = analyze_at(p, tol, tau)?;
    }
    Ok(out)
}

fn analyze_at(p: &PolyCoeffs, tol: f64, tau: f64) -> Result<Analysis> {
    let bound = p.cauchy_bound();
    let dense = dpoly(&p.dense());

    let mut cascade = vec![dense];
    while cascade.last().expect("nonempty").len() > 1 {
        let g = cascade.last().expect("nonempty");
        let next = gcd_monic_dd(g, &deriv_dd(g), tau);
        cascade.push(next);
    }

    let mut distinct: Vec<f64> = Vec::new();
    let mut mult: Vec<usize> = Vec::new();
    for level in 0..cascade.len() - 1 {
        let w = div_by_monic_dd(&cascade[level], &cascade[level + 1]);
        let roots = isolate_squarefree(&w, bound, tol)?;
        if level == 0 {
            mult = vec![1; roots.len()];
            distinct = roots;
        } else {
            for r in roots {
                // match against the distinct roots from the base level
                let mut best = usize::MAX;
                let mut best_d = f64::INFINITY;
                for (i, &d) in distinct.iter().enumerate() {
                    let dd = math::abs(d - r);
                    if dd < best_d {
                        best_d = dd;
                        best = i;
                    }
                }
                if best != usize::MAX && best_d <= 1e-5 * (1.0 + math::abs(r)) {
                    mult[best] += 1;
                }
                // an unmatched root belongs to a complex-conjugate factor of
                // the cascade; it cannot contribute real multiplicity
            }
        }
    }
    Ok(Analysis {
        distinct,
        mult,
        tau_used: tau,
    })
}

/// Diagnostic returned by [`is_hyperbolic`].
#[derive(Debug, Clone, PartialEq)]
pub struct HyperbolicityReport {
    pub hyperbolic: bool,
    pub distinct_real_roots: usize,
    pub total_multiplicity: usize,
    pub degree: usize,
    /// `degree - total_multiplicity`: how many roots are missing from the
    /// real line.
    pub defect: usize,
}

/// Tests whether all `d` roots (with multiplicity) are real.
pub fn is_hyperbolic(p: &PolyCoeffs, tol: f64) -> HyperbolicityReport {
    let degree = p.degree();
    match analyze(p, tol) {
        Ok(a) => {
            let total: usize = a.mult.iter().sum();
            HyperbolicityReport {
                hyperbolic: total == degree,
                distinct_real_roots: a.distinct.len(),
                total_multiplicity: total,
                degree,
                defect: degree.saturating_sub(total),
            }
        }
        Err(_) => HyperbolicityReport {
            hyperbolic: false,
            distinct_real_roots: 0,
            total_multiplicity: 0,
            degree,
            defect: degree,
        },
    }
}

/// All real roots of a hyperbolic polynomial, with multiplicity, increasingly
/// ordered. Distinct roots come from Sturm isolation on the square-free part;
/// multiplicities from the gcd cascade; every root is then polished on the
/// original polynomial with a multiplicity-adjusted Newton step.
pub fn ordered_roots(p: &PolyCoeffs, tol: f64) -> Result<RootVector> {
    if !(tol > 0.0) {
        return Err(Error::Tolerance(format!("invalid tolerance {tol}")));
    }
    let analysis = analyze(p, tol)?;
    let total: usize = analysis.mult.iter().sum();
    if total != p.degree() {
        return Err(Error::Hyperbolicity {
            distinct: analysis.distinct.len(),
            total_multiplicity: total,
            degree: p.degree(),
        });
    }

    let dense = p.dense();
    let dp = deriv_f64(&dense);
    let bound = p.cauchy_bound();
    let scale = math::powi(math::max(1.0, bound), p.degree() as u32);
    let mut roots = Vec::with_capacity(p.degree());
    for (i, &r0) in analysis.distinct.iter().enumerate() {
        let m = analysis.mult[i];
        let r = polish(&dense, &dp, r0, m);
        // a merged m-fold cluster only certifies residuals up to the gcd
        // threshold that merged it; simple roots keep the caller's tolerance
        let allowed = if m == 1 {
            tol
        } else {
            math::max(tol, analysis.tau_used)
        } * scale;
        let residual = math::abs(p.eval(r));
        if !(residual <= allowed) {
            return Err(Error::Tolerance(format!(
                "residual {residual:e} exceeds {allowed:e} at root {r}"
            )));
        }
        for _ in 0..m {
            roots.push(r);
        }
    }
    roots.sort_by(f64::total_cmp);
    RootVector::new(roots)
}

fn deriv_f64(p: &[f64]) -> Vec<f64> {
    let n = p.len();
    if n <= 1 {
        return vec![0.0];
    }
    (0..n - 1).map(|i| p[i] * (n - 1 - i) as f64).collect()
}

/// Multiplicity-adjusted Newton (`x -= m f / f'`) with compensated
/// evaluation; falls back to the starting point if it wanders.
fn polish(dense: &[f64], dp: &[f64], r0: f64, m: usize) -> f64 {
    let mut x = r0;
    let mut best = r0;
    let mut best_f = math::abs(eval_accurate_dense(dense, r0));
    for _ in 0..8 {
        let f = eval_accurate_dense(dense, x);
        let fp = eval_accurate_dense(dp, x);
        if f == 0.0 || fp == 0.0 {
            break;
        }
        let step = m as f64 * f / fp;
        if !step.is_finite() || math::abs(step) > 1.0 + math::abs(r0) {
            break;
        }
        x -= step;
        let fa = math::abs(eval_accurate_dense(dense, x));
        if fa <= best_f {
            best_f = fa;
            best = x;
        }
        if math::abs(step) <= f64::EPSILON * (1.0 + math::abs(x)) {
            break;
        }
    }
    best
}

/// Convenience wrapper: distinct roots with their multiplicities.
pub fn roots_with_multiplicity(p: &PolyCoeffs, tol: f64) -> Result<Vec<(f64, usize)>> {
    let analysis = analyze(p, tol)?;
    let total: usize = analysis.mult.iter().sum();
    if total != p.degree() {
        return Err(Error::Hyperbolicity {
            distinct: analysis.distinct.len(),
            total_multiplicity: total,
            degree: p.degree(),
        });
    }
    let dense = p.dense();
    let dp = deriv_f64(&dense);
    Ok(analysis
        .distinct
        .iter()
        .zip(&analysis.mult)
        .map(|(&r, &m)| (polish(&dense, &dp, r, m), m))
        .collect())
}
