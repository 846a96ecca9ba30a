//! The centering transform that removes the subleading coefficient, the
//! normalization to second coefficient -1, gap-based splitting into factor
//! pairs, and the derivative-operator root separation.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::poly::{vieta, PolyCoeffs, RootVector};
use crate::sturm::ordered_roots;

/// A monic polynomial with vanishing subleading coefficient, obtained from
/// `P_a` by substituting `Z -> Z - a_1/d`. Roots move by `+a_1/d`; `shift`
/// records `a_1/d`, so the source roots are `roots(self) - shift`.
///
/// For hyperbolic inputs the second coefficient satisfies `c_2 <= 0` and
/// `-2 c_2` equals the sum of the squared (centered) roots.
#[derive(Debug, Clone, PartialEq)]
pub struct TschirnForm {
    /// `(c_2, ..., c_d)`; the implicit first coefficient is exactly zero.
    coeffs: Vec<f64>,
    /// `a_1 / d` of the source polynomial.
    pub shift: f64,
}

impl TschirnForm {
    /// Degree of the underlying polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.len() + 1
    }

    /// `c_j` for `2 <= j <= d`.
    pub fn coeff(&self, j: usize) -> f64 {
        self.coeffs[j - 2]
    }

    /// `(c_2, ..., c_d)`.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// The full monic polynomial `Z^d + 0 Z^{d-1} + c_2 Z^{d-2} + ...`.
    pub fn to_poly(&self) -> PolyCoeffs {
        let mut v = Vec::with_capacity(self.coeffs.len() + 1);
        v.push(0.0);
        v.extend_from_slice(&self.coeffs);
        PolyCoeffs::new(v).expect("finite coefficients")
    }

    /// Builds the form from already-centered coefficients `(c_2, ..., c_d)`.
    pub fn from_centered(coeffs: Vec<f64>, shift: f64) -> Result<Self> {
        if coeffs.iter().any(|c| !c.is_finite()) || !shift.is_finite() {
            return Err(Error::Domain("non-finite coefficient".into()));
        }
        Ok(Self { coeffs, shift })
    }
}

/// Centers `P_a`: returns the coefficients of `P_a(Z - a_1/d)` via exact
/// Taylor shift, with the first coefficient pinned to exact zero.
pub fn tschirnhausen(a: &PolyCoeffs) -> TschirnForm {
    let d = a.degree();
    let shift = a.coeff(1) / d as f64;
    let shifted = a.shift(-shift);
    let mut coeffs = shifted.coeffs().to_vec();
    coeffs.remove(0); // the new subleading coefficient is zero by construction
    TschirnForm { coeffs, shift }
}

/// Outcome of the coefficient-dominance check `|c_j|^{1/j} <= sqrt(2)
/// |c_2|^{1/2}` for hyperbolic centered polynomials.
#[derive(Debug, Clone, PartialEq)]
pub struct DominanceReport {
    pub ok: bool,
    /// index `j` attaining the largest `|c_j|^{1/j}`
    pub worst_j: usize,
    /// largest `|c_j|^{1/j}`
    pub worst_value: f64,
    /// `sqrt(2) |c_2|^{1/2}`
    pub bound: f64,
    /// `worst_value / bound` (infinite when the bound is zero and some
    /// coefficient is not)
    pub ratio: f64,
}

const ABS_SLACK: f64 = 1e-12;

/// Checks coefficient dominance for a centered hyperbolic polynomial.
pub fn check_dominance(t: &TschirnForm) -> DominanceReport {
    let d = t.degree();
    let mut worst_j = 2;
    let mut worst_value = 0.0;
    for j in 2..=d {
        let v = math::powf(math::abs(t.coeff(j)), 1.0 / j as f64);
        if v > worst_value {
            worst_value = v;
            worst_j = j;
        }
    }
    let bound = math::sqrt(2.0) * math::sqrt(math::abs(t.coeff(2)));
    let ratio = if bound > 0.0 {
        worst_value / bound
    } else if worst_value > 0.0 {
        f64::INFINITY
    } else {
        0.0
    };
    DominanceReport {
        ok: worst_value <= bound + ABS_SLACK,
        worst_j,
        worst_value,
        bound,
        ratio,
    }
}

/// A centered polynomial rescaled so that its second coefficient is exactly
/// -1; `scale = |c_2|^{1/2}` of the source, and the source roots are the
/// normalized roots times `scale`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedPoly {
    /// `(-1, u_3, ..., u_d)` with `u_j = |c_2|^{-j/2} c_j`
    coeffs: Vec<f64>,
    pub scale: f64,
}

impl NormalizedPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len() + 1
    }

    /// `u_j` for `2 <= j <= d` (with `u_2 = -1`).
    pub fn coeff(&self, j: usize) -> f64 {
        self.coeffs[j - 2]
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn to_poly(&self) -> PolyCoeffs {
        let mut v = Vec::with_capacity(self.coeffs.len() + 1);
        v.push(0.0);
        v.extend_from_slice(&self.coeffs);
        PolyCoeffs::new(v).expect("finite coefficients")
    }
}

const DEGENERATE_FLOOR: f64 = 1e-14;

/// Rescales a centered hyperbolic polynomial to second coefficient -1.
pub fn normalize(t: &TschirnForm) -> Result<NormalizedPoly> {
    let c2 = t.coeff(2);
    if math::abs(c2) <= DEGENERATE_FLOOR {
        return Err(Error::Degenerate(format!(
            "second coefficient {c2:e} is numerically zero"
        )));
    }
    let d = t.degree();
    let scale = math::sqrt(math::abs(c2));
    let mut coeffs = Vec::with_capacity(d - 1);
    coeffs.push(-1.0);
    for j in 3..=d {
        coeffs.push(t.coeff(j) * math::powf(math::abs(c2), -(j as f64) / 2.0));
    }
    Ok(NormalizedPoly { coeffs, scale })
}

/// A factorization of a hyperbolic polynomial into two monic hyperbolic
/// factors separated by a root gap: every root of `left` lies strictly below
/// every root of `right`.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitPair {
    pub left: PolyCoeffs,
    pub right: PolyCoeffs,
    /// the root-cluster separation used
    pub gap: f64,
}

/// Result of [`split`].
#[derive(Debug, Clone, PartialEq)]
pub enum Split {
    Pair(SplitPair),
    /// No consecutive root gap exceeded the threshold.
    NoGap,
}

/// Splits at the largest consecutive root gap when it exceeds
/// `tol * (1 + root spread)`; ties break at the leftmost maximal gap.
pub fn split(a: &PolyCoeffs, tol: f64) -> Result<Split> {
    let roots = ordered_roots(a, 1e-12)?;
    Ok(split_roots(&roots, tol))
}

/// Same as [`split`] but starting from already-computed ordered roots.
pub fn split_roots(roots: &RootVector, tol: f64) -> Split {
    let r = roots.as_slice();
    let d = r.len();
    if d < 2 {
        return Split::NoGap;
    }
    let mut k_best = 0;
    let mut g_best = -1.0;
    for k in 0..d - 1 {
        let g = r[k + 1] - r[k];
        if g > g_best {
            g_best = g;
            k_best = k;
        }
    }
    if g_best <= tol * (1.0 + roots.spread()) {
        return Split::NoGap;
    }
    let left = vieta(&r[..=k_best]).expect("finite roots");
    let right = vieta(&r[k_best + 1..]).expect("finite roots");
    Split::Pair(SplitPair {
        left,
        right,
        gap: g_best,
    })
}

/// Outcome of the factor-coefficient bound `|b_2| <= 4 |a_2|` (centered
/// second coefficient of each factor against the source's).
#[derive(Debug, Clone, PartialEq)]
pub struct B2BoundReport {
    pub ok: bool,
    /// worst `|b_2(factor)| / |a_2(source)|` over the two factors (0 when
    /// both factors are linear)
    pub worst_ratio: f64,
}

/// Checks `|b_2| <= 4 |a_2|` for both factors of a split; linear factors are
/// vacuously fine.
pub fn check_b2_bound(a: &PolyCoeffs, pair: &SplitPair) -> B2BoundReport {
    let a2 = math::abs(tschirnhausen(a).coeff(2));
    let mut worst_ratio = 0.0f64;
    let mut ok = true;
    for factor in [&pair.left, &pair.right] {
        if factor.degree() < 2 {
            continue;
        }
        let b2 = math::abs(tschirnhausen(factor).coeff(2));
        ok &= b2 <= 4.0 * a2 + ABS_SLACK;
        let ratio = if a2 > 0.0 {
            b2 / a2
        } else if b2 > 0.0 {
            f64::INFINITY
        } else {
            0.0
        };
        worst_ratio = math::max(worst_ratio, ratio);
    }
    B2BoundReport { ok, worst_ratio }
}

/// Diagnostics of one application of the separation operator.
#[derive(Debug, Clone, PartialEq)]
pub struct NuijReport {
    pub s: f64,
    /// smallest consecutive root gap of the output
    pub min_gap: f64,
    /// largest `|root_j(input) - root_j(output)|`
    pub max_shift: f64,
    /// whether `sign(root_j(input) - root_j(output)) == sign(s)` for every
    /// `j` (vacuously true for `s = 0`)
    pub shift_sign_ok: bool,
}

/// Applies `(1 + s d/dZ)^{d-1}` to a hyperbolic polynomial. The output is
/// hyperbolic with all roots distinct for `s != 0`; each root moves against
/// the sign of `s` by at most a multiple of `|s|`. A non-hyperbolic output
/// would contradict that and is reported as an internal error.
pub fn nuij(a: &PolyCoeffs, s: f64) -> Result<(PolyCoeffs, NuijReport)> {
    let roots_in = ordered_roots(a, 1e-12)?;
    let out = nuij_poly(a, s);

    let roots_out = ordered_roots(&out, 1e-12).map_err(|e| match e {
        Error::Hyperbolicity { .. } => Error::Internal(format!(
            "separation operator output failed the root-count check (s = {s}): {e}"
        )),
        other => other,
    })?;

    let min_gap = roots_out.min_gap().unwrap_or(f64::INFINITY);
    let mut max_shift = 0.0f64;
    let mut shift_sign_ok = true;
    for (ri, ro) in roots_in.as_slice().iter().zip(roots_out.as_slice()) {
        let delta = ri - ro;
        max_shift = math::max(max_shift, math::abs(delta));
        if s != 0.0 && !(delta * s.signum() > 0.0) {
            shift_sign_ok = false;
        }
    }
    Ok((
        out,
        NuijReport {
            s,
            min_gap,
            max_shift,
            shift_sign_ok,
        },
    ))
}

/// The bare coefficient expansion `sum_k C(d-1,k) s^k P^(k)` by exact
/// integer binomials and repeated coefficient differentiation.
pub fn nuij_poly(a: &PolyCoeffs, s: f64) -> PolyCoeffs {
    let d = a.degree();
    let mut kth = a.dense();
    let mut out = a.dense();
    let mut binom = 1.0f64;
    let mut s_pow = 1.0f64;
    for k in 1..d {
        dense_deriv_in_place(&mut kth);
        binom *= (d - k) as f64 / k as f64; // C(d-1,k) from C(d-1,k-1)
        s_pow *= s;
        let offset = out.len() - kth.len();
        for (i, &c) in kth.iter().enumerate() {
            out[offset + i] += binom * s_pow * c;
        }
    }
    PolyCoeffs::new(out[1..].to_vec()).expect("finite coefficients")
}

/// One exact coefficient differentiation of a dense descending polynomial.
fn dense_deriv_in_place(dense: &mut Vec<f64>) {
    let n = dense.len();
    for (i, c) in dense.iter_mut().enumerate().take(n - 1) {
        *c *= (n - 1 - i) as f64;
    }
    dense.pop();
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn poly(c: &[f64]) -> PolyCoeffs {
        PolyCoeffs::new(c.to_vec()).unwrap()
    }

    #[test]
    fn tschirnhausen_examples() {
        // (Z+1)^2 -> Z^2
        let t = tschirnhausen(&poly(&[2.0, 1.0]));
        assert_eq!(t.coeffs(), &[0.0]);
        assert_eq!(t.shift, 1.0);
        // roots {1,2,3} -> {-1,0,1}: Z^3 - Z
        let t = tschirnhausen(&poly(&[-6.0, 11.0, -6.0]));
        assert!((t.coeff(2) - -1.0).abs() < 1e-14);
        assert!(t.coeff(3).abs() < 1e-14);
        assert_eq!(t.shift, -2.0);
        // already centered input is unchanged
        let t = tschirnhausen(&poly(&[0.0, -3.0, 0.5]));
        assert_eq!(t.coeffs(), &[-3.0, 0.5]);
        assert_eq!(t.shift, 0.0);
    }

    #[test]
    fn dominance_examples() {
        let rep = check_dominance(&tschirnhausen(&poly(&[0.0, -1.0, 0.0])));
        assert!(rep.ok);
        assert_eq!(rep.worst_j, 2);
        assert!((rep.worst_value - 1.0).abs() < 1e-14);
        assert!((rep.bound - 2.0f64.sqrt()).abs() < 1e-14);

        let rep = check_dominance(&TschirnForm::from_centered(vec![0.0, 0.0, 0.0], 0.0).unwrap());
        assert!(rep.ok);
        assert_eq!(rep.ratio, 0.0);
    }

    #[test]
    fn normalize_examples() {
        // Z^3 - 4Z scaled by 2
        let t = TschirnForm::from_centered(vec![-4.0, 0.0], 0.0).unwrap();
        let n = normalize(&t).unwrap();
        assert_eq!(n.coeffs(), &[-1.0, 0.0]);
        assert_eq!(n.scale, 2.0);
        // roots of the output are the input roots divided by the scale
        let src = ordered_roots(&t.to_poly(), 1e-12).unwrap();
        let out = ordered_roots(&n.to_poly(), 1e-12).unwrap();
        for (s, o) in src.as_slice().iter().zip(out.as_slice()) {
            assert!((s / n.scale - o).abs() < 1e-12, "{s} vs {o}");
        }
        // already normalized
        let t = TschirnForm::from_centered(vec![-1.0, 0.0, 0.0], 0.0).unwrap();
        let n = normalize(&t).unwrap();
        assert_eq!(n.coeffs(), &[-1.0, 0.0, 0.0]);
        assert_eq!(n.scale, 1.0);
        // numerically Z^d
        let t = TschirnForm::from_centered(vec![0.0, 0.0], 0.0).unwrap();
        assert!(matches!(normalize(&t), Err(Error::Degenerate(_))));
    }

    #[test]
    fn split_examples() {
        // Z^2 - 1
        match split(&poly(&[0.0, -1.0]), 0.1).unwrap() {
            Split::Pair(p) => {
                assert_eq!(p.left.coeffs(), &[1.0]);
                assert_eq!(p.right.coeffs(), &[-1.0]);
                assert!((p.gap - 2.0).abs() < 1e-12);
            }
            Split::NoGap => panic!("expected a split"),
        }
        // Z^3 - Z: both gaps are 1; the leftmost maximal gap wins, so the
        // left factor is Z + 1 and the right factor Z(Z - 1)
        match split(&poly(&[0.0, -1.0, 0.0]), 0.1).unwrap() {
            Split::Pair(p) => {
                assert_eq!(p.left.degree(), 1);
                assert!((p.left.coeff(1) - 1.0).abs() < 1e-9);
                assert_eq!(p.right.degree(), 2);
                assert!((p.right.coeff(1) - -1.0).abs() < 1e-9);
                assert!(p.right.coeff(2).abs() < 1e-9);
            }
            Split::NoGap => panic!("expected a split"),
        }
        // Z^d: all roots coincide
        assert_eq!(split(&poly(&[0.0; 4]), 0.1).unwrap(), Split::NoGap);
    }

    #[test]
    fn b2_bound_examples() {
        // degree-1 factors are vacuous
        let a = poly(&[0.0, -1.0]);
        if let Split::Pair(pair) = split(&a, 0.1).unwrap() {
            let rep = check_b2_bound(&a, &pair);
            assert!(rep.ok);
            assert_eq!(rep.worst_ratio, 0.0);
        } else {
            panic!("expected a split");
        }
        // Z^3 - Z: the quadratic factor {0,1} centers to Z^2 - 1/4,
        // source second coefficient is -1 -> ratio 1/4
        let a = poly(&[0.0, -1.0, 0.0]);
        if let Split::Pair(pair) = split(&a, 0.1).unwrap() {
            let rep = check_b2_bound(&a, &pair);
            assert!(rep.ok);
            assert!((rep.worst_ratio - 0.25).abs() < 1e-9, "{}", rep.worst_ratio);
        } else {
            panic!("expected a split");
        }
    }

    #[test]
    fn nuij_examples() {
        // Z^2, s=1 -> Z^2 + 2Z with roots {-2, 0}
        let (out, rep) = nuij(&poly(&[0.0, 0.0]), 1.0).unwrap();
        assert_eq!(out.coeffs(), &[2.0, 0.0]);
        assert!((rep.min_gap - 2.0).abs() < 1e-9);
        // s = 0 is the identity
        let a = poly(&[-6.0, 11.0, -6.0]);
        let (out, rep) = nuij(&a, 0.0).unwrap();
        assert_eq!(out.coeffs(), a.coeffs());
        assert_eq!(rep.max_shift, 0.0);
        assert!(rep.shift_sign_ok);
    }

    #[test]
    fn nuij_expansion_matches_fold_oracle() {
        // oracle: fold (1 + s d/dZ) applied d-1 times, coefficientwise
        fn fold_oracle(a: &PolyCoeffs, s: f64) -> Vec<f64> {
            let d = a.degree();
            let mut cur = a.dense();
            for _ in 1..d {
                let mut der = cur.clone();
                dense_deriv_in_place(&mut der);
                let off = cur.len() - der.len();
                for (i, &c) in der.iter().enumerate() {
                    cur[off + i] += s * c;
                }
            }
            cur
        }
        // Z^3, s=1: the oracle gives Z^3 + 6Z^2 + 6Z
        let z3 = poly(&[0.0, 0.0, 0.0]);
        let oracle = fold_oracle(&z3, 1.0);
        assert_eq!(&oracle[1..], &[6.0, 6.0, 0.0]);
        assert_eq!(nuij_poly(&z3, 1.0).coeffs(), &oracle[1..]);

        let cases = [
            (poly(&[1.0, -2.0, 0.5, 0.25]), 0.3),
            (poly(&[0.0, -1.0]), -2.0),
            (poly(&[3.0, 3.0, 1.0]), 0.05),
        ];
        for (a, s) in cases {
            let got = nuij_poly(&a, s);
            let want = fold_oracle(&a, s);
            for (g, w) in got.coeffs().iter().zip(&want[1..]) {
                assert!((g - w).abs() <= 1e-12 * (1.0 + w.abs()), "{g} vs {w}");
            }
        }
    }
}
