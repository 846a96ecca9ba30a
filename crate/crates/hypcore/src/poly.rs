//! Monic real polynomial algebra: coefficient vectors, evaluation,
//! differentiation, Taylor shifts, and the elementary-symmetric-function map
//! from roots to coefficients.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// A monic real polynomial `P(Z) = Z^d + a_1 Z^{d-1} + ... + a_d`, stored by
/// its coefficient vector `(a_1, ..., a_d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyCoeffs {
    coeffs: Vec<f64>,
}

impl PolyCoeffs {
    /// Builds a monic polynomial from `(a_1, ..., a_d)`; `d = coeffs.len()`
    /// must be at least 1 and every entry finite.
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Domain("degree must be at least 1".into()));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::Domain("non-finite coefficient".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// `a_j` for `1 <= j <= d`.
    pub fn coeff(&self, j: usize) -> f64 {
        self.coeffs[j - 1]
    }

    /// `(a_1, ..., a_d)`.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Dense descending coefficient vector `[1, a_1, ..., a_d]`.
    pub fn dense(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.coeffs.len() + 1);
        v.push(1.0);
        v.extend_from_slice(&self.coeffs);
        v
    }

    /// Horner evaluation of `P(z)`.
    pub fn eval(&self, z: f64) -> f64 {
        let mut acc = 1.0;
        for &a in &self.coeffs {
            acc = acc * z + a;
        }
        acc
    }

    /// Compensated Horner evaluation; accurate as if computed in doubled
    /// precision, which keeps Newton polishing honest near clustered roots.
    pub fn eval_accurate(&self, z: f64) -> f64 {
        eval_accurate_dense_monic(&self.coeffs, z)
    }

    /// Derivative `P'`, split into a leading factor `d` and a monic part of
    /// degree `d - 1` (`None` when `d = 1`, where `P' = 1`).
    pub fn derivative(&self) -> Derivative {
        let d = self.degree();
        if d == 1 {
            return Derivative {
                factor: 1.0,
                monic: None,
            };
        }
        let coeffs = (1..d)
            .map(|j| (d - j) as f64 * self.coeffs[j - 1] / d as f64)
            .collect();
        Derivative {
            factor: d as f64,
            monic: Some(PolyCoeffs { coeffs }),
        }
    }

    /// `1 + max_j |a_j|`; every real root lies strictly inside
    /// `(-bound, bound)`.
    pub fn cauchy_bound(&self) -> f64 {
        1.0 + self
            .coeffs
            .iter()
            .fold(0.0f64, |m, &a| math::max(m, math::abs(a)))
    }

    /// Taylor shift: coefficients of `P(Z + t)`, computed by repeated
    /// synthetic division (exact in the sense of plain f64 Horner steps).
    pub fn shift(&self, t: f64) -> PolyCoeffs {
        let mut dense = self.dense();
        taylor_shift_dense(&mut dense, t);
        PolyCoeffs {
            coeffs: dense[1..].to_vec(),
        }
    }

    /// Coefficientwise product with another monic polynomial.
    pub fn mul(&self, other: &PolyCoeffs) -> PolyCoeffs {
        let a = self.dense();
        let b = other.dense();
        let mut out = vec![0.0; a.len() + b.len() - 1];
        for (i, &ai) in a.iter().enumerate() {
            for (j, &bj) in b.iter().enumerate() {
                out[i + j] += ai * bj;
            }
        }
        PolyCoeffs {
            coeffs: out[1..].to_vec(),
        }
    }
}

/// Result of [`PolyCoeffs::derivative`]: `P' = factor * monic`.
#[derive(Debug, Clone, PartialEq)]
pub struct Derivative {
    pub factor: f64,
    pub monic: Option<PolyCoeffs>,
}

/// Increasingly ordered real roots, with multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct RootVector {
    roots: Vec<f64>,
}

impl RootVector {
    /// Sorts the input; accepts any finite multiset of reals.
    pub fn new(mut roots: Vec<f64>) -> Result<Self> {
        if roots.iter().any(|r| !r.is_finite()) {
            return Err(Error::Domain("non-finite root".into()));
        }
        roots.sort_by(f64::total_cmp);
        Ok(Self { roots })
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.roots
    }

    /// Smallest gap between consecutive roots; `None` for degree 1.
    pub fn min_gap(&self) -> Option<f64> {
        self.roots
            .windows(2)
            .map(|w| w[1] - w[0])
            .min_by(f64::total_cmp)
    }

    /// `max - min`; zero for degree 1.
    pub fn spread(&self) -> f64 {
        match (self.roots.first(), self.roots.last()) {
            (Some(a), Some(b)) => b - a,
            _ => 0.0,
        }
    }
}

/// Coefficients of `prod_i (Z - x_i)`, i.e. the signed elementary symmetric
/// functions of the roots, built by iterated monic-factor multiplication.
pub fn vieta(roots: &[f64]) -> Result<PolyCoeffs> {
    if roots.is_empty() {
        return Err(Error::Domain("vieta needs at least one root".into()));
    }
    if roots.iter().any(|r| !r.is_finite()) {
        return Err(Error::Domain("non-finite root".into()));
    }
    // dense[0..=k] holds prod_{i<k} (Z - x_i) after step k
    let mut dense = vec![0.0; roots.len() + 1];
    dense[0] = 1.0;
    for (k, &r) in roots.iter().enumerate() {
        dense[k + 1] = 0.0;
        for j in (1..=k + 1).rev() {
            dense[j] -= r * dense[j - 1];
        }
    }
    Ok(PolyCoeffs {
        coeffs: dense[1..].to_vec(),
    })
}

/// In-place Taylor shift of a dense descending coefficient vector:
/// `p(Z) -> p(Z + t)` via d rounds of synthetic division.
pub(crate) fn taylor_shift_dense(dense: &mut [f64], t: f64) {
    let n = dense.len();
    for i in 1..n {
        for j in 1..=n - i {
            dense[j] += t * dense[j - 1];
        }
    }
}

/// Compensated Horner for a monic polynomial given `(a_1, ..., a_d)`.
pub(crate) fn eval_accurate_dense_monic(coeffs: &[f64], z: f64) -> f64 {
    let mut s = 1.0;
    let mut c = 0.0;
    for &a in coeffs {
        let (p, pe) = math::two_prod(s, z);
        let (t, se) = math::two_sum(p, a);
        s = t;
        c = c * z + (pe + se);
    }
    s + c
}

/// Compensated Horner for an arbitrary dense descending coefficient vector.
pub(crate) fn eval_accurate_dense(dense: &[f64], z: f64) -> f64 {
    let mut iter = dense.iter();
    let mut s = *iter.next().expect("non-empty polynomial");
    let mut c = 0.0;
    for &a in iter {
        let (p, pe) = math::two_prod(s, z);
        let (t, se) = math::two_sum(p, a);
        s = t;
        c = c * z + (pe + se);
    }
    s + c
}
