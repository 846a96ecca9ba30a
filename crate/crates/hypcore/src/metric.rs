//! The metric space of unordered real d-tuples: sorted-representative
//! storage, the permutation-minimizing distance (with a brute-force oracle),
//! and metric speed / q-energy of tuple-valued curves.

use alloc::format;
use alloc::vec::Vec;

use crate::curve::{first_derivative, Interval, SampledCurve};
use crate::error::{Error, Result};
use crate::math;

/// An unordered tuple of reals, stored by its increasingly sorted
/// representative; any permutation of the same multiset yields identical
/// storage, so equality and hashing are canonical.
#[derive(Debug, Clone, PartialEq)]
pub struct UnorderedTuple {
    sorted: Vec<f64>,
}

impl UnorderedTuple {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain("empty tuple".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("non-finite tuple entry".into()));
        }
        values.sort_by(f64::total_cmp);
        Ok(Self { sorted: values })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.sorted
    }
}

/// Tuple distance `(1/sqrt d) ||x_sorted - y_sorted||_2`; equals the minimum
/// over all pairings.
pub fn dist(x: &UnorderedTuple, y: &UnorderedTuple) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::Domain(format!(
            "dimension mismatch: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    let d = x.len() as f64;
    let mut acc = 0.0;
    for (a, b) in x.as_slice().iter().zip(y.as_slice()) {
        acc += (a - b) * (a - b);
    }
    Ok(math::sqrt(acc / d))
}

/// Maximum tuple dimension accepted by [`dist_bruteforce`].
pub const BRUTEFORCE_LIMIT: usize = 8;

/// Explicit minimum over all `d!` pairings; exists solely as the oracle for
/// [`dist`].
pub fn dist_bruteforce(x: &UnorderedTuple, y: &UnorderedTuple) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::Domain(format!(
            "dimension mismatch: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    let d = x.len();
    if d > BRUTEFORCE_LIMIT {
        return Err(Error::Domain(format!(
            "brute-force distance is guarded to d <= {BRUTEFORCE_LIMIT}, got {d}"
        )));
    }
    let xs = x.as_slice();
    let mut perm: Vec<f64> = y.as_slice().to_vec();
    let mut best = f64::INFINITY;
    // Heap's algorithm, non-recursive
    let mut counters = alloc::vec![0usize; d];
    let mut eval = |p: &[f64]| {
        let mut acc = 0.0;
        for (a, b) in xs.iter().zip(p) {
            acc += (a - b) * (a - b);
        }
        if acc < best {
            best = acc;
        }
    };
    eval(&perm);
    let mut i = 0;
    while i < d {
        if counters[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(counters[i], i);
            }
            eval(&perm);
            counters[i] += 1;
            i = 0;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
    Ok(math::sqrt(best / d as f64))
}

/// Metric speed of a tuple-valued curve per node, and its q-energies on a
/// subinterval.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveEnergyReport {
    /// `(1/sqrt d) ||derivative||_2` per node, on the curve's full grid
    pub speed: SampledCurve,
    /// `(q, integral of speed^q over the subinterval)`
    pub energy: Vec<(f64, f64)>,
}

/// Speed and q-energy of an ordered-tuple curve. Nodes where the one-sided
/// derivative stencils disagree (root crossings) contribute the average of
/// their one-sided speeds, matching the almost-everywhere reading.
pub fn metric_speed(
    roots_curve: &SampledCurve,
    j: Interval,
    qs: &[f64],
) -> Result<CurveEnergyReport> {
    let d = roots_curve.dim() as f64;
    let fd = first_derivative(roots_curve)?;
    let nodes = roots_curve.grid().num_nodes();
    let values: Vec<f64> = (0..nodes).map(|i| fd.ae_norm(i) / math::sqrt(d)).collect();
    let speed = SampledCurve::from_values(
        *roots_curve.grid(),
        1,
        values,
        crate::curve::CurveKind::Scalar,
    )?;

    let (i0, i1) = roots_curve.grid().index_range(j)?;
    let h = roots_curve.grid().h();
    let mut energy = Vec::with_capacity(qs.len());
    for &q in qs {
        if !(q >= 1.0 && q.is_finite()) {
            return Err(Error::Domain(format!("invalid exponent q = {q}")));
        }
        let mut acc = 0.0;
        for i in i0..=i1 {
            let w = if i == i0 || i == i1 { 0.5 } else { 1.0 };
            acc += w * math::powf(speed.value_scalar(i), q);
        }
        energy.push((q, acc * h));
    }
    Ok(CurveEnergyReport { speed, energy })
}
