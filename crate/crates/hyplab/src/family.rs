//! Family definitions: a flat `key = value` file format describing a
//! parameter-dependent polynomial family, its limit, the interval data, and
//! the exponent lists for the convergence metrics.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use hypcore::curve::{Grid, Interval, IntervalNest};
use hypcore::expr::{parse, Expr};
use thiserror::Error;

/// Whether the per-`j` expressions define coefficients directly or root
/// functions (root mode builds coefficients nodewise from the roots).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Coefficients,
    Roots,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Coefficients => write!(f, "coefficients"),
            Mode::Roots => write!(f, "roots"),
        }
    }
}

/// A family `a(x, n)` with an explicit limit family `a(x)`, sampled on
/// `grid` cells over `interval`, with the nested pair `inner` inside `outer`
/// for norm estimation.
#[derive(Debug, Clone)]
pub struct FamilySpec {
    pub degree: usize,
    pub interval: Interval,
    pub inner: Interval,
    pub outer: Interval,
    pub grid: usize,
    pub ns: Vec<u32>,
    pub qs: Vec<f64>,
    pub gammas: Vec<f64>,
    pub mode: Mode,
    /// one expression per `j = 1..=degree`, over `x` and `n`
    pub coeff: Vec<Expr>,
    /// the limit family (must not reference `n`)
    pub limit_coeff: Vec<Expr>,
}

impl FamilySpec {
    pub fn nest(&self) -> IntervalNest {
        IntervalNest {
            inner: self.inner,
            outer: self.outer,
        }
    }

    pub fn make_grid(&self, cells_override: Option<usize>) -> Result<Grid, SpecError> {
        let cells = cells_override.unwrap_or(self.grid);
        Grid::new(self.interval.lo, self.interval.hi, cells)
            .map_err(|e| SpecError::Invalid(format!("grid: {e}")))
    }

    /// Validates the cross-field invariants; every violation names its field.
    pub fn validate(&self) -> Result<(), SpecError> {
        let d = self.degree;
        if d < 1 {
            return Err(SpecError::Invalid("degree: must be at least 1".into()));
        }
        if self.coeff.len() != d {
            return Err(SpecError::Invalid(format!(
                "coeff: expected {d} expressions, found {}",
                self.coeff.len()
            )));
        }
        if self.limit_coeff.len() != d {
            return Err(SpecError::Invalid(format!(
                "limit.coeff: expected {d} expressions, found {}",
                self.limit_coeff.len()
            )));
        }
        for (j, e) in self.limit_coeff.iter().enumerate() {
            if e.uses_n() {
                return Err(SpecError::Invalid(format!(
                    "limit.coeff.{}: the limit family must not reference n",
                    j + 1
                )));
            }
        }
        if self.interval.lo >= self.interval.hi {
            return Err(SpecError::Invalid("interval: empty".into()));
        }
        if !(self.interval.lo <= self.outer.lo && self.outer.hi <= self.interval.hi) {
            return Err(SpecError::Invalid(
                "outer: must lie inside interval".into(),
            ));
        }
        if !(self.outer.lo < self.inner.lo && self.inner.hi < self.outer.hi) {
            return Err(SpecError::Invalid(
                "inner: must lie strictly inside outer".into(),
            ));
        }
        if self.grid < 2 * (d + 1) {
            return Err(SpecError::Invalid(format!(
                "grid: need at least {} cells for degree {d}",
                2 * (d + 1)
            )));
        }
        if self.ns.is_empty() {
            return Err(SpecError::Invalid("ns: must be nonempty".into()));
        }
        if self.ns.iter().any(|&n| n < 1) {
            return Err(SpecError::Invalid("ns: indices must be >= 1".into()));
        }
        if self.qs.iter().any(|&q| !(q >= 1.0 && q.is_finite())) {
            return Err(SpecError::Invalid("qs: exponents must be in [1, inf)".into()));
        }
        if self.gammas.iter().any(|&g| !(g > 0.0 && g <= 1.0)) {
            return Err(SpecError::Invalid(
                "gammas: exponents must be in (0, 1]".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("{file}:{line}: {message}")]
    Parse {
        file: String,
        line: usize,
        message: String,
    },
    #[error("invalid family definition: {0}")]
    Invalid(String),
}

fn parse_pair(value: &str) -> Option<(f64, f64)> {
    let mut parts = value.split(',').map(str::trim);
    let lo = parts.next()?.parse().ok()?;
    let hi = parts.next()?.parse().ok()?;
    if parts.next().is_some() {
        return None;
    }
    Some((lo, hi))
}

/// Parses `1..64` ranges and comma lists of indices (mixable: `1..8, 16, 32`).
fn parse_ns(value: &str) -> Option<Vec<u32>> {
    let mut out = Vec::new();
    for item in value.split(',') {
        let item = item.trim();
        if let Some((a, b)) = item.split_once("..") {
            let a: u32 = a.trim().parse().ok()?;
            let b: u32 = b.trim().parse().ok()?;
            if a > b {
                return None;
            }
            out.extend(a..=b);
        } else {
            out.push(item.parse().ok()?);
        }
    }
    Some(out)
}

fn parse_floats(value: &str) -> Option<Vec<f64>> {
    value
        .split(',')
        .map(|s| s.trim().parse().ok())
        .collect::<Option<Vec<f64>>>()
}

/// Parses the flat `key = value` format. Lines starting with `#` and blank
/// lines are ignored.
pub fn parse_spec(text: &str, file: &str) -> Result<FamilySpec, SpecError> {
    let mut keys: BTreeMap<String, (usize, String)> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| SpecError::Parse {
            file: file.into(),
            line: idx + 1,
            message: "expected 'key = value'".into(),
        })?;
        let key = key.trim().to_string();
        if keys
            .insert(key.clone(), (idx + 1, value.trim().to_string()))
            .is_some()
        {
            return Err(SpecError::Parse {
                file: file.into(),
                line: idx + 1,
                message: format!("duplicate key '{key}'"),
            });
        }
    }

    let take = |k: &str| -> Result<(usize, String), SpecError> {
        keys.get(k).cloned().ok_or_else(|| SpecError::Parse {
            file: file.into(),
            line: 0,
            message: format!("missing key '{k}'"),
        })
    };
    let bad = |line: usize, msg: String| SpecError::Parse {
        file: file.into(),
        line,
        message: msg,
    };

    let (line, v) = take("degree")?;
    let degree: usize = v
        .parse()
        .map_err(|_| bad(line, format!("degree: expected an integer, found '{v}'")))?;

    let (line, v) = take("interval")?;
    let (lo, hi) =
        parse_pair(&v).ok_or_else(|| bad(line, format!("interval: expected 'lo, hi', found '{v}'")))?;
    let interval = Interval::new(lo, hi).map_err(|e| bad(line, format!("interval: {e}")))?;
    let (line, v) = take("inner")?;
    let (lo, hi) =
        parse_pair(&v).ok_or_else(|| bad(line, format!("inner: expected 'lo, hi', found '{v}'")))?;
    let inner = Interval::new(lo, hi).map_err(|e| bad(line, format!("inner: {e}")))?;
    let (line, v) = take("outer")?;
    let (lo, hi) =
        parse_pair(&v).ok_or_else(|| bad(line, format!("outer: expected 'lo, hi', found '{v}'")))?;
    let outer = Interval::new(lo, hi).map_err(|e| bad(line, format!("outer: {e}")))?;

    let (line, v) = take("grid")?;
    let grid: usize = v
        .parse()
        .map_err(|_| bad(line, format!("grid: expected an integer, found '{v}'")))?;

    let (line, v) = take("ns")?;
    let ns = parse_ns(&v).ok_or_else(|| bad(line, format!("ns: expected indices, found '{v}'")))?;
    let (line, v) = take("qs")?;
    let qs =
        parse_floats(&v).ok_or_else(|| bad(line, format!("qs: expected floats, found '{v}'")))?;
    let (line, v) = take("gammas")?;
    let gammas = parse_floats(&v)
        .ok_or_else(|| bad(line, format!("gammas: expected floats, found '{v}'")))?;

    let (line, v) = take("mode")?;
    let mode = match v.as_str() {
        "coefficients" => Mode::Coefficients,
        "roots" => Mode::Roots,
        other => {
            return Err(bad(
                line,
                format!("mode: expected 'coefficients' or 'roots', found '{other}'"),
            ))
        }
    };

    let mut coeff = Vec::with_capacity(degree);
    let mut limit_coeff = Vec::with_capacity(degree);
    for j in 1..=degree {
        for (prefix, out) in [("coeff", &mut coeff), ("limit.coeff", &mut limit_coeff)] {
            let key = format!("{prefix}.{j}");
            let (line, v) = take(&key)?;
            let e = parse(&v).map_err(|e| bad(line, format!("{key}: {e}")))?;
            out.push(e);
        }
    }

    // reject stray keys so typos are caught
    let known = |k: &str| -> bool {
        matches!(
            k,
            "degree" | "interval" | "inner" | "outer" | "grid" | "ns" | "qs" | "gammas" | "mode"
        ) || k
            .strip_prefix("coeff.")
            .or_else(|| k.strip_prefix("limit.coeff."))
            .is_some_and(|j| j.parse::<usize>().is_ok_and(|j| j >= 1 && j <= degree))
    };
    for (k, (line, _)) in &keys {
        if !known(k) {
            return Err(bad(*line, format!("unknown key '{k}'")));
        }
    }

    let spec = FamilySpec {
        degree,
        interval,
        inner,
        outer,
        grid,
        ns,
        qs,
        gammas,
        mode,
        coeff,
        limit_coeff,
    };
    spec.validate()?;
    Ok(spec)
}

/// Loads and validates a family definition file.
pub fn load_spec(path: impl AsRef<Path>) -> Result<FamilySpec, SpecError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    parse_spec(&text, &path.display().to_string())
}
