//! The convergence and root-separation experiments, and deterministic CSV
//! emission.
//!
//! Row schema: `(n, metric, param, interval, value)`. For convergence runs
//! `n` is the sequence index (0 marks the limit family); for separation runs
//! `n` is the 1-based position in the `s` list and an `s_value` row records
//! the perturbation size itself.

use std::io::Write;

use hypcore::bounds::bronshtein_bound;
use hypcore::curve::{
    ck_norm, fd_derivative, holder_seminorm_seeded, lq_norm, sup_norm, Grid, SampledCurve,
};
use hypcore::expr::{eval_expr, Expr};
use hypcore::geom::{graph_area, zero_set_area, SampledField};
use hypcore::metric::metric_speed;
use hypcore::poly::{vieta, PolyCoeffs};
use hypcore::sturm::ordered_roots;
use hypcore::tschirn::nuij_poly;
use thiserror::Error;

use crate::family::{FamilySpec, Mode};

#[derive(Debug, Error)]
pub enum RunError {
    #[error("family is not hyperbolic at node {node} (x = {x}, n = {n}): {detail}")]
    NotHyperbolic {
        node: usize,
        x: f64,
        n: u32,
        detail: String,
    },
    #[error("expression error at node {node} (x = {x}, n = {n}): {detail}")]
    Eval {
        node: usize,
        x: f64,
        n: u32,
        detail: String,
    },
    #[error("numerical failure: {0}")]
    Numeric(String),
    #[error("non-finite value in row {metric} (n = {n})")]
    NonFinite { metric: String, n: u32 },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Run-time knobs shared by both experiment kinds.
#[derive(Debug, Clone)]
pub struct RunConfig {
    /// overrides the family file's cell count
    pub grid: Option<usize>,
    /// seed for the Hölder pair subsample
    pub seed: u64,
    /// number of worker threads over the sequence indices
    pub parallel: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            grid: None,
            seed: hypcore::curve::DEFAULT_SUBSAMPLE_SEED,
            parallel: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRow {
    pub n: u32,
    pub metric: String,
    pub param: Option<f64>,
    pub interval: &'static str,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    /// sorted by (metric, n, param)
    pub rows: Vec<ExperimentRow>,
}

impl ExperimentResult {
    /// Value of a unique row; panics in tests if the row is missing.
    pub fn value(&self, metric: &str, n: u32, param: Option<f64>) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.metric == metric && r.n == n && r.param == param)
            .map(|r| r.value)
    }

    fn sort_and_check(mut rows: Vec<ExperimentRow>) -> Result<Self, RunError> {
        for r in &rows {
            if !r.value.is_finite() {
                return Err(RunError::NonFinite {
                    metric: r.metric.clone(),
                    n: r.n,
                });
            }
        }
        rows.sort_by(|a, b| {
            (a.metric.as_str(), a.n, a.param.unwrap_or(f64::NEG_INFINITY))
                .partial_cmp(&(b.metric.as_str(), b.n, b.param.unwrap_or(f64::NEG_INFINITY)))
                .expect("finite keys")
        });
        Ok(ExperimentResult { rows })
    }
}

/// Samples the family at index `n` (`None` for the limit expressions) into a
/// coefficient curve; root mode evaluates the expressions as root functions
/// and takes signed elementary symmetric functions nodewise.
fn sample_family(
    spec: &FamilySpec,
    grid: Grid,
    n: Option<u32>,
) -> Result<SampledCurve, RunError> {
    let exprs: &[Expr] = match n {
        Some(_) => &spec.coeff,
        None => &spec.limit_coeff,
    };
    let n_val = n.map_or(0.0, f64::from);
    let n_tag = n.unwrap_or(0);
    let mut polys = Vec::with_capacity(grid.num_nodes());
    for i in 0..grid.num_nodes() {
        let x = grid.node(i);
        let mut vals = Vec::with_capacity(spec.degree);
        for e in exprs {
            let v = eval_expr(e, x, n_val).map_err(|err| RunError::Eval {
                node: i,
                x,
                n: n_tag,
                detail: err.to_string(),
            })?;
            vals.push(v);
        }
        let p = match spec.mode {
            Mode::Coefficients => PolyCoeffs::new(vals),
            Mode::Roots => vieta(&vals),
        }
        .map_err(|err| RunError::Eval {
            node: i,
            x,
            n: n_tag,
            detail: err.to_string(),
        })?;
        polys.push(p);
    }
    SampledCurve::from_polys(grid, &polys).map_err(|e| RunError::Numeric(e.to_string()))
}

/// Hyperbolicity is a hard precondition: failures abort with the node.
fn family_roots(a: &SampledCurve, n: u32) -> Result<SampledCurve, RunError> {
    let grid = *a.grid();
    let mut roots = Vec::with_capacity(grid.num_nodes());
    for i in 0..grid.num_nodes() {
        let p = PolyCoeffs::new(a.value(i).to_vec())
            .map_err(|e| RunError::Numeric(e.to_string()))?;
        let r = ordered_roots(&p, 1e-12).map_err(|e| RunError::NotHyperbolic {
            node: i,
            x: grid.node(i),
            n,
            detail: e.to_string(),
        })?;
        roots.push(r);
    }
    SampledCurve::from_root_vectors(grid, &roots).map_err(|e| RunError::Numeric(e.to_string()))
}

struct NRows(Vec<ExperimentRow>);

fn convergence_rows_for_n(
    spec: &FamilySpec,
    grid: Grid,
    limit_roots: &SampledCurve,
    limit_speed: &SampledCurve,
    limit_energy: &[(f64, f64)],
    seed: u64,
    n: u32,
) -> Result<NRows, RunError> {
    let inner = spec.inner;
    let mut rows = Vec::new();
    let a_n = sample_family(spec, grid, Some(n))?;
    let roots_n = family_roots(&a_n, n)?;
    let diff = limit_roots
        .sub(&roots_n)
        .map_err(|e| RunError::Numeric(e.to_string()))?;

    let push = |rows: &mut Vec<ExperimentRow>, metric: &str, param: Option<f64>, value: f64| {
        rows.push(ExperimentRow {
            n,
            metric: metric.into(),
            param,
            interval: "I0",
            value,
        });
    };

    let num = |e: hypcore::Error| RunError::Numeric(e.to_string());

    push(
        &mut rows,
        "linf_diff",
        None,
        sup_norm(&diff, inner).map_err(num)?,
    );
    for &q in &spec.qs {
        push(
            &mut rows,
            "w1q_diff",
            Some(q),
            hypcore::curve::w1q_norm(&diff, q, inner).map_err(num)?,
        );
    }
    for &g in &spec.gammas {
        push(
            &mut rows,
            "holder_diff",
            Some(g),
            holder_seminorm_seeded(&diff, g, inner, seed).map_err(num)?,
        );
    }
    push(
        &mut rows,
        "lip_diff",
        Some(1.0),
        holder_seminorm_seeded(&diff, 1.0, inner, seed).map_err(num)?,
    );

    let speed_n = metric_speed(&roots_n, inner, &spec.qs).map_err(num)?;
    let speed_diff = limit_speed
        .sub(&speed_n.speed)
        .map_err(|e| RunError::Numeric(e.to_string()))?;
    for (i, &q) in spec.qs.iter().enumerate() {
        push(
            &mut rows,
            "speed_diff",
            Some(q),
            lq_norm(&speed_diff, q, inner).map_err(num)?,
        );
        let gap = (limit_energy[i].1 - speed_n.energy[i].1).abs();
        push(&mut rows, "energy_diff", Some(q), gap);
    }

    let field = SampledField::from_curve(&roots_n.restrict(inner).map_err(num)?);
    for j in 0..spec.degree {
        push(
            &mut rows,
            "graph_area",
            Some((j + 1) as f64),
            graph_area(&field, j).map_err(num)?,
        );
    }
    push(
        &mut rows,
        "bronshtein_bound",
        None,
        bronshtein_bound(&a_n, spec.nest()).map_err(num)?,
    );
    Ok(NRows(rows))
}

/// The convergence experiment: for each `n`, Sobolev / sup / Hölder /
/// Lipschitz differences of the ordered-root curves against the limit family
/// on the inner interval, metric speed and energy differences, per-root graph
/// areas, and the Lipschitz coefficient bound. Limit-family rows carry `n=0`.
pub fn run_convergence(
    spec: &FamilySpec,
    cfg: &RunConfig,
) -> Result<ExperimentResult, RunError> {
    spec.validate().map_err(|e| RunError::Numeric(e.to_string()))?;
    let grid = spec
        .make_grid(cfg.grid)
        .map_err(|e| RunError::Numeric(e.to_string()))?;
    let num = |e: hypcore::Error| RunError::Numeric(e.to_string());

    let limit = sample_family(spec, grid, None)?;
    let limit_roots = family_roots(&limit, 0)?;
    let limit_speed = metric_speed(&limit_roots, spec.inner, &spec.qs).map_err(num)?;

    let mut rows: Vec<ExperimentRow> = Vec::new();
    let limit_field = SampledField::from_curve(&limit_roots.restrict(spec.inner).map_err(num)?);
    for j in 0..spec.degree {
        rows.push(ExperimentRow {
            n: 0,
            metric: "graph_area".into(),
            param: Some((j + 1) as f64),
            interval: "I0",
            value: graph_area(&limit_field, j).map_err(num)?,
        });
    }
    for &(q, e) in &limit_speed.energy {
        rows.push(ExperimentRow {
            n: 0,
            metric: "energy".into(),
            param: Some(q),
            interval: "I0",
            value: e,
        });
    }
    rows.push(ExperimentRow {
        n: 0,
        metric: "bronshtein_bound".into(),
        param: None,
        interval: "I0",
        value: bronshtein_bound(&limit, spec.nest()).map_err(num)?,
    });

    let workers = cfg.parallel.max(1);
    if workers == 1 {
        for &n in &spec.ns {
            let r = convergence_rows_for_n(
                spec,
                grid,
                &limit_roots,
                &limit_speed.speed,
                &limit_speed.energy,
                cfg.seed,
                n,
            )?;
            rows.extend(r.0);
        }
    } else {
        let results = std::sync::Mutex::new(Vec::new());
        let next = std::sync::atomic::AtomicUsize::new(0);
        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                    if i >= spec.ns.len() {
                        break;
                    }
                    let n = spec.ns[i];
                    let r = convergence_rows_for_n(
                        spec,
                        grid,
                        &limit_roots,
                        &limit_speed.speed,
                        &limit_speed.energy,
                        cfg.seed,
                        n,
                    );
                    results.lock().expect("worker poisoned").push(r);
                });
            }
        });
        for r in results.into_inner().expect("worker poisoned") {
            rows.extend(r?.0);
        }
    }
    ExperimentResult::sort_and_check(rows)
}

/// The root-separation experiment on the limit family: applies
/// `(1 + s d/dZ)^{d-1}` nodewise for each `s`, then records coefficient
/// `C^d` convergence, nodewise minimum root gaps, a second-difference
/// smoothness proxy, Sobolev root convergence, and zero-set areas.
pub fn run_nuij(
    spec: &FamilySpec,
    s_list: &[f64],
    cfg: &RunConfig,
) -> Result<ExperimentResult, RunError> {
    spec.validate().map_err(|e| RunError::Numeric(e.to_string()))?;
    if s_list.is_empty() {
        return Err(RunError::Numeric("empty s list".into()));
    }
    let grid = spec
        .make_grid(cfg.grid)
        .map_err(|e| RunError::Numeric(e.to_string()))?;
    let num = |e: hypcore::Error| RunError::Numeric(e.to_string());
    let inner = spec.inner;

    let limit = sample_family(spec, grid, None)?;
    let limit_roots = family_roots(&limit, 0)?;
    let limit_field = SampledField::from_curve(&limit_roots.restrict(inner).map_err(num)?);

    let mut rows: Vec<ExperimentRow> = vec![ExperimentRow {
        n: 0,
        metric: "zero_set_area".into(),
        param: None,
        interval: "I0",
        value: zero_set_area(&limit_field, false).map_err(num)?,
    }];

    for (idx, &s) in s_list.iter().enumerate() {
        let n = (idx + 1) as u32;
        let mut polys = Vec::with_capacity(grid.num_nodes());
        for i in 0..grid.num_nodes() {
            let p = PolyCoeffs::new(limit.value(i).to_vec()).map_err(num)?;
            polys.push(nuij_poly(&p, s));
        }
        let a_s = SampledCurve::from_polys(grid, &polys).map_err(num)?;
        let roots_s = family_roots(&a_s, n)?;

        let mut push = |metric: &str, param: Option<f64>, value: f64| {
            rows.push(ExperimentRow {
                n,
                metric: metric.into(),
                param,
                interval: "I0",
                value,
            });
        };

        push("s_value", None, s);

        let coeff_diff = limit.sub(&a_s).map_err(|e| RunError::Numeric(e.to_string()))?;
        push(
            "cd_coeff_diff",
            None,
            ck_norm(&coeff_diff, spec.degree, inner).map_err(num)?,
        );

        // strict separation at every node
        let mut min_gap = f64::INFINITY;
        let (i0, i1) = grid.index_range(inner).map_err(num)?;
        for i in i0..=i1 {
            let v = roots_s.value(i);
            for w in v.windows(2) {
                min_gap = min_gap.min(w[1] - w[0]);
            }
        }
        if spec.degree >= 2 {
            push("min_root_gap", None, min_gap);
        }

        // smoothness proxy: second differences of the root curves stay bounded
        let d2 = fd_derivative(&roots_s, 2).map_err(num)?;
        push("root_curve_c2", None, sup_norm(&d2, inner).map_err(num)?);

        let root_diff = limit_roots
            .sub(&roots_s)
            .map_err(|e| RunError::Numeric(e.to_string()))?;
        for &q in &spec.qs {
            push(
                "w1q_root_diff",
                Some(q),
                hypcore::curve::w1q_norm(&root_diff, q, inner).map_err(num)?,
            );
        }

        let field = SampledField::from_curve(&roots_s.restrict(inner).map_err(num)?);
        push(
            "zero_set_area",
            None,
            zero_set_area(&field, s != 0.0).map_err(num)?,
        );
    }
    ExperimentResult::sort_and_check(rows)
}

/// Writes the CSV (`n,metric,param,interval,value`; 17 significant digits;
/// LF line endings).
pub fn emit_csv(result: &ExperimentResult, out: &mut impl Write) -> std::io::Result<()> {
    out.write_all(b"n,metric,param,interval,value\n")?;
    for r in &result.rows {
        let param = r.param.map(|p| format!("{p}")).unwrap_or_default();
        writeln!(out, "{},{},{},{},{:.16e}", r.n, r.metric, param, r.interval, r.value)?;
    }
    Ok(())
}

pub fn emit_csv_string(result: &ExperimentResult) -> String {
    let mut buf = Vec::new();
    emit_csv(result, &mut buf).expect("in-memory write");
    String::from_utf8(buf).expect("ascii output")
}

/// Writes the CSV to a file path.
pub fn emit_csv_path(
    result: &ExperimentResult,
    path: impl AsRef<std::path::Path>,
) -> std::io::Result<()> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    emit_csv(result, &mut w)
}
