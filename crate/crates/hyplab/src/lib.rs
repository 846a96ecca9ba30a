//! Experiment driver for convergence studies of hyperbolic polynomial
//! families: loads flat-file family definitions, runs the root-map
//! convergence and root-separation experiments, and emits deterministic CSV.

pub mod check;
pub mod corpus;
pub mod family;
pub mod runner;

pub use family::{load_spec, parse_spec, FamilySpec, Mode, SpecError};
pub use runner::{
    emit_csv, emit_csv_path, emit_csv_string, run_convergence, run_nuij, ExperimentResult,
    ExperimentRow, RunConfig, RunError,
};
