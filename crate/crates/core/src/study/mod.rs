//! Manufactured-solution cases, error norms, and convergence studies.

mod case;
mod convergence;
mod norms;

pub use case::{CaseName, ModelCase};
pub use convergence::{
    format_error, order, run_convergence, solve_level, solve_mesh, ConvergenceRow, ConvergenceTable, LevelResult,
    StudyConfig, Timings, STUDY_LEVELS,
};
pub use norms::{discrete_h2_norm, energy_norm, error_norms, ErrorNorms};
