//! Global DOFs, boundary data, assembly, and solvers.

mod assemble;
mod boundary;
mod dofmap;
mod dump;
mod solve;
mod sparse;

pub use assemble::{assemble, element_load, AssembledSystem, InteriorRecovery};
pub use boundary::apply_boundary;
pub use dofmap::{build_dofmap, DofMap, WeakField};
pub use dump::{dump_system, rhs_path, write_matrix, write_rhs};
pub use solve::{conjugate_gradient, solve, solve_linear, Cholesky, Solution, SolveStats, SolverKind, CG_TOLERANCE};
pub use sparse::CscMatrix;
