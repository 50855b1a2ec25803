//! IC(0)-preconditioned conjugate gradient over any of the orderings.

mod compare;
mod config;
mod pcg;
mod system;
mod vector;

pub use compare::{compare_convergence, ConvergenceComparison};
pub use config::{CgConfig, SpmvFormat};
pub use pcg::{pcg, pcg_prepared, SolveReport};
pub use system::PreparedSystem;
pub use vector::{dot, norm2};
