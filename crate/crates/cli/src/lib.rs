//! Harness behind the `tri-lab` binary: matrix sources, reordering reports,
//! solves, benchmark sweeps and the invariant checker.

pub mod bench;
pub mod check;
pub mod gen;
pub mod reorder;
pub mod source;

pub use source::{LoadedSystem, MatrixSource};

/// Logical cores, or 1 if unknown.
pub fn default_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}
