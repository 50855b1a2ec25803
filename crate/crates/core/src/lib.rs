//! Sparse IC(0)-preconditioned CG with parallel, vectorizable triangular solves.
//!
//! The crate builds three parallel orderings for the forward and backward
//! substitutions of an incomplete Cholesky preconditioner:
//!
//! * nodal multi-color ordering (MC), where unknowns of one color are solved
//!   concurrently;
//! * block multi-color ordering (BMC), where blocks of `b_s` unknowns are
//!   colored and blocks of one color are solved concurrently;
//! * hierarchical block multi-color ordering (HBMC), which reorders `w`
//!   same-colored BMC blocks by interleaving their members so each step of the
//!   substitution updates `w` independent rows at once.
//!
//! HBMC is equivalent to BMC: the secondary permutation keeps the relative
//! order of every structurally coupled pair of unknowns, so the factor, the
//! substitutions and the CG iterates are permutations of each other. The
//! [`ordering::check_er_condition`] checker and
//! [`precond::factor_equivalence_check`] make that property testable.

pub mod error;
pub mod ordering;
pub mod precond;
pub mod solver;
pub mod sparse;

pub use error::{Error, Result};
