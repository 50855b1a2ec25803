use super::ic0::ic0_factorize;
use crate::error::Result;
use crate::sparse::{CsrMatrix, Permutation};

/// Tolerance on the entrywise relative deviation between the two factors.
pub const FACTOR_EQUIVALENCE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FactorEquivalence {
    pub equivalent: bool,
    /// Largest `|a - b| / max(|a|, |b|)` over the compared entries;
    /// infinite when the patterns differ.
    pub max_rel_dev: f64,
}

/// Compares factor-then-permute against permute-then-factor:
/// `P L(A) P^T` versus `L(P A P^T)`, entrywise including the diagonal.
pub fn factor_equivalence_check(a: &CsrMatrix, p: &Permutation, shift: f64) -> Result<FactorEquivalence> {
    let permuted = ic0_factorize(&a.permute(p)?, shift)?.lower_with_diagonal();
    let moved = ic0_factorize(a, shift)?.lower_with_diagonal();

    let mut max_rel_dev: f64 = 0.0;
    let mut matched = 0usize;
    for (i, j, v) in moved.triplets() {
        let (pi, pj) = (p.apply(i), p.apply(j));
        match permuted.get(pi, pj) {
            Some(u) if pj <= pi => {
                matched += 1;
                let scale = v.abs().max(u.abs());
                if scale > 0.0 {
                    max_rel_dev = max_rel_dev.max((v - u).abs() / scale);
                }
            }
            _ => {
                max_rel_dev = f64::INFINITY;
                break;
            }
        }
    }
    if matched != permuted.nnz() {
        max_rel_dev = f64::INFINITY;
    }
    Ok(FactorEquivalence {
        equivalent: max_rel_dev <= FACTOR_EQUIVALENCE_TOL,
        max_rel_dev,
    })
}
