#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trilab::precond::IcFactor;
use trilab::sparse::CsrMatrix;

pub const GRID_SIDES: [usize; 3] = [32, 64, 100];
pub const BLOCK_SIZES: [usize; 3] = [4, 8, 16];
pub const SIMD_WIDTHS: [usize; 3] = [2, 4, 8];
pub const THREAD_COUNTS: [usize; 4] = [1, 2, 4, 8];

pub fn dense(a: &CsrMatrix) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(a.n(), a.n());
    for (i, j, v) in a.triplets() {
        m[(i, j)] += v;
    }
    m
}

/// Direct solve through a dense Cholesky factorization.
pub fn dense_solve(a: &CsrMatrix, b: &[f64]) -> Vec<f64> {
    let chol = dense(a).cholesky().expect("matrix is SPD");
    chol.solve(&DVector::from_column_slice(b)).as_slice().to_vec()
}

pub fn random_vector(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

pub fn max_rel_diff(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    let scale = y.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    x.iter().zip(y).fold(0.0f64, |m, (a, b)| m.max((a - b).abs())) / scale
}

/// Checks `(L L^T)_ij == a'_ij` on the lower pattern of `a' = a + shift*diag(a)`.
///
/// Returns whether `pattern(L)` equals the lower pattern of `a`, and the
/// largest deviation scaled by `sqrt(|a'_ii a'_jj|)`.
pub fn ic_defining_property(a: &CsrMatrix, shift: f64, f: &IcFactor) -> (bool, f64) {
    let l = f.lower_with_diagonal();
    let lower = a.lower_triangle(true);
    let same_pattern = l.row_ptr() == lower.row_ptr() && l.col_idx() == lower.col_idx();
    let diag: Vec<f64> = a.diagonal().iter().map(|d| d * (1.0 + shift)).collect();
    let mut worst: f64 = 0.0;
    for (i, j, v) in lower.triplets() {
        let target = if i == j { diag[i] } else { v };
        let (ci, vi) = l.row(i);
        let (cj, vj) = l.row(j);
        let mut sum = 0.0;
        let (mut p, mut q) = (0, 0);
        while p < ci.len() && q < cj.len() {
            match ci[p].cmp(&cj[q]) {
                std::cmp::Ordering::Less => p += 1,
                std::cmp::Ordering::Greater => q += 1,
                std::cmp::Ordering::Equal => {
                    sum += vi[p] * vj[q];
                    p += 1;
                    q += 1;
                }
            }
        }
        let scale = (diag[i] * diag[j]).abs().sqrt();
        worst = worst.max((sum - target).abs() / scale);
    }
    (same_pattern, worst)
}
