use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::csr::CsrMatrix;
use crate::error::{Error, Result};

/// Five-point Laplacian on an `nx` by `ny` grid (row-major numbering, 4 on the
/// diagonal, -1 to each grid neighbor) with an all-ones right-hand side.
pub fn gen_laplacian_5pt(nx: usize, ny: usize) -> Result<(CsrMatrix, Vec<f64>)> {
    if nx < 2 || ny < 2 {
        return Err(Error::InvalidParameter(format!(
            "grid must be at least 2x2, got {nx}x{ny}"
        )));
    }
    let n = nx * ny;
    let mut row_ptr = Vec::with_capacity(n + 1);
    row_ptr.push(0);
    let mut col_idx = Vec::with_capacity(5 * n);
    let mut values = Vec::with_capacity(5 * n);
    for y in 0..ny {
        for x in 0..nx {
            let i = y * nx + x;
            let mut push = |j: usize, v: f64| {
                col_idx.push(j);
                values.push(v);
            };
            if y > 0 {
                push(i - nx, -1.0);
            }
            if x > 0 {
                push(i - 1, -1.0);
            }
            push(i, 4.0);
            if x + 1 < nx {
                push(i + 1, -1.0);
            }
            if y + 1 < ny {
                push(i + nx, -1.0);
            }
            row_ptr.push(col_idx.len());
        }
    }
    let a = CsrMatrix::try_new(n, row_ptr, col_idx, values)?;
    Ok((a, vec![1.0; n]))
}

/// Random symmetric, strictly diagonally dominant matrix with positive
/// diagonal (hence SPD). Each pair `i < j` is coupled with probability
/// `density`; off-diagonal values are uniform in `[-1, -0.1] ∪ [0.1, 1]`.
pub fn gen_random_spd(n: usize, density: f64, seed: u64) -> Result<CsrMatrix> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::InvalidParameter(format!("density {density} not in [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                let mag: f64 = rng.gen_range(0.1..1.0);
                let v = if rng.gen_bool(0.5) { mag } else { -mag };
                rows[i].push((j, v));
                rows[j].push((i, v));
            }
        }
    }
    let mut row_ptr = vec![0];
    let mut col_idx = Vec::new();
    let mut values = Vec::new();
    for (i, row) in rows.iter_mut().enumerate() {
        let off: f64 = row.iter().map(|&(_, v)| v.abs()).sum();
        row.push((i, off + rng.gen_range(0.5..1.5)));
        row.sort_unstable_by_key(|&(j, _)| j);
        for &(j, v) in row.iter() {
            col_idx.push(j);
            values.push(v);
        }
        row_ptr.push(col_idx.len());
    }
    CsrMatrix::try_new(n, row_ptr, col_idx, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_grid_has_three_entries_per_row() {
        let (a, b) = gen_laplacian_5pt(2, 2).unwrap();
        assert_eq!(a.n(), 4);
        assert!((0..4).all(|i| a.row_nnz(i) == 3));
        assert_eq!(a.nnz(), 12);
        assert_eq!(b, vec![1.0; 4]);
    }

    #[test]
    fn three_by_three_grid_nnz_matches_edge_count() {
        // 9 diagonals plus two entries for each of the 12 grid edges
        let (a, _) = gen_laplacian_5pt(3, 3).unwrap();
        let edges = 3 * 2 + 3 * 2;
        assert_eq!(a.nnz(), 9 + 2 * edges);
        assert_eq!(a.nnz(), 33);
    }

    #[test]
    fn interior_rows_annihilate_constants() {
        let (a, _) = gen_laplacian_5pt(5, 4).unwrap();
        let y = a.spmv(&vec![2.5; 20]).unwrap();
        for gy in 1..3 {
            for gx in 1..4 {
                assert_eq!(y[gy * 5 + gx], 0.0);
            }
        }
    }

    #[test]
    fn degenerate_grid_is_rejected() {
        assert!(gen_laplacian_5pt(1, 5).is_err());
    }

    #[test]
    fn random_spd_is_symmetric_and_seeded() {
        let a = gen_random_spd(60, 0.05, 7).unwrap();
        assert!(a.is_structurally_symmetric());
        assert!(a.triplets().all(|(i, j, v)| a.get(j, i) == Some(v)));
        assert_eq!(a, gen_random_spd(60, 0.05, 7).unwrap());
    }
}
