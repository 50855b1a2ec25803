use rayon::prelude::*;

use super::perm::Permutation;
use crate::error::{Error, Result};

/// Square compressed-row matrix with sorted, duplicate-free rows.
#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
    /// Position of the diagonal entry of each row, if stored.
    diag_ptr: Vec<Option<usize>>,
}

const SPMV_ROW_CHUNK: usize = 2048;

impl CsrMatrix {
    /// Validates the arrays and locates the diagonals.
    pub fn try_new(
        n: usize,
        row_ptr: Vec<usize>,
        col_idx: Vec<usize>,
        values: Vec<f64>,
    ) -> Result<Self> {
        if row_ptr.len() != n + 1 {
            return Err(Error::InvalidMatrix(format!(
                "row_ptr has length {} for n = {n}",
                row_ptr.len()
            )));
        }
        if row_ptr[0] != 0 || row_ptr[n] != col_idx.len() || col_idx.len() != values.len() {
            return Err(Error::InvalidMatrix(
                "row_ptr does not span the index/value arrays".into(),
            ));
        }
        let mut diag_ptr = vec![None; n];
        for i in 0..n {
            let (lo, hi) = (row_ptr[i], row_ptr[i + 1]);
            if lo > hi {
                return Err(Error::InvalidMatrix(format!("row_ptr decreases at row {i}")));
            }
            for k in lo..hi {
                let j = col_idx[k];
                if j >= n {
                    return Err(Error::InvalidMatrix(format!(
                        "column {j} out of range in row {i}"
                    )));
                }
                if k > lo && col_idx[k - 1] >= j {
                    return Err(Error::InvalidMatrix(format!(
                        "columns of row {i} are not strictly increasing"
                    )));
                }
                if j == i {
                    diag_ptr[i] = Some(k);
                }
            }
        }
        Ok(Self {
            n,
            row_ptr,
            col_idx,
            values,
            diag_ptr,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            values: vec![1.0; n],
            diag_ptr: (0..n).map(Some).collect(),
        }
    }

    /// Builds from a row-major dense array, keeping nonzeros only.
    pub fn from_dense(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut row_ptr = vec![0];
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if v != 0.0 {
                    col_idx.push(j);
                    values.push(v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Self::try_new(n, row_ptr, col_idx, values)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn diag_ptr(&self) -> &[Option<usize>] {
        &self.diag_ptr
    }

    #[inline]
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.col_idx[range.clone()], &self.values[range])
    }

    pub fn row_nnz(&self, i: usize) -> usize {
        self.row_ptr[i + 1] - self.row_ptr[i]
    }

    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        let (cols, vals) = self.row(i);
        cols.binary_search(&j).ok().map(|k| vals[k])
    }

    pub fn has_full_diagonal(&self) -> bool {
        self.diag_ptr.iter().all(Option::is_some)
    }

    /// Diagonal values, with 0 for rows lacking a stored diagonal.
    pub fn diagonal(&self) -> Vec<f64> {
        self.diag_ptr
            .iter()
            .map(|d| d.map_or(0.0, |k| self.values[k]))
            .collect()
    }

    /// Iterates `(row, col, value)` over stored entries in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| {
            let (cols, vals) = self.row(i);
            cols.iter().zip(vals).map(move |(&j, &v)| (i, j, v))
        })
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.n]; self.n];
        for (i, j, v) in self.triplets() {
            d[i][j] = v;
        }
        d
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut counts = vec![0usize; n + 1];
        for &j in &self.col_idx {
            counts[j + 1] += 1;
        }
        for j in 0..n {
            counts[j + 1] += counts[j];
        }
        let row_ptr = counts.clone();
        let mut next = counts;
        let mut col_idx = vec![0; self.nnz()];
        let mut values = vec![0.0; self.nnz()];
        for (i, j, v) in self.triplets() {
            let k = next[j];
            col_idx[k] = i;
            values[k] = v;
            next[j] += 1;
        }
        Self::try_new(n, row_ptr, col_idx, values).expect("transpose preserves validity")
    }

    /// Entries with `col < row` (or `col <= row` when `include_diagonal`).
    pub fn lower_triangle(&self, include_diagonal: bool) -> Self {
        self.filter(|i, j| j < i || (include_diagonal && i == j))
    }

    /// Entries with `col > row` (or `col >= row` when `include_diagonal`).
    pub fn upper_triangle(&self, include_diagonal: bool) -> Self {
        self.filter(|i, j| j > i || (include_diagonal && i == j))
    }

    fn filter(&self, keep: impl Fn(usize, usize) -> bool) -> Self {
        let mut row_ptr = Vec::with_capacity(self.n + 1);
        row_ptr.push(0);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        for i in 0..self.n {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                if keep(i, j) {
                    col_idx.push(j);
                    values.push(v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Self::try_new(self.n, row_ptr, col_idx, values).expect("filter preserves validity")
    }

    /// True if `(i, j)` stored implies `(j, i)` stored.
    pub fn is_structurally_symmetric(&self) -> bool {
        self.triplets().all(|(i, j, _)| self.get(j, i).is_some())
    }

    /// Appends `n_total - n` decoupled rows with unit diagonal.
    pub fn pad_identity(&self, n_total: usize) -> Result<Self> {
        if n_total < self.n {
            return Err(Error::InvalidParameter(format!(
                "cannot pad a {}-row matrix to {n_total} rows",
                self.n
            )));
        }
        let mut row_ptr = self.row_ptr.clone();
        let mut col_idx = self.col_idx.clone();
        let mut values = self.values.clone();
        for i in self.n..n_total {
            col_idx.push(i);
            values.push(1.0);
            row_ptr.push(col_idx.len());
        }
        Self::try_new(n_total, row_ptr, col_idx, values)
    }

    /// `P A P^T`: entry `(i, j)` moves to `(p(i), p(j))`.
    pub fn permute(&self, p: &Permutation) -> Result<Self> {
        if p.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: p.len(),
            });
        }
        let mut row_ptr = Vec::with_capacity(self.n + 1);
        row_ptr.push(0);
        let mut col_idx = Vec::with_capacity(self.nnz());
        let mut values = Vec::with_capacity(self.nnz());
        let mut scratch: Vec<(usize, f64)> = Vec::new();
        for new_row in 0..self.n {
            let (cols, vals) = self.row(p.apply_inverse(new_row));
            scratch.clear();
            scratch.extend(cols.iter().zip(vals).map(|(&j, &v)| (p.apply(j), v)));
            scratch.sort_unstable_by_key(|&(j, _)| j);
            for &(j, v) in &scratch {
                col_idx.push(j);
                values.push(v);
            }
            row_ptr.push(col_idx.len());
        }
        Self::try_new(self.n, row_ptr, col_idx, values)
    }

    pub fn spmv(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut y = vec![0.0; self.n];
        self.spmv_into(x, &mut y)?;
        Ok(y)
    }

    pub fn spmv_into(&self, x: &[f64], y: &mut [f64]) -> Result<()> {
        self.check_spmv(x, y)?;
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.row_dot(i, x);
        }
        Ok(())
    }

    /// Row-parallel SpMV on the current rayon pool; bit-identical to [`Self::spmv_into`].
    pub fn par_spmv_into(&self, x: &[f64], y: &mut [f64]) -> Result<()> {
        self.check_spmv(x, y)?;
        y.par_chunks_mut(SPMV_ROW_CHUNK)
            .enumerate()
            .for_each(|(c, chunk)| {
                let base = c * SPMV_ROW_CHUNK;
                for (k, yi) in chunk.iter_mut().enumerate() {
                    *yi = self.row_dot(base + k, x);
                }
            });
        Ok(())
    }

    #[inline]
    fn row_dot(&self, i: usize, x: &[f64]) -> f64 {
        let (cols, vals) = self.row(i);
        let mut acc = 0.0;
        for (&j, &v) in cols.iter().zip(vals) {
            acc += v * x[j];
        }
        acc
    }

    fn check_spmv(&self, x: &[f64], y: &[f64]) -> Result<()> {
        for len in [x.len(), y.len()] {
            if len != self.n {
                return Err(Error::DimensionMismatch {
                    expected: self.n,
                    found: len,
                });
            }
        }
        Ok(())
    }
}

/// Reorders the system: `Abar = P A P^T`, `bbar = P b`.
pub fn permute_system(a: &CsrMatrix, b: &[f64], p: &Permutation) -> Result<(CsrMatrix, Vec<f64>)> {
    if b.len() != a.n() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            found: b.len(),
        });
    }
    Ok((a.permute(p)?, p.permute(b)?))
}
