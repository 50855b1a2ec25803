use super::csr::CsrMatrix;
use crate::error::{Error, Result};

/// Coordinate-format square matrix as produced by ingestion.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CooMatrix {
    n: usize,
    entries: Vec<(usize, usize, f64)>,
    /// Off-diagonal entries with value zero dropped by [`CooMatrix::normalize`].
    pub dropped_zeros: usize,
}

impl CooMatrix {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            entries: Vec::new(),
            dropped_zeros: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(usize, usize, f64)] {
        &self.entries
    }

    pub fn push(&mut self, row: usize, col: usize, value: f64) -> Result<()> {
        if row >= self.n || col >= self.n {
            return Err(Error::InvalidMatrix(format!(
                "entry ({row}, {col}) out of range for n = {}",
                self.n
            )));
        }
        self.entries.push((row, col, value));
        Ok(())
    }

    /// Sorts row-major, sums duplicates and drops zero-valued off-diagonals.
    pub fn normalize(&mut self) {
        self.entries
            .sort_unstable_by_key(|e| (e.0, e.1));
        let mut merged: Vec<(usize, usize, f64)> = Vec::with_capacity(self.entries.len());
        for &(i, j, v) in &self.entries {
            match merged.last_mut() {
                Some(last) if last.0 == i && last.1 == j => last.2 += v,
                _ => merged.push((i, j, v)),
            }
        }
        let before = merged.len();
        merged.retain(|&(i, j, v)| i == j || v != 0.0);
        self.dropped_zeros += before - merged.len();
        self.entries = merged;
    }
}

/// Converts to CSR, summing duplicates and inserting an explicit zero on
/// every row that lacks a diagonal. Returns the rows that received one.
pub fn coo_to_csr(m: &CooMatrix) -> (CsrMatrix, Vec<usize>) {
    let n = m.n();
    let mut entries = m.entries().to_vec();
    let mut has_diag = vec![false; n];
    for &(i, j, _) in &entries {
        if i == j {
            has_diag[i] = true;
        }
    }
    let missing: Vec<usize> = (0..n).filter(|&i| !has_diag[i]).collect();
    entries.extend(missing.iter().map(|&i| (i, i, 0.0)));
    entries.sort_unstable_by_key(|e| (e.0, e.1));

    let mut row_ptr = vec![0usize; n + 1];
    let mut col_idx = Vec::with_capacity(entries.len());
    let mut values: Vec<f64> = Vec::with_capacity(entries.len());
    let mut last: Option<(usize, usize)> = None;
    for (i, j, v) in entries {
        if last == Some((i, j)) {
            *values.last_mut().expect("duplicate follows an entry") += v;
            continue;
        }
        last = Some((i, j));
        row_ptr[i + 1] += 1;
        col_idx.push(j);
        values.push(v);
    }
    for i in 0..n {
        row_ptr[i + 1] += row_ptr[i];
    }
    let csr = CsrMatrix::try_new(n, row_ptr, col_idx, values)
        .expect("sorted in-range coordinates form a valid CSR matrix");
    (csr, missing)
}
