use rayon::prelude::*;

use super::csr::CsrMatrix;
use super::perm::Permutation;
use crate::error::{Error, Result};

/// Sliced ELLPACK storage with slice width `C`.
///
/// Storage slot `s` holds matrix row `row_of_slot[s]`. Slots are grouped into
/// slices of `slice_width` consecutive slots; each slice stores
/// `slice_len[k]` entries per slot in column-major order, so entry `t` of slot
/// `s` in slice `k` sits at `slice_ptr[k] + t * slice_width + s % slice_width`.
/// Padding entries carry the value 0 and point at the slot's own row, so a
/// gather through `col_idx` never leaves `[0, n)`. Slots past the last real
/// row point at column 0.
#[derive(Clone, Debug, PartialEq)]
pub struct SellMatrix {
    n: usize,
    n_padded: usize,
    slice_width: usize,
    slice_ptr: Vec<usize>,
    slice_len: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
    row_of_slot: Vec<usize>,
    /// Real entries per slot; the rest of the slot's slice row is padding.
    slot_nnz: Vec<usize>,
}

/// Packs `m` into SELL with the given slice width. `row_order` places matrix
/// row `i` at storage slot `row_order(i)`; `None` keeps the natural order.
pub fn csr_to_sell(
    m: &CsrMatrix,
    slice_width: usize,
    row_order: Option<&Permutation>,
) -> Result<SellMatrix> {
    if slice_width == 0 {
        return Err(Error::InvalidParameter("slice width must be >= 1".into()));
    }
    let n = m.n();
    if let Some(p) = row_order {
        if p.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: p.len(),
            });
        }
    }
    let n_slices = n.div_ceil(slice_width);
    let n_padded = n_slices * slice_width;
    let row_of_slot: Vec<usize> = (0..n_padded)
        .map(|s| match (row_order, s < n) {
            (Some(p), true) => p.apply_inverse(s),
            (None, true) => s,
            (_, false) => usize::MAX,
        })
        .collect();
    let slot_nnz: Vec<usize> = row_of_slot
        .iter()
        .map(|&r| if r == usize::MAX { 0 } else { m.row_nnz(r) })
        .collect();

    let mut slice_ptr = Vec::with_capacity(n_slices + 1);
    let mut slice_len = Vec::with_capacity(n_slices);
    slice_ptr.push(0);
    for k in 0..n_slices {
        let len = slot_nnz[k * slice_width..(k + 1) * slice_width]
            .iter()
            .copied()
            .max()
            .unwrap_or(0);
        slice_len.push(len);
        slice_ptr.push(slice_ptr[k] + len * slice_width);
    }
    let total = slice_ptr[n_slices];
    let mut col_idx = vec![0usize; total];
    let mut values = vec![0.0; total];
    for k in 0..n_slices {
        for lane in 0..slice_width {
            let slot = k * slice_width + lane;
            let row = row_of_slot[slot];
            let (cols, vals) = if row == usize::MAX {
                (&[][..], &[][..])
            } else {
                m.row(row)
            };
            let fill_col = if row == usize::MAX { 0 } else { row };
            for t in 0..slice_len[k] {
                let at = slice_ptr[k] + t * slice_width + lane;
                if t < cols.len() {
                    col_idx[at] = cols[t];
                    values[at] = vals[t];
                } else {
                    col_idx[at] = fill_col;
                }
            }
        }
    }
    Ok(SellMatrix {
        n,
        n_padded,
        slice_width,
        slice_ptr,
        slice_len,
        col_idx,
        values,
        row_of_slot,
        slot_nnz,
    })
}

impl SellMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn n_padded(&self) -> usize {
        self.n_padded
    }

    pub fn slice_width(&self) -> usize {
        self.slice_width
    }

    pub fn n_slices(&self) -> usize {
        self.slice_len.len()
    }

    pub fn slice_ptr(&self) -> &[usize] {
        &self.slice_ptr
    }

    pub fn slice_len(&self) -> &[usize] {
        &self.slice_len
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn row_of_slot(&self) -> &[usize] {
        &self.row_of_slot
    }

    /// Entries processed by a SELL sweep, padding included.
    pub fn stored_elements(&self) -> usize {
        self.values.len()
    }

    /// Real stored entries.
    pub fn nnz(&self) -> usize {
        self.slot_nnz.iter().sum()
    }

    /// Relative increase of processed elements over CSR.
    pub fn fill_overhead(&self) -> f64 {
        let nnz = self.nnz();
        if nnz == 0 {
            return 0.0;
        }
        self.stored_elements() as f64 / nnz as f64 - 1.0
    }

    /// Unpacks to CSR, dropping padding.
    pub fn to_csr(&self) -> CsrMatrix {
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); self.n];
        for k in 0..self.n_slices() {
            for lane in 0..self.slice_width {
                let slot = k * self.slice_width + lane;
                let row = self.row_of_slot[slot];
                if row == usize::MAX {
                    continue;
                }
                for t in 0..self.slot_nnz[slot] {
                    let at = self.slice_ptr[k] + t * self.slice_width + lane;
                    rows[row].push((self.col_idx[at], self.values[at]));
                }
            }
        }
        let mut row_ptr = vec![0];
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        for r in rows {
            for (j, v) in r {
                col_idx.push(j);
                values.push(v);
            }
            row_ptr.push(col_idx.len());
        }
        CsrMatrix::try_new(self.n, row_ptr, col_idx, values)
            .expect("SELL rows unpack to valid CSR rows")
    }

    pub fn spmv(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut y = vec![0.0; self.n];
        self.spmv_into(x, &mut y)?;
        Ok(y)
    }

    pub fn spmv_into(&self, x: &[f64], y: &mut [f64]) -> Result<()> {
        self.check(x, y)?;
        let mut acc = vec![0.0; self.slice_width];
        for k in 0..self.n_slices() {
            self.slice_product(k, x, &mut acc);
            self.scatter(k, &acc, y);
        }
        Ok(())
    }

    /// Slice-parallel SpMV on the current rayon pool.
    pub fn par_spmv_into(&self, x: &[f64], y: &mut [f64]) -> Result<()> {
        self.check(x, y)?;
        let w = self.slice_width;
        let natural = self.row_of_slot[..self.n].iter().enumerate().all(|(s, &r)| s == r);
        if natural {
            y.par_chunks_mut(w).enumerate().for_each(|(k, out)| {
                let mut acc = vec![0.0; w];
                self.slice_product(k, x, &mut acc);
                out.copy_from_slice(&acc[..out.len()]);
            });
        } else {
            let mut slots = vec![0.0; self.n_padded];
            slots.par_chunks_mut(w).enumerate().for_each(|(k, out)| {
                self.slice_product(k, x, out);
            });
            for (s, &row) in self.row_of_slot.iter().enumerate() {
                if row != usize::MAX {
                    y[row] = slots[s];
                }
            }
        }
        Ok(())
    }

    #[inline]
    fn slice_product(&self, k: usize, x: &[f64], acc: &mut [f64]) {
        let w = self.slice_width;
        acc.fill(0.0);
        let base = self.slice_ptr[k];
        for t in 0..self.slice_len[k] {
            let at = base + t * w;
            let cols = &self.col_idx[at..at + w];
            let vals = &self.values[at..at + w];
            for lane in 0..w {
                acc[lane] += vals[lane] * x[cols[lane]];
            }
        }
    }

    fn scatter(&self, k: usize, acc: &[f64], y: &mut [f64]) {
        for (lane, &v) in acc.iter().enumerate() {
            let row = self.row_of_slot[k * self.slice_width + lane];
            if row != usize::MAX {
                y[row] = v;
            }
        }
    }

    fn check(&self, x: &[f64], y: &[f64]) -> Result<()> {
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
