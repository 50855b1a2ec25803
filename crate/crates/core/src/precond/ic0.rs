use crate::error::{Error, Result};
use crate::ordering::OrderingKind;
use crate::sparse::CsrMatrix;

/// IC(0) factor `L L^T` of a (shifted) matrix.
///
/// `L` is kept as its strictly lower part plus the dense diagonal `d`; the
/// strictly upper part of `L^T` is stored as well for row-wise backward
/// substitution.
#[derive(Clone, Debug, PartialEq)]
pub struct IcFactor {
    lower: CsrMatrix,
    upper: CsrMatrix,
    diag: Vec<f64>,
    inv_diag: Vec<f64>,
    shift: f64,
    tag: OrderingKind,
}

impl IcFactor {
    /// Assembles a factor from its strictly lower part and diagonal.
    pub fn from_parts(lower: CsrMatrix, diag: Vec<f64>, shift: f64) -> Result<Self> {
        if diag.len() != lower.n() {
            return Err(Error::DimensionMismatch {
                expected: lower.n(),
                found: diag.len(),
            });
        }
        if lower.triplets().any(|(i, j, _)| j >= i) {
            return Err(Error::InvalidMatrix(
                "factor storage must be strictly lower triangular".into(),
            ));
        }
        if let Some((row, &pivot)) = diag.iter().enumerate().find(|(_, &d)| !(d > 0.0)) {
            return Err(Error::IcBreakdown { row, pivot });
        }
        let upper = lower.transpose();
        let inv_diag = diag.iter().map(|d| 1.0 / d).collect();
        Ok(Self {
            lower,
            upper,
            diag,
            inv_diag,
            shift,
            tag: OrderingKind::Natural,
        })
    }

    pub fn with_tag(mut self, tag: OrderingKind) -> Self {
        self.tag = tag;
        self
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    /// Strictly lower part of `L`.
    pub fn lower(&self) -> &CsrMatrix {
        &self.lower
    }

    /// Strictly upper part of `L^T`.
    pub fn upper(&self) -> &CsrMatrix {
        &self.upper
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn inv_diag(&self) -> &[f64] {
        &self.inv_diag
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn tag(&self) -> OrderingKind {
        self.tag
    }

    /// `L` including its diagonal.
    pub fn lower_with_diagonal(&self) -> CsrMatrix {
        let n = self.n();
        let mut row_ptr = vec![0];
        let mut col_idx = Vec::with_capacity(self.lower.nnz() + n);
        let mut values = Vec::with_capacity(self.lower.nnz() + n);
        for i in 0..n {
            let (cols, vals) = self.lower.row(i);
            col_idx.extend_from_slice(cols);
            values.extend_from_slice(vals);
            col_idx.push(i);
            values.push(self.diag[i]);
            row_ptr.push(col_idx.len());
        }
        CsrMatrix::try_new(n, row_ptr, col_idx, values).expect("lower rows stay sorted")
    }
}

/// Right-looking IC(0) with overwriting on the lower pattern of
/// `A' = A + shift * diag(A)`.
///
/// Column `k` is scaled by `1 / sqrt(a'_kk)`, then its outer product updates
/// the trailing columns, restricted to entries that exist in the pattern.
/// Fails with [`Error::IcBreakdown`] on the first pivot that is not positive.
pub fn ic0_factorize(a: &CsrMatrix, shift: f64) -> Result<IcFactor> {
    if !(shift >= 0.0) {
        return Err(Error::InvalidParameter(format!("shift {shift} must be >= 0")));
    }
    let n = a.n();
    // column k of the lower triangle = row k of its transpose, rows ascending
    let cols = a.lower_triangle(true).transpose();
    let col_ptr = cols.row_ptr().to_vec();
    let row_idx = cols.col_idx().to_vec();
    let mut val = cols.values().to_vec();
    for k in 0..n {
        let p = col_ptr[k];
        if p == col_ptr[k + 1] || row_idx[p] != k {
            return Err(Error::InvalidMatrix(format!("row {k} has no diagonal entry")));
        }
        val[p] *= 1.0 + shift;
    }

    const NONE: usize = usize::MAX;
    let mut slot = vec![NONE; n];
    for k in 0..n {
        let (head, end) = (col_ptr[k], col_ptr[k + 1]);
        let pivot = val[head];
        if !(pivot > 0.0) {
            return Err(Error::IcBreakdown { row: k, pivot });
        }
        let dk = pivot.sqrt();
        val[head] = dk;
        for v in &mut val[head + 1..end] {
            *v /= dk;
        }
        for p in head + 1..end {
            let j = row_idx[p];
            let l_jk = val[p];
            for q in col_ptr[j]..col_ptr[j + 1] {
                slot[row_idx[q]] = q;
            }
            for q in p..end {
                let target = slot[row_idx[q]];
                if target != NONE {
                    val[target] -= val[q] * l_jk;
                }
            }
            for q in col_ptr[j]..col_ptr[j + 1] {
                slot[row_idx[q]] = NONE;
            }
        }
    }

    let diag: Vec<f64> = (0..n).map(|k| val[col_ptr[k]]).collect();
    let factored = CsrMatrix::try_new(n, col_ptr, row_idx, val)?;
    let lower = factored.transpose().lower_triangle(false);
    IcFactor::from_parts(lower, diag, shift)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_takes_square_roots() {
        let a = CsrMatrix::from_dense(&[vec![4.0, 0.0], vec![0.0, 9.0]]).unwrap();
        let f = ic0_factorize(&a, 0.0).unwrap();
        assert_eq!(f.diag(), &[2.0, 3.0]);
        assert_eq!(f.lower().nnz(), 0);
    }

    #[test]
    fn two_by_two_matches_hand_cholesky() {
        let a = CsrMatrix::from_dense(&[vec![4.0, -1.0], vec![-1.0, 4.0]]).unwrap();
        let f = ic0_factorize(&a, 0.0).unwrap();
        assert_eq!(f.diag()[0], 2.0);
        assert_eq!(f.lower().get(1, 0), Some(-0.5));
        assert_eq!(f.diag()[1], (4.0f64 - 0.25).sqrt());
        assert_eq!(f.upper().get(0, 1), Some(-0.5));
    }

    #[test]
    fn shift_scales_the_diagonal() {
        let a = CsrMatrix::from_dense(&[vec![4.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let f = ic0_factorize(&a, 0.3).unwrap();
        assert!((f.diag()[0] - (5.2f64).sqrt()).abs() < 1e-15);
        assert!((f.diag()[1] - (1.3f64).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn indefinite_matrix_breaks_down() {
        let a = CsrMatrix::from_dense(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        match ic0_factorize(&a, 0.0) {
            Err(Error::IcBreakdown { row, pivot }) => {
                assert_eq!(row, 1);
                assert_eq!(pivot, -3.0);
            }
            other => panic!("expected breakdown, got {other:?}"),
        }
    }

    #[test]
    fn explicit_zero_diagonal_is_rejected() {
        let a = CsrMatrix::try_new(2, vec![0, 1, 2], vec![0, 1], vec![1.0, 0.0]).unwrap();
        assert!(matches!(
            ic0_factorize(&a, 0.3),
            Err(Error::IcBreakdown { row: 1, .. })
        ));
    }

    #[test]
    fn negative_shift_is_rejected() {
        assert!(ic0_factorize(&CsrMatrix::identity(2), -0.1).is_err());
    }
}
