use super::ic0::IcFactor;
use crate::error::{Error, Result};
use crate::ordering::{HbmcLayout, OrderingKind};
use crate::sparse::{csr_to_sell, CsrMatrix, SellMatrix};

/// HBMC factor in SELL storage with slice width `w`.
///
/// Slice `s` holds rows `s * w .. (s + 1) * w`, which is exactly level-2 step
/// `s % b_s` of level-1 block `s / b_s`. `lower` stores the strictly lower
/// rows of `L` for the forward sweep, `upper` the strictly upper rows of
/// `L^T` for the backward sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SellFactor {
    pub(crate) lower: SellMatrix,
    pub(crate) upper: SellMatrix,
    pub(crate) inv_diag: Vec<f64>,
    pub(crate) w: usize,
    pub(crate) b_s: usize,
}

impl SellFactor {
    /// Packs a factor computed on the padded, HBMC-ordered matrix.
    pub fn new(f: &IcFactor, layout: &HbmcLayout) -> Result<Self> {
        if f.tag() != OrderingKind::Hbmc {
            return Err(Error::LayoutMismatch(format!(
                "SELL factor needs an hbmc factor, got {}",
                f.tag()
            )));
        }
        if f.n() != layout.n_padded {
            return Err(Error::LayoutMismatch(format!(
                "factor has {} rows, layout has {} padded unknowns",
                f.n(),
                layout.n_padded
            )));
        }
        Ok(Self {
            lower: csr_to_sell(f.lower(), layout.w, None)?,
            upper: csr_to_sell(f.upper(), layout.w, None)?,
            inv_diag: f.inv_diag().to_vec(),
            w: layout.w,
            b_s: layout.b_s,
        })
    }

    pub fn n(&self) -> usize {
        self.inv_diag.len()
    }

    pub fn w(&self) -> usize {
        self.w
    }

    pub fn b_s(&self) -> usize {
        self.b_s
    }

    pub fn lower(&self) -> &SellMatrix {
        &self.lower
    }

    pub fn upper(&self) -> &SellMatrix {
        &self.upper
    }

    pub fn inv_diag(&self) -> &[f64] {
        &self.inv_diag
    }

    /// Strictly lower part of `L` unpacked to CSR.
    pub fn lower_csr(&self) -> CsrMatrix {
        self.lower.to_csr()
    }
}
