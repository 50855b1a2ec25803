use std::sync::Arc;

use super::config::{CgConfig, SpmvFormat};
use crate::error::{Error, Result};
use crate::ordering::{
    build_blocks, build_hbmc, color_blocks, greedy_color_nodes, OrderingKind,
};
use crate::precond::{ic0_factorize, IcPreconditioner, KernelPool};
use crate::sparse::{csr_to_sell, CsrMatrix, Permutation, SellMatrix};

/// A linear system reordered, padded and factorized for one configuration.
///
/// All vectors handed to the solve-side methods live in solve order, which
/// has `n_total = n_real + n_dummies` entries.
pub struct PreparedSystem {
    ordering: OrderingKind,
    matrix: CsrMatrix,
    sell: Option<SellMatrix>,
    precond: IcPreconditioner,
    perm: Permutation,
    n_real: usize,
    mask: Option<Vec<bool>>,
    pool: Arc<KernelPool>,
}

impl PreparedSystem {
    pub fn new(a: &CsrMatrix, cfg: &CgConfig) -> Result<Self> {
        let pool = Arc::new(KernelPool::new(cfg.threads)?);
        Self::with_pool(a, cfg, pool)
    }

    pub fn with_pool(a: &CsrMatrix, cfg: &CgConfig, pool: Arc<KernelPool>) -> Result<Self> {
        cfg.validate()?;
        if !a.is_structurally_symmetric() {
            return Err(Error::InvalidMatrix("matrix pattern is not symmetric".into()));
        }
        let n = a.n();
        let (matrix, perm, precond, n_total) = match cfg.ordering {
            OrderingKind::Natural => {
                let f = ic0_factorize(a, cfg.shift)?;
                (a.clone(), Permutation::identity(n), IcPreconditioner::sequential(f), n)
            }
            OrderingKind::Mc => {
                let layout = greedy_color_nodes(a);
                let m = a.permute(&layout.perm)?;
                let f = ic0_factorize(&m, cfg.shift)?.with_tag(OrderingKind::Mc);
                let pc = IcPreconditioner::mc(f, &layout, pool.clone())?;
                (m, layout.perm, pc, n)
            }
            OrderingKind::Bmc => {
                let layout = color_blocks(a, build_blocks(a, cfg.block_size)?);
                let m = a.permute(&layout.perm)?;
                let f = ic0_factorize(&m, cfg.shift)?.with_tag(OrderingKind::Bmc);
                let pc = IcPreconditioner::bmc(f, &layout, pool.clone())?;
                (m, layout.perm.clone(), pc, n)
            }
            OrderingKind::Hbmc => {
                let bmc = color_blocks(a, build_blocks(a, cfg.block_size)?);
                let layout = build_hbmc(bmc, cfg.simd_width)?;
                let m = layout.hbmc_matrix(a)?;
                let f = ic0_factorize(&m, cfg.shift)?.with_tag(OrderingKind::Hbmc);
                let pc = IcPreconditioner::hbmc(f, &layout, pool.clone())?;
                let n_padded = layout.n_padded;
                (m, layout.composed_perm, pc, n_padded)
            }
        };
        let mask = (n_total > n).then(|| {
            let mut mask = vec![false; n_total];
            for i in 0..n {
                mask[perm.apply(i)] = true;
            }
            mask
        });
        let sell = match cfg.spmv_format {
            SpmvFormat::Crs => None,
            SpmvFormat::Sell => Some(csr_to_sell(&matrix, cfg.simd_width, None)?),
        };
        Ok(Self {
            ordering: cfg.ordering,
            matrix,
            sell,
            precond,
            perm,
            n_real: n,
            mask,
            pool,
        })
    }

    pub fn ordering(&self) -> OrderingKind {
        self.ordering
    }

    pub fn n_real(&self) -> usize {
        self.n_real
    }

    pub fn n_total(&self) -> usize {
        self.matrix.n()
    }

    pub fn n_dummies(&self) -> usize {
        self.n_total() - self.n_real
    }

    pub fn n_colors(&self) -> usize {
        self.precond.n_colors()
    }

    /// Reordered (and padded) matrix.
    pub fn matrix(&self) -> &CsrMatrix {
        &self.matrix
    }

    pub fn preconditioner(&self) -> &IcPreconditioner {
        &self.precond
    }

    /// Maps original indices (dummies after the real unknowns) to solve order.
    pub fn permutation(&self) -> &Permutation {
        &self.perm
    }

    /// `true` at real unknowns, `None` if there are no dummies.
    pub fn mask(&self) -> Option<&[bool]> {
        self.mask.as_deref()
    }

    pub fn pool(&self) -> &Arc<KernelPool> {
        &self.pool
    }

    /// Pads `b` with zeros and moves it to solve order.
    pub fn to_solve_order(&self, b: &[f64]) -> Result<Vec<f64>> {
        if b.len() != self.n_real {
            return Err(Error::DimensionMismatch {
                expected: self.n_real,
                found: b.len(),
            });
        }
        let mut padded = b.to_vec();
        padded.resize(self.n_total(), 0.0);
        self.perm.permute(&padded)
    }

    /// Moves a solve-order vector back and drops the dummies.
    pub fn to_original(&self, xbar: &[f64]) -> Result<Vec<f64>> {
        let mut x = self.perm.unpermute(xbar)?;
        x.truncate(self.n_real);
        Ok(x)
    }

    pub(crate) fn spmv_into(&self, x: &[f64], y: &mut [f64]) -> Result<()> {
        match &self.sell {
            Some(s) => s.par_spmv_into(x, y),
            None => self.matrix.par_spmv_into(x, y),
        }
    }
}
