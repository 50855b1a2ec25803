use std::sync::Arc;

use super::ic0::IcFactor;
use super::kernels::{
    backward_csr, backward_sell, bmc_plan, check_sell, check_tag, forward_csr, forward_sell,
    hbmc_plan, mc_plan, sub_backward_bmc, sub_backward_hbmc, sub_backward_mc, sub_backward_seq,
    sub_forward_bmc, sub_forward_hbmc, sub_forward_mc, sub_forward_seq,
};
use super::pool::{BarrierCounter, KernelPool, PhasePlan};
use super::sell_factor::SellFactor;
use crate::error::{Error, Result};
use crate::ordering::{BmcLayout, HbmcLayout, NodalColoring, OrderingKind};

/// Substitution kernel and the layout it runs on.
#[derive(Clone, Copy, Debug)]
pub enum KernelSelector<'a> {
    Sequential,
    Mc(&'a NodalColoring),
    Bmc(&'a BmcLayout),
    Hbmc(&'a SellFactor, &'a HbmcLayout),
}

/// `z = (L L^T)^{-1} r` with the selected kernels. Returns `z` and the
/// number of barriers taken by the forward and backward sweeps together.
pub fn apply_ic_preconditioner(
    kernel: KernelSelector<'_>,
    f: &IcFactor,
    pool: &KernelPool,
    r: &[f64],
) -> Result<(Vec<f64>, usize)> {
    let mut fwd = BarrierCounter::new();
    let mut bwd = BarrierCounter::new();
    let z = match kernel {
        KernelSelector::Sequential => sub_backward_seq(f, &sub_forward_seq(f, r)?)?,
        KernelSelector::Mc(l) => {
            let y = sub_forward_mc(f, l, pool, r, &mut fwd)?;
            sub_backward_mc(f, l, pool, &y, &mut bwd)?
        }
        KernelSelector::Bmc(l) => {
            let y = sub_forward_bmc(f, l, pool, r, &mut fwd)?;
            sub_backward_bmc(f, l, pool, &y, &mut bwd)?
        }
        KernelSelector::Hbmc(s, l) => {
            check_tag(f, OrderingKind::Hbmc, l.n_padded)?;
            let y = sub_forward_hbmc(s, l, pool, r, &mut fwd)?;
            sub_backward_hbmc(s, l, pool, &y, &mut bwd)?
        }
    };
    Ok((z, fwd.count() + bwd.count()))
}

enum Engine {
    Sequential,
    Csr(PhasePlan),
    Sell(SellFactor, PhasePlan),
}

/// IC(0) preconditioner with its kernel schedule prepared once, for repeated
/// application inside an iterative solver.
pub struct IcPreconditioner {
    factor: IcFactor,
    engine: Engine,
    pool: Option<Arc<KernelPool>>,
    n_c: usize,
}

impl IcPreconditioner {
    pub fn sequential(factor: IcFactor) -> Self {
        Self {
            factor,
            engine: Engine::Sequential,
            pool: None,
            n_c: 1,
        }
    }

    pub fn mc(factor: IcFactor, layout: &NodalColoring, pool: Arc<KernelPool>) -> Result<Self> {
        check_tag(&factor, OrderingKind::Mc, layout.n())?;
        Ok(Self {
            engine: Engine::Csr(mc_plan(layout, pool.threads())),
            factor,
            pool: Some(pool),
            n_c: layout.n_c,
        })
    }

    pub fn bmc(factor: IcFactor, layout: &BmcLayout, pool: Arc<KernelPool>) -> Result<Self> {
        check_tag(&factor, OrderingKind::Bmc, layout.n())?;
        Ok(Self {
            engine: Engine::Csr(bmc_plan(layout, pool.threads())),
            factor,
            pool: Some(pool),
            n_c: layout.n_c,
        })
    }

    pub fn hbmc(factor: IcFactor, layout: &HbmcLayout, pool: Arc<KernelPool>) -> Result<Self> {
        let sell = SellFactor::new(&factor, layout)?;
        check_sell(&sell, layout)?;
        Ok(Self {
            engine: Engine::Sell(sell, hbmc_plan(layout, pool.threads())),
            factor,
            pool: Some(pool),
            n_c: layout.n_c(),
        })
    }

    pub fn n(&self) -> usize {
        self.factor.n()
    }

    pub fn n_colors(&self) -> usize {
        self.n_c
    }

    pub fn factor(&self) -> &IcFactor {
        &self.factor
    }

    pub fn sell_factor(&self) -> Option<&SellFactor> {
        match &self.engine {
            Engine::Sell(s, _) => Some(s),
            _ => None,
        }
    }

    pub fn apply(&self, r: &[f64]) -> Result<Vec<f64>> {
        let mut z = vec![0.0; self.n()];
        let mut scratch = vec![0.0; self.n()];
        self.apply_into(r, &mut z, &mut scratch)?;
        Ok(z)
    }

    /// Writes `(L L^T)^{-1} r` into `z`, using `scratch` for the forward
    /// result. Returns the barriers taken by both sweeps.
    pub fn apply_into(&self, r: &[f64], z: &mut [f64], scratch: &mut [f64]) -> Result<usize> {
        let n = self.n();
        for len in [r.len(), z.len(), scratch.len()] {
            if len != n {
                return Err(Error::DimensionMismatch { expected: n, found: len });
            }
        }
        let mut fwd = BarrierCounter::new();
        let mut bwd = BarrierCounter::new();
        match (&self.engine, &self.pool) {
            (Engine::Csr(plan), Some(pool)) => {
                forward_csr(&self.factor, plan, pool, r, scratch, &mut fwd);
                backward_csr(&self.factor, plan, pool, scratch, z, &mut bwd);
            }
            (Engine::Sell(sell, plan), Some(pool)) => {
                forward_sell(sell, plan, pool, r, scratch, &mut fwd);
                backward_sell(sell, plan, pool, scratch, z, &mut bwd);
            }
            _ => {
                let y = sub_forward_seq(&self.factor, r)?;
                z.copy_from_slice(&sub_backward_seq(&self.factor, &y)?);
            }
        }
        Ok(fwd.count() + bwd.count())
    }
}
