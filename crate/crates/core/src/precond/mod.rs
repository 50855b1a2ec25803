//! Shifted IC(0) and the sequential, MC, BMC and HBMC substitution kernels.

mod apply;
mod equivalence;
mod ic0;
mod kernels;
mod pool;
mod sell_factor;

pub use apply::{apply_ic_preconditioner, IcPreconditioner, KernelSelector};
pub use equivalence::{factor_equivalence_check, FactorEquivalence};
pub use ic0::{ic0_factorize, IcFactor};
pub use kernels::{
    sub_backward_bmc, sub_backward_hbmc, sub_backward_mc, sub_backward_seq, sub_forward_bmc,
    sub_forward_hbmc, sub_forward_mc, sub_forward_seq,
};
pub use pool::{partition, BarrierCounter, KernelPool};
pub use sell_factor::SellFactor;
