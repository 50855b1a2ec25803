use std::fmt;

use anyhow::Result;
use trilab::ordering::{
    build_blocks, build_hbmc, check_er_condition, color_blocks, scan_hbmc_structure, Adjacency,
    OrderingKind,
};
use trilab::precond::{
    ic0_factorize, sub_backward_bmc, sub_backward_hbmc, sub_backward_seq, sub_forward_bmc,
    sub_forward_hbmc, sub_forward_seq, BarrierCounter, KernelPool, SellFactor,
};
use trilab::sparse::{CsrMatrix, Permutation};

pub const KERNEL_TOL: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub b_s: usize,
    pub w: usize,
    pub property: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} b_s={} w={} {}: {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.b_s,
            self.w,
            self.property,
            self.detail
        )
    }
}

fn max_rel_diff(x: &[f64], y: &[f64]) -> f64 {
    let scale = y.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    x.iter().zip(y).fold(0.0f64, |m, (a, b)| m.max((a - b).abs())) / scale
}

/// Swaps the targets of the first coupled pair, which always breaks ER.
fn corrupt(a: &CsrMatrix, p: &Permutation) -> Result<Permutation> {
    let mut forward = p.forward().to_vec();
    if let Some((i, j)) = Adjacency::from_matrix(a).pairs().next() {
        forward.swap(i, j);
    }
    Ok(Permutation::from_forward(forward)?)
}

/// Runs the ER check, the level-2 structure scan, the kernel-versus-sequential
/// comparison and the barrier count for one `(b_s, w)`.
pub fn check_case(
    a: &CsrMatrix,
    b_s: usize,
    w: usize,
    pool: &KernelPool,
    inject_fault: bool,
) -> Result<Vec<CheckOutcome>> {
    let outcome = |property, pass, detail: String| CheckOutcome { b_s, w, property, pass, detail };
    let bmc = color_blocks(a, build_blocks(a, b_s)?);
    let h = build_hbmc(bmc.clone(), w)?;
    let mut out = Vec::new();

    let padded = h.padded_bmc_matrix(a)?;
    let perm = if inject_fault { corrupt(&padded, &h.perm)? } else { h.perm.clone() };
    let er = check_er_condition(&padded, &perm, 3)?;
    out.push(outcome(
        "er_condition",
        er.holds,
        format!("{} pairs, {} violations {:?}", er.pairs_checked, er.violation_count, er.violations),
    ));

    let a_h = h.hbmc_matrix(a)?;
    let scan = scan_hbmc_structure(&a_h, &h)?;
    out.push(outcome(
        "level2_structure",
        scan.is_clean(),
        format!(
            "{} level-2 off-diagonal, {} cross level-1 entries",
            scan.level2_offdiag, scan.cross_level1
        ),
    ));

    let r: Vec<f64> = (0..a.n()).map(|i| ((i * 37 % 101) as f64) / 50.0 - 1.0).collect();
    let mut worst: f64 = 0.0;
    let mut barriers = Vec::new();
    let mut counter = BarrierCounter::new();

    let a_b = a.permute(&bmc.perm)?;
    let fb = ic0_factorize(&a_b, 0.0)?.with_tag(OrderingKind::Bmc);
    counter.reset();
    let y = sub_forward_bmc(&fb, &bmc, pool, &r, &mut counter)?;
    barriers.push(("bmc forward", counter.count(), bmc.n_c));
    counter.reset();
    let z = sub_backward_bmc(&fb, &bmc, pool, &r, &mut counter)?;
    barriers.push(("bmc backward", counter.count(), bmc.n_c));
    worst = worst.max(max_rel_diff(&y, &sub_forward_seq(&fb, &r)?));
    worst = worst.max(max_rel_diff(&z, &sub_backward_seq(&fb, &r)?));

    let fh = ic0_factorize(&a_h, 0.0)?.with_tag(OrderingKind::Hbmc);
    let sell = SellFactor::new(&fh, &h)?;
    let rh = h.hbmc_vector(&r)?;
    counter.reset();
    let y = sub_forward_hbmc(&sell, &h, pool, &rh, &mut counter)?;
    barriers.push(("hbmc forward", counter.count(), h.n_c()));
    counter.reset();
    let z = sub_backward_hbmc(&sell, &h, pool, &rh, &mut counter)?;
    barriers.push(("hbmc backward", counter.count(), h.n_c()));
    worst = worst.max(max_rel_diff(&y, &sub_forward_seq(&fh, &rh)?));
    worst = worst.max(max_rel_diff(&z, &sub_backward_seq(&fh, &rh)?));
    out.push(outcome(
        "kernel_oracle",
        worst <= KERNEL_TOL,
        format!("max relative deviation {worst:.2e}, threads={}", pool.threads()),
    ));

    let bad: Vec<String> = barriers
        .iter()
        .filter(|(_, got, n_c)| *got + 1 != *n_c)
        .map(|(name, got, n_c)| format!("{name} {got} (n_c={n_c})"))
        .collect();
    out.push(outcome(
        "barrier_count",
        bad.is_empty(),
        if bad.is_empty() {
            format!("n_c - 1 = {} per sweep", h.n_c() - 1)
        } else {
            bad.join(", ")
        },
    ));
    Ok(out)
}
