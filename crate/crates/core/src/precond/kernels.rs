use super::ic0::IcFactor;
use super::pool::{partition, BarrierCounter, KernelPool, PhasePlan};
use super::sell_factor::SellFactor;
use crate::error::{Error, Result};
use crate::ordering::{BmcLayout, HbmcLayout, NodalColoring, OrderingKind};
use crate::sparse::{CsrMatrix, SellMatrix};

// Every kernel computes row i as
//     acc = rhs_i;  acc -= v_ij * x_j  (stored j, ascending);  x_i = acc * inv_diag_i
// so all kernels agree bit for bit with the sequential sweep on the same
// ordering. SELL padding adds `0 * x_i` terms, which leave `acc` unchanged.

/// `y = L^{-1} r` in storage order.
pub fn sub_forward_seq(f: &IcFactor, r: &[f64]) -> Result<Vec<f64>> {
    check_len(f.n(), r.len())?;
    let mut y = vec![0.0; f.n()];
    forward_rows(f.lower(), f.inv_diag(), r, &[], 0, &mut y);
    Ok(y)
}

/// `z = L^{-T} y` in reverse storage order.
pub fn sub_backward_seq(f: &IcFactor, y: &[f64]) -> Result<Vec<f64>> {
    check_len(f.n(), y.len())?;
    let mut z = vec![0.0; f.n()];
    backward_rows(f.upper(), f.inv_diag(), y, &[], f.n(), 0, &mut z);
    Ok(z)
}

pub fn sub_forward_mc(
    f: &IcFactor,
    layout: &NodalColoring,
    pool: &KernelPool,
    r: &[f64],
    counter: &mut BarrierCounter,
) -> Result<Vec<f64>> {
    check_tag(f, OrderingKind::Mc, layout.n())?;
    check_len(f.n(), r.len())?;
    let mut y = vec![0.0; f.n()];
    forward_csr(f, &mc_plan(layout, pool.threads()), pool, r, &mut y, counter);
    Ok(y)
}

pub fn sub_backward_mc(
    f: &IcFactor,
    layout: &NodalColoring,
    pool: &KernelPool,
    y: &[f64],
    counter: &mut BarrierCounter,
) -> Result<Vec<f64>> {
    check_tag(f, OrderingKind::Mc, layout.n())?;
    check_len(f.n(), y.len())?;
    let mut z = vec![0.0; f.n()];
    backward_csr(f, &mc_plan(layout, pool.threads()), pool, y, &mut z, counter);
    Ok(z)
}

pub fn sub_forward_bmc(
    f: &IcFactor,
    layout: &BmcLayout,
    pool: &KernelPool,
    r: &[f64],
    counter: &mut BarrierCounter,
) -> Result<Vec<f64>> {
    check_tag(f, OrderingKind::Bmc, layout.n())?;
    check_len(f.n(), r.len())?;
    let mut y = vec![0.0; f.n()];
    forward_csr(f, &bmc_plan(layout, pool.threads()), pool, r, &mut y, counter);
    Ok(y)
}

pub fn sub_backward_bmc(
    f: &IcFactor,
    layout: &BmcLayout,
    pool: &KernelPool,
    y: &[f64],
    counter: &mut BarrierCounter,
) -> Result<Vec<f64>> {
    check_tag(f, OrderingKind::Bmc, layout.n())?;
    check_len(f.n(), y.len())?;
    let mut z = vec![0.0; f.n()];
    backward_csr(f, &bmc_plan(layout, pool.threads()), pool, y, &mut z, counter);
    Ok(z)
}

/// Multithreaded, `w`-wide forward substitution on the HBMC ordering.
///
/// Colors run in order with a barrier between them; inside a color, workers
/// own contiguous runs of level-1 blocks; inside a level-1 block, `b_s`
/// steps each update `w` rows by gather, multiply-subtract over the SELL
/// slice, and scaling by the inverse diagonal.
pub fn sub_forward_hbmc(
    f: &SellFactor,
    layout: &HbmcLayout,
    pool: &KernelPool,
    r: &[f64],
    counter: &mut BarrierCounter,
) -> Result<Vec<f64>> {
    check_sell(f, layout)?;
    check_len(f.n(), r.len())?;
    let mut y = vec![0.0; f.n()];
    forward_sell(f, &hbmc_plan(layout, pool.threads()), pool, r, &mut y, counter);
    Ok(y)
}

/// Mirror of [`sub_forward_hbmc`]: colors, level-1 blocks and level-2 steps
/// in reverse, using the SELL rows of `L^T`.
pub fn sub_backward_hbmc(
    f: &SellFactor,
    layout: &HbmcLayout,
    pool: &KernelPool,
    y: &[f64],
    counter: &mut BarrierCounter,
) -> Result<Vec<f64>> {
    check_sell(f, layout)?;
    check_len(f.n(), y.len())?;
    let mut z = vec![0.0; f.n()];
    backward_sell(f, &hbmc_plan(layout, pool.threads()), pool, y, &mut z, counter);
    Ok(z)
}

pub(crate) fn mc_plan(layout: &NodalColoring, threads: usize) -> PhasePlan {
    PhasePlan::new(
        layout.n(),
        (0..layout.n_c).map(|c| layout.color_range(c)),
        |_, span| {
            partition(span.len(), threads, 1)
                .into_iter()
                .map(|r| span.start + r.start..span.start + r.end)
                .collect()
        },
    )
}

pub(crate) fn bmc_plan(layout: &BmcLayout, threads: usize) -> PhasePlan {
    PhasePlan::new(layout.n(), layout.color_ranges.iter().cloned(), |c, _| {
        let first = layout.color_block_ptr[c];
        let count = layout.color_block_ptr[c + 1] - first;
        partition(count, threads, 1)
            .into_iter()
            .map(|r| layout.block_ptr[first + r.start]..layout.block_ptr[first + r.end])
            .collect()
    })
}

pub(crate) fn hbmc_plan(layout: &HbmcLayout, threads: usize) -> PhasePlan {
    let l1 = layout.level1_size();
    PhasePlan::new(layout.n_padded, layout.color_ranges.iter().cloned(), |c, span| {
        let count = layout.level1_range_of_color(c).len();
        partition(count, threads, 1)
            .into_iter()
            .map(|r| span.start + r.start * l1..span.start + r.end * l1)
            .collect()
    })
}

pub(crate) fn forward_csr(
    f: &IcFactor,
    plan: &PhasePlan,
    pool: &KernelPool,
    r: &[f64],
    y: &mut [f64],
    counter: &mut BarrierCounter,
) {
    plan.run_forward(pool, y, counter, |done, start, out| {
        forward_rows(f.lower(), f.inv_diag(), r, done, start, out)
    });
}

pub(crate) fn backward_csr(
    f: &IcFactor,
    plan: &PhasePlan,
    pool: &KernelPool,
    y: &[f64],
    z: &mut [f64],
    counter: &mut BarrierCounter,
) {
    plan.run_backward(pool, z, counter, |later, start, out| {
        let later_start = plan.n - later.len();
        backward_rows(f.upper(), f.inv_diag(), y, later, later_start, start, out)
    });
}

pub(crate) fn forward_sell(
    f: &SellFactor,
    plan: &PhasePlan,
    pool: &KernelPool,
    r: &[f64],
    y: &mut [f64],
    counter: &mut BarrierCounter,
) {
    y.fill(0.0);
    plan.run_forward(pool, y, counter, |done, start, out| {
        let w = f.w;
        let mut acc = vec![0.0; w];
        for s in start / w..(start + out.len()) / w {
            let base = s * w;
            acc.copy_from_slice(&r[base..base + w]);
            gather_subtract(&f.lower, s, &mut acc, |j| {
                if j < done.len() {
                    done[j]
                } else {
                    out[j - start]
                }
            });
            store_scaled(&acc, &f.inv_diag[base..base + w], &mut out[base - start..base - start + w]);
        }
    });
}

pub(crate) fn backward_sell(
    f: &SellFactor,
    plan: &PhasePlan,
    pool: &KernelPool,
    y: &[f64],
    z: &mut [f64],
    counter: &mut BarrierCounter,
) {
    z.fill(0.0);
    plan.run_backward(pool, z, counter, |later, start, out| {
        let w = f.w;
        let later_start = plan.n - later.len();
        let mut acc = vec![0.0; w];
        for s in (start / w..(start + out.len()) / w).rev() {
            let base = s * w;
            acc.copy_from_slice(&y[base..base + w]);
            gather_subtract(&f.upper, s, &mut acc, |j| {
                if j >= later_start {
                    later[j - later_start]
                } else {
                    out[j - start]
                }
            });
            store_scaled(&acc, &f.inv_diag[base..base + w], &mut out[base - start..base - start + w]);
        }
    });
}

/// `acc[q] -= val[t][q] * x[col[t][q]]` over the entries of slice `s`.
#[inline]
fn gather_subtract(m: &SellMatrix, s: usize, acc: &mut [f64], x: impl Fn(usize) -> f64) {
    let w = acc.len();
    let base = m.slice_ptr()[s];
    for t in 0..m.slice_len()[s] {
        let at = base + t * w;
        let cols = &m.col_idx()[at..at + w];
        let vals = &m.values()[at..at + w];
        for q in 0..w {
            acc[q] -= vals[q] * x(cols[q]);
        }
    }
}

#[inline]
fn store_scaled(acc: &[f64], inv_diag: &[f64], out: &mut [f64]) {
    for ((o, &a), &d) in out.iter_mut().zip(acc).zip(inv_diag) {
        *o = a * d;
    }
}

/// Forward rows `start..start + out.len()`; columns below `done.len()` read
/// `done`, the rest must fall inside `out`.
fn forward_rows(
    lower: &CsrMatrix,
    inv_diag: &[f64],
    r: &[f64],
    done: &[f64],
    start: usize,
    out: &mut [f64],
) {
    for k in 0..out.len() {
        let i = start + k;
        let (cols, vals) = lower.row(i);
        let mut acc = r[i];
        for (&j, &v) in cols.iter().zip(vals) {
            let yj = if j < done.len() { done[j] } else { out[j - start] };
            acc -= v * yj;
        }
        out[k] = acc * inv_diag[i];
    }
}

/// Backward rows `start..start + out.len()` in reverse; columns at or past
/// `later_start` read `later`, the rest must fall inside `out`.
fn backward_rows(
    upper: &CsrMatrix,
    inv_diag: &[f64],
    y: &[f64],
    later: &[f64],
    later_start: usize,
    start: usize,
    out: &mut [f64],
) {
    for k in (0..out.len()).rev() {
        let i = start + k;
        let (cols, vals) = upper.row(i);
        let mut acc = y[i];
        for (&j, &v) in cols.iter().zip(vals) {
            let zj = if j >= later_start {
                later[j - later_start]
            } else {
                out[j - start]
            };
            acc -= v * zj;
        }
        out[k] = acc * inv_diag[i];
    }
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

pub(crate) fn check_tag(f: &IcFactor, kind: OrderingKind, layout_n: usize) -> Result<()> {
    if f.tag() != kind {
        return Err(Error::LayoutMismatch(format!(
            "{kind} kernel given a factor built under {} ordering",
            f.tag()
        )));
    }
    if f.n() != layout_n {
        return Err(Error::LayoutMismatch(format!(
            "factor has {} rows, layout has {layout_n}",
            f.n()
        )));
    }
    Ok(())
}

pub(crate) fn check_sell(f: &SellFactor, layout: &HbmcLayout) -> Result<()> {
    if f.n() != layout.n_padded || f.w != layout.w || f.b_s != layout.b_s {
        return Err(Error::LayoutMismatch(format!(
            "SELL factor (n={}, w={}, b_s={}) does not fit layout (n={}, w={}, b_s={})",
            f.n(),
            f.w,
            f.b_s,
            layout.n_padded,
            layout.w,
            layout.b_s
        )));
    }
    Ok(())
}
