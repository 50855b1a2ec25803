use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::config::{CgConfig, SpmvFormat};
use super::system::PreparedSystem;
use super::vector::{axpy, dot, norm2, xpby};
use crate::error::{Error, Result};
use crate::ordering::OrderingKind;
use crate::sparse::CsrMatrix;

/// Outcome of one preconditioned CG solve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub matrix: String,
    pub ordering: OrderingKind,
    pub b_s: usize,
    pub w: usize,
    pub n_c: usize,
    pub iterations: usize,
    pub converged: bool,
    pub time_setup_s: f64,
    pub time_solve_s: f64,
    /// `||r_k|| / ||b||` for `k = 0..=iterations`.
    pub residual_history: Vec<f64>,
    pub barrier_total: usize,
    pub dummy_count: usize,
    pub threads: usize,
    pub spmv_format: SpmvFormat,
}

impl SolveReport {
    pub fn final_residual(&self) -> f64 {
        self.residual_history.last().copied().unwrap_or(f64::NAN)
    }
}

/// Solves `A x = b` with IC(0)-preconditioned CG from `x0 = 0`.
///
/// `x` is returned in the original ordering. Not converging within
/// `max_iters` is reported through `converged`, not as an error.
pub fn pcg(a: &CsrMatrix, b: &[f64], cfg: &CgConfig) -> Result<(Vec<f64>, SolveReport)> {
    let t0 = Instant::now();
    let sys = PreparedSystem::new(a, cfg)?;
    let setup = t0.elapsed().as_secs_f64();
    let (x, mut report) = pcg_prepared(&sys, b, cfg)?;
    report.time_setup_s = setup;
    Ok((x, report))
}

/// CG on an already prepared system. `time_setup_s` is left at zero.
pub fn pcg_prepared(
    sys: &PreparedSystem,
    b: &[f64],
    cfg: &CgConfig,
) -> Result<(Vec<f64>, SolveReport)> {
    cfg.validate()?;
    let bbar = sys.to_solve_order(b)?;
    let t0 = Instant::now();
    let (xbar, history, barriers) = sys.pool().install(|| run_cg(sys, &bbar, cfg))?;
    let time_solve_s = t0.elapsed().as_secs_f64();
    let iterations = history.len() - 1;
    let converged = history.last().is_some_and(|&r| r < cfg.tol);
    let report = SolveReport {
        matrix: String::new(),
        ordering: sys.ordering(),
        b_s: cfg.block_size,
        w: cfg.simd_width,
        n_c: sys.n_colors(),
        iterations,
        converged,
        time_setup_s: 0.0,
        time_solve_s,
        residual_history: history,
        barrier_total: barriers,
        dummy_count: sys.n_dummies(),
        threads: sys.pool().threads(),
        spmv_format: cfg.spmv_format,
    };
    Ok((sys.to_original(&xbar)?, report))
}

fn run_cg(sys: &PreparedSystem, b: &[f64], cfg: &CgConfig) -> Result<(Vec<f64>, Vec<f64>, usize)> {
    let n = sys.n_total();
    let mask = sys.mask();
    let pc = sys.preconditioner();
    let mut x = vec![0.0; n];
    let b_norm = norm2(b, mask);
    if b_norm == 0.0 {
        return Ok((x, vec![0.0], 0));
    }
    let mut r = b.to_vec();
    let mut z = vec![0.0; n];
    let mut scratch = vec![0.0; n];
    let mut q = vec![0.0; n];
    let mut barriers = pc.apply_into(&r, &mut z, &mut scratch)?;
    let mut p = z.clone();
    let mut rz = dot(&r, &z, mask);
    let mut history = vec![1.0];
    for k in 1..=cfg.max_iters {
        sys.spmv_into(&p, &mut q)?;
        let curvature = dot(&p, &q, mask);
        if !(curvature > 0.0) {
            return Err(Error::CgBreakdown { iteration: k, curvature });
        }
        let alpha = rz / curvature;
        axpy(alpha, &p, &mut x);
        axpy(-alpha, &q, &mut r);
        let rel = norm2(&r, mask) / b_norm;
        history.push(rel);
        if rel < cfg.tol {
            break;
        }
        barriers += pc.apply_into(&r, &mut z, &mut scratch)?;
        let rz_next = dot(&r, &z, mask);
        xpby(&z, rz_next / rz, &mut p);
        rz = rz_next;
    }
    Ok((x, history, barriers))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparse::gen_laplacian_5pt;

    fn cfg(ordering: OrderingKind) -> CgConfig {
        CgConfig::default()
            .with_ordering(ordering)
            .with_blocking(4, 2)
            .with_threads(2)
    }

    #[test]
    fn identity_converges_in_one_iteration() {
        let a = CsrMatrix::identity(5);
        let b = vec![1.0, -2.0, 3.0, 0.5, 4.0];
        let (x, rep) = pcg(&a, &b, &cfg(OrderingKind::Natural)).unwrap();
        assert_eq!(rep.iterations, 1);
        assert!(rep.converged);
        assert_eq!(x, b);
    }

    #[test]
    fn zero_rhs_returns_zero() {
        let (a, _) = gen_laplacian_5pt(3, 3).unwrap();
        let (x, rep) = pcg(&a, &[0.0; 9], &cfg(OrderingKind::Bmc)).unwrap();
        assert_eq!(rep.iterations, 0);
        assert!(rep.converged);
        assert!(x.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn all_orderings_solve_small_grid() {
        let (a, b) = gen_laplacian_5pt(10, 10).unwrap();
        for kind in OrderingKind::ALL {
            for fmt in [SpmvFormat::Crs, SpmvFormat::Sell] {
                let mut c = cfg(kind);
                c.spmv_format = fmt;
                let (x, rep) = pcg(&a, &b, &c).unwrap();
                assert!(rep.converged, "{kind} {fmt}");
                assert_eq!(rep.residual_history.len(), rep.iterations + 1);
                let ax = a.spmv(&x).unwrap();
                let err = ax.iter().zip(&b).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max);
                assert!(err < 1e-5, "{kind} {fmt}: {err}");
            }
        }
    }

    #[test]
    fn indefinite_matrix_breaks_down() {
        let a = CsrMatrix::from_dense(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        let mut c = cfg(OrderingKind::Natural);
        c.shift = 4.0;
        let err = pcg(&a, &[1.0, -1.0], &c).unwrap_err();
        assert!(matches!(err, Error::CgBreakdown { .. }), "{err:?}");
    }

    #[test]
    fn max_iters_reached_is_not_an_error() {
        let (a, b) = gen_laplacian_5pt(12, 12).unwrap();
        let mut c = cfg(OrderingKind::Natural);
        c.max_iters = 2;
        let (_, rep) = pcg(&a, &b, &c).unwrap();
        assert!(!rep.converged);
        assert_eq!(rep.iterations, 2);
    }
}
