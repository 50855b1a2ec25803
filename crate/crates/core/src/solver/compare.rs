use super::config::CgConfig;
use super::pcg::{pcg, SolveReport};
use crate::error::Result;
use crate::sparse::CsrMatrix;

/// Two solves of the same system side by side.
#[derive(Clone, Debug)]
pub struct ConvergenceComparison {
    pub a: SolveReport,
    pub b: SolveReport,
}

impl ConvergenceComparison {
    pub fn iteration_gap(&self) -> usize {
        self.a.iterations.abs_diff(self.b.iterations)
    }

    /// Largest relative difference between the residual histories, over
    /// the common prefix minus its last `skip_tail` entries.
    pub fn max_history_gap(&self, skip_tail: usize) -> f64 {
        let common = self.a.residual_history.len().min(self.b.residual_history.len());
        let upto = common.saturating_sub(skip_tail);
        self.a.residual_history[..upto]
            .iter()
            .zip(&self.b.residual_history[..upto])
            .map(|(&x, &y)| {
                let scale = x.abs().max(y.abs());
                if scale == 0.0 {
                    0.0
                } else {
                    (x - y).abs() / scale
                }
            })
            .fold(0.0, f64::max)
    }
}

pub fn compare_convergence(
    a: &CsrMatrix,
    b: &[f64],
    cfg_a: &CgConfig,
    cfg_b: &CgConfig,
) -> Result<ConvergenceComparison> {
    let (_, ra) = pcg(a, b, cfg_a)?;
    let (_, rb) = pcg(a, b, cfg_b)?;
    Ok(ConvergenceComparison { a: ra, b: rb })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordering::OrderingKind;
    use crate::sparse::gen_laplacian_5pt;

    #[test]
    fn bmc_and_hbmc_agree_on_small_grid() {
        let (a, b) = gen_laplacian_5pt(16, 16).unwrap();
        let base = CgConfig::default().with_blocking(4, 4).with_threads(2);
        let cmp = compare_convergence(
            &a,
            &b,
            &base.clone().with_ordering(OrderingKind::Bmc),
            &base.with_ordering(OrderingKind::Hbmc),
        )
        .unwrap();
        assert!(cmp.iteration_gap() <= 1);
        assert!(cmp.max_history_gap(2) < 1e-3);
    }
}
