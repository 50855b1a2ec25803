use super::hbmc::HbmcLayout;
use crate::error::{Error, Result};
use crate::sparse::CsrMatrix;

/// Result of scanning an HBMC-ordered matrix for its block structure.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StructureReport {
    /// Couplings between two distinct rows of one `w`-row level-2 step.
    pub level2_offdiag: usize,
    /// Couplings between distinct level-1 blocks of the same color.
    pub cross_level1: usize,
    pub first_level2: Option<(usize, usize)>,
    pub first_cross: Option<(usize, usize)>,
}

impl StructureReport {
    pub fn is_clean(&self) -> bool {
        self.level2_offdiag == 0 && self.cross_level1 == 0
    }
}

/// Pattern scan of `a_hbmc` (already in HBMC order, padded): every `w x w`
/// diagonal sub-block of a level-1 block must be diagonal, and no entry may
/// join two different level-1 blocks of the same color.
pub fn scan_hbmc_structure(a_hbmc: &CsrMatrix, layout: &HbmcLayout) -> Result<StructureReport> {
    if a_hbmc.n() != layout.n_padded {
        return Err(Error::DimensionMismatch {
            expected: layout.n_padded,
            found: a_hbmc.n(),
        });
    }
    let w = layout.w;
    let mut report = StructureReport::default();
    for (i, j, _) in a_hbmc.triplets() {
        if i == j {
            continue;
        }
        let (ki, kj) = (layout.level1_of(i), layout.level1_of(j));
        if ki == kj {
            if i / w == j / w {
                report.level2_offdiag += 1;
                report.first_level2.get_or_insert((i, j));
            }
        } else if layout.level1_ranges[ki].color == layout.level1_ranges[kj].color {
            report.cross_level1 += 1;
            report.first_cross.get_or_insert((i, j));
        }
    }
    Ok(report)
}
