use std::ops::Range;

use super::bmc::BmcLayout;
use crate::error::{Error, Result};
use crate::sparse::{CsrMatrix, Permutation};

/// BMC order after dummy padding: every block holds exactly `b_s` unknowns
/// and every color holds a multiple of `w` blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PaddedBmc {
    /// Unknown at each padded BMC position. Ids `>= n_real` are dummies,
    /// numbered in order of appearance.
    pub order: Vec<usize>,
    pub n_real: usize,
    pub n_dummies: usize,
    /// Padded block count per color.
    pub blocks_per_color: Vec<usize>,
    pub color_ranges: Vec<Range<usize>>,
}

/// Pads each BMC block to `b_s` and each color to a multiple of `w` blocks.
///
/// Dummy unknowns extend the index space past the real ones. They stand for
/// decoupled rows with unit diagonal and zero right-hand side, so they never
/// change the solution on the real unknowns.
pub fn pad_colors(layout: &BmcLayout, w: usize) -> PaddedBmc {
    let b_s = layout.b_s();
    let n_real = layout.n();
    let mut next_dummy = n_real;
    let mut order = Vec::new();
    let mut blocks_per_color = Vec::with_capacity(layout.n_c);
    let mut color_ranges = Vec::with_capacity(layout.n_c);
    for c in 0..layout.n_c {
        let start = order.len();
        let blocks = layout.color_block_ptr[c]..layout.color_block_ptr[c + 1];
        for k in blocks.clone() {
            let span = layout.block_span(k);
            let len = span.len();
            order.extend(span.map(|pos| layout.perm.apply_inverse(pos)));
            for _ in len..b_s {
                order.push(next_dummy);
                next_dummy += 1;
            }
        }
        let padded_blocks = blocks.len().div_ceil(w) * w;
        for _ in blocks.len()..padded_blocks {
            for _ in 0..b_s {
                order.push(next_dummy);
                next_dummy += 1;
            }
        }
        blocks_per_color.push(padded_blocks);
        color_ranges.push(start..order.len());
    }
    PaddedBmc {
        order,
        n_real,
        n_dummies: next_dummy - n_real,
        blocks_per_color,
        color_ranges,
    }
}

/// A level-1 block: `w` consecutive same-colored BMC blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Level1Block {
    pub span: Range<usize>,
    pub color: usize,
}

/// Hierarchical block multi-color ordering.
///
/// Positions are shared by the padded BMC order and the HBMC order at the
/// level of level-1 blocks: the secondary permutation only moves unknowns
/// inside their own level-1 block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HbmcLayout {
    pub base: BmcLayout,
    pub w: usize,
    pub b_s: usize,
    pub n_real: usize,
    pub n_padded: usize,
    pub n_dummies: usize,
    /// Level-1 blocks per color, `n̄(c)`.
    pub nbar_of: Vec<usize>,
    /// Unknown (real or dummy) -> padded BMC position.
    pub padded_bmc_perm: Permutation,
    /// Padded BMC position -> HBMC position.
    pub perm: Permutation,
    /// Unknown (real or dummy) -> HBMC position.
    pub composed_perm: Permutation,
    pub color_ranges: Vec<Range<usize>>,
    pub level1_ranges: Vec<Level1Block>,
    /// Level-1 blocks of color `c` are `level1_ranges[color_level1_ptr[c]..color_level1_ptr[c + 1]]`.
    pub color_level1_ptr: Vec<usize>,
}

impl HbmcLayout {
    pub fn n_c(&self) -> usize {
        self.base.n_c
    }

    /// Unknowns per level-1 block, `b_s * w`.
    pub fn level1_size(&self) -> usize {
        self.b_s * self.w
    }

    /// Level-1 block holding a (padded BMC or HBMC) position.
    pub fn level1_of(&self, pos: usize) -> usize {
        pos / self.level1_size()
    }

    pub fn level1_range_of_color(&self, c: usize) -> Range<usize> {
        self.color_level1_ptr[c]..self.color_level1_ptr[c + 1]
    }

    /// True if the HBMC position holds a dummy unknown.
    pub fn is_dummy(&self, hbmc_pos: usize) -> bool {
        self.composed_perm.apply_inverse(hbmc_pos) >= self.n_real
    }

    /// `a` padded with unit dummy rows and laid out in padded BMC order.
    pub fn padded_bmc_matrix(&self, a: &CsrMatrix) -> Result<CsrMatrix> {
        self.check_matrix(a)?;
        a.pad_identity(self.n_padded)?.permute(&self.padded_bmc_perm)
    }

    /// `a` padded with unit dummy rows and laid out in HBMC order.
    pub fn hbmc_matrix(&self, a: &CsrMatrix) -> Result<CsrMatrix> {
        self.check_matrix(a)?;
        a.pad_identity(self.n_padded)?.permute(&self.composed_perm)
    }

    /// Right-hand side in HBMC order with zeros at dummy positions.
    pub fn hbmc_vector(&self, b: &[f64]) -> Result<Vec<f64>> {
        if b.len() != self.n_real {
            return Err(Error::DimensionMismatch {
                expected: self.n_real,
                found: b.len(),
            });
        }
        let mut padded = b.to_vec();
        padded.resize(self.n_padded, 0.0);
        self.composed_perm.permute(&padded)
    }

    /// Inverse of [`Self::hbmc_vector`], dropping dummies.
    pub fn original_vector(&self, xbar: &[f64]) -> Result<Vec<f64>> {
        let mut x = self.composed_perm.unpermute(xbar)?;
        x.truncate(self.n_real);
        Ok(x)
    }

    fn check_matrix(&self, a: &CsrMatrix) -> Result<()> {
        if a.n() != self.n_real {
            return Err(Error::DimensionMismatch {
                expected: self.n_real,
                found: a.n(),
            });
        }
        Ok(())
    }
}

/// Builds HBMC from BMC with SIMD width `w`.
///
/// After padding, each run of `w` same-colored blocks forms a level-1 block.
/// Inside it, member `j` of the block in slot `m` moves from local position
/// `m * b_s + j` to `j * w + m`: the first members of all `w` blocks come
/// first, then the second members, and so on.
pub fn build_hbmc(layout: BmcLayout, w: usize) -> Result<HbmcLayout> {
    if w == 0 {
        return Err(Error::InvalidParameter("SIMD width must be >= 1".into()));
    }
    let b_s = layout.b_s();
    let padded = pad_colors(&layout, w);
    let n_padded = padded.order.len();
    let l1 = b_s * w;

    let secondary: Vec<usize> = (0..n_padded)
        .map(|pos| {
            let (k, local) = (pos / l1, pos % l1);
            let (m, j) = (local / b_s, local % b_s);
            k * l1 + j * w + m
        })
        .collect();
    let perm = Permutation::from_forward(secondary)?;
    let padded_bmc_perm = Permutation::from_order(padded.order)?;
    let composed_perm = padded_bmc_perm.then(&perm)?;

    let mut level1_ranges = Vec::new();
    let mut color_level1_ptr = vec![0];
    let mut nbar_of = Vec::with_capacity(layout.n_c);
    for (c, span) in padded.color_ranges.iter().enumerate() {
        let count = span.len() / l1;
        nbar_of.push(count);
        level1_ranges.extend((0..count).map(|k| Level1Block {
            span: span.start + k * l1..span.start + (k + 1) * l1,
            color: c,
        }));
        color_level1_ptr.push(level1_ranges.len());
    }
    Ok(HbmcLayout {
        w,
        b_s,
        n_real: padded.n_real,
        n_padded,
        n_dummies: padded.n_dummies,
        nbar_of,
        padded_bmc_perm,
        perm,
        composed_perm,
        color_ranges: padded.color_ranges,
        level1_ranges,
        color_level1_ptr,
        base: layout,
    })
}
