use std::fmt;
use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use anyhow::{Context, Result};
use trilab::ordering::{
    build_blocks, build_hbmc, check_er_condition, color_blocks, greedy_color_nodes,
    write_layout_dump, LayoutRow, OrderingKind,
};
use trilab::sparse::CsrMatrix;

#[derive(Clone, Debug, PartialEq)]
pub struct ReorderSummary {
    pub ordering: OrderingKind,
    pub n: usize,
    pub b_s: Option<usize>,
    pub w: Option<usize>,
    pub n_c: usize,
    /// Nodes (MC) or blocks (BMC, HBMC) per color.
    pub per_color: Vec<usize>,
    /// Level-1 blocks per color (HBMC).
    pub level1_per_color: Option<Vec<usize>>,
    pub n_blocks: Option<usize>,
    pub dummies: usize,
    /// ER check of the BMC to HBMC permutation.
    pub er_holds: Option<bool>,
    pub single_block_warning: bool,
}

pub struct Reordering {
    pub summary: ReorderSummary,
    pub rows: Vec<LayoutRow>,
}

pub fn reorder(a: &CsrMatrix, ordering: OrderingKind, b_s: usize, w: usize) -> Result<Reordering> {
    let n = a.n();
    let mut summary = ReorderSummary {
        ordering,
        n,
        b_s: None,
        w: None,
        n_c: 1,
        per_color: vec![n],
        level1_per_color: None,
        n_blocks: None,
        dummies: 0,
        er_holds: None,
        single_block_warning: false,
    };
    let rows = match ordering {
        OrderingKind::Natural => LayoutRow::natural(n),
        OrderingKind::Mc => {
            let mc = greedy_color_nodes(a);
            summary.n_c = mc.n_c;
            summary.per_color = (0..mc.n_c).map(|c| mc.color_range(c).len()).collect();
            LayoutRow::from_mc(&mc)
        }
        OrderingKind::Bmc | OrderingKind::Hbmc => {
            let bmc = color_blocks(a, build_blocks(a, b_s)?);
            summary.b_s = Some(b_s);
            summary.single_block_warning = b_s > n;
            summary.n_c = bmc.n_c;
            summary.per_color = bmc.n_of.clone();
            summary.n_blocks = Some(bmc.blocking.n_blocks());
            if ordering == OrderingKind::Bmc {
                LayoutRow::from_bmc(&bmc)
            } else {
                let h = build_hbmc(bmc, w)?;
                let er = check_er_condition(&h.padded_bmc_matrix(a)?, &h.perm, 0)?;
                summary.w = Some(w);
                summary.level1_per_color = Some(h.nbar_of.clone());
                summary.dummies = h.n_dummies;
                summary.er_holds = Some(er.holds);
                LayoutRow::from_hbmc(&h)
            }
        }
    };
    Ok(Reordering { summary, rows })
}

pub fn write_dump(path: &Path, rows: &[LayoutRow]) -> Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut out = BufWriter::new(file);
    write_layout_dump(&mut out, rows)?;
    Ok(())
}

fn join(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

impl fmt::Display for ReorderSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ordering: {}", self.ordering)?;
        writeln!(f, "n: {}", self.n)?;
        if let Some(b_s) = self.b_s {
            writeln!(f, "b_s: {b_s}")?;
        }
        if let Some(w) = self.w {
            writeln!(f, "w: {w}")?;
        }
        writeln!(f, "n_c: {}", self.n_c)?;
        if let Some(blocks) = self.n_blocks {
            writeln!(f, "blocks: {blocks}")?;
            writeln!(f, "blocks per color n(c): {}", join(&self.per_color))?;
        } else {
            writeln!(f, "unknowns per color: {}", join(&self.per_color))?;
        }
        if let Some(l1) = &self.level1_per_color {
            writeln!(f, "level-1 blocks per color: {}", join(l1))?;
        }
        write!(f, "dummies: {}", self.dummies)?;
        if let Some(holds) = self.er_holds {
            write!(f, "\nER condition: {}", if holds { "holds" } else { "VIOLATED" })?;
        }
        Ok(())
    }
}
