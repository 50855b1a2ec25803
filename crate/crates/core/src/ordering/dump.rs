//! Layout dump, one line per original unknown:
//!
//! ```text
//! # original color block level1 position
//! 0 0 0 0 0
//! 1 0 0 0 4
//! ```
//!
//! `block` and `level1` print `-` for orderings without them. `position` is
//! the unknown's index in the final ordering.

use std::io::{self, Write};

use super::bmc::BmcLayout;
use super::coloring::NodalColoring;
use super::hbmc::HbmcLayout;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LayoutRow {
    pub original: usize,
    pub color: usize,
    pub block: Option<usize>,
    pub level1: Option<usize>,
    pub position: usize,
}

impl LayoutRow {
    pub fn natural(n: usize) -> Vec<LayoutRow> {
        (0..n)
            .map(|i| LayoutRow {
                original: i,
                color: 0,
                block: None,
                level1: None,
                position: i,
            })
            .collect()
    }

    pub fn from_mc(c: &NodalColoring) -> Vec<LayoutRow> {
        (0..c.n())
            .map(|i| LayoutRow {
                original: i,
                color: c.color_of[i],
                block: None,
                level1: None,
                position: c.perm.apply(i),
            })
            .collect()
    }

    pub fn from_bmc(l: &BmcLayout) -> Vec<LayoutRow> {
        (0..l.n())
            .map(|i| {
                let block = l.blocking.block_of[i];
                LayoutRow {
                    original: i,
                    color: l.color_of_block[block],
                    block: Some(block),
                    level1: None,
                    position: l.perm.apply(i),
                }
            })
            .collect()
    }

    pub fn from_hbmc(h: &HbmcLayout) -> Vec<LayoutRow> {
        (0..h.n_real)
            .map(|i| {
                let block = h.base.blocking.block_of[i];
                let position = h.composed_perm.apply(i);
                LayoutRow {
                    original: i,
                    color: h.base.color_of_block[block],
                    block: Some(block),
                    level1: Some(h.level1_of(position)),
                    position,
                }
            })
            .collect()
    }
}

pub fn write_layout_dump(mut out: impl Write, rows: &[LayoutRow]) -> io::Result<()> {
    let opt = |v: Option<usize>| v.map_or_else(|| "-".to_string(), |v| v.to_string());
    writeln!(out, "# original color block level1 position")?;
    for r in rows {
        writeln!(
            out,
            "{} {} {} {} {}",
            r.original,
            r.color,
            opt(r.block),
            opt(r.level1),
            r.position
        )?;
    }
    Ok(())
}
