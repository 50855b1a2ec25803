use std::ops::Range;

use super::adjacency::Adjacency;
use super::blocking::Blocking;
use super::coloring::first_fit;
use crate::sparse::{CsrMatrix, Permutation};

/// Block multi-color ordering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BmcLayout {
    pub blocking: Blocking,
    pub n_c: usize,
    pub color_of_block: Vec<usize>,
    /// Number of blocks of each color, `n(c)`.
    pub n_of: Vec<usize>,
    /// Original index -> BMC position.
    pub perm: Permutation,
    /// Span of each color in BMC order.
    pub color_ranges: Vec<Range<usize>>,
    /// Block ids in BMC order.
    pub block_order: Vec<usize>,
    /// `block_ptr[k]..block_ptr[k + 1]` is the span of `block_order[k]`.
    pub block_ptr: Vec<usize>,
    /// Blocks of color `c` are `block_order[color_block_ptr[c]..color_block_ptr[c + 1]]`.
    pub color_block_ptr: Vec<usize>,
}

impl BmcLayout {
    pub fn n(&self) -> usize {
        self.blocking.n()
    }

    pub fn b_s(&self) -> usize {
        self.blocking.b_s
    }

    /// Row span (BMC order) of the `k`-th block in BMC order.
    pub fn block_span(&self, k: usize) -> Range<usize> {
        self.block_ptr[k]..self.block_ptr[k + 1]
    }
}

/// Colors the block quotient graph first-fit in ascending block id and lays
/// out color 0's blocks, then color 1's, each block's members ascending.
pub fn color_blocks(a: &CsrMatrix, blocking: Blocking) -> BmcLayout {
    let graph = Adjacency::from_matrix(a);
    let n_blocks = blocking.n_blocks();

    // quotient graph: blocks joined by any structural coupling
    let mut q_ptr = vec![0usize];
    let mut q_adj = Vec::new();
    let mut stamp = vec![usize::MAX; n_blocks];
    for (b, members) in blocking.blocks.iter().enumerate() {
        stamp[b] = b;
        for &v in members {
            for &u in graph.neighbors(v) {
                let ub = blocking.block_of[u];
                if stamp[ub] != b {
                    stamp[ub] = b;
                    q_adj.push(ub);
                }
            }
        }
        q_ptr.push(q_adj.len());
    }
    let color_of_block = first_fit(n_blocks, |b| q_adj[q_ptr[b]..q_ptr[b + 1]].iter().copied());
    let n_c = color_of_block.iter().map(|&c| c + 1).max().unwrap_or(0);

    let mut n_of = vec![0usize; n_c];
    for &c in &color_of_block {
        n_of[c] += 1;
    }
    let mut color_block_ptr = vec![0usize; n_c + 1];
    for c in 0..n_c {
        color_block_ptr[c + 1] = color_block_ptr[c] + n_of[c];
    }
    let mut block_order = Vec::with_capacity(n_blocks);
    for c in 0..n_c {
        block_order.extend((0..n_blocks).filter(|&b| color_of_block[b] == c));
    }

    let mut order = Vec::with_capacity(blocking.n());
    let mut block_ptr = vec![0usize];
    for &b in &block_order {
        order.extend_from_slice(&blocking.blocks[b]);
        block_ptr.push(order.len());
    }
    let color_ranges = (0..n_c)
        .map(|c| block_ptr[color_block_ptr[c]]..block_ptr[color_block_ptr[c + 1]])
        .collect();
    let perm = Permutation::from_order(order).expect("blocks partition the unknowns");
    BmcLayout {
        blocking,
        n_c,
        color_of_block,
        n_of,
        perm,
        color_ranges,
        block_order,
        block_ptr,
        color_block_ptr,
    }
}
