use std::ops::Range;

use super::adjacency::Adjacency;
use crate::sparse::{CsrMatrix, Permutation};

/// Proper coloring of the unknowns with the MC permutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodalColoring {
    pub n_c: usize,
    pub color_of: Vec<usize>,
    /// Groups nodes by ascending color, ascending index within a color.
    pub perm: Permutation,
    /// `color_ptr[c]..color_ptr[c + 1]` is color `c`'s span in MC order.
    pub color_ptr: Vec<usize>,
}

impl NodalColoring {
    pub fn color_range(&self, c: usize) -> Range<usize> {
        self.color_ptr[c]..self.color_ptr[c + 1]
    }

    pub fn n(&self) -> usize {
        self.color_of.len()
    }
}

/// Greedy first-fit coloring visiting nodes in ascending index.
pub fn greedy_color_nodes(a: &CsrMatrix) -> NodalColoring {
    let graph = Adjacency::from_matrix(a);
    let color_of = first_fit(graph.n(), |v| graph.neighbors(v).iter().copied());
    from_colors(color_of)
}

/// First-fit coloring; `neighbors(v)` lists the vertices adjacent to `v`.
pub(crate) fn first_fit<I, F>(n: usize, neighbors: F) -> Vec<usize>
where
    F: Fn(usize) -> I,
    I: Iterator<Item = usize>,
{
    const UNCOLORED: usize = usize::MAX;
    let mut color = vec![UNCOLORED; n];
    // stamp[c] == v + 1 marks color c as taken by a neighbor of v
    let mut stamp: Vec<usize> = Vec::new();
    for v in 0..n {
        for u in neighbors(v) {
            let c = color[u];
            if c != UNCOLORED {
                if c >= stamp.len() {
                    stamp.resize(c + 1, 0);
                }
                stamp[c] = v + 1;
            }
        }
        let c = (0..).find(|&c| c >= stamp.len() || stamp[c] != v + 1).unwrap();
        color[v] = c;
    }
    color
}

fn from_colors(color_of: Vec<usize>) -> NodalColoring {
    let n_c = color_of.iter().map(|&c| c + 1).max().unwrap_or(0);
    let mut color_ptr = vec![0usize; n_c + 1];
    for &c in &color_of {
        color_ptr[c + 1] += 1;
    }
    for c in 0..n_c {
        color_ptr[c + 1] += color_ptr[c];
    }
    let mut next = color_ptr.clone();
    let mut order = vec![0usize; color_of.len()];
    for (i, &c) in color_of.iter().enumerate() {
        order[next[c]] = i;
        next[c] += 1;
    }
    let perm = Permutation::from_order(order).expect("counting sort yields a bijection");
    NodalColoring {
        n_c,
        color_of,
        perm,
        color_ptr,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparse::gen_laplacian_5pt;

    fn path(n: usize) -> CsrMatrix {
        let dense: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| match i.abs_diff(j) {
                        0 => 2.0,
                        1 => -1.0,
                        _ => 0.0,
                    })
                    .collect()
            })
            .collect();
        CsrMatrix::from_dense(&dense).unwrap()
    }

    #[test]
    fn diagonal_needs_one_color() {
        let c = greedy_color_nodes(&CsrMatrix::identity(5));
        assert_eq!(c.n_c, 1);
        assert!(c.perm.is_identity());
    }

    #[test]
    fn path_alternates() {
        assert_eq!(greedy_color_nodes(&path(3)).color_of, vec![0, 1, 0]);
    }

    #[test]
    fn grid_is_red_black() {
        let (a, _) = gen_laplacian_5pt(4, 4).unwrap();
        let c = greedy_color_nodes(&a);
        assert_eq!(c.n_c, 2);
        for (i, j, _) in a.triplets() {
            if i != j {
                assert_ne!(c.color_of[i], c.color_of[j]);
            }
        }
        assert_eq!(c.color_ptr, vec![0, 8, 16]);
        // color 0 nodes come first in ascending index
        assert_eq!(&c.perm.inverse()[..4], &[0, 2, 5, 7]);
    }
}
