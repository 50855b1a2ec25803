use std::collections::BTreeSet;

use super::adjacency::Adjacency;
use crate::error::{Error, Result};
use crate::sparse::CsrMatrix;

/// Partition of the unknowns into blocks of at most `b_s` members.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Blocking {
    pub b_s: usize,
    pub block_of: Vec<usize>,
    /// Members of each block in ascending original index.
    pub blocks: Vec<Vec<usize>>,
}

impl Blocking {
    pub fn n(&self) -> usize {
        self.block_of.len()
    }

    pub fn n_blocks(&self) -> usize {
        self.blocks.len()
    }
}

/// Greedy block growth.
///
/// Each new block is seeded with the smallest unassigned index and grown by
/// repeatedly taking the smallest unassigned structural neighbor of the
/// block, until it holds `b_s` members or has no unassigned neighbor left.
pub fn build_blocks(a: &CsrMatrix, b_s: usize) -> Result<Blocking> {
    if b_s == 0 {
        return Err(Error::InvalidParameter("block size must be >= 1".into()));
    }
    let graph = Adjacency::from_matrix(a);
    let n = graph.n();
    const FREE: usize = usize::MAX;
    let mut block_of = vec![FREE; n];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut frontier = BTreeSet::new();
    let mut next_seed = 0;
    loop {
        while next_seed < n && block_of[next_seed] != FREE {
            next_seed += 1;
        }
        if next_seed == n {
            break;
        }
        let id = blocks.len();
        let mut members = Vec::with_capacity(b_s);
        frontier.clear();
        frontier.insert(next_seed);
        while members.len() < b_s {
            let Some(v) = frontier.pop_first() else { break };
            block_of[v] = id;
            members.push(v);
            frontier.extend(
                graph
                    .neighbors(v)
                    .iter()
                    .copied()
                    .filter(|&u| block_of[u] == FREE),
            );
        }
        members.sort_unstable();
        blocks.push(members);
    }
    Ok(Blocking {
        b_s,
        block_of,
        blocks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparse::gen_laplacian_5pt;

    fn path4() -> CsrMatrix {
        CsrMatrix::from_dense(&[
            vec![2.0, -1.0, 0.0, 0.0],
            vec![-1.0, 2.0, -1.0, 0.0],
            vec![0.0, -1.0, 2.0, -1.0],
            vec![0.0, 0.0, -1.0, 2.0],
        ])
        .unwrap()
    }

    #[test]
    fn unit_blocks_are_singletons() {
        let b = build_blocks(&path4(), 1).unwrap();
        assert_eq!(b.blocks, vec![vec![0], vec![1], vec![2], vec![3]]);
    }

    #[test]
    fn path_pairs() {
        let b = build_blocks(&path4(), 2).unwrap();
        assert_eq!(b.blocks, vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(b.block_of, vec![0, 0, 1, 1]);
    }

    #[test]
    fn grid_rows_become_blocks() {
        let (a, _) = gen_laplacian_5pt(4, 4).unwrap();
        let b = build_blocks(&a, 4).unwrap();
        assert_eq!(b.n_blocks(), 4);
        for (k, members) in b.blocks.iter().enumerate() {
            assert_eq!(members, &(4 * k..4 * k + 4).collect::<Vec<_>>());
        }
    }

    #[test]
    fn isolated_nodes_end_up_alone() {
        let b = build_blocks(&CsrMatrix::identity(3), 4).unwrap();
        assert_eq!(b.n_blocks(), 3);
    }

    #[test]
    fn zero_block_size_is_rejected() {
        assert!(build_blocks(&path4(), 0).is_err());
    }
}
