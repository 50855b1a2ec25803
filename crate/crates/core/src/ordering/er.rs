use super::adjacency::Adjacency;
use crate::error::{Error, Result};
use crate::sparse::{CsrMatrix, Permutation};

/// Directed graph over original unknowns; each structurally coupled pair
/// appears once, oriented from the unknown ordered first to the one ordered
/// later.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderingGraph {
    /// `(tail, head)` pairs, sorted.
    pub edges: Vec<(usize, usize)>,
}

pub fn build_ordering_graph(a: &CsrMatrix, p: &Permutation) -> Result<OrderingGraph> {
    check_len(a, p)?;
    let graph = Adjacency::from_matrix(a);
    let mut edges: Vec<(usize, usize)> = graph
        .pairs()
        .map(|(i, j)| if p.apply(i) < p.apply(j) { (i, j) } else { (j, i) })
        .collect();
    edges.sort_unstable();
    Ok(OrderingGraph { edges })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErReport {
    pub holds: bool,
    pub pairs_checked: usize,
    pub violation_count: usize,
    /// The first violating pairs `(i1, i2)` with `i1 < i2`, up to the report limit.
    pub violations: Vec<(usize, usize)>,
}

/// Checks that `p` preserves the relative order of every structurally
/// coupled pair: `sgn(i1 - i2) == sgn(p(i1) - p(i2))` whenever `a[i1][i2]`
/// or `a[i2][i1]` is stored. Equivalently, the ordering graphs of the
/// original and reordered systems coincide.
pub fn check_er_condition(a: &CsrMatrix, p: &Permutation, max_report: usize) -> Result<ErReport> {
    check_er_condition_where(a, p, max_report, |_, _| true)
}

/// [`check_er_condition`] restricted to coupled pairs accepted by `select`.
pub fn check_er_condition_where(
    a: &CsrMatrix,
    p: &Permutation,
    max_report: usize,
    select: impl Fn(usize, usize) -> bool,
) -> Result<ErReport> {
    check_len(a, p)?;
    let graph = Adjacency::from_matrix(a);
    let mut report = ErReport {
        holds: true,
        pairs_checked: 0,
        violation_count: 0,
        violations: Vec::new(),
    };
    for (i1, i2) in graph.pairs().filter(|&(i1, i2)| select(i1, i2)) {
        report.pairs_checked += 1;
        // pairs come with i1 < i2, so order is preserved iff p(i1) < p(i2)
        if p.apply(i1) > p.apply(i2) {
            report.holds = false;
            report.violation_count += 1;
            if report.violations.len() < max_report {
                report.violations.push((i1, i2));
            }
        }
    }
    Ok(report)
}

fn check_len(a: &CsrMatrix, p: &Permutation) -> Result<()> {
    if a.n() != p.len() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            found: p.len(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Four unknowns coupled as 0-1, 0-2, 1-3, 2-3 (a 4-cycle).
    fn cycle4() -> CsrMatrix {
        let mut d = vec![vec![0.0; 4]; 4];
        for i in 0..4 {
            d[i][i] = 4.0;
        }
        for &(i, j) in &[(0, 1), (0, 2), (1, 3), (2, 3)] {
            d[i][j] = -1.0;
            d[j][i] = -1.0;
        }
        CsrMatrix::from_dense(&d).unwrap()
    }

    #[test]
    fn identity_orients_low_to_high() {
        let g = build_ordering_graph(&cycle4(), &Permutation::identity(4)).unwrap();
        assert_eq!(g.edges, vec![(0, 1), (0, 2), (1, 3), (2, 3)]);
    }

    #[test]
    fn hand_read_reordering() {
        // new order 2, 0, 3, 1
        let p = Permutation::from_order(vec![2, 0, 3, 1]).unwrap();
        let g = build_ordering_graph(&cycle4(), &p).unwrap();
        assert_eq!(g.edges, vec![(0, 1), (2, 0), (2, 3), (3, 1)]);
    }

    #[test]
    fn reversal_flips_every_edge() {
        let a = cycle4();
        let g0 = build_ordering_graph(&a, &Permutation::identity(4)).unwrap();
        let g1 = build_ordering_graph(&a, &Permutation::reversal(4)).unwrap();
        let mut flipped: Vec<_> = g0.edges.iter().map(|&(t, h)| (h, t)).collect();
        flipped.sort_unstable();
        assert_eq!(g1.edges, flipped);
    }

    #[test]
    fn identity_satisfies_condition() {
        let r = check_er_condition(&cycle4(), &Permutation::identity(4), 10).unwrap();
        assert!(r.holds);
        assert_eq!(r.pairs_checked, 4);
    }

    #[test]
    fn swapping_coupled_neighbors_violates() {
        let p = Permutation::from_forward(vec![1, 0, 2, 3]).unwrap();
        let r = check_er_condition(&cycle4(), &p, 10).unwrap();
        assert!(!r.holds);
        assert_eq!(r.violations, vec![(0, 1)]);
    }

    #[test]
    fn swapping_uncoupled_nodes_is_harmless() {
        let p = Permutation::from_forward(vec![0, 2, 1, 3]).unwrap();
        assert!(check_er_condition(&cycle4(), &p, 10).unwrap().holds);
    }
}
