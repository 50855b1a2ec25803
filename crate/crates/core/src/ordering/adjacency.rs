use crate::sparse::CsrMatrix;

/// Undirected structural graph of a matrix: `i ~ j` iff `i != j` and
/// `a_ij != 0` or `a_ji != 0` is stored. Neighbor lists are sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Adjacency {
    ptr: Vec<usize>,
    adj: Vec<usize>,
}

impl Adjacency {
    pub fn from_matrix(a: &CsrMatrix) -> Self {
        let n = a.n();
        let mut lists: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, j, _) in a.triplets() {
            if i != j {
                lists[i].push(j);
                lists[j].push(i);
            }
        }
        let mut ptr = Vec::with_capacity(n + 1);
        ptr.push(0);
        let mut adj = Vec::new();
        for mut l in lists {
            l.sort_unstable();
            l.dedup();
            adj.extend_from_slice(&l);
            ptr.push(adj.len());
        }
        Self { ptr, adj }
    }

    pub fn n(&self) -> usize {
        self.ptr.len() - 1
    }

    #[inline]
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[self.ptr[i]..self.ptr[i + 1]]
    }

    /// Each undirected pair once, as `(low, high)`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |i| {
            self.neighbors(i)
                .iter()
                .filter(move |&&j| j > i)
                .map(move |&j| (i, j))
        })
    }
}
