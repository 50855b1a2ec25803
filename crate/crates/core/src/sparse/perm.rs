use crate::error::{Error, Result};

/// A reordering of `n` unknowns.
///
/// `forward[i]` is the new position of old index `i`; `inverse[k]` is the old
/// index placed at position `k`. A reordered vector satisfies
/// `xbar[forward[i]] = x[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation {
    forward: Vec<usize>,
    inverse: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        let forward: Vec<usize> = (0..n).collect();
        Self {
            inverse: forward.clone(),
            forward,
        }
    }

    /// The permutation that reverses the index order.
    pub fn reversal(n: usize) -> Self {
        let forward: Vec<usize> = (0..n).rev().collect();
        Self {
            inverse: forward.clone(),
            forward,
        }
    }

    /// Builds from the old → new map, rejecting anything that is not a bijection.
    pub fn from_forward(forward: Vec<usize>) -> Result<Self> {
        let inverse = invert(&forward)?;
        Ok(Self { forward, inverse })
    }

    /// Builds from an ordering list: `order[k]` is the old index placed at `k`.
    pub fn from_order(order: Vec<usize>) -> Result<Self> {
        let forward = invert(&order)?;
        Ok(Self {
            forward,
            inverse: order,
        })
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.forward[i]
    }

    #[inline]
    pub fn apply_inverse(&self, k: usize) -> usize {
        self.inverse[k]
    }

    pub fn forward(&self) -> &[usize] {
        &self.forward
    }

    pub fn inverse(&self) -> &[usize] {
        &self.inverse
    }

    pub fn is_identity(&self) -> bool {
        self.forward.iter().enumerate().all(|(i, &p)| i == p)
    }

    pub fn inverted(&self) -> Self {
        Self {
            forward: self.inverse.clone(),
            inverse: self.forward.clone(),
        }
    }

    /// `self` followed by `next`: old index `i` goes to `next(self(i))`.
    pub fn then(&self, next: &Permutation) -> Result<Self> {
        if next.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: next.len(),
            });
        }
        let forward = self.forward.iter().map(|&k| next.forward[k]).collect();
        Self::from_forward(forward)
    }

    /// `xbar[p(i)] = x[i]`.
    pub fn permute<T: Copy>(&self, x: &[T]) -> Result<Vec<T>> {
        self.check_len(x.len())?;
        Ok(self.inverse.iter().map(|&old| x[old]).collect())
    }

    /// `x[i] = xbar[p(i)]`.
    pub fn unpermute<T: Copy>(&self, xbar: &[T]) -> Result<Vec<T>> {
        self.check_len(xbar.len())?;
        Ok(self.forward.iter().map(|&new| xbar[new]).collect())
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: len,
            });
        }
        Ok(())
    }
}

fn invert(map: &[usize]) -> Result<Vec<usize>> {
    let n = map.len();
    let mut inv = vec![usize::MAX; n];
    for (i, &k) in map.iter().enumerate() {
        if k >= n {
            return Err(Error::InvalidPermutation(format!(
                "image {k} of {i} is out of range for length {n}"
            )));
        }
        if inv[k] != usize::MAX {
            return Err(Error::InvalidPermutation(format!(
                "{} and {i} both map to {k}",
                inv[k]
            )));
        }
        inv[k] = i;
    }
    Ok(inv)
}
