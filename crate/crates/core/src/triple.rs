use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vset::VertexSet;

/// Binomial coefficient; exact for every value used here (n <= 64).
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// A hyperedge `{i, j, k}` with `i < j < k`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "[usize; 3]", into = "[usize; 3]")]
pub struct Triple {
    pub i: usize,
    pub j: usize,
    pub k: usize,
}

impl Triple {
    /// Builds a triple from three distinct vertices in any order.
    ///
    /// Panics on repeated vertices.
    pub fn new(a: usize, b: usize, c: usize) -> Triple {
        let mut v = [a, b, c];
        v.sort_unstable();
        assert!(v[0] < v[1] && v[1] < v[2], "triple needs three distinct vertices");
        Triple { i: v[0], j: v[1], k: v[2] }
    }

    pub fn ordered(i: usize, j: usize, k: usize) -> Result<Triple> {
        if i < j && j < k {
            Ok(Triple { i, j, k })
        } else {
            Err(Error::Ordering(i, j, k))
        }
    }

    pub fn from_array(v: [usize; 3]) -> Triple {
        Triple::new(v[0], v[1], v[2])
    }

    pub fn from_set(s: VertexSet) -> Triple {
        assert_eq!(s.len(), 3, "triple needs exactly three vertices");
        let mut it = s.iter();
        let (i, j, k) = (it.next().unwrap(), it.next().unwrap(), it.next().unwrap());
        Triple { i, j, k }
    }

    pub fn to_array(self) -> [usize; 3] {
        [self.i, self.j, self.k]
    }

    pub fn vertices(self) -> VertexSet {
        VertexSet::single(self.i).with(self.j).with(self.k)
    }

    pub fn contains(self, v: usize) -> bool {
        self.i == v || self.j == v || self.k == v
    }

    pub fn rank(self) -> usize {
        rank_unchecked(self.i, self.j, self.k)
    }
}

impl TryFrom<[usize; 3]> for Triple {
    type Error = String;

    fn try_from(v: [usize; 3]) -> std::result::Result<Self, Self::Error> {
        Triple::ordered(v[0], v[1], v[2]).map_err(|e| e.to_string())
    }
}

impl From<Triple> for [usize; 3] {
    fn from(t: Triple) -> [usize; 3] {
        t.to_array()
    }
}

impl fmt::Debug for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.i, self.j, self.k)
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[inline]
pub(crate) fn rank_unchecked(i: usize, j: usize, k: usize) -> usize {
    i + j * (j.wrapping_sub(1)) / 2 + k * (k.wrapping_sub(1)) * (k.wrapping_sub(2)) / 6
}

/// Colex rank `i + C(j,2) + C(k,3)` of a strictly increasing triple.
pub fn rank_triple(i: usize, j: usize, k: usize) -> Result<usize> {
    Triple::ordered(i, j, k).map(Triple::rank)
}

/// Inverse of [`rank_triple`] on `[0, C(n,3))`.
pub fn unrank_triple(rank: usize, n: usize) -> Result<Triple> {
    let total = binomial(n, 3);
    if rank >= total {
        return Err(Error::Bounds { index: rank, limit: total });
    }
    let mut r = rank;
    let mut k = 2;
    while binomial(k + 1, 3) <= r {
        k += 1;
    }
    r -= binomial(k, 3);
    let mut j = 1;
    while binomial(j + 1, 2) <= r {
        j += 1;
    }
    r -= binomial(j, 2);
    Ok(Triple { i: r, j, k })
}
