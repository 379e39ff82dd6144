use std::fmt;
use std::ops::{BitAnd, BitOr, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Largest supported vertex count; vertex sets are 64-bit masks.
pub const MAX_VERTICES: usize = 64;

/// A set of vertex ids below 64, stored as a bitmask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn from_bits(bits: u64) -> VertexSet {
        VertexSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// `{0, 1, ..., n - 1}`.
    pub fn range(n: usize) -> VertexSet {
        assert!(n <= MAX_VERTICES, "at most {MAX_VERTICES} vertices supported");
        if n == MAX_VERTICES {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn single(v: usize) -> VertexSet {
        VertexSet(1u64 << v)
    }

    pub fn contains(self, v: usize) -> bool {
        v < MAX_VERTICES && self.0 & (1u64 << v) != 0
    }

    pub fn insert(&mut self, v: usize) {
        self.0 |= 1u64 << v;
    }

    pub fn remove(&mut self, v: usize) {
        self.0 &= !(1u64 << v);
    }

    pub fn with(self, v: usize) -> VertexSet {
        VertexSet(self.0 | (1u64 << v))
    }

    pub fn without(self, v: usize) -> VertexSet {
        VertexSet(self.0 & !(1u64 << v))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn min(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn max(self) -> Option<usize> {
        (self.0 != 0).then(|| 63 - self.0.leading_zeros() as usize)
    }

    pub fn is_disjoint(self, other: VertexSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// The `count` smallest members (or all of them if fewer).
    pub fn take_lowest(self, count: usize) -> VertexSet {
        self.iter().take(count).collect()
    }
}

pub struct Iter(u64);

impl Iterator for Iter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Iter {}

impl IntoIterator for VertexSet {
    type Item = usize;
    type IntoIter = Iter;

    fn into_iter(self) -> Iter {
        self.iter()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        iter.into_iter().fold(VertexSet::EMPTY, VertexSet::with)
    }
}

impl BitOr for VertexSet {
    type Output = VertexSet;
    fn bitor(self, rhs: VertexSet) -> VertexSet {
        VertexSet(self.0 | rhs.0)
    }
}

impl BitAnd for VertexSet {
    type Output = VertexSet;
    fn bitand(self, rhs: VertexSet) -> VertexSet {
        VertexSet(self.0 & rhs.0)
    }
}

impl Sub for VertexSet {
    type Output = VertexSet;
    fn sub(self, rhs: VertexSet) -> VertexSet {
        VertexSet(self.0 & !rhs.0)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let items = Vec::<usize>::deserialize(d)?;
        if let Some(&bad) = items.iter().find(|&&v| v >= MAX_VERTICES) {
            return Err(serde::de::Error::custom(format!("vertex {bad} out of range")));
        }
        Ok(items.into_iter().collect())
    }
}

/// Colex-ordered `K`-subsets of a sorted slice.
///
/// Yields arrays of elements (not positions). Colex order on subsets of a
/// sorted list coincides with numeric order of their bitmasks, so every scan
/// built on this iterator visits candidates lowest-colex first.
pub struct Combinations<'a, const K: usize> {
    items: &'a [usize],
    idx: [usize; K],
    done: bool,
}

impl<'a, const K: usize> Combinations<'a, K> {
    pub fn new(items: &'a [usize]) -> Self {
        let mut idx = [0; K];
        for (i, slot) in idx.iter_mut().enumerate() {
            *slot = i;
        }
        Combinations { items, idx, done: K > items.len() }
    }
}

impl<const K: usize> Iterator for Combinations<'_, K> {
    type Item = [usize; K];

    fn next(&mut self) -> Option<[usize; K]> {
        if self.done {
            return None;
        }
        let out = self.idx.map(|i| self.items[i]);
        // advance: bump the lowest position that has room, reset those below it
        let m = self.items.len();
        let mut i = 0;
        loop {
            if i == K {
                self.done = true;
                break;
            }
            let limit = if i + 1 < K { self.idx[i + 1] } else { m };
            if self.idx[i] + 1 < limit {
                self.idx[i] += 1;
                for j in 0..i {
                    self.idx[j] = j;
                }
                break;
            }
            i += 1;
        }
        Some(out)
    }
}

pub fn combinations<const K: usize>(items: &[usize]) -> Combinations<'_, K> {
    Combinations::new(items)
}

/// Colex-ordered `k`-subsets of `set` for a runtime `k`.
pub fn subsets_of_size(set: VertexSet, k: usize) -> impl Iterator<Item = VertexSet> {
    let items = set.to_vec();
    let m = items.len();
    let mut mask: u64 = if k == 0 {
        0
    } else if k > m {
        u64::MAX
    } else {
        (1u64 << k) - 1
    };
    let mut finished = k > m;
    std::iter::from_fn(move || {
        if finished {
            return None;
        }
        let out: VertexSet = VertexSet(mask).iter().map(|p| items[p]).collect();
        if k == 0 {
            finished = true;
            return Some(out);
        }
        // Gosper's hack
        let c = mask & mask.wrapping_neg();
        let r = mask.wrapping_add(c);
        if r == 0 {
            finished = true;
        } else {
            mask = (((r ^ mask) >> 2) / c) | r;
            if m < 64 && mask >> m != 0 {
                finished = true;
            }
        }
        Some(out)
    })
}
