//! Vertex subsets of a ground set `[m] = {1, …, m}` packed into a machine word.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Largest supported ground-set size.
pub const MAX_VERTICES: usize = 63;

/// A set of vertices drawn from `{1, …, 63}`.
///
/// Vertex `v` is stored in bit `v - 1`. Ordering is the canonical
/// lexicographic order on the increasing vertex lists, so
/// `{1} < {1,2} < {1,3} < {2}`; the empty set sorts first.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Subset(u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    #[inline]
    pub const fn from_bits(bits: u64) -> Self {
        Subset(bits)
    }

    #[inline]
    pub const fn bits(self) -> u64 {
        self.0
    }

    /// Builds a subset from 1-based vertex labels.
    ///
    /// Panics if a label is 0 or larger than [`MAX_VERTICES`]; parsers that
    /// accept untrusted input check the range first.
    pub fn from_vertices<I: IntoIterator<Item = usize>>(vertices: I) -> Self {
        let mut bits = 0u64;
        for v in vertices {
            assert!(
                (1..=MAX_VERTICES).contains(&v),
                "vertex {v} outside 1..={MAX_VERTICES}"
            );
            bits |= 1 << (v - 1);
        }
        Subset(bits)
    }

    /// The whole ground set `[m]`.
    #[inline]
    pub fn full(m: usize) -> Self {
        debug_assert!(m <= MAX_VERTICES);
        Subset((1u64 << m) - 1)
    }

    #[inline]
    pub fn singleton(v: usize) -> Self {
        debug_assert!((1..=MAX_VERTICES).contains(&v));
        Subset(1 << (v - 1))
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn contains(self, v: usize) -> bool {
        (1..=MAX_VERTICES).contains(&v) && self.0 >> (v - 1) & 1 == 1
    }

    #[inline]
    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn is_disjoint(self, other: Subset) -> bool {
        self.0 & other.0 == 0
    }

    #[inline]
    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    #[inline]
    pub fn with(self, v: usize) -> Subset {
        self.union(Subset::singleton(v))
    }

    #[inline]
    pub fn without(self, v: usize) -> Subset {
        self.difference(Subset::singleton(v))
    }

    /// `[m] \ self`.
    #[inline]
    pub fn complement(self, m: usize) -> Subset {
        Subset::full(m).difference(self)
    }

    /// Smallest vertex, if any.
    #[inline]
    pub fn min_vertex(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize + 1)
    }

    /// Largest vertex, if any.
    #[inline]
    pub fn max_vertex(self) -> Option<usize> {
        (self.0 != 0).then(|| 64 - self.0.leading_zeros() as usize)
    }

    /// Relabels every vertex `v` to `v + offset`.
    #[inline]
    pub fn shift(self, offset: usize) -> Subset {
        debug_assert!(self.max_vertex().map_or(0, |v| v + offset) <= MAX_VERTICES);
        Subset(self.0 << offset)
    }

    /// Increasing iterator over the 1-based vertices.
    pub fn iter(self) -> Vertices {
        Vertices(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// All subsets of `self`, in increasing order of their bit patterns.
    pub fn subsets(self) -> Submasks {
        Submasks {
            mask: self.0,
            next: Some(0),
        }
    }
}

impl Ord for Subset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

impl FromIterator<usize> for Subset {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        Subset::from_vertices(iter)
    }
}

impl IntoIterator for Subset {
    type Item = usize;
    type IntoIter = Vertices;

    fn into_iter(self) -> Vertices {
        self.iter()
    }
}

impl Serialize for Subset {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for Subset {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let vertices = Vec::<usize>::deserialize(deserializer)?;
        if let Some(&v) = vertices.iter().find(|&&v| v == 0 || v > MAX_VERTICES) {
            return Err(serde::de::Error::custom(format!(
                "vertex {v} outside 1..={MAX_VERTICES}"
            )));
        }
        Ok(Subset::from_vertices(vertices))
    }
}

#[derive(Clone, Debug)]
pub struct Vertices(u64);

impl Iterator for Vertices {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v + 1)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Vertices {}

#[derive(Clone, Debug)]
pub struct Submasks {
    mask: u64,
    next: Option<u64>,
}

impl Iterator for Submasks {
    type Item = Subset;

    fn next(&mut self) -> Option<Subset> {
        let cur = self.next?;
        self.next = if cur == self.mask {
            None
        } else {
            Some((cur | !self.mask).wrapping_add(1) & self.mask)
        };
        Some(Subset(cur))
    }
}

/// All `k`-element subsets of `[m]` in canonical order.
pub fn k_subsets(m: usize, k: usize) -> Vec<Subset> {
    fn rec(start: usize, m: usize, k: usize, cur: Subset, out: &mut Vec<Subset>) {
        if k == 0 {
            out.push(cur);
            return;
        }
        for v in start..=m {
            if m - v + 1 < k {
                break;
            }
            rec(v + 1, m, k - 1, cur.with(v), out);
        }
    }
    let mut out = Vec::new();
    if k <= m {
        rec(1, m, k, Subset::EMPTY, &mut out);
    }
    out
}
