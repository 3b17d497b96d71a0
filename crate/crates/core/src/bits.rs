//! Fixed-length bit vectors and vertex sets.
//!
//! Bit `i` is stored most-significant-first inside its word, so the derived
//! ordering on [`Bits`] is the lexicographic order of the bit strings. Every
//! "canonical order" in this crate is that order.

use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use smallvec::SmallVec;

use crate::error::Error;

type Words = SmallVec<[u64; 2]>;

/// A bit vector of fixed length: one coordinate per wall.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bits {
    len: usize,
    words: Words,
}

#[inline]
fn mask(i: usize) -> u64 {
    1u64 << (63 - (i % 64))
}

impl Bits {
    pub fn zeros(len: usize) -> Self {
        Bits {
            len,
            words: smallvec::smallvec![0; len.div_ceil(64)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut b = Bits::zeros(len);
        for i in 0..len {
            b.set(i, true);
        }
        b
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let bools: Vec<bool> = bits.into_iter().collect();
        let mut b = Bits::zeros(bools.len());
        for (i, v) in bools.into_iter().enumerate() {
            b.set(i, v);
        }
        b
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] & mask(i) != 0
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: bool) {
        debug_assert!(i < self.len);
        if v {
            self.words[i / 64] |= mask(i);
        } else {
            self.words[i / 64] &= !mask(i);
        }
    }

    pub fn flip(&mut self, i: usize) {
        let v = self.get(i);
        self.set(i, !v);
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Coordinatewise majority.
    pub fn majority(a: &Bits, b: &Bits, c: &Bits) -> Bits {
        debug_assert!(a.len == b.len && b.len == c.len);
        let words = a
            .words
            .iter()
            .zip(&b.words)
            .zip(&c.words)
            .map(|((x, y), z)| (x & y) | (y & z) | (x & z))
            .collect();
        Bits { len: a.len, words }
    }

    /// `majority(a, b, self) == self`, without allocating.
    #[inline]
    pub fn is_between(&self, a: &Bits, b: &Bits) -> bool {
        self.words
            .iter()
            .zip(&a.words)
            .zip(&b.words)
            .all(|((x, p), q)| (p & q) & !x == 0 && x & !(p | q) == 0)
    }

    pub fn xor(&self, other: &Bits) -> Bits {
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(x, y)| x ^ y)
            .collect();
        Bits {
            len: self.len,
            words,
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Indices where `self` and `other` differ.
    pub fn separating(&self, other: &Bits) -> Vec<usize> {
        (0..self.len).filter(|&i| self.get(i) != other.get(i)).collect()
    }

    /// Number of coordinates where `self` and `other` differ.
    pub fn hamming(&self, other: &Bits) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(x, y)| (x ^ y).count_ones() as usize)
            .sum()
    }

    /// Keeps the listed coordinates, in the listed order.
    pub fn select(&self, coords: &[usize]) -> Bits {
        Bits::from_bools(coords.iter().map(|&i| self.get(i)))
    }

    pub fn concat(&self, other: &Bits) -> Bits {
        Bits::from_bools(self.iter().chain(other.iter()))
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bits({self})")
    }
}

impl FromStr for Bits {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut bools = Vec::with_capacity(s.len());
        for ch in s.chars() {
            match ch {
                '0' => bools.push(false),
                '1' => bools.push(true),
                _ => return Err(Error::BadBitString(s.to_string())),
            }
        }
        Ok(Bits::from_bools(bools))
    }
}

/// Index of a vertex inside a [`MedianModel`](crate::MedianModel).
///
/// Ids are assigned in canonical (lexicographic) order of the vertices' bit
/// vectors, so comparing ids compares vertices canonically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub usize);

impl VertexId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// A set of vertices of one model, iterated in canonical order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet(FixedBitSet);

impl VertexSet {
    pub fn empty(universe: usize) -> Self {
        VertexSet(FixedBitSet::with_capacity(universe))
    }

    pub fn full(universe: usize) -> Self {
        let mut s = FixedBitSet::with_capacity(universe);
        s.insert_range(..);
        VertexSet(s)
    }

    pub fn from_ids<I: IntoIterator<Item = VertexId>>(universe: usize, ids: I) -> Self {
        let mut s = VertexSet::empty(universe);
        for id in ids {
            s.insert(id);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.0.len()
    }

    pub fn insert(&mut self, v: VertexId) -> bool {
        !self.0.put(v.0)
    }

    pub fn remove(&mut self, v: VertexId) {
        self.0.set(v.0, false);
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.contains(v.0)
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.0.ones().map(VertexId)
    }

    pub fn to_vec(&self) -> Vec<VertexId> {
        self.iter().collect()
    }

    pub fn first(&self) -> Option<VertexId> {
        self.0.ones().next().map(VertexId)
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        self.0.union_with(&other.0);
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        self.0.intersect_with(&other.0);
    }

    pub fn difference_with(&mut self, other: &VertexSet) {
        self.0.difference_with(&other.0);
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|v| v.0)).finish()
    }
}
