//! Fixed-width vertex subsets.

use std::fmt;

use crate::perm::Permutation;

/// Number of 64-bit words needed for `n` vertices.
#[inline]
pub fn words_for(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

/// A subset of `{0, .., n-1}` stored as a little-endian bit vector.
///
/// Sets built for the same `n` have the same width, so ordering and equality
/// are well defined among them.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VertexSet {
    words: Vec<u64>,
}

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        VertexSet {
            words: vec![0; words_for(n)],
        }
    }

    /// Panics if a point is `>= n`.
    pub fn from_points(n: usize, points: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(n);
        for p in points {
            assert!(p < n, "vertex {p} out of range for {n} vertices");
            s.insert(p);
        }
        s
    }

    pub(crate) fn from_words(words: Vec<u64>) -> Self {
        VertexSet { words }
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn insert(&mut self, p: usize) {
        self.words[p / 64] |= 1 << (p % 64);
    }

    #[inline]
    pub fn remove(&mut self, p: usize) {
        self.words[p / 64] &= !(1 << (p % 64));
    }

    #[inline]
    pub fn contains(&self, p: usize) -> bool {
        self.words.get(p / 64).is_some_and(|w| w >> (p % 64) & 1 == 1)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Points in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// `{ p^g : p ∈ self }`.
    pub fn image(&self, g: &Permutation) -> VertexSet {
        let mut out = VertexSet {
            words: vec![0; self.words.len()],
        };
        for p in self.iter() {
            out.insert(g.apply(p));
        }
        out
    }

    /// Writes the image under `g` into `out`, which must have the same width.
    #[inline]
    pub(crate) fn image_into(words: &[u64], g: &[u32], out: &mut [u64]) {
        out.iter_mut().for_each(|w| *w = 0);
        for (i, &w) in words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                let q = g[i * 64 + b] as usize;
                out[q / 64] |= 1 << (q % 64);
            }
        }
    }

    /// Complement within `{0, .., n-1}`.
    pub fn complement(&self, n: usize) -> VertexSet {
        let mut out = VertexSet::empty(n);
        for p in 0..n {
            if !self.contains(p) {
                out.insert(p);
            }
        }
        out
    }
}

// Lets hash sets of `VertexSet` be probed with a raw word buffer.
impl std::borrow::Borrow<[u64]> for VertexSet {
    fn borrow(&self) -> &[u64] {
        &self.words
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
