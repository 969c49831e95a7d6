//! Lexicographic ranking of `k`-subsets of `{0, .., n-1}` and orbit
//! computations on them.

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Default limit on the number of `k`-sets enumerated in one computation.
pub const DEFAULT_KSET_CAP: u64 = 5_000_000;

/// Bijection between the `k`-subsets of `{0, .., n-1}` and `{0, .., C(n,k)-1}`
/// that preserves lexicographic order of the sorted subsets.
#[derive(Debug, Clone)]
pub struct KSetIndex {
    n: usize,
    k: usize,
    // binom[a][b] = C(a, b) for a <= n, b <= k
    binom: Vec<Vec<u64>>,
}

impl KSetIndex {
    /// Fails when `C(n, k)` exceeds `cap`.
    pub fn new(n: usize, k: usize, cap: u64) -> Result<Self> {
        if k > n {
            return Err(Error::InvalidArgument(format!("k = {k} exceeds n = {n}")));
        }
        let mut binom = vec![vec![0u64; k + 1]; n + 1];
        for a in 0..=n {
            binom[a][0] = 1;
            for b in 1..=k.min(a) {
                binom[a][b] = binom[a - 1][b - 1].saturating_add(if b < a { binom[a - 1][b] } else { 0 });
            }
        }
        let count = binom[n][k];
        if count > cap || count == u64::MAX {
            return Err(Error::cap(format!("C({n},{k}) subsets"), cap));
        }
        Ok(KSetIndex { n, k, binom })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn count(&self) -> u64 {
        self.binom[self.n][self.k]
    }

    fn c(&self, a: usize, b: usize) -> u64 {
        if b > a {
            0
        } else {
            self.binom[a][b]
        }
    }

    /// Rank of a strictly increasing list of `k` points.
    pub fn rank(&self, subset: &[usize]) -> u64 {
        debug_assert_eq!(subset.len(), self.k);
        debug_assert!(subset.windows(2).all(|w| w[0] < w[1]));
        let mut rank = 0;
        let mut next = 0;
        for (i, &c) in subset.iter().enumerate() {
            let rest = self.k - 1 - i;
            for j in next..c {
                rank += self.c(self.n - 1 - j, rest);
            }
            next = c + 1;
        }
        rank
    }

    pub fn unrank(&self, mut rank: u64) -> Vec<usize> {
        debug_assert!(rank < self.count());
        let mut out = Vec::with_capacity(self.k);
        let mut j = 0;
        for i in 0..self.k {
            let rest = self.k - 1 - i;
            loop {
                let block = self.c(self.n - 1 - j, rest);
                if rank < block {
                    break;
                }
                rank -= block;
                j += 1;
            }
            out.push(j);
            j += 1;
        }
        out
    }

    /// Rank of the image of the subset with rank `rank` under `g`.
    pub fn image_rank(&self, g: &Permutation, rank: u64, scratch: &mut Vec<usize>) -> u64 {
        scratch.clear();
        scratch.extend(self.unrank(rank).into_iter().map(|x| g.apply(x)));
        scratch.sort_unstable();
        self.rank(scratch)
    }

    /// All subsets in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        let mut current: Option<Vec<usize>> = Some((0..self.k).collect());
        std::iter::from_fn(move || {
            let out = current.take()?;
            let mut next = out.clone();
            let (n, k) = (self.n, self.k);
            let mut i = k;
            while i > 0 {
                i -= 1;
                if next[i] < n - k + i {
                    next[i] += 1;
                    for j in i + 1..k {
                        next[j] = next[j - 1] + 1;
                    }
                    current = Some(next);
                    break;
                }
            }
            Some(out)
        })
    }
}

/// Orbit of the induced action on `k`-sets: the smallest rank it contains
/// and its size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KSetOrbit {
    pub min_rank: u64,
    pub size: u64,
}

/// Orbits of `⟨gens⟩` on the `k`-subsets, ordered by smallest rank.
pub fn kset_orbits(index: &KSetIndex, gens: &[Permutation]) -> Vec<KSetOrbit> {
    let total = index.count() as usize;
    let mut parent: Vec<u32> = (0..total as u32).collect();
    fn find(parent: &mut [u32], mut x: u32) -> u32 {
        while parent[x as usize] != x {
            parent[x as usize] = parent[parent[x as usize] as usize];
            x = parent[x as usize];
        }
        x
    }
    let mut scratch = Vec::with_capacity(index.k());
    for (rank, subset) in index.iter().enumerate() {
        for g in gens {
            scratch.clear();
            scratch.extend(subset.iter().map(|&x| g.apply(x)));
            scratch.sort_unstable();
            let image = index.rank(&scratch) as u32;
            let (a, b) = (find(&mut parent, rank as u32), find(&mut parent, image));
            if a != b {
                // keep the smaller rank as root
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                parent[hi as usize] = lo;
            }
        }
    }
    let mut sizes = vec![0u64; total];
    for r in 0..total as u32 {
        let root = find(&mut parent, r);
        sizes[root as usize] += 1;
    }
    sizes
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > 0)
        .map(|(r, &s)| KSetOrbit {
            min_rank: r as u64,
            size: s,
        })
        .collect()
}
