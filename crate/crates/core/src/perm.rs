//! Permutations of `{0, .., n-1}` and their cycle structure.
//!
//! Permutations act on the right: `compose(a, b)` maps `i` to `(i^a)^b`,
//! i.e. apply `a` first and then `b`.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;

use crate::error::{Error, Result};

/// Largest supported degree.
pub const MAX_DEGREE: usize = 4096;

/// Whether textual cycle notation numbers points from 0 or from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PointBase {
    #[default]
    Zero,
    One,
}

impl PointBase {
    fn offset(self) -> usize {
        match self {
            PointBase::Zero => 0,
            PointBase::One => 1,
        }
    }
}

/// Cycle decomposition summary of a permutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleStructure {
    /// Cycle lengths in non-increasing order, fixed points included as 1s.
    pub cycle_lengths: Vec<usize>,
    /// Number of moved points.
    pub support: usize,
    /// Least common multiple of the cycle lengths.
    pub order: BigUint,
    /// `Some(p)` when the order is the prime `p`.
    pub prime_order: Option<usize>,
}

impl CycleStructure {
    pub fn cycle_count(&self) -> usize {
        self.cycle_lengths.len()
    }
}

/// A bijection on `{0, .., degree-1}`.
pub struct Permutation {
    images: Box<[u32]>,
    cycles: OnceLock<CycleStructure>,
}

impl Clone for Permutation {
    fn clone(&self) -> Self {
        Permutation {
            images: self.images.clone(),
            cycles: self.cycles.clone(),
        }
    }
}

impl PartialEq for Permutation {
    fn eq(&self, other: &Self) -> bool {
        self.images == other.images
    }
}

impl Eq for Permutation {}

impl Hash for Permutation {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.images.hash(state);
    }
}

impl PartialOrd for Permutation {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Permutation {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.images.cmp(&other.images)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{}]{}", self.degree(), self)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_cycle_string(PointBase::Zero))
    }
}

pub(crate) fn check_degree(degree: usize) -> Result<()> {
    if degree == 0 {
        return Err(Error::InvalidPermutation("degree must be at least 1".into()));
    }
    if degree > MAX_DEGREE {
        return Err(Error::DegreeCap {
            degree,
            cap: MAX_DEGREE,
        });
    }
    Ok(())
}

impl Permutation {
    fn from_raw(images: Box<[u32]>) -> Self {
        Permutation {
            images,
            cycles: OnceLock::new(),
        }
    }

    pub fn identity(degree: usize) -> Self {
        Self::from_raw((0..degree as u32).collect())
    }

    /// Builds a permutation from its image array, `images[i] = i^σ`.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        check_degree(n)?;
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::InvalidPermutation(format!(
                    "image array is not a bijection on 0..{n}"
                )));
            }
            seen[x] = true;
        }
        Ok(Self::from_raw(images.into_iter().map(|x| x as u32).collect()))
    }

    /// Image array built by the caller and known to be a bijection.
    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Self {
        debug_assert!({
            let mut s = images.clone();
            s.sort_unstable();
            s.iter().enumerate().all(|(i, &x)| i as u32 == x)
        });
        Self::from_raw(images.into_boxed_slice())
    }

    /// Builds a permutation from disjoint cycles given in 0-based points.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self> {
        check_degree(degree)?;
        let mut images: Vec<usize> = (0..degree).collect();
        let mut used = vec![false; degree];
        for cycle in cycles {
            for (idx, &x) in cycle.iter().enumerate() {
                if x >= degree {
                    return Err(Error::InvalidPermutation(format!(
                        "point {x} out of range for degree {degree}"
                    )));
                }
                if used[x] {
                    return Err(Error::InvalidPermutation(format!(
                        "point {x} appears twice"
                    )));
                }
                used[x] = true;
                images[x] = cycle[(idx + 1) % cycle.len()];
            }
        }
        Self::from_images(images)
    }

    /// Parses disjoint cycle notation such as `"(1 2 3)(4 5)"`.
    ///
    /// Whitespace is insignificant apart from separating numbers, commas are
    /// accepted as separators and `()` or the empty string denote the identity.
    pub fn parse_cycles(text: &str, degree: usize, base: PointBase) -> Result<Self> {
        let bad = |msg: String| Error::InvalidPermutation(format!("{msg} in {text:?}"));
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut current: Option<Vec<usize>> = None;
        let mut number = String::new();

        let flush = |number: &mut String, current: &mut Option<Vec<usize>>| -> Result<()> {
            if number.is_empty() {
                return Ok(());
            }
            let value: usize = number
                .parse()
                .map_err(|_| bad(format!("bad number {number:?}")))?;
            let point = value
                .checked_sub(base.offset())
                .ok_or_else(|| bad(format!("point {value} below the first label")))?;
            match current {
                Some(c) => c.push(point),
                None => return Err(bad("number outside parentheses".into())),
            }
            number.clear();
            Ok(())
        };

        for ch in text.chars() {
            match ch {
                '(' => {
                    if current.is_some() {
                        return Err(bad("nested parenthesis".into()));
                    }
                    current = Some(Vec::new());
                }
                ')' => {
                    flush(&mut number, &mut current)?;
                    let c = current.take().ok_or_else(|| bad("unbalanced ')'".into()))?;
                    if !c.is_empty() {
                        cycles.push(c);
                    }
                }
                c if c.is_ascii_digit() => number.push(c),
                c if c.is_whitespace() || c == ',' => flush(&mut number, &mut current)?,
                other => return Err(bad(format!("unexpected character {other:?}"))),
            }
        }
        if current.is_some() {
            return Err(bad("unterminated cycle".into()));
        }
        let refs: Vec<&[usize]> = cycles.iter().map(Vec::as_slice).collect();
        Self::from_cycles(degree, &refs)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    /// The image array as stored.
    #[inline]
    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// `i -> (i^self)^other`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(self.then(other))
    }

    /// `compose` for operands already known to share a degree.
    #[inline]
    pub(crate) fn then(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Self::from_raw(
            self.images
                .iter()
                .map(|&x| other.images[x as usize])
                .collect(),
        )
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Self::from_raw(inv.into_boxed_slice())
    }

    /// `self^k` by repeated squaring.
    pub fn pow(&self, mut k: u64) -> Permutation {
        let mut base = self.clone();
        let mut acc = Permutation::identity(self.degree());
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            k >>= 1;
        }
        acc
    }

    /// Disjoint cycles of length at least 2, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.apply(start) == start {
                seen[start] = true;
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }

    /// Cycle structure, computed on first use and cached.
    pub fn cycle_structure(&self) -> &CycleStructure {
        self.cycles.get_or_init(|| {
            let n = self.degree();
            let mut seen = vec![false; n];
            let mut lengths = Vec::new();
            for start in 0..n {
                if seen[start] {
                    continue;
                }
                let mut len = 0;
                let mut x = start;
                while !seen[x] {
                    seen[x] = true;
                    len += 1;
                    x = self.apply(x);
                }
                lengths.push(len);
            }
            lengths.sort_unstable_by(|a, b| b.cmp(a));
            let support = lengths.iter().filter(|&&l| l > 1).sum();
            let order = lengths
                .iter()
                .fold(BigUint::one(), |acc, &l| acc.lcm(&BigUint::from(l)));
            let prime_order = lengths
                .iter()
                .copied()
                .filter(|&l| l > 1)
                .max()
                .filter(|&p| is_prime(p) && lengths.iter().all(|&l| l == 1 || l == p));
            CycleStructure {
                cycle_lengths: lengths,
                support,
                order,
                prime_order,
            }
        })
    }

    /// Number of moved points.
    pub fn support(&self) -> usize {
        self.cycle_structure().support
    }

    /// Moved points in increasing order.
    pub fn moved_points(&self) -> impl Iterator<Item = usize> + '_ {
        self.images
            .iter()
            .enumerate()
            .filter(|(i, &x)| *i as u32 != x)
            .map(|(i, _)| i)
    }

    pub fn first_moved_point(&self) -> Option<usize> {
        self.moved_points().next()
    }

    pub fn to_cycle_string(&self, base: PointBase) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "()".to_string();
        }
        let mut s = String::new();
        for c in cycles {
            s.push('(');
            let parts: Vec<String> = c.iter().map(|x| (x + base.offset()).to_string()).collect();
            s.push_str(&parts.join(" "));
            s.push(')');
        }
        s
    }
}

pub(crate) fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}
