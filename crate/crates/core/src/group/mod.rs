//! Permutation groups given by generators, backed by a base and strong
//! generating set.
//!
//! The stabilizer chain is built with the deterministic Schreier–Sims
//! algorithm. Base points are taken from an optional caller-supplied prefix
//! and otherwise as the smallest point moved by the element that forces a new
//! level. Every level stores its transversal explicitly: for each point `β`
//! in the basic orbit, an element `u_β` with `base^u_β = β` and its inverse.

mod structure;

pub use structure::{minimal_degree, MinimalDegree, StructureReport, DEFAULT_MINDEG_CAP};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::perm::{check_degree, Permutation};

#[derive(Debug, Clone)]
struct Level {
    base_point: usize,
    gens: Vec<Permutation>,
    orbit: Vec<usize>,
    transversal: Vec<Option<Permutation>>,
    transversal_inv: Vec<Option<Permutation>>,
}

impl Level {
    fn new(degree: usize, base_point: usize) -> Self {
        let mut transversal = vec![None; degree];
        let mut transversal_inv = vec![None; degree];
        transversal[base_point] = Some(Permutation::identity(degree));
        transversal_inv[base_point] = Some(Permutation::identity(degree));
        Level {
            base_point,
            gens: Vec::new(),
            orbit: vec![base_point],
            transversal,
            transversal_inv,
        }
    }
}

/// A permutation group with a valid stabilizer chain.
#[derive(Debug, Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    levels: Vec<Level>,
    order: BigUint,
}

impl PermGroup {
    /// Builds the group generated by `gens` on `degree` points.
    pub fn new(degree: usize, gens: Vec<Permutation>) -> Result<Self> {
        Self::with_base_prefix(degree, gens, &[])
    }

    /// Builds the group with the given points at the front of the base.
    ///
    /// Prefix points fixed by the whole group end up as levels with a trivial
    /// basic orbit.
    pub fn with_base_prefix(degree: usize, gens: Vec<Permutation>, prefix: &[usize]) -> Result<Self> {
        check_degree(degree)?;
        for g in &gens {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    left: degree,
                    right: g.degree(),
                });
            }
        }
        let mut seen = vec![false; degree];
        let mut levels = Vec::with_capacity(prefix.len());
        for &b in prefix {
            if b >= degree {
                return Err(Error::InvalidArgument(format!(
                    "base point {b} out of range for degree {degree}"
                )));
            }
            if !std::mem::replace(&mut seen[b], true) {
                levels.push(Level::new(degree, b));
            }
        }
        let mut group = PermGroup {
            degree,
            generators: gens,
            levels,
            order: BigUint::one(),
        };
        let input = group.generators.clone();
        for g in input {
            let (residue, level) = group.sift(&g, 0);
            if !residue.is_identity() {
                group.insert_strong(0, level, residue);
            }
        }
        group.order = group
            .levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()));
        Ok(group)
    }

    pub fn trivial(degree: usize) -> Result<Self> {
        Self::new(degree, Vec::new())
    }

    /// The symmetric group on `degree` points.
    pub fn symmetric(degree: usize) -> Result<Self> {
        check_degree(degree)?;
        let mut gens = Vec::new();
        if degree >= 2 {
            gens.push(Permutation::from_cycles(degree, &[&[0, 1]])?);
            let all: Vec<usize> = (0..degree).collect();
            if degree >= 3 {
                gens.push(Permutation::from_cycles(degree, &[&all])?);
            }
        }
        Self::new(degree, gens)
    }

    /// The alternating group on `degree` points.
    pub fn alternating(degree: usize) -> Result<Self> {
        check_degree(degree)?;
        let mut gens = Vec::new();
        if degree >= 3 {
            gens.push(Permutation::from_cycles(degree, &[&[0, 1, 2]])?);
            if degree >= 4 {
                let start = if degree % 2 == 1 { 0 } else { 1 };
                let cyc: Vec<usize> = (start..degree).collect();
                gens.push(Permutation::from_cycles(degree, &[&cyc])?);
            }
        }
        Self::new(degree, gens)
    }

    /// The cyclic group generated by `i -> i+1 mod degree`.
    pub fn cyclic(degree: usize) -> Result<Self> {
        check_degree(degree)?;
        let rot = Permutation::from_images_unchecked((0..degree as u32).map(|i| (i + 1) % degree as u32).collect());
        Self::new(degree, vec![rot])
    }

    /// The dihedral group of order `2·degree` acting on a `degree`-gon.
    pub fn dihedral(degree: usize) -> Result<Self> {
        check_degree(degree)?;
        let n = degree as u32;
        let rot = Permutation::from_images_unchecked((0..n).map(|i| (i + 1) % n).collect());
        let refl = Permutation::from_images_unchecked((0..n).map(|i| (n - i) % n).collect());
        Self::new(degree, vec![rot, refl])
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// The generators the group was built from.
    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    /// The order as `u64`, or `None` when it does not fit.
    pub fn order_u64(&self) -> Option<u64> {
        self.order.to_u64()
    }

    pub fn is_trivial(&self) -> bool {
        self.levels.iter().all(|l| l.orbit.len() == 1)
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base_point).collect()
    }

    pub fn base_len(&self) -> usize {
        self.levels.len()
    }

    /// All strong generators, without repetition.
    pub fn strong_generators(&self) -> Vec<Permutation> {
        let mut out: Vec<Permutation> = Vec::new();
        for l in &self.levels {
            for g in &l.gens {
                if !out.contains(g) {
                    out.push(g.clone());
                }
            }
        }
        out
    }

    /// Strong generators of the pointwise stabilizer of the first `level` base points.
    pub fn level_generators(&self, level: usize) -> &[Permutation] {
        self.levels.get(level).map_or(&[], |l| l.gens.as_slice())
    }

    /// Basic orbit of the base point at `level`, in discovery order.
    pub fn basic_orbit(&self, level: usize) -> &[usize] {
        &self.levels[level].orbit
    }

    /// `u` with `base[level]^u = point`, if `point` lies in the basic orbit.
    pub fn transversal_element(&self, level: usize, point: usize) -> Option<&Permutation> {
        self.levels[level].transversal[point].as_ref()
    }

    /// Order of the pointwise stabilizer of the first `level` base points.
    pub fn stabilizer_order(&self, level: usize) -> BigUint {
        self.levels[level..]
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    /// Strips `g` through the chain from `start`, returning the residue and
    /// the level at which it dropped out (`base_len` if it passed every level).
    fn sift(&self, g: &Permutation, start: usize) -> (Permutation, usize) {
        let mut h = g.clone();
        for (j, level) in self.levels.iter().enumerate().skip(start) {
            let beta = h.apply(level.base_point);
            match &level.transversal_inv[beta] {
                Some(inv) => h = h.then(inv),
                None => return (h, j),
            }
        }
        let len = self.levels.len();
        (h, len)
    }

    /// Adds `g` as a strong generator to levels `from..=to`, deepest first.
    fn insert_strong(&mut self, from: usize, to: usize, g: Permutation) {
        if to == self.levels.len() {
            let bp = g
                .first_moved_point()
                .expect("residue passed to insert_strong is not the identity");
            self.levels.push(Level::new(self.degree, bp));
        }
        for level in (from..=to).rev() {
            self.extend_level(level, g.clone());
        }
    }

    fn extend_level(&mut self, level: usize, g: Permutation) {
        let lv = &mut self.levels[level];
        if lv.gens.contains(&g) {
            return;
        }
        lv.gens.push(g);
        let new_gen = lv.gens.len() - 1;
        let old_len = lv.orbit.len();

        let mut j = 0;
        while j < lv.orbit.len() {
            let beta = lv.orbit[j];
            let first = if j < old_len { new_gen } else { 0 };
            for s in first..lv.gens.len() {
                let image = lv.gens[s].apply(beta);
                if lv.transversal[image].is_none() {
                    let u = lv.transversal[beta].as_ref().unwrap().then(&lv.gens[s]);
                    lv.transversal_inv[image] = Some(u.inverse());
                    lv.transversal[image] = Some(u);
                    lv.orbit.push(image);
                }
            }
            j += 1;
        }

        // Schreier generators not tested before: old orbit points with the new
        // generator, new orbit points with every generator.
        let mut pending = Vec::new();
        for (j, &beta) in lv.orbit.iter().enumerate() {
            let first = if j < old_len { new_gen } else { 0 };
            for s in first..lv.gens.len() {
                let image = lv.gens[s].apply(beta);
                let h = lv.transversal[beta]
                    .as_ref()
                    .unwrap()
                    .then(&lv.gens[s])
                    .then(lv.transversal_inv[image].as_ref().unwrap());
                if !h.is_identity() {
                    pending.push(h);
                }
            }
        }
        for h in pending {
            let (residue, drop) = self.sift(&h, level + 1);
            if !residue.is_identity() {
                self.insert_strong(level + 1, drop, residue);
            }
        }
    }

    /// Membership test by sifting.
    pub fn contains(&self, a: &Permutation) -> Result<bool> {
        if a.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: a.degree(),
            });
        }
        let (residue, _) = self.sift(a, 0);
        Ok(residue.is_identity())
    }

    /// True iff `self ≤ other`, i.e. every generator of `self` lies in `other`.
    pub fn is_subgroup_of(&self, other: &PermGroup) -> Result<bool> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: other.degree,
            });
        }
        for g in &self.generators {
            if !other.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Same elements, decided by mutual containment.
    pub fn same_group(&self, other: &PermGroup) -> Result<bool> {
        Ok(self.order == other.order && self.is_subgroup_of(other)?)
    }

    /// Orbit partition of the points, each orbit sorted, orbits ordered by
    /// their smallest point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        orbits_of(self.degree, &self.generators)
    }

    pub fn orbit_of(&self, point: usize) -> Vec<usize> {
        let mut seen = vec![false; self.degree];
        let mut orbit = vec![point];
        seen[point] = true;
        let mut j = 0;
        while j < orbit.len() {
            let x = orbit[j];
            for g in &self.generators {
                let y = g.apply(x);
                if !seen[y] {
                    seen[y] = true;
                    orbit.push(y);
                }
            }
            j += 1;
        }
        orbit.sort_unstable();
        orbit
    }

    pub fn is_transitive(&self) -> bool {
        self.orbit_of(0).len() == self.degree
    }

    /// Every element exactly once, as long as the order is at most `cap`.
    pub fn elements(&self, cap: u64) -> Result<Elements<'_>> {
        match self.order_u64() {
            Some(o) if o <= cap => Ok(Elements::new(self)),
            _ => Err(Error::cap(format!("group order {}", self.order), cap)),
        }
    }
}

pub(crate) fn orbits_of(degree: usize, gens: &[Permutation]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; degree];
    let mut out = Vec::new();
    for start in 0..degree {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut orbit = vec![start];
        let mut j = 0;
        while j < orbit.len() {
            let x = orbit[j];
            for g in gens {
                let y = g.apply(x);
                if !seen[y] {
                    seen[y] = true;
                    orbit.push(y);
                }
            }
            j += 1;
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    out
}

/// Iterator over all group elements as products of transversal elements.
///
/// An element is `t_{L-1} · … · t_1 · t_0` with `t_j` taken from the level-`j`
/// transversal; level 0 varies fastest.
pub struct Elements<'a> {
    group: &'a PermGroup,
    index: Vec<usize>,
    prefix: Vec<Permutation>,
    done: bool,
}

impl<'a> Elements<'a> {
    fn new(group: &'a PermGroup) -> Self {
        let len = group.levels.len();
        let mut prefix = vec![Permutation::identity(group.degree); len + 1];
        for j in (0..len).rev() {
            prefix[j] = prefix[j + 1].then(group.levels[j].transversal[group.levels[j].orbit[0]].as_ref().unwrap());
        }
        Elements {
            group,
            index: vec![0; len],
            prefix,
            done: false,
        }
    }

    fn factor(&self, level: usize) -> &'a Permutation {
        let lv = &self.group.levels[level];
        lv.transversal[lv.orbit[self.index[level]]].as_ref().unwrap()
    }
}

impl Iterator for Elements<'_> {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.done {
            return None;
        }
        let out = self.prefix[0].clone();
        let len = self.index.len();
        let mut j = 0;
        loop {
            if j == len {
                self.done = true;
                return Some(out);
            }
            self.index[j] += 1;
            if self.index[j] < self.group.levels[j].orbit.len() {
                break;
            }
            self.index[j] = 0;
            j += 1;
        }
        for i in (0..=j).rev() {
            self.prefix[i] = self.prefix[i + 1].then(self.factor(i));
        }
        Some(out)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use std::collections::HashSet;

    /// Closure of the generators under composition, by breadth-first search.
    pub(crate) fn brute_closure(degree: usize, gens: &[Permutation]) -> HashSet<Permutation> {
        let mut set = HashSet::new();
        let id = Permutation::identity(degree);
        set.insert(id.clone());
        let mut frontier = vec![id];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = x.compose(g).unwrap();
                if set.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        set
    }

    fn mul_map(p: usize, a: usize) -> Permutation {
        Permutation::from_images((0..p).map(|x| x * a % p).collect()).unwrap()
    }

    fn frob(p: usize, a: usize) -> PermGroup {
        let shift = Permutation::from_images((0..p).map(|x| (x + 1) % p).collect()).unwrap();
        PermGroup::new(p, vec![shift, mul_map(p, a)]).unwrap()
    }

    #[test]
    fn trivial_group() {
        let g = PermGroup::new(4, vec![]).unwrap();
        assert_eq!(g.order(), &BigUint::one());
        assert!(g.contains(&Permutation::identity(4)).unwrap());
        assert_eq!(g.elements(10).unwrap().count(), 1);
    }

    #[test]
    fn frobenius_orders_match_closure() {
        for (p, a, order) in [(5, 2, 20u32), (7, 2, 21), (7, 3, 42)] {
            let g = frob(p, a);
            assert_eq!(g.order(), &BigUint::from(order));
            assert_eq!(brute_closure(p, g.generators()).len(), order as usize);
        }
    }

    #[test]
    fn membership() {
        let f20 = frob(5, 2);
        let closure = brute_closure(5, f20.generators());
        let t = Permutation::from_cycles(5, &[&[0, 1]]).unwrap();
        assert!(!closure.contains(&t));
        assert!(!f20.contains(&t).unwrap());
        let f21 = frob(7, 2);
        assert!(f21.contains(&mul_map(7, 2)).unwrap());
        assert!(f21.contains(&Permutation::identity(7)).unwrap());
        assert!(f21.contains(&Permutation::identity(6)).is_err());
    }

    #[test]
    fn subgroup_relation() {
        let f21 = frob(7, 2);
        let mut gens = f21.generators().to_vec();
        gens.push(mul_map(7, 3));
        let f42 = PermGroup::new(7, gens).unwrap();
        assert_eq!(f42.order(), &BigUint::from(42u32));
        assert!(f21.is_subgroup_of(&f21).unwrap());
        assert!(f21.is_subgroup_of(&f42).unwrap());
        assert!(!f42.is_subgroup_of(&f21).unwrap());
    }

    #[test]
    fn orbit_examples() {
        assert_eq!(PermGroup::trivial(3).unwrap().orbits(), vec![vec![0], vec![1], vec![2]]);
        assert_eq!(PermGroup::cyclic(5).unwrap().orbits(), vec![vec![0, 1, 2, 3, 4]]);
        let g = PermGroup::new(5, vec![Permutation::from_cycles(5, &[&[0, 1], &[2, 3]]).unwrap()]).unwrap();
        assert_eq!(g.orbits(), vec![vec![0, 1], vec![2, 3], vec![4]]);
    }

    #[test]
    fn elements_of_f21_are_affine_maps() {
        let f21 = frob(7, 2);
        let elems: Vec<Permutation> = f21.elements(100).unwrap().collect();
        assert_eq!(elems.len(), 21);
        assert_eq!(elems.iter().collect::<HashSet<_>>().len(), 21);
        assert!(elems.iter().all(|e| matches!(e.support(), 0 | 6 | 7)));
        let c3 = PermGroup::new(3, vec![Permutation::from_cycles(3, &[&[0, 1, 2]]).unwrap()]).unwrap();
        assert_eq!(c3.elements(10).unwrap().count(), 3);
        assert!(PermGroup::symmetric(8).unwrap().elements(100).is_err());
    }

    #[test]
    fn standard_families() {
        let fact = |n: u32| (1..=n).product::<u32>();
        for n in 1..=8usize {
            let s = PermGroup::symmetric(n).unwrap();
            assert_eq!(s.order(), &BigUint::from(fact(n as u32)));
            let a = PermGroup::alternating(n).unwrap();
            let expect = if n >= 2 { fact(n as u32) / 2 } else { 1 };
            assert_eq!(a.order(), &BigUint::from(expect), "A{n}");
        }
        assert_eq!(PermGroup::dihedral(5).unwrap().order(), &BigUint::from(10u32));
        assert_eq!(PermGroup::dihedral(6).unwrap().order(), &BigUint::from(12u32));
    }

    #[test]
    fn orbit_stabilizer_along_chain() {
        let g = PermGroup::symmetric(6).unwrap();
        for level in 0..g.base_len() {
            let lhs = BigUint::from(g.basic_orbit(level).len()) * g.stabilizer_order(level + 1);
            assert_eq!(lhs, g.stabilizer_order(level));
            for (j, h) in g.level_generators(level).iter().enumerate() {
                for b in &g.base()[..level] {
                    assert_eq!(h.apply(*b), *b, "gen {j} at level {level}");
                }
            }
        }
    }

    #[test]
    fn base_prefix_is_respected() {
        let g = PermGroup::with_base_prefix(6, PermGroup::symmetric(6).unwrap().generators().to_vec(), &[4, 2]).unwrap();
        assert_eq!(&g.base()[..2], &[4, 2]);
        assert_eq!(g.order(), &BigUint::from(720u32));
        let h = PermGroup::with_base_prefix(4, vec![Permutation::from_cycles(4, &[&[0, 1]]).unwrap()], &[3]).unwrap();
        assert_eq!(h.basic_orbit(0), &[3]);
        assert_eq!(h.order(), &BigUint::from(2u32));
    }

    #[test]
    fn generator_degree_mismatch() {
        let err = PermGroup::new(4, vec![Permutation::identity(5)]).unwrap_err();
        assert!(matches!(err, Error::DegreeMismatch { .. }));
    }
}
