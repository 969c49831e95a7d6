use num_traits::ToPrimitive;
use serde::Serialize;

use super::PermGroup;
use crate::kset::{kset_orbits, KSetIndex, DEFAULT_KSET_CAP};
use crate::perm::Permutation;

/// Default work limit for the minimal-degree computation.
pub const DEFAULT_MINDEG_CAP: u64 = 1_000_000;

/// Least support of a non-identity element, with an element attaining it.
#[derive(Debug, Clone)]
pub struct MinimalDegree {
    pub degree: usize,
    pub witness: Permutation,
}

/// Transitivity, primitivity, homogeneity and minimal degree of a group.
#[derive(Debug, Clone, Serialize)]
pub struct StructureReport {
    pub degree: usize,
    pub order: String,
    pub transitive: bool,
    pub primitive: bool,
    /// A block of imprimitivity containing point 0, when one exists.
    pub nontrivial_block: Option<Vec<usize>>,
    /// Largest `k ≤ kmax` such that the group has one orbit on `j`-sets for all `1 ≤ j ≤ k`.
    pub k_homogeneous_up_to: usize,
    /// Set when the `k`-set enumeration cap stopped the homogeneity scan early.
    pub k_homogeneity_capped: bool,
    pub minimal_degree: Option<usize>,
    /// Witness in 0-based cycle notation.
    pub minimal_degree_witness: Option<String>,
    pub generator_count: usize,
}

impl PermGroup {
    /// Smallest block containing points 0 and `other`, by union-find closure.
    pub fn minimal_block(&self, other: usize) -> Vec<usize> {
        let n = self.degree();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut queue = vec![(0, other)];
        let (a, b) = (find(&mut parent, 0), find(&mut parent, other));
        if a != b {
            parent[b] = a;
        }
        while let Some((x, y)) = queue.pop() {
            for g in self.generators() {
                let rx = find(&mut parent, g.apply(x));
                let ry = find(&mut parent, g.apply(y));
                if rx != ry {
                    parent[ry] = rx;
                    queue.push((rx, ry));
                }
            }
        }
        let root = find(&mut parent, 0);
        (0..n).filter(|&x| find(&mut parent, x) == root).collect()
    }

    /// A non-trivial block containing 0, if the group is transitive and imprimitive.
    pub fn find_nontrivial_block(&self) -> Option<Vec<usize>> {
        let n = self.degree();
        if !self.is_transitive() {
            return None;
        }
        (1..n).map(|b| self.minimal_block(b)).find(|blk| blk.len() < n)
    }

    pub fn is_primitive(&self) -> bool {
        self.is_transitive() && self.find_nontrivial_block().is_none()
    }

    /// Number of orbits on `k`-sets, or `None` past the enumeration cap.
    pub fn kset_orbit_count(&self, k: usize, cap: u64) -> Option<usize> {
        let index = KSetIndex::new(self.degree(), k, cap).ok()?;
        Some(kset_orbits(&index, self.generators()).len())
    }

    /// Full structure summary; `kmax` is clamped to `n/2`.
    pub fn structure_report(&self, kmax: usize) -> StructureReport {
        self.structure_report_with_caps(kmax, DEFAULT_KSET_CAP, DEFAULT_MINDEG_CAP)
    }

    pub fn structure_report_with_caps(&self, kmax: usize, kset_cap: u64, mindeg_cap: u64) -> StructureReport {
        let n = self.degree();
        let transitive = self.is_transitive();
        let nontrivial_block = if transitive { self.find_nontrivial_block() } else { None };
        let primitive = transitive && nontrivial_block.is_none();

        let mut k_hom = 0;
        let mut capped = false;
        if transitive {
            let top = kmax.min(n / 2);
            k_hom = top.min(1);
            for k in 2..=top {
                match self.kset_orbit_count(k, kset_cap) {
                    Some(1) => k_hom = k,
                    Some(_) => break,
                    None => {
                        capped = true;
                        break;
                    }
                }
            }
        }

        let md = minimal_degree(self, mindeg_cap);
        StructureReport {
            degree: n,
            order: self.order().to_string(),
            transitive,
            primitive,
            nontrivial_block,
            k_homogeneous_up_to: k_hom,
            k_homogeneity_capped: capped,
            minimal_degree: md.as_ref().map(|m| m.degree),
            minimal_degree_witness: md.map(|m| m.witness.to_string()),
            generator_count: self.generators().len(),
        }
    }
}

fn derangement_count(s: usize) -> u128 {
    let (mut a, mut b) = (1u128, 0u128); // D(0), D(1)
    if s == 0 {
        return 1;
    }
    for i in 2..=s {
        let next = (i as u128 - 1).saturating_mul(a.saturating_add(b));
        a = b;
        b = next;
    }
    b
}

fn binom_u128(n: usize, k: usize) -> u128 {
    let k = k.min(n - k.min(n));
    let mut acc = 1u128;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Calls `f` with every permutation of `points` that moves every point in it.
fn for_each_derangement(points: &[usize], degree: usize, f: &mut dyn FnMut(&Permutation) -> bool) -> bool {
    let s = points.len();
    let mut images = (0..degree as u32).collect::<Vec<u32>>();
    let mut used = vec![false; s];
    fn rec(
        i: usize,
        points: &[usize],
        used: &mut [bool],
        images: &mut Vec<u32>,
        f: &mut dyn FnMut(&Permutation) -> bool,
    ) -> bool {
        if i == points.len() {
            let p = Permutation::from_images_unchecked(images.clone());
            return f(&p);
        }
        for j in 0..points.len() {
            if j != i && !used[j] {
                used[j] = true;
                images[points[i]] = points[j] as u32;
                if rec(i + 1, points, used, images, f) {
                    return true;
                }
                used[j] = false;
            }
        }
        false
    }
    rec(0, points, &mut used, &mut images, f)
}

/// Minimal degree of a non-trivial group, or `None` for the trivial group or
/// when the work needed exceeds `cap`.
///
/// Support sizes are tried in increasing order. For each size the cheaper
/// of two exact methods is used: membership tests on every permutation with
/// exactly that support, or one scan over all group elements.
pub fn minimal_degree(group: &PermGroup, cap: u64) -> Option<MinimalDegree> {
    if group.is_trivial() {
        return None;
    }
    let n = group.degree();
    let order = group.order().to_u128().unwrap_or(u128::MAX);
    let gen_best = group
        .generators()
        .iter()
        .chain(group.strong_generators().iter())
        .filter(|g| !g.is_identity())
        .min_by_key(|g| g.support())
        .cloned();
    let mut spent: u128 = 0;

    for s in 2..=n {
        if let Some(g) = gen_best.as_ref().filter(|g| g.support() == s) {
            return Some(MinimalDegree {
                degree: s,
                witness: g.clone(),
            });
        }
        let candidates = binom_u128(n, s).saturating_mul(derangement_count(s));
        if spent.saturating_add(candidates) > order {
            return scan_elements(group, s, cap);
        }
        spent += candidates;
        if spent > cap as u128 {
            return scan_elements(group, s, cap);
        }
        let index = KSetIndex::new(n, s, u64::MAX - 1).ok()?;
        let mut found = None;
        for subset in index.iter() {
            let hit = for_each_derangement(&subset, n, &mut |p| {
                if group.contains(p).unwrap_or(false) {
                    found = Some(p.clone());
                    true
                } else {
                    false
                }
            });
            if hit {
                break;
            }
        }
        if let Some(witness) = found {
            return Some(MinimalDegree { degree: s, witness });
        }
    }
    None
}

/// Exhaustive scan, knowing that no element has support below `floor`.
fn scan_elements(group: &PermGroup, floor: usize, cap: u64) -> Option<MinimalDegree> {
    let elements = group.elements(cap).ok()?;
    let mut best: Option<MinimalDegree> = None;
    for e in elements {
        let s = e.support();
        if s == 0 {
            continue;
        }
        if best.as_ref().is_none_or(|b| s < b.degree) {
            best = Some(MinimalDegree { degree: s, witness: e });
            if s <= floor {
                break;
            }
        }
    }
    best
}
