//! Named groups and actions: induced actions on `k`-sets, wreath products in
//! product action, projective groups and Frobenius groups, plus the catalog
//! of small groups built from them.

mod catalog;
mod projective;

pub use catalog::{builtin_catalog, load_catalog, parse_catalog, Catalog, CatalogEntry, BUILTIN_CATALOG};
pub use projective::{projective_group, ProjectiveKind, SmallField};

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::kset::KSetIndex;
use crate::perm::{Permutation, MAX_DEGREE};

/// Image of a group under its induced action on `k`-sets.
#[derive(Debug, Clone)]
pub struct InducedAction {
    pub group: PermGroup,
    pub index: KSetIndex,
    /// Order of the kernel of the action, `|G| / |image|`.
    pub kernel_order: BigUint,
}

/// The action of `group` on the `C(n, k)` subsets of size `k`, points
/// numbered by lexicographic rank.
pub fn induced_kset_action(group: &PermGroup, k: usize) -> Result<InducedAction> {
    let n = group.degree();
    if k == 0 || k >= n {
        return Err(Error::InvalidArgument(format!("k must satisfy 1 <= k <= n-1 (n = {n}, k = {k})")));
    }
    let index = KSetIndex::new(n, k, u64::MAX - 1)?;
    if index.count() > MAX_DEGREE as u64 {
        return Err(Error::DegreeCap {
            degree: usize::try_from(index.count()).unwrap_or(usize::MAX),
            cap: MAX_DEGREE,
        });
    }
    let m = index.count() as usize;
    let mut scratch = Vec::with_capacity(k);
    let gens = group
        .generators()
        .iter()
        .map(|g| {
            let images = (0..m as u64).map(|r| index.image_rank(g, r, &mut scratch) as u32).collect();
            Permutation::from_images_unchecked(images)
        })
        .collect();
    let image = PermGroup::new(m, gens)?;
    let kernel_order = group.order() / image.order();
    Ok(InducedAction {
        group: image,
        index,
        kernel_order,
    })
}

/// `S_m ≀ S_k` in product action on `{0..m-1}^k`; the tuple `(x_0, .., x_{k-1})`
/// is the point `Σ x_i m^i`.
pub fn wreath_product_action(m: usize, k: usize) -> Result<PermGroup> {
    if m < 3 || k < 2 {
        return Err(Error::InvalidArgument(format!("need m >= 3 and k >= 2 (got m = {m}, k = {k})")));
    }
    let degree = m
        .checked_pow(k as u32)
        .filter(|&d| d <= MAX_DEGREE)
        .ok_or(Error::DegreeCap {
            degree: m.saturating_pow(k as u32),
            cap: MAX_DEGREE,
        })?;
    let digits = |mut x: usize| -> Vec<usize> {
        (0..k)
            .map(|_| {
                let d = x % m;
                x /= m;
                d
            })
            .collect()
    };
    let encode = |d: &[usize]| d.iter().rev().fold(0, |acc, &c| acc * m + c);
    let on_tuples = |f: &dyn Fn(&mut Vec<usize>)| {
        let images = (0..degree)
            .map(|x| {
                let mut d = digits(x);
                f(&mut d);
                encode(&d) as u32
            })
            .collect();
        Permutation::from_images_unchecked(images)
    };
    let gens = vec![
        // S_m on the first coordinate
        on_tuples(&|d| d[0] = match d[0] {
            0 => 1,
            1 => 0,
            x => x,
        }),
        on_tuples(&|d| d[0] = (d[0] + 1) % m),
        // S_k permuting coordinates
        on_tuples(&|d| d.swap(0, 1)),
        on_tuples(&|d| d.rotate_left(1)),
    ];
    PermGroup::new(degree, gens)
}

/// `⟨x -> x+1, x -> a·x⟩` on `Z_p`, with `a` the smallest residue of
/// multiplicative order `d`; the group has order `p·d`.
pub fn frobenius_group(p: usize, d: usize) -> Result<PermGroup> {
    if !crate::perm::is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    if d == 0 || !(p - 1).is_multiple_of(d) {
        return Err(Error::InvalidArgument(format!("{d} does not divide {p} - 1")));
    }
    let mult_order = |a: usize| {
        let mut x = a % p;
        let mut ord = 1;
        while x != 1 {
            x = x * a % p;
            ord += 1;
        }
        ord
    };
    let a = (1..p).find(|&a| mult_order(a) == d).expect("cyclic group has elements of every order dividing p-1");
    let shift = Permutation::from_images_unchecked((0..p as u32).map(|x| (x + 1) % p as u32).collect());
    let mul = Permutation::from_images_unchecked((0..p).map(|x| (x * a % p) as u32).collect());
    PermGroup::new(p, vec![shift, mul])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fact(n: u64) -> u64 {
        (1..=n).product()
    }

    #[test]
    fn symmetric_on_pairs() {
        let s5 = induced_kset_action(&PermGroup::symmetric(5).unwrap(), 2).unwrap();
        assert_eq!(s5.group.degree(), 10);
        assert_eq!(s5.group.order(), &BigUint::from(120u32));
        assert_eq!(s5.kernel_order, BigUint::from(1u32));
        assert!(s5.group.is_primitive());

        let a5 = induced_kset_action(&PermGroup::alternating(5).unwrap(), 2).unwrap();
        assert_eq!(a5.group.order(), &BigUint::from(60u32));
        assert!(a5.group.is_primitive());
    }

    #[test]
    fn cyclic_three_on_pairs() {
        let c3 = induced_kset_action(&PermGroup::cyclic(3).unwrap(), 2).unwrap();
        assert_eq!(c3.group.degree(), 3);
        assert_eq!(c3.group.order(), &BigUint::from(3u32));
        assert!(c3.group.generators()[0].cycle_structure().prime_order == Some(3));
    }

    #[test]
    fn s4_on_pairs_is_faithful_and_imprimitive() {
        let s4 = induced_kset_action(&PermGroup::symmetric(4).unwrap(), 2).unwrap();
        assert_eq!(s4.kernel_order, BigUint::from(1u32));
        assert!(!s4.group.is_primitive());
        assert!(induced_kset_action(&PermGroup::symmetric(4).unwrap(), 4).is_err());
    }

    #[test]
    fn symmetric_transitive_on_all_ksets() {
        for m in 3..=7 {
            let s = PermGroup::symmetric(m).unwrap();
            for k in 1..m {
                let act = induced_kset_action(&s, k).unwrap();
                assert!(act.group.is_transitive(), "S{m} on {k}-sets");
            }
        }
    }

    #[test]
    fn wreath_orders() {
        for (m, k) in [(3, 2), (4, 2), (3, 3), (5, 2)] {
            let g = wreath_product_action(m, k).unwrap();
            assert_eq!(g.degree(), m.pow(k as u32));
            let expected = fact(m as u64).pow(k as u32) * fact(k as u64);
            assert_eq!(g.order(), &BigUint::from(expected), "m={m} k={k}");
        }
        assert!(wreath_product_action(4, 2).unwrap().is_primitive());
        assert!(wreath_product_action(2, 2).is_err());
        assert!(wreath_product_action(9, 4).unwrap_err().is_cap());
    }

    #[test]
    fn wreath_contains_coordinatewise_product() {
        let m = 4;
        let w = wreath_product_action(m, 2).unwrap();
        // (0 1) and the m-cycle acting on the second coordinate only
        for f in [
            Box::new(|x: usize| if x < 2 { 1 - x } else { x }) as Box<dyn Fn(usize) -> usize>,
            Box::new(move |x: usize| (x + 1) % m),
        ] {
            let images = (0..m * m).map(|p| (p % m) + m * f(p / m)).collect();
            let g = Permutation::from_images(images).unwrap();
            assert!(w.contains(&g).unwrap());
        }
    }

    #[test]
    fn frobenius_orders() {
        assert_eq!(frobenius_group(5, 4).unwrap().order(), &BigUint::from(20u32));
        assert_eq!(frobenius_group(7, 3).unwrap().order(), &BigUint::from(21u32));
        assert_eq!(frobenius_group(7, 6).unwrap().order(), &BigUint::from(42u32));
        assert_eq!(frobenius_group(7, 1).unwrap().order(), &BigUint::from(7u32));
        assert!(frobenius_group(7, 4).is_err());
        assert!(frobenius_group(9, 2).is_err());
    }

    #[test]
    fn f21_uses_doubling_map() {
        let f21 = frobenius_group(7, 3).unwrap();
        let doubling = Permutation::from_images((0..7).map(|x| 2 * x % 7).collect()).unwrap();
        assert!(f21.contains(&doubling).unwrap());
    }

    #[test]
    fn kset_cap_is_respected() {
        let big = PermGroup::symmetric(30).unwrap();
        assert!(induced_kset_action(&big, 4).unwrap_err().is_cap());
    }
}
