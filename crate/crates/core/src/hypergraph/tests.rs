use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::constructions::frobenius_group;

fn set(n: usize, pts: &[usize]) -> VertexSet {
    VertexSet::from_points(n, pts.iter().copied())
}

fn c5() -> PermGroup {
    PermGroup::cyclic(5).unwrap()
}

fn pentagon() -> Hypergraph {
    subset_orbit(&c5(), &set(5, &[0, 1])).unwrap().hypergraph
}

fn brute_aut_order(h: &Hypergraph) -> u64 {
    PermGroup::symmetric(h.n())
        .unwrap()
        .elements(1 << 20)
        .unwrap()
        .filter(|g| h.is_preserved_by(g))
        .count() as u64
}

fn order(g: &PermGroup) -> u64 {
    g.order_u64().unwrap()
}

#[test]
fn orbit_examples() {
    let empty = subset_orbit(&c5(), &VertexSet::empty(5)).unwrap();
    assert_eq!(empty.orbit_size, 1);
    assert!(empty.hypergraph.contains_edge(&VertexSet::empty(5)));

    let p = subset_orbit(&c5(), &set(5, &[0, 1])).unwrap();
    assert_eq!(p.orbit_size, 5);
    assert_eq!(p.hypergraph.uniform_k(), Some(2));

    let f21 = frobenius_group(7, 3).unwrap();
    let fano = subset_orbit(&f21, &set(7, &[1, 2, 4])).unwrap();
    assert_eq!(fano.orbit_size, 7);
    assert!(fano.hypergraph.contains_edge(&fano.seed));
    assert_eq!(21 % fano.orbit_size, 0);
}

#[test]
fn kset_orbit_examples() {
    let f21 = frobenius_group(7, 3).unwrap();
    let mut sizes: Vec<u64> = kset_orbit_reps(&f21, 3, 1000).unwrap().iter().map(|r| r.1).collect();
    sizes.sort();
    assert_eq!(sizes, vec![7, 7, 21]);

    let f20 = frobenius_group(5, 4).unwrap();
    assert_eq!(kset_orbit_reps(&f20, 2, 1000).unwrap(), vec![(set(5, &[0, 1]), 10)]);

    let s6 = PermGroup::symmetric(6).unwrap();
    for k in 0..=6 {
        let reps = kset_orbit_reps(&s6, k, 1000).unwrap();
        assert_eq!(reps.len(), 1);
    }
    assert!(kset_orbit_reps(&s6, 7, 1000).is_err());
    assert!(kset_orbit_reps(&PermGroup::symmetric(40).unwrap(), 20, 1000).unwrap_err().is_cap());
}

#[test]
fn aut_examples() {
    assert_eq!(order(&aut_group(&Hypergraph::empty(6).unwrap()).unwrap()), 720);
    assert_eq!(order(&aut_group(&pentagon()).unwrap()), 10);

    let f21 = frobenius_group(7, 3).unwrap();
    let fano = subset_orbit(&f21, &set(7, &[1, 2, 4])).unwrap().hypergraph;
    let aut = aut_group(&fano).unwrap();
    assert_eq!(order(&aut), 168);
    assert_eq!(brute_aut_order(&fano), 168);
    assert!(f21.is_subgroup_of(&aut).unwrap());
}

#[test]
fn aut_of_larger_structures() {
    // Petersen graph as pairs of a 5-set meeting trivially: Aut = S5
    let s5_pairs = crate::constructions::induced_kset_action(&PermGroup::symmetric(5).unwrap(), 2).unwrap();
    let idx = &s5_pairs.index;
    let mut edges = Vec::new();
    for a in 0..10u64 {
        for b in a + 1..10 {
            let (x, y) = (idx.unrank(a), idx.unrank(b));
            if x.iter().all(|p| !y.contains(p)) {
                edges.push(vec![a as usize, b as usize]);
            }
        }
    }
    let petersen = Hypergraph::from_edge_lists(10, &edges).unwrap();
    assert_eq!(order(&aut_group(&petersen).unwrap()), 120);

    // the 64-cube's edge set has automorphism group of order 2^6 · 6!
    let cube_edges: Vec<Vec<usize>> = (0..64usize)
        .flat_map(|v| (0..6).map(move |i| (v, v ^ (1 << i))).filter(|(a, b)| a < b).map(|(a, b)| vec![a, b]))
        .collect();
    let cube = Hypergraph::from_edge_lists(64, &cube_edges).unwrap();
    assert_eq!(order(&aut_group(&cube).unwrap()), 64 * 720);
}

#[test]
fn multiword_vertex_sets() {
    let n = 100;
    let cyc = PermGroup::cyclic(n).unwrap();
    let h = subset_orbit(&cyc, &set(n, &[0, 1])).unwrap().hypergraph;
    let cfg = AutConfig {
        max_degree: 4096,
        ..AutConfig::default()
    };
    assert_eq!(order(&aut_group_with(&h, &cfg).unwrap()), 200);
    assert!(aut_group(&h).unwrap_err().is_cap());
}

#[test]
fn node_cap_is_reported() {
    let h = Hypergraph::empty(12).unwrap();
    let cfg = AutConfig {
        max_nodes: 3,
        ..AutConfig::default()
    };
    assert!(aut_group_with(&h, &cfg).unwrap_err().is_cap());
}

#[test]
fn rigid_examples() {
    let cfg = AutConfig::default();
    assert!(!is_rigid(&pentagon(), &cfg).unwrap());
    // a path 0-1-2 with a pendant 1-3 and 3-4, 4-5 plus 2-6: asymmetric tree
    let tree = Hypergraph::from_edge_lists(7, &[[0, 1], [1, 2], [1, 3], [3, 4], [4, 5], [2, 6]]).unwrap();
    assert_eq!(brute_aut_order(&tree) == 1, is_rigid(&tree, &cfg).unwrap());
    let asym = Hypergraph::from_edge_lists(6, &[[0, 1], [1, 2], [2, 3], [3, 4], [2, 5], [4, 5], [3, 5]]).unwrap();
    assert_eq!(brute_aut_order(&asym) == 1, is_rigid(&asym, &cfg).unwrap());
}

#[test]
fn aut_equals_examples() {
    let s5 = PermGroup::symmetric(5).unwrap();
    assert!(aut_equals(&s5, &Hypergraph::empty(5).unwrap()).unwrap());
    assert!(!aut_equals(&c5(), &pentagon()).unwrap());
    let d5 = PermGroup::dihedral(5).unwrap();
    assert!(aut_equals(&d5, &pentagon()).unwrap());
    assert_eq!(aut_equals(&s5, &pentagon()).unwrap_err(), Error::NotContained { index: 0 });
    assert!(matches!(
        aut_equals(&PermGroup::symmetric(4).unwrap(), &pentagon()),
        Err(Error::DegreeMismatch { .. })
    ));
}

#[test]
fn transversal_examples() {
    let all: Vec<VertexSet> = (0..4).map(|i| TransversalHypergraph::transversal_edge(2, 2, i)).collect();
    let full = TransversalHypergraph::new(2, 2, all).unwrap();
    assert_eq!(order(&aut_group_transversal(&full).unwrap()), 8);

    for r in 1..=4u64 {
        let none = TransversalHypergraph::new(2, r as usize, Vec::new()).unwrap();
        let f: u64 = (1..=r).product();
        assert_eq!(order(&aut_group_transversal(&none).unwrap()), f * f * 2);
    }

    let single = TransversalHypergraph::new(2, 2, vec![set(4, &[0, 2])]).unwrap();
    let got = aut_group_transversal(&single).unwrap();
    assert_eq!(order(&got), brute_transversal_order(&single));
    assert_eq!(order(&got), 2);

    assert!(TransversalHypergraph::new(2, 2, vec![set(4, &[0, 1])]).is_err());
}

fn brute_transversal_order(t: &TransversalHypergraph) -> u64 {
    PermGroup::symmetric(t.n())
        .unwrap()
        .elements(1 << 20)
        .unwrap()
        .filter(|g| t.respects_layers(g) && t.hypergraph().is_preserved_by(g))
        .count() as u64
}

#[test]
fn transversal_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (t, r) in [(2, 2), (2, 3), (3, 2), (2, 4)] {
        let total = (r as u64).pow(t as u32);
        for _ in 0..12 {
            let edges: Vec<VertexSet> = (0..total)
                .filter(|_| rng.random_bool(0.5))
                .map(|i| TransversalHypergraph::transversal_edge(t, r, i))
                .collect();
            let th = TransversalHypergraph::new(t, r, edges).unwrap();
            let aut = aut_group_transversal(&th).unwrap();
            assert_eq!(order(&aut), brute_transversal_order(&th), "t={t} r={r} {:?}", th.edges());
            for g in aut.generators() {
                assert!(th.respects_layers(g));
            }
            let rigid = transversal_is_rigid(&th, &AutConfig::default()).unwrap();
            assert_eq!(rigid, order(&aut) == 1);
        }
    }
}

fn random_hypergraph(rng: &mut ChaCha8Rng, n: usize) -> Hypergraph {
    let m = rng.random_range(0..=2 * n);
    let edges: Vec<VertexSet> = (0..m)
        .map(|_| {
            let k = rng.random_range(0..=n);
            let mut pts: Vec<usize> = (0..n).collect();
            for i in 0..k {
                let j = rng.random_range(i..n);
                pts.swap(i, j);
            }
            set(n, &pts[..k])
        })
        .collect();
    Hypergraph::new(n, edges).unwrap()
}

#[test]
fn aut_matches_brute_force_on_random_corpus() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..60 {
        let n = 3 + i % 5;
        let h = random_hypergraph(&mut rng, n);
        let aut = aut_group(&h).unwrap();
        assert_eq!(order(&aut), brute_aut_order(&h), "{h:?}");
        assert!(aut.generators().iter().all(|g| h.is_preserved_by(g)));
    }
}

#[test]
fn aut_matches_brute_force_on_uniform_orbits() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let f21 = frobenius_group(7, 3).unwrap();
    let d7 = PermGroup::dihedral(7).unwrap();
    for g in [&f21, &d7] {
        for _ in 0..10 {
            let y: Vec<usize> = (0..7).filter(|_| rng.random_bool(0.5)).collect();
            let h = subset_orbit(g, &set(7, &y)).unwrap().hypergraph;
            assert_eq!(order(&aut_group(&h).unwrap()), brute_aut_order(&h));
        }
    }
}

fn brute_setwise(g: &PermGroup, y: &VertexSet) -> u64 {
    g.elements(1 << 20).unwrap().filter(|e| y.image(e) == *y).count() as u64
}

#[test]
fn setwise_examples() {
    let s4 = PermGroup::symmetric(4).unwrap();
    assert_eq!(order(&setwise_stabilizer(&s4, &VertexSet::empty(4)).unwrap()), 24);
    let st = setwise_stabilizer(&s4, &set(4, &[0, 1])).unwrap();
    assert_eq!(order(&st), 4);
    let expected = PermGroup::new(
        4,
        vec![
            Permutation::from_cycles(4, &[&[0, 1]]).unwrap(),
            Permutation::from_cycles(4, &[&[2, 3]]).unwrap(),
        ],
    )
    .unwrap();
    assert!(st.same_group(&expected).unwrap());
    assert!(setwise_stabilizer(&c5(), &set(5, &[0, 1])).unwrap().is_trivial());
}

#[test]
fn setwise_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let groups = [
        PermGroup::symmetric(7).unwrap(),
        PermGroup::alternating(8).unwrap(),
        frobenius_group(7, 6).unwrap(),
        PermGroup::dihedral(8).unwrap(),
        crate::constructions::wreath_product_action(3, 2).unwrap(),
        crate::constructions::projective_group(7, crate::constructions::ProjectiveKind::Pgl).unwrap(),
    ];
    for g in &groups {
        let n = g.degree();
        for _ in 0..8 {
            let y: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.4)).collect();
            let y = set(n, &y);
            let st = setwise_stabilizer(g, &y).unwrap();
            assert_eq!(order(&st), brute_setwise(g, &y), "n={n} y={y:?}");
            assert!(st.is_subgroup_of(g).unwrap());
            assert!(st.generators().iter().all(|e| y.image(e) == y));
        }
    }
}

#[test]
fn setwise_cross_check_with_aut() {
    // G ∩ Aut({Y, X}) computed by filtering G
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let g = crate::constructions::projective_group(8, crate::constructions::ProjectiveKind::PGammaL).unwrap();
    let n = g.degree();
    for _ in 0..10 {
        let y = set(n, &(0..n).filter(|_| rng.random_bool(0.5)).collect::<Vec<_>>());
        let h = Hypergraph::new(n, [y.clone(), set(n, &(0..n).collect::<Vec<_>>())]).unwrap();
        let inter = g.elements(1 << 20).unwrap().filter(|e| h.is_preserved_by(e)).count() as u64;
        assert_eq!(order(&setwise_stabilizer(&g, &y).unwrap()), inter);
    }
}

#[test]
fn orbit_stabilizer_deduction() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let groups = [frobenius_group(7, 3).unwrap(), PermGroup::dihedral(9).unwrap(), frobenius_group(11, 5).unwrap()];
    for g in &groups {
        let n = g.degree();
        for _ in 0..10 {
            let y = set(n, &(0..n).filter(|_| rng.random_bool(0.5)).collect::<Vec<_>>());
            let fam = subset_orbit(g, &y).unwrap();
            let aut = aut_group(&fam.hypergraph).unwrap();
            assert!(g.is_subgroup_of(&aut).unwrap());
            let stab = setwise_stabilizer(&aut, &y).unwrap();
            assert_eq!(aut.order(), &(stab.order() * BigUint::from(fam.orbit_size)));
        }
    }
}

#[test]
fn complement_duality() {
    let f21 = frobenius_group(7, 3).unwrap();
    for (y, _) in kset_orbit_reps(&f21, 3, 100).unwrap() {
        let h = subset_orbit(&f21, &y).unwrap().hypergraph;
        let a = aut_group(&h).unwrap();
        let b = aut_group(&h.complement_edges()).unwrap();
        assert!(a.same_group(&b).unwrap());
    }
}

#[test]
fn text_round_trip() {
    let h = pentagon();
    let again = Hypergraph::parse(&h.to_text()).unwrap();
    assert_eq!(again, h);

    let parsed = Hypergraph::parse("# comment\n3 2\n0 1\n\n-\n").unwrap();
    assert_eq!(parsed.edge_count(), 2);
    assert!(parsed.contains_edge(&VertexSet::empty(3)));

    assert!(matches!(Hypergraph::parse("3 2\n0 1\n"), Err(Error::Parse { .. })));
    assert!(matches!(Hypergraph::parse("3 1\n0 3\n"), Err(Error::Parse { line: 2, .. })));
    assert!(matches!(Hypergraph::parse("3 1\n0 1\n1 2\n"), Err(Error::Parse { line: 3, .. })));
    assert!(matches!(Hypergraph::parse("3\n"), Err(Error::Parse { line: 1, .. })));

    let t = TransversalHypergraph::new(3, 2, vec![set(6, &[0, 2, 4]), set(6, &[1, 3, 5])]).unwrap();
    let again = TransversalHypergraph::parse(&t.to_text()).unwrap();
    assert_eq!(again, t);
    assert!(TransversalHypergraph::parse("4 0\n3 1\n").is_err());
    assert!(TransversalHypergraph::parse("4 1\n2 2\n0 1\n").is_err());
}
