use std::collections::BTreeSet;

use proptest::prelude::*;

use super::*;
use crate::constructions::builtin_catalog;
use crate::group::PermGroup;
use crate::hypergraph::{transversal_is_rigid, AutConfig, TransversalHypergraph};
use crate::kset::DEFAULT_KSET_CAP;

fn catalog_group(name: &str) -> PermGroup {
    builtin_catalog().get(name).unwrap_or_else(|| panic!("{name} missing")).group().clone()
}

fn cfg() -> AutConfig {
    AutConfig::default()
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Number of permutations of `0..n` accepted by `keep` that map the edge set
/// onto itself.
fn brute_aut_order(n: usize, edges: &[Vec<usize>], keep: impl Fn(&[usize]) -> bool) -> u64 {
    let set: BTreeSet<Vec<usize>> = edges
        .iter()
        .map(|e| {
            let mut e = e.clone();
            e.sort_unstable();
            e
        })
        .collect();
    let mut p: Vec<usize> = (0..n).collect();
    let mut count = 0;
    loop {
        if keep(&p)
            && set.iter().all(|e| {
                let mut img: Vec<usize> = e.iter().map(|&v| p[v]).collect();
                img.sort_unstable();
                set.contains(&img)
            })
        {
            count += 1;
        }
        if !next_permutation(&mut p) {
            return count;
        }
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

#[test]
fn symmetric_group_always_equal() {
    let g = PermGroup::symmetric(6).unwrap();
    for model in [RigidityModel::AllSubsets, RigidityModel::KUniform { k: 3 }] {
        let r = rigidity_mc(&g, "S6", 40, 7, model, &cfg(), DEFAULT_FAILURE_LOG).unwrap();
        assert_eq!(r.count_aut_equal, 40);
        assert_eq!(r.deduction_violations, 0);
    }
}

#[test]
fn cyclic_five_never_equal_dihedral_five_always() {
    let c5 = catalog_group("C5");
    let r = rigidity_mc(&c5, "C5", 50, 1, RigidityModel::KUniform { k: 2 }, &cfg(), DEFAULT_FAILURE_LOG).unwrap();
    assert_eq!(r.count_aut_equal, 0);
    assert_eq!(r.count_aut_larger, 50);
    assert!(r.failures.iter().all(|f| f.aut_order == "10"));

    let d5 = catalog_group("D5");
    let r = rigidity_mc(&d5, "D5", 50, 1, RigidityModel::KUniform { k: 2 }, &cfg(), DEFAULT_FAILURE_LOG).unwrap();
    assert_eq!(r.count_aut_equal, 50);
}

#[test]
fn pair_orbits_of_c5_and_d5_by_brute_force() {
    // the two orbits on pairs are the pentagon and the pentagram
    for step in [1, 2] {
        let edges: Vec<Vec<usize>> = (0..5).map(|i| vec![i, (i + step) % 5]).collect();
        assert_eq!(brute_aut_order(5, &edges, |_| true), 10);
    }
}

#[test]
fn failure_log_is_truncated() {
    let c5 = catalog_group("C5");
    let r = rigidity_mc(&c5, "C5", 30, 3, RigidityModel::KUniform { k: 2 }, &cfg(), 5).unwrap();
    assert_eq!(r.failures.len(), 5);
    assert!(r.failures_truncated);
    assert_eq!(r.count_aut_larger, 30);
}

#[test]
fn reports_do_not_depend_on_thread_count() {
    let g = catalog_group("PSL(2,7)");
    let run = |threads| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let a = rigidity_mc(&g, "PSL(2,7)", 60, 99, RigidityModel::AllSubsets, &cfg(), 10).unwrap();
            let b = asymmetry_mc(9, 2, 200, 99, &cfg()).unwrap();
            let c = transversal_asymmetry_mc(12, 2, 200, 99, &cfg()).unwrap();
            [
                serde_json::to_string(&a.to_report(false)).unwrap(),
                serde_json::to_string(&b.to_report(false)).unwrap(),
                serde_json::to_string(&c.to_report(false)).unwrap(),
            ]
        })
    };
    assert_eq!(run(1), run(4));
    assert_eq!(run(1), run(8));
}

#[test]
fn deduction_chain_holds() {
    for name in ["F21", "C9", "PGL(2,7)", "S3wrS2", "D12"] {
        let g = catalog_group(name);
        let r = rigidity_mc(&g, name, 30, 5, RigidityModel::AllSubsets, &cfg(), 100).unwrap();
        assert_eq!(r.deduction_violations, 0, "{name}");
        assert_eq!(r.count_aut_equal + r.count_aut_larger + r.count_indeterminate, 30);
    }
}

#[test]
fn set_transitive_groups_never_equal() {
    for name in ["F20", "PGL(2,5)", "PGL(2,8)"] {
        let g = catalog_group(name);
        assert!(matches!(
            verify_set_transitive(&g, name, DEFAULT_KSET_CAP).unwrap().evidence,
            Evidence::SetTransitive { .. }
        ));
        for k in 1..=g.degree() / 2 {
            let r = rigidity_mc(&g, name, 10, 11, RigidityModel::KUniform { k }, &cfg(), 10).unwrap();
            assert_eq!(r.count_aut_equal, 0, "{name} k={k}");
        }
    }
}

#[test]
fn set_transitivity_of_catalog() {
    let catalog = builtin_catalog();
    for e in catalog.iter().filter(|e| !e.is_giant() && e.degree <= 10) {
        let f = verify_set_transitive(e.group(), &e.name, DEFAULT_KSET_CAP).unwrap();
        let st = matches!(f.evidence, Evidence::SetTransitive { .. });
        assert_eq!(st, e.has_tag("set-transitive"), "{}", e.name);
        assert!(f.recheck(e.group(), DEFAULT_KSET_CAP, &cfg()).unwrap());
    }
    let f21 = catalog_group("F21");
    assert_eq!(
        verify_set_transitive(&f21, "F21", DEFAULT_KSET_CAP).unwrap().evidence,
        Evidence::NotSetTransitive { k: 3, orbit_count: 3 }
    );
}

#[test]
fn set_transitive_by_counting_orbits_directly() {
    // single orbit on k-sets iff the orbit of one k-set has C(n, k) members
    for name in ["F20", "PGL(2,5)", "PGaL(2,8)", "F21", "PSL(2,7)"] {
        let g = catalog_group(name);
        let n = g.degree();
        let direct = (1..=n / 2).all(|k| {
            let first = subsets(n, k).remove(0);
            let y = crate::VertexSet::from_points(n, first);
            crate::hypergraph::subset_orbit(&g, &y).unwrap().orbit_size == subsets(n, k).len()
        });
        let f = verify_set_transitive(&g, name, DEFAULT_KSET_CAP).unwrap();
        assert_eq!(direct, matches!(f.evidence, Evidence::SetTransitive { .. }), "{name}");
    }
}

#[test]
fn f21_lattice_on_triples() {
    let g = catalog_group("F21");
    let l = orbit_union_lattice(&g, 3, DEFAULT_KSET_CAP, &cfg()).unwrap();
    assert_eq!(l.orbit_reps.len(), 3);
    assert_eq!(l.unions.len(), 7);
    assert!(l.all_unions_exceed);
    assert_eq!(l.minimal_overgroup_orders, ["42", "168", "168"]);
    assert!(l.unions.iter().all(|u| !u.minimal_overgroups_contained.is_empty()));

    for u in &l.unions {
        let mut edges = Vec::new();
        for &i in &u.orbits {
            let y = crate::VertexSet::from_points(7, l.orbit_reps[i].iter().copied());
            let fam = crate::hypergraph::subset_orbit(&g, &y).unwrap();
            edges.extend(fam.hypergraph.edges().iter().map(|e| e.to_vec()));
        }
        assert_eq!(brute_aut_order(7, &edges, |_| true).to_string(), u.aut_order);
    }
}

#[test]
fn f21_lattice_on_quadruples_matches_triples() {
    let g = catalog_group("F21");
    let l3 = orbit_union_lattice(&g, 3, DEFAULT_KSET_CAP, &cfg()).unwrap();
    let l4 = orbit_union_lattice(&g, 4, DEFAULT_KSET_CAP, &cfg()).unwrap();
    assert!(l4.all_unions_exceed);
    assert_eq!(l4.minimal_overgroup_orders, l3.minimal_overgroup_orders);
    let orders = |l: &LatticeReport| l.unions.iter().map(|u| u.aut_order.clone()).collect::<BTreeSet<_>>();
    assert_eq!(orders(&l3), orders(&l4));
}

#[test]
fn symmetric_lattice_is_a_single_union() {
    let g = PermGroup::symmetric(5).unwrap();
    let l = orbit_union_lattice(&g, 2, DEFAULT_KSET_CAP, &cfg()).unwrap();
    assert_eq!(l.unions.len(), 1);
    assert_eq!(l.unions[0].aut_order, "120");
    assert!(l.overgroups.is_empty());
    assert!(!l.all_unions_exceed);
}

#[test]
fn min_edge_examples() {
    let d5 = catalog_group("D5");
    let r = min_edge_size(&d5, "D5", 2, DEFAULT_KSET_CAP, &cfg()).unwrap();
    let w = r.witness.unwrap();
    assert_eq!((w.k, w.y.as_slice()), (2, &[0usize, 1][..]));

    let f20 = catalog_group("F20");
    let r = min_edge_size(&f20, "F20", 2, DEFAULT_KSET_CAP, &cfg()).unwrap();
    assert!(r.exception_candidate());

    let a5 = catalog_group("A5_on_pairs");
    let r = min_edge_size(&a5, "A5_on_pairs", 5, DEFAULT_KSET_CAP, &cfg()).unwrap();
    let w = r.witness.expect("A5 on pairs has a witness");
    assert!(w.k >= 2);
    let y = crate::VertexSet::from_points(10, w.y.iter().copied());
    let fam = crate::hypergraph::subset_orbit(&a5, &y).unwrap();
    assert!(crate::hypergraph::aut_equals(&a5, &fam.hypergraph).unwrap());

    assert!(min_edge_size(&d5, "D5", 3, DEFAULT_KSET_CAP, &cfg()).is_err());
}

#[test]
fn min_edge_agrees_with_brute_force() {
    for name in ["C5", "D5", "C6", "D6", "C7", "D7", "F21", "F42", "PSL(3,2)"] {
        let g = catalog_group(name);
        let n = g.degree();
        let order = g.order_u64().unwrap();
        let expected = (1..=n / 2).find(|&k| {
            subsets(n, k).into_iter().any(|y| {
                let y = crate::VertexSet::from_points(n, y);
                let fam = crate::hypergraph::subset_orbit(&g, &y).unwrap();
                let edges: Vec<Vec<usize>> = fam.hypergraph.edges().iter().map(|e| e.to_vec()).collect();
                brute_aut_order(n, &edges, |_| true) == order
            })
        });
        let r = min_edge_size(&g, name, n / 2, DEFAULT_KSET_CAP, &cfg()).unwrap();
        assert_eq!(r.witness.map(|w| w.k), expected, "{name}");
    }
}

#[test]
fn exception_classification() {
    let f21 = catalog_group("F21");
    let f = classify_exception(&f21, "F21", DEFAULT_KSET_CAP, &cfg()).unwrap();
    match &f.evidence {
        Evidence::AllOrbitUnionsAdmitOvergroup { levels } => {
            assert_eq!(levels.len(), 3);
            assert_eq!(levels[2].minimal_overgroup_orders, ["42", "168", "168"]);
        }
        other => panic!("unexpected {other:?}"),
    }
    assert!(f.recheck(&f21, DEFAULT_KSET_CAP, &cfg()).unwrap());

    let d7 = catalog_group("D7");
    let f = classify_exception(&d7, "D7", DEFAULT_KSET_CAP, &cfg()).unwrap();
    assert!(matches!(f.evidence, Evidence::RigidWitnessFound { k: 2, .. }));
    assert!(f.recheck(&d7, DEFAULT_KSET_CAP, &cfg()).unwrap());

    let bogus = ExceptionFinding {
        evidence: Evidence::RigidWitnessFound {
            k: 2,
            orbit_reps: vec![vec![0, 1]],
        },
        ..f.clone()
    };
    assert!(!bogus.recheck(&catalog_group("C7"), DEFAULT_KSET_CAP, &cfg()).unwrap());
}

fn brute_asymmetric_count(n: usize, t: usize) -> u64 {
    let universe = subsets(n, t);
    let mut rigid = 0;
    for mask in 0u32..1 << universe.len() {
        let edges: Vec<Vec<usize>> = (0..universe.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| universe[i].clone())
            .collect();
        if brute_aut_order(n, &edges, |_| true) == 1 {
            rigid += 1;
        }
    }
    rigid
}

#[test]
fn exact_asymmetry_small_graphs() {
    let r = asymmetry_exact(4, 2, &cfg()).unwrap();
    assert_eq!(r.trials, 64);
    assert_eq!(r.count_rigid, brute_asymmetric_count(4, 2));
    assert_eq!(r.exact_fraction.as_deref(), Some("64/64"));
    assert_eq!(r.estimate, 1.0);

    let r = asymmetry_exact(5, 2, &cfg()).unwrap();
    assert_eq!(r.count_rigid, brute_asymmetric_count(5, 2));
    assert_eq!(r.count_rigid, 0);

    // eight unlabelled asymmetric graphs on six vertices, each with 720 labellings
    let r = asymmetry_exact(6, 2, &cfg()).unwrap();
    assert_eq!(r.count_rigid, 8 * 720);
}

fn layer_respecting(t: usize, r: usize) -> impl Fn(&[usize]) -> bool {
    move |p: &[usize]| (0..t).all(|l| (l * r..(l + 1) * r).all(|v| p[v] / r == p[l * r] / r))
}

#[test]
fn exact_transversal_asymmetry() {
    for (t, r) in [(2, 2), (2, 3), (3, 2)] {
        let rep = transversal_asymmetry_exact(t * r, t, &cfg()).unwrap();
        let universe: Vec<Vec<usize>> = (0..(r as u64).pow(t as u32))
            .map(|i| TransversalHypergraph::transversal_edge(t, r, i).to_vec())
            .collect();
        let mut rigid = 0;
        for mask in 0u32..1 << universe.len() {
            let edges: Vec<Vec<usize>> = (0..universe.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| universe[i].clone())
                .collect();
            if brute_aut_order(t * r, &edges, layer_respecting(t, r)) == 1 {
                rigid += 1;
            }
        }
        assert_eq!(rep.count_rigid, rigid, "t={t} r={r}");
        assert_eq!(rep.trials, 1 << universe.len());
    }
}

#[test]
fn edgeless_transversal_is_never_rigid() {
    for (t, r) in [(2, 2), (2, 5), (3, 4), (4, 2)] {
        let h = TransversalHypergraph::new(t, r, Vec::new()).unwrap();
        assert!(!transversal_is_rigid(&h, &cfg()).unwrap());
    }
}

#[test]
fn estimates_respect_union_bound() {
    for (n, t) in [(8, 2), (10, 2), (7, 3), (9, 4)] {
        let r = asymmetry_mc(n, t, 1500, 17, &cfg()).unwrap();
        let ub = r.union_bound_value.as_ref().unwrap().to_f64();
        assert!(r.estimate - 3.0 * r.stderr <= ub, "n={n} t={t}: {} vs {ub}", r.estimate);
        assert!((0.0..=1.0).contains(&r.estimate));
        assert!((r.stderr - standard_error(r.estimate, r.trials)).abs() < 1e-15);
        assert_eq!(r.formula_value.is_some(), t == 2);
    }
}

#[test]
fn invalid_inputs() {
    assert!(asymmetry_mc(5, 3, 10, 0, &cfg()).is_err());
    assert!(transversal_asymmetry_mc(9, 2, 10, 0, &cfg()).is_err());
    assert!(asymmetry_exact(8, 2, &cfg()).unwrap_err().is_cap());
    let g = catalog_group("C5");
    assert!(rigidity_mc(&g, "C5", 0, 0, RigidityModel::AllSubsets, &cfg(), 1).is_err());
    assert!(rigidity_mc(&g, "C5", 1, 0, RigidityModel::KUniform { k: 6 }, &cfg(), 1).is_err());
}

#[test]
fn report_layout() {
    let g = catalog_group("C5");
    let r = rigidity_mc(&g, "C5", 4, 2, RigidityModel::KUniform { k: 2 }, &cfg(), 10).unwrap();
    let untimed = serde_json::to_value(r.to_report(false)).unwrap();
    assert!(untimed.get("runtime_ms").is_none());
    for key in ["experiment", "inputs", "seed", "trials", "counts", "estimate", "stderr", "bounds", "witnesses", "version"] {
        assert!(untimed.get(key).is_some(), "{key}");
    }
    let timed = serde_json::to_value(r.to_report(true)).unwrap();
    assert!(timed.get("runtime_ms").is_some());
    let row = r.to_report(false).csv_row();
    assert_eq!(row.split(',').count(), ExperimentReport::CSV_HEADER.split(',').count());
    assert!(row.starts_with("rigidity,"));
}

#[test]
fn trial_streams_are_independent_of_order() {
    use rand::RngCore;
    let a: Vec<u64> = (0..5).map(|i| trial_rng(42, i).next_u64()).collect();
    let b: Vec<u64> = (0..5).rev().map(|i| trial_rng(42, i).next_u64()).collect();
    assert_eq!(a, b.into_iter().rev().collect::<Vec<_>>());
    assert_ne!(trial_rng(42, 0).next_u64(), trial_rng(42, 1).next_u64());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rigidity_counts_add_up(seed in any::<u64>(), which in 0usize..4, trials in 1u64..12) {
        let name = ["C6", "D6", "A4_on_pairs", "C8"][which];
        let g = catalog_group(name);
        let r = rigidity_mc(&g, name, trials, seed, RigidityModel::AllSubsets, &cfg(), 100).unwrap();
        prop_assert_eq!(r.count_aut_equal + r.count_aut_larger + r.count_indeterminate, trials);
        prop_assert_eq!(r.deduction_violations, 0);
        for f in &r.failures {
            let order: u64 = f.aut_order.parse().unwrap();
            prop_assert!(order > g.order_u64().unwrap());
        }
    }
}
