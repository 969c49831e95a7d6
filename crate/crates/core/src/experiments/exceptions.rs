use serde::Serialize;
use serde_json::json;

use super::ExperimentReport;
use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::hypergraph::{aut_group_with, kset_orbit_reps, subset_orbit, AutConfig, Hypergraph};

/// Most `k`-set orbits [`orbit_union_lattice`] accepts (`2^20` unions).
pub const MAX_LATTICE_ORBITS: usize = 20;

/// How a group was classified, with data enough to check it again.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Evidence {
    /// One orbit on `k`-sets for every `1 ≤ k ≤ n/2`.
    SetTransitive { kmax: usize },
    /// More than one orbit on `k`-sets.
    NotSetTransitive { k: usize, orbit_count: usize },
    /// Every union of `k`-set orbits, for every listed `k`, has a strictly
    /// larger automorphism group; the orders of the minimal ones are listed.
    AllOrbitUnionsAdmitOvergroup { levels: Vec<LatticeSummary> },
    /// The union of the orbits of these `k`-sets has automorphism group `G`.
    RigidWitnessFound { k: usize, orbit_reps: Vec<Vec<usize>> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticeSummary {
    pub k: usize,
    pub unions: usize,
    pub minimal_overgroup_orders: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExceptionFinding {
    pub group: String,
    pub n: usize,
    pub order: String,
    pub evidence: Evidence,
}

fn orbit_count(group: &PermGroup, k: usize, cap: u64) -> Result<usize> {
    Ok(kset_orbit_reps(group, k, cap)?.len())
}

/// Whether `G` has a single orbit on `k`-sets for every `1 ≤ k ≤ ⌊n/2⌋`.
pub fn verify_set_transitive(group: &PermGroup, name: &str, kset_cap: u64) -> Result<ExceptionFinding> {
    let n = group.degree();
    let mut evidence = Evidence::SetTransitive { kmax: n / 2 };
    for k in 1..=n / 2 {
        let count = orbit_count(group, k, kset_cap)?;
        if count != 1 {
            evidence = Evidence::NotSetTransitive { k, orbit_count: count };
            break;
        }
    }
    Ok(finding(group, name, evidence))
}

fn finding(group: &PermGroup, name: &str, evidence: Evidence) -> ExceptionFinding {
    ExceptionFinding {
        group: name.to_string(),
        n: group.degree(),
        order: group.order().to_string(),
        evidence,
    }
}

fn union_hypergraph(group: &PermGroup, reps: &[VertexSet]) -> Result<Hypergraph> {
    let mut edges = Vec::new();
    for y in reps {
        edges.extend(subset_orbit(group, y)?.hypergraph.edges().iter().cloned());
    }
    Hypergraph::new(group.degree(), edges)
}

impl ExceptionFinding {
    /// Checks the evidence again from the witness data alone.
    pub fn recheck(&self, group: &PermGroup, kset_cap: u64, cfg: &AutConfig) -> Result<bool> {
        let n = group.degree();
        Ok(match &self.evidence {
            Evidence::SetTransitive { kmax } => {
                for k in 1..=*kmax {
                    if orbit_count(group, k, kset_cap)? != 1 {
                        return Ok(false);
                    }
                }
                *kmax == n / 2
            }
            Evidence::NotSetTransitive { k, orbit_count: c } => orbit_count(group, *k, kset_cap)? == *c && *c > 1,
            Evidence::AllOrbitUnionsAdmitOvergroup { levels } => {
                for level in levels {
                    let lattice = orbit_union_lattice(group, level.k, kset_cap, cfg)?;
                    if !lattice.all_unions_exceed || lattice.minimal_overgroup_orders != level.minimal_overgroup_orders {
                        return Ok(false);
                    }
                }
                true
            }
            Evidence::RigidWitnessFound { k, orbit_reps } => {
                let reps = orbit_reps
                    .iter()
                    .map(|r| VertexSet::from_points(n, r.iter().copied()))
                    .collect::<Vec<_>>();
                if reps.iter().any(|r| r.len() != *k) {
                    return Ok(false);
                }
                let h = union_hypergraph(group, &reps)?;
                aut_group_with(&h, cfg)?.order() == group.order()
            }
        })
    }

    pub fn to_report(&self) -> ExperimentReport {
        let mut r = ExperimentReport::new("exceptions")
            .input("group", &self.group)
            .input("n", self.n)
            .input("order", &self.order);
        r.witnesses.push(json!(self.evidence));
        r
    }
}

/// One nonempty union of `k`-set orbits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitUnion {
    /// Indices into [`LatticeReport::orbit_reps`].
    pub orbits: Vec<usize>,
    pub edges: u64,
    pub aut_order: String,
    /// Index into [`LatticeReport::overgroups`], `None` when `Aut = G`.
    pub overgroup: Option<usize>,
    /// Indices of the minimal overgroups contained in this union's `Aut`.
    pub minimal_overgroups_contained: Vec<usize>,
}

/// A distinct automorphism group strictly containing `G`.
#[derive(Debug, Clone, Serialize)]
pub struct Overgroup {
    pub order: String,
    pub minimal: bool,
    /// Indices of the other overgroups properly contained in this one.
    pub proper_subgroups: Vec<usize>,
    #[serde(skip)]
    pub group: PermGroup,
}

#[derive(Debug, Clone, Serialize)]
pub struct LatticeReport {
    pub k: usize,
    pub orbit_reps: Vec<Vec<usize>>,
    pub orbit_sizes: Vec<u64>,
    pub unions: Vec<OrbitUnion>,
    pub overgroups: Vec<Overgroup>,
    /// Orders of the minimal overgroups, sorted numerically.
    pub minimal_overgroup_orders: Vec<String>,
    /// Every union has `Aut` strictly larger than `G`.
    pub all_unions_exceed: bool,
}

impl LatticeReport {
    pub fn to_report(&self, name: &str) -> ExperimentReport {
        let mut r = ExperimentReport::new("lattice")
            .input("group", name)
            .input("k", self.k)
            .input("orbit_reps", &self.orbit_reps)
            .input("orbit_sizes", &self.orbit_sizes)
            .count("orbits", self.orbit_reps.len() as u64)
            .count("unions", self.unions.len() as u64)
            .count("distinct_overgroups", self.overgroups.len() as u64)
            .bound("minimal_overgroup_orders", &self.minimal_overgroup_orders)
            .bound("all_unions_exceed", self.all_unions_exceed);
        r.witnesses = self.unions.iter().map(|u| json!(u)).collect();
        r
    }
}

/// The automorphism group of every nonempty union of `G`-orbits on `k`-sets,
/// and the minimal elements among the distinct groups strictly above `G`.
pub fn orbit_union_lattice(group: &PermGroup, k: usize, kset_cap: u64, cfg: &AutConfig) -> Result<LatticeReport> {
    let n = group.degree();
    let reps = kset_orbit_reps(group, k, kset_cap)?;
    if reps.len() > MAX_LATTICE_ORBITS {
        return Err(Error::cap("orbit count for the union lattice", MAX_LATTICE_ORBITS));
    }
    let orbits: Vec<Vec<VertexSet>> = reps
        .iter()
        .map(|(y, _)| Ok(subset_orbit(group, y)?.hypergraph.edges().to_vec()))
        .collect::<Result<_>>()?;

    let mut overgroups: Vec<Overgroup> = Vec::new();
    let mut unions = Vec::new();
    for mask in 1u32..1 << orbits.len() {
        let chosen: Vec<usize> = (0..orbits.len()).filter(|i| mask >> i & 1 == 1).collect();
        let edges: Vec<VertexSet> = chosen.iter().flat_map(|&i| orbits[i].iter().cloned()).collect();
        let edge_count = edges.len() as u64;
        let aut = aut_group_with(&Hypergraph::new(n, edges)?, cfg)?;
        let overgroup = if aut.order() == group.order() {
            None
        } else {
            let mut found = None;
            for (i, o) in overgroups.iter().enumerate() {
                if o.group.order() == aut.order() && o.group.same_group(&aut)? {
                    found = Some(i);
                    break;
                }
            }
            Some(match found {
                Some(i) => i,
                None => {
                    overgroups.push(Overgroup {
                        order: aut.order().to_string(),
                        minimal: false,
                        proper_subgroups: Vec::new(),
                        group: aut.clone(),
                    });
                    overgroups.len() - 1
                }
            })
        };
        unions.push(OrbitUnion {
            orbits: chosen,
            edges: edge_count,
            aut_order: aut.order().to_string(),
            overgroup,
            minimal_overgroups_contained: Vec::new(),
        });
    }

    for i in 0..overgroups.len() {
        let mut below = Vec::new();
        for j in 0..overgroups.len() {
            if i != j
                && overgroups[j].group.order() < overgroups[i].group.order()
                && overgroups[j].group.is_subgroup_of(&overgroups[i].group)?
            {
                below.push(j);
            }
        }
        overgroups[i].minimal = below.is_empty();
        overgroups[i].proper_subgroups = below;
    }
    for u in &mut unions {
        if let Some(i) = u.overgroup {
            let mut contained: Vec<usize> = overgroups[i]
                .proper_subgroups
                .iter()
                .copied()
                .filter(|&j| overgroups[j].minimal)
                .collect();
            if overgroups[i].minimal {
                contained.push(i);
            }
            contained.sort_unstable();
            u.minimal_overgroups_contained = contained;
        }
    }
    let mut minimal: Vec<&Overgroup> = overgroups.iter().filter(|o| o.minimal).collect();
    minimal.sort_by(|a, b| a.group.order().cmp(b.group.order()));
    let minimal_overgroup_orders = minimal.iter().map(|o| o.order.clone()).collect();
    let all_unions_exceed = unions.iter().all(|u| u.overgroup.is_some());
    Ok(LatticeReport {
        k,
        orbit_reps: reps.iter().map(|(y, _)| y.to_vec()).collect(),
        orbit_sizes: reps.iter().map(|&(_, s)| s).collect(),
        unions,
        overgroups,
        minimal_overgroup_orders,
        all_unions_exceed,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinEdgeWitness {
    pub k: usize,
    pub y: Vec<usize>,
    pub orbit_size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinEdgeResult {
    pub group: String,
    pub n: usize,
    pub kmax: usize,
    pub witness: Option<MinEdgeWitness>,
    /// Number of orbits examined at each `k`, starting from `k = 1`.
    pub orbits_checked: Vec<usize>,
}

impl MinEdgeResult {
    /// Set when no single orbit up to `kmax` has automorphism group `G`.
    pub fn exception_candidate(&self) -> bool {
        self.witness.is_none()
    }

    pub fn to_report(&self) -> ExperimentReport {
        let mut r = ExperimentReport::new("minedge")
            .input("group", &self.group)
            .input("n", self.n)
            .input("kmax", self.kmax)
            .bound("min_k", self.witness.as_ref().map(|w| w.k))
            .bound("exception_candidate", self.exception_candidate());
        for (k, c) in self.orbits_checked.iter().enumerate() {
            r = r.count(&format!("orbits_k{}", k + 1), *c as u64);
        }
        if let Some(w) = &self.witness {
            r.witnesses.push(json!(w));
        }
        r
    }
}

/// Smallest `k ≤ kmax` such that a single orbit `Y^G` of a `k`-set has
/// automorphism group exactly `G`.
pub fn min_edge_size(group: &PermGroup, name: &str, kmax: usize, kset_cap: u64, cfg: &AutConfig) -> Result<MinEdgeResult> {
    let n = group.degree();
    if kmax > n / 2 {
        return Err(Error::InvalidArgument(format!("kmax = {kmax} exceeds n/2 = {}", n / 2)));
    }
    let mut result = MinEdgeResult {
        group: name.to_string(),
        n,
        kmax,
        witness: None,
        orbits_checked: Vec::new(),
    };
    for k in 1..=kmax {
        let reps = kset_orbit_reps(group, k, kset_cap)?;
        let mut checked = 0;
        for (y, _) in reps {
            checked += 1;
            let family = subset_orbit(group, &y)?;
            if aut_group_with(&family.hypergraph, cfg)?.order() == group.order() {
                result.orbits_checked.push(checked);
                result.witness = Some(MinEdgeWitness {
                    k,
                    y: y.to_vec(),
                    orbit_size: family.orbit_size,
                });
                return Ok(result);
            }
        }
        result.orbits_checked.push(checked);
    }
    Ok(result)
}

/// Classifies a group: set-transitive, a witness family whose automorphism
/// group is exactly `G`, or every orbit union at every `k ≤ n/2` admitting
/// an overgroup. The last is a candidate exception only, never certified.
pub fn classify_exception(group: &PermGroup, name: &str, kset_cap: u64, cfg: &AutConfig) -> Result<ExceptionFinding> {
    let n = group.degree();
    let st = verify_set_transitive(group, name, kset_cap)?;
    if matches!(st.evidence, Evidence::SetTransitive { .. }) {
        return Ok(st);
    }
    let single = min_edge_size(group, name, n / 2, kset_cap, cfg)?;
    if let Some(w) = single.witness {
        return Ok(finding(group, name, Evidence::RigidWitnessFound { k: w.k, orbit_reps: vec![w.y] }));
    }
    let mut levels = Vec::new();
    for k in 1..=n / 2 {
        let lattice = orbit_union_lattice(group, k, kset_cap, cfg)?;
        if let Some(u) = lattice.unions.iter().find(|u| u.overgroup.is_none()) {
            let orbit_reps = u.orbits.iter().map(|&i| lattice.orbit_reps[i].clone()).collect();
            return Ok(finding(group, name, Evidence::RigidWitnessFound { k, orbit_reps }));
        }
        levels.push(LatticeSummary {
            k,
            unions: lattice.unions.len(),
            minimal_overgroup_orders: lattice.minimal_overgroup_orders,
        });
    }
    Ok(finding(group, name, Evidence::AllOrbitUnionsAdmitOvergroup { levels }))
}
