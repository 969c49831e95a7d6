use std::time::Instant;

use rand::RngCore;
use rayon::prelude::*;
use serde::Serialize;

use super::{standard_error, trial_rng, ExperimentReport, RNG_DESCRIPTION};
use crate::bitset::VertexSet;
use crate::bounds::{
    asymptotic_p2, transversal_rate_q2, transversal_union_bound, union_bound_asymmetry, BoundReport,
};
use crate::error::{Error, Result};
use crate::hypergraph::{is_rigid, transversal_is_rigid, AutConfig, Hypergraph, TransversalHypergraph};
use crate::kset::{KSetIndex, DEFAULT_KSET_CAP};

/// Largest edge universe enumerated by the exact modes (`2^20` instances).
pub const EXACT_MAX_EDGES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AsymmetryModel {
    /// Each `t`-subset of `n` points is an edge with probability 1/2.
    UniformHypergraph,
    /// Each transversal of `t` layers of size `r` is an edge with probability 1/2.
    BalancedTransversal { r: usize },
}

/// Estimated (or exact) probability that a random instance has a
/// non-identity automorphism.
#[derive(Debug, Clone, Serialize)]
pub struct AsymmetryReport {
    pub n: usize,
    pub t: usize,
    pub model: AsymmetryModel,
    pub trials: u64,
    /// `None` in exact mode.
    pub seed: Option<u64>,
    pub exact: bool,
    pub count_rigid: u64,
    pub count_indeterminate: u64,
    /// `1 − count_rigid / decided trials`.
    pub estimate: f64,
    pub stderr: f64,
    /// `non-rigid / total`, exact mode only.
    pub exact_fraction: Option<String>,
    pub formula_value: Option<BoundReport>,
    pub union_bound_value: Option<BoundReport>,
    pub runtime_ms: Option<u64>,
}

impl AsymmetryReport {
    pub fn to_report(&self, timing: bool) -> ExperimentReport {
        let name = match self.model {
            AsymmetryModel::UniformHypergraph => "asymmetry",
            AsymmetryModel::BalancedTransversal { .. } => "transversal-asymmetry",
        };
        let mut r = ExperimentReport::new(name)
            .input("n", self.n)
            .input("t", self.t)
            .input("model", self.model)
            .input("exact", self.exact)
            .count("rigid", self.count_rigid)
            .count("indeterminate", self.count_indeterminate);
        if !self.exact {
            r = r.input("rng", RNG_DESCRIPTION);
        }
        if let Some(f) = &self.exact_fraction {
            r = r.bound("exact_fraction", f);
        }
        if let Some(b) = &self.formula_value {
            r = r.bound("formula_value", b);
        }
        if let Some(b) = &self.union_bound_value {
            r = r.bound("union_bound_value", b);
        }
        r.seed = self.seed;
        r.trials = Some(self.trials);
        r.estimate = Some(self.estimate);
        r.stderr = Some(self.stderr);
        if timing {
            r.runtime_ms = self.runtime_ms;
        }
        r
    }
}

/// The edge universe and the rigidity test of one model.
struct Instance {
    n: usize,
    t: usize,
    model: AsymmetryModel,
    universe: Vec<VertexSet>,
}

impl Instance {
    fn uniform(n: usize, t: usize) -> Result<Self> {
        if t == 0 || 2 * t > n {
            return Err(Error::InvalidArgument(format!("need 1 <= t <= n/2 (n = {n}, t = {t})")));
        }
        let index = KSetIndex::new(n, t, DEFAULT_KSET_CAP)?;
        let universe = index.iter().map(|s| VertexSet::from_points(n, s)).collect();
        Ok(Instance {
            n,
            t,
            model: AsymmetryModel::UniformHypergraph,
            universe,
        })
    }

    fn transversal(n: usize, t: usize) -> Result<Self> {
        if t == 0 || n == 0 || !n.is_multiple_of(t) {
            return Err(Error::InvalidArgument(format!("t must divide n (n = {n}, t = {t})")));
        }
        let r = n / t;
        let count = (r as u64)
            .checked_pow(t as u32)
            .filter(|&c| c <= DEFAULT_KSET_CAP)
            .ok_or_else(|| Error::cap("transversal count", DEFAULT_KSET_CAP))?;
        let universe = (0..count).map(|i| TransversalHypergraph::transversal_edge(t, r, i)).collect();
        Ok(Instance {
            n,
            t,
            model: AsymmetryModel::BalancedTransversal { r },
            universe,
        })
    }

    fn rigid(&self, edges: Vec<VertexSet>, cfg: &AutConfig) -> Result<bool> {
        match self.model {
            AsymmetryModel::UniformHypergraph => is_rigid(&Hypergraph::new(self.n, edges)?, cfg),
            AsymmetryModel::BalancedTransversal { r } => {
                transversal_is_rigid(&TransversalHypergraph::new(self.t, r, edges)?, cfg)
            }
        }
    }

    /// `Some(rigid)`, or `None` when a search cap stopped the test.
    fn decide(&self, edges: Vec<VertexSet>, cfg: &AutConfig) -> Result<Option<bool>> {
        match self.rigid(edges, cfg) {
            Ok(b) => Ok(Some(b)),
            Err(e) if e.is_cap() => Ok(None),
            Err(e) => Err(e),
        }
    }

    fn random_edges(&self, rng: &mut impl RngCore) -> Vec<VertexSet> {
        let mut out = Vec::new();
        for chunk in self.universe.chunks(64) {
            let bits = rng.next_u64();
            for (i, e) in chunk.iter().enumerate() {
                if bits >> i & 1 == 1 {
                    out.push(e.clone());
                }
            }
        }
        out
    }

    fn masked_edges(&self, mask: u64) -> Vec<VertexSet> {
        (0..self.universe.len())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| self.universe[i].clone())
            .collect()
    }

    fn bounds(&self) -> (Option<BoundReport>, Option<BoundReport>) {
        match self.model {
            AsymmetryModel::UniformHypergraph => (
                if self.t == 2 { asymptotic_p2(self.n).ok() } else { None },
                union_bound_asymmetry(self.n, self.t).ok(),
            ),
            AsymmetryModel::BalancedTransversal { r } => (
                if self.t == 2 { transversal_rate_q2(self.n).ok() } else { None },
                transversal_union_bound(self.t, r).ok(),
            ),
        }
    }

    fn monte_carlo(&self, trials: u64, seed: u64, cfg: &AutConfig) -> Result<AsymmetryReport> {
        if trials == 0 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        cfg.check(self.n, self.universe.len())?;
        let start = Instant::now();
        let results: Vec<Option<bool>> = (0..trials)
            .into_par_iter()
            .map(|i| self.decide(self.random_edges(&mut trial_rng(seed, i)), cfg))
            .collect::<Result<_>>()?;
        let mut report = self.tally(&results, trials);
        report.seed = Some(seed);
        report.runtime_ms = Some(start.elapsed().as_millis() as u64);
        Ok(report)
    }

    fn exhaustive(&self, cfg: &AutConfig) -> Result<AsymmetryReport> {
        let m = self.universe.len();
        if m > EXACT_MAX_EDGES {
            return Err(Error::cap("exact mode edge universe", EXACT_MAX_EDGES));
        }
        let start = Instant::now();
        let total = 1u64 << m;
        let results: Vec<Option<bool>> = (0..total)
            .into_par_iter()
            .map(|mask| self.decide(self.masked_edges(mask), cfg))
            .collect::<Result<_>>()?;
        let mut report = self.tally(&results, total);
        report.exact = true;
        if report.count_indeterminate == 0 {
            report.exact_fraction = Some(format!("{}/{}", total - report.count_rigid, total));
            report.stderr = 0.0;
        }
        report.runtime_ms = Some(start.elapsed().as_millis() as u64);
        Ok(report)
    }

    fn tally(&self, results: &[Option<bool>], trials: u64) -> AsymmetryReport {
        let count_rigid = results.iter().filter(|r| **r == Some(true)).count() as u64;
        let count_indeterminate = results.iter().filter(|r| r.is_none()).count() as u64;
        let decided = trials - count_indeterminate;
        let estimate = if decided == 0 {
            0.0
        } else {
            1.0 - count_rigid as f64 / decided as f64
        };
        let (formula_value, union_bound_value) = self.bounds();
        AsymmetryReport {
            n: self.n,
            t: self.t,
            model: self.model,
            trials,
            seed: None,
            exact: false,
            count_rigid,
            count_indeterminate,
            estimate,
            stderr: standard_error(estimate, decided),
            exact_fraction: None,
            formula_value,
            union_bound_value,
            runtime_ms: None,
        }
    }
}

/// Monte Carlo estimate of the probability that a random `t`-uniform
/// hypergraph on `n` vertices has a non-identity automorphism.
pub fn asymmetry_mc(n: usize, t: usize, trials: u64, seed: u64, cfg: &AutConfig) -> Result<AsymmetryReport> {
    Instance::uniform(n, t)?.monte_carlo(trials, seed, cfg)
}

/// The same probability by enumerating every edge set.
pub fn asymmetry_exact(n: usize, t: usize, cfg: &AutConfig) -> Result<AsymmetryReport> {
    Instance::uniform(n, t)?.exhaustive(cfg)
}

/// Monte Carlo estimate for balanced transversal hypergraphs with `t`
/// layers of size `n/t`.
pub fn transversal_asymmetry_mc(n: usize, t: usize, trials: u64, seed: u64, cfg: &AutConfig) -> Result<AsymmetryReport> {
    Instance::transversal(n, t)?.monte_carlo(trials, seed, cfg)
}

pub fn transversal_asymmetry_exact(n: usize, t: usize, cfg: &AutConfig) -> Result<AsymmetryReport> {
    Instance::transversal(n, t)?.exhaustive(cfg)
}
