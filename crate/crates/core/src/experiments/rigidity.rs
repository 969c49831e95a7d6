use std::time::Instant;

use rand::seq::index::sample;
use rand::{Rng, RngCore};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::{trial_rng, ExperimentReport, RNG_DESCRIPTION};
use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::hypergraph::AutConfig;
use crate::hypergraph::{aut_group_with, setwise_stabilizer, subset_orbit};

/// How many failures a [`RigidityReport`] keeps by default.
pub const DEFAULT_FAILURE_LOG: usize = 1000;

/// Distribution of the random subset `Y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RigidityModel {
    /// Every point independently with probability 1/2.
    AllSubsets,
    /// Uniform over the `k`-subsets.
    KUniform { k: usize },
}

impl RigidityModel {
    pub fn label(&self) -> String {
        match self {
            RigidityModel::AllSubsets => "all-subsets".into(),
            RigidityModel::KUniform { k } => format!("k-uniform(k={k})"),
        }
    }

    fn sample(&self, n: usize, rng: &mut impl RngCore) -> VertexSet {
        match *self {
            RigidityModel::AllSubsets => {
                let mut y = VertexSet::empty(n);
                for p in 0..n {
                    if rng.random_bool(0.5) {
                        y.insert(p);
                    }
                }
                y
            }
            RigidityModel::KUniform { k } => VertexSet::from_points(n, sample(rng, n, k)),
        }
    }
}

/// A trial where `Aut(Y^G)` is strictly larger than `G`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RigidityFailure {
    pub trial: u64,
    pub y: Vec<usize>,
    pub aut_order: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RigidityReport {
    pub group: String,
    pub n: usize,
    pub model: RigidityModel,
    pub trials: u64,
    pub seed: u64,
    pub count_aut_equal: u64,
    pub count_aut_larger: u64,
    /// Trials stopped by a search cap; in neither count above.
    pub count_indeterminate: u64,
    /// Trials where `|Aut| = |Y^G| · |Aut_{Y}|` or `G ⊆ Aut` failed. Always 0
    /// unless an engine is broken.
    pub deduction_violations: u64,
    pub failures: Vec<RigidityFailure>,
    pub failures_truncated: bool,
    pub indeterminate_trials: Vec<u64>,
    pub runtime_ms: Option<u64>,
}

enum Outcome {
    Equal,
    Larger { y: Vec<usize>, aut_order: String, deduction_ok: bool },
    EqualBroken,
    Indeterminate,
}

fn run_trial(group: &PermGroup, model: RigidityModel, seed: u64, index: u64, cfg: &AutConfig) -> Result<Outcome> {
    let mut rng = trial_rng(seed, index);
    let y = model.sample(group.degree(), &mut rng);
    let family = subset_orbit(group, &y)?;
    let aut = match aut_group_with(&family.hypergraph, cfg) {
        Ok(a) => a,
        Err(e) if e.is_cap() => return Ok(Outcome::Indeterminate),
        Err(e) => return Err(e),
    };
    let contained = group.is_subgroup_of(&aut)?;
    let stab = setwise_stabilizer(&aut, &y)?;
    let deduction_ok = contained && *aut.order() == stab.order() * family.orbit_size;
    if aut.order() == group.order() {
        return Ok(if deduction_ok { Outcome::Equal } else { Outcome::EqualBroken });
    }
    Ok(Outcome::Larger {
        y: y.to_vec(),
        aut_order: aut.order().to_string(),
        deduction_ok: deduction_ok && aut.order() > group.order(),
    })
}

/// Samples `trials` subsets `Y` and compares `Aut(Y^G)` with `G` on each.
///
/// Trials run on the current rayon pool; the report depends only on the
/// inputs. At most `failure_log` failures are kept.
pub fn rigidity_mc(
    group: &PermGroup,
    name: &str,
    trials: u64,
    seed: u64,
    model: RigidityModel,
    cfg: &AutConfig,
    failure_log: usize,
) -> Result<RigidityReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let n = group.degree();
    if let RigidityModel::KUniform { k } = model {
        if k > n {
            return Err(Error::InvalidArgument(format!("k = {k} exceeds n = {n}")));
        }
    }
    cfg.check(n, 0)?;
    let start = Instant::now();
    let outcomes: Vec<Outcome> = (0..trials)
        .into_par_iter()
        .map(|i| run_trial(group, model, seed, i, cfg))
        .collect::<Result<_>>()?;

    let mut report = RigidityReport {
        group: name.to_string(),
        n,
        model,
        trials,
        seed,
        count_aut_equal: 0,
        count_aut_larger: 0,
        count_indeterminate: 0,
        deduction_violations: 0,
        failures: Vec::new(),
        failures_truncated: false,
        indeterminate_trials: Vec::new(),
        runtime_ms: None,
    };
    for (trial, outcome) in (0u64..).zip(outcomes) {
        match outcome {
            Outcome::Equal => report.count_aut_equal += 1,
            Outcome::EqualBroken => {
                report.count_aut_equal += 1;
                report.deduction_violations += 1;
            }
            Outcome::Larger { y, aut_order, deduction_ok } => {
                report.count_aut_larger += 1;
                if !deduction_ok {
                    report.deduction_violations += 1;
                }
                if report.failures.len() < failure_log {
                    report.failures.push(RigidityFailure { trial, y, aut_order });
                } else {
                    report.failures_truncated = true;
                }
            }
            Outcome::Indeterminate => {
                report.count_indeterminate += 1;
                report.indeterminate_trials.push(trial);
            }
        }
    }
    report.runtime_ms = Some(start.elapsed().as_millis() as u64);
    Ok(report)
}

impl RigidityReport {
    /// Fraction of decided trials with `Aut(Y^G) = G`.
    pub fn estimate(&self) -> f64 {
        let decided = self.count_aut_equal + self.count_aut_larger;
        if decided == 0 {
            0.0
        } else {
            self.count_aut_equal as f64 / decided as f64
        }
    }

    /// The report in the common layout. The runtime is included only when
    /// `timing` is set, so that untimed reports are reproducible byte for byte.
    pub fn to_report(&self, timing: bool) -> ExperimentReport {
        let decided = self.count_aut_equal + self.count_aut_larger;
        let mut r = ExperimentReport::new("rigidity")
            .input("group", &self.group)
            .input("n", self.n)
            .input("model", self.model)
            .input("rng", RNG_DESCRIPTION)
            .count("aut_equal", self.count_aut_equal)
            .count("aut_larger", self.count_aut_larger)
            .count("indeterminate", self.count_indeterminate)
            .count("deduction_violations", self.deduction_violations);
        r.seed = Some(self.seed);
        r.trials = Some(self.trials);
        r.estimate = Some(self.estimate());
        r.stderr = Some(super::standard_error(self.estimate(), decided));
        r.witnesses = self
            .failures
            .iter()
            .map(|f| json!({ "trial": f.trial, "y": f.y, "aut_order": f.aut_order }))
            .collect();
        if self.failures_truncated {
            r.inputs.insert("failure_log_truncated".into(), json!(true));
        }
        if !self.indeterminate_trials.is_empty() {
            r.inputs.insert("indeterminate_trials".into(), json!(self.indeterminate_trials));
        }
        if timing {
            r.runtime_ms = self.runtime_ms;
        }
        r
    }
}
