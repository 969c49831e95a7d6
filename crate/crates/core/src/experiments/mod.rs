//! Randomized and exhaustive experiments on orbit hypergraphs.
//!
//! Monte Carlo trials draw from a ChaCha8 generator keyed by the master seed
//! with the trial index as stream number, so each trial's randomness is
//! fixed by `(seed, index)` alone. Trials run on the current rayon pool and
//! are reduced in index order, which makes reports independent of the
//! thread count.

mod asymmetry;
mod exceptions;
mod rigidity;

pub use asymmetry::{
    asymmetry_exact, asymmetry_mc, transversal_asymmetry_exact, transversal_asymmetry_mc, AsymmetryModel,
    AsymmetryReport, EXACT_MAX_EDGES,
};
pub use exceptions::{
    classify_exception, min_edge_size, orbit_union_lattice, verify_set_transitive, Evidence, ExceptionFinding,
    LatticeReport, LatticeSummary, MinEdgeResult, MinEdgeWitness, OrbitUnion, Overgroup, MAX_LATTICE_ORBITS,
};
pub use rigidity::{rigidity_mc, RigidityFailure, RigidityModel, RigidityReport, DEFAULT_FAILURE_LOG};

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 20_240_601;

/// Description of the per-trial generator, embedded in reports.
pub const RNG_DESCRIPTION: &str = "ChaCha8, keyed by seed_from_u64(seed), stream = trial index";

/// The generator for trial `index`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Binomial standard error `sqrt(p(1−p)/trials)`.
pub fn standard_error(estimate: f64, trials: u64) -> f64 {
    if trials == 0 {
        return 0.0;
    }
    (estimate * (1.0 - estimate) / trials as f64).sqrt()
}

/// The common JSON layout of every experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub inputs: BTreeMap<String, Value>,
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    pub counts: BTreeMap<String, u64>,
    pub estimate: Option<f64>,
    pub stderr: Option<f64>,
    pub bounds: BTreeMap<String, Value>,
    pub witnesses: Vec<Value>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub runtime_ms: Option<u64>,
    pub version: String,
}

impl ExperimentReport {
    pub fn new(experiment: &str) -> Self {
        ExperimentReport {
            experiment: experiment.to_string(),
            inputs: BTreeMap::new(),
            seed: None,
            trials: None,
            counts: BTreeMap::new(),
            estimate: None,
            stderr: None,
            bounds: BTreeMap::new(),
            witnesses: Vec::new(),
            runtime_ms: None,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn input(mut self, key: &str, value: impl Serialize) -> Self {
        self.inputs.insert(key.to_string(), to_value(value));
        self
    }

    pub fn count(mut self, key: &str, value: u64) -> Self {
        self.counts.insert(key.to_string(), value);
        self
    }

    pub fn bound(mut self, key: &str, value: impl Serialize) -> Self {
        self.bounds.insert(key.to_string(), to_value(value));
        self
    }

    pub const CSV_HEADER: &'static str = "experiment,inputs,seed,trials,counts,estimate,stderr";

    /// One summary row matching [`Self::CSV_HEADER`]. Inputs and counts are
    /// packed as `key=value` pairs separated by `;`.
    pub fn csv_row(&self) -> String {
        let pack = |m: Vec<(String, String)>| m.into_iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";");
        let inputs = pack(
            self.inputs
                .iter()
                .map(|(k, v)| (k.clone(), v.to_string().replace(['"', ','], "")))
                .collect(),
        );
        let counts = pack(self.counts.iter().map(|(k, v)| (k.clone(), v.to_string())).collect());
        let opt = |x: Option<String>| x.unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{}",
            self.experiment,
            inputs,
            opt(self.seed.map(|s| s.to_string())),
            opt(self.trials.map(|s| s.to_string())),
            counts,
            opt(self.estimate.map(|s| s.to_string())),
            opt(self.stderr.map(|s| s.to_string())),
        )
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

#[cfg(test)]
mod tests;
