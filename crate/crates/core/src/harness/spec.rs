use std::path::{Path, PathBuf};
use std::sync::Arc;

use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generate::ValueDistribution;
use crate::matroid::{MatroidInstance, MatroidSpec};
use crate::stage2::StructureConstants;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgorithmKind {
    /// The full three-stage algorithm.
    Ma,
    /// The simple algorithm on every bucket.
    SaExhaustive,
    /// The threshold algorithm at the sample maximum, without the coin.
    TaOnly,
    /// The simple algorithm on all buckets at or above a random sample bucket.
    BucketThreshold,
}

impl AlgorithmKind {
    pub const ALL: [AlgorithmKind; 4] = [
        AlgorithmKind::Ma,
        AlgorithmKind::SaExhaustive,
        AlgorithmKind::TaOnly,
        AlgorithmKind::BucketThreshold,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AlgorithmKind::Ma => "ma",
            AlgorithmKind::SaExhaustive => "sa_exhaustive",
            AlgorithmKind::TaOnly => "ta_only",
            AlgorithmKind::BucketThreshold => "bucket_threshold",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ValuationSpec {
    Explicit { values: Vec<f64> },
    Generated { distribution: ValueDistribution, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ConstantsRef {
    /// Path to a constants file, relative to the experiment file.
    Path(PathBuf),
    Inline(Box<StructureConstants>),
}

fn default_algorithms() -> Vec<AlgorithmKind> {
    vec![AlgorithmKind::Ma]
}

fn default_trials() -> u64 {
    1000
}

/// An experiment file.
///
/// ```json
/// {
///   "name": "rank-one",
///   "matroid": {"family": "uniform", "n": 6, "k": 1},
///   "valuation": {"values": [1, 2, 4, 8, 16, 32]},
///   "trials": 1000,
///   "seed": 7,
///   "constants": "constants.json",
///   "algorithms": ["ma", "ta_only"],
///   "adversarial_order": false
/// }
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    #[serde(default)]
    pub name: String,
    pub matroid: MatroidSpec,
    pub valuation: ValuationSpec,
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constants: Option<ConstantsRef>,
    #[serde(default = "default_algorithms")]
    pub algorithms: Vec<AlgorithmKind>,
    #[serde(default)]
    pub adversarial_order: bool,
}

/// A checked experiment with the instance built, values drawn and
/// constants loaded.
#[derive(Clone, Debug)]
pub struct Experiment {
    pub name: String,
    pub instance: Arc<MatroidInstance>,
    pub values: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    pub constants: StructureConstants,
    pub algorithms: Vec<AlgorithmKind>,
    pub adversarial_order: bool,
}

impl ExperimentSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    /// Resolves relative constants paths against `base`.
    pub fn resolve(&self, base: Option<&Path>) -> Result<Experiment> {
        if self.trials == 0 {
            return Err(Error::InvalidExperiment("trials must be at least 1".into()));
        }
        if self.algorithms.is_empty() {
            return Err(Error::InvalidExperiment("no algorithms listed".into()));
        }
        let mut algorithms = self.algorithms.clone();
        algorithms.sort();
        algorithms.dedup();
        let instance = Arc::new(MatroidInstance::new(self.matroid.clone())?);
        let n = instance.n();
        let values = match &self.valuation {
            ValuationSpec::Explicit { values } => values.clone(),
            ValuationSpec::Generated { distribution, seed } => {
                distribution.sample(n, &mut crate::arrival::TrialRng::seed_from_u64(*seed))?
            }
        };
        if values.len() != n {
            return Err(Error::InvalidValuation(format!("{} values for a ground set of size {n}", values.len())));
        }
        let oracle = crate::oracle::RankOracle::new(instance.clone());
        crate::bucketing::BucketedValuation::new(values.clone(), &oracle, n)?;
        let constants = match &self.constants {
            None => StructureConstants::default(),
            Some(ConstantsRef::Inline(c)) => {
                c.validate()?;
                (**c).clone()
            }
            Some(ConstantsRef::Path(p)) => {
                let full = match base {
                    Some(dir) if p.is_relative() => dir.join(p),
                    _ => p.clone(),
                };
                StructureConstants::load(&full)?
            }
        };
        Ok(Experiment {
            name: self.name.clone(),
            instance,
            values,
            trials: self.trials,
            seed: self.seed,
            constants,
            algorithms,
            adversarial_order: self.adversarial_order,
        })
    }
}
