use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use super::spec::{AlgorithmKind, ConstantsRef, ExperimentSpec, ValuationSpec};
use crate::arrival::TrialRng;
use crate::bucketing::pow2;
use crate::error::{Error, Result};
use crate::generate::{gap_constants, gap_friendly, rank_one_blocks, Family};
use crate::matroid::MatroidSpec;
use crate::stage2::StructureConstants;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    /// One bucket dominates the sample optimum.
    A,
    /// A few equal buckets form a manageable independent set.
    B,
    /// Each even bucket lies in the span of the odd bucket above it.
    C,
    /// Several competing structures, so no single case dominates.
    Flat,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 4] = [ScenarioKind::A, ScenarioKind::B, ScenarioKind::C, ScenarioKind::Flat];

    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioKind::A => "a",
            ScenarioKind::B => "b",
            ScenarioKind::C => "c",
            ScenarioKind::Flat => "flat",
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ScenarioKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::InvalidExperiment(format!("unknown scenario kind {s:?}, expected a, b, c or flat")))
    }
}

fn spread_in(rng: &mut TrialRng, bucket: i32) -> f64 {
    pow2(bucket) * rng.random_range(1.0..1.99)
}

fn experiment(name: String, matroid: MatroidSpec, values: Vec<f64>, seed: u64, constants: Option<StructureConstants>) -> ExperimentSpec {
    ExperimentSpec {
        name,
        matroid,
        valuation: ValuationSpec::Explicit { values },
        trials: 1000,
        seed,
        constants: constants.map(|c| ConstantsRef::Inline(Box::new(c))),
        algorithms: AlgorithmKind::ALL.to_vec(),
        adversarial_order: false,
    }
}

/// Partition matroid: a block of 12 elements in bucket 20 with capacity 2,
/// beside 256 free unit elements.
fn scenario_a() -> Vec<ExperimentSpec> {
    let mut rng = TrialRng::seed_from_u64(0xa);
    let heavy = 12;
    let light = 256;
    let mut values: Vec<f64> = (0..heavy).map(|_| spread_in(&mut rng, 20)).collect();
    values.extend((0..light).map(|_| spread_in(&mut rng, 0)));
    let matroid = MatroidSpec::Partition {
        block_sizes: vec![heavy, light],
        caps: vec![2, light],
    };
    vec![experiment("a-dominant-bucket".into(), matroid, values, 1, None)]
}

/// Free matroid with 64 elements in each of buckets 0, 1 and 2.
fn scenario_b() -> Vec<ExperimentSpec> {
    let mut rng = TrialRng::seed_from_u64(0xb);
    let per = 64;
    let values: Vec<f64> = (0..3).flat_map(|b| (0..per).map(move |_| b)).map(|b| spread_in(&mut rng, b)).collect();
    let n = values.len();
    vec![experiment("b-manageable".into(), MatroidSpec::Uniform { n, k: n }, values, 2, None)]
}

/// Rank-one blocks each holding two elements of an odd bucket `2t + 1` and
/// one of the even bucket `2t` below it, for `t = 0..4`.
fn scenario_c() -> Result<Vec<ExperimentSpec>> {
    let mut rng = TrialRng::seed_from_u64(0xc);
    let mut out = Vec::new();
    for (family, seed) in [(Family::Partition, 3), (Family::Graphic, 4)] {
        let mut sizes = Vec::new();
        let mut values = Vec::new();
        for t in 0..4 {
            for _ in 0..24 {
                sizes.push(3);
                values.push(spread_in(&mut rng, 2 * t + 1));
                values.push(spread_in(&mut rng, 2 * t + 1));
                values.push(spread_in(&mut rng, 2 * t));
            }
        }
        let name = format!("c-alternating-{}", family.as_str());
        out.push(experiment(name, rank_one_blocks(family, &sizes)?, values, seed, None));
    }
    Ok(out)
}

/// Partition matroids whose buckets all have the same number of elements,
/// plus a layered instance that reaches the critical tuple. Across the
/// suite every decision case occurs.
fn scenario_flat() -> Result<Vec<ExperimentSpec>> {
    let mut rng = TrialRng::seed_from_u64(0xf);
    let mut out = Vec::new();
    let buckets = 6;
    let per = 24;
    let mut sizes = Vec::new();
    let mut values = Vec::new();
    for b in 0..buckets {
        let mut left = per;
        while left > 0 {
            let s = rng.random_range(1..=left.min(4));
            sizes.push(s);
            values.extend((0..s).map(|_| spread_in(&mut rng, 2 * b)));
            left -= s;
        }
    }
    let caps = sizes.iter().map(|_| 1).collect();
    out.push(experiment(
        "flat-equal-buckets".into(),
        MatroidSpec::Partition { block_sizes: sizes, caps },
        values,
        5,
        None,
    ));
    let mut tiny = Vec::new();
    for b in 0..3 {
        tiny.push(spread_in(&mut rng, 4 * b));
        tiny.push(spread_in(&mut rng, 4 * b));
    }
    out.push(experiment(
        "flat-small".into(),
        MatroidSpec::Partition {
            block_sizes: vec![2, 2, 2],
            caps: vec![1, 1, 1],
        },
        tiny,
        7,
        None,
    ));
    let mut mixed: Vec<f64> = (0..3).map(|_| spread_in(&mut rng, 12)).collect();
    for b in 0..3 {
        mixed.extend((0..32).map(|_| spread_in(&mut rng, b)));
    }
    out.push(experiment(
        "flat-mixed".into(),
        MatroidSpec::Partition {
            block_sizes: vec![3, 96],
            caps: vec![2, 96],
        },
        mixed,
        8,
        None,
    ));
    let (matroid, values) = gap_friendly(Family::Partition, &mut rng)?;
    out.push(experiment("flat-layered".into(), matroid, values, 6, Some(gap_constants())));
    Ok(out)
}

/// The experiment files of one scenario family.
pub fn generate_scenarios(kind: ScenarioKind) -> Result<Vec<ExperimentSpec>> {
    match kind {
        ScenarioKind::A => Ok(scenario_a()),
        ScenarioKind::B => Ok(scenario_b()),
        ScenarioKind::C => scenario_c(),
        ScenarioKind::Flat => scenario_flat(),
    }
}
