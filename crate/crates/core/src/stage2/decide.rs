use rand::Rng;
use serde::{Deserialize, Serialize};

use super::context::SampleContext;
use super::family::{build_critical_family, compute_valuable, is_manageable, ValuableSets};
use super::tree::{build_critical_tree, check_tuple_structure, derive_critical_tuple};
use super::StructureConstants;
use crate::bucketing::{pow2, BucketedValuation, IndexSet};
use crate::element::ElementSet;
use crate::error::Result;
use crate::oracle::RankAccess;
use crate::selection::CriticalTuple;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage2Choice {
    Threshold(f64),
    Simple(IndexSet),
    Gap(CriticalTuple),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecisionCase {
    /// The fair coin chose the threshold algorithm.
    Coin,
    EmptySample,
    SingleBucket,
    ManageableSet,
    CriticalTuple,
    Fallback,
}

impl DecisionCase {
    pub const ALL: [DecisionCase; 6] = [
        DecisionCase::Coin,
        DecisionCase::EmptySample,
        DecisionCase::SingleBucket,
        DecisionCase::ManageableSet,
        DecisionCase::CriticalTuple,
        DecisionCase::Fallback,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DecisionCase::Coin => "coin",
            DecisionCase::EmptySample => "empty_sample",
            DecisionCase::SingleBucket => "single_bucket",
            DecisionCase::ManageableSet => "manageable_set",
            DecisionCase::CriticalTuple => "critical_tuple",
            DecisionCase::Fallback => "fallback",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Stage2Diagnostics {
    pub rank_f: usize,
    pub lopt_f: f64,
    pub sets: ValuableSets,
    /// Best single upper bucket score and the score it had to reach.
    pub single_score: f64,
    pub single_needed: f64,
    pub manageable_score: f64,
    pub manageable_needed: f64,
    pub manageable_candidates: usize,
    pub family_size: usize,
    pub tree_depth: usize,
    pub tuple_blocks: usize,
    pub tuple_sample_value: f64,
    /// Why the tuple path gave way to the fallback.
    pub fallback_reason: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stage2Decision {
    pub choice: Stage2Choice,
    pub case: DecisionCase,
    pub diagnostics: Stage2Diagnostics,
}

/// Flips the fair coin and, on tails, runs [`decide_structure`].
pub fn stage2_decide<R: RankAccess + ?Sized, G: Rng + ?Sized>(
    oracle: &R,
    val: &BucketedValuation,
    sample: &ElementSet,
    rng: &mut G,
    constants: &StructureConstants,
) -> Result<Stage2Decision> {
    let heads = rng.random_bool(0.5);
    if heads || sample.is_empty() {
        return Ok(Stage2Decision {
            choice: Stage2Choice::Threshold(val.max_value(sample)),
            case: if heads { DecisionCase::Coin } else { DecisionCase::EmptySample },
            diagnostics: Stage2Diagnostics::default(),
        });
    }
    decide_structure(oracle, val, sample, constants)
}

fn argmax_bucket(scored: impl Iterator<Item = (i32, f64)>) -> Option<(i32, f64)> {
    // strict comparison keeps the smallest index on ties
    scored.fold(None, |best, (j, s)| match best {
        Some((_, b)) if b >= s => best,
        _ => Some((j, s)),
    })
}

fn manageable_candidates(lower: &IndexSet, limit: usize) -> Vec<IndexSet> {
    let idx: Vec<i32> = lower.iter().copied().collect();
    let mut out: Vec<IndexSet> = Vec::new();
    for a in 0..idx.len() {
        for b in a..idx.len() {
            out.push(idx[a..=b].iter().copied().collect());
        }
    }
    if idx.len() <= limit {
        for mask in 1u32..(1 << idx.len()) {
            let set: IndexSet = (0..idx.len()).filter(|&p| mask >> p & 1 == 1).map(|p| idx[p]).collect();
            let contiguous = set.len() == 1 || {
                let (lo, hi) = (idx.binary_search(set.first().unwrap()).unwrap(), idx.binary_search(set.last().unwrap()).unwrap());
                hi - lo + 1 == set.len()
            };
            if !contiguous {
                out.push(set);
            }
        }
    }
    out
}

/// The deterministic part of the decision: a single upper bucket, a
/// manageable lower set, a critical tuple, or the heaviest bucket.
pub fn decide_structure<R: RankAccess + ?Sized>(
    oracle: &R,
    val: &BucketedValuation,
    sample: &ElementSet,
    constants: &StructureConstants,
) -> Result<Stage2Decision> {
    let ctx = SampleContext::new(oracle, val, sample, constants)?;
    let sets = compute_valuable(&ctx);
    let mut diag = Stage2Diagnostics {
        rank_f: ctx.rank_f(),
        lopt_f: ctx.lopt_f(),
        sets: sets.clone(),
        ..Default::default()
    };
    let loglog = ctx.loglog();
    let decision = |choice, case, diagnostics| Ok(Stage2Decision { choice, case, diagnostics });

    diag.single_needed = ctx.lopt_f() / (constants.case_denom * loglog);
    if let Some((k, score)) = argmax_bucket(sets.upper.iter().map(|&k| (k, pow2(k) * ctx.n(k) as f64))) {
        diag.single_score = score;
        if score >= diag.single_needed && score > 0.0 {
            return decision(Stage2Choice::Simple([k].into()), DecisionCase::SingleBucket, diag);
        }
    }

    diag.manageable_needed = ctx.lopt_of(&sets.lower) / (constants.case_denom * loglog);
    let mut best: Option<(IndexSet, f64)> = None;
    for set in manageable_candidates(&sets.lower, constants.subset_search_limit) {
        if !is_manageable(&ctx, &set) {
            continue;
        }
        diag.manageable_candidates += 1;
        let score = ctx.spread(&IndexSet::new(), &set)?;
        if best.as_ref().is_none_or(|(_, b)| score > *b) {
            best = Some((set, score));
        }
    }
    if let Some((set, score)) = best {
        diag.manageable_score = score;
        if score >= diag.manageable_needed && score > 0.0 {
            return decision(Stage2Choice::Simple(set), DecisionCase::ManageableSet, diag);
        }
    }

    let fallback = |mut diag: Stage2Diagnostics, reason: String| {
        diag.fallback_reason = Some(reason);
        let heaviest = argmax_bucket(ctx.ranks().iter().map(|(&k, &n)| (k, pow2(k) * n as f64)));
        let chosen: IndexSet = heaviest.filter(|(_, s)| *s > 0.0).map(|(k, _)| k).into_iter().collect();
        decision(Stage2Choice::Simple(chosen), DecisionCase::Fallback, diag)
    };

    if ctx.rank_f() < constants.rank_floor {
        return fallback(diag, format!("sample rank {} below floor {}", ctx.rank_f(), constants.rank_floor));
    }
    let family = build_critical_family(&ctx, &sets.lower);
    diag.family_size = family.members.len();
    if family.is_empty() {
        return fallback(diag, "empty critical family".into());
    }
    let tree = match build_critical_tree(&ctx, &family) {
        Ok(tree) => tree,
        Err(e) => return fallback(diag, e.to_string()),
    };
    diag.tree_depth = tree.depth();
    let tuple = derive_critical_tuple(&tree);
    if tuple.is_empty() {
        return fallback(diag, "no useful leaf".into());
    }
    diag.tuple_blocks = tuple.block_indices().len();
    diag.tuple_sample_value = check_tuple_structure(&ctx, &tuple, &sets.lower)?.sample_value;
    decision(Stage2Choice::Gap(tuple), DecisionCase::CriticalTuple, diag)
}
