use serde::{Deserialize, Serialize};

use super::{CriticalTuple, SelectionOutcome};
use crate::bucketing::{pow2, BucketedValuation, IndexSet};
use crate::element::{ElementId, ElementSet};
use crate::error::Result;
use crate::oracle::RankAccess;

/// Lower bound on the selected value and whether the selection met it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Guarantee {
    pub bound: f64,
    pub achieved: f64,
    pub holds: bool,
}

impl Guarantee {
    fn new(bound: f64, achieved: f64) -> Self {
        Guarantee {
            bound,
            achieved,
            holds: achieved >= bound,
        }
    }
}

/// Checks `OPT(P) ≥ Σ_{j∈J} 2^j · uncov(B_L(J∖{j}), B_L(j))`.
pub fn verify_sa_guarantee<R: RankAccess + ?Sized>(
    oracle: &R,
    val: &BucketedValuation,
    rest: &ElementSet,
    chosen: &IndexSet,
    selected: &ElementSet,
) -> Result<Guarantee> {
    let all = val.bucket_subset(rest, chosen);
    let mut bound = 0.0;
    for j in val.buckets_in(&all) {
        let bucket = val.bucket_of(rest, j);
        let others = all.difference(&bucket);
        bound += pow2(j) * oracle.uncov(&others, &bucket)? as f64;
    }
    Ok(Guarantee::new(bound, val.opt_of(oracle, selected)?))
}

/// Checks `OPT(P) ≥ Σ_{j∈BLOCK} 2^j · (uncov(B_F(D(j)) ∪ B_L(B(j)∖{j}), B_L(j))
/// − ind(B_F(G(j)), B_L(j)))`, with the bound clamped at zero.
pub fn verify_gapa_guarantee<R: RankAccess + ?Sized>(
    oracle: &R,
    val: &BucketedValuation,
    sample: &ElementSet,
    rest: &ElementSet,
    tuple: &CriticalTuple,
    selected: &ElementSet,
) -> Result<Guarantee> {
    let mut bound = 0.0;
    for j in tuple.block_indices() {
        let bucket = val.bucket_of(rest, j);
        if bucket.is_empty() {
            continue;
        }
        let mut others = tuple.block(j).clone();
        others.remove(&j);
        let base = val.bucket_subset(sample, tuple.bad(j)).union(&val.bucket_subset(rest, &others));
        let gain = oracle.uncov(&base, &bucket)? as f64;
        let lost = oracle.ind(&val.bucket_subset(sample, tuple.good(j)), &bucket)? as f64;
        bound += pow2(j) * (gain - lost);
    }
    Ok(Guarantee::new(bound.max(0.0), val.opt_of(oracle, selected)?))
}

/// The simple algorithm leaves every chosen-bucket element of `rest`
/// spanned: `P ⊆ B_L(J)`, `P` independent and `rank(P) = rank(B_L(J))`.
pub fn check_simple_post_state<R: RankAccess + ?Sized>(
    oracle: &R,
    val: &BucketedValuation,
    rest: &ElementSet,
    chosen: &IndexSet,
    selected: &ElementSet,
) -> Result<bool> {
    let all = val.bucket_subset(rest, chosen);
    if !selected.is_subset(&all) || !oracle.is_independent(selected)? {
        return Ok(false);
    }
    Ok(oracle.rank(selected)? == oracle.rank(&all)?)
}

/// The threshold algorithm picked exactly the earliest non-loop arrival of
/// value at least `tau`, or nothing when there is none.
pub fn check_threshold_choice(val: &BucketedValuation, stream: &[ElementId], tau: f64, selected: &[ElementId]) -> bool {
    let expected = stream
        .iter()
        .copied()
        .find(|&e| val.bucket(e).index().is_some() && val.value(e) >= tau);
    selected == expected.as_slice()
}

/// Result of replaying a gap-algorithm run with full oracle access.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalityAudit {
    /// Arrivals that passed the good-span filter.
    pub checked: u64,
    /// Arrivals where `e ∈ span(P ∪ B_F(D))` differed from
    /// `e ∈ span((P ∩ B_L(BLOCK(ℓ))) ∪ B_F(D))`.
    pub mismatches: u64,
    /// The replay selected the same elements in the same order.
    pub replay_matches: bool,
}

impl LocalityAudit {
    pub fn passed(&self) -> bool {
        self.mismatches == 0 && self.replay_matches
    }
}

/// Replays a gap run and checks, at every arrival past the first filter,
/// that the second filter only depends on the kept elements of the
/// arrival's own block.
pub fn audit_gap_locality<R: RankAccess + ?Sized>(
    oracle: &R,
    val: &BucketedValuation,
    sample: &ElementSet,
    stream: &[ElementId],
    tuple: &CriticalTuple,
    outcome: &SelectionOutcome,
) -> Result<LocalityAudit> {
    let mut audit = LocalityAudit::default();
    let mut kept = ElementSet::new();
    let mut order = Vec::new();
    for &e in stream {
        let Some(l) = val.bucket(e).index() else { continue };
        if tuple.block(l).is_empty() {
            continue;
        }
        if !oracle.in_span(&val.bucket_subset(sample, tuple.good(l)), e)? {
            continue;
        }
        audit.checked += 1;
        let bad = val.bucket_subset(sample, tuple.bad(l));
        let full = oracle.in_span(&kept.union(&bad), e)?;
        let local_kept = val.bucket_subset(&kept, tuple.block(l));
        let local = oracle.in_span(&local_kept.union(&bad), e)?;
        if full != local {
            audit.mismatches += 1;
        }
        if !full {
            kept.insert(e);
            order.push(e);
        }
    }
    audit.replay_matches = order == outcome.selected;
    Ok(audit)
}
