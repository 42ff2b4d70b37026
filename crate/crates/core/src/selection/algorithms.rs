use std::collections::BTreeMap;

use super::{CriticalTuple, SelectionOutcome, StepReason, Strategy};
use crate::arrival::GuardedOracle;
use crate::bucketing::{BucketedValuation, IndexSet};
use crate::element::{ElementId, ElementSet};
use crate::error::{Error, Result};
use crate::oracle::RankAccess;

/// Selects the first arrival whose value reaches `tau`. Loops are never
/// selected, even when `tau` is zero.
pub fn threshold_algorithm<R: RankAccess + ?Sized>(
    guard: &mut GuardedOracle<'_, R>,
    val: &BucketedValuation,
    stream: &[ElementId],
    tau: f64,
) -> SelectionOutcome {
    let mut out = SelectionOutcome::new(Strategy::Threshold);
    for &e in stream {
        guard.reveal(e);
        let bucket = val.bucket(e).index();
        let reason = if !out.selected.is_empty() {
            StepReason::Closed
        } else if bucket.is_none() {
            StepReason::Loop
        } else if val.value(e) < tau {
            StepReason::BelowThreshold
        } else {
            StepReason::Selected
        };
        out.record(e, bucket, reason);
    }
    out
}

/// Greedily keeps every arrival from a bucket in `chosen` that is not
/// spanned by the elements kept so far.
pub fn simple_algorithm<R: RankAccess + ?Sized>(
    guard: &mut GuardedOracle<'_, R>,
    val: &BucketedValuation,
    stream: &[ElementId],
    chosen: &IndexSet,
) -> Result<SelectionOutcome> {
    let mut out = SelectionOutcome::new(Strategy::Simple);
    let mut kept = ElementSet::new();
    for &e in stream {
        guard.reveal(e);
        let bucket = val.bucket(e).index();
        let reason = match bucket {
            None => StepReason::Loop,
            Some(i) if !chosen.contains(&i) => StepReason::BucketNotChosen,
            Some(_) if guard.in_span(&kept, e)? => StepReason::Spanned,
            Some(_) => {
                kept.insert(e);
                StepReason::Selected
            }
        };
        out.record(e, bucket, reason);
    }
    Ok(out)
}

/// Keeps an arrival `e` from bucket `ℓ` when `block(ℓ)` is nonempty, `e` lies
/// in the span of the sample's `good(ℓ)` buckets, and `e` is outside the span
/// of the kept elements together with the sample's `bad(ℓ)` buckets.
///
/// The sample must already be revealed in `guard`. The tuple is validated
/// before the first arrival.
pub fn gap_algorithm<R: RankAccess + ?Sized>(
    guard: &mut GuardedOracle<'_, R>,
    val: &BucketedValuation,
    sample: &ElementSet,
    stream: &[ElementId],
    tuple: &CriticalTuple,
) -> Result<SelectionOutcome> {
    let report = tuple.validate();
    if !report.is_valid() {
        return Err(Error::InvalidTuple(report.to_string()));
    }
    let filters: BTreeMap<i32, (ElementSet, ElementSet)> = tuple
        .block_indices()
        .into_iter()
        .map(|i| {
            let good = val.bucket_subset(sample, tuple.good(i));
            let bad = val.bucket_subset(sample, tuple.bad(i));
            (i, (good, bad))
        })
        .collect();

    let mut out = SelectionOutcome::new(Strategy::Gap);
    let mut kept = ElementSet::new();
    for &e in stream {
        guard.reveal(e);
        let bucket = val.bucket(e).index();
        let reason = match bucket.map(|i| filters.get(&i)) {
            None => StepReason::Loop,
            Some(None) => StepReason::BucketNotChosen,
            Some(Some((good, bad))) => {
                if !guard.in_span(good, e)? {
                    StepReason::OutsideGoodSpan
                } else if guard.in_span(&kept.union(bad), e)? {
                    StepReason::Spanned
                } else {
                    kept.insert(e);
                    StepReason::Selected
                }
            }
        };
        out.record(e, bucket, reason);
    }
    Ok(out)
}
