use std::sync::Arc;

use super::*;
use crate::arrival::GuardedOracle;
use crate::bucketing::{BucketedValuation, IndexSet};
use crate::element::{ElementId, ElementSet};
use crate::matroid::{MatroidInstance, MatroidSpec};
use crate::oracle::{RankAccess, RankOracle};

fn setup(spec: MatroidSpec, values: Vec<f64>) -> (RankOracle, BucketedValuation) {
    let inst = Arc::new(MatroidInstance::new(spec).unwrap());
    let n = inst.n();
    let oracle = RankOracle::new(inst);
    let val = BucketedValuation::new(values, &oracle, n).unwrap();
    (oracle, val)
}

fn ids(v: &[u32]) -> Vec<ElementId> {
    v.iter().map(|&i| ElementId(i)).collect()
}

fn set(v: &[u32]) -> ElementSet {
    ids(v).into_iter().collect()
}

fn idx(v: &[i32]) -> IndexSet {
    v.iter().copied().collect()
}

/// Four cap-1 blocks `{2b, 2b+1}`; even ids have value 2, odd ids value 1.
fn shadowed() -> (RankOracle, BucketedValuation) {
    setup(
        MatroidSpec::Partition {
            block_sizes: vec![2; 4],
            caps: vec![1; 4],
        },
        [2.0, 1.0].repeat(4),
    )
}

#[test]
fn threshold_takes_earliest_qualifying_arrival() {
    let (oracle, val) = setup(MatroidSpec::Uniform { n: 4, k: 1 }, vec![1.0, 8.0, 4.0, 16.0]);
    let stream = ids(&[0, 2, 3, 1]);
    let mut guard = GuardedOracle::new(&oracle);
    let out = threshold_algorithm(&mut guard, &val, &stream, 4.0);
    assert_eq!(out.selected, ids(&[2]));
    assert_eq!(out.steps[2].reason, StepReason::Closed);
    assert!(check_threshold_choice(&val, &stream, 4.0, &out.selected));

    let mut guard = GuardedOracle::new(&oracle);
    let out = threshold_algorithm(&mut guard, &val, &stream, 32.0);
    assert!(out.selected.is_empty());
    assert!(check_threshold_choice(&val, &stream, 32.0, &out.selected));
}

#[test]
fn threshold_skips_loops_at_zero() {
    let (oracle, val) = setup(
        MatroidSpec::Graphic {
            vertices: 2,
            edges: vec![[0, 0], [0, 1]],
        },
        vec![0.0, 1.0],
    );
    let mut guard = GuardedOracle::new(&oracle);
    let out = threshold_algorithm(&mut guard, &val, &ids(&[0, 1]), 0.0);
    assert_eq!(out.selected, ids(&[1]));
    assert_eq!(out.steps[0].reason, StepReason::Loop);
}

#[test]
fn simple_with_no_buckets_selects_nothing() {
    let (oracle, val) = setup(MatroidSpec::Uniform { n: 3, k: 3 }, vec![1.0, 2.0, 4.0]);
    let mut guard = GuardedOracle::new(&oracle);
    let out = simple_algorithm(&mut guard, &val, &ids(&[0, 1, 2]), &IndexSet::new()).unwrap();
    assert!(out.selected.is_empty());
    assert_eq!(guard.query_count(), 0);
}

#[test]
fn simple_on_free_matroid_keeps_everything() {
    let (oracle, val) = setup(MatroidSpec::Uniform { n: 3, k: 3 }, vec![1.0, 2.0, 4.0]);
    let mut guard = GuardedOracle::new(&oracle);
    let out = simple_algorithm(&mut guard, &val, &ids(&[2, 0, 1]), &idx(&[0, 1, 2])).unwrap();
    assert_eq!(out.selected, ids(&[2, 0, 1]));
    assert_eq!(guard.violation_count(), 0);
}

#[test]
fn simple_on_rank_one_keeps_first_arrival() {
    let (oracle, val) = setup(MatroidSpec::Uniform { n: 3, k: 1 }, vec![1.0, 2.0, 4.0]);
    let mut guard = GuardedOracle::new(&oracle);
    let out = simple_algorithm(&mut guard, &val, &ids(&[1, 2, 0]), &idx(&[0, 1, 2])).unwrap();
    assert_eq!(out.selected, ids(&[1]));
    let rest = set(&[0, 1, 2]);
    assert!(check_simple_post_state(&oracle, &val, &rest, &idx(&[0, 1, 2]), &out.selected_set()).unwrap());
}

#[test]
fn simple_guarantee_examples() {
    let (oracle, val) = shadowed();
    let rest = set(&[0, 2, 3, 5, 6]);
    let empty = verify_sa_guarantee(&oracle, &val, &rest, &IndexSet::new(), &ElementSet::new()).unwrap();
    assert_eq!((empty.bound, empty.holds), (0.0, true));

    // J = {0}: bound is 2^0 · rank(B_L(0)) = 2 (ids 3 and 5)
    let mut guard = GuardedOracle::new(&oracle);
    let stream = ids(&[0, 2, 3, 5, 6]);
    let out = simple_algorithm(&mut guard, &val, &stream, &idx(&[0])).unwrap();
    let g = verify_sa_guarantee(&oracle, &val, &rest, &idx(&[0]), &out.selected_set()).unwrap();
    assert_eq!(g.bound, 2.0);
    assert!(g.holds);

    // J = {0, 1}: bucket 0 of block 1 is shadowed by id 2, block 2 by nothing
    let mut guard = GuardedOracle::new(&oracle);
    let out = simple_algorithm(&mut guard, &val, &stream, &idx(&[0, 1])).unwrap();
    let g = verify_sa_guarantee(&oracle, &val, &rest, &idx(&[0, 1]), &out.selected_set()).unwrap();
    // 2 · uncov({3, 5}, {0, 2, 6}) + 1 · uncov({0, 2, 6}, {3, 5}) = 2 · 2 + 1 · 1
    assert_eq!(g.bound, 5.0);
    assert!(g.holds, "{g:?}");
}

#[test]
fn gap_with_empty_tuple_selects_nothing() {
    let (oracle, val) = shadowed();
    let mut guard = GuardedOracle::new(&oracle);
    let tuple = CriticalTuple::new();
    let out = gap_algorithm(&mut guard, &val, &ElementSet::new(), &ids(&[0, 1, 2]), &tuple).unwrap();
    assert!(out.selected.is_empty());
    let g = verify_gapa_guarantee(&oracle, &val, &ElementSet::new(), &set(&[0, 1, 2]), &tuple, &ElementSet::new()).unwrap();
    assert_eq!((g.bound, g.holds), (0.0, true));
}

#[test]
fn gap_rejects_invalid_tuple_before_arrivals() {
    let (oracle, val) = shadowed();
    let mut guard = GuardedOracle::new(&oracle);
    let mut tuple = CriticalTuple::new();
    tuple.assign(&idx(&[0]), &idx(&[0]), &idx(&[0]));
    let err = gap_algorithm(&mut guard, &val, &ElementSet::new(), &ids(&[0, 1]), &tuple).unwrap_err();
    assert!(matches!(err, crate::Error::InvalidTuple(_)));
    assert!(guard.revealed().is_empty());
}

#[test]
fn gap_single_block_hand_example() {
    let (oracle, val) = shadowed();
    // the sample spans blocks 0, 1 and 2
    let sample = set(&[1, 3, 4]);
    let stream = ids(&[0, 2, 5, 6, 7]);
    let rest = set(&[0, 2, 5, 6, 7]);
    let mut tuple = CriticalTuple::new();
    tuple.assign(&idx(&[1]), &idx(&[0, 1]), &idx(&[]));

    let mut guard = GuardedOracle::new(&oracle);
    guard.reveal_all(sample.to_vec().iter());
    let out = gap_algorithm(&mut guard, &val, &sample, &stream, &tuple).unwrap();
    assert_eq!(guard.violation_count(), 0);
    assert_eq!(out.selected, ids(&[0, 2]));
    let reasons: Vec<StepReason> = out.steps.iter().map(|s| s.reason).collect();
    assert_eq!(
        reasons,
        [
            StepReason::Selected,
            StepReason::Selected,
            StepReason::BucketNotChosen,
            StepReason::OutsideGoodSpan,
            StepReason::BucketNotChosen
        ]
    );

    // 2 · (uncov(∅, {0, 2, 6}) − ind({1, 3, 4}, {0, 2, 6})) = 2 · (3 − 1)
    let g = verify_gapa_guarantee(&oracle, &val, &sample, &rest, &tuple, &out.selected_set()).unwrap();
    assert_eq!(g.bound, 4.0);
    assert_eq!(g.achieved, 4.0);
    assert!(g.holds);

    let audit = audit_gap_locality(&oracle, &val, &sample, &stream, &tuple, &out).unwrap();
    assert!(audit.passed(), "{audit:?}");
    assert_eq!(audit.checked, 2);
}

#[test]
fn gap_needs_the_sample_revealed() {
    let (oracle, val) = shadowed();
    let sample = set(&[1, 3, 4]);
    let mut tuple = CriticalTuple::new();
    tuple.assign(&idx(&[1]), &idx(&[0, 1]), &idx(&[]));
    let mut guard = GuardedOracle::new(&oracle);
    let err = gap_algorithm(&mut guard, &val, &sample, &ids(&[0]), &tuple).unwrap_err();
    assert!(matches!(err, crate::Error::DisciplineViolation { .. }));
    assert!(guard.violation_count() > 0);
}

#[test]
fn selections_stay_independent() {
    let (oracle, val) = shadowed();
    let stream = ids(&[7, 6, 5, 4, 3, 2, 1, 0]);
    let mut guard = GuardedOracle::new(&oracle);
    let out = simple_algorithm(&mut guard, &val, &stream, &idx(&[0, 1])).unwrap();
    assert!(oracle.is_independent(&out.selected_set()).unwrap());
    assert_eq!(out.selected.len(), 4);
}
