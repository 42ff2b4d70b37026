//! Stage-three selection: the threshold, simple and gap algorithms, the
//! critical tuple that drives the gap algorithm, and offline verifiers for
//! the output guarantees of each algorithm.

mod algorithms;
mod tuple;
mod verify;

pub use algorithms::{gap_algorithm, simple_algorithm, threshold_algorithm};
pub use tuple::{CriticalTuple, TupleReport, TupleRule, TupleViolation};
pub use verify::{
    audit_gap_locality, check_simple_post_state, check_threshold_choice, verify_gapa_guarantee, verify_sa_guarantee,
    Guarantee, LocalityAudit,
};

use serde::{Deserialize, Serialize};

use crate::element::{ElementId, ElementSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Threshold,
    Simple,
    Gap,
}

impl Strategy {
    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Threshold => "threshold",
            Strategy::Simple => "simple",
            Strategy::Gap => "gap",
        }
    }
}

/// Why an arriving element was or was not selected.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepReason {
    Selected,
    Loop,
    BelowThreshold,
    /// The threshold algorithm already holds an element.
    Closed,
    BucketNotChosen,
    /// Spanned by the current selection (plus the sample base set, for gap).
    Spanned,
    /// Gap algorithm: outside the span of the sample's good buckets.
    OutsideGoodSpan,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepDecision {
    pub element: ElementId,
    pub bucket: Option<i32>,
    pub reason: StepReason,
}

impl StepDecision {
    pub fn accepted(&self) -> bool {
        self.reason == StepReason::Selected
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelectionOutcome {
    pub strategy: Strategy,
    /// Selected elements in selection order.
    pub selected: Vec<ElementId>,
    pub steps: Vec<StepDecision>,
    /// Filled in by the matching verifier.
    pub guarantee: Option<Guarantee>,
}

impl SelectionOutcome {
    pub(crate) fn new(strategy: Strategy) -> Self {
        SelectionOutcome {
            strategy,
            selected: Vec::new(),
            steps: Vec::new(),
            guarantee: None,
        }
    }

    pub fn selected_set(&self) -> ElementSet {
        self.selected.iter().collect()
    }

    pub(crate) fn record(&mut self, element: ElementId, bucket: Option<i32>, reason: StepReason) {
        if reason == StepReason::Selected {
            self.selected.push(element);
        }
        self.steps.push(StepDecision { element, bucket, reason });
    }
}

#[cfg(test)]
mod tests;
