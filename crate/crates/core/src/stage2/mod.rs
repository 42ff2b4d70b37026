//! Everything between the sample and the selection phase: valuable buckets,
//! manageable sets, the critical family and tree, the critical tuple, and
//! the final choice of selection algorithm.

mod constants;
mod context;
mod decide;
mod family;
mod offline;
mod tree;

pub use constants::StructureConstants;
pub use context::{greater_than, SampleContext};
pub use decide::{decide_structure, stage2_decide, DecisionCase, Stage2Choice, Stage2Decision, Stage2Diagnostics};
pub use family::{
    build_critical_family, compute_valuable, is_manageable, validate_critical_family, FamilyViolation,
    IndexPartitionFamily, ValuableSets,
};
pub use offline::{max_value_assumption_holds, super_buckets};
pub use tree::{
    build_critical_tree, check_tuple_structure, classify_subset, derive_critical_tuple, find_split, is_burned,
    is_negligible, is_useful_for, validate_critical_tree, Classification, CriticalTree, TreeVertex, TreeViolation,
    TupleStructure,
};
