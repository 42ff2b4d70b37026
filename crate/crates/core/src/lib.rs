//! Matroid secretary algorithms over concrete matroid oracles, with
//! per-run verification of their output guarantees and a Monte-Carlo
//! harness for competitive ratios.

pub mod arrival;
pub mod bucketing;
pub mod element;
pub mod error;
pub mod generate;
pub mod harness;
pub mod matroid;
pub mod oracle;
pub mod selection;
pub mod stage2;

pub use element::{ElementId, ElementSet};
pub use error::{Error, Result};
pub use matroid::{MatroidInstance, MatroidSpec};
pub use oracle::{RankAccess, RankOracle};
