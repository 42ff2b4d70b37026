//! Rank oracles: the memoized unrestricted oracle and the query trait every
//! algorithm is written against.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, RwLock};

use crate::element::{ElementId, ElementSet};
use crate::error::Result;
use crate::matroid::MatroidInstance;

/// Rank queries plus the derived span / uncov / ind measures.
pub trait RankAccess {
    fn rank(&self, set: &ElementSet) -> Result<usize>;

    fn is_independent(&self, set: &ElementSet) -> Result<bool> {
        Ok(self.rank(set)? == set.len())
    }

    /// `e ∈ span(set)`, i.e. adding `e` does not raise the rank.
    fn in_span(&self, set: &ElementSet, e: ElementId) -> Result<bool> {
        if set.contains(e) {
            // still validate the id
            self.rank(&ElementSet::singleton(e))?;
            return Ok(true);
        }
        Ok(self.rank(&set.with(e))? == self.rank(set)?)
    }

    /// `rank(r ∪ s) − rank(r)`.
    fn uncov(&self, r: &ElementSet, s: &ElementSet) -> Result<usize> {
        if s.is_empty() {
            return Ok(0);
        }
        Ok(self.rank(&r.union(s))? - self.rank(r)?)
    }

    /// Rank of the part of `s` outside `span(r)`.
    fn ind(&self, r: &ElementSet, s: &ElementSet) -> Result<usize> {
        let base = self.rank(r)?;
        let mut outside = ElementSet::new();
        for e in s {
            if r.contains(e) {
                continue;
            }
            if self.rank(&r.with(e))? > base {
                outside.insert(e);
            }
        }
        self.rank(&outside)
    }
}

/// Memoized unrestricted rank oracle over one instance.
///
/// The memo is behind a lock so one oracle can be shared across threads;
/// the harness nevertheless builds one oracle per trial.
pub struct RankOracle {
    instance: Arc<MatroidInstance>,
    memo: RwLock<HashMap<ElementSet, u32>>,
    cache_limit: Option<usize>,
    queries: AtomicU64,
    log: Option<Mutex<Vec<ElementSet>>>,
}

impl RankOracle {
    pub fn new(instance: Arc<MatroidInstance>) -> Self {
        RankOracle {
            instance,
            memo: RwLock::new(HashMap::new()),
            cache_limit: None,
            queries: AtomicU64::new(0),
            log: None,
        }
    }

    /// Stop inserting into the memo once it holds `limit` entries.
    pub fn with_cache_limit(mut self, limit: usize) -> Self {
        self.cache_limit = Some(limit);
        self
    }

    /// Record every queried subset, in query order.
    pub fn with_query_log(mut self) -> Self {
        self.log = Some(Mutex::new(Vec::new()));
        self
    }

    pub fn instance(&self) -> &MatroidInstance {
        &self.instance
    }

    pub fn shared_instance(&self) -> Arc<MatroidInstance> {
        Arc::clone(&self.instance)
    }

    pub fn n(&self) -> usize {
        self.instance.n()
    }

    pub fn query_count(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }

    pub fn cached_entries(&self) -> usize {
        self.memo.read().expect("memo lock poisoned").len()
    }

    pub fn query_log(&self) -> Vec<ElementSet> {
        self.log
            .as_ref()
            .map(|l| l.lock().expect("log lock poisoned").clone())
            .unwrap_or_default()
    }

    /// Maximum-value independent set under arbitrary nonnegative values.
    ///
    /// Greedy by value, ties broken towards the smaller id; zero-valued
    /// elements are never taken, so all-zero values give the empty set.
    pub fn max_weight_independent(&self, values: &[f64]) -> (ElementSet, f64) {
        max_weight_independent(&self.instance, values, &self.instance.ground())
    }
}

impl RankAccess for RankOracle {
    fn rank(&self, set: &ElementSet) -> Result<usize> {
        self.queries.fetch_add(1, Ordering::Relaxed);
        if let Some(log) = &self.log {
            log.lock().expect("log lock poisoned").push(set.clone());
        }
        if set.is_empty() {
            return Ok(0);
        }
        if let Some(&r) = self.memo.read().expect("memo lock poisoned").get(set) {
            return Ok(r as usize);
        }
        let r = self.instance.rank_uncached(set)?;
        let mut memo = self.memo.write().expect("memo lock poisoned");
        if self.cache_limit.is_none_or(|lim| memo.len() < lim) {
            memo.insert(set.clone(), r as u32);
        }
        Ok(r)
    }
}

/// Greedy maximum-weight independent subset of `within`.
pub fn max_weight_independent(instance: &MatroidInstance, values: &[f64], within: &ElementSet) -> (ElementSet, f64) {
    let mut order: Vec<ElementId> = within
        .iter()
        .filter(|e| values.get(e.index()).is_some_and(|&v| v > 0.0))
        .collect();
    order.sort_by(|a, b| values[b.index()].total_cmp(&values[a.index()]).then(a.cmp(b)));
    let mut state = instance.greedy();
    let mut chosen = ElementSet::new();
    let mut total = 0.0;
    for e in order {
        if state.try_add(e) {
            chosen.insert(e);
            total += values[e.index()];
        }
    }
    (chosen, total)
}
