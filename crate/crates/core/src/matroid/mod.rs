//! Concrete matroid families and their independence structure.
//!
//! Every family exposes an incremental "greedy state": elements are offered
//! one at a time and accepted iff the accepted set stays independent. Rank
//! of a set is the number of accepted elements when the set is offered in
//! ascending id order.

mod family;
mod spec;

pub use family::GreedyState;
pub use spec::MatroidSpec;

use crate::element::{ElementId, ElementSet};
use crate::error::{Error, Result};

/// A validated matroid instance. Construct through [`MatroidInstance::new`].
#[derive(Clone, Debug)]
pub struct MatroidInstance {
    spec: MatroidSpec,
    n: usize,
    kind: family::Kind,
}

impl MatroidInstance {
    pub fn new(spec: MatroidSpec) -> Result<Self> {
        let (n, kind) = family::Kind::build(&spec)?;
        Ok(MatroidInstance { spec, n, kind })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::new(serde_json::from_str(text)?)
    }

    pub fn spec(&self) -> &MatroidSpec {
        &self.spec
    }

    /// Size of the ground set.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ground(&self) -> ElementSet {
        ElementSet::full(self.n)
    }

    pub fn family_name(&self) -> &'static str {
        self.spec.family_name()
    }

    pub fn check(&self, set: &ElementSet) -> Result<()> {
        if set.bound() > self.n {
            let id = set.iter().find(|e| e.index() >= self.n).expect("bound exceeds n");
            return Err(Error::InvalidElement { id, n: self.n });
        }
        Ok(())
    }

    pub fn greedy(&self) -> GreedyState<'_> {
        GreedyState::new(&self.kind)
    }

    /// Uncached rank by greedy extension in ascending id order.
    pub fn rank_uncached(&self, set: &ElementSet) -> Result<usize> {
        self.check(set)?;
        let mut state = self.greedy();
        Ok(set.iter().filter(|&e| state.try_add(e)).count())
    }

    pub fn is_independent_uncached(&self, set: &ElementSet) -> Result<bool> {
        self.check(set)?;
        let mut state = self.greedy();
        Ok(set.iter().all(|e| state.try_add(e)))
    }

    pub fn is_loop(&self, e: ElementId) -> bool {
        e.index() < self.n && !self.greedy().try_add(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[u32]) -> ElementSet {
        v.iter().map(|&i| ElementId(i)).collect()
    }

    #[test]
    fn uniform_rank_is_capped() {
        let m = MatroidInstance::new(MatroidSpec::Uniform { n: 4, k: 2 }).unwrap();
        assert_eq!(m.rank_uncached(&set(&[0, 1, 2])).unwrap(), 2);
        assert!(!m.is_independent_uncached(&set(&[0, 1, 2])).unwrap());
        assert!(m.is_independent_uncached(&ElementSet::new()).unwrap());
    }

    #[test]
    fn triangle_is_dependent() {
        let m = MatroidInstance::new(MatroidSpec::Graphic {
            vertices: 3,
            edges: vec![[0, 1], [1, 2], [0, 2]],
        })
        .unwrap();
        assert!(!m.is_independent_uncached(&set(&[0, 1, 2])).unwrap());
        assert_eq!(m.rank_uncached(&set(&[0, 1, 2])).unwrap(), 2);
    }

    #[test]
    fn out_of_range_element_is_rejected() {
        let m = MatroidInstance::new(MatroidSpec::Uniform { n: 3, k: 1 }).unwrap();
        match m.rank_uncached(&set(&[0, 7])) {
            Err(Error::InvalidElement { id, n }) => {
                assert_eq!(id, ElementId(7));
                assert_eq!(n, 3);
            }
            other => panic!("expected invalid element, got {other:?}"),
        }
    }

    #[test]
    fn loops_per_family() {
        let g = MatroidInstance::new(MatroidSpec::Graphic {
            vertices: 2,
            edges: vec![[0, 0], [0, 1]],
        })
        .unwrap();
        assert!(g.is_loop(ElementId(0)));
        assert!(!g.is_loop(ElementId(1)));

        let t = MatroidInstance::new(MatroidSpec::Transversal {
            right: 1,
            adjacency: vec![vec![], vec![0]],
        })
        .unwrap();
        assert!(t.is_loop(ElementId(0)));

        let b = MatroidInstance::new(MatroidSpec::BinaryLinear {
            rows: 2,
            columns: vec!["00".into(), "10".into()],
        })
        .unwrap();
        assert!(b.is_loop(ElementId(0)));
        assert!(!b.is_loop(ElementId(1)));
    }
}
