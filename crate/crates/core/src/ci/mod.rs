//! Conditional-independence testing.
//!
//! [`CiTester`] is the single interface the learning code talks to. The
//! [`OracleTester`] answers from m-separation in a known MAG; the
//! [`FisherZTester`] answers from data.

mod fisher_z;
mod normal;
mod oracle;

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::sync::atomic::{AtomicU64, Ordering};

use crate::{Error, Result, VertexId, VertexSet};

pub use fisher_z::{DataMatrix, FisherZTester, DEFAULT_ALPHA};
pub use normal::{standard_normal_cdf, standard_normal_quantile};
pub use oracle::OracleTester;

/// `x ⊥ y | z`?
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CiQuery {
    pub x: VertexId,
    pub y: VertexId,
    pub z: VertexSet,
}

impl CiQuery {
    pub fn new(x: VertexId, y: VertexId, z: VertexSet) -> Result<Self> {
        if x == y || z.contains(x) || z.contains(y) {
            return Err(Error::invalid(format!(
                "malformed CI query ({x}, {y} | {z:?})"
            )));
        }
        Ok(CiQuery { x, y, z })
    }

    pub(crate) fn check_range(&self, n: usize) -> Result<()> {
        if self.x >= n || self.y >= n || !self.z.is_subset(VertexSet::full(n)) {
            return Err(Error::invalid(format!(
                "CI query ({}, {} | {:?}) out of range for {n} variables",
                self.x, self.y, self.z
            )));
        }
        Ok(())
    }
}

/// Result of an exact separability decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Separability {
    Separable(VertexSet),
    Inseparable,
}

pub trait CiTester {
    fn num_vars(&self) -> usize;

    /// `true` when the test accepts independence.
    fn test(&self, query: CiQuery) -> Result<bool>;

    /// Number of CI tests answered so far.
    fn query_count(&self) -> u64;

    /// Testers that can decide "separable by some subset of `within`"
    /// directly return `Some`. The default searches.
    fn exact_separability(
        &self,
        _x: VertexId,
        _y: VertexId,
        _within: VertexSet,
    ) -> Option<Result<Separability>> {
        None
    }

    /// Pairwise Markov boundaries within `vs`: `y ∈ Mb(x)` iff `x` and `y`
    /// are dependent given `vs \ {x, y}`.
    fn markov_boundaries(&self, vs: VertexSet) -> Result<MarkovBoundary> {
        let mut mb = MarkovBoundary::empty(self.num_vars(), vs);
        for x in vs {
            for y in vs.iter().filter(|&y| y > x) {
                let rest = vs.without(x).without(y);
                if !self.test(CiQuery { x, y, z: rest })? {
                    mb.link(x, y);
                }
            }
        }
        Ok(mb)
    }
}

impl<T: CiTester + ?Sized> CiTester for &T {
    fn num_vars(&self) -> usize {
        (**self).num_vars()
    }
    fn test(&self, query: CiQuery) -> Result<bool> {
        (**self).test(query)
    }
    fn query_count(&self) -> u64 {
        (**self).query_count()
    }
    fn exact_separability(
        &self,
        x: VertexId,
        y: VertexId,
        within: VertexSet,
    ) -> Option<Result<Separability>> {
        (**self).exact_separability(x, y, within)
    }
    fn markov_boundaries(&self, vs: VertexSet) -> Result<MarkovBoundary> {
        (**self).markov_boundaries(vs)
    }
}

/// Monotone, thread-safe query counter.
#[derive(Debug, Default)]
pub struct QueryCounter(AtomicU64);

impl QueryCounter {
    pub fn add(&self, k: u64) {
        self.0.fetch_add(k, Ordering::Relaxed);
    }

    pub fn get(&self) -> u64 {
        self.0.load(Ordering::Relaxed)
    }
}

/// Per-vertex Markov boundaries over a vertex set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkovBoundary {
    within: VertexSet,
    sets: Vec<VertexSet>,
}

impl MarkovBoundary {
    pub fn empty(n: usize, within: VertexSet) -> Self {
        MarkovBoundary {
            within,
            sets: vec![VertexSet::EMPTY; n],
        }
    }

    pub fn from_sets(within: VertexSet, sets: Vec<VertexSet>) -> Self {
        MarkovBoundary { within, sets }
    }

    pub fn link(&mut self, x: VertexId, y: VertexId) {
        self.sets[x].insert(y);
        self.sets[y].insert(x);
    }

    pub fn within(&self) -> VertexSet {
        self.within
    }

    pub fn of(&self, x: VertexId) -> VertexSet {
        self.sets[x]
    }

    pub fn is_symmetric(&self) -> bool {
        self.within
            .iter()
            .all(|x| self.sets[x].iter().all(|y| self.sets[y].contains(x)))
    }

    /// Makes `y ∈ Mb(x) ⟺ x ∈ Mb(y)` by taking unions.
    pub fn symmetrize(&mut self) {
        for x in self.within {
            for y in self.sets[x] {
                self.sets[y].insert(x);
            }
        }
    }
}

/// Markov boundaries of every vertex in `vs`, symmetrized by union.
pub fn markov_boundaries<T: CiTester + ?Sized>(
    tester: &T,
    vs: VertexSet,
) -> Result<MarkovBoundary> {
    if !vs.is_subset(VertexSet::full(tester.num_vars())) {
        return Err(Error::invalid(format!(
            "vertex set {vs:?} outside tester range"
        )));
    }
    let mut mb = tester.markov_boundaries(vs)?;
    mb.symmetrize();
    Ok(mb)
}
