//! From an order to a graph.
//!
//! Eliminating the vertices of an order `π` one at a time, each eliminated
//! vertex is joined to every remaining vertex it cannot be separated from
//! using remaining vertices only. The result `G^π` is a supergraph of the
//! true skeleton, with equality exactly for removable orders; its edge count
//! is the cost minimized by the searchers. [`orient`] then turns a skeleton
//! and its separating sets into a partial ancestral graph.

mod orient;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::ci::{markov_boundaries, CiQuery, CiTester, MarkovBoundary, Separability};
use crate::graph::Skeleton;
use crate::orders::Order;
use crate::{Error, Result, VertexId, VertexSet};

pub use orient::{orient, orient_skeleton, EndMark, PagGraph};

/// Pair outcomes beyond this many are recomputed instead of cached, which
/// bounds memory for exhaustive sweeps over all subsets.
const PAIR_CACHE_CAP: usize = 1 << 22;

/// Neighbors of one vertex within a remaining set, plus the separating set
/// found for every rejected candidate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborResult {
    pub neighbors: VertexSet,
    pub sepsets: BTreeMap<VertexId, VertexSet>,
}

/// Separating sets keyed by unordered vertex pair.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SepSetTable(BTreeMap<(VertexId, VertexId), VertexSet>);

fn pair(a: VertexId, b: VertexId) -> (VertexId, VertexId) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

impl SepSetTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, a: VertexId, b: VertexId, z: VertexSet) {
        self.0.insert(pair(a, b), z);
    }

    pub fn get(&self, a: VertexId, b: VertexId) -> Option<VertexSet> {
        self.0.get(&pair(a, b)).copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `((a, b), z)` with `a < b`, sorted by pair.
    pub fn iter(&self) -> impl Iterator<Item = ((VertexId, VertexId), VertexSet)> + '_ {
        self.0.iter().map(|(&k, &v)| (k, v))
    }
}

/// Per-position neighbor counts `C(t)`; positions not evaluated hold 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostVector(Vec<usize>);

impl CostVector {
    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// Sum over positions `a..=b`.
    pub fn range_sum(&self, a: usize, b: usize) -> usize {
        self.0[a..=b].iter().sum()
    }
}

/// Output of eliminating an order: `G^π`, its separating sets and the cost
/// contributed by each position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkeletonResult {
    pub order: Order,
    pub skeleton: Skeleton,
    pub sepsets: SepSetTable,
    pub counts: Vec<usize>,
}

impl SkeletonResult {
    pub fn cost(&self) -> usize {
        self.counts.iter().sum()
    }
}

/// Memoized neighbor search against one tester.
///
/// Pairwise outcomes are cached by `(pair, remaining set)` and Markov
/// boundaries by remaining set, so repeated cost evaluations from any
/// searcher reuse earlier CI queries.
///
/// Testers with an exact separability shortcut (the graph oracle) answer
/// each pair with one query. Otherwise candidates are screened with the
/// Markov boundaries of the remaining set, and pairs that survive are tested
/// against subsets of `Mb(x) ∪ Mb(y)` in ascending size, then lexicographic
/// order, up to `max_sep_size`. The first separating set found is kept.
pub struct NeighborSearch<T> {
    tester: T,
    max_sep_size: Option<usize>,
    pairs: HashMap<(VertexSet, VertexId, VertexId), Option<VertexSet>>,
    boundaries: HashMap<VertexSet, MarkovBoundary>,
}

impl<T: CiTester> NeighborSearch<T> {
    pub fn new(tester: T) -> Self {
        NeighborSearch {
            tester,
            max_sep_size: None,
            pairs: HashMap::new(),
            boundaries: HashMap::new(),
        }
    }

    /// Caps the size of conditioning sets tried by the subset search.
    pub fn with_max_sep_size(mut self, max: Option<usize>) -> Self {
        self.max_sep_size = max;
        self
    }

    pub fn tester(&self) -> &T {
        &self.tester
    }

    pub fn num_vars(&self) -> usize {
        self.tester.num_vars()
    }

    pub fn query_count(&self) -> u64 {
        self.tester.query_count()
    }

    /// Markov boundaries within `vs`, cached.
    pub fn markov_boundary(&mut self, vs: VertexSet) -> Result<&MarkovBoundary> {
        if !self.boundaries.contains_key(&vs) {
            let mb = markov_boundaries(&self.tester, vs)?;
            self.boundaries.insert(vs, mb);
        }
        Ok(&self.boundaries[&vs])
    }

    /// A set separating `x` and `y` using vertices of `remaining` only, or
    /// `None` if they are inseparable there.
    pub fn separating_set(
        &mut self,
        x: VertexId,
        y: VertexId,
        remaining: VertexSet,
    ) -> Result<Option<VertexSet>> {
        let (a, b) = pair(x, y);
        if let Some(&hit) = self.pairs.get(&(remaining, a, b)) {
            return Ok(hit);
        }
        let within = remaining.without(a).without(b);
        let found = match self.tester.exact_separability(a, b, within) {
            Some(r) => match r? {
                Separability::Separable(z) => Some(z),
                Separability::Inseparable => None,
            },
            None => self.search_separating_set(a, b, remaining)?,
        };
        if self.pairs.len() < PAIR_CACHE_CAP {
            self.pairs.insert((remaining, a, b), found);
        }
        Ok(found)
    }

    fn search_separating_set(
        &mut self,
        a: VertexId,
        b: VertexId,
        remaining: VertexSet,
    ) -> Result<Option<VertexSet>> {
        let within = remaining.without(a).without(b);
        let mb = self.markov_boundary(remaining)?;
        if !mb.of(a).contains(b) {
            // the full-conditioning test already accepted independence
            return Ok(Some(within));
        }
        let candidates = (mb.of(a) | mb.of(b)) & within;
        let largest = self
            .max_sep_size
            .map_or(candidates.len(), |m| m.min(candidates.len()));
        for k in 0..=largest {
            for z in candidates.subsets_of_size(k) {
                if z == within {
                    // known dependent from the boundary test
                    continue;
                }
                if self.tester.test(CiQuery { x: a, y: b, z })? {
                    return Ok(Some(z));
                }
            }
        }
        Ok(None)
    }

    fn check(&self, x: VertexId, remaining: VertexSet) -> Result<()> {
        let n = self.num_vars();
        if !remaining.is_subset(VertexSet::full(n)) {
            return Err(Error::invalid(format!(
                "remaining set {remaining:?} out of range"
            )));
        }
        if !remaining.contains(x) {
            return Err(Error::invalid(format!(
                "vertex {x} not in remaining set {remaining:?}"
            )));
        }
        Ok(())
    }

    /// Vertices of `remaining` that `x` cannot be separated from within it.
    pub fn find_neighbors(&mut self, x: VertexId, remaining: VertexSet) -> Result<NeighborResult> {
        self.check(x, remaining)?;
        let mut out = NeighborResult {
            neighbors: VertexSet::EMPTY,
            sepsets: BTreeMap::new(),
        };
        for y in remaining.without(x) {
            match self.separating_set(x, y, remaining)? {
                Some(z) => {
                    out.sepsets.insert(y, z);
                }
                None => out.neighbors.insert(y),
            }
        }
        Ok(out)
    }

    /// `|find_neighbors(x, remaining)|`.
    pub fn neighbor_count(&mut self, x: VertexId, remaining: VertexSet) -> Result<usize> {
        self.check(x, remaining)?;
        let mut count = 0;
        for y in remaining.without(x) {
            if self.separating_set(x, y, remaining)?.is_none() {
                count += 1;
            }
        }
        Ok(count)
    }

    fn check_order(&self, pi: &Order) -> Result<()> {
        if pi.len() != self.num_vars() {
            return Err(Error::invalid(format!(
                "order has {} vertices, tester has {}",
                pi.len(),
                self.num_vars()
            )));
        }
        Ok(())
    }

    /// Eliminates `pi` front to back, building `G^π`.
    pub fn learn_g_pi(&mut self, pi: &Order) -> Result<SkeletonResult> {
        self.check_order(pi)?;
        let n = pi.len();
        let mut skeleton = Skeleton::new(n);
        let mut sepsets = SepSetTable::new();
        let mut counts = vec![0; n];
        for t in 0..n.saturating_sub(1) {
            let x = pi[t];
            let found = self.find_neighbors(x, pi.suffix(t))?;
            for y in found.neighbors {
                skeleton.add_edge(x, y);
            }
            for (y, z) in found.sepsets {
                sepsets.insert(x, y, z);
            }
            counts[t] = found.neighbors.len();
        }
        Ok(SkeletonResult {
            order: pi.clone(),
            skeleton,
            sepsets,
            counts,
        })
    }

    /// Cost entries for positions `a..=b` (0-based); other entries are 0.
    pub fn cost_range(&mut self, pi: &Order, a: usize, b: usize) -> Result<CostVector> {
        self.check_order(pi)?;
        let n = pi.len();
        if a > b || b >= n {
            return Err(Error::invalid(format!(
                "bad cost range {a}..={b} for {n} positions"
            )));
        }
        let mut c = vec![0; n];
        for t in a..=b.min(n.saturating_sub(2)) {
            c[t] = self.neighbor_count(pi[t], pi.suffix(t))?;
        }
        Ok(CostVector(c))
    }

    /// Total cost `|E^π|`.
    pub fn cost(&mut self, pi: &Order) -> Result<usize> {
        if pi.is_empty() {
            self.check_order(pi)?;
            return Ok(0);
        }
        Ok(self.cost_range(pi, 0, pi.len() - 1)?.total())
    }
}

/// One-shot [`NeighborSearch::find_neighbors`].
pub fn find_neighbors<T: CiTester>(
    x: VertexId,
    remaining: VertexSet,
    tester: &T,
    max_sep_size: Option<usize>,
) -> Result<NeighborResult> {
    NeighborSearch::new(tester)
        .with_max_sep_size(max_sep_size)
        .find_neighbors(x, remaining)
}

/// One-shot [`NeighborSearch::learn_g_pi`].
pub fn learn_g_pi<T: CiTester>(pi: &Order, tester: &T) -> Result<SkeletonResult> {
    NeighborSearch::new(tester).learn_g_pi(pi)
}

/// One-shot [`NeighborSearch::cost_range`].
pub fn compute_cost_range<T: CiTester>(
    pi: &Order,
    a: usize,
    b: usize,
    tester: &T,
) -> Result<CostVector> {
    NeighborSearch::new(tester).cost_range(pi, a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ci::OracleTester;
    use crate::graph::fixtures::*;

    fn set(v: &[usize]) -> VertexSet {
        v.iter().copied().collect()
    }

    fn order(v: &[usize]) -> Order {
        Order::new(v.to_vec()).unwrap()
    }

    #[test]
    fn neighbor_examples() {
        let t = OracleTester::new(g1()).unwrap();
        let r = find_neighbors(2, VertexSet::full(4), &t, None).unwrap();
        assert_eq!(r.neighbors, set(&[0, 1]));
        assert_eq!(r.sepsets.get(&3), Some(&VertexSet::EMPTY));

        let t = OracleTester::new(chain3()).unwrap();
        let r = find_neighbors(1, VertexSet::full(3), &t, None).unwrap();
        assert_eq!(r.neighbors, set(&[0, 2]));
        assert!(r.sepsets.is_empty());

        let r = find_neighbors(1, set(&[1]), &t, None).unwrap();
        assert!(r.neighbors.is_empty());
        assert!(find_neighbors(1, set(&[0]), &t, None).is_err());
    }

    #[test]
    fn learn_g_pi_examples() {
        let t = OracleTester::new(g1()).unwrap();
        let r = learn_g_pi(&order(&[0, 1, 2, 3]), &t).unwrap();
        assert_eq!(r.skeleton, g1().skeleton());
        assert_eq!(r.cost(), 5);

        let t = OracleTester::new(chain3()).unwrap();
        let r = learn_g_pi(&order(&[1, 0, 2]), &t).unwrap();
        assert_eq!(r.cost(), 3);
        assert!(r.skeleton.contains(0, 2));
        let r = learn_g_pi(&order(&[2, 1, 0]), &t).unwrap();
        assert_eq!(r.cost(), 2);
        assert_eq!(r.skeleton, chain3().skeleton());
        assert_eq!(r.sepsets.get(0, 2), Some(set(&[1])));
    }

    #[test]
    fn cost_range_examples() {
        let t = OracleTester::new(chain3()).unwrap();
        let pi = order(&[2, 1, 0]);
        let c = compute_cost_range(&pi, 0, 2, &t).unwrap();
        assert_eq!(c.as_slice(), [1, 1, 0]);
        assert_eq!(c.total(), 2);
        assert_eq!(compute_cost_range(&pi, 2, 2, &t).unwrap().total(), 0);
        let c = compute_cost_range(&pi, 1, 1, &t).unwrap();
        assert_eq!(c.as_slice(), [0, 1, 0]);
        assert!(compute_cost_range(&pi, 2, 1, &t).is_err());
        assert!(compute_cost_range(&pi, 0, 3, &t).is_err());

        let t = OracleTester::new(g1()).unwrap();
        let mut s = NeighborSearch::new(&t);
        for pi in crate::orders::all_orders(4) {
            assert_eq!(s.cost(&pi).unwrap(), 5);
        }
    }

    #[test]
    fn memoization_saves_queries() {
        let t = OracleTester::new(g1()).unwrap();
        let mut s = NeighborSearch::new(&t);
        let pi = order(&[0, 1, 2, 3]);
        s.cost(&pi).unwrap();
        let q = t.query_count();
        s.cost(&pi).unwrap();
        assert_eq!(t.query_count(), q);
    }
}
