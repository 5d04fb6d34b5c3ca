//! Mixed graphs with directed and bidirected edges.
//!
//! A [`MixedGraph`] is immutable once built. Directed edges are stored as
//! parent/child bitmasks and bidirected edges as spouse bitmasks, so most
//! queries reduce to a handful of word operations.

mod projection;
mod separation;

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result, VertexId, VertexSet, MAX_VERTICES};

pub use projection::{
    is_markov_equivalent, is_removable, is_removable_exhaustive, latent_projection,
};
pub use separation::{m_separated, m_separated_by_paths};

pub(crate) use projection::{
    removable_exhaustive_within, removable_within, separable_within, separating_candidate,
};
pub(crate) use separation::m_connected;

/// Mark at one end of an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mark {
    Tail,
    Arrow,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MixedGraph {
    n: usize,
    parents: Vec<VertexSet>,
    children: Vec<VertexSet>,
    spouses: Vec<VertexSet>,
}

impl core::fmt::Debug for MixedGraph {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let mut d = f.debug_struct("MixedGraph");
        d.field("n", &self.n);
        d.field("directed", &self.directed_edges().collect::<Vec<_>>());
        d.field("bidirected", &self.bidirected_edges().collect::<Vec<_>>());
        d.finish()
    }
}

/// Incremental, validating constructor for [`MixedGraph`].
#[derive(Debug, Clone)]
pub struct GraphBuilder {
    g: MixedGraph,
}

impl GraphBuilder {
    pub fn new(n: usize) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::Capacity {
                what: "vertex count",
                n,
                cap: MAX_VERTICES,
            });
        }
        Ok(GraphBuilder {
            g: MixedGraph {
                n,
                parents: vec![VertexSet::EMPTY; n],
                children: vec![VertexSet::EMPTY; n],
                spouses: vec![VertexSet::EMPTY; n],
            },
        })
    }

    fn check_pair(&self, a: VertexId, b: VertexId) -> Result<()> {
        if a >= self.g.n || b >= self.g.n {
            return Err(Error::invalid(format!(
                "edge ({a}, {b}) out of range for n = {}",
                self.g.n
            )));
        }
        if a == b {
            return Err(Error::invalid(format!("self-loop at {a}")));
        }
        if self.g.is_adjacent(a, b) {
            return Err(Error::invalid(format!(
                "pair ({a}, {b}) already has an edge"
            )));
        }
        Ok(())
    }

    /// Adds `parent -> child`.
    pub fn directed(&mut self, parent: VertexId, child: VertexId) -> Result<&mut Self> {
        self.check_pair(parent, child)?;
        self.g.parents[child].insert(parent);
        self.g.children[parent].insert(child);
        Ok(self)
    }

    /// Adds `a <-> b`.
    pub fn bidirected(&mut self, a: VertexId, b: VertexId) -> Result<&mut Self> {
        self.check_pair(a, b)?;
        self.g.spouses[a].insert(b);
        self.g.spouses[b].insert(a);
        Ok(self)
    }

    pub fn build(self) -> MixedGraph {
        self.g
    }
}

impl MixedGraph {
    /// Graph without edges.
    pub fn empty(n: usize) -> Result<Self> {
        Ok(GraphBuilder::new(n)?.build())
    }

    pub fn from_edges(
        n: usize,
        directed: &[(VertexId, VertexId)],
        bidirected: &[(VertexId, VertexId)],
    ) -> Result<Self> {
        let mut b = GraphBuilder::new(n)?;
        for &(p, c) in directed {
            b.directed(p, c)?;
        }
        for &(x, y) in bidirected {
            b.bidirected(x, y)?;
        }
        Ok(b.build())
    }

    /// DAG from directed edges only.
    pub fn dag(n: usize, directed: &[(VertexId, VertexId)]) -> Result<Self> {
        Self::from_edges(n, directed, &[])
    }

    #[inline]
    pub fn num_vertices(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    #[inline]
    pub fn parents(&self, v: VertexId) -> VertexSet {
        self.parents[v]
    }

    #[inline]
    pub fn children(&self, v: VertexId) -> VertexSet {
        self.children[v]
    }

    #[inline]
    pub fn spouses(&self, v: VertexId) -> VertexSet {
        self.spouses[v]
    }

    #[inline]
    pub fn adjacent(&self, v: VertexId) -> VertexSet {
        self.parents[v] | self.children[v] | self.spouses[v]
    }

    #[inline]
    pub fn is_adjacent(&self, a: VertexId, b: VertexId) -> bool {
        self.adjacent(a).contains(b)
    }

    /// Mark at `at` on the edge between `other` and `at`, if any.
    pub fn mark_at(&self, other: VertexId, at: VertexId) -> Option<Mark> {
        if self.parents[at].contains(other) || self.spouses[at].contains(other) {
            Some(Mark::Arrow)
        } else if self.children[at].contains(other) {
            Some(Mark::Tail)
        } else {
            None
        }
    }

    /// `(parent, child)` pairs, ordered by parent then child.
    pub fn directed_edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        (0..self.n).flat_map(move |p| self.children[p].iter().map(move |c| (p, c)))
    }

    /// `(a, b)` pairs with `a < b`.
    pub fn bidirected_edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        (0..self.n).flat_map(move |a| {
            self.spouses[a]
                .iter()
                .filter(move |&b| b > a)
                .map(move |b| (a, b))
        })
    }

    pub fn num_edges(&self) -> usize {
        self.directed_edges().count() + self.bidirected_edges().count()
    }

    pub fn has_bidirected(&self) -> bool {
        self.spouses.iter().any(|s| !s.is_empty())
    }

    pub(crate) fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v >= self.n {
            Err(Error::invalid(format!(
                "vertex {v} out of range for n = {}",
                self.n
            )))
        } else {
            Ok(())
        }
    }

    pub(crate) fn check_set(&self, s: VertexSet) -> Result<()> {
        if s.is_subset(self.vertices()) {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "vertex set {s:?} not contained in [0, {})",
                self.n
            )))
        }
    }

    /// Ancestors of `xs` (including `xs`) along directed edges.
    pub fn ancestors(&self, xs: VertexSet) -> Result<VertexSet> {
        self.check_set(xs)?;
        Ok(self.ancestors_within(xs, self.vertices()))
    }

    /// Ancestors in the induced subgraph over `active`.
    pub(crate) fn ancestors_within(&self, xs: VertexSet, active: VertexSet) -> VertexSet {
        let mut result = xs & active;
        let mut frontier = result;
        while !frontier.is_empty() {
            let mut next = VertexSet::EMPTY;
            for v in frontier {
                next |= self.parents[v];
            }
            next = (next & active) - result;
            result |= next;
            frontier = next;
        }
        result
    }

    /// Per-vertex ancestor sets, each including the vertex itself.
    pub fn ancestor_table(&self) -> Vec<VertexSet> {
        (0..self.n)
            .map(|v| self.ancestors_within(VertexSet::singleton(v), self.vertices()))
            .collect()
    }

    /// No directed cycle: no edge `a -> b` with `b` an ancestor of `a`.
    pub fn is_acyclic(&self) -> bool {
        let anc = self.ancestor_table();
        self.directed_edges().all(|(a, b)| !anc[a].contains(b))
    }

    /// No directed and no almost-directed cycle.
    pub fn is_ancestral(&self) -> bool {
        self.ancestral_violation().is_none()
    }

    pub(crate) fn ancestral_violation(&self) -> Option<alloc::string::String> {
        let anc = self.ancestor_table();
        if let Some((a, b)) = self.directed_edges().find(|&(a, b)| anc[a].contains(b)) {
            return Some(format!("directed cycle through {a} -> {b}"));
        }
        if let Some((a, b)) = self
            .bidirected_edges()
            .find(|&(a, b)| anc[a].contains(b) || anc[b].contains(a))
        {
            return Some(format!("almost directed cycle through {a} <-> {b}"));
        }
        None
    }

    /// Every non-adjacent pair is m-separable. Requires an ancestral graph.
    ///
    /// Uses the fact that, in an ancestral graph, a non-adjacent pair is
    /// separable iff it is separated by the rest of its ancestral set.
    pub fn is_maximal(&self) -> Result<bool> {
        if let Some(why) = self.ancestral_violation() {
            return Err(Error::NotAncestral(why));
        }
        let all = self.vertices();
        for x in 0..self.n {
            for y in x + 1..self.n {
                if !self.is_adjacent(x, y) && !separable_within(self, x, y, all, all) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn is_mag(&self) -> bool {
        self.is_ancestral() && self.is_maximal().unwrap_or(false)
    }

    pub fn is_dag(&self) -> bool {
        !self.has_bidirected() && self.is_acyclic()
    }

    /// Reverse-topological positions are any c-order; this returns a
    /// topological order (parents first), or `None` if cyclic.
    pub fn topological_order(&self) -> Option<Vec<VertexId>> {
        let mut indeg: Vec<usize> = (0..self.n).map(|v| self.parents[v].len()).collect();
        let mut ready: Vec<VertexId> = (0..self.n).filter(|&v| indeg[v] == 0).rev().collect();
        let mut out = Vec::with_capacity(self.n);
        while let Some(v) = ready.pop() {
            out.push(v);
            for c in self.children[v].iter().rev() {
                indeg[c] -= 1;
                if indeg[c] == 0 {
                    ready.push(c);
                }
            }
        }
        (out.len() == self.n).then_some(out)
    }

    pub fn skeleton(&self) -> Skeleton {
        let mut s = Skeleton::new(self.n);
        for v in 0..self.n {
            s.adj[v] = self.adjacent(v);
        }
        s
    }

    /// Subgraph over `keep`, re-indexed densely in ascending original order.
    pub fn induced_subgraph(&self, keep: VertexSet) -> Result<MappedGraph> {
        self.check_set(keep)?;
        let vertices: Vec<VertexId> = keep.iter().collect();
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let mut b = GraphBuilder::new(vertices.len())?;
        for (p, c) in self.directed_edges() {
            if keep.contains(p) && keep.contains(c) {
                b.directed(index[p], index[c])?;
            }
        }
        for (x, y) in self.bidirected_edges() {
            if keep.contains(x) && keep.contains(y) {
                b.bidirected(index[x], index[y])?;
            }
        }
        Ok(MappedGraph {
            graph: b.build(),
            vertices,
        })
    }
}

/// A graph over a subset of another graph's vertices. `vertices[i]` is the
/// original id of local vertex `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappedGraph {
    pub graph: MixedGraph,
    pub vertices: Vec<VertexId>,
}

impl MappedGraph {
    pub fn original(&self, local: VertexId) -> VertexId {
        self.vertices[local]
    }

    pub fn local(&self, original: VertexId) -> Option<VertexId> {
        self.vertices.iter().position(|&v| v == original)
    }
}

/// Undirected edge set over `n` vertices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Skeleton {
    adj: Vec<VertexSet>,
}

impl core::fmt::Debug for Skeleton {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_set().entries(self.edges()).finish()
    }
}

impl Skeleton {
    pub fn new(n: usize) -> Self {
        Skeleton {
            adj: vec![VertexSet::EMPTY; n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(VertexId, VertexId)]) -> Result<Self> {
        let mut s = Skeleton::new(n);
        for &(a, b) in edges {
            if a >= n || b >= n || a == b {
                return Err(Error::invalid(format!("bad skeleton edge ({a}, {b})")));
            }
            s.add_edge(a, b);
        }
        Ok(s)
    }

    pub fn num_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn add_edge(&mut self, a: VertexId, b: VertexId) {
        self.adj[a].insert(b);
        self.adj[b].insert(a);
    }

    pub fn contains(&self, a: VertexId, b: VertexId) -> bool {
        self.adj[a].contains(b)
    }

    pub fn neighbors(&self, v: VertexId) -> VertexSet {
        self.adj[v]
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(|s| s.len()).sum::<usize>() / 2
    }

    /// `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(a, s)| s.iter().filter(move |&b| b > a).map(move |b| (a, b)))
    }

    pub fn is_superset_of(&self, other: &Skeleton) -> bool {
        self.adj.len() == other.adj.len()
            && self
                .adj
                .iter()
                .zip(&other.adj)
                .all(|(mine, theirs)| theirs.is_subset(*mine))
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// Four-vertex DAG with X3, X4 -> X1, X2 and X2 -> X1 (0-based: 0..4).
    pub fn g1() -> MixedGraph {
        MixedGraph::dag(4, &[(2, 1), (2, 0), (3, 1), (3, 0), (1, 0)]).unwrap()
    }

    /// Same as [`g1`] with the X1/X2 edge reversed.
    pub fn g2() -> MixedGraph {
        MixedGraph::dag(4, &[(2, 1), (2, 0), (3, 1), (3, 0), (0, 1)]).unwrap()
    }

    pub fn chain3() -> MixedGraph {
        MixedGraph::dag(3, &[(0, 1), (1, 2)]).unwrap()
    }

    pub fn collider3() -> MixedGraph {
        MixedGraph::dag(3, &[(0, 1), (2, 1)]).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    fn set(v: &[usize]) -> VertexSet {
        v.iter().copied().collect()
    }

    #[test]
    fn builder_rejects_invalid_edges() {
        let mut b = GraphBuilder::new(3).unwrap();
        assert!(b.directed(0, 0).is_err());
        assert!(b.directed(0, 3).is_err());
        b.directed(0, 1).unwrap();
        assert!(b.directed(1, 0).is_err());
        assert!(b.bidirected(0, 1).is_err());
        assert!(b.directed(0, 1).is_err());
        assert!(GraphBuilder::new(MAX_VERTICES + 1).is_err());
    }

    #[test]
    fn induced_subgraph_examples() {
        let sub = g1().induced_subgraph(set(&[0, 1, 3])).unwrap();
        assert_eq!(sub.vertices, alloc::vec![0, 1, 3]);
        let edges: Vec<_> = sub
            .graph
            .directed_edges()
            .map(|(p, c)| (sub.original(p), sub.original(c)))
            .collect();
        assert_eq!(edges, alloc::vec![(1, 0), (3, 0), (3, 1)]);

        let same = g1().induced_subgraph(g1().vertices()).unwrap();
        assert_eq!(same.graph, g1());

        let sub = chain3().induced_subgraph(set(&[0, 2])).unwrap();
        assert_eq!(sub.graph.num_vertices(), 2);
        assert_eq!(sub.graph.num_edges(), 0);

        assert!(chain3().induced_subgraph(set(&[0, 5])).is_err());
    }

    #[test]
    fn ancestors_examples() {
        assert_eq!(g1().ancestors(set(&[0])).unwrap(), set(&[0, 1, 2, 3]));
        assert_eq!(g1().ancestors(VertexSet::EMPTY).unwrap(), VertexSet::EMPTY);
        assert_eq!(chain3().ancestors(set(&[1])).unwrap(), set(&[0, 1]));
        assert!(chain3().ancestors(set(&[7])).is_err());
    }

    #[test]
    fn ancestral_and_maximal_flags() {
        assert!(g1().is_mag());
        let cyc = MixedGraph::dag(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(!cyc.is_ancestral());
        assert!(cyc.is_maximal().is_err());
        let almost = MixedGraph::from_edges(3, &[(0, 1), (1, 2)], &[(0, 2)]).unwrap();
        assert!(!almost.is_ancestral());
        // x <-> a <-> b <-> y with a -> y and b -> x: inducing path, no edge.
        let nonmax =
            MixedGraph::from_edges(4, &[(2, 1), (3, 0)], &[(0, 2), (2, 3), (3, 1)]).unwrap();
        assert!(nonmax.is_ancestral());
        assert!(!nonmax.is_maximal().unwrap());
    }

    #[test]
    fn topological_order_and_skeleton() {
        let order = g1().topological_order().unwrap();
        let pos = |v| order.iter().position(|&x| x == v).unwrap();
        for (p, c) in g1().directed_edges() {
            assert!(pos(p) < pos(c));
        }
        assert_eq!(g1().skeleton().num_edges(), 5);
        assert!(!g1().skeleton().is_superset_of(&chain3().skeleton()));
    }
}
