//! Orders over the vertex set, the causal-order and removable-order
//! predicates, and exhaustive enumeration oracles.
//!
//! Convention: in a causal order (c-order) every child comes *before* its
//! parents. Eliminating vertices front to back then always removes a vertex
//! that has no children among the remaining ones.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use hashbrown::HashMap;

use crate::graph::{self, GraphBuilder, MixedGraph};
use crate::{Error, Result, VertexId, VertexSet};

/// Default cap for factorial-time enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 8;

/// A permutation of `0..n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Order(Vec<VertexId>);

pub type OrderSet = BTreeSet<Order>;

impl Order {
    pub fn new(sequence: Vec<VertexId>) -> Result<Self> {
        let n = sequence.len();
        let mut seen = VertexSet::EMPTY;
        for &v in &sequence {
            if v >= n || seen.contains(v) {
                return Err(Error::invalid(format!(
                    "{sequence:?} is not a permutation of 0..{n}"
                )));
            }
            seen.insert(v);
        }
        Ok(Order(sequence))
    }

    pub fn identity(n: usize) -> Self {
        Order((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[VertexId] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<VertexId> {
        self.0
    }

    /// `position[v]` is the index of `v` in the order.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = alloc::vec![0; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            pos[v] = i;
        }
        pos
    }

    /// Vertices at positions `t..`.
    pub fn suffix(&self, t: usize) -> VertexSet {
        self.0[t..].iter().copied().collect()
    }

    /// Transposes positions `a` and `b`.
    #[must_use]
    pub fn swapped(&self, a: usize, b: usize) -> Order {
        let mut v = self.0.clone();
        v.swap(a, b);
        Order(v)
    }

    /// Applies a vertex relabeling: vertex `v` becomes `map[v]`.
    #[must_use]
    pub fn relabeled(&self, map: &[VertexId]) -> Order {
        Order(self.0.iter().map(|&v| map[v]).collect())
    }
}

impl core::ops::Index<usize> for Order {
    type Output = VertexId;
    fn index(&self, i: usize) -> &VertexId {
        &self.0[i]
    }
}

impl fmt::Debug for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Order({self})")
    }
}

/// Comma-separated indices.
impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

fn check_order(g: &MixedGraph, pi: &Order) -> Result<()> {
    if pi.len() != g.num_vertices() {
        return Err(Error::invalid(format!(
            "order of length {} for a graph with {} vertices",
            pi.len(),
            g.num_vertices()
        )));
    }
    Ok(())
}

/// Every directed edge points from a later position to an earlier one.
pub fn is_c_order(g: &MixedGraph, pi: &Order) -> Result<bool> {
    check_order(g, pi)?;
    if g.has_bidirected() {
        return Err(Error::invalid("c-orders are defined for DAGs only"));
    }
    let pos = pi.positions();
    Ok(g.directed_edges().all(|(p, c)| pos[p] > pos[c]))
}

/// Each `pi[t]` is removable in the subgraph induced by `pi[t..]`.
pub fn is_r_order(g: &MixedGraph, pi: &Order) -> Result<bool> {
    check_order(g, pi)?;
    if let Some(why) = g.ancestral_violation() {
        return Err(Error::NotAncestral(why));
    }
    let mut remaining = g.vertices();
    for &x in pi.as_slice() {
        if !graph::removable_within(g, x, remaining) {
            return Ok(false);
        }
        remaining.remove(x);
    }
    Ok(true)
}

/// All permutations of `0..n` in lexicographic order.
pub fn all_orders(n: usize) -> impl Iterator<Item = Order> {
    let mut next: Option<Vec<VertexId>> = Some((0..n).collect());
    core::iter::from_fn(move || {
        let cur = next.take()?;
        let mut succ = cur.clone();
        if next_permutation(&mut succ) {
            next = Some(succ);
        }
        Some(Order(cur))
    })
}

fn next_permutation(v: &mut [VertexId]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

fn check_cap(g: &MixedGraph, cap: usize, what: &'static str) -> Result<()> {
    if g.num_vertices() > cap {
        Err(Error::Capacity {
            what,
            n: g.num_vertices(),
            cap,
        })
    } else {
        Ok(())
    }
}

pub fn enumerate_c_orders(g: &MixedGraph) -> Result<OrderSet> {
    enumerate_c_orders_capped(g, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_c_orders_capped(g: &MixedGraph, cap: usize) -> Result<OrderSet> {
    check_cap(g, cap, "c-order enumeration")?;
    if g.has_bidirected() {
        return Err(Error::invalid("c-orders are defined for DAGs only"));
    }
    let mut out = OrderSet::new();
    let mut prefix = Vec::with_capacity(g.num_vertices());
    extend_orders(g.vertices(), &mut prefix, &mut out, &mut |x, rest| {
        !g.children(x).intersects(rest)
    });
    Ok(out)
}

pub fn enumerate_r_orders(g: &MixedGraph) -> Result<OrderSet> {
    enumerate_r_orders_capped(g, DEFAULT_ENUMERATION_CAP)
}

/// Enumerates removable orders using the definition-level (exhaustive)
/// removability check, memoized per remaining set.
pub fn enumerate_r_orders_capped(g: &MixedGraph, cap: usize) -> Result<OrderSet> {
    check_cap(g, cap, "r-order enumeration")?;
    if let Some(why) = g.ancestral_violation() {
        return Err(Error::NotAncestral(why));
    }
    let mut memo: HashMap<(VertexSet, VertexId), bool> = HashMap::new();
    let mut out = OrderSet::new();
    let mut prefix = Vec::with_capacity(g.num_vertices());
    extend_orders(g.vertices(), &mut prefix, &mut out, &mut |x, rest| {
        let active = rest.with(x);
        *memo
            .entry((active, x))
            .or_insert_with(|| graph::removable_exhaustive_within(g, x, active))
    });
    Ok(out)
}

/// Depth-first extension: `allowed(x, remaining \ {x})` decides whether `x`
/// may come next.
fn extend_orders(
    remaining: VertexSet,
    prefix: &mut Vec<VertexId>,
    out: &mut OrderSet,
    allowed: &mut impl FnMut(VertexId, VertexSet) -> bool,
) {
    if remaining.is_empty() {
        out.insert(Order(prefix.clone()));
        return;
    }
    for x in remaining {
        let rest = remaining.without(x);
        if allowed(x, rest) {
            prefix.push(x);
            extend_orders(rest, prefix, out, allowed);
            prefix.pop();
        }
    }
}

/// All DAGs Markov equivalent to `g`, found by trying every orientation of
/// its skeleton and keeping the acyclic ones that pass the brute-force
/// equivalence check.
pub fn markov_equivalent_dags(g: &MixedGraph) -> Result<Vec<MixedGraph>> {
    if !g.is_dag() {
        return Err(Error::invalid("expected a DAG"));
    }
    let edges: Vec<_> = g.skeleton().edges().collect();
    if edges.len() > 20 {
        return Err(Error::Capacity {
            what: "orientation search (edges)",
            n: edges.len(),
            cap: 20,
        });
    }
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << edges.len()) {
        let mut b = GraphBuilder::new(g.num_vertices())?;
        for (i, &(a, c)) in edges.iter().enumerate() {
            if mask & (1 << i) == 0 {
                b.directed(a, c)?;
            } else {
                b.directed(c, a)?;
            }
        }
        let cand = b.build();
        if cand.is_acyclic() && graph::is_markov_equivalent(g, &cand)? {
            out.push(cand);
        }
    }
    Ok(out)
}

/// All MAGs Markov equivalent to `g`: every assignment of `->`, `<-`, `<->`
/// to the skeleton edges that is ancestral, maximal and equivalent.
pub fn markov_equivalent_mags(g: &MixedGraph) -> Result<Vec<MixedGraph>> {
    if !g.is_mag() {
        return Err(Error::invalid("expected a MAG"));
    }
    let edges: Vec<_> = g.skeleton().edges().collect();
    if edges.len() > 11 {
        return Err(Error::Capacity {
            what: "mark search (edges)",
            n: edges.len(),
            cap: 11,
        });
    }
    let total = 3u32.pow(edges.len() as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut b = GraphBuilder::new(g.num_vertices())?;
        let mut c = code;
        for &(a, d) in &edges {
            match c % 3 {
                0 => b.directed(a, d)?,
                1 => b.directed(d, a)?,
                _ => b.bidirected(a, d)?,
            };
            c /= 3;
        }
        let cand = b.build();
        if cand.is_ancestral() && cand.is_maximal()? && graph::is_markov_equivalent(g, &cand)? {
            out.push(cand);
        }
    }
    Ok(out)
}
