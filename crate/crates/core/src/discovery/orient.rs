//! Orientation of a skeleton with separating sets into a PAG.
//!
//! Unshielded colliders come first; the propagation rules then run to a
//! fixpoint. Without selection bias no undirected edges can occur, so the
//! rules dealing with them are not needed: the set here is R1 to R4 and R8
//! to R10 in the usual numbering. Rules only ever replace circle marks.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::{SepSetTable, SkeletonResult};
use crate::graph::{Mark, MixedGraph, Skeleton};
use crate::{Error, Result, VertexId, VertexSet};

/// Endpoint mark of a PAG edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EndMark {
    Arrow,
    Tail,
    Circle,
}

impl From<Mark> for EndMark {
    fn from(m: Mark) -> Self {
        match m {
            Mark::Arrow => EndMark::Arrow,
            Mark::Tail => EndMark::Tail,
        }
    }
}

/// Partial ancestral graph: `marks[a][b]` is the mark at `b` on edge `a - b`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PagGraph {
    n: usize,
    adj: Vec<VertexSet>,
    marks: Vec<Option<EndMark>>,
}

impl PagGraph {
    /// Every skeleton edge with circles at both ends.
    pub fn from_skeleton(skel: &Skeleton) -> Self {
        let n = skel.num_vertices();
        let mut pag = PagGraph {
            n,
            adj: vec![VertexSet::EMPTY; n],
            marks: vec![None; n * n],
        };
        for (a, b) in skel.edges() {
            pag.add_edge(a, b, EndMark::Circle, EndMark::Circle);
        }
        pag
    }

    /// The marks of a MAG, as a fully oriented PAG.
    pub fn from_mag(g: &MixedGraph) -> Self {
        let n = g.num_vertices();
        let mut pag = PagGraph::from_skeleton(&Skeleton::new(n));
        for (a, b) in g.skeleton().edges() {
            let at_a = g.mark_at(b, a).map(EndMark::from);
            let at_b = g.mark_at(a, b).map(EndMark::from);
            pag.add_edge(
                a,
                b,
                at_a.unwrap_or(EndMark::Circle),
                at_b.unwrap_or(EndMark::Circle),
            );
        }
        pag
    }

    /// Adds `a - b` with the given mark at each end, replacing any edge.
    pub fn add_edge(&mut self, a: VertexId, b: VertexId, at_a: EndMark, at_b: EndMark) {
        self.adj[a].insert(b);
        self.adj[b].insert(a);
        self.marks[b * self.n + a] = Some(at_a);
        self.marks[a * self.n + b] = Some(at_b);
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn adjacent(&self, v: VertexId) -> VertexSet {
        self.adj[v]
    }

    pub fn is_adjacent(&self, a: VertexId, b: VertexId) -> bool {
        self.adj[a].contains(b)
    }

    /// Mark at `at` on the edge between `from` and `at`.
    pub fn mark(&self, from: VertexId, at: VertexId) -> Option<EndMark> {
        self.marks[from * self.n + at]
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(|s| s.len()).sum::<usize>() / 2
    }

    /// `(a, b, mark at a, mark at b)` with `a < b`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId, EndMark, EndMark)> + '_ {
        (0..self.n).flat_map(move |a| {
            self.adj[a].iter().filter(move |&b| b > a).map(move |b| {
                (
                    a,
                    b,
                    self.marks[b * self.n + a].unwrap(),
                    self.marks[a * self.n + b].unwrap(),
                )
            })
        })
    }

    pub fn skeleton(&self) -> Skeleton {
        let mut s = Skeleton::new(self.n);
        for (a, b, _, _) in self.edges() {
            s.add_edge(a, b);
        }
        s
    }

    /// Whether every non-circle mark agrees with the MAG `g`.
    pub fn is_consistent_with(&self, g: &MixedGraph) -> bool {
        g.num_vertices() == self.n
            && g.skeleton() == self.skeleton()
            && self.edges().all(|(a, b, ma, mb)| {
                let ok = |m: EndMark, truth: Option<Mark>| {
                    m == EndMark::Circle || Some(m) == truth.map(EndMark::from)
                };
                ok(ma, g.mark_at(b, a)) && ok(mb, g.mark_at(a, b))
            })
    }

    /// Text lines such as `a o-> b`, one per edge, using `name` for vertices.
    pub fn edge_lines<'a, N: fmt::Display>(
        &'a self,
        name: impl Fn(VertexId) -> N + 'a,
    ) -> impl Iterator<Item = String> + 'a {
        self.edges().map(move |(a, b, ma, mb)| {
            let left = match ma {
                EndMark::Arrow => '<',
                EndMark::Tail => '-',
                EndMark::Circle => 'o',
            };
            let right = match mb {
                EndMark::Arrow => '>',
                EndMark::Tail => '-',
                EndMark::Circle => 'o',
            };
            format!("{} {left}-{right} {}", name(a), name(b))
        })
    }
}

impl fmt::Debug for PagGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.edge_lines(|v| v)).finish()
    }
}

/// Orients the output of an order elimination.
pub fn orient(result: &SkeletonResult) -> Result<PagGraph> {
    orient_skeleton(&result.skeleton, &result.sepsets)
}

/// Orients `skel` using `sepsets`, which must cover every non-adjacent pair
/// the rules consult.
pub fn orient_skeleton(skel: &Skeleton, sepsets: &SepSetTable) -> Result<PagGraph> {
    let mut o = Orienter {
        pag: PagGraph::from_skeleton(skel),
        sepsets,
        trace: Vec::new(),
    };
    o.colliders()?;
    loop {
        let mut changed = false;
        changed |= o.r1()?;
        changed |= o.r2()?;
        changed |= o.r3()?;
        changed |= o.r4()?;
        if changed {
            continue;
        }
        changed |= o.r8()?;
        changed |= o.r9()?;
        changed |= o.r10()?;
        if !changed {
            break;
        }
    }
    Ok(o.pag)
}

use EndMark::{Arrow, Circle, Tail};

struct Orienter<'a> {
    pag: PagGraph,
    sepsets: &'a SepSetTable,
    trace: Vec<String>,
}

impl Orienter<'_> {
    fn n(&self) -> usize {
        self.pag.n
    }

    fn m(&self, from: VertexId, at: VertexId) -> Option<EndMark> {
        self.pag.mark(from, at)
    }

    /// `a *-> b`.
    fn arrow_at(&self, a: VertexId, b: VertexId) -> bool {
        self.m(a, b) == Some(Arrow)
    }

    /// `a -> b`.
    fn directed(&self, a: VertexId, b: VertexId) -> bool {
        self.m(b, a) == Some(Tail) && self.m(a, b) == Some(Arrow)
    }

    fn sepset(&self, a: VertexId, b: VertexId) -> Result<VertexSet> {
        self.sepsets.get(a, b).ok_or_else(|| Error::Inconsistent {
            reason: format!("no separating set recorded for non-adjacent pair ({a}, {b})"),
            trace: self.trace.clone(),
        })
    }

    /// Sets the mark at `at` on edge `from - at`. Returns whether it changed.
    fn set(&mut self, rule: &str, from: VertexId, at: VertexId, mark: EndMark) -> Result<bool> {
        let cur = self.m(from, at).ok_or_else(|| Error::Inconsistent {
            reason: format!("{rule}: no edge {from} - {at}"),
            trace: self.trace.clone(),
        })?;
        if cur == mark {
            return Ok(false);
        }
        if cur != Circle {
            return Err(Error::Inconsistent {
                reason: format!(
                    "{rule}: mark at {at} on {from} - {at} is {cur:?}, rule demands {mark:?}"
                ),
                trace: self.trace.clone(),
            });
        }
        self.pag.marks[from * self.pag.n + at] = Some(mark);
        self.trace
            .push(format!("{rule}: {at} on {from} - {at} := {mark:?}"));
        Ok(true)
    }

    fn colliders(&mut self) -> Result<()> {
        for c in 0..self.n() {
            let adj = self.pag.adjacent(c);
            for a in adj {
                for b in adj.iter().filter(|&b| b > a) {
                    if self.pag.is_adjacent(a, b) {
                        continue;
                    }
                    if !self.sepset(a, b)?.contains(c) {
                        self.set("R0", a, c, Arrow)?;
                        self.set("R0", b, c, Arrow)?;
                    }
                }
            }
        }
        Ok(())
    }

    /// `a *-> b o-* c`, `a`, `c` non-adjacent: `b -> c`.
    fn r1(&mut self) -> Result<bool> {
        let mut changed = false;
        for b in 0..self.n() {
            for a in self.pag.adjacent(b) {
                if !self.arrow_at(a, b) {
                    continue;
                }
                for c in self.pag.adjacent(b) {
                    if c == a || self.pag.is_adjacent(a, c) || self.m(c, b) != Some(Circle) {
                        continue;
                    }
                    changed |= self.set("R1", c, b, Tail)?;
                    changed |= self.set("R1", b, c, Arrow)?;
                }
            }
        }
        Ok(changed)
    }

    /// `a -> b *-> c` or `a *-> b -> c`, and `a *-o c`: `a *-> c`.
    fn r2(&mut self) -> Result<bool> {
        let mut changed = false;
        for a in 0..self.n() {
            for c in self.pag.adjacent(a) {
                if self.m(a, c) != Some(Circle) {
                    continue;
                }
                let via = (self.pag.adjacent(a) & self.pag.adjacent(c))
                    .iter()
                    .any(|b| {
                        (self.directed(a, b) && self.arrow_at(b, c))
                            || (self.arrow_at(a, b) && self.directed(b, c))
                    });
                if via {
                    changed |= self.set("R2", a, c, Arrow)?;
                }
            }
        }
        Ok(changed)
    }

    /// `a *-> b <-* c`, `a *-o d o-* c`, `a`, `c` non-adjacent, `d *-o b`:
    /// `d *-> b`.
    fn r3(&mut self) -> Result<bool> {
        let mut changed = false;
        for b in 0..self.n() {
            for d in self.pag.adjacent(b) {
                if self.m(d, b) != Some(Circle) {
                    continue;
                }
                let parents = self.pag.adjacent(b) & self.pag.adjacent(d);
                let fires = parents.iter().any(|a| {
                    parents.iter().filter(|&c| c > a).any(|c| {
                        !self.pag.is_adjacent(a, c)
                            && self.arrow_at(a, b)
                            && self.arrow_at(c, b)
                            && self.m(a, d) == Some(Circle)
                            && self.m(c, d) == Some(Circle)
                    })
                });
                if fires {
                    changed |= self.set("R3", d, b, Arrow)?;
                }
            }
        }
        Ok(changed)
    }

    /// Discriminating paths.
    fn r4(&mut self) -> Result<bool> {
        let mut changed = false;
        for b in 0..self.n() {
            for c in self.pag.adjacent(b) {
                if self.m(c, b) != Some(Circle) {
                    continue;
                }
                if let Some((a, theta)) = self.discriminating_path(b, c) {
                    if self.sepset(theta, c)?.contains(b) {
                        changed |= self.set("R4", c, b, Tail)?;
                        changed |= self.set("R4", b, c, Arrow)?;
                    } else {
                        changed |= self.set("R4", a, b, Arrow)?;
                        changed |= self.set("R4", c, b, Arrow)?;
                        changed |= self.set("R4", b, c, Arrow)?;
                    }
                }
            }
        }
        Ok(changed)
    }

    /// A path `<theta, .., a, b, c>` where every vertex strictly between
    /// `theta` and `b` is a collider on it and a parent of `c`, and `theta`
    /// is not adjacent to `c`. Returns `(a, theta)` for the first one found
    /// breadth first.
    fn discriminating_path(&self, b: VertexId, c: VertexId) -> Option<(VertexId, VertexId)> {
        for a in self.pag.adjacent(b) & self.pag.adjacent(c) {
            if !(self.directed(a, c) && self.arrow_at(b, a)) {
                continue;
            }
            let mut seen = VertexSet::singleton(a).with(b).with(c);
            let mut queue = VecDeque::from([a]);
            while let Some(v) = queue.pop_front() {
                for u in self.pag.adjacent(v) - seen {
                    if !self.arrow_at(u, v) {
                        continue;
                    }
                    if !self.pag.is_adjacent(u, c) {
                        return Some((a, u));
                    }
                    if self.directed(u, c) && self.arrow_at(v, u) {
                        seen.insert(u);
                        queue.push_back(u);
                    }
                }
            }
        }
        None
    }

    /// `a -> b -> c` or `a -o b -> c`, with `a o-> c`: `a -> c`.
    fn r8(&mut self) -> Result<bool> {
        let mut changed = false;
        for (a, c) in self.circle_arrows() {
            let fires = (self.pag.adjacent(a) & self.pag.adjacent(c))
                .iter()
                .any(|b| {
                    self.directed(b, c)
                        && self.m(b, a) == Some(Tail)
                        && matches!(self.m(a, b), Some(Arrow) | Some(Circle))
                });
            if fires {
                changed |= self.set("R8", c, a, Tail)?;
            }
        }
        Ok(changed)
    }

    /// `a o-> c` with an uncovered potentially directed path
    /// `<a, b, .., c>` whose second vertex `b` is not adjacent to `c`.
    fn r9(&mut self) -> Result<bool> {
        let mut changed = false;
        for (a, c) in self.circle_arrows() {
            let fires = self.pag.adjacent(a).iter().any(|b| {
                b != c
                    && !self.pag.is_adjacent(b, c)
                    && self.potentially_directed(a, b)
                    && self.uncovered_pd_path(a, b, c, VertexSet::singleton(a).with(b))
            });
            if fires {
                changed |= self.set("R9", c, a, Tail)?;
            }
        }
        Ok(changed)
    }

    /// `a o-> c`, `b -> c <- d`, uncovered potentially directed paths from
    /// `a` to `b` and to `d` whose second vertices are distinct and
    /// non-adjacent: `a -> c`.
    fn r10(&mut self) -> Result<bool> {
        let mut changed = false;
        for (a, c) in self.circle_arrows() {
            let parents: Vec<VertexId> = self
                .pag
                .adjacent(c)
                .iter()
                .filter(|&p| p != a && self.directed(p, c))
                .collect();
            if parents.len() < 2 {
                continue;
            }
            // second vertex of some uncovered p.d. path from `a` to each parent
            let firsts: Vec<VertexSet> = parents
                .iter()
                .map(|&p| {
                    self.pag
                        .adjacent(a)
                        .iter()
                        .filter(|&m| self.potentially_directed(a, m))
                        .filter(|&m| {
                            m == p
                                || self.uncovered_pd_path(a, m, p, VertexSet::singleton(a).with(m))
                        })
                        .collect()
                })
                .collect();
            let mut fires = false;
            'pairs: for i in 0..parents.len() {
                for j in i + 1..parents.len() {
                    for mu in firsts[i] {
                        for omega in firsts[j] {
                            if mu != omega && !self.pag.is_adjacent(mu, omega) {
                                fires = true;
                                break 'pairs;
                            }
                        }
                    }
                }
            }
            if fires {
                changed |= self.set("R10", c, a, Tail)?;
            }
        }
        Ok(changed)
    }

    /// Edges `a o-> c`.
    fn circle_arrows(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::new();
        for a in 0..self.n() {
            for c in self.pag.adjacent(a) {
                if self.m(c, a) == Some(Circle) && self.m(a, c) == Some(Arrow) {
                    out.push((a, c));
                }
            }
        }
        out
    }

    /// The edge `a - b` is not into `a` and not out of `b`.
    fn potentially_directed(&self, a: VertexId, b: VertexId) -> bool {
        matches!(self.m(b, a), Some(Tail) | Some(Circle))
            && matches!(self.m(a, b), Some(Arrow) | Some(Circle))
    }

    /// Extends a path whose last two vertices are `prev, cur` to reach
    /// `target`, keeping it uncovered and potentially directed. `on_path`
    /// holds the vertices used so far.
    fn uncovered_pd_path(
        &self,
        prev: VertexId,
        cur: VertexId,
        target: VertexId,
        on_path: VertexSet,
    ) -> bool {
        if cur == target {
            return true;
        }
        for next in self.pag.adjacent(cur) - on_path {
            if self.pag.is_adjacent(prev, next) || !self.potentially_directed(cur, next) {
                continue;
            }
            if self.uncovered_pd_path(cur, next, target, on_path.with(next)) {
                return true;
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ci::OracleTester;
    use crate::discovery::learn_g_pi;
    use crate::graph::fixtures::*;
    use crate::orders::Order;

    fn oriented(g: &MixedGraph, pi: &[usize]) -> PagGraph {
        let t = OracleTester::new(g.clone()).unwrap();
        orient(&learn_g_pi(&Order::new(pi.to_vec()).unwrap(), &t).unwrap()).unwrap()
    }

    #[test]
    fn collider_example() {
        let p = oriented(&collider3(), &[1, 0, 2]);
        assert_eq!(p.mark(0, 1), Some(Arrow));
        assert_eq!(p.mark(2, 1), Some(Arrow));
        assert_eq!(p.mark(1, 0), Some(Circle));
        assert_eq!(p.mark(1, 2), Some(Circle));
        assert!(p.is_consistent_with(&collider3()));
        let lines: Vec<_> = p.edge_lines(|v| v).collect();
        assert_eq!(lines, ["0 o-> 1", "1 <-o 2"]);
    }

    #[test]
    fn chain_example() {
        let p = oriented(&chain3(), &[2, 1, 0]);
        assert!(p.edges().all(|(_, _, a, b)| a == Circle && b == Circle));
        assert!(p.is_consistent_with(&chain3()));
        let reversed = MixedGraph::dag(3, &[(2, 1), (1, 0)]).unwrap();
        assert!(p.is_consistent_with(&reversed));
    }

    #[test]
    fn edgeless() {
        let mut sep = SepSetTable::new();
        sep.insert(0, 1, VertexSet::EMPTY);
        let p = orient_skeleton(&Skeleton::new(2), &sep).unwrap();
        assert_eq!(p.num_edges(), 0);
    }

    #[test]
    fn r1_propagates_after_collider() {
        // 0 -> 2 <- 1, 2 -> 3
        let g = MixedGraph::dag(4, &[(0, 2), (1, 2), (2, 3)]).unwrap();
        let p = oriented(&g, &[3, 2, 1, 0]);
        assert_eq!(
            p,
            PagGraph::from_mag(&{
                let mut b = crate::graph::GraphBuilder::new(4).unwrap();
                b.directed(0, 2).unwrap();
                b.directed(1, 2).unwrap();
                b.directed(2, 3).unwrap();
                b.build()
            })
            .with_circles_at(&[(2, 0), (2, 1)])
        );
    }

    #[test]
    fn missing_sepset_is_inconsistent() {
        let skel = Skeleton::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let err = orient_skeleton(&skel, &SepSetTable::new()).unwrap_err();
        assert!(matches!(err, Error::Inconsistent { .. }));
    }

    impl PagGraph {
        /// Test helper: replace the mark at `at` on `from - at` by a circle.
        fn with_circles_at(mut self, ends: &[(VertexId, VertexId)]) -> Self {
            for &(from, at) in ends {
                self.marks[from * self.n + at] = Some(Circle);
            }
            self
        }
    }
}
