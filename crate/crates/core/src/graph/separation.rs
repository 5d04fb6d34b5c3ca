//! m-separation.
//!
//! Two implementations that must agree:
//!
//! * [`m_separated_by_paths`] enumerates simple paths and applies the blocking
//!   rule literally: a path is blocked by `Z` when some collider lies outside
//!   `An(Z ∪ {x, y})` or some non-collider lies in `Z`. Exponential; it is the
//!   reference.
//! * [`m_separated`] is a reachability search over (vertex, arrival mark)
//!   states. A vertex reached with an arrowhead may be left through another
//!   arrowhead only if it is an ancestor of `Z`; any other passage requires
//!   the vertex not to be in `Z`.
//!
//! Both consider the endpoints their own ancestors.

use alloc::format;

use super::MixedGraph;
use crate::{Error, Result, VertexId, VertexSet};

fn check_query(g: &MixedGraph, x: VertexId, y: VertexId, z: VertexSet) -> Result<()> {
    g.check_vertex(x)?;
    g.check_vertex(y)?;
    g.check_set(z)?;
    if x == y {
        return Err(Error::invalid(format!("separation query with x = y = {x}")));
    }
    if z.contains(x) || z.contains(y) {
        return Err(Error::invalid(format!(
            "conditioning set {z:?} contains an endpoint of ({x}, {y})"
        )));
    }
    Ok(())
}

/// `x ⊥ y | z` in `g` by reachability.
pub fn m_separated(g: &MixedGraph, x: VertexId, y: VertexId, z: VertexSet) -> Result<bool> {
    check_query(g, x, y, z)?;
    Ok(!m_connected(g, x, y, z, g.vertices()))
}

/// `x ⊥ y | z` in `g` by enumerating every simple path.
pub fn m_separated_by_paths(
    g: &MixedGraph,
    x: VertexId,
    y: VertexId,
    z: VertexSet,
) -> Result<bool> {
    check_query(g, x, y, z)?;
    Ok(!connected_by_paths(g, x, y, z, g.vertices()))
}

/// Reachability test on the subgraph induced by `active`. No validation.
pub(crate) fn m_connected(
    g: &MixedGraph,
    x: VertexId,
    y: VertexId,
    z: VertexSet,
    active: VertexSet,
) -> bool {
    let an_z = g.ancestors_within(z, active);
    let pass_through = active - z;

    // reached with a tail / an arrowhead at the vertex
    let mut seen_tail = VertexSet::singleton(x);
    let mut seen_arrow = VertexSet::singleton(x);
    let mut front_tail = g.parents(x) & active;
    let mut front_arrow = (g.children(x) | g.spouses(x)) & active;

    loop {
        front_tail = front_tail - seen_tail;
        front_arrow = front_arrow - seen_arrow;
        if front_tail.contains(y) || front_arrow.contains(y) {
            return true;
        }
        if front_tail.is_empty() && front_arrow.is_empty() {
            return false;
        }
        seen_tail |= front_tail;
        seen_arrow |= front_arrow;

        let mut next_tail = VertexSet::EMPTY;
        let mut next_arrow = VertexSet::EMPTY;
        // tail at v: v is a non-collider whichever way we leave
        for v in front_tail & pass_through {
            next_tail |= g.parents(v);
            next_arrow |= g.children(v) | g.spouses(v);
        }
        for v in front_arrow {
            if pass_through.contains(v) {
                next_arrow |= g.children(v);
            }
            if an_z.contains(v) {
                next_tail |= g.parents(v);
                next_arrow |= g.spouses(v);
            }
        }
        front_tail = next_tail & active;
        front_arrow = next_arrow & active;
    }
}

pub(crate) fn connected_by_paths(
    g: &MixedGraph,
    x: VertexId,
    y: VertexId,
    z: VertexSet,
    active: VertexSet,
) -> bool {
    let anc = g.ancestors_within(z.with(x).with(y), active);
    let ctx = PathCtx {
        g,
        y,
        z,
        anc,
        active,
    };
    let on_path = VertexSet::singleton(x);
    (g.adjacent(x) & active)
        .iter()
        .any(|w| ctx.extend(w, arrow_into(g, x, w), on_path.with(w)))
}

struct PathCtx<'a> {
    g: &'a MixedGraph,
    y: VertexId,
    z: VertexSet,
    anc: VertexSet,
    active: VertexSet,
}

impl PathCtx<'_> {
    fn extend(&self, w: VertexId, arrived_with_arrow: bool, on_path: VertexSet) -> bool {
        if w == self.y {
            return true;
        }
        let next = (self.g.adjacent(w) & self.active) - on_path;
        for u in next {
            let leaves_with_arrow = arrow_into(self.g, u, w);
            let collider = arrived_with_arrow && leaves_with_arrow;
            let blocked = if collider {
                !self.anc.contains(w)
            } else {
                self.z.contains(w)
            };
            if !blocked && self.extend(u, arrow_into(self.g, w, u), on_path.with(u)) {
                return true;
            }
        }
        false
    }
}

/// Whether the edge between `from` and `to` has an arrowhead at `to`.
#[inline]
fn arrow_into(g: &MixedGraph, from: VertexId, to: VertexId) -> bool {
    g.children(from).contains(to) || g.spouses(from).contains(to)
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    fn set(v: &[usize]) -> VertexSet {
        v.iter().copied().collect()
    }

    #[test]
    fn g1_examples() {
        // X3 = 2, X4 = 3, X1 = 0
        for f in [m_separated, m_separated_by_paths] {
            assert!(f(&g1(), 2, 3, VertexSet::EMPTY).unwrap());
            assert!(!f(&g1(), 2, 3, set(&[0])).unwrap());
            assert!(f(&chain3(), 0, 2, set(&[1])).unwrap());
            assert!(!f(&chain3(), 0, 2, VertexSet::EMPTY).unwrap());
            assert!(f(&collider3(), 0, 2, VertexSet::EMPTY).unwrap());
        }
    }

    #[test]
    fn rejects_bad_queries() {
        assert!(m_separated(&g1(), 1, 1, VertexSet::EMPTY).is_err());
        assert!(m_separated(&g1(), 0, 1, set(&[0])).is_err());
        assert!(m_separated_by_paths(&g1(), 0, 9, VertexSet::EMPTY).is_err());
    }

    #[test]
    fn bidirected_collider() {
        // a <-> b <-> c: b is a collider
        let g = MixedGraph::from_edges(3, &[], &[(0, 1), (1, 2)]).unwrap();
        assert!(m_separated(&g, 0, 2, VertexSet::EMPTY).unwrap());
        assert!(!m_separated(&g, 0, 2, set(&[1])).unwrap());
        // a -> b <-> c <- d, with c conditioned via its descendant e
        let g = MixedGraph::from_edges(5, &[(0, 1), (3, 2), (2, 4)], &[(1, 2)]).unwrap();
        assert!(m_separated(&g, 0, 3, set(&[2])).unwrap());
        assert!(!m_separated(&g, 0, 3, set(&[1, 4])).unwrap());
        assert!(m_separated_by_paths(&g, 0, 3, set(&[2])).unwrap());
        assert!(!m_separated_by_paths(&g, 0, 3, set(&[1, 4])).unwrap());
    }
}
