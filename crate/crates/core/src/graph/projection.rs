//! Latent projection, removability and brute-force Markov equivalence.

use alloc::format;

use super::{m_connected, GraphBuilder, MappedGraph, MixedGraph};
use crate::{Error, Result, VertexId, VertexSet};

/// Exhaustive separation checks enumerate `2^(n-2)` conditioning sets per pair.
const EXHAUSTIVE_CAP: usize = 14;

/// Whether `x` and `y` are m-separated (in the graph induced by `active`) by
/// some subset of `observed`.
///
/// This is the inducing-path test. A path is inducing relative to the latent
/// set `active \ observed` when every observed interior vertex is a collider
/// and every collider is an ancestor of `x` or `y`. Such a path exists exactly
/// when `x` and `y` are m-connected given `D = An({x, y}) ∩ observed \ {x, y}`:
/// every vertex on a path whose colliders lie in `An({x, y})` is itself in
/// `An({x, y})`, so its non-colliders avoid `D` only if they are latent.
pub(crate) fn separable_within(
    g: &MixedGraph,
    x: VertexId,
    y: VertexId,
    observed: VertexSet,
    active: VertexSet,
) -> bool {
    let d = separating_candidate(g, x, y, observed, active);
    !m_connected(g, x, y, d, active)
}

/// `An({x, y}) ∩ observed \ {x, y}`.
pub(crate) fn separating_candidate(
    g: &MixedGraph,
    x: VertexId,
    y: VertexId,
    observed: VertexSet,
    active: VertexSet,
) -> VertexSet {
    let pair = VertexSet::singleton(x).with(y);
    (g.ancestors_within(pair, active) & observed) - pair
}

fn require_ancestral(g: &MixedGraph) -> Result<()> {
    match g.ancestral_violation() {
        Some(why) => Err(Error::NotAncestral(why)),
        None => Ok(()),
    }
}

/// Projects an ancestral graph (typically a DAG) onto `observed`.
///
/// Two observed vertices are adjacent iff an inducing path connects them;
/// the edge is `a -> b` if `a` is an ancestor of `b` in `g`, and `a <-> b` if
/// neither is an ancestor of the other. The result is indexed densely over
/// `observed` in ascending order.
pub fn latent_projection(g: &MixedGraph, observed: VertexSet) -> Result<MappedGraph> {
    g.check_set(observed)?;
    require_ancestral(g)?;
    let all = g.vertices();
    let anc = g.ancestor_table();
    let vertices: alloc::vec::Vec<VertexId> = observed.iter().collect();
    let mut b = GraphBuilder::new(vertices.len())?;
    for (i, &x) in vertices.iter().enumerate() {
        for (j, &y) in vertices.iter().enumerate().skip(i + 1) {
            if separable_within(g, x, y, observed, all) {
                continue;
            }
            if anc[y].contains(x) {
                b.directed(i, j)?;
            } else if anc[x].contains(y) {
                b.directed(j, i)?;
            } else {
                b.bidirected(i, j)?;
            }
        }
    }
    Ok(MappedGraph {
        graph: b.build(),
        vertices,
    })
}

/// Whether dropping `x` leaves every m-separation among the other vertices
/// unchanged. Decided by comparing the induced subgraph without `x` to the
/// latent projection that marginalizes `x`: they coincide iff `x` is
/// removable.
pub fn is_removable(g: &MixedGraph, x: VertexId) -> Result<bool> {
    g.check_vertex(x)?;
    require_ancestral(g)?;
    let rest = g.vertices().without(x);
    Ok(latent_projection(g, rest)? == g.induced_subgraph(rest)?)
}

/// Definition-level removability: all `(y, w, Z)` separation statements over
/// `V \ {x}` agree between `g` and `g[V \ {x}]`.
pub fn is_removable_exhaustive(g: &MixedGraph, x: VertexId) -> Result<bool> {
    g.check_vertex(x)?;
    require_ancestral(g)?;
    if g.num_vertices() > EXHAUSTIVE_CAP {
        return Err(Error::Capacity {
            what: "exhaustive removability",
            n: g.num_vertices(),
            cap: EXHAUSTIVE_CAP,
        });
    }
    Ok(removable_exhaustive_within(g, x, g.vertices()))
}

/// Removability of `x` in `g[active]`, by the projection criterion.
pub(crate) fn removable_within(g: &MixedGraph, x: VertexId, active: VertexSet) -> bool {
    let rest = active.without(x);
    for y in rest {
        let candidates = (rest - g.adjacent(y)).without(y);
        for w in candidates.iter().filter(|&w| w > y) {
            if !separable_within(g, y, w, rest, active) {
                return false;
            }
        }
    }
    true
}

/// Removability of `x` in `g[active]`, by exhaustive comparison.
pub(crate) fn removable_exhaustive_within(g: &MixedGraph, x: VertexId, active: VertexSet) -> bool {
    let rest = active.without(x);
    for y in rest {
        for w in rest.iter().filter(|&w| w > y) {
            let others = rest.without(y).without(w);
            for z in others.subsets() {
                if m_connected(g, y, w, z, active) != m_connected(g, y, w, z, rest) {
                    return false;
                }
            }
        }
    }
    true
}

/// Brute-force Markov equivalence: every `(x, y, Z)` statement agrees.
pub fn is_markov_equivalent(g1: &MixedGraph, g2: &MixedGraph) -> Result<bool> {
    if g1.num_vertices() != g2.num_vertices() {
        return Err(Error::invalid(format!(
            "vertex count mismatch: {} vs {}",
            g1.num_vertices(),
            g2.num_vertices()
        )));
    }
    require_ancestral(g1)?;
    require_ancestral(g2)?;
    let n = g1.num_vertices();
    if n > EXHAUSTIVE_CAP {
        return Err(Error::Capacity {
            what: "brute-force Markov equivalence",
            n,
            cap: EXHAUSTIVE_CAP,
        });
    }
    let all = g1.vertices();
    for x in 0..n {
        for y in x + 1..n {
            let others = all.without(x).without(y);
            for z in others.subsets() {
                if m_connected(g1, x, y, z, all) != m_connected(g2, x, y, z, all) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
