use super::{CiQuery, CiTester, QueryCounter, Separability};
use crate::graph::{self, MixedGraph};
use crate::{Error, Result, VertexId, VertexSet};

/// Answers CI queries by m-separation in a MAG, i.e. under faithfulness.
#[derive(Debug)]
pub struct OracleTester {
    graph: MixedGraph,
    counter: QueryCounter,
}

impl OracleTester {
    pub fn new(graph: MixedGraph) -> Result<Self> {
        if let Some(why) = graph.ancestral_violation() {
            return Err(Error::NotAncestral(why));
        }
        if !graph.is_maximal()? {
            return Err(Error::invalid("oracle graph is not maximal"));
        }
        Ok(OracleTester {
            graph,
            counter: QueryCounter::default(),
        })
    }

    pub fn graph(&self) -> &MixedGraph {
        &self.graph
    }
}

impl CiTester for OracleTester {
    fn num_vars(&self) -> usize {
        self.graph.num_vertices()
    }

    fn test(&self, q: CiQuery) -> Result<bool> {
        q.check_range(self.num_vars())?;
        self.counter.add(1);
        Ok(!graph::m_connected(
            &self.graph,
            q.x,
            q.y,
            q.z,
            self.graph.vertices(),
        ))
    }

    fn query_count(&self) -> u64 {
        self.counter.get()
    }

    /// Separable within `within` iff separated by `An({x, y}) ∩ within`.
    fn exact_separability(
        &self,
        x: VertexId,
        y: VertexId,
        within: VertexSet,
    ) -> Option<Result<Separability>> {
        let all = self.graph.vertices();
        let d = graph::separating_candidate(&self.graph, x, y, within, all);
        Some(self.test(CiQuery { x, y, z: d }).map(|indep| {
            if indep {
                Separability::Separable(d)
            } else {
                Separability::Inseparable
            }
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn oracle_examples() {
        let t = OracleTester::new(g1()).unwrap();
        assert!(t
            .test(CiQuery::new(2, 3, VertexSet::EMPTY).unwrap())
            .unwrap());
        assert!(!t
            .test(CiQuery::new(2, 3, VertexSet::singleton(0)).unwrap())
            .unwrap());
        for (x, y) in [(0, 1), (2, 3), (1, 3)] {
            for z in VertexSet::full(4).without(x).without(y).subsets() {
                let a = t.test(CiQuery::new(x, y, z).unwrap()).unwrap();
                let b = t.test(CiQuery::new(y, x, z).unwrap()).unwrap();
                assert_eq!(a, b);
            }
        }
        assert!(t
            .test(CiQuery::new(0, 7, VertexSet::EMPTY).unwrap())
            .is_err());
    }

    #[test]
    fn rejects_non_ancestral() {
        let cyc = MixedGraph::dag(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(OracleTester::new(cyc).is_err());
    }
}
