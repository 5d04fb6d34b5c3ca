use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ci::CiTester;
use crate::discovery::NeighborSearch;
use crate::orders::Order;
use crate::{Result, VertexSet};

/// Starting order for hill climbing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InitMode {
    /// Uniform permutation from the seed.
    Random,
    /// Ascending Markov-boundary size, ties by vertex index.
    MbSizeSort,
    /// Repeatedly take the vertex with the smallest boundary among those
    /// whose boundary is nested in each of its boundary members', then
    /// recompute boundaries on what is left.
    MbRecursive,
}

pub fn initialize_order<T: CiTester>(
    search: &mut NeighborSearch<T>,
    mode: InitMode,
    seed: u64,
) -> Result<Order> {
    let n = search.num_vars();
    let all = VertexSet::full(n);
    match mode {
        InitMode::Random => {
            let mut v: Vec<usize> = (0..n).collect();
            v.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            Order::new(v)
        }
        InitMode::MbSizeSort => {
            let mb = search.markov_boundary(all)?;
            let mut v: Vec<usize> = (0..n).collect();
            v.sort_by_key(|&x| (mb.of(x).len(), x));
            Order::new(v)
        }
        InitMode::MbRecursive => {
            let mut remaining = all;
            let mut v = Vec::with_capacity(n);
            while let Some(first) = remaining.first() {
                let mb = search.markov_boundary(remaining)?;
                let size = |x: usize| (mb.of(x).len(), x);
                let nested = |x: usize| {
                    let own = mb.of(x).with(x);
                    mb.of(x).iter().all(|y| own.is_subset(mb.of(y).with(y)))
                };
                let pick = remaining
                    .iter()
                    .filter(|&x| nested(x))
                    .min_by_key(|&x| size(x))
                    .or_else(|| remaining.iter().min_by_key(|&x| size(x)))
                    .unwrap_or(first);
                v.push(pick);
                remaining.remove(pick);
            }
            Order::new(v)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ci::OracleTester;
    use crate::graph::fixtures::*;
    use crate::graph::MixedGraph;
    use crate::orders::is_r_order;

    #[test]
    fn mb_size_sort_examples() {
        let t = OracleTester::new(chain3()).unwrap();
        let pi = initialize_order(&mut NeighborSearch::new(&t), InitMode::MbSizeSort, 0).unwrap();
        assert_eq!(pi.as_slice(), [0, 2, 1]);

        let t = OracleTester::new(g1()).unwrap();
        let pi = initialize_order(&mut NeighborSearch::new(&t), InitMode::MbSizeSort, 0).unwrap();
        assert_eq!(pi.as_slice(), [0, 1, 2, 3]);

        let t = OracleTester::new(MixedGraph::empty(1).unwrap()).unwrap();
        for mode in [
            InitMode::Random,
            InitMode::MbSizeSort,
            InitMode::MbRecursive,
        ] {
            let pi = initialize_order(&mut NeighborSearch::new(&t), mode, 3).unwrap();
            assert_eq!(pi.as_slice(), [0]);
        }
    }

    #[test]
    fn random_is_seeded() {
        let t = OracleTester::new(MixedGraph::empty(8).unwrap()).unwrap();
        let mut s = NeighborSearch::new(&t);
        let a = initialize_order(&mut s, InitMode::Random, 42).unwrap();
        let b = initialize_order(&mut s, InitMode::Random, 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn recursive_finds_r_order_on_small_graphs() {
        for g in [chain3(), collider3(), g1()] {
            let t = OracleTester::new(g.clone()).unwrap();
            let pi =
                initialize_order(&mut NeighborSearch::new(&t), InitMode::MbRecursive, 0).unwrap();
            assert!(is_r_order(&g, &pi).unwrap(), "{pi:?}");
        }
    }
}
