use alloc::vec;
use alloc::vec::Vec;

use crate::ci::CiTester;
use crate::discovery::NeighborSearch;
use crate::orders::Order;
use crate::{Error, Result, VertexSet};

/// Largest `n` for the `2^n` table by default.
pub const DEFAULT_VI_CAP: usize = 20;

/// Optimal cost-to-go and greedy action for every remaining set, indexed by
/// the set's bitmask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueTable {
    n: usize,
    values: Vec<u32>,
    actions: Vec<u8>,
}

impl ValueTable {
    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn value(&self, s: VertexSet) -> u32 {
        self.values[s.bits() as usize]
    }

    /// Smallest-index minimizing action in `s`, `None` for the empty set.
    pub fn action(&self, s: VertexSet) -> Option<usize> {
        (!s.is_empty()).then(|| self.actions[s.bits() as usize] as usize)
    }
}

#[derive(Debug, Clone)]
pub struct ViOutcome {
    pub order: Order,
    pub total_cost: usize,
    pub table: ValueTable,
}

/// Exact minimum-cost order by dynamic programming over remaining sets:
/// `V(s) = min_{a ∈ s} |N(a, s)| + V(s \ {a})`, with `V(s) = 0` for
/// `|s| <= 1`. Sets are visited in increasing bitmask order, which places
/// every proper subset first.
pub fn rol_vi<T: CiTester>(search: &mut NeighborSearch<T>, cap: usize) -> Result<ViOutcome> {
    let n = search.num_vars();
    let cap = cap.min(24);
    if n > cap {
        return Err(Error::Capacity {
            what: "value iteration",
            n,
            cap,
        });
    }
    let size = 1usize << n;
    let mut values = vec![0u32; size];
    let mut actions = vec![0u8; size];
    for bits in 1..size {
        let s = VertexSet::from_bits(bits as u128);
        let mut best = (u32::MAX, 0usize);
        if s.len() == 1 {
            best = (0, s.first().unwrap_or(0));
        } else {
            for a in s {
                let c = search.neighbor_count(a, s)? as u32 + values[bits & !(1 << a)];
                if c < best.0 {
                    best = (c, a);
                }
            }
        }
        values[bits] = best.0;
        actions[bits] = best.1 as u8;
    }
    let table = ValueTable { n, values, actions };
    let mut order = Vec::with_capacity(n);
    let mut s = VertexSet::full(n);
    while let Some(a) = table.action(s) {
        order.push(a);
        s.remove(a);
    }
    Ok(ViOutcome {
        total_cost: table.value(VertexSet::full(n)) as usize,
        order: Order::new(order)?,
        table,
    })
}
