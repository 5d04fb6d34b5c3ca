//! Learning the Markov equivalence class of a maximal ancestral graph (MAG)
//! by searching for a *removable order*.
//!
//! An order eliminates variables one at a time. At each step the eliminated
//! variable is connected to every remaining variable it cannot be separated
//! from using only the remaining variables. The number of edges this produces
//! is minimized exactly by the removable orders, and for those orders the
//! produced graph is the skeleton of the MAG. The crate provides:
//!
//! * [`graph`]: mixed graphs, m-separation, removability, latent projection.
//! * [`orders`]: causal/removable order predicates and enumeration oracles.
//! * [`ci`]: conditional-independence testers (graph oracle and Fisher-Z).
//! * [`discovery`]: neighbor search, skeleton-from-order, order cost, and
//!   orientation into a partial ancestral graph.
//! * [`search`]: hill climbing, value iteration over subsets and REINFORCE.
//! * [`data`]: synthetic instances, linear-Gaussian sampling, metrics.
//!
//! Order convention: a causal order lists every child *before* its parents,
//! matching the elimination semantics (a childless vertex is always safe to
//! eliminate first).
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod ci;
pub mod data;
pub mod discovery;
mod error;
pub mod graph;
pub mod orders;
pub mod search;
mod vertex_set;

pub use error::{Error, Result};
pub use vertex_set::{VertexId, VertexSet, MAX_VERTICES};
