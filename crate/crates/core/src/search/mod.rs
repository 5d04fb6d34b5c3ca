//! Order search.
//!
//! All searchers minimize the order cost `|E^π|` through a shared
//! [`NeighborSearch`](crate::discovery::NeighborSearch), so CI queries made
//! by one are reused by the next.
//!
//! * [`rol_hc`]: first-improvement hill climbing over position swaps, with
//!   costs recomputed only on the swapped range.
//! * [`rol_vi`]: exact dynamic programming over subsets of remaining
//!   vertices. Exponential, for small `n`.
//! * [`rol_pg`]: REINFORCE on a tabular softmax elimination policy.

mod hill_climb;
mod init;
mod policy_gradient;
mod value_iteration;

pub use hill_climb::{rol_hc, rol_hc_from, HcConfig, HcOutcome, HcStep};
pub use init::{initialize_order, InitMode};
pub use policy_gradient::{
    estimate_gradient, exact_objective, rol_pg, GradientEstimate, PgConfig, PgOutcome,
    SoftmaxPolicy,
};
pub use value_iteration::{rol_vi, ValueTable, ViOutcome, DEFAULT_VI_CAP};
