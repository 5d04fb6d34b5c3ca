//! Synthetic instances, linear-Gaussian sampling and skeleton metrics.

mod generate;
mod metrics;
mod seeds;

pub use generate::{
    gen_erdos_renyi_dag, gen_erdos_renyi_dag_with_order, make_latent_instance, sample_sem,
    LatentInstance, LatentSpec, SemSpec,
};
pub use metrics::{score, Metrics};
pub use seeds::{derive_seed, Stream};
