#![allow(dead_code)]

use rol_core::data::{gen_erdos_renyi_dag, make_latent_instance, LatentSpec};
use rol_core::graph::MixedGraph;

pub fn random_dag(n: usize, p: f64, seed: u64) -> MixedGraph {
    gen_erdos_renyi_dag(n, p, seed).unwrap()
}

/// A MAG over `n` observed vertices: a random DAG on `n + latents`
/// vertices projected onto a random subset.
pub fn random_mag(n: usize, latents: usize, p: f64, seed: u64) -> MixedGraph {
    let dag = random_dag(n + latents, p, seed);
    make_latent_instance(&dag, LatentSpec::Count(latents), seed ^ 0x5eed)
        .unwrap()
        .mag
}

/// Random acyclic directed edges plus random bidirected edges; not
/// necessarily ancestral.
pub fn random_admg(n: usize, p_dir: f64, p_bi: f64, seed: u64) -> MixedGraph {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut directed = Vec::new();
    let mut bidirected = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.random_bool(p_dir) {
                directed.push((a, b));
            } else if rng.random_bool(p_bi) {
                bidirected.push((a, b));
            }
        }
    }
    MixedGraph::from_edges(n, &directed, &bidirected).unwrap()
}
