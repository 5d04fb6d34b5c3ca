use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::ci::DataMatrix;
use crate::graph::{latent_projection, GraphBuilder, MixedGraph};
use crate::orders::Order;
use crate::{Error, Result, VertexId, VertexSet};

/// Erdős–Rényi skeleton oriented along a uniform random permutation. Also
/// returns a causal order of the result (children first).
pub fn gen_erdos_renyi_dag_with_order(n: usize, p: f64, seed: u64) -> Result<(MixedGraph, Order)> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!(
            "edge probability {p} outside [0, 1]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<VertexId> = (0..n).collect();
    perm.shuffle(&mut rng);
    let mut b = GraphBuilder::new(n)?;
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(p) {
                b.directed(perm[i], perm[j])?;
            }
        }
    }
    perm.reverse();
    Ok((b.build(), Order::new(perm)?))
}

pub fn gen_erdos_renyi_dag(n: usize, p: f64, seed: u64) -> Result<MixedGraph> {
    gen_erdos_renyi_dag_with_order(n, p, seed).map(|(g, _)| g)
}

/// Linear-Gaussian structural equation model over a DAG:
/// `X_v = Σ_{p ∈ Pa(v)} c_{pv} X_p + σ_v ε_v`, `ε_v ~ N(0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SemSpec {
    dag: MixedGraph,
    /// `weights[v]`: `(parent, coefficient)` pairs, parents ascending.
    weights: Vec<Vec<(VertexId, f64)>>,
    noise_sd: Vec<f64>,
}

impl SemSpec {
    /// `coefficient(parent, child)` is called once per edge.
    pub fn new(
        dag: MixedGraph,
        mut coefficient: impl FnMut(VertexId, VertexId) -> f64,
        noise_sd: Vec<f64>,
    ) -> Result<Self> {
        if !dag.is_dag() {
            return Err(Error::invalid("SEM graph must be a DAG"));
        }
        if noise_sd.len() != dag.num_vertices() {
            return Err(Error::invalid("one noise scale per vertex required"));
        }
        if let Some(s) = noise_sd.iter().find(|s| !(s.is_finite() && **s >= 0.0)) {
            return Err(Error::invalid(format!("bad noise scale {s}")));
        }
        let weights: Vec<Vec<(VertexId, f64)>> = (0..dag.num_vertices())
            .map(|v| {
                dag.parents(v)
                    .iter()
                    .map(|p| (p, coefficient(p, v)))
                    .collect()
            })
            .collect();
        if weights.iter().flatten().any(|(_, c)| !c.is_finite()) {
            return Err(Error::NonFinite("SEM coefficient".into()));
        }
        Ok(SemSpec {
            dag,
            weights,
            noise_sd,
        })
    }

    /// Coefficients uniform on `[-1.5, -1] ∪ [1, 1.5]`, noise scales uniform
    /// on `[0.7, 1.2]`. Coefficients and noise scales use separate seeds.
    pub fn random(dag: MixedGraph, coefficient_seed: u64, noise_scale_seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(coefficient_seed);
        let mut sd_rng = ChaCha8Rng::seed_from_u64(noise_scale_seed);
        let sd = (0..dag.num_vertices())
            .map(|_| sd_rng.random_range(0.7..=1.2))
            .collect();
        let mut draws: Vec<f64> = (0..dag.num_edges())
            .map(|_| {
                let m: f64 = rng.random_range(1.0..=1.5);
                if rng.random_bool(0.5) {
                    m
                } else {
                    -m
                }
            })
            .collect();
        draws.reverse();
        Self::new(dag, move |_, _| draws.pop().unwrap_or(1.0), sd)
    }

    pub fn dag(&self) -> &MixedGraph {
        &self.dag
    }

    pub fn coefficient(&self, parent: VertexId, child: VertexId) -> Option<f64> {
        self.weights
            .get(child)?
            .iter()
            .find(|&&(p, _)| p == parent)
            .map(|&(_, c)| c)
    }

    pub fn noise_sd(&self, v: VertexId) -> f64 {
        self.noise_sd[v]
    }
}

/// Draws `num_samples` rows from the SEM.
pub fn sample_sem(spec: &SemSpec, num_samples: usize, seed: u64) -> Result<DataMatrix> {
    let n = spec.dag.num_vertices();
    let topo = spec
        .dag
        .topological_order()
        .ok_or_else(|| Error::invalid("SEM graph is cyclic"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = vec![0.0; num_samples * n];
    for row in values.chunks_exact_mut(n) {
        for &v in &topo {
            let eps: f64 = StandardNormal.sample(&mut rng);
            let mean: f64 = spec.weights[v].iter().map(|&(p, c)| c * row[p]).sum();
            row[v] = mean + spec.noise_sd[v] * eps;
        }
    }
    DataMatrix::new(num_samples, n, values)
}

/// How many vertices to hide.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LatentSpec {
    Count(usize),
    /// Fraction of `n`, rounded to the nearest count.
    Fraction(f64),
}

/// A MAG over the observed vertices of a DAG.
#[derive(Debug, Clone, PartialEq)]
pub struct LatentInstance {
    pub mag: MixedGraph,
    /// `observed[i]` is the DAG vertex behind MAG vertex `i`.
    pub observed: Vec<VertexId>,
    pub latent: VertexSet,
}

/// Hides a uniformly chosen latent set and projects the DAG onto the rest.
pub fn make_latent_instance(
    dag: &MixedGraph,
    spec: LatentSpec,
    seed: u64,
) -> Result<LatentInstance> {
    let n = dag.num_vertices();
    let k = match spec {
        LatentSpec::Count(k) => k,
        LatentSpec::Fraction(f) => {
            if !(0.0..1.0).contains(&f) {
                return Err(Error::invalid(format!(
                    "latent fraction {f} outside [0, 1)"
                )));
            }
            libm::round(f * n as f64) as usize
        }
    };
    if k >= n.max(1) {
        return Err(Error::invalid(format!("cannot hide {k} of {n} vertices")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let latent: VertexSet = index::sample(&mut rng, n, k).into_iter().collect();
    let projected = latent_projection(dag, VertexSet::full(n) - latent)?;
    Ok(LatentInstance {
        mag: projected.graph,
        observed: projected.vertices,
        latent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orders::is_c_order;

    #[test]
    fn er_extremes() {
        let g = gen_erdos_renyi_dag(6, 0.0, 1).unwrap();
        assert_eq!(g.num_edges(), 0);
        let g = gen_erdos_renyi_dag(4, 1.0, 1).unwrap();
        assert_eq!(g.num_edges(), 6);
        assert!(g.is_dag());
        assert!(gen_erdos_renyi_dag(4, 1.5, 1).is_err());
    }

    #[test]
    fn er_order_is_causal() {
        for seed in 0..20 {
            let (g, pi) = gen_erdos_renyi_dag_with_order(9, 0.4, seed).unwrap();
            assert!(g.is_acyclic());
            assert!(is_c_order(&g, &pi).unwrap());
        }
    }

    #[test]
    fn random_sem_ranges() {
        let g = gen_erdos_renyi_dag(10, 0.5, 3).unwrap();
        let spec = SemSpec::random(g.clone(), 4, 5).unwrap();
        for (p, c) in g.directed_edges() {
            let w = spec.coefficient(p, c).unwrap().abs();
            assert!((1.0..=1.5).contains(&w));
        }
        for v in 0..10 {
            assert!((0.7..=1.2).contains(&spec.noise_sd(v)));
        }
    }

    #[test]
    fn covariance_of_one_edge() {
        let g = MixedGraph::dag(2, &[(0, 1)]).unwrap();
        let spec = SemSpec::new(g, |_, _| 1.3, vec![0.9, 1.1]).unwrap();
        let n = 10_000;
        let d = sample_sem(&spec, n, 9).unwrap();
        let (x, y) = (d.column(0), d.column(1));
        let mx = x.iter().sum::<f64>() / n as f64;
        let my = y.iter().sum::<f64>() / n as f64;
        let prods: Vec<f64> = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).collect();
        let cov = prods.iter().sum::<f64>() / n as f64;
        let var = prods.iter().map(|p| (p - cov) * (p - cov)).sum::<f64>() / n as f64;
        let se = libm::sqrt(var / n as f64);
        assert!((cov - 1.3 * 0.81).abs() < 3.0 * se, "cov {cov}, se {se}");
    }

    #[test]
    fn latent_examples() {
        let g = gen_erdos_renyi_dag(7, 0.4, 2).unwrap();
        let inst = make_latent_instance(&g, LatentSpec::Fraction(0.0), 1).unwrap();
        assert_eq!(inst.mag, g);

        let fork = MixedGraph::dag(3, &[(2, 0), (2, 1)]).unwrap();
        let mut saw_bidirected = false;
        for seed in 0..30 {
            let inst = make_latent_instance(&fork, LatentSpec::Count(1), seed).unwrap();
            if inst.latent == VertexSet::singleton(2) {
                assert_eq!(inst.mag.bidirected_edges().collect::<Vec<_>>(), [(0, 1)]);
                saw_bidirected = true;
            }
        }
        assert!(saw_bidirected);
        assert!(make_latent_instance(&fork, LatentSpec::Count(3), 0).is_err());
        assert!(make_latent_instance(&fork, LatentSpec::Fraction(1.0), 0).is_err());
    }
}
