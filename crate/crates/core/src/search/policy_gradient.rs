use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{Cholesky, Matrix4, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ci::CiTester;
use crate::data::{derive_seed, Stream};
use crate::discovery::NeighborSearch;
use crate::orders::{all_orders, Order};
use crate::{Error, Result, VertexId, VertexSet};

const BASELINE_RIDGE: f64 = 1e-6;
const EXACT_OBJECTIVE_CAP: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PgConfig {
    pub episodes: usize,
    /// Episodes per parameter update.
    pub batch_size: usize,
    pub learning_rate: f64,
    pub temperature: f64,
    /// Number of step buckets for the per-vertex logits; `None` uses one
    /// bucket per elimination step.
    pub step_buckets: Option<usize>,
    pub seed: u64,
}

impl Default for PgConfig {
    fn default() -> Self {
        PgConfig {
            episodes: 500,
            batch_size: 10,
            learning_rate: 0.05,
            temperature: 1.0,
            step_buckets: None,
            seed: 0,
        }
    }
}

/// Softmax elimination policy. The logit of vertex `v` at step `t` with
/// remaining set `s` is `(w[v][bucket(t)] + u[v] * |s| / n) / temperature`;
/// eliminated vertices get probability zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SoftmaxPolicy {
    n: usize,
    buckets: usize,
    temperature: f64,
    w: Vec<f64>,
    u: Vec<f64>,
}

impl SoftmaxPolicy {
    /// Uniform policy (all parameters zero).
    pub fn new(n: usize, buckets: usize, temperature: f64) -> Result<Self> {
        if buckets == 0 || !(temperature > 0.0 && temperature.is_finite()) {
            return Err(Error::invalid(format!(
                "need buckets >= 1 and a positive temperature, got {buckets} and {temperature}"
            )));
        }
        Ok(SoftmaxPolicy {
            n,
            buckets,
            temperature,
            w: vec![0.0; n * buckets],
            u: vec![0.0; n],
        })
    }

    pub fn num_params(&self) -> usize {
        self.w.len() + self.u.len()
    }

    /// `w` (vertex-major) followed by `u`.
    pub fn params(&self) -> Vec<f64> {
        let mut p = self.w.clone();
        p.extend_from_slice(&self.u);
        p
    }

    pub fn set_params(&mut self, p: &[f64]) -> Result<()> {
        if p.len() != self.num_params() {
            return Err(Error::invalid(format!(
                "expected {} parameters, got {}",
                self.num_params(),
                p.len()
            )));
        }
        let (w, u) = p.split_at(self.w.len());
        self.w.copy_from_slice(w);
        self.u.copy_from_slice(u);
        Ok(())
    }

    fn bucket(&self, t: usize) -> usize {
        (t * self.buckets / self.n.max(1)).min(self.buckets - 1)
    }

    /// Action probabilities at step `t` in remaining set `s`, ascending by
    /// vertex.
    pub fn probabilities(&self, s: VertexSet, t: usize) -> Vec<(VertexId, f64)> {
        let b = self.bucket(t);
        let f = s.len() as f64 / self.n as f64;
        let logits: Vec<(VertexId, f64)> = s
            .iter()
            .map(|v| {
                (
                    v,
                    (self.w[v * self.buckets + b] + self.u[v] * f) / self.temperature,
                )
            })
            .collect();
        let max = logits
            .iter()
            .map(|&(_, l)| l)
            .fold(f64::NEG_INFINITY, f64::max);
        let mut probs: Vec<(VertexId, f64)> = logits
            .iter()
            .map(|&(v, l)| (v, libm::exp(l - max)))
            .collect();
        let z: f64 = probs.iter().map(|&(_, p)| p).sum();
        for (_, p) in &mut probs {
            *p /= z;
        }
        probs
    }

    fn sample(&self, s: VertexSet, t: usize, rng: &mut impl Rng) -> VertexId {
        let probs = self.probabilities(s, t);
        let mut u: f64 = rng.random();
        for &(v, p) in &probs {
            if u < p {
                return v;
            }
            u -= p;
        }
        probs.last().map(|&(v, _)| v).unwrap_or(0)
    }

    /// `log P(order)`; the last vertex is forced.
    pub fn log_prob(&self, order: &Order) -> f64 {
        let mut s = VertexSet::full(self.n);
        let mut lp = 0.0;
        for t in 0..self.n.saturating_sub(1) {
            let a = order[t];
            let p = self
                .probabilities(s, t)
                .into_iter()
                .find(|&(v, _)| v == a)
                .map_or(0.0, |(_, p)| p);
            lp += libm::log(p);
            s.remove(a);
        }
        lp
    }

    /// Adds `scale * ∇ log π(a | s, t)` into `grad`.
    fn accumulate_score(&self, s: VertexSet, t: usize, a: VertexId, scale: f64, grad: &mut [f64]) {
        let b = self.bucket(t);
        let f = s.len() as f64 / self.n as f64;
        let off = self.w.len();
        for (v, p) in self.probabilities(s, t) {
            let g = scale * ((v == a) as u8 as f64 - p) / self.temperature;
            grad[v * self.buckets + b] += g;
            grad[off + v] += g * f;
        }
    }
}

struct Trajectory {
    order: Order,
    /// Per-step reward `-|N(a_t, s_t)|`, for the `n - 1` decisions.
    rewards: Vec<f64>,
}

impl Trajectory {
    fn total(&self) -> f64 {
        self.rewards.iter().sum()
    }
}

fn features(t: usize, n: usize) -> Vector4<f64> {
    let x = t as f64 / n as f64;
    let remaining = (n - t) as f64 / n as f64;
    Vector4::new(1.0, x, x * x, remaining)
}

fn rollout<T: CiTester>(
    policy: &SoftmaxPolicy,
    search: &mut NeighborSearch<T>,
    rng: &mut impl Rng,
) -> Result<Trajectory> {
    let n = policy.n;
    let mut s = VertexSet::full(n);
    let mut order = Vec::with_capacity(n);
    let mut rewards = Vec::with_capacity(n);
    for t in 0..n.saturating_sub(1) {
        let a = policy.sample(s, t, rng);
        rewards.push(-(search.neighbor_count(a, s)? as f64));
        order.push(a);
        s.remove(a);
    }
    order.extend(s.iter());
    Ok(Trajectory {
        order: Order::new(order)?,
        rewards,
    })
}

/// REINFORCE score of one trajectory: `Σ_t (G_t - b(φ_t)) ∇ log π(a_t | s_t)`.
fn score(policy: &SoftmaxPolicy, traj: &Trajectory, baseline: &Vector4<f64>) -> Vec<f64> {
    let n = policy.n;
    let mut grad = vec![0.0; policy.num_params()];
    let mut s = VertexSet::full(n);
    let mut to_go: f64 = traj.total();
    for (t, r) in traj.rewards.iter().enumerate() {
        let a = traj.order[t];
        let adv = to_go - baseline.dot(&features(t, n));
        policy.accumulate_score(s, t, a, adv, &mut grad);
        to_go -= r;
        s.remove(a);
    }
    grad
}

/// Least-squares fit of returns-to-go on the step features.
fn fit_baseline(batch: &[Trajectory], n: usize) -> Vector4<f64> {
    let mut xtx = Matrix4::<f64>::identity() * BASELINE_RIDGE;
    let mut xty = Vector4::<f64>::zeros();
    for traj in batch {
        let mut to_go = traj.total();
        for (t, r) in traj.rewards.iter().enumerate() {
            let phi = features(t, n);
            xtx += phi * phi.transpose();
            xty += phi * to_go;
            to_go -= r;
        }
    }
    Cholesky::new(xtx).map_or(Vector4::zeros(), |c| c.solve(&xty))
}

#[derive(Debug, Clone)]
pub struct PgOutcome {
    pub best_order: Order,
    pub best_cost: usize,
    /// Total reward `-|E|` of every episode, in order.
    pub curve: Vec<f64>,
    pub policy: SoftmaxPolicy,
}

/// REINFORCE with a linear baseline on the elimination process. Episode `k`
/// draws from its own seed derived from `cfg.seed` and `k`.
pub fn rol_pg<T: CiTester>(search: &mut NeighborSearch<T>, cfg: &PgConfig) -> Result<PgOutcome> {
    if cfg.episodes == 0 || cfg.batch_size == 0 {
        return Err(Error::invalid("episodes and batch_size must be positive"));
    }
    if !cfg.learning_rate.is_finite() {
        return Err(Error::invalid(format!(
            "learning rate {}",
            cfg.learning_rate
        )));
    }
    let n = search.num_vars();
    let buckets = cfg.step_buckets.unwrap_or(n).max(1);
    let mut policy = SoftmaxPolicy::new(n, buckets, cfg.temperature)?;
    let mut baseline = Vector4::zeros();
    let mut best: Option<(usize, Order)> = None;
    let mut curve = Vec::with_capacity(cfg.episodes);
    let mut episode = 0;
    while episode < cfg.episodes {
        let size = cfg.batch_size.min(cfg.episodes - episode);
        let mut batch = Vec::with_capacity(size);
        for _ in 0..size {
            let mut rng =
                ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, Stream::Episode, episode as u64));
            let traj = rollout(&policy, search, &mut rng)?;
            let cost = -traj.total() as usize;
            curve.push(traj.total());
            if best.as_ref().is_none_or(|(c, _)| cost < *c) {
                best = Some((cost, traj.order.clone()));
            }
            batch.push(traj);
            episode += 1;
        }
        let mut grad = vec![0.0; policy.num_params()];
        for traj in &batch {
            for (g, s) in grad.iter_mut().zip(score(&policy, traj, &baseline)) {
                *g += s / size as f64;
            }
        }
        if let Some(i) = grad.iter().position(|g| !g.is_finite()) {
            return Err(Error::NonFinite(format!("policy gradient component {i}")));
        }
        if cfg.learning_rate != 0.0 {
            let p: Vec<f64> = policy
                .params()
                .iter()
                .zip(&grad)
                .map(|(p, g)| p + cfg.learning_rate * g)
                .collect();
            policy.set_params(&p)?;
        }
        baseline = fit_baseline(&batch, n);
    }
    let (best_cost, best_order) = best.expect("at least one episode");
    Ok(PgOutcome {
        best_order,
        best_cost,
        curve,
        policy,
    })
}

/// Expected total reward `E[-|E^π|]` under `policy`, by enumerating orders.
pub fn exact_objective<T: CiTester>(
    policy: &SoftmaxPolicy,
    search: &mut NeighborSearch<T>,
) -> Result<f64> {
    let n = policy.n;
    if n > EXACT_OBJECTIVE_CAP {
        return Err(Error::Capacity {
            what: "exact policy objective",
            n,
            cap: EXACT_OBJECTIVE_CAP,
        });
    }
    let mut j = 0.0;
    for pi in all_orders(n) {
        j -= libm::exp(policy.log_prob(&pi)) * search.cost(&pi)? as f64;
    }
    Ok(j)
}

/// Monte Carlo REINFORCE gradient with per-component standard errors.
#[derive(Debug, Clone)]
pub struct GradientEstimate {
    pub mean: Vec<f64>,
    pub std_err: Vec<f64>,
    /// Per-episode score vectors.
    pub samples: Vec<Vec<f64>>,
}

impl GradientEstimate {
    /// Mean and standard error of the estimate projected onto `direction`.
    pub fn along(&self, direction: &[f64]) -> (f64, f64) {
        let proj: Vec<f64> = self
            .samples
            .iter()
            .map(|g| g.iter().zip(direction).map(|(a, b)| a * b).sum())
            .collect();
        let m = proj.len() as f64;
        let mean = proj.iter().sum::<f64>() / m;
        let var = proj.iter().map(|p| (p - mean) * (p - mean)).sum::<f64>() / (m - 1.0);
        (mean, libm::sqrt(var / m))
    }
}

/// Estimates `∇ E[-|E^π|]` for a frozen policy from `episodes` rollouts,
/// with a fixed linear baseline `[1, t/n, (t/n)^2, |s|/n] · baseline`.
pub fn estimate_gradient<T: CiTester>(
    policy: &SoftmaxPolicy,
    search: &mut NeighborSearch<T>,
    episodes: usize,
    seed: u64,
    baseline: [f64; 4],
) -> Result<GradientEstimate> {
    if episodes < 2 {
        return Err(Error::invalid("need at least two episodes"));
    }
    let baseline = Vector4::from(baseline);
    let k = policy.num_params();
    let mut sum = vec![0.0; k];
    let mut sum_sq = vec![0.0; k];
    let mut samples = Vec::with_capacity(episodes);
    for e in 0..episodes {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, Stream::Episode, e as u64));
        let traj = rollout(policy, search, &mut rng)?;
        let g = score(policy, &traj, &baseline);
        for (i, &gi) in g.iter().enumerate() {
            sum[i] += gi;
            sum_sq[i] += gi * gi;
        }
        samples.push(g);
    }
    let m = episodes as f64;
    let mean: Vec<f64> = sum.iter().map(|s| s / m).collect();
    let std_err = sum_sq
        .iter()
        .zip(&mean)
        .map(|(sq, mu)| libm::sqrt(((sq / m - mu * mu) * m / (m - 1.0)).max(0.0) / m))
        .collect();
    Ok(GradientEstimate {
        mean,
        std_err,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ci::OracleTester;
    use crate::graph::fixtures::*;

    #[test]
    fn probabilities_are_a_distribution() {
        let mut p = SoftmaxPolicy::new(4, 2, 0.7).unwrap();
        let params: Vec<f64> = (0..p.num_params())
            .map(|i| (i as f64 * 0.37).sin())
            .collect();
        p.set_params(&params).unwrap();
        let s: VertexSet = [0, 2, 3].into_iter().collect();
        let probs = p.probabilities(s, 1);
        assert_eq!(probs.iter().map(|&(v, _)| v).collect::<Vec<_>>(), [0, 2, 3]);
        assert!((probs.iter().map(|&(_, q)| q).sum::<f64>() - 1.0).abs() < 1e-12);
        let total: f64 = all_orders(4).map(|o| libm::exp(p.log_prob(&o))).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_learning_rate_keeps_policy() {
        let t = OracleTester::new(chain3()).unwrap();
        let cfg = PgConfig {
            learning_rate: 0.0,
            episodes: 40,
            ..PgConfig::default()
        };
        let out = rol_pg(&mut NeighborSearch::new(&t), &cfg).unwrap();
        assert!(out.policy.params().iter().all(|&p| p == 0.0));
        assert_eq!(out.curve.len(), 40);
    }

    #[test]
    fn g1_rewards_are_constant() {
        let t = OracleTester::new(g1()).unwrap();
        let cfg = PgConfig {
            episodes: 60,
            ..PgConfig::default()
        };
        let out = rol_pg(&mut NeighborSearch::new(&t), &cfg).unwrap();
        assert!(out.curve.iter().all(|&r| r == -5.0));
        assert_eq!(out.best_cost, 5);
    }

    #[test]
    fn chain_reaches_optimum() {
        let t = OracleTester::new(chain3()).unwrap();
        let mut s = NeighborSearch::new(&t);
        for seed in 0..10 {
            let out = rol_pg(
                &mut s,
                &PgConfig {
                    seed,
                    ..PgConfig::default()
                },
            )
            .unwrap();
            assert_eq!(out.best_cost, 2);
            assert_eq!(s.cost(&out.best_order).unwrap(), 2);
        }
    }

    #[test]
    fn rejects_bad_config() {
        let t = OracleTester::new(chain3()).unwrap();
        let mut s = NeighborSearch::new(&t);
        assert!(rol_pg(
            &mut s,
            &PgConfig {
                episodes: 0,
                ..PgConfig::default()
            }
        )
        .is_err());
        assert!(rol_pg(
            &mut s,
            &PgConfig {
                temperature: 0.0,
                ..PgConfig::default()
            }
        )
        .is_err());
        assert!(rol_pg(
            &mut s,
            &PgConfig {
                learning_rate: f64::NAN,
                ..PgConfig::default()
            }
        )
        .is_err());
    }
}
