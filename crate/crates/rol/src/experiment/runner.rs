use std::time::Instant;

use rayon::prelude::*;
use rol_core::ci::{CiTester, FisherZTester, OracleTester};
use rol_core::data::{
    derive_seed, gen_erdos_renyi_dag, make_latent_instance, sample_sem, score, SemSpec, Stream,
};
use rol_core::discovery::{orient, NeighborSearch, SkeletonResult};
use rol_core::graph::MixedGraph;
use rol_core::search::{rol_hc, rol_pg, rol_vi, HcConfig, PgConfig};

use super::config::{ExperimentConfig, GraphSource, SearcherConfig, TesterConfig};
use super::report::{HcStepRow, Outcome, ReplicationRow, RowResult, RunReport, Trace};
use crate::error::{Error, Result};
use crate::io::{load_network, pag_lines, Dataset, NamedGraph};
use crate::networks;

/// Graph shared by every replication, when the source is fixed.
enum Base {
    Fixed(NamedGraph),
    Random { n: usize, p: f64 },
}

impl Base {
    fn load(src: &GraphSource) -> Result<Self> {
        Ok(match src {
            GraphSource::ErdosRenyi { n, p } => Base::Random {
                n: *n,
                p: GraphSource::er_probability(*n, *p),
            },
            GraphSource::Network { name } => Base::Fixed(networks::load(name)?),
            GraphSource::File { path } => Base::Fixed(load_network(path)?),
        })
    }

    fn graph(&self, seed: u64, index: usize) -> Result<NamedGraph> {
        match self {
            Base::Fixed(g) => Ok(g.clone()),
            Base::Random { n, p } => Ok(NamedGraph::unnamed(gen_erdos_renyi_dag(
                *n,
                *p,
                derive_seed(seed, Stream::Graph, index as u64),
            )?)),
        }
    }
}

/// Runs every replication and assembles the report in index order.
///
/// Configuration problems (including an unreadable graph file) are returned
/// as errors; failures inside a replication are recorded in its row.
pub fn run(config: &ExperimentConfig) -> Result<RunReport> {
    config.validate()?;
    let base = Base::load(&config.graph).map_err(|e| match e {
        Error::Core(_) | Error::Config(_) => e,
        other => Error::config(other.to_string()),
    })?;
    if let (Base::Fixed(g), TesterConfig::FisherZ { .. }) = (&base, &config.tester) {
        if !g.graph.is_dag() {
            return Err(Error::config(
                "Fisher-Z runs sample from a SEM and need a DAG",
            ));
        }
    }
    if let (Base::Fixed(g), Some(_)) = (&base, &config.latents) {
        if !g.graph.is_dag() {
            return Err(Error::config("latent projection needs a DAG"));
        }
    }
    let work = |i: usize| replicate(config, &base, i);
    let rows: Vec<ReplicationRow> = match config.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| Error::config(e.to_string()))?
            .install(|| (0..config.replications).into_par_iter().map(work).collect()),
        None => (0..config.replications).into_par_iter().map(work).collect(),
    };
    Ok(RunReport::new(config.clone(), rows))
}

/// The inputs replication `index` of `config` works on.
#[derive(Debug, Clone)]
pub struct Generated {
    pub dag: NamedGraph,
    /// MAG over the observed vertices, keeping their DAG names.
    pub mag: NamedGraph,
    /// Observed samples, for Fisher-Z configurations.
    pub data: Option<Dataset>,
}

/// Rebuilds the graph, projection and sample of one replication.
pub fn generate(config: &ExperimentConfig, index: usize) -> Result<Generated> {
    config.validate()?;
    let base = Base::load(&config.graph)?;
    let inst = instance(config, &base, index)?;
    let names: Vec<String> = inst
        .observed
        .iter()
        .map(|&v| inst.dag.names[v].clone())
        .collect();
    let data = match &config.tester {
        TesterConfig::Oracle => None,
        TesterConfig::FisherZ { samples, .. } => Some(Dataset {
            names: names.clone(),
            data: simulate(config.seed, index, &inst, *samples)?,
        }),
    };
    Ok(Generated {
        mag: NamedGraph {
            names,
            graph: inst.mag.clone(),
        },
        dag: inst.dag,
        data,
    })
}

/// Instance for one replication: the MAG over the observed vertices and,
/// for sampling, the generating DAG.
struct Instance {
    dag: NamedGraph,
    mag: MixedGraph,
    observed: Vec<usize>,
    latent: Vec<String>,
}

fn instance(config: &ExperimentConfig, base: &Base, index: usize) -> Result<Instance> {
    let dag = base.graph(config.seed, index)?;
    let n = dag.graph.num_vertices();
    match config.latents {
        None => Ok(Instance {
            mag: dag.graph.clone(),
            observed: (0..n).collect(),
            latent: Vec::new(),
            dag,
        }),
        Some(l) => {
            let inst = make_latent_instance(
                &dag.graph,
                l.into(),
                derive_seed(config.seed, Stream::Latent, index as u64),
            )?;
            let latent = inst.latent.iter().map(|v| dag.names[v].clone()).collect();
            Ok(Instance {
                mag: inst.mag,
                observed: inst.observed,
                latent,
                dag,
            })
        }
    }
}

fn replicate(config: &ExperimentConfig, base: &Base, index: usize) -> ReplicationRow {
    let start = Instant::now();
    let mut ci_tests = 0;
    let mut observed = 0;
    let mut latent = Vec::new();
    let result = (|| -> Result<Outcome> {
        let inst = instance(config, base, index)?;
        observed = inst.observed.len();
        latent = inst.latent.clone();
        let names: Vec<String> = inst
            .observed
            .iter()
            .map(|&v| inst.dag.names[v].clone())
            .collect();
        let (skel, trace, queries) = match &config.tester {
            TesterConfig::Oracle => {
                let t = OracleTester::new(inst.mag.clone())?;
                search(
                    &config.searcher,
                    NeighborSearch::new(&t),
                    config.seed,
                    index,
                )
                .map(|(s, tr)| (s, tr, t.query_count()))?
            }
            TesterConfig::FisherZ {
                alpha,
                samples,
                max_sep_size,
            } => {
                let data = simulate(config.seed, index, &inst, *samples)?;
                let t = FisherZTester::new(data, *alpha)?;
                let s = NeighborSearch::new(&t).with_max_sep_size(*max_sep_size);
                search(&config.searcher, s, config.seed, index)
                    .map(|(s, tr)| (s, tr, t.query_count()))?
            }
        };
        ci_tests = queries;
        let truth = inst.mag.skeleton();
        let metrics = score(&skel.skeleton, &truth)?;
        let (pag, orientation_error) = match orient(&skel) {
            Ok(p) => (Some(pag_lines(&p, &names)), None),
            Err(e) => (None, Some(e.to_string())),
        };
        Ok(Outcome {
            metrics: metrics.into(),
            cost: skel.cost(),
            true_edges: truth.num_edges(),
            order: skel
                .order
                .as_slice()
                .iter()
                .map(|&v| names[v].clone())
                .collect(),
            trace,
            pag,
            orientation_error,
        })
    })();
    ReplicationRow {
        index,
        observed,
        latent,
        ci_tests,
        wall_clock_ms: start.elapsed().as_secs_f64() * 1e3,
        result: match result {
            Ok(o) => RowResult::Ok(Box::new(o)),
            Err(e) => RowResult::Error {
                error: e.to_string(),
            },
        },
    }
}

/// Observed columns of a sample from a random SEM over the instance DAG.
fn simulate(
    seed: u64,
    index: usize,
    inst: &Instance,
    samples: Option<usize>,
) -> Result<rol_core::ci::DataMatrix> {
    if !inst.dag.graph.is_dag() {
        return Err(Error::config(
            "Fisher-Z runs sample from a SEM and need a DAG",
        ));
    }
    let i = index as u64;
    let spec = SemSpec::random(
        inst.dag.graph.clone(),
        derive_seed(seed, Stream::Coefficients, 2 * i),
        derive_seed(seed, Stream::Coefficients, 2 * i + 1),
    )?;
    let n = samples.unwrap_or(50 * inst.observed.len());
    let full = sample_sem(&spec, n, derive_seed(seed, Stream::Noise, i))?;
    Ok(full.select_columns(&inst.observed)?)
}

fn search<T: CiTester>(
    cfg: &SearcherConfig,
    mut s: NeighborSearch<T>,
    seed: u64,
    index: usize,
) -> Result<(SkeletonResult, Trace)> {
    let run_seed = derive_seed(seed, Stream::Init, index as u64);
    Ok(match *cfg {
        SearcherConfig::Hc {
            max_iter,
            max_swap,
            init,
        } => {
            let hc = HcConfig {
                max_iter,
                max_swap,
                init: init.into(),
                seed: run_seed,
            };
            let out = rol_hc(&mut s, &hc)?;
            let steps = out
                .trace
                .iter()
                .map(|st| HcStepRow {
                    iteration: st.iteration,
                    cost: st.cost,
                    swap: st.swap,
                })
                .collect();
            let trace = Trace::Hc {
                initial_cost: out.initial_cost,
                steps,
            };
            (out.result, trace)
        }
        SearcherConfig::Vi { cap } => {
            let out = rol_vi(&mut s, cap)?;
            let res = s.learn_g_pi(&out.order)?;
            (
                res,
                Trace::Vi {
                    total_cost: out.total_cost,
                },
            )
        }
        SearcherConfig::Pg {
            episodes,
            batch_size,
            learning_rate,
            temperature,
            step_buckets,
        } => {
            let pg = PgConfig {
                episodes,
                batch_size,
                learning_rate,
                temperature,
                step_buckets,
                seed: run_seed,
            };
            let out = rol_pg(&mut s, &pg)?;
            let res = s.learn_g_pi(&out.best_order)?;
            let trace = Trace::Pg {
                best_cost: out.best_cost,
                rewards: out.curve,
            };
            (res, trace)
        }
    })
}
