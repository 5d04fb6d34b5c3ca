//! Oracle property suite runnable from the command line.
//!
//! Golden cases are read from a fixture directory (bundled by default); the
//! remaining checks draw random DAGs and MAGs and compare every searcher and
//! order predicate against exhaustive enumeration.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use rol_core::ci::OracleTester;
use rol_core::data::{derive_seed, gen_erdos_renyi_dag, make_latent_instance, LatentSpec, Stream};
use rol_core::discovery::NeighborSearch;
use rol_core::graph::MixedGraph;
use rol_core::orders::{
    all_orders, enumerate_c_orders, enumerate_r_orders, markov_equivalent_dags, Order,
    DEFAULT_ENUMERATION_CAP,
};
use rol_core::search::{rol_hc, rol_vi, HcConfig, InitMode, DEFAULT_VI_CAP};
use serde::{Deserialize, Serialize};

use crate::error::{read_to_string, Error, Result};
use crate::io::{parse_edge_list, NamedGraph};
use crate::networks;

const BUNDLED_FIXTURES: &[(&str, &str)] = &[
    ("golden.json", include_str!("../fixtures/golden.json")),
    (
        "four_vertex_g1.edges",
        include_str!("../fixtures/four_vertex_g1.edges"),
    ),
    (
        "four_vertex_g2.edges",
        include_str!("../fixtures/four_vertex_g2.edges"),
    ),
    ("chain3.edges", include_str!("../fixtures/chain3.edges")),
    (
        "collider3.edges",
        include_str!("../fixtures/collider3.edges"),
    ),
];

#[derive(Debug, Clone)]
pub struct SelfcheckOptions {
    /// Largest instance size for exhaustive checks.
    pub n_cap: usize,
    /// Fixture directory overriding the bundled golden cases.
    pub fixtures: Option<PathBuf>,
    pub seed: u64,
    /// Random instances per kind (DAG, MAG) in each exhaustive check.
    pub instances: usize,
}

impl Default for SelfcheckOptions {
    fn default() -> Self {
        SelfcheckOptions {
            n_cap: 6,
            fixtures: None,
            seed: 0,
            instances: 50,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: f64,
}

#[derive(Debug, Deserialize)]
struct GoldenFile {
    cases: Vec<GoldenCase>,
}

#[derive(Debug, Deserialize)]
struct GoldenCase {
    name: String,
    graph: String,
    c_orders: Vec<Vec<String>>,
    r_order_count: usize,
    #[serde(default)]
    disjoint_from: Option<String>,
}

fn fixture(dir: Option<&Path>, file: &str) -> Result<String> {
    match dir {
        Some(d) => read_to_string(&d.join(file)),
        None => BUNDLED_FIXTURES
            .iter()
            .find(|(n, _)| *n == file)
            .map(|(_, text)| text.to_string())
            .ok_or_else(|| Error::config(format!("no bundled fixture `{file}`"))),
    }
}

fn timed(
    name: impl Into<String>,
    f: impl FnOnce() -> std::result::Result<String, String>,
) -> CheckResult {
    let start = Instant::now();
    let outcome = f();
    CheckResult {
        name: name.into(),
        passed: outcome.is_ok(),
        detail: outcome.unwrap_or_else(|e| e),
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    }
}

/// Runs every check. Errors only for invalid options; a bad fixture fails
/// the check that reads it.
pub fn selfcheck(opts: &SelfcheckOptions) -> Result<Vec<CheckResult>> {
    if !(2..=DEFAULT_ENUMERATION_CAP).contains(&opts.n_cap) {
        return Err(Error::config(format!(
            "n cap {} outside 2..={DEFAULT_ENUMERATION_CAP}",
            opts.n_cap
        )));
    }
    if opts.instances == 0 {
        return Err(Error::config("instances must be positive"));
    }
    let mut results = golden_checks(opts.fixtures.as_deref());
    results.push(timed("bundled_networks", check_networks));
    let instances = random_instances(opts);
    results.push(timed("order_theorems", || {
        check_order_theorems(&instances, opts.n_cap)
    }));
    let dags: Vec<MixedGraph> = instances.iter().filter(|g| g.is_dag()).cloned().collect();
    results.push(timed("order_propositions", || check_propositions(&dags)));
    results.push(timed("value_iteration_optimal", || check_vi(&instances)));
    results.push(timed("hill_climbing_monotone", || check_hc(&instances)));
    Ok(results)
}

fn golden_checks(dir: Option<&Path>) -> Vec<CheckResult> {
    let file: GoldenFile = match fixture(dir, "golden.json")
        .and_then(|t| serde_json::from_str(&t).map_err(Error::from))
    {
        Ok(f) => f,
        Err(e) => {
            return vec![CheckResult {
                name: "golden".into(),
                passed: false,
                detail: format!("golden.json: {e}"),
                elapsed_ms: 0.0,
            }]
        }
    };
    let load = |case: &GoldenCase| -> std::result::Result<NamedGraph, String> {
        fixture(dir, &case.graph)
            .and_then(|t| parse_edge_list(&t))
            .map_err(|e| format!("{}: {e}", case.graph))
    };
    let c_orders = |case: &GoldenCase| -> std::result::Result<BTreeSet<Vec<String>>, String> {
        let g = load(case)?;
        Ok(enumerate_c_orders(&g.graph)
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|o| o.as_slice().iter().map(|&v| g.names[v].clone()).collect())
            .collect())
    };
    file.cases
        .iter()
        .map(|case| {
            timed(format!("golden:{}", case.name), || {
                let g = load(case)?;
                let found = c_orders(case)?;
                let expected: BTreeSet<Vec<String>> = case.c_orders.iter().cloned().collect();
                if found != expected {
                    return Err(format!("c-orders {found:?}, expected {expected:?}"));
                }
                let r = enumerate_r_orders(&g.graph).map_err(|e| e.to_string())?;
                if r.len() != case.r_order_count {
                    return Err(format!(
                        "{} r-orders, expected {}",
                        r.len(),
                        case.r_order_count
                    ));
                }
                if let Some(other) = &case.disjoint_from {
                    let o = file
                        .cases
                        .iter()
                        .find(|c| &c.name == other)
                        .ok_or_else(|| format!("unknown case `{other}`"))?;
                    if !found.is_disjoint(&c_orders(o)?) {
                        return Err(format!("c-orders intersect those of {other}"));
                    }
                }
                Ok(format!("{} c-orders, {} r-orders", found.len(), r.len()))
            })
        })
        .collect()
}

fn check_networks() -> std::result::Result<String, String> {
    let mut n = 0;
    for name in networks::names() {
        let g = networks::load(name).map_err(|e| format!("{name}: {e}"))?;
        if !g.graph.is_dag() {
            return Err(format!("{name} is not a DAG"));
        }
        n += 1;
    }
    Ok(format!("{n} networks match their manifests"))
}

/// DAGs and latent-projected MAGs with sizes cycling through `2..=n_cap`,
/// the last of each kind at `n_cap`.
fn random_instances(opts: &SelfcheckOptions) -> Vec<MixedGraph> {
    let mut out = Vec::new();
    for i in 0..opts.instances {
        let n = if i + 1 == opts.instances {
            opts.n_cap
        } else {
            2 + i % (opts.n_cap - 1)
        };
        let p = 0.5;
        let s = derive_seed(opts.seed, Stream::Graph, i as u64);
        out.push(gen_erdos_renyi_dag(n, p, s).expect("valid ER parameters"));
        let latents = 1 + i % 2;
        let dag = gen_erdos_renyi_dag(n + latents, p, s ^ 1).expect("valid ER parameters");
        let inst = make_latent_instance(
            &dag,
            LatentSpec::Count(latents),
            derive_seed(opts.seed, Stream::Latent, i as u64),
        )
        .expect("latent count below vertex count");
        out.push(inst.mag);
    }
    out
}

fn check_order_theorems(
    instances: &[MixedGraph],
    n_cap: usize,
) -> std::result::Result<String, String> {
    let orders: usize = instances
        .par_iter()
        .enumerate()
        .map(|(i, g)| -> std::result::Result<usize, String> {
            let r = enumerate_r_orders(g).map_err(|e| e.to_string())?;
            let truth = g.skeleton();
            let t = OracleTester::new(g.clone()).map_err(|e| e.to_string())?;
            let mut s = NeighborSearch::new(&t);
            let mut best = usize::MAX;
            let mut minimizers = BTreeSet::new();
            let mut count = 0;
            for pi in all_orders(g.num_vertices()) {
                let res = s.learn_g_pi(&pi).map_err(|e| e.to_string())?;
                let is_r = r.contains(&pi);
                if is_r != (res.skeleton == truth) {
                    return Err(format!(
                        "instance {i}: order {pi} recovers skeleton = {}",
                        !is_r
                    ));
                }
                let c = res.cost();
                if c < best {
                    best = c;
                    minimizers.clear();
                }
                if c == best {
                    minimizers.insert(pi);
                }
                count += 1;
            }
            if minimizers != r {
                return Err(format!(
                    "instance {i}: cost minimizers differ from r-orders"
                ));
            }
            Ok(count)
        })
        .sum::<std::result::Result<usize, String>>()?;
    Ok(format!(
        "{} instances up to n = {n_cap}, {orders} orders",
        instances.len()
    ))
}

fn check_propositions(dags: &[MixedGraph]) -> std::result::Result<String, String> {
    for (i, g) in dags.iter().enumerate() {
        let class = markov_equivalent_dags(g).map_err(|e| e.to_string())?;
        let r = enumerate_r_orders(g).map_err(|e| e.to_string())?;
        let cs: Vec<BTreeSet<Order>> = class
            .iter()
            .map(|h| enumerate_c_orders(h).map_err(|e| e.to_string()))
            .collect::<std::result::Result<_, _>>()?;
        for (j, h) in class.iter().enumerate() {
            if !cs[j].is_subset(&r) {
                return Err(format!("DAG {i}: c-orders not contained in r-orders"));
            }
            if enumerate_r_orders(h).map_err(|e| e.to_string())? != r {
                return Err(format!(
                    "DAG {i}: r-orders differ across the equivalence class"
                ));
            }
            if cs[j + 1..].iter().any(|c| !c.is_disjoint(&cs[j])) {
                return Err(format!("DAG {i}: equivalent DAGs share a c-order"));
            }
        }
    }
    Ok(format!("{} DAGs", dags.len()))
}

fn check_vi(instances: &[MixedGraph]) -> std::result::Result<String, String> {
    for (i, g) in instances.iter().enumerate() {
        let t = OracleTester::new(g.clone()).map_err(|e| e.to_string())?;
        let mut s = NeighborSearch::new(&t);
        let vi = rol_vi(&mut s, DEFAULT_VI_CAP).map_err(|e| e.to_string())?;
        let brute = all_orders(g.num_vertices())
            .map(|pi| s.cost(&pi))
            .collect::<rol_core::Result<Vec<_>>>()
            .map_err(|e| e.to_string())?
            .into_iter()
            .min()
            .unwrap_or(0);
        if vi.total_cost != brute {
            return Err(format!(
                "instance {i}: VI cost {} vs minimum {brute}",
                vi.total_cost
            ));
        }
    }
    Ok(format!("{} instances", instances.len()))
}

fn check_hc(instances: &[MixedGraph]) -> std::result::Result<String, String> {
    for (i, g) in instances.iter().enumerate() {
        let t = OracleTester::new(g.clone()).map_err(|e| e.to_string())?;
        let mut s = NeighborSearch::new(&t);
        let cfg = HcConfig {
            init: InitMode::Random,
            seed: i as u64,
            ..HcConfig::default()
        };
        let out = rol_hc(&mut s, &cfg).map_err(|e| e.to_string())?;
        let mut last = out.initial_cost;
        for st in &out.trace {
            if st.cost > last || (st.swap.is_some() && st.cost == last) {
                return Err(format!(
                    "instance {i}: cost trace not decreasing at iteration {}",
                    st.iteration
                ));
            }
            last = st.cost;
        }
    }
    Ok(format!("{} runs", instances.len()))
}
