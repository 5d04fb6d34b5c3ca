use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rol::error::Error;
use rol::experiment::{
    generate, run, ExperimentConfig, GraphSource, InitChoice, Latents, MetricsRow, SearcherConfig,
    TesterConfig,
};
use rol::io::{parse_edge_list, parse_pag, read_edge_list, save_edge_list, write_csv, NamedGraph};
use rol::selfcheck::{selfcheck, SelfcheckOptions};
use rol_core::graph::Skeleton;

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_CONFIG: u8 = 2;

#[derive(Parser)]
#[command(
    name = "rol",
    version,
    about = "Structure learning over removable orders"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run replicated experiments and write a JSON report.
    Run(RunArgs),
    /// Check the implementation against exhaustive oracles.
    Selfcheck(SelfcheckArgs),
    /// Write the DAG, MAG and (for Fisher-Z) data of one replication.
    Gen(GenArgs),
    /// Compare a learned graph with a true one.
    Score(ScoreArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum TesterKind {
    Oracle,
    FisherZ,
}

#[derive(Clone, Copy, ValueEnum)]
enum SearcherKind {
    Hc,
    Vi,
    Pg,
}

#[derive(Clone, Copy, ValueEnum)]
enum InitArg {
    Random,
    MbSizeSort,
    MbRecursive,
}

impl From<InitArg> for InitChoice {
    fn from(a: InitArg) -> Self {
        match a {
            InitArg::Random => InitChoice::Random,
            InitArg::MbSizeSort => InitChoice::MbSizeSort,
            InitArg::MbRecursive => InitChoice::MbRecursive,
        }
    }
}

/// Configuration file plus flag overrides.
#[derive(Args)]
struct ConfigArgs {
    /// JSON configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Erdős–Rényi vertex count.
    #[arg(long, conflicts_with_all = ["network", "graph_file"])]
    er_n: Option<usize>,
    /// Erdős–Rényi edge probability (default n^-0.7).
    #[arg(long)]
    er_p: Option<f64>,
    /// Bundled network name.
    #[arg(long, conflicts_with = "graph_file")]
    network: Option<String>,
    /// Edge-list file.
    #[arg(long)]
    graph_file: Option<PathBuf>,
    /// Number of latent vertices.
    #[arg(long, conflicts_with = "latent_fraction")]
    latents: Option<usize>,
    /// Fraction of vertices made latent.
    #[arg(long)]
    latent_fraction: Option<f64>,
    #[arg(long, value_enum)]
    tester: Option<TesterKind>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Sample size (default 50 per observed variable).
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    max_sep_size: Option<usize>,
    #[arg(long, value_enum)]
    searcher: Option<SearcherKind>,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    max_swap: Option<usize>,
    #[arg(long, value_enum)]
    init: Option<InitArg>,
    #[arg(long)]
    vi_cap: Option<usize>,
    #[arg(long)]
    episodes: Option<usize>,
    #[arg(long)]
    batch_size: Option<usize>,
    #[arg(long)]
    learning_rate: Option<f64>,
    #[arg(long)]
    temperature: Option<f64>,
    #[arg(long)]
    step_buckets: Option<usize>,
    #[arg(long)]
    replications: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// Worker threads (default: all cores).
    #[arg(long)]
    workers: Option<usize>,
    /// Report path.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Print the report to stdout instead of the summary table.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SelfcheckArgs {
    /// Largest instance size for exhaustive checks.
    #[arg(long, default_value_t = 6)]
    n_cap: usize,
    /// Directory with golden.json and its edge lists.
    #[arg(long)]
    fixtures: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Print results as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// Replication index to reproduce.
    #[arg(long, default_value_t = 0)]
    index: usize,
    /// Output directory for dag.edges, mag.edges and data.csv.
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args)]
struct ScoreArgs {
    /// Learned graph: an edge list or PAG lines over the true names.
    learned: PathBuf,
    /// True graph as an edge list.
    truth: PathBuf,
}

impl ConfigArgs {
    fn resolve(&self) -> Result<ExperimentConfig, Error> {
        let mut c = match &self.config {
            Some(p) => ExperimentConfig::load(p)?,
            None => ExperimentConfig::default(),
        };
        if let Some(n) = self.er_n {
            c.graph = GraphSource::ErdosRenyi { n, p: self.er_p };
        } else if let Some(p) = self.er_p {
            match &mut c.graph {
                GraphSource::ErdosRenyi { p: old, .. } => *old = Some(p),
                _ => return Err(Error::Config("--er-p needs an Erdős–Rényi graph".into())),
            }
        }
        if let Some(name) = &self.network {
            c.graph = GraphSource::Network { name: name.clone() };
        }
        if let Some(path) = &self.graph_file {
            c.graph = GraphSource::File { path: path.clone() };
        }
        if let Some(k) = self.latents {
            c.latents = (k > 0).then_some(Latents::Count(k));
        }
        if let Some(f) = self.latent_fraction {
            c.latents = Some(Latents::Fraction(f));
        }
        match self.tester {
            Some(TesterKind::Oracle) => c.tester = TesterConfig::Oracle,
            Some(TesterKind::FisherZ) if !matches!(c.tester, TesterConfig::FisherZ { .. }) => {
                c.tester = TesterConfig::FisherZ {
                    alpha: rol_core::ci::DEFAULT_ALPHA,
                    samples: None,
                    max_sep_size: None,
                }
            }
            _ => {}
        }
        if self.alpha.is_some() || self.samples.is_some() || self.max_sep_size.is_some() {
            let TesterConfig::FisherZ {
                alpha,
                samples,
                max_sep_size,
            } = &mut c.tester
            else {
                return Err(Error::Config(
                    "--alpha, --samples and --max-sep-size need --tester fisher-z".into(),
                ));
            };
            if let Some(a) = self.alpha {
                *alpha = a;
            }
            if self.samples.is_some() {
                *samples = self.samples;
            }
            if self.max_sep_size.is_some() {
                *max_sep_size = self.max_sep_size;
            }
        }
        let kind = |s: &SearcherConfig| match s {
            SearcherConfig::Hc { .. } => SearcherKind::Hc,
            SearcherConfig::Vi { .. } => SearcherKind::Vi,
            SearcherConfig::Pg { .. } => SearcherKind::Pg,
        };
        if let Some(k) = self.searcher {
            if std::mem::discriminant(&k) != std::mem::discriminant(&kind(&c.searcher)) {
                c.searcher = match k {
                    SearcherKind::Hc => SearcherConfig::hc(),
                    SearcherKind::Vi => SearcherConfig::vi(),
                    SearcherKind::Pg => SearcherConfig::pg(),
                };
            }
        }
        self.apply_searcher_flags(&mut c.searcher)?;
        if let Some(r) = self.replications {
            c.replications = r;
        }
        if let Some(s) = self.seed {
            c.seed = s;
        }
        Ok(c)
    }

    fn apply_searcher_flags(&self, s: &mut SearcherConfig) -> Result<(), Error> {
        let misplaced =
            |flag: &str, needs: &str| Error::Config(format!("{flag} needs --searcher {needs}"));
        let hc_flags = self.max_iter.is_some() || self.max_swap.is_some() || self.init.is_some();
        let vi_flags = self.vi_cap.is_some();
        let pg_flags = self.episodes.is_some()
            || self.batch_size.is_some()
            || self.learning_rate.is_some()
            || self.temperature.is_some()
            || self.step_buckets.is_some();
        match s {
            SearcherConfig::Hc {
                max_iter,
                max_swap,
                init,
            } => {
                if vi_flags {
                    return Err(misplaced("--vi-cap", "vi"));
                }
                if pg_flags {
                    return Err(misplaced("policy-gradient flags", "pg"));
                }
                *max_iter = self.max_iter.unwrap_or(*max_iter);
                *max_swap = self.max_swap.unwrap_or(*max_swap);
                *init = self.init.map_or(*init, Into::into);
            }
            SearcherConfig::Vi { cap } => {
                if hc_flags {
                    return Err(misplaced("hill-climbing flags", "hc"));
                }
                if pg_flags {
                    return Err(misplaced("policy-gradient flags", "pg"));
                }
                *cap = self.vi_cap.unwrap_or(*cap);
            }
            SearcherConfig::Pg {
                episodes,
                batch_size,
                learning_rate,
                temperature,
                step_buckets,
            } => {
                if hc_flags {
                    return Err(misplaced("hill-climbing flags", "hc"));
                }
                if vi_flags {
                    return Err(misplaced("--vi-cap", "vi"));
                }
                *episodes = self.episodes.unwrap_or(*episodes);
                *batch_size = self.batch_size.unwrap_or(*batch_size);
                *learning_rate = self.learning_rate.unwrap_or(*learning_rate);
                *temperature = self.temperature.unwrap_or(*temperature);
                if self.step_buckets.is_some() {
                    *step_buckets = self.step_buckets;
                }
            }
        }
        Ok(())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Selfcheck(a) => cmd_selfcheck(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Score(a) => cmd_score(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}

fn cmd_run(a: RunArgs) -> Result<u8, Error> {
    let mut config = a.config.resolve()?;
    if a.workers.is_some() {
        config.workers = a.workers;
    }
    if a.output.is_some() {
        config.output = a.output;
    }
    let report = run(&config)?;
    let json = report.to_json();
    if let Some(path) = &config.output {
        std::fs::write(path, &json).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        })?;
    }
    if a.json {
        println!("{json}");
    } else {
        print!("{}", report.summary_table());
    }
    Ok(0)
}

fn cmd_selfcheck(a: SelfcheckArgs) -> Result<u8, Error> {
    let opts = SelfcheckOptions {
        n_cap: a.n_cap,
        fixtures: a.fixtures,
        seed: a.seed,
        ..SelfcheckOptions::default()
    };
    let results = selfcheck(&opts)?;
    if a.json {
        println!("{}", serde_json::to_string_pretty(&results)?);
    } else {
        for r in &results {
            let status = if r.passed { "PASS" } else { "FAIL" };
            println!("{status} {} ({:.0} ms): {}", r.name, r.elapsed_ms, r.detail);
        }
    }
    let failed: Vec<&str> = results
        .iter()
        .filter(|r| !r.passed)
        .map(|r| r.name.as_str())
        .collect();
    if failed.is_empty() {
        Ok(0)
    } else {
        eprintln!("failed checks: {}", failed.join(", "));
        Ok(EXIT_CHECK_FAILED)
    }
}

fn cmd_gen(a: GenArgs) -> Result<u8, Error> {
    let config = a.config.resolve()?;
    let g = generate(&config, a.index)?;
    std::fs::create_dir_all(&a.out_dir).map_err(|source| Error::Io {
        path: a.out_dir.clone(),
        source,
    })?;
    save_edge_list(&a.out_dir.join("dag.edges"), &g.dag)?;
    save_edge_list(&a.out_dir.join("mag.edges"), &g.mag)?;
    if let Some(ds) = &g.data {
        let path = a.out_dir.join("data.csv");
        std::fs::write(&path, write_csv(ds)?).map_err(|source| Error::Io { path, source })?;
    }
    println!("wrote {}", a.out_dir.display());
    Ok(0)
}

/// Skeleton of `learned` re-indexed by the vertex names of `truth`.
fn aligned_skeleton(text: &str, truth: &NamedGraph) -> Result<Skeleton, Error> {
    let learned = match parse_edge_list(text) {
        Ok(g) => g,
        Err(edge_err) => {
            return parse_pag(text, &truth.names)
                .map(|p| p.skeleton())
                .map_err(|_| edge_err)
        }
    };
    if learned.graph.num_vertices() != truth.graph.num_vertices() {
        return Err(Error::Config(format!(
            "learned graph has {} vertices, truth has {}",
            learned.graph.num_vertices(),
            truth.graph.num_vertices()
        )));
    }
    let map = learned
        .names
        .iter()
        .map(|n| {
            truth
                .index_of(n)
                .ok_or_else(|| Error::Config(format!("vertex `{n}` not in the true graph")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut s = Skeleton::new(truth.graph.num_vertices());
    for (a, b) in learned.graph.skeleton().edges() {
        s.add_edge(map[a], map[b]);
    }
    Ok(s)
}

fn cmd_score(a: ScoreArgs) -> Result<u8, Error> {
    let truth = read_edge_list(&a.truth)?;
    let text = std::fs::read_to_string(&a.learned).map_err(|source| Error::Io {
        path: a.learned.clone(),
        source,
    })?;
    let learned = aligned_skeleton(&text, &truth)?;
    let m: MetricsRow = rol_core::data::score(&learned, &truth.graph.skeleton())?.into();
    println!("{}", serde_json::to_string_pretty(&m)?);
    Ok(0)
}
