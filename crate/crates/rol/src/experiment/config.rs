use std::path::{Path, PathBuf};

use rol_core::data::LatentSpec;
use rol_core::search::{HcConfig, InitMode, PgConfig, DEFAULT_VI_CAP};
use serde::{Deserialize, Serialize};

use crate::error::{read_to_string, Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GraphSource {
    /// Erdős–Rényi DAG; `p` defaults to `n^-0.7`.
    ErdosRenyi {
        n: usize,
        #[serde(default)]
        p: Option<f64>,
    },
    /// A bundled network.
    Network { name: String },
    /// An edge-list file (manifest next to it is checked if present).
    File { path: PathBuf },
}

impl GraphSource {
    pub fn er_probability(n: usize, p: Option<f64>) -> f64 {
        p.unwrap_or_else(|| (n.max(1) as f64).powf(-0.7))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Latents {
    Count(usize),
    Fraction(f64),
}

impl From<Latents> for LatentSpec {
    fn from(l: Latents) -> Self {
        match l {
            Latents::Count(k) => LatentSpec::Count(k),
            Latents::Fraction(f) => LatentSpec::Fraction(f),
        }
    }
}

fn default_alpha() -> f64 {
    rol_core::ci::DEFAULT_ALPHA
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TesterConfig {
    /// m-separation in the true MAG.
    Oracle,
    /// Fisher-Z on samples from a random linear-Gaussian SEM over the DAG.
    FisherZ {
        #[serde(default = "default_alpha")]
        alpha: f64,
        /// Sample size; defaults to 50 per observed variable.
        #[serde(default)]
        samples: Option<usize>,
        #[serde(default)]
        max_sep_size: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitChoice {
    Random,
    MbSizeSort,
    MbRecursive,
}

impl From<InitChoice> for InitMode {
    fn from(c: InitChoice) -> Self {
        match c {
            InitChoice::Random => InitMode::Random,
            InitChoice::MbSizeSort => InitMode::MbSizeSort,
            InitChoice::MbRecursive => InitMode::MbRecursive,
        }
    }
}

fn hc_default() -> HcConfig {
    HcConfig::default()
}

fn pg_default() -> PgConfig {
    PgConfig::default()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SearcherConfig {
    Hc {
        #[serde(default = "default_max_iter")]
        max_iter: usize,
        #[serde(default = "default_max_swap")]
        max_swap: usize,
        #[serde(default = "default_init")]
        init: InitChoice,
    },
    Vi {
        #[serde(default = "default_vi_cap")]
        cap: usize,
    },
    Pg {
        #[serde(default = "default_episodes")]
        episodes: usize,
        #[serde(default = "default_batch_size")]
        batch_size: usize,
        #[serde(default = "default_learning_rate")]
        learning_rate: f64,
        #[serde(default = "default_temperature")]
        temperature: f64,
        #[serde(default)]
        step_buckets: Option<usize>,
    },
}

fn default_max_iter() -> usize {
    hc_default().max_iter
}

fn default_max_swap() -> usize {
    hc_default().max_swap
}

fn default_init() -> InitChoice {
    InitChoice::MbRecursive
}

fn default_vi_cap() -> usize {
    DEFAULT_VI_CAP
}

fn default_episodes() -> usize {
    pg_default().episodes
}

fn default_batch_size() -> usize {
    pg_default().batch_size
}

fn default_learning_rate() -> f64 {
    pg_default().learning_rate
}

fn default_temperature() -> f64 {
    pg_default().temperature
}

impl SearcherConfig {
    pub fn hc() -> Self {
        SearcherConfig::Hc {
            max_iter: default_max_iter(),
            max_swap: default_max_swap(),
            init: default_init(),
        }
    }

    pub fn vi() -> Self {
        SearcherConfig::Vi {
            cap: default_vi_cap(),
        }
    }

    pub fn pg() -> Self {
        SearcherConfig::Pg {
            episodes: default_episodes(),
            batch_size: default_batch_size(),
            learning_rate: default_learning_rate(),
            temperature: default_temperature(),
            step_buckets: None,
        }
    }
}

fn default_replications() -> usize {
    10
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub graph: GraphSource,
    #[serde(default)]
    pub latents: Option<Latents>,
    pub tester: TesterConfig,
    pub searcher: SearcherConfig,
    #[serde(default = "default_replications")]
    pub replications: usize,
    #[serde(default)]
    pub seed: u64,
    /// Worker threads for replications; all cores when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            graph: GraphSource::ErdosRenyi { n: 10, p: None },
            latents: None,
            tester: TesterConfig::Oracle,
            searcher: SearcherConfig::hc(),
            replications: default_replications(),
            seed: 0,
            workers: None,
            output: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&read_to_string(path)?)
    }

    /// Checks everything that does not need the graph itself.
    pub fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::config("replications must be at least 1"));
        }
        if self.workers == Some(0) {
            return Err(Error::config("workers must be at least 1"));
        }
        match &self.graph {
            GraphSource::ErdosRenyi { n, p } => {
                if *n == 0 || *n > rol_core::MAX_VERTICES {
                    return Err(Error::config(format!(
                        "ER vertex count {n} outside 1..={}",
                        rol_core::MAX_VERTICES
                    )));
                }
                if p.is_some_and(|p| !(0.0..=1.0).contains(&p)) {
                    return Err(Error::config(format!(
                        "ER probability {p:?} outside [0, 1]"
                    )));
                }
            }
            GraphSource::Network { name } => {
                if !crate::networks::names().any(|n| n.eq_ignore_ascii_case(name)) {
                    return Err(Error::config(format!("unknown network `{name}`")));
                }
            }
            GraphSource::File { .. } => {}
        }
        if let Some(Latents::Fraction(f)) = self.latents {
            if !(0.0..1.0).contains(&f) {
                return Err(Error::config(format!("latent fraction {f} outside [0, 1)")));
            }
        }
        if let TesterConfig::FisherZ { alpha, samples, .. } = &self.tester {
            if !(*alpha > 0.0 && *alpha < 1.0) {
                return Err(Error::config(format!("alpha {alpha} outside (0, 1)")));
            }
            if *samples == Some(0) {
                return Err(Error::config("samples must be positive"));
            }
        }
        match &self.searcher {
            SearcherConfig::Hc {
                max_iter, max_swap, ..
            } => {
                if *max_iter == 0 || *max_swap == 0 {
                    return Err(Error::config("max_iter and max_swap must be at least 1"));
                }
            }
            SearcherConfig::Vi { cap } => {
                if *cap > 24 {
                    return Err(Error::config(format!("VI cap {cap} above 24")));
                }
            }
            SearcherConfig::Pg {
                episodes,
                batch_size,
                learning_rate,
                temperature,
                step_buckets,
            } => {
                if *episodes == 0 || *batch_size == 0 || *step_buckets == Some(0) {
                    return Err(Error::config(
                        "episodes, batch_size and step_buckets must be positive",
                    ));
                }
                if !learning_rate.is_finite() || !(*temperature > 0.0 && temperature.is_finite()) {
                    return Err(Error::config(
                        "learning_rate must be finite and temperature positive",
                    ));
                }
            }
        }
        Ok(())
    }
}
