//! Flat key=value experiment configuration with command-line overrides.
//!
//! One `key = value` pair per line, `#` comments. Unknown keys are
//! rejected so typos surface before any computation.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use submax_core::adversary::{AdversaryKind, DEFAULT_NODE_BUDGET};
use submax_core::data::Preprocessing;
use submax_core::error::{Error, Result};
use submax_core::subroutines::SubroutineSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum AlgorithmKind {
    Greedy,
    Pro,
    Osu,
}

impl AlgorithmKind {
    pub fn label(&self) -> &'static str {
        match self {
            AlgorithmKind::Greedy => "greedy",
            AlgorithmKind::Pro => "pro",
            AlgorithmKind::Osu => "osu",
        }
    }
}

impl fmt::Display for AlgorithmKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ObjectiveKind {
    Tabular,
    Domset,
    Exemplar,
}

#[derive(Clone, Debug)]
pub enum DatasetConfig {
    Table2 {
        n: f64,
        eps: f64,
    },
    EdgeList {
        path: PathBuf,
        directed: bool,
    },
    Vectors {
        path: PathBuf,
        delimiter: char,
        preprocessing: Preprocessing,
    },
}

impl DatasetConfig {
    pub fn natural_objective(&self) -> ObjectiveKind {
        match self {
            DatasetConfig::Table2 { .. } => ObjectiveKind::Tabular,
            DatasetConfig::EdgeList { .. } => ObjectiveKind::Domset,
            DatasetConfig::Vectors { .. } => ObjectiveKind::Exemplar,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OsuBucketSize {
    /// The experimental default: robust part of `tau * tau` elements.
    Tau,
    Fixed(usize),
}

impl OsuBucketSize {
    pub fn resolve(&self, tau: usize) -> usize {
        match self {
            OsuBucketSize::Tau => tau,
            OsuBucketSize::Fixed(b) => *b,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub dataset: DatasetConfig,
    pub objective: ObjectiveKind,
    pub algorithms: Vec<AlgorithmKind>,
    pub subroutine: SubroutineSpec,
    pub k_values: Vec<usize>,
    pub tau_values: Vec<usize>,
    pub eta: usize,
    pub osu_bucket_size: OsuBucketSize,
    pub adversary: AdversaryKind,
    pub seed: u64,
    pub subsample_size: Option<usize>,
    pub output: PathBuf,
    /// When false, `wall_time_ms` is recorded as 0 so repeated runs with
    /// the same seed produce byte-identical CSV output.
    pub record_timing: bool,
    pub node_budget: u64,
}

/// Command-line overrides applied on top of a parsed config file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub k_values: Option<Vec<usize>>,
    pub tau_values: Option<Vec<usize>>,
    pub eta: Option<usize>,
    pub seed: Option<u64>,
    pub adversary: Option<AdversaryKind>,
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Self::parse(&text, path)
    }

    pub fn apply_overrides(&mut self, overrides: &Overrides) {
        if let Some(k) = &overrides.k_values {
            self.k_values = k.clone();
        }
        if let Some(tau) = &overrides.tau_values {
            self.tau_values = tau.clone();
        }
        if let Some(eta) = overrides.eta {
            self.eta = eta;
        }
        if let Some(seed) = overrides.seed {
            self.seed = seed;
        }
        if let Some(adversary) = overrides.adversary {
            self.adversary = adversary;
        }
        if let Some(output) = &overrides.output {
            self.output = output.clone();
        }
    }

    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let mut pairs: BTreeMap<String, String> = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Parse {
                    path: origin.to_path_buf(),
                    line: lineno + 1,
                    message: format!("expected key = value, got {line:?}"),
                });
            };
            let key = key.trim().to_string();
            if pairs
                .insert(key.clone(), value.trim().to_string())
                .is_some()
            {
                return Err(Error::Parse {
                    path: origin.to_path_buf(),
                    line: lineno + 1,
                    message: format!("duplicate key {key:?}"),
                });
            }
        }
        Self::from_pairs(pairs)
    }

    fn from_pairs(mut pairs: BTreeMap<String, String>) -> Result<Self> {
        let mut take = |key: &str| pairs.remove(key);
        let required = |key: &str, value: Option<String>| {
            value.ok_or_else(|| Error::Config(format!("missing required key {key:?}")))
        };

        let kind = required("dataset_kind", take("dataset_kind"))?;
        let dataset = match kind.as_str() {
            "table2" => DatasetConfig::Table2 {
                n: parse_number(take("table2_n"), "table2_n", 10.0)?,
                eps: parse_number(take("table2_eps"), "table2_eps", 0.5)?,
            },
            "edge_list" => DatasetConfig::EdgeList {
                path: PathBuf::from(required("dataset_path", take("dataset_path"))?),
                directed: parse_bool(take("directed"), "directed", false)?,
            },
            "vectors" => DatasetConfig::Vectors {
                path: PathBuf::from(required("dataset_path", take("dataset_path"))?),
                delimiter: parse_delimiter(take("delimiter"))?,
                preprocessing: parse_preprocessing(take("preprocessing"))?,
            },
            other => {
                return Err(Error::Config(format!(
                    "dataset_kind must be table2, edge_list or vectors, got {other:?}"
                )))
            }
        };

        let objective = match take("objective").as_deref() {
            None => dataset.natural_objective(),
            Some("tabular") => ObjectiveKind::Tabular,
            Some("domset") => ObjectiveKind::Domset,
            Some("exemplar") => ObjectiveKind::Exemplar,
            Some(other) => {
                return Err(Error::Config(format!(
                    "objective must be tabular, domset or exemplar, got {other:?}"
                )))
            }
        };
        if objective != dataset.natural_objective() {
            return Err(Error::Config(format!(
                "objective {objective:?} does not match dataset kind {kind:?}"
            )));
        }

        let algorithms = parse_algorithms(take("algorithms"))?;
        let epsilon = take("epsilon")
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|_| Error::Config(format!("epsilon: {v:?} is not a number")))
            })
            .transpose()?;
        let seed = parse_integer(take("seed"), "seed", 42)?;
        let subroutine = parse_subroutine(take("subroutine"), epsilon, seed)?;
        let k_values = parse_list(required("k_values", take("k_values"))?, "k_values")?;
        let tau_values = parse_list(required("tau_values", take("tau_values"))?, "tau_values")?;
        let eta = parse_integer(take("eta"), "eta", 1)? as usize;
        let osu_bucket_size = match take("osu_bucket_size").as_deref() {
            None | Some("tau") => OsuBucketSize::Tau,
            Some(v) => OsuBucketSize::Fixed(v.parse::<usize>().map_err(|_| {
                Error::Config(format!(
                    "osu_bucket_size must be \"tau\" or an integer, got {v:?}"
                ))
            })?),
        };
        let adversary = parse_adversary(take("adversary"))?;
        let subsample_size = take("subsample_size")
            .map(|v| {
                v.parse::<usize>()
                    .map_err(|_| Error::Config(format!("subsample_size: {v:?} is not an integer")))
            })
            .transpose()?;
        let output = PathBuf::from(take("output").unwrap_or_else(|| "experiment.csv".to_string()));
        let record_timing = parse_bool(take("record_timing"), "record_timing", true)?;
        let node_budget = parse_integer(take("node_budget"), "node_budget", DEFAULT_NODE_BUDGET)?;

        if let Some(unknown) = pairs.keys().next() {
            return Err(Error::Config(format!("unknown config key {unknown:?}")));
        }

        let cfg = ExperimentConfig {
            dataset,
            objective,
            algorithms,
            subroutine,
            k_values,
            tau_values,
            eta,
            osu_bucket_size,
            adversary,
            seed,
            subsample_size,
            output,
            record_timing,
            node_budget,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks everything that does not need the dataset loaded.
    pub fn validate(&self) -> Result<()> {
        if self.algorithms.is_empty() {
            return Err(Error::Config("algorithms list is empty".into()));
        }
        if self.k_values.is_empty() || self.tau_values.is_empty() {
            return Err(Error::Config(
                "k_values and tau_values must be non-empty".into(),
            ));
        }
        if self.eta < 1 {
            return Err(Error::Config("eta must be at least 1".into()));
        }
        if let OsuBucketSize::Fixed(0) = self.osu_bucket_size {
            return Err(Error::Config("osu_bucket_size must be at least 1".into()));
        }
        self.subroutine.validate()?;
        if let DatasetConfig::Table2 { n, eps } = self.dataset {
            submax_core::objectives::tabular::table2_objective(n, eps)?;
        }
        Ok(())
    }
}

fn parse_number(value: Option<String>, key: &str, default: f64) -> Result<f64> {
    match value {
        None => Ok(default),
        Some(v) => v
            .parse()
            .map_err(|_| Error::Config(format!("{key}: {v:?} is not a number"))),
    }
}

fn parse_integer(value: Option<String>, key: &str, default: u64) -> Result<u64> {
    match value {
        None => Ok(default),
        Some(v) => v
            .parse()
            .map_err(|_| Error::Config(format!("{key}: {v:?} is not an integer"))),
    }
}

fn parse_bool(value: Option<String>, key: &str, default: bool) -> Result<bool> {
    match value.as_deref() {
        None => Ok(default),
        Some("true") => Ok(true),
        Some("false") => Ok(false),
        Some(v) => Err(Error::Config(format!(
            "{key} must be true or false, got {v:?}"
        ))),
    }
}

fn parse_delimiter(value: Option<String>) -> Result<char> {
    match value.as_deref() {
        None | Some("comma") => Ok(','),
        Some("tab") => Ok('\t'),
        Some("space") => Ok(' '),
        Some("semicolon") => Ok(';'),
        Some(v) if v.chars().count() == 1 => Ok(v.chars().next().unwrap()),
        Some(v) => Err(Error::Config(format!(
            "delimiter must be a single character, got {v:?}"
        ))),
    }
}

fn parse_preprocessing(value: Option<String>) -> Result<Preprocessing> {
    match value.as_deref() {
        None | Some("none") => Ok(Preprocessing::None),
        Some("mean_shift") => Ok(Preprocessing::MeanShift),
        Some("mean_shift_unit_norm") => Ok(Preprocessing::MeanShiftUnitNorm),
        Some(v) => Err(Error::Config(format!(
            "preprocessing must be none, mean_shift or mean_shift_unit_norm, got {v:?}"
        ))),
    }
}

fn parse_algorithms(value: Option<String>) -> Result<Vec<AlgorithmKind>> {
    let value = value.unwrap_or_else(|| "greedy,pro,osu".to_string());
    let mut out = Vec::new();
    for token in value.split(',') {
        let token = token.trim();
        let alg = match token {
            "greedy" => AlgorithmKind::Greedy,
            "pro" => AlgorithmKind::Pro,
            "osu" => AlgorithmKind::Osu,
            other => {
                return Err(Error::Config(format!(
                    "algorithms must be among greedy, pro, osu; got {other:?}"
                )))
            }
        };
        if !out.contains(&alg) {
            out.push(alg);
        }
    }
    Ok(out)
}

pub fn parse_adversary(value: Option<String>) -> Result<AdversaryKind> {
    match value.as_deref() {
        None | Some("optimal") => Ok(AdversaryKind::Optimal),
        Some("greedy") => Ok(AdversaryKind::Greedy),
        Some(v) => Err(Error::Config(format!(
            "adversary must be optimal or greedy, got {v:?}"
        ))),
    }
}

fn parse_subroutine(
    value: Option<String>,
    epsilon: Option<f64>,
    seed: u64,
) -> Result<SubroutineSpec> {
    let need_eps = |name: &str| {
        epsilon.ok_or_else(|| Error::Config(format!("subroutine {name} requires epsilon")))
    };
    match value.as_deref() {
        None | Some("lazy_greedy") => Ok(SubroutineSpec::LazyGreedy),
        Some("greedy") => Ok(SubroutineSpec::Greedy),
        Some("thresholding") => Ok(SubroutineSpec::Thresholding {
            epsilon: need_eps("thresholding")?,
        }),
        Some("stochastic") => Ok(SubroutineSpec::Stochastic {
            epsilon: need_eps("stochastic")?,
            seed,
        }),
        Some(v) => Err(Error::Config(format!(
            "subroutine must be greedy, lazy_greedy, thresholding or stochastic, got {v:?}"
        ))),
    }
}

pub fn parse_list(value: String, key: &str) -> Result<Vec<usize>> {
    value
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::Config(format!("{key}: {t:?} is not an integer")))
        })
        .collect()
}
