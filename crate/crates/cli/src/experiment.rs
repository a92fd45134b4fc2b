//! The sweep engine: builds the objective instance once, runs every
//! (algorithm, k, tau) cell, measures raw and post-removal values, and
//! writes the plot-ready CSV.

use std::fmt;
use std::path::Path;
use std::time::Instant;

use submax_core::adversary::{
    greedy_removal, optimal_removal_with, AdversaryKind, BranchBoundOptions,
};
use submax_core::data::{load_edge_list, load_vectors, subsample};
use submax_core::error::{Error, Result};
use submax_core::ground::GroundSet;
use submax_core::objectives::domset::DomSetObjective;
use submax_core::objectives::exemplar::{ExemplarConfig, ExemplarObjective};
use submax_core::objectives::tabular::table2_objective;
use submax_core::oracle::{Objective, Oracle};
use submax_core::solvers::{greedy_baseline, osu, partition_layout, pro, RobustSolution};

use crate::config::{AlgorithmKind, DatasetConfig, ExperimentConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellStatus {
    Ok,
    SkippedInfeasible,
    AdversaryBudgetExceeded,
}

impl CellStatus {
    pub fn label(&self) -> &'static str {
        match self {
            CellStatus::Ok => "ok",
            CellStatus::SkippedInfeasible => "skipped_infeasible",
            CellStatus::AdversaryBudgetExceeded => "adversary_budget_exceeded",
        }
    }
}

impl fmt::Display for CellStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// One row of a sweep.
#[derive(Clone, Debug)]
pub struct ExperimentRecord {
    pub algorithm: AlgorithmKind,
    pub subroutine: String,
    pub k: usize,
    pub tau: usize,
    pub eta: usize,
    pub raw_value: Option<f64>,
    pub robust_value: Option<f64>,
    pub adversary_kind: AdversaryKind,
    pub marginal_evals: u64,
    pub full_evals: u64,
    pub wall_time_ms: f64,
    pub seed: u64,
    pub status: CellStatus,
}

/// The loaded instance a whole sweep shares: one objective, one ground
/// set, one subsample.
pub struct Instance {
    objective: Box<dyn Objective>,
    pub ground: GroundSet,
    pub description: String,
    /// `dense -> original` node ids for datasets that were remapped.
    pub id_map: Option<Vec<u64>>,
}

impl Instance {
    pub fn objective(&self) -> &dyn Objective {
        self.objective.as_ref()
    }
}

pub fn build_instance(cfg: &ExperimentConfig) -> Result<Instance> {
    match &cfg.dataset {
        DatasetConfig::Table2 { n, eps } => {
            let objective = table2_objective(*n, *eps)?;
            Ok(Instance {
                objective: Box::new(objective),
                ground: GroundSet::with_labels(vec!["s1".into(), "s2".into(), "s3".into()])?,
                description: format!("three-element table (n = {n}, eps = {eps})"),
                id_map: None,
            })
        }
        DatasetConfig::EdgeList { path, directed } => {
            let loaded = load_edge_list(path, *directed)?;
            let n = loaded.graph.node_count();
            let m = loaded.graph.edge_count();
            let ground = GroundSet::new(n)?;
            let kind = if *directed { "directed" } else { "undirected" };
            Ok(Instance {
                objective: Box::new(DomSetObjective::new(loaded.graph)),
                ground,
                description: format!(
                    "{kind} graph {} ({n} nodes, {m} edges), dominating-set objective",
                    path.display()
                ),
                id_map: Some(loaded.id_map),
            })
        }
        DatasetConfig::Vectors {
            path,
            delimiter,
            preprocessing,
        } => {
            let data = load_vectors(path, *delimiter, *preprocessing)?;
            let n = data.len();
            let dim = data.dim();
            // The subsample is drawn once per experiment from the seed and
            // shared by every algorithm in the sweep.
            let sub = cfg
                .subsample_size
                .map(|size| subsample(n, size, cfg.seed))
                .transpose()?;
            let sampled = sub.as_ref().map_or(n, Vec::len);
            let objective = ExemplarObjective::new(
                data,
                ExemplarConfig {
                    reference: None,
                    subsample: sub,
                },
            )?;
            Ok(Instance {
                objective: Box::new(objective),
                ground: GroundSet::new(n)?,
                description: format!(
                    "vector dataset {} ({n} x {dim}, loss over {sampled} items), exemplar objective",
                    path.display()
                ),
                id_map: None,
            })
        }
    }
}

/// Feasibility of one sweep cell, mirroring the solvers' own predicates.
fn cell_feasible(cfg: &ExperimentConfig, algorithm: AlgorithmKind, k: usize, tau: usize) -> bool {
    match algorithm {
        AlgorithmKind::Greedy => true,
        AlgorithmKind::Pro => tau == 0 || partition_layout(tau, cfg.eta, k).is_ok(),
        AlgorithmKind::Osu => tau == 0 || tau * cfg.osu_bucket_size.resolve(tau) <= k,
    }
}

fn run_solver(
    cfg: &ExperimentConfig,
    instance: &Instance,
    oracle: &Oracle,
    algorithm: AlgorithmKind,
    k: usize,
    tau: usize,
) -> Result<RobustSolution> {
    match algorithm {
        AlgorithmKind::Greedy => greedy_baseline(oracle, &instance.ground, k, &cfg.subroutine),
        AlgorithmKind::Pro => pro(oracle, &instance.ground, k, tau, cfg.eta, &cfg.subroutine),
        AlgorithmKind::Osu => osu(
            oracle,
            &instance.ground,
            k,
            tau,
            cfg.osu_bucket_size.resolve(tau),
            &cfg.subroutine,
        ),
    }
}

/// Runs the full sweep. Infeasible cells become `skipped_infeasible` rows;
/// an adversary that exhausts its node budget downgrades the row to
/// `adversary_budget_exceeded` with the incumbent's residual.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRecord>> {
    cfg.validate()?;
    let instance = build_instance(cfg)?;
    run_on_instance(cfg, &instance)
}

/// Like [`run_experiment`] but reusing an already-built instance.
pub fn run_on_instance(
    cfg: &ExperimentConfig,
    instance: &Instance,
) -> Result<Vec<ExperimentRecord>> {
    let n = instance.ground.len();
    if let Some(&k) = cfg.k_values.iter().find(|&&k| k > n) {
        return Err(Error::Config(format!(
            "k = {k} exceeds the instance's {n} elements"
        )));
    }
    let mut records = Vec::new();
    for &algorithm in &cfg.algorithms {
        for &k in &cfg.k_values {
            for &tau in &cfg.tau_values {
                records.push(run_cell(cfg, instance, algorithm, k, tau)?);
            }
        }
    }
    records.sort_by_key(|r| (r.algorithm, r.k, r.tau));
    Ok(records)
}

fn run_cell(
    cfg: &ExperimentConfig,
    instance: &Instance,
    algorithm: AlgorithmKind,
    k: usize,
    tau: usize,
) -> Result<ExperimentRecord> {
    let mut record = ExperimentRecord {
        algorithm,
        subroutine: cfg.subroutine.label(),
        k,
        tau,
        eta: cfg.eta,
        raw_value: None,
        robust_value: None,
        adversary_kind: cfg.adversary,
        marginal_evals: 0,
        full_evals: 0,
        wall_time_ms: 0.0,
        seed: cfg.seed,
        status: CellStatus::Ok,
    };
    if !cell_feasible(cfg, algorithm, k, tau) {
        record.status = CellStatus::SkippedInfeasible;
        return Ok(record);
    }

    let solver_oracle = Oracle::new(instance.objective());
    let start = Instant::now();
    let solution = run_solver(cfg, instance, &solver_oracle, algorithm, k, tau)?;
    if cfg.record_timing {
        record.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    }
    let counts = solver_oracle.counts();
    record.marginal_evals = counts.marginal_evals;
    record.full_evals = counts.full_evals;
    record.raw_value = Some(solution.raw_value);

    // The adversary gets its own oracle so solver eval counts stay pure.
    // Removing more than |S| elements is the same as removing all of them.
    let adversary_oracle = Oracle::new(instance.objective());
    let tau_effective = tau.min(solution.size());
    let removal = match cfg.adversary {
        AdversaryKind::Greedy => {
            greedy_removal(&adversary_oracle, &solution.selected, tau_effective)
        }
        AdversaryKind::Optimal => optimal_removal_with(
            &adversary_oracle,
            &solution.selected,
            tau_effective,
            BranchBoundOptions {
                pruning: true,
                node_budget: cfg.node_budget,
            },
        ),
    };
    match removal {
        Ok(result) => {
            record.robust_value = Some(result.residual_value);
        }
        Err(Error::AdversaryBudget { incumbent, .. }) => {
            record.status = CellStatus::AdversaryBudgetExceeded;
            record.robust_value = Some(incumbent.residual_value);
        }
        Err(other) => return Err(other),
    }
    Ok(record)
}

const CSV_HEADER: [&str; 13] = [
    "algorithm",
    "subroutine",
    "k",
    "tau",
    "eta",
    "raw_value",
    "robust_value",
    "adversary_kind",
    "marginal_evals",
    "full_evals",
    "wall_time_ms",
    "seed",
    "status",
];

fn float_field(value: Option<f64>) -> String {
    value.map(|v| v.to_string()).unwrap_or_default()
}

/// Writes records (already in deterministic order) as RFC-4180 CSV.
pub fn emit_csv(records: &[ExperimentRecord], path: &Path) -> Result<()> {
    let mut writer = csv::Writer::from_path(path).map_err(into_io)?;
    writer.write_record(CSV_HEADER).map_err(into_io)?;
    for r in records {
        writer
            .write_record([
                r.algorithm.label().to_string(),
                r.subroutine.clone(),
                r.k.to_string(),
                r.tau.to_string(),
                r.eta.to_string(),
                float_field(r.raw_value),
                float_field(r.robust_value),
                r.adversary_kind.label().to_string(),
                r.marginal_evals.to_string(),
                r.full_evals.to_string(),
                format!("{:.3}", r.wall_time_ms),
                r.seed.to_string(),
                r.status.label().to_string(),
            ])
            .map_err(into_io)?;
    }
    writer.flush()?;
    Ok(())
}

fn into_io(err: csv::Error) -> Error {
    match err.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Io(std::io::Error::other(format!("csv: {other:?}"))),
    }
}
