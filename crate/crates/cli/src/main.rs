use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use submax_cli::config::{parse_adversary, parse_list, ExperimentConfig, Overrides};
use submax_cli::experiment::{build_instance, emit_csv, run_on_instance, CellStatus};
use submax_cli::report::bound_report;
use submax_core::error::{Error, Result};

/// Robust submodular maximization benchmark harness.
#[derive(Parser)]
#[command(name = "submax", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured sweep and write the CSV.
    Run(CommonArgs),
    /// Print the guarantee landscape for the configured (k, tau) grid
    /// without running anything.
    Bounds(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Flat key=value config file ('#' comments).
    #[arg(long)]
    config: PathBuf,
    /// Override k_values, e.g. "10,20,30".
    #[arg(long)]
    k: Option<String>,
    /// Override tau_values, e.g. "0,1,2".
    #[arg(long)]
    tau: Option<String>,
    /// Override the bucket-size base.
    #[arg(long)]
    eta: Option<usize>,
    /// Override the experiment seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the adversary: optimal or greedy.
    #[arg(long)]
    adversary: Option<String>,
    /// Override the CSV output path.
    #[arg(long)]
    output: Option<PathBuf>,
}

impl CommonArgs {
    fn load(&self) -> Result<ExperimentConfig> {
        let mut cfg = ExperimentConfig::from_file(&self.config)?;
        let overrides = Overrides {
            k_values: self.k.clone().map(|v| parse_list(v, "--k")).transpose()?,
            tau_values: self
                .tau
                .clone()
                .map(|v| parse_list(v, "--tau"))
                .transpose()?,
            eta: self.eta,
            seed: self.seed,
            adversary: self
                .adversary
                .clone()
                .map(Some)
                .map(parse_adversary)
                .transpose()?,
            output: self.output.clone(),
        };
        cfg.apply_overrides(&overrides);
        cfg.validate()?;
        Ok(cfg)
    }
}

fn run(args: &CommonArgs) -> Result<()> {
    let cfg = args.load()?;
    let instance = build_instance(&cfg)?;
    eprintln!("loaded: {}", instance.description);
    let records = run_on_instance(&cfg, &instance)?;
    emit_csv(&records, &cfg.output)?;
    // Remapped node ids get a sidecar so rows can be traced back to the
    // raw dataset.
    if let Some(id_map) = &instance.id_map {
        let sidecar = cfg.output.with_extension("idmap");
        submax_core::data::write_id_map(id_map, &sidecar)?;
        eprintln!("id mapping written to {}", sidecar.display());
    }
    let skipped = records
        .iter()
        .filter(|r| r.status == CellStatus::SkippedInfeasible)
        .count();
    let budget = records
        .iter()
        .filter(|r| r.status == CellStatus::AdversaryBudgetExceeded)
        .count();
    eprintln!(
        "{} rows written to {} ({skipped} skipped infeasible, {budget} adversary budget exceeded)",
        records.len(),
        cfg.output.display()
    );
    Ok(())
}

fn bounds(args: &CommonArgs) -> Result<()> {
    let cfg = args.load()?;
    print!("{}", bound_report(&cfg)?);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Run(args) => run(args),
        Command::Bounds(args) => bounds(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Io(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
