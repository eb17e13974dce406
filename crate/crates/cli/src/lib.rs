//! Command-line front end: config-driven runs that write plot-ready CSV
//! logs, archives, checkpoints and summary reports.

pub mod commands;
pub mod config;
pub mod error;
pub mod pipeline;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ctxevo_core::evolve::{FitnessKind, Heuristic};
use ctxevo_core::exec;

use crate::commands::Context;
use crate::error::CliResult;
use crate::pipeline::EvolveOverrides;

#[derive(Debug, Parser)]
#[command(name = "ctxevo", version, about = "Evolutionary context-feature selection for neural recommenders")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Run configuration (TOML).
    #[arg(long)]
    pub config: PathBuf,
    /// Overrides the configured seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory; defaults to the configured `out_dir`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FitnessArg {
    Basic,
    Dim,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum HeuristicArg {
    FullyTrained,
    PredictOnly,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a planted-signal dataset, its catalog and a manifest.
    Synth(Common),
    /// Train the all-feature surrogate used by the predict-only heuristic.
    TrainSurrogate(Common),
    /// Run the search and train the full model on the best genome.
    Evolve {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        fitness: Option<FitnessArg>,
        #[arg(long, value_enum)]
        heuristic: Option<HeuristicArg>,
        #[arg(long)]
        generations: Option<usize>,
        /// Reuse a surrogate checkpoint instead of training one.
        #[arg(long)]
        surrogate: Option<PathBuf>,
    },
    /// Stack diverse archived genomes from a run directory.
    Ensemble {
        #[command(flatten)]
        common: Common,
        /// Run directory holding the archive; defaults to the output directory.
        #[arg(long)]
        run: Option<PathBuf>,
    },
    /// Print test AUC and log loss of a checkpoint.
    Evaluate {
        #[command(flatten)]
        common: Common,
        /// Checkpoint file, or a run directory containing one.
        #[arg(long)]
        model: PathBuf,
    },
    /// Collect the summaries of a run directory into one table.
    Report {
        #[arg(long)]
        run: PathBuf,
    },
}

/// Parses `args` (program name first) and runs; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(stdout) => {
            print!("{stdout}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn with_context<R: Send>(c: &Common, f: impl FnOnce(&Context) -> CliResult<R> + Send) -> CliResult<R> {
    let ctx = Context::new(&c.config, c.seed, c.out.clone())?;
    exec::with_jobs(c.jobs, || f(&ctx))
}

/// Runs one command and returns what it prints to standard output.
pub fn dispatch(command: Command) -> CliResult<String> {
    match command {
        Command::Synth(c) => with_context(&c, commands::synth).map(|_| String::new()),
        Command::TrainSurrogate(c) => with_context(&c, commands::train_surrogate).map(|_| String::new()),
        Command::Evolve { common, fitness, heuristic, generations, surrogate } => {
            let overrides = EvolveOverrides {
                fitness: fitness.map(|f| match f {
                    FitnessArg::Basic => FitnessKind::Basic,
                    FitnessArg::Dim => FitnessKind::Dim,
                }),
                heuristic: heuristic.map(|h| match h {
                    HeuristicArg::FullyTrained => Heuristic::FullyTrained,
                    HeuristicArg::PredictOnly => Heuristic::PredictOnly,
                }),
                generations,
            };
            with_context(&common, |ctx| commands::evolve(ctx, &overrides, surrogate.as_deref())).map(|_| String::new())
        }
        Command::Ensemble { common, run } => with_context(&common, |ctx| {
            let dir = match run.or_else(|| ctx.out.clone()) {
                Some(d) => d,
                None => return Err(error::CliError::Input("ensemble needs --run or an output directory".into())),
            };
            commands::ensemble(ctx, &dir)
        })
        .map(|_| String::new()),
        Command::Evaluate { common, model } => with_context(&common, |ctx| {
            let path = if model.is_dir() { model.join(commands::MODEL_FILE) } else { model.clone() };
            commands::evaluate(ctx, &path)
        }),
        Command::Report { run } => commands::report(&run),
    }
}
