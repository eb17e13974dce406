use std::fs;
use std::path::{Path, PathBuf};

use ctxevo_core::dataset::{write_catalog, write_csv, SynthSpec};
use ctxevo_core::evolve::{stats_csv, EvaluationArchive, FinalReport};
use ctxevo_core::metrics;
use ctxevo_core::neuralscorer::TrainedScorer;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{write_err, CliError, CliResult};
use crate::pipeline::{self, EvolveOverrides, LoadedData, Seeds, SUMMARY_HEADER};

pub const DATASET_FILE: &str = "dataset.csv";
pub const CATALOG_FILE: &str = "catalog.txt";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const SURROGATE_FILE: &str = "surrogate.json";
pub const STATS_FILE: &str = "stats.csv";
pub const ARCHIVE_FILE: &str = "archive.csv";
pub const BEST_GENOME_FILE: &str = "best_genome.txt";
pub const MODEL_FILE: &str = "model.json";
pub const SUMMARY_FILE: &str = "summary.csv";
pub const BASELINE_SUMMARY_FILE: &str = "baseline_summary.csv";
pub const ENSEMBLE_REPORT_FILE: &str = "ensemble_report.json";
pub const ENSEMBLE_SUMMARY_FILE: &str = "ensemble_summary.csv";
pub const REPORT_FILE: &str = "report.csv";

/// The loaded config with command-line overrides applied.
pub struct Context {
    pub config: RunConfig,
    pub seeds: Seeds,
    pub out: Option<PathBuf>,
}

impl Context {
    pub fn new(config_path: &Path, seed: Option<u64>, out: Option<PathBuf>) -> CliResult<Self> {
        let mut config = RunConfig::load(config_path)?;
        if let Some(s) = seed {
            config.seed = s;
        }
        config.validate()?;
        let out = out.or_else(|| config.out_dir.clone());
        Ok(Context { seeds: Seeds::new(config.seed), config, out })
    }

    fn out_dir(&self) -> CliResult<&Path> {
        let dir = self
            .out
            .as_deref()
            .ok_or_else(|| CliError::Input("no output directory: pass --out or set out_dir".into()))?;
        fs::create_dir_all(dir).map_err(|e| write_err(dir, e))?;
        Ok(dir)
    }
}

fn write(dir: &Path, name: &str, contents: &str) -> CliResult<()> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| write_err(&path, e))
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

#[derive(Serialize)]
struct Manifest<'a> {
    seed: u64,
    generator_seed: u64,
    spec: &'a SynthSpec,
    n_records: usize,
    n_features: usize,
    planted_columns: &'a [usize],
    planted_dimensions: Vec<&'a str>,
    planted_weights: &'a [f64],
}

pub fn synth(ctx: &Context) -> CliResult<()> {
    let spec = ctx.config.synth.as_ref().ok_or_else(|| CliError::Input("synth needs a [synth] section".into()))?;
    let data = pipeline::load_data(&ctx.config, &ctx.seeds)?;
    let planted = data.planted.as_ref().expect("generated data carries its planted set");
    let dir = ctx.out_dir()?;
    write_csv(&data.dataset, &dir.join(DATASET_FILE))?;
    write_catalog(data.dataset.catalog(), &dir.join(CATALOG_FILE))?;
    let dims = data.dataset.catalog().dimensions();
    let manifest = Manifest {
        seed: ctx.config.seed,
        generator_seed: ctx.seeds.data,
        spec,
        n_records: data.dataset.len(),
        n_features: data.dataset.n_features(),
        planted_columns: &planted.columns,
        planted_dimensions: planted.dimensions.iter().map(|&d| dims[d].name.as_str()).collect(),
        planted_weights: &planted.weights,
    };
    let json = serde_json::to_string_pretty(&manifest).map_err(|e| CliError::Internal(e.to_string()))?;
    write(dir, MANIFEST_FILE, &(json + "\n"))?;
    eprintln!("wrote {} records to {}", data.dataset.len(), dir.display());
    Ok(())
}

pub fn train_surrogate(ctx: &Context) -> CliResult<()> {
    let data = pipeline::load_data(&ctx.config, &ctx.seeds)?;
    let sur = pipeline::surrogate(&data, &ctx.config.scorer, &ctx.seeds)?;
    let dir = ctx.out_dir()?;
    sur.save(&dir.join(SURROGATE_FILE))?;
    if let Some(auc) = sur.history.last().and_then(|h| h.validation_auc) {
        eprintln!("surrogate validation AUC {auc}");
    }
    Ok(())
}

fn final_summary(r: &FinalReport) -> String {
    pipeline::summary_csv(r.n_dimensions, r.n_features, r.test_auc, r.test_log_loss)
}

fn load_surrogate(path: &Path, data: &LoadedData) -> CliResult<TrainedScorer> {
    let sur = TrainedScorer::load(path)?;
    let (have, want) = (sur.model.n_features(), data.dataset.n_features());
    if have != want {
        return Err(CliError::Shape(format!("surrogate has {have} features, dataset has {want}")));
    }
    Ok(sur)
}

pub fn evolve(ctx: &Context, overrides: &EvolveOverrides, surrogate: Option<&Path>) -> CliResult<()> {
    let data = pipeline::load_data(&ctx.config, &ctx.seeds)?;
    let dir = ctx.out_dir()?;
    let supplied = surrogate.map(|p| load_surrogate(p, &data)).transpose()?;
    let had_surrogate = supplied.is_some();
    let outcome = pipeline::evolve(&data, &ctx.config, &ctx.seeds, overrides, supplied)?;
    let baseline = pipeline::baseline(&data, &ctx.config, &ctx.seeds)?;
    let catalog = data.dataset.catalog();
    if let (Some(s), false) = (&outcome.surrogate, had_surrogate) {
        s.save(&dir.join(SURROGATE_FILE))?;
    }
    write(dir, STATS_FILE, &stats_csv(&outcome.result.stats, catalog))?;
    write(dir, ARCHIVE_FILE, &outcome.result.archive.to_text())?;
    let best = &outcome.result.best.genome;
    write(dir, BEST_GENOME_FILE, &format!("{}\n{}\n", best.to_hex(), best))?;
    outcome.best.model.save(&dir.join(MODEL_FILE))?;
    write(dir, SUMMARY_FILE, &final_summary(&outcome.best))?;
    write(dir, BASELINE_SUMMARY_FILE, &final_summary(&baseline))?;
    eprintln!(
        "best genome: {} features in {} dimensions, test AUC {} (context-free {})",
        outcome.best.n_features, outcome.best.n_dimensions, outcome.best.test_auc, baseline.test_auc
    );
    Ok(())
}

pub fn ensemble(ctx: &Context, run_dir: &Path) -> CliResult<()> {
    let data = pipeline::load_data(&ctx.config, &ctx.seeds)?;
    let archive = EvaluationArchive::from_text(&read(&run_dir.join(ARCHIVE_FILE))?, data.dataset.n_features())?;
    let r = pipeline::ensemble(&data, &archive, &ctx.config, &ctx.seeds)?;
    let json = serde_json::to_string_pretty(&r.report).map_err(|e| CliError::Internal(e.to_string()))?;
    write(run_dir, ENSEMBLE_REPORT_FILE, &(json + "\n"))?;
    let rep = &r.report;
    write(
        run_dir,
        ENSEMBLE_SUMMARY_FILE,
        &pipeline::summary_csv(rep.n_dimensions, rep.n_features, rep.test_auc, rep.test_log_loss),
    )?;
    eprintln!(
        "stacked {} base models: test AUC {} (best base {})",
        rep.bases.len(),
        rep.test_auc,
        rep.best_base_test_auc
    );
    Ok(())
}

/// Test-range AUC and log loss of a checkpoint, as `auc,log_loss` lines.
pub fn evaluate(ctx: &Context, model: &Path) -> CliResult<String> {
    let data = pipeline::load_data(&ctx.config, &ctx.seeds)?;
    let trained = TrainedScorer::load(model)?;
    let (have, want) = (trained.model.n_features(), data.dataset.n_features());
    if have != want {
        return Err(CliError::Shape(format!("checkpoint has L = {have} features, dataset has L = {want}")));
    }
    let scored = trained.model.predict(&data.dataset, data.split.test.clone(), None)?;
    Ok(format!("auc,log_loss\n{},{}\n", metrics::auc(&scored)?, metrics::log_loss(&scored)))
}

/// Collects the summary files of a run directory into one table.
pub fn report(run_dir: &Path) -> CliResult<String> {
    let mut out = format!("solution,{SUMMARY_HEADER}\n");
    let mut found = false;
    for (name, file) in
        [("context_free", BASELINE_SUMMARY_FILE), ("evolved", SUMMARY_FILE), ("ensemble", ENSEMBLE_SUMMARY_FILE)]
    {
        let path = run_dir.join(file);
        if !path.exists() {
            continue;
        }
        let text = read(&path)?;
        let mut lines = text.lines();
        if lines.next() != Some(SUMMARY_HEADER) {
            return Err(CliError::Input(format!("{} is not a summary file", path.display())));
        }
        let value = lines.next().ok_or_else(|| CliError::Input(format!("{} has no value line", path.display())))?;
        out.push_str(&format!("{name},{value}\n"));
        found = true;
    }
    if !found {
        return Err(CliError::Input(format!("no summary files in {}", run_dir.display())));
    }
    write(run_dir, REPORT_FILE, &out)?;
    Ok(out)
}
