use std::fs;
use std::path::Path;

use ctxevo_cli::commands::*;

const SMALL: &str = r#"
schema_version = 1
seed = 5

[synth]
n_users = 30
n_items = 40
n_records = 1200
n_dimensions = 4
features_per_dimension = [6]
n_informative = 4
informative_dimensions = 2

[scorer]
embedding_dim = 4
mlp_hidden = [16, 8]
epochs_full = 3
epochs_heuristic = 1

[ga]
population_size = 12
generations = 5

[ensemble]
max_representatives = 3
"#;

fn run(args: &[&str]) -> i32 {
    ctxevo_cli::run(std::iter::once("ctxevo").chain(args.iter().copied()))
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn write_config(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

#[test]
fn synth_is_deterministic_and_lists_planted_columns() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "c.toml", SMALL);
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    assert_eq!(run(&["synth", "--config", p(&cfg), "--out", p(&a)]), 0);
    assert_eq!(run(&["synth", "--config", p(&cfg), "--out", p(&b)]), 0);
    for f in [DATASET_FILE, CATALOG_FILE, MANIFEST_FILE] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(a.join(MANIFEST_FILE)).unwrap()).unwrap();
    assert_eq!(manifest["planted_columns"].as_array().unwrap().len(), 4);
    assert_eq!(manifest["seed"], 5);
}

#[test]
fn invalid_inputs_exit_with_code_2() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = write_config(tmp.path(), "bad.toml", &SMALL.replace("n_informative = 4", "n_informative = 500"));
    assert_eq!(run(&["synth", "--config", p(&bad), "--out", p(&tmp.path().join("x"))]), 2);
    let missing = write_config(
        tmp.path(),
        "missing.toml",
        "schema_version = 1\nseed = 1\n[data]\ndataset = \"nope.csv\"\ncatalog = \"nope.txt\"\n",
    );
    assert_eq!(run(&["evolve", "--config", p(&missing), "--out", p(&tmp.path().join("y"))]), 2);
    assert_eq!(run(&["evolve", "--config", p(&tmp.path().join("absent.toml"))]), 2);
    assert_eq!(run(&["report", "--run", p(tmp.path())]), 2);
}

#[test]
fn pipeline_from_files_is_reproducible_across_job_counts() {
    let tmp = tempfile::tempdir().unwrap();
    let synth_cfg = write_config(tmp.path(), "synth.toml", SMALL);
    let data = tmp.path().join("data");
    assert_eq!(run(&["synth", "--config", p(&synth_cfg), "--out", p(&data)]), 0);
    let file_cfg =
        SMALL.replace("[synth]", "[data]\ndataset = \"data/dataset.csv\"\ncatalog = \"data/catalog.txt\"\n\n[unused]");
    // Drop the generator table entirely.
    let file_cfg: String = {
        let start = file_cfg.find("[unused]").unwrap();
        let end = file_cfg.find("[scorer]").unwrap();
        format!("{}{}", &file_cfg[..start], &file_cfg[end..])
    };
    let cfg = write_config(tmp.path(), "run.toml", &file_cfg);
    let dirs: Vec<_> = ["j1", "j4"].iter().map(|d| tmp.path().join(d)).collect();
    for (dir, jobs) in dirs.iter().zip(["1", "4"]) {
        assert_eq!(run(&["evolve", "--config", p(&cfg), "--out", p(dir), "--jobs", jobs]), 0);
        assert_eq!(run(&["ensemble", "--config", p(&cfg), "--out", p(dir), "--jobs", jobs]), 0);
        assert_eq!(run(&["report", "--run", p(dir)]), 0);
    }
    for f in [
        STATS_FILE,
        ARCHIVE_FILE,
        BEST_GENOME_FILE,
        MODEL_FILE,
        SUMMARY_FILE,
        BASELINE_SUMMARY_FILE,
        SURROGATE_FILE,
        ENSEMBLE_REPORT_FILE,
        ENSEMBLE_SUMMARY_FILE,
        REPORT_FILE,
    ] {
        assert_eq!(fs::read(dirs[0].join(f)).unwrap(), fs::read(dirs[1].join(f)).unwrap(), "{f}");
    }
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dirs[0].join(ENSEMBLE_REPORT_FILE)).unwrap()).unwrap();
    assert!(report["bases"].as_array().unwrap().len() >= 2);
    let header = |f: &str| fs::read_to_string(dirs[0].join(f)).unwrap().lines().next().unwrap().to_string();
    assert_eq!(header(SUMMARY_FILE), header(ENSEMBLE_SUMMARY_FILE));
    assert_eq!(fs::read_to_string(dirs[0].join(REPORT_FILE)).unwrap().lines().count(), 4);
}

#[test]
fn zero_generations_and_evaluate_round_trip() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "c.toml", SMALL);
    let run_dir = tmp.path().join("run");
    let code = run(&["evolve", "--config", p(&cfg), "--out", p(&run_dir), "--generations", "0", "--fitness", "dim"]);
    assert_eq!(code, 0);
    assert_eq!(fs::read_to_string(run_dir.join(STATS_FILE)).unwrap().lines().count(), 2);
    // Only the initial population was evaluated.
    let archived = fs::read_to_string(run_dir.join(ARCHIVE_FILE)).unwrap().lines().count() - 1;
    assert!((1..=12).contains(&archived));

    let ctx = Context::new(&cfg, None, None).unwrap();
    let printed = evaluate(&ctx, &run_dir.join(MODEL_FILE)).unwrap();
    let summary = fs::read_to_string(run_dir.join(SUMMARY_FILE)).unwrap();
    let values: Vec<&str> = summary.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(printed, format!("auc,log_loss\n{},{}\n", values[3], values[4]));
    assert_eq!(run(&["evaluate", "--config", p(&cfg), "--model", p(&run_dir)]), 0);
}

#[test]
fn checkpoint_dataset_mismatch_exits_with_code_3() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "c.toml", SMALL);
    let run_dir = tmp.path().join("run");
    assert_eq!(run(&["evolve", "--config", p(&cfg), "--out", p(&run_dir), "--generations", "0"]), 0);
    let wider = write_config(
        tmp.path(),
        "w.toml",
        &SMALL.replace("features_per_dimension = [6]", "features_per_dimension = [7]"),
    );
    assert_eq!(run(&["evaluate", "--config", p(&wider), "--model", p(&run_dir)]), 3);
    let ctx = Context::new(&wider, None, None).unwrap();
    let msg = evaluate(&ctx, &run_dir.join(MODEL_FILE)).unwrap_err().to_string();
    assert!(msg.contains("24") && msg.contains("28"), "{msg}");
}

#[test]
fn context_free_baseline_matches_all_zero_model() {
    use ctxevo_cli::config::RunConfig;
    use ctxevo_cli::pipeline::{baseline, load_data, Seeds};
    use ctxevo_core::evolve::finalize;
    use ctxevo_core::Genome;
    let cfg = RunConfig::parse(SMALL).unwrap();
    let seeds = Seeds::new(cfg.seed);
    let data = load_data(&cfg, &seeds).unwrap();
    let b = baseline(&data, &cfg, &seeds).unwrap();
    let z = finalize(&Genome::zeros(24), &data.dataset, &data.split, &cfg.scorer.with_seed(seeds.final_model)).unwrap();
    assert_eq!(b.test_auc, z.test_auc);
    assert_eq!(pipeline_summary(&b), "0,0,X");
}

fn pipeline_summary(r: &ctxevo_core::evolve::FinalReport) -> String {
    let s = ctxevo_cli::pipeline::summary_csv(r.n_dimensions, r.n_features, r.test_auc, r.test_log_loss);
    s.lines().nth(1).unwrap().split(',').take(3).collect::<Vec<_>>().join(",")
}
