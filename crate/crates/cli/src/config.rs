//! The TOML run configuration.
//!
//! ```toml
//! schema_version = 1
//! seed = 42
//! out_dir = "runs/demo"        # optional; relative to this file
//!
//! [data]                        # or a [synth] table with generator settings
//! dataset = "data/dataset.csv"
//! catalog = "data/catalog.txt"
//!
//! [scorer]
//! epochs_full = 20
//!
//! [ga]
//! population_size = 50
//!
//! [ensemble]
//! max_representatives = 10
//! ```

use std::path::{Path, PathBuf};

use ctxevo_core::dataset::SynthSpec;
use ctxevo_core::ensemble::EnsembleConfig;
use ctxevo_core::evolve::GAConfig;
use ctxevo_core::neuralscorer::ScorerConfig;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataPaths {
    pub dataset: PathBuf,
    pub catalog: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data: Option<DataPaths>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub synth: Option<SynthSpec>,
    #[serde(default)]
    pub scorer: ScorerConfig,
    #[serde(default)]
    pub ga: GAConfig,
    #[serde(default)]
    pub ensemble: EnsembleConfig,
}

impl RunConfig {
    pub fn parse(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::Input(format!("config: {e}")))
    }

    pub fn to_toml(&self) -> CliResult<String> {
        toml::to_string(self).map_err(|e| CliError::Internal(format!("config serialization: {e}")))
    }

    /// Reads `path` and resolves relative paths against its directory.
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read config {}: {e}", path.display())))?;
        let mut cfg = Self::parse(&text)?;
        let base = path.parent().unwrap_or(Path::new(""));
        if let Some(d) = &mut cfg.data {
            d.dataset = base.join(&d.dataset);
            d.catalog = base.join(&d.catalog);
        }
        if let Some(o) = &mut cfg.out_dir {
            *o = base.join(&*o);
        }
        Ok(cfg)
    }

    /// Checks the version, the data source and every section.
    pub fn validate(&self) -> CliResult<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CliError::Input(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        match (&self.data, &self.synth) {
            (Some(_), Some(_)) => return Err(CliError::Input("config has both [data] and [synth]".into())),
            (None, None) => return Err(CliError::Input("config needs a [data] or [synth] section".into())),
            (Some(d), None) => {
                for p in [&d.dataset, &d.catalog] {
                    if !p.exists() {
                        return Err(CliError::Input(format!("missing input file {}", p.display())));
                    }
                }
            }
            (None, Some(s)) => s.validate()?,
        }
        self.scorer.validate()?;
        self.ga.validate()?;
        self.ensemble.validate()?;
        Ok(())
    }
}
