//! TOML run configuration. Relative paths resolve against the config file's
//! directory.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use ripfs_core::ard::ArdConfig;
use ripfs_core::missingness::{Scope, BENCHMARK_LEVELS};
use ripfs_core::pipeline::{PipelineConfig, PipelineKind};
use ripfs_core::ripper::RipperConfig;
use ripfs_core::rng::sub_seed;
use serde::Deserialize;

use crate::table::TableOptions;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub data: DataConfig,
    #[serde(default)]
    pub experiment: ExperimentConfig,
    #[serde(default)]
    pub ripper: RipperSection,
    #[serde(default)]
    pub ard: ArdSection,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataConfig {
    pub train: PathBuf,
    /// Defaults to the training file.
    pub test: Option<PathBuf>,
    /// `name,kind` sidecar; without it every column but the label is continuous.
    pub schema: Option<PathBuf>,
    /// `","`, `";"` or `"auto"`.
    #[serde(default = "auto")]
    pub delimiter: String,
    #[serde(default = "yes")]
    pub header: bool,
    #[serde(default = "question_mark")]
    pub missing_token: String,
    /// Label column name when there is no sidecar.
    pub label: Option<String>,
    /// Keep only the first `train_rows` training rows.
    pub train_rows: Option<usize>,
    /// Skip this many rows of the test file.
    #[serde(default)]
    pub test_skip_rows: usize,
    pub test_rows: Option<usize>,
    /// Attributes removed before anything else.
    #[serde(default)]
    pub drop: Vec<String>,
}

fn auto() -> String {
    "auto".into()
}
fn yes() -> bool {
    true
}
fn question_mark() -> String {
    "?".into()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub levels: Vec<f64>,
    pub scopes: Vec<String>,
    pub models: Vec<String>,
    /// Also write every degraded test table.
    pub write_variants: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            seed: 1,
            levels: BENCHMARK_LEVELS.to_vec(),
            scopes: vec!["all".into(), "half".into()],
            models: PipelineKind::ALL.iter().map(|k| k.as_str().to_string()).collect(),
            write_variants: false,
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RipperSection {
    pub grow_fraction: Option<f64>,
    pub dl_budget_bits: Option<f64>,
    pub prune_error_cap: Option<f64>,
    /// Defaults to a value derived from the experiment seed.
    pub split_seed: Option<u64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ArdSection {
    pub epochs: Option<usize>,
    pub n_hidden: Option<usize>,
    pub learning_rate: Option<f64>,
    pub evidence_cycles: Option<usize>,
    pub relevance_threshold: Option<f64>,
    pub split_groups: Option<usize>,
    pub init_alpha: Option<f64>,
    pub init_weight_scale: Option<f64>,
    /// Defaults to a value derived from the experiment seed.
    pub seed: Option<u64>,
}

impl Config {
    /// Reads a config and makes its data paths absolute.
    pub fn load(path: &Path) -> anyhow::Result<Config> {
        let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let mut cfg: Config = toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        fix(&mut cfg.data.train);
        cfg.data.test.as_mut().map(fix);
        cfg.data.schema.as_mut().map(fix);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        self.table_options()?;
        self.scopes()?;
        self.kinds()?;
        if self.experiment.levels.iter().any(|l| !(0.0..=1.0).contains(l)) {
            bail!("experiment levels must lie in [0, 1]");
        }
        let p = self.pipeline_config();
        p.ripper.validate()?;
        p.ard.validate()?;
        Ok(())
    }

    pub fn table_options(&self) -> anyhow::Result<TableOptions> {
        let delimiter = match self.data.delimiter.as_str() {
            "auto" => None,
            "," => Some(b','),
            ";" => Some(b';'),
            d => bail!("unsupported delimiter `{d}`, use \",\", \";\" or \"auto\""),
        };
        Ok(TableOptions {
            delimiter,
            header: self.data.header,
            missing_token: self.data.missing_token.clone(),
            label: self.data.label.clone(),
        })
    }

    pub fn scopes(&self) -> anyhow::Result<Vec<Scope>> {
        self.experiment
            .scopes
            .iter()
            .map(|s| match s.as_str() {
                "all" => Ok(Scope::AllAttributes),
                "half" => Ok(Scope::HalfAttributes),
                _ => bail!("unknown scope `{s}`, use \"all\" or \"half\""),
            })
            .collect()
    }

    pub fn kinds(&self) -> anyhow::Result<Vec<PipelineKind>> {
        self.experiment
            .models
            .iter()
            .map(|m| PipelineKind::parse(m).with_context(|| format!("unknown model `{m}`")))
            .collect()
    }

    /// Module settings, unset seeds derived from the experiment seed.
    pub fn pipeline_config(&self) -> PipelineConfig {
        let seed = self.experiment.seed;
        let r = &self.ripper;
        let d = RipperConfig::default();
        let ripper = RipperConfig {
            grow_fraction: r.grow_fraction.unwrap_or(d.grow_fraction),
            dl_budget_bits: r.dl_budget_bits.unwrap_or(d.dl_budget_bits),
            prune_error_cap: r.prune_error_cap.unwrap_or(d.prune_error_cap),
            split_seed: r.split_seed.unwrap_or_else(|| sub_seed(seed, 1)),
        };
        let a = &self.ard;
        let d = ArdConfig::default();
        let ard = ArdConfig {
            epochs: a.epochs.unwrap_or(d.epochs),
            n_hidden: a.n_hidden.unwrap_or(d.n_hidden),
            learning_rate: a.learning_rate.unwrap_or(d.learning_rate),
            evidence_cycles: a.evidence_cycles.unwrap_or(d.evidence_cycles),
            relevance_threshold: a.relevance_threshold.unwrap_or(d.relevance_threshold),
            split_groups: a.split_groups.or(d.split_groups),
            init_alpha: a.init_alpha.unwrap_or(d.init_alpha),
            init_weight_scale: a.init_weight_scale.or(d.init_weight_scale),
            seed: a.seed.unwrap_or_else(|| sub_seed(seed, 2)),
        };
        PipelineConfig { ripper, ard }
    }

    /// Seed of the missingness suite.
    pub fn suite_seed(&self) -> u64 {
        sub_seed(self.experiment.seed, 0)
    }
}
