use std::fs;
use std::path::PathBuf;

use anyhow::Context;
use clap::{Parser, Subcommand};
use ripfs::config::Config;
use ripfs::experiment::{self, RunLog};
use ripfs::format;
use ripfs::table::write_schema;
use ripfs_core::pipeline::{evaluate_suite, PipelineKind};

#[derive(Parser)]
#[command(version, about = "Rule induction under missing data, with PCA and ARD feature selection")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Replaces the experiment seed from the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Train one pipeline and save it under OUT/models.
    Train {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_kind)]
        model: PipelineKind,
    },
    /// Write the degraded test tables under OUT/variants.
    Inject {
        #[command(flatten)]
        common: Common,
    },
    /// Score a saved pipeline on the clean and degraded test sets.
    Evaluate {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_kind)]
        model: PipelineKind,
    },
    /// Train every configured pipeline and score the full grid.
    Experiment {
        #[command(flatten)]
        common: Common,
    },
}

fn parse_kind(s: &str) -> Result<PipelineKind, String> {
    PipelineKind::parse(s).ok_or_else(|| format!("expected one of ripper, pca-rip, ard-rip, got `{s}`"))
}

fn load(common: &Common) -> anyhow::Result<Config> {
    let mut cfg = Config::load(&common.config)?;
    if let Some(seed) = common.seed {
        cfg.experiment.seed = seed;
    }
    fs::create_dir_all(&common.out).with_context(|| format!("creating {}", common.out.display()))?;
    Ok(cfg)
}

fn main() -> anyhow::Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match Cli::parse().command {
        Command::Train { common, model } => {
            let cfg = load(&common)?;
            let mut log = RunLog::default();
            let (train, _) = experiment::load_inputs(&cfg, &mut log)?;
            let p = experiment::train_one(&cfg, model, &train.dataset, &mut log)?;
            experiment::save_pipeline(&p, &common.out.join("models"))?;
        }
        Command::Inject { common } => {
            let cfg = load(&common)?;
            let mut log = RunLog::default();
            let (_, test) = experiment::load_inputs(&cfg, &mut log)?;
            let dir = common.out.join("variants");
            fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
            write_schema(&dir.join("schema.txt"), &test.columns)?;
            for (spec, ds) in experiment::build_suite(&cfg, &test.dataset)? {
                let path = dir.join(experiment::variant_name(&spec));
                test.with_dataset(ds).write(&path)?;
                log::info!("wrote {}", path.display());
            }
        }
        Command::Evaluate { common, model } => {
            let cfg = load(&common)?;
            let mut log = RunLog::default();
            let (_, test) = experiment::load_inputs(&cfg, &mut log)?;
            let path = common.out.join("models").join(format!("{model}.model"));
            let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
            let p = format::parse_pipeline(&text).with_context(|| format!("parsing {}", path.display()))?;
            let suite = experiment::build_suite(&cfg, &test.dataset)?;
            let result = evaluate_suite(&[p], &test.dataset, &suite)?;
            let csv = experiment::results_csv(&result);
            fs::write(common.out.join(format!("results-{model}.csv")), &csv)?;
            print!("{csv}");
        }
        Command::Experiment { common } => {
            let cfg = load(&common)?;
            let result = experiment::run_experiment(&cfg, &common.out)?;
            print!("{}", experiment::overall_csv(&result));
        }
    }
    Ok(())
}
