use std::fs;

use ripfs::config::Config;
use ripfs_core::missingness::{Scope, BENCHMARK_LEVELS};
use ripfs_core::pipeline::PipelineKind;

fn load(body: &str) -> anyhow::Result<Config> {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.toml");
    fs::write(&path, body).unwrap();
    Config::load(&path)
}

#[test]
fn defaults_fill_every_section() {
    let cfg = load("[data]\ntrain = \"t.csv\"\n").unwrap();
    assert!(cfg.data.train.is_absolute());
    assert_eq!(cfg.experiment.levels, BENCHMARK_LEVELS.to_vec());
    assert_eq!(cfg.scopes().unwrap(), [Scope::AllAttributes, Scope::HalfAttributes]);
    assert_eq!(cfg.kinds().unwrap(), PipelineKind::ALL.to_vec());
    let p = cfg.pipeline_config();
    assert_eq!(p.ripper.dl_budget_bits, 64.0);
    assert_eq!(p.ard.epochs, 1000);
    assert_eq!(p.ard.relevance_threshold, 0.01);
}

#[test]
fn derived_seeds_follow_the_experiment_seed() {
    let a = load("[data]\ntrain = \"t.csv\"\n[experiment]\nseed = 3\n").unwrap();
    let b = load("[data]\ntrain = \"t.csv\"\n[experiment]\nseed = 4\n").unwrap();
    assert_ne!(a.pipeline_config().ripper.split_seed, b.pipeline_config().ripper.split_seed);
    assert_ne!(a.pipeline_config().ard.seed, b.pipeline_config().ard.seed);
    assert_ne!(a.suite_seed(), b.suite_seed());
    let pinned = load("[data]\ntrain = \"t.csv\"\n[ripper]\nsplit_seed = 77\n[ard]\nseed = 78\n").unwrap();
    assert_eq!(pinned.pipeline_config().ripper.split_seed, 77);
    assert_eq!(pinned.pipeline_config().ard.seed, 78);
}

#[test]
fn bad_settings_are_rejected() {
    for body in [
        "[data]\ntrain = \"t.csv\"\ndelimiter = \"|\"\n",
        "[data]\ntrain = \"t.csv\"\n[experiment]\nscopes = [\"some\"]\n",
        "[data]\ntrain = \"t.csv\"\n[experiment]\nmodels = [\"svm\"]\n",
        "[data]\ntrain = \"t.csv\"\n[experiment]\nlevels = [1.5]\n",
        "[data]\ntrain = \"t.csv\"\n[ripper]\ngrow_fraction = 0.0\n",
        "[data]\ntrain = \"t.csv\"\n[ard]\nn_hidden = 0\n",
        "[data]\ntrain = \"t.csv\"\ntypo = 1\n",
        "[experiment]\nseed = 1\n",
    ] {
        assert!(load(body).is_err(), "{body}");
    }
    let missing = Config::load(std::path::Path::new("/nonexistent/c.toml")).unwrap_err();
    assert!(format!("{missing:#}").contains("/nonexistent/c.toml"));
}

#[test]
fn committed_caravan_config_loads() {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/caravan.toml");
    let cfg = Config::load(&path).unwrap();
    assert!(cfg.data.train.exists());
    assert_eq!(cfg.kinds().unwrap().len(), 3);
}
