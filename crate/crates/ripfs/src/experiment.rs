//! The full experiment: every pipeline is trained once and then scored on
//! each degraded copy of the test set.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::Context;
use ripfs_core::data::Dataset;
use ripfs_core::missingness::{make_suite, MissingnessSpec, Scope};
use ripfs_core::pipeline::{evaluate_suite, train_pipeline, ExperimentResult, PipelineKind, TrainedPipeline};

use crate::config::Config;
use crate::format;
use crate::table::{load_table, read_schema, Table};

/// Deterministic run log: everything but timings, which go to stderr only.
#[derive(Debug, Default)]
pub struct RunLog {
    lines: Vec<String>,
}

impl RunLog {
    pub fn note(&mut self, line: impl Into<String>) {
        let line = line.into();
        log::info!("{line}");
        self.lines.push(line);
    }

    pub fn text(&self) -> String {
        self.lines.iter().map(|l| format!("{l}\n")).collect()
    }
}

/// Training and test tables after slicing and attribute drops.
pub fn load_inputs(cfg: &Config, log: &mut RunLog) -> anyhow::Result<(Table, Table)> {
    let d = &cfg.data;
    let schema = d.schema.as_deref().map(read_schema).transpose()?;
    let opts = cfg.table_options()?;
    let train_file = load_table(&d.train, schema.as_deref(), &opts)?;
    let test_path = d.test.as_ref().unwrap_or(&d.train);
    let test_file =
        if test_path == &d.train { train_file.clone() } else { load_table(test_path, schema.as_deref(), &opts)? };

    let train = train_file.slice_rows(0, d.train_rows.unwrap_or(usize::MAX));
    let test = test_file.slice_rows(d.test_skip_rows, d.test_rows.unwrap_or(usize::MAX));
    let train = train.drop_attributes(&d.drop).context("dropping attributes")?;
    let test = test.drop_attributes(&d.drop).context("dropping attributes")?;
    for (name, t, path) in [("train", &train, &d.train), ("test", &test, test_path)] {
        let [c0, c1] = t.dataset.class_counts();
        log.note(format!(
            "{name}: {} rows x {} attributes from {} (class 0: {c0}, class 1: {c1}, missing cells: {})",
            t.dataset.n_rows(),
            t.dataset.n_attributes(),
            path.file_name().map_or_else(|| path.display().to_string(), |f| f.to_string_lossy().into_owned()),
            t.dataset.missing_count(),
        ));
    }
    if test.dataset.n_rows() == 0 {
        anyhow::bail!("test set is empty after skipping {} rows", d.test_skip_rows);
    }
    Ok((train, test))
}

pub fn train_one(
    cfg: &Config,
    kind: PipelineKind,
    train: &Dataset,
    log: &mut RunLog,
) -> anyhow::Result<TrainedPipeline> {
    let started = Instant::now();
    let p = train_pipeline(train, kind, &cfg.pipeline_config()).with_context(|| format!("training {kind}"))?;
    if p.dropped_rows > 0 {
        log.note(format!("{kind}: dropped {} training rows with missing cells", p.dropped_rows));
    }
    let selected = match &p.selector {
        ripfs_core::pipeline::Selector::None => format!("{} attributes", train.n_attributes()),
        ripfs_core::pipeline::Selector::Pca(m) => format!("{} of {} components", m.retained, m.dimension()),
        ripfs_core::pipeline::Selector::Attributes(keep) => {
            format!("{} of {} attributes", keep.len(), train.n_attributes())
        }
    };
    log.note(format!("{kind}: {selected}, {} rules, default class {}", p.ruleset.rules.len(), p.ruleset.default_class));
    if let Some(sel) = &p.ard {
        if !sel.guarded_blocks.is_empty() {
            log.note(format!("{kind}: relevance guard fired in blocks {:?}", sel.guarded_blocks));
        }
        if sel.blocks.iter().any(|b| b.ridge_used) {
            log.note(format!("{kind}: Hessian needed ridge stabilization"));
        }
    }
    eprintln!("trained {kind} in {:.1}s", started.elapsed().as_secs_f64());
    Ok(p)
}

/// The degraded test suite restricted to the configured scopes.
pub fn build_suite(cfg: &Config, test: &Dataset) -> anyhow::Result<Vec<(MissingnessSpec, Dataset)>> {
    let scopes = cfg.scopes()?;
    let suite = make_suite(test, &cfg.experiment.levels, cfg.suite_seed())?;
    Ok(suite.into_iter().filter(|(s, _)| scopes.contains(&s.scope)).collect())
}

fn level_text(level: f64) -> String {
    format!("{level}")
}

pub fn variant_name(spec: &MissingnessSpec) -> String {
    format!("test_{}_{}.csv", level_text(spec.proportion), spec.scope.as_str())
}

fn mean(xs: impl Iterator<Item = f64>) -> Option<f64> {
    let (s, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    (n > 0).then(|| s / n as f64)
}

fn acc(v: Option<f64>) -> String {
    v.map_or_else(String::new, |a| format!("{a:.6}"))
}

/// `kind,level,scope,accuracy`, clean rows first with scope `none`.
pub fn results_csv(r: &ExperimentResult) -> String {
    let mut out = String::from("kind,level,scope,accuracy\n");
    for (kind, clean) in &r.clean {
        writeln!(out, "{kind},0,none,{clean:.6}").unwrap();
        for c in r.cells_for(*kind) {
            writeln!(out, "{kind},{},{},{:.6}", level_text(c.level), c.scope.as_str(), c.accuracy).unwrap();
        }
    }
    out
}

/// `kind,accuracy`: the unweighted mean over a kind's degraded cells.
pub fn overall_csv(r: &ExperimentResult) -> String {
    let mut out = String::from("kind,accuracy\n");
    for kind in r.clean.keys() {
        writeln!(out, "{kind},{}", acc(r.overall(*kind))).unwrap();
    }
    out
}

/// Accuracy per level averaged over scopes, one column per model.
pub fn figure3_csv(r: &ExperimentResult) -> String {
    let kinds: Vec<PipelineKind> = r.clean.keys().copied().collect();
    let mut out = String::from("level");
    kinds.iter().for_each(|k| write!(out, ",{k}").unwrap());
    out.push('\n');
    out.push('0');
    kinds.iter().for_each(|k| write!(out, ",{:.6}", r.clean[k]).unwrap());
    out.push('\n');
    for level in r.levels() {
        out.push_str(&level_text(level));
        for k in &kinds {
            let v = mean(r.cells_for(*k).filter(|c| c.level == level).map(|c| c.accuracy));
            write!(out, ",{}", acc(v)).unwrap();
        }
        out.push('\n');
    }
    out
}

/// Accuracy per level averaged over models, one column per scope.
pub fn figure4_csv(r: &ExperimentResult) -> String {
    let mut out = String::from("level,all,half\n");
    for level in r.levels() {
        let at = |s: Scope| mean(r.cells.iter().filter(|c| c.level == level && c.scope == s).map(|c| c.accuracy));
        writeln!(out, "{},{},{}", level_text(level), acc(at(Scope::AllAttributes)), acc(at(Scope::HalfAttributes)))
            .unwrap();
    }
    out
}

/// Accuracy per model, level and scope.
pub fn figure5_csv(r: &ExperimentResult) -> String {
    let mut out = String::from("kind,level,all,half\n");
    for kind in r.clean.keys() {
        for level in r.levels() {
            let at = |s| r.accuracy(*kind, level, s);
            writeln!(
                out,
                "{kind},{},{},{}",
                level_text(level),
                acc(at(Scope::AllAttributes)),
                acc(at(Scope::HalfAttributes))
            )
            .unwrap();
        }
    }
    out
}

fn write(dir: &Path, name: &str, text: &str) -> anyhow::Result<PathBuf> {
    let path = dir.join(name);
    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

/// Writes a pipeline model plus, for ARD-Rip, the network dump and its
/// training log.
pub fn save_pipeline(p: &TrainedPipeline, dir: &Path) -> anyhow::Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    write(dir, &format!("{}.model", p.kind), &format::write_pipeline(p)?)?;
    if let Some(sel) = &p.ard {
        write(dir, &format!("{}.ard", p.kind), &format::write_ard(&sel.blocks))?;
        write(dir, &format!("{}.ard.log", p.kind), &format::write_ard_log(&sel.log))?;
    }
    Ok(())
}

/// Runs the whole grid and writes every artifact into `out`.
pub fn run_experiment(cfg: &Config, out: &Path) -> anyhow::Result<ExperimentResult> {
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let mut log = RunLog::default();
    log.note(format!("seed {}", cfg.experiment.seed));
    let (train, test) = load_inputs(cfg, &mut log)?;

    let mut pipelines = Vec::new();
    for kind in cfg.kinds()? {
        let p = train_one(cfg, kind, &train.dataset, &mut log)?;
        save_pipeline(&p, &out.join("models"))?;
        pipelines.push(p);
    }

    let suite = build_suite(cfg, &test.dataset)?;
    if cfg.experiment.write_variants {
        let dir = out.join("variants");
        fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
        for (spec, ds) in &suite {
            test.with_dataset(ds.clone()).write(&dir.join(variant_name(spec)))?;
        }
    }
    let result = evaluate_suite(&pipelines, &test.dataset, &suite)?;
    for kind in result.clean.keys() {
        log.note(format!("{kind}: clean {:.6}, overall {}", result.clean[kind], acc(result.overall(*kind))));
    }

    write(out, "results.csv", &results_csv(&result))?;
    write(out, "overall.csv", &overall_csv(&result))?;
    write(out, "figure3.csv", &figure3_csv(&result))?;
    write(out, "figure4.csv", &figure4_csv(&result))?;
    write(out, "figure5.csv", &figure5_csv(&result))?;
    write(out, "run.log", &log.text())?;
    Ok(result)
}
