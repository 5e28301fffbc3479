//! The three classifiers under comparison and the missingness grid.
//!
//! - Ripper alone, on the raw attributes.
//! - PCA-Rip: Ripper over the retained principal components. Test rows are
//!   projected (missing cells mean-imputed) and classified in component
//!   space.
//! - ARD-Rip: Ripper over the attributes ARD keeps. Test rows keep their
//!   missing cells, which fail every condition.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::ard::{select_features, ArdConfig, ArdSelection};
use crate::data::{Attribute, Cell, Dataset};
use crate::missingness::{make_suite, MissingnessSpec, Scope};
use crate::pca::PcaModel;
use crate::ripper::{build_ruleset, RipperConfig, RuleSet};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PipelineKind {
    RipperOnly,
    PcaRip,
    ArdRip,
}

impl PipelineKind {
    pub const ALL: [PipelineKind; 3] = [PipelineKind::RipperOnly, PipelineKind::PcaRip, PipelineKind::ArdRip];

    pub fn as_str(self) -> &'static str {
        match self {
            PipelineKind::RipperOnly => "ripper",
            PipelineKind::PcaRip => "pca-rip",
            PipelineKind::ArdRip => "ard-rip",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        PipelineKind::ALL.into_iter().find(|k| k.as_str() == s)
    }
}

impl core::fmt::Display for PipelineKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PipelineConfig {
    pub ripper: RipperConfig,
    pub ard: ArdConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Selector {
    None,
    Pca(PcaModel),
    /// Retained attribute indices, ascending.
    Attributes(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainedPipeline {
    pub kind: PipelineKind,
    /// Schema the pipeline was trained on, before any selection.
    pub input_schema: Vec<Attribute>,
    pub selector: Selector,
    pub ruleset: RuleSet,
    /// Training rows dropped because they had missing cells.
    pub dropped_rows: usize,
    /// Full ARD output, for ARD-Rip pipelines trained in this process.
    pub ard: Option<ArdSelection>,
}

/// Trains one pipeline. Rows with missing cells are dropped first.
pub fn train_pipeline(train: &Dataset, kind: PipelineKind, cfg: &PipelineConfig) -> Result<TrainedPipeline> {
    let complete = train.complete_rows();
    let dropped_rows = train.n_rows() - complete.len();
    let train = if dropped_rows > 0 { train.select_rows(&complete) } else { train.clone() };
    let input_schema = train.schema().to_vec();
    let (selector, ruleset, ard) = match kind {
        PipelineKind::RipperOnly => (Selector::None, build_ruleset(&train, &cfg.ripper)?, None),
        PipelineKind::PcaRip => {
            let model = PcaModel::fit(&train)?;
            let projected = model.transform(&train)?;
            let ds = Dataset::from_matrix(model.component_names(), &projected, train.labels().to_vec())?;
            (Selector::Pca(model), build_ruleset(&ds, &cfg.ripper)?, None)
        }
        PipelineKind::ArdRip => {
            let selection = select_features(&train, &cfg.ard)?;
            let ds = train.select_attributes(&selection.retained)?;
            let rs = build_ruleset(&ds, &cfg.ripper)?;
            (Selector::Attributes(selection.retained.clone()), rs, Some(selection))
        }
    };
    Ok(TrainedPipeline { kind, input_schema, selector, ruleset, dropped_rows, ard })
}

impl TrainedPipeline {
    fn check_schema(&self, test: &Dataset) -> Result<()> {
        let same = test.n_attributes() == self.input_schema.len()
            && test.schema().iter().zip(&self.input_schema).all(|(a, b)| a.name == b.name && a.kind == b.kind);
        if same {
            Ok(())
        } else {
            Err(Error::Schema(String::from("test schema does not match the training schema")))
        }
    }

    /// Label for one raw test row.
    pub fn predict_row(&self, row: &[Cell]) -> Result<u8> {
        if row.len() != self.input_schema.len() {
            return Err(Error::Shape { expected: self.input_schema.len(), got: row.len() });
        }
        Ok(match &self.selector {
            Selector::None => self.ruleset.classify(row),
            Selector::Pca(model) => {
                let z: Vec<Cell> = model.transform_row(row)?.into_iter().map(Cell::Value).collect();
                self.ruleset.classify(&z)
            }
            Selector::Attributes(keep) => {
                let r: Vec<Cell> = keep.iter().map(|&j| row[j]).collect();
                self.ruleset.classify(&r)
            }
        })
    }

    pub fn predict(&self, test: &Dataset) -> Result<Vec<u8>> {
        self.check_schema(test)?;
        test.rows().map(|r| self.predict_row(r)).collect()
    }

    /// Share of `test` rows classified correctly.
    pub fn evaluate(&self, test: &Dataset) -> Result<f64> {
        if test.n_rows() == 0 {
            return Err(Error::Precondition("cannot evaluate on an empty test set".into()));
        }
        let predicted = self.predict(test)?;
        let correct = predicted.iter().zip(test.labels()).filter(|(p, l)| p == l).count();
        Ok(correct as f64 / test.n_rows() as f64)
    }
}

pub fn evaluate(p: &TrainedPipeline, test: &Dataset) -> Result<f64> {
    p.evaluate(test)
}

/// Accuracy of one pipeline on one degraded test variant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridCell {
    pub kind: PipelineKind,
    pub level: f64,
    pub scope: Scope,
    pub accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExperimentResult {
    /// Degraded cells in (kind, level ascending, all-then-half) order.
    pub cells: Vec<GridCell>,
    /// Accuracy on the untouched test set.
    pub clean: BTreeMap<PipelineKind, f64>,
}

impl ExperimentResult {
    pub fn cells_for(&self, kind: PipelineKind) -> impl Iterator<Item = &GridCell> + '_ {
        self.cells.iter().filter(move |c| c.kind == kind)
    }

    pub fn accuracy(&self, kind: PipelineKind, level: f64, scope: Scope) -> Option<f64> {
        self.cells.iter().find(|c| c.kind == kind && c.level == level && c.scope == scope).map(|c| c.accuracy)
    }

    /// Unweighted mean over a kind's degraded cells.
    pub fn overall(&self, kind: PipelineKind) -> Option<f64> {
        let (sum, n) = self.cells_for(kind).fold((0.0, 0usize), |(s, n), c| (s + c.accuracy, n + 1));
        (n > 0).then(|| sum / n as f64)
    }

    /// Mean over a kind's cells with the given scope.
    pub fn scope_mean(&self, kind: PipelineKind, scope: Scope) -> Option<f64> {
        let (sum, n) =
            self.cells_for(kind).filter(|c| c.scope == scope).fold((0.0, 0usize), |(s, n), c| (s + c.accuracy, n + 1));
        (n > 0).then(|| sum / n as f64)
    }

    /// Distinct levels, ascending.
    pub fn levels(&self) -> Vec<f64> {
        let mut levels: Vec<f64> = self.cells.iter().map(|c| c.level).collect();
        levels.sort_by(f64::total_cmp);
        levels.dedup();
        levels
    }
}

fn in_cell(kind: PipelineKind, level: f64, scope: Scope, e: Error) -> Error {
    Error::InCell { context: format!("{kind}, level {level}, scope {}", scope.as_str()), source: Box::new(e) }
}

/// Evaluates trained pipelines on the clean test set and on every
/// missingness variant built from it.
pub fn evaluate_grid(
    pipelines: &[TrainedPipeline],
    test: &Dataset,
    levels: &[f64],
    seed: u64,
) -> Result<ExperimentResult> {
    evaluate_suite(pipelines, test, &make_suite(test, levels, seed)?)
}

/// Like [`evaluate_grid`] over a prebuilt suite of degraded copies of `test`.
pub fn evaluate_suite(
    pipelines: &[TrainedPipeline],
    test: &Dataset,
    suite: &[(MissingnessSpec, Dataset)],
) -> Result<ExperimentResult> {
    let mut result = ExperimentResult::default();
    for p in pipelines {
        result.clean.insert(p.kind, p.evaluate(test)?);
        for (spec, ds) in suite {
            let accuracy = p.evaluate(ds).map_err(|e| in_cell(p.kind, spec.proportion, spec.scope, e))?;
            result.cells.push(GridCell { kind: p.kind, level: spec.proportion, scope: spec.scope, accuracy });
        }
    }
    Ok(result)
}
