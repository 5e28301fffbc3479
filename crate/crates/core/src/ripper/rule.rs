use alloc::vec::Vec;

use crate::data::{Cell, Dataset, Label};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Predicate {
    /// Categorical attribute equals a code.
    Equals(i64),
    /// Continuous attribute is at most the threshold.
    LessOrEqual(f64),
    /// Continuous attribute is at least the threshold.
    GreaterOrEqual(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Condition {
    pub attribute: usize,
    pub predicate: Predicate,
}

impl Condition {
    pub fn new(attribute: usize, predicate: Predicate) -> Self {
        Condition { attribute, predicate }
    }

    /// False on a missing cell.
    #[inline]
    pub fn holds(&self, row: &[Cell]) -> bool {
        match (self.predicate, row[self.attribute]) {
            (_, Cell::Missing) => false,
            (Predicate::Equals(code), Cell::Code(c)) => c == code,
            (Predicate::Equals(code), Cell::Value(v)) => v == code as f64,
            (Predicate::LessOrEqual(t), cell) => cell.as_f64().is_some_and(|v| v <= t),
            (Predicate::GreaterOrEqual(t), cell) => cell.as_f64().is_some_and(|v| v >= t),
        }
    }
}

/// A conjunction of conditions predicting `target`. No conditions matches
/// every row.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub conditions: Vec<Condition>,
    pub target: Label,
}

impl Rule {
    pub fn new(target: Label) -> Self {
        Rule { conditions: Vec::new(), target }
    }

    #[inline]
    pub fn covers(&self, row: &[Cell]) -> bool {
        self.conditions.iter().all(|c| c.holds(row))
    }

    pub fn len(&self) -> usize {
        self.conditions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.conditions.is_empty()
    }

    /// Counts `(positives, negatives)` covered among the given rows.
    pub fn coverage(&self, ds: &Dataset, pos: &[usize], neg: &[usize]) -> (usize, usize) {
        let count = |rows: &[usize]| rows.iter().filter(|&&i| self.covers(ds.row(i))).count();
        (count(pos), count(neg))
    }
}

/// Ordered rule list with a fall-through class. Classification is first-match.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleSet {
    pub rules: Vec<Rule>,
    pub default_class: Label,
}

impl RuleSet {
    /// Label of the first rule covering `row`, else the default class.
    pub fn classify(&self, row: &[Cell]) -> Label {
        self.rules.iter().find(|r| r.covers(row)).map_or(self.default_class, |r| r.target)
    }

    /// [`classify`](Self::classify) with an arity check against `n_attributes`.
    pub fn classify_checked(&self, row: &[Cell], n_attributes: usize) -> Result<Label> {
        if row.len() != n_attributes {
            return Err(Error::Shape { expected: n_attributes, got: row.len() });
        }
        Ok(self.classify(row))
    }

    /// Largest attribute index referenced by any condition, if any.
    pub fn max_attribute(&self) -> Option<usize> {
        self.rules.iter().flat_map(|r| &r.conditions).map(|c| c.attribute).max()
    }

    /// Fraction of rows of `ds` classified correctly.
    pub fn accuracy(&self, ds: &Dataset) -> Result<f64> {
        if ds.n_rows() == 0 {
            return Err(Error::Precondition("accuracy of an empty dataset".into()));
        }
        if let Some(j) = self.max_attribute() {
            if j >= ds.n_attributes() {
                return Err(Error::Shape { expected: j + 1, got: ds.n_attributes() });
            }
        }
        let correct = (0..ds.n_rows()).filter(|&i| self.classify(ds.row(i)) == ds.label(i)).count();
        Ok(correct as f64 / ds.n_rows() as f64)
    }
}
