//! MCAR (missing completely at random) degradation of test sets.
//!
//! Masks depend only on the table's shape and the seed, never on cell values.
//! Sampling is exact-count without replacement, so a proportion `p` over `E`
//! eligible cells always blanks `floor(p * E)` of them.

use alloc::format;
use alloc::vec::Vec;

use rand::seq::index;

use crate::data::Dataset;
use crate::rng::{seeded, sub_seed};
use crate::{Error, Result};

/// The proportions used for the benchmark test suites.
pub const BENCHMARK_LEVELS: [f64; 5] = [0.10, 0.25, 0.30, 0.40, 0.50];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scope {
    /// Every attribute is eligible.
    AllAttributes,
    /// `floor(m / 2)` attributes, chosen by the seed, are eligible.
    HalfAttributes,
}

impl Scope {
    pub fn as_str(self) -> &'static str {
        match self {
            Scope::AllAttributes => "all",
            Scope::HalfAttributes => "half",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MissingnessSpec {
    pub proportion: f64,
    pub scope: Scope,
    pub seed: u64,
}

impl MissingnessSpec {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.proportion) {
            return Err(Error::Spec(format!("proportion {} outside [0, 1]", self.proportion)));
        }
        Ok(())
    }
}

/// Number of cells to blank for proportion `p` of `eligible` cells.
///
/// The product is nudged by 1e-9 before flooring so that decimal levels such
/// as 0.3 of 10 land on the nominal count instead of one below it.
pub fn target_count(p: f64, eligible: usize) -> usize {
    let c = libm::floor(p * eligible as f64 + 1e-9) as usize;
    c.min(eligible)
}

/// Attribute indices eligible for masking under `spec`, ascending.
pub fn eligible_attributes(n_attributes: usize, spec: &MissingnessSpec) -> Vec<usize> {
    match spec.scope {
        Scope::AllAttributes => (0..n_attributes).collect(),
        Scope::HalfAttributes => {
            let mut rng = seeded(sub_seed(spec.seed, u64::MAX));
            let mut chosen = index::sample(&mut rng, n_attributes, n_attributes / 2).into_vec();
            chosen.sort_unstable();
            chosen
        }
    }
}

/// Copy of `ds` with `floor(p * eligible)` eligible cells set missing.
///
/// Cells that were already missing stay missing and still count toward the
/// selection. Labels are never touched.
pub fn inject(ds: &Dataset, spec: &MissingnessSpec) -> Result<Dataset> {
    spec.validate()?;
    if ds.n_rows() == 0 {
        return Err(Error::Precondition("cannot inject missingness into an empty dataset".into()));
    }
    let attrs = eligible_attributes(ds.n_attributes(), spec);
    let eligible = ds.n_rows() * attrs.len();
    let count = target_count(spec.proportion, eligible);
    let mut rng = seeded(spec.seed);
    let picks = index::sample(&mut rng, eligible, count);
    let k = attrs.len();
    Ok(ds.with_missing(picks.into_iter().map(|c| (c / k, attrs[c % k]))))
}

/// Every level crossed with both scopes, ordered by level then all-before-half.
/// Variant `v` uses `sub_seed(seed, v)`.
pub fn make_suite(ds: &Dataset, levels: &[f64], seed: u64) -> Result<Vec<(MissingnessSpec, Dataset)>> {
    if levels.is_empty() {
        return Err(Error::Spec("no missingness levels given".into()));
    }
    let mut sorted = levels.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut out = Vec::with_capacity(sorted.len() * 2);
    for &proportion in &sorted {
        for scope in [Scope::AllAttributes, Scope::HalfAttributes] {
            let spec = MissingnessSpec { proportion, scope, seed: sub_seed(seed, out.len() as u64) };
            let degraded = inject(ds, &spec)?;
            out.push((spec, degraded));
        }
    }
    Ok(out)
}
