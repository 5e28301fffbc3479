//! Minimum-description-length accounting for rule sets.
//!
//! Theory cost follows Cohen's scheme: a rule with `k` conditions costs
//! `||k|| + S(n, k)` bits, where `||k||` is `log2 k + 2 log2 log2 k` and
//! `S(n, k) = k log2(n/k) + (n-k) log2(n/(n-k))` is the entropy bound on
//! picking `k` of the `n` possible conditions. The sum over rules is halved
//! to allow for redundancy in the encoding. Exceptions cost
//! `log2 C(covered, fp) + log2 C(uncovered, fn)`.

use super::rule::Rule;
use crate::data::{AttributeKind, Dataset};
use crate::linalg::{log2, log2_binomial};

/// Weight applied to the theory bits.
pub const THEORY_WEIGHT: f64 = 0.5;

/// Number of distinct conditions a rule could use on `ds`: one per category
/// code, two (`<=`, `>=`) per gap between consecutive distinct values.
pub fn candidate_condition_count(ds: &Dataset) -> f64 {
    let mut total = 0usize;
    let mut vals = alloc::vec::Vec::with_capacity(ds.n_rows());
    for (j, attr) in ds.schema().iter().enumerate() {
        match attr.kind {
            AttributeKind::Categorical => total += attr.categories.len(),
            AttributeKind::Continuous => {
                vals.clear();
                vals.extend(ds.rows().filter_map(|r| r[j].as_f64()));
                vals.sort_by(f64::total_cmp);
                vals.dedup();
                total += 2 * vals.len().saturating_sub(1);
            }
        }
    }
    total as f64
}

/// Entropy bound on the bits needed to pick `k` items out of `n`.
pub fn subset_bits(n: f64, k: f64) -> f64 {
    if k <= 0.0 || k >= n {
        return 0.0;
    }
    let p = k / n;
    -k * log2(p) - (n - k) * log2(1.0 - p)
}

/// Bits to state a rule's length and which conditions it uses, unweighted.
pub fn rule_bits(k: usize, n_candidates: f64) -> f64 {
    if k == 0 {
        return 0.0;
    }
    let k = k as f64;
    let mut len_bits = log2(k);
    if k > 1.0 {
        len_bits += 2.0 * log2(len_bits);
    }
    len_bits + subset_bits(n_candidates, k)
}

pub fn theory_bits(rules: &[Rule], n_candidates: f64) -> f64 {
    THEORY_WEIGHT * rules.iter().map(|r| rule_bits(r.len(), n_candidates)).sum::<f64>()
}

/// Bits to flag the false positives among covered rows and the false
/// negatives among uncovered rows.
pub fn exception_bits(covered: usize, false_pos: usize, uncovered: usize, false_neg: usize) -> f64 {
    log2_binomial(covered as f64, false_pos as f64) + log2_binomial(uncovered as f64, false_neg as f64)
}

/// Total description length of `rules` (any firing rule predicts positive)
/// over the given positive and negative rows.
pub fn description_length(rules: &[Rule], ds: &Dataset, pos: &[usize], neg: &[usize], n_candidates: f64) -> f64 {
    let fires = |i: usize| rules.iter().any(|r| r.covers(ds.row(i)));
    let tp = pos.iter().filter(|&&i| fires(i)).count();
    let fp = neg.iter().filter(|&&i| fires(i)).count();
    let covered = tp + fp;
    let uncovered = pos.len() + neg.len() - covered;
    let false_neg = pos.len() - tp;
    theory_bits(rules, n_candidates) + exception_bits(covered, fp, uncovered, false_neg)
}
