use alloc::vec::Vec;

use super::rule::Rule;
use crate::data::Dataset;

/// Pruning score `(p - n) / (p + n)`; `-1` when nothing is covered.
pub fn prune_value(p: usize, n: usize) -> f64 {
    if p + n == 0 {
        -1.0
    } else {
        (p as f64 - n as f64) / (p + n) as f64
    }
}

/// Number of leading conditions of `rule` that hold on row `i`.
fn satisfied_prefix(rule: &Rule, ds: &Dataset, i: usize) -> usize {
    let row = ds.row(i);
    rule.conditions.iter().take_while(|c| c.holds(row)).count()
}

/// Keeps the condition prefix with the best pruning score on the pruning rows.
///
/// Candidates delete the last `k` conditions for `k = 0..=len`. Ties keep the
/// longer rule.
pub fn prune_rule(rule: Rule, ds: &Dataset, prune_pos: &[usize], prune_neg: &[usize]) -> Rule {
    let len = rule.len();
    // hist[q] = rows whose satisfied prefix is exactly q conditions long.
    let mut pos_hist = Vec::from_iter(core::iter::repeat_n(0usize, len + 1));
    let mut neg_hist = pos_hist.clone();
    for &i in prune_pos {
        pos_hist[satisfied_prefix(&rule, ds, i)] += 1;
    }
    for &i in prune_neg {
        neg_hist[satisfied_prefix(&rule, ds, i)] += 1;
    }
    // A prefix of length q covers every row whose satisfied prefix is >= q.
    let (mut p, mut n) = (0, 0);
    let mut scores = Vec::with_capacity(len + 1);
    for q in (0..=len).rev() {
        p += pos_hist[q];
        n += neg_hist[q];
        scores.push((q, prune_value(p, n)));
    }
    // `scores` runs from the full rule down to the empty one; a strict
    // comparison keeps the longest among equal scores.
    let mut best = scores[0];
    for &s in &scores[1..] {
        if s.1 > best.1 {
            best = s;
        }
    }
    let mut rule = rule;
    rule.conditions.truncate(best.0);
    rule
}
