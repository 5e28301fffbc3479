//! RIPPER rule induction.
//!
//! Classes are processed from least to most prevalent. For each class but
//! the last, rules are grown on a random two-thirds of the remaining rows,
//! pruned on the other third, and added until a rule's pruning error is too
//! high, the class's rows are all covered, or the description length
//! overshoots the best seen so far by more than `d` bits. The most
//! prevalent class becomes the default.

mod grow;
mod mdl;
mod prune;
mod rule;

use alloc::format;
use alloc::vec::Vec;

use rand::seq::SliceRandom;

pub use grow::{foil_gain, grow_rule};
pub use mdl::{
    candidate_condition_count, description_length, exception_bits, rule_bits, subset_bits, theory_bits, THEORY_WEIGHT,
};
pub use prune::{prune_rule, prune_value};
pub use rule::{Condition, Predicate, Rule, RuleSet};

use crate::data::{Dataset, Label};
use crate::rng::seeded;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RipperConfig {
    /// Share of each class's rows used for growing. `1.0` disables pruning:
    /// rules are then checked against the growing rows.
    pub grow_fraction: f64,
    /// Slack `d`, in bits, over the smallest description length seen.
    pub dl_budget_bits: f64,
    /// A rule whose pruning-set error exceeds this is rejected.
    pub prune_error_cap: f64,
    pub split_seed: u64,
}

impl Default for RipperConfig {
    fn default() -> Self {
        RipperConfig { grow_fraction: 2.0 / 3.0, dl_budget_bits: 64.0, prune_error_cap: 0.5, split_seed: 1 }
    }
}

impl RipperConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.grow_fraction > 0.0 && self.grow_fraction <= 1.0) {
            return Err(Error::Config(format!("grow_fraction {} not in (0, 1]", self.grow_fraction)));
        }
        if !(self.dl_budget_bits > 0.0) {
            return Err(Error::Config(format!("dl budget {} must be positive", self.dl_budget_bits)));
        }
        if !(self.prune_error_cap > 0.0 && self.prune_error_cap <= 1.0) {
            return Err(Error::Config(format!("prune_error_cap {} not in (0, 1]", self.prune_error_cap)));
        }
        Ok(())
    }
}

/// Distinct labels by ascending count, ties by ascending code.
pub fn order_classes(ds: &Dataset) -> Vec<Label> {
    let counts = ds.class_counts();
    let mut classes: Vec<Label> = (0..2u8).filter(|&c| counts[c as usize] > 0).collect();
    classes.sort_by_key(|&c| (counts[c as usize], c));
    classes
}

/// Stratified shuffle split into (grow_pos, grow_neg, prune_pos, prune_neg).
fn split(
    pos: &[usize],
    neg: &[usize],
    grow_fraction: f64,
    rng: &mut crate::rng::Rng,
) -> (Vec<usize>, Vec<usize>, Vec<usize>, Vec<usize>) {
    let mut cut = |rows: &[usize]| {
        let mut rows = rows.to_vec();
        rows.shuffle(rng);
        let mut n_grow = libm::round(grow_fraction * rows.len() as f64) as usize;
        if n_grow == 0 && !rows.is_empty() {
            n_grow = 1;
        }
        let prune = rows.split_off(n_grow.min(rows.len()));
        (rows, prune)
    };
    let (gp, pp) = cut(pos);
    let (gn, pn) = cut(neg);
    (gp, gn, pp, pn)
}

/// Share of covered rows that are negatives; `None` when nothing is covered.
fn error_rate(rule: &Rule, ds: &Dataset, pos: &[usize], neg: &[usize]) -> Option<f64> {
    let (p, n) = rule.coverage(ds, pos, neg);
    (p + n > 0).then(|| n as f64 / (p + n) as f64)
}

/// Learns a rule set from a dataset containing both classes.
pub fn build_ruleset(ds: &Dataset, cfg: &RipperConfig) -> Result<RuleSet> {
    cfg.validate()?;
    let order = order_classes(ds);
    if order.len() < 2 {
        return Err(Error::Degenerate("training data holds a single class".into()));
    }
    let default_class = *order.last().expect("two classes");
    let n_candidates = candidate_condition_count(ds);
    let mut rng = seeded(cfg.split_seed);
    let mut remaining: Vec<usize> = (0..ds.n_rows()).collect();
    let mut rules = Vec::new();

    for &class in &order[..order.len() - 1] {
        let (class_pos, class_neg): (Vec<usize>, Vec<usize>) = remaining.iter().partition(|&&i| ds.label(i) == class);
        let mut pos = class_pos.clone();
        let mut neg = class_neg.clone();
        let mut class_rules: Vec<Rule> = Vec::new();
        let mut best_dl = description_length(&class_rules, ds, &class_pos, &class_neg, n_candidates);

        while !pos.is_empty() {
            let (grow_pos, grow_neg, prune_pos, prune_neg) = split(&pos, &neg, cfg.grow_fraction, &mut rng);
            let rule = grow_rule(ds, &grow_pos, &grow_neg, class);
            let rule = prune_rule(rule, ds, &prune_pos, &prune_neg);

            let error = error_rate(&rule, ds, &prune_pos, &prune_neg)
                .or_else(|| error_rate(&rule, ds, &grow_pos, &grow_neg))
                .unwrap_or(1.0);
            if error > cfg.prune_error_cap {
                break;
            }
            let before = pos.len();
            pos.retain(|&i| !rule.covers(ds.row(i)));
            if pos.len() == before {
                break;
            }
            neg.retain(|&i| !rule.covers(ds.row(i)));
            class_rules.push(rule);

            let dl = description_length(&class_rules, ds, &class_pos, &class_neg, n_candidates);
            if dl > best_dl + cfg.dl_budget_bits {
                break;
            }
            best_dl = best_dl.min(dl);
        }
        rules.extend(class_rules);
        remaining.retain(|&i| ds.label(i) != class);
    }
    Ok(RuleSet { rules, default_class })
}
