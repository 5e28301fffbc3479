use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::rule::{Condition, Predicate, Rule};
use crate::data::{AttributeKind, Dataset, Label};
use crate::linalg::log2;

/// FOIL information gain of narrowing coverage from `(p0, n0)` to `(p1, n1)`.
pub fn foil_gain(p0: usize, n0: usize, p1: usize, n1: usize) -> f64 {
    if p1 == 0 || p0 == 0 {
        return 0.0;
    }
    let before = log2(p0 as f64 / (p0 + n0) as f64);
    let after = log2(p1 as f64 / (p1 + n1) as f64);
    p1 as f64 * (after - before)
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    condition: Condition,
    pos: usize,
    neg: usize,
}

/// Every candidate condition over the covered rows, with its coverage.
///
/// Categorical attributes offer one equality test per observed code.
/// Continuous attributes offer `<=` and `>=` at each midpoint between
/// consecutive distinct observed values.
fn candidates(ds: &Dataset, pos: &[usize], neg: &[usize]) -> Vec<Candidate> {
    let mut out = Vec::new();
    let mut values: Vec<(f64, bool)> = Vec::with_capacity(pos.len() + neg.len());
    for (j, attr) in ds.schema().iter().enumerate() {
        let tagged = pos.iter().map(|&i| (i, true)).chain(neg.iter().map(|&i| (i, false)));
        match attr.kind {
            AttributeKind::Categorical => {
                let mut counts: BTreeMap<i64, (usize, usize)> = BTreeMap::new();
                for (i, is_pos) in tagged {
                    if let Some(v) = ds.cell(i, j).as_f64() {
                        let e = counts.entry(v as i64).or_default();
                        if is_pos {
                            e.0 += 1
                        } else {
                            e.1 += 1
                        }
                    }
                }
                out.extend(counts.into_iter().map(|(code, (p, n))| Candidate {
                    condition: Condition::new(j, Predicate::Equals(code)),
                    pos: p,
                    neg: n,
                }));
            }
            AttributeKind::Continuous => {
                values.clear();
                values.extend(tagged.filter_map(|(i, is_pos)| ds.cell(i, j).as_f64().map(|v| (v, is_pos))));
                values.sort_by(|a, b| a.0.total_cmp(&b.0));
                let (tot_p, tot_n) =
                    values.iter().fold((0, 0), |(p, n), &(_, y)| if y { (p + 1, n) } else { (p, n + 1) });
                let (mut p, mut n) = (0, 0);
                let mut t = 0;
                while t < values.len() {
                    let v = values[t].0;
                    while t < values.len() && values[t].0 == v {
                        if values[t].1 {
                            p += 1
                        } else {
                            n += 1
                        }
                        t += 1;
                    }
                    if t == values.len() {
                        break;
                    }
                    let next = values[t].0;
                    let mid = (v + next) / 2.0;
                    if !(mid > v && mid < next) {
                        continue;
                    }
                    out.push(Candidate { condition: Condition::new(j, Predicate::LessOrEqual(mid)), pos: p, neg: n });
                    out.push(Candidate {
                        condition: Condition::new(j, Predicate::GreaterOrEqual(mid)),
                        pos: tot_p - p,
                        neg: tot_n - n,
                    });
                }
            }
        }
    }
    out
}

/// Greedily grows a rule for `target` from the growing rows.
///
/// Each step appends the condition with the largest FOIL gain. Growth ends
/// when no growing negative is covered or no condition has positive gain.
/// When every condition has zero gain, a condition that keeps precision
/// unchanged while dropping at least one negative is still taken, so that
/// parity-like structure (XOR) is reachable one step later.
pub fn grow_rule(ds: &Dataset, grow_pos: &[usize], grow_neg: &[usize], target: Label) -> Rule {
    let mut rule = Rule::new(target);
    let mut pos = grow_pos.to_vec();
    let mut neg = grow_neg.to_vec();
    while !neg.is_empty() && !pos.is_empty() {
        let (p0, n0) = (pos.len(), neg.len());
        let mut best: Option<(f64, Candidate)> = None;
        let mut fallback: Option<Candidate> = None;
        for c in candidates(ds, &pos, &neg) {
            if c.pos == 0 || rule.conditions.contains(&c.condition) {
                continue;
            }
            let gain = foil_gain(p0, n0, c.pos, c.neg);
            if gain > 0.0 {
                if best.as_ref().is_none_or(|(g, _)| gain > *g) {
                    best = Some((gain, c));
                }
            } else if gain == 0.0 && c.neg < n0 && fallback.is_none_or(|f| c.pos > f.pos) {
                fallback = Some(c);
            }
        }
        let Some(chosen) = best.map(|(_, c)| c).or(fallback) else {
            break;
        };
        rule.conditions.push(chosen.condition);
        let row_ok = |&i: &usize| chosen.condition.holds(ds.row(i));
        pos.retain(row_ok);
        neg.retain(row_ok);
    }
    rule
}
