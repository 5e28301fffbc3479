use std::collections::BTreeSet;

use proptest::prelude::*;
use ripfs_core::data::{Attribute, Cell, Dataset};
use ripfs_core::ripper::*;

/// Truth tables (bit `c` = label of cell `c`) reachable by first-match rule
/// lists of up to four rules, each a conjunction of at most two conditions,
/// over `m` binary attributes.
fn reachable_tables(m: usize) -> BTreeSet<u32> {
    let cells = 1usize << m;
    // A conjunction is a set of cells; enumerate all with at most two literals.
    let mut conjunctions = vec![(0..cells).collect::<Vec<_>>()];
    for a in 0..m {
        for va in 0..2 {
            conjunctions.push((0..cells).filter(|c| (c >> a) & 1 == va).collect());
            for b in a + 1..m {
                for vb in 0..2 {
                    conjunctions.push((0..cells).filter(|c| (c >> a) & 1 == va && (c >> b) & 1 == vb).collect());
                }
            }
        }
    }
    let rules: Vec<(Vec<usize>, u32)> = conjunctions.iter().flat_map(|c| [(c.clone(), 0), (c.clone(), 1)]).collect();
    let mut tables = BTreeSet::new();
    // Each list state: (assigned mask, table bits).
    let mut frontier = vec![(0u32, 0u32)];
    for _depth in 0..=4 {
        let mut next = Vec::new();
        for &(assigned, bits) in &frontier {
            for default in 0..2u32 {
                let mut t = bits;
                for c in 0..cells {
                    if assigned & (1 << c) == 0 && default == 1 {
                        t |= 1 << c;
                    }
                }
                tables.insert(t);
            }
            for (cover, label) in &rules {
                let mut a = assigned;
                let mut t = bits;
                for &c in cover {
                    if a & (1 << c) == 0 {
                        a |= 1 << c;
                        if *label == 1 {
                            t |= 1 << c;
                        }
                    }
                }
                next.push((a, t));
            }
        }
        next.sort_unstable();
        next.dedup();
        frontier = next;
    }
    tables
}

/// Every multiset of 2..=8 labelled cells holding both classes.
fn all_datasets(m: usize) -> Vec<Vec<(usize, u8)>> {
    let kinds: Vec<(usize, u8)> = (0..1usize << m).flat_map(|c| [(c, 0), (c, 1)]).collect();
    let mut out = Vec::new();
    fn extend(kinds: &[(usize, u8)], from: usize, cur: &mut Vec<(usize, u8)>, out: &mut Vec<Vec<(usize, u8)>>) {
        if cur.len() >= 2 && cur.iter().any(|r| r.1 == 0) && cur.iter().any(|r| r.1 == 1) {
            out.push(cur.clone());
        }
        if cur.len() == 8 {
            return;
        }
        for k in from..kinds.len() {
            cur.push(kinds[k]);
            extend(kinds, k, cur, out);
            cur.pop();
        }
    }
    extend(&kinds, 0, &mut Vec::new(), &mut out);
    out
}

fn build(rows: &[(usize, u8)], m: usize, categorical: bool) -> Dataset {
    let schema =
        (0..m)
            .map(|j| {
                if categorical {
                    Attribute::categorical(format!("b{j}"))
                } else {
                    Attribute::continuous(format!("b{j}"))
                }
            })
            .collect();
    let cells = rows
        .iter()
        .map(|&(c, _)| {
            (0..m)
                .map(|j| {
                    let bit = (c >> j) & 1;
                    if categorical {
                        Cell::Code(bit as i64)
                    } else {
                        Cell::Value(bit as f64)
                    }
                })
                .collect()
        })
        .collect();
    Dataset::new(schema, cells, rows.iter().map(|r| r.1).collect()).unwrap()
}

fn best_correct(rows: &[(usize, u8)], tables: &BTreeSet<u32>) -> usize {
    tables.iter().map(|t| rows.iter().filter(|&&(c, y)| ((t >> c) & 1) as u8 == y).count()).max().unwrap()
}

fn unpruned() -> RipperConfig {
    RipperConfig { grow_fraction: 1.0, ..RipperConfig::default() }
}

#[test]
fn matches_exhaustive_rule_lists_on_tiny_binary_data() {
    let mut checked = 0;
    for m in 1..=2 {
        let tables = reachable_tables(m);
        for rows in all_datasets(m) {
            let best = best_correct(&rows, &tables);
            for categorical in [false, true] {
                let ds = build(&rows, m, categorical);
                let rs = build_ruleset(&ds, &unpruned()).unwrap();
                let got = (0..ds.n_rows()).filter(|&i| rs.classify(ds.row(i)) == ds.label(i)).count();
                assert_eq!(got, best, "rows {rows:?} categorical {categorical}: {rs:?}");
                checked += 1;
            }
        }
    }
    assert!(checked > 20_000);
}

#[test]
fn an_uncapped_error_test_admits_harmful_rules() {
    // Cell 0 holds one positive and two negatives, cell 1 three negatives.
    // Predicting negative everywhere gets 5/6; a rule for cell 0 drops that
    // to 4/6, yet with the cap at 1 it is accepted.
    let rows = [(0, 1), (0, 0), (0, 0), (1, 0), (1, 0), (1, 0)];
    let ds = build(&rows, 1, true);
    let best = best_correct(&rows, &reachable_tables(1));
    assert_eq!(best, 5);
    let capped = build_ruleset(&ds, &unpruned()).unwrap();
    assert_eq!(capped.accuracy(&ds).unwrap(), 5.0 / 6.0);
    let uncapped = build_ruleset(&ds, &RipperConfig { prune_error_cap: 1.0, ..unpruned() }).unwrap();
    assert!(uncapped.accuracy(&ds).unwrap() < 5.0 / 6.0);
}

fn noisy_table(seed: u64, rows: usize) -> Dataset {
    use rand::Rng as _;
    let mut rng = ripfs_core::rng::seeded(seed);
    let schema = vec![Attribute::continuous("x"), Attribute::continuous("y"), Attribute::categorical("c")];
    let mut cells = Vec::new();
    let mut labels = Vec::new();
    for _ in 0..rows {
        let x: f64 = rng.random_range(0.0..10.0);
        let y: f64 = rng.random_range(0.0..10.0);
        let c: i64 = rng.random_range(0..3);
        let noisy = rng.random_bool(0.1);
        labels.push(u8::from((x < 3.0 && c != 2) != noisy));
        cells.push(vec![Cell::Value((x * 10.0).round() / 10.0), Cell::Value(y.round()), Cell::Code(c)]);
    }
    Dataset::new(schema, cells, labels).unwrap()
}

#[test]
fn empty_ruleset_is_cheapest_when_nothing_is_misclassified() {
    use rand::Rng as _;
    // Target class absent from the positives: the empty set makes no errors.
    let ds = noisy_table(1, 60);
    let n_cand = candidate_condition_count(&ds);
    let neg: Vec<usize> = (0..ds.n_rows()).collect();
    let empty = description_length(&[], &ds, &[], &neg, n_cand);
    assert_eq!(empty, 0.0);
    let mut rng = ripfs_core::rng::seeded(5);
    for _ in 0..100 {
        let n_rules = rng.random_range(1..4);
        let rules: Vec<Rule> = (0..n_rules)
            .map(|_| Rule {
                target: 1,
                conditions: (0..rng.random_range(1..3))
                    .map(|_| Condition::new(0, Predicate::LessOrEqual(rng.random_range(0.0..10.0))))
                    .collect(),
            })
            .collect();
        assert!(description_length(&rules, &ds, &[], &neg, n_cand) > empty);
    }
}

#[test]
fn a_rule_covering_nothing_costs_bits() {
    let ds = noisy_table(2, 80);
    let n_cand = candidate_condition_count(&ds);
    let (pos, neg): (Vec<usize>, Vec<usize>) = (0..ds.n_rows()).partition(|&i| ds.label(i) == 1);
    let rs = build_ruleset(&ds, &RipperConfig::default()).unwrap();
    let before = description_length(&rs.rules, &ds, &pos, &neg, n_cand);
    let mut more = rs.rules.clone();
    more.push(Rule { target: 1, conditions: vec![Condition::new(0, Predicate::GreaterOrEqual(1e9))] });
    assert!(description_length(&more, &ds, &pos, &neg, n_cand) > before);
}

#[test]
fn learning_is_deterministic() {
    let ds = noisy_table(3, 300);
    assert_eq!(build_ruleset(&ds, &RipperConfig::default()), build_ruleset(&ds, &RipperConfig::default()));
}

#[test]
fn noisy_concept_is_mostly_learned() {
    let ds = noisy_table(4, 600);
    let rs = build_ruleset(&ds, &RipperConfig::default()).unwrap();
    assert!(rs.accuracy(&ds).unwrap() > 0.85);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn classify_is_total(seed in 0u64..50, missing in proptest::collection::vec(any::<bool>(), 3)) {
        let ds = noisy_table(seed, 60);
        let rs = build_ruleset(&ds, &RipperConfig::default()).unwrap();
        let mut row = ds.row(0).to_vec();
        for (cell, m) in row.iter_mut().zip(&missing) {
            if *m { *cell = Cell::Missing; }
        }
        prop_assert!(rs.classify(&row) <= 1);
        prop_assert_eq!(rs.classify(&[Cell::Missing; 3]), rs.default_class);
    }

    #[test]
    fn class_order_is_a_permutation(labels in proptest::collection::vec(0u8..2, 1..40)) {
        let rows = labels.iter().map(|_| vec![Cell::Value(0.0)]).collect();
        let ds = Dataset::new(vec![Attribute::continuous("x")], rows, labels.clone()).unwrap();
        let mut order = order_classes(&ds);
        order.sort_unstable();
        let mut distinct = labels.clone();
        distinct.sort_unstable();
        distinct.dedup();
        prop_assert_eq!(order, distinct);
    }

    #[test]
    fn pruning_never_lengthens(seed in 0u64..200) {
        let ds = noisy_table(seed, 90);
        let (pos, neg): (Vec<usize>, Vec<usize>) = (0..ds.n_rows()).partition(|&i| ds.label(i) == 1);
        let half = |v: &[usize]| (v.iter().copied().step_by(2).collect::<Vec<_>>(), v.iter().copied().skip(1).step_by(2).collect::<Vec<_>>());
        let ((gp, pp), (gn, pn)) = (half(&pos), half(&neg));
        let grown = grow_rule(&ds, &gp, &gn, 1);
        let len = grown.len();
        let pruned = prune_rule(grown, &ds, &pp, &pn);
        prop_assert!(pruned.len() <= len);
    }

    #[test]
    fn separable_positives_get_a_clean_rule(
        pos in proptest::collection::btree_set(0i32..50, 1..10),
        neg in proptest::collection::btree_set(60i32..120, 1..10),
        flip in any::<bool>(),
    ) {
        let sign = if flip { -1.0 } else { 1.0 };
        let rows: Vec<Vec<Cell>> = pos.iter().chain(&neg).map(|&v| vec![Cell::Value(sign * v as f64)]).collect();
        let labels: Vec<u8> = pos.iter().map(|_| 1).chain(neg.iter().map(|_| 0)).collect();
        let ds = Dataset::new(vec![Attribute::continuous("x")], rows, labels).unwrap();
        let (p, n): (Vec<usize>, Vec<usize>) = (0..ds.n_rows()).partition(|&i| ds.label(i) == 1);
        let rule = grow_rule(&ds, &p, &n, 1);
        let (cp, cn) = rule.coverage(&ds, &p, &n);
        prop_assert!(cp >= 1);
        prop_assert_eq!(cn, 0);
    }
}
