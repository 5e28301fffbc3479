#![allow(dead_code)]

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rand::Rng as _;
use ripfs_core::data::{Attribute, Cell, Dataset};
use ripfs_core::rng::seeded;

/// Mixed-kind table: four continuous columns, one categorical, label last.
/// The label follows `x0 + x1 > 0` with a little noise, and the categorical
/// column carries a weak signal of its own.
pub fn mixed(seed: u64, rows: usize) -> Dataset {
    let mut rng = seeded(seed);
    let schema = vec![
        Attribute::continuous("x0"),
        Attribute::continuous("x1"),
        Attribute::continuous("x2"),
        Attribute::continuous("x3"),
        Attribute::categorical("grp"),
    ];
    let mut data = Vec::with_capacity(rows);
    let mut labels = Vec::with_capacity(rows);
    for _ in 0..rows {
        let x: Vec<f64> = (0..4).map(|_| rng.random_range(-2.0..2.0)).collect();
        let noise: f64 = rng.random_range(-0.3..0.3);
        let y = u8::from(x[0] + x[1] + noise > 0.0);
        let grp = if rng.random_bool(0.7) { i64::from(y) + 1 } else { rng.random_range(1..=3) };
        data.push(x.iter().map(|&v| Cell::Value(v)).chain([Cell::Code(grp)]).collect());
        labels.push(y);
    }
    Dataset::new(schema, data, labels).unwrap()
}

/// Writes `ds` as a comma table with header plus its sidecar; returns
/// `(table, sidecar)`.
pub fn write_mixed(dir: &Path, ds: &Dataset) -> (PathBuf, PathBuf) {
    let table = dir.join("data.csv");
    let schema = dir.join("schema.txt");
    let cols = ripfs::table::columns_for(ds, "y");
    ripfs::table::write_schema(&schema, &cols).unwrap();
    let mut text = String::new();
    let names: Vec<&str> = cols.iter().map(|c| c.name.as_str()).collect();
    writeln!(text, "{}", names.join(",")).unwrap();
    for (i, row) in ds.rows().enumerate() {
        for c in row {
            match c {
                Cell::Value(v) => write!(text, "{v},").unwrap(),
                Cell::Code(k) => write!(text, "{k},").unwrap(),
                Cell::Missing => text.push_str("?,"),
            }
        }
        writeln!(text, "{}", ds.label(i)).unwrap();
    }
    fs::write(&table, text).unwrap();
    (table, schema)
}

/// A small, fast experiment over a synthetic table: 240 training rows, 120
/// test rows, all three pipelines.
pub fn small_experiment(dir: &Path, seed: u64) -> PathBuf {
    let (table, _) = write_mixed(dir, &mixed(seed, 360));
    let cfg = dir.join("run.toml");
    let text = format!(
        r#"[data]
train = "{}"
schema = "schema.txt"
train_rows = 240
test_skip_rows = 240

[experiment]
seed = {seed}

[ard]
epochs = 200
learning_rate = 0.1
"#,
        table.file_name().unwrap().to_string_lossy()
    );
    fs::write(&cfg, text).unwrap();
    cfg
}
