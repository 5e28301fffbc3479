mod common;

use std::fs;

use proptest::prelude::*;
use ripfs::table::*;
use ripfs_core::data::{AttributeKind, Cell};
use ripfs_core::missingness::{inject, MissingnessSpec, Scope};

fn opts() -> TableOptions {
    TableOptions::default()
}

#[test]
fn sidecar_kinds_and_missing_cells_load() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    fs::write(&path, "a,b,y\n1.5,2,1\n?,3,0\n-0.25,?,1\n").unwrap();
    let schema_path = dir.path().join("s.txt");
    fs::write(&schema_path, "# columns\na,continuous\nb,categorical\n\ny,label\n").unwrap();
    let schema = read_schema(&schema_path).unwrap();
    let t = load_table(&path, Some(&schema), &opts()).unwrap();
    let ds = &t.dataset;
    assert_eq!(ds.n_rows(), 3);
    assert_eq!(ds.schema()[1].kind, AttributeKind::Categorical);
    assert_eq!(ds.row(0), &[Cell::Value(1.5), Cell::Code(2)]);
    assert_eq!(ds.row(1), &[Cell::Missing, Cell::Code(3)]);
    assert_eq!(ds.row(2), &[Cell::Value(-0.25), Cell::Missing]);
    assert_eq!(ds.labels(), &[1, 0, 1]);
}

#[test]
fn semicolons_are_sniffed_and_headerless_files_use_the_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    fs::write(&path, "0;1;1,5\n1;NA;x\n").unwrap();
    let schema_path = dir.path().join("s.txt");
    fs::write(&schema_path, "y,label\nk,categorical\nnote,ignore\n").unwrap();
    let schema = read_schema(&schema_path).unwrap();
    let o = TableOptions { header: false, missing_token: "NA".into(), ..opts() };
    let t = load_table(&path, Some(&schema), &o).unwrap();
    assert_eq!(t.delimiter, b';');
    assert_eq!(t.dataset.n_attributes(), 1);
    assert_eq!(t.dataset.labels(), &[0, 1]);
    assert_eq!(t.dataset.row(0), &[Cell::Code(1)]);
    assert_eq!(t.dataset.row(1), &[Cell::Missing]);
}

#[test]
fn without_a_sidecar_the_last_column_is_the_label() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    fs::write(&path, "p,q,r\n1,0,0\n3,1,1\n").unwrap();
    let t = load_table(&path, None, &opts()).unwrap();
    assert_eq!(t.dataset.labels(), &[0, 1]);
    let t = load_table(&path, None, &TableOptions { label: Some("q".into()), ..opts() });
    let t = t.unwrap();
    assert_eq!(t.dataset.schema().iter().map(|a| a.name.as_str()).collect::<Vec<_>>(), ["p", "r"]);
    assert_eq!(t.dataset.labels(), &[0, 1]);
}

#[test]
fn errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let check = |body: &str, needle: &str| {
        fs::write(&path, body).unwrap();
        let msg = load_table(&path, None, &opts()).unwrap_err().to_string();
        assert!(msg.contains(needle), "`{msg}` lacks `{needle}`");
        assert!(msg.contains("t.csv"), "`{msg}` lacks the path");
    };
    check("a,y\n1,0\nx,1\n", "line 3");
    check("a,y\n1,0\n2,1\n3\n", "line 4");
    check("a,y\n1,0\n2,7\n", "label");
    check("a,y\n1,?\n", "line 2");
    check("a,y\ninf,1\n", "non-finite");
}

#[test]
fn schema_errors_are_reported() {
    let dir = tempfile::tempdir().unwrap();
    let s = dir.path().join("s.txt");
    fs::write(&s, "a,continuous\nb,weird\ny,label\n").unwrap();
    assert!(read_schema(&s).unwrap_err().to_string().contains("line 2"));
    fs::write(&s, "a,continuous\n").unwrap();
    assert!(read_schema(&s).unwrap_err().to_string().contains("exactly one label"));
    fs::write(&s, "a,continuous\ny,label\n").unwrap();
    let t = dir.path().join("t.csv");
    fs::write(&t, "b,y\n1,0\n").unwrap();
    let schema = read_schema(&s).unwrap();
    assert!(load_table(&t, Some(&schema), &opts()).is_err());
    assert!(load_table(&dir.path().join("absent.csv"), None, &opts()).is_err());
}

#[test]
fn degraded_variants_round_trip_through_the_table_format() {
    let dir = tempfile::tempdir().unwrap();
    let ds = common::mixed(3, 50);
    let (path, schema_path) = common::write_mixed(dir.path(), &ds);
    let schema = read_schema(&schema_path).unwrap();
    let t = load_table(&path, Some(&schema), &opts()).unwrap();
    assert_eq!(t.dataset, ds);
    let spec = MissingnessSpec { proportion: 0.3, scope: Scope::HalfAttributes, seed: 9 };
    let degraded = inject(&ds, &spec).unwrap();
    let out = dir.path().join("v.csv");
    t.with_dataset(degraded.clone()).write(&out).unwrap();
    let back = load_table(&out, Some(&schema), &opts()).unwrap();
    assert_eq!(back.dataset, degraded);
    let first = fs::read(&out).unwrap();
    t.with_dataset(inject(&ds, &spec).unwrap()).write(&out).unwrap();
    assert_eq!(fs::read(&out).unwrap(), first);
}

#[test]
fn slicing_and_dropping_keep_columns_in_step() {
    let dir = tempfile::tempdir().unwrap();
    let (path, schema_path) = common::write_mixed(dir.path(), &common::mixed(4, 20));
    let t = load_table(&path, Some(&read_schema(&schema_path).unwrap()), &opts()).unwrap();
    let s = t.slice_rows(15, 100);
    assert_eq!(s.dataset.n_rows(), 5);
    assert_eq!(t.slice_rows(40, 3).dataset.n_rows(), 0);
    let d = t.drop_attributes(&["x2".into()]).unwrap();
    assert_eq!(d.dataset.n_attributes(), 4);
    assert_eq!(d.columns.len(), 5);
    assert!(t.drop_attributes(&["nope".into()]).is_err());
    let out = dir.path().join("d.csv");
    d.write(&out).unwrap();
    let header = fs::read_to_string(&out).unwrap().lines().next().unwrap().to_string();
    assert_eq!(header, "x0,x1,x3,grp,y");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn written_tables_parse_back_bit_exact(
        values in proptest::collection::vec(proptest::option::weighted(0.8, -1e12f64..1e12), 1..60),
        semicolon in any::<bool>(),
        header in any::<bool>(),
    ) {
        let dir = tempfile::tempdir().unwrap();
        let rows = values.len();
        let schema = vec![
            Column { name: "v".into(), kind: ColumnKind::Continuous },
            Column { name: "lab".into(), kind: ColumnKind::Label },
        ];
        let cells = values.iter().map(|v| vec![v.map_or(Cell::Missing, Cell::Value)]).collect();
        let labels = (0..rows).map(|i| (i % 2) as u8).collect();
        let ds = ripfs_core::data::Dataset::new(
            vec![ripfs_core::data::Attribute::continuous("v")], cells, labels).unwrap();
        let delimiter = if semicolon { b';' } else { b',' };
        let t = Table { dataset: ds.clone(), columns: schema.clone(), delimiter, header, missing_token: "?".into() };
        let path = dir.path().join("p.csv");
        t.write(&path).unwrap();
        let o = TableOptions { delimiter: Some(delimiter), header, ..TableOptions::default() };
        let back = load_table(&path, Some(&schema), &o).unwrap();
        prop_assert_eq!(back.dataset, ds);
    }
}
