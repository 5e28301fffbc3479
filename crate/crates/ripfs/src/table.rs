//! Delimited text tables and their `name,kind` schema sidecars.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use ripfs_core::data::{Attribute, AttributeKind, Cell, Dataset, Label};

#[derive(Debug, thiserror::Error)]
pub enum TableError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}: line {line}: {message}", path.display())]
    Parse { path: PathBuf, line: usize, message: String },
    #[error("{}: {source}", path.display())]
    Csv { path: PathBuf, source: csv::Error },
    #[error("{}: {source}", path.display())]
    Data { path: PathBuf, source: ripfs_core::Error },
}

/// Role of one column in a table file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnKind {
    Continuous,
    Categorical,
    Label,
    /// Read past and dropped.
    Ignore,
}

impl ColumnKind {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s.trim().to_ascii_lowercase().as_str() {
            "continuous" | "numeric" => ColumnKind::Continuous,
            "categorical" | "nominal" => ColumnKind::Categorical,
            "label" | "class" => ColumnKind::Label,
            "ignore" | "skip" => ColumnKind::Ignore,
            _ => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ColumnKind::Continuous => "continuous",
            ColumnKind::Categorical => "categorical",
            ColumnKind::Label => "label",
            ColumnKind::Ignore => "ignore",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Column {
    pub name: String,
    pub kind: ColumnKind,
}

/// Reads a schema sidecar: one `name,kind` line per column, in file order.
/// Blank lines and lines starting with `#` are skipped.
pub fn read_schema(path: &Path) -> Result<Vec<Column>, TableError> {
    let text = fs::read_to_string(path).map_err(|source| TableError::Io { path: path.into(), source })?;
    let parse_err = |line, message: String| TableError::Parse { path: path.into(), line, message };
    let mut columns = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (name, kind) = line
            .split_once([',', ';'])
            .ok_or_else(|| parse_err(n + 1, format!("expected `name,kind`, got `{line}`")))?;
        let kind = ColumnKind::parse(kind)
            .ok_or_else(|| parse_err(n + 1, format!("unknown column kind `{}`", kind.trim())))?;
        columns.push(Column { name: name.trim().to_string(), kind });
    }
    let labels = columns.iter().filter(|c| c.kind == ColumnKind::Label).count();
    if labels != 1 {
        return Err(parse_err(0, format!("schema must mark exactly one label column, found {labels}")));
    }
    Ok(columns)
}

pub fn write_schema(path: &Path, columns: &[Column]) -> Result<(), TableError> {
    let text: String = columns.iter().map(|c| format!("{},{}\n", c.name, c.kind.as_str())).collect();
    fs::write(path, text).map_err(|source| TableError::Io { path: path.into(), source })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableOptions {
    /// `None` picks `;` when the first line has more semicolons than commas.
    pub delimiter: Option<u8>,
    pub header: bool,
    pub missing_token: String,
    /// Label column when no sidecar is given; defaults to the last column.
    pub label: Option<String>,
}

impl Default for TableOptions {
    fn default() -> Self {
        TableOptions { delimiter: None, header: true, missing_token: "?".into(), label: None }
    }
}

/// A loaded table plus what is needed to write it back the same way.
#[derive(Debug, Clone)]
pub struct Table {
    pub dataset: Dataset,
    /// Columns in file order, ignored ones excluded.
    pub columns: Vec<Column>,
    pub delimiter: u8,
    pub header: bool,
    pub missing_token: String,
}

fn sniff_delimiter(text: &str) -> u8 {
    let first = text.lines().next().unwrap_or("");
    if first.matches(';').count() > first.matches(',').count() {
        b';'
    } else {
        b','
    }
}

/// Loads a table. With a sidecar, columns take its names and kinds (header
/// names, if present, must match). Without one, every column but the label
/// is continuous.
pub fn load_table(path: &Path, schema: Option<&[Column]>, opts: &TableOptions) -> Result<Table, TableError> {
    let text = fs::read_to_string(path).map_err(|source| TableError::Io { path: path.into(), source })?;
    let delimiter = opts.delimiter.unwrap_or_else(|| sniff_delimiter(&text));
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let parse_err = |line: u64, message: String| TableError::Parse { path: path.into(), line: line as usize, message };
    let csv_err = |source| TableError::Csv { path: path.into(), source };

    let mut records = reader.records();
    let header: Option<Vec<String>> = if opts.header {
        let rec = records.next().ok_or_else(|| parse_err(1, "missing header row".into()))?.map_err(csv_err)?;
        Some(rec.iter().map(str::to_string).collect())
    } else {
        None
    };

    let columns: Vec<Column> = match (schema, &header) {
        (Some(cols), Some(names)) => {
            if names.len() != cols.len() || names.iter().zip(cols).any(|(n, c)| *n != c.name) {
                return Err(parse_err(1, "header does not match the schema sidecar".into()));
            }
            cols.to_vec()
        }
        (Some(cols), None) => cols.to_vec(),
        (None, Some(names)) => {
            let label = opts.label.clone().or_else(|| names.last().cloned()).unwrap_or_default();
            if !names.contains(&label) {
                return Err(parse_err(1, format!("label column `{label}` not in header")));
            }
            names
                .iter()
                .map(|n| Column {
                    name: n.clone(),
                    kind: if *n == label { ColumnKind::Label } else { ColumnKind::Continuous },
                })
                .collect()
        }
        (None, None) => return Err(parse_err(0, "a headerless table needs a schema sidecar".into())),
    };
    if !columns.iter().any(|c| c.kind == ColumnKind::Label) {
        return Err(parse_err(0, "no label column".into()));
    }

    let mut rows = Vec::new();
    let mut labels: Vec<Label> = Vec::new();
    for rec in records {
        let rec = rec.map_err(csv_err)?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() == 1 && rec[0].is_empty() {
            continue;
        }
        if rec.len() != columns.len() {
            let message = format!("line {line}: expected {} fields, found {}", columns.len(), rec.len());
            return Err(TableError::Data { path: path.into(), source: ripfs_core::Error::Schema(message) });
        }
        let mut row = Vec::with_capacity(columns.len() - 1);
        for (field, col) in rec.iter().zip(&columns) {
            let missing = field == opts.missing_token;
            let bad = |what: &str| parse_err(line, format!("column `{}`: {what} `{field}`", col.name));
            match col.kind {
                ColumnKind::Ignore => {}
                ColumnKind::Label => {
                    if missing {
                        return Err(bad("missing label"));
                    }
                    let v: i64 = field.parse().map_err(|_| bad("non-integer label"))?;
                    if !(0..=1).contains(&v) {
                        return Err(TableError::Data {
                            path: path.into(),
                            source: ripfs_core::Error::Label { row: rows.len(), value: v },
                        });
                    }
                    labels.push(v as Label);
                }
                ColumnKind::Continuous if missing => row.push(Cell::Missing),
                ColumnKind::Categorical if missing => row.push(Cell::Missing),
                ColumnKind::Continuous => {
                    let v: f64 = field.parse().map_err(|_| bad("non-numeric value"))?;
                    if !v.is_finite() {
                        return Err(bad("non-finite value"));
                    }
                    row.push(Cell::Value(v));
                }
                ColumnKind::Categorical => {
                    let v: i64 = field.parse().map_err(|_| bad("non-integer category code"))?;
                    row.push(Cell::Code(v));
                }
            }
        }
        rows.push(row);
    }
    let attributes = columns
        .iter()
        .filter_map(|c| match c.kind {
            ColumnKind::Continuous => Some(Attribute::continuous(c.name.clone())),
            ColumnKind::Categorical => Some(Attribute::categorical(c.name.clone())),
            _ => None,
        })
        .collect();
    let dataset =
        Dataset::new(attributes, rows, labels).map_err(|source| TableError::Data { path: path.into(), source })?;
    Ok(Table {
        dataset,
        columns: columns.into_iter().filter(|c| c.kind != ColumnKind::Ignore).collect(),
        delimiter,
        header: opts.header,
        missing_token: opts.missing_token.clone(),
    })
}

impl Table {
    /// Same layout carrying different cells, e.g. a degraded copy.
    pub fn with_dataset(&self, dataset: Dataset) -> Table {
        Table { dataset, ..self.clone() }
    }

    /// Writes the table in its own layout. Continuous values use the
    /// shortest text that parses back to the same number.
    pub fn write(&self, path: &Path) -> Result<(), TableError> {
        let csv_err = |source| TableError::Csv { path: path.into(), source };
        let mut w = csv::WriterBuilder::new().delimiter(self.delimiter).from_path(path).map_err(csv_err)?;
        if self.header {
            w.write_record(self.columns.iter().map(|c| c.name.as_str())).map_err(csv_err)?;
        }
        let ds = &self.dataset;
        let mut fields = Vec::with_capacity(self.columns.len());
        for (i, row) in ds.rows().enumerate() {
            fields.clear();
            let mut cells = row.iter();
            for col in &self.columns {
                fields.push(match col.kind {
                    ColumnKind::Label => ds.label(i).to_string(),
                    _ => match cells.next().expect("one cell per attribute column") {
                        Cell::Missing => self.missing_token.clone(),
                        Cell::Value(v) => v.to_string(),
                        Cell::Code(c) => c.to_string(),
                    },
                });
            }
            w.write_record(&fields).map_err(csv_err)?;
        }
        w.flush().map_err(|source| TableError::Io { path: path.into(), source })
    }
}

/// Schema columns describing `ds` with its label last.
pub fn columns_for(ds: &Dataset, label: &str) -> Vec<Column> {
    ds.schema()
        .iter()
        .map(|a| Column {
            name: a.name.clone(),
            kind: match a.kind {
                AttributeKind::Continuous => ColumnKind::Continuous,
                AttributeKind::Categorical => ColumnKind::Categorical,
            },
        })
        .chain([Column { name: label.into(), kind: ColumnKind::Label }])
        .collect()
}

impl Table {
    /// Rows `start..start + len`, clamped to the table.
    pub fn slice_rows(&self, start: usize, len: usize) -> Table {
        let start = start.min(self.dataset.n_rows());
        let len = len.min(self.dataset.n_rows() - start);
        self.with_dataset(self.dataset.slice_rows(start, len))
    }

    /// Removes attributes by name; the label column cannot be dropped.
    pub fn drop_attributes(&self, names: &[String]) -> Result<Table, ripfs_core::Error> {
        let dataset = self.dataset.drop_attributes(names)?;
        let columns =
            self.columns.iter().filter(|c| c.kind == ColumnKind::Label || !names.contains(&c.name)).cloned().collect();
        Ok(Table { dataset, columns, ..self.clone() })
    }
}
