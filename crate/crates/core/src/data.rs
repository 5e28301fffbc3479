//! Tabular datasets with an explicit missing-cell representation.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::linalg::{sqrt, Matrix};
use crate::{Error, Result};

/// Class code. Datasets are binary, so only 0 and 1 occur.
pub type Label = u8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AttributeKind {
    Categorical,
    Continuous,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Attribute {
    pub name: String,
    pub kind: AttributeKind,
    /// Sorted distinct codes; empty for continuous attributes.
    pub categories: Vec<i64>,
}

impl Attribute {
    pub fn continuous(name: impl Into<String>) -> Self {
        Attribute { name: name.into(), kind: AttributeKind::Continuous, categories: Vec::new() }
    }

    pub fn categorical(name: impl Into<String>) -> Self {
        Attribute { name: name.into(), kind: AttributeKind::Categorical, categories: Vec::new() }
    }

    pub fn is_categorical(&self) -> bool {
        self.kind == AttributeKind::Categorical
    }
}

/// One table cell. A missing cell carries no value at all.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Missing,
    Value(f64),
    Code(i64),
}

impl Cell {
    #[inline]
    pub fn is_missing(&self) -> bool {
        matches!(self, Cell::Missing)
    }

    /// Numeric view of the cell; category codes map to their integer value.
    #[inline]
    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Cell::Missing => None,
            Cell::Value(v) => Some(v),
            Cell::Code(c) => Some(c as f64),
        }
    }
}

/// Attribute schema, a row-major cell table and one class label per row.
///
/// Immutable once built; every constructor validates arity, cell kinds,
/// labels and name uniqueness.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    schema: Vec<Attribute>,
    cells: Vec<Cell>,
    labels: Vec<Label>,
}

impl Dataset {
    /// Builds a dataset, extending each categorical attribute's category
    /// list with every code that occurs in its column.
    pub fn new(mut schema: Vec<Attribute>, rows: Vec<Vec<Cell>>, labels: Vec<Label>) -> Result<Self> {
        let m = schema.len();
        let mut names = BTreeSet::new();
        for a in &schema {
            if !names.insert(a.name.as_str()) {
                return Err(Error::Schema(format!("duplicate attribute name `{}`", a.name)));
            }
            if a.kind == AttributeKind::Continuous && !a.categories.is_empty() {
                return Err(Error::Schema(format!("continuous attribute `{}` lists categories", a.name)));
            }
        }
        if labels.len() != rows.len() {
            return Err(Error::Shape { expected: rows.len(), got: labels.len() });
        }
        if let Some((row, &value)) = labels.iter().enumerate().find(|(_, &l)| l > 1) {
            return Err(Error::Label { row, value: value as i64 });
        }
        let mut codes: Vec<BTreeSet<i64>> = schema.iter().map(|a| a.categories.iter().copied().collect()).collect();
        let mut cells = Vec::with_capacity(rows.len() * m);
        for (r, row) in rows.into_iter().enumerate() {
            if row.len() != m {
                return Err(Error::Schema(format!("row {r} has {} cells, schema has {m}", row.len())));
            }
            for (j, cell) in row.iter().enumerate() {
                match (schema[j].kind, cell) {
                    (_, Cell::Missing) => {}
                    (AttributeKind::Categorical, Cell::Code(c)) => {
                        codes[j].insert(*c);
                    }
                    (AttributeKind::Continuous, Cell::Value(v)) if v.is_finite() => {}
                    (kind, other) => {
                        return Err(Error::Schema(format!(
                            "row {r}, attribute `{}`: {other:?} is not a valid {kind:?} cell",
                            schema[j].name
                        )))
                    }
                }
            }
            cells.extend(row);
        }
        for (a, set) in schema.iter_mut().zip(codes) {
            a.categories = set.into_iter().collect();
        }
        Ok(Dataset { schema, cells, labels })
    }

    /// Continuous dataset from a numeric matrix, e.g. projected components.
    pub fn from_matrix(names: Vec<String>, matrix: &Matrix, labels: Vec<Label>) -> Result<Self> {
        if names.len() != matrix.cols() {
            return Err(Error::Shape { expected: matrix.cols(), got: names.len() });
        }
        let schema = names.into_iter().map(Attribute::continuous).collect();
        let rows = (0..matrix.rows()).map(|i| matrix.row(i).iter().map(|&v| Cell::Value(v)).collect()).collect();
        Dataset::new(schema, rows, labels)
    }

    #[inline]
    pub fn schema(&self) -> &[Attribute] {
        &self.schema
    }

    #[inline]
    pub fn n_rows(&self) -> usize {
        self.labels.len()
    }

    #[inline]
    pub fn n_attributes(&self) -> usize {
        self.schema.len()
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[Cell] {
        let m = self.schema.len();
        &self.cells[i * m..(i + 1) * m]
    }

    #[inline]
    pub fn cell(&self, i: usize, j: usize) -> Cell {
        self.cells[i * self.schema.len() + j]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[Cell]> + '_ {
        (0..self.n_rows()).map(move |i| self.row(i))
    }

    #[inline]
    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    #[inline]
    pub fn label(&self, i: usize) -> Label {
        self.labels[i]
    }

    pub fn attribute_index(&self, name: &str) -> Option<usize> {
        self.schema.iter().position(|a| a.name == name)
    }

    /// Instance counts for class 0 and class 1.
    pub fn class_counts(&self) -> [usize; 2] {
        let ones = self.labels.iter().filter(|&&l| l == 1).count();
        [self.labels.len() - ones, ones]
    }

    pub fn missing_count(&self) -> usize {
        self.cells.iter().filter(|c| c.is_missing()).count()
    }

    pub fn is_fully_observed(&self) -> bool {
        !self.cells.iter().any(Cell::is_missing)
    }

    /// Copy with only the rows at `indices`, in that order.
    pub fn select_rows(&self, indices: &[usize]) -> Dataset {
        let mut cells = Vec::with_capacity(indices.len() * self.n_attributes());
        for &i in indices {
            cells.extend_from_slice(self.row(i));
        }
        Dataset { schema: self.schema.clone(), cells, labels: indices.iter().map(|&i| self.labels[i]).collect() }
    }

    /// Rows `start..start+len`, clipped to the table.
    pub fn slice_rows(&self, start: usize, len: usize) -> Dataset {
        let start = start.min(self.n_rows());
        let end = start.saturating_add(len).min(self.n_rows());
        let idx: Vec<usize> = (start..end).collect();
        self.select_rows(&idx)
    }

    /// Indices of rows with no missing cell.
    pub fn complete_rows(&self) -> Vec<usize> {
        (0..self.n_rows()).filter(|&i| !self.row(i).iter().any(Cell::is_missing)).collect()
    }

    /// Copy restricted to the attributes at `indices`, in that order.
    pub fn select_attributes(&self, indices: &[usize]) -> Result<Dataset> {
        let m = self.n_attributes();
        if let Some(&bad) = indices.iter().find(|&&j| j >= m) {
            return Err(Error::Shape { expected: m, got: bad });
        }
        let mut seen = BTreeSet::new();
        if !indices.iter().all(|j| seen.insert(*j)) {
            return Err(Error::Config("attribute selected twice".into()));
        }
        let schema = indices.iter().map(|&j| self.schema[j].clone()).collect();
        let mut cells = Vec::with_capacity(self.n_rows() * indices.len());
        for row in self.rows() {
            cells.extend(indices.iter().map(|&j| row[j]));
        }
        Ok(Dataset { schema, cells, labels: self.labels.clone() })
    }

    /// Removes the named attributes. Repeated names are removed once.
    pub fn drop_attributes<S: AsRef<str>>(&self, names: &[S]) -> Result<Dataset> {
        let mut drop = BTreeSet::new();
        for name in names {
            let name = name.as_ref();
            let j = self.attribute_index(name).ok_or_else(|| Error::Config(format!("unknown attribute `{name}`")))?;
            drop.insert(j);
        }
        let keep: Vec<usize> = (0..self.n_attributes()).filter(|j| !drop.contains(j)).collect();
        self.select_attributes(&keep)
    }

    /// Same table with the listed cells blanked. Used by missingness injection.
    pub(crate) fn with_missing(&self, positions: impl IntoIterator<Item = (usize, usize)>) -> Dataset {
        let mut out = self.clone();
        let m = self.n_attributes();
        for (i, j) in positions {
            out.cells[i * m + j] = Cell::Missing;
        }
        out
    }

    /// Numeric matrix of the observed table; missing cells become NaN.
    pub fn to_matrix(&self) -> Matrix {
        let data = self.cells.iter().map(|c| c.as_f64().unwrap_or(f64::NAN)).collect();
        Matrix::from_vec(self.n_rows(), self.n_attributes(), data).expect("shape is consistent")
    }
}

/// Mean and population standard deviation of one column's observed cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ColumnStats {
    pub mean: f64,
    pub std: f64,
}

impl ColumnStats {
    /// Divisor for standardization: the standard deviation, or 1 for a
    /// constant column.
    pub fn scale(&self) -> f64 {
        if self.std > 0.0 {
            self.std
        } else {
            1.0
        }
    }
}

/// Per-attribute mean and standard deviation (n divisor), skipping missing
/// cells. Categorical codes are treated as numbers.
pub fn standardize_stats(ds: &Dataset) -> Result<Vec<ColumnStats>> {
    (0..ds.n_attributes())
        .map(|j| {
            let mut n = 0usize;
            let mut sum = 0.0;
            let mut first = None;
            let mut constant = true;
            for row in ds.rows() {
                if let Some(v) = row[j].as_f64() {
                    n += 1;
                    sum += v;
                    match first {
                        None => first = Some(v),
                        Some(f) => constant &= f == v,
                    }
                }
            }
            let Some(first) = first else {
                return Err(Error::DegenerateColumn(ds.schema()[j].name.clone()));
            };
            if constant {
                return Ok(ColumnStats { mean: first, std: 0.0 });
            }
            let mean = sum / n as f64;
            let ss: f64 = ds.rows().filter_map(|row| row[j].as_f64()).map(|v| (v - mean) * (v - mean)).sum();
            Ok(ColumnStats { mean, std: sqrt(ss / n as f64) })
        })
        .collect()
}
