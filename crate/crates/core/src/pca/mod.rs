//! Principal component analysis on the correlation matrix.
//!
//! Columns are standardized with population statistics (constant columns
//! keep scale 1), the correlation matrix is diagonalized with a cyclic Jacobi
//! solver, and components with eigenvalue above 1 are retained. Projection
//! mean-imputes missing cells, which puts them at 0 in standardized space.

mod jacobi;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

pub use jacobi::{symmetric_eigen, MAX_SWEEPS, OFF_DIAGONAL_TOLERANCE};

use crate::data::{standardize_stats, Cell, Dataset};
use crate::linalg::Matrix;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct PcaModel {
    pub means: Vec<f64>,
    pub scales: Vec<f64>,
    /// Descending.
    pub eigenvalues: Vec<f64>,
    /// Column `i` is the unit eigenvector of `eigenvalues[i]`.
    pub eigenvectors: Matrix,
    pub retained: usize,
}

/// Count of eigenvalues strictly above 1, but at least 1.
pub fn components_above_one(eigenvalues: &[f64]) -> usize {
    eigenvalues.iter().filter(|&&l| l > 1.0).count().max(1)
}

/// Correlation matrix of `ds` under the given column statistics.
pub fn correlation_matrix(ds: &Dataset, means: &[f64], scales: &[f64]) -> Matrix {
    let m = ds.n_attributes();
    let n = ds.n_rows() as f64;
    let mut c = Matrix::zeros(m, m);
    let mut z = Vec::with_capacity(m);
    for row in ds.rows() {
        z.clear();
        z.extend(row.iter().enumerate().map(|(j, cell)| standardized(cell, means[j], scales[j])));
        for p in 0..m {
            if z[p] == 0.0 {
                continue;
            }
            let zp = z[p];
            let cp = c.row_mut(p);
            for q in p..m {
                cp[q] += zp * z[q];
            }
        }
    }
    for p in 0..m {
        for q in p..m {
            let v = c[(p, q)] / n;
            c[(p, q)] = v;
            c[(q, p)] = v;
        }
    }
    c
}

#[inline]
fn standardized(cell: &Cell, mean: f64, scale: f64) -> f64 {
    cell.as_f64().map_or(0.0, |v| (v - mean) / scale)
}

impl PcaModel {
    /// Fits on fully observed training data with at least two rows.
    pub fn fit(ds: &Dataset) -> Result<PcaModel> {
        if ds.n_rows() < 2 {
            return Err(Error::Degenerate(format!("PCA needs at least 2 rows, got {}", ds.n_rows())));
        }
        if !ds.is_fully_observed() {
            return Err(Error::Precondition("PCA training data contains missing cells".into()));
        }
        let stats = standardize_stats(ds)?;
        let means: Vec<f64> = stats.iter().map(|s| s.mean).collect();
        let scales: Vec<f64> = stats.iter().map(|s| s.scale()).collect();
        let corr = correlation_matrix(ds, &means, &scales);
        let (values, vectors) = symmetric_eigen(&corr)?;

        let m = values.len();
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
        let mut eigenvectors = Matrix::zeros(m, m);
        for (dst, &src) in order.iter().enumerate() {
            let mut col = vectors.column(src);
            // Sign convention: the largest-magnitude entry is positive.
            let pivot = col
                .iter()
                .enumerate()
                .fold((0, 0.0f64), |best, (i, &x)| if x.abs() > best.1 { (i, x.abs()) } else { best })
                .0;
            if col[pivot] < 0.0 {
                col.iter_mut().for_each(|x| *x = -*x);
            }
            for (i, x) in col.into_iter().enumerate() {
                eigenvectors[(i, dst)] = x;
            }
        }
        let eigenvalues: Vec<f64> = order.iter().map(|&i| values[i]).collect();
        let retained = components_above_one(&eigenvalues);
        Ok(PcaModel { means, scales, eigenvalues, eigenvectors, retained })
    }

    pub fn dimension(&self) -> usize {
        self.means.len()
    }

    pub fn select_components(&self) -> usize {
        components_above_one(&self.eigenvalues)
    }

    /// Same model keeping the top `k` components, `1 <= k <= dimension`.
    pub fn with_retained(&self, k: usize) -> Result<PcaModel> {
        if k == 0 || k > self.dimension() {
            return Err(Error::Shape { expected: self.dimension(), got: k });
        }
        Ok(PcaModel { retained: k, ..self.clone() })
    }

    pub fn eigenvector(&self, i: usize) -> Vec<f64> {
        self.eigenvectors.column(i)
    }

    /// Names of the projected attributes, `PC1..PCk`.
    pub fn component_names(&self) -> Vec<String> {
        (1..=self.retained).map(|i| format!("PC{i}")).collect()
    }

    /// Projects one row onto the retained components.
    pub fn transform_row(&self, row: &[Cell]) -> Result<Vec<f64>> {
        let m = self.dimension();
        if row.len() != m {
            return Err(Error::Shape { expected: m, got: row.len() });
        }
        let mut out = alloc::vec![0.0; self.retained];
        for (j, cell) in row.iter().enumerate() {
            let z = standardized(cell, self.means[j], self.scales[j]);
            if z == 0.0 {
                continue;
            }
            let b = &self.eigenvectors.row(j)[..self.retained];
            for (o, &bjk) in out.iter_mut().zip(b) {
                *o += z * bjk;
            }
        }
        Ok(out)
    }

    /// `T = A·B` over the retained components, after standardizing `A`.
    pub fn transform(&self, ds: &Dataset) -> Result<Matrix> {
        let mut t = Matrix::zeros(ds.n_rows(), self.retained);
        for (i, row) in ds.rows().enumerate() {
            let projected = self.transform_row(row)?;
            t.row_mut(i).copy_from_slice(&projected);
        }
        Ok(t)
    }

    /// `A' = T·Bᵀ` using the first `T.cols()` components, de-standardized.
    pub fn inverse_transform(&self, t: &Matrix) -> Result<Matrix> {
        let m = self.dimension();
        let k = t.cols();
        if k > m {
            return Err(Error::Shape { expected: m, got: k });
        }
        let mut out = Matrix::zeros(t.rows(), m);
        for i in 0..t.rows() {
            let ti = t.row(i);
            let oi = out.row_mut(i);
            for (j, o) in oi.iter_mut().enumerate() {
                let b = &self.eigenvectors.row(j)[..k];
                let z: f64 = ti.iter().zip(b).map(|(a, b)| a * b).sum();
                *o = z * self.scales[j] + self.means[j];
            }
        }
        Ok(out)
    }

    /// Standardized training-space matrix of `ds`, missing cells at 0.
    pub fn standardize(&self, ds: &Dataset) -> Result<Matrix> {
        let m = self.dimension();
        if ds.n_attributes() != m {
            return Err(Error::Shape { expected: m, got: ds.n_attributes() });
        }
        let mut z = Matrix::zeros(ds.n_rows(), m);
        for (i, row) in ds.rows().enumerate() {
            for (j, cell) in row.iter().enumerate() {
                z[(i, j)] = standardized(cell, self.means[j], self.scales[j]);
            }
        }
        Ok(z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Attribute;
    use alloc::vec;

    fn table(rows: &[&[f64]]) -> Dataset {
        let m = rows[0].len();
        let schema = (0..m).map(|j| Attribute::continuous(format!("x{j}"))).collect();
        let cells = rows.iter().map(|r| r.iter().map(|&v| Cell::Value(v)).collect()).collect();
        Dataset::new(schema, cells, vec![0; rows.len()]).unwrap()
    }

    #[test]
    fn uncorrelated_columns_give_unit_eigenvalues() {
        // Standardized columns (1,-1,1,-1) and (1,1,-1,-1) are orthogonal.
        let ds = table(&[&[1.0, 1.0], &[-1.0, 1.0], &[1.0, -1.0], &[-1.0, -1.0]]);
        let model = PcaModel::fit(&ds).unwrap();
        for l in &model.eigenvalues {
            assert!((l - 1.0).abs() < 1e-12);
        }
        for i in 0..2 {
            let v = model.eigenvector(i);
            assert!(v.iter().filter(|x| (x.abs() - 1.0).abs() < 1e-12).count() == 1);
        }
        assert_eq!(model.retained, 1);
    }

    #[test]
    fn perfectly_correlated_pair() {
        let ds = table(&[&[1.0, 1.0], &[2.0, 2.0], &[4.0, 4.0], &[7.0, 7.0]]);
        let model = PcaModel::fit(&ds).unwrap();
        assert!((model.eigenvalues[0] - 2.0).abs() < 1e-10);
        assert!(model.eigenvalues[1].abs() < 1e-10);
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let b = model.eigenvector(0);
        assert!((b[0] - h).abs() < 1e-10 && (b[1] - h).abs() < 1e-10);
        assert_eq!(model.retained, 1);
    }

    #[test]
    fn retention_rule() {
        assert_eq!(components_above_one(&[3.2, 1.1, 0.7]), 2);
        assert_eq!(components_above_one(&[0.9, 0.6]), 1);
        assert_eq!(components_above_one(&[1.0, 0.5]), 1);
        assert_eq!(components_above_one(&[1.5, 1.0, 1.0]), 1);
    }

    #[test]
    fn mean_row_and_missing_row_project_to_zero() {
        let ds = table(&[&[1.0, 2.0, 0.0], &[3.0, 1.0, 5.0], &[2.0, 6.0, 1.0], &[6.0, 3.0, 2.0]]);
        let model = PcaModel::fit(&ds).unwrap().with_retained(3).unwrap();
        let mean_row: Vec<Cell> = model.means.iter().map(|&m| Cell::Value(m)).collect();
        assert!(model.transform_row(&mean_row).unwrap().iter().all(|v| v.abs() < 1e-12));
        let missing = vec![Cell::Missing; 3];
        assert_eq!(model.transform_row(&missing).unwrap(), vec![0.0; 3]);
        assert!(matches!(model.transform_row(&missing[..2]), Err(Error::Shape { .. })));
    }

    #[test]
    fn zero_scores_reconstruct_the_means() {
        let ds = table(&[&[1.0, 2.0], &[3.0, 1.0], &[2.0, 6.0]]);
        let model = PcaModel::fit(&ds).unwrap();
        let back = model.inverse_transform(&Matrix::zeros(2, 1)).unwrap();
        for i in 0..2 {
            assert_eq!(back.row(i), model.means.as_slice());
        }
        assert!(model.inverse_transform(&Matrix::zeros(1, 3)).is_err());
    }

    #[test]
    fn fit_preconditions() {
        assert!(matches!(PcaModel::fit(&table(&[&[1.0, 2.0]])), Err(Error::Degenerate(_))));
        let schema = vec![Attribute::continuous("a")];
        let ds = Dataset::new(schema, vec![vec![Cell::Value(1.0)], vec![Cell::Missing]], vec![0, 1]).unwrap();
        assert!(matches!(PcaModel::fit(&ds), Err(Error::Precondition(_))));
    }
}
