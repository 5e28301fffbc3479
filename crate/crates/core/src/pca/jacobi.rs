//! Cyclic Jacobi eigensolver for real symmetric matrices.

use alloc::vec::Vec;

use crate::linalg::{sqrt, Matrix};
use crate::{Error, Result};

pub const OFF_DIAGONAL_TOLERANCE: f64 = 1e-10;
pub const MAX_SWEEPS: usize = 100;

fn off_diagonal_norm(a: &Matrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for p in 0..n {
        for q in p + 1..n {
            s += a[(p, q)] * a[(p, q)];
        }
    }
    sqrt(2.0 * s)
}

/// Eigenvalues and eigenvectors (as matrix columns) of a symmetric matrix,
/// unsorted. Sweeps until the off-diagonal Frobenius norm drops below
/// [`OFF_DIAGONAL_TOLERANCE`].
pub fn symmetric_eigen(matrix: &Matrix) -> Result<(Vec<f64>, Matrix)> {
    let n = matrix.rows();
    if matrix.cols() != n {
        return Err(Error::Shape { expected: n, got: matrix.cols() });
    }
    let mut a = matrix.clone();
    let mut v = Matrix::identity(n);
    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a);
        if off < OFF_DIAGONAL_TOLERANCE {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, off_norm: off });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + sqrt(theta * theta + 1.0));
                let c = 1.0 / sqrt(t * t + 1.0);
                let s = t * c;
                a[(p, p)] -= t * apq;
                a[(q, q)] += t * apq;
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for r in 0..n {
                    if r != p && r != q {
                        let arp = a[(r, p)];
                        let arq = a[(r, q)];
                        let new_p = c * arp - s * arq;
                        let new_q = s * arp + c * arq;
                        a[(r, p)] = new_p;
                        a[(p, r)] = new_p;
                        a[(r, q)] = new_q;
                        a[(q, r)] = new_q;
                    }
                    let vrp = v[(r, p)];
                    let vrq = v[(r, q)];
                    v[(r, p)] = c * vrp - s * vrq;
                    v[(r, q)] = s * vrp + c * vrq;
                }
            }
        }
    }
    Ok(((0..n).map(|i| a[(i, i)]).collect(), v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn two_by_two_closed_form() {
        // [[2, 1], [1, 2]] has eigenvalues 3 and 1.
        let m = Matrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let (mut vals, vecs) = symmetric_eigen(&m).unwrap();
        vals.sort_by(f64::total_cmp);
        assert!((vals[0] - 1.0).abs() < 1e-12 && (vals[1] - 3.0).abs() < 1e-12);
        let r = m.matmul(&vecs).unwrap();
        for j in 0..2 {
            let lambda = r[(0, j)] / vecs[(0, j)];
            assert!((r[(1, j)] - lambda * vecs[(1, j)]).abs() < 1e-12);
        }
    }

    #[test]
    fn diagonal_input_is_already_converged() {
        let m = Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let (vals, vecs) = symmetric_eigen(&m).unwrap();
        assert_eq!(vals, vec![1.0, 1.0]);
        assert_eq!(vecs, Matrix::identity(2));
    }

    #[test]
    fn rejects_non_square() {
        assert!(symmetric_eigen(&Matrix::zeros(2, 3)).is_err());
    }
}
