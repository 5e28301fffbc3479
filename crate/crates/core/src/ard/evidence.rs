//! Evidence-framework re-estimation of the decay hyperparameters.
//!
//! With `H` the Gauss-Newton Hessian of the penalized objective,
//! `γ_k = dim_k − α_k · Σ_{i∈k} (H⁻¹)_ii` counts the well-determined
//! parameters in group `k`, and the new hyperparameter is
//! `α_k = γ_k / Σ_{i∈k} w_i²`.

use alloc::vec;
use alloc::vec::Vec;

use super::{check_training_data, ArdHyperparams, MlpNetwork};
use crate::linalg::{cholesky, inverse_diagonal_from_cholesky, Matrix};
use crate::{Error, Result};

pub const ALPHA_MIN: f64 = 1e-6;
pub const ALPHA_MAX: f64 = 1e6;
/// Ridge added to the Hessian diagonal when its factorization fails.
pub const RIDGE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct EvidenceUpdate {
    pub hyperparams: ArdHyperparams,
    /// Well-determined parameter count per group, in `[0, dim_k]`.
    pub gammas: Vec<f64>,
    /// Diagonal of `H⁻¹`, one entry per parameter.
    pub hessian_inverse_diagonal: Vec<f64>,
    /// Set when `H` needed ridge stabilization before it could be inverted.
    pub ridge_used: bool,
}

/// `γ / Σw²`, clamped to `[ALPHA_MIN, ALPHA_MAX]`; an all-zero group gets
/// `ALPHA_MAX`.
pub fn reestimate_alpha(gamma: f64, sum_sq: f64) -> f64 {
    if sum_sq <= 0.0 {
        return ALPHA_MAX;
    }
    (gamma / sum_sq).clamp(ALPHA_MIN, ALPHA_MAX)
}

/// Gauss-Newton Hessian `Σ_n y_n(1−y_n) g_n g_nᵀ + diag(α)` where `g_n` is
/// the gradient of row `n`'s output pre-activation.
pub fn gauss_newton_hessian(net: &MlpNetwork, hyper: &ArdHyperparams, x: &Matrix) -> Matrix {
    let np = net.n_params();
    let mut h = Matrix::zeros(np, np);
    let mut g = vec![0.0; np];
    let mut hidden = vec![0.0; net.n_hidden()];
    for n in 0..x.rows() {
        let y = net.logit_gradient(x.row(n), &mut hidden, &mut g);
        let w = y * (1.0 - y);
        if w == 0.0 {
            continue;
        }
        for p in 0..np {
            let gp = w * g[p];
            if gp == 0.0 {
                continue;
            }
            let row = &mut h.row_mut(p)[p..];
            for (hpq, &gq) in row.iter_mut().zip(&g[p..]) {
                *hpq += gp * gq;
            }
        }
    }
    for p in 0..np {
        h[(p, p)] += hyper.alphas[hyper.groups[p]];
        for q in p + 1..np {
            h[(q, p)] = h[(p, q)];
        }
    }
    h
}

/// One evidence update of every group's `α` at the network's current weights.
pub fn update_alphas(net: &MlpNetwork, hyper: &ArdHyperparams, x: &Matrix, t: &[f64]) -> Result<EvidenceUpdate> {
    check_training_data(net, x, t)?;
    if hyper.groups.len() != net.n_params() {
        return Err(Error::Shape { expected: net.n_params(), got: hyper.groups.len() });
    }
    let mut h = gauss_newton_hessian(net, hyper, x);
    let mut ridge_used = false;
    let mut ridge = RIDGE;
    let l = loop {
        if let Some(l) = cholesky(&h) {
            break l;
        }
        if ridge > 1.0 {
            return Err(Error::Degenerate("Hessian is not positive definite even with ridge".into()));
        }
        ridge_used = true;
        for p in 0..h.rows() {
            h[(p, p)] += ridge;
        }
        ridge *= 10.0;
    };
    let inv_diag = inverse_diagonal_from_cholesky(&l);

    let sizes = hyper.group_sizes();
    let mut traces = vec![0.0; hyper.n_groups()];
    for (&k, &d) in hyper.groups.iter().zip(&inv_diag) {
        traces[k] += d;
    }
    let sq = hyper.group_sq_norms(&net.params());
    let gammas: Vec<f64> = (0..hyper.n_groups())
        .map(|k| (sizes[k] as f64 - hyper.alphas[k] * traces[k]).clamp(0.0, sizes[k] as f64))
        .collect();
    let alphas = gammas.iter().zip(&sq).map(|(&g, &s)| reestimate_alpha(g, s)).collect();
    Ok(EvidenceUpdate {
        hyperparams: ArdHyperparams { groups: hyper.groups.clone(), alphas },
        gammas,
        hessian_inverse_diagonal: inv_diag,
        ridge_used,
    })
}
