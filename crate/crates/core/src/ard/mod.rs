//! Bayesian perceptron with automatic relevance determination.
//!
//! Every input attribute owns one weight-decay hyperparameter `α_k` over its
//! fan-out weights; biases and hidden→output weights share one more. The
//! network is trained on cross-entropy plus `Σ_k α_k · Σ_{i∈k} w_i² / 2`, the
//! alphas are re-estimated with the evidence framework, and inputs whose
//! fan-out weights end up near zero are dropped.

mod evidence;
mod network;
mod select;

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

pub use evidence::{reestimate_alpha, update_alphas, EvidenceUpdate, ALPHA_MAX, ALPHA_MIN, RIDGE};
pub use network::MlpNetwork;
pub use select::{block_sizes, select_features, standardized_matrix, ArdModel, ArdSelection, CycleLog};

use crate::linalg::Matrix;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ArdConfig {
    pub epochs: usize,
    pub n_hidden: usize,
    /// Step size per training row: each epoch moves the weights by
    /// `learning_rate / n_rows` times the objective gradient.
    pub learning_rate: f64,
    pub evidence_cycles: usize,
    /// Inputs whose fan-out RMS weight falls below this are dropped.
    pub relevance_threshold: f64,
    /// Number of contiguous attribute blocks; `None` means 4 when there are
    /// more than 100 inputs, else 1.
    pub split_groups: Option<usize>,
    pub init_alpha: f64,
    /// Uniform init half-width; `None` means `1/sqrt(n_inputs)`.
    pub init_weight_scale: Option<f64>,
    pub seed: u64,
}

impl Default for ArdConfig {
    fn default() -> Self {
        ArdConfig {
            epochs: 1000,
            n_hidden: 8,
            learning_rate: 0.01,
            evidence_cycles: 4,
            relevance_threshold: 0.01,
            split_groups: None,
            init_alpha: 0.1,
            init_weight_scale: None,
            seed: 1,
        }
    }
}

impl ArdConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("epochs", self.epochs as f64),
            ("n_hidden", self.n_hidden as f64),
            ("learning_rate", self.learning_rate),
            ("evidence_cycles", self.evidence_cycles as f64),
            ("init_alpha", self.init_alpha),
        ];
        for (name, v) in positive {
            if !(v > 0.0) {
                return Err(Error::Config(format!("ard {name} must be positive, got {v}")));
            }
        }
        if !(self.relevance_threshold >= 0.0) {
            return Err(Error::Config("ard relevance_threshold must be non-negative".into()));
        }
        if self.split_groups == Some(0) {
            return Err(Error::Config("ard split_groups must be positive".into()));
        }
        if let Some(s) = self.init_weight_scale {
            if !(s > 0.0) {
                return Err(Error::Config("ard init_weight_scale must be positive".into()));
            }
        }
        Ok(())
    }

    pub fn groups_for(&self, n_inputs: usize) -> usize {
        self.split_groups.unwrap_or(if n_inputs > 100 { 4 } else { 1 }).min(n_inputs.max(1))
    }

    pub fn weight_scale_for(&self, n_inputs: usize) -> f64 {
        self.init_weight_scale.unwrap_or_else(|| 1.0 / libm::sqrt(n_inputs.max(1) as f64))
    }
}

/// Weight groups and their decay hyperparameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ArdHyperparams {
    /// Group id of each flat network parameter.
    pub groups: Vec<usize>,
    /// One `α` per group.
    pub alphas: Vec<f64>,
}

impl ArdHyperparams {
    /// Group `i` holds input `i`'s fan-out weights; group `n_inputs` holds
    /// the biases and the hidden→output weights.
    pub fn per_input(net: &MlpNetwork, alpha: f64) -> Self {
        let n_inputs = net.n_inputs();
        let mut groups = vec![n_inputs; net.n_params()];
        for j in 0..net.n_hidden() {
            for i in 1..=n_inputs {
                groups[net.hidden_index(j, i)] = i - 1;
            }
        }
        ArdHyperparams { groups, alphas: vec![alpha; n_inputs + 1] }
    }

    /// A single shared hyperparameter over every weight.
    pub fn single(net: &MlpNetwork, alpha: f64) -> Self {
        ArdHyperparams { groups: vec![0; net.n_params()], alphas: vec![alpha] }
    }

    pub fn n_groups(&self) -> usize {
        self.alphas.len()
    }

    /// Parameters per group.
    pub fn group_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.alphas.len()];
        self.groups.iter().for_each(|&g| sizes[g] += 1);
        sizes
    }

    /// `Σ_{i∈k} w_i²` for every group `k`.
    pub fn group_sq_norms(&self, params: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.alphas.len()];
        for (&g, &w) in self.groups.iter().zip(params) {
            out[g] += w * w;
        }
        out
    }

    /// `Σ_k α_k Σ_{i∈k} w_i² / 2`.
    pub fn penalty(&self, params: &[f64]) -> f64 {
        self.group_sq_norms(params).iter().zip(&self.alphas).map(|(s, a)| a * s / 2.0).sum()
    }
}

/// Penalized objective: summed cross-entropy plus the group weight decay.
pub fn objective(net: &MlpNetwork, hyper: &ArdHyperparams, x: &Matrix, t: &[f64]) -> f64 {
    net.data_error(x, t) + hyper.penalty(&net.params())
}

/// Gradient of [`objective`] with respect to the flat parameters.
pub fn objective_gradient(net: &MlpNetwork, hyper: &ArdHyperparams, x: &Matrix, t: &[f64]) -> (f64, Vec<f64>) {
    let params = net.params();
    let (err, mut grad) = net.data_error_gradient(x, t);
    for ((g, &w), &k) in grad.iter_mut().zip(&params).zip(&hyper.groups) {
        *g += hyper.alphas[k] * w;
    }
    (err + hyper.penalty(&params), grad)
}

fn check_training_data(net: &MlpNetwork, x: &Matrix, t: &[f64]) -> Result<()> {
    if x.cols() != net.n_inputs() {
        return Err(Error::Shape { expected: net.n_inputs(), got: x.cols() });
    }
    if x.rows() != t.len() {
        return Err(Error::Shape { expected: x.rows(), got: t.len() });
    }
    if x.rows() == 0 {
        return Err(Error::Degenerate("no training rows".into()));
    }
    if x.as_slice().iter().any(|v| !v.is_finite()) {
        return Err(Error::Precondition("training inputs must be finite and fully observed".into()));
    }
    if t.iter().any(|&v| v != 0.0 && v != 1.0) {
        return Err(Error::Precondition("targets must be 0 or 1".into()));
    }
    Ok(())
}

/// Full-batch gradient descent on [`objective`] for `cfg.epochs` epochs;
/// returns the trained network and the objective before each epoch plus the
/// final value.
///
/// The data term takes an explicit step and the decay term an implicit one,
/// `w ← (w − η·∇E_D) / (1 + η·α)` with `η = learning_rate / n_rows`, which
/// keeps large alphas from destabilizing the iteration.
pub fn train_traced(
    net: &MlpNetwork,
    x: &Matrix,
    t: &[f64],
    hyper: &ArdHyperparams,
    cfg: &ArdConfig,
) -> Result<(MlpNetwork, Vec<f64>)> {
    check_training_data(net, x, t)?;
    if hyper.groups.len() != net.n_params() {
        return Err(Error::Shape { expected: net.n_params(), got: hyper.groups.len() });
    }
    let eta = cfg.learning_rate / x.rows() as f64;
    let shrink: Vec<f64> = hyper.groups.iter().map(|&k| 1.0 / (1.0 + eta * hyper.alphas[k])).collect();
    let mut net = net.clone();
    let mut params = net.params();
    let mut trace = Vec::with_capacity(cfg.epochs + 1);
    for epoch in 0..cfg.epochs {
        let (err, grad) = net.data_error_gradient(x, t);
        let obj = err + hyper.penalty(&params);
        if !obj.is_finite() {
            return Err(Error::Divergence { epoch });
        }
        trace.push(obj);
        for ((w, g), s) in params.iter_mut().zip(&grad).zip(&shrink) {
            *w = (*w - eta * g) * s;
        }
        if params.iter().any(|w| !w.is_finite()) {
            return Err(Error::Divergence { epoch });
        }
        net.set_params(&params);
    }
    let last = objective(&net, hyper, x, t);
    if !last.is_finite() {
        return Err(Error::Divergence { epoch: cfg.epochs });
    }
    trace.push(last);
    Ok((net, trace))
}

pub fn train(net: &MlpNetwork, x: &Matrix, t: &[f64], hyper: &ArdHyperparams, cfg: &ArdConfig) -> Result<MlpNetwork> {
    train_traced(net, x, t, hyper, cfg).map(|(n, _)| n)
}

/// Relevance of each input: RMS of its weights into the hidden layer.
pub fn relevance(net: &MlpNetwork) -> Vec<f64> {
    (1..=net.n_inputs())
        .map(|i| {
            let ss: f64 = (0..net.n_hidden()).map(|j| net.w_hidden[(j, i)] * net.w_hidden[(j, i)]).sum();
            libm::sqrt(ss / net.n_hidden() as f64)
        })
        .collect()
}
