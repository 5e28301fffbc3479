use alloc::vec;
use alloc::vec::Vec;

use rand::Rng as _;

use crate::linalg::{sigmoid, softplus, Matrix};
use crate::rng::{seeded, sub_seed};
use crate::{Error, Result};

/// Two-layer perceptron with one logistic output.
///
/// `y = f(Σ_j w_kj · g(Σ_i w_ji · x_i))` with logistic `f` and `g`; index 0
/// on either layer is the bias. Parameters flatten as all input→hidden
/// weights row by row (`j * (n_inputs + 1) + i`), then the hidden→output
/// weights.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpNetwork {
    n_inputs: usize,
    n_hidden: usize,
    /// `n_hidden × (n_inputs + 1)`, column 0 is the bias.
    pub w_hidden: Matrix,
    /// `n_hidden + 1` entries, entry 0 is the bias.
    pub w_out: Vec<f64>,
}

impl MlpNetwork {
    pub fn zeros(n_inputs: usize, n_hidden: usize) -> Self {
        MlpNetwork {
            n_inputs,
            n_hidden,
            w_hidden: Matrix::zeros(n_hidden, n_inputs + 1),
            w_out: vec![0.0; n_hidden + 1],
        }
    }

    /// Weights uniform in `[-scale, scale]` from one seeded stream.
    pub fn random(n_inputs: usize, n_hidden: usize, scale: f64, seed: u64) -> Self {
        let mut net = Self::zeros(n_inputs, n_hidden);
        let mut rng = seeded(seed);
        let mut p = net.params();
        p.iter_mut().for_each(|w| *w = rng.random_range(-scale..=scale));
        net.set_params(&p);
        net
    }

    /// Like [`random`](Self::random), but each input's fan-out weights come
    /// from a stream keyed by `input_keys[i]`, and the remaining weights from
    /// a stream keyed by the keys' sum. Reordering inputs together with their
    /// keys reorders the initial weights the same way.
    pub fn keyed(input_keys: &[u64], n_hidden: usize, scale: f64, seed: u64) -> Self {
        let n_inputs = input_keys.len();
        let mut net = Self::zeros(n_inputs, n_hidden);
        for (i, &key) in input_keys.iter().enumerate() {
            let mut rng = seeded(sub_seed(seed, key));
            for j in 0..n_hidden {
                net.w_hidden[(j, i + 1)] = rng.random_range(-scale..=scale);
            }
        }
        let shared = input_keys.iter().fold(0u64, |a, &k| a.wrapping_add(k));
        let mut rng = seeded(sub_seed(seed ^ 0xA5A5_A5A5_A5A5_A5A5, shared));
        for j in 0..n_hidden {
            net.w_hidden[(j, 0)] = rng.random_range(-scale..=scale);
        }
        net.w_out.iter_mut().for_each(|w| *w = rng.random_range(-scale..=scale));
        net
    }

    pub fn n_inputs(&self) -> usize {
        self.n_inputs
    }

    pub fn n_hidden(&self) -> usize {
        self.n_hidden
    }

    pub fn n_params(&self) -> usize {
        self.n_hidden * (self.n_inputs + 1) + self.n_hidden + 1
    }

    /// Flat index of the weight from input `i` (0 = bias) to hidden unit `j`.
    #[inline]
    pub fn hidden_index(&self, j: usize, i: usize) -> usize {
        j * (self.n_inputs + 1) + i
    }

    /// Flat index of the weight from hidden unit `j` (0 = bias) to the output.
    #[inline]
    pub fn output_index(&self, j: usize) -> usize {
        self.n_hidden * (self.n_inputs + 1) + j
    }

    pub fn params(&self) -> Vec<f64> {
        let mut p = Vec::with_capacity(self.n_params());
        p.extend_from_slice(self.w_hidden.as_slice());
        p.extend_from_slice(&self.w_out);
        p
    }

    pub fn set_params(&mut self, p: &[f64]) {
        let split = self.n_hidden * (self.n_inputs + 1);
        self.w_hidden =
            Matrix::from_vec(self.n_hidden, self.n_inputs + 1, p[..split].to_vec()).expect("parameter count matches");
        self.w_out.copy_from_slice(&p[split..]);
    }

    /// Output pre-activation; fills `hidden` with the hidden activations.
    #[inline]
    fn logit(&self, x: &[f64], hidden: &mut [f64]) -> f64 {
        let mut a = self.w_out[0];
        for (j, h) in hidden.iter_mut().enumerate() {
            let w = self.w_hidden.row(j);
            let s = w[0] + w[1..].iter().zip(x).map(|(w, x)| w * x).sum::<f64>();
            *h = sigmoid(s);
            a += self.w_out[j + 1] * *h;
        }
        a
    }

    /// `P(class = 1 | x)`, kept strictly inside `(0, 1)` even where the
    /// logistic saturates in floating point.
    pub fn forward(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.n_inputs {
            return Err(Error::Shape { expected: self.n_inputs, got: x.len() });
        }
        let mut hidden = vec![0.0; self.n_hidden];
        let y = sigmoid(self.logit(x, &mut hidden));
        Ok(y.clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON / 2.0))
    }

    /// Gradient of the output pre-activation with respect to every
    /// parameter, written into `grad`; returns the output probability.
    pub(crate) fn logit_gradient(&self, x: &[f64], hidden: &mut [f64], grad: &mut [f64]) -> f64 {
        let a = self.logit(x, hidden);
        let stride = self.n_inputs + 1;
        for (j, &h) in hidden.iter().enumerate() {
            let back = self.w_out[j + 1] * h * (1.0 - h);
            let g = &mut grad[j * stride..(j + 1) * stride];
            g[0] = back;
            for (gi, &xi) in g[1..].iter_mut().zip(x) {
                *gi = back * xi;
            }
        }
        let o = self.n_hidden * stride;
        grad[o] = 1.0;
        grad[o + 1..o + 1 + self.n_hidden].copy_from_slice(hidden);
        sigmoid(a)
    }

    /// Cross-entropy of the data, summed over rows.
    pub fn data_error(&self, x: &Matrix, t: &[f64]) -> f64 {
        let mut hidden = vec![0.0; self.n_hidden];
        (0..x.rows())
            .map(|n| {
                let a = self.logit(x.row(n), &mut hidden);
                softplus(a) - t[n] * a
            })
            .sum()
    }

    /// Summed cross-entropy and its gradient.
    pub fn data_error_gradient(&self, x: &Matrix, t: &[f64]) -> (f64, Vec<f64>) {
        let np = self.n_params();
        let mut total = vec![0.0; np];
        let mut hidden = vec![0.0; self.n_hidden];
        let mut err = 0.0;
        let stride = self.n_inputs + 1;
        for (n, &tn) in t.iter().enumerate().take(x.rows()) {
            let xn = x.row(n);
            let a = self.logit(xn, &mut hidden);
            err += softplus(a) - tn * a;
            let delta = sigmoid(a) - tn;
            for (j, &h) in hidden.iter().enumerate() {
                let back = delta * self.w_out[j + 1] * h * (1.0 - h);
                let gj = &mut total[j * stride..(j + 1) * stride];
                gj[0] += back;
                for (gi, &xi) in gj[1..].iter_mut().zip(xn) {
                    *gi += back * xi;
                }
            }
            let o = self.n_hidden * stride;
            total[o] += delta;
            for (gi, &h) in total[o + 1..].iter_mut().zip(hidden.iter()) {
                *gi += delta * h;
            }
        }
        (err, total)
    }
}
