use alloc::format;
use alloc::vec::Vec;

use super::{objective, relevance, train, update_alphas, ArdConfig, ArdHyperparams, MlpNetwork};
use crate::data::{standardize_stats, Dataset};
use crate::linalg::Matrix;
use crate::{Error, Result};

/// One line of the evidence training log.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleLog {
    pub block: usize,
    pub cycle: usize,
    /// Penalized objective after training, under the alphas used to train.
    pub objective: f64,
    pub alphas: Vec<f64>,
    pub gammas: Vec<f64>,
}

/// A trained network over one attribute block.
#[derive(Debug, Clone, PartialEq)]
pub struct ArdModel {
    /// Indices, in the full dataset, of this block's inputs.
    pub attributes: Vec<usize>,
    pub network: MlpNetwork,
    pub hyperparams: ArdHyperparams,
    pub relevance: Vec<f64>,
    pub hessian_diag_inverse: Vec<f64>,
    pub ridge_used: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArdSelection {
    /// Retained attribute indices, ascending.
    pub retained: Vec<usize>,
    pub blocks: Vec<ArdModel>,
    /// Blocks where nothing cleared the threshold and the single most
    /// relevant attribute was kept instead.
    pub guarded_blocks: Vec<usize>,
    pub log: Vec<CycleLog>,
}

/// Sizes of `groups` contiguous blocks over `n` items, earlier blocks
/// taking the remainder.
pub fn block_sizes(n: usize, groups: usize) -> Vec<usize> {
    let groups = groups.max(1);
    (0..groups).map(|g| n / groups + usize::from(g < n % groups)).collect()
}

/// Standardized numeric matrix of a fully observed dataset (categorical
/// codes taken as numbers, constant columns left at scale 1).
pub fn standardized_matrix(ds: &Dataset) -> Result<Matrix> {
    if !ds.is_fully_observed() {
        return Err(Error::Precondition("ARD training data contains missing cells".into()));
    }
    let stats = standardize_stats(ds)?;
    let mut x = ds.to_matrix();
    for i in 0..x.rows() {
        for (v, s) in x.row_mut(i).iter_mut().zip(&stats) {
            *v = (*v - s.mean) / s.scale();
        }
    }
    Ok(x)
}

/// FNV-1a of an attribute name; keys the attribute's initial weights.
fn name_key(name: &str) -> u64 {
    name.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

/// ARD feature selection over contiguous attribute blocks.
///
/// Each block trains its own network through `evidence_cycles` rounds of
/// training followed by an alpha update; inputs with relevance below the
/// threshold are dropped.
pub fn select_features(ds: &Dataset, cfg: &ArdConfig) -> Result<ArdSelection> {
    cfg.validate()?;
    let m = ds.n_attributes();
    if m == 0 {
        return Err(Error::Degenerate("no attributes to select from".into()));
    }
    let x_all = standardized_matrix(ds)?;
    let t: Vec<f64> = ds.labels().iter().map(|&l| l as f64).collect();

    let mut retained = Vec::new();
    let mut blocks = Vec::new();
    let mut guarded = Vec::new();
    let mut log = Vec::new();
    let mut start = 0;
    for (b, size) in block_sizes(m, cfg.groups_for(m)).into_iter().enumerate() {
        let attributes: Vec<usize> = (start..start + size).collect();
        start += size;
        let mut x = Matrix::zeros(ds.n_rows(), size);
        for i in 0..ds.n_rows() {
            for (k, &j) in attributes.iter().enumerate() {
                x[(i, k)] = x_all[(i, j)];
            }
        }
        let keys: Vec<u64> = attributes.iter().map(|&j| name_key(&ds.schema()[j].name)).collect();
        let mut net = MlpNetwork::keyed(&keys, cfg.n_hidden, cfg.weight_scale_for(size), cfg.seed);
        let mut hyper = ArdHyperparams::per_input(&net, cfg.init_alpha);
        let mut last = None;
        for cycle in 0..cfg.evidence_cycles {
            net = train(&net, &x, &t, &hyper, cfg)?;
            let obj = objective(&net, &hyper, &x, &t);
            let update = update_alphas(&net, &hyper, &x, &t)?;
            log.push(CycleLog {
                block: b,
                cycle,
                objective: obj,
                alphas: update.hyperparams.alphas.clone(),
                gammas: update.gammas.clone(),
            });
            hyper = update.hyperparams.clone();
            last = Some(update);
        }
        let update = last.expect("at least one evidence cycle");
        let rel = relevance(&net);
        let mut kept: Vec<usize> =
            (0..size).filter(|&k| rel[k] >= cfg.relevance_threshold).map(|k| attributes[k]).collect();
        if kept.is_empty() {
            let best = (0..size).fold(0, |best, k| if rel[k] > rel[best] { k } else { best });
            kept.push(attributes[best]);
            guarded.push(b);
        }
        retained.extend(kept);
        blocks.push(ArdModel {
            attributes,
            network: net,
            hyperparams: hyper,
            relevance: rel,
            hessian_diag_inverse: update.hessian_inverse_diagonal,
            ridge_used: update.ridge_used,
        });
    }
    if retained.is_empty() {
        return Err(Error::Degenerate(format!("ARD kept no attributes out of {m}")));
    }
    Ok(ArdSelection { retained, blocks, guarded_blocks: guarded, log })
}
