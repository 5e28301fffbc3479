#![allow(dead_code)]

use rand::Rng as _;
use ripfs_core::data::{Attribute, Cell, Dataset};
use ripfs_core::rng::seeded;

/// Standard normal draws via Box-Muller.
pub fn normals(rng: &mut ripfs_core::rng::Rng, n: usize) -> Vec<f64> {
    (0..n)
        .map(|_| {
            let u: f64 = rng.random_range(f64::EPSILON..1.0);
            let v: f64 = rng.random();
            (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos()
        })
        .collect()
}

/// Ten standard-normal inputs; the label is `x0 + x1 + 0.3·noise > 0`.
pub fn relevance_family(seed: u64, rows: usize) -> Dataset {
    let mut rng = seeded(seed);
    let schema = (0..10).map(|j| Attribute::continuous(format!("x{j}"))).collect();
    let mut data = Vec::with_capacity(rows);
    let mut labels = Vec::with_capacity(rows);
    for _ in 0..rows {
        let x = normals(&mut rng, 11);
        labels.push(u8::from(x[0] + x[1] + 0.3 * x[10] > 0.0));
        data.push(x[..10].iter().map(|&v| Cell::Value(v)).collect());
    }
    Dataset::new(schema, data, labels).unwrap()
}

/// Two Gaussian blobs in the plane whose centres sit `margin` apart along
/// the diagonal.
pub fn blobs(seed: u64, rows: usize, margin: f64) -> Dataset {
    let mut rng = seeded(seed);
    let schema = vec![Attribute::continuous("a"), Attribute::continuous("b")];
    let half = margin / (2.0 * std::f64::consts::SQRT_2);
    let mut data = Vec::new();
    let mut labels = Vec::new();
    for r in 0..rows {
        let class = (r % 2) as u8;
        let c = if class == 1 { half } else { -half };
        let z = normals(&mut rng, 2);
        data.push(vec![Cell::Value(c + 0.3 * z[0]), Cell::Value(c + 0.3 * z[1])]);
        labels.push(class);
    }
    Dataset::new(schema, data, labels).unwrap()
}
