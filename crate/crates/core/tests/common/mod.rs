//! Independent oracles and fixtures shared by the integration suites.
#![allow(dead_code)]

use aggpredict::ann::{param_count, Network};
use aggpredict::dataset::{Dataset, FeatureScaler, Features, RockSample};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Solves `XᵀX β = Xᵀy` by Gaussian elimination with partial pivoting.
/// Shares nothing with the QR path under test.
pub fn normal_equations(rows: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
    let p = rows[0].len();
    let mut a = vec![vec![0.0; p + 1]; p];
    for (row, &yi) in rows.iter().zip(y) {
        for i in 0..p {
            for j in 0..p {
                a[i][j] += row[i] * row[j];
            }
            a[i][p] += row[i] * yi;
        }
    }
    for col in 0..p {
        let pivot = (col..p).max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs())).unwrap();
        a.swap(col, pivot);
        let pivot_row = a[col].clone();
        for row in &mut a[col + 1..] {
            let f = row[col] / pivot_row[col];
            for (x, y) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= f * y;
            }
        }
    }
    let mut beta = vec![0.0; p];
    for i in (0..p).rev() {
        let s: f64 = (i + 1..p).map(|j| a[i][j] * beta[j]).sum();
        beta[i] = (a[i][p] - s) / a[i][i];
    }
    beta
}

/// Central-difference Jacobian of the network output.
pub fn fd_jacobian(net: &Network, inputs: &[[f64; 3]], step: f64) -> Vec<Vec<f64>> {
    let base = net.params().to_vec();
    let eval = |params: &[f64], x: &[f64; 3]| Network::new(net.hidden(), params.to_vec()).unwrap().forward(x);
    inputs
        .iter()
        .map(|x| {
            (0..base.len())
                .map(|k| {
                    let mut up = base.clone();
                    let mut down = base.clone();
                    up[k] += step;
                    down[k] -= step;
                    (eval(&up, x) - eval(&down, x)) / (2.0 * step)
                })
                .collect()
        })
        .collect()
}

pub fn random_network(rng: &mut ChaCha8Rng, hidden: usize, scale: f64) -> Network {
    let p = (0..param_count(hidden)).map(|_| rng.random_range(-scale..scale)).collect();
    Network::new(hidden, p).unwrap()
}

pub fn random_features(rng: &mut ChaCha8Rng, n: usize) -> Vec<Features> {
    (0..n)
        .map(|_| {
            Features::new(rng.random_range(3500.0..6500.0), rng.random_range(2.2..2.9), rng.random_range(0.2..15.0))
        })
        .collect()
}

pub fn dataset_with_la(features: &[Features], targets: &[f64]) -> Dataset {
    Dataset::new(
        features
            .iter()
            .zip(targets)
            .enumerate()
            .map(|(i, (f, y))| RockSample {
                id: format!("R{i}"),
                velocity: f.velocity,
                density: f.density,
                porosity: f.porosity,
                la: Some(*y),
                mde: None,
            })
            .collect(),
    )
    .unwrap()
}

/// Twenty samples whose LA is `30 + 5 · teacher(x̂)` for a frozen random
/// 3-3-1 tanh network `teacher` (parameters uniform on ±0.5, the same
/// distribution as weight initialization), with x̂ the min-max normalized
/// features.
pub fn teacher_dataset(seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let teacher = random_network(&mut rng, 3, 0.5);
    let features = random_features(&mut rng, 20);
    let scaler = FeatureScaler::fit(&features).unwrap();
    let targets: Vec<f64> = features.iter().map(|f| 30.0 + 5.0 * teacher.forward(&scaler.apply(f))).collect();
    dataset_with_la(&features, &targets)
}
