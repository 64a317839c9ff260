//! Implementation-vs-oracle checks for the numerical core.

mod common;

use aggpredict::ann::{train_lm, Batch, LmConfig, Network, StopReason};
use aggpredict::dataset::{DataSplit, FeatureScaler, Target};
use aggpredict::linreg::LinearModel;
use common::*;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn ols_matches_normal_equations() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let features = random_features(&mut rng, 20);
    let targets: Vec<f64> = (0..20).map(|_| rng.random_range(5.0..45.0)).collect();
    let pairs: Vec<_> = features.iter().copied().zip(targets.iter().copied()).collect();
    let model = LinearModel::fit(&pairs, Target::La).unwrap();

    let scaler = FeatureScaler::fit(&features).unwrap();
    let rows: Vec<Vec<f64>> = features
        .iter()
        .map(|f| {
            let x = scaler.apply(f);
            vec![1.0, x[0], x[1], x[2]]
        })
        .collect();
    let oracle = normal_equations(&rows, &targets);
    let fitted = [model.intercept, model.coefficients[0], model.coefficients[1], model.coefficients[2]];
    for (a, b) in fitted.iter().zip(&oracle) {
        assert!((a - b).abs() <= 1e-8 * b.abs().max(1.0), "{a} vs {b}");
    }

    // residual gradient Xᵀ(y − ŷ) vanishes
    let x = DMatrix::from_fn(20, 4, |i, j| rows[i][j]);
    let y = DVector::from_column_slice(&targets);
    let beta = DVector::from_column_slice(&fitted);
    let grad = x.transpose() * (y - &x * beta);
    let scale = targets.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    assert!(grad.amax() <= 1e-8 * scale);
}

#[test]
fn jacobian_matches_central_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(30);
    for _ in 0..100 {
        let hidden = rng.random_range(1..=8);
        let n = rng.random_range(1..=20);
        let net = random_network(&mut rng, hidden, 1.5);
        let inputs: Vec<[f64; 3]> = (0..n)
            .map(|_| [rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5)])
            .collect();
        let analytic = net.jacobian(&inputs).unwrap();
        let numeric = fd_jacobian(&net, &inputs, 1e-6);
        for i in 0..n {
            for p in 0..net.param_count() {
                let (a, f) = (analytic[(i, p)], numeric[i][p]);
                let rel = (a - f).abs() / a.abs().max(f.abs()).max(1e-3);
                assert!(rel < 1e-5, "entry ({i},{p}): analytic {a} fd {f}");
            }
        }
    }
}

#[test]
fn realizable_target_is_learned() {
    let data = teacher_dataset(0);
    let cfg = LmConfig { hidden: 3, seed: 0, ..LmConfig::default() };
    let (_, report) = aggpredict::ann::train_lm_restarts(
        &data,
        &DataSplit::all_train(20),
        Target::La,
        &cfg,
        5,
        aggpredict::Execution::default(),
    )
    .unwrap();
    assert!(report.final_train_mse < 1e-6, "best mse {}", report.final_train_mse);
}

#[test]
fn single_hidden_unit_training_terminates_with_a_reason() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let features = random_features(&mut rng, 12);
    let targets: Vec<f64> = (0..12).map(|_| rng.random_range(5.0..45.0)).collect();
    let data = dataset_with_la(&features, &targets);
    let cfg = LmConfig { hidden: 1, max_epochs: 40, ..LmConfig::default() };
    let (_, r) = train_lm(&data, &DataSplit::all_train(12), Target::La, &cfg).unwrap();
    assert!(matches!(r.stop_reason, StopReason::MaxEpochs | StopReason::MuCeiling | StopReason::GradientFloor));
    assert!(r.epochs_run <= 40);
}

#[test]
fn batch_rejects_mismatched_lengths() {
    assert!(Batch::new(&[[0.0; 3]], &[1.0, 2.0]).is_err());
    assert!(Batch::new(&[], &[]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn lm_descent_and_damping(seed in any::<u64>(), n in 3usize..16, hidden in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let features = random_features(&mut rng, n);
        let targets: Vec<f64> = (0..n).map(|_| rng.random_range(5.0..45.0)).collect();
        let data = dataset_with_la(&features, &targets);
        let cfg = LmConfig { hidden, seed, max_epochs: 200, ..LmConfig::default() };
        let (_, r) = train_lm(&data, &DataSplit::all_train(n), Target::La, &cfg).unwrap();
        for w in r.train_mse.windows(2) {
            prop_assert!(w[1] <= w[0]);
        }
        let ceiling = cfg.mu_max * cfg.mu_inc;
        prop_assert!(r.mu_peak <= ceiling);
        for k in 1..r.mu_trace.len() {
            let (prev, next) = (r.mu_trace[k - 1], r.mu_trace[k]);
            prop_assert!(next > 0.0 && next <= ceiling);
            // μ grows by mu_inc per rejection, then shrinks by mu_dec on acceptance
            let expect = (prev * cfg.mu_inc.powi(r.rejections[k] as i32) * cfg.mu_dec).max(1e-20);
            prop_assert!((next - expect).abs() <= 1e-12 * expect);
        }
    }

    #[test]
    fn hidden_permutation_symmetry_after_training(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let features = random_features(&mut rng, 8);
        let targets: Vec<f64> = (0..8).map(|_| rng.random_range(5.0..45.0)).collect();
        let data = dataset_with_la(&features, &targets);
        let cfg = LmConfig { hidden: 4, seed, max_epochs: 30, ..LmConfig::default() };
        let (model, _) = train_lm(&data, &DataSplit::all_train(8), Target::La, &cfg).unwrap();
        let permuted: Network = model.network.permute_hidden(&[2, 3, 1, 0]).unwrap();
        for f in &features {
            let x = model.scaler.apply(f);
            prop_assert!((model.network.forward(&x) - permuted.forward(&x)).abs() < 1e-12);
        }
    }
}
