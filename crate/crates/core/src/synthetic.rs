//! Seeded synthetic datasets used for demos, tests and the bundled
//! `data/synthetic7.csv`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dataset::{Dataset, FeatureScaler, Features, RockSample};

fn round_to(x: f64, decimals: i32) -> f64 {
    let s = 10f64.powi(decimals);
    (x * s).round() / s
}

/// Carbonate-like samples: porosity falls and density rises with velocity,
/// and both attrition coefficients fall with velocity (faster rock is
/// stronger), plus uniform seeded noise. Values are rounded to the
/// precision a laboratory sheet would carry.
pub fn carbonate_samples(n: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = (0..n)
        .map(|i| {
            let t = if n > 1 { i as f64 / (n - 1) as f64 } else { 0.5 };
            let velocity = round_to(3800.0 + 2400.0 * t + rng.random_range(-120.0..120.0), 0);
            let dv = velocity - 3800.0;
            let porosity = round_to((14.0 - 0.004 * dv + rng.random_range(-0.8..0.8)).max(0.3), 2);
            let density = round_to(2.38 + 0.00012 * dv - 0.01 * porosity + rng.random_range(-0.02..0.02), 3);
            let la = round_to(42.0 - 0.0065 * dv + 0.35 * porosity + rng.random_range(-1.5..1.5), 1);
            let mde = round_to(28.0 - 0.0052 * dv + 0.3 * porosity + rng.random_range(-1.2..1.2), 1);
            RockSample { id: format!("C{}", i + 1), velocity, density, porosity, la: Some(la), mde: Some(mde) }
        })
        .collect();
    Dataset::new(samples).expect("generator stays inside the physical ranges").with_grain_class("10/14 mm")
}

/// Ten full-rank samples whose LA and MDE are exactly
/// `5 + 2·v̂ + 3·d̂ − p̂` in the min-max normalized features of the same ten
/// samples.
pub fn noiseless_linear() -> Dataset {
    let v = [4100.0, 4300.0, 4650.0, 4800.0, 5000.0, 5200.0, 5350.0, 5600.0, 5800.0, 6000.0];
    let d = [2.55, 2.71, 2.60, 2.68, 2.52, 2.66, 2.58, 2.74, 2.63, 2.70];
    let p = [4.0, 1.5, 3.2, 6.0, 2.4, 5.1, 0.8, 3.9, 2.2, 4.7];
    let features: Vec<Features> = (0..10).map(|i| Features::new(v[i], d[i], p[i])).collect();
    let scaler = FeatureScaler::fit(&features).expect("non-constant features");
    let samples = features
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let x = scaler.apply(f);
            let y = 5.0 + 2.0 * x[0] + 3.0 * x[1] - x[2];
            RockSample {
                id: format!("L{}", i + 1),
                velocity: f.velocity,
                density: f.density,
                porosity: f.porosity,
                la: Some(y),
                mde: Some(y),
            }
        })
        .collect();
    Dataset::new(samples).expect("targets stay non-negative")
}

/// Training samples whose MDE falls by one point per 100 m/s, and an
/// evaluation set that adds a fast held-out rock (`H1`, 7000 m/s, measured
/// MDE 3.0). A linear fit extrapolates the held-out MDE to −10 %.
pub fn negative_mde_case() -> (Dataset, Dataset) {
    let d = [2.60, 2.64, 2.58, 2.70, 2.62, 2.67];
    let p = [3.0, 1.0, 4.0, 2.0, 5.0, 2.5];
    let mut samples: Vec<RockSample> = (0..6)
        .map(|i| {
            let v = 4000.0 + 300.0 * i as f64;
            RockSample {
                id: format!("T{}", i + 1),
                velocity: v,
                density: d[i],
                porosity: p[i],
                la: None,
                mde: Some(20.0 - 0.01 * (v - 4000.0)),
            }
        })
        .collect();
    let train = Dataset::new(samples.clone()).expect("valid");
    samples.push(RockSample {
        id: "H1".into(),
        velocity: 7000.0,
        density: 2.65,
        porosity: 2.0,
        la: None,
        mde: Some(3.0),
    });
    (train, Dataset::new(samples).expect("valid"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_csv_matches_generator() {
        let bundled = include_str!("../data/synthetic7.csv");
        assert_eq!(carbonate_samples(7, 2023).to_csv(), bundled);
    }

    #[test]
    fn carbonate_samples_are_monotone_in_expectation() {
        let d = carbonate_samples(40, 1);
        let first = &d.samples[0];
        let last = &d.samples[39];
        assert!(first.velocity < last.velocity);
        assert!(first.la.unwrap() > last.la.unwrap());
        assert!(first.mde.unwrap() > last.mde.unwrap());
    }

    #[test]
    fn noiseless_linear_is_valid() {
        let d = noiseless_linear();
        assert_eq!(d.len(), 10);
    }
}
