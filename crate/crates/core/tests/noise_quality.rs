mod common;

use kljn_transient::noise::{band_bins, slope_rms, synthesize_record};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const DT: f64 = 1e-7;
const B: f64 = 5e3;
const N: usize = 1 << 20;
const SIGMA: f64 = 1.9662;

fn record(seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    synthesize_record(&mut rng, N, DT, B, SIGMA).unwrap().samples().to_vec()
}

#[test]
fn no_power_outside_the_band() {
    let x = record(11);
    let (inside, outside) = common::band_split(&x, DT, B);
    assert!(outside / inside < 1e-20, "{}", outside / inside);
}

#[test]
fn sample_rms_and_mean() {
    for seed in 0..3 {
        let x = record(seed);
        let rms = (x.iter().map(|v| v * v).sum::<f64>() / N as f64).sqrt();
        assert!((rms / SIGMA - 1.0).abs() < 0.01);
        assert!((x.iter().sum::<f64>() / N as f64).abs() < 1e-9);
    }
}

#[test]
fn gaussian_kurtosis() {
    let mut pooled = Vec::new();
    for seed in 20..28 {
        pooled.extend(record(seed));
    }
    let k = common::excess_kurtosis(&pooled);
    assert!(k.abs() < 0.1, "{k}");
}

#[test]
fn autocorrelation_matches_flat_band_oracle() {
    let x = record(5);
    let bins = band_bins(N, DT, B);
    let acf = common::autocorrelation(&x, 2000);
    // Ensemble oracle; a single record scatters by roughly 1/sqrt(bins).
    let tol = 4.0 / (bins as f64).sqrt();
    for lag in [0, 100, 300, 700, 1000, 1500] {
        let oracle = common::flat_band_autocorrelation(N, bins, lag);
        assert!((acf[lag] - oracle).abs() < tol, "lag {lag}: {} vs {oracle}", acf[lag]);
    }
}

#[test]
fn flat_band_decay_lag() {
    let bins = band_bins(N, DT, B);
    let oracle: Vec<f64> = (0..2000).map(|m| common::flat_band_autocorrelation(N, bins, m)).collect();
    let lag = common::first_crossing(&oracle, (-1.0f64).exp()).unwrap() * DT;
    // sin(x)/x = 1/e at x = 2.1986.
    assert!((lag - 2.1986 / (2.0 * std::f64::consts::PI * B)).abs() < 1e-6, "{lag}");
    // First zero at 1/(2B).
    let zero = common::first_crossing(&oracle, 0.0).unwrap() * DT;
    assert!((zero - 1.0 / (2.0 * B)).abs() < 2e-6, "{zero}");
}

#[test]
fn zero_crossing_rate() {
    let x = record(6);
    let expected = N as f64 * DT * 2.0 * B / 3f64.sqrt();
    let got = common::zero_crossings(&x) as f64;
    assert!((got / expected - 1.0).abs() < 0.05, "{got} vs {expected}");
}

#[test]
fn slope_rms_of_records() {
    let x = record(7);
    let slopes: Vec<f64> = x.windows(3).map(|w| (w[2] - w[0]) / (2.0 * DT)).collect();
    let rms = (slopes.iter().map(|s| s * s).sum::<f64>() / slopes.len() as f64).sqrt();
    let target = slope_rms(B, SIGMA).unwrap();
    assert!((rms / target - 1.0).abs() < 0.02, "{rms} vs {target}");
}
