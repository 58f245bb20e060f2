#![allow(dead_code)]

use std::f64::consts::PI;

use realfft::RealFftPlanner;

/// One-sided power per FFT bin, `|X_k|^2`.
pub fn bin_powers(samples: &[f64]) -> Vec<f64> {
    let mut planner = RealFftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(samples.len());
    let mut input = samples.to_vec();
    let mut spectrum = fft.make_output_vec();
    fft.process(&mut input, &mut spectrum).unwrap();
    spectrum.iter().map(|c| c.norm_sqr()).collect()
}

/// `(in_band, out_of_band)` power for the band `(0, B]`, DC counted out of band.
pub fn band_split(samples: &[f64], dt: f64, bandwidth: f64) -> (f64, f64) {
    let n = samples.len() as f64;
    let mut inside = 0.0;
    let mut outside = 0.0;
    for (k, p) in bin_powers(samples).into_iter().enumerate() {
        let f = k as f64 / (n * dt);
        if k > 0 && f <= bandwidth {
            inside += p;
        } else {
            outside += p;
        }
    }
    (inside, outside)
}

pub fn excess_kurtosis(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let m2 = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    let m4 = xs.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n;
    m4 / (m2 * m2) - 3.0
}

/// Circular autocorrelation normalized to 1 at lag 0, for lags `0..max_lag`.
pub fn autocorrelation(xs: &[f64], max_lag: usize) -> Vec<f64> {
    let n = xs.len();
    let mut planner = RealFftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(n);
    let inverse = planner.plan_fft_inverse(n);
    let mut input = xs.to_vec();
    let mut spectrum = forward.make_output_vec();
    forward.process(&mut input, &mut spectrum).unwrap();
    for c in spectrum.iter_mut() {
        *c = c.norm_sqr().into();
    }
    let mut acf = inverse.make_output_vec();
    inverse.process(&mut spectrum, &mut acf).unwrap();
    let r0 = acf[0];
    acf.truncate(max_lag);
    acf.iter().map(|r| r / r0).collect()
}

/// Autocorrelation of a flat spectrum on bins `1..=bins` of an `n`-point record.
pub fn flat_band_autocorrelation(n: usize, bins: usize, lag: usize) -> f64 {
    (1..=bins)
        .map(|k| (2.0 * PI * k as f64 * lag as f64 / n as f64).cos())
        .sum::<f64>()
        / bins as f64
}

/// First lag (in samples, linearly interpolated) where `acf` drops below `level`.
pub fn first_crossing(acf: &[f64], level: f64) -> Option<f64> {
    acf.windows(2).enumerate().find_map(|(m, w)| {
        (w[0] >= level && w[1] < level).then(|| m as f64 + (w[0] - level) / (w[0] - w[1]))
    })
}

pub fn zero_crossings(xs: &[f64]) -> usize {
    xs.windows(2).filter(|w| (w[0] < 0.0) != (w[1] < 0.0)).count()
}

pub fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

/// Largest `|x[at] - x[at-1]|` relative to the median adjacent step, over the
/// given columns.
pub fn jump_ratio(columns: &[&[f64]], at: usize) -> f64 {
    columns
        .iter()
        .map(|c| {
            let steps: Vec<f64> = c.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
            let med = median(steps.clone());
            let jump = steps[at - 1];
            if med == 0.0 {
                if jump == 0.0 { 0.0 } else { f64::INFINITY }
            } else {
                jump / med
            }
        })
        .fold(0.0, f64::max)
}
