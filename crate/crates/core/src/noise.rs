//! Band-limited Gaussian generator noise.
//!
//! Records are built in the frequency domain: every bin in `(0, B]` receives an
//! independent complex Gaussian coefficient, every other bin (DC included) is
//! zero, and a real inverse FFT produces the time series. Out-of-band power is
//! therefore exactly zero at any sampling interval. Each record is scaled so
//! that its sample RMS equals the requested `sigma`.
//!
//! The defense needs start instants with a prescribed value and slope; these
//! are located by [`find_start_point`] on pre-generated records, with
//! [`search_start`] adding the regenerate-then-loosen fallback.

use std::cell::RefCell;
use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;
use realfft::num_complex::Complex;
use realfft::RealFftPlanner;

use crate::error::{ensure_non_negative, ensure_positive, Error, Result};

/// Boltzmann constant in J/K (exact SI value).
pub const BOLTZMANN: f64 = 1.380649e-23;

/// Minimum number of in-band frequency bins a record must carry.
pub const MIN_BAND_BINS: f64 = 10.0;

thread_local! {
    static PLANNER: RefCell<RealFftPlanner<f64>> = RefCell::new(RealFftPlanner::new());
}

/// RMS voltage of a Johnson-Nyquist generator, `sqrt(4 k T R B)`.
pub fn johnson_rms(temperature: f64, resistance: f64, bandwidth: f64) -> Result<f64> {
    ensure_non_negative("temperature", temperature)?;
    ensure_positive("resistance", resistance)?;
    ensure_positive("bandwidth", bandwidth)?;
    Ok((4.0 * BOLTZMANN * temperature * resistance * bandwidth).sqrt())
}

/// RMS time derivative of flat-band noise on `(0, B]` with RMS `sigma`:
/// `sigma * 2 pi B / sqrt(3)`.
pub fn slope_rms(bandwidth: f64, sigma: f64) -> Result<f64> {
    ensure_positive("bandwidth", bandwidth)?;
    ensure_non_negative("sigma", sigma)?;
    Ok(sigma * (2.0 * PI * bandwidth / 3f64.sqrt()))
}

/// A sampled generator voltage.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseRecord {
    samples: Vec<f64>,
    dt: f64,
    bandwidth: f64,
    target_rms: f64,
    seed_tag: u64,
}

impl NoiseRecord {
    /// Wraps existing samples, e.g. analytic test drives.
    pub fn from_samples(
        samples: Vec<f64>,
        dt: f64,
        bandwidth: f64,
        target_rms: f64,
        seed_tag: u64,
    ) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::invalid("samples", "a record needs at least 2 samples"));
        }
        ensure_positive("dt", dt)?;
        ensure_positive("bandwidth", bandwidth)?;
        ensure_non_negative("target_rms", target_rms)?;
        Ok(Self {
            samples,
            dt,
            bandwidth,
            target_rms,
            seed_tag,
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    pub fn target_rms(&self) -> f64 {
        self.target_rms
    }

    pub fn seed_tag(&self) -> u64 {
        self.seed_tag
    }

    pub fn with_seed_tag(mut self, seed_tag: u64) -> Self {
        self.seed_tag = seed_tag;
        self
    }

    /// The sign-flipped record. A zero-mean Gaussian path and its negation are
    /// equally likely, so the defense may use either.
    pub fn negated(&self) -> Self {
        Self {
            samples: self.samples.iter().map(|s| -s).collect(),
            ..self.clone()
        }
    }

    pub fn sample_rms(&self) -> f64 {
        let ms = self.samples.iter().map(|s| s * s).sum::<f64>() / self.samples.len() as f64;
        ms.sqrt()
    }
}

/// Number of DFT bins of an `n`-sample record at spacing `dt` that lie in `(0, B]`.
pub fn band_bins(n: usize, dt: f64, bandwidth: f64) -> usize {
    let df = 1.0 / (n as f64 * dt);
    // Guard against `B / df` landing a hair below an integer.
    ((bandwidth / df) * (1.0 + 1e-12)).floor() as usize
}

/// Synthesizes a band-limited Gaussian record of `n` samples.
///
/// The spectrum is flat on `(0, B]` and exactly zero elsewhere; the record is
/// scaled to a sample RMS of exactly `sigma`. Deterministic for a given RNG
/// state.
pub fn synthesize_record<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    dt: f64,
    bandwidth: f64,
    sigma: f64,
) -> Result<NoiseRecord> {
    ensure_positive("dt", dt)?;
    ensure_positive("bandwidth", bandwidth)?;
    ensure_non_negative("sigma", sigma)?;
    if n < 2 {
        return Err(Error::invalid("n", "a record needs at least 2 samples"));
    }
    if bandwidth >= 0.5 / dt {
        return Err(Error::invalid(
            "bandwidth",
            format!("{bandwidth} Hz is not below the Nyquist frequency {} Hz", 0.5 / dt),
        ));
    }
    if (n as f64) * dt * bandwidth < MIN_BAND_BINS {
        return Err(Error::invalid(
            "n",
            format!("n*dt*B = {} is below the minimum of {MIN_BAND_BINS}", n as f64 * dt * bandwidth),
        ));
    }

    let bins = band_bins(n, dt, bandwidth);
    let mut spectrum = vec![Complex::new(0.0, 0.0); n / 2 + 1];
    for c in spectrum.iter_mut().skip(1).take(bins) {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        *c = Complex::new(re, im);
    }

    let mut samples = vec![0.0; n];
    PLANNER.with(|planner| {
        let plan = planner.borrow_mut().plan_fft_inverse(n);
        plan.process(&mut spectrum, &mut samples)
            .expect("spectrum is Hermitian-consistent by construction");
    });

    let raw_ms = samples.iter().map(|s| s * s).sum::<f64>() / n as f64;
    if sigma == 0.0 || raw_ms == 0.0 {
        samples.iter_mut().for_each(|s| *s = 0.0);
    } else {
        let scale = sigma / raw_ms.sqrt();
        samples.iter_mut().for_each(|s| *s *= scale);
    }

    NoiseRecord::from_samples(samples, dt, bandwidth, sigma, 0)
}

/// Central-difference slope `(s[i+1] - s[i-1]) / (2 dt)`.
pub fn estimate_slope(record: &NoiseRecord, index: usize) -> Result<f64> {
    let s = record.samples();
    if index == 0 || index + 1 >= s.len() {
        return Err(Error::IndexOutOfRange {
            index,
            len: s.len(),
        });
    }
    Ok((s[index + 1] - s[index - 1]) / (2.0 * record.dt()))
}

/// What a start-point search looks for.
///
/// The value tolerance is relative to the record's target RMS, the slope
/// tolerance relative to `slope`. `f64::INFINITY` disables a constraint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StartTarget {
    pub value: f64,
    pub value_tol_rel: f64,
    pub slope: f64,
    pub slope_tol_rel: f64,
    pub allow_negation: bool,
}

impl StartTarget {
    pub fn validate(&self) -> Result<()> {
        if !self.value.is_finite() {
            return Err(Error::invalid("target_value", "must be finite"));
        }
        if !(self.value_tol_rel > 0.0) {
            return Err(Error::invalid("value_tol_rel", "must be > 0"));
        }
        if !(self.slope_tol_rel > 0.0) {
            return Err(Error::invalid("slope_tol_rel", "must be > 0"));
        }
        if self.slope == 0.0 || !self.slope.is_finite() {
            return Err(Error::invalid("target_slope", "must be finite and non-zero"));
        }
        Ok(())
    }

    fn matches(&self, value: f64, slope: f64, value_scale: f64) -> bool {
        (value - self.value).abs() <= self.value_tol_rel * value_scale
            && (slope / self.slope - 1.0).abs() <= self.slope_tol_rel
    }
}

/// A located start instant.
///
/// `value` and `slope` are those of the record as it will be used, i.e. after
/// negation when `negated` is set. The achieved tolerances are the measured
/// relative deviations from the target (infinite when unconstrained).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StartPoint {
    pub index: usize,
    pub value: f64,
    pub slope: f64,
    pub negated: bool,
    pub achieved_value_tol: f64,
    pub achieved_slope_tol: f64,
    /// Set when the search had to widen the requested tolerances.
    pub loosened: bool,
}

impl StartPoint {
    /// An unconstrained start at `index` (no-defense start-up).
    pub fn unconstrained(record: &NoiseRecord, index: usize) -> Result<Self> {
        let slope = estimate_slope(record, index)?;
        Ok(Self {
            index,
            value: record.samples()[index],
            slope,
            negated: false,
            achieved_value_tol: f64::INFINITY,
            achieved_slope_tol: f64::INFINITY,
            loosened: false,
        })
    }
}

/// Finds the earliest interior index matching `target`.
///
/// Only indices with at least `reserve` samples from the index onward (the
/// index included) are considered, so the caller can drive that many steps.
pub fn find_start_point(
    record: &NoiseRecord,
    target: &StartTarget,
    reserve: usize,
) -> Result<StartPoint> {
    target.validate()?;
    let s = record.samples();
    let n = s.len();
    if n < 3 {
        return Err(Error::StartNotFound);
    }
    let last = (n - 2).min(n.saturating_sub(reserve));
    let inv_2dt = 1.0 / (2.0 * record.dt());
    let scale = record.target_rms();

    for i in 1..=last {
        let value = s[i];
        let slope = (s[i + 1] - s[i - 1]) * inv_2dt;
        let negated = if target.matches(value, slope, scale) {
            false
        } else if target.allow_negation && target.matches(-value, -slope, scale) {
            true
        } else {
            continue;
        };
        let (value, slope) = if negated { (-value, -slope) } else { (value, slope) };
        return Ok(StartPoint {
            index: i,
            value,
            slope,
            negated,
            achieved_value_tol: relative_value_error(value, target.value, scale),
            achieved_slope_tol: (slope / target.slope - 1.0).abs(),
            loosened: false,
        });
    }
    Err(Error::StartNotFound)
}

fn relative_value_error(value: f64, target: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        (value - target).abs() / scale
    } else if value == target {
        0.0
    } else {
        f64::INFINITY
    }
}

/// A record together with the instant its generator is switched on.
#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    pub record: NoiseRecord,
    pub start: StartPoint,
}

impl Generator {
    pub fn new(record: NoiseRecord, start: StartPoint) -> Self {
        Self { record, start }
    }

    /// A generator started at sample 0 of `record`, without slope bookkeeping.
    /// Used for analytic drives such as steps and ramps.
    pub fn from_start(record: NoiseRecord) -> Self {
        let value = record.samples()[0];
        Self {
            record,
            start: StartPoint {
                index: 0,
                value,
                slope: 0.0,
                negated: false,
                achieved_value_tol: f64::INFINITY,
                achieved_slope_tol: f64::INFINITY,
                loosened: false,
            },
        }
    }

    /// The first `n_steps` generator samples from the start instant, negated
    /// if the start point requires it.
    pub fn drive(&self, n_steps: usize) -> Result<Vec<f64>> {
        let s = self.record.samples();
        let start = self.start.index;
        let end = start
            .checked_add(n_steps)
            .filter(|&end| end <= s.len())
            .ok_or(Error::RecordExhausted {
                start,
                needed: n_steps,
                len: s.len(),
            })?;
        let window = &s[start..end];
        Ok(if self.start.negated {
            window.iter().map(|v| -v).collect()
        } else {
            window.to_vec()
        })
    }
}

/// Fallback behaviour when a record holds no qualifying start point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchPolicy {
    /// Fresh records drawn at the requested tolerances after the first one.
    pub max_regenerations: u32,
    /// Tolerance doublings allowed afterwards (a fresh record per doubling).
    pub max_doublings: u32,
}

impl Default for SearchPolicy {
    fn default() -> Self {
        Self {
            max_regenerations: 10,
            max_doublings: 20,
        }
    }
}

/// Shape of the records a search synthesizes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecordSpec {
    pub len: usize,
    pub dt: f64,
    pub bandwidth: f64,
}

/// Synthesizes records until one contains a start point matching `target`.
///
/// After `max_regenerations` fresh records at the requested tolerances, the
/// slope tolerance (and the value tolerance when `loosen_value` is set) is
/// doubled on each further attempt. The returned start point records whether
/// loosening happened along with the deviations it actually achieved.
pub fn search_start<R: Rng + ?Sized>(
    rng: &mut R,
    spec: &RecordSpec,
    sigma: f64,
    target: &StartTarget,
    reserve: usize,
    loosen_value: bool,
    policy: &SearchPolicy,
) -> Result<Generator> {
    target.validate()?;
    let mut current = *target;
    let attempts = policy.max_regenerations + 1 + policy.max_doublings;
    for attempt in 0..attempts {
        if attempt > policy.max_regenerations {
            current.slope_tol_rel *= 2.0;
            if loosen_value {
                current.value_tol_rel *= 2.0;
            }
        }
        let record = synthesize_record(rng, spec.len, spec.dt, spec.bandwidth, sigma)?;
        match find_start_point(&record, &current, reserve) {
            Ok(mut start) => {
                start.loosened = current != *target;
                return Ok(Generator::new(record, start));
            }
            Err(Error::StartNotFound) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::StartNotFound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ramp(a: f64, dt: f64, n: usize) -> NoiseRecord {
        let samples = (0..n).map(|i| a * i as f64 * dt).collect();
        NoiseRecord::from_samples(samples, dt, 5e3, 1.0, 0).unwrap()
    }

    #[test]
    fn johnson_rms_reference_values() {
        // 4kTRB evaluated independently with the constants spelled out.
        let high = (4.0 * 1.380649e-23 * 7e15 * 11e3 * 5e3f64).sqrt();
        let low = (4.0 * 1.380649e-23 * 7e15 * 2e3 * 5e3f64).sqrt();
        assert!((johnson_rms(7e15, 11e3, 5e3).unwrap() - high).abs() < 1e-12);
        assert!((high - 4.611).abs() < 1e-3);
        assert!((low - 1.9662).abs() < 1e-4);
        assert!((johnson_rms(7e15, 2e3, 5e3).unwrap() - 1.9662).abs() < 1e-4);
    }

    #[test]
    fn johnson_rms_scaling_and_errors() {
        let base = johnson_rms(300.0, 1e3, 1e4).unwrap();
        assert_eq!(johnson_rms(1200.0, 1e3, 1e4).unwrap(), 2.0 * base);
        assert!(johnson_rms(300.0, 0.0, 1e4).is_err());
        assert!(johnson_rms(-1.0, 1e3, 1e4).is_err());
        assert!(johnson_rms(300.0, 1e3, f64::NAN).is_err());
    }

    #[test]
    fn slope_rms_values() {
        let m = slope_rms(5e3, 1.9662).unwrap();
        assert!((m / 3.567e4 - 1.0).abs() < 1e-3, "{m}");
        assert_eq!(slope_rms(5e3, 0.0).unwrap(), 0.0);
        assert_eq!(slope_rms(1e4, 1.3).unwrap(), 2.0 * slope_rms(5e3, 1.3).unwrap());
        assert!(slope_rms(0.0, 1.0).is_err());
        assert!(slope_rms(5e3, -1.0).is_err());
    }

    #[test]
    fn slope_rms_matches_second_spectral_moment() {
        // sigma'^2 = (1/B) * integral_0^B (2 pi f)^2 df * sigma^2, midpoint rule.
        let (b, sigma) = (5e3, 1.9662);
        let n = 100_000;
        let df = b / n as f64;
        let moment: f64 = (0..n)
            .map(|k| {
                let f = (k as f64 + 0.5) * df;
                (2.0 * PI * f).powi(2)
            })
            .sum::<f64>()
            * df
            / b;
        let oracle = sigma * moment.sqrt();
        assert!((slope_rms(b, sigma).unwrap() / oracle - 1.0).abs() < 1e-8);
    }

    #[test]
    fn synthesis_rejects_bad_parameters() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(synthesize_record(&mut rng, 1 << 12, 1e-7, 5e6, 1.0).is_err());
        assert!(synthesize_record(&mut rng, 1, 1e-7, 5e3, 1.0).is_err());
        // 1024 * 1e-7 * 5e3 is about 0.5 bins.
        assert!(synthesize_record(&mut rng, 1024, 1e-7, 5e3, 1.0).is_err());
        assert!(synthesize_record(&mut rng, 1 << 16, 1e-7, 5e3, -1.0).is_err());
    }

    #[test]
    fn zero_sigma_gives_zero_record() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let r = synthesize_record(&mut rng, 1 << 16, 1e-6, 5e3, 0.0).unwrap();
        assert!(r.samples().iter().all(|&s| s == 0.0));
    }

    #[test]
    fn synthesis_is_deterministic_and_scaled() {
        let a = synthesize_record(&mut ChaCha8Rng::seed_from_u64(9), 1 << 16, 1e-6, 5e3, 2.5).unwrap();
        let b = synthesize_record(&mut ChaCha8Rng::seed_from_u64(9), 1 << 16, 1e-6, 5e3, 2.5).unwrap();
        assert_eq!(a, b);
        assert!((a.sample_rms() / 2.5 - 1.0).abs() < 1e-12);
        let mean = a.samples().iter().sum::<f64>() / a.len() as f64;
        assert!(mean.abs() < 1e-9);
    }

    #[test]
    fn estimate_slope_constant_and_ramp() {
        let c = NoiseRecord::from_samples(vec![0.7; 10], 1e-7, 5e3, 1.0, 0).unwrap();
        assert_eq!(estimate_slope(&c, 5).unwrap(), 0.0);
        let r = ramp(3.0e4, 0.5, 10);
        assert_eq!(estimate_slope(&r, 4).unwrap(), 3.0e4);
        assert!(matches!(estimate_slope(&r, 0), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(estimate_slope(&r, 9), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn degenerate_slope_tolerance_finds_first_zero_crossing() {
        let samples = vec![0.5, 0.3, 0.1, 0.0004, -0.2, -0.4, 0.0, 0.3];
        let r = NoiseRecord::from_samples(samples, 1e-7, 5e3, 1.0, 0).unwrap();
        let target = StartTarget {
            value: 0.0,
            value_tol_rel: 1e-3,
            slope: 1.0,
            slope_tol_rel: f64::INFINITY,
            allow_negation: false,
        };
        let sp = find_start_point(&r, &target, 0).unwrap();
        assert_eq!(sp.index, 3);
        assert!(!sp.negated);
        assert!((sp.achieved_value_tol - 4e-4).abs() < 1e-15);
    }

    #[test]
    fn ramp_match_near_start() {
        let a = 2.0e4;
        let dt = 1e-7;
        // Shift the ramp so that sample 1 sits exactly on zero.
        let samples: Vec<f64> = (0..50).map(|i| a * (i as f64 - 1.0) * dt).collect();
        let r = NoiseRecord::from_samples(samples, dt, 5e3, 1.0, 0).unwrap();
        let target = StartTarget {
            value: 0.0,
            value_tol_rel: 1e-3,
            slope: a,
            slope_tol_rel: 1e-2,
            allow_negation: false,
        };
        let sp = find_start_point(&r, &target, 0).unwrap();
        assert_eq!(sp.index, 1);
        assert!((sp.slope / a - 1.0).abs() < 1e-9);
    }

    #[test]
    fn negation_is_reported_and_verifiable() {
        let a = 2.0e4;
        let dt = 1e-7;
        // Falling ramp through zero at index 2.
        let samples: Vec<f64> = (0..20).map(|i| -a * (i as f64 - 2.0) * dt).collect();
        let r = NoiseRecord::from_samples(samples, dt, 5e3, 1.0, 0).unwrap();
        let target = StartTarget {
            value: 0.0,
            value_tol_rel: 1e-3,
            slope: a,
            slope_tol_rel: 1e-2,
            allow_negation: true,
        };
        let sp = find_start_point(&r, &target, 0).unwrap();
        assert!(sp.negated);
        assert_eq!(sp.index, 2);
        let flipped = r.negated();
        let direct = StartTarget {
            allow_negation: false,
            ..target
        };
        assert_eq!(find_start_point(&flipped, &direct, 0).unwrap().index, sp.index);

        let strict = StartTarget {
            allow_negation: false,
            ..target
        };
        assert_eq!(find_start_point(&r, &strict, 0), Err(Error::StartNotFound));
    }

    #[test]
    fn reserve_excludes_late_indices() {
        let samples = vec![1.0, 1.0, 1.0, 1.0, 0.0, -1.0];
        let r = NoiseRecord::from_samples(samples, 1.0, 0.1, 1.0, 0).unwrap();
        let target = StartTarget {
            value: 0.0,
            value_tol_rel: 1e-3,
            slope: -1.0,
            slope_tol_rel: 1e-2,
            allow_negation: false,
        };
        assert_eq!(find_start_point(&r, &target, 0).unwrap().index, 4);
        assert_eq!(find_start_point(&r, &target, 3), Err(Error::StartNotFound));
    }

    #[test]
    fn invalid_targets_are_rejected() {
        let r = ramp(1.0, 1.0, 10);
        let mut t = StartTarget {
            value: 0.0,
            value_tol_rel: 1e-3,
            slope: 0.0,
            slope_tol_rel: 1e-2,
            allow_negation: false,
        };
        assert!(matches!(find_start_point(&r, &t, 0), Err(Error::InvalidParameter { .. })));
        t.slope = 1.0;
        t.value_tol_rel = 0.0;
        assert!(matches!(find_start_point(&r, &t, 0), Err(Error::InvalidParameter { .. })));
    }

    #[test]
    fn drive_respects_negation_and_length() {
        let r = ramp(1.0, 1.0, 10);
        let mut g = Generator::new(r.clone(), StartPoint::unconstrained(&r, 3).unwrap());
        assert_eq!(g.drive(3).unwrap(), vec![3.0, 4.0, 5.0]);
        g.start.negated = true;
        assert_eq!(g.drive(2).unwrap(), vec![-3.0, -4.0]);
        assert!(matches!(g.drive(8), Err(Error::RecordExhausted { .. })));
    }

    #[test]
    fn search_loosens_when_targets_are_unreachable() {
        let spec = RecordSpec {
            len: 1 << 14,
            dt: 1e-6,
            bandwidth: 5e3,
        };
        let sigma = 1.0;
        // Far into the slope tail: essentially never matched at 1 %.
        let target = StartTarget {
            value: 0.0,
            value_tol_rel: 1e-2,
            slope: 6.0 * slope_rms(5e3, sigma).unwrap(),
            slope_tol_rel: 1e-2,
            allow_negation: true,
        };
        let policy = SearchPolicy {
            max_regenerations: 2,
            max_doublings: 30,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = search_start(&mut rng, &spec, sigma, &target, 100, false, &policy).unwrap();
        assert!(g.start.loosened);
        assert!(g.start.achieved_slope_tol > target.slope_tol_rel);
        assert!(g.start.achieved_value_tol <= target.value_tol_rel);
    }
}
