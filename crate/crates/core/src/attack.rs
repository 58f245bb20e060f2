//! Eve's transient attack.
//!
//! Eve compares windowed mean squares of the cable voltage (or current) at the
//! two ends. Which sign of the difference points to HL depends on the
//! parameter regime, so the mapping is calibrated on labeled HL rehearsal
//! trials before any evaluation.

use std::fmt;

use rand::Rng;

use crate::error::{ensure_positive, Error, Result};
use crate::line::TrialWaveforms;
use crate::montecarlo::{calibrate_signs, ExperimentConfig};
use crate::protocol::{BitState, ScenarioKind};

/// Calibration sets with fewer labeled trials are rejected.
pub const MIN_CALIBRATION_TRIALS: usize = 50;

/// A sign is reported only when the calibration mean exceeds this many
/// standard errors.
pub const SIGN_THRESHOLD_SE: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Channel {
    Voltage,
    Current,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Positive,
    Negative,
    Uninformative,
}

impl Sign {
    fn factor(self) -> Option<f64> {
        match self {
            Sign::Positive => Some(1.0),
            Sign::Negative => Some(-1.0),
            Sign::Uninformative => None,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Positive => "+",
            Sign::Negative => "-",
            Sign::Uninformative => "0",
        })
    }
}

/// Number of samples in the window `[0, tau)`; `tau` must sit on the grid.
pub fn window_samples(tau: f64, dt: f64) -> Result<usize> {
    ensure_positive("tau", tau)?;
    ensure_positive("dt", dt)?;
    let ratio = tau / dt;
    let n = ratio.round();
    if n < 1.0 || (ratio - n).abs() > 1e-6 {
        return Err(Error::invalid("tau", format!("{tau} s is not a positive multiple of dt = {dt} s")));
    }
    Ok(n as usize)
}

/// Mean of squared samples over the half-open window `[0, tau)`.
pub fn mean_square_window(series: &[f64], tau: f64, dt: f64) -> Result<f64> {
    let window = window_samples(tau, dt)?;
    if window > series.len() {
        return Err(Error::WindowTooLong {
            window,
            len: series.len(),
        });
    }
    Ok(series[..window].iter().map(|x| x * x).sum::<f64>() / window as f64)
}

/// `<U_a^2> - <U_b^2>` over `[0, tau)`.
pub fn rho_u(w: &TrialWaveforms, tau: f64) -> Result<f64> {
    Ok(mean_square_window(&w.v_a, tau, w.dt)? - mean_square_window(&w.v_b, tau, w.dt)?)
}

/// `<I_a^2> - <I_b^2>` over `[0, tau)`.
pub fn rho_i(w: &TrialWaveforms, tau: f64) -> Result<f64> {
    Ok(mean_square_window(&w.i_a, tau, w.dt)? - mean_square_window(&w.i_b, tau, w.dt)?)
}

/// Eve's statistics for one trial and observation time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttackStat {
    pub rho_u: f64,
    pub rho_i: f64,
    pub tau: f64,
    pub window_samples: usize,
}

impl AttackStat {
    pub fn measure(w: &TrialWaveforms, tau: f64) -> Result<Self> {
        Ok(Self {
            rho_u: rho_u(w, tau)?,
            rho_i: rho_i(w, tau)?,
            tau,
            window_samples: window_samples(tau, w.dt)?,
        })
    }

    pub fn rho(&self, channel: Channel) -> f64 {
        match channel {
            Channel::Voltage => self.rho_u,
            Channel::Current => self.rho_i,
        }
    }
}

/// Calibrated mapping from the sign of rho to Eve's guess.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecisionSign {
    pub scenario: ScenarioKind,
    pub tau: f64,
    pub sign_u: Sign,
    pub sign_i: Sign,
    pub mean_u: f64,
    pub se_u: f64,
    pub mean_i: f64,
    pub se_i: f64,
    pub n_cal: usize,
}

impl DecisionSign {
    /// Builds the mapping from rho values measured on labeled HL trials.
    pub fn from_hl_samples(scenario: ScenarioKind, tau: f64, rho_u: &[f64], rho_i: &[f64]) -> Self {
        let (sign_u, mean_u, se_u) = sign_from_samples(rho_u);
        let (sign_i, mean_i, se_i) = sign_from_samples(rho_i);
        Self {
            scenario,
            tau,
            sign_u,
            sign_i,
            mean_u,
            se_u,
            mean_i,
            se_i,
            n_cal: rho_u.len(),
        }
    }

    pub fn sign(&self, channel: Channel) -> Sign {
        match channel {
            Channel::Voltage => self.sign_u,
            Channel::Current => self.sign_i,
        }
    }
}

/// Sign of the sample mean, or uninformative when it is within
/// [`SIGN_THRESHOLD_SE`] standard errors of zero.
pub fn sign_from_samples(xs: &[f64]) -> (Sign, f64, f64) {
    let n = xs.len();
    if n < 2 {
        return (Sign::Uninformative, xs.first().copied().unwrap_or(0.0), f64::INFINITY);
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64;
    let se = (var / n as f64).sqrt();
    let sign = if !(mean.abs() >= SIGN_THRESHOLD_SE * se) || mean == 0.0 {
        Sign::Uninformative
    } else if mean > 0.0 {
        Sign::Positive
    } else {
        Sign::Negative
    };
    (sign, mean, se)
}

/// Eve's guess given a pre-drawn fair coin, used on ties and when the
/// calibrated sign is uninformative.
pub fn decide_with_coin(stat: &AttackStat, sign: &DecisionSign, channel: Channel, coin: bool) -> BitState {
    let rho = stat.rho(channel);
    match sign.sign(channel).factor() {
        Some(s) if rho != 0.0 => {
            if s * rho > 0.0 {
                BitState::HL
            } else {
                BitState::LH
            }
        }
        _ => {
            if coin {
                BitState::HL
            } else {
                BitState::LH
            }
        }
    }
}

/// Eve's guess: HL iff `sign * rho > 0`, otherwise LH; ties and
/// uninformative signs fall back to a fair coin.
pub fn eve_decide<R: Rng + ?Sized>(
    stat: &AttackStat,
    sign: &DecisionSign,
    channel: Channel,
    rng: &mut R,
) -> BitState {
    decide_with_coin(stat, sign, channel, rng.random::<bool>())
}

/// Calibrates the decision sign of `scenario` at one observation time.
///
/// Runs `n_cal` labeled HL trials on calibration streams of `master_seed`,
/// which are disjoint from the evaluation streams.
pub fn calibrate_sign(
    scenario: ScenarioKind,
    tau: f64,
    config: &ExperimentConfig,
    n_cal: usize,
    master_seed: u64,
) -> Result<DecisionSign> {
    let cfg = ExperimentConfig {
        taus: vec![tau],
        n_cal,
        master_seed,
        ..config.clone()
    };
    Ok(calibrate_signs(&cfg, scenario)?.remove(0))
}
