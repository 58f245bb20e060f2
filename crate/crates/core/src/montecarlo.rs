//! Seeded Monte Carlo harness.
//!
//! Every random draw comes from a ChaCha stream selected by
//! `(master seed, purpose, trial index, party)`, so results do not depend on
//! the number of worker threads or on scheduling. Trials are reduced in trial
//! index order.

use std::fmt;
use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::attack::{
    decide_with_coin, AttackStat, Channel, DecisionSign, MIN_CALIBRATION_TRIALS,
};
use crate::error::{Error, Result};
use crate::line::{delay_in_steps, network_mean_squares, reflection_coefficient};
use crate::protocol::{
    prepare_generators, resultant_resistances, run_bep_trial, BepTrial, steady_state_current_level,
    steady_state_levels, steps_for, BitState, ScenarioKind, TrialConfig,
};
use crate::line::run_transient;

/// What a random stream is used for. Streams of different purposes never overlap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Purpose {
    Calibration = 1,
    Evaluation = 2,
    SteadyState = 3,
    Waveform = 4,
}

/// Who draws from a stream within one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Party {
    Alice = 0,
    Bob = 1,
    /// Random HL/LH arrangement.
    State = 2,
    /// Eve's tie-breaking coins.
    Coin = 3,
}

const TRIAL_BITS: u32 = 56;

/// Independent RNG for `(master_seed, purpose, trial, party)`.
pub fn stream_rng(master_seed: u64, purpose: Purpose, trial: u64, party: Party) -> ChaCha8Rng {
    debug_assert!(trial < 1 << TRIAL_BITS);
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    let stream =
        ((purpose as u64) << 60) | ((party as u64) << TRIAL_BITS) | (trial & ((1 << TRIAL_BITS) - 1));
    rng.set_stream(stream);
    rng
}

/// Normal-approximation standard error `sqrt(p (1 - p) / n)`.
pub fn standard_error(p: f64, n: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid("p", format!("{p} is not a probability")));
    }
    if n == 0 {
        return Err(Error::invalid("n", "must be >= 1"));
    }
    Ok((p * (1.0 - p) / n as f64).sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub trial: TrialConfig,
    /// Observation times in seconds, each a multiple of dt.
    pub taus: Vec<f64>,
    pub n_trials: usize,
    /// Labeled HL trials used to calibrate Eve's decision signs.
    pub n_cal: usize,
    pub master_seed: u64,
    /// Worker threads; results do not depend on it.
    pub jobs: usize,
    /// Draw HL or LH at random per evaluation trial instead of fixing HL.
    pub random_state: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let trial = TrialConfig::default();
        let t_f = trial.physical.t_f;
        Self {
            trial,
            taus: (1..=4).map(|m| m as f64 * t_f).collect(),
            n_trials: 1000,
            n_cal: 200,
            master_seed: 1,
            jobs: 1,
            random_state: false,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        self.trial.validate()?;
        if self.n_trials == 0 {
            return Err(Error::invalid("n_trials", "must be >= 1"));
        }
        if self.n_cal < MIN_CALIBRATION_TRIALS {
            return Err(Error::invalid(
                "n_cal",
                format!("must be >= {MIN_CALIBRATION_TRIALS}, got {}", self.n_cal),
            ));
        }
        if self.taus.is_empty() {
            return Err(Error::invalid("taus", "at least one observation time is required"));
        }
        let dt = self.trial.physical.dt();
        for &tau in &self.taus {
            crate::attack::window_samples(tau, dt)?;
        }
        if self.jobs == 0 {
            return Err(Error::invalid("jobs", "must be >= 1"));
        }
        Ok(())
    }

    fn duration(&self) -> f64 {
        self.taus.iter().copied().fold(0.0, f64::max)
    }
}

/// Runs `f(0..n)` on `jobs` workers and returns results in index order.
pub(crate) fn map_trials<T, F>(n: usize, jobs: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if jobs > 1 {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::invalid("jobs", e.to_string()))?;
        return pool.install(|| (0..n as u64).into_par_iter().map(&f).collect());
    }
    let _ = jobs;
    (0..n as u64).map(f).collect()
}

fn trial_rngs(master_seed: u64, purpose: Purpose, trial: u64) -> (ChaCha8Rng, ChaCha8Rng) {
    (
        stream_rng(master_seed, purpose, trial, Party::Alice),
        stream_rng(master_seed, purpose, trial, Party::Bob),
    )
}

/// Calibrates one [`DecisionSign`] per observation time from `n_cal`
/// labeled HL trials. The same rehearsal trials serve every observation time.
pub fn calibrate_signs(cfg: &ExperimentConfig, scenario: ScenarioKind) -> Result<Vec<DecisionSign>> {
    cfg.validate()?;
    let duration = cfg.duration();
    let stats = map_trials(cfg.n_cal, cfg.jobs, |k| {
        let (mut a, mut b) = trial_rngs(cfg.master_seed, Purpose::Calibration, k);
        let trial = run_bep_trial(scenario, BitState::HL, &cfg.trial, duration, &mut a, &mut b)?;
        cfg.taus
            .iter()
            .map(|&tau| AttackStat::measure(&trial.waveforms, tau))
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(cfg
        .taus
        .iter()
        .enumerate()
        .map(|(j, &tau)| {
            let u: Vec<f64> = stats.iter().map(|s| s[j].rho_u).collect();
            let i: Vec<f64> = stats.iter().map(|s| s[j].rho_i).collect();
            DecisionSign::from_hl_samples(scenario, tau, &u, &i)
        })
        .collect())
}

/// Per-trial outcome of an evaluation run.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub index: u64,
    pub state: BitState,
    pub stats: Vec<AttackStat>,
    pub guess_v: Vec<BitState>,
    pub guess_i: Vec<BitState>,
    pub loosened: bool,
}

/// One row of an experiment summary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryRow {
    pub tau: f64,
    pub p_ev: f64,
    pub se_v: f64,
    pub p_ei: f64,
    pub se_i: f64,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSummary {
    pub scenario: ScenarioKind,
    pub master_seed: u64,
    pub n_trials: usize,
    pub rows: Vec<SummaryRow>,
    pub calibration: Vec<DecisionSign>,
    /// Trials whose defense search widened its tolerances.
    pub loosened_trials: usize,
    /// Trials dropped because no start point could be found at all.
    pub failed_trials: usize,
}

impl ExperimentSummary {
    pub fn loosened_fraction(&self) -> f64 {
        let done = self.n_trials - self.failed_trials;
        if done == 0 {
            0.0
        } else {
            self.loosened_trials as f64 / done as f64
        }
    }

    /// CSV with header `scenario,tau_s,p_ev,se_v,p_ei,se_i,n,loosened_fraction`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "scenario,tau_s,p_ev,se_v,p_ei,se_i,n,loosened_fraction")?;
        for row in &self.rows {
            writeln!(
                out,
                "{},{:.6e},{:.4},{:.4},{:.4},{:.4},{},{:.4}",
                self.scenario.number(),
                row.tau,
                row.p_ev,
                row.se_v,
                row.p_ei,
                row.se_i,
                row.n,
                self.loosened_fraction()
            )?;
        }
        Ok(())
    }
}

/// Full result of [`run_experiment_detailed`].
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRun {
    pub summary: ExperimentSummary,
    pub trials: Vec<TrialRecord>,
}

/// Calibrates, then evaluates `n_trials` independent trials of `scenario`.
pub fn run_experiment(cfg: &ExperimentConfig, scenario: ScenarioKind) -> Result<ExperimentSummary> {
    Ok(run_experiment_detailed(cfg, scenario)?.summary)
}

pub fn run_experiment_detailed(cfg: &ExperimentConfig, scenario: ScenarioKind) -> Result<ExperimentRun> {
    let calibration = calibrate_signs(cfg, scenario)?;
    let duration = cfg.duration();

    let outcomes = map_trials(cfg.n_trials, cfg.jobs, |k| {
        let state = if cfg.random_state {
            let mut s = stream_rng(cfg.master_seed, Purpose::Evaluation, k, Party::State);
            if s.random::<bool>() {
                BitState::HL
            } else {
                BitState::LH
            }
        } else {
            BitState::HL
        };
        let (mut a, mut b) = trial_rngs(cfg.master_seed, Purpose::Evaluation, k);
        let trial = match run_bep_trial(scenario, state, &cfg.trial, duration, &mut a, &mut b) {
            Ok(t) => t,
            Err(Error::StartNotFound) => return Ok(None),
            Err(e) => return Err(e),
        };
        let mut coins = stream_rng(cfg.master_seed, Purpose::Evaluation, k, Party::Coin);
        let mut record = TrialRecord {
            index: k,
            state,
            stats: Vec::with_capacity(cfg.taus.len()),
            guess_v: Vec::with_capacity(cfg.taus.len()),
            guess_i: Vec::with_capacity(cfg.taus.len()),
            loosened: trial.loosened(),
        };
        for (&tau, sign) in cfg.taus.iter().zip(&calibration) {
            let stat = AttackStat::measure(&trial.waveforms, tau)?;
            // One coin per observation time, shared by both channels.
            let coin = coins.random::<bool>();
            record.guess_v.push(decide_with_coin(&stat, sign, Channel::Voltage, coin));
            record.guess_i.push(decide_with_coin(&stat, sign, Channel::Current, coin));
            record.stats.push(stat);
        }
        Ok(Some(record))
    })?;

    let trials: Vec<TrialRecord> = outcomes.iter().flatten().cloned().collect();
    let failed_trials = cfg.n_trials - trials.len();
    let n = trials.len();
    let rows = cfg
        .taus
        .iter()
        .enumerate()
        .map(|(j, &tau)| -> Result<SummaryRow> {
            let hits_v = trials.iter().filter(|t| t.guess_v[j] == t.state).count();
            let hits_i = trials.iter().filter(|t| t.guess_i[j] == t.state).count();
            let (p_ev, p_ei) = if n == 0 {
                (0.0, 0.0)
            } else {
                (hits_v as f64 / n as f64, hits_i as f64 / n as f64)
            };
            Ok(SummaryRow {
                tau,
                p_ev,
                se_v: if n == 0 { 0.0 } else { standard_error(p_ev, n)? },
                p_ei,
                se_i: if n == 0 { 0.0 } else { standard_error(p_ei, n)? },
                n,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(ExperimentRun {
        summary: ExperimentSummary {
            scenario,
            master_seed: cfg.master_seed,
            n_trials: cfg.n_trials,
            rows,
            calibration,
            loosened_trials: trials.iter().filter(|t| t.loosened).count(),
            failed_trials,
        },
        trials,
    })
}

/// A single reproducible transient for plotting, drawn from the waveform streams.
pub fn waveform_trial(
    cfg: &TrialConfig,
    scenario: ScenarioKind,
    state: BitState,
    duration: f64,
    master_seed: u64,
) -> Result<BepTrial> {
    let (mut a, mut b) = trial_rngs(master_seed, Purpose::Waveform, 0);
    run_bep_trial(scenario, state, cfg, duration, &mut a, &mut b)
}

/// Batch-means estimate of the mean of a correlated series and its
/// standard error.
pub fn batch_mean(xs: &[f64], batches: usize) -> (f64, f64) {
    let batches = batches.clamp(2, xs.len().max(2));
    let size = xs.len() / batches;
    if size == 0 {
        let mean = xs.iter().sum::<f64>() / xs.len().max(1) as f64;
        return (mean, f64::INFINITY);
    }
    let means: Vec<f64> = xs
        .chunks_exact(size)
        .take(batches)
        .map(|c| c.iter().sum::<f64>() / size as f64)
        .collect();
    let m = means.iter().sum::<f64>() / batches as f64;
    let var = means.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (batches - 1) as f64;
    (m, (var / batches as f64).sqrt())
}

/// A measured quantity with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub se: f64,
}

/// One pass/fail line of the steady-state report.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub measured: f64,
    pub reference: f64,
    pub criterion: String,
    pub passed: bool,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {}: measured {:.6e}, reference {:.6e} ({})",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.measured,
            self.reference,
            self.criterion
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SteadyStateReport {
    pub duration: f64,
    pub settle_time: f64,
    /// Wire voltage and current mean squares at Alice's end, HL arrangement.
    pub hl_voltage_ms: Estimate,
    pub hl_current_ms: Estimate,
    /// Same quantities with the resistors swapped (LH).
    pub lh_voltage_ms: Estimate,
    pub lh_current_ms: Estimate,
    /// Time average of `v i` at Alice's end, HL arrangement.
    pub hl_power: Estimate,
    /// `4 k T R_p B` and `4 k T B / R_s`.
    pub lumped_voltage_ms: f64,
    pub lumped_current_ms: f64,
    /// Exact frequency-domain prediction for the lossless line.
    pub network_voltage_ms: f64,
    pub network_current_ms: f64,
    pub checks: Vec<Check>,
}

impl SteadyStateReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for SteadyStateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "steady state over {:.4} s (after {:.3e} s settling)",
            self.duration, self.settle_time
        )?;
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Relative tolerance of the lumped-formula comparisons.
pub const LUMPED_TOLERANCE: f64 = 0.02;
/// Statistical checks pass within this many standard errors.
pub const SE_BOUND: f64 = 3.0;
const STEADY_BATCHES: usize = 50;

/// Time for the line's reflections to decay by `e`, `2 t_f / -ln|Γ_H Γ_L|`.
pub fn relaxation_time(cfg: &TrialConfig) -> Result<f64> {
    let p = &cfg.physical;
    let g = (reflection_coefficient(p.r_h, p.z0)? * reflection_coefficient(p.r_l, p.z0)?).abs();
    if g == 0.0 {
        return Ok(2.0 * p.t_f);
    }
    Ok(2.0 * p.t_f / -g.ln())
}

/// Long HL and LH runs compared against the steady-state identities.
///
/// The first ten relaxation times of each run are discarded. Standard errors
/// come from batch means.
pub fn validate_steady_state(cfg: &TrialConfig, duration: f64, seed: u64) -> Result<SteadyStateReport> {
    cfg.validate()?;
    let p = cfg.physical;
    let minimum = 1000.0 / p.bandwidth;
    if !(duration >= minimum) {
        return Err(Error::invalid(
            "duration",
            format!("{duration} s is below the minimum steady-state duration 1000/B = {minimum} s"),
        ));
    }
    let dt = p.dt();
    delay_in_steps(p.t_f, dt)?;
    let settle_time = 10.0 * relaxation_time(cfg)?;
    let settle = steps_for(settle_time, dt)?;
    let kept = steps_for(duration, dt)?;
    let total = settle + kept;
    let long = TrialConfig {
        record_len: cfg.record_len.max((total + 2).next_power_of_two()),
        ..*cfg
    };

    let run = |state: BitState, trial: u64| -> Result<crate::line::TrialWaveforms> {
        let (mut a, mut b) = trial_rngs(seed, Purpose::SteadyState, trial);
        let (ga, gb) =
            prepare_generators(ScenarioKind::NoDefense, state, &long, total, &mut a, &mut b)?;
        run_transient(
            &p,
            &ga,
            p.resistance(state.alice()),
            &gb,
            p.resistance(state.bob()),
            total,
        )
    };
    let hl = run(BitState::HL, 0)?;
    let lh = run(BitState::LH, 1)?;

    let ms = |xs: &[f64]| {
        let sq: Vec<f64> = xs[settle..].iter().map(|x| x * x).collect();
        let (value, se) = batch_mean(&sq, STEADY_BATCHES);
        Estimate { value, se }
    };
    let hl_voltage_ms = ms(&hl.v_a);
    let hl_current_ms = ms(&hl.i_a);
    let lh_voltage_ms = ms(&lh.v_a);
    let lh_current_ms = ms(&lh.i_a);
    let power: Vec<f64> = hl.v_a[settle..]
        .iter()
        .zip(&hl.i_a[settle..])
        .map(|(v, i)| v * i)
        .collect();
    let (pw, pw_se) = batch_mean(&power, STEADY_BATCHES);
    let hl_power = Estimate {
        value: pw,
        se: pw_se,
    };

    let lumped_voltage_ms = steady_state_levels(&p)?.hl;
    let lumped_current_ms = steady_state_current_level(&p)?;
    let sigma_a = long.generator_sigma(BitState::HL.alice())?;
    let sigma_b = long.generator_sigma(BitState::HL.bob())?;
    let network = network_mean_squares(p.z0, p.t_f, p.r_h, p.r_l, sigma_a, sigma_b, p.bandwidth, 20_000);

    let relative = |name: &'static str, m: Estimate, reference: f64| Check {
        name,
        measured: m.value,
        reference,
        criterion: format!("within {:.0}% relative", LUMPED_TOLERANCE * 100.0),
        passed: ((m.value - reference) / reference).abs() <= LUMPED_TOLERANCE,
    };
    let statistical = |name: &'static str, measured: f64, reference: f64, se: f64| Check {
        name,
        measured,
        reference,
        criterion: format!("within {SE_BOUND} s.e. = {:.3e}", SE_BOUND * se),
        passed: (measured - reference).abs() <= SE_BOUND * se,
    };
    let combined = |a: Estimate, b: Estimate| (a.se * a.se + b.se * b.se).sqrt();

    let checks = vec![
        relative("voltage_ms_vs_4kTRpB", hl_voltage_ms, lumped_voltage_ms),
        relative("current_ms_vs_4kTB_over_Rs", hl_current_ms, lumped_current_ms),
        statistical(
            "voltage_ms_vs_line_network",
            hl_voltage_ms.value,
            network.v_a,
            hl_voltage_ms.se,
        ),
        statistical(
            "current_ms_vs_line_network",
            hl_current_ms.value,
            network.i_a,
            hl_current_ms.se,
        ),
        statistical(
            "hl_minus_lh_voltage_ms",
            hl_voltage_ms.value - lh_voltage_ms.value,
            0.0,
            combined(hl_voltage_ms, lh_voltage_ms),
        ),
        statistical(
            "hl_minus_lh_current_ms",
            hl_current_ms.value - lh_current_ms.value,
            0.0,
            combined(hl_current_ms, lh_current_ms),
        ),
        statistical("mean_power_flow", hl_power.value, 0.0, hl_power.se),
    ];

    let _ = resultant_resistances(p.r_h, p.r_l)?;
    Ok(SteadyStateReport {
        duration,
        settle_time,
        hl_voltage_ms,
        hl_current_ms,
        lh_voltage_ms,
        lh_current_ms,
        hl_power,
        lumped_voltage_ms,
        lumped_current_ms,
        network_voltage_ms: network.v_a,
        network_current_ms: network.i_a,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_error_values() {
        assert!((standard_error(0.5, 1000).unwrap() - 0.0158).abs() < 1e-4);
        assert_eq!(standard_error(0.0, 17).unwrap(), 0.0);
        assert_eq!(standard_error(1.0, 17).unwrap(), 0.0);
        assert!(standard_error(1.5, 10).is_err());
        assert!(standard_error(0.5, 0).is_err());
    }

    #[test]
    fn streams_are_distinct_and_reproducible() {
        let mut a = stream_rng(7, Purpose::Evaluation, 3, Party::Alice);
        let mut a2 = stream_rng(7, Purpose::Evaluation, 3, Party::Alice);
        let mut b = stream_rng(7, Purpose::Evaluation, 3, Party::Bob);
        let mut c = stream_rng(7, Purpose::Calibration, 3, Party::Alice);
        let x: u64 = a.random();
        assert_eq!(x, a2.random::<u64>());
        assert_ne!(x, b.random::<u64>());
        assert_ne!(x, c.random::<u64>());
    }

    #[test]
    fn batch_mean_of_iid_data() {
        let xs: Vec<f64> = (0..10_000).map(|k| if k % 2 == 0 { 1.0 } else { 3.0 }).collect();
        let (m, se) = batch_mean(&xs, 50);
        assert_eq!(m, 2.0);
        assert_eq!(se, 0.0);
    }

    #[test]
    fn config_validation() {
        let mut cfg = ExperimentConfig::default();
        cfg.validate().unwrap();
        cfg.n_cal = 10;
        assert!(cfg.validate().is_err());
        cfg.n_cal = 50;
        cfg.taus = vec![1.05e-7];
        assert!(cfg.validate().is_err());
        cfg.taus.clear();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn steady_state_rejects_short_duration() {
        let err = validate_steady_state(&TrialConfig::default(), 0.1, 1).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("0.2"), "{msg}");
    }

    #[test]
    fn csv_layout() {
        let s = ExperimentSummary {
            scenario: ScenarioKind::NoDefense,
            master_seed: 1,
            n_trials: 1000,
            rows: vec![SummaryRow {
                tau: 1e-5,
                p_ev: 0.89,
                se_v: 0.0099,
                p_ei: 0.89,
                se_i: 0.0099,
                n: 1000,
            }],
            calibration: vec![],
            loosened_trials: 0,
            failed_trials: 0,
        };
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "scenario,tau_s,p_ev,se_v,p_ei,se_i,n,loosened_fraction\n\
             1,1.000000e-5,0.8900,0.0099,0.8900,0.0099,1000,0.0000\n"
        );
    }
}
