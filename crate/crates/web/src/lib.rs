//! wasm-bindgen bindings for the static demo page in `www/`.

use kljn_transient::line::StepComparison;
use kljn_transient::montecarlo::{run_experiment, waveform_trial, ExperimentConfig};
use kljn_transient::protocol::{BitState, PhysicalConfig, ScenarioKind, TrialConfig};
use wasm_bindgen::prelude::*;

/// Noise record length used in the browser; long enough for the defense
/// searches while keeping a trial to a few milliseconds.
pub const DEMO_RECORD_LEN: usize = 1 << 16;
/// Upper bound on trials per estimate so the page stays responsive.
pub const MAX_DEMO_TRIALS: u32 = 2000;

fn scenario(n: u8) -> Result<ScenarioKind, String> {
    ScenarioKind::from_number(n).ok_or_else(|| format!("scenario must be 1 to 4, got {n}"))
}

fn demo_trial_config() -> TrialConfig {
    TrialConfig {
        record_len: DEMO_RECORD_LEN,
        ..TrialConfig::default()
    }
}

#[wasm_bindgen]
#[derive(Debug, Clone, PartialEq)]
pub struct Waveforms {
    time: Vec<f64>,
    v_a: Vec<f64>,
    v_b: Vec<f64>,
    i_a: Vec<f64>,
    i_b: Vec<f64>,
    t_f: f64,
}

#[wasm_bindgen]
impl Waveforms {
    pub fn time(&self) -> Vec<f64> {
        self.time.clone()
    }
    pub fn v_a(&self) -> Vec<f64> {
        self.v_a.clone()
    }
    pub fn v_b(&self) -> Vec<f64> {
        self.v_b.clone()
    }
    pub fn i_a(&self) -> Vec<f64> {
        self.i_a.clone()
    }
    pub fn i_b(&self) -> Vec<f64> {
        self.i_b.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn fly_time(&self) -> f64 {
        self.t_f
    }
}

pub fn waveforms(scenario_number: u8, hl: bool, seed: u64, flights: u32) -> Result<Waveforms, String> {
    let s = scenario(scenario_number)?;
    if flights == 0 || flights > 20 {
        return Err("flights must be 1 to 20".into());
    }
    let cfg = demo_trial_config();
    let t_f = cfg.physical.t_f;
    let state = if hl { BitState::HL } else { BitState::LH };
    let trial = waveform_trial(&cfg, s, state, flights as f64 * t_f, seed).map_err(|e| e.to_string())?;
    let w = trial.waveforms;
    Ok(Waveforms {
        time: (0..w.len()).map(|n| w.time(n)).collect(),
        v_a: w.v_a,
        v_b: w.v_b,
        i_a: w.i_a,
        i_b: w.i_b,
        t_f,
    })
}

/// Cable voltages and currents of one bit exchange over `flights` fly times.
#[wasm_bindgen]
pub fn bep_waveforms(scenario: u8, hl: bool, seed: u64, flights: u32) -> Result<Waveforms, JsError> {
    waveforms(scenario, hl, seed, flights).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
#[derive(Debug, Clone, PartialEq)]
pub struct StepResponse {
    time: Vec<f64>,
    simulated_src: Vec<f64>,
    simulated_load: Vec<f64>,
    oracle_src: Vec<f64>,
    oracle_load: Vec<f64>,
    max_error: f64,
}

#[wasm_bindgen]
impl StepResponse {
    pub fn time(&self) -> Vec<f64> {
        self.time.clone()
    }
    pub fn simulated_src(&self) -> Vec<f64> {
        self.simulated_src.clone()
    }
    pub fn simulated_load(&self) -> Vec<f64> {
        self.simulated_load.clone()
    }
    pub fn oracle_src(&self) -> Vec<f64> {
        self.oracle_src.clone()
    }
    pub fn oracle_load(&self) -> Vec<f64> {
        self.oracle_load.clone()
    }
    /// Largest relative deviation between simulation and bounce diagram.
    #[wasm_bindgen(getter)]
    pub fn max_error(&self) -> f64 {
        self.max_error
    }
}

pub fn step(r_src: f64, r_load: f64, flights: u32) -> Result<StepResponse, String> {
    if flights == 0 || flights > 200 {
        return Err("flights must be 1 to 200".into());
    }
    let p = PhysicalConfig::default();
    let n = flights as usize * p.dt_divisor as usize;
    let cmp = StepComparison::run(p.z0, p.t_f, p.dt(), r_src, r_load, n).map_err(|e| e.to_string())?;
    let max_error = cmp.max_relative_error();
    let [oracle_src, oracle_load, _, _] = cmp.oracle;
    let w = cmp.simulated;
    Ok(StepResponse {
        time: (0..n).map(|k| w.time(k)).collect(),
        simulated_src: w.v_a,
        simulated_load: w.v_b,
        oracle_src,
        oracle_load,
        max_error,
    })
}

/// Unit step behind `r_src` into a line terminated by `r_load`, next to
/// the bounce-diagram prediction.
#[wasm_bindgen]
pub fn step_response(r_src: f64, r_load: f64, flights: u32) -> Result<StepResponse, JsError> {
    step(r_src, r_load, flights).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeEstimate {
    pub p_ev: f64,
    pub se_v: f64,
    pub p_ei: f64,
    pub se_i: f64,
    pub trials: u32,
}

pub fn estimate(scenario_number: u8, trials: u32, seed: u64, flights: u32) -> Result<PeEstimate, String> {
    let s = scenario(scenario_number)?;
    if trials == 0 || trials > MAX_DEMO_TRIALS {
        return Err(format!("trials must be 1 to {MAX_DEMO_TRIALS}"));
    }
    if flights == 0 || flights > 20 {
        return Err("flights must be 1 to 20".into());
    }
    let mut cfg = ExperimentConfig {
        trial: demo_trial_config(),
        n_trials: trials as usize,
        n_cal: 100,
        master_seed: seed,
        ..ExperimentConfig::default()
    };
    cfg.taus = vec![flights as f64 * cfg.trial.physical.t_f];
    let summary = run_experiment(&cfg, s).map_err(|e| e.to_string())?;
    let row = summary.rows[0];
    Ok(PeEstimate {
        p_ev: row.p_ev,
        se_v: row.se_v,
        p_ei: row.p_ei,
        se_i: row.se_i,
        trials: row.n as u32,
    })
}

/// Eve's success probability at `tau = flights * t_f`.
#[wasm_bindgen]
pub fn estimate_pe(scenario: u8, trials: u32, seed: u64, flights: u32) -> Result<PeEstimate, JsError> {
    estimate(scenario, trials, seed, flights).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn waveforms_have_expected_length() {
        let w = waveforms(1, true, 3, 2).unwrap();
        assert_eq!(w.v_a().len(), 200);
        assert!((w.time()[100] - w.fly_time()).abs() < 1e-18);
        assert!(waveforms(5, true, 3, 2).is_err());
        assert!(waveforms(1, true, 3, 0).is_err());
    }

    #[test]
    fn mirrored_state_swaps_roles() {
        let hl = waveforms(4, true, 8, 3).unwrap();
        let lh = waveforms(4, false, 8, 3).unwrap();
        assert_ne!(hl.v_a, lh.v_a);
    }

    #[test]
    fn step_matches_oracle() {
        let s = step(11e3, 2e3, 30).unwrap();
        assert!(s.max_error() < 1e-9);
        assert_eq!(s.simulated_load()[99], 0.0);
        assert!(s.simulated_load()[100] > 0.0);
        assert!(step(0.0, 2e3, 3).is_err());
    }

    #[test]
    fn estimate_is_deterministic() {
        let a = estimate(1, 40, 2, 1).unwrap();
        let b = estimate(1, 40, 2, 1).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.trials, 40);
        assert!((0.0..=1.0).contains(&a.p_ev));
        assert!(estimate(1, 0, 2, 1).is_err());
    }
}
