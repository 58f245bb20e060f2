//! Flat `key = value` run configuration.
//!
//! One assignment per line, `#` starts a comment, blank lines are ignored.
//! Every key is optional; omitted keys keep their defaults.

use std::fmt::{self, Write as _};
use std::path::PathBuf;

use kljn_transient::montecarlo::ExperimentConfig;
use kljn_transient::protocol::{GeneratorRms, ScenarioKind, TrialConfig};
use kljn_transient::Error as CoreError;

/// Default steady-state validation run length in seconds.
pub const DEFAULT_STEADY_DURATION: f64 = 0.2;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("configuration error in `{key}`: {reason}")]
pub struct ConfigError {
    pub key: String,
    pub reason: String,
}

impl ConfigError {
    pub fn new(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Self {
            key: key.into(),
            reason: reason.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub trial: TrialConfig,
    pub scenarios: Vec<ScenarioKind>,
    pub tau_multipliers: Vec<u32>,
    pub n_trials: usize,
    pub n_cal: usize,
    pub master_seed: u64,
    pub jobs: usize,
    pub output_dir: PathBuf,
    pub random_state: bool,
    pub steady_duration: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let exp = ExperimentConfig::default();
        Self {
            trial: exp.trial,
            scenarios: ScenarioKind::ALL.to_vec(),
            tau_multipliers: vec![1, 2, 3, 4],
            n_trials: exp.n_trials,
            n_cal: exp.n_cal,
            master_seed: exp.master_seed,
            jobs: 1,
            output_dir: PathBuf::from("out"),
            random_state: exp.random_state,
            steady_duration: DEFAULT_STEADY_DURATION,
        }
    }
}

pub const KEYS: &[&str] = &[
    "r_h",
    "r_l",
    "z0",
    "temperature",
    "bandwidth",
    "t_f",
    "dt_divisor",
    "scenarios",
    "tau_multipliers",
    "n_trials",
    "n_cal",
    "master_seed",
    "jobs",
    "output_dir",
    "record_len",
    "zero_value_tol",
    "slope_tol",
    "ratio_value_tol",
    "ratio_value_fraction",
    "random_state",
    "generator_rms",
    "steady_duration",
];

fn number<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
    value
        .parse()
        .map_err(|_| ConfigError::new(key, format!("cannot parse `{value}`")))
}

fn list<T: std::str::FromStr>(key: &str, value: &str) -> Result<Vec<T>, ConfigError> {
    value
        .split(',')
        .map(|v| number(key, v.trim()))
        .collect()
}

fn scenarios(key: &str, value: &str) -> Result<Vec<ScenarioKind>, ConfigError> {
    let mut out: Vec<ScenarioKind> = Vec::new();
    for n in list::<u8>(key, value)? {
        let s = ScenarioKind::from_number(n)
            .ok_or_else(|| ConfigError::new(key, format!("no scenario {n}; expected 1 to 4")))?;
        if !out.contains(&s) {
            out.push(s);
        }
    }
    Ok(out)
}

impl RunConfig {
    /// Applies one `key = value` assignment.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let p = &mut self.trial.physical;
        let tol = &mut self.trial.tolerances;
        match key {
            "r_h" => p.r_h = number(key, value)?,
            "r_l" => p.r_l = number(key, value)?,
            "z0" => p.z0 = number(key, value)?,
            "temperature" => p.temperature = number(key, value)?,
            "bandwidth" => p.bandwidth = number(key, value)?,
            "t_f" => p.t_f = number(key, value)?,
            "dt_divisor" => p.dt_divisor = number(key, value)?,
            "scenarios" => self.scenarios = scenarios(key, value)?,
            "tau_multipliers" => self.tau_multipliers = list(key, value)?,
            "n_trials" => self.n_trials = number(key, value)?,
            "n_cal" => self.n_cal = number(key, value)?,
            "master_seed" => self.master_seed = number(key, value)?,
            "jobs" => self.jobs = number(key, value)?,
            "output_dir" => self.output_dir = PathBuf::from(value),
            "record_len" => self.trial.record_len = number(key, value)?,
            "zero_value_tol" => tol.zero_value_tol = number(key, value)?,
            "slope_tol" => tol.slope_tol = number(key, value)?,
            "ratio_value_tol" => tol.ratio_value_tol = number(key, value)?,
            "ratio_value_fraction" => tol.ratio_value_fraction = number(key, value)?,
            "random_state" => self.random_state = number(key, value)?,
            "generator_rms" => {
                self.trial.generator_rms = match value {
                    "johnson" => GeneratorRms::Johnson,
                    "equal" => GeneratorRms::Equal,
                    _ => {
                        return Err(ConfigError::new(
                            key,
                            format!("`{value}` is not one of johnson, equal"),
                        ))
                    }
                }
            }
            "steady_duration" => self.steady_duration = number(key, value)?,
            _ => return Err(ConfigError::new(key, "unknown key")),
        }
        Ok(())
    }

    pub fn experiment(&self) -> ExperimentConfig {
        let t_f = self.trial.physical.t_f;
        ExperimentConfig {
            trial: self.trial,
            taus: self.tau_multipliers.iter().map(|&m| m as f64 * t_f).collect(),
            n_trials: self.n_trials,
            n_cal: self.n_cal,
            master_seed: self.master_seed,
            jobs: self.jobs,
            random_state: self.random_state,
        }
    }

    /// Checks every invariant, naming the offending key.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.scenarios.is_empty() {
            return Err(ConfigError::new("scenarios", "at least one scenario is required"));
        }
        if self.tau_multipliers.is_empty() || self.tau_multipliers.contains(&0) {
            return Err(ConfigError::new("tau_multipliers", "must be positive integers"));
        }
        if self.steady_duration.is_nan() || self.steady_duration <= 0.0 {
            return Err(ConfigError::new("steady_duration", "must be positive"));
        }
        self.experiment().validate().map_err(core_error)
    }

    /// The effective configuration in the same format [`parse_config`] reads.
    pub fn to_text(&self) -> String {
        let p = &self.trial.physical;
        let tol = &self.trial.tolerances;
        let join = |xs: Vec<String>| xs.join(",");
        let mut s = String::new();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        put("r_h", format!("{:?}", p.r_h));
        put("r_l", format!("{:?}", p.r_l));
        put("z0", format!("{:?}", p.z0));
        put("temperature", format!("{:?}", p.temperature));
        put("bandwidth", format!("{:?}", p.bandwidth));
        put("t_f", format!("{:?}", p.t_f));
        put("dt_divisor", p.dt_divisor.to_string());
        put("scenarios", join(self.scenarios.iter().map(|s| s.number().to_string()).collect()));
        put("tau_multipliers", join(self.tau_multipliers.iter().map(|m| m.to_string()).collect()));
        put("n_trials", self.n_trials.to_string());
        put("n_cal", self.n_cal.to_string());
        put("master_seed", self.master_seed.to_string());
        put("jobs", self.jobs.to_string());
        put("output_dir", self.output_dir.display().to_string());
        put("record_len", self.trial.record_len.to_string());
        put("zero_value_tol", format!("{:?}", tol.zero_value_tol));
        put("slope_tol", format!("{:?}", tol.slope_tol));
        put("ratio_value_tol", format!("{:?}", tol.ratio_value_tol));
        put("ratio_value_fraction", format!("{:?}", tol.ratio_value_fraction));
        put("random_state", self.random_state.to_string());
        put(
            "generator_rms",
            match self.trial.generator_rms {
                GeneratorRms::Johnson => "johnson",
                GeneratorRms::Equal => "equal",
            }
            .to_string(),
        );
        put("steady_duration", format!("{:?}", self.steady_duration));
        s
    }
}

impl fmt::Display for RunConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Maps a core validation error to the config key that caused it.
pub fn core_error(e: CoreError) -> ConfigError {
    match e {
        CoreError::InvalidParameter { name, reason } => {
            let key = match name {
                "taus" | "tau" => "tau_multipliers",
                "n" => "record_len",
                "dt" => "dt_divisor",
                other => other,
            };
            ConfigError::new(key, reason)
        }
        other => ConfigError::new("config", other.to_string()),
    }
}

/// Parses and validates a configuration text.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut cfg = RunConfig::default();
    let mut seen: Vec<String> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            ConfigError::new(line, format!("line {} is not a `key = value` assignment", lineno + 1))
        })?;
        let (key, value) = (key.trim(), value.trim());
        if seen.iter().any(|k| k == key) {
            return Err(ConfigError::new(key, "assigned twice"));
        }
        cfg.set(key, value)?;
        seen.push(key.to_string());
    }
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_text_gives_defaults() {
        let cfg = parse_config("").unwrap();
        assert_eq!(cfg, RunConfig::default());
        let p = cfg.trial.physical;
        assert_eq!((p.r_h, p.r_l, p.z0, p.temperature), (11e3, 2e3, 50.0, 7e15));
        assert_eq!((p.bandwidth, p.t_f, p.dt_divisor), (5e3, 1e-5, 100));
        assert_eq!(cfg.n_trials, 1000);
        assert_eq!(cfg.scenarios.len(), 4);
    }

    #[test]
    fn comments_and_whitespace() {
        let cfg = parse_config("# header\n\n  n_trials = 50  # fewer\nscenarios=2, 4\n").unwrap();
        assert_eq!(cfg.n_trials, 50);
        assert_eq!(cfg.scenarios, vec![ScenarioKind::ZeroStartOnly, ScenarioKind::ZeroStartSlopeMatched]);
    }

    #[test]
    fn dt_divisor_sets_dt() {
        let cfg = parse_config("dt_divisor = 100").unwrap();
        assert!((cfg.trial.physical.dt() - 1e-7).abs() < 1e-22);
    }

    #[test]
    fn invariant_violation_names_key() {
        let err = parse_config("r_h = 2e3\nr_l = 2e3").unwrap_err();
        assert_eq!(err.key, "r_h");
        let err = parse_config("z0 = 0").unwrap_err();
        assert_eq!(err.key, "z0");
        let err = parse_config("n_cal = 3").unwrap_err();
        assert_eq!(err.key, "n_cal");
    }

    #[test]
    fn unknown_and_malformed_keys() {
        assert_eq!(parse_config("rh = 5").unwrap_err().key, "rh");
        assert_eq!(parse_config("r_h = lots").unwrap_err().key, "r_h");
        assert_eq!(parse_config("scenarios = 5").unwrap_err().key, "scenarios");
        assert_eq!(parse_config("generator_rms = loud").unwrap_err().key, "generator_rms");
        assert_eq!(parse_config("n_trials = 5\nn_trials = 6").unwrap_err().key, "n_trials");
        assert!(parse_config("just words").is_err());
    }

    #[test]
    fn echo_round_trips() {
        let text = "r_h = 12e3\nscenarios = 3\ntau_multipliers = 1,3\ngenerator_rms = equal\nrandom_state = true\n";
        let cfg = parse_config(text).unwrap();
        assert_eq!(parse_config(&cfg.to_text()).unwrap(), cfg);
        let echoed = cfg.to_text();
        let keys: Vec<&str> = echoed.lines().map(|l| l.split(" = ").next().unwrap()).collect();
        assert_eq!(keys, KEYS);
    }
}
