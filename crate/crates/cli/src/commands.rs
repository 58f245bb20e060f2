use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use kljn_transient::line::StepComparison;
use kljn_transient::montecarlo::{run_experiment, validate_steady_state, waveform_trial};
use kljn_transient::protocol::{BitState, ScenarioKind};
use kljn_transient::Error as CoreError;

use crate::config::{ConfigError, RunConfig};

/// Relative tolerance of the step-response oracle check.
pub const ORACLE_TOLERANCE: f64 = 1e-9;
/// Samples simulated for each step-response check.
pub const ORACLE_STEPS: usize = 20_000;

pub const EFFECTIVE_CONFIG: &str = "effective_config.txt";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("simulation error: {0}")]
    Core(#[from] CoreError),
    #[error("i/o error on {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Core(CoreError::InvalidParameter { .. }) => 2,
            _ => 1,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(io_err(path))
}

/// Creates the output directory and echoes the effective configuration.
pub fn prepare_output(cfg: &RunConfig) -> Result<(), CliError> {
    let dir = &cfg.output_dir;
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let path = dir.join(EFFECTIVE_CONFIG);
    fs::write(&path, cfg.to_text()).map_err(io_err(&path))
}

pub fn table_path(cfg: &RunConfig, scenario: ScenarioKind) -> PathBuf {
    cfg.output_dir.join(format!("scenario_{}.csv", scenario.number()))
}

/// Runs every configured scenario and writes `scenario_N.csv` plus
/// `scenario_N_meta.txt` (calibrated signs, loosened and dropped trials).
pub fn cmd_tables(cfg: &RunConfig, log: &mut dyn Write) -> Result<Vec<PathBuf>, CliError> {
    cfg.validate()?;
    prepare_output(cfg)?;
    let exp = cfg.experiment();
    let mut written = Vec::new();
    for &scenario in &cfg.scenarios {
        let summary = run_experiment(&exp, scenario)?;

        let path = table_path(cfg, scenario);
        let mut out = create(&path)?;
        summary.write_csv(&mut out).map_err(io_err(&path))?;
        out.flush().map_err(io_err(&path))?;

        let meta = cfg.output_dir.join(format!("scenario_{}_meta.txt", scenario.number()));
        let mut m = create(&meta)?;
        let text = (|| -> io::Result<()> {
            writeln!(m, "scenario = {}", scenario.number())?;
            writeln!(m, "description = {}", scenario.description())?;
            writeln!(m, "master_seed = {}", summary.master_seed)?;
            writeln!(m, "n_trials = {}", summary.n_trials)?;
            writeln!(m, "failed_trials = {}", summary.failed_trials)?;
            writeln!(m, "loosened_trials = {}", summary.loosened_trials)?;
            for c in &summary.calibration {
                writeln!(
                    m,
                    "calibration tau = {:.6e}: sign_v = {} (mean {:.4e}, se {:.4e}), sign_i = {} (mean {:.4e}, se {:.4e}), n_cal = {}",
                    c.tau, c.sign_u, c.mean_u, c.se_u, c.sign_i, c.mean_i, c.se_i, c.n_cal
                )?;
            }
            m.flush()
        })();
        text.map_err(io_err(&meta))?;

        let _ = writeln!(log, "{scenario}");
        let t_f = cfg.trial.physical.t_f;
        for (k, row) in summary.rows.iter().enumerate() {
            let label = scenario
                .case_label(k)
                .map(|c| c.to_string())
                .unwrap_or_else(|| "-".into());
            let _ = writeln!(
                log,
                "  {label}  tau = {:>4.1} t_f   p_EV = {:.4} +/- {:.4}   p_EI = {:.4} +/- {:.4}",
                row.tau / t_f,
                row.p_ev,
                row.se_v,
                row.p_ei,
                row.se_i
            );
        }
        written.push(path);
    }
    Ok(written)
}

pub fn waveform_path(cfg: &RunConfig, scenario: ScenarioKind) -> PathBuf {
    cfg.output_dir
        .join(format!("waveforms_scenario_{}.tsv", scenario.number()))
}

/// Dumps one HL trial of length `2 t_f` as a 7-column TSV.
pub fn cmd_waveforms(cfg: &RunConfig, scenario: ScenarioKind, seed: u64) -> Result<PathBuf, CliError> {
    cfg.validate()?;
    prepare_output(cfg)?;
    let duration = 2.0 * cfg.trial.physical.t_f;
    let trial = waveform_trial(&cfg.trial, scenario, BitState::HL, duration, seed)?;
    let path = waveform_path(cfg, scenario);
    let mut out = create(&path)?;
    trial.waveforms.write_tsv(&mut out).map_err(io_err(&path))?;
    out.flush().map_err(io_err(&path))?;
    Ok(path)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationOutcome {
    pub report: String,
    pub passed: bool,
}

/// Line oracle checks plus the steady-state identities.
pub fn cmd_validate(cfg: &RunConfig) -> Result<ValidationOutcome, CliError> {
    cfg.validate()?;
    let p = cfg.trial.physical;
    let mut report = String::new();
    let mut passed = true;
    for (rs, rl) in [(p.r_h, p.r_l), (p.r_l, p.r_h)] {
        let cmp = StepComparison::run(p.z0, p.t_f, p.dt(), rs, rl, ORACLE_STEPS)?;
        let err = cmp.max_relative_error();
        let ok = err <= ORACLE_TOLERANCE;
        passed &= ok;
        report.push_str(&format!(
            "[{}] step response {rs} ohm -> {rl} ohm vs bounce diagram: max relative error {err:.3e} (limit {ORACLE_TOLERANCE:e})\n",
            if ok { "PASS" } else { "FAIL" }
        ));
    }
    let steady = validate_steady_state(&cfg.trial, cfg.steady_duration, cfg.master_seed)?;
    passed &= steady.passed();
    report.push_str(&steady.to_string());
    report.push_str(if passed { "validation passed\n" } else { "validation FAILED\n" });

    prepare_output(cfg)?;
    let path = cfg.output_dir.join("validation_report.txt");
    fs::write(&path, &report).map_err(io_err(&path))?;
    Ok(ValidationOutcome { report, passed })
}
