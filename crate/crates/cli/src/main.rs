use std::fs;
use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kljn_cli::{cmd_tables, cmd_validate, cmd_waveforms, parse_config, CliError, ConfigError, RunConfig};
use kljn_transient::protocol::ScenarioKind;

#[derive(Parser)]
#[command(name = "kljn", version, about = "Transient attack and zero-start defense simulator for the KLJN key exchanger")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate Eve's success probabilities and write one CSV per scenario.
    Tables(Common),
    /// Dump the voltages and currents of one trial over two fly times.
    Waveforms(Common),
    /// Check the line against its oracles and the steady-state identities.
    Validate(Common),
}

#[derive(Args)]
struct Common {
    /// Configuration file in `key = value` format.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Restrict to one scenario (1 to 4).
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    scenario: Option<u8>,
    /// Number of evaluation trials.
    #[arg(long)]
    trials: Option<usize>,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    jobs: Option<usize>,
}

impl Common {
    fn load(&self) -> Result<RunConfig, CliError> {
        let text = match &self.config {
            Some(path) => fs::read_to_string(path).map_err(|e| {
                ConfigError::new("--config", format!("cannot read {}: {e}", path.display()))
            })?,
            None => String::new(),
        };
        let mut cfg = parse_config(&text)?;
        if let Some(seed) = self.seed {
            cfg.master_seed = seed;
        }
        if let Some(out) = &self.out {
            cfg.output_dir = out.clone();
        }
        if let Some(n) = self.scenario {
            cfg.scenarios = vec![ScenarioKind::from_number(n).expect("range-checked")];
        }
        if let Some(n) = self.trials {
            cfg.n_trials = n;
        }
        if let Some(n) = self.jobs {
            cfg.jobs = n;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Tables(c) => {
            let cfg = c.load()?;
            let written = cmd_tables(&cfg, &mut io::stdout())?;
            for path in written {
                println!("wrote {}", path.display());
            }
            Ok(0)
        }
        Command::Waveforms(c) => {
            let cfg = c.load()?;
            let scenario = if c.scenario.is_some() {
                cfg.scenarios[0]
            } else {
                ScenarioKind::NoDefense
            };
            let path = cmd_waveforms(&cfg, scenario, cfg.master_seed)?;
            println!("wrote {}", path.display());
            Ok(0)
        }
        Command::Validate(c) => {
            let cfg = c.load()?;
            let outcome = cmd_validate(&cfg)?;
            print!("{}", outcome.report);
            Ok(if outcome.passed { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
