//! KLJN bit exchange: resistor states, start-up scenarios and the defense
//! parameters.

use std::fmt;

use rand::Rng;

use crate::error::{ensure_non_negative, ensure_positive, Error, Result};
use crate::line::{run_transient, TrialWaveforms};
use crate::noise::{
    johnson_rms, search_start, slope_rms, synthesize_record, Generator, RecordSpec,
    SearchPolicy, StartPoint, StartTarget, BOLTZMANN,
};

/// Physical parameters of the key exchanger and its cable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConfig {
    pub r_h: f64,
    pub r_l: f64,
    pub z0: f64,
    pub temperature: f64,
    pub bandwidth: f64,
    /// One-way fly time of the cable in seconds.
    pub t_f: f64,
    /// Timesteps per fly time.
    pub dt_divisor: u32,
}

impl Default for PhysicalConfig {
    fn default() -> Self {
        Self {
            r_h: 11e3,
            r_l: 2e3,
            z0: 50.0,
            temperature: 7e15,
            bandwidth: 5e3,
            t_f: 1e-5,
            dt_divisor: 100,
        }
    }
}

impl PhysicalConfig {
    pub fn validate(&self) -> Result<()> {
        ensure_positive("r_l", self.r_l)?;
        ensure_positive("r_h", self.r_h)?;
        if self.r_h <= self.r_l {
            return Err(Error::invalid(
                "r_h",
                format!("must exceed r_l ({} <= {})", self.r_h, self.r_l),
            ));
        }
        ensure_positive("z0", self.z0)?;
        ensure_non_negative("temperature", self.temperature)?;
        ensure_positive("bandwidth", self.bandwidth)?;
        ensure_positive("t_f", self.t_f)?;
        if self.dt_divisor < 10 {
            return Err(Error::invalid(
                "dt_divisor",
                format!("must be >= 10, got {}", self.dt_divisor),
            ));
        }
        if self.bandwidth >= 0.5 / self.dt() {
            return Err(Error::invalid("bandwidth", "must lie below the Nyquist frequency of dt"));
        }
        Ok(())
    }

    pub fn boltzmann(&self) -> f64 {
        BOLTZMANN
    }

    pub fn dt(&self) -> f64 {
        self.t_f / self.dt_divisor as f64
    }

    pub fn resistance(&self, r: Resistor) -> f64 {
        match r {
            Resistor::High => self.r_h,
            Resistor::Low => self.r_l,
        }
    }

    /// Johnson RMS of the generator belonging to `r`.
    pub fn johnson_rms(&self, r: Resistor) -> Result<f64> {
        johnson_rms(self.temperature, self.resistance(r), self.bandwidth)
    }

    pub fn slope_ratio(&self) -> Result<f64> {
        slope_ratio(self.r_h, self.r_l, self.z0)
    }
}

/// `(R_H R_L / (R_H + R_L), R_H + R_L)`.
pub fn resultant_resistances(r_h: f64, r_l: f64) -> Result<(f64, f64)> {
    ensure_positive("r_h", r_h)?;
    ensure_positive("r_l", r_l)?;
    Ok((r_h * r_l / (r_h + r_l), r_h + r_l))
}

/// Defense slope ratio `m_HL = (R_H + Z0) / (R_L + Z0)`.
///
/// With starting slopes in this ratio both ends launch identical ramps into
/// the cable during the first fly time.
pub fn slope_ratio(r_h: f64, r_l: f64, z0: f64) -> Result<f64> {
    ensure_positive("r_h", r_h)?;
    ensure_positive("r_l", r_l)?;
    ensure_positive("z0", z0)?;
    Ok((r_h + z0) / (r_l + z0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Resistor {
    High,
    Low,
}

/// Joint resistor choice (Alice's, Bob's).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BitState {
    HL,
    LH,
    HH,
    LL,
}

impl BitState {
    pub const ALL: [BitState; 4] = [BitState::HH, BitState::HL, BitState::LH, BitState::LL];

    pub fn alice(self) -> Resistor {
        match self {
            BitState::HL | BitState::HH => Resistor::High,
            BitState::LH | BitState::LL => Resistor::Low,
        }
    }

    pub fn bob(self) -> Resistor {
        match self {
            BitState::LH | BitState::HH => Resistor::High,
            BitState::HL | BitState::LL => Resistor::Low,
        }
    }

    pub fn is_secure(self) -> bool {
        matches!(self, BitState::HL | BitState::LH)
    }

    /// The state with the two parties exchanged.
    pub fn mirrored(self) -> Self {
        match self {
            BitState::HL => BitState::LH,
            BitState::LH => BitState::HL,
            s => s,
        }
    }
}

impl fmt::Display for BitState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BitState::HL => "HL",
            BitState::LH => "LH",
            BitState::HH => "HH",
            BitState::LL => "LL",
        })
    }
}

/// Maps a secure state to its key bit given the publicly agreed value of HL;
/// `None` means the period is discarded.
pub fn interpret_bep(state: BitState, hl_bit: bool) -> Option<bool> {
    match state {
        BitState::HL => Some(hl_bit),
        BitState::LH => Some(!hl_bit),
        BitState::HH | BitState::LL => None,
    }
}

/// The four start-up scenarios of the transient demonstration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScenarioKind {
    /// Generators switched in at random instants.
    NoDefense,
    /// Zero-crossing starts, slopes unconstrained.
    ZeroStartOnly,
    /// Non-zero starts with values and slopes in the ratio `m_HL`.
    RatioStartNonzero,
    /// Zero-crossing starts with slopes in the ratio `m_HL`.
    ZeroStartSlopeMatched,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 4] = [
        ScenarioKind::NoDefense,
        ScenarioKind::ZeroStartOnly,
        ScenarioKind::RatioStartNonzero,
        ScenarioKind::ZeroStartSlopeMatched,
    ];

    /// 1-based scenario number.
    pub fn number(self) -> u8 {
        match self {
            ScenarioKind::NoDefense => 1,
            ScenarioKind::ZeroStartOnly => 2,
            ScenarioKind::RatioStartNonzero => 3,
            ScenarioKind::ZeroStartSlopeMatched => 4,
        }
    }

    pub fn from_number(n: u8) -> Option<Self> {
        Self::ALL.get((n as usize).checked_sub(1)?).copied()
    }

    /// Case letter of the `row`-th observation time (A..D, E..H, I..L, M..P).
    pub fn case_label(self, row: usize) -> Option<char> {
        if row >= 4 {
            return None;
        }
        char::from_u32('A' as u32 + 4 * (self.number() as u32 - 1) + row as u32)
    }

    pub fn description(self) -> &'static str {
        match self {
            ScenarioKind::NoDefense => "no defense, random start",
            ScenarioKind::ZeroStartOnly => "zero start, unmatched slope",
            ScenarioKind::RatioStartNonzero => "non-zero start, value and slope in ratio m_HL",
            ScenarioKind::ZeroStartSlopeMatched => "zero start, slopes in ratio m_HL",
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "scenario {} ({})", self.number(), self.description())
    }
}

/// How the generator amplitudes are set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GeneratorRms {
    /// Each generator at the Johnson RMS of its own resistor (thermal equilibrium).
    #[default]
    Johnson,
    /// Both generators at the Johnson RMS of `R_L`.
    Equal,
}

/// Start-point tolerances and public targets of the defense.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DefenseTolerances {
    /// Zero-crossing margin, relative to the generator RMS.
    pub zero_value_tol: f64,
    /// Slope margin, relative to the agreed slope.
    pub slope_tol: f64,
    /// Value margin for non-zero starts, relative to the generator RMS.
    pub ratio_value_tol: f64,
    /// Public L-side start value for non-zero starts, in units of `sigma_L`.
    pub ratio_value_fraction: f64,
}

impl Default for DefenseTolerances {
    fn default() -> Self {
        Self {
            zero_value_tol: 1e-3,
            slope_tol: 1e-2,
            ratio_value_tol: 1e-3,
            ratio_value_fraction: 0.5,
        }
    }
}

impl DefenseTolerances {
    pub fn validate(&self) -> Result<()> {
        ensure_positive("zero_value_tol", self.zero_value_tol)?;
        ensure_positive("slope_tol", self.slope_tol)?;
        ensure_positive("ratio_value_tol", self.ratio_value_tol)?;
        ensure_positive("ratio_value_fraction", self.ratio_value_fraction)?;
        Ok(())
    }
}

/// Everything needed to run one bit-exchange transient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialConfig {
    pub physical: PhysicalConfig,
    pub record_len: usize,
    pub tolerances: DefenseTolerances,
    pub generator_rms: GeneratorRms,
    pub search: SearchPolicy,
}

impl Default for TrialConfig {
    fn default() -> Self {
        Self {
            physical: PhysicalConfig::default(),
            record_len: 1 << 20,
            tolerances: DefenseTolerances::default(),
            generator_rms: GeneratorRms::default(),
            search: SearchPolicy::default(),
        }
    }
}

impl TrialConfig {
    pub fn validate(&self) -> Result<()> {
        self.physical.validate()?;
        self.tolerances.validate()?;
        if self.record_len < 3 {
            return Err(Error::invalid("record_len", "must be >= 3"));
        }
        Ok(())
    }

    /// RMS of the generator connected through resistor `r`.
    pub fn generator_sigma(&self, r: Resistor) -> Result<f64> {
        match self.generator_rms {
            GeneratorRms::Johnson => self.physical.johnson_rms(r),
            GeneratorRms::Equal => self.physical.johnson_rms(Resistor::Low),
        }
    }

    pub fn record_spec(&self) -> RecordSpec {
        RecordSpec {
            len: self.record_len,
            dt: self.physical.dt(),
            bandwidth: self.physical.bandwidth,
        }
    }

    /// Public start target for a party using resistor `r`, or `None` when the
    /// scenario imposes no start condition.
    pub fn start_target(&self, scenario: ScenarioKind, r: Resistor) -> Result<Option<StartTarget>> {
        let p = &self.physical;
        let tol = &self.tolerances;
        let ratio = match r {
            Resistor::High => p.slope_ratio()?,
            Resistor::Low => 1.0,
        };
        let sigma_l = p.johnson_rms(Resistor::Low)?;
        let m_l = slope_rms(p.bandwidth, sigma_l)?;
        Ok(match scenario {
            ScenarioKind::NoDefense => None,
            ScenarioKind::ZeroStartOnly => Some(StartTarget {
                value: 0.0,
                value_tol_rel: tol.zero_value_tol,
                slope: 1.0,
                slope_tol_rel: f64::INFINITY,
                allow_negation: false,
            }),
            ScenarioKind::RatioStartNonzero => Some(StartTarget {
                value: ratio * (tol.ratio_value_fraction * sigma_l),
                value_tol_rel: tol.ratio_value_tol,
                slope: ratio * m_l,
                slope_tol_rel: tol.slope_tol,
                allow_negation: true,
            }),
            ScenarioKind::ZeroStartSlopeMatched => Some(StartTarget {
                value: 0.0,
                value_tol_rel: tol.zero_value_tol,
                slope: ratio * m_l,
                slope_tol_rel: tol.slope_tol,
                allow_negation: true,
            }),
        })
    }
}

fn secure_resistances(state: BitState, p: &PhysicalConfig) -> Result<(f64, f64)> {
    if !state.is_secure() {
        return Err(Error::invalid(
            "state",
            format!("{state} is discarded by the protocol; only HL and LH are simulated"),
        ));
    }
    Ok((p.resistance(state.alice()), p.resistance(state.bob())))
}

/// Synthesizes one party's record and chooses its start instant.
///
/// `reserve` is the number of steps the generator must be able to drive.
pub fn prepare_party<R: Rng + ?Sized>(
    scenario: ScenarioKind,
    resistor: Resistor,
    cfg: &TrialConfig,
    reserve: usize,
    rng: &mut R,
) -> Result<Generator> {
    let sigma = cfg.generator_sigma(resistor)?;
    let spec = cfg.record_spec();
    if sigma == 0.0 {
        // A silent generator meets every start condition.
        let record = synthesize_record(rng, spec.len, spec.dt, spec.bandwidth, 0.0)?;
        let start = StartPoint::unconstrained(&record, 1)?;
        return Ok(Generator::new(record, start));
    }
    match cfg.start_target(scenario, resistor)? {
        None => {
            let record = synthesize_record(rng, spec.len, spec.dt, spec.bandwidth, sigma)?;
            let last = (record.len() - 2).min(record.len().saturating_sub(reserve));
            if last < 1 {
                return Err(Error::RecordExhausted {
                    start: 1,
                    needed: reserve,
                    len: record.len(),
                });
            }
            let index = rng.random_range(1..=last);
            let start = StartPoint::unconstrained(&record, index)?;
            Ok(Generator::new(record, start))
        }
        Some(target) => {
            let loosen_value = scenario == ScenarioKind::RatioStartNonzero
                || target.slope_tol_rel.is_infinite();
            search_start(rng, &spec, sigma, &target, reserve, loosen_value, &cfg.search)
        }
    }
}

/// Prepares Alice's and Bob's generators for a secure state.
pub fn prepare_generators<R: Rng + ?Sized>(
    scenario: ScenarioKind,
    state: BitState,
    cfg: &TrialConfig,
    reserve: usize,
    alice_rng: &mut R,
    bob_rng: &mut R,
) -> Result<(Generator, Generator)> {
    secure_resistances(state, &cfg.physical)?;
    let alice = prepare_party(scenario, state.alice(), cfg, reserve, alice_rng)?;
    let bob = prepare_party(scenario, state.bob(), cfg, reserve, bob_rng)?;
    Ok((alice, bob))
}

/// One simulated bit-exchange transient.
#[derive(Debug, Clone, PartialEq)]
pub struct BepTrial {
    pub state: BitState,
    pub waveforms: TrialWaveforms,
    pub alice_start: StartPoint,
    pub bob_start: StartPoint,
}

impl BepTrial {
    pub fn loosened(&self) -> bool {
        self.alice_start.loosened || self.bob_start.loosened
    }
}

/// Number of timesteps covering `duration` (rounded to the grid).
pub fn steps_for(duration: f64, dt: f64) -> Result<usize> {
    let steps = (duration / dt).round();
    if !(steps >= 1.0) {
        return Err(Error::invalid("duration", format!("{duration} s is shorter than dt = {dt} s")));
    }
    Ok(steps as usize)
}

/// Prepares both generators and runs a cold-line transient of `duration`.
pub fn run_bep_trial<R: Rng + ?Sized>(
    scenario: ScenarioKind,
    state: BitState,
    cfg: &TrialConfig,
    duration: f64,
    alice_rng: &mut R,
    bob_rng: &mut R,
) -> Result<BepTrial> {
    cfg.validate()?;
    let (r_a, r_b) = secure_resistances(state, &cfg.physical)?;
    let n_steps = steps_for(duration, cfg.physical.dt())?;
    let (alice, bob) = prepare_generators(scenario, state, cfg, n_steps, alice_rng, bob_rng)?;
    let waveforms = run_transient(&cfg.physical, &alice, r_a, &bob, r_b, n_steps)?;
    Ok(BepTrial {
        state,
        waveforms,
        alice_start: alice.start,
        bob_start: bob.start,
    })
}

/// Mean-square wire voltage of each resistor state, `4 k T R_p B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyStateLevels {
    pub hh: f64,
    pub hl: f64,
    pub lh: f64,
    pub ll: f64,
}

impl SteadyStateLevels {
    pub fn get(&self, state: BitState) -> f64 {
        match state {
            BitState::HH => self.hh,
            BitState::HL => self.hl,
            BitState::LH => self.lh,
            BitState::LL => self.ll,
        }
    }
}

pub fn steady_state_levels(config: &PhysicalConfig) -> Result<SteadyStateLevels> {
    config.validate()?;
    let level = |a: f64, b: f64| -> Result<f64> {
        let (rp, _) = resultant_resistances(a, b)?;
        Ok(4.0 * BOLTZMANN * config.temperature * rp * config.bandwidth)
    };
    Ok(SteadyStateLevels {
        hh: level(config.r_h, config.r_h)?,
        hl: level(config.r_h, config.r_l)?,
        lh: level(config.r_l, config.r_h)?,
        ll: level(config.r_l, config.r_l)?,
    })
}

/// Mean-square loop current of a secure state, `4 k T B / R_s`.
pub fn steady_state_current_level(config: &PhysicalConfig) -> Result<f64> {
    let (_, rs) = resultant_resistances(config.r_h, config.r_l)?;
    Ok(4.0 * BOLTZMANN * config.temperature * config.bandwidth / rs)
}
