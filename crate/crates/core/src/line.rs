//! Lossless transmission line with resistive Thevenin terminations.
//!
//! The line is a pure delay of `delay_steps` samples in each direction. The
//! buffers hold Bergeron wave values `w = v + Z0 i` (twice the traveling-wave
//! voltage), so a termination with source `u` and resistance `R` that sees the
//! arriving value `b` obeys
//!
//! ```text
//! i = (u - b) / (R + Z0),   v = u - R i,   outgoing = v + Z0 i
//! ```
//!
//! which is the same as `outgoing = Γ b + 2 Z0 / (R + Z0) u` with
//! `Γ = (R - Z0) / (R + Z0)`. Currents are positive when flowing from the
//! terminating network into the cable.

use std::io::{self, Write};

use realfft::num_complex::Complex;

use crate::error::{ensure_non_negative, ensure_positive, Error, Result};
use crate::noise::Generator;
use crate::protocol::PhysicalConfig;

/// Reflection coefficient `(R - Z0) / (R + Z0)` of a resistive termination.
pub fn reflection_coefficient(resistance: f64, z0: f64) -> Result<f64> {
    ensure_non_negative("resistance", resistance)?;
    ensure_positive("z0", z0)?;
    Ok((resistance - z0) / (resistance + z0))
}

/// Cable voltage and current at one end.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EndState {
    pub v: f64,
    /// Current from the terminating network into the cable.
    pub i: f64,
}

#[inline]
fn terminate(u: f64, r: f64, incoming: f64, z0: f64) -> EndState {
    let i = (u - incoming) / (r + z0);
    EndState { v: u - r * i, i }
}

#[derive(Debug, Clone)]
pub struct TransmissionLine {
    z0: f64,
    dt: f64,
    delay_steps: usize,
    toward_b: Vec<f64>,
    toward_a: Vec<f64>,
    cursor: usize,
}

impl TransmissionLine {
    /// Builds an idle line. `delay / dt` must be a positive integer.
    pub fn new(z0: f64, delay: f64, dt: f64) -> Result<Self> {
        ensure_positive("z0", z0)?;
        ensure_positive("delay", delay)?;
        ensure_positive("dt", dt)?;
        let delay_steps = delay_in_steps(delay, dt)?;
        Ok(Self {
            z0,
            dt,
            delay_steps,
            toward_b: vec![0.0; delay_steps],
            toward_a: vec![0.0; delay_steps],
            cursor: 0,
        })
    }

    pub fn z0(&self) -> f64 {
        self.z0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn delay_steps(&self) -> usize {
        self.delay_steps
    }

    /// Returns the cable to the idle state.
    pub fn reset(&mut self) {
        self.toward_b.iter_mut().for_each(|w| *w = 0.0);
        self.toward_a.iter_mut().for_each(|w| *w = 0.0);
        self.cursor = 0;
    }

    /// Advances one timestep with generator voltages `u_a`, `u_b` behind
    /// resistances `r_a`, `r_b`.
    pub fn step(&mut self, u_a: f64, r_a: f64, u_b: f64, r_b: f64) -> (EndState, EndState) {
        let c = self.cursor;
        let a = terminate(u_a, r_a, self.toward_a[c], self.z0);
        let b = terminate(u_b, r_b, self.toward_b[c], self.z0);
        self.toward_b[c] = a.v + self.z0 * a.i;
        self.toward_a[c] = b.v + self.z0 * b.i;
        self.cursor = if c + 1 == self.delay_steps { 0 } else { c + 1 };
        (a, b)
    }
}

/// Converts a delay to an integer step count, rejecting non-integer ratios.
pub fn delay_in_steps(delay: f64, dt: f64) -> Result<usize> {
    let ratio = delay / dt;
    let steps = ratio.round();
    if steps < 1.0 || (ratio - steps).abs() > 1e-9 * steps {
        return Err(Error::invalid(
            "dt",
            format!("delay/dt = {ratio} is not a positive integer"),
        ));
    }
    Ok(steps as usize)
}

/// Time series at both cable ends for one transient.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrialWaveforms {
    pub dt: f64,
    pub ugen_a: Vec<f64>,
    pub ugen_b: Vec<f64>,
    pub v_a: Vec<f64>,
    pub v_b: Vec<f64>,
    pub i_a: Vec<f64>,
    pub i_b: Vec<f64>,
}

impl TrialWaveforms {
    fn with_capacity(dt: f64, n: usize) -> Self {
        Self {
            dt,
            ugen_a: Vec::with_capacity(n),
            ugen_b: Vec::with_capacity(n),
            v_a: Vec::with_capacity(n),
            v_b: Vec::with_capacity(n),
            i_a: Vec::with_capacity(n),
            i_b: Vec::with_capacity(n),
        }
    }

    pub fn len(&self) -> usize {
        self.v_a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.v_a.is_empty()
    }

    /// Sample time of step `n` (the switch closes at `t = 0`).
    pub fn time(&self, n: usize) -> f64 {
        n as f64 * self.dt
    }

    /// The same trial seen with Alice and Bob exchanged.
    pub fn mirrored(&self) -> Self {
        Self {
            dt: self.dt,
            ugen_a: self.ugen_b.clone(),
            ugen_b: self.ugen_a.clone(),
            v_a: self.v_b.clone(),
            v_b: self.v_a.clone(),
            i_a: self.i_b.clone(),
            i_b: self.i_a.clone(),
        }
    }

    /// Tab-separated dump: a header row, then
    /// `time_s ugen_a ugen_b v_a v_b i_a i_b` with 9 significant digits.
    pub fn write_tsv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "time_s\tugen_a\tugen_b\tv_a\tv_b\ti_a\ti_b")?;
        for n in 0..self.len() {
            writeln!(
                out,
                "{:.8e}\t{:.8e}\t{:.8e}\t{:.8e}\t{:.8e}\t{:.8e}\t{:.8e}",
                self.time(n),
                self.ugen_a[n],
                self.ugen_b[n],
                self.v_a[n],
                self.v_b[n],
                self.i_a[n],
                self.i_b[n]
            )?;
        }
        Ok(())
    }
}

/// Drives a cold line with explicit generator sequences of equal length.
pub fn simulate(
    z0: f64,
    delay: f64,
    dt: f64,
    drive_a: &[f64],
    r_a: f64,
    drive_b: &[f64],
    r_b: f64,
) -> Result<TrialWaveforms> {
    ensure_positive("r_a", r_a)?;
    ensure_positive("r_b", r_b)?;
    if drive_a.len() != drive_b.len() {
        return Err(Error::invalid(
            "drive_b",
            format!("length {} differs from drive_a length {}", drive_b.len(), drive_a.len()),
        ));
    }
    let mut line = TransmissionLine::new(z0, delay, dt)?;
    let mut out = TrialWaveforms::with_capacity(dt, drive_a.len());
    for (&u_a, &u_b) in drive_a.iter().zip(drive_b) {
        let (a, b) = line.step(u_a, r_a, u_b, r_b);
        out.ugen_a.push(u_a);
        out.ugen_b.push(u_b);
        out.v_a.push(a.v);
        out.v_b.push(b.v);
        out.i_a.push(a.i);
        out.i_b.push(b.i);
    }
    Ok(out)
}

/// Connects both generators to a cold line at step 0 and runs `n_steps`.
pub fn run_transient(
    config: &PhysicalConfig,
    gen_a: &Generator,
    r_a: f64,
    gen_b: &Generator,
    r_b: f64,
    n_steps: usize,
) -> Result<TrialWaveforms> {
    let drive_a = gen_a.drive(n_steps)?;
    let drive_b = gen_b.drive(n_steps)?;
    simulate(config.z0, config.t_f, config.dt(), &drive_a, r_a, &drive_b, r_b)
}

/// Closed-form bounce-diagram response to a step of height `u` applied at
/// `t = 0` behind `r_src`, with the far end terminated by `r_load`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BounceDiagram {
    pub u: f64,
    pub r_src: f64,
    pub r_load: f64,
    pub launch: f64,
    pub gamma_src: f64,
    pub gamma_load: f64,
    pub t_f: f64,
}

impl BounceDiagram {
    pub fn new(u: f64, r_src: f64, r_load: f64, z0: f64, t_f: f64) -> Result<Self> {
        ensure_positive("r_src", r_src)?;
        ensure_positive("r_load", r_load)?;
        ensure_positive("t_f", t_f)?;
        Ok(Self {
            u,
            r_src,
            r_load,
            launch: u * z0 / (r_src + z0),
            gamma_src: reflection_coefficient(r_src, z0)?,
            gamma_load: reflection_coefficient(r_load, z0)?,
            t_f,
        })
    }

    /// `(v_src, v_load)` at time `t`, summing every arrival up to `t`.
    /// Times closer than `guard` to an arrival instant `k t_f` are rejected.
    pub fn voltages(&self, t: f64, guard: f64) -> Result<(f64, f64)> {
        if !(t >= 0.0) {
            return Err(Error::invalid("t", "must be >= 0"));
        }
        let flights = t / self.t_f;
        let nearest = flights.round();
        if nearest >= 1.0 && (flights - nearest).abs() * self.t_f < guard {
            return Err(Error::Discontinuity { t });
        }
        let arrivals = flights.floor() as u64;

        let mut v_src = self.launch;
        let mut v_load = 0.0;
        // The k-th wave reaching the load (k = 0, 1, ...) arrives at (2k+1) t_f
        // with amplitude launch (Γs Γl)^k; its reflection reaches the source
        // at (2k+2) t_f.
        let mut incident = self.launch;
        let mut k = 0;
        loop {
            if 2 * k + 1 > arrivals {
                break;
            }
            v_load += (1.0 + self.gamma_load) * incident;
            if 2 * k + 2 > arrivals {
                break;
            }
            v_src += (1.0 + self.gamma_src) * self.gamma_load * incident;
            incident *= self.gamma_load * self.gamma_src;
            k += 1;
        }
        Ok((v_src, v_load))
    }

    /// `(i_src, i_load)`, both positive into the cable.
    pub fn currents(&self, t: f64, guard: f64) -> Result<(f64, f64)> {
        let (v_src, v_load) = self.voltages(t, guard)?;
        Ok(((self.u - v_src) / self.r_src, -v_load / self.r_load))
    }

    /// DC steady state `u r_load / (r_src + r_load)`.
    pub fn settled(&self) -> f64 {
        self.u * self.r_load / (self.r_src + self.r_load)
    }
}

/// Bounce-diagram step response `(v_src, v_load)` at time `t`.
pub fn lattice_step_response(
    u: f64,
    r_src: f64,
    r_load: f64,
    z0: f64,
    t_f: f64,
    t: f64,
    guard: f64,
) -> Result<(f64, f64)> {
    BounceDiagram::new(u, r_src, r_load, z0, t_f)?.voltages(t, guard)
}

/// A simulated unit-step response next to its bounce-diagram prediction.
#[derive(Debug, Clone, PartialEq)]
pub struct StepComparison {
    pub simulated: TrialWaveforms,
    /// Oracle `(v_src, v_load, i_src, i_load)` at mid-step times `(k + 1/2) dt`.
    pub oracle: [Vec<f64>; 4],
}

impl StepComparison {
    /// Runs `n` steps of a unit step behind `r_src` into `r_load`.
    pub fn run(z0: f64, t_f: f64, dt: f64, r_src: f64, r_load: f64, n: usize) -> Result<Self> {
        let simulated = simulate(z0, t_f, dt, &vec![1.0; n], r_src, &vec![0.0; n], r_load)?;
        let diagram = BounceDiagram::new(1.0, r_src, r_load, z0, t_f)?;
        let mut oracle = [vec![], vec![], vec![], vec![]];
        for k in 0..n {
            let t = (k as f64 + 0.5) * dt;
            let (vs, vl) = diagram.voltages(t, 0.25 * dt)?;
            let (is, il) = diagram.currents(t, 0.25 * dt)?;
            for (col, x) in oracle.iter_mut().zip([vs, vl, is, il]) {
                col.push(x);
            }
        }
        Ok(Self { simulated, oracle })
    }

    /// Largest relative deviation over all samples and all four quantities.
    pub fn max_relative_error(&self) -> f64 {
        let w = &self.simulated;
        [&w.v_a, &w.v_b, &w.i_a, &w.i_b]
            .into_iter()
            .zip(&self.oracle)
            .flat_map(|(sim, ora)| sim.iter().zip(ora))
            .map(|(&x, &y)| {
                if x == y {
                    0.0
                } else {
                    (x - y).abs() / x.abs().max(y.abs())
                }
            })
            .fold(0.0, f64::max)
    }
}

/// Steady-state mean squares at both ends of the terminated line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EndMeanSquares {
    pub v_a: f64,
    pub i_a: f64,
    pub v_b: f64,
    pub i_b: f64,
}

/// Exact frequency-domain end responses `(v_a, i_a, v_b, i_b)` to unit
/// generators at A and at B, for a lossless line of delay `t_f`.
pub fn end_transfer(
    f: f64,
    z0: f64,
    t_f: f64,
    r_a: f64,
    r_b: f64,
) -> ([Complex<f64>; 4], [Complex<f64>; 4]) {
    // Traveling-wave form: outgoing at each end is Γ·incoming + τ·u, and each
    // wave picks up exp(-jωt_f) on the way across.
    let delay = Complex::from_polar(1.0, -2.0 * std::f64::consts::PI * f * t_f);
    let ga = (r_a - z0) / (r_a + z0);
    let gb = (r_b - z0) / (r_b + z0);
    let ta = z0 / (r_a + z0);
    let tb = z0 / (r_b + z0);
    let one = Complex::new(1.0, 0.0);
    let round_trip = one - delay * delay * ga * gb;

    let solve = |ua: f64, ub: f64| {
        // Forward wave leaving A (f_a) and leaving B (f_b):
        // f_a = ta ua + ga delay f_b, f_b = tb ub + gb delay f_a.
        let f_a = (one * (ta * ua) + delay * (ga * tb * ub)) / round_trip;
        let f_b = (one * (tb * ub) + delay * (gb * ta * ua)) / round_trip;
        let in_a = delay * f_b;
        let in_b = delay * f_a;
        [
            f_a + in_a,
            (f_a - in_a) / z0,
            f_b + in_b,
            (f_b - in_b) / z0,
        ]
    };
    (solve(1.0, 0.0), solve(0.0, 1.0))
}

/// Steady-state mean squares for flat-band generators of RMS `sigma_a`,
/// `sigma_b` on `(0, B]`, by Simpson integration of the exact line response.
#[allow(clippy::too_many_arguments)]
pub fn network_mean_squares(
    z0: f64,
    t_f: f64,
    r_a: f64,
    r_b: f64,
    sigma_a: f64,
    sigma_b: f64,
    bandwidth: f64,
    intervals: usize,
) -> EndMeanSquares {
    let n = intervals.max(2) & !1;
    let h = bandwidth / n as f64;
    let pa = sigma_a * sigma_a / bandwidth;
    let pb = sigma_b * sigma_b / bandwidth;
    let mut acc = [0.0f64; 4];
    for k in 0..=n {
        let w = if k == 0 || k == n {
            1.0
        } else if k % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let (from_a, from_b) = end_transfer(k as f64 * h, z0, t_f, r_a, r_b);
        for q in 0..4 {
            acc[q] += w * (pa * from_a[q].norm_sqr() + pb * from_b[q].norm_sqr());
        }
    }
    let s = h / 3.0;
    EndMeanSquares {
        v_a: acc[0] * s,
        i_a: acc[1] * s,
        v_b: acc[2] * s,
        i_b: acc[3] * s,
    }
}
