//! Method II with a microwave π pulse r → r' between the optical pulses.
//!
//! After the transfer the pair interaction scales by κ (the ratio of C₆
//! coefficients of r'r' and rr). With κ < 0 the second optical pulse, run
//! with amplitude and detuning scaled by |κ| for t₀/|κ|, undoes the
//! interaction-induced evolution of the first.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use super::simulate::{simulate_role_with, RoleDrive};
use super::{
    segments, AddressingParams, AddressingSequence, AtomRole, EchoReport, Protocol, GROUND, RYDBERG, RYDBERG_ALT,
    RYDBERG_UPPER,
};
use crate::error::{Error, Result};
use crate::pulse::{BeamPath, PulseStage, Sequence, Tone};
use crate::quantum::{IntegratorConfig, Trajectory};

/// How the second optical pulse is kept in phase with the first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum EchoTiming {
    /// Wait until the accumulated detuning phase is a multiple of 2π.
    #[default]
    Wait,
    /// Start the second pulse right after the microwave and absorb the
    /// phase mismatch into the field phases.
    PhaseCompensated,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MicrowaveEchoParams {
    pub kappa: f64,
    /// Microwave Rabi frequency, rad/µs.
    pub omega_mu: f64,
    /// Microwave π-pulse duration, µs.
    pub t_mu: f64,
    /// Idle time after the microwave, µs.
    pub t_w: f64,
    /// Smallest n whose timing window fits the microwave pulse.
    pub n: u32,
    /// Duration t₀/|κ| of the second optical pulse, µs.
    pub t1: f64,
    pub timing: EchoTiming,
    /// Phase φ added to the second-pulse fields (zero up to 2π in wait mode).
    pub phase: f64,
    /// Static phase errors of the second-pulse ⊥ and ∥ fields, rad.
    pub phase_error: [f64; 2],
}

impl MicrowaveEchoParams {
    /// Start of the second optical pulse.
    pub fn second_pulse_start(&self, delta: f64) -> f64 {
        PI / delta + self.t_mu + self.t_w
    }

    pub fn with_phase_error(mut self, perp: f64, par: f64) -> Self {
        self.phase_error = [perp, par];
        self
    }

    pub fn validate(&self, delta: f64) -> Result<()> {
        if !(self.kappa < 0.0) {
            return Err(Error::invalid(format!(
                "microwave echo needs κ < 0 (opposite-sign interactions), got {}",
                self.kappa
            )));
        }
        if !(self.t_mu > 0.0 && self.t_w >= 0.0 && self.omega_mu > 0.0) {
            return Err(Error::invalid("microwave timing must satisfy t_mu > 0, t_w >= 0, Ω_µ > 0"));
        }
        if ((self.omega_mu * self.t_mu) - PI).abs() > 1e-9 * PI {
            return Err(Error::invalid(format!(
                "Ω_µ·t_µ must equal π, got {}",
                self.omega_mu * self.t_mu
            )));
        }
        let t0 = PI / delta;
        if (self.t1 - t0 / self.kappa.abs()).abs() > 1e-12 * self.t1 {
            return Err(Error::invalid("t1 must equal t0/|κ|"));
        }
        if self.timing == EchoTiming::Wait {
            let k = self.kappa.abs();
            let lhs = k * delta * (self.t_w + self.t_mu + t0) + t0 * delta;
            if (lhs - TAU * self.n as f64).abs() > 1e-9 * lhs.max(1.0) {
                return Err(Error::invalid(format!(
                    "wait condition violated: |κ|Δ(t_w+t_µ+t₀)+t₀Δ = {lhs}, expected 2π·{}",
                    self.n
                )));
            }
        }
        Ok(())
    }
}

/// `t_w + t_µ` required by the wait condition for a given n.
pub fn echo_window(kappa: f64, delta: f64, n: u32) -> f64 {
    let k = kappa.abs();
    let t0 = PI / delta;
    TAU * n as f64 / (k * delta) - t0 * (1.0 + 1.0 / k)
}

fn check_kappa_delta(kappa: f64, delta: f64) -> Result<()> {
    if !(kappa < 0.0 && kappa.is_finite()) {
        return Err(Error::invalid(format!(
            "microwave echo needs κ < 0 (opposite-sign interactions), got {kappa}"
        )));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::invalid(format!("Δ must be > 0, got {delta}")));
    }
    Ok(())
}

fn minimal_n(kappa: f64, delta: f64, at_least: f64, strict: bool) -> u32 {
    let mut n = 1;
    loop {
        let w = echo_window(kappa, delta, n);
        // Absolute slack for round-off in the closed form.
        let slack = 1e-12 * (PI / delta);
        if (strict && w > slack) || (!strict && w >= at_least - slack) {
            return n;
        }
        n += 1;
    }
}

fn second_pulse_phase(kappa: f64, delta: f64, start: f64) -> f64 {
    (kappa.abs() * delta * start + PI).rem_euclid(TAU)
}

/// Schedule in which the microwave pulse fills the whole timing window of
/// the smallest n leaving a positive window: `t_w = 0`, `Ω_µ = π/t_µ`.
pub fn microwave_echo_schedule(kappa: f64, delta: f64) -> Result<MicrowaveEchoParams> {
    check_kappa_delta(kappa, delta)?;
    let n = minimal_n(kappa, delta, 0.0, true);
    let t_mu = echo_window(kappa, delta, n);
    let t0 = PI / delta;
    Ok(MicrowaveEchoParams {
        kappa,
        omega_mu: PI / t_mu,
        t_mu,
        t_w: 0.0,
        n,
        t1: t0 / kappa.abs(),
        timing: EchoTiming::Wait,
        phase: second_pulse_phase(kappa, delta, t0 + t_mu),
        phase_error: [0.0; 2],
    })
}

/// Schedule for a given microwave Rabi frequency `omega_mu` (rad/µs).
pub fn microwave_echo_schedule_with_rabi(
    kappa: f64,
    delta: f64,
    omega_mu: f64,
    timing: EchoTiming,
) -> Result<MicrowaveEchoParams> {
    check_kappa_delta(kappa, delta)?;
    if !(omega_mu > 0.0 && omega_mu.is_finite()) {
        return Err(Error::invalid(format!("Ω_µ must be > 0, got {omega_mu}")));
    }
    let t_mu = PI / omega_mu;
    let n = minimal_n(kappa, delta, t_mu, false);
    let t_w = match timing {
        EchoTiming::Wait => (echo_window(kappa, delta, n) - t_mu).max(0.0),
        EchoTiming::PhaseCompensated => 0.0,
    };
    let t0 = PI / delta;
    Ok(MicrowaveEchoParams {
        kappa,
        omega_mu,
        t_mu,
        t_w,
        n,
        t1: t0 / kappa.abs(),
        timing,
        phase: second_pulse_phase(kappa, delta, t0 + t_mu + t_w),
        phase_error: [0.0; 2],
    })
}

/// Levels {1, r, r', R}. Pulse 1 as in Method II; microwave
/// `iΩ_µ/2 |r'⟩⟨r|` for t_µ; idle t_w; pulse 2 on r'←1 (⊥) and R←r' (∥)
/// with amplitude |κ|Ω and detuning ∓|κ|Δ for t₀/|κ|.
pub fn method2_microwave_sequence(
    params: &AddressingParams,
    schedule: &MicrowaveEchoParams,
) -> Result<AddressingSequence> {
    params.validate(Protocol::Method2)?;
    schedule.validate(params.delta)?;
    let (o, d, t0) = (params.omega, params.delta, params.t0());
    let k = schedule.kappa.abs();
    let mw_end = t0 + schedule.t_mu;
    let s2 = schedule.second_pulse_start(d);
    let phi = schedule.phase;
    let [e_perp, e_par] = schedule.phase_error;
    let pulses = vec![
        PulseStage::new("pulse1", BeamPath::Perpendicular, RYDBERG, GROUND, Tone::new(o, d, 0.0, 0.0, t0)),
        PulseStage::new("pulse1", BeamPath::Parallel, RYDBERG_UPPER, RYDBERG, Tone::new(o, -d, 0.0, 0.0, t0)),
        PulseStage::new(
            "microwave",
            BeamPath::Common,
            RYDBERG_ALT,
            RYDBERG,
            Tone::new(schedule.omega_mu, 0.0, FRAC_PI_2, t0, mw_end),
        ),
        PulseStage::new(
            "pulse2",
            BeamPath::Perpendicular,
            RYDBERG_ALT,
            GROUND,
            Tone::new(k * o, -k * d, PI + phi + e_perp, s2, s2 + schedule.t1),
        ),
        PulseStage::new(
            "pulse2",
            BeamPath::Parallel,
            RYDBERG_UPPER,
            RYDBERG_ALT,
            Tone::new(k * o, k * d, -phi + e_par, s2, s2 + schedule.t1),
        ),
    ];
    let segs = segments(&[
        ("pulse1", t0),
        ("microwave", schedule.t_mu),
        ("wait", schedule.t_w),
        ("pulse2", schedule.t1),
    ]);
    let mut p = *params;
    p.t_mu = schedule.t_mu + schedule.t_w;
    Ok(AddressingSequence::new(Protocol::Method2Microwave, p, Sequence::new(pulses, segs)))
}

/// Builds the microwave-echo sequence and simulates one atom; `scale` is
/// ignored for the target.
pub fn simulate_microwave_echo_method2(
    params: &AddressingParams,
    schedule: &MicrowaveEchoParams,
    role: AtomRole,
    scale: f64,
    cfg: &IntegratorConfig,
) -> Result<(Trajectory, EchoReport)> {
    let seq = method2_microwave_sequence(params, schedule)?;
    simulate_role_with(&seq, role, RoleDrive::new(scale), cfg)
}
