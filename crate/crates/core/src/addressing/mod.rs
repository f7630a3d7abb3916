//! Single-site addressing of a target atom where two beams cross, with
//! optical (Method I, Method II) and microwave spin echoes that return the
//! nontarget atoms on either beam path to their initial state.

mod many_body;
mod microwave;
mod simulate;

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pulse::{BeamPath, PulseStage, Segment, Sequence, Tone};
use crate::quantum::LevelBasis;

pub use many_body::{simulate_many_body_echo, ManyBodyEchoSpec, MAX_ECHO_ATOMS};
pub use microwave::{
    echo_window, method2_microwave_sequence, microwave_echo_schedule, microwave_echo_schedule_with_rabi,
    simulate_microwave_echo_method2, EchoTiming, MicrowaveEchoParams,
};
pub use simulate::{compute_t_de, simulate_role, simulate_role_with, AtomRole, EchoReport, RoleDrive};

/// Ω/Δ required by Method I.
pub const METHOD1_RABI_RATIO: f64 = PI / 4.0;
/// Ω/Δ required by Method II.
pub const METHOD2_RABI_RATIO: f64 = 1.2247;
/// Rydberg lifetime used for decay estimates, µs.
pub const DEFAULT_RYDBERG_LIFETIME: f64 = 320.0;

pub const GROUND: &str = "1";
pub const RYDBERG: &str = "r";
pub const RYDBERG_ALT: &str = "r'";
pub const RYDBERG_UPPER: &str = "R";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Protocol {
    Method1,
    Method2,
    Method2Microwave,
}

impl Protocol {
    pub fn levels(self) -> &'static [&'static str] {
        match self {
            Protocol::Method1 => &[GROUND, RYDBERG],
            Protocol::Method2 => &[GROUND, RYDBERG, RYDBERG_UPPER],
            Protocol::Method2Microwave => &[GROUND, RYDBERG, RYDBERG_ALT, RYDBERG_UPPER],
        }
    }

    pub fn rydberg_levels(self) -> &'static [&'static str] {
        &self.levels()[1..]
    }

    /// Level the target is meant to occupy after one sequence.
    pub fn target_level(self) -> &'static str {
        match self {
            Protocol::Method1 => GROUND,
            _ => RYDBERG_UPPER,
        }
    }

    fn rabi_ratio(self) -> f64 {
        match self {
            Protocol::Method1 => METHOD1_RABI_RATIO,
            _ => METHOD2_RABI_RATIO,
        }
    }
}

/// Target-site drive parameters. Frequencies in rad/µs, times in µs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AddressingParams {
    pub delta: f64,
    /// Rabi frequency of each beam at the target.
    pub omega: f64,
    /// Wait between the two optical stages.
    pub t_mu: f64,
    /// Rydberg lifetime.
    pub tau: f64,
    /// Extra phase φ of the second optical stage; `None` uses the
    /// compensating value `t_mu·Δ`.
    pub stage2_phase: Option<f64>,
}

impl AddressingParams {
    /// Ω = πΔ/4 and the default wait 2π/Δ.
    pub fn method1(delta: f64) -> Self {
        Self {
            delta,
            omega: METHOD1_RABI_RATIO * delta,
            t_mu: 2.0 * PI / delta,
            tau: DEFAULT_RYDBERG_LIFETIME,
            stage2_phase: None,
        }
    }

    /// Ω = 1.2247Δ with no wait.
    pub fn method2(delta: f64) -> Self {
        Self {
            delta,
            omega: METHOD2_RABI_RATIO * delta,
            t_mu: 0.0,
            tau: DEFAULT_RYDBERG_LIFETIME,
            stage2_phase: None,
        }
    }

    pub fn with_wait(mut self, t_mu: f64) -> Self {
        self.t_mu = t_mu;
        self
    }

    pub fn with_stage2_phase(mut self, phi: f64) -> Self {
        self.stage2_phase = Some(phi);
        self
    }

    /// Duration π/Δ of each optical stage.
    pub fn t0(&self) -> f64 {
        PI / self.delta
    }

    pub fn stage2_phase(&self) -> f64 {
        self.stage2_phase.unwrap_or(self.t_mu * self.delta)
    }

    pub fn validate(&self, protocol: Protocol) -> Result<()> {
        if !(self.delta.is_finite() && self.delta > 0.0) {
            return Err(Error::invalid(format!("Δ must be finite and > 0, got {}", self.delta)));
        }
        let ratio = self.omega / self.delta;
        // Method II's 1.2247 is a rounded constant; accept its exact root √1.5 too.
        let tol = match protocol {
            Protocol::Method1 => 1e-9,
            _ => 5e-5,
        };
        if !((ratio - protocol.rabi_ratio()).abs() <= tol * protocol.rabi_ratio()) {
            return Err(Error::invalid(format!(
                "{protocol:?} requires Ω/Δ = {}, got {ratio}",
                protocol.rabi_ratio()
            )));
        }
        if !(self.t_mu.is_finite() && self.t_mu >= 0.0) {
            return Err(Error::invalid(format!("wait t_mu must be >= 0, got {}", self.t_mu)));
        }
        if !(self.tau > 0.0) {
            return Err(Error::invalid(format!("Rydberg lifetime must be > 0, got {}", self.tau)));
        }
        if let Some(phi) = self.stage2_phase {
            if !phi.is_finite() {
                return Err(Error::invalid("stage-2 phase must be finite"));
            }
        }
        Ok(())
    }
}

/// A pulse program together with the levels it acts on.
#[derive(Debug, Clone, PartialEq)]
pub struct AddressingSequence {
    pub protocol: Protocol,
    pub params: AddressingParams,
    pub sequence: Sequence,
    pub basis: Arc<LevelBasis>,
}

impl AddressingSequence {
    pub(crate) fn new(protocol: Protocol, params: AddressingParams, sequence: Sequence) -> Self {
        let basis = Arc::new(LevelBasis::new(protocol.levels().iter().copied()).expect("static labels"));
        Self {
            protocol,
            params,
            sequence,
            basis,
        }
    }

    pub fn rydberg_levels(&self) -> &'static [&'static str] {
        self.protocol.rydberg_levels()
    }

    /// The same program applied `times` times back to back.
    pub fn repeated(&self, times: usize) -> Self {
        Self {
            sequence: self.sequence.repeated(times),
            ..self.clone()
        }
    }
}

fn segments(parts: &[(&str, f64)]) -> Vec<Segment> {
    let mut t = 0.0;
    parts
        .iter()
        .map(|&(label, len)| {
            let s = Segment {
                label: label.to_string(),
                start: t,
                end: t + len,
            };
            t += len;
            s
        })
        .collect()
}

/// Method I on levels {1, r}.
///
/// Stage 1 (duration t₀): `Ω e^{iΔt}` on the ⊥ beam and `−Ω e^{−iΔt}` on
/// the ∥ beam. Stage 2: nothing for `t_mu`. Stage 3 (duration t₀):
/// `−Ω e^{iφ} e^{−iΔt}` on ⊥ and `Ω e^{−iφ} e^{iΔt}` on ∥. At the target
/// the two beams add to `iΩ sin(Δt)`.
pub fn method1_sequence(params: &AddressingParams) -> Result<AddressingSequence> {
    params.validate(Protocol::Method1)?;
    let (o, d, t0) = (params.omega, params.delta, params.t0());
    let s2 = t0 + params.t_mu;
    let phi = params.stage2_phase();
    let pulses = vec![
        PulseStage::new("pulse1", BeamPath::Perpendicular, RYDBERG, GROUND, Tone::new(o, d, 0.0, 0.0, t0)),
        PulseStage::new("pulse1", BeamPath::Parallel, RYDBERG, GROUND, Tone::new(o, -d, PI, 0.0, t0)),
        PulseStage::new("pulse2", BeamPath::Perpendicular, RYDBERG, GROUND, Tone::new(o, -d, PI + phi, s2, s2 + t0)),
        PulseStage::new("pulse2", BeamPath::Parallel, RYDBERG, GROUND, Tone::new(o, d, -phi, s2, s2 + t0)),
    ];
    let segs = segments(&[("pulse1", t0), ("wait", params.t_mu), ("pulse2", t0)]);
    Ok(AddressingSequence::new(Protocol::Method1, *params, Sequence::new(pulses, segs)))
}

/// Method II on levels {1, r, R}: the ⊥ beam drives 1↔r and the ∥ beam
/// drives r↔R. Pulse 1: `Ω e^{iΔt}` (⊥), `Ω e^{−iΔt}` (∥); pulse 2:
/// `−Ω e^{iφ} e^{−iΔt}` (⊥), `Ω e^{−iφ} e^{iΔt}` (∥).
pub fn method2_sequence(params: &AddressingParams) -> Result<AddressingSequence> {
    params.validate(Protocol::Method2)?;
    let (o, d, t0) = (params.omega, params.delta, params.t0());
    let s2 = t0 + params.t_mu;
    let phi = params.stage2_phase();
    let pulses = vec![
        PulseStage::new("pulse1", BeamPath::Perpendicular, RYDBERG, GROUND, Tone::new(o, d, 0.0, 0.0, t0)),
        PulseStage::new("pulse1", BeamPath::Parallel, RYDBERG_UPPER, RYDBERG, Tone::new(o, -d, 0.0, 0.0, t0)),
        PulseStage::new("pulse2", BeamPath::Perpendicular, RYDBERG, GROUND, Tone::new(o, -d, PI + phi, s2, s2 + t0)),
        PulseStage::new("pulse2", BeamPath::Parallel, RYDBERG_UPPER, RYDBERG, Tone::new(o, d, -phi, s2, s2 + t0)),
    ];
    let segs = segments(&[("pulse1", t0), ("wait", params.t_mu), ("pulse2", t0)]);
    Ok(AddressingSequence::new(Protocol::Method2, *params, Sequence::new(pulses, segs)))
}
