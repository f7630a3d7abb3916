//! Step 2 of the Rydberg blockade gate: the control atom sits in |r⟩ while
//! the target is driven 1 → r → 1. Without blockade (input 01) the target
//! must return with a −1 sign; with blockade (input 11) it must stay put.

mod sweep;
mod timing;

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pulse::{PulseEdge, Tone};
use crate::quantum::{
    propagate, Amplitude, Hamiltonian, HamiltonianTerm, IntegratorConfig, LevelBasis, StateVector,
};

pub use sweep::{blockade_sweep, leakage_trajectory, GateErrorReport, LeakageCurve};
pub use timing::{
    optimize_duration, timing_error_average, timing_error_samples, weighted_average, DurationOptimum,
    TimingAverage, TimingSample, TIMING_GRID_POINTS,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GateScheme {
    /// One resonant field, coupling Ω/2 for 2π/Ω.
    Traditional,
    /// Two fields detuned by ±Δ with a π phase difference, coupling
    /// iΩ sin(Δt)/2 for π/Δ, with Ω = πΔ.
    Orir,
}

/// Frequencies in rad/µs, duration in µs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateParams {
    pub scheme: GateScheme,
    pub omega: f64,
    /// Detuning of the ORIR tones; unused by the traditional scheme.
    pub delta: f64,
    /// Reference blockade V₀.
    pub v0: f64,
    /// Actual blockade V.
    pub v: f64,
    /// Nominal pulse length T.
    pub duration: f64,
}

impl GateParams {
    pub fn traditional(omega: f64, v0: f64, v: f64) -> Self {
        Self {
            scheme: GateScheme::Traditional,
            omega,
            delta: 0.0,
            v0,
            v,
            duration: 2.0 * PI / omega,
        }
    }

    /// Δ = Ω/π and T = π/Δ.
    pub fn orir(omega: f64, v0: f64, v: f64) -> Self {
        let delta = omega / PI;
        Self {
            scheme: GateScheme::Orir,
            omega,
            delta,
            v0,
            v,
            duration: PI / delta,
        }
    }

    pub fn new(scheme: GateScheme, omega: f64, v0: f64, v: f64) -> Self {
        match scheme {
            GateScheme::Traditional => Self::traditional(omega, v0, v),
            GateScheme::Orir => Self::orir(omega, v0, v),
        }
    }

    pub fn with_duration(mut self, duration: f64) -> Self {
        self.duration = duration;
        self
    }

    pub fn with_blockade(mut self, v: f64) -> Self {
        self.v = v;
        self
    }

    /// The duration the scheme calls for: 2π/Ω or π/Δ.
    pub fn nominal_duration(&self) -> f64 {
        match self.scheme {
            GateScheme::Traditional => 2.0 * PI / self.omega,
            GateScheme::Orir => PI / self.delta,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            return Err(Error::invalid(format!("Ω must be > 0, got {}", self.omega)));
        }
        if !(self.v0 > 0.0 && self.v > 0.0 && self.v.is_finite() && self.v0.is_finite()) {
            return Err(Error::invalid(format!("V and V₀ must be > 0 (got {}, {})", self.v, self.v0)));
        }
        if !(self.duration > 0.0 && self.duration.is_finite()) {
            return Err(Error::invalid(format!("duration must be > 0, got {}", self.duration)));
        }
        if self.scheme == GateScheme::Orir {
            if !(self.delta > 0.0) {
                return Err(Error::invalid("the ORIR scheme needs Δ > 0"));
            }
            let ratio = self.omega / self.delta;
            if (ratio - PI).abs() > 1e-9 * PI {
                return Err(Error::invalid(format!("the ORIR scheme requires Ω/Δ = π, got {ratio}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GateInput {
    /// Control in |0⟩: basis {|1⟩, |r⟩} of the target, no blockade.
    #[serde(rename = "01")]
    Zero1,
    /// Control in |r⟩: basis {|r1⟩, |rr⟩} with V on |rr⟩.
    #[serde(rename = "11")]
    One1,
}

impl GateInput {
    pub fn levels(self) -> [&'static str; 2] {
        match self {
            GateInput::Zero1 => ["1", "r"],
            GateInput::One1 => ["r1", "rr"],
        }
    }

    pub fn initial(self) -> &'static str {
        self.levels()[0]
    }

    pub fn basis(self) -> Arc<LevelBasis> {
        Arc::new(LevelBasis::new(self.levels()).expect("static labels"))
    }
}

/// Switch-on and switch-off errors of the two fields, µs. The `plus` field
/// is `e^{+iΔt}` (the only field of the traditional scheme).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TimingOffsets {
    pub start_plus: f64,
    pub start_minus: f64,
    pub end_plus: f64,
    pub end_minus: f64,
}

impl TimingOffsets {
    pub const ZERO: TimingOffsets = TimingOffsets {
        start_plus: 0.0,
        start_minus: 0.0,
        end_plus: 0.0,
        end_minus: 0.0,
    };
}

/// The step-2 field(s) as tones on `upper ← lower`.
pub fn gate_tones(params: &GateParams, edge: PulseEdge, offsets: &TimingOffsets) -> Vec<Tone> {
    let t = params.duration;
    match params.scheme {
        GateScheme::Traditional => vec![
            Tone::new(params.omega, 0.0, 0.0, offsets.start_plus, t + offsets.end_plus).with_edge(edge),
        ],
        GateScheme::Orir => {
            let half = 0.5 * params.omega;
            vec![
                Tone::new(half, params.delta, 0.0, offsets.start_plus, t + offsets.end_plus).with_edge(edge),
                Tone::new(half, -params.delta, PI, offsets.start_minus, t + offsets.end_minus).with_edge(edge),
            ]
        }
    }
}

/// Step-2 Hamiltonian for `input`.
pub fn gate_hamiltonian(
    params: &GateParams,
    edge: PulseEdge,
    input: GateInput,
    offsets: &TimingOffsets,
) -> Result<Hamiltonian> {
    params.validate()?;
    edge.validate()?;
    let [lower, upper] = input.levels();
    let mut terms: Vec<HamiltonianTerm> = gate_tones(params, edge, offsets)
        .into_iter()
        .map(|tone| HamiltonianTerm::coupling(upper, lower, Amplitude::Tone(tone)))
        .collect();
    if input == GateInput::One1 {
        terms.push(HamiltonianTerm::energy(upper, params.v));
    }
    Hamiltonian::new(input.basis(), terms)
}

/// Evolution window: from the earliest switch-on to the latest switch-off.
pub fn gate_window(params: &GateParams, offsets: &TimingOffsets) -> (f64, f64) {
    let t = params.duration;
    match params.scheme {
        GateScheme::Traditional => (offsets.start_plus, t + offsets.end_plus),
        GateScheme::Orir => (
            offsets.start_plus.min(offsets.start_minus),
            t + offsets.end_plus.max(offsets.end_minus),
        ),
    }
}

/// Final state of step 2 for `input`.
pub fn step2_evolve(
    params: &GateParams,
    edge: PulseEdge,
    input: GateInput,
    offsets: &TimingOffsets,
    cfg: &IntegratorConfig,
) -> Result<StateVector> {
    let ham = gate_hamiltonian(params, edge, input, offsets)?;
    let psi0 = StateVector::basis_state(input.basis(), input.initial())?;
    let (t0, t1) = gate_window(params, offsets);
    if !(t1 > t0) {
        return Err(Error::invalid(format!("timing offsets leave an empty pulse window [{t0}, {t1}]")));
    }
    propagate(&psi0, &ham, t0, t1, cfg)
}

/// `1 − |⟨initial|ψ⟩|²`.
pub fn leakage(state: &StateVector, input: GateInput) -> f64 {
    let p = state.population(input.initial()).expect("gate basis");
    (1.0 - p).clamp(0.0, 1.0)
}

/// Leakages `(leakage_01, leakage_r1)`.
pub fn step2_leakages(
    params: &GateParams,
    edge: PulseEdge,
    offsets: &TimingOffsets,
    cfg: &IntegratorConfig,
) -> Result<(f64, f64)> {
    let a = step2_evolve(params, edge, GateInput::Zero1, offsets, cfg)?;
    let b = step2_evolve(params, edge, GateInput::One1, offsets, cfg)?;
    Ok((leakage(&a, GateInput::Zero1), leakage(&b, GateInput::One1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::mhz;
    use num_complex::Complex64;

    #[test]
    fn unblocked_two_pi() {
        let cfg = IntegratorConfig::default();
        let om = mhz(2.0);
        for p in [GateParams::orir(om, 12.0 * om, 12.0 * om), GateParams::traditional(om, 12.0 * om, 12.0 * om)] {
            let s = step2_evolve(&p, PulseEdge::RECTANGULAR, GateInput::Zero1, &TimingOffsets::ZERO, &cfg).unwrap();
            let a = s.amplitude("1").unwrap();
            assert!((a + Complex64::new(1.0, 0.0)).norm() < 1e-9, "{:?} {a}", p.scheme);
        }
    }

    #[test]
    fn orir_ratio_enforced() {
        let mut p = GateParams::orir(1.0, 12.0, 12.0);
        p.delta *= 1.1;
        assert!(p.validate().is_err());
        assert!(GateParams::traditional(1.0, 12.0, 0.0).validate().is_err());
    }

    #[test]
    fn separate_tones_match_simplified_drive() {
        let om = mhz(2.0);
        let p = GateParams::orir(om, 12.0 * om, 12.0 * om);
        let cfg = IntegratorConfig::default();
        let tones = gate_hamiltonian(&p, PulseEdge::RECTANGULAR, GateInput::One1, &TimingOffsets::ZERO).unwrap();
        let (d, v) = (p.delta, p.v);
        let simple = Hamiltonian::new(
            GateInput::One1.basis(),
            vec![
                HamiltonianTerm::coupling(
                    "rr",
                    "r1",
                    Amplitude::function(move |t| Complex64::new(0.0, 0.5 * om * (d * t).sin())),
                ),
                HamiltonianTerm::energy("rr", v),
            ],
        )
        .unwrap();
        let psi = StateVector::basis_state(GateInput::One1.basis(), "r1").unwrap();
        let a = propagate(&psi, &tones, 0.0, p.duration, &cfg).unwrap();
        let b = propagate(&psi, &simple, 0.0, p.duration, &cfg).unwrap();
        for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
            assert!((x - y).norm() < 1e-9);
        }
    }
}
