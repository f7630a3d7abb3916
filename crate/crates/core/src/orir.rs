//! Two-level ORIR drives: a ground level `g` coupled to `e` by one or two
//! tones detuned by ±Δ.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pulse::Tone;
use crate::quantum::{evolve, Amplitude, Hamiltonian, HamiltonianTerm, IntegratorConfig, LevelBasis, StateVector, Trajectory};

pub const GROUND: &str = "g";
pub const EXCITED: &str = "e";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DriveKind {
    /// One tone `Ω e^{iΔt}`.
    SingleDetunedPlus,
    /// One tone `Ω e^{−iΔt}`.
    SingleDetunedMinus,
    /// `Ω e^{iΔt}` and `Ω e^{−iΔt}`: coupling `Ω cos(Δt)`.
    CosPair,
    /// `Ω e^{iΔt}` and `−Ω e^{−iΔt}`: coupling `iΩ sin(Δt)`.
    SinPair,
}

/// Rabi frequency and detuning in rad/µs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrirDriveSpec {
    pub omega: f64,
    pub delta: f64,
    pub kind: DriveKind,
}

impl OrirDriveSpec {
    pub fn new(omega: f64, delta: f64, kind: DriveKind) -> Self {
        Self { omega, delta, kind }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.omega.is_finite() || !self.delta.is_finite() {
            return Err(Error::invalid("Ω and Δ must be finite"));
        }
        if matches!(self.kind, DriveKind::CosPair | DriveKind::SinPair) && self.delta == 0.0 {
            return Err(Error::invalid("a two-tone drive needs Δ ≠ 0"));
        }
        Ok(())
    }

    /// The drive as separate detuned tones, starting at t = 0.
    pub fn tones(&self) -> Vec<Tone> {
        let (o, d) = (self.omega, self.delta);
        match self.kind {
            DriveKind::SingleDetunedPlus => vec![Tone::continuous(o, d, 0.0)],
            DriveKind::SingleDetunedMinus => vec![Tone::continuous(o, -d, 0.0)],
            DriveKind::CosPair => vec![Tone::continuous(o, d, 0.0), Tone::continuous(o, -d, 0.0)],
            DriveKind::SinPair => vec![Tone::continuous(o, d, 0.0), Tone::continuous(o, -d, PI)],
        }
    }

    pub fn terms(&self) -> Vec<HamiltonianTerm> {
        self.tones()
            .into_iter()
            .map(|t| HamiltonianTerm::coupling(EXCITED, GROUND, Amplitude::Tone(t)))
            .collect()
    }
}

pub fn two_level_basis() -> Arc<LevelBasis> {
    Arc::new(LevelBasis::new([GROUND, EXCITED]).expect("static labels"))
}

/// Closed-form `(C_g, C_e)` under the cos-pair drive starting in `g`:
/// `C_g = cos θ`, `C_e = −i sin θ` with `θ = (Ω/Δ) sin(Δt)`.
pub fn analytic_amplitudes(omega: f64, delta: f64, t: f64) -> Result<(Complex64, Complex64)> {
    if delta == 0.0 {
        return Err(Error::invalid(
            "Δ = 0 has no ORIR closed form; use the resonant Rabi formula",
        ));
    }
    let theta = omega / delta * (delta * t).sin();
    Ok((Complex64::new(theta.cos(), 0.0), Complex64::new(0.0, -theta.sin())))
}

/// Largest excited population reachable with one detuned tone.
pub fn single_detuned_ceiling(omega: f64, delta: f64) -> Result<f64> {
    let den = omega * omega + delta * delta;
    if den == 0.0 {
        return Err(Error::invalid("Ω and Δ cannot both vanish"));
    }
    Ok(omega * omega / den)
}

/// Evolves `g` under `spec` for `duration` µs.
pub fn simulate_orir(spec: &OrirDriveSpec, duration: f64, cfg: &IntegratorConfig) -> Result<Trajectory> {
    spec.validate()?;
    let basis = two_level_basis();
    let ham = Hamiltonian::new(basis.clone(), spec.terms())?;
    let psi = StateVector::basis_state(basis, GROUND)?;
    evolve(&psi, &ham, 0.0, duration, cfg)
}
