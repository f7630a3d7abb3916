//! States, Hamiltonians, frames and time evolution.

mod basis;
mod frame;
mod hamiltonian;
mod integrator;
mod state;
mod trajectory;

pub use basis::{LevelBasis, PRODUCT_SEPARATOR};
pub use frame::{apply_frame, FrameTransform};
pub use hamiltonian::{assemble_hamiltonian, Amplitude, ComplexFn, Hamiltonian, HamiltonianTerm};
pub use integrator::{IntegratorConfig, IntegratorStats};
pub use state::{fidelity, StateVector, NORM_TOLERANCE};
pub use trajectory::Trajectory;

use crate::error::{Error, Result};
use integrator::Integrator;

/// Sample times `t0, t0 + dt, …, t1`, always including both ends.
pub(crate) fn sample_grid(t0: f64, t1: f64, dt: f64) -> Vec<f64> {
    let n = ((t1 - t0) / dt).ceil().max(1.0) as usize;
    let mut out: Vec<f64> = (0..n).map(|k| t0 + k as f64 * dt).filter(|&t| t < t1).collect();
    // Avoid a sliver interval just before the end.
    while out.len() > 1 && t1 - out[out.len() - 1] < 1e-9 * dt {
        out.pop();
    }
    out.push(t1);
    out
}

fn check_inputs(state: &StateVector, ham: &Hamiltonian, t0: f64, t1: f64, cfg: &IntegratorConfig) -> Result<()> {
    cfg.validate()?;
    if !(t0.is_finite() && t1.is_finite() && t1 > t0) {
        return Err(Error::invalid(format!(
            "evolution interval must satisfy t_end > t_start (got {t0} → {t1})"
        )));
    }
    if **state.basis() != **ham.basis() {
        return Err(Error::BasisMismatch(format!(
            "state basis {} vs Hamiltonian basis {}",
            state.basis(),
            ham.basis()
        )));
    }
    let norm = state.norm();
    if (norm - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::NotNormalized(norm));
    }
    Ok(())
}

/// Integrates `i dψ/dt = H(t) ψ` from `t0` to `t1`, sampling every
/// `cfg.sample_interval` (the endpoints are always included).
pub fn evolve(
    state: &StateVector,
    ham: &Hamiltonian,
    t0: f64,
    t1: f64,
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    evolve_on_grid(state, ham, &sample_grid(t0, t1, cfg.sample_interval), cfg)
}

/// Like [`evolve`] but sampling at caller-supplied, strictly increasing times.
pub fn evolve_on_grid(
    state: &StateVector,
    ham: &Hamiltonian,
    times: &[f64],
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    if times.len() < 2 {
        return Err(Error::invalid("sample grid needs at least two times"));
    }
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::invalid("sample times must be strictly increasing"));
    }
    check_inputs(state, ham, times[0], times[times.len() - 1], cfg)?;
    let mut y = state.amplitudes().to_vec();
    let mut traj = Trajectory::new(state.basis().clone());
    traj.push(times[0], &y);
    let mut integ = Integrator::new(ham, *cfg);
    for w in times.windows(2) {
        integ.advance(&mut y, w[0], w[1])?;
        traj.push(w[1], &y);
    }
    Ok(traj)
}

/// Final state only; no intermediate samples are stored.
pub fn propagate(
    state: &StateVector,
    ham: &Hamiltonian,
    t0: f64,
    t1: f64,
    cfg: &IntegratorConfig,
) -> Result<StateVector> {
    propagate_with_stats(state, ham, t0, t1, cfg).map(|(s, _)| s)
}

pub fn propagate_with_stats(
    state: &StateVector,
    ham: &Hamiltonian,
    t0: f64,
    t1: f64,
    cfg: &IntegratorConfig,
) -> Result<(StateVector, IntegratorStats)> {
    check_inputs(state, ham, t0, t1, cfg)?;
    let mut y = state.amplitudes().to_vec();
    let mut integ = Integrator::new(ham, *cfg);
    integ.advance(&mut y, t0, t1)?;
    let stats = integ.stats;
    Ok((StateVector::from_raw(state.basis().clone(), y)?, stats))
}

/// Convenience: assemble `terms` on the state's basis and [`evolve`].
pub fn evolve_terms(
    state: &StateVector,
    terms: Vec<HamiltonianTerm>,
    t0: f64,
    t1: f64,
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    let ham = Hamiltonian::new(state.basis().clone(), terms)?;
    evolve(state, &ham, t0, t1, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use std::f64::consts::PI;
    use std::sync::Arc;

    use crate::pulse::Tone;

    fn two_level() -> Arc<LevelBasis> {
        Arc::new(LevelBasis::new(["g", "e"]).unwrap())
    }

    #[test]
    fn resonant_pi_pulse() {
        let b = two_level();
        let omega = 2.0 * PI;
        let ham = Hamiltonian::new(
            b.clone(),
            vec![HamiltonianTerm::constant("e", "g", Complex64::new(omega / 2.0, 0.0))],
        )
        .unwrap();
        let psi = StateVector::basis_state(b, "g").unwrap();
        let traj = evolve(&psi, &ham, 0.0, PI / omega, &IntegratorConfig::default()).unwrap();
        let pe = traj.final_state().population("e").unwrap();
        assert!((pe - 1.0).abs() < 1e-10, "{pe}");
        assert!(traj.max_norm_error() < 1e-10);
        assert_eq!(traj.times()[0], 0.0);
        assert_eq!(*traj.times().last().unwrap(), PI / omega);
    }

    #[test]
    fn detuned_peak_matches_ceiling() {
        let b = two_level();
        let (omega, delta) = (2.0 * PI * 1.3, 2.0 * PI * 0.7);
        let ham = Hamiltonian::new(
            b.clone(),
            vec![HamiltonianTerm::coupling(
                "e",
                "g",
                Amplitude::Tone(Tone::continuous(omega, delta, 0.0)),
            )],
        )
        .unwrap();
        let psi = StateVector::basis_state(b, "g").unwrap();
        let gen = (omega * omega + delta * delta).sqrt();
        // The peak sits at t = π/Ω_gen; sample it exactly.
        let tp = PI / gen;
        let traj = evolve_on_grid(&psi, &ham, &[0.0, 0.5 * tp, tp, 1.5 * tp], &IntegratorConfig::default()).unwrap();
        let peak = traj.populations("e").unwrap()[2];
        let ceiling = omega * omega / (gen * gen);
        assert!((peak - ceiling).abs() < 1e-10, "{peak} vs {ceiling}");
    }

    #[test]
    fn rejects_bad_interval_and_basis() {
        let b = two_level();
        let ham = Hamiltonian::new(b.clone(), vec![]).unwrap();
        let psi = StateVector::basis_state(b, "g").unwrap();
        let cfg = IntegratorConfig::default();
        assert!(evolve(&psi, &ham, 1.0, 1.0, &cfg).is_err());
        let other = Arc::new(LevelBasis::new(["a", "b"]).unwrap());
        let ham2 = Hamiltonian::new(other, vec![]).unwrap();
        assert!(matches!(evolve(&psi, &ham2, 0.0, 1.0, &cfg), Err(Error::BasisMismatch(_))));
        let bad = IntegratorConfig { rtol: 0.0, ..cfg };
        assert!(evolve(&psi, &ham, 0.0, 1.0, &bad).is_err());
    }

    #[test]
    fn step_budget_is_enforced() {
        let b = two_level();
        let ham = Hamiltonian::new(
            b.clone(),
            vec![HamiltonianTerm::constant("e", "g", Complex64::new(1e4, 0.0))],
        )
        .unwrap();
        let psi = StateVector::basis_state(b, "g").unwrap();
        let cfg = IntegratorConfig {
            max_steps: 5,
            ..IntegratorConfig::default()
        };
        let err = propagate(&psi, &ham, 0.0, 10.0, &cfg).unwrap_err();
        assert!(err.is_numerical());
    }

    #[test]
    fn grid_includes_endpoints() {
        let g = sample_grid(0.0, 1.0, 0.3);
        assert_eq!(g, vec![0.0, 0.3, 0.6, 0.8999999999999999, 1.0]);
        assert_eq!(sample_grid(0.0, 0.1, 1.0), vec![0.0, 0.1]);
    }
}
