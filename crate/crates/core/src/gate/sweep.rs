use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{gate_hamiltonian, gate_window, leakage, step2_evolve, GateInput, GateParams, GateScheme, TimingOffsets};
use crate::error::{Error, Result};
use crate::pulse::PulseEdge;
use crate::quantum::{evolve, IntegratorConfig, StateVector};

/// Blockade leakage `1 − |⟨r1|ψ⟩|²` across a range of blockade strengths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateErrorReport {
    pub scheme: GateScheme,
    /// `(V − V₀)/V₀` at each point.
    pub v_rel: Vec<f64>,
    pub leakage_r1: Vec<f64>,
    /// Unweighted mean of `leakage_r1`.
    pub average: f64,
}

/// Evaluates the input-11 leakage on `n_points` evenly spaced values of
/// `(V − V₀)/V₀` in `interval`. Points run in parallel; results keep grid
/// order.
pub fn blockade_sweep(
    params: &GateParams,
    edge: PulseEdge,
    interval: (f64, f64),
    n_points: usize,
    cfg: &IntegratorConfig,
) -> Result<GateErrorReport> {
    params.validate()?;
    let (lo, hi) = interval;
    if n_points < 2 {
        return Err(Error::invalid(format!("a sweep needs at least 2 points, got {n_points}")));
    }
    if !(hi > lo && lo > -1.0) {
        return Err(Error::invalid(format!(
            "sweep interval must satisfy -1 < lo < hi, got [{lo}, {hi}]"
        )));
    }
    let v_rel: Vec<f64> = (0..n_points)
        .map(|k| lo + (hi - lo) * k as f64 / (n_points - 1) as f64)
        .collect();
    let leakage_r1 = v_rel
        .par_iter()
        .map(|&x| {
            let p = params.with_blockade(params.v0 * (1.0 + x));
            step2_evolve(&p, edge, GateInput::One1, &TimingOffsets::ZERO, cfg).map(|s| leakage(&s, GateInput::One1))
        })
        .collect::<Result<Vec<f64>>>()?;
    let average = leakage_r1.iter().sum::<f64>() / n_points as f64;
    Ok(GateErrorReport {
        scheme: params.scheme,
        v_rel,
        leakage_r1,
        average,
    })
}

/// Time-resolved blockade leakage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeakageCurve {
    pub times: Vec<f64>,
    pub leakage: Vec<f64>,
}

impl LeakageCurve {
    pub fn endpoint(&self) -> f64 {
        *self.leakage.last().expect("curves are nonempty")
    }

    pub fn peak(&self) -> f64 {
        self.leakage.iter().copied().fold(0.0, f64::max)
    }
}

/// `1 − |⟨r1|ψ(t)⟩|²` over the step-2 pulse for input 11.
pub fn leakage_trajectory(params: &GateParams, edge: PulseEdge, cfg: &IntegratorConfig) -> Result<LeakageCurve> {
    let ham = gate_hamiltonian(params, edge, GateInput::One1, &TimingOffsets::ZERO)?;
    let psi0 = StateVector::basis_state(GateInput::One1.basis(), GateInput::One1.initial())?;
    let (t0, t1) = gate_window(params, &TimingOffsets::ZERO);
    let traj = evolve(&psi0, &ham, t0, t1, cfg)?;
    let leakage = traj
        .populations(GateInput::One1.initial())?
        .into_iter()
        .map(|p| (1.0 - p).clamp(0.0, 1.0))
        .collect();
    Ok(LeakageCurve {
        times: traj.times().to_vec(),
        leakage,
    })
}
