use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{AddressingSequence, GROUND};
use crate::error::{Error, Result};
use crate::pulse::{BeamPath, Sequence};
use crate::quantum::{evolve_on_grid, sample_grid, Hamiltonian, IntegratorConfig, StateVector, Trajectory};

/// Where an atom sits relative to the two addressing beams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AtomRole {
    /// At the crossing: sees both beams at full strength.
    Target,
    /// On the ⊥ beam path only.
    NontargetPerpendicular,
    /// On the ∥ beam path only.
    NontargetParallel,
}

impl AtomRole {
    pub fn is_target(self) -> bool {
        self == AtomRole::Target
    }
}

/// Beam strengths seen by a nontarget atom.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoleDrive {
    /// Rabi-frequency scale of the beam whose path the atom is on.
    pub scale: f64,
    /// Scale of the other beam at the atom. Zero truncates it entirely,
    /// which is the default since that beam misses the atom by several
    /// beam radii.
    pub cross_path_scale: f64,
}

impl RoleDrive {
    pub fn new(scale: f64) -> Self {
        Self {
            scale,
            cross_path_scale: 0.0,
        }
    }
}

/// Outcome of one addressing sequence for one atom.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EchoReport {
    /// |⟨ψ(0)|ψ(T)⟩|².
    pub restoration_fidelity: f64,
    /// Final amplitude on the level the atom should end in: the protocol's
    /// target level for the target, the initial level otherwise.
    pub target_amplitude: Complex64,
    /// Time-integrated Rydberg population, µs.
    pub t_de: f64,
    /// `t_de / τ`.
    pub decay_error: f64,
    pub peak_rydberg: f64,
    /// Largest Rydberg population inside the wait segment, if it has one.
    pub wait_rydberg: Option<f64>,
}

/// ∫ Σ_levels |⟨level|ψ(t)⟩|² dt by the trapezoidal rule on the trajectory grid.
pub fn compute_t_de(traj: &Trajectory, rydberg_levels: &[&str]) -> Result<f64> {
    if traj.is_empty() {
        return Err(Error::invalid("cannot integrate an empty trajectory"));
    }
    let pops = traj.population_sum(rydberg_levels)?;
    let t = traj.times();
    Ok(t.windows(2)
        .zip(pops.windows(2))
        .map(|(tw, pw)| 0.5 * (tw[1] - tw[0]) * (pw[0] + pw[1]))
        .sum())
}

/// Uniform samples inside every segment, always hitting segment boundaries.
pub(crate) fn segment_grid(seq: &Sequence, dt: f64) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    let mut bounds = seq.boundaries();
    if bounds.len() < 2 {
        bounds = vec![seq.start(), seq.end()];
    }
    for w in bounds.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        for t in sample_grid(w[0], w[1], dt) {
            if out.last().map_or(true, |&l| t > l) {
                out.push(t);
            }
        }
    }
    out
}

fn path_scale(role: AtomRole, drive: RoleDrive, beam: BeamPath) -> f64 {
    match (role, beam) {
        (_, BeamPath::Common) => 1.0,
        (AtomRole::Target, _) => 1.0,
        (AtomRole::NontargetPerpendicular, BeamPath::Perpendicular)
        | (AtomRole::NontargetParallel, BeamPath::Parallel) => drive.scale,
        _ => drive.cross_path_scale,
    }
}

/// Simulates one atom under `seq`, starting in |1⟩. `scale` is the Rabi
/// scale of the atom's own beam; the other beam is truncated.
pub fn simulate_role(
    seq: &AddressingSequence,
    role: AtomRole,
    scale: f64,
    cfg: &IntegratorConfig,
) -> Result<(Trajectory, EchoReport)> {
    simulate_role_with(seq, role, RoleDrive::new(scale), cfg)
}

pub fn simulate_role_with(
    seq: &AddressingSequence,
    role: AtomRole,
    drive: RoleDrive,
    cfg: &IntegratorConfig,
) -> Result<(Trajectory, EchoReport)> {
    for (name, s) in [("scale", drive.scale), ("cross-path scale", drive.cross_path_scale)] {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::invalid(format!("Rabi {name} must lie in [0, 1], got {s}")));
        }
    }
    let terms = seq.sequence.terms(|p| Some(path_scale(role, drive, p.beam)));
    let ham = Hamiltonian::new(seq.basis.clone(), terms)?.with_breakpoints(seq.sequence.boundaries());
    let psi0 = StateVector::basis_state(seq.basis.clone(), GROUND)?;
    let grid = segment_grid(&seq.sequence, cfg.sample_interval);
    let traj = evolve_on_grid(&psi0, &ham, &grid, cfg)?;
    let report = echo_report(seq, role, &psi0, &traj)?;
    Ok((traj, report))
}

pub(crate) fn echo_report(
    seq: &AddressingSequence,
    role: AtomRole,
    psi0: &StateVector,
    traj: &Trajectory,
) -> Result<EchoReport> {
    let rydberg = seq.rydberg_levels();
    let fin = traj.final_state();
    let level = if role.is_target() { seq.protocol.target_level() } else { GROUND };
    let t_de = compute_t_de(traj, rydberg)?;
    let pops = traj.population_sum(rydberg)?;
    let wait_rydberg = seq.sequence.segment("wait").filter(|s| s.end > s.start).map(|s| {
        traj.times()
            .iter()
            .zip(&pops)
            .filter(|(t, _)| **t >= s.start && **t <= s.end)
            .map(|(_, p)| *p)
            .fold(0.0, f64::max)
    });
    Ok(EchoReport {
        restoration_fidelity: crate::quantum::fidelity(psi0, &fin)?,
        target_amplitude: fin.amplitude(level)?,
        t_de,
        decay_error: t_de / seq.params.tau,
        peak_rydberg: pops.iter().copied().fold(0.0, f64::max),
        wait_rydberg,
    })
}
