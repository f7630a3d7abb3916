//! Simulation of off-resonance-induced resonance (ORIR) drives, single-site
//! addressing of atoms in a 3D Rydberg lattice with optical and microwave
//! spin echoes, and the step-2 dynamics of a Rydberg blockade gate.
//!
//! Units: ħ = 1, times in µs, frequencies in rad/µs. Use [`units::mhz`] to
//! convert ordinary frequencies.

pub mod addressing;
pub mod error;
pub mod gate;
pub mod geometry;
pub mod orir;
pub mod pulse;
pub mod quantum;
pub mod units;

#[cfg(test)]
mod properties;

pub use error::{Error, Result};
pub use pulse::{BeamPath, EdgeShape, PulseEdge, PulseStage, Segment, Sequence, Tone};
pub use quantum::{
    apply_frame, assemble_hamiltonian, evolve, evolve_on_grid, fidelity, propagate, Amplitude, FrameTransform,
    Hamiltonian, HamiltonianTerm, IntegratorConfig, LevelBasis, StateVector, Trajectory,
};
