//! Several interacting nontarget atoms on the ⊥ path under the microwave
//! echo, each with levels {1, r, r'}.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{method2_microwave_sequence, AddressingParams, MicrowaveEchoParams, GROUND, RYDBERG, RYDBERG_ALT};
use crate::error::{Error, Result};
use crate::pulse::BeamPath;
use crate::quantum::{propagate, Amplitude, Hamiltonian, HamiltonianTerm, IntegratorConfig, LevelBasis, StateVector};

pub const MAX_ECHO_ATOMS: usize = 4;

const ATOM_LEVELS: [&str; 3] = [GROUND, RYDBERG, RYDBERG_ALT];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManyBodyEchoSpec {
    /// Rabi scale of the ⊥ beam at each atom.
    pub scales: Vec<f64>,
    /// Symmetric pair interactions V_ij on |rr⟩, rad/µs.
    pub interactions: Vec<Vec<f64>>,
    /// Interaction on |r'r'⟩ is `kappa_interaction · V_ij`.
    pub kappa_interaction: f64,
    /// Interaction on |rr'⟩ is `cross_factor · V_ij`.
    pub cross_factor: f64,
}

impl ManyBodyEchoSpec {
    pub fn new(scales: Vec<f64>, interactions: Vec<Vec<f64>>, kappa_interaction: f64) -> Self {
        Self {
            scales,
            interactions,
            kappa_interaction,
            cross_factor: 0.0,
        }
    }

    /// Two atoms coupled by `v`.
    pub fn pair(scales: [f64; 2], v: f64, kappa_interaction: f64) -> Self {
        Self::new(scales.to_vec(), vec![vec![0.0, v], vec![v, 0.0]], kappa_interaction)
    }

    pub fn n_atoms(&self) -> usize {
        self.scales.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_atoms();
        if n == 0 {
            return Err(Error::invalid("need at least one atom"));
        }
        if n > MAX_ECHO_ATOMS {
            return Err(Error::DimensionOverflow(format!(
                "{n} atoms need {} levels; at most {MAX_ECHO_ATOMS} atoms are supported",
                3usize.pow(n as u32)
            )));
        }
        if self.interactions.len() != n || self.interactions.iter().any(|r| r.len() != n) {
            return Err(Error::invalid(format!("interaction matrix must be {n}×{n}")));
        }
        for i in 0..n {
            for j in 0..n {
                let (a, b) = (self.interactions[i][j], self.interactions[j][i]);
                if !a.is_finite() || (a - b).abs() > 1e-12 * a.abs().max(b.abs()) {
                    return Err(Error::invalid("interaction matrix must be finite and symmetric"));
                }
            }
        }
        if let Some(s) = self.scales.iter().find(|s| !(0.0..=1.0).contains(*s)) {
            return Err(Error::invalid(format!("Rabi scale {s} outside [0, 1]")));
        }
        Ok(())
    }
}

fn digits(mut index: usize, n: usize) -> Vec<usize> {
    let mut d = vec![0; n];
    for k in (0..n).rev() {
        d[k] = index % 3;
        index /= 3;
    }
    d
}

fn label(d: &[usize]) -> String {
    d.iter().map(|&k| ATOM_LEVELS[k]).collect::<Vec<_>>().join(",")
}

/// Fidelity of the joint final state with the initial |1…1⟩ after the
/// microwave-echo sequence, with every atom on the ⊥ path.
pub fn simulate_many_body_echo(
    params: &AddressingParams,
    schedule: &MicrowaveEchoParams,
    spec: &ManyBodyEchoSpec,
    cfg: &IntegratorConfig,
) -> Result<f64> {
    spec.validate()?;
    let n = spec.n_atoms();
    let seq = method2_microwave_sequence(params, schedule)?;
    let per_atom: Vec<LevelBasis> = (0..n)
        .map(|_| LevelBasis::new(ATOM_LEVELS))
        .collect::<Result<_>>()?;
    let basis = Arc::new(LevelBasis::product(&per_atom)?);
    let dim = basis.dim();
    let states: Vec<Vec<usize>> = (0..dim).map(|i| digits(i, n)).collect();
    let level_index = |l: &str| ATOM_LEVELS.iter().position(|x| *x == l);

    let mut terms = Vec::new();
    for stage in &seq.sequence.pulses {
        let (Some(up), Some(lo)) = (level_index(&stage.upper), level_index(&stage.lower)) else {
            continue;
        };
        if stage.beam == BeamPath::Parallel {
            continue;
        }
        for (atom, &scale) in spec.scales.iter().enumerate() {
            let s = if stage.beam == BeamPath::Common { 1.0 } else { scale };
            if s == 0.0 {
                continue;
            }
            let transitions = states
                .iter()
                .filter(|d| d[atom] == lo)
                .map(|d| {
                    let mut u = d.clone();
                    u[atom] = up;
                    (label(&u), label(d))
                })
                .collect();
            let mut tone = stage.tone;
            tone.rabi *= s;
            terms.push(HamiltonianTerm::embedded(transitions, Amplitude::Tone(tone)));
        }
    }
    for d in &states {
        let mut e = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                let v = spec.interactions[i][j];
                e += v * match (d[i], d[j]) {
                    (1, 1) => 1.0,
                    (2, 2) => spec.kappa_interaction,
                    (1, 2) | (2, 1) => spec.cross_factor,
                    _ => 0.0,
                };
            }
        }
        if e != 0.0 {
            terms.push(HamiltonianTerm::energy(label(d), e));
        }
    }
    let ham = Hamiltonian::new(basis.clone(), terms)?.with_breakpoints(seq.sequence.boundaries());
    let psi0 = StateVector::basis_state(basis.clone(), &label(&vec![0; n]))?;
    let fin = propagate(&psi0, &ham, seq.sequence.start(), seq.sequence.end(), cfg)?;
    let a: Complex64 = fin.amplitudes()[0];
    Ok(a.norm_sqr().min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digit_labels() {
        assert_eq!(label(&digits(0, 2)), "1,1");
        assert_eq!(label(&digits(5, 2)), "r,r'");
        assert_eq!(label(&digits(8, 2)), "r',r'");
    }

    #[test]
    fn guards() {
        let spec = ManyBodyEchoSpec::new(vec![0.5; 5], vec![vec![0.0; 5]; 5], -1.0);
        assert!(matches!(spec.validate(), Err(Error::DimensionOverflow(_))));
        let asym = ManyBodyEchoSpec::new(vec![0.5; 2], vec![vec![0.0, 1.0], vec![2.0, 0.0]], -1.0);
        assert!(asym.validate().is_err());
        assert!(ManyBodyEchoSpec::new(vec![], vec![], -1.0).validate().is_err());
    }
}
