use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::LevelBasis;
use crate::error::Result;
use crate::pulse::Tone;

pub type ComplexFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// Time dependence of a Hamiltonian term, in rad/µs.
#[derive(Clone)]
pub enum Amplitude {
    Constant(Complex64),
    Tone(Tone),
    Function(ComplexFn),
}

impl Amplitude {
    pub fn function<F>(f: F) -> Self
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        Amplitude::Function(Arc::new(f))
    }

    #[inline]
    pub fn value(&self, t: f64) -> Complex64 {
        match self {
            Amplitude::Constant(c) => *c,
            Amplitude::Tone(tone) => tone.value(t),
            Amplitude::Function(f) => f(t),
        }
    }

    /// Times at which the amplitude may be discontinuous or kinked.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Amplitude::Tone(tone) => tone.breakpoints(),
            _ => Vec::new(),
        }
    }
}

impl fmt::Debug for Amplitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Amplitude::Constant(c) => f.debug_tuple("Constant").field(c).finish(),
            Amplitude::Tone(t) => f.debug_tuple("Tone").field(t).finish(),
            Amplitude::Function(_) => f.write_str("Function(..)"),
        }
    }
}

/// `a(t)·Σ|upper⟩⟨lower|` plus its Hermitian conjugate.
///
/// A term with `upper == lower` is an energy shift and contributes the real
/// part of `a(t)` to the diagonal. Several transitions may share one
/// amplitude, which is how single-atom couplings are embedded in a product
/// basis.
#[derive(Debug, Clone)]
pub struct HamiltonianTerm {
    pub transitions: Vec<(String, String)>,
    pub amplitude: Amplitude,
}

impl HamiltonianTerm {
    pub fn coupling(upper: impl Into<String>, lower: impl Into<String>, amplitude: Amplitude) -> Self {
        Self {
            transitions: vec![(upper.into(), lower.into())],
            amplitude,
        }
    }

    pub fn constant(upper: impl Into<String>, lower: impl Into<String>, value: Complex64) -> Self {
        Self::coupling(upper, lower, Amplitude::Constant(value))
    }

    /// Constant energy `value` on `level`.
    pub fn energy(level: impl Into<String>, value: f64) -> Self {
        let level = level.into();
        Self::coupling(level.clone(), level, Amplitude::Constant(Complex64::new(value, 0.0)))
    }

    pub fn embedded(transitions: Vec<(String, String)>, amplitude: Amplitude) -> Self {
        Self {
            transitions,
            amplitude,
        }
    }
}

#[derive(Debug, Clone)]
struct CompiledTerm {
    pairs: Vec<(usize, usize)>,
    amplitude: Amplitude,
}

/// A time-dependent Hermitian Hamiltonian on a fixed basis, with level
/// labels resolved to indices.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    basis: Arc<LevelBasis>,
    terms: Vec<CompiledTerm>,
    breakpoints: Vec<f64>,
}

impl Hamiltonian {
    pub fn new(basis: Arc<LevelBasis>, terms: Vec<HamiltonianTerm>) -> Result<Self> {
        let mut compiled = Vec::with_capacity(terms.len());
        let mut breakpoints = Vec::new();
        for term in terms {
            let pairs = term
                .transitions
                .iter()
                .map(|(u, l)| Ok((basis.index_of(u)?, basis.index_of(l)?)))
                .collect::<Result<Vec<_>>>()?;
            breakpoints.extend(term.amplitude.breakpoints());
            compiled.push(CompiledTerm {
                pairs,
                amplitude: term.amplitude,
            });
        }
        breakpoints.retain(|t| t.is_finite());
        breakpoints.sort_by(f64::total_cmp);
        breakpoints.dedup();
        Ok(Self {
            basis,
            terms: compiled,
            breakpoints,
        })
    }

    /// Adds times at which the integrator must restart a step.
    pub fn with_breakpoints(mut self, extra: impl IntoIterator<Item = f64>) -> Self {
        self.breakpoints.extend(extra.into_iter().filter(|t| t.is_finite()));
        self.breakpoints.sort_by(f64::total_cmp);
        self.breakpoints.dedup();
        self
    }

    pub fn basis(&self) -> &Arc<LevelBasis> {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// H(t) as a dense matrix.
    pub fn matrix(&self, t: f64) -> DMatrix<Complex64> {
        let n = self.dim();
        let mut h = DMatrix::zeros(n, n);
        for term in &self.terms {
            let a = term.amplitude.value(t);
            for &(i, j) in &term.pairs {
                if i == j {
                    h[(i, i)] += Complex64::new(a.re, 0.0);
                } else {
                    h[(i, j)] += a;
                    h[(j, i)] += a.conj();
                }
            }
        }
        h
    }

    /// `out = −i·H(t)·psi`, the Schrödinger right-hand side.
    #[inline]
    pub fn derivative(&self, t: f64, psi: &[Complex64], out: &mut [Complex64]) {
        out.iter_mut().for_each(|o| *o = Complex64::new(0.0, 0.0));
        for term in &self.terms {
            let a = term.amplitude.value(t);
            if a.re == 0.0 && a.im == 0.0 {
                continue;
            }
            for &(i, j) in &term.pairs {
                if i == j {
                    out[i] += Complex64::new(0.0, -a.re) * psi[i];
                } else {
                    // −i·a and −i·a* applied to the two off-diagonal entries.
                    out[i] += Complex64::new(a.im, -a.re) * psi[j];
                    out[j] += Complex64::new(-a.im, -a.re) * psi[i];
                }
            }
        }
    }
}

/// H(t) for `terms` on `basis`; fails on any unknown level label.
pub fn assemble_hamiltonian(
    basis: &Arc<LevelBasis>,
    terms: &[HamiltonianTerm],
    t: f64,
) -> Result<DMatrix<Complex64>> {
    Ok(Hamiltonian::new(basis.clone(), terms.to_vec())?.matrix(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn constant_two_level() {
        let basis = Arc::new(LevelBasis::new(["g", "e"]).unwrap());
        let omega = 3.0;
        let h = assemble_hamiltonian(
            &basis,
            &[HamiltonianTerm::constant("e", "g", c(omega / 2.0, 0.0))],
            0.7,
        )
        .unwrap();
        assert_eq!(h[(0, 0)], c(0.0, 0.0));
        assert_eq!(h[(1, 0)], c(1.5, 0.0));
        assert_eq!(h[(0, 1)], c(1.5, 0.0));
        assert_eq!(h[(1, 1)], c(0.0, 0.0));
    }

    #[test]
    fn counter_rotating_pair_gives_sine_coupling() {
        let basis = Arc::new(LevelBasis::new(["1", "r"]).unwrap());
        let (omega, delta) = (2.0, 5.0);
        let terms = vec![
            HamiltonianTerm::coupling("r", "1", Amplitude::Tone(Tone::continuous(omega, delta, 0.0))),
            HamiltonianTerm::coupling("r", "1", Amplitude::Tone(Tone::continuous(omega, -delta, PI))),
        ];
        let t = PI / (2.0 * delta);
        let h = assemble_hamiltonian(&basis, &terms, t).unwrap();
        assert!((h[(1, 0)] - c(0.0, omega)).norm() < 1e-14);
        assert!((h[(0, 1)] - c(0.0, -omega)).norm() < 1e-14);
    }

    #[test]
    fn unknown_label_fails() {
        let basis = Arc::new(LevelBasis::new(["g", "e"]).unwrap());
        let err = assemble_hamiltonian(&basis, &[HamiltonianTerm::energy("x", 1.0)], 0.0).unwrap_err();
        assert!(matches!(err, Error::UnknownLevel { ref label, .. } if label == "x"));
    }

    #[test]
    fn derivative_matches_matrix() {
        let basis = Arc::new(LevelBasis::new(["a", "b", "c"]).unwrap());
        let terms = vec![
            HamiltonianTerm::coupling("b", "a", Amplitude::Tone(Tone::continuous(1.3, 0.4, 0.2))),
            HamiltonianTerm::constant("c", "b", c(0.3, -0.8)),
            HamiltonianTerm::energy("c", 2.5),
        ];
        let ham = Hamiltonian::new(basis, terms).unwrap();
        let psi = [c(0.3, 0.1), c(-0.2, 0.5), c(0.6, -0.4)];
        let mut out = [c(0.0, 0.0); 3];
        ham.derivative(0.37, &psi, &mut out);
        let h = ham.matrix(0.37);
        for i in 0..3 {
            let expect: Complex64 = (0..3).map(|j| c(0.0, -1.0) * h[(i, j)] * psi[j]).sum();
            assert!((out[i] - expect).norm() < 1e-15);
        }
    }
}
