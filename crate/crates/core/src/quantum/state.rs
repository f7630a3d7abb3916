use std::sync::Arc;

use num_complex::Complex64;

use super::LevelBasis;
use crate::error::{Error, Result};

/// Tolerance on |‖ψ‖ − 1| accepted for a state vector.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Normalized complex amplitudes over a [`LevelBasis`].
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    basis: Arc<LevelBasis>,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Builds a state, checking length and normalization.
    pub fn new(basis: Arc<LevelBasis>, amplitudes: Vec<Complex64>) -> Result<Self> {
        let state = Self::from_raw(basis, amplitudes)?;
        let norm = state.norm();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized(norm));
        }
        Ok(state)
    }

    /// Builds a state and rescales it to unit norm.
    pub fn normalized(basis: Arc<LevelBasis>, amplitudes: Vec<Complex64>) -> Result<Self> {
        let mut state = Self::from_raw(basis, amplitudes)?;
        let norm = state.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized(norm));
        }
        state.amplitudes.iter_mut().for_each(|a| *a /= norm);
        Ok(state)
    }

    /// The basis state labeled `label`.
    pub fn basis_state(basis: Arc<LevelBasis>, label: &str) -> Result<Self> {
        let index = basis.index_of(label)?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); basis.dim()];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self { basis, amplitudes })
    }

    pub(crate) fn from_raw(basis: Arc<LevelBasis>, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != basis.dim() {
            return Err(Error::BasisMismatch(format!(
                "{} amplitudes for a basis of dimension {}",
                amplitudes.len(),
                basis.dim()
            )));
        }
        Ok(Self { basis, amplitudes })
    }

    pub fn basis(&self) -> &Arc<LevelBasis> {
        &self.basis
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn amplitude(&self, label: &str) -> Result<Complex64> {
        Ok(self.amplitudes[self.basis.index_of(label)?])
    }

    pub fn population(&self, label: &str) -> Result<f64> {
        Ok(self.amplitude(label)?.norm_sqr())
    }

    pub fn populations(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        self.check_same_basis(other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub(crate) fn check_same_basis(&self, other: &StateVector) -> Result<()> {
        if Arc::ptr_eq(&self.basis, &other.basis) || self.basis == other.basis {
            Ok(())
        } else {
            Err(Error::BasisMismatch(format!(
                "{} vs {}",
                self.basis, other.basis
            )))
        }
    }
}

/// |⟨a|b⟩|², clamped to [0, 1].
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr().clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn qubit() -> Arc<LevelBasis> {
        Arc::new(LevelBasis::new(["g", "e"]).unwrap())
    }

    #[test]
    fn fidelity_examples() {
        let b = qubit();
        let g = StateVector::basis_state(b.clone(), "g").unwrap();
        let e = StateVector::basis_state(b.clone(), "e").unwrap();
        let plus = StateVector::new(
            b,
            vec![Complex64::new(FRAC_1_SQRT_2, 0.0), Complex64::new(FRAC_1_SQRT_2, 0.0)],
        )
        .unwrap();
        assert_eq!(fidelity(&g, &g).unwrap(), 1.0);
        assert_eq!(fidelity(&g, &e).unwrap(), 0.0);
        assert!((fidelity(&plus, &g).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn basis_mismatch_is_reported() {
        let g = StateVector::basis_state(qubit(), "g").unwrap();
        let other = Arc::new(LevelBasis::new(["1", "r"]).unwrap());
        let one = StateVector::basis_state(other, "1").unwrap();
        assert!(matches!(fidelity(&g, &one), Err(Error::BasisMismatch(_))));
    }

    #[test]
    fn rejects_unnormalized() {
        let err = StateVector::new(qubit(), vec![Complex64::new(1.0, 0.0); 2]).unwrap_err();
        assert!(matches!(err, Error::NotNormalized(_)));
        let ok = StateVector::normalized(qubit(), vec![Complex64::new(1.0, 0.0); 2]).unwrap();
        assert!((ok.norm() - 1.0).abs() < 1e-15);
    }
}
