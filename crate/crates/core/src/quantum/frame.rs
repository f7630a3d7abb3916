use std::sync::Arc;

use num_complex::Complex64;

use super::{LevelBasis, StateVector};
use crate::error::{Error, Result};

/// Diagonal rotating-frame change `|ψ'⟩ = U(t)|ψ⟩` with
/// `U(t) = Σ exp(i·rate·(t − reference))|level⟩⟨level|`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameTransform {
    basis: Arc<LevelBasis>,
    rates: Vec<f64>,
    reference: f64,
}

impl FrameTransform {
    /// Rates in rad/µs for the named levels; unnamed levels get rate 0.
    pub fn new(basis: Arc<LevelBasis>, rates: &[(&str, f64)], reference: f64) -> Result<Self> {
        let mut r = vec![0.0; basis.dim()];
        for &(label, rate) in rates {
            if !rate.is_finite() {
                return Err(Error::invalid(format!("frame rate for {label} is not finite")));
            }
            r[basis.index_of(label)?] += rate;
        }
        Ok(Self {
            basis,
            rates: r,
            reference,
        })
    }

    pub fn identity(basis: Arc<LevelBasis>) -> Self {
        let rates = vec![0.0; basis.dim()];
        Self {
            basis,
            rates,
            reference: 0.0,
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            basis: self.basis.clone(),
            rates: self.rates.iter().map(|r| -r).collect(),
            reference: self.reference,
        }
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    pub fn reference(&self) -> f64 {
        self.reference
    }

    /// Phase factors `exp(i·rate·(t − reference))` per level.
    pub fn phases(&self, t: f64) -> Vec<Complex64> {
        self.rates
            .iter()
            .map(|r| Complex64::from_polar(1.0, r * (t - self.reference)))
            .collect()
    }
}

/// Applies `frame` at time `t` to `state`.
pub fn apply_frame(state: &StateVector, frame: &FrameTransform, t: f64) -> Result<StateVector> {
    if state.basis() != &frame.basis && **state.basis() != *frame.basis {
        return Err(Error::BasisMismatch(format!(
            "state basis {} vs frame basis {}",
            state.basis(),
            frame.basis
        )));
    }
    let amps = state
        .amplitudes()
        .iter()
        .zip(frame.phases(t))
        .map(|(a, p)| a * p)
        .collect();
    StateVector::from_raw(state.basis().clone(), amps)
}
