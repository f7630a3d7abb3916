use std::sync::Arc;

use num_complex::Complex64;

use super::{LevelBasis, StateVector};
use crate::error::{Error, Result};

/// States sampled on a strictly increasing time grid (µs).
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    basis: Arc<LevelBasis>,
    times: Vec<f64>,
    amplitudes: Vec<Vec<Complex64>>,
}

impl Trajectory {
    pub(crate) fn new(basis: Arc<LevelBasis>) -> Self {
        Self {
            basis,
            times: Vec::new(),
            amplitudes: Vec::new(),
        }
    }

    pub(crate) fn push(&mut self, t: f64, amps: &[Complex64]) {
        debug_assert!(self.times.last().map_or(true, |&last| t > last));
        self.times.push(t);
        self.amplitudes.push(amps.to_vec());
    }

    pub fn basis(&self) -> &Arc<LevelBasis> {
        &self.basis
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn amplitudes(&self, i: usize) -> &[Complex64] {
        &self.amplitudes[i]
    }

    pub fn state(&self, i: usize) -> StateVector {
        StateVector::from_raw(self.basis.clone(), self.amplitudes[i].clone())
            .expect("trajectory snapshots match their basis")
    }

    pub fn final_state(&self) -> StateVector {
        self.state(self.len() - 1)
    }

    /// Population of `label` at every sample.
    pub fn populations(&self, label: &str) -> Result<Vec<f64>> {
        let i = self.basis.index_of(label)?;
        Ok(self.amplitudes.iter().map(|a| a[i].norm_sqr()).collect())
    }

    /// Summed population of `labels` at every sample.
    pub fn population_sum(&self, labels: &[&str]) -> Result<Vec<f64>> {
        let idx = labels
            .iter()
            .map(|l| self.basis.index_of(l))
            .collect::<Result<Vec<_>>>()?;
        Ok(self
            .amplitudes
            .iter()
            .map(|a| idx.iter().map(|&i| a[i].norm_sqr()).sum())
            .collect())
    }

    /// Largest |‖ψ(t)‖ − 1| over the samples.
    pub fn max_norm_error(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| (a.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Concatenates a trajectory that starts where this one ends.
    pub fn append(&mut self, other: Trajectory) -> Result<()> {
        if *other.basis != *self.basis {
            return Err(Error::BasisMismatch("cannot append trajectories on different bases".into()));
        }
        for (t, a) in other.times.into_iter().zip(other.amplitudes) {
            match self.times.last() {
                Some(&last) if t <= last => continue,
                _ => {
                    self.times.push(t);
                    self.amplitudes.push(a);
                }
            }
        }
        Ok(())
    }
}
