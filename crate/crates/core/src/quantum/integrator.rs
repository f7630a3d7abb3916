//! Adaptive Gragg–Bulirsch–Stoer integration of the Schrödinger equation.
//!
//! Each step runs the modified midpoint rule with n = 2, 4, 6, … substeps and
//! Richardson-extrapolates the results in h². The difference between the
//! last two diagonal entries of the extrapolation table is the embedded
//! error estimate. Integration is restarted at every Hamiltonian breakpoint
//! and lands exactly on every requested sample time.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::Hamiltonian;
use crate::error::{Error, Result};

/// Number of extrapolation columns tried before a step is rejected.
const MAX_COLUMNS: usize = 10;
/// Columns required before the error estimate is trusted.
const MIN_COLUMNS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub rtol: f64,
    pub atol: f64,
    /// Largest step in µs; `None` for no limit.
    pub max_step: Option<f64>,
    /// Spacing of trajectory samples in µs.
    pub sample_interval: f64,
    pub max_steps: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            rtol: 1e-12,
            atol: 1e-14,
            max_step: None,
            sample_interval: 1e-3,
            max_steps: 2_000_000,
        }
    }
}

impl IntegratorConfig {
    pub fn with_tolerances(mut self, rtol: f64, atol: f64) -> Self {
        self.rtol = rtol;
        self.atol = atol;
        self
    }

    pub fn with_sample_interval(mut self, dt: f64) -> Self {
        self.sample_interval = dt;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rtol > 0.0 && self.atol > 0.0) {
            return Err(Error::invalid(format!(
                "tolerances must be > 0 (rtol {}, atol {})",
                self.rtol, self.atol
            )));
        }
        if !(self.sample_interval > 0.0) {
            return Err(Error::invalid(format!(
                "sample interval must be > 0, got {}",
                self.sample_interval
            )));
        }
        if let Some(h) = self.max_step {
            if !(h > 0.0) {
                return Err(Error::invalid(format!("max step must be > 0, got {h}")));
            }
        }
        Ok(())
    }
}

/// Step statistics, mostly for benchmarks and diagnostics.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IntegratorStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

pub(crate) struct Integrator<'a> {
    ham: &'a Hamiltonian,
    cfg: IntegratorConfig,
    dim: usize,
    h: f64,
    /// Largest time strictly inside the current smooth interval; the
    /// Hamiltonian may switch exactly at the interval end.
    edge: f64,
    pub(crate) stats: IntegratorStats,
    table: Vec<Vec<Complex64>>,
    z_prev: Vec<Complex64>,
    z_curr: Vec<Complex64>,
    f0: Vec<Complex64>,
    f: Vec<Complex64>,
}

fn substeps(k: usize) -> usize {
    2 * (k + 1)
}

impl<'a> Integrator<'a> {
    pub(crate) fn new(ham: &'a Hamiltonian, cfg: IntegratorConfig) -> Self {
        let dim = ham.dim();
        let zero = vec![Complex64::new(0.0, 0.0); dim];
        Self {
            ham,
            cfg,
            dim,
            h: 0.0,
            edge: f64::INFINITY,
            stats: IntegratorStats::default(),
            table: vec![zero.clone(); MAX_COLUMNS],
            z_prev: zero.clone(),
            z_curr: zero.clone(),
            f0: zero.clone(),
            f: zero,
        }
    }

    /// Advances `y` from `t0` to `t1` through every breakpoint in between.
    pub(crate) fn advance(&mut self, y: &mut [Complex64], t0: f64, t1: f64) -> Result<()> {
        let mut stops: Vec<f64> = self
            .ham
            .breakpoints()
            .iter()
            .copied()
            .filter(|&b| b > t0 && b < t1)
            .collect();
        stops.push(t1);
        let mut t = t0;
        for stop in stops {
            self.smooth_interval(y, t, stop)?;
            t = stop;
        }
        Ok(())
    }

    fn initial_step(&self, span: f64) -> f64 {
        let mut h = span.min(0.05);
        if let Some(m) = self.cfg.max_step {
            h = h.min(m);
        }
        h
    }

    fn smooth_interval(&mut self, y: &mut [Complex64], t0: f64, t1: f64) -> Result<()> {
        let span = t1 - t0;
        if span <= 0.0 {
            return Ok(());
        }
        if self.h <= 0.0 {
            self.h = self.initial_step(span);
        }
        self.edge = t1.next_down();
        let mut t = t0;
        // Sub-ulp remainders are absorbed into the last step.
        let eps = 4.0 * f64::EPSILON * t1.abs().max(span).max(1.0);
        while t1 - t > eps {
            let mut h = self.h;
            if let Some(m) = self.cfg.max_step {
                h = h.min(m);
            }
            let last = t + h >= t1 - eps;
            if last {
                h = t1 - t;
            }
            loop {
                if self.stats.accepted + self.stats.rejected >= self.cfg.max_steps {
                    return Err(Error::NonConvergence(format!(
                        "exceeded {} steps at t = {t} µs (h = {h:e} µs)",
                        self.cfg.max_steps
                    )));
                }
                if h < 1e-14 * t.abs().max(span).max(1e-6) {
                    return Err(Error::StepUnderflow { t, h });
                }
                match self.try_step(y, t, h) {
                    Ok(next_h) => {
                        self.stats.accepted += 1;
                        let reached = t + h >= t1 - eps;
                        t = if reached { t1 } else { t + h };
                        // A clipped final step says little about the natural step size.
                        self.h = if reached && last { self.h.max(next_h) } else { next_h };
                        break;
                    }
                    Err(shrunk) => {
                        self.stats.rejected += 1;
                        h = shrunk;
                        self.h = shrunk;
                    }
                }
            }
            if t >= t1 {
                break;
            }
        }
        Ok(())
    }

    fn midpoint(&mut self, y: &[Complex64], t: f64, big_h: f64, n: usize, column: usize) {
        let hs = big_h / n as f64;
        let dim = self.dim;
        // z0 = y, z1 = y + hs f(t, y)
        self.z_prev.copy_from_slice(y);
        for i in 0..dim {
            self.z_curr[i] = y[i] + self.f0[i] * hs;
        }
        for m in 1..n {
            self.ham.derivative(t + m as f64 * hs, &self.z_curr, &mut self.f);
            self.stats.evaluations += 1;
            for i in 0..dim {
                let next = self.z_prev[i] + self.f[i] * (2.0 * hs);
                self.z_prev[i] = self.z_curr[i];
                self.z_curr[i] = next;
            }
        }
        self.ham.derivative((t + big_h).min(self.edge), &self.z_curr, &mut self.f);
        self.stats.evaluations += 1;
        let out = &mut self.table[column];
        for i in 0..dim {
            out[i] = (self.z_curr[i] + self.z_prev[i] + self.f[i] * hs) * 0.5;
        }
    }

    fn error_norm(&self, y: &[Complex64], hi: &[Complex64], lo: &[Complex64]) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.dim {
            let sc = self.cfg.atol + self.cfg.rtol * y[i].norm().max(hi[i].norm());
            acc += ((hi[i] - lo[i]).norm() / sc).powi(2);
        }
        (acc / self.dim as f64).sqrt()
    }

    /// One extrapolated step of size `h`. On success `y` is advanced and the
    /// proposed next step is returned; on failure the shrunk step is returned.
    fn try_step(&mut self, y: &mut [Complex64], t: f64, h: f64) -> std::result::Result<f64, f64> {
        self.ham.derivative(t, y, &mut self.f0);
        self.stats.evaluations += 1;
        let mut err = f64::INFINITY;
        // `table[j]` holds the current row of the Neville tableau.
        let mut prev_row: Vec<Vec<Complex64>> = Vec::with_capacity(MAX_COLUMNS);
        for k in 0..MAX_COLUMNS {
            self.midpoint(y, t, h, substeps(k), k);
            let mut row: Vec<Vec<Complex64>> = Vec::with_capacity(k + 1);
            row.push(self.table[k].clone());
            for j in 1..=k {
                let ratio = substeps(k) as f64 / substeps(k - j) as f64;
                let denom = ratio * ratio - 1.0;
                let a = &row[j - 1];
                let b = &prev_row[j - 1];
                let next: Vec<Complex64> =
                    a.iter().zip(b).map(|(x, z)| x + (x - z) / denom).collect();
                row.push(next);
            }
            if k >= 1 {
                err = self.error_norm(y, &row[k], &row[k - 1]);
                if k + 1 >= MIN_COLUMNS && err <= 1.0 {
                    y.copy_from_slice(&row[k]);
                    let order = (2 * k + 1) as f64;
                    let mut fac = if err == 0.0 {
                        4.0
                    } else {
                        (0.94 * (0.65 / err).powf(1.0 / order)).clamp(0.2, 4.0)
                    };
                    if k + 1 == MAX_COLUMNS {
                        fac = fac.min(1.0);
                    } else if k + 1 == MIN_COLUMNS {
                        fac = fac.max(1.2);
                    }
                    return Ok(h * fac);
                }
            }
            prev_row = row;
        }
        let order = (2 * MAX_COLUMNS - 1) as f64;
        let fac = if err.is_finite() {
            (0.94 * (0.65 / err).powf(1.0 / order)).clamp(0.05, 0.5)
        } else {
            0.1
        };
        Err(h * fac)
    }
}
