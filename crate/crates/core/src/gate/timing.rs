//! Pulse-edge duration optimization and the average over switch-on/off
//! timing errors drawn from an 11-point Gaussian grid per edge.

use argmin::core::{CostFunction, Executor, State, TerminationReason, TerminationStatus};
use argmin::solver::brent::BrentOpt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{step2_evolve, step2_leakages, GateInput, GateParams, GateScheme, TimingOffsets};
use crate::error::{Error, Result};
use crate::pulse::PulseEdge;
use crate::quantum::IntegratorConfig;

/// Grid points per offset: {−5σ, …, +5σ}.
pub const TIMING_GRID_POINTS: usize = 11;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DurationOptimum {
    /// Optimal pulse length T*, µs.
    pub t_star: f64,
    pub leakage_01: f64,
    pub leakage_r1: f64,
    /// Bracket handed to the line search, µs.
    pub bracket: (f64, f64),
}

struct Leak01<'a> {
    params: &'a GateParams,
    edge: PulseEdge,
    cfg: &'a IntegratorConfig,
}

impl Leak01<'_> {
    fn eval(&self, t: f64) -> Result<f64> {
        let p = self.params.with_duration(t);
        let s = step2_evolve(&p, self.edge, GateInput::Zero1, &TimingOffsets::ZERO, self.cfg)?;
        Ok(super::leakage(&s, GateInput::Zero1))
    }
}

impl CostFunction for Leak01<'_> {
    type Param = f64;
    type Output = f64;

    fn cost(&self, t: &f64) -> std::result::Result<f64, argmin::core::Error> {
        self.eval(*t).map_err(|e| argmin::core::Error::msg(e.to_string()))
    }
}

/// Pulse length minimizing the input-01 leakage for the ORIR scheme with
/// the given edges. A coarse scan around the nominal π/Δ (widened by the
/// ramp durations) brackets the minimum; Brent's method refines it.
pub fn optimize_duration(params: &GateParams, edge: PulseEdge, cfg: &IntegratorConfig) -> Result<DurationOptimum> {
    if params.scheme != GateScheme::Orir {
        return Err(Error::invalid("duration optimization applies to the ORIR scheme"));
    }
    params.validate()?;
    edge.validate()?;
    let nominal = params.nominal_duration();
    let lo = nominal * 0.98;
    let hi = nominal * 1.02 + 2.0 * (edge.rise + edge.fall);
    const SCAN: usize = 41;
    let problem = Leak01 { params, edge, cfg };
    let grid: Vec<f64> = (0..SCAN).map(|k| lo + (hi - lo) * k as f64 / (SCAN - 1) as f64).collect();
    let values = grid
        .par_iter()
        .map(|&t| problem.eval(t))
        .collect::<Result<Vec<f64>>>()?;
    let best = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .expect("nonempty scan");
    let bracket = (grid[best.saturating_sub(1)], grid[(best + 1).min(SCAN - 1)]);
    let solver = BrentOpt::new(bracket.0, bracket.1).set_tolerance(1e-10, 1e-9);
    let res = Executor::new(problem, solver)
        .configure(|s| s.max_iters(200))
        .run()
        .map_err(|e| Error::Optimizer(format!("{e} (bracket {bracket:?} µs)")))?;
    let state = res.state();
    match state.get_termination_status() {
        TerminationStatus::Terminated(TerminationReason::SolverConverged) => {}
        other => {
            return Err(Error::Optimizer(format!(
                "line search stopped without converging ({other:?}) in bracket {bracket:?} µs"
            )))
        }
    }
    let t_star = *state.get_best_param().expect("converged search has a best point");
    let (leakage_01, leakage_r1) = step2_leakages(&params.with_duration(t_star), edge, &TimingOffsets::ZERO, cfg)?;
    Ok(DurationOptimum {
        t_star,
        leakage_01,
        leakage_r1,
        bracket,
    })
}

/// One point of the timing-error grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimingSample {
    pub offsets: TimingOffsets,
    /// Unnormalized product of Gaussian densities.
    pub weight: f64,
    pub leakage_01: f64,
    pub leakage_r1: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimingAverage {
    pub sigma: f64,
    pub leakage_01: f64,
    pub leakage_r1: f64,
    pub samples: usize,
}

fn grid_offsets(sigma: f64) -> [f64; TIMING_GRID_POINTS] {
    let half = (TIMING_GRID_POINTS / 2) as f64;
    std::array::from_fn(|k| (k as f64 - half) * sigma)
}

/// Evaluates both leakages for every one of the 11⁴ offset tuples
/// (start±, end±) with pulse length `t_star`. `sigma` in µs.
pub fn timing_error_samples(
    params: &GateParams,
    edge: PulseEdge,
    t_star: f64,
    sigma: f64,
    cfg: &IntegratorConfig,
) -> Result<Vec<TimingSample>> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::invalid(format!("σ_t must be > 0, got {sigma}")));
    }
    if params.scheme != GateScheme::Orir {
        return Err(Error::invalid("timing-error averaging applies to the ORIR scheme"));
    }
    let params = params.with_duration(t_star);
    params.validate()?;
    let offs = grid_offsets(sigma);
    // Density factors exp(−x²/2σ²); normalization cancels in the weighted mean.
    let dens = offs.map(|x| (-(x * x) / (2.0 * sigma * sigma)).exp());
    let n = TIMING_GRID_POINTS;
    (0..n.pow(4))
        .into_par_iter()
        .map(|idx| {
            let (a, b, c, d) = (idx / (n * n * n), (idx / (n * n)) % n, (idx / n) % n, idx % n);
            let offsets = TimingOffsets {
                start_plus: offs[a],
                start_minus: offs[b],
                end_plus: offs[c],
                end_minus: offs[d],
            };
            let (leakage_01, leakage_r1) = step2_leakages(&params, edge, &offsets, cfg)?;
            Ok(TimingSample {
                offsets,
                weight: dens[a] * dens[b] * dens[c] * dens[d],
                leakage_01,
                leakage_r1,
            })
        })
        .collect()
}

/// Compensated running sum.
#[derive(Default)]
struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Weighted means `(leakage_01, leakage_r1)`, renormalized by the weight sum.
pub fn weighted_average(samples: &[TimingSample]) -> Result<(f64, f64)> {
    let (mut w, mut a, mut b) = (Neumaier::default(), Neumaier::default(), Neumaier::default());
    for s in samples {
        w.add(s.weight);
        a.add(s.weight * s.leakage_01);
        b.add(s.weight * s.leakage_r1);
    }
    let total = w.value();
    if !(total > 0.0) {
        return Err(Error::invalid("timing samples carry no weight"));
    }
    Ok((a.value() / total, b.value() / total))
}

/// Gaussian-weighted average leakages over the timing-error grid.
pub fn timing_error_average(
    params: &GateParams,
    edge: PulseEdge,
    t_star: f64,
    sigma: f64,
    cfg: &IntegratorConfig,
) -> Result<TimingAverage> {
    let samples = timing_error_samples(params, edge, t_star, sigma, cfg)?;
    let (leakage_01, leakage_r1) = weighted_average(&samples)?;
    Ok(TimingAverage {
        sigma,
        leakage_01,
        leakage_r1,
        samples: samples.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_symmetric() {
        let g = grid_offsets(2.0);
        assert_eq!(g[0], -10.0);
        assert_eq!(g[5], 0.0);
        assert_eq!(g[10], 10.0);
    }

    #[test]
    fn compensated_sum() {
        let mut s = Neumaier::default();
        for x in [1.0, 1e100, 1.0, -1e100] {
            s.add(x);
        }
        assert_eq!(s.value(), 2.0);
    }

    #[test]
    fn rejects_bad_sigma() {
        let p = GateParams::orir(1.0, 12.0, 12.0);
        let cfg = IntegratorConfig::default();
        assert!(timing_error_samples(&p, PulseEdge::RECTANGULAR, p.duration, 0.0, &cfg).is_err());
        let t = GateParams::traditional(1.0, 12.0, 12.0);
        assert!(optimize_duration(&t, PulseEdge::RECTANGULAR, &cfg).is_err());
    }
}
