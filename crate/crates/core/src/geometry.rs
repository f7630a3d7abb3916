//! Gaussian beams crossing a cubic lattice: per-site Rabi scaling, vdW
//! falloff, addressable lattice sizes and the ORIR phase mismatch.
//!
//! Lengths are in µm.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::SPEED_OF_LIGHT;

/// Tolerance applied when flooring `0.13·𝓛/λ` to an integer.
pub const LATTICE_FLOOR_EPS: f64 = 1e-9;
/// Coefficient of 𝓛/λ in the addressable-lattice bound.
pub const LATTICE_BOUND_COEFF: f64 = 0.13;
/// Default transverse offset of the nearest nontarget atom, in units of 𝓛.
pub const DEFAULT_TRANSVERSE_OFFSET: f64 = 0.46;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamSpec {
    /// Propagation direction as a lattice vector, e.g. [1, 2, -1].
    pub direction: [i32; 3],
    /// Waist radius w(0).
    pub waist: f64,
    pub wavelength: f64,
    /// Focus position.
    pub focus: [f64; 3],
}

impl BeamSpec {
    pub fn new(direction: [i32; 3], waist: f64, wavelength: f64, focus: [f64; 3]) -> Result<Self> {
        let beam = Self {
            direction,
            waist,
            wavelength,
            focus,
        };
        beam.validate()?;
        Ok(beam)
    }

    pub fn validate(&self) -> Result<()> {
        if self.direction == [0, 0, 0] {
            return Err(Error::invalid("beam direction must be nonzero"));
        }
        if !(self.waist > 0.0 && self.wavelength > 0.0) {
            return Err(Error::invalid(format!(
                "waist and wavelength must be > 0 (got {}, {})",
                self.waist, self.wavelength
            )));
        }
        if self.focus.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("beam focus must be finite"));
        }
        Ok(())
    }

    pub fn rayleigh_length(&self) -> f64 {
        rayleigh_length(self.waist, self.wavelength)
    }

    fn unit(&self) -> [f64; 3] {
        let d = self.direction.map(f64::from);
        let n = norm(d);
        d.map(|x| x / n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeSpec {
    /// Lattice constant 𝓛.
    pub constant: f64,
    pub dims: [usize; 3],
}

impl LatticeSpec {
    pub fn new(constant: f64, dims: [usize; 3]) -> Result<Self> {
        if !(constant > 0.0 && constant.is_finite()) {
            return Err(Error::invalid(format!("lattice constant must be > 0, got {constant}")));
        }
        if dims.iter().any(|&n| n == 0) {
            return Err(Error::invalid(format!("lattice dimensions must be >= 1, got {dims:?}")));
        }
        Ok(Self { constant, dims })
    }

    /// Integer site indices, x slowest.
    pub fn indices(&self) -> Vec<[usize; 3]> {
        let [nx, ny, nz] = self.dims;
        (0..nx)
            .flat_map(|i| (0..ny).flat_map(move |j| (0..nz).map(move |k| [i, j, k])))
            .collect()
    }

    pub fn position(&self, index: [usize; 3]) -> [f64; 3] {
        index.map(|i| i as f64 * self.constant)
    }

    pub fn sites(&self) -> Vec<[f64; 3]> {
        self.indices().into_iter().map(|i| self.position(i)).collect()
    }

    /// Centre of the lattice (a site when every dimension is odd).
    pub fn center(&self) -> [f64; 3] {
        self.dims.map(|n| (n as f64 - 1.0) / 2.0 * self.constant)
    }
}

/// `V(d) = V₀ (𝓛/d)⁶`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InteractionModel {
    /// Interaction at distance `constant`, rad/µs.
    pub v0: f64,
    pub constant: f64,
}

fn norm(v: [f64; 3]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Rayleigh length `X = π w₀² / λ`.
pub fn rayleigh_length(w0: f64, lambda: f64) -> f64 {
    PI * w0 * w0 / lambda
}

/// Beam radius `w(l) = w₀ √(X² + l²) / X` at distance `l` from the focus.
pub fn beam_radius(l: f64, w0: f64, lambda: f64) -> f64 {
    let x = rayleigh_length(w0, lambda);
    w0 * (x * x + l * l).sqrt() / x
}

/// `(l∥, r⊥)`: components of `site − focus` along and across the beam.
pub fn perpendicular_distance(site: [f64; 3], beam: &BeamSpec) -> Result<(f64, f64)> {
    beam.validate()?;
    let u = beam.unit();
    let rel = [0, 1, 2].map(|i| site[i] - beam.focus[i]);
    let along: f64 = rel.iter().zip(u).map(|(r, u)| r * u).sum();
    let perp = [0, 1, 2].map(|i| rel[i] - along * u[i]);
    Ok((along, norm(perp)))
}

/// Relative Rabi frequency at `site`:
/// `X/√(X² + l∥²) · exp(−r⊥²/w(l∥)²)`.
pub fn rabi_scale(site: [f64; 3], beam: &BeamSpec) -> Result<f64> {
    let (l, r) = perpendicular_distance(site, beam)?;
    let x = beam.rayleigh_length();
    let w = beam_radius(l, beam.waist, beam.wavelength);
    Ok(x / (x * x + l * l).sqrt() * (-(r * r) / (w * w)).exp())
}

pub fn vdw_interaction(model: &InteractionModel, distance: f64) -> Result<f64> {
    if !(distance > 0.0) {
        return Err(Error::invalid(format!("distance must be > 0, got {distance}")));
    }
    Ok(model.v0 * (model.constant / distance).powi(6))
}

/// Largest `(1+N)×(1+2N)×(1+N)` lattice whose sites can be addressed
/// individually, with `N = ⌊0.13 𝓛/λ⌋` (values within 1e-9 of an integer
/// round up to it).
pub fn max_addressable_lattice(constant: f64, lambda: f64) -> Result<([usize; 3], usize)> {
    if !(constant > 0.0 && lambda > 0.0) {
        return Err(Error::invalid("lattice constant and wavelength must be > 0"));
    }
    let n = (LATTICE_BOUND_COEFF * constant / lambda + LATTICE_FLOOR_EPS).floor() as usize;
    Ok(([1 + n, 1 + 2 * n, 1 + n], n))
}

/// Distance from the focus beyond which the beam radius necessarily
/// exceeds `r_perp0` whatever the waist: since `w(l) ≥ √(2λl/π)`, this is
/// `π r⊥₀² / (2λ)`.
pub fn distance_bound(constant: f64, lambda: f64, r_perp0: Option<f64>) -> Result<f64> {
    if !(constant > 0.0 && lambda > 0.0) {
        return Err(Error::invalid("lattice constant and wavelength must be > 0"));
    }
    let r = r_perp0.unwrap_or(DEFAULT_TRANSVERSE_OFFSET * constant);
    if !(r > 0.0) {
        return Err(Error::invalid(format!("transverse offset must be > 0, got {r}")));
    }
    Ok(PI * r * r / (2.0 * lambda))
}

/// Relative phase `2(Δ + δ₂ − δ₁) z / c` of the two ORIR tones after
/// propagating `z` µm; frequencies in rad/µs.
pub fn orir_phase_mismatch(z: f64, delta: f64, delta1: f64, delta2: f64) -> f64 {
    2.0 * (delta + delta2 - delta1) * z / SPEED_OF_LIGHT
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::mhz;

    fn par_beam() -> BeamSpec {
        BeamSpec::new([1, 2, -1], 2.540, 0.78, [0.0; 3]).unwrap()
    }

    #[test]
    fn rayleigh_examples() {
        assert!((rayleigh_length(2.540, 0.78) - 26.0).abs() < 0.05);
        let x = rayleigh_length(1.3, 0.5);
        assert!((rayleigh_length(2.6, 0.5) / x - 4.0).abs() < 1e-12);
        assert!((rayleigh_length(1.3, 1.0) / x - 0.5).abs() < 1e-12);
    }

    #[test]
    fn radius_examples() {
        let (w0, lam) = (2.0, 0.8);
        let x = rayleigh_length(w0, lam);
        assert_eq!(beam_radius(0.0, w0, lam), w0);
        assert!((beam_radius(x, w0, lam) - 2f64.sqrt() * w0).abs() < 1e-12);
        for l in [10.0 * x, 100.0 * x] {
            assert!(beam_radius(l, w0, lam) >= (2.0 * lam * l / PI).sqrt());
        }
    }

    #[test]
    fn projections() {
        let b = par_beam();
        assert_eq!(perpendicular_distance([0.0; 3], &b).unwrap(), (0.0, 0.0));
        let l = 10.0;
        let (a, r) = perpendicular_distance([l, 2.0 * l, -l], &b).unwrap();
        assert!((a - 6f64.sqrt() * l).abs() < 1e-12 && r < 1e-12);
        let (a, r) = perpendicular_distance([0.0, l, 0.0], &b).unwrap();
        assert!((a - 2.0 * l / 6f64.sqrt()).abs() < 1e-12);
        assert!((r - l / 3f64.sqrt()).abs() < 1e-12);
        assert!(BeamSpec::new([0, 0, 0], 1.0, 1.0, [0.0; 3]).is_err());
    }

    #[test]
    fn rabi_scale_examples() {
        let b = par_beam();
        assert_eq!(rabi_scale([0.0; 3], &b).unwrap(), 1.0);
        let x = b.rayleigh_length();
        let s = rabi_scale([10.0, 20.0, -10.0], &b).unwrap();
        assert!((s - x / (x * x + 600.0).sqrt()).abs() < 1e-15);
        assert!((s - 0.73).abs() < 0.005);
        // Off axis by two local radii at the focus plane.
        let site = [2.0 * b.waist * 2f64.sqrt() / 2.0, 0.0, 2.0 * b.waist * 2f64.sqrt() / 2.0];
        let (l, r) = perpendicular_distance(site, &b).unwrap();
        assert!(l.abs() < 1e-12 && (r - 2.0 * b.waist).abs() < 1e-12);
        assert!((rabi_scale(site, &b).unwrap() - (-4f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn vdw_examples() {
        let m = InteractionModel { v0: mhz(12.0), constant: 10.0 };
        assert_eq!(vdw_interaction(&m, 10.0).unwrap(), m.v0);
        assert!((vdw_interaction(&m, 6f64.sqrt() * 10.0).unwrap() - m.v0 / 216.0).abs() < 1e-12 * m.v0);
        assert!((vdw_interaction(&m, 3f64.sqrt() * 10.0).unwrap() - m.v0 / 27.0).abs() < 1e-12 * m.v0);
        assert!(vdw_interaction(&m, 0.0).is_err());
    }

    #[test]
    fn lattice_bounds() {
        assert_eq!(max_addressable_lattice(16.5, 0.78).unwrap(), ([3, 5, 3], 2));
        assert_eq!(max_addressable_lattice(6.0, 0.78).unwrap(), ([2, 3, 2], 1));
        assert_eq!(max_addressable_lattice(1.0, 0.78).unwrap(), ([1, 1, 1], 0));
    }

    #[test]
    fn distance_bound_examples() {
        let l = distance_bound(10.0, 0.78, None).unwrap();
        // 0.33·𝓛²/λ with the coefficient π·0.46²/2 unrounded.
        assert!((l - 0.33 * 100.0 / 0.78).abs() / l < 0.01);
        assert!((distance_bound(10.0, 0.39, None).unwrap() / l - 2.0).abs() < 1e-12);
        // r⊥₀ = w(0): the bound sits at half the Rayleigh length of that waist.
        let w0 = 2.0;
        let lb = distance_bound(10.0, 0.78, Some(w0)).unwrap();
        assert!((lb - rayleigh_length(w0, 0.78) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn phase_mismatch_examples() {
        assert_eq!(orir_phase_mismatch(0.0, 1.0, 2.0, 3.0), 0.0);
        let phi = orir_phase_mismatch(1.0, 0.0, 0.0, mhz(1000.0));
        assert!((phi - 4.19e-5).abs() < 0.01e-5);
        // A few-µm shift with Δ alone is negligible.
        assert!(orir_phase_mismatch(5.0, mhz(4.0), 0.0, 0.0) < 1e-6);
    }
}
