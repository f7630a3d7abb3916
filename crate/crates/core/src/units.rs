//! Unit conventions.
//!
//! Internally ħ = 1, times are in µs and every frequency is an angular
//! frequency in rad/µs. User-facing values are ordinary frequencies in MHz.

use std::f64::consts::TAU;

/// Speed of light in µm/µs (numerically equal to m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Ordinary frequency in MHz to angular frequency in rad/µs.
pub fn mhz(nu: f64) -> f64 {
    TAU * nu
}

/// Angular frequency in rad/µs to ordinary frequency in MHz.
pub fn to_mhz(omega: f64) -> f64 {
    omega / TAU
}

/// Nanoseconds to µs.
pub fn ns(t: f64) -> f64 {
    t * 1e-3
}

/// µs to nanoseconds.
pub fn to_ns(t: f64) -> f64 {
    t * 1e3
}
