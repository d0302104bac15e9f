//! Physical constants and conversions into the engine's internal units.
//!
//! The engine works with ħ = 1: every energy is stored as an angular
//! frequency in rad/s.

use std::f64::consts::TAU;

/// Reduced Planck constant, J·s (CODATA 2018).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Elementary charge, C (exact).
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// One debye in C·m.
pub const DEBYE: f64 = 3.335_64e-30;
/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Energy in electronvolts to angular frequency (rad/s).
pub fn ev_to_angular(ev: f64) -> f64 {
    ev * ELEMENTARY_CHARGE / HBAR
}

/// Angular frequency (rad/s) to energy in electronvolts.
pub fn angular_to_ev(omega: f64) -> f64 {
    omega * HBAR / ELEMENTARY_CHARGE
}

/// Energy in joules to angular frequency (rad/s).
pub fn joule_to_angular(joule: f64) -> f64 {
    joule / HBAR
}

pub fn debye_to_coulomb_meter(debye: f64) -> f64 {
    debye * DEBYE
}

/// Ordinary frequency (Hz) to angular frequency.
pub fn hertz_to_angular(hz: f64) -> f64 {
    TAU * hz
}

/// Vacuum wavelength (m) to angular frequency 2πc/λ.
pub fn wavelength_to_angular(lambda: f64) -> f64 {
    TAU * SPEED_OF_LIGHT / lambda
}
