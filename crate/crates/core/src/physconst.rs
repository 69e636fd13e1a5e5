//! Physical constants (CODATA 2018) and the few conversions the rest of the
//! crate needs. Everything internal is SI: joules, kelvin, metres.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Reduced Planck constant (J·s).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Electron rest mass (kg).
pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;
/// Boltzmann constant (J/K).
pub const BOLTZMANN: f64 = 1.380_649e-23;
/// One electronvolt (J).
pub const ELECTRONVOLT: f64 = 1.602_176_634e-19;

/// Grouped view of the constants, for callers that want to pass them around.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub hbar: f64,
    pub electron_mass: f64,
    pub boltzmann: f64,
    pub electronvolt: f64,
}

pub const CODATA_2018: Constants = Constants {
    hbar: HBAR,
    electron_mass: ELECTRON_MASS,
    boltzmann: BOLTZMANN,
    electronvolt: ELECTRONVOLT,
};

/// ħ²/(2mL²), the natural energy unit of a box of length `length`.
pub(crate) fn box_energy_unit(length: f64, mass: f64) -> f64 {
    HBAR * HBAR / (2.0 * mass * length * length)
}

/// γ = h²/(8mL²) for an electron, the ground level of the bare well.
pub fn gamma(length: f64) -> Result<f64> {
    gamma_for_mass(length, ELECTRON_MASS)
}

pub fn gamma_for_mass(length: f64, mass: f64) -> Result<f64> {
    if !(length > 0.0 && length.is_finite()) {
        return Err(Error::Domain(format!(
            "well length must be positive, got {length}"
        )));
    }
    if !(mass > 0.0 && mass.is_finite()) {
        return Err(Error::Domain(format!("mass must be positive, got {mass}")));
    }
    // h²/8 = π²ħ²/2, written so that γ equals the first bare level bit for bit.
    Ok(PI * PI * box_energy_unit(length, mass))
}

/// Inverse thermal energy 1/(k_B T).
pub fn beta(temperature: f64) -> Result<f64> {
    if !(temperature > 0.0 && temperature.is_finite()) {
        return Err(Error::Domain(format!(
            "temperature must be positive, got {temperature}"
        )));
    }
    Ok(1.0 / (BOLTZMANN * temperature))
}

pub fn to_ev(joules: f64) -> f64 {
    joules / ELECTRONVOLT
}

pub fn from_ev(ev: f64) -> f64 {
    ev * ELECTRONVOLT
}

pub fn nm(metres: f64) -> f64 {
    metres * 1e9
}

pub fn from_nm(nanometres: f64) -> f64 {
    nanometres * 1e-9
}
