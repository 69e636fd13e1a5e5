//! Canonical-ensemble quantities over a (truncated) spectrum.
//!
//! Boltzmann weights are taken relative to the lowest level, so a deep bound
//! state cannot overflow them; `ln Z` is stored rather than `Z`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::physconst::{beta, BOLTZMANN};
use crate::spectrum::Spectrum;
use crate::sum::{self, Neumaier};

/// Default bound on the neglected Boltzmann tail.
pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThermalState {
    /// Kelvin.
    pub temperature: f64,
    /// Occupations in the order of the energies they were built from.
    pub probabilities: Vec<f64>,
    /// Natural log of the partition function, energies measured from zero.
    pub ln_z: f64,
    /// Joules.
    pub internal_u: f64,
    /// J/K.
    pub entropy_s: f64,
    pub truncation_n: usize,
    /// Estimated weight of the levels beyond the truncation, relative to Z.
    pub tail_bound: f64,
}

impl ThermalState {
    /// `Z` itself; may overflow to infinity when a deep bound state is present.
    pub fn partition_z(&self) -> f64 {
        self.ln_z.exp()
    }
}

/// Thermal state of a spectrum, bound state included.
pub fn thermal_state(spectrum: &Spectrum, temperature: f64, tail_tol: f64) -> Result<ThermalState> {
    thermal_state_from_energies(&spectrum.ordered_energies(), temperature, tail_tol)
}

/// Thermal state over the lowest levels of an infinite ascending spectrum.
///
/// Fails with [`Error::Truncation`] when the estimated tail beyond the last
/// level exceeds `tail_tol`.
pub fn thermal_state_from_energies(
    energies: &[f64],
    temperature: f64,
    tail_tol: f64,
) -> Result<ThermalState> {
    if !(tail_tol > 0.0 && tail_tol < 1.0) {
        return Err(Error::Domain(format!(
            "tail tolerance must lie in (0, 1), got {tail_tol}"
        )));
    }
    let b = beta(temperature)?;
    check_energies(energies)?;
    if energies.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Domain("energies must be in ascending order".into()));
    }
    let mut state = evaluate(energies, temperature, b);
    let tail = tail_estimate(energies, b, state.ln_z + b * energies[0]);
    state.tail_bound = tail;
    if tail > tail_tol {
        return Err(Error::Truncation {
            temperature,
            levels: energies.len(),
            tail,
            required_n_max: required_levels(energies, b, tail_tol),
        });
    }
    Ok(state)
}

/// Thermal state of a complete finite spectrum (no truncation test).
pub fn thermal_state_exact(energies: &[f64], temperature: f64) -> Result<ThermalState> {
    let b = beta(temperature)?;
    check_energies(energies)?;
    Ok(evaluate(energies, temperature, b))
}

/// Continuum approximation `k_B/2 + k_B ln(½√(π/(βγ)))` for the bare well.
pub fn entropy_continuum_isw(gamma: f64, beta: f64) -> f64 {
    BOLTZMANN * (0.5 + (0.5 * (std::f64::consts::PI / (beta * gamma)).sqrt()).ln())
}

fn check_energies(energies: &[f64]) -> Result<()> {
    if energies.is_empty() {
        return Err(Error::Domain(
            "thermal state needs at least one level".into(),
        ));
    }
    if energies.iter().any(|e| !e.is_finite()) {
        return Err(Error::Domain("energies must be finite".into()));
    }
    Ok(())
}

fn evaluate(energies: &[f64], temperature: f64, b: f64) -> ThermalState {
    let e_min = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let weights: Vec<f64> = energies.iter().map(|&e| (-b * (e - e_min)).exp()).collect();
    let z_shift = sum::sum(weights.iter().copied());
    let probabilities: Vec<f64> = weights.iter().map(|w| w / z_shift).collect();

    // U − E_min summed directly keeps precision when E_min dominates.
    let mut excess = Neumaier::default();
    for (p, &e) in probabilities.iter().zip(energies) {
        excess.add(p * (e - e_min));
    }
    let u_excess = excess.total();
    let ln_z_shift = z_shift.ln();
    ThermalState {
        temperature,
        probabilities,
        ln_z: ln_z_shift - b * e_min,
        internal_u: e_min + u_excess,
        entropy_s: BOLTZMANN * (ln_z_shift + b * u_excess),
        truncation_n: energies.len(),
        tail_bound: 0.0,
    }
}

/// Geometric estimate of `Σ_{n>N} w_n (1 + β(E_n − E_min)) / Z`.
///
/// The factor `1 + β(E − E_min)` makes the bound cover the entropy and energy
/// sums as well as the normalisation. The ratio between successive weights is
/// taken from the last two level spacings, which overestimates the tail of any
/// spectrum whose spacing grows.
fn tail_estimate(energies: &[f64], b: f64, ln_z_shift: f64) -> f64 {
    let n = energies.len();
    let e_min = energies[0];
    let x_last = b * (energies[n - 1] - e_min);
    let w_last = (-x_last).exp();
    if w_last == 0.0 {
        return 0.0;
    }
    let d = match n {
        1 => 0.0,
        2 => b * (energies[1] - energies[0]),
        _ => 0.5 * b * (energies[n - 1] - energies[n - 3]),
    };
    if d <= 0.0 {
        return f64::INFINITY;
    }
    let r = (-d).exp();
    let one_minus_r = -(-d).exp_m1();
    let tail = w_last * ((1.0 + x_last) * r / one_minus_r + d * r / (one_minus_r * one_minus_r));
    tail / ln_z_shift.exp()
}

/// Rough level count that would meet `tail_tol`, assuming `E ∝ n²`.
fn required_levels(energies: &[f64], b: f64, tail_tol: f64) -> usize {
    let n = energies.len();
    let x_last = b * (energies[n - 1] - energies[0]);
    let target = -tail_tol.ln() + 10.0;
    let estimate = if x_last > 0.0 {
        (n as f64 * (target / x_last).sqrt() * 1.1).ceil() as usize
    } else {
        2 * n
    };
    estimate.max(n + 1)
}
