//! Eigenvalues of a particle in an infinite square well with a delta impurity.
//!
//! The impurity potential is `−λ δ(x − pL)` and its strength enters through the
//! dimensionless `f = ħ²/(mλL)`: positive `f` is attractive, negative repulsive.
//! Large `|f|` is weak coupling, small `|f|` strong coupling.

mod dispersion;
mod perturb;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::physconst::{box_energy_unit, ELECTRON_MASS};

pub use dispersion::{
    bound_state, bound_state_kappa_l, dispersion_residual_neg, dispersion_residual_pos,
    solve_spectrum_numerical, DEFAULT_ROOT_TOL,
};
pub use perturb::{isw_levels, strong_perturb_branch, strong_perturb_levels, weak_perturb_levels};

/// Default number of levels kept per spectrum.
pub const DEFAULT_N_MAX: usize = 200;

/// Weak coupling holds for `|f|` at or above this.
pub const WEAK_THRESHOLD: f64 = 0.5;
/// Strong coupling holds for `|f|` at or below this.
pub const STRONG_THRESHOLD: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WellSpec {
    /// Width of the box (m).
    pub length: f64,
    /// Particle mass (kg).
    pub mass: f64,
}

impl WellSpec {
    /// An electron in a box of the given length.
    pub fn new(length: f64) -> Result<Self> {
        Self::with_mass(length, ELECTRON_MASS)
    }

    pub fn with_mass(length: f64, mass: f64) -> Result<Self> {
        let spec = WellSpec { length, mass };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.length > 0.0 && self.length.is_finite()) {
            return Err(Error::Domain(format!(
                "well length must be positive, got {}",
                self.length
            )));
        }
        if !(self.mass > 0.0 && self.mass.is_finite()) {
            return Err(Error::Domain(format!(
                "mass must be positive, got {}",
                self.mass
            )));
        }
        Ok(())
    }

    /// ħ²/(2mL²); every method expresses its levels in this unit.
    pub fn energy_unit(&self) -> f64 {
        box_energy_unit(self.length, self.mass)
    }

    /// γ = π²ħ²/(2mL²), the bare ground level.
    pub fn gamma(&self) -> f64 {
        std::f64::consts::PI.powi(2) * self.energy_unit()
    }
}

/// A delta impurity. The no-impurity case is `Option::<ImpuritySpec>::None`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImpuritySpec {
    /// Dimensionless `f = ħ²/(mλL)`; positive is attractive.
    pub strength: f64,
    /// Position as a fraction of the well length, in [0, 1].
    pub position: f64,
}

impl ImpuritySpec {
    pub fn new(strength: f64, position: f64) -> Result<Self> {
        let spec = ImpuritySpec { strength, position };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.strength.is_finite() || self.strength == 0.0 {
            return Err(Error::Domain(format!(
                "impurity strength must be finite and nonzero, got {}",
                self.strength
            )));
        }
        if !(0.0..=1.0).contains(&self.position) {
            return Err(Error::Domain(format!(
                "impurity position must lie in [0, 1], got {}",
                self.position
            )));
        }
        Ok(())
    }

    pub fn is_attractive(&self) -> bool {
        self.strength > 0.0
    }

    pub fn mirrored(&self) -> Self {
        ImpuritySpec {
            position: 1.0 - self.position,
            ..*self
        }
    }
}

/// Which family of the strong-coupling expansion to use.
///
/// The impurity splits the box into sub-wells of widths `pL` and `(1−p)L`.
/// `Union` merges both families into one spectrum; the other two keep only one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum StrongBranch {
    #[default]
    Union,
    LeftWell,
    RightWell,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum SpectrumMethod {
    Numerical,
    WeakPerturb1,
    WeakPerturb2,
    StrongPerturb1(StrongBranch),
    BareIsw,
}

impl SpectrumMethod {
    pub const ALL: [SpectrumMethod; 7] = [
        SpectrumMethod::Numerical,
        SpectrumMethod::WeakPerturb1,
        SpectrumMethod::WeakPerturb2,
        SpectrumMethod::StrongPerturb1(StrongBranch::Union),
        SpectrumMethod::StrongPerturb1(StrongBranch::LeftWell),
        SpectrumMethod::StrongPerturb1(StrongBranch::RightWell),
        SpectrumMethod::BareIsw,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SpectrumMethod::Numerical => "numerical",
            SpectrumMethod::WeakPerturb1 => "weak1",
            SpectrumMethod::WeakPerturb2 => "weak2",
            SpectrumMethod::StrongPerturb1(StrongBranch::Union) => "strong1",
            SpectrumMethod::StrongPerturb1(StrongBranch::LeftWell) => "strong1-left",
            SpectrumMethod::StrongPerturb1(StrongBranch::RightWell) => "strong1-right",
            SpectrumMethod::BareIsw => "bare",
        }
    }
}

impl fmt::Display for SpectrumMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SpectrumMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        let method = match key.as_str() {
            "numerical" => SpectrumMethod::Numerical,
            "weak1" | "weakperturb1" => SpectrumMethod::WeakPerturb1,
            "weak2" | "weakperturb2" => SpectrumMethod::WeakPerturb2,
            "strong1" | "strongperturb1" | "strong1-union" => {
                SpectrumMethod::StrongPerturb1(StrongBranch::Union)
            }
            "strong1-left" => SpectrumMethod::StrongPerturb1(StrongBranch::LeftWell),
            "strong1-right" => SpectrumMethod::StrongPerturb1(StrongBranch::RightWell),
            "bare" | "bareisw" | "isw" => SpectrumMethod::BareIsw,
            _ => {
                let known: Vec<_> = Self::ALL.iter().map(|m| m.name()).collect();
                return Err(Error::Validation(format!(
                    "unknown spectrum method {s:?} (expected one of {})",
                    known.join(", ")
                )));
            }
        };
        Ok(method)
    }
}

impl From<SpectrumMethod> for String {
    fn from(m: SpectrumMethod) -> String {
        m.name().to_string()
    }
}

impl TryFrom<String> for SpectrumMethod {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub index: usize,
    /// Energy in joules.
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    /// Positive-energy (or perturbative) levels in ascending order.
    pub levels: Vec<Level>,
    pub method: SpectrumMethod,
    /// Negative-energy bound state, numerical method only.
    pub bound_state: Option<f64>,
}

impl Spectrum {
    /// All energies in ascending order, bound state first when present.
    pub fn ordered_energies(&self) -> Vec<f64> {
        self.bound_state
            .into_iter()
            .chain(self.levels.iter().map(|l| l.energy))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.levels.len() + usize::from(self.bound_state.is_some())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn energies(&self) -> impl Iterator<Item = f64> + '_ {
        self.levels.iter().map(|l| l.energy)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CouplingRegime {
    Weak,
    Strong,
    Intermediate,
}

pub fn validate_regime(imp: &ImpuritySpec) -> CouplingRegime {
    let m = imp.strength.abs();
    if m >= WEAK_THRESHOLD {
        CouplingRegime::Weak
    } else if m <= STRONG_THRESHOLD {
        CouplingRegime::Strong
    } else {
        CouplingRegime::Intermediate
    }
}

/// Builds a spectrum with the requested method; `None` means no impurity.
pub fn build_spectrum(
    well: &WellSpec,
    imp: Option<&ImpuritySpec>,
    method: SpectrumMethod,
    n_max: usize,
) -> Result<Spectrum> {
    let Some(imp) = imp else {
        return isw_levels(well, n_max);
    };
    match method {
        SpectrumMethod::Numerical => solve_spectrum_numerical(well, imp, n_max, DEFAULT_ROOT_TOL),
        SpectrumMethod::WeakPerturb1 => weak_perturb_levels(well, imp, n_max, 1),
        SpectrumMethod::WeakPerturb2 => weak_perturb_levels(well, imp, n_max, 2),
        SpectrumMethod::StrongPerturb1(branch) => strong_perturb_branch(well, imp, n_max, branch),
        SpectrumMethod::BareIsw => isw_levels(well, n_max),
    }
}

/// Sorts levels by energy (index breaks ties) and checks they are finite.
fn finish_levels(mut levels: Vec<Level>, method: SpectrumMethod) -> Result<Spectrum> {
    if let Some(bad) = levels.iter().find(|l| !l.energy.is_finite()) {
        return Err(Error::Internal(format!(
            "{method} produced a non-finite energy at level {}",
            bad.index
        )));
    }
    levels.sort_by(|a, b| a.energy.total_cmp(&b.energy).then(a.index.cmp(&b.index)));
    Ok(Spectrum {
        levels,
        method,
        bound_state: None,
    })
}

fn check_n_max(n_max: usize) -> Result<()> {
    if n_max == 0 {
        return Err(Error::Domain("n_max must be at least 1".into()));
    }
    Ok(())
}
