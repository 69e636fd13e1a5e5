//! Quantum Otto and Carnot cycles over the impurity well.
//!
//! One of strength, length or position takes a hot-side value during the hot
//! stroke and a cold-side value during the cold stroke; the other two stay
//! fixed. `W > 0` means net work extracted.

mod closed;
mod engines;
mod phase;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::physconst::ELECTRON_MASS;
use crate::spectrum::{ImpuritySpec, SpectrumMethod, WellSpec};

pub use closed::{
    carnot_no_impurity_closed, carnot_strong_closed, otto_no_impurity_closed, otto_strong_closed,
    StrongCarnotClosed, StrongOttoClosed,
};
pub use engines::{
    carnot_run, otto_heats, otto_run, required_cold_length, run_cycle, Heats, MAX_AUTO_LEVELS,
};
pub use phase::{classify, Phase, EPS_ABS, EPS_REL};

/// Relative tolerance on `L_h²/L_c² = T_c/T_h`.
pub const REVERSIBILITY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CycleKind {
    Otto,
    Carnot,
}

/// The parameter that changes between the hot and cold strokes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum VariedParam {
    /// Impurity strength `f`.
    Strength { hot: f64, cold: f64 },
    /// Well length in metres.
    Length { hot: f64, cold: f64 },
    /// Impurity position `p`.
    Position { hot: f64, cold: f64 },
}

impl VariedParam {
    pub fn name(&self) -> &'static str {
        match self {
            VariedParam::Strength { .. } => "strength",
            VariedParam::Length { .. } => "length",
            VariedParam::Position { .. } => "position",
        }
    }

    pub fn values(&self) -> (f64, f64) {
        match *self {
            VariedParam::Strength { hot, cold }
            | VariedParam::Length { hot, cold }
            | VariedParam::Position { hot, cold } => (hot, cold),
        }
    }

    /// Hot and cold values exchanged.
    pub fn swapped(&self) -> Self {
        match *self {
            VariedParam::Strength { hot, cold } => VariedParam::Strength {
                hot: cold,
                cold: hot,
            },
            VariedParam::Length { hot, cold } => VariedParam::Length {
                hot: cold,
                cold: hot,
            },
            VariedParam::Position { hot, cold } => VariedParam::Position {
                hot: cold,
                cold: hot,
            },
        }
    }
}

/// What to do when a Carnot spec misses the reversibility condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum ReversibilityPolicy {
    /// Reject with [`Error::Reversibility`] beyond [`REVERSIBILITY_TOL`].
    #[default]
    Enforce,
    /// Evaluate anyway and report the residual.
    Report,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Hot,
    Cold,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleSpec {
    pub kind: CycleKind,
    pub varied: VariedParam,
    /// Fixed impurity strength; `None` means no impurity. Ignored when the
    /// strength is the varied parameter.
    pub strength: Option<f64>,
    /// Fixed impurity position.
    pub position: f64,
    /// Fixed well length (m).
    pub length: f64,
    pub mass: f64,
    /// Kelvin.
    pub t_hot: f64,
    /// Kelvin.
    pub t_cold: f64,
    pub method: SpectrumMethod,
    pub reversibility: ReversibilityPolicy,
}

impl CycleSpec {
    pub fn otto(varied: VariedParam) -> Self {
        Self::new(CycleKind::Otto, varied)
    }

    pub fn carnot(varied: VariedParam) -> Self {
        Self::new(CycleKind::Carnot, varied)
    }

    /// Defaults: no impurity, p = 1/2, L = 100 nm, 5 K / 1.5 K baths, numerical spectra.
    pub fn new(kind: CycleKind, varied: VariedParam) -> Self {
        CycleSpec {
            kind,
            varied,
            strength: None,
            position: 0.5,
            length: 100e-9,
            mass: ELECTRON_MASS,
            t_hot: 5.0,
            t_cold: 1.5,
            method: SpectrumMethod::Numerical,
            reversibility: ReversibilityPolicy::Enforce,
        }
    }

    pub fn with_strength(mut self, f: f64) -> Self {
        self.strength = Some(f);
        self
    }

    pub fn without_impurity(mut self) -> Self {
        self.strength = None;
        self
    }

    pub fn with_position(mut self, p: f64) -> Self {
        self.position = p;
        self
    }

    pub fn with_length(mut self, metres: f64) -> Self {
        self.length = metres;
        self
    }

    pub fn with_temperatures(mut self, t_hot: f64, t_cold: f64) -> Self {
        self.t_hot = t_hot;
        self.t_cold = t_cold;
        self
    }

    pub fn with_method(mut self, method: SpectrumMethod) -> Self {
        self.method = method;
        self
    }

    pub fn with_reversibility(mut self, policy: ReversibilityPolicy) -> Self {
        self.reversibility = policy;
        self
    }

    pub fn has_impurity(&self) -> bool {
        matches!(self.varied, VariedParam::Strength { .. }) || self.strength.is_some()
    }

    /// Checks every invariant that can be checked without evaluating spectra.
    pub fn validate(&self) -> Result<()> {
        if !(self.t_cold > 0.0 && self.t_cold.is_finite() && self.t_hot.is_finite()) {
            return Err(Error::Validation(format!(
                "temperatures must be positive and finite, got T_h = {}, T_c = {}",
                self.t_hot, self.t_cold
            )));
        }
        if self.t_hot <= self.t_cold {
            return Err(Error::Validation(format!(
                "need T_h > T_c, got T_h = {} K, T_c = {} K",
                self.t_hot, self.t_cold
            )));
        }
        if self.kind == CycleKind::Carnot && !matches!(self.varied, VariedParam::Length { .. }) {
            return Err(Error::Validation(format!(
                "a Carnot cycle exists only when the well length varies, not the {}",
                self.varied.name()
            )));
        }
        if matches!(self.varied, VariedParam::Position { .. }) && self.strength.is_none() {
            return Err(Error::Validation(
                "a position-varied cycle needs an impurity strength".into(),
            ));
        }
        for side in [Side::Hot, Side::Cold] {
            let (well, imp) = self.endpoint(side);
            well.validate().map_err(as_validation)?;
            if let Some(imp) = imp {
                imp.validate().map_err(as_validation)?;
            }
        }
        Ok(())
    }

    /// Well and impurity in force during the given stroke.
    pub fn endpoint(&self, side: Side) -> (WellSpec, Option<ImpuritySpec>) {
        let pick = |hot: f64, cold: f64| if side == Side::Hot { hot } else { cold };
        let mut length = self.length;
        let mut strength = self.strength;
        let mut position = self.position;
        match self.varied {
            VariedParam::Strength { hot, cold } => strength = Some(pick(hot, cold)),
            VariedParam::Length { hot, cold } => length = pick(hot, cold),
            VariedParam::Position { hot, cold } => position = pick(hot, cold),
        }
        let well = WellSpec {
            length,
            mass: self.mass,
        };
        let imp = strength.map(|strength| ImpuritySpec { strength, position });
        (well, imp)
    }

    /// All position parameters reflected through the centre of the well.
    pub fn mirrored(&self) -> Self {
        let mut out = *self;
        out.position = 1.0 - self.position;
        if let VariedParam::Position { hot, cold } = self.varied {
            out.varied = VariedParam::Position {
                hot: 1.0 - hot,
                cold: 1.0 - cold,
            };
        }
        out
    }
}

fn as_validation(e: Error) -> Error {
    match e {
        Error::Domain(msg) => Error::Validation(msg),
        other => other,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleResult {
    /// Heat from the hot bath (J).
    pub q_in: f64,
    /// Heat from the cold bath (J).
    pub q_out: f64,
    /// Net work extracted (J).
    pub work: f64,
    pub phase: Phase,
    /// Efficiency for an engine, coefficient of performance otherwise.
    pub merit: Option<f64>,
    /// Relative miss of `L_h²/L_c² = T_c/T_h`, Carnot only.
    pub reversibility_residual: Option<f64>,
    /// `|W − (Q_in + Q_out)| / max(|Q_in|, |Q_out|, |W|)` with W summed independently.
    pub first_law_residual: f64,
}

impl CycleResult {
    pub(crate) fn from_heats(heats: Heats, reversibility_residual: Option<f64>) -> Self {
        let Heats { q_in, q_out, work } = heats;
        let phase = classify(q_in, q_out, work, EPS_REL);
        let scale = q_in.abs().max(q_out.abs()).max(work.abs());
        let first_law_residual = if scale > 0.0 {
            (work - (q_in + q_out)).abs() / scale
        } else {
            0.0
        };
        CycleResult {
            q_in,
            q_out,
            work,
            phase,
            merit: phase.merit(q_in, q_out, work),
            reversibility_residual,
            first_law_residual,
        }
    }
}
