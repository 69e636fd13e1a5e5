use std::fmt;

use serde::{Deserialize, Serialize};

/// Relative zero threshold for heats and work.
pub const EPS_REL: f64 = 1e-9;
/// Absolute floor of the zero threshold (J).
pub const EPS_ABS: f64 = 1e-30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Phase {
    HeatEngine,
    Refrigerator,
    JoulePump,
    ColdPump,
    Degenerate,
}

impl Phase {
    pub const ALL: [Phase; 5] = [
        Phase::HeatEngine,
        Phase::Refrigerator,
        Phase::JoulePump,
        Phase::ColdPump,
        Phase::Degenerate,
    ];

    pub fn code(&self) -> &'static str {
        match self {
            Phase::HeatEngine => "HE",
            Phase::Refrigerator => "R",
            Phase::JoulePump => "JP",
            Phase::ColdPump => "CP",
            Phase::Degenerate => "D",
        }
    }

    /// Efficiency for an engine, the phase's COP otherwise; `None` when degenerate.
    pub fn merit(&self, q_in: f64, q_out: f64, work: f64) -> Option<f64> {
        match self {
            Phase::HeatEngine => Some(work / q_in),
            Phase::Refrigerator => Some(q_out / work.abs()),
            Phase::ColdPump => Some(q_out.abs() / work.abs()),
            Phase::JoulePump => Some((q_out.abs() + q_in.abs()) / work.abs()),
            Phase::Degenerate => None,
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Phase::HeatEngine => "heat engine",
            Phase::Refrigerator => "refrigerator",
            Phase::JoulePump => "Joule pump",
            Phase::ColdPump => "cold pump",
            Phase::Degenerate => "degenerate",
        };
        f.write_str(name)
    }
}

/// Phase from the signs of the hot heat, cold heat and work.
///
/// Anything whose magnitude is at or below `max(eps_rel·max(|Q_in|, |Q_out|), EPS_ABS)`
/// counts as zero and makes the cycle degenerate.
pub fn classify(q_in: f64, q_out: f64, work: f64, eps_rel: f64) -> Phase {
    if !(q_in.is_finite() && q_out.is_finite() && work.is_finite()) {
        return Phase::Degenerate;
    }
    let threshold = (eps_rel * q_in.abs().max(q_out.abs())).max(EPS_ABS);
    if q_in.abs() <= threshold || q_out.abs() <= threshold || work.abs() <= threshold {
        return Phase::Degenerate;
    }
    match (q_in > 0.0, q_out > 0.0, work > 0.0) {
        (true, false, true) => Phase::HeatEngine,
        (false, true, false) => Phase::Refrigerator,
        (false, false, false) => Phase::JoulePump,
        (true, false, false) => Phase::ColdPump,
        _ => Phase::Degenerate,
    }
}
