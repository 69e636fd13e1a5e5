//! Cycles evaluated over a 2-D parameter grid.
//!
//! Each cell is an independent cycle built from a template with the two axis
//! values substituted. Cells are stored row-major (y outer, x inner) and the
//! result does not depend on how many workers ran it.

mod summary;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cycles::{run_cycle, CycleResult, CycleSpec, VariedParam};
use crate::error::{Error, Result};

pub use summary::{phase_regions, region_runs, summarize, Axis, Region, RegionLine, SweepSummary};

/// More than this fraction of error cells fails a sweep.
pub const MAX_ERROR_FRACTION: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SweepParam {
    /// Impurity position `p` (dimensionless).
    ImpurityPosition,
    /// Well length (m).
    WellLength,
    /// Hot-bath temperature (K).
    HotTemperature,
    /// Fixed impurity strength `f`.
    ImpurityStrength,
    /// `|f|` of a strength-varied cycle, keeping the signs of `f_h` and `f_c`.
    StrengthPairMagnitude,
}

impl SweepParam {
    pub fn name(&self) -> &'static str {
        match self {
            SweepParam::ImpurityPosition => "p",
            SweepParam::WellLength => "length",
            SweepParam::HotTemperature => "t_hot",
            SweepParam::ImpurityStrength => "f",
            SweepParam::StrengthPairMagnitude => "f_magnitude",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum AxisScale {
    #[default]
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepAxis {
    pub param: SweepParam,
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
    #[serde(default)]
    pub scale: AxisScale,
}

impl SweepAxis {
    pub fn new(param: SweepParam, lo: f64, hi: f64, steps: usize) -> Result<Self> {
        let axis = SweepAxis {
            param,
            lo,
            hi,
            steps,
            scale: AxisScale::Linear,
        };
        axis.validate()?;
        Ok(axis)
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps < 2 {
            return Err(Error::Validation(format!(
                "axis {} needs at least 2 steps, got {}",
                self.param.name(),
                self.steps
            )));
        }
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo < self.hi) {
            return Err(Error::Validation(format!(
                "axis {} needs lo < hi, got [{}, {}]",
                self.param.name(),
                self.lo,
                self.hi
            )));
        }
        Ok(())
    }

    /// Grid point `i`; both ends are included exactly.
    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.steps {
            return self.hi;
        }
        self.lo + i as f64 * (self.hi - self.lo) / (self.steps - 1) as f64
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.steps).map(|i| self.value(i)).collect()
    }
}

/// A cell either holds a cycle result or the message of the error it hit.
pub type Cell = std::result::Result<CycleResult, String>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub axis_x: SweepAxis,
    pub axis_y: SweepAxis,
    pub template: CycleSpec,
    pub cells: Vec<Cell>,
}

impl SweepGrid {
    pub fn cell(&self, ix: usize, iy: usize) -> &Cell {
        &self.cells[iy * self.axis_x.steps + ix]
    }

    /// `(x, y)` of the cell at a row-major index.
    pub fn coordinates(&self, index: usize) -> (f64, f64) {
        let nx = self.axis_x.steps;
        (self.axis_x.value(index % nx), self.axis_y.value(index / nx))
    }

    pub fn error_count(&self) -> usize {
        self.cells.iter().filter(|c| c.is_err()).count()
    }

    /// The cycle spec of one cell.
    pub fn spec_at(&self, ix: usize, iy: usize) -> CycleSpec {
        cell_spec(&self.template, &self.axis_x, &self.axis_y, ix, iy)
    }
}

/// Template with both axis values substituted.
pub fn cell_spec(
    template: &CycleSpec,
    ax: &SweepAxis,
    ay: &SweepAxis,
    ix: usize,
    iy: usize,
) -> CycleSpec {
    let mut spec = *template;
    apply(&mut spec, ax.param, ax.value(ix));
    apply(&mut spec, ay.param, ay.value(iy));
    spec
}

fn apply(spec: &mut CycleSpec, param: SweepParam, v: f64) {
    match param {
        SweepParam::ImpurityPosition => spec.position = v,
        SweepParam::WellLength => spec.length = v,
        SweepParam::HotTemperature => spec.t_hot = v,
        SweepParam::ImpurityStrength => spec.strength = Some(v),
        SweepParam::StrengthPairMagnitude => {
            if let VariedParam::Strength { hot, cold } = spec.varied {
                spec.varied = VariedParam::Strength {
                    hot: v * hot.signum(),
                    cold: v * cold.signum(),
                };
            }
        }
    }
}

/// Rejects axis/template combinations before anything is evaluated.
pub fn validate_sweep(template: &CycleSpec, ax: &SweepAxis, ay: &SweepAxis) -> Result<()> {
    ax.validate()?;
    ay.validate()?;
    if ax.param == ay.param {
        return Err(Error::Validation(format!(
            "both axes sweep {}",
            ax.param.name()
        )));
    }
    for axis in [ax, ay] {
        check_axis(template, axis)?;
    }
    // Every corner must be a valid cycle; this catches e.g. T_h ≤ T_c.
    for ix in [0, ax.steps - 1] {
        for iy in [0, ay.steps - 1] {
            cell_spec(template, ax, ay, ix, iy).validate()?;
        }
    }
    Ok(())
}

fn check_axis(template: &CycleSpec, axis: &SweepAxis) -> Result<()> {
    let clash = |what: &str| {
        Err(Error::Validation(format!(
            "axis {} conflicts with a cycle that varies the {what}",
            axis.param.name()
        )))
    };
    match (axis.param, template.varied) {
        (SweepParam::ImpurityPosition, VariedParam::Position { .. }) => return clash("position"),
        (SweepParam::WellLength, VariedParam::Length { .. }) => return clash("length"),
        (SweepParam::ImpurityStrength, VariedParam::Strength { .. }) => return clash("strength"),
        (SweepParam::StrengthPairMagnitude, VariedParam::Strength { .. }) => {}
        (SweepParam::StrengthPairMagnitude, _) => {
            return Err(Error::Validation(
                "axis f_magnitude needs a strength-varied cycle".into(),
            ))
        }
        _ => {}
    }
    match axis.param {
        SweepParam::ImpurityPosition => {
            if axis.lo < 0.0 || axis.hi > 1.0 {
                return Err(Error::Validation("positions must lie in [0, 1]".into()));
            }
            if !template.has_impurity() {
                return Err(Error::Validation(
                    "a position axis needs an impurity".into(),
                ));
            }
        }
        SweepParam::WellLength => {
            if axis.lo <= 0.0 {
                return Err(Error::Validation("lengths must be positive".into()));
            }
        }
        SweepParam::HotTemperature => {
            if axis.lo <= template.t_cold {
                return Err(Error::Validation(format!(
                    "hot temperatures must exceed T_c = {} K",
                    template.t_cold
                )));
            }
        }
        SweepParam::ImpurityStrength => {
            if axis.lo <= 0.0 && axis.hi >= 0.0 {
                return Err(Error::Validation(
                    "a strength axis must not include f = 0".into(),
                ));
            }
        }
        SweepParam::StrengthPairMagnitude => {
            if axis.lo <= 0.0 {
                return Err(Error::Validation(
                    "strength magnitudes must be positive".into(),
                ));
            }
        }
    }
    Ok(())
}

/// Evaluates every cell. `workers = 0` uses rayon's default thread count.
///
/// Cell failures are recorded, not raised; call [`ensure_healthy`] to fail
/// grids with too many of them.
pub fn run_sweep(
    template: &CycleSpec,
    ax: &SweepAxis,
    ay: &SweepAxis,
    n_max: usize,
    tail_tol: f64,
    workers: usize,
) -> Result<SweepGrid> {
    validate_sweep(template, ax, ay)?;
    let total = ax.steps * ay.steps;
    let eval = |k: usize| -> Cell {
        let spec = cell_spec(template, ax, ay, k % ax.steps, k / ax.steps);
        run_cycle(&spec, n_max, tail_tol).map_err(|e| e.to_string())
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Internal(format!("cannot start worker pool: {e}")))?;
    // Indexed parallel collect writes each result to its own slot.
    let cells: Vec<Cell> = pool.install(|| (0..total).into_par_iter().map(eval).collect());
    Ok(SweepGrid {
        axis_x: *ax,
        axis_y: *ay,
        template: *template,
        cells,
    })
}

/// Fails when more than 1% of the cells are errors, listing the main causes.
pub fn ensure_healthy(grid: &SweepGrid) -> Result<()> {
    let failed = grid.error_count();
    let total = grid.cells.len();
    if (failed as f64) <= MAX_ERROR_FRACTION * total as f64 {
        return Ok(());
    }
    let mut causes: Vec<(String, usize)> = Vec::new();
    for msg in grid.cells.iter().filter_map(|c| c.as_ref().err()) {
        match causes.iter_mut().find(|(m, _)| m == msg) {
            Some((_, n)) => *n += 1,
            None => causes.push((msg.clone(), 1)),
        }
    }
    causes.sort_by_key(|c| std::cmp::Reverse(c.1));
    let causes = causes
        .iter()
        .take(3)
        .map(|(m, n)| format!("{n}× {m}"))
        .collect::<Vec<_>>()
        .join("; ");
    Err(Error::TooManyErrorCells {
        failed,
        total,
        causes,
    })
}
