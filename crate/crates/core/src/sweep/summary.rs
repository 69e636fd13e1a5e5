use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::SweepGrid;
use crate::cycles::Phase;

/// Table-style extrema of a grid. Fields for phases absent from the grid are `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    /// Largest work over heat-engine cells (J).
    pub w_max: Option<f64>,
    pub w_max_at: Option<(f64, f64)>,
    /// Largest efficiency over heat-engine cells.
    pub eta_max: Option<f64>,
    pub eta_max_at: Option<(f64, f64)>,
    /// Work of the cell attaining `eta_max` (J).
    pub w_at_eta_max: Option<f64>,
    /// Largest `|W|` over refrigerator and cold-pump cells (J).
    pub abs_w_max: Option<f64>,
    pub abs_w_max_at: Option<(f64, f64)>,
    /// Largest COP over refrigerator and cold-pump cells.
    pub cop_max: Option<f64>,
    pub cop_max_at: Option<(f64, f64)>,
    /// `|W|` of the cell attaining `cop_max` (J).
    pub abs_w_at_cop_max: Option<f64>,
    pub phase_census: BTreeMap<Phase, usize>,
    pub error_cells: usize,
}

/// Running maximum that keeps the first (lowest-index) cell on ties.
#[derive(Default)]
struct Best {
    value: Option<f64>,
    index: usize,
}

impl Best {
    fn offer(&mut self, v: f64, index: usize) {
        if self.value.is_none_or(|b| v > b) {
            self.value = Some(v);
            self.index = index;
        }
    }
}

pub fn summarize(grid: &SweepGrid) -> SweepSummary {
    let mut census = BTreeMap::new();
    let (mut w, mut eta, mut abs_w, mut cop) = (
        Best::default(),
        Best::default(),
        Best::default(),
        Best::default(),
    );
    for (i, cell) in grid.cells.iter().enumerate() {
        let Ok(r) = cell else { continue };
        *census.entry(r.phase).or_insert(0) += 1;
        match r.phase {
            Phase::HeatEngine => {
                w.offer(r.work, i);
                if let Some(m) = r.merit {
                    eta.offer(m, i);
                }
            }
            Phase::Refrigerator | Phase::ColdPump => {
                abs_w.offer(r.work.abs(), i);
                if let Some(m) = r.merit {
                    cop.offer(m, i);
                }
            }
            _ => {}
        }
    }
    let at = |b: &Best| b.value.map(|_| grid.coordinates(b.index));
    let work_at = |b: &Best| {
        b.value
            .and_then(|_| grid.cells[b.index].as_ref().ok().map(|r| r.work))
    };
    SweepSummary {
        w_max: w.value,
        w_max_at: at(&w),
        eta_max: eta.value,
        eta_max_at: at(&eta),
        w_at_eta_max: work_at(&eta),
        abs_w_max: abs_w.value,
        abs_w_max_at: at(&abs_w),
        cop_max: cop.value,
        cop_max_at: at(&cop),
        abs_w_at_cop_max: work_at(&cop).map(f64::abs),
        phase_census: census,
        error_cells: grid.error_count(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
}

/// A maximal run of equal phase; `None` marks error cells.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub phase: Option<Phase>,
    /// Axis value of the first cell in the run.
    pub lo: f64,
    /// Axis value of the last cell in the run.
    pub hi: f64,
}

/// The runs along one grid line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionLine {
    /// Value of the other axis, fixed along this line.
    pub fixed: f64,
    pub regions: Vec<Region>,
}

/// Runs of equal phase along every row (`Axis::X`) or column (`Axis::Y`).
pub fn phase_regions(grid: &SweepGrid, axis: Axis) -> Vec<RegionLine> {
    let (nx, ny) = (grid.axis_x.steps, grid.axis_y.steps);
    let phase_of = |ix: usize, iy: usize| grid.cell(ix, iy).as_ref().ok().map(|r| r.phase);
    match axis {
        Axis::X => (0..ny)
            .map(|iy| {
                let phases: Vec<_> = (0..nx).map(|ix| phase_of(ix, iy)).collect();
                RegionLine {
                    fixed: grid.axis_y.value(iy),
                    regions: region_runs(&grid.axis_x.values(), &phases),
                }
            })
            .collect(),
        Axis::Y => (0..nx)
            .map(|ix| {
                let phases: Vec<_> = (0..ny).map(|iy| phase_of(ix, iy)).collect();
                RegionLine {
                    fixed: grid.axis_x.value(ix),
                    regions: region_runs(&grid.axis_y.values(), &phases),
                }
            })
            .collect(),
    }
}

/// Run-length encoding of `phases` sampled at `values`.
pub fn region_runs(values: &[f64], phases: &[Option<Phase>]) -> Vec<Region> {
    let mut out: Vec<Region> = Vec::new();
    for (&v, &phase) in values.iter().zip(phases) {
        match out.last_mut() {
            Some(last) if last.phase == phase => last.hi = v,
            _ => out.push(Region {
                phase,
                lo: v,
                hi: v,
            }),
        }
    }
    out
}
