//! Spectra and quantum thermodynamic cycles of a particle in an infinite
//! square well with a delta-function impurity.

pub mod cycles;
pub mod error;
pub mod physconst;
pub mod spectrum;
mod sum;
pub mod sweep;
pub mod tables;
pub mod thermo;

pub use cycles::{CycleKind, CycleResult, CycleSpec, Phase, ReversibilityPolicy, VariedParam};
pub use error::{Error, Result};
pub use spectrum::{
    build_spectrum, CouplingRegime, ImpuritySpec, Level, Spectrum, SpectrumMethod, StrongBranch,
    WellSpec,
};
pub use sweep::{run_sweep, summarize, SweepAxis, SweepGrid, SweepParam, SweepSummary};
pub use tables::{run_table, ComparisonRow, TableId, TableOptions, TableRun, Tolerance};
pub use thermo::{thermal_state, ThermalState};
