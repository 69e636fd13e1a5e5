//! Fixtures shared by the benches.

use qwell_core::physconst::from_nm;
use qwell_core::{CycleSpec, ImpuritySpec, SpectrumMethod, VariedParam, WellSpec};

pub fn table_iii_well() -> WellSpec {
    WellSpec::new(from_nm(100.0)).expect("valid length")
}

pub fn weak_impurity(p: f64) -> ImpuritySpec {
    ImpuritySpec::new(1.0, p).expect("valid impurity")
}

/// The strength-varied Otto engine behind the Fig. 8(a)-style grids.
pub fn strength_otto(method: SpectrumMethod) -> CycleSpec {
    CycleSpec::otto(VariedParam::Strength {
        hot: 1.0,
        cold: -1.0,
    })
    .with_position(0.45)
    .with_length(from_nm(40.0))
    .with_temperatures(25.0, 1.5)
    .with_method(method)
}
