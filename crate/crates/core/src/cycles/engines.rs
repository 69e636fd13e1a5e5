use super::{
    CycleKind, CycleResult, CycleSpec, ReversibilityPolicy, Side, VariedParam, REVERSIBILITY_TOL,
};
use crate::error::{Error, Result};
use crate::spectrum::build_spectrum;
use crate::sum::Neumaier;
use crate::thermo::{thermal_state, thermal_state_from_energies};

/// Level counts are doubled on truncation errors up to this many.
pub const MAX_AUTO_LEVELS: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Heats {
    pub q_in: f64,
    pub q_out: f64,
    /// Summed on its own as `Σ (E_in − E_out)(P_B − P_D)`, not as `Q_in + Q_out`.
    pub work: f64,
}

pub fn run_cycle(spec: &CycleSpec, n_max: usize, tail_tol: f64) -> Result<CycleResult> {
    match spec.kind {
        CycleKind::Otto => otto_run(spec, n_max, tail_tol),
        CycleKind::Carnot => carnot_run(spec, n_max, tail_tol),
    }
}

/// Otto cycle: two isochores at the hot-side and cold-side spectra.
pub fn otto_run(spec: &CycleSpec, n_max: usize, tail_tol: f64) -> Result<CycleResult> {
    spec.validate()?;
    if spec.kind != CycleKind::Otto {
        return Err(Error::Validation(
            "otto_run called with a Carnot spec".into(),
        ));
    }
    let heats = with_auto_levels(n_max, |n| {
        let e_in = side_energies(spec, Side::Hot, n)?;
        let e_out = side_energies(spec, Side::Cold, n)?;
        otto_heats(&e_in, &e_out, spec.t_hot, spec.t_cold, tail_tol)
    })?;
    Ok(CycleResult::from_heats(heats, None))
}

/// Heats of an Otto cycle between two paired level lists.
///
/// `e_in` is in force while the system meets the hot bath at `t_hot`, `e_out`
/// while it meets the cold one. Level `i` of one list is carried adiabatically
/// into level `i` of the other.
pub fn otto_heats(
    e_in: &[f64],
    e_out: &[f64],
    t_hot: f64,
    t_cold: f64,
    tail_tol: f64,
) -> Result<Heats> {
    if e_in.len() != e_out.len() {
        return Err(Error::Internal(format!(
            "paired spectra differ in length: {} vs {}",
            e_in.len(),
            e_out.len()
        )));
    }
    let pb = thermal_state_from_energies(e_in, t_hot, tail_tol)?;
    let pd = thermal_state_from_energies(e_out, t_cold, tail_tol)?;
    let (mut q_in, mut q_out, mut work) = (
        Neumaier::default(),
        Neumaier::default(),
        Neumaier::default(),
    );
    for i in 0..e_in.len() {
        let dp = pb.probabilities[i] - pd.probabilities[i];
        q_in.add(e_in[i] * dp);
        q_out.add(-e_out[i] * dp);
        work.add((e_in[i] - e_out[i]) * dp);
    }
    Ok(Heats {
        q_in: q_in.total(),
        q_out: q_out.total(),
        work: work.total(),
    })
}

/// Carnot cycle from the entropies at the two isotherm endpoints.
pub fn carnot_run(spec: &CycleSpec, n_max: usize, tail_tol: f64) -> Result<CycleResult> {
    spec.validate()?;
    if spec.kind != CycleKind::Carnot {
        return Err(Error::Validation(
            "carnot_run called with an Otto spec".into(),
        ));
    }
    let VariedParam::Length {
        hot: l_h,
        cold: l_c,
    } = spec.varied
    else {
        return Err(Error::Validation(
            "a Carnot cycle needs the length to vary".into(),
        ));
    };
    let required = spec.t_cold / spec.t_hot;
    let actual = (l_h / l_c).powi(2);
    let residual = (actual - required).abs() / required;
    if spec.reversibility == ReversibilityPolicy::Enforce && residual > REVERSIBILITY_TOL {
        return Err(Error::Reversibility {
            actual,
            required,
            residual,
            required_l_cold: required_cold_length(l_h, spec.t_hot, spec.t_cold),
        });
    }

    let entropy = |side: Side, t: f64| {
        with_auto_levels(n_max, |n| {
            let (well, imp) = spec.endpoint(side);
            let s = build_spectrum(&well, imp.as_ref(), spec.method, n)?;
            Ok(thermal_state(&s, t, tail_tol)?.entropy_s)
        })
    };
    let s_b = entropy(Side::Hot, spec.t_hot)?;
    let s_d = entropy(Side::Cold, spec.t_cold)?;
    let ds = s_b - s_d;
    let heats = Heats {
        q_in: spec.t_hot * ds,
        q_out: -spec.t_cold * ds,
        work: (spec.t_hot - spec.t_cold) * ds,
    };
    Ok(CycleResult::from_heats(heats, Some(residual)))
}

/// Cold-side length that makes `L_h²/L_c² = T_c/T_h` exact.
pub fn required_cold_length(l_hot: f64, t_hot: f64, t_cold: f64) -> f64 {
    l_hot * (t_hot / t_cold).sqrt()
}

/// The lowest `n` levels (bound state included) on one side of the cycle.
fn side_energies(spec: &CycleSpec, side: Side, n: usize) -> Result<Vec<f64>> {
    let (well, imp) = spec.endpoint(side);
    let mut e = build_spectrum(&well, imp.as_ref(), spec.method, n)?.ordered_energies();
    e.truncate(n);
    Ok(e)
}

/// Retries with more levels while the thermal tail is too heavy.
fn with_auto_levels<T>(n_max: usize, mut eval: impl FnMut(usize) -> Result<T>) -> Result<T> {
    let mut n = n_max;
    loop {
        match eval(n) {
            Err(Error::Truncation { required_n_max, .. }) if n < MAX_AUTO_LEVELS => {
                n = (2 * n).max(required_n_max).min(MAX_AUTO_LEVELS);
            }
            other => return other,
        }
    }
}
