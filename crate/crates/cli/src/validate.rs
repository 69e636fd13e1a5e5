//! Cross-module invariant suite behind `qwell validate`.
//!
//! Every check reports the worst value it measured and the limit it was held
//! to, so a passing report still shows how much slack there is.

use qwell_core::cycles::{
    carnot_run, carnot_strong_closed, classify, otto_heats, otto_run, otto_strong_closed,
    run_cycle, EPS_REL,
};
use qwell_core::physconst::{beta, from_nm, gamma, BOLTZMANN};
use qwell_core::spectrum::{
    bound_state_kappa_l, build_spectrum, ImpuritySpec, SpectrumMethod, StrongBranch, WellSpec,
};
use qwell_core::sweep::{run_sweep, SweepAxis, SweepParam};
use qwell_core::thermo::thermal_state;
use qwell_core::{CycleSpec, Phase, ReversibilityPolicy, VariedParam};

use crate::commands::RunOptions;
use crate::output::{Field, Table};

/// Deliberate corruption used to prove the suite can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Fault {
    /// Negate `Q_out` before the first-law check.
    FlipQout,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub what: &'static str,
    pub measured: f64,
    pub limit: f64,
    /// `measured ≤ limit` unless `at_least` is set.
    pub at_least: bool,
}

impl Check {
    fn at_most(name: &'static str, what: &'static str, measured: f64, limit: f64) -> Check {
        Check {
            name,
            what,
            measured,
            limit,
            at_least: false,
        }
    }

    pub fn passed(&self) -> bool {
        if self.measured.is_nan() {
            return false;
        }
        if self.at_least {
            self.measured >= self.limit
        } else {
            self.measured <= self.limit
        }
    }
}

pub fn report(checks: &[Check]) -> Table {
    let mut t = Table::new([
        "check",
        "measured",
        "relation",
        "limit",
        "pass",
        "description",
    ]);
    for c in checks {
        t.push(vec![
            c.name.into(),
            Field::Num(c.measured),
            if c.at_least { ">=" } else { "<=" }.into(),
            Field::Num(c.limit),
            if c.passed() { "pass" } else { "FAIL" }.into(),
            c.what.into(),
        ]);
    }
    t
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs()
    }
}

const LEFT: SpectrumMethod = SpectrumMethod::StrongPerturb1(StrongBranch::LeftWell);
const UNION: SpectrumMethod = SpectrumMethod::StrongPerturb1(StrongBranch::Union);

/// Runs every check. Errors are numerical failures, not failed checks.
pub fn run_all(opts: &RunOptions, fault: Option<Fault>) -> anyhow::Result<Vec<Check>> {
    Ok(vec![
        first_law(opts, fault)?,
        carnot_bound(opts)?,
        carnot_exact(opts)?,
        mirror(opts, SpectrumMethod::Numerical, 1e-9, "mirror_numerical")?,
        mirror(opts, SpectrumMethod::WeakPerturb2, 1e-12, "mirror_weak2")?,
        mirror(opts, UNION, 1e-12, "mirror_strong1")?,
        weak_agreement(opts)?,
        strong_agreement(opts)?,
        bound_state_map(),
        closed_form_otto(opts)?,
        closed_form_carnot(opts)?,
        swap_relabel(opts)?,
        classification(),
        entropy_identity(opts)?,
        normalization(opts)?,
    ])
}

/// A spread of Otto and Carnot specs over every varied parameter and method.
fn cycle_specs() -> Vec<CycleSpec> {
    let mut specs = Vec::new();
    for (f_h, f_c) in [(1.0, -1.0), (2.0, 5.0), (-3.0, 1.5)] {
        for p in [0.2, 0.5, 0.85] {
            for method in [SpectrumMethod::Numerical, SpectrumMethod::WeakPerturb2] {
                specs.push(
                    CycleSpec::otto(VariedParam::Strength {
                        hot: f_h,
                        cold: f_c,
                    })
                    .with_position(p)
                    .with_length(from_nm(40.0))
                    .with_temperatures(25.0, 1.5)
                    .with_method(method),
                );
            }
        }
    }
    for (l_c, f) in [(129.0, Some(1.0)), (163.0, Some(-2.0)), (163.0, None)] {
        let spec = CycleSpec::otto(VariedParam::Length {
            hot: from_nm(100.0),
            cold: from_nm(l_c),
        })
        .with_temperatures(5.0, 1.5)
        .with_position(0.3);
        specs.push(match f {
            Some(f) => spec.with_strength(f),
            None => spec,
        });
    }
    for (p_h, p_c) in [(0.1, 0.8), (0.6, 0.3)] {
        specs.push(
            CycleSpec::otto(VariedParam::Position {
                hot: p_h,
                cold: p_c,
            })
            .with_strength(2.0)
            .with_length(60.0e-9)
            .with_temperatures(10.0, 1.5),
        );
    }
    for p_c in [0.5, 0.8] {
        specs.push(
            CycleSpec::otto(VariedParam::Position {
                hot: 0.2,
                cold: p_c,
            })
            .with_strength(0.03)
            .with_length(from_nm(40.0))
            .with_temperatures(10.0, 1.5)
            .with_method(LEFT),
        );
    }
    for f in [0.02, 1.0, -1.0] {
        specs.push(
            CycleSpec::carnot(VariedParam::Length {
                hot: from_nm(100.0),
                cold: from_nm(163.0),
            })
            .with_strength(f)
            .with_position(0.4)
            .with_temperatures(5.0, 1.5)
            .with_reversibility(ReversibilityPolicy::Report),
        );
    }
    specs
}

fn first_law(opts: &RunOptions, fault: Option<Fault>) -> anyhow::Result<Check> {
    let mut worst = 0.0_f64;
    for spec in cycle_specs() {
        let r = run_cycle(&spec, opts.n_max, opts.tail_tol)?;
        let q_out = match fault {
            Some(Fault::FlipQout) => -r.q_out,
            None => r.q_out,
        };
        let scale = r.q_in.abs().max(q_out.abs()).max(r.work.abs());
        if scale > 0.0 {
            worst = worst.max((r.work - (r.q_in + q_out)).abs() / scale);
        }
    }
    Ok(Check::at_most(
        "first_law",
        "max |W - (Q_in + Q_out)| / max(|Q_in|, |Q_out|, |W|) over a fixed spec grid",
        worst,
        1e-12,
    ))
}

fn carnot_bound(opts: &RunOptions) -> anyhow::Result<Check> {
    let grids = [
        (
            CycleSpec::otto(VariedParam::Strength {
                hot: 1.0,
                cold: -1.0,
            })
            .with_temperatures(25.0, 1.5)
            .with_method(SpectrumMethod::WeakPerturb2),
            SweepAxis::new(SweepParam::ImpurityPosition, 0.0, 1.0, 21)?,
            SweepAxis::new(SweepParam::WellLength, from_nm(10.0), from_nm(100.0), 10)?,
        ),
        (
            CycleSpec::otto(VariedParam::Length {
                hot: from_nm(100.0),
                cold: from_nm(163.0),
            })
            .with_strength(1.0)
            .with_temperatures(5.0, 1.5)
            .with_method(SpectrumMethod::WeakPerturb2),
            SweepAxis::new(SweepParam::ImpurityStrength, 1.0, 10.0, 10)?,
            SweepAxis::new(SweepParam::ImpurityPosition, 0.0, 1.0, 21)?,
        ),
        (
            CycleSpec::otto(VariedParam::Position {
                hot: 0.2,
                cold: 0.8,
            })
            .with_strength(0.03)
            .with_temperatures(10.0, 1.5)
            .with_method(LEFT),
            SweepAxis::new(SweepParam::HotTemperature, 5.0, 35.0, 7)?,
            SweepAxis::new(SweepParam::WellLength, from_nm(20.0), from_nm(80.0), 7)?,
        ),
    ];
    let mut margin = f64::INFINITY;
    for (template, ax, ay) in grids {
        let grid = run_sweep(&template, &ax, &ay, opts.n_max, opts.tail_tol, opts.workers)?;
        for (k, cell) in grid.cells.iter().enumerate() {
            let Ok(r) = cell else { continue };
            if r.phase != Phase::HeatEngine {
                continue;
            }
            let spec = grid.spec_at(k % ax.steps, k / ax.steps);
            let bound = 1.0 - spec.t_cold / spec.t_hot;
            margin = margin.min(bound - r.merit.unwrap_or(f64::NAN));
        }
    }
    Ok(Check {
        name: "carnot_bound",
        what: "min (1 - T_c/T_h) - eta over heat-engine cells of three Otto grids",
        measured: margin,
        limit: 0.0,
        at_least: true,
    })
}

fn carnot_exact(opts: &RunOptions) -> anyhow::Result<Check> {
    let mut worst = 0.0_f64;
    for (t_h, l_c, f) in [(5.0, 163.0, 1.0), (2.49, 129.0, 3.0), (20.0, 300.0, -1.5)] {
        let spec = CycleSpec::carnot(VariedParam::Length {
            hot: from_nm(100.0),
            cold: from_nm(l_c),
        })
        .with_strength(f)
        .with_position(0.3)
        .with_temperatures(t_h, 1.5)
        .with_reversibility(ReversibilityPolicy::Report);
        let r = carnot_run(&spec, opts.n_max, opts.tail_tol)?;
        if r.phase == Phase::HeatEngine {
            let eta = r.merit.unwrap_or(f64::NAN);
            worst = worst.max((eta - (1.0 - 1.5 / t_h)).abs());
        }
    }
    Ok(Check::at_most(
        "carnot_efficiency",
        "max |eta - (1 - T_c/T_h)| over Carnot engines",
        worst,
        1e-12,
    ))
}

fn mirror(
    opts: &RunOptions,
    method: SpectrumMethod,
    limit: f64,
    name: &'static str,
) -> anyhow::Result<Check> {
    let well = WellSpec::new(from_nm(100.0))?;
    let mut worst = 0.0_f64;
    for f in [-2.0, -0.05, 0.03, 1.0, 2.0] {
        for p in [0.1, 0.23, 0.37, 0.5] {
            let imp = ImpuritySpec::new(f, p)?;
            let a = build_spectrum(&well, Some(&imp), method, opts.n_max.min(50))?;
            let b = build_spectrum(&well, Some(&imp.mirrored()), method, opts.n_max.min(50))?;
            for (x, y) in a.ordered_energies().iter().zip(b.ordered_energies()) {
                worst = worst.max(rel(*x, y));
            }
        }
    }
    Ok(Check::at_most(
        name,
        "max relative change of the spectrum under p -> 1 - p",
        worst,
        limit,
    ))
}

/// Worst relative gap between two methods over the first `levels` levels.
fn agreement(
    f: f64,
    ps: impl IntoIterator<Item = f64>,
    method: SpectrumMethod,
    levels: usize,
) -> anyhow::Result<f64> {
    let well = WellSpec::new(from_nm(100.0))?;
    let mut worst = 0.0_f64;
    for p in ps {
        let imp = ImpuritySpec::new(f, p)?;
        let num = build_spectrum(&well, Some(&imp), SpectrumMethod::Numerical, levels)?;
        let approx = build_spectrum(&well, Some(&imp), method, levels)?;
        for (x, y) in approx.energies().zip(num.energies()).take(levels) {
            worst = worst.max(rel(x, y));
        }
    }
    Ok(worst)
}

fn weak_agreement(_opts: &RunOptions) -> anyhow::Result<Check> {
    let mut worst = 0.0_f64;
    for f in [1.0, -1.0, 2.0, -2.0] {
        let ps = (0..21).map(|i| 0.025 + 0.045 * i as f64);
        worst = worst.max(agreement(f, ps, SpectrumMethod::WeakPerturb2, 6)?);
    }
    Ok(Check::at_most(
        "weak_agreement",
        "max relative gap, order-2 weak vs numerical, |f| in {1, 2}, 21 positions, six levels",
        worst,
        0.02,
    ))
}

fn strong_agreement(_opts: &RunOptions) -> anyhow::Result<Check> {
    let ps = (1..20).map(|i| i as f64 / 20.0);
    let worst = agreement(-0.01, ps, UNION, 4)?;
    Ok(Check::at_most(
        "strong_agreement",
        "max relative gap, first-order strong vs numerical, f = -0.01, 19 positions, four levels",
        worst,
        0.05,
    ))
}

fn bound_state_map() -> Check {
    let mut mismatches = 0usize;
    for i in 0..20 {
        let f = -0.95 + 0.1 * i as f64;
        for j in 0..20 {
            let p = (j as f64 + 0.5) / 20.0;
            let threshold = 2.0 * p * (1.0 - p);
            if (f - threshold).abs() < 1e-3 {
                continue;
            }
            let expected = f > 0.0 && f < threshold;
            if bound_state_kappa_l(f, p).is_some() != expected {
                mismatches += 1;
            }
        }
    }
    Check::at_most(
        "bound_state_map",
        "cells of a 20x20 (f, p) grid where a bound state exists but 0 < f < 2p(1-p) fails, or vice versa",
        mismatches as f64,
        0.0,
    )
}

/// Continuum checks need `βγ/p²` small on both strokes, hence the long well.
fn closed_form_otto(opts: &RunOptions) -> anyhow::Result<Check> {
    let l = from_nm(800.0);
    let mut worst = 0.0_f64;
    for (p_h, p_c) in [(0.2, 0.5), (0.8, 0.5)] {
        for f in [0.01, 0.03] {
            let spec = CycleSpec::otto(VariedParam::Position {
                hot: p_h,
                cold: p_c,
            })
            .with_strength(f)
            .with_length(l)
            .with_temperatures(10.0, 1.5)
            .with_method(LEFT);
            let sum = otto_run(&spec, opts.n_max, opts.tail_tol)?;
            let closed = otto_strong_closed(f, p_h, p_c, gamma(l)?, beta(10.0)?, beta(1.5)?);
            worst = worst.max(rel(sum.work, closed.work));
        }
    }
    Ok(Check::at_most(
        "closed_form_otto",
        "max relative gap, strong Otto closed form vs level sums at L = 800 nm",
        worst,
        0.05,
    ))
}

fn closed_form_carnot(opts: &RunOptions) -> anyhow::Result<Check> {
    let (l_h, l_c) = (from_nm(800.0), from_nm(1000.0));
    let mut worst = 0.0_f64;
    for f in [0.01, 0.03] {
        for p in [0.5, 0.8] {
            let spec = CycleSpec::carnot(VariedParam::Length {
                hot: l_h,
                cold: l_c,
            })
            .with_strength(f)
            .with_position(p)
            .with_temperatures(10.0, 1.5)
            .with_method(LEFT)
            .with_reversibility(ReversibilityPolicy::Report);
            let sum = carnot_run(&spec, opts.n_max, opts.tail_tol)?;
            let closed = carnot_strong_closed(
                f,
                p,
                gamma(l_h)?,
                gamma(l_c)?,
                beta(10.0)?,
                beta(1.5)?,
                10.0,
                1.5,
            );
            worst = worst.max(rel(sum.work, closed.work));
        }
    }
    Ok(Check::at_most(
        "closed_form_carnot",
        "max relative gap, strong Carnot closed form vs level sums, L 800 -> 1000 nm",
        worst,
        0.05,
    ))
}

/// Exchanging the two strokes together with the baths relabels the cycle:
/// `(Q_in, Q_out, W) -> (Q_out, Q_in, W)`.
fn swap_relabel(opts: &RunOptions) -> anyhow::Result<Check> {
    let mut worst = 0.0_f64;
    let n = opts.n_max;
    for (f_h, f_c, p) in [(1.0, -1.0, 0.3), (2.0, 4.0, 0.5), (-1.0, 3.0, 0.7)] {
        let well = WellSpec::new(from_nm(40.0))?;
        let e = |f: f64| -> anyhow::Result<Vec<f64>> {
            let imp = ImpuritySpec::new(f, p)?;
            Ok(
                build_spectrum(&well, Some(&imp), SpectrumMethod::WeakPerturb2, n)?
                    .ordered_energies(),
            )
        };
        let (e_h, e_c) = (e(f_h)?, e(f_c)?);
        let a = otto_heats(&e_h, &e_c, 25.0, 1.5, opts.tail_tol)?;
        let b = otto_heats(&e_c, &e_h, 1.5, 25.0, opts.tail_tol)?;
        let scale = a.q_in.abs().max(a.q_out.abs());
        for d in [a.q_in - b.q_out, a.q_out - b.q_in, a.work - b.work] {
            worst = worst.max(d.abs() / scale);
        }
    }
    Ok(Check::at_most(
        "swap_relabel",
        "max deviation from (Q_in, Q_out, W) -> (Q_out, Q_in, W) when strokes and baths swap",
        worst,
        1e-12,
    ))
}

fn classification() -> Check {
    let patterns = [
        (3.0, -1.0, 2.0),
        (-3.0, 1.0, -2.0),
        (3.0, -5.0, -2.0),
        (-1.0, -1.0, -2.0),
    ];
    let mut phases: Vec<Phase> = patterns
        .iter()
        .map(|&(qi, qo, w)| classify(qi, qo, w, EPS_REL))
        .filter(|p| *p != Phase::Degenerate)
        .collect();
    phases.sort();
    phases.dedup();
    Check {
        name: "classification",
        what: "distinct non-degenerate phases assigned to the four sign patterns",
        measured: phases.len() as f64,
        limit: 4.0,
        at_least: true,
    }
}

fn thermal_cases(opts: &RunOptions) -> anyhow::Result<Vec<qwell_core::ThermalState>> {
    let mut out = Vec::new();
    for (l_nm, f, p, t) in [
        (100.0, Some(1.0), 0.3, 5.0),
        (40.0, Some(0.02), 0.5, 10.0),
        (100.0, None, 0.5, 1.5),
        (20.0, Some(-2.0), 0.7, 25.0),
    ] {
        let well = WellSpec::new(from_nm(l_nm))?;
        let imp = f.map(|f| ImpuritySpec::new(f, p)).transpose()?;
        let s = build_spectrum(&well, imp.as_ref(), SpectrumMethod::Numerical, opts.n_max)?;
        out.push(thermal_state(&s, t, opts.tail_tol)?);
    }
    Ok(out)
}

fn entropy_identity(opts: &RunOptions) -> anyhow::Result<Check> {
    let mut worst = 0.0_f64;
    for st in thermal_cases(opts)? {
        let b = beta(st.temperature)?;
        let s = BOLTZMANN * (st.ln_z + b * st.internal_u);
        worst = worst.max((s - st.entropy_s).abs() / st.entropy_s.abs().max(BOLTZMANN));
    }
    Ok(Check::at_most(
        "entropy_identity",
        "max |S - k_B(ln Z + beta U)| / max(|S|, k_B)",
        worst,
        1e-10,
    ))
}

fn normalization(opts: &RunOptions) -> anyhow::Result<Check> {
    let mut worst = 0.0_f64;
    for st in thermal_cases(opts)? {
        let total: f64 = st.probabilities.iter().sum();
        worst = worst.max((total - 1.0).abs());
    }
    Ok(Check::at_most(
        "normalization",
        "max |sum of occupations - 1|",
        worst,
        1e-12,
    ))
}
