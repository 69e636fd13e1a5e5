//! Acceptance suite: one PASS/FAIL line per criterion, preceded by its sub-checks.
//!
//! Runs without the libtest harness so the report is always printed; the
//! process exits non-zero when any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::TestRunner;

use qwell_core::cycles::{
    carnot_run, carnot_strong_closed, otto_run, otto_strong_closed, required_cold_length, run_cycle,
};
use qwell_core::physconst::{beta, from_nm, gamma, BOLTZMANN, ELECTRONVOLT};
use qwell_core::spectrum::{
    isw_levels, solve_spectrum_numerical, strong_perturb_branch, strong_perturb_levels,
    weak_perturb_levels, DEFAULT_ROOT_TOL,
};
use qwell_core::sweep::{phase_regions, Axis, Region};
use qwell_core::tables::{fig15a_preset, fig8a_preset, presets, ComparisonRow, PresetRun};
use qwell_core::thermo::{thermal_state_from_energies, DEFAULT_TAIL_TOL};
use qwell_core::*;

const UEV: f64 = 1e-6 * ELECTRONVOLT;

struct Criterion {
    number: u32,
    title: &'static str,
    checks: Vec<(bool, String)>,
}

impl Criterion {
    fn new(number: u32, title: &'static str) -> Self {
        Criterion {
            number,
            title,
            checks: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        self.checks.push((ok, what.into()));
    }

    fn runtime(&mut self, started: Instant, limit: Duration) {
        let took = started.elapsed();
        self.check(
            took < limit,
            format!(
                "runtime {:.1} s < {} s",
                took.as_secs_f64(),
                limit.as_secs()
            ),
        );
    }

    fn rows(&mut self, rows: &[ComparisonRow]) {
        for r in rows.iter().filter(|r| r.pass.is_some()) {
            let got = r
                .computed
                .map_or("absent".to_string(), |c| format!("{c:.4}"));
            let what = format!(
                "Table {} row {} {} ({}): {got} {} vs paper {} [{}]",
                r.table, r.row, r.quantity, r.condition, r.unit, r.paper, r.tolerance
            );
            self.check(r.pass == Some(true), what);
        }
    }

    fn report(&self) -> bool {
        for (ok, what) in &self.checks {
            println!("    {}  {what}", if *ok { "pass" } else { "FAIL" });
        }
        let ok = self.checks.iter().all(|c| c.0);
        println!(
            "{} criterion {}: {}",
            if ok { "PASS" } else { "FAIL" },
            self.number,
            self.title
        );
        ok
    }
}

fn options() -> TableOptions {
    TableOptions::default()
}

fn run_presets(list: Vec<tables::Preset>) -> Vec<PresetRun> {
    list.into_iter()
        .map(|preset| {
            let grid = preset.run(&options()).expect("preset sweep");
            let summary = summarize(&grid);
            PresetRun {
                preset,
                grid,
                summary,
            }
        })
        .collect()
}

/// Rows of a table computed from already-evaluated presets.
fn table_rows(id: TableId, runs: &[PresetRun]) -> Vec<ComparisonRow> {
    tables::compare(id, runs).expect("comparison rows")
}

fn table_iii(runs: &[PresetRun], started: Instant) -> Criterion {
    let mut c = Criterion::new(1, "Table III reproduction");
    c.rows(&table_rows(TableId::III, runs));
    c.runtime(started, Duration::from_secs(300));
    c
}

fn table_iv(runs: &[PresetRun]) -> Criterion {
    let mut c = Criterion::new(2, "Table IV reproduction");
    let rows = table_rows(TableId::IV, runs);
    // |W|_max is the refrigerator work of the Otto cycle; the COP band applies to both cycles.
    let checked: Vec<_> = rows
        .into_iter()
        .filter(|r| r.quantity.contains("COP_max") || r.quantity == "QOR |W|_max")
        .collect();
    c.rows(&checked);
    c
}

/// Boundaries between a run and its neighbours, at the midpoint of the gap.
fn edges(runs: &[Region], k: usize) -> (f64, f64) {
    let lo = if k == 0 {
        runs[k].lo
    } else {
        0.5 * (runs[k - 1].hi + runs[k].lo)
    };
    let hi = if k + 1 == runs.len() {
        runs[k].hi
    } else {
        0.5 * (runs[k].hi + runs[k + 1].lo)
    };
    (lo, hi)
}

fn phase_regions_check(fig8a: &PresetRun, fig15a: &PresetRun) -> Criterion {
    let mut c = Criterion::new(3, "phase regions of Fig. 8(a) and Fig. 15(a)");
    let tol = 0.03;
    let within = |x: f64, target: f64| (x - target).abs() <= tol;
    let (mut he_ok, mut cpl_ok, mut cpr_ok, mut lines) = (0, 0, 0, 0);
    let mut worst = [0.0f64; 6];
    for line in phase_regions(&fig8a.grid, Axis::X) {
        lines += 1;
        let runs = &line.regions;
        let Some(k) = runs
            .iter()
            .position(|r| r.phase == Some(Phase::HeatEngine) && r.lo <= 0.5 && r.hi >= 0.5)
        else {
            continue;
        };
        let (he_lo, he_hi) = edges(runs, k);
        worst[0] = worst[0].max((he_lo - 0.35).abs());
        worst[1] = worst[1].max((he_hi - 0.65).abs());
        he_ok += usize::from(within(he_lo, 0.35) && within(he_hi, 0.65));
        if k > 0 && runs[k - 1].phase == Some(Phase::ColdPump) {
            let (lo, hi) = edges(runs, k - 1);
            worst[2] = worst[2].max((lo - 0.16).abs());
            worst[3] = worst[3].max((hi - 0.30).abs());
            cpl_ok += usize::from(within(lo, 0.16) && within(hi, 0.30));
        }
        if k + 1 < runs.len() && runs[k + 1].phase == Some(Phase::ColdPump) {
            let (lo, hi) = edges(runs, k + 1);
            worst[4] = worst[4].max((lo - 0.70).abs());
            worst[5] = worst[5].max((hi - 0.90).abs());
            cpr_ok += usize::from(within(lo, 0.70) && within(hi, 0.90));
        }
    }
    c.check(
        he_ok == lines,
        format!(
            "Fig. 8(a) HeatEngine on 0.35 < p < 0.65 ±{tol}: {he_ok}/{lines} L-rows, worst edge miss {:.3}/{:.3}",
            worst[0], worst[1]
        ),
    );
    c.check(
        cpl_ok == lines,
        format!(
            "Fig. 8(a) ColdPump on 0.16 < p < 0.3 ±{tol}: {cpl_ok}/{lines} L-rows, worst edge miss {:.3}/{:.3}",
            worst[2], worst[3]
        ),
    );
    c.check(
        cpr_ok == lines,
        format!(
            "Fig. 8(a) ColdPump on 0.7 < p < 0.9 ±{tol}: {cpr_ok}/{lines} L-rows, worst edge miss {:.3}/{:.3}",
            worst[4], worst[5]
        ),
    );

    let (mut ok, mut total, mut lo_flip, mut hi_flip) = (0, 0, f64::INFINITY, f64::NEG_INFINITY);
    for line in phase_regions(&fig15a.grid, Axis::X) {
        total += 1;
        let runs = &line.regions;
        let flip = runs.windows(2).position(|w| {
            w[0].phase == Some(Phase::HeatEngine) && w[1].phase == Some(Phase::ColdPump)
        });
        if let (Some(k), 2) = (flip, runs.len()) {
            let l_nm = 0.5 * (runs[k].hi + runs[k + 1].lo) * 1e9;
            lo_flip = lo_flip.min(l_nm);
            hi_flip = hi_flip.max(l_nm);
            ok += usize::from((l_nm - 50.0).abs() <= 5.0);
        }
    }
    c.check(
        ok == total,
        format!("Fig. 15(a) single HE→CP flip at L = 50 ± 5 nm: {ok}/{total} f-rows, flips span {lo_flip:.1}–{hi_flip:.1} nm"),
    );
    c
}

fn table_ii(runs: &[PresetRun]) -> Criterion {
    let mut c = Criterion::new(4, "Table II order of magnitude");
    c.rows(&table_rows(TableId::II, runs));
    c
}

fn table_vi(runs: &[PresetRun]) -> Criterion {
    let mut c = Criterion::new(5, "Table VI strong coupling");
    c.rows(&table_rows(TableId::VI, runs));
    c
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs())
}

fn spectrum_suite() -> Criterion {
    let started = Instant::now();
    let mut c = Criterion::new(6, "spectrum property suite");
    let well = WellSpec::new(from_nm(100.0)).unwrap();
    let ps: Vec<f64> = (0..=20).map(|k| k as f64 / 20.0).collect();

    // (a) weak regime
    for m in [0.5, 1.0, 2.0] {
        let mut worst = (0.0f64, 0.0, 0.0);
        for f in [m, -m] {
            for &p in &ps {
                let imp = ImpuritySpec::new(f, p).unwrap();
                let num = solve_spectrum_numerical(&well, &imp, 6, DEFAULT_ROOT_TOL)
                    .unwrap()
                    .ordered_energies();
                let pert = weak_perturb_levels(&well, &imp, 6, 2).unwrap();
                for (a, b) in num.iter().take(6).zip(pert.energies()) {
                    let d = (a - b).abs() / a.abs();
                    if d > worst.0 {
                        worst = (d, f, p);
                    }
                }
            }
        }
        c.check(
            worst.0 < 0.02,
            format!(
                "(a) |f| = {m}: order-2 vs numerical worst {:.3}% (f = {}, p = {}) < 2%",
                worst.0 * 100.0,
                worst.1,
                worst.2
            ),
        );
    }

    // (b) bound-state existence on a 20×20 grid
    let fs: Vec<f64> = (0..20).map(|k| -0.95 + 0.1 * k as f64).collect();
    let grid_ps: Vec<f64> = (0..20).map(|k| (k as f64 + 0.5) / 20.0).collect();
    let mut mismatches = Vec::new();
    for &f in &fs {
        for &p in &grid_ps {
            let imp = ImpuritySpec::new(f, p).unwrap();
            let has = qwell_core::spectrum::bound_state(&well, &imp).is_some();
            if has != (f > 0.0 && f < 0.5) {
                mismatches.push((f, p));
            }
        }
    }
    let example = mismatches.first().map_or(String::new(), |(f, p)| {
        format!(", e.g. f = {f:.2}, p = {p:.3}")
    });
    c.check(
        mismatches.is_empty(),
        format!(
            "(b) bound state iff 0 < f < 0.5: {} of 400 grid points disagree{example}",
            mismatches.len()
        ),
    );

    // (c) mirror symmetry
    let (mut pert_worst, mut num_worst) = (0.0f64, 0.0f64);
    for f in [-2.0, -1.0, -0.5, -0.02, 0.02, 0.5, 1.0, 2.0] {
        for &p in &ps {
            let a = ImpuritySpec::new(f, p).unwrap();
            let b = a.mirrored();
            let n = 30;
            let mut pairs = vec![
                (
                    weak_perturb_levels(&well, &a, n, 1).unwrap(),
                    weak_perturb_levels(&well, &b, n, 1).unwrap(),
                ),
                (
                    weak_perturb_levels(&well, &a, n, 2).unwrap(),
                    weak_perturb_levels(&well, &b, n, 2).unwrap(),
                ),
            ];
            if p > 0.0 && p < 1.0 {
                pairs.push((
                    strong_perturb_levels(&well, &a, n).unwrap(),
                    strong_perturb_levels(&well, &b, n).unwrap(),
                ));
                pairs.push((
                    strong_perturb_branch(&well, &a, n, StrongBranch::LeftWell).unwrap(),
                    strong_perturb_branch(&well, &b, n, StrongBranch::RightWell).unwrap(),
                ));
            }
            for (x, y) in &pairs {
                for (u, v) in x.energies().zip(y.energies()) {
                    pert_worst = pert_worst.max(rel(u, v));
                }
            }
            let x = solve_spectrum_numerical(&well, &a, n, DEFAULT_ROOT_TOL)
                .unwrap()
                .ordered_energies();
            let y = solve_spectrum_numerical(&well, &b, n, DEFAULT_ROOT_TOL)
                .unwrap()
                .ordered_energies();
            for (u, v) in x.iter().zip(&y) {
                num_worst = num_worst.max(rel(*u, *v));
            }
        }
    }
    c.check(
        pert_worst < 1e-12,
        format!("(c) perturbative mirror symmetry worst {pert_worst:.2e} < 1e-12"),
    );
    c.check(
        num_worst < 1e-9,
        format!("(c) numerical mirror symmetry worst {num_worst:.2e} < 1e-9"),
    );

    // (d) infinite-strength limit
    let bare: Vec<f64> = isw_levels(&well, 6).unwrap().energies().collect();
    let mut worst = 0.0f64;
    for f in [1e6, -1e6] {
        for &p in &ps {
            let imp = ImpuritySpec::new(f, p).unwrap();
            for (u, v) in weak_perturb_levels(&well, &imp, 6, 2)
                .unwrap()
                .energies()
                .zip(&bare)
            {
                worst = worst.max((u - v).abs() / v);
            }
        }
    }
    c.check(
        worst < 1e-9,
        format!("(d) order-2 at |f| = 1e6 vs bare well worst {worst:.2e} < 1e-9"),
    );
    c.runtime(started, Duration::from_secs(60));
    c
}

fn random_spec() -> impl Strategy<Value = CycleSpec> {
    let method = prop_oneof![
        Just(SpectrumMethod::Numerical),
        Just(SpectrumMethod::WeakPerturb1),
        Just(SpectrumMethod::WeakPerturb2),
    ];
    let weak = prop_oneof![-4.0f64..-0.5, 0.5f64..4.0];
    let temps = (1.0f64..4.0, 1.1f64..20.0).prop_map(|(tc, r)| (tc * r, tc));
    let length_nm = 10.0f64..150.0;
    let otto_strength = (
        weak.clone(),
        weak.clone(),
        0.01f64..0.99,
        length_nm.clone(),
        temps.clone(),
        method.clone(),
    )
        .prop_map(|(fh, fc, p, l, (th, tc), m)| {
            CycleSpec::otto(VariedParam::Strength { hot: fh, cold: fc })
                .with_position(p)
                .with_length(from_nm(l))
                .with_temperatures(th, tc)
                .with_method(m)
        });
    let otto_length = (
        weak.clone(),
        0.0f64..1.0,
        length_nm.clone(),
        1.05f64..2.0,
        temps.clone(),
        method.clone(),
    )
        .prop_map(|(f, p, l, k, (th, tc), m)| {
            CycleSpec::otto(VariedParam::Length {
                hot: from_nm(l),
                cold: from_nm(l * k),
            })
            .with_strength(f)
            .with_position(p)
            .with_temperatures(th, tc)
            .with_method(m)
        });
    let otto_position = (
        weak.clone(),
        0.0f64..1.0,
        0.0f64..1.0,
        length_nm.clone(),
        temps.clone(),
        method.clone(),
    )
        .prop_map(|(f, ph, pc, l, (th, tc), m)| {
            CycleSpec::otto(VariedParam::Position { hot: ph, cold: pc })
                .with_strength(f)
                .with_length(from_nm(l))
                .with_temperatures(th, tc)
                .with_method(m)
        });
    let strong = (
        prop_oneof![-0.08f64..-0.005, 0.005f64..0.08],
        0.05f64..0.95,
        0.05f64..0.95,
        20.0f64..80.0,
        temps.clone(),
    )
        .prop_map(|(f, ph, pc, l, (th, tc))| {
            CycleSpec::otto(VariedParam::Position { hot: ph, cold: pc })
                .with_strength(f)
                .with_length(from_nm(l))
                .with_temperatures(th, tc)
                .with_method(SpectrumMethod::StrongPerturb1(StrongBranch::LeftWell))
        });
    let carnot = (weak, 0.0f64..1.0, length_nm, 1.05f64..2.0, temps, method).prop_map(
        |(f, p, l, k, (th, tc), m)| {
            CycleSpec::carnot(VariedParam::Length {
                hot: from_nm(l),
                cold: from_nm(l * k),
            })
            .with_strength(f)
            .with_position(p)
            .with_temperatures(th, tc)
            .with_method(m)
            .with_reversibility(ReversibilityPolicy::Report)
        },
    );
    prop_oneof![otto_strength, otto_length, otto_position, strong, carnot]
}

fn samples<T: std::fmt::Debug>(strategy: impl Strategy<Value = T>, n: usize) -> Vec<T> {
    let mut runner = TestRunner::deterministic();
    (0..n)
        .map(|_| strategy.new_tree(&mut runner).expect("sample").current())
        .collect()
}

fn thermo_suite(table_grids: &[&PresetRun]) -> Criterion {
    let started = Instant::now();
    let mut c = Criterion::new(7, "thermodynamic property suite");
    let n_max = spectrum::DEFAULT_N_MAX;

    let specs = samples(random_spec(), 1000);
    let (mut worst, mut failures) = (0.0f64, Vec::new());
    for spec in &specs {
        match run_cycle(spec, n_max, DEFAULT_TAIL_TOL) {
            Ok(r) => {
                let scale = r.q_in.abs().max(r.q_out.abs()).max(r.work.abs());
                if scale > 0.0 {
                    worst = worst.max((r.work - (r.q_in + r.q_out)).abs() / scale);
                }
            }
            Err(e) => failures.push(e.to_string()),
        }
    }
    c.check(
        worst <= 1e-12 && failures.is_empty(),
        format!(
            "first law on {} random cycles: worst residual {worst:.2e} <= 1e-12, {} evaluation errors{}",
            specs.len(),
            failures.len(),
            failures.first().map_or(String::new(), |e| format!(" (first: {e})"))
        ),
    );

    // Carnot merit and bound on every grid cell of criteria 1–5.
    let (mut carnot_cells, mut carnot_worst) = (0usize, 0.0f64);
    let (mut he_cells, mut margin) = (0usize, f64::INFINITY);
    for run in table_grids {
        for iy in 0..run.grid.axis_y.steps {
            for ix in 0..run.grid.axis_x.steps {
                let Ok(r) = run.grid.cell(ix, iy) else {
                    continue;
                };
                if r.phase != Phase::HeatEngine {
                    continue;
                }
                let spec = run.grid.spec_at(ix, iy);
                let bound = 1.0 - spec.t_cold / spec.t_hot;
                let eta = r.merit.unwrap();
                he_cells += 1;
                margin = margin.min(bound + 1e-9 - eta);
                if spec.kind == CycleKind::Carnot {
                    carnot_cells += 1;
                    carnot_worst = carnot_worst.max((eta - bound).abs());
                }
            }
        }
    }
    c.check(
        carnot_cells > 0 && carnot_worst <= 1e-12,
        format!("Carnot engine merit = 1 − T_c/T_h on {carnot_cells} cells: worst {carnot_worst:.2e} <= 1e-12"),
    );
    c.check(
        he_cells > 0 && margin >= 0.0,
        format!("Carnot bound on {he_cells} heat-engine cells: smallest margin {margin:.3e} >= 0"),
    );

    // Entropy identity and normalization, with ln Z recomputed by log-sum-exp.
    let states = samples(
        (random_spec(), prop_oneof![Just(0), Just(1)], 1.0f64..40.0),
        300,
    );
    let (mut id_worst, mut norm_worst, mut count) = (0.0f64, 0.0f64, 0);
    for (spec, side, t) in &states {
        let side = if *side == 0 {
            cycles::Side::Hot
        } else {
            cycles::Side::Cold
        };
        let (well, imp) = spec.endpoint(side);
        let mut n = n_max;
        let (energies, state) = loop {
            let e = build_spectrum(&well, imp.as_ref(), spec.method, n)
                .unwrap()
                .ordered_energies();
            match thermal_state_from_energies(&e, *t, DEFAULT_TAIL_TOL) {
                Ok(s) => break (e, s),
                Err(Error::Truncation { required_n_max, .. }) if n < 20_000 => {
                    n = required_n_max.max(2 * n)
                }
                Err(e) => panic!("thermal state: {e}"),
            }
        };
        let b = beta(*t).unwrap();
        let e0 = energies[0];
        let z_shift: f64 = energies.iter().map(|e| (-b * (e - e0)).exp()).sum();
        let ln_z = z_shift.ln() - b * e0;
        let u: f64 = energies
            .iter()
            .map(|e| e * (-b * (e - e0)).exp())
            .sum::<f64>()
            / z_shift;
        // S = k(ln Z + βU), written with shifted energies to avoid cancellation.
        let s = BOLTZMANN * (z_shift.ln() + b * (u - e0));
        // A state frozen in its ground level has S ≈ 0, so measure against k_B there.
        id_worst = id_worst.max((state.entropy_s - s).abs() / s.abs().max(BOLTZMANN));
        id_worst = id_worst.max((state.ln_z - ln_z).abs() / ln_z.abs().max(1.0));
        let total: f64 = state.probabilities.iter().sum();
        norm_worst = norm_worst.max((1.0 - DEFAULT_TAIL_TOL) - total);
        count += 1;
    }
    c.check(
        id_worst <= 1e-10,
        format!("entropy identity on {count} thermal states: worst {id_worst:.2e} <= 1e-10"),
    );
    c.check(
        norm_worst <= 0.0,
        format!("normalization Σ P_n ≥ 1 − tail_tol on {count} states: worst shortfall {norm_worst:.2e}"),
    );
    c.runtime(started, Duration::from_secs(120));
    c
}

fn closed_form_suite() -> Criterion {
    let mut c = Criterion::new(8, "strong-coupling closed forms vs level sums");
    let (l, t_h, t_c) = (from_nm(40.0), 10.0, 1.5);
    let g = gamma(l).unwrap();
    let (bh, bc) = (beta(t_h).unwrap(), beta(t_c).unwrap());
    let method = SpectrumMethod::StrongPerturb1(StrongBranch::LeftWell);
    for f in [0.01, 0.03] {
        for (p_h, p_c) in [(0.2, 0.5), (0.5, 0.2)] {
            let spec = CycleSpec::otto(VariedParam::Position {
                hot: p_h,
                cold: p_c,
            })
            .with_strength(f)
            .with_length(l)
            .with_temperatures(t_h, t_c)
            .with_method(method);
            let sum = otto_run(&spec, spectrum::DEFAULT_N_MAX, DEFAULT_TAIL_TOL).unwrap();
            let closed = otto_strong_closed(f, p_h, p_c, g, bh, bc);
            let d = rel(sum.work, closed.work);
            c.check(
                d <= 0.05,
                format!(
                    "Otto f = {f}, p {p_h}→{p_c}: W level sum {:.4} µeV vs closed {:.4} µeV ({:.1}%)",
                    sum.work / UEV,
                    closed.work / UEV,
                    d * 100.0
                ),
            );
        }
        for p in [0.2, 0.5] {
            let l_c = required_cold_length(l, t_h, t_c);
            let spec = CycleSpec::carnot(VariedParam::Length { hot: l, cold: l_c })
                .with_strength(f)
                .with_position(p)
                .with_temperatures(t_h, t_c)
                .with_method(method);
            let sum = carnot_run(&spec, spectrum::DEFAULT_N_MAX, DEFAULT_TAIL_TOL).unwrap();
            let closed = carnot_strong_closed(f, p, g, gamma(l_c).unwrap(), bh, bc, t_h, t_c);
            // The reversible cycle has W = 0 on both sides; compare the endpoint entropies it is built from.
            for (side, t, gm, s_closed) in [
                ("hot", t_h, g, closed.s_h),
                ("cold", t_c, gamma(l_c).unwrap(), closed.s_c),
            ] {
                let well = WellSpec::new(if side == "hot" { l } else { l_c }).unwrap();
                let imp = ImpuritySpec::new(f, p).unwrap();
                let s = thermal_state(
                    &build_spectrum(&well, Some(&imp), method, 400).unwrap(),
                    t,
                    DEFAULT_TAIL_TOL,
                )
                .unwrap()
                .entropy_s;
                let d = rel(s, s_closed);
                c.check(
                    d <= 0.05,
                    format!(
                        "Carnot f = {f}, p = {p}: {side} entropy level sum {:.4} k_B vs closed {:.4} k_B (βγ = {:.2}, {:.1}%)",
                        s / BOLTZMANN,
                        s_closed / BOLTZMANN,
                        beta(t).unwrap() * gm,
                        d * 100.0
                    ),
                );
            }
            c.check(
                sum.work.abs() <= 1e-9 * (t_h * sum.q_in.abs().max(1e-40))
                    || sum.phase == Phase::Degenerate,
                format!(
                    "Carnot f = {f}, p = {p}: reversible W {:.3e} J, closed {:.3e} J",
                    sum.work, closed.work
                ),
            );
        }
    }
    c
}

fn main() -> ExitCode {
    let t_iii = Instant::now();
    let iii = run_presets(presets(TableId::III, options().steps));
    let c1 = table_iii(&iii, t_iii);
    let iv = run_presets(presets(TableId::IV, options().steps));
    let ii = run_presets(presets(TableId::II, options().steps));
    let vi = run_presets(presets(TableId::VI, options().steps));
    let figs = run_presets(vec![
        fig8a_preset(options().steps),
        fig15a_preset(options().steps),
    ]);

    let mut all = vec![
        c1,
        table_iv(&iv),
        phase_regions_check(&figs[0], &figs[1]),
        table_ii(&ii),
        table_vi(&vi),
    ];
    all.push(spectrum_suite());
    let grids: Vec<&PresetRun> = iii
        .iter()
        .chain(&iv)
        .chain(&ii)
        .chain(&vi)
        .chain(&figs)
        .collect();
    all.push(thermo_suite(&grids));
    all.push(closed_form_suite());

    println!();
    let mut ok = true;
    for c in &all {
        ok &= c.report();
    }
    let failed: Vec<_> = all
        .iter()
        .filter(|c| !c.checks.iter().all(|x| x.0))
        .map(|c| c.number)
        .collect();
    println!(
        "\nacceptance: {} of {} criteria pass; failing: {failed:?}",
        all.len() - failed.len(),
        all.len()
    );
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
