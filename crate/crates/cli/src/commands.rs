//! The subcommands. Each one renders into memory; `main` decides where it goes.

use qwell_core::cycles::{required_cold_length, run_cycle, CycleKind, Phase, VariedParam};
use qwell_core::physconst::{from_nm, nm, to_ev, HBAR};
use qwell_core::spectrum::{build_spectrum, ImpuritySpec, Spectrum, SpectrumMethod};
use qwell_core::sweep::{ensure_healthy, run_sweep, summarize, SweepAxis, SweepGrid, SweepParam};
use qwell_core::tables::{run_table, ComparisonRow, TableId, TableOptions, TableRun};
use qwell_core::SweepSummary;
use serde_json::{json, Value};

use crate::config::{Config, ConfigError};
use crate::output::{json_bytes, EnergyUnit, Field, Format, Table};

/// Numerical knobs after flags, config and environment are merged.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub n_max: usize,
    pub tail_tol: f64,
    pub workers: usize,
}

/// Rendered command output.
#[derive(Debug, Default)]
pub struct Output {
    pub main: Vec<u8>,
    /// Sweep summary, written next to `--out`.
    pub sidecar: Option<Vec<u8>>,
    /// A check inside the command failed (exit 1).
    pub failed: bool,
    /// Human-readable notes for stderr.
    pub notes: Vec<String>,
}

impl Output {
    fn main(main: Vec<u8>) -> Output {
        Output {
            main,
            ..Output::default()
        }
    }
}

fn render(table: &Table, format: Format) -> anyhow::Result<Vec<u8>> {
    match format {
        Format::Csv => table.to_csv(),
        Format::Json => json_bytes(&json!({ "rows": table.records() })),
    }
}

// ---------------------------------------------------------------- spectrum

/// `kL` of a positive level, `None` below zero.
fn k_l(energy: f64, length: f64, mass: f64) -> Option<f64> {
    (energy >= 0.0).then(|| (2.0 * mass * energy).sqrt() * length / HBAR)
}

pub fn spectrum(cfg: &Config, format: Format) -> anyhow::Result<Output> {
    let well = cfg.well()?;
    let sc = &cfg.spectrum;
    if sc.methods.is_empty() {
        return Err(ConfigError("spectrum.methods is empty".into()).into());
    }
    if sc.levels == 0 {
        return Err(ConfigError("spectrum.levels must be at least 1".into()).into());
    }
    let positions = cfg.positions()?;

    // One spectrum per (p, method), all built before any output.
    let mut blocks: Vec<(f64, Vec<Spectrum>)> = Vec::with_capacity(positions.len());
    for &p in &positions {
        let imp = cfg
            .impurity
            .strength
            .map(|f| ImpuritySpec::new(f, p))
            .transpose()?;
        let specs = sc
            .methods
            .iter()
            .map(|&m| build_spectrum(&well, imp.as_ref(), m, sc.levels))
            .collect::<qwell_core::Result<Vec<_>>>()?;
        blocks.push((p, specs));
    }

    let unit = EnergyUnit::pick(
        blocks
            .iter()
            .flat_map(|(_, s)| s.iter())
            .flat_map(|s| s.energies().take(sc.levels)),
    );
    let mut headers = vec![
        "method".to_string(),
        "p".into(),
        "n".into(),
        "kL".into(),
        "energy_eV".into(),
        format!("energy_{}", unit.suffix()),
    ];
    let compare = sc.methods.len() > 1;
    if compare {
        headers.push(format!("rel_diff_vs_{}", sc.methods[0]));
    }
    if sc.bound_state {
        headers.push("bound_state_eV".into());
    }
    let mut table = Table::new(headers);
    for (p, specs) in &blocks {
        let reference: Vec<f64> = specs[0].energies().collect();
        for (spec, method) in specs.iter().zip(&sc.methods) {
            for (i, e) in spec.energies().take(sc.levels).enumerate() {
                let mut row: Vec<Field> = vec![
                    method.name().into(),
                    (*p).into(),
                    (i + 1).into(),
                    Field::opt(k_l(e, well.length, well.mass)),
                    to_ev(e).into(),
                    unit.from_joules(e).into(),
                ];
                if compare {
                    let rel = match (method == &sc.methods[0], reference.get(i)) {
                        (false, Some(&r)) if r != 0.0 => Some((e - r) / r.abs()),
                        _ => None,
                    };
                    row.push(Field::opt(rel));
                }
                if sc.bound_state {
                    row.push(Field::opt(spec.bound_state.map(to_ev)));
                }
                table.push(row);
            }
        }
    }
    Ok(Output::main(render(&table, format)?))
}

// ---------------------------------------------------------------- cycle

fn varied_lab_values(v: &VariedParam) -> (f64, f64) {
    match *v {
        VariedParam::Length { hot, cold } => (nm(hot), nm(cold)),
        _ => v.values(),
    }
}

fn varied_unit(v: &VariedParam) -> &'static str {
    match v {
        VariedParam::Length { .. } => "_nm",
        _ => "",
    }
}

pub fn cycle(cfg: &Config, opts: &RunOptions, format: Format) -> anyhow::Result<Output> {
    let spec = cfg.cycle_spec()?;
    let r = run_cycle(&spec, opts.n_max, opts.tail_tol)?;
    let unit = EnergyUnit::for_magnitude(r.work);
    let (hot, cold) = varied_lab_values(&spec.varied);
    let u = varied_unit(&spec.varied);
    let kind = match spec.kind {
        CycleKind::Otto => "otto",
        CycleKind::Carnot => "carnot",
    };
    let mut table = Table::new([
        "kind".to_string(),
        "varied".into(),
        format!("hot{u}"),
        format!("cold{u}"),
        "t_hot_K".into(),
        "t_cold_K".into(),
        "method".into(),
        "q_in_eV".into(),
        "q_out_eV".into(),
        "w_eV".into(),
        format!("w_{}", unit.suffix()),
        "phase".into(),
        "merit".into(),
        "reversibility_residual".into(),
        "first_law_residual".into(),
    ]);
    table.push(vec![
        kind.into(),
        spec.varied.name().into(),
        hot.into(),
        cold.into(),
        spec.t_hot.into(),
        spec.t_cold.into(),
        spec.method.name().into(),
        to_ev(r.q_in).into(),
        to_ev(r.q_out).into(),
        to_ev(r.work).into(),
        unit.from_joules(r.work).into(),
        r.phase.code().into(),
        Field::opt(r.merit),
        Field::opt(r.reversibility_residual),
        r.first_law_residual.into(),
    ]);
    let main = match format {
        Format::Csv => table.to_csv()?,
        Format::Json => json_bytes(&table.records().remove(0))?,
    };
    Ok(Output::main(main))
}

// ---------------------------------------------------------------- sweep

/// Axis value in the unit its column is labelled with.
fn lab(param: SweepParam, v: f64) -> f64 {
    match param {
        SweepParam::WellLength => nm(v),
        _ => v,
    }
}

fn axis_header(prefix: &str, param: SweepParam) -> String {
    let suffix = match param {
        SweepParam::WellLength => "_nm",
        SweepParam::HotTemperature => "_K",
        _ => "",
    };
    format!("{prefix}_{}{suffix}", param.name())
}

fn axis_json(a: &SweepAxis) -> Value {
    json!({
        "param": a.param.name(),
        "lo": lab(a.param, a.lo),
        "hi": lab(a.param, a.hi),
        "steps": a.steps,
    })
}

fn grid_table(grid: &SweepGrid) -> Table {
    let unit = EnergyUnit::pick(grid.cells.iter().flatten().map(|r| r.work));
    let (px, py) = (grid.axis_x.param, grid.axis_y.param);
    let mut table = Table::new([
        "ix".to_string(),
        "iy".into(),
        axis_header("x", px),
        axis_header("y", py),
        "q_in_eV".into(),
        "q_out_eV".into(),
        "w_eV".into(),
        format!("w_{}", unit.suffix()),
        "phase".into(),
        "merit".into(),
        "error".into(),
    ]);
    let nx = grid.axis_x.steps;
    for (k, cell) in grid.cells.iter().enumerate() {
        let (x, y) = grid.coordinates(k);
        let mut row: Vec<Field> = vec![
            (k % nx).into(),
            (k / nx).into(),
            lab(px, x).into(),
            lab(py, y).into(),
        ];
        match cell {
            Ok(r) => row.extend([
                to_ev(r.q_in).into(),
                to_ev(r.q_out).into(),
                to_ev(r.work).into(),
                unit.from_joules(r.work).into(),
                r.phase.code().into(),
                Field::opt(r.merit),
                Field::Empty,
            ]),
            Err(msg) => {
                row.extend(std::iter::repeat_n(Field::Empty, 6));
                row.push(msg.as_str().into());
            }
        }
        table.push(row);
    }
    table
}

/// Summary with energies in eV and coordinates in axis units.
pub fn summary_json(grid: &SweepGrid, s: &SweepSummary) -> Value {
    let (px, py) = (grid.axis_x.param, grid.axis_y.param);
    let at = |c: Option<(f64, f64)>| c.map(|(x, y)| [lab(px, x), lab(py, y)]);
    let ev = |e: Option<f64>| e.map(to_ev);
    let census: serde_json::Map<String, Value> = Phase::ALL
        .iter()
        .map(|p| {
            let n = s.phase_census.get(p).copied().unwrap_or(0);
            (p.code().to_string(), Value::from(n))
        })
        .collect();
    json!({
        "cells": grid.cells.len(),
        "error_cells": s.error_cells,
        "phase_census": census,
        "w_max_eV": ev(s.w_max),
        "w_max_at": at(s.w_max_at),
        "eta_max": s.eta_max,
        "eta_max_at": at(s.eta_max_at),
        "w_at_eta_max_eV": ev(s.w_at_eta_max),
        "abs_w_max_eV": ev(s.abs_w_max),
        "abs_w_max_at": at(s.abs_w_max_at),
        "cop_max": s.cop_max,
        "cop_max_at": at(s.cop_max_at),
        "abs_w_at_cop_max_eV": ev(s.abs_w_at_cop_max),
    })
}

pub fn sweep(cfg: &Config, opts: &RunOptions, format: Format) -> anyhow::Result<Output> {
    let template = cfg.cycle_spec()?;
    let (ax, ay) = cfg.sweep_axes()?;
    let grid = run_sweep(&template, &ax, &ay, opts.n_max, opts.tail_tol, opts.workers)?;
    ensure_healthy(&grid)?;
    let summary = summary_json(&grid, &summarize(&grid));
    let table = grid_table(&grid);
    let mut out = match format {
        Format::Csv => {
            let mut o = Output::main(table.to_csv()?);
            o.sidecar = Some(json_bytes(&summary)?);
            o
        }
        Format::Json => Output::main(json_bytes(&json!({
            "axis_x": axis_json(&ax),
            "axis_y": axis_json(&ay),
            "cells": table.records(),
            "summary": summary,
        }))?),
    };
    if grid.error_count() > 0 {
        out.notes.push(format!(
            "{} of {} cells failed; see the error column",
            grid.error_count(),
            grid.cells.len()
        ));
    }
    Ok(out)
}

// ---------------------------------------------------------------- tables

/// `all` or one table id.
pub fn parse_tables(id: &str) -> anyhow::Result<Vec<TableId>> {
    if id.eq_ignore_ascii_case("all") {
        Ok(TableId::ALL.to_vec())
    } else {
        Ok(vec![id.parse()?])
    }
}

fn comparison_table(runs: &[TableRun]) -> Table {
    let mut table = Table::new([
        "table",
        "row",
        "condition",
        "quantity",
        "unit",
        "paper",
        "computed",
        "rel_dev",
        "tolerance",
        "pass",
    ]);
    for r in runs.iter().flat_map(|t| &t.rows) {
        table.push(comparison_row(r));
    }
    table
}

fn comparison_row(r: &ComparisonRow) -> Vec<Field> {
    let verdict = match r.pass {
        Some(true) => "pass",
        Some(false) => "FAIL",
        None => "info",
    };
    vec![
        r.table.name().into(),
        r.row.into(),
        r.condition.as_str().into(),
        r.quantity.as_str().into(),
        r.unit.as_str().into(),
        r.paper.into(),
        Field::opt(r.computed),
        Field::opt(r.rel_dev),
        r.tolerance.to_string().into(),
        verdict.into(),
    ]
}

pub fn tables(
    ids: &[TableId],
    steps: usize,
    check: bool,
    opts: &RunOptions,
    format: Format,
) -> anyhow::Result<Output> {
    let topts = TableOptions {
        steps,
        n_max: opts.n_max,
        tail_tol: opts.tail_tol,
        workers: opts.workers,
    };
    let runs = ids
        .iter()
        .map(|&id| run_table(id, &topts))
        .collect::<qwell_core::Result<Vec<_>>>()?;
    let table = comparison_table(&runs);
    let main = match format {
        Format::Csv => table.to_csv()?,
        Format::Json => {
            let presets: Vec<Value> = runs
                .iter()
                .flat_map(|t| {
                    t.runs.iter().map(move |r| {
                        json!({
                            "table": t.table.name(),
                            "label": r.preset.label,
                            "axis_x": axis_json(&r.preset.axis_x),
                            "axis_y": axis_json(&r.preset.axis_y),
                            "summary": summary_json(&r.grid, &r.summary),
                        })
                    })
                })
                .collect();
            json_bytes(&json!({ "rows": table.records(), "presets": presets }))?
        }
    };
    let failed: Vec<String> = runs
        .iter()
        .flat_map(|t| &t.rows)
        .filter(|r| r.failed())
        .map(|r| format!("table {} row {} {}", r.table, r.row, r.quantity))
        .collect();
    let mut out = Output::main(main);
    if check && !failed.is_empty() {
        out.failed = true;
        out.notes.extend(
            failed
                .into_iter()
                .map(|f| format!("outside tolerance: {f}")),
        );
    }
    Ok(out)
}

// ---------------------------------------------------------------- carnot-length

/// Cold-stroke length (nm) that makes a Carnot cycle reversible.
pub fn carnot_length(l_hot_nm: f64, t_hot: f64, t_cold: f64) -> anyhow::Result<f64> {
    if !(l_hot_nm > 0.0 && l_hot_nm.is_finite()) {
        return Err(ConfigError(format!("hot length must be positive, got {l_hot_nm}")).into());
    }
    if !(t_cold > 0.0 && t_hot > t_cold && t_hot.is_finite()) {
        return Err(
            ConfigError(format!("need T_hot > T_cold > 0, got {t_hot} and {t_cold}")).into(),
        );
    }
    Ok(nm(required_cold_length(from_nm(l_hot_nm), t_hot, t_cold)))
}

/// Accepted spectrum method names, for help text.
pub fn method_names() -> String {
    SpectrumMethod::ALL
        .iter()
        .map(|m| m.name())
        .collect::<Vec<_>>()
        .join(", ")
}
