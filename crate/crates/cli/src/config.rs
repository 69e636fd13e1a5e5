//! Declarative run configuration: a TOML file plus `key.path=value` overrides.
//!
//! Physical inputs use lab units (nm, K); conversion to SI happens when the
//! core specs are built.

use std::fs;
use std::path::Path;

use qwell_core::cycles::{CycleKind, CycleSpec, ReversibilityPolicy, VariedParam};
use qwell_core::physconst::{from_nm, ELECTRON_MASS};
use qwell_core::spectrum::{ImpuritySpec, SpectrumMethod, WellSpec, DEFAULT_N_MAX};
use qwell_core::sweep::{SweepAxis, SweepParam};
use qwell_core::thermo::DEFAULT_TAIL_TOL;
use serde::Deserialize;

/// Bad config input: unreadable file, unknown key, malformed override.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn cfg_err(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    pub well: WellConfig,
    pub impurity: ImpurityConfig,
    pub cycle: CycleConfig,
    pub sweep: Option<SweepConfig>,
    pub spectrum: SpectrumConfig,
    pub run: RunConfig,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WellConfig {
    pub length_nm: f64,
    pub mass_kg: Option<f64>,
}

impl Default for WellConfig {
    fn default() -> Self {
        WellConfig {
            length_nm: 100.0,
            mass_kg: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ImpurityConfig {
    /// Absent means a bare well.
    pub strength: Option<f64>,
    pub position: f64,
}

impl Default for ImpurityConfig {
    fn default() -> Self {
        ImpurityConfig {
            strength: None,
            position: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Otto,
    Carnot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Varied {
    Strength,
    Length,
    Position,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Policy {
    Enforce,
    Report,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CycleConfig {
    pub kind: Kind,
    pub varied: Varied,
    /// Hot-stroke value of the varied parameter; nm for lengths.
    pub hot: f64,
    pub cold: f64,
    pub t_hot_k: f64,
    pub t_cold_k: f64,
    pub method: SpectrumMethod,
    pub reversibility: Policy,
}

impl Default for CycleConfig {
    fn default() -> Self {
        CycleConfig {
            kind: Kind::Otto,
            varied: Varied::Length,
            hot: 100.0,
            cold: 163.0,
            t_hot_k: 5.0,
            t_cold_k: 1.5,
            method: SpectrumMethod::Numerical,
            reversibility: Policy::Enforce,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub x: AxisConfig,
    pub y: AxisConfig,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisConfig {
    /// One of `p`, `length`, `t_hot`, `f`, `f_magnitude`.
    pub param: String,
    /// nm for `length`, K for `t_hot`.
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpectrumConfig {
    pub methods: Vec<SpectrumMethod>,
    pub levels: usize,
    pub p_scan: Option<ScanConfig>,
    pub bound_state: bool,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        SpectrumConfig {
            methods: vec![SpectrumMethod::Numerical],
            levels: 6,
            p_scan: None,
            bound_state: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub n_max: usize,
    pub tail_tol: f64,
    /// 0 lets the pool pick.
    pub workers: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n_max: DEFAULT_N_MAX,
            tail_tol: DEFAULT_TAIL_TOL,
            workers: 0,
        }
    }
}

impl Config {
    /// Reads `path` (if any), applies `overrides` in order, then deserializes.
    pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Config, ConfigError> {
        let mut table = match path {
            Some(p) => {
                let text = fs::read_to_string(p)
                    .map_err(|e| cfg_err(format!("cannot read {}: {e}", p.display())))?;
                text.parse::<toml::Table>()
                    .map_err(|e| cfg_err(format!("{}: {e}", p.display())))?
            }
            None => toml::Table::new(),
        };
        for o in overrides {
            apply_override(&mut table, o)?;
        }
        Config::from_table(table)
    }

    pub fn from_table(table: toml::Table) -> Result<Config, ConfigError> {
        toml::Value::Table(table)
            .try_into()
            .map_err(|e: toml::de::Error| cfg_err(e.message().to_string()))
    }

    pub fn well(&self) -> qwell_core::Result<WellSpec> {
        WellSpec::with_mass(from_nm(self.well.length_nm), self.mass())
    }

    fn mass(&self) -> f64 {
        self.well.mass_kg.unwrap_or(ELECTRON_MASS)
    }

    pub fn impurity(&self) -> qwell_core::Result<Option<ImpuritySpec>> {
        self.impurity
            .strength
            .map(|f| ImpuritySpec::new(f, self.impurity.position))
            .transpose()
    }

    pub fn cycle_spec(&self) -> qwell_core::Result<CycleSpec> {
        let c = &self.cycle;
        let varied = match c.varied {
            Varied::Strength => VariedParam::Strength {
                hot: c.hot,
                cold: c.cold,
            },
            Varied::Length => VariedParam::Length {
                hot: from_nm(c.hot),
                cold: from_nm(c.cold),
            },
            Varied::Position => VariedParam::Position {
                hot: c.hot,
                cold: c.cold,
            },
        };
        let kind = match c.kind {
            Kind::Otto => CycleKind::Otto,
            Kind::Carnot => CycleKind::Carnot,
        };
        let mut spec = CycleSpec::new(kind, varied)
            .with_position(self.impurity.position)
            .with_length(from_nm(self.well.length_nm))
            .with_temperatures(c.t_hot_k, c.t_cold_k)
            .with_method(c.method)
            .with_reversibility(match c.reversibility {
                Policy::Enforce => ReversibilityPolicy::Enforce,
                Policy::Report => ReversibilityPolicy::Report,
            });
        spec.mass = self.mass();
        if let Some(f) = self.impurity.strength {
            spec = spec.with_strength(f);
        }
        spec.validate()?;
        Ok(spec)
    }

    /// Both sweep axes in SI units.
    pub fn sweep_axes(&self) -> Result<(SweepAxis, SweepAxis), anyhow::Error> {
        let s = self
            .sweep
            .as_ref()
            .ok_or_else(|| cfg_err("the sweep command needs [sweep.x] and [sweep.y]"))?;
        Ok((axis(&s.x)?, axis(&s.y)?))
    }

    /// Impurity positions to dump: the scan if given, else the fixed position.
    pub fn positions(&self) -> Result<Vec<f64>, anyhow::Error> {
        match &self.spectrum.p_scan {
            None => Ok(vec![self.impurity.position]),
            Some(s) => {
                let a = SweepAxis::new(SweepParam::ImpurityPosition, s.lo, s.hi, s.steps)?;
                Ok(a.values())
            }
        }
    }
}

pub fn parse_param(name: &str) -> Result<SweepParam, ConfigError> {
    Ok(match name {
        "p" | "position" => SweepParam::ImpurityPosition,
        "length" | "length_nm" | "l" => SweepParam::WellLength,
        "t_hot" | "t_hot_k" => SweepParam::HotTemperature,
        "f" | "strength" => SweepParam::ImpurityStrength,
        "f_magnitude" | "strength_magnitude" => SweepParam::StrengthPairMagnitude,
        _ => {
            return Err(cfg_err(format!(
                "unknown sweep parameter {name:?} (expected p, length, t_hot, f or f_magnitude)"
            )))
        }
    })
}

fn axis(a: &AxisConfig) -> Result<SweepAxis, anyhow::Error> {
    let param = parse_param(&a.param)?;
    let (lo, hi) = match param {
        SweepParam::WellLength => (from_nm(a.lo), from_nm(a.hi)),
        _ => (a.lo, a.hi),
    };
    Ok(SweepAxis::new(param, lo, hi, a.steps)?)
}

/// Applies `a.b.c=value`. The value is read as a TOML literal, falling back
/// to a bare string, so `cycle.kind=carnot` works without quotes.
pub fn apply_override(table: &mut toml::Table, spec: &str) -> Result<(), ConfigError> {
    let (path, raw) = spec
        .split_once('=')
        .ok_or_else(|| cfg_err(format!("override {spec:?} is not key=value")))?;
    let keys: Vec<&str> = path.trim().split('.').map(str::trim).collect();
    if keys.iter().any(|k| k.is_empty()) {
        return Err(cfg_err(format!("override {spec:?} has an empty key")));
    }
    let value = parse_value(raw.trim());
    let (last, parents) = keys.split_last().expect("split yields at least one key");
    let mut node = table;
    for k in parents {
        let entry = node
            .entry(k.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        node = entry
            .as_table_mut()
            .ok_or_else(|| cfg_err(format!("override {spec:?}: {k} is not a table")))?;
    }
    node.insert(last.to_string(), value);
    Ok(())
}

fn parse_value(raw: &str) -> toml::Value {
    format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()))
}
