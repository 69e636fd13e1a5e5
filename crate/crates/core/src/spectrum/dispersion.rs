//! Numerical roots of the transcendental dispersion relations.
//!
//! Positive energies `E = ħ²k²/(2m)` are roots in `x = kL` of
//! `x f sin x − 2 sin(px) sin((1−p)x)`; the bound state is the root in `y = κL`
//! of the same expression with `sinh`.

use std::f64::consts::PI;

use super::{check_n_max, isw_levels, ImpuritySpec, Level, Spectrum, SpectrumMethod, WellSpec};
use crate::error::{Error, Result};

/// Relative tolerance on `kL` used when callers don't pick one.
pub const DEFAULT_ROOT_TOL: f64 = 1e-12;

const SCAN_STEPS_PER_PI: usize = 64;
const DIP_REFINE: usize = 16;

pub fn dispersion_residual_pos(kl: f64, f: f64, p: f64) -> f64 {
    kl * f * kl.sin() - 2.0 * (kl * p).sin() * (kl * (1.0 - p)).sin()
}

pub fn dispersion_residual_neg(kappa_l: f64, f: f64, p: f64) -> f64 {
    kappa_l * f * kappa_l.sinh() - 2.0 * (kappa_l * p).sinh() * (kappa_l * (1.0 - p)).sinh()
}

/// Same sign as [`dispersion_residual_neg`] but free of overflow.
///
/// Uses `2 sinh(py) sinh((1−p)y) = cosh y − cosh((1−2p)y)` and multiplies through
/// by `2e^{−y}`; below `y = 0.01` a Taylor series avoids the cancellation.
fn scaled_residual_neg(y: f64, f: f64, p: f64) -> f64 {
    if y < 1e-2 {
        let q2 = (1.0 - 2.0 * p).powi(2);
        let y2 = y * y;
        let c2 = f - 0.5 * (1.0 - q2);
        let c4 = f / 6.0 - (1.0 - q2 * q2) / 24.0;
        let c6 = f / 120.0 - (1.0 - q2 * q2 * q2) / 720.0;
        return y2 * (c2 + y2 * (c4 + y2 * c6));
    }
    let e2 = (-2.0 * y).exp();
    y * f * (-(-2.0 * y).exp_m1()) - (1.0 + e2)
        + (-2.0 * p * y).exp()
        + (-2.0 * (1.0 - p) * y).exp()
}

/// `κL` of the bound state, if the hyperbolic relation has a root.
///
/// The search runs over `(1e-9, 10/f]`. Near zero the residual behaves as
/// `(f − 2p(1−p)) y²` and at large `y` it is positive, so a root exists exactly
/// when `0 < f < 2p(1−p)`.
pub fn bound_state_kappa_l(f: f64, p: f64) -> Option<f64> {
    if !(f > 0.0 && p > 0.0 && p < 1.0) {
        return None;
    }
    let g = |y: f64| scaled_residual_neg(y, f, p);
    let (lo, hi) = (1e-9, 10.0 / f);
    let (glo, ghi) = (g(lo), g(hi));
    if glo.signum() == ghi.signum() || glo == 0.0 || ghi == 0.0 {
        return None;
    }
    Some(bisect(g, lo, hi, glo, ghi, DEFAULT_ROOT_TOL))
}

/// Bound-state energy in joules (negative), if one exists.
pub fn bound_state(well: &WellSpec, imp: &ImpuritySpec) -> Option<f64> {
    bound_state_kappa_l(imp.strength, imp.position).map(|y| -well.energy_unit() * y * y)
}

/// Lowest `n_max` positive-energy levels plus the bound state.
pub fn solve_spectrum_numerical(
    well: &WellSpec,
    imp: &ImpuritySpec,
    n_max: usize,
    tol: f64,
) -> Result<Spectrum> {
    well.validate()?;
    imp.validate()?;
    check_n_max(n_max)?;
    if !(tol > 0.0 && tol <= 1e-6) {
        return Err(Error::Domain(format!(
            "root tolerance must lie in (0, 1e-6], got {tol}"
        )));
    }
    let (f, p) = (imp.strength, imp.position);
    if p == 0.0 || p == 1.0 {
        // The impurity sits on a wall and drops out.
        return isw_levels(well, n_max);
    }

    let bound = bound_state_kappa_l(f, p);
    let roots = positive_roots(f, p, n_max, tol);
    check_interlacing(&roots, n_max, f, bound.is_some())?;

    let s = well.energy_unit();
    let levels = roots
        .iter()
        .enumerate()
        .map(|(i, &x)| Level {
            index: i + 1,
            energy: s * x * x,
        })
        .collect();
    Ok(Spectrum {
        levels,
        method: SpectrumMethod::Numerical,
        bound_state: bound.map(|y| -s * y * y),
    })
}

/// Scans `kL` on a grid of step π/64 and refines every sign change.
///
/// Where `|r|` has a local minimum without a sign change, two roots may hide in
/// one cell; that stretch is rescanned 16 times finer.
fn positive_roots(f: f64, p: f64, n_max: usize, tol: f64) -> Vec<f64> {
    let r = |x: f64| dispersion_residual_pos(x, f, p);
    let h = PI / SCAN_STEPS_PER_PI as f64;
    let x_end = (n_max + 2) as f64 * PI;
    let mut roots = Vec::with_capacity(n_max);

    // A ground root closer to zero than the first grid point: compare against
    // the sign of the leading x² coefficient.
    let x0 = h / 1024.0;
    let r0 = r(x0);
    let c2 = f - 2.0 * p * (1.0 - p);
    if c2 == 0.0 {
        // Exactly at the bound-state threshold the ground level sits at E = 0.
        roots.push(0.0);
    } else if r0 != 0.0 && c2.signum() != r0.signum() {
        let tiny = 1e-9 * x0;
        roots.push(bisect(r, tiny, x0, r(tiny), r0, tol));
    }

    let mut prev2 = (x0, r0);
    let mut prev = (x0, r0);
    let mut refined_until = 0.0f64;
    let mut i = 1usize;
    while roots.len() < n_max {
        // Grid points are multiples of π/64 so bare levels fall on them.
        let x = i as f64 * h;
        if x > x_end {
            break;
        }
        let rx = r(x);
        if rx == 0.0 {
            roots.push(x);
        } else if prev.1 != 0.0 && prev.1.signum() != rx.signum() {
            if prev.0 >= refined_until {
                roots.push(bisect(r, prev.0, x, prev.1, rx, tol));
            }
        } else if i >= 2
            && prev2.1.signum() == prev.1.signum()
            && prev.1.signum() == rx.signum()
            && prev.1.abs() < prev2.1.abs()
            && prev.1.abs() < rx.abs()
        {
            let start = prev2.0.max(refined_until);
            let fine = h / DIP_REFINE as f64;
            let mut a = (start, r(start));
            let steps = ((x - start) / fine).round() as usize;
            for j in 1..=steps {
                let xb = if j == steps {
                    x
                } else {
                    start + j as f64 * fine
                };
                let b = (xb, r(xb));
                if b.1 == 0.0 && j < steps {
                    roots.push(xb);
                } else if a.1 != 0.0 && b.1 != 0.0 && a.1.signum() != b.1.signum() {
                    roots.push(bisect(r, a.0, b.0, a.1, b.1, tol));
                }
                a = b;
            }
            refined_until = x;
        }
        prev2 = prev;
        prev = (x, rx);
        i += 1;
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() <= tol * a.abs().max(1.0));
    roots.truncate(n_max);
    roots
}

/// Each root must sit in the window the rank-one interlacing theorem allows.
///
/// Counting the bound state as level 1, attractive level `n` lies in
/// `[(n−1)π, nπ]`; repulsive level `n` lies in `[nπ, (n+1)π]`.
fn check_interlacing(roots: &[f64], n_max: usize, f: f64, has_bound: bool) -> Result<()> {
    let shift = if f < 0.0 || has_bound { 1.0 } else { 0.0 };
    for (i, &x) in roots.iter().enumerate() {
        let j = (i + 1) as f64;
        let (lo, hi) = ((j - 1.0 + shift) * PI, (j + shift) * PI);
        let slack = 1e-9 * hi;
        if x < lo - slack || x > hi + slack {
            return Err(Error::BracketFailure {
                level: i + 1,
                detail: format!(
                    "root kL = {x:.12} outside its interlacing window [{lo:.6}, {hi:.6}] \
                     (f = {f}, a root was missed or duplicated)"
                ),
            });
        }
    }
    if roots.len() < n_max {
        return Err(Error::BracketFailure {
            level: roots.len() + 1,
            detail: format!("scan isolated only {} of {n_max} roots", roots.len()),
        });
    }
    Ok(())
}

/// Bisection to relative width `tol`, then one secant step if it stays inside.
fn bisect(
    g: impl Fn(f64) -> f64,
    mut a: f64,
    mut b: f64,
    mut ga: f64,
    mut gb: f64,
    tol: f64,
) -> f64 {
    for _ in 0..200 {
        if (b - a) <= tol * a.abs().max(b.abs()) {
            break;
        }
        let m = 0.5 * (a + b);
        let gm = g(m);
        if gm == 0.0 {
            return m;
        }
        if gm.signum() == ga.signum() {
            a = m;
            ga = gm;
        } else {
            b = m;
            gb = gm;
        }
    }
    let secant = b - gb * (b - a) / (gb - ga);
    if secant.is_finite() && secant >= a && secant <= b {
        secant
    } else {
        0.5 * (a + b)
    }
}
