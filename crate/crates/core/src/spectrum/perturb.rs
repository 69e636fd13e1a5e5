//! Closed-form level formulas: the bare well and both perturbative expansions.

use std::f64::consts::PI;

use super::{
    check_n_max, finish_levels, ImpuritySpec, Level, Spectrum, SpectrumMethod, StrongBranch,
    WellSpec,
};
use crate::error::{Error, Result};

/// Bare box levels `E_n = n²π²ħ²/(2mL²)`.
pub fn isw_levels(well: &WellSpec, n_max: usize) -> Result<Spectrum> {
    well.validate()?;
    check_n_max(n_max)?;
    let s = well.energy_unit();
    let levels = (1..=n_max)
        .map(|n| {
            let k = n as f64 * PI;
            Level {
                index: n,
                energy: s * k * k,
            }
        })
        .collect();
    Ok(Spectrum {
        levels,
        method: SpectrumMethod::BareIsw,
        bound_state: None,
    })
}

/// Weak-coupling expansion in `1/f`, to first or second order.
pub fn weak_perturb_levels(
    well: &WellSpec,
    imp: &ImpuritySpec,
    n_max: usize,
    order: u8,
) -> Result<Spectrum> {
    well.validate()?;
    imp.validate()?;
    check_n_max(n_max)?;
    let method = match order {
        1 => SpectrumMethod::WeakPerturb1,
        2 => SpectrumMethod::WeakPerturb2,
        _ => {
            return Err(Error::Domain(format!(
                "weak perturbation order must be 1 or 2, got {order}"
            )))
        }
    };
    let s = well.energy_unit();
    let levels = (1..=n_max)
        .map(|n| Level {
            index: n,
            energy: s * weak_level(n, imp.strength, imp.position, order),
        })
        .collect();
    finish_levels(levels, method)
}

/// Level `n` in units of ħ²/(2mL²).
pub(crate) fn weak_level(n: usize, f: f64, p: f64, order: u8) -> f64 {
    let npi = n as f64 * PI;
    let (sn, cs) = (npi * p).sin_cos();
    let sn2 = sn * sn;
    let mut e = npi * npi - 4.0 * sn2 / f;
    if order >= 2 {
        // sin⁴ + 2nπ(1−2p) sin³cos is the cot form multiplied through, so a node
        // (sin = 0) gives an exactly zero correction.
        let bracket = sn2 * sn2 + 2.0 * npi * (1.0 - 2.0 * p) * sn2 * sn * cs;
        e -= 4.0 * bracket / (npi * npi * f * f);
    }
    e
}

/// Strong-coupling levels: the `p` and `1−p` families merged.
pub fn strong_perturb_levels(
    well: &WellSpec,
    imp: &ImpuritySpec,
    n_max: usize,
) -> Result<Spectrum> {
    strong_perturb_branch(well, imp, n_max, StrongBranch::Union)
}

pub fn strong_perturb_branch(
    well: &WellSpec,
    imp: &ImpuritySpec,
    n_max: usize,
    branch: StrongBranch,
) -> Result<Spectrum> {
    well.validate()?;
    imp.validate()?;
    check_n_max(n_max)?;
    let (f, p) = (imp.strength, imp.position);
    if p <= 0.0 || p >= 1.0 {
        return Err(Error::Domain(format!(
            "strong-coupling levels need 0 < p < 1, got p = {p}; use the bare well instead"
        )));
    }
    let s = well.energy_unit();
    let family = |q: f64| (1..=n_max).map(move |n| s * strong_level(n, f, q));
    let method = SpectrumMethod::StrongPerturb1(branch);
    let levels: Vec<Level> = match branch {
        StrongBranch::LeftWell => family(p)
            .enumerate()
            .map(|(i, e)| Level {
                index: i + 1,
                energy: e,
            })
            .collect(),
        StrongBranch::RightWell => family(1.0 - p)
            .enumerate()
            .map(|(i, e)| Level {
                index: i + 1,
                energy: e,
            })
            .collect(),
        StrongBranch::Union => {
            let mut all: Vec<f64> = family(p).chain(family(1.0 - p)).collect();
            all.sort_by(f64::total_cmp);
            all.truncate(n_max);
            all.into_iter()
                .enumerate()
                .map(|(i, e)| Level {
                    index: i + 1,
                    energy: e,
                })
                .collect()
        }
    };
    finish_levels(levels, method)
}

/// `n²π²/q² + nfπ/q³`, level `n` of a sub-well of relative width `q`.
pub(crate) fn strong_level(n: usize, f: f64, q: f64) -> f64 {
    let n = n as f64;
    n * n * PI * PI / (q * q) + n * f * PI / (q * q * q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn well() -> WellSpec {
        WellSpec::new(100e-9).unwrap()
    }

    fn imp(f: f64, p: f64) -> ImpuritySpec {
        ImpuritySpec::new(f, p).unwrap()
    }

    #[test]
    fn bare_levels_scale_as_n_squared() {
        let w = well();
        let s = isw_levels(&w, 3).unwrap();
        let e1 = s.levels[0].energy;
        assert!((e1 / w.gamma() - 1.0).abs() < 1e-15);
        assert!((e1 / 1.602_176_634e-25 - 37.603).abs() < 1e-3);
        assert!((s.levels[1].energy / e1 - 4.0).abs() < 1e-14);
        assert!((s.levels[2].energy / e1 - 9.0).abs() < 1e-14);
        assert!(isw_levels(&w, 0).is_err());
    }

    #[test]
    fn weak_first_order_ground_at_centre() {
        let w = well();
        let s = weak_perturb_levels(&w, &imp(1.0, 0.5), 1, 1).unwrap();
        let oracle = w.energy_unit() * (PI * PI - 4.0);
        assert!((s.levels[0].energy - oracle).abs() < 1e-14 * oracle.abs());
    }

    #[test]
    fn weak_node_is_exactly_bare() {
        // n = 2 has a node at the centre; both orders leave it untouched.
        let w = well();
        let bare = isw_levels(&w, 4).unwrap();
        for order in [1, 2] {
            let s = weak_perturb_levels(&w, &imp(0.7, 0.5), 4, order).unwrap();
            let e2 = s.levels.iter().find(|l| l.index == 2).unwrap().energy;
            let rel = (e2 - bare.levels[1].energy).abs() / bare.levels[1].energy;
            assert!(rel < 1e-12, "order {order}: {rel}");
        }
    }

    #[test]
    fn weak_second_order_continuous_near_nodes() {
        for n in 1..=6usize {
            for k in 1..n {
                let p0 = k as f64 / n as f64;
                let bare = (n as f64 * PI).powi(2);
                for dp in [-1e-9, 1e-9] {
                    let e = weak_level(n, 1.3, p0 + dp, 2);
                    assert!((e - bare).abs() < 1e-6, "n={n} p={}", p0 + dp);
                }
            }
        }
    }

    #[test]
    fn weak_approaches_bare_as_one_over_f() {
        let p = 0.3;
        for n in 1..=6usize {
            let bare = (n as f64 * PI).powi(2);
            let d1 = (weak_level(n, 1e3, p, 2) - bare).abs();
            let d2 = (weak_level(n, 1e4, p, 2) - bare).abs();
            assert!(
                d2 < d1 / 9.0 && d2 <= 4e-4 * (1.0 + 1e-5),
                "n={n}: {d1} {d2}"
            );
        }
    }

    #[test]
    fn strong_centre_is_doubly_degenerate() {
        let w = well();
        let f = 0.02;
        let s = strong_perturb_levels(&w, &imp(f, 0.5), 6).unwrap();
        for (i, pair) in s.levels.chunks(2).enumerate() {
            let n = (i + 1) as f64;
            let oracle = w.energy_unit() * (4.0 * n * n * PI * PI + 8.0 * n * f * PI);
            for l in pair {
                assert!((l.energy - oracle).abs() < 1e-13 * oracle);
            }
        }
    }

    #[test]
    fn strong_left_family_ground() {
        let w = well();
        let f = -0.01;
        let s = strong_perturb_branch(&w, &imp(f, 0.2), 3, StrongBranch::LeftWell).unwrap();
        let oracle = w.energy_unit() * (PI * PI / 0.04 + f * PI / 0.008);
        assert!((s.levels[0].energy - oracle).abs() < 1e-13 * oracle);
    }

    #[test]
    fn strong_union_tends_to_hard_walls() {
        let w = well();
        let s = strong_perturb_levels(&w, &imp(1e-12, 0.3), 8).unwrap();
        let mut walls: Vec<f64> = (1..=8)
            .flat_map(|n| {
                let n = n as f64;
                [n * n * PI * PI / 0.09, n * n * PI * PI / 0.49]
            })
            .collect();
        walls.sort_by(f64::total_cmp);
        for (l, e) in s.levels.iter().zip(walls) {
            assert!((l.energy / w.energy_unit() - e).abs() < 1e-9 * e);
        }
    }

    #[test]
    fn strong_rejects_wall_positions() {
        let w = well();
        assert!(strong_perturb_levels(&w, &imp(0.01, 0.0), 3).is_err());
        assert!(strong_perturb_levels(&w, &imp(0.01, 1.0), 3).is_err());
    }

    proptest! {
        #[test]
        fn weak_levels_mirror(f in prop_oneof![-10.0f64..-0.5, 0.5f64..10.0], p in 0.0f64..=1.0, order in 1u8..=2) {
            let w = well();
            let a = weak_perturb_levels(&w, &imp(f, p), 12, order).unwrap();
            let b = weak_perturb_levels(&w, &imp(f, 1.0 - p), 12, order).unwrap();
            for (x, y) in a.levels.iter().zip(&b.levels) {
                prop_assert!((x.energy - y.energy).abs() <= 1e-12 * x.energy.abs());
            }
        }

        #[test]
        fn strong_union_mirror_and_order(f in prop_oneof![-0.1f64..-1e-4, 1e-4f64..0.1], p in 0.01f64..0.99) {
            let w = well();
            let a = strong_perturb_levels(&w, &imp(f, p), 20).unwrap();
            let b = strong_perturb_levels(&w, &imp(f, 1.0 - p), 20).unwrap();
            for (x, y) in a.levels.iter().zip(&b.levels) {
                prop_assert!((x.energy - y.energy).abs() <= 1e-12 * x.energy.abs());
            }
            for pair in a.levels.windows(2) {
                prop_assert!(pair[0].energy <= pair[1].energy);
            }
        }

        #[test]
        fn weak_levels_ascend(f in prop_oneof![-10.0f64..-0.5, 0.5f64..10.0], p in 0.0f64..=1.0) {
            let s = weak_perturb_levels(&well(), &imp(f, p), 30, 2).unwrap();
            prop_assert!(s.levels[0].energy < s.levels[1].energy);
            for pair in s.levels.windows(2) {
                prop_assert!(pair[0].energy <= pair[1].energy);
            }
        }
    }
}
