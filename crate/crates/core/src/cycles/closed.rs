//! Continuum (sum → integral) closed forms used as baselines.
//!
//! They hold when `βγ ≪ 1`, i.e. many levels are populated.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::physconst::BOLTZMANN;

/// Otto work and efficiency of the bare well compressed from `γ_c` to `γ_h`.
pub fn otto_no_impurity_closed(gamma_h: f64, gamma_c: f64, beta_h: f64, beta_c: f64) -> (f64, f64) {
    let work = 0.5 * (gamma_h - gamma_c) * (1.0 / (beta_h * gamma_h) - 1.0 / (beta_c * gamma_c));
    (work, 1.0 - gamma_c / gamma_h)
}

/// Carnot work of the bare well, `k_B(T_h − T_c) ln √(β_cγ_c / β_hγ_h)`.
pub fn carnot_no_impurity_closed(
    gamma_h: f64,
    gamma_c: f64,
    beta_h: f64,
    beta_c: f64,
    t_h: f64,
    t_c: f64,
) -> f64 {
    BOLTZMANN * (t_h - t_c) * 0.5 * ((beta_c * gamma_c) / (beta_h * gamma_h)).ln()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrongOttoClosed {
    pub q_in: f64,
    pub q_out: f64,
    pub work: f64,
    pub eta: f64,
    pub cop: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrongCarnotClosed {
    pub s_h: f64,
    pub s_c: f64,
    pub work: f64,
    pub eta: f64,
    pub cop: f64,
}

/// Strong-coupling levels of the `p` sub-well written as `A n² + B n`.
fn strong_coefficients(gamma: f64, f: f64, p: f64) -> (f64, f64) {
    (gamma / (p * p), gamma * f / (PI * p * p * p))
}

/// `⟨n²⟩` and `⟨n⟩` for weights `exp(−β(A n² + B n))`, first order in `B`.
fn moments(a_coef: f64, b_coef: f64, beta: f64) -> (f64, f64) {
    let a = beta * a_coef;
    let b = beta * b_coef;
    let n2 = 1.0 / (2.0 * a) - b / (2.0 * PI.sqrt() * a.powf(1.5));
    let n1 = 1.0 / (PI * a).sqrt();
    (n2, n1)
}

/// Otto cycle with the impurity moved from `p_c` to `p_h`, first order in `f`.
///
/// `⟨E_i⟩_j` is the energy of spectrum `i` averaged over the thermal state of
/// spectrum `j`; then `Q_in = U_h − ⟨E_h⟩_c` and `Q_out = U_c − ⟨E_c⟩_h`.
pub fn otto_strong_closed(
    f: f64,
    p_h: f64,
    p_c: f64,
    gamma: f64,
    beta_h: f64,
    beta_c: f64,
) -> StrongOttoClosed {
    let (a_h, b_h) = strong_coefficients(gamma, f, p_h);
    let (a_c, b_c) = strong_coefficients(gamma, f, p_c);
    let (n2_h, n1_h) = moments(a_h, b_h, beta_h);
    let (n2_c, n1_c) = moments(a_c, b_c, beta_c);
    let mean = |a: f64, b: f64, n2: f64, n1: f64| a * n2 + b * n1;
    let q_in = mean(a_h, b_h, n2_h, n1_h) - mean(a_h, b_h, n2_c, n1_c);
    let q_out = mean(a_c, b_c, n2_c, n1_c) - mean(a_c, b_c, n2_h, n1_h);
    let work = q_in + q_out;
    StrongOttoClosed {
        q_in,
        q_out,
        work,
        eta: work / q_in,
        cop: q_out.abs() / work.abs(),
    }
}

/// Entropy of the `p` sub-well spectrum, first order in `f`:
/// `k_B[½ + ln(½p√(π/βγ)) − f√(βγ)/(2π^{3/2}p²)]`.
pub(crate) fn strong_entropy(f: f64, p: f64, gamma: f64, beta: f64) -> f64 {
    let bg = beta * gamma;
    BOLTZMANN
        * (0.5 + (0.5 * p * (PI / bg).sqrt()).ln() - f * bg.sqrt() / (2.0 * PI.powf(1.5) * p * p))
}

/// Carnot cycle with the length varied at fixed `f` and `p`.
#[allow(clippy::too_many_arguments)]
pub fn carnot_strong_closed(
    f: f64,
    p: f64,
    gamma_h: f64,
    gamma_c: f64,
    beta_h: f64,
    beta_c: f64,
    t_h: f64,
    t_c: f64,
) -> StrongCarnotClosed {
    let s_h = strong_entropy(f, p, gamma_h, beta_h);
    let s_c = strong_entropy(f, p, gamma_c, beta_c);
    StrongCarnotClosed {
        s_h,
        s_c,
        work: (t_h - t_c) * (s_h - s_c),
        eta: 1.0 - t_c / t_h,
        cop: t_c / (t_h - t_c).abs(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::physconst::{beta, gamma, ELECTRONVOLT};
    use proptest::prelude::*;

    const MICRO_EV: f64 = 1e-6 * ELECTRONVOLT;

    /// Continuum averages by direct quadrature of the exact exponentials
    /// (no expansion in B): returns (⟨n²⟩, ⟨n⟩, ln Z).
    fn quad(a_coef: f64, b_coef: f64, beta: f64) -> (f64, f64, f64) {
        let (a, b) = (beta * a_coef, beta * b_coef);
        let n_end = (60.0 / a).sqrt();
        let steps = 200_000;
        let h = n_end / steps as f64;
        let (mut m0, mut m1, mut m2) = (0.0, 0.0, 0.0);
        for i in 0..=steps {
            let n = i as f64 * h;
            let w = if i == 0 || i == steps { 0.5 } else { 1.0 } * (-a * n * n - b * n).exp();
            m0 += w;
            m1 += w * n;
            m2 += w * n * n;
        }
        (m2 / m0, m1 / m0, (m0 * h).ln())
    }

    fn table_inputs() -> (f64, f64, f64, f64) {
        (
            gamma(100e-9).unwrap(),
            gamma(163e-9).unwrap(),
            beta(5.0).unwrap(),
            beta(1.5).unwrap(),
        )
    }

    #[test]
    fn bare_otto_closed_form() {
        let (gh, gc, bh, bc) = table_inputs();
        let (w, eta) = otto_no_impurity_closed(gh, gc, bh, bc);
        // ½(37.603 − 14.153)(430.87/37.603 − 129.26/14.153) µeV by hand.
        let hand = 0.5 * (37.603 - 14.153) * (430.87 / 37.603 - 129.26 / 14.153);
        assert!((w / MICRO_EV - hand).abs() < 0.01, "{}", w / MICRO_EV);
        assert!((eta - (1.0 - (100.0f64 / 163.0).powi(2))).abs() < 1e-12);
        assert_eq!(otto_no_impurity_closed(gh, gh, bh, bc), (0.0, 0.0));
    }

    #[test]
    fn bare_carnot_closed_form() {
        let (gh, gc, bh, bc) = table_inputs();
        let w = carnot_no_impurity_closed(gh, gc, bh, bc, 5.0, 1.5);
        assert!((w / MICRO_EV - 34.20).abs() < 0.01, "{}", w / MICRO_EV);
        assert_eq!(carnot_no_impurity_closed(gh, gc, bh, bc, 2.0, 2.0), 0.0);
        assert!(carnot_no_impurity_closed(gh, gh * bh / bc, bh, bc, 5.0, 1.5).abs() < 1e-40);
    }

    #[test]
    fn strong_otto_at_zero_strength() {
        let g = gamma(400e-9).unwrap();
        let (bh, bc) = (beta(10.0).unwrap(), beta(1.5).unwrap());
        let (ph, pc) = (0.2, 0.5);
        let r = otto_strong_closed(0.0, ph, pc, g, bh, bc);
        let expect = 0.5 * (ph * ph - pc * pc) * (1.0 / (bc * ph * ph) - 1.0 / (bh * pc * pc));
        assert!((r.work - expect).abs() < 1e-12 * expect.abs());
        let same = otto_strong_closed(0.02, 0.3, 0.3, g, bh, bc);
        assert!(same.work.abs() < 1e-12 * same.q_in.abs());
    }

    #[test]
    fn strong_entropy_reduces_to_bare_at_zero_strength() {
        let (g, b) = (gamma(200e-9).unwrap(), beta(3.0).unwrap());
        let p: f64 = 0.4;
        let s = strong_entropy(0.0, p, g, b);
        let bare = crate::thermo::entropy_continuum_isw(g / (p * p), b);
        assert!((s - bare).abs() < 1e-14 * bare);
    }

    #[test]
    fn strong_carnot_efficiency_is_carnot() {
        let (g, bh, bc) = (
            gamma(40e-9).unwrap(),
            beta(10.0).unwrap(),
            beta(1.5).unwrap(),
        );
        for f in [0.01, 0.03, -0.02] {
            for p in [0.2, 0.5] {
                let r = carnot_strong_closed(f, p, g, g * 0.5, bh, bc, 10.0, 1.5);
                assert!((r.eta - 0.85).abs() < 1e-15);
                assert!((r.cop - 1.5 / 8.5).abs() < 1e-15);
                assert_eq!(r.work, 8.5 * (r.s_h - r.s_c));
            }
        }
        let r = carnot_strong_closed(0.01, 0.3, g, g, bh, bh, 4.0, 4.0);
        assert_eq!(r.work, 0.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn strong_otto_matches_quadrature(
            f in 1e-5f64..1e-4,
            ph in 0.15f64..0.85,
            pc in 0.15f64..0.85,
            th in 5.0f64..35.0,
        ) {
            // Small f keeps the neglected second order below the check.
            let g = gamma(400e-9).unwrap();
            let (bh, bc) = (beta(th).unwrap(), beta(1.5).unwrap());
            let r = otto_strong_closed(f, ph, pc, g, bh, bc);
            let (ah, bbh) = strong_coefficients(g, f, ph);
            let (ac, bbc) = strong_coefficients(g, f, pc);
            let (n2h, n1h, _) = quad(ah, bbh, bh);
            let (n2c, n1c, _) = quad(ac, bbc, bc);
            let q_in = ah * n2h + bbh * n1h - (ah * n2c + bbh * n1c);
            let q_out = ac * n2c + bbc * n1c - (ac * n2h + bbc * n1h);
            let scale = q_in.abs().max(q_out.abs());
            prop_assert!((r.q_in - q_in).abs() < 1e-5 * scale);
            prop_assert!((r.q_out - q_out).abs() < 1e-5 * scale);
        }

        #[test]
        fn strong_entropy_matches_quadrature(f in 1e-5f64..1e-4, p in 0.15f64..0.85, t in 2.0f64..35.0) {
            let g = gamma(400e-9).unwrap();
            let b = beta(t).unwrap();
            let (a, bb) = strong_coefficients(g, f, p);
            let (n2, n1, ln_z) = quad(a, bb, b);
            let s = BOLTZMANN * (ln_z + b * (a * n2 + bb * n1));
            let closed = strong_entropy(f, p, g, b);
            prop_assert!((closed - s).abs() < 1e-6 * s.abs(), "{} vs {}", closed, s);
        }
    }
}
