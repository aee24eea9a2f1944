mod common;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6};

use proptest::prelude::*;
use rand::Rng;
use unruh_core::analysis::{
    d_cl1_dq, default_q_samples, finite_difference_dq, frozen_scan, linspace, robustness_report,
    sudden_death_nu, sudden_death_q, verify_incoherent_operation, DEFAULT_FD_STEP,
    FROZEN_TOLERANCE,
};
use unruh_core::measures::{
    concurrence_general, concurrence_xstate, l1_coherence, relative_entropy_coherence,
};
use unruh_core::{ChannelParams, InitialStateParams};

use common::{family, random_family_params, rng};

fn theta(t: f64) -> InitialStateParams {
    InitialStateParams::new(t).unwrap()
}

fn cp(q: f64, nu2: f64) -> ChannelParams {
    ChannelParams::new(q, nu2).unwrap()
}

/// Root of `1 - q = ν²√q`, from the quadratic in `√q`.
fn death_q_oracle(nu2: f64) -> f64 {
    let s = (-nu2 + (nu2 * nu2 + 4.0).sqrt()) / 2.0;
    s * s
}

#[test]
fn measures_degrade_monotonically_in_q() {
    let qs = linspace(0.0, 0.999, 200);
    let mut r = rng(51);
    for _ in 0..40 {
        let t = r.gen_range(0.05..FRAC_PI_2 - 0.05);
        let nu2 = r.gen_range(1e-3..0.1);
        let rows: Vec<(f64, f64, f64)> = qs
            .iter()
            .map(|&q| {
                let rho = family(t, q, nu2);
                (
                    l1_coherence(&rho).unwrap(),
                    relative_entropy_coherence(&rho).unwrap(),
                    concurrence_xstate(&rho).unwrap(),
                )
            })
            .collect();
        for (k, w) in rows.windows(2).enumerate() {
            let at = format!("theta={t} nu2={nu2} q={}", qs[k + 1]);
            assert!(w[1].0 < w[0].0, "C_l1 not strictly decreasing at {at}");
            assert!(w[1].1 <= w[0].1, "C_RE increased at {at}");
            assert!(w[1].2 <= w[0].2, "concurrence increased at {at}");
        }
    }
}

/// Leading central-difference error `h² f‴/6`. With `D = a - bq` and
/// `b = 1 - ν²cos²θ`, it equals `-h² sin2θ ν² b² / D⁴`.
fn truncation_term(t: f64, q: f64, nu2: f64, h: f64) -> f64 {
    let b = 1.0 - nu2 * t.cos().powi(2);
    let d = (1.0 - q) + nu2 * (t.sin().powi(2) + q * t.cos().powi(2));
    -h * h * (2.0 * t).sin() * nu2 * b * b / d.powi(4)
}

// Interior here means q ≤ 0.85, where the truncation term stays below
// 3.3e-7 for every θ and ν² ≤ 0.1. It grows like D⁻⁴ towards q = 1.
#[test]
fn analytic_derivative_matches_finite_differences() {
    let h = DEFAULT_FD_STEP;
    let mut r = rng(52);
    for _ in 0..100 {
        let t = r.gen_range(0.0..=FRAC_PI_2);
        let q: f64 = r.gen_range(h..0.85);
        let nu2 = r.gen_range(0.0..=0.1);
        let analytic = d_cl1_dq(theta(t), cp(q, nu2)).unwrap();
        let numeric = finite_difference_dq(theta(t), q, nu2, h).unwrap();
        assert!(
            (analytic - numeric).abs() <= 1e-6,
            "theta={t} q={q} nu2={nu2}: {analytic} vs {numeric}"
        );
    }
}

#[test]
fn finite_difference_error_is_second_order() {
    // Steps large enough that truncation dominates rounding.
    let (h, half) = (2e-2, 1e-2);
    let mut r = rng(53);
    for _ in 0..10 {
        let t = r.gen_range(0.2..FRAC_PI_2 - 0.2);
        let q = r.gen_range(0.05..0.9);
        let nu2 = r.gen_range(0.01..0.1);
        let exact = d_cl1_dq(theta(t), cp(q, nu2)).unwrap();
        let e1 = (finite_difference_dq(theta(t), q, nu2, h).unwrap() - exact).abs();
        let e2 = (finite_difference_dq(theta(t), q, nu2, half).unwrap() - exact).abs();
        let ratio = e1 / e2;
        assert!(
            (3.8..4.2).contains(&ratio),
            "theta={t} q={q} nu2={nu2}: error ratio {ratio} ({e1:e}, {e2:e})"
        );
    }
}

#[test]
fn finite_difference_discrepancy_follows_the_truncation_term() {
    let h = DEFAULT_FD_STEP;
    let mut r = rng(57);
    let mut checked = 0;
    while checked < 50 {
        let t = r.gen_range(0.0..=FRAC_PI_2);
        let q: f64 = r.gen_range(h..0.99 - h);
        let nu2 = r.gen_range(0.0..=0.1);
        let predicted = truncation_term(t, q, nu2, h);
        if predicted.abs() < 1e-9 {
            continue;
        }
        let analytic = d_cl1_dq(theta(t), cp(q, nu2)).unwrap();
        let observed = finite_difference_dq(theta(t), q, nu2, h).unwrap() - analytic;
        // The next order is O(h²) relative, and rounding sits near 1e-12.
        assert!(
            (observed / predicted - 1.0).abs() < 1e-2,
            "theta={t} q={q} nu2={nu2}: {observed:e} vs {predicted:e}"
        );
        checked += 1;
    }
}

#[test]
fn concurrence_vanishes_exactly_past_the_death_condition() {
    let mut r = rng(54);
    let mut checked = 0;
    while checked < 200 {
        let t = r.gen_range(0.01..FRAC_PI_2 - 0.01);
        let q: f64 = r.gen_range(0.0..0.9999);
        let nu2 = r.gen_range(0.0..0.1);
        let margin = (1.0 - q) - nu2 * q.sqrt();
        if margin.abs() < 1e-9 {
            continue;
        }
        let rho = family(t, q, nu2);
        for (name, c) in [
            ("xstate", concurrence_xstate(&rho).unwrap()),
            ("general", concurrence_general(&rho).unwrap()),
        ] {
            if margin > 0.0 {
                assert!(
                    c > 0.0,
                    "{name}: theta={t} q={q} nu2={nu2} margin={margin}: {c}"
                );
            } else {
                assert!(
                    c < 1e-12,
                    "{name}: theta={t} q={q} nu2={nu2} margin={margin}: {c}"
                );
            }
        }
        checked += 1;
    }
}

#[test]
fn death_threshold_matches_quadratic_root_for_every_theta() {
    for nu2 in [0.0225, 0.04, 0.1, 1e-4] {
        let expected = death_q_oracle(nu2);
        let values: Vec<f64> = [FRAC_PI_6, FRAC_PI_4, FRAC_PI_3]
            .iter()
            .map(|&t| sudden_death_q(theta(t), nu2).unwrap().threshold.unwrap())
            .collect();
        for v in &values {
            assert!((v - values[0]).abs() <= 1e-10, "nu2={nu2}: {values:?}");
            assert!(
                (v - expected).abs() <= 1e-12,
                "nu2={nu2}: {v} vs {expected}"
            );
        }
    }
    assert!((death_q_oracle(0.04) - 0.9607920).abs() < 1e-7);
}

#[test]
fn concurrence_changes_sign_across_the_death_threshold() {
    for nu2 in [0.0225, 0.04] {
        for t in [FRAC_PI_6, FRAC_PI_4, FRAC_PI_3] {
            let q_star = sudden_death_q(theta(t), nu2).unwrap().threshold.unwrap();
            let below = concurrence_general(&family(t, q_star - 1e-7, nu2)).unwrap();
            let above = concurrence_general(&family(t, q_star + 1e-7, nu2)).unwrap();
            assert!(below > 0.0, "nu2={nu2} theta={t}: {below}");
            assert!(above < 1e-12, "nu2={nu2} theta={t}: {above}");
        }
    }
    for q in [0.5, 0.9, 0.9999] {
        let nu = sudden_death_nu(theta(FRAC_PI_4), q)
            .unwrap()
            .threshold
            .unwrap();
        let at = |nu: f64| concurrence_general(&family(FRAC_PI_4, q, nu * nu)).unwrap();
        assert!(at(nu * (1.0 - 1e-6)) > 0.0, "q={q}");
        assert!(at(nu * (1.0 + 1e-6)) < 1e-12, "q={q}");
    }
}

#[test]
fn coherence_survives_every_finite_acceleration() {
    let mut r = rng(55);
    for _ in 0..200 {
        let t = r.gen_range(1e-3..FRAC_PI_2 - 1e-3);
        let nu2 = r.gen_range(0.0..0.1);
        for q in [0.0, 0.5, 0.999, 0.999_999, 1.0 - 1e-10] {
            let c = l1_coherence(&family(t, q, nu2)).unwrap();
            assert!(c > 0.0, "theta={t} q={q} nu2={nu2}");
        }
    }
}

#[test]
fn channel_commutes_with_dephasing() {
    let mut r = rng(56);
    for _ in 0..100 {
        let (t, c) = random_family_params(&mut r);
        assert!(verify_incoherent_operation(t, c, 1e-12).unwrap());
    }
}

#[test]
fn frozen_scan_finds_exactly_the_incoherent_and_decoupled_axes() {
    let thetas = linspace(0.0, FRAC_PI_2, 25);
    let nu2s = linspace(0.0, 0.1, 25);
    let scan = frozen_scan(&thetas, &nu2s, &default_q_samples(), FROZEN_TOLERANCE).unwrap();
    assert_eq!(scan.grid.len(), 625);
    assert!(scan.matches_boundary_prediction());
    for p in &scan.points {
        let axis = p.theta == 0.0 || p.theta == FRAC_PI_2 || p.nu2 == 0.0;
        assert_eq!(p.frozen, axis, "({}, {})", p.theta, p.nu2);
    }
    // Both θ rows hold 25 points; the ν²=0 column adds its 23 interior θ.
    assert_eq!(scan.frozen_points.len(), 25 + 25 + 23);
    assert!(scan.max_abs_derivative_elsewhere > 1e-3);
    assert!(scan.frozen_points.iter().all(|fp| scan.grid.contains(fp)));
}

#[test]
fn interior_point_is_far_from_frozen() {
    for q in linspace(0.0, 0.9, 91) {
        let d = d_cl1_dq(theta(FRAC_PI_4), cp(q, 0.04)).unwrap();
        assert!(d.abs() >= 0.04 / (1.04 * 1.04), "q={q}: {d}");
    }
}

proptest! {
    #[test]
    fn robustness_gap_is_nonnegative(
        t in 0.0..=FRAC_PI_2,
        q in 0.0..1.0f64,
        nu2 in 0.0..0.1f64,
    ) {
        let report = robustness_report(theta(t), cp(q, nu2)).unwrap();
        prop_assert!(report.gap >= 0.0);
        prop_assert!((report.c_l1 - report.concurrence - report.gap).abs() < 1e-15);
        if nu2 * q * (2.0 * t).sin() > 1e-6 {
            prop_assert!(report.gap > 0.0);
        }
    }

    #[test]
    fn death_threshold_is_a_zero_of_the_margin(nu2 in 1e-6..0.5f64) {
        let q_star = sudden_death_q(theta(FRAC_PI_4), nu2).unwrap().threshold.unwrap();
        let margin = (1.0 - q_star) - nu2 * q_star.sqrt();
        prop_assert!(margin.abs() < 1e-14, "margin {}", margin);
    }
}
