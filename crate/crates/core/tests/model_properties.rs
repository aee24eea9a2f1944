mod common;

use std::f64::consts::FRAC_PI_2;

use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use rand::Rng;
use unruh_core::analysis::linspace;
use unruh_core::model::{
    acceleration_to_q, apply_channel, apply_channel_unnormalized, final_state_closed_form,
    final_state_params, initial_state,
};
use unruh_core::{ChannelParams, ComplexMatrix, InitialStateParams};

use common::{random_x_state, rng};

#[test]
fn channel_equals_closed_form_on_grid() {
    let mut worst = 0.0f64;
    for theta in linspace(0.0, FRAC_PI_2, 10) {
        let t = InitialStateParams::new(theta).unwrap();
        let init = initial_state(t);
        for q in linspace(0.0, 0.99, 10) {
            for nu2 in linspace(0.0, 0.1, 10) {
                let cp = ChannelParams::new(q, nu2).unwrap();
                let kraus = apply_channel(&init, cp).unwrap();
                let closed = final_state_closed_form(t, cp).unwrap();
                worst = worst.max(kraus.max_abs_diff(&closed));
            }
        }
    }
    assert!(worst < 1e-12, "max deviation {worst:e}");
}

#[test]
fn unnormalized_trace_is_the_normalisation() {
    let mut r = rng(21);
    for _ in 0..200 {
        let (t, cp) = common::random_family_params(&mut r);
        let raw = apply_channel_unnormalized(&initial_state(t), cp).unwrap();
        let (s, c) = t.theta().sin_cos();
        let d = (1.0 - cp.q()) + cp.nu2() * (s * s + cp.q() * c * c);
        assert_abs_diff_eq!(raw.trace().re, d, epsilon = 1e-12);
        assert_abs_diff_eq!(final_state_params(t, cp).unwrap().norm, d, epsilon = 1e-15);
    }
}

#[test]
fn diagonal_inputs_stay_diagonal() {
    let mut r = rng(22);
    for _ in 0..200 {
        let mut p = [0.0; 4];
        for x in p.iter_mut() {
            *x = r.gen_range(0.0..1.0);
        }
        let total: f64 = p.iter().sum();
        let rho = ComplexMatrix::from_real_diagonal(&p.map(|x| x / total)).unwrap();
        let cp = ChannelParams::new(r.gen_range(0.0..0.99), r.gen_range(0.0..0.1)).unwrap();
        let out = apply_channel(&rho, cp).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert!(out[(i, j)].norm() <= 1e-14);
                }
            }
        }
    }
}

#[test]
fn x_support_is_preserved() {
    let mut r = rng(23);
    for _ in 0..200 {
        let rho = random_x_state(&mut r);
        let cp = ChannelParams::new(r.gen_range(0.0..0.99), r.gen_range(0.0..0.1)).unwrap();
        let out = apply_channel(&rho, cp).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                if i != j && i + j != 3 {
                    assert_eq!(out[(i, j)].norm(), 0.0);
                }
            }
        }
        out.validate_density().unwrap();
    }
}

#[test]
fn q_is_monotone_in_acceleration() {
    let mut r = rng(24);
    for _ in 0..20 {
        let omega = r.gen_range(0.1..5.0);
        let mut accel: Vec<f64> = (0..50).map(|_| r.gen_range(0.0..100.0)).collect();
        accel.sort_by(f64::total_cmp);
        accel.dedup();
        let qs: Vec<f64> = accel
            .iter()
            .map(|&a| acceleration_to_q(omega, a).unwrap())
            .collect();
        assert!(qs.windows(2).all(|w| w[0] < w[1]));
        assert!(qs.iter().all(|&q| (0.0..1.0).contains(&q)));
    }
}

proptest! {
    #[test]
    fn final_params_normalised(theta in 0.0..=FRAC_PI_2, q in 0.0..=1.0f64, nu2 in 1e-6..0.999f64) {
        let f = final_state_params(
            InitialStateParams::new(theta).unwrap(),
            ChannelParams::new(q, nu2).unwrap(),
        ).unwrap();
        prop_assert!((2.0 * f.alpha + f.beta + f.gamma - 1.0).abs() <= 1e-12);
        prop_assert!(f.alpha >= 0.0 && f.beta >= 0.0 && f.gamma >= 0.0);
    }

    #[test]
    fn closed_form_is_a_density_matrix(theta in 0.0..=FRAC_PI_2, q in 0.0..=1.0f64, nu2 in 1e-6..0.5f64) {
        let rho = final_state_closed_form(
            InitialStateParams::new(theta).unwrap(),
            ChannelParams::new(q, nu2).unwrap(),
        ).unwrap();
        prop_assert!(rho.validate_density().is_ok());
    }
}
