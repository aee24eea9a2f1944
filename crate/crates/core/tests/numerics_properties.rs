mod common;

use std::f64::consts::FRAC_PI_4;

use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use unruh_core::model::final_state_params;
use unruh_core::numerics::{
    hermitian_eigen, hermitian_eigenvalues, partial_trace, singular_values, trace_norm_hermitian,
    von_neumann_entropy,
};
use unruh_core::{ChannelParams, ComplexMatrix, InitialStateParams, Subsystem};

use common::{family, random_density, random_hermitian, rng};

#[test]
fn eigenvalues_reconstruct_trace_and_trace_of_square() {
    let mut r = rng(11);
    for dim in [2, 4] {
        for _ in 0..100 {
            let m = random_hermitian(&mut r, dim);
            let ev = hermitian_eigenvalues(&m).unwrap().eigenvalues;
            assert_eq!(ev.len(), dim);
            assert!(
                ev.windows(2).all(|w| w[0] >= w[1]),
                "not descending: {ev:?}"
            );
            let sum: f64 = ev.iter().sum();
            let sum_sq: f64 = ev.iter().map(|x| x * x).sum();
            assert_abs_diff_eq!(sum, m.trace().re, epsilon = 1e-10);
            assert_abs_diff_eq!(sum_sq, (&m * &m).trace().re, epsilon = 1e-10);
        }
    }
}

#[test]
fn eigenvectors_satisfy_eigen_equation() {
    let mut r = rng(12);
    for _ in 0..100 {
        let m = random_hermitian(&mut r, 4);
        let e = hermitian_eigen(&m).unwrap();
        let mv = &m * &e.vectors;
        for (k, &lambda) in e.spectrum.eigenvalues.iter().enumerate() {
            for i in 0..4 {
                let residual = mv[(i, k)] - e.vectors[(i, k)] * lambda;
                assert!(residual.norm() < 1e-12);
            }
        }
        let gram = &e.vectors.adjoint() * &e.vectors;
        assert!(gram.max_abs_diff(&ComplexMatrix::identity(4).unwrap()) < 1e-12);
    }
}

#[test]
fn singular_values_match_eigenvalue_route_on_well_conditioned_input() {
    let mut r = rng(13);
    for _ in 0..50 {
        let m = random_hermitian(&mut r, 4);
        let mut expected: Vec<f64> = hermitian_eigenvalues(&m)
            .unwrap()
            .eigenvalues
            .iter()
            .map(|x| x.abs())
            .collect();
        expected.sort_by(|a, b| b.total_cmp(a));
        let sv = singular_values(&m).unwrap();
        for (a, b) in sv.iter().zip(&expected) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
    }
}

#[test]
fn trace_norm_is_a_norm() {
    let mut r = rng(14);
    for _ in 0..100 {
        let a = random_hermitian(&mut r, 4);
        let b = random_hermitian(&mut r, 4);
        let s = rand::Rng::gen_range(&mut r, -3.0..3.0);
        let na = trace_norm_hermitian(&a).unwrap();
        let nb = trace_norm_hermitian(&b).unwrap();
        assert!(na >= 0.0);
        assert_abs_diff_eq!(
            trace_norm_hermitian(&a.scale(s)).unwrap(),
            f64::abs(s) * na,
            epsilon = 1e-10
        );
        assert!(trace_norm_hermitian(&(&a + &b)).unwrap() <= na + nb + 1e-10);
    }
}

#[test]
fn closed_form_state_spectrum_and_derived_quantities() {
    for &(theta, q, nu2) in &[(FRAC_PI_4, 0.5, 0.04), (0.4, 0.8, 0.07), (1.3, 0.1, 0.02)] {
        let rho = family(theta, q, nu2);
        let f = final_state_params(
            InitialStateParams::new(theta).unwrap(),
            ChannelParams::new(q, nu2).unwrap(),
        )
        .unwrap();

        let mut expected = vec![2.0 * f.alpha, f.beta, f.gamma, 0.0];
        expected.sort_by(|a, b| b.total_cmp(a));
        let ev = hermitian_eigenvalues(&rho).unwrap().eigenvalues;
        for (a, b) in ev.iter().zip(&expected) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }

        let coherent_part = &rho - &rho.diagonal_part();
        assert_abs_diff_eq!(
            trace_norm_hermitian(&coherent_part).unwrap(),
            2.0 * f.alpha * (2.0 * theta).sin(),
            epsilon = 1e-12
        );

        let h = |x: f64| if x > 0.0 { -x * x.log2() } else { 0.0 };
        assert_abs_diff_eq!(
            von_neumann_entropy(&rho).unwrap(),
            h(2.0 * f.alpha) + h(f.beta) + h(f.gamma),
            epsilon = 1e-10
        );

        let (s, c) = theta.sin_cos();
        let reduced = partial_trace(&rho, Subsystem::R).unwrap();
        let expected = ComplexMatrix::from_real_diagonal(&[
            f.gamma + 2.0 * f.alpha * c * c,
            2.0 * f.alpha * s * s + f.beta,
        ])
        .unwrap();
        assert!(reduced.max_abs_diff(&expected) < 1e-12);
    }
}

proptest! {
    #[test]
    fn entropy_within_bounds(seed in any::<u64>(), dim in prop::sample::select(vec![2usize, 4])) {
        let rho = random_density(&mut rng(seed), dim);
        let s = von_neumann_entropy(&rho).unwrap();
        prop_assert!(s >= 0.0);
        prop_assert!(s <= (dim as f64).log2() + 1e-12);
    }

    #[test]
    fn partial_trace_preserves_trace(seed in any::<u64>()) {
        let rho = random_density(&mut rng(seed), 4);
        for keep in [Subsystem::A, Subsystem::R] {
            let reduced = partial_trace(&rho, keep).unwrap();
            prop_assert!((reduced.trace().re - 1.0).abs() <= 1e-12);
            reduced.validate_density().unwrap();
        }
    }

    #[test]
    fn partial_trace_is_linear(seed in any::<u64>(), w in 0.0f64..1.0) {
        let mut r = rng(seed);
        let a = random_density(&mut r, 4);
        let b = random_density(&mut r, 4);
        let mix = &a.scale(w) + &b.scale(1.0 - w);
        for keep in [Subsystem::A, Subsystem::R] {
            let lhs = partial_trace(&mix, keep).unwrap();
            let rhs = &partial_trace(&a, keep).unwrap().scale(w)
                + &partial_trace(&b, keep).unwrap().scale(1.0 - w);
            prop_assert!(lhs.max_abs_diff(&rhs) < 1e-14);
        }
    }
}
