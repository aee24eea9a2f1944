#![allow(dead_code)]

use std::f64::consts::FRAC_PI_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use unruh_core::model::final_state_closed_form;
use unruh_core::{ChannelParams, ComplexMatrix, InitialStateParams, C64};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_hermitian(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim).unwrap();
    for i in 0..dim {
        m[(i, i)] = C64::new(rng.gen_range(-1.0..1.0), 0.0);
        for j in (i + 1)..dim {
            let z = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

/// `G G† / tr(G G†)` for a Gaussian-ish complex `G`.
pub fn random_density(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    let mut g = ComplexMatrix::zeros(dim).unwrap();
    for i in 0..dim {
        for j in 0..dim {
            g[(i, j)] = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
    }
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    m.scale(1.0 / tr)
}

/// Random valid X state: diagonal populations plus anti-diagonal
/// coherences bounded by the 2×2 positivity conditions.
pub fn random_x_state(rng: &mut impl Rng) -> ComplexMatrix {
    let mut p = [0.0; 4];
    for x in p.iter_mut() {
        *x = rng.gen_range(0.0..1.0);
    }
    let total: f64 = p.iter().sum();
    let p = p.map(|x| x / total);
    let mut rho = ComplexMatrix::from_real_diagonal(&p).unwrap();
    let outer = (p[0] * p[3]).sqrt() * rng.gen_range(0.0..1.0);
    let inner = (p[1] * p[2]).sqrt() * rng.gen_range(0.0..1.0);
    let phase_outer = rng.gen_range(0.0..std::f64::consts::TAU);
    let phase_inner = rng.gen_range(0.0..std::f64::consts::TAU);
    rho[(0, 3)] = C64::from_polar(outer, phase_outer);
    rho[(3, 0)] = rho[(0, 3)].conj();
    rho[(1, 2)] = C64::from_polar(inner, phase_inner);
    rho[(2, 1)] = rho[(1, 2)].conj();
    rho
}

/// `(θ, q, ν²)` drawn from `[0, π/2] × [0, 0.99] × [0, 0.1]`.
pub fn random_family_params(rng: &mut impl Rng) -> (InitialStateParams, ChannelParams) {
    let theta = rng.gen_range(0.0..=FRAC_PI_2);
    let q = rng.gen_range(0.0..=0.99);
    let nu2 = rng.gen_range(0.0..=0.1);
    (
        InitialStateParams::new(theta).unwrap(),
        ChannelParams::new(q, nu2).unwrap(),
    )
}

pub fn family(theta: f64, q: f64, nu2: f64) -> ComplexMatrix {
    final_state_closed_form(
        InitialStateParams::new(theta).unwrap(),
        ChannelParams::new(q, nu2).unwrap(),
    )
    .unwrap()
}

/// Independent closed-form concurrence of the evolved family.
pub fn family_concurrence_oracle(theta: f64, q: f64, nu2: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    let d = (1.0 - q) + nu2 * (s * s + q * c * c);
    (2.0 * theta).sin() * ((1.0 - q) - nu2 * q.sqrt()).max(0.0) / d
}

pub fn binary_entropy(p: f64) -> f64 {
    let h = |x: f64| if x > 0.0 { -x * x.log2() } else { 0.0 };
    h(p) + h(1.0 - p)
}
