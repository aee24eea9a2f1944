//! Fixed inputs shared by the benchmarks.

use std::f64::consts::FRAC_PI_4;

use unruh_core::analysis::linspace;
use unruh_core::model::final_state_closed_form;
use unruh_core::{ChannelParams, ComplexMatrix, InitialStateParams, C64};

/// Evolved family state at `(θ, q, ν²)`.
pub fn family_state(theta: f64, q: f64, nu2: f64) -> ComplexMatrix {
    final_state_closed_form(
        InitialStateParams::new(theta).expect("theta in range"),
        ChannelParams::new(q, nu2).expect("channel in range"),
    )
    .expect("valid state")
}

/// A full-rank state with every entry populated: `G G† / tr(G G†)` for a
/// fixed, deterministic `G`.
pub fn generic_state() -> ComplexMatrix {
    let mut g = ComplexMatrix::zeros(4).expect("dimension 4");
    for i in 0..4 {
        for j in 0..4 {
            let k = (4 * i + j) as f64;
            g[(i, j)] = C64::new((1.3 * k + 0.7).sin(), (0.9 * k - 0.4).cos());
        }
    }
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    m.scale(1.0 / tr)
}

/// `(θ, q, ν²)` for a 200-point q sweep at the Bell angle.
pub fn q_sweep_points(nu2: f64) -> Vec<(f64, f64, f64)> {
    linspace(0.0, 0.999, 200)
        .into_iter()
        .map(|q| (FRAC_PI_4, q, nu2))
        .collect()
}
