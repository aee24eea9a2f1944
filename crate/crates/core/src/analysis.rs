//! Frozen-coherence detection, entanglement sudden-death thresholds and
//! coherence-versus-entanglement robustness.
//!
//! Death condition: for the evolved family the X-state concurrence is
//! `2 max{0, α sin2θ - √(βγ)} = sin2θ · max{0, (1 - q) - ν²√q} / D`, so
//! entanglement vanishes exactly when `(1 - q) ≤ ν²√q`, independent of θ.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{concurrence_xstate, l1_coherence, relative_entropy_coherence};
use crate::model::{
    apply_channel, final_state_closed_form, final_state_params, initial_state, ChannelParams,
    InitialStateParams, ValidityWarning,
};

/// A grid point is frozen when `max_q |∂_q C_l1|` stays below this.
pub const FROZEN_TOLERANCE: f64 = 1e-12;
/// Default central-difference step.
pub const DEFAULT_FD_STEP: f64 = 1e-4;
/// Bisection iterations; `2⁻⁶⁰ < 1e-18`.
pub const BISECTION_ITERATIONS: usize = 60;

/// `q` samples used by the default frozen scan: 101 points on `[0, 0.99]`.
pub fn default_q_samples() -> Vec<f64> {
    linspace(0.0, 0.99, 101)
}

/// `n` evenly spaced points on `[lo, hi]`, endpoints included.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

/// `∂_q C_l1 = -ν² sin2θ / (1 - q + qν² cos²θ + ν² sin²θ)²`.
pub fn d_cl1_dq(theta: InitialStateParams, cp: ChannelParams) -> Result<f64> {
    let f = final_state_params(theta, cp)?;
    Ok(-cp.nu2() * (2.0 * theta.theta()).sin() / (f.norm * f.norm))
}

fn l1_at(theta: InitialStateParams, q: f64, nu2: f64) -> Result<f64> {
    let cp = ChannelParams::new(q, nu2)?;
    l1_coherence(&final_state_closed_form(theta, cp)?)
}

/// Central difference of the matrix-level l1 coherence in `q`.
pub fn finite_difference_dq(theta: InitialStateParams, q: f64, nu2: f64, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::domain("h", h, "step must be positive"));
    }
    if !(q - h >= 0.0 && q + h < 1.0) {
        return Err(Error::domain(
            "q",
            q,
            "stencil [q-h, q+h] must lie in [0, 1)",
        ));
    }
    let up = l1_at(theta, q + h, nu2)?;
    let down = l1_at(theta, q - h, nu2)?;
    Ok((up - down) / (2.0 * h))
}

/// Per-point outcome of a frozen-coherence scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrozenPoint {
    pub theta: f64,
    pub nu2: f64,
    pub max_abs_dcl1_dq: f64,
    /// Central-difference `|∂_q C_RE|` maximum; reported, not used for the verdict.
    pub max_abs_dcre_dq: f64,
    pub frozen: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrozenScanResult {
    pub grid: Vec<(f64, f64)>,
    pub frozen_points: Vec<(f64, f64)>,
    pub points: Vec<FrozenPoint>,
    /// Largest `|∂_q C_l1|` over non-frozen points (0 if every point is frozen).
    pub max_abs_derivative_elsewhere: f64,
    pub max_location: Option<(f64, f64)>,
    pub tolerance: f64,
}

impl FrozenScanResult {
    /// True when the frozen set is exactly `{sin2θ = 0} ∪ {ν² = 0}` on the grid:
    /// an incoherent input or a detector decoupled from the field.
    pub fn matches_boundary_prediction(&self) -> bool {
        self.points
            .iter()
            .all(|p| p.frozen == predicted_frozen(p.theta, p.nu2, self.tolerance))
    }
}

fn predicted_frozen(theta: f64, nu2: f64, tol: f64) -> bool {
    (2.0 * theta).sin().abs() <= tol || nu2 <= tol
}

/// Scans `θ × ν²` and marks points whose l1 coherence does not move with `q`.
///
/// Points are evaluated independently and reported in grid order
/// (θ-major).
pub fn frozen_scan(
    theta_grid: &[f64],
    nu2_grid: &[f64],
    q_samples: &[f64],
    tol: f64,
) -> Result<FrozenScanResult> {
    if theta_grid.is_empty() || nu2_grid.is_empty() || q_samples.is_empty() {
        return Err(Error::domain(
            "grid",
            0.0,
            "theta, nu2 and q grids must be nonempty",
        ));
    }
    if !(tol > 0.0) {
        return Err(Error::domain("tol", tol, "must be positive"));
    }
    let thetas = theta_grid
        .iter()
        .map(|&t| InitialStateParams::new(t))
        .collect::<Result<Vec<_>>>()?;

    let mut points = Vec::with_capacity(thetas.len() * nu2_grid.len());
    for &theta in &thetas {
        for &nu2 in nu2_grid {
            let mut max_l1 = 0.0f64;
            for &q in q_samples {
                let d = d_cl1_dq(theta, ChannelParams::new(q, nu2)?)?;
                max_l1 = max_l1.max(d.abs());
            }
            let max_re = max_abs_re_derivative(theta, nu2, q_samples)?;
            points.push(FrozenPoint {
                theta: theta.theta(),
                nu2,
                max_abs_dcl1_dq: max_l1,
                max_abs_dcre_dq: max_re,
                frozen: max_l1 < tol,
            });
        }
    }

    let mut max_abs_derivative_elsewhere = 0.0;
    let mut max_location = None;
    for p in points.iter().filter(|p| !p.frozen) {
        if p.max_abs_dcl1_dq > max_abs_derivative_elsewhere {
            max_abs_derivative_elsewhere = p.max_abs_dcl1_dq;
            max_location = Some((p.theta, p.nu2));
        }
    }
    Ok(FrozenScanResult {
        grid: points.iter().map(|p| (p.theta, p.nu2)).collect(),
        frozen_points: points
            .iter()
            .filter(|p| p.frozen)
            .map(|p| (p.theta, p.nu2))
            .collect(),
        points,
        max_abs_derivative_elsewhere,
        max_location,
        tolerance: tol,
    })
}

fn max_abs_re_derivative(theta: InitialStateParams, nu2: f64, q_samples: &[f64]) -> Result<f64> {
    let re_at = |q: f64| -> Result<f64> {
        let cp = ChannelParams::new(q, nu2)?;
        relative_entropy_coherence(&final_state_closed_form(theta, cp)?)
    };
    let mut max = 0.0f64;
    for &q in q_samples {
        // One-sided at the ends of [0, 1).
        let h = DEFAULT_FD_STEP;
        let (lo, hi) = ((q - h).max(0.0), (q + h).min(1.0 - f64::EPSILON));
        let d = (re_at(hi)? - re_at(lo)?) / (hi - lo);
        max = max.max(d.abs());
    }
    Ok(max)
}

/// Threshold at which concurrence reaches zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuddenDeathResult {
    /// `None` when entanglement never dies on the parameter range.
    pub threshold: Option<f64>,
    /// Final bracket around the threshold.
    pub bracket: (f64, f64),
    pub iterations: usize,
    pub warning: Option<ValidityWarning>,
}

fn ensure_entangled_input(theta: InitialStateParams) -> Result<()> {
    let t = theta.theta();
    if !(t > 0.0 && t < std::f64::consts::FRAC_PI_2) {
        return Err(Error::domain(
            "theta",
            t,
            "must lie strictly inside (0, pi/2) so that the input is entangled",
        ));
    }
    Ok(())
}

/// Bisection for a sign change of `f` on `[lo, hi]`, with `f(lo) > 0 ≥ f(hi)`.
/// Returns the final bracket and the number of halvings performed.
pub fn bisect_sign_change<F>(
    mut lo: f64,
    mut hi: f64,
    iterations: usize,
    f: F,
) -> Result<(f64, f64, usize)>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(f(lo)? > 0.0) || f(hi)? > 0.0 {
        return Err(Error::domain("bracket", lo, "requires f(lo) > 0 >= f(hi)"));
    }
    let mut done = 0;
    while done < iterations {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        done += 1;
    }
    Ok((lo, hi, done))
}

/// Critical acceleration `q*` solving `1 - q = ν²√q`.
pub fn sudden_death_q(theta: InitialStateParams, nu2: f64) -> Result<SuddenDeathResult> {
    ensure_entangled_input(theta)?;
    ChannelParams::new(0.0, nu2)?;
    if nu2 == 0.0 {
        return Ok(SuddenDeathResult {
            threshold: None,
            bracket: (0.0, 1.0),
            iterations: 0,
            warning: None,
        });
    }
    let margin = |q: f64| Ok((1.0 - q) - nu2 * q.sqrt());
    let (lo, hi, iterations) = bisect_sign_change(0.0, 1.0, BISECTION_ITERATIONS, margin)?;
    Ok(SuddenDeathResult {
        threshold: Some(0.5 * (lo + hi)),
        bracket: (lo, hi),
        iterations,
        warning: ValidityWarning::check_nu2(nu2),
    })
}

/// Critical coupling `ν* = √((1 - q)/√q)` at fixed acceleration.
pub fn sudden_death_nu(theta: InitialStateParams, q: f64) -> Result<SuddenDeathResult> {
    ensure_entangled_input(theta)?;
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::domain("q", q, "must lie strictly inside (0, 1)"));
    }
    let nu2 = (1.0 - q) / q.sqrt();
    let nu = nu2.sqrt();
    Ok(SuddenDeathResult {
        threshold: Some(nu),
        bracket: (nu, nu),
        iterations: 0,
        warning: ValidityWarning::check_nu2(nu2),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RobustnessReport {
    pub c_l1: f64,
    pub concurrence: f64,
    /// `c_l1 - concurrence`.
    pub gap: f64,
}

pub fn robustness_report(theta: InitialStateParams, cp: ChannelParams) -> Result<RobustnessReport> {
    let rho = final_state_closed_form(theta, cp)?;
    let c_l1 = l1_coherence(&rho)?;
    let concurrence = concurrence_xstate(&rho)?;
    Ok(RobustnessReport {
        c_l1,
        concurrence,
        gap: (c_l1 - concurrence).max(0.0),
    })
}

/// Checks that the channel maps `diag ρ_in` to `diag ρ_out`.
pub fn verify_incoherent_operation(
    theta: InitialStateParams,
    cp: ChannelParams,
    tol: f64,
) -> Result<bool> {
    let input = initial_state(theta).diagonal_part();
    let output = apply_channel(&input, cp)?;
    let expected = final_state_closed_form(theta, cp)?.diagonal_part();
    Ok(output.max_abs_diff(&expected) <= tol)
}
