//! Coherence quantifiers (l1, relative entropy, trace norm) and concurrence.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{final_state_params, ChannelParams, InitialStateParams};
use crate::numerics::{
    hermitian_eigen, shannon_entropy_bits, singular_values, trace_norm_hermitian,
    von_neumann_entropy, ComplexMatrix, C64,
};
use crate::trace_distance;
pub use crate::trace_distance::TraceDistanceMinimum;

/// Entries outside the diagonal and anti-diagonal above this break X shape.
pub const X_STRUCTURE_TOLERANCE: f64 = 1e-14;
/// Optimizer tolerance used by [`measure_all`] for non-X states.
pub const DEFAULT_TRACE_NORM_TOLERANCE: f64 = 1e-9;
/// Tightest tolerance the trace-norm minimiser accepts. Below this, double
/// precision cannot always certify optima where an eigenvalue of `ρ - δ`
/// vanishes.
pub const MIN_TRACE_NORM_TOLERANCE: f64 = 1e-10;

/// Eigenvalues of `ρ` below this fraction of the largest are rank noise.
const RANK_CUTOFF: f64 = 64.0 * f64::EPSILON;

/// The four measures of one state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub c_l1: f64,
    /// Relative entropy of coherence, in bits.
    pub c_re: f64,
    pub c_tr: f64,
    pub concurrence: f64,
}

impl MeasureReport {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("c_l1", self.c_l1),
            ("c_re", self.c_re),
            ("c_tr", self.c_tr),
            ("concurrence", self.concurrence),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::domain(
                    name,
                    v,
                    "measures must be finite and non-negative",
                ));
            }
        }
        if self.concurrence > 1.0 {
            return Err(Error::domain(
                "concurrence",
                self.concurrence,
                "concurrence cannot exceed 1",
            ));
        }
        Ok(())
    }
}

fn ensure_two_qubit(rho: &ComplexMatrix) -> Result<()> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: rho.dim(),
        });
    }
    Ok(())
}

/// Sum of the moduli of all off-diagonal entries.
pub fn l1_coherence(rho: &ComplexMatrix) -> Result<f64> {
    rho.validate_density()?;
    let n = rho.dim();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                total += rho[(i, j)].norm();
            }
        }
    }
    Ok(total)
}

/// `2α sin2θ` for the evolved detector state.
pub fn l1_coherence_closed(p: InitialStateParams, cp: ChannelParams) -> Result<f64> {
    let f = final_state_params(p, cp)?;
    Ok(2.0 * f.alpha * (2.0 * p.theta()).sin())
}

/// `S(diag ρ) - S(ρ)` in bits.
pub fn relative_entropy_coherence(rho: &ComplexMatrix) -> Result<f64> {
    let s_rho = von_neumann_entropy(rho)?;
    let s_diag = shannon_entropy_bits(&rho.diagonal_real());
    Ok((s_diag - s_rho).max(0.0))
}

/// Location of the largest entry outside the X pattern, if any exceeds tolerance.
pub fn x_structure_violation(rho: &ComplexMatrix) -> Option<(usize, usize, f64)> {
    let n = rho.dim();
    let mut worst: Option<(usize, usize, f64)> = None;
    for i in 0..n {
        for j in 0..n {
            if i == j || i + j == n - 1 {
                continue;
            }
            let m = rho[(i, j)].norm();
            if !(m <= X_STRUCTURE_TOLERANCE) && worst.is_none_or(|w| m > w.2) {
                worst = Some((i, j, m));
            }
        }
    }
    worst
}

pub fn is_x_state(rho: &ComplexMatrix) -> bool {
    x_structure_violation(rho).is_none()
}

fn ensure_x_state(rho: &ComplexMatrix) -> Result<()> {
    ensure_two_qubit(rho)?;
    match x_structure_violation(rho) {
        Some((row, col, magnitude)) => Err(Error::NotXState {
            row,
            col,
            magnitude,
        }),
        None => Ok(()),
    }
}

/// Trace-norm coherence of an X state, where the closest incoherent state
/// is `diag ρ`.
pub fn trace_norm_coherence_xstate(rho: &ComplexMatrix) -> Result<f64> {
    ensure_x_state(rho)?;
    rho.validate_density()?;
    trace_norm_hermitian(&(rho - &rho.diagonal_part()))
}

/// Trace-norm coherence by direct minimisation over the probability simplex.
pub fn trace_norm_coherence_numeric(rho: &ComplexMatrix, tol: f64) -> Result<f64> {
    minimize_trace_distance(rho, tol).map(|m| m.value)
}

/// `min ‖ρ - δ‖₁` over diagonal states `δ`, certified to within `tol`
/// (at least [`MIN_TRACE_NORM_TOLERANCE`]).
///
/// See the `trace_distance` module for the method. Fails with
/// [`Error::NoConvergence`] if the certificate cannot be closed.
pub fn minimize_trace_distance(rho: &ComplexMatrix, tol: f64) -> Result<TraceDistanceMinimum> {
    ensure_two_qubit(rho)?;
    rho.validate_density()?;
    if !(tol >= MIN_TRACE_NORM_TOLERANCE) {
        return Err(Error::domain("tol", tol, "must be at least 1e-10"));
    }
    trace_distance::minimize(rho, tol)
}

/// `2 max{0, |ρ₁₄| - √(ρ₂₂ρ₃₃), |ρ₂₃| - √(ρ₁₁ρ₄₄)}` (1-based indices).
pub fn concurrence_xstate(rho: &ComplexMatrix) -> Result<f64> {
    ensure_x_state(rho)?;
    rho.validate_density()?;
    let d = |i: usize| rho[(i, i)].re.max(0.0);
    let c1 = rho[(0, 3)].norm() - (d(1) * d(2)).sqrt();
    let c2 = rho[(1, 2)].norm() - (d(0) * d(3)).sqrt();
    Ok((2.0 * c1.max(c2).max(0.0)).min(1.0))
}

/// Spin-flip concurrence of an arbitrary two-qubit state.
///
/// The values `√μ_i` (square roots of the eigenvalues of `ρ ρ̃`) are
/// obtained as the singular values of `√ρ √ρ̃`, where
/// `ρ̃ = (Y⊗Y) ρ* (Y⊗Y)`.
pub fn concurrence_general(rho: &ComplexMatrix) -> Result<f64> {
    ensure_two_qubit(rho)?;
    rho.validate_density()?;
    let eig = hermitian_eigen(rho)?;
    let largest = eig.spectrum.eigenvalues[0];
    let mut root = ComplexMatrix::zeros(4)?;
    for (k, &lambda) in eig.spectrum.eigenvalues.iter().enumerate() {
        if lambda <= RANK_CUTOFF * largest {
            continue;
        }
        let s = lambda.sqrt();
        for i in 0..4 {
            for j in 0..4 {
                root[(i, j)] += s * eig.vectors[(i, k)] * eig.vectors[(j, k)].conj();
            }
        }
    }
    let yy = spin_flip()?;
    let root_tilde = &(&yy * &root.conj()) * &yy;
    let sv = singular_values(&(&root * &root_tilde))?;
    let c = sv[0] - sv[1] - sv[2] - sv[3];
    Ok(c.clamp(0.0, 1.0))
}

/// `Y ⊗ Y`, which is real: anti-diagonal `(-1, 1, 1, -1)`.
fn spin_flip() -> Result<ComplexMatrix> {
    let y = ComplexMatrix::from_rows(&[
        [C64::new(0.0, 0.0), C64::new(0.0, -1.0)],
        [C64::new(0.0, 1.0), C64::new(0.0, 0.0)],
    ])?;
    y.kron(&y)
}

/// All four measures, using X-state shortcuts when the structure allows.
pub fn measure_all(rho: &ComplexMatrix) -> Result<MeasureReport> {
    ensure_two_qubit(rho)?;
    let c_l1 = l1_coherence(rho)?;
    let c_re = relative_entropy_coherence(rho)?;
    let (c_tr, concurrence) = if is_x_state(rho) {
        (trace_norm_coherence_xstate(rho)?, concurrence_xstate(rho)?)
    } else {
        (
            trace_norm_coherence_numeric(rho, DEFAULT_TRACE_NORM_TOLERANCE)?,
            concurrence_general(rho)?,
        )
    };
    let report = MeasureReport {
        c_l1,
        c_re,
        c_tr,
        concurrence,
    };
    report.validate()?;
    Ok(report)
}
