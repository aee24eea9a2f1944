//! Detector-pair model: the entangled input state, the Unruh channel
//! parameters, and the evolved state built two ways (closed form and Kraus).
//!
//! The Kraus set acting on the accelerated detector is trace-non-increasing:
//! `Σ M†M = diag(1 - q + qν², 1 - q + ν²)`. [`apply_channel`] therefore
//! divides the output by its trace, and that normalisation is what makes the
//! Kraus route agree with the closed form.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{ComplexMatrix, C64};

/// `ν²` at or above this is flagged as leaving the perturbative regime.
pub const STRONG_COUPLING_NU2: f64 = 0.1;
/// `ΩΔ` at or below this is flagged as too short an interaction window.
pub const SHORT_WINDOW_OMEGA_DELTA: f64 = 10.0;

/// Tolerance used when checking `2α + β + γ = 1`.
const NORMALISATION_TOLERANCE: f64 = 1e-12;

/// Angle of the input state `sinθ|01⟩ + cosθ|10⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialStateParams {
    theta: f64,
}

impl InitialStateParams {
    pub fn new(theta: f64) -> Result<Self> {
        // Absorb the last-ulp overshoot of expressions like `3.0 * FRAC_PI_6`.
        let theta = if theta > FRAC_PI_2 && theta - FRAC_PI_2 < 4.0 * f64::EPSILON {
            FRAC_PI_2
        } else {
            theta
        };
        if !(0.0..=FRAC_PI_2).contains(&theta) {
            return Err(Error::domain("theta", theta, "must lie in [0, pi/2]"));
        }
        Ok(Self { theta })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// Dimensionless Unruh channel parameters `(q, ν²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    q: f64,
    nu2: f64,
}

impl ChannelParams {
    pub fn new(q: f64, nu2: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::domain("q", q, "must lie in [0, 1]"));
        }
        if !(0.0..1.0).contains(&nu2) {
            return Err(Error::domain("nu2", nu2, "must lie in [0, 1)"));
        }
        if q == 1.0 && nu2 == 0.0 {
            return Err(Error::domain(
                "q",
                q,
                "q = 1 requires nu2 > 0 (the normalisation vanishes)",
            ));
        }
        Ok(Self { q, nu2 })
    }

    /// The zero-acceleration, zero-coupling identity channel.
    pub fn identity() -> Self {
        Self { q: 0.0, nu2: 0.0 }
    }

    pub fn from_physical(p: &PhysicalParams) -> Result<(Self, Vec<ValidityWarning>)> {
        let coupling = effective_coupling(p)?;
        let q = acceleration_to_q(p.omega, p.acceleration)?;
        Ok((Self::new(q, coupling.nu2)?, coupling.warnings))
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn nu2(&self) -> f64 {
        self.nu2
    }

    pub fn nu(&self) -> f64 {
        self.nu2.sqrt()
    }
}

/// Physical detector and trajectory parameters, in natural units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    /// Coupling constant `ε`.
    pub epsilon: f64,
    /// Detector energy gap `Ω`.
    pub omega: f64,
    /// Proper-time duration `Δ` of the interaction.
    pub delta: f64,
    /// Width `κ` of the Gaussian coupling function.
    pub kappa: f64,
    /// Proper acceleration `a`.
    pub acceleration: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ValidityWarning {
    /// `ν²` is not small compared to one.
    StrongCoupling { nu2: f64 },
    /// `Ω⁻¹` is not small compared to `Δ`.
    ShortInteractionWindow { omega_delta: f64 },
}

impl ValidityWarning {
    pub fn check_nu2(nu2: f64) -> Option<Self> {
        (nu2 >= STRONG_COUPLING_NU2).then_some(ValidityWarning::StrongCoupling { nu2 })
    }
}

impl std::fmt::Display for ValidityWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ValidityWarning::StrongCoupling { nu2 } => write!(
                f,
                "nu2 = {nu2} >= {STRONG_COUPLING_NU2}: outside the weak-coupling regime"
            ),
            ValidityWarning::ShortInteractionWindow { omega_delta } => write!(
                f,
                "Omega*Delta = {omega_delta} <= {SHORT_WINDOW_OMEGA_DELTA}: interaction window too short"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectiveCoupling {
    pub nu2: f64,
    pub warnings: Vec<ValidityWarning>,
}

/// `q = exp(-2πΩ/a)`, with `q = 0` at `a = 0` and `q = 1` at `a = ∞`.
pub fn acceleration_to_q(omega: f64, acceleration: f64) -> Result<f64> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::domain("Omega", omega, "must be positive and finite"));
    }
    if !(acceleration >= 0.0) {
        return Err(Error::domain("a", acceleration, "must be non-negative"));
    }
    if acceleration == 0.0 {
        return Ok(0.0);
    }
    Ok((-2.0 * PI * omega / acceleration).exp())
}

/// `ν² = ε²ΩΔ/(2π) · exp(-Ω²κ²)`.
///
/// Warnings are attached when `ν² ≥ 0.1` or `ΩΔ ≤ 10`; they never alter the
/// value. `ν² ≥ 1` is rejected outright.
pub fn effective_coupling(p: &PhysicalParams) -> Result<EffectiveCoupling> {
    if !(p.epsilon >= 0.0) || !p.epsilon.is_finite() {
        return Err(Error::domain("epsilon", p.epsilon, "must be non-negative"));
    }
    if !(p.omega > 0.0) || !p.omega.is_finite() {
        return Err(Error::domain("Omega", p.omega, "must be positive"));
    }
    if !(p.delta > 0.0) || !p.delta.is_finite() {
        return Err(Error::domain("Delta", p.delta, "must be positive"));
    }
    if !(p.kappa >= 0.0) || !p.kappa.is_finite() {
        return Err(Error::domain("kappa", p.kappa, "must be non-negative"));
    }
    if !(p.acceleration >= 0.0) {
        return Err(Error::domain("a", p.acceleration, "must be non-negative"));
    }
    let nu2 = p.epsilon * p.epsilon * p.omega * p.delta / (2.0 * PI)
        * (-(p.omega * p.kappa).powi(2)).exp();
    if nu2 >= 1.0 {
        return Err(Error::domain(
            "nu2",
            nu2,
            "effective coupling must stay below 1 for the perturbative model",
        ));
    }
    let mut warnings = Vec::new();
    warnings.extend(ValidityWarning::check_nu2(nu2));
    let omega_delta = p.omega * p.delta;
    if omega_delta <= SHORT_WINDOW_OMEGA_DELTA {
        warnings.push(ValidityWarning::ShortInteractionWindow { omega_delta });
    }
    Ok(EffectiveCoupling { nu2, warnings })
}

/// Scalars `(α, β, γ)` parameterising the evolved state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FinalStateParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub theta: f64,
    /// `D = (1 - q) + ν²(sin²θ + q cos²θ)`.
    pub norm: f64,
}

/// `|Ψ⟩⟨Ψ|` for `|Ψ⟩ = sinθ|01⟩ + cosθ|10⟩`.
pub fn initial_state(p: InitialStateParams) -> ComplexMatrix {
    let (s, c) = p.theta.sin_cos();
    let psi = [
        C64::new(0.0, 0.0),
        C64::new(s, 0.0),
        C64::new(c, 0.0),
        C64::new(0.0, 0.0),
    ];
    ComplexMatrix::projector(&psi).expect("dimension 4")
}

pub fn final_state_params(p: InitialStateParams, cp: ChannelParams) -> Result<FinalStateParams> {
    let (s, c) = p.theta.sin_cos();
    let (s2, c2) = (s * s, c * c);
    let q = cp.q;
    let nu2 = cp.nu2;
    let norm = (1.0 - q) + nu2 * (s2 + q * c2);
    if !(norm > 0.0) {
        return Err(Error::Internal(format!(
            "normalisation D = {norm} is not positive for theta = {}, q = {q}, nu2 = {nu2}",
            p.theta
        )));
    }
    let params = FinalStateParams {
        alpha: (1.0 - q) / (2.0 * norm),
        beta: nu2 * q * c2 / norm,
        gamma: nu2 * s2 / norm,
        theta: p.theta,
        norm,
    };
    let total = 2.0 * params.alpha + params.beta + params.gamma;
    if (total - 1.0).abs() > NORMALISATION_TOLERANCE {
        return Err(Error::Internal(format!("2a + b + g = {total} != 1")));
    }
    Ok(params)
}

/// Evolved state in its X-shaped closed form:
/// `diag(γ, 2α sin²θ, 2α cos²θ, β)` with `ρ₁₂ = ρ₂₁ = α sin2θ`.
pub fn final_state_closed_form(p: InitialStateParams, cp: ChannelParams) -> Result<ComplexMatrix> {
    let f = final_state_params(p, cp)?;
    let (s, c) = f.theta.sin_cos();
    let off = f.alpha * (2.0 * f.theta).sin();
    let mut rho = ComplexMatrix::from_real_diagonal(&[
        f.gamma,
        2.0 * f.alpha * s * s,
        2.0 * f.alpha * c * c,
        f.beta,
    ])?;
    rho[(1, 2)] = C64::new(off, 0.0);
    rho[(2, 1)] = C64::new(off, 0.0);
    Ok(rho)
}

/// Kraus operators on the accelerated detector, basis `{|0⟩, |1⟩}`:
/// `M₁ = √(1-q) I`, `M₂ = ν√q |1⟩⟨0|`, `M₃ = ν |0⟩⟨1|`.
pub fn kraus_operators(cp: ChannelParams) -> [ComplexMatrix; 3] {
    let nu = cp.nu();
    let m1 = ComplexMatrix::identity(2)
        .expect("dimension 2")
        .scale((1.0 - cp.q).sqrt());
    let mut m2 = ComplexMatrix::zeros(2).expect("dimension 2");
    m2[(1, 0)] = C64::new(nu * cp.q.sqrt(), 0.0);
    let mut m3 = ComplexMatrix::zeros(2).expect("dimension 2");
    m3[(0, 1)] = C64::new(nu, 0.0);
    [m1, m2, m3]
}

/// `Σ (I ⊗ M) ρ (I ⊗ M)†` without normalisation.
pub fn apply_channel_unnormalized(rho: &ComplexMatrix, cp: ChannelParams) -> Result<ComplexMatrix> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: rho.dim(),
        });
    }
    let id = ComplexMatrix::identity(2)?;
    let mut out = ComplexMatrix::zeros(4)?;
    for m in kraus_operators(cp) {
        let k = id.kron(&m)?;
        out = &out + &(&(&k * rho) * &k.adjoint());
    }
    Ok(out)
}

/// Applies the Unruh channel to the accelerated detector and renormalises.
pub fn apply_channel(rho: &ComplexMatrix, cp: ChannelParams) -> Result<ComplexMatrix> {
    rho.validate_density()?;
    let out = apply_channel_unnormalized(rho, cp)?;
    let trace = out.trace().re;
    if !(trace > 0.0) {
        return Err(Error::DegenerateChannel { trace });
    }
    Ok(out.scale(1.0 / trace))
}
