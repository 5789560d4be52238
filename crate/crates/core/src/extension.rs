//! Self-adjoint extension parameters of the general 1D point interaction.
//!
//! The joining condition is `(ψ'(0+), ψ(0+))ᵀ = M (ψ'(0−), ψ(0−))ᵀ` with
//! `M = e^{iφ} [[α, β], [δ, γ]]`, `αγ − βδ = 1`, `φ ∈ (−π/2, π/2]`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mat2::Mat2;

/// Determinant tolerance for user input.
pub const INPUT_TOL: f64 = 1e-9;
/// Tolerance for symmetry classification.
pub const CLASSIFY_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExtensionError {
    #[error("determinant constraint violated: alpha*gamma - beta*delta = {det} (must be 1)")]
    ConstraintViolation { det: f64 },
    #[error("parameter {0} is not finite")]
    NonFinite(&'static str),
    #[error("scale factor must be positive, got {0}")]
    NonPositiveScale(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct ExtensionParams {
    alpha: f64,
    beta: f64,
    gamma: f64,
    delta: f64,
    phi: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    alpha: f64,
    beta: f64,
    gamma: f64,
    delta: f64,
    phi: f64,
}

impl TryFrom<RawParams> for ExtensionParams {
    type Error = ExtensionError;
    fn try_from(r: RawParams) -> Result<Self, Self::Error> {
        ExtensionParams::new(r.alpha, r.beta, r.gamma, r.delta, r.phi)
    }
}

impl From<ExtensionParams> for RawParams {
    fn from(p: ExtensionParams) -> Self {
        RawParams {
            alpha: p.alpha,
            beta: p.beta,
            gamma: p.gamma,
            delta: p.delta,
            phi: p.phi,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Symmetry {
    Parity,
    TimeReversal,
    Scale(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SymmetryFlags {
    pub parity_even: bool,
    pub time_reversal_even: bool,
    pub pt_even: bool,
    pub scale_invariant: bool,
}

// Map φ into (−π/2, π/2]; returns (φ', flip) where flip means all four
// matrix entries change sign.
fn normalize_phase(phi: f64) -> (f64, bool) {
    let mut p = phi % (2.0 * PI);
    if p > PI {
        p -= 2.0 * PI;
    } else if p <= -PI {
        p += 2.0 * PI;
    }
    if p > FRAC_PI_2 {
        (p - PI, true)
    } else if p <= -FRAC_PI_2 {
        (p + PI, true)
    } else {
        (p, false)
    }
}

impl ExtensionParams {
    /// Validates `αγ − βδ = 1` to [`INPUT_TOL`] and normalizes `φ`.
    pub fn new(alpha: f64, beta: f64, gamma: f64, delta: f64, phi: f64) -> Result<Self, ExtensionError> {
        for (name, v) in [
            ("alpha", alpha),
            ("beta", beta),
            ("gamma", gamma),
            ("delta", delta),
            ("phi", phi),
        ] {
            if !v.is_finite() {
                return Err(ExtensionError::NonFinite(name));
            }
        }
        let det = alpha * gamma - beta * delta;
        if (det - 1.0).abs() > INPUT_TOL {
            return Err(ExtensionError::ConstraintViolation { det });
        }
        Ok(Self::normalized(alpha, beta, gamma, delta, phi))
    }

    fn normalized(alpha: f64, beta: f64, gamma: f64, delta: f64, phi: f64) -> Self {
        let (phi, flip) = normalize_phase(phi);
        let s = if flip { -1.0 } else { 1.0 };
        ExtensionParams {
            alpha: s * alpha,
            beta: s * beta,
            gamma: s * gamma,
            delta: s * delta,
            phi,
        }
    }

    pub fn identity() -> Self {
        ExtensionParams {
            alpha: 1.0,
            beta: 0.0,
            gamma: 1.0,
            delta: 0.0,
            phi: 0.0,
        }
    }

    /// Parity-even delta potential with derivative jump `−2c₀ψ(0)`.
    pub fn delta_potential(c0: f64) -> Self {
        ExtensionParams {
            alpha: 1.0,
            beta: -2.0 * c0,
            gamma: 1.0,
            delta: 0.0,
            phi: 0.0,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn determinant(&self) -> f64 {
        self.alpha * self.gamma - self.beta * self.delta
    }

    /// The transfer matrix `M`.
    pub fn transfer_matrix(&self) -> Mat2 {
        Mat2::from_real([[self.alpha, self.beta], [self.delta, self.gamma]])
            .scale(Complex64::from_polar(1.0, self.phi))
    }

    pub fn apply_symmetry(&self, t: Symmetry) -> Result<Self, ExtensionError> {
        let p = self;
        match t {
            Symmetry::Parity => Ok(Self::normalized(p.gamma, p.beta, p.alpha, p.delta, -p.phi)),
            Symmetry::TimeReversal => Ok(Self::normalized(p.alpha, p.beta, p.gamma, p.delta, -p.phi)),
            Symmetry::Scale(l) if l > 0.0 && l.is_finite() => Ok(ExtensionParams {
                beta: l * p.beta,
                delta: p.delta / l,
                ..*p
            }),
            Symmetry::Scale(l) => Err(ExtensionError::NonPositiveScale(l)),
        }
    }

    pub fn classify(&self) -> SymmetryFlags {
        let pt_even = (self.alpha - self.gamma).abs() <= CLASSIFY_TOL;
        let time_reversal_even = self.phi.abs() <= CLASSIFY_TOL;
        SymmetryFlags {
            parity_even: pt_even && time_reversal_even,
            time_reversal_even,
            pt_even,
            scale_invariant: self.beta.abs() <= CLASSIFY_TOL && self.delta.abs() <= CLASSIFY_TOL,
        }
    }

    /// Maps `(ψ(0−), ψ'(0−))` to `(ψ(0+), ψ'(0+))`.
    pub fn apply_joining(&self, psi_left: Complex64, dpsi_left: Complex64) -> (Complex64, Complex64) {
        let e = Complex64::from_polar(1.0, self.phi);
        let dpsi_right = e * (self.alpha * dpsi_left + self.beta * psi_left);
        let psi_right = e * (self.delta * dpsi_left + self.gamma * psi_left);
        (psi_right, dpsi_right)
    }
}

pub fn validate_extension(
    alpha: f64,
    beta: f64,
    gamma: f64,
    delta: f64,
    phi: f64,
) -> Result<ExtensionParams, ExtensionError> {
    ExtensionParams::new(alpha, beta, gamma, delta, phi)
}
