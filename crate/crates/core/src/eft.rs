//! Contact-interaction effective theory for the general point interaction.
//!
//! Couplings: `c₀` (δ(x)), `𝕔₁ = c₁ + i c̃₁` (first-derivative, parity odd),
//! `c₂⁽ᵖ⁾` (p-wave). Regulated loop moments in cutoff, NDR and PDS.
//!
//! The p-wave coupling in NDR is `c₂⁽ᵖ⁾ = −a₁`, consistent with the p-wave
//! amplitude; the inverse-length form quoted in some derivations is a typo.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::extension::{ExtensionError, ExtensionParams};
use crate::mat2::Mat2;
use crate::scattering::{Basis, MatrixKind, ScatterMatrix};

const LANDAU_TOL: f64 = 1e-12;
const DICT_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EftError {
    #[error("moment I_{{2n}} with n = {0} is only available in NDR")]
    UnsupportedMoment(u32),
    #[error("invalid scheme scale: {0}")]
    InvalidScheme(String),
    #[error("momentum must be positive and finite, got {0}")]
    InvalidMomentum(f64),
    #[error("Landau pole: 2*Lambda/pi equals 1/a1")]
    LandauPole,
    #[error("|kappa0 * a_theta| = {0} exceeds 1; no perturbative branch")]
    NonPerturbative(f64),
    #[error("need 2*mu > kappa0 > 0 (kappa0 = {kappa0}, mu = {mu})")]
    InvalidScale { kappa0: f64, mu: f64 },
    #[error("this operation requires the NDR scheme")]
    RequiresNdr,
    #[error("derivative coupling vanishes; mixing angle and relative phase are undefined")]
    DegenerateMixing,
    #[error("pole equation has complex roots")]
    ComplexPoles,
    #[error("dictionary denominator alpha + gamma + 2cos(phi) = {0} vanishes")]
    DictionarySingular(f64),
    #[error("couplings have no self-adjoint-extension counterpart")]
    NoInverse,
    #[error(transparent)]
    Extension(#[from] ExtensionError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawScheme", into = "RawScheme")]
pub enum Scheme {
    Cutoff(f64),
    Pds(f64),
    Ndr,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawScheme {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    scale: Option<f64>,
}

impl TryFrom<RawScheme> for Scheme {
    type Error = EftError;
    fn try_from(r: RawScheme) -> Result<Self, EftError> {
        let need = |s: Option<f64>| s.ok_or_else(|| EftError::InvalidScheme(format!("{} needs a scale", r.kind)));
        match r.kind.as_str() {
            "NDR" => Ok(Scheme::Ndr),
            "PDS" => Scheme::pds(need(r.scale)?),
            "Cutoff" => Scheme::cutoff(need(r.scale)?),
            other => Err(EftError::InvalidScheme(format!("unknown kind {other:?}"))),
        }
    }
}

impl From<Scheme> for RawScheme {
    fn from(s: Scheme) -> Self {
        let (kind, scale) = match s {
            Scheme::Cutoff(l) => ("Cutoff", Some(l)),
            Scheme::Pds(m) => ("PDS", Some(m)),
            Scheme::Ndr => ("NDR", None),
        };
        RawScheme {
            kind: kind.to_string(),
            scale,
        }
    }
}

impl Scheme {
    pub fn cutoff(lambda: f64) -> Result<Self, EftError> {
        if lambda > 0.0 && lambda.is_finite() {
            Ok(Scheme::Cutoff(lambda))
        } else {
            Err(EftError::InvalidScheme(format!("cutoff must be > 0, got {lambda}")))
        }
    }

    pub fn pds(mu: f64) -> Result<Self, EftError> {
        if mu >= 0.0 && mu.is_finite() {
            Ok(Scheme::Pds(mu))
        } else {
            Err(EftError::InvalidScheme(format!("PDS scale must be >= 0, got {mu}")))
        }
    }

    /// `δ(0) = I₂(k = 0)`: `Λ/π`, `μ`, or 0.
    pub fn delta_zero(&self) -> f64 {
        match *self {
            Scheme::Cutoff(l) => l / PI,
            Scheme::Pds(m) => m,
            Scheme::Ndr => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContactCouplings {
    pub c0: f64,
    pub c1: f64,
    pub c1_tilde: f64,
    pub c2p: f64,
    pub scheme: Scheme,
}

impl ContactCouplings {
    pub fn ndr(c0: f64, c1: f64, c1_tilde: f64, c2p: f64) -> Self {
        ContactCouplings {
            c0,
            c1,
            c1_tilde,
            c2p,
            scheme: Scheme::Ndr,
        }
    }

    /// `𝕔₁ = c₁ + i c̃₁`
    pub fn c1_complex(&self) -> Complex64 {
        Complex64::new(self.c1, self.c1_tilde)
    }

    pub fn c1_mod(&self) -> f64 {
        self.c1.hypot(self.c1_tilde)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RenormConditions {
    pub kappa0: f64,
    pub phi_rel: f64,
    pub a_theta: f64,
}

fn check_k(k: f64) -> Result<(), EftError> {
    if k > 0.0 && k.is_finite() {
        Ok(())
    } else {
        Err(EftError::InvalidMomentum(k))
    }
}

/// `I_{2n}(k)`. `I₀ = i/2k` in every scheme; `I₂ = ik/2 + δ(0)`;
/// NDR gives `I_{2n} = i k^{2n−1}/2`. Odd moments vanish identically.
pub fn regulated_moment(n: u32, k: f64, scheme: Scheme) -> Result<Complex64, EftError> {
    if !(k >= 0.0 && k.is_finite()) || (n == 0 && k == 0.0) {
        return Err(EftError::InvalidMomentum(k));
    }
    match (n, scheme) {
        (0, _) => Ok(Complex64::new(0.0, 0.5 / k)),
        (1, s) => Ok(Complex64::new(s.delta_zero(), 0.5 * k)),
        (n, Scheme::Ndr) => Ok(Complex64::new(0.0, 0.5 * k.powi(2 * n as i32 - 1))),
        (n, _) => Err(EftError::UnsupportedMoment(n)),
    }
}

fn partial_wave_t(m: Mat2) -> ScatterMatrix {
    ScatterMatrix::new(m, Basis::PartialWave, MatrixKind::T)
}

/// `diag(f₀, f₁)`, `f₀ = −ic₀/(−c₀ − ik)`, `f₁ = k/(1/c₂⁽ᵖ⁾ − 2δ(0) − ik)`.
/// `c₂⁽ᵖ⁾ = 0` is the decoupled limit `f₁ = 0`.
pub fn t_matrix_even(c0: f64, c2p: f64, scheme: Scheme, k: f64) -> Result<ScatterMatrix, EftError> {
    check_k(k)?;
    let i = Complex64::i();
    let f0 = -i * c0 / (-c0 - i * k);
    let f1 = if c2p == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        k / (1.0 / c2p - 2.0 * scheme.delta_zero() - i * k)
    };
    Ok(partial_wave_t(Mat2::diag(f0, f1)))
}

/// Cutoff running `c₂⁽ᵖ⁾(Λ) = (2Λ/π − 1/a₁)⁻¹`.
pub fn run_c2p(lambda: f64, a1: f64) -> Result<f64, EftError> {
    if lambda.is_nan() || lambda <= 0.0 {
        return Err(EftError::InvalidScheme(format!("cutoff must be > 0, got {lambda}")));
    }
    let den = 2.0 * lambda / PI - 1.0 / a1;
    if den.abs() < LANDAU_TOL {
        return Err(EftError::LandauPole);
    }
    Ok(1.0 / den)
}

/// Parity-odd sector (`c₀`, `𝕔₁`) in any scheme.
pub fn t_matrix_odd(c0: f64, c1: f64, c1_tilde: f64, scheme: Scheme, k: f64) -> Result<ScatterMatrix, EftError> {
    check_k(k)?;
    let i = Complex64::i();
    let cc = Complex64::new(c1, c1_tilde);
    let m2 = cc.norm_sqr();
    let x = c0 + 2.0 * m2 * regulated_moment(1, k, scheme)?;
    let pre = 1.0 / (k - i * x);
    Ok(partial_wave_t(
        Mat2::new(x, -i * k * cc, i * k * cc.conj(), Complex64::new(0.0, k * m2)).scale(pre),
    ))
}

fn odd_scale(scheme: Scheme) -> f64 {
    // cutoff renormalizes like PDS at μ = Λ/π
    scheme.delta_zero()
}

// 𝒜/(κ₀a_θ) with 𝒜 = 1 − √(1 − x²), evaluated without cancellation.
fn mixing_modulus(x: f64) -> f64 {
    x / (1.0 + (1.0 - x * x).sqrt())
}

fn check_perturbative(c: &RenormConditions) -> Result<f64, EftError> {
    let x = c.kappa0 * c.a_theta;
    if !x.is_finite() || x.abs() > 1.0 {
        return Err(EftError::NonPerturbative(x.abs()));
    }
    Ok(x)
}

/// Couplings reproducing the pole `κ₀`, relative phase `Φ` and mixing length `a_θ`.
pub fn renormalize_odd(c: &RenormConditions, scheme: Scheme) -> Result<ContactCouplings, EftError> {
    let x = check_perturbative(c)?;
    let mu = odd_scale(scheme);
    let m = mixing_modulus(x);
    let cc = Complex64::from_polar(m, -c.phi_rel);
    Ok(ContactCouplings {
        c0: c.kappa0 + (c.kappa0 - 2.0 * mu) * m * m,
        c1: cc.re,
        c1_tilde: cc.im,
        c2p: 0.0,
        scheme,
    })
}

/// Scheme-independent renormalized parity-odd T-matrix.
pub fn renormalized_t_odd(c: &RenormConditions, k: f64) -> Result<ScatterMatrix, EftError> {
    check_k(k)?;
    let x = check_perturbative(c)?;
    if c.kappa0 == 0.0 {
        return Ok(partial_wave_t(Mat2::zero()));
    }
    let i = Complex64::i();
    let a = x * mixing_modulus(x);
    let k0 = c.kappa0;
    let pre = 1.0 / (k / k0 - i);
    let e = Complex64::from_polar(1.0, c.phi_rel);
    let half = 0.5 * k * c.a_theta;
    Ok(partial_wave_t(
        Mat2::new(
            1.0 + i * k * a / (2.0 * k0),
            -i * e.conj() * half,
            i * e * half,
            i * k * a / (2.0 * k0),
        )
        .scale(pre),
    ))
}

/// Pole `κ` of the parity-odd sector, `(c₀ + 2δ(0)|𝕔₁|²)/(1 + |𝕔₁|²)`.
pub fn odd_pole(c: &ContactCouplings) -> f64 {
    let m2 = c.c1_complex().norm_sqr();
    (c.c0 + 2.0 * c.scheme.delta_zero() * m2) / (1.0 + m2)
}

/// `k cotΘ = (c₀ + 2δ(0)|𝕔₁|²)/(2|𝕔₁|)` of the parity-odd sector; `None` without mixing.
pub fn odd_k_cot_theta(c: &ContactCouplings) -> Option<f64> {
    let m = c.c1_mod();
    (m > 0.0).then(|| (c.c0 + 2.0 * c.scheme.delta_zero() * m * m) / (2.0 * m))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnomalyFlow {
    pub c1_mod: f64,
    pub k_cot_theta: f64,
    /// The `μ → ∞` matrix `diag(1/(k/κ₀ − i), 0)`.
    pub t_limit: ScatterMatrix,
    /// The parity-odd T-matrix at this `μ` with bare `c₀ = 0`, `Φ = 0`.
    pub t_at_scale: ScatterMatrix,
}

/// Bare `c₀ = 0`: `|𝕔₁(μ)| = √(κ₀/(2μ − κ₀))` and `k cotΘ = μ|𝕔₁|` depend on `μ`.
pub fn anomaly_flow(kappa0: f64, mu: f64, k: f64) -> Result<AnomalyFlow, EftError> {
    check_k(k)?;
    if !(kappa0 > 0.0 && 2.0 * mu > kappa0 && mu.is_finite()) {
        return Err(EftError::InvalidScale { kappa0, mu });
    }
    let c1_mod = (kappa0 / (2.0 * mu - kappa0)).sqrt();
    let i = Complex64::i();
    let t_limit = partial_wave_t(Mat2::diag(1.0 / (k / kappa0 - i), Complex64::new(0.0, 0.0)));
    Ok(AnomalyFlow {
        c1_mod,
        k_cot_theta: mu * c1_mod,
        t_limit,
        t_at_scale: t_matrix_odd(0.0, c1_mod, 0.0, Scheme::pds(mu)?, k)?,
    })
}

/// Four-coupling T-matrix; NDR only.
pub fn t_matrix_full(c: &ContactCouplings, k: f64) -> Result<ScatterMatrix, EftError> {
    if c.scheme != Scheme::Ndr {
        return Err(EftError::RequiresNdr);
    }
    check_k(k)?;
    let i = Complex64::i();
    let cc = c.c1_complex();
    let m2 = cc.norm_sqr();
    let a = 1.0 - i * k * c.c2p;
    let b = k - i * c.c0;
    let den = a * b + k * m2;
    let t00 = (a * c.c0 + i * k * m2) / den;
    let t01 = -i * k * cc / den;
    let t10 = i * k * cc.conj() / den;
    let t11 = (k * c.c2p * b + i * k * m2) / den;
    Ok(partial_wave_t(Mat2::new(t00, t01, t10, t11)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FullObservables {
    /// `−arg 𝕔₁`
    pub phi_rel: f64,
    /// `k cotΘ = intercept + slope·k²`
    pub k_cot_theta_coeffs: (f64, f64),
    /// One pole when `c₂⁽ᵖ⁾ = 0`, else `(κ₊, κ₋)`.
    pub poles: Vec<f64>,
}

pub fn full_pole_kappas(c: &ContactCouplings) -> Result<Vec<f64>, EftError> {
    let m2 = c.c1_complex().norm_sqr();
    if c.c2p == 0.0 {
        return Ok(vec![c.c0 / (1.0 + m2)]);
    }
    let kk = 1.0 + m2 - c.c2p * c.c0;
    let disc = kk * kk + 4.0 * c.c2p * c.c0;
    if disc < 0.0 {
        return Err(EftError::ComplexPoles);
    }
    let s = disc.sqrt();
    Ok(vec![(-kk + s) / (2.0 * c.c2p), (-kk - s) / (2.0 * c.c2p)])
}

pub fn full_observables(c: &ContactCouplings) -> Result<FullObservables, EftError> {
    if c.scheme != Scheme::Ndr {
        return Err(EftError::RequiresNdr);
    }
    let m = c.c1_mod();
    if m == 0.0 {
        return Err(EftError::DegenerateMixing);
    }
    Ok(FullObservables {
        phi_rel: -c.c1_tilde.atan2(c.c1) + 0.0,
        k_cot_theta_coeffs: (c.c0 / (2.0 * m), -c.c2p / (2.0 * m)),
        poles: full_pole_kappas(c)?,
    })
}

/// NDR couplings with `D = α + γ + 2cosφ`: `c₀ = −2β/D`, `c₂⁽ᵖ⁾ = 2δ/D`,
/// `c₁ = (α−γ)/D`, `c̃₁ = 2sinφ/D`.
pub fn sae_to_couplings(p: &ExtensionParams) -> Result<ContactCouplings, EftError> {
    let d = p.alpha() + p.gamma() + 2.0 * p.phi().cos();
    if d.abs() < DICT_TOL {
        return Err(EftError::DictionarySingular(d));
    }
    Ok(ContactCouplings::ndr(
        -2.0 * p.beta() / d,
        (p.alpha() - p.gamma()) / d,
        2.0 * p.phi().sin() / d,
        2.0 * p.delta() / d,
    ))
}

/// Inverse of [`sae_to_couplings`].
///
/// With `K = 1 − |𝕔₁|² + c₀c₂⁽ᵖ⁾` the determinant constraint fixes
/// `D = 4 sgn(K)/√(K² + 4c̃₁²)` (and `D = 2/c̃₁`, `φ = π/2` when `K = 0`).
/// There is no inverse when `K = 0` and `c̃₁ = 0`.
pub fn couplings_to_sae(c: &ContactCouplings) -> Result<ExtensionParams, EftError> {
    if c.scheme != Scheme::Ndr {
        return Err(EftError::RequiresNdr);
    }
    let kk = 1.0 - c.c1_complex().norm_sqr() + c.c0 * c.c2p;
    let d = if kk == 0.0 {
        if c.c1_tilde == 0.0 {
            return Err(EftError::NoInverse);
        }
        2.0 / c.c1_tilde
    } else {
        4.0 * kk.signum() / (kk * kk + 4.0 * c.c1_tilde * c.c1_tilde).sqrt()
    };
    if !d.is_finite() {
        return Err(EftError::NoInverse);
    }
    let sin_phi = (0.5 * c.c1_tilde * d).clamp(-1.0, 1.0);
    let cos_phi = (1.0 - sin_phi * sin_phi).max(0.0).sqrt();
    let sum = d - 2.0 * cos_phi;
    let diff = c.c1 * d;
    let params = ExtensionParams::new(
        0.5 * (sum + diff),
        -0.5 * c.c0 * d,
        0.5 * (sum - diff),
        0.5 * c.c2p * d,
        sin_phi.atan2(cos_phi),
    );
    params.map_err(|e| match e {
        ExtensionError::ConstraintViolation { .. } => EftError::NoInverse,
        other => other.into(),
    })
}
