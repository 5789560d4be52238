//! Two particles in a harmonic trap with a point interaction at contact.
//!
//! Every spectrum condition reduces to `g(x) = t` with `x = E/2ω` and
//! `g(x) = Γ(¾ − x)/Γ(¼ − x)`; `g` decreases from `+∞` to `−∞` between its
//! poles at `x = ¾ + n`, so each branch holds exactly one root. `t = ∞`
//! selects the poles themselves.
//!
//! 3D (s-wave): `t = (1/a)/(2√(mω))`. 1D: one family per S-matrix pole,
//! `t = κ/(2√(mω))`; with `δ = 0` the second family is `t = ∞`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::extension::ExtensionParams;
use crate::numerics::{self, NumericsError};
use crate::scattering;
use num_complex::Complex64;

const ENDPOINT_NUDGE: f64 = 1e-12;
const SCAN_POINTS: usize = 64;
const DEDUP_TOL: f64 = 1e-8;
const EIGEN_TOL: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TrapError {
    #[error("mass and trap frequency must be positive (m = {m}, omega = {omega})")]
    InvalidTrap { m: f64, omega: f64 },
    #[error("scattering length must be nonzero")]
    ZeroScatteringLength,
    #[error("level count must be at least 1")]
    InvalidCount,
    #[error("no sign change on branch [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },
    #[error("root search failed: {0}")]
    ConvergenceFailure(#[from] NumericsError),
    #[error("E/omega = {e_over_omega} is not an eigenvalue (residual {residual})")]
    NotAnEigenvalue { e_over_omega: f64, residual: f64 },
}

/// The interaction at contact.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Interaction {
    /// Stored as `1/a`; zero is the unitary limit.
    ScatteringLength3D { inv_a: f64 },
    Extension1D(ExtensionParams),
    /// Half-line `ψ'(0) = β ψ(0)`, equivalent to `1/a = −β`.
    Robin { beta: f64 },
}

impl Interaction {
    pub fn scattering_length(a: f64) -> Result<Self, TrapError> {
        if a == 0.0 {
            return Err(TrapError::ZeroScatteringLength);
        }
        Ok(Interaction::ScatteringLength3D { inv_a: 1.0 / a })
    }

    pub fn unitary() -> Self {
        Interaction::ScatteringLength3D { inv_a: 0.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrapProblem {
    pub m: f64,
    pub omega: f64,
    pub interaction: Interaction,
}

impl TrapProblem {
    pub fn new(m: f64, omega: f64, interaction: Interaction) -> Result<Self, TrapError> {
        check_trap(m, omega)?;
        Ok(TrapProblem { m, omega, interaction })
    }

    pub fn solve(&self, count: usize) -> Result<SpectrumResult, TrapError> {
        match self.interaction {
            Interaction::ScatteringLength3D { inv_a } => busch_levels_3d(inv_a, self.m, self.omega, count),
            Interaction::Robin { beta } => busch_levels_3d(-beta, self.m, self.omega, count),
            Interaction::Extension1D(p) => trap_levels_1d(&p, self.m, self.omega, count),
        }
    }
}

/// One level; brackets are in units of ω like the energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Level {
    pub index: usize,
    pub e_over_omega: f64,
    pub bracket_lo: f64,
    pub bracket_hi: f64,
    /// `|atan g(x) − atan t|` modulo π at the root.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumResult {
    pub levels: Vec<Level>,
}

impl SpectrumResult {
    pub fn energies(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.e_over_omega).collect()
    }

    pub fn brackets(&self) -> Vec<(f64, f64)> {
        self.levels.iter().map(|l| (l.bracket_lo, l.bracket_hi)).collect()
    }

    pub fn residuals(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.residual).collect()
    }
}

/// `β = −1/a`; an infinite `a` (unitary limit) gives 0.
pub fn robin_parameter(a: f64) -> Result<f64, TrapError> {
    if a == 0.0 {
        return Err(TrapError::ZeroScatteringLength);
    }
    if a.is_infinite() {
        return Ok(0.0);
    }
    Ok(-1.0 / a)
}

fn check_trap(m: f64, omega: f64) -> Result<(), TrapError> {
    if m > 0.0 && omega > 0.0 && m.is_finite() && omega.is_finite() {
        Ok(())
    } else {
        Err(TrapError::InvalidTrap { m, omega })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Target {
    Finite(f64),
    Infinite,
}

// Distance between atan g(x) and atan t on the circle of period π.
fn angular_residual(x: f64, target: Target) -> f64 {
    let ga = match numerics::gamma_ratio(x) {
        Ok(g) => g.atan(),
        Err(_) => std::f64::consts::FRAC_PI_2,
    };
    let ta = match target {
        Target::Finite(t) => t.atan(),
        Target::Infinite => std::f64::consts::FRAC_PI_2,
    };
    let d = (ga - ta).rem_euclid(std::f64::consts::PI);
    d.min(std::f64::consts::PI - d)
}

fn branch_root(target: f64, lo: f64, hi: f64) -> Result<(f64, f64, f64), TrapError> {
    let ta = target.atan();
    let f = |x: f64| match numerics::gamma_ratio(x) {
        Ok(g) => g.atan() - ta,
        Err(_) => f64::NAN,
    };
    let tol = 4.0 * f64::EPSILON * lo.abs().max(hi.abs()).max(1.0);
    let a = lo + ENDPOINT_NUDGE * lo.abs().max(1.0);
    let b = hi - ENDPOINT_NUDGE * hi.abs().max(1.0);
    let (fa, fb) = (f(a), f(b));
    if fa.is_finite() && fb.is_finite() && fa.signum() != fb.signum() {
        return Ok((numerics::bracketed_root(f, a, b, tol)?, lo, hi));
    }
    // monotonicity guard: look for any sign change on a uniform grid
    let step = (b - a) / SCAN_POINTS as f64;
    let mut prev = (a, fa);
    for i in 1..=SCAN_POINTS {
        let x = if i == SCAN_POINTS { b } else { a + step * i as f64 };
        let fx = f(x);
        if prev.1.is_finite() && fx.is_finite() && prev.1.signum() != fx.signum() {
            return Ok((numerics::bracketed_root(f, prev.0, x, tol)?, prev.0, x));
        }
        prev = (x, fx);
    }
    Err(TrapError::NoBracket { lo, hi })
}

// First `count` roots of g(x) = t, as levels in units of ω.
fn solve_family(target: Target, count: usize) -> Result<Vec<Level>, TrapError> {
    let exact = |x0: f64| -> Vec<Level> {
        (0..count)
            .map(|n| {
                let e = 2.0 * (x0 + n as f64);
                Level {
                    index: n,
                    e_over_omega: e,
                    bracket_lo: e,
                    bracket_hi: e,
                    residual: 0.0,
                }
            })
            .collect()
    };
    let t = match target {
        Target::Infinite => return Ok(exact(0.75)),
        Target::Finite(0.0) => return Ok(exact(0.25)),
        Target::Finite(t) => t,
    };
    let x_min = -(50.0f64).max(4.0 * t * t);
    (0..count)
        .map(|n| {
            let lo = if n == 0 { x_min } else { n as f64 - 0.25 };
            let hi = n as f64 + 0.75;
            let (x, blo, bhi) = branch_root(t, lo, hi)?;
            Ok(Level {
                index: n,
                e_over_omega: 2.0 * x,
                bracket_lo: 2.0 * blo,
                bracket_hi: 2.0 * bhi,
                residual: angular_residual(x, target),
            })
        })
        .collect()
}

/// Levels of `−1/a = −2√(mω) Γ(¾ − E/2ω)/Γ(¼ − E/2ω)`, given `1/a`.
pub fn busch_levels_3d(inv_a: f64, m: f64, omega: f64, count: usize) -> Result<SpectrumResult, TrapError> {
    check_trap(m, omega)?;
    if count == 0 {
        return Err(TrapError::InvalidCount);
    }
    let target = if inv_a.is_infinite() {
        Target::Infinite
    } else {
        Target::Finite(inv_a / (2.0 * (m * omega).sqrt()))
    };
    Ok(SpectrumResult {
        levels: solve_family(target, count)?,
    })
}

// Roots G of δG² + (α+γ)G + β = 0, with G = ∞ standing in for δ = 0.
fn families_1d(p: &ExtensionParams, s: f64) -> Vec<Target> {
    let poles = scattering::smatrix_poles(p);
    match poles.as_slice() {
        [a, b] => vec![Target::Finite(a.kappa / (2.0 * s)), Target::Finite(b.kappa / (2.0 * s))],
        [a] => vec![Target::Finite(a.kappa / (2.0 * s)), Target::Infinite],
        _ => vec![Target::Finite(0.0), Target::Infinite],
    }
}

/// Levels of the 1D condition
/// `α + γ = −(β/2√(mω)) Γ(¼−x)/Γ(¾−x) − 2√(mω) δ Γ(¾−x)/Γ(¼−x)`.
/// Independent of `φ`.
pub fn trap_levels_1d(p: &ExtensionParams, m: f64, omega: f64, count: usize) -> Result<SpectrumResult, TrapError> {
    check_trap(m, omega)?;
    if count == 0 {
        return Err(TrapError::InvalidCount);
    }
    let s = (m * omega).sqrt();
    let mut all = Vec::new();
    for fam in families_1d(p, s) {
        all.extend(solve_family(fam, count)?);
    }
    all.sort_by(|a, b| a.e_over_omega.total_cmp(&b.e_over_omega));
    all.dedup_by(|b, a| (b.e_over_omega - a.e_over_omega).abs() <= DEDUP_TOL);
    all.truncate(count);
    for (i, l) in all.iter_mut().enumerate() {
        l.index = i;
    }
    Ok(SpectrumResult { levels: all })
}

/// `α + γ + (β/2√(mω))/g + 2√(mω) δ g`; zero on the spectrum.
pub fn spectrum_condition_1d(p: &ExtensionParams, e_over_omega: f64, m: f64, omega: f64) -> Result<f64, TrapError> {
    check_trap(m, omega)?;
    let s = (m * omega).sqrt();
    let g = numerics::gamma_ratio(0.5 * e_over_omega)?;
    Ok(p.alpha() + p.gamma() + p.beta() / (2.0 * s * g) + 2.0 * s * p.delta() * g)
}

/// Right-hand side `−2√(mω) Γ(¾ − E/2ω)/Γ(¼ − E/2ω)` of the 3D condition.
pub fn busch_rhs(e_over_omega: f64, m: f64, omega: f64) -> Result<f64, TrapError> {
    check_trap(m, omega)?;
    Ok(-2.0 * (m * omega).sqrt() * numerics::gamma_ratio(0.5 * e_over_omega)?)
}

/// Smallest angular residual of `E` against the 1D families.
pub fn residual_1d(p: &ExtensionParams, e_over_omega: f64, m: f64, omega: f64) -> Result<f64, TrapError> {
    check_trap(m, omega)?;
    let s = (m * omega).sqrt();
    Ok(families_1d(p, s)
        .into_iter()
        .map(|t| angular_residual(0.5 * e_over_omega, t))
        .fold(f64::INFINITY, f64::min))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AmplitudeRatio {
    /// `N₊/N₋`, right over left.
    pub ratio: Complex64,
    /// `U(−E/ω, 0) = 0`: computed from the derivative joining condition.
    pub u_zero: bool,
}

/// `N₊/N₋ = e^{iφ}(γ + 2√(mω) δ g)`, using `U'(a,0)/U(a,0) = −√2 g`.
/// At zeros of `U` the equivalent `e^{iφ}(−α − β/(2√(mω) g))` is used.
pub fn trap_amplitude_ratio(p: &ExtensionParams, e_over_omega: f64, m: f64, omega: f64) -> Result<AmplitudeRatio, TrapError> {
    let residual = residual_1d(p, e_over_omega, m, omega)?;
    if residual > EIGEN_TOL {
        return Err(TrapError::NotAnEigenvalue { e_over_omega, residual });
    }
    let s = (m * omega).sqrt();
    let phase = Complex64::from_polar(1.0, p.phi());
    match numerics::gamma_ratio(0.5 * e_over_omega) {
        Ok(g) => Ok(AmplitudeRatio {
            ratio: phase * (p.gamma() + 2.0 * s * p.delta() * g),
            u_zero: false,
        }),
        Err(NumericsError::Infinite(_)) => Ok(AmplitudeRatio {
            ratio: phase * (-p.alpha()),
            u_zero: true,
        }),
        Err(e) => Err(e.into()),
    }
}
