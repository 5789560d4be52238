//! Scattering observables of the general point interaction.
//!
//! Amplitudes accept complex momentum through the `*_at` functions so that
//! pole approaches can be probed; the real-`k` API wraps them.
//!
//! Eigenchannel labeling: `f₊` is the channel that reduces to the s-wave in
//! the parity-even limit. With `B⃗` real, the root `r` of `r² = B⃗·B⃗` is taken
//! with the sign of `B₃` (and `r = −|B⃗|` when `B₃ = 0`). The unit vector
//! `n̂ = B⃗/r = (sinΦ sinΘ, −cosΦ sinΘ, cosΘ)` then fixes `Θ ∈ (−π/2, π/2]`
//! with `k cotΘ = −(β + k²δ)/√((α−γ)² + 4sin²φ)` and `Φ ∈ (−π, π]`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::extension::ExtensionParams;
use crate::mat2::Mat2;

const ZERO_DEN: f64 = 1e-300;
const OFFDIAG_TOL: f64 = 1e-14;
const MAX_TV_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScatteringError {
    #[error("momentum must be positive and finite, got {0}")]
    InvalidMomentum(f64),
    #[error("amplitude denominator vanishes at k = {0}")]
    ZeroDenominator(Complex64),
    #[error("interaction is not parity even")]
    NotParityEven,
    #[error("phi = {0} is not pi/2")]
    NotMaximalTv(f64),
    #[error("no bound state (no pole with kappa > 0)")]
    NoBoundState,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Basis {
    Traveling,
    PartialWave,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MatrixKind {
    S,
    T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Direction {
    Right,
    Left,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterMatrix {
    pub entries: Mat2,
    pub basis: Basis,
    pub kind: MatrixKind,
}

fn basis_change() -> Mat2 {
    Mat2::from_real([[FRAC_1_SQRT_2, FRAC_1_SQRT_2], [FRAC_1_SQRT_2, -FRAC_1_SQRT_2]])
}

impl ScatterMatrix {
    pub fn new(entries: Mat2, basis: Basis, kind: MatrixKind) -> Self {
        ScatterMatrix { entries, basis, kind }
    }

    /// `S = 1 + 2iT`.
    pub fn to_s(&self) -> Self {
        match self.kind {
            MatrixKind::S => *self,
            MatrixKind::T => ScatterMatrix {
                entries: Mat2::identity() + self.entries.scale(Complex64::new(0.0, 2.0)),
                kind: MatrixKind::S,
                ..*self
            },
        }
    }

    /// `T = (S − 1)/2i`.
    pub fn to_t(&self) -> Self {
        match self.kind {
            MatrixKind::T => *self,
            MatrixKind::S => ScatterMatrix {
                entries: (self.entries - Mat2::identity()).scale(Complex64::new(0.0, -0.5)),
                kind: MatrixKind::T,
                ..*self
            },
        }
    }

    /// Conjugation by `U = [[1,1],[1,−1]]/√2`; `U = U† = U⁻¹`.
    pub fn to_basis(&self, basis: Basis) -> Self {
        if basis == self.basis {
            return *self;
        }
        let u = basis_change();
        ScatterMatrix {
            entries: u * self.entries * u,
            basis,
            kind: self.kind,
        }
    }

    pub fn unitarity_defect(&self) -> f64 {
        self.to_s().entries.unitarity_defect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TravelingAmplitudes {
    pub r_plus: Complex64,
    pub r_minus: Complex64,
    pub t_plus: Complex64,
    pub t_minus: Complex64,
    pub k: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PoleKind {
    Bound,
    Antibound,
    Threshold,
}

/// S-matrix pole at `k = iκ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Pole {
    pub kappa: f64,
    pub kind: PoleKind,
}

impl Pole {
    fn new(kappa: f64) -> Self {
        let kind = if kappa > 0.0 {
            PoleKind::Bound
        } else if kappa < 0.0 {
            PoleKind::Antibound
        } else {
            PoleKind::Threshold
        };
        Pole { kappa, kind }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScatteringObservables {
    pub k: f64,
    pub delta_plus: f64,
    pub delta_minus: f64,
    pub f_plus: Complex64,
    pub f_minus: Complex64,
    pub theta: f64,
    pub phi_rel: f64,
    /// `None` when the mixing vanishes identically (α = γ, φ = 0).
    pub k_cot_theta: Option<f64>,
    /// Set when α = γ and φ = 0; `phi_rel` is then reported as 0.
    pub phase_undefined: bool,
    pub poles: Vec<Pole>,
}

impl ScatteringObservables {
    /// The equivalent representative `(−Θ, Φ ± π)`; [`t_from_angles`] is unchanged.
    pub fn flipped(&self) -> Self {
        let phi = if self.phi_rel > 0.0 {
            self.phi_rel - PI
        } else {
            self.phi_rel + PI
        };
        ScatteringObservables {
            theta: -self.theta,
            phi_rel: phi,
            k_cot_theta: self.k_cot_theta.map(|x| -x),
            ..self.clone()
        }
    }
}

fn check_k(k: f64) -> Result<(), ScatteringError> {
    if k > 0.0 && k.is_finite() {
        Ok(())
    } else {
        Err(ScatteringError::InvalidMomentum(k))
    }
}

/// `𝒟 = k²δ + ik(α+γ) − β`.
pub fn denominator_at(p: &ExtensionParams, k: Complex64) -> Complex64 {
    k * k * p.delta() + Complex64::i() * k * (p.alpha() + p.gamma()) - p.beta()
}

/// `B⃗ = (−2k sinφ, −k(α−γ), β + k²δ)`.
pub fn b_vector_at(p: &ExtensionParams, k: Complex64) -> [Complex64; 3] {
    [
        -2.0 * k * p.phi().sin(),
        -k * (p.alpha() - p.gamma()),
        p.beta() + k * k * p.delta(),
    ]
}

/// Root of `r² = B⃗·B⃗` on the branch connected to the parity-even limit.
fn b_root(b: &[Complex64; 3]) -> Complex64 {
    let r0 = (b[0] * b[0] + b[1] * b[1] + b[2] * b[2]).sqrt();
    let proj = (r0 * b[2].conj()).re;
    if proj > 0.0 {
        r0
    } else {
        -r0
    }
}

/// `(R⁺, R⁻, T⁺, T⁻)` at complex momentum.
pub fn amplitudes_at(
    p: &ExtensionParams,
    k: Complex64,
) -> Result<[Complex64; 4], ScatteringError> {
    let den = denominator_at(p, k);
    if den.norm() < ZERO_DEN {
        return Err(ScatteringError::ZeroDenominator(k));
    }
    let i = Complex64::i();
    let common = k * k * p.delta() + p.beta();
    let odd = i * k * (p.alpha() - p.gamma());
    let t = 2.0 * i * k / den;
    let e = Complex64::from_polar(1.0, p.phi());
    Ok([(common + odd) / den, (common - odd) / den, t * e, t * e.conj()])
}

pub fn reflection_transmission(p: &ExtensionParams, k: f64) -> Result<TravelingAmplitudes, ScatteringError> {
    check_k(k)?;
    let [r_plus, r_minus, t_plus, t_minus] = amplitudes_at(p, k.into())?;
    Ok(TravelingAmplitudes {
        r_plus,
        r_minus,
        t_plus,
        t_minus,
        k,
    })
}

/// S-matrix eigenvalues `(e^{2iδ₊}, e^{2iδ₋}) = (2ik cosφ ± r)/𝒟`.
pub fn eigenvalues_at(p: &ExtensionParams, k: Complex64) -> Result<(Complex64, Complex64), ScatteringError> {
    let den = denominator_at(p, k);
    if den.norm() < ZERO_DEN {
        return Err(ScatteringError::ZeroDenominator(k));
    }
    let r = b_root(&b_vector_at(p, k));
    let a = 2.0 * Complex64::i() * k * p.phi().cos();
    Ok(((a + r) / den, (a - r) / den))
}

/// Eigenchannel amplitudes `f± = (e^{2iδ±} − 1)/2i`.
pub fn eigen_amplitudes_at(p: &ExtensionParams, k: Complex64) -> Result<(Complex64, Complex64), ScatteringError> {
    let (ep, em) = eigenvalues_at(p, k)?;
    let h = Complex64::new(0.0, -0.5);
    Ok(((ep - 1.0) * h, (em - 1.0) * h))
}

pub fn smatrix_poles(p: &ExtensionParams) -> Vec<Pole> {
    let (a, b, g, d) = (p.alpha(), p.beta(), p.gamma(), p.delta());
    if d != 0.0 {
        let disc = ((a - g) * (a - g) + 4.0).sqrt();
        vec![
            Pole::new((-(a + g) + disc) / (2.0 * d)),
            Pole::new((-(a + g) - disc) / (2.0 * d)),
        ]
    } else if b != 0.0 {
        vec![Pole::new(-b / (a + g))]
    } else {
        Vec::new()
    }
}

pub fn s_matrix(p: &ExtensionParams, k: f64, basis: Basis) -> Result<ScatterMatrix, ScatteringError> {
    let amp = reflection_transmission(p, k)?;
    let trav = ScatterMatrix::new(
        Mat2::new(amp.t_plus, amp.r_minus, amp.r_plus, amp.t_minus),
        Basis::Traveling,
        MatrixKind::S,
    );
    Ok(trav.to_basis(basis))
}

/// Partial-wave T-matrix `(𝕊 − 1)/2i`.
pub fn t_matrix(p: &ExtensionParams, k: f64) -> Result<ScatterMatrix, ScatteringError> {
    Ok(s_matrix(p, k, Basis::PartialWave)?.to_t())
}

/// `[[f̄+Δf cosΘ, iΔf e^{−iΦ} sinΘ], [−iΔf e^{iΦ} sinΘ, f̄−Δf cosΘ]]`.
pub fn t_from_angles(f_plus: Complex64, f_minus: Complex64, theta: f64, phi_rel: f64) -> Mat2 {
    let mean = (f_plus + f_minus) * 0.5;
    let diff = (f_plus - f_minus) * 0.5;
    let (s, c) = theta.sin_cos();
    let i = Complex64::i();
    Mat2::new(
        mean + diff * c,
        i * diff * Complex64::from_polar(1.0, -phi_rel) * s,
        -i * diff * Complex64::from_polar(1.0, phi_rel) * s,
        mean - diff * c,
    )
}

// Θ and Φ from a real vector parallel to B⃗ (any positive multiple).
fn angles_from_b(b: [f64; 3]) -> (f64, f64) {
    let sign = if b[2] > 0.0 { 1.0 } else { -1.0 };
    let rho = b[0].hypot(b[1]);
    let theta = (-sign * rho).atan2(b[2].abs()) + 0.0;
    (theta, wrap_phase((-b[0]).atan2(b[1])))
}

// Into (−π, π], with −0 mapped to 0.
fn wrap_phase(x: f64) -> f64 {
    if x <= -PI {
        x + 2.0 * PI
    } else if x > PI {
        x - 2.0 * PI
    } else {
        x + 0.0
    }
}

fn half_arg(e: Complex64) -> f64 {
    0.5 * e.arg()
}

pub fn eigen_observables(p: &ExtensionParams, k: f64) -> Result<ScatteringObservables, ScatteringError> {
    check_k(k)?;
    let kc = Complex64::from(k);
    let (ep, em) = eigenvalues_at(p, kc)?;
    let (f_plus, f_minus) = eigen_amplitudes_at(p, kc)?;
    let mixing = ((p.alpha() - p.gamma()).powi(2) + 4.0 * p.phi().sin().powi(2)).sqrt();
    let phase_undefined = p.classify().parity_even;
    let b = b_vector_at(p, kc).map(|x| x.re);
    let (theta, phi_rel) = if phase_undefined {
        (0.0, 0.0)
    } else {
        angles_from_b(b)
    };
    let k_cot_theta = (mixing > 0.0 && !phase_undefined).then(|| -b[2] / mixing);
    Ok(ScatteringObservables {
        k,
        delta_plus: half_arg(ep),
        delta_minus: half_arg(em),
        f_plus,
        f_minus,
        theta,
        phi_rel,
        k_cot_theta,
        phase_undefined,
        poles: smatrix_poles(p),
    })
}

/// Mixing parameters recovered from a T-matrix alone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MixingFromT {
    pub theta: f64,
    pub phi_rel: f64,
    pub f_plus: Complex64,
    pub f_minus: Complex64,
    /// `−𝕋₁₀/𝕋₀₁`; `None` when the off-diagonal entries vanish.
    pub e2i_phi: Option<Complex64>,
    /// `4𝕋₀₁𝕋₁₀/(𝕋₀₀ − 𝕋₁₁)²`
    pub tan2_theta: Option<Complex64>,
    /// Off-diagonals below 1e−14: Θ = 0 and Φ is reported as 0.
    pub degenerate_mixing: bool,
}

/// Inverts [`t_from_angles`]. Uses `𝕊 − T̄ ∝ B⃗·Σ⃗` to fix the sign of `B⃗`
/// when `cosφ > 0`; at `cosφ = 0` the label falls back to `n̂₃ ≥ 0, Θ ≤ 0`.
pub fn observables_from_t(t: &ScatterMatrix) -> Result<MixingFromT, ScatteringError> {
    let tm = t.to_t().to_basis(Basis::PartialWave).entries;
    let (t00, t01, t10, t11) = (tm.get(0, 0), tm.get(0, 1), tm.get(1, 0), tm.get(1, 1));
    if t01.norm() < OFFDIAG_TOL && t10.norm() < OFFDIAG_TOL {
        return Ok(MixingFromT {
            theta: 0.0,
            phi_rel: 0.0,
            f_plus: t00,
            f_minus: t11,
            e2i_phi: None,
            tan2_theta: None,
            degenerate_mixing: true,
        });
    }
    let e2i_phi = Some(-t10 / t01);
    let dd = t00 - t11;
    let tan2_theta = (dd.norm() > 0.0).then(|| 4.0 * t01 * t10 / (dd * dd));
    let i = Complex64::i();
    let s = Mat2::identity() + tm.scale(2.0 * i);
    let s_mean = (s.get(0, 0) + s.get(1, 1)) * 0.5;
    let h = Complex64::new(0.0, -0.5);

    if s_mean.norm() > 1e-12 {
        // b⃗·Σ⃗ = 2i(𝕊 − T̄)/T̄ with b⃗ = B⃗/(k cosφ)
        let m = (s - Mat2::identity().scale(s_mean)).scale(2.0 * i / s_mean);
        let b = [
            ((m.get(0, 1) + m.get(1, 0)) * 0.5).re,
            ((m.get(1, 0) - m.get(0, 1)) * Complex64::new(0.0, -0.5)).re,
            m.get(0, 0).re,
        ];
        let (theta, phi_rel) = angles_from_b(b);
        let norm = (b[0] * b[0] + b[1] * b[1] + b[2] * b[2]).sqrt();
        let r = if b[2] > 0.0 { norm } else { -norm };
        let ep = s_mean * (1.0 + r * h);
        let em = s_mean * (1.0 - r * h);
        return Ok(MixingFromT {
            theta,
            phi_rel,
            f_plus: (ep - 1.0) * h,
            f_minus: (em - 1.0) * h,
            e2i_phi,
            tan2_theta,
            degenerate_mixing: false,
        });
    }

    // Traceless 𝕊: eigenvalues ±q, n̂ = (𝕊 entries)/q.
    let mut q = (s.get(0, 0) * s.get(0, 0) + s.get(0, 1) * s.get(1, 0)).sqrt();
    if (s.get(0, 0) / q).re < 0.0 {
        q = -q;
    }
    let n1 = ((s.get(0, 1) + s.get(1, 0)) * 0.5 / q).re;
    let n2 = ((s.get(1, 0) - s.get(0, 1)) * Complex64::new(0.0, -0.5) / q).re;
    let n3 = (s.get(0, 0) / q).re;
    let theta = (-(n1.hypot(n2))).atan2(n3);
    Ok(MixingFromT {
        theta,
        phi_rel: wrap_phase((-n1).atan2(n2)),
        f_plus: (q - 1.0) * h,
        f_minus: (-q - 1.0) * h,
        e2i_phi,
        tan2_theta,
        degenerate_mixing: false,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PartialAmplitudes {
    pub f0: Complex64,
    pub f1: Complex64,
}

/// `f₀ = (T + R − 1)/2i`, `f₁ = (T − R − 1)/2i` for the incoming direction.
pub fn partial_amplitudes(
    p: &ExtensionParams,
    k: f64,
    direction: Direction,
) -> Result<PartialAmplitudes, ScatteringError> {
    let a = reflection_transmission(p, k)?;
    let (r, t) = match direction {
        Direction::Right => (a.r_plus, a.t_plus),
        Direction::Left => (a.r_minus, a.t_minus),
    };
    let h = Complex64::new(0.0, -0.5);
    Ok(PartialAmplitudes {
        f0: (t + r - 1.0) * h,
        f1: (t - r - 1.0) * h,
    })
}

/// Scattering lengths and poles of a parity-even interaction.
///
/// `a₀ = 1/κ₊`, `a₁ = 1/κ₋`; an infinite `κ` (absent pole when `δ = 0`) gives
/// a vanishing length and `κ = 0` gives an infinite one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParityEvenSummary {
    pub a0: f64,
    pub a1: f64,
    pub kappa_plus: f64,
    pub kappa_minus: f64,
    /// α = ±1: one scattering length is infinite or one pole is absent.
    pub alpha_pole: bool,
}

pub fn parity_even_summary(p: &ExtensionParams) -> Result<ParityEvenSummary, ScatteringError> {
    if !p.classify().parity_even {
        return Err(ScatteringError::NotParityEven);
    }
    let (a, d) = (p.alpha(), p.delta());
    let (kappa_plus, kappa_minus) = if d != 0.0 {
        ((1.0 - a) / d, -(1.0 + a) / d)
    } else {
        // α = γ and αγ = 1 force α = ±1; the single pole sits in the α = 1 → s, α = −1 → p channel
        let k0 = -p.beta() / (2.0 * a);
        if a > 0.0 {
            (k0, f64::INFINITY)
        } else {
            (f64::INFINITY, k0)
        }
    };
    let inv = |k: f64| if k == 0.0 { f64::INFINITY } else { 1.0 / k };
    Ok(ParityEvenSummary {
        a0: inv(kappa_plus),
        a1: inv(kappa_minus),
        kappa_plus,
        kappa_minus,
        alpha_pole: (a.abs() - 1.0).abs() <= 1e-12,
    })
}

/// `±√[(k+iκ₊)(k+iκ₋)/((k−iκ₊)(k−iκ₋))]`, i.e. `±√(𝒟(−k)/𝒟(k))`.
pub fn maximal_tv_eigenvalues(p: &ExtensionParams, k: f64) -> Result<(Complex64, Complex64), ScatteringError> {
    if (p.phi() - FRAC_PI_2).abs() > MAX_TV_TOL {
        return Err(ScatteringError::NotMaximalTv(p.phi()));
    }
    check_k(k)?;
    let kc = Complex64::from(k);
    let den = denominator_at(p, kc);
    if den.norm() < ZERO_DEN {
        return Err(ScatteringError::ZeroDenominator(kc));
    }
    let i = Complex64::i();
    let ratio = match smatrix_poles(p).as_slice() {
        [kp, km] => {
            (kc + i * kp.kappa) * (kc + i * km.kappa) / ((kc - i * kp.kappa) * (kc - i * km.kappa))
        }
        [k0] => -(kc + i * k0.kappa) / (kc - i * k0.kappa),
        _ => denominator_at(p, -kc) / den,
    };
    let e = ratio.sqrt();
    Ok((e, -e))
}

/// Bound state `ψ(x<0) = e^{κx}`, `ψ(x>0) = e^{iφ}(γ + δκ) e^{−κx}` (unnormalized).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundState {
    pub kappa: f64,
    pub left_amplitude: Complex64,
    pub right_amplitude: Complex64,
}

impl BoundState {
    pub fn value(&self, x: f64) -> Complex64 {
        let env = (-self.kappa * x.abs()).exp();
        if x < 0.0 {
            self.left_amplitude * env
        } else if x > 0.0 {
            self.right_amplitude * env
        } else {
            (self.left_amplitude + self.right_amplitude) * 0.5
        }
    }

    pub fn derivative(&self, x: f64) -> Complex64 {
        let env = (-self.kappa * x.abs()).exp();
        if x < 0.0 {
            self.left_amplitude * (self.kappa * env)
        } else {
            self.right_amplitude * (-self.kappa * env)
        }
    }

    /// `(ψ(0−), ψ'(0−), ψ(0+), ψ'(0+))`
    pub fn one_sided_limits(&self) -> (Complex64, Complex64, Complex64, Complex64) {
        (
            self.left_amplitude,
            self.left_amplitude * self.kappa,
            self.right_amplitude,
            -self.right_amplitude * self.kappa,
        )
    }
}

/// The most deeply bound state.
pub fn bound_state(p: &ExtensionParams) -> Result<BoundState, ScatteringError> {
    let kappa = smatrix_poles(p)
        .into_iter()
        .filter(|q| q.kind == PoleKind::Bound)
        .map(|q| q.kappa)
        .fold(None, |acc: Option<f64>, k| Some(acc.map_or(k, |a| a.max(k))))
        .ok_or(ScatteringError::NoBoundState)?;
    Ok(BoundState {
        kappa,
        left_amplitude: Complex64::new(1.0, 0.0),
        right_amplitude: Complex64::from_polar(1.0, p.phi()) * (p.gamma() + p.delta() * kappa),
    })
}

pub fn bound_state_wavefunction(p: &ExtensionParams, x_grid: &[f64]) -> Result<Vec<Complex64>, ScatteringError> {
    let b = bound_state(p)?;
    Ok(x_grid.iter().map(|&x| b.value(x)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extension::Symmetry;

    fn p(a: f64, b: f64, g: f64, d: f64, phi: f64) -> ExtensionParams {
        ExtensionParams::new(a, b, g, d, phi).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    fn worked() -> ExtensionParams {
        p(2.0, -2.5, 0.5, 0.0, 0.0)
    }

    #[test]
    fn amplitudes_examples() {
        let a = reflection_transmission(&ExtensionParams::identity(), 1.0).unwrap();
        assert_eq!((a.r_plus, a.r_minus), (c(0.0, 0.0), c(0.0, 0.0)));
        assert!(close(a.t_plus, c(1.0, 0.0), 1e-15) && close(a.t_minus, c(1.0, 0.0), 1e-15));

        let a = reflection_transmission(&p(1.0, -2.0, 1.0, 0.0, 0.0), 1.0).unwrap();
        for r in [a.r_plus, a.r_minus] {
            assert!(close(r, c(-0.5, 0.5), 1e-15));
        }
        for t in [a.t_plus, a.t_minus] {
            assert!(close(t, c(0.5, 0.5), 1e-15));
        }

        let a = reflection_transmission(&worked(), 1.0).unwrap();
        assert!(close(a.r_plus, c(-0.2, 0.8), 1e-15));
        assert!(close(a.r_minus, c(-0.8, 0.2), 1e-15));
        assert!(close(a.t_plus, c(0.4, 0.4), 1e-15));
        assert!(close(a.t_minus, c(0.4, 0.4), 1e-15));

        assert!(matches!(
            reflection_transmission(&worked(), 0.0),
            Err(ScatteringError::InvalidMomentum(_))
        ));
    }

    #[test]
    fn poles_examples() {
        let ps = smatrix_poles(&p(0.0, 1.0, 0.0, -1.0, 0.0));
        assert_eq!(ps, vec![Pole::new(-1.0), Pole::new(1.0)]);
        assert_eq!(ps[0].kind, PoleKind::Antibound);
        assert_eq!(ps[1].kind, PoleKind::Bound);

        let ps = smatrix_poles(&worked());
        assert_eq!(ps.len(), 1);
        assert!((ps[0].kappa - 1.0).abs() < 1e-15);
        assert_eq!(ps[0].kind, PoleKind::Bound);

        assert!(smatrix_poles(&p(-1.0, 0.0, -1.0, 0.0, 0.0)).is_empty());
        let ps = smatrix_poles(&p(1.0, 0.0, 1.0, 1.0, FRAC_PI_2));
        assert_eq!(ps[0].kind, PoleKind::Threshold);
    }

    #[test]
    fn poles_zero_the_denominator() {
        for q in [p(0.0, 1.0, 0.0, -1.0, 0.0), worked(), p(3.0, 2.0, 1.0, 1.0, 0.4)] {
            for pole in smatrix_poles(&q) {
                let d = denominator_at(&q, Complex64::new(0.0, pole.kappa));
                assert!(d.norm() < 1e-13);
            }
        }
    }

    #[test]
    fn s_matrix_examples() {
        for basis in [Basis::Traveling, Basis::PartialWave] {
            for k in [0.1, 1.0, 7.0] {
                let s = s_matrix(&ExtensionParams::identity(), k, basis).unwrap();
                assert!((s.entries - Mat2::identity()).max_abs() < 1e-15);
            }
        }
        let s = s_matrix(&worked(), 1.0, Basis::PartialWave).unwrap().entries;
        let expected = Mat2::new(c(-0.1, 0.9), c(0.3, 0.3), c(-0.3, -0.3), c(0.9, -0.1));
        assert!((s - expected).max_abs() < 1e-15);

        let s = s_matrix(&p(1.0, -2.0, 1.0, 0.0, 0.0), 1.0, Basis::PartialWave).unwrap().entries;
        assert!((s - Mat2::diag(c(0.0, 1.0), c(1.0, 0.0))).max_abs() < 1e-15);
    }

    #[test]
    fn s_matrix_vector_form() {
        // 𝕊 = T̄·1 + B⃗·Σ⃗/𝒟
        for q in [worked(), p(3.0, 2.0, 1.0, 1.0, 0.4), p(-0.5, 1.5, 2.0, -4.0 / 3.0, -1.1)] {
            for k in [0.3, 1.0, 4.0] {
                let kc = Complex64::from(k);
                let s = s_matrix(&q, k, Basis::PartialWave).unwrap().entries;
                let den = denominator_at(&q, kc);
                let tbar = 2.0 * Complex64::i() * k * q.phi().cos() / den;
                let [b1, b2, b3] = b_vector_at(&q, kc);
                let i = Complex64::i();
                let v = Mat2::new(tbar + b3 / den, (b1 - i * b2) / den, (b1 + i * b2) / den, tbar - b3 / den);
                assert!((s - v).max_abs() < 1e-14);
            }
        }
    }

    #[test]
    fn t_matrix_examples() {
        let t = t_matrix(&ExtensionParams::identity(), 2.0).unwrap();
        assert!(t.entries.max_abs() < 1e-15);
        assert_eq!((t.basis, t.kind), (Basis::PartialWave, MatrixKind::T));

        // 𝕋₀₁ and 𝕋₁₁ carry corrected signs relative to the quoted example
        let t = t_matrix(&worked(), 1.0).unwrap().entries;
        let expected = Mat2::new(c(0.45, 0.55), c(0.15, -0.15), c(-0.15, 0.15), c(-0.05, 0.05));
        assert!((t - expected).max_abs() < 1e-15, "{t:?}");

        // parity even: diagonal, 𝕋₀₀ = f₀ with −k tanδ₀ = −κ₊ = 1
        let t = t_matrix(&p(0.0, 1.0, 0.0, -1.0, 0.0), 1.0).unwrap().entries;
        assert!(t.get(0, 1).norm() < 1e-15 && t.get(1, 0).norm() < 1e-15);
        let e2 = Complex64::new(1.0, 0.0) + 2.0 * Complex64::i() * t.get(0, 0);
        let d0 = 0.5 * e2.arg();
        assert!((-d0.tan() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigen_observables_examples() {
        let o = eigen_observables(&p(0.0, 1.0, 0.0, -1.0, 0.0), 1.0).unwrap();
        assert_eq!(o.theta, 0.0);
        assert!(o.phase_undefined);
        let (ep, _) = eigenvalues_at(&p(0.0, 1.0, 0.0, -1.0, 0.0), 1.0.into()).unwrap();
        assert!(close(ep, c(0.0, -1.0), 1e-15));

        let o = eigen_observables(&worked(), 1.0).unwrap();
        assert!((o.k_cot_theta.unwrap() - 5.0 / 3.0).abs() < 1e-15);
        assert!((1.0 / o.theta.tan() - 5.0 / 3.0).abs() < 1e-14);
        // Φ and Φ + π describe the same T-matrix together with Θ → −Θ
        assert!((o.phi_rel - PI).abs() < 1e-15);
        let fl = o.flipped();
        assert!(fl.phi_rel.abs() < 1e-15);

        let o = eigen_observables(&p(1.0, 0.0, 1.0, 0.0, PI / 4.0), 1.0).unwrap();
        assert!(((o.phi_rel - (-FRAC_PI_2)).rem_euclid(PI)).abs() < 1e-15);
        let o = eigen_observables(&p(1.0, 0.0, 1.0, 0.0, -PI / 4.0), 1.0).unwrap();
        assert!((o.phi_rel + FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn eq_t_reconstruction_worked_point() {
        let q = worked();
        let o = eigen_observables(&q, 1.0).unwrap();
        let t = t_matrix(&q, 1.0).unwrap().entries;
        assert!((t_from_angles(o.f_plus, o.f_minus, o.theta, o.phi_rel) - t).max_abs() < 1e-15);
        let fl = o.flipped();
        assert!((t_from_angles(fl.f_plus, fl.f_minus, fl.theta, fl.phi_rel) - t).max_abs() < 1e-15);
    }

    #[test]
    fn observables_from_t_examples() {
        let f0 = c(0.3, 0.1);
        let f1 = c(-0.2, 0.4);
        let m = observables_from_t(&ScatterMatrix::new(Mat2::diag(f0, f1), Basis::PartialWave, MatrixKind::T)).unwrap();
        assert!(m.degenerate_mixing);
        assert_eq!((m.theta, m.f_plus, m.f_minus), (0.0, f0, f1));

        let t = t_matrix(&worked(), 1.0).unwrap();
        let m = observables_from_t(&t).unwrap();
        assert!(close(m.e2i_phi.unwrap(), c(1.0, 0.0), 1e-14));
        let o = eigen_observables(&worked(), 1.0).unwrap();
        assert!((m.theta - o.theta).abs() < 1e-14);
        assert!((m.phi_rel - o.phi_rel).abs() < 1e-14);
        assert!(close(m.f_plus, o.f_plus, 1e-14) && close(m.f_minus, o.f_minus, 1e-14));
        let tan2 = m.tan2_theta.unwrap();
        assert!((tan2.re - o.theta.tan().powi(2)).abs() < 1e-14 && tan2.im.abs() < 1e-14);
    }

    #[test]
    fn observables_from_t_at_maximal_tv() {
        let q = p(1.0, 0.3, 2.0, 10.0 / 3.0, FRAC_PI_2);
        for k in [0.2, 1.0, 3.0] {
            let o = eigen_observables(&q, k).unwrap();
            let m = observables_from_t(&t_matrix(&q, k).unwrap()).unwrap();
            let t = t_matrix(&q, k).unwrap().entries;
            assert!((t_from_angles(m.f_plus, m.f_minus, m.theta, m.phi_rel) - t).max_abs() < 1e-12);
            // same physical channel decomposition, possibly under the other label
            let same = close(m.f_plus, o.f_plus, 1e-12) && close(m.f_minus, o.f_minus, 1e-12);
            let swapped = close(m.f_plus, o.f_minus, 1e-12) && close(m.f_minus, o.f_plus, 1e-12);
            assert!(same || swapped);
        }
    }

    #[test]
    fn partial_amplitude_examples() {
        let a = partial_amplitudes(&ExtensionParams::identity(), 1.0, Direction::Right).unwrap();
        assert!(a.f0.norm() < 1e-15 && a.f1.norm() < 1e-15);
        let a = partial_amplitudes(&p(1.0, -2.0, 1.0, 0.0, 0.0), 1.0, Direction::Right).unwrap();
        assert!(close(a.f0, c(0.5, 0.5), 1e-15));
        assert!(a.f1.norm() < 1e-15);
    }

    #[test]
    fn time_reversal_even_coefficients_unimodular() {
        // TR-even, parity-odd: f₀ = cos²(Θ/2) f₊ + sin²(Θ/2) f₋, f₁ with the weights swapped
        let q = worked();
        for k in [0.5, 1.0, 2.0] {
            let o = eigen_observables(&q, k).unwrap();
            let (s2, c2) = ((0.5 * o.theta).sin().powi(2), (0.5 * o.theta).cos().powi(2));
            assert!((s2 + c2 - 1.0).abs() < 1e-15);
            let t = t_matrix(&q, k).unwrap().entries;
            assert!(close(t.get(0, 0), o.f_plus * c2 + o.f_minus * s2, 1e-14));
            assert!(close(t.get(1, 1), o.f_plus * s2 + o.f_minus * c2, 1e-14));
        }
    }

    #[test]
    fn parity_even_summary_examples() {
        let s = parity_even_summary(&p(0.0, 1.0, 0.0, -1.0, 0.0)).unwrap();
        assert_eq!((s.a0, s.a1), (-1.0, 1.0));
        assert_eq!((s.kappa_plus, s.kappa_minus), (-1.0, 1.0));

        let s = parity_even_summary(&p(1.0, 0.0, 1.0, 2.5, 0.0)).unwrap();
        assert!(s.a0.is_infinite() && s.alpha_pole);
        assert_eq!(s.kappa_plus, 0.0);

        let s = parity_even_summary(&p(1.0, -2.0, 1.0, 0.0, 0.0)).unwrap();
        assert_eq!(s.a0, 1.0);
        assert_eq!(s.a1, 0.0);

        assert!(matches!(parity_even_summary(&worked()), Err(ScatteringError::NotParityEven)));
    }

    #[test]
    fn parity_even_phase_closed_forms() {
        // −k tanδ₀ = −κ₊, k cotδ₁ = −κ₋ for every k
        let q = p(0.4, 2.1, 0.4, (0.16 - 1.0) / 2.1, 0.0);
        let s = parity_even_summary(&q).unwrap();
        for k in [0.05, 0.7, 3.0, 40.0] {
            let o = eigen_observables(&q, k).unwrap();
            assert!((-k * o.delta_plus.tan() + s.kappa_plus).abs() < 1e-12 * (1.0 + s.kappa_plus.abs()));
            assert!((k / o.delta_minus.tan() + s.kappa_minus).abs() < 1e-12 * (1.0 + s.kappa_minus.abs()));
            let i = Complex64::i();
            let (ep, em) = eigenvalues_at(&q, k.into()).unwrap();
            assert!(close(ep, (k + i * s.kappa_plus) / (k - i * s.kappa_plus), 1e-13));
            assert!(close(em, -(k + i * s.kappa_minus) / (k - i * s.kappa_minus), 1e-13));
        }
    }

    #[test]
    fn maximal_tv_examples() {
        let q = p(1.0, 0.0, 1.0, 1.0, FRAC_PI_2);
        let (e1, e2) = maximal_tv_eigenvalues(&q, 2.0).unwrap();
        let w = Complex64::from_polar(1.0, -PI / 4.0);
        assert!(close(e1, w, 1e-15) && close(e2, -w, 1e-15));
        assert!(matches!(maximal_tv_eigenvalues(&worked(), 1.0), Err(ScatteringError::NotMaximalTv(_))));

        // finite at the branch point k → iκ₊ = 0 is excluded (k > 0); near-threshold stays unimodular
        let (e1, _) = maximal_tv_eigenvalues(&q, 1e-9).unwrap();
        assert!((e1.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn maximal_tv_matches_s_eigenvalues() {
        for q in [p(1.0, 0.0, 1.0, 1.0, FRAC_PI_2), p(2.0, 1.0, 3.0, 5.0, FRAC_PI_2), p(2.0, -1.0, 0.5, 0.0, FRAC_PI_2)] {
            for k in [0.1, 1.0, 9.0] {
                let (e1, e2) = maximal_tv_eigenvalues(&q, k).unwrap();
                let (ep, em) = eigenvalues_at(&q, k.into()).unwrap();
                let direct = close(e1, ep, 1e-12) && close(e2, em, 1e-12);
                let swapped = close(e1, em, 1e-12) && close(e2, ep, 1e-12);
                assert!(direct || swapped, "{q:?} k={k}");
            }
        }
    }

    #[test]
    fn bound_state_examples() {
        let b = bound_state(&p(1.0, -2.0, 1.0, 0.0, 0.0)).unwrap();
        assert_eq!(b.kappa, 1.0);
        for x in [0.3, 1.0, 2.5] {
            assert!(close(b.value(x), b.value(-x), 1e-15));
            assert!(close(b.value(x), c((-x).exp(), 0.0), 1e-15));
        }

        let q = worked();
        let b = bound_state(&q).unwrap();
        assert!((b.kappa - 1.0).abs() < 1e-15);
        assert!(close(b.right_amplitude / b.left_amplitude, c(0.5, 0.0), 1e-15));
        // α : e^{iφ} form for δ = 0
        assert!(close(b.right_amplitude / b.left_amplitude, Complex64::from_polar(1.0, q.phi()) / q.alpha(), 1e-15));

        assert!(matches!(bound_state(&p(1.0, 0.0, 1.0, 1.0, FRAC_PI_2)), Err(ScatteringError::NoBoundState)));

        let v = bound_state_wavefunction(&q, &[-1.0, 0.0, 1.0]).unwrap();
        assert_eq!(v.len(), 3);
        assert!(close(v[0], c((-1.0f64).exp(), 0.0), 1e-15));
    }

    #[test]
    fn maximal_tv_bound_state_envelope() {
        // α = γ, φ = π/2 with a positive pole: ψ(0+)/ψ(0−) = i(α + δκ₊) = i
        let q = p(1.0, -1.0, 1.0, 0.0, FRAC_PI_2);
        let b = bound_state(&q).unwrap();
        assert!(close(b.right_amplitude, c(0.0, 1.0), 1e-15));
        let q = p(0.5, -1.0, 0.5, 0.75, FRAC_PI_2);
        let b = bound_state(&q).unwrap();
        let (psi_l, dpsi_l, psi_r, dpsi_r) = b.one_sided_limits();
        let (jp, jd) = q.apply_joining(psi_l, dpsi_l);
        assert!(close(jp, psi_r, 1e-14) && close(jd, dpsi_r, 1e-14));
    }

    #[test]
    fn f_plus_carries_the_single_pole() {
        // δ = 0: only f₊ diverges at k → iκ₀
        let q = worked();
        let i = Complex64::i();
        let mut prev = None;
        for eps in [1e-2, 1e-4, 1e-6] {
            let k = i + eps;
            let (fp, fm) = eigen_amplitudes_at(&q, k).unwrap();
            assert!(fm.norm() < 10.0);
            if let Some(pp) = prev {
                let ratio: f64 = fp.norm() / pp;
                assert!((ratio / 100.0 - 1.0).abs() < 0.05);
            }
            prev = Some(fp.norm());
        }
        // β = 0: the pole moves to f₋
        let q = p(0.5, 0.0, 2.0, 1.5, 0.0);
        let k0 = smatrix_poles(&q).into_iter().find(|x| x.kappa != 0.0).unwrap().kappa;
        let (fp, fm) = eigen_amplitudes_at(&q, i * k0 + 1e-6).unwrap();
        assert!(fm.norm() > 1e4 && fp.norm() < 10.0);
    }

    #[test]
    fn scale_invariant_amplitudes_are_k_independent() {
        let q = p(2.0, 0.0, 0.5, 0.0, 0.6);
        let (f0p, f0m) = eigen_amplitudes_at(&q, 0.01.into()).unwrap();
        assert!(f0p.norm() > 0.1 || f0m.norm() > 0.1);
        for k in [0.1, 1.0, 10.0, 100.0] {
            let (fp, fm) = eigen_amplitudes_at(&q, k.into()).unwrap();
            assert!(close(fp, f0p, 1e-14) && close(fm, f0m, 1e-14));
        }
    }

    #[test]
    fn basis_round_trip() {
        let s = s_matrix(&p(3.0, 2.0, 1.0, 1.0, 0.4), 1.3, Basis::Traveling).unwrap();
        let back = s.to_basis(Basis::PartialWave).to_basis(Basis::Traveling);
        assert!((back.entries - s.entries).max_abs() < 1e-15);
    }

    #[test]
    fn left_is_parity_image_of_right() {
        let q = p(3.0, 2.0, 1.0, 1.0, 0.4);
        let qp = q.apply_symmetry(Symmetry::Parity).unwrap();
        let l = partial_amplitudes(&q, 0.8, Direction::Left).unwrap();
        let r = partial_amplitudes(&qp, 0.8, Direction::Right).unwrap();
        assert!(close(l.f0, r.f0, 1e-15) && close(l.f1, r.f1, 1e-15));
    }

    mod props {
        use super::super::*;
        use crate::extension::strategies::params;
        use crate::extension::Symmetry;
        use proptest::prelude::*;

        fn log_k() -> impl Strategy<Value = f64> {
            (-2.0f64..2.0).prop_map(|e| 10f64.powf(e))
        }

        proptest! {
            #[test]
            fn unitarity(q in params(), k in log_k()) {
                for basis in [Basis::Traveling, Basis::PartialWave] {
                    prop_assert!(s_matrix(&q, k, basis).unwrap().unitarity_defect() < 1e-12);
                }
                let a = reflection_transmission(&q, k).unwrap();
                prop_assert!((a.r_plus.norm_sqr() + a.t_plus.norm_sqr() - 1.0).abs() < 1e-12);
                prop_assert!((a.r_minus.norm_sqr() + a.t_minus.norm_sqr() - 1.0).abs() < 1e-12);
                prop_assert!((a.r_minus.conj() * a.t_plus + a.t_minus.conj() * a.r_plus).norm() < 1e-12);
            }

            #[test]
            fn parity_swaps_amplitudes(q in params(), k in log_k()) {
                let a = reflection_transmission(&q, k).unwrap();
                let b = reflection_transmission(&q.apply_symmetry(Symmetry::Parity).unwrap(), k).unwrap();
                prop_assert!((a.r_plus - b.r_minus).norm() < 1e-14);
                prop_assert!((a.r_minus - b.r_plus).norm() < 1e-14);
                prop_assert!((a.t_plus - b.t_minus).norm() < 1e-14);
                prop_assert!((a.t_minus - b.t_plus).norm() < 1e-14);
            }

            #[test]
            fn eq_t_reconstruction(q in params(), k in log_k()) {
                let o = eigen_observables(&q, k).unwrap();
                let t = t_matrix(&q, k).unwrap().entries;
                let rec = t_from_angles(o.f_plus, o.f_minus, o.theta, o.phi_rel);
                prop_assert!((rec - t).max_abs() < 1e-12);
                prop_assert!((o.f_plus.norm_sqr() - o.f_plus.im).abs() < 1e-12);
                prop_assert!((o.f_minus.norm_sqr() - o.f_minus.im).abs() < 1e-12);
            }

            #[test]
            fn from_t_agrees(q in params(), k in log_k()) {
                prop_assume!(q.phi().cos() > 1e-6);
                let o = eigen_observables(&q, k).unwrap();
                let m = observables_from_t(&t_matrix(&q, k).unwrap()).unwrap();
                if !m.degenerate_mixing && !o.phase_undefined {
                    prop_assert!((m.theta - o.theta).abs() < 1e-10, "{} {}", m.theta, o.theta);
                    let dphi = (m.phi_rel - o.phi_rel).rem_euclid(2.0 * PI);
                    prop_assert!(dphi < 1e-10 || 2.0 * PI - dphi < 1e-10);
                }
                prop_assert!((m.f_plus - o.f_plus).norm() < 1e-10);
                prop_assert!((m.f_minus - o.f_minus).norm() < 1e-10);
            }

            #[test]
            fn basis_round_trip_exact(q in params(), k in log_k()) {
                let s = s_matrix(&q, k, Basis::Traveling).unwrap();
                let back = s.to_basis(Basis::PartialWave).to_basis(Basis::Traveling);
                prop_assert!((back.entries - s.entries).max_abs() < 1e-15);
            }

            #[test]
            fn parity_even_is_diagonal(a in -5.0f64..5.0, d in -5.0f64..5.0, k in log_k()) {
                prop_assume!(d.abs() > 1e-3);
                let q = ExtensionParams::new(a, (a * a - 1.0) / d, a, d, 0.0).unwrap();
                let t = t_matrix(&q, k).unwrap().entries;
                prop_assert!(t.get(0, 1).norm() < 1e-14 && t.get(1, 0).norm() < 1e-14);
                prop_assert_eq!(eigen_observables(&q, k).unwrap().theta, 0.0);
            }

            #[test]
            fn k_cot_theta_closed_form(q in params(), k in log_k()) {
                let o = eigen_observables(&q, k).unwrap();
                if let Some(kc) = o.k_cot_theta {
                    let s = ((q.alpha() - q.gamma()).powi(2) + 4.0 * q.phi().sin().powi(2)).sqrt();
                    let expected = -(q.beta() + k * k * q.delta()) / s;
                    prop_assert!((kc - expected).abs() <= 1e-12 * (1.0 + expected.abs()));
                    if o.theta.abs() > 1e-6 && o.theta.abs() < FRAC_PI_2 - 1e-6 {
                        prop_assert!((k / o.theta.tan() - kc).abs() <= 1e-9 * (1.0 + kc.abs()));
                    }
                }
            }
        }
    }
}
