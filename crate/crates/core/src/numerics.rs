//! Real-argument log-Gamma with sign, the trap Gamma ratio, and a bracketed root finder.

use std::f64::consts::PI;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error("Gamma pole at nonpositive integer argument {0}")]
    PoleArgument(f64),
    #[error("Gamma ratio is infinite at x = {0} (numerator pole)")]
    Infinite(f64),
    #[error("no sign change on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },
    #[error("root search did not converge in {0} iterations")]
    ConvergenceFailure(usize),
    #[error("non-finite function value at x = {0}")]
    NonFinite(f64),
}

/// `sign * exp(log_abs)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLog {
    pub log_abs: f64,
    pub sign: f64,
}

impl SignedLog {
    pub fn value(self) -> f64 {
        self.sign * self.log_abs.exp()
    }
}

// Lanczos coefficients (g = 10.900511, n = 11), from statrs / Pugh 2004.
const LANCZOS_R: f64 = 10.900511;
const LANCZOS_DK: [f64; 11] = [
    2.485_740_891_387_535_655_46e-5,
    1.051_423_785_817_219_742_10,
    -3.456_870_972_220_162_354_69,
    4.512_277_094_668_948_237_00,
    -2.982_852_253_235_766_557_21,
    1.056_397_115_771_267_130_77,
    -1.954_287_731_916_458_695_83e-1,
    1.709_705_434_044_412_243_07e-2,
    -5.719_261_174_043_057_812_83e-4,
    4.633_994_733_599_056_367_08e-6,
    -2.719_949_084_886_077_039_10e-9,
];
const LN_2_SQRT_E_OVER_PI: f64 = 0.620_782_237_635_245_222_345_518_445_781_647_212_251_852_7;
const LN_PI: f64 = 1.144_729_885_849_400_174_143_427_351_353_058_711_647_294_8;

const POLE_TOL: f64 = 1e-14;
pub const MAX_ROOT_ITER: usize = 200;

// ln Γ(x) for x >= 0.5.
fn ln_gamma_lanczos(x: f64) -> f64 {
    let s = LANCZOS_DK
        .iter()
        .enumerate()
        .skip(1)
        .fold(LANCZOS_DK[0], |s, (i, &dk)| s + dk / (x + i as f64 - 1.0));
    s.ln() + LN_2_SQRT_E_OVER_PI + (x - 0.5) * ((x - 0.5 + LANCZOS_R) / std::f64::consts::E).ln()
}

/// sin(πx) with exact argument reduction, so zeros at integers are exact.
pub fn sin_pi(x: f64) -> f64 {
    let r = x % 2.0; // exact
    let r = if r > 1.0 {
        r - 2.0
    } else if r < -1.0 {
        r + 2.0
    } else {
        r
    };
    // r in [-1, 1]; fold onto [-1/2, 1/2]
    if r > 0.5 {
        (PI * (1.0 - r)).sin()
    } else if r < -0.5 {
        -(PI * (1.0 + r)).sin()
    } else {
        (PI * r).sin()
    }
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= POLE_TOL && (x - x.round()).abs() <= POLE_TOL
}

/// ln|Γ(x)| together with the sign of Γ(x).
pub fn log_gamma_signed(x: f64) -> Result<SignedLog, NumericsError> {
    if !x.is_finite() {
        return Err(NumericsError::NonFinite(x));
    }
    if is_nonpositive_integer(x) {
        return Err(NumericsError::PoleArgument(x));
    }
    if x >= 0.5 {
        return Ok(SignedLog {
            log_abs: ln_gamma_lanczos(x),
            sign: 1.0,
        });
    }
    // Γ(x)Γ(1-x) = π / sin(πx)
    let s = sin_pi(x);
    Ok(SignedLog {
        log_abs: LN_PI - s.abs().ln() - ln_gamma_lanczos(1.0 - x),
        sign: s.signum(),
    })
}

pub fn gamma(x: f64) -> Result<f64, NumericsError> {
    log_gamma_signed(x).map(SignedLog::value)
}

/// Γ(¾ − x)/Γ(¼ − x). Exactly zero where ¼ − x is a nonpositive integer.
pub fn gamma_ratio(x: f64) -> Result<f64, NumericsError> {
    let num_arg = 0.75 - x;
    let den_arg = 0.25 - x;
    if is_nonpositive_integer(num_arg) {
        return Err(NumericsError::Infinite(x));
    }
    if is_nonpositive_integer(den_arg) {
        return Ok(0.0);
    }
    let num = log_gamma_signed(num_arg)?;
    let den = log_gamma_signed(den_arg)?;
    Ok(num.sign * den.sign * (num.log_abs - den.log_abs).exp())
}

/// Bisection with secant steps kept strictly inside the bracket.
///
/// Stops when `|f| == 0`, the bracket is narrower than `tol`, or the secant
/// step is below `tol`. `f` is never evaluated outside `[lo, hi]`.
pub fn bracketed_root<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<f64, NumericsError> {
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut fa = f(a);
    let mut fb = f(b);
    if !fa.is_finite() {
        return Err(NumericsError::NonFinite(a));
    }
    if !fb.is_finite() {
        return Err(NumericsError::NonFinite(b));
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(NumericsError::NoSignChange { lo: a, hi: b });
    }
    let mut use_secant = true;
    for _ in 0..MAX_ROOT_ITER {
        let width = b - a;
        if width <= tol {
            return Ok(if fa.abs() < fb.abs() { a } else { b });
        }
        let mid = a + 0.5 * width;
        // alternate secant and bisection so the bracket always shrinks
        let mut x = mid;
        if use_secant {
            let s = b - fb * (b - a) / (fb - fa);
            let margin = 0.01 * width;
            if s.is_finite() && s > a + margin && s < b - margin {
                x = s;
            }
        }
        use_secant = !use_secant;
        let fx = f(x);
        if !fx.is_finite() {
            return Err(NumericsError::NonFinite(x));
        }
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
    }
    if b - a <= tol.max(4.0 * f64::EPSILON * a.abs().max(b.abs())) {
        Ok(if fa.abs() < fb.abs() { a } else { b })
    } else {
        Err(NumericsError::ConvergenceFailure(MAX_ROOT_ITER))
    }
}
