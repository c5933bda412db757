//! Evaluation of Jacobi polynomials in standard and orthonormal
//! normalization, and of the weighted composites `M` and `Z`.
//!
//! Values are carried as [`SignedLog`]. The three-term recurrence runs on
//! plain `f64` mantissas that share one exponent; whenever the leading
//! mantissa drifts outside `[2⁻⁵⁰⁰, 2⁵⁰⁰]` both mantissas are renormalized
//! and the shift is folded into the exponent. That keeps `k`, `α`, `β` up to
//! 10⁴ well inside range.

use crate::error::{Error, Result};
use crate::params::{delta_interval, derive_params, d_of_x, JacobiParams};
use crate::signed_log::SignedLog;

const RESCALE_HI: f64 = 3.273_390_607_896_142e150; // 2^500
const RESCALE_LO: f64 = 3.054_936_363_499_605e-151; // 2^-500

/// `P_k^{(α,β)}(x)` and its first derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: SignedLog,
    pub deriv: SignedLog,
}

impl EvalResult {
    pub fn value_sign(&self) -> i8 {
        self.value.sign
    }
    pub fn value_log(&self) -> f64 {
        self.value.ln_abs
    }
    pub fn deriv_sign(&self) -> i8 {
        self.deriv.sign
    }
    pub fn deriv_log(&self) -> f64 {
        self.deriv.ln_abs
    }
}

/// `ln 𝐡_k`, where `𝐡_k² = ∫ w·(P_k)²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormValue {
    pub log_hk: f64,
}

impl NormValue {
    pub fn log_hk_sq(&self) -> f64 {
        2.0 * self.log_hk
    }
}

/// Standard-normalization `P_n^{(a,b)}(x)` by forward recurrence.
///
/// No domain checks beyond the recurrence denominators; `a`, `b` may be
/// shifted outside `(−1, ∞)` for contiguous-relation work.
pub fn standard_value(n: u32, a: f64, b: f64, x: f64) -> Result<SignedLog> {
    if n == 0 {
        return Ok(SignedLog::ONE);
    }
    let p1 = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x;
    if n == 1 {
        return Ok(SignedLog::from_f64(p1));
    }
    let ab = a + b;
    let a2_b2 = (a - b) * (a + b);
    let mut prev = 1.0_f64;
    let mut cur = p1;
    let mut ln_scale = 0.0_f64;
    for m in 2..=n {
        let m = f64::from(m);
        let two_m_ab = 2.0 * m + ab;
        let c1 = 2.0 * m * (m + ab) * (two_m_ab - 2.0);
        if c1 == 0.0 {
            return Err(Error::domain(format!(
                "recurrence degenerates at degree {m} for a={a}, b={b}"
            )));
        }
        let c2 = (two_m_ab - 1.0) * a2_b2;
        let c3 = (two_m_ab - 2.0) * (two_m_ab - 1.0) * two_m_ab;
        let c4 = 2.0 * (m + a - 1.0) * (m + b - 1.0) * two_m_ab;
        let next = ((c2 + c3 * x) * cur - c4 * prev) / c1;
        prev = cur;
        cur = next;
        let mag = cur.abs();
        if mag != 0.0 && !(RESCALE_LO..=RESCALE_HI).contains(&mag) {
            prev /= mag;
            cur /= mag;
            ln_scale += mag.ln();
        }
    }
    Ok(SignedLog::from_f64(cur).scale_ln(ln_scale))
}

/// `d^m/dx^m P_k^{(α,β)} = Γ(k+α+β+1+m)/(2^m Γ(k+α+β+1)) · P_{k−m}^{(α+m,β+m)}`.
pub fn standard_derivative(p: &JacobiParams, x: f64, order: u32) -> Result<SignedLog> {
    if order > p.k {
        return Ok(SignedLog::ZERO);
    }
    let n = f64::from(p.k) + p.alpha + p.beta + 1.0;
    let mut factor = SignedLog::ONE;
    for i in 0..order {
        factor = factor.mul_f64(0.5 * (n + f64::from(i)));
    }
    let shift = f64::from(order);
    Ok(factor * standard_value(p.k - order, p.alpha + shift, p.beta + shift, x)?)
}

fn check_closed_unit(x: f64) -> Result<()> {
    if (-1.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::domain(format!("x = {x} outside [−1, 1]")))
    }
}

/// `P_k^{(α,β)}(x)` and `dP_k/dx = ((k+α+β+1)/2)·P_{k−1}^{(α+1,β+1)}(x)`.
pub fn eval_jacobi(p: &JacobiParams, x: f64) -> Result<EvalResult> {
    check_closed_unit(x)?;
    Ok(EvalResult {
        value: standard_value(p.k, p.alpha, p.beta, x)?,
        deriv: standard_derivative(p, x, 1)?,
    })
}

/// `ln Γ` for positive arguments.
pub(crate) fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    libm::lgamma_r(x).0
}

/// `𝐡_k² = 2^{α+β+1} Γ(k+α+1) Γ(k+β+1) / ((2k+α+β+1) k! Γ(k+α+β+1))`.
pub fn log_norm(p: &JacobiParams) -> NormValue {
    let k = f64::from(p.k);
    let (a, b) = (p.alpha, p.beta);
    let numer = (a + b + 1.0) * std::f64::consts::LN_2 + ln_gamma(k + a + 1.0) + ln_gamma(k + b + 1.0);
    // For k = 0 the product (α+β+1)·Γ(α+β+1) is folded into Γ(α+β+2), which
    // stays positive for α+β > −2.
    let denom = if p.k == 0 {
        ln_gamma(a + b + 2.0)
    } else {
        (2.0 * k + a + b + 1.0).ln() + ln_gamma(k + 1.0) + ln_gamma(k + a + b + 1.0)
    };
    NormValue {
        log_hk: 0.5 * (numer - denom),
    }
}

/// `ln((1−x)^a (1+x)^b)` with `0^0 = 1`; `−∞` at an endpoint with a positive
/// exponent.
pub fn ln_weight(x: f64, a: f64, b: f64) -> Result<f64> {
    let term = |base: f64, e: f64, side: &str| -> Result<f64> {
        if e == 0.0 {
            Ok(0.0)
        } else if base > 0.0 {
            Ok(e * base.ln())
        } else if e > 0.0 {
            Ok(f64::NEG_INFINITY)
        } else {
            Err(Error::domain(format!(
                "weight ({side})^{e} is singular at x = {x}"
            )))
        }
    };
    Ok(term(1.0 - x, a, "1−x")? + term(1.0 + x, b, "1+x")?)
}

/// Orthonormal `𝐏_k = P_k / 𝐡_k` and its derivative.
pub fn eval_orthonormal(p: &JacobiParams, x: f64) -> Result<EvalResult> {
    let raw = eval_jacobi(p, x)?;
    let ln_h = log_norm(p).log_hk;
    Ok(EvalResult {
        value: raw.value.scale_ln(-ln_h),
        deriv: raw.deriv.scale_ln(-ln_h),
    })
}

fn exp_checked(ln_abs: f64) -> Result<f64> {
    if ln_abs > f64::MAX.ln() {
        Err(Error::Overflow { ln_abs })
    } else {
        Ok(ln_abs.exp())
    }
}

/// `ln((1−x)^a (1+x)^b 𝐏_k(x)²)`, `−∞` at a zero.
pub fn ln_weighted_sq(p: &JacobiParams, x: f64, a: f64, b: f64) -> Result<f64> {
    check_closed_unit(x)?;
    let lw = ln_weight(x, a, b)?;
    let y = standard_value(p.k, p.alpha, p.beta, x)?;
    if y.is_zero() || lw == f64::NEG_INFINITY {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(lw + 2.0 * (y.ln_abs - log_norm(p).log_hk))
}

/// `(1−x)^a (1+x)^b 𝐏_k(x)²`, assembled in log space and exponentiated once.
pub fn eval_weighted_sq(p: &JacobiParams, x: f64, a: f64, b: f64) -> Result<f64> {
    exp_checked(ln_weighted_sq(p, x, a, b)?)
}

/// `M(x) = (1−x)^{α+½}(1+x)^{β+½}𝐏_k(x)²`.
pub fn eval_m(p: &JacobiParams, x: f64) -> Result<f64> {
    eval_weighted_sq(p, x, p.alpha + 0.5, p.beta + 0.5)
}

/// `Z(x) = √(√d(x)·(1−x)^α(1+x)^β)·𝐏_k(x)` on `[δ₋₁, δ₁]`.
pub fn eval_z(p: &JacobiParams, x: f64) -> Result<f64> {
    let dp = derive_params(p);
    let iv = delta_interval(&dp)?;
    let slack = 1e-14 * iv.width();
    if x < iv.lo - slack || x > iv.hi + slack {
        return Err(Error::domain(format!(
            "x = {x} outside [δ₋₁, δ₁] = [{}, {}]",
            iv.lo, iv.hi
        )));
    }
    let d = d_of_x(&dp, x);
    if d <= 0.0 || x <= iv.lo || x >= iv.hi {
        return Ok(0.0);
    }
    let x = x.clamp(-1.0, 1.0);
    let lw = ln_weight(x, p.alpha, p.beta)?;
    let y = standard_value(p.k, p.alpha, p.beta, x)?;
    if y.is_zero() || lw == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    let ln_abs = 0.5 * (0.5 * d.ln() + lw) + y.ln_abs - log_norm(p).log_hk;
    Ok(f64::from(y.sign) * exp_checked(ln_abs)?)
}
