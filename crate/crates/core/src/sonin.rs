//! Sonin's function `S(Z;x) = Z² + Z′²/B` for the damped envelope `Z`, the
//! coefficients of the second-order equation `Z″ − 2AZ′ + BZ = 0`, the sign
//! polynomial `D = 2(1−x²)²d³(4AB − B′)`, and the location of its unique zero
//! `x₀` inside `[δ₋₁, δ₁]`.

use crate::error::{Error, Result};
use crate::jacobi::{ln_weight, log_norm, standard_derivative, standard_value};
use crate::params::{d_of_x, delta_interval, derive_params, DerivedParams, Interval, JacobiParams};
use crate::signed_log::SignedLog;

/// Bisection stops once the bracket is narrower than this.
pub const X0_TOL: f64 = 1e-13;

/// Relative interior margin used wherever strict interiority is required.
pub const INTERIOR_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SoninCoeffs {
    pub a: f64,
    pub b: f64,
    pub e: f64,
    pub d: f64,
}

/// How `x₀` was located.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum X0Path {
    /// Bisection on the bracket `(−qs − ⅔√((1−q²)(1−s²)), −qs)`.
    Bracket,
    /// `D(−qs) = 0` exactly (the `q = 0` limit): `x₀ = −qs`, `θ = 0`.
    Degenerate,
    /// The bracket had no sign change; the whole of `[δ₋₁, δ₁]` was scanned.
    FullScan,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct X0Result {
    pub x0: f64,
    /// `θ = (−qs − x₀)/√((1−q²)(1−s²))`.
    pub theta: f64,
    pub bracket: Interval,
    pub iterations: u32,
    pub path: X0Path,
}

/// Values of the envelope and its Sonin function at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SoninPoint {
    pub z: f64,
    pub z_prime: f64,
    pub b: f64,
    pub s: f64,
}

/// `E(x) = 2qsx³ − (1 − 4q² − 4s² + q²s²)x² + 6qsx + 1 − q⁴ − s⁴ + 3q²s²`.
pub fn e_poly(q: f64, s: f64, x: f64) -> f64 {
    let (q2, s2, qs) = (q * q, s * s, q * s);
    ((2.0 * qs * x - (1.0 - 4.0 * q2 - 4.0 * s2 + q2 * s2)) * x + 6.0 * qs) * x + 1.0 - q2 * q2 - s2 * s2
        + 3.0 * q2 * s2
}

/// Coefficients of `D(x)`, lowest degree first. `r` cancels out entirely.
pub fn d_coefficients(q: f64, s: f64) -> [f64; 7] {
    let (q2, s2, qs) = (q * q, s * s, q * s);
    let (q4, s4) = (q2 * q2, s2 * s2);
    [
        -3.0 * qs * (2.0 - q2 - s2 - q4 - s4 + 3.0 * q2 * s2),
        -(1.0 + 6.0 * q2 + 6.0 * s2 - 6.0 * q4 - 6.0 * s4 - q4 * q2 - s4 * s2 + 9.0 * q2 * s2
            + 3.0 * q2 * s4
            + 3.0 * q4 * s2),
        -qs * (7.0 + 10.0 * q2 + 10.0 * s2 - 4.0 * q2 * s2 + q4 + s4),
        2.0 * (1.0 + q2 + s2 - 5.0 * q4 - 5.0 * s4 - 5.0 * q2 * s2 + q4 * s2 + q2 * s4),
        qs * (12.0 - 9.0 * q2 - 9.0 * s2 + q2 * s2),
        4.0 * q2 + 4.0 * s2 - 5.0 * q2 * s2 - 1.0,
        qs,
    ]
}

/// `D(x)` by Horner's rule.
pub fn d_poly_value(q: f64, s: f64, x: f64) -> f64 {
    d_coefficients(q, s).iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Closed form `D(δⱼ) = −15·j·cos³τ·cos³ω·sin⁴(τ + jω)`.
pub fn d_at_delta_closed_form(dp: &DerivedParams, j: i32) -> f64 {
    let jf = f64::from(j.signum());
    let c = dp.tau.cos() * dp.omega.cos();
    -15.0 * jf * c * c * c * (dp.tau + jf * dp.omega).sin().powi(4)
}

/// `A`, `B`, `E` from their closed forms and `D` from its polynomial.
pub fn sonin_coeffs(dp: &DerivedParams, x: f64) -> Result<SoninCoeffs> {
    let (q, s) = (dp.q, dp.s);
    let d = d_of_x(dp, x);
    let one_m_x2 = 1.0 - x * x;
    if !(one_m_x2 > 0.0 && d > 0.0) {
        return Err(Error::domain(format!(
            "Sonin coefficients need (1−x²)·d(x) > 0, got x = {x}, d = {d}"
        )));
    }
    let e = e_poly(q, s, x);
    let a = -(((x + 3.0 * q * s) * x + 2.0 * q * q + 2.0 * s * s - 1.0) * x + q * s) / (2.0 * one_m_x2 * d);
    let b = d * dp.r * dp.r / (4.0 * one_m_x2 * one_m_x2) + e / (4.0 * one_m_x2 * d * d);
    Ok(SoninCoeffs {
        a,
        b,
        e,
        d: d_poly_value(q, s, x),
    })
}

/// `Z`, `Z′` and `S` at an interior point of `[δ₋₁, δ₁]`.
///
/// `Z′ = g·(y′ + L·y)/𝐡_k` with `ln g = ¼ ln d + ½(α ln(1−x) + β ln(1+x))` and
/// `L = (ln g)′`; `y` and `y′` are brought to a shared exponent before they
/// are combined, so a zero of `y` contributes only the `y′` term.
pub fn sonin_point(p: &JacobiParams, dp: &DerivedParams, x: f64) -> Result<SoninPoint> {
    let coeffs = sonin_coeffs(dp, x)?;
    if coeffs.b <= 0.0 {
        return Err(Error::domain(format!(
            "B(x) = {} ≤ 0 at x = {x} for {p}: contradicts positivity of E on (δ₋₁, δ₁)",
            coeffs.b
        )));
    }
    let (q, s) = (dp.q, dp.s);
    let d = d_of_x(dp, x);
    let dd = -2.0 * q * s - 2.0 * x;
    let log_deriv = dd / (4.0 * d) + 0.5 * (p.beta / (1.0 + x) - p.alpha / (1.0 - x));
    let ln_g = 0.25 * d.ln() + 0.5 * ln_weight(x, p.alpha, p.beta)?;

    let y = standard_value(p.k, p.alpha, p.beta, x)?;
    let y1 = standard_derivative(p, x, 1)?;
    let scale = SignedLog::common_scale(&[y, y1]);
    if scale == f64::NEG_INFINITY {
        return Ok(SoninPoint {
            z: 0.0,
            z_prime: 0.0,
            b: coeffs.b,
            s: 0.0,
        });
    }
    let ym = y.mantissa_at(scale);
    let y1m = y1.mantissa_at(scale);
    let zp_m = y1m + log_deriv * ym;
    let factor = (ln_g + scale - log_norm(p).log_hk).exp();
    let z = factor * ym;
    let z_prime = factor * zp_m;
    let s_val = factor * factor * (ym * ym + zp_m * zp_m / coeffs.b);
    Ok(SoninPoint {
        z,
        z_prime,
        b: coeffs.b,
        s: s_val,
    })
}

pub fn sonin_s(p: &JacobiParams, x: f64) -> Result<f64> {
    let dp = derive_params(p);
    let iv = delta_interval(&dp)?;
    if !(x > iv.lo && x < iv.hi) {
        return Err(Error::domain(format!(
            "Sonin function needs x strictly inside (δ₋₁, δ₁) = ({}, {}), got {x}",
            iv.lo, iv.hi
        )));
    }
    Ok(sonin_point(p, &dp, x)?.s)
}

fn bisect_d(q: f64, s: f64, mut lo: f64, mut hi: f64) -> (f64, u32) {
    // invariant: D(lo) > 0 ≥ D(hi)
    let mut iterations = 0;
    while hi - lo > X0_TOL && iterations < 200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if d_poly_value(q, s, mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    (0.5 * (lo + hi), iterations)
}

/// The unique zero of `D` in `[δ₋₁, δ₁]`, where `S(Z;x)` peaks.
pub fn find_x0(dp: &DerivedParams) -> Result<X0Result> {
    let p = &dp.params;
    if !(p.k >= 1 && p.alpha >= p.beta && p.beta >= 0.0) {
        return Err(Error::domain(format!("x₀ requires k ≥ 1 and α ≥ β ≥ 0, got {p}")));
    }
    let (q, s) = (dp.q, dp.s);
    let radical = dp.radical();
    let hi = -q * s;
    let lo = hi - 2.0 / 3.0 * radical;
    let theta_of = |x0: f64| (hi - x0) / radical;
    let d_lo = d_poly_value(q, s, lo);
    let d_hi = d_poly_value(q, s, hi);

    if d_hi == 0.0 {
        return Ok(X0Result {
            x0: hi,
            theta: 0.0,
            bracket: Interval::open(lo, hi),
            iterations: 0,
            path: X0Path::Degenerate,
        });
    }
    if d_lo > 0.0 && d_hi < 0.0 {
        let (x0, iterations) = bisect_d(q, s, lo, hi);
        return Ok(X0Result {
            x0,
            theta: theta_of(x0),
            bracket: Interval::open(lo, hi),
            iterations,
            path: X0Path::Bracket,
        });
    }

    let iv = delta_interval(dp)?;
    let eps = INTERIOR_MARGIN * iv.width();
    let (a, b) = (iv.lo + eps, iv.hi - eps);
    let n = 10_000;
    let mut prev_x = a;
    let mut prev_d = d_poly_value(q, s, a);
    for i in 1..=n {
        let x = a + (b - a) * f64::from(i) / f64::from(n);
        let dx = d_poly_value(q, s, x);
        if prev_d > 0.0 && dx <= 0.0 {
            let (x0, iterations) = bisect_d(q, s, prev_x, x);
            return Ok(X0Result {
                x0,
                theta: theta_of(x0),
                bracket: Interval::open(a, b),
                iterations,
                path: X0Path::FullScan,
            });
        }
        prev_x = x;
        prev_d = dx;
    }
    Err(Error::domain(format!(
        "D has no sign change on [δ₋₁, δ₁] for {p}"
    )))
}
