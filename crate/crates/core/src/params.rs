//! Parameter algebra for the Jacobi family: the degree/weight triple, its
//! reparameterization in terms of `q = (α−β)/r` and `s = (α+β)/r`, and the
//! envelope interval `[δ₋₁, δ₁]`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Lower bound on α, β for the second envelope theorem: `(1+√2)/4`.
pub const THEOREM2_MIN_PARAM: f64 = 0.603_553_390_593_273_7;

/// Angles or ratios closer than this to zero are snapped to exactly zero.
const ANGLE_SNAP: f64 = 1e-15;

/// Agreement required between the radical and trigonometric forms of δ±1.
const DELTA_FORM_TOL: f64 = 1e-12;

/// Degree and weight exponents of `P_k^{(α,β)}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JacobiParams {
    pub k: u32,
    pub alpha: f64,
    pub beta: f64,
}

impl JacobiParams {
    pub fn new(k: u32, alpha: f64, beta: f64) -> Result<Self> {
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::Invalid(format!(
                "non-finite weight exponents α={alpha}, β={beta}"
            )));
        }
        if alpha <= -1.0 || beta <= -1.0 {
            return Err(Error::domain(format!(
                "weight not integrable: need α > −1 and β > −1, got α={alpha}, β={beta}"
            )));
        }
        Ok(Self { k, alpha, beta })
    }

    /// Parses decimal strings once; no rounding beyond the binary conversion.
    pub fn parse(k: &str, alpha: &str, beta: &str) -> Result<Self> {
        let k = k
            .trim()
            .parse::<u32>()
            .map_err(|e| Error::Invalid(format!("degree `{k}`: {e}")))?;
        let alpha = parse_real(alpha)?;
        let beta = parse_real(beta)?;
        Self::new(k, alpha, beta)
    }

    /// `k ≥ 1 ∧ α ≥ β ≥ 0`.
    pub fn in_theorem1_domain(&self) -> bool {
        self.k >= 1 && self.alpha >= self.beta && self.beta >= 0.0
    }

    /// `k ≥ 6 ∧ α ≥ β ≥ (1+√2)/4`.
    pub fn in_theorem2_domain(&self) -> bool {
        self.k >= 6 && self.alpha >= self.beta && self.beta >= THEOREM2_MIN_PARAM
    }

    /// True on the closed boundary of `α > β > 0`, where results follow by
    /// continuity rather than directly.
    pub fn is_limiting_case(&self) -> bool {
        self.alpha == self.beta || self.beta == 0.0
    }

    /// The parameters with α and β exchanged (`P_k^{(α,β)}(x) = (−1)^k P_k^{(β,α)}(−x)`).
    pub fn swapped(&self) -> Self {
        Self {
            k: self.k,
            alpha: self.beta,
            beta: self.alpha,
        }
    }
}

impl fmt::Display for JacobiParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(k={}, α={}, β={})", self.k, self.alpha, self.beta)
    }
}

pub(crate) fn parse_real(s: &str) -> Result<f64> {
    let v = s
        .trim()
        .parse::<f64>()
        .map_err(|e| Error::Invalid(format!("real `{s}`: {e}")))?;
    if !v.is_finite() {
        return Err(Error::Invalid(format!("real `{s}` is not finite")));
    }
    Ok(v)
}

/// Reparameterized quantities: `η = α−β`, `σ = α+β`, `r = 2k+α+β+1`,
/// `ρ = r−1`, `q = η/r = sin ω`, `s = σ/r = sin τ`, `sin τ′ = (σ+1)/r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedParams {
    pub params: JacobiParams,
    pub eta: f64,
    pub sigma: f64,
    pub r: f64,
    pub rho: f64,
    pub q: f64,
    pub s: f64,
    pub omega: f64,
    pub tau: f64,
    /// Undefined for `k = 0`, where `(σ+1)/r = 1`.
    pub tau_prime: Option<f64>,
}

impl DerivedParams {
    /// `√((1−q²)(1−s²)) = cos ω cos τ`, the half-width of `[δ₋₁, δ₁]`.
    pub fn radical(&self) -> f64 {
        ((1.0 - self.q * self.q) * (1.0 - self.s * self.s)).sqrt()
    }

    pub fn tau_prime(&self) -> Result<f64> {
        self.tau_prime
            .ok_or_else(|| Error::domain("τ′ is undefined for k = 0"))
    }
}

fn snapped_asin(v: f64) -> f64 {
    if v.abs() < ANGLE_SNAP {
        0.0
    } else {
        v.asin()
    }
}

pub fn derive_params(p: &JacobiParams) -> DerivedParams {
    let k = f64::from(p.k);
    let eta = p.alpha - p.beta;
    let sigma = p.alpha + p.beta;
    let r = 2.0 * k + sigma + 1.0;
    let q = eta / r;
    let s = sigma / r;
    let sin_tau_prime = (sigma + 1.0) / r;
    let tau_prime = if p.k >= 1 && sin_tau_prime < 1.0 {
        Some(sin_tau_prime.asin())
    } else {
        None
    };
    DerivedParams {
        params: *p,
        eta,
        sigma,
        r,
        rho: r - 1.0,
        q,
        s,
        omega: snapped_asin(q),
        tau: snapped_asin(s),
        tau_prime,
    }
}

/// An interval with independently open or closed ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn closed(lo: f64, hi: f64) -> Self {
        Self {
            lo,
            hi,
            lo_closed: true,
            hi_closed: true,
        }
    }

    pub fn open(lo: f64, hi: f64) -> Self {
        Self {
            lo,
            hi,
            lo_closed: false,
            hi_closed: false,
        }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn is_empty(&self) -> bool {
        !(self.lo < self.hi || (self.lo == self.hi && self.lo_closed && self.hi_closed))
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lo_closed { x >= self.lo } else { x > self.lo };
        let below = if self.hi_closed { x <= self.hi } else { x < self.hi };
        above && below
    }

    /// `self ⊂ other` with endpoints strictly inside wherever `other` is open.
    pub fn is_subset_of(&self, other: &Interval) -> bool {
        let lo_ok = if other.lo_closed || !self.lo_closed {
            self.lo >= other.lo
        } else {
            self.lo > other.lo
        };
        let hi_ok = if other.hi_closed || !self.hi_closed {
            self.hi <= other.hi
        } else {
            self.hi < other.hi
        };
        lo_ok && hi_ok
    }

    /// Strict nesting: both endpoints strictly inside `other`.
    pub fn is_strictly_inside(&self, other: &Interval) -> bool {
        self.lo > other.lo && self.hi < other.hi
    }
}

/// `[δ₋₁, δ₁]` computed from the radical formula and from `δⱼ = j·cos(τ + jω)`;
/// the two must agree. The trigonometric value is returned.
pub fn delta_interval(dp: &DerivedParams) -> Result<Interval> {
    let p = &dp.params;
    if !(p.alpha >= p.beta && p.beta >= 0.0) {
        return Err(Error::domain(format!(
            "envelope interval requires α ≥ β ≥ 0, got {p}"
        )));
    }
    let radical = dp.radical();
    let center = -dp.q * dp.s;
    let alg = [center - radical, center + radical];
    let trig = [
        -(dp.tau - dp.omega).cos(),
        (dp.tau + dp.omega).cos(),
    ];
    let scale = dp.q * dp.s + radical;
    for (a, t) in alg.iter().zip(trig.iter()) {
        if (a - t).abs() > DELTA_FORM_TOL * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::Inconsistent {
                what: "radical vs trigonometric δ",
                first: *a,
                second: *t,
            });
        }
    }
    Ok(Interval::closed(trig[0], trig[1]))
}

/// `d(x) = (x−δ₋₁)(δ₁−x) = 1 − q² − s² − 2qsx − x²`.
///
/// Evaluated as `(R − (x+qs))(R + (x+qs))` with `R = √((1−q²)(1−s²))`, which
/// keeps relative accuracy near both roots.
pub fn d_of_x(dp: &DerivedParams, x: f64) -> f64 {
    let (rad, shift) = (dp.radical(), x + dp.q * dp.s);
    (rad - shift) * (rad + shift)
}

#[cfg(test)]
pub(crate) fn d_poly(q: f64, s: f64, x: f64) -> f64 {
    1.0 - q * q - s * s - 2.0 * q * s * x - x * x
}
