//! Bounds in the oscillatory region: the linear forms `μⱼ`, the Wronskian
//! quadratic form `W`, the window `𝒥 = (γ₋₁, γ₁)` on which `μ₋₁μ₁ > 0`, and
//! the checks built on them.

use crate::error::{Error, Result};
use crate::jacobi::{ln_weight, log_norm, standard_derivative, standard_value};
use crate::params::{d_of_x, derive_params, DerivedParams, Interval, JacobiParams};
use crate::quadrature::{integrate, QuadResult};
use crate::signed_log::SignedLog;

/// Grid density for window checks.
pub const WINDOW_GRID: usize = 2000;

/// Slack on the `W`-envelope comparison.
pub const ENVELOPE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscWindow {
    pub gamma_minus: f64,
    pub gamma_plus: f64,
}

impl OscWindow {
    pub fn interval(&self) -> Interval {
        Interval::open(self.gamma_minus, self.gamma_plus)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WValue {
    /// `W(x)` in standard normalization.
    pub raw: f64,
    /// `(1−x)^{α+1}(1+x)^{β+1}W(x)`.
    pub weighted: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub rel_err: f64,
    pub quad: QuadResult,
}

/// Outcome of a grid check; `worst` is the point of largest `lhs/rhs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridCheck {
    pub passed: bool,
    pub worst_x: f64,
    pub worst_lhs: f64,
    pub worst_rhs: f64,
    pub points: usize,
}

impl GridCheck {
    pub fn worst_ratio(&self) -> f64 {
        self.worst_lhs / self.worst_rhs
    }
}

fn require_positive_degree(p: &JacobiParams) -> Result<()> {
    if p.k == 0 {
        Err(Error::domain("oscillatory-region quantities need k ≥ 1 (ρ = σ at k = 0)"))
    } else {
        Ok(())
    }
}

/// `√((ρ²−η²)(ρ²−σ²))`.
fn rho_radical(dp: &DerivedParams) -> f64 {
    let rho2 = dp.rho * dp.rho;
    ((rho2 - dp.eta * dp.eta) * (rho2 - dp.sigma * dp.sigma)).sqrt()
}

/// `μⱼ(x) = (√((ρ²−η²)(ρ²−σ²)) + j(xρ² + ησ))/ρ`.
pub fn mu(dp: &DerivedParams, x: f64, j: i32) -> f64 {
    let jf = f64::from(j.signum());
    (rho_radical(dp) + jf * (x * dp.rho * dp.rho + dp.eta * dp.sigma)) / dp.rho
}

/// `(1−x²)ρ² − 2ησx − η² − σ²`, which equals `μ₋₁μ₁`.
pub fn mu_product_closed_form(dp: &DerivedParams, x: f64) -> f64 {
    (1.0 - x * x) * dp.rho * dp.rho - 2.0 * dp.eta * dp.sigma * x - dp.eta * dp.eta - dp.sigma * dp.sigma
}

/// `𝒥 = (γ₋₁, γ₁)`, `γⱼ = (j√((ρ²−η²)(ρ²−σ²)) − ησ)/ρ²`.
pub fn osc_window(dp: &DerivedParams) -> Result<OscWindow> {
    require_positive_degree(&dp.params)?;
    let rho2 = dp.rho * dp.rho;
    let rad = rho_radical(dp);
    let es = dp.eta * dp.sigma;
    Ok(OscWindow {
        gamma_minus: (-rad - es) / rho2,
        gamma_plus: (rad - es) / rho2,
    })
}

/// `W` scaled: returns `(ln_scale, w)` with `W = w·exp(2·ln_scale)`.
fn w_scaled(p: &JacobiParams, dp: &DerivedParams, x: f64) -> Result<(f64, f64)> {
    let y = standard_value(p.k, p.alpha, p.beta, x)?;
    let y1 = standard_derivative(p, x, 1)?;
    let scale = SignedLog::common_scale(&[y, y1]);
    if scale == f64::NEG_INFINITY {
        return Ok((0.0, 0.0));
    }
    let (ym, y1m) = (y.mantissa_at(scale), y1.mantissa_at(scale));
    let rho2 = dp.rho * dp.rho;
    let w = (rho2 - dp.sigma * dp.sigma) * ym * ym - 4.0 * (dp.eta + dp.sigma * x) * ym * y1m
        + 4.0 * (1.0 - x * x) * y1m * y1m;
    Ok((scale, w))
}

/// `ln((1−x)^{α+1}(1+x)^{β+1}W(x)/𝐡_k²)`; `−∞` where the weight vanishes.
fn ln_weighted_w_over_norm(p: &JacobiParams, dp: &DerivedParams, x: f64) -> Result<f64> {
    let (scale, w) = w_scaled(p, dp, x)?;
    if w <= 0.0 {
        return Err(Error::domain(format!("W(x) = {w} is not positive at x = {x} for {p}")));
    }
    Ok(ln_weight(x, p.alpha + 1.0, p.beta + 1.0)? + w.ln() + 2.0 * (scale - log_norm(p).log_hk))
}

/// `W(x) = (ρ²−σ²)y² − 4(η+σx)yy′ + 4(1−x²)y′²` with `y = P_k^{(α,β)}(x)`.
pub fn eval_w(p: &JacobiParams, x: f64) -> Result<WValue> {
    require_positive_degree(p)?;
    if !(x > -1.0 && x < 1.0) {
        return Err(Error::domain(format!("W needs x ∈ (−1, 1), got {x}")));
    }
    let dp = derive_params(p);
    let (scale, w) = w_scaled(p, &dp, x)?;
    let raw = w * (2.0 * scale).exp();
    let weighted = w * (2.0 * scale + ln_weight(x, p.alpha + 1.0, p.beta + 1.0)?).exp();
    Ok(WValue { raw, weighted })
}

/// `P_{k−1}P_k′ − P_kP_{k−1}′` and `ρ/(2(ρ²−η²))·W`, both divided by
/// `exp(2·scale)`, plus the magnitude of the left-hand terms at that scale.
pub fn wronskian_sides(p: &JacobiParams, x: f64) -> Result<(f64, f64, f64)> {
    require_positive_degree(p)?;
    let dp = derive_params(p);
    let prev = JacobiParams { k: p.k - 1, ..*p };
    let yk = standard_value(p.k, p.alpha, p.beta, x)?;
    let yk1 = standard_derivative(p, x, 1)?;
    let ym = standard_value(prev.k, p.alpha, p.beta, x)?;
    let ym1 = standard_derivative(&prev, x, 1)?;
    let scale = SignedLog::common_scale(&[yk, yk1]);
    let t1 = (ym * yk1).mantissa_at(2.0 * scale);
    let t2 = (yk * ym1).mantissa_at(2.0 * scale);
    let (ws, w) = w_scaled(p, &dp, x)?;
    let rhs = dp.rho / (2.0 * (dp.rho * dp.rho - dp.eta * dp.eta)) * w * (2.0 * (ws - scale)).exp();
    Ok((t1 - t2, rhs, t1.abs() + t2.abs()))
}

/// `√((1−q²)(1−s²))/d(x)`, an upper bound for `(1−x)^α(1+x)^β𝐏_k²` on `𝒥`.
pub fn pointwise_bound(dp: &DerivedParams, x: f64) -> Result<f64> {
    let win = osc_window(dp)?;
    let slack = 1e-14 * (win.gamma_plus - win.gamma_minus);
    if x < win.gamma_minus - slack || x > win.gamma_plus + slack {
        return Err(Error::domain(format!(
            "x = {x} outside 𝒥 = ({}, {})",
            win.gamma_minus, win.gamma_plus
        )));
    }
    Ok(dp.radical() / d_of_x(dp, x))
}

/// Right-hand side of the integral identity divided by `𝐡_k²`:
/// `(ρ²−η²)(ρ²−σ²)/(ρ(ρ−1))`.
fn integral_rhs_over_norm(dp: &DerivedParams) -> f64 {
    let rho2 = dp.rho * dp.rho;
    (rho2 - dp.eta * dp.eta) * (rho2 - dp.sigma * dp.sigma) / (dp.rho * (dp.rho - 1.0))
}

/// `∫₋₁¹ (1−x)^{α+1}(1+x)^{β+1}W dx` by quadrature against
/// `(ρ²−η²)(ρ²−σ²)/(ρ(ρ−1))·𝐡_k²`. The comparison happens in units of `𝐡_k²`;
/// `lhs`/`rhs` are reported in standard normalization.
pub fn check_integral_identity(p: &JacobiParams, tol: f64) -> Result<IntegralCheck> {
    require_positive_degree(p)?;
    let dp = derive_params(p);
    let f = |x: f64| match ln_weighted_w_over_norm(p, &dp, x) {
        Ok(l) => l.exp(),
        Err(_) => 0.0,
    };
    let quad = integrate(f, -1.0, 1.0, tol, tol * 1e-6)?;
    let rhs = integral_rhs_over_norm(&dp);
    let rel_err = (quad.value - rhs).abs() / rhs;
    let h2 = log_norm(p).log_hk_sq().exp();
    if !quad.converged {
        return Err(Error::Inconsistent {
            what: "integral quadrature did not converge (value, error estimate)",
            first: quad.value * h2,
            second: quad.err_estimate * h2,
        });
    }
    Ok(IntegralCheck {
        lhs: quad.value * h2,
        rhs: rhs * h2,
        rel_err,
        quad,
    })
}

/// `n` Chebyshev points of the first kind in the open interval.
pub fn chebyshev_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
    (0..n)
        .map(|i| {
            let theta = std::f64::consts::PI * (i as f64 + 0.5) / n as f64;
            mid - half * theta.cos()
        })
        .collect()
}

/// `(1−x)^{α+1}(1+x)^{β+1}W ≤ ρ√((ρ²−η²)(ρ²−σ²))/(ρ−1)·𝐡_k²` on the grid of `𝒥`.
pub fn w_envelope_check(p: &JacobiParams) -> Result<GridCheck> {
    let dp = derive_params(p);
    let win = osc_window(&dp)?;
    let ln_bound = (dp.rho * rho_radical(&dp) / (dp.rho - 1.0)).ln();
    let mut out = GridCheck {
        passed: true,
        worst_x: f64::NAN,
        worst_lhs: f64::NEG_INFINITY,
        worst_rhs: f64::NAN,
        points: 0,
    };
    let mut worst_gap = f64::NEG_INFINITY;
    for x in chebyshev_grid(win.gamma_minus, win.gamma_plus, WINDOW_GRID) {
        let ln_lhs = ln_weighted_w_over_norm(p, &dp, x)?;
        let gap = ln_lhs - ln_bound;
        out.points += 1;
        if gap > ENVELOPE_SLACK.ln_1p() {
            out.passed = false;
        }
        if gap > worst_gap {
            worst_gap = gap;
            out.worst_x = x;
            out.worst_lhs = ln_lhs.exp();
            out.worst_rhs = ln_bound.exp();
        }
    }
    Ok(out)
}

/// `(1−x)^α(1+x)^β𝐏_k² < √((1−q²)(1−s²))/d(x)` strictly on the grid of `𝒥`.
pub fn pointwise_bound_check(p: &JacobiParams) -> Result<GridCheck> {
    let dp = derive_params(p);
    let win = osc_window(&dp)?;
    let mut out = GridCheck {
        passed: true,
        worst_x: f64::NAN,
        worst_lhs: 0.0,
        worst_rhs: f64::NAN,
        points: 0,
    };
    let mut worst_ratio = f64::NEG_INFINITY;
    for x in chebyshev_grid(win.gamma_minus, win.gamma_plus, WINDOW_GRID) {
        let lhs = crate::jacobi::eval_weighted_sq(p, x, p.alpha, p.beta)?;
        let rhs = pointwise_bound(&dp, x)?;
        out.points += 1;
        if !(lhs < rhs) {
            out.passed = false;
        }
        if lhs / rhs > worst_ratio {
            worst_ratio = lhs / rhs;
            out.worst_x = x;
            out.worst_lhs = lhs;
            out.worst_rhs = rhs;
        }
    }
    Ok(out)
}

/// `y² < (1−x²)W/(μ₋₁μ₁)` on the grid of `𝒥`; both sides share the scale of
/// `y`, `y′`.
pub fn solution_bound_check(p: &JacobiParams) -> Result<GridCheck> {
    let dp = derive_params(p);
    let win = osc_window(&dp)?;
    let mut out = GridCheck {
        passed: true,
        worst_x: f64::NAN,
        worst_lhs: 0.0,
        worst_rhs: f64::NAN,
        points: 0,
    };
    let mut worst_ratio = f64::NEG_INFINITY;
    for x in chebyshev_grid(win.gamma_minus, win.gamma_plus, WINDOW_GRID) {
        let y = standard_value(p.k, p.alpha, p.beta, x)?;
        let (scale, w) = w_scaled(p, &dp, x)?;
        let ym = y.mantissa_at(scale);
        let lhs = ym * ym;
        let rhs = (1.0 - x * x) * w / (mu(&dp, x, -1) * mu(&dp, x, 1));
        out.points += 1;
        if !(lhs < rhs) {
            out.passed = false;
        }
        if lhs / rhs > worst_ratio {
            worst_ratio = lhs / rhs;
            out.worst_x = x;
            out.worst_lhs = lhs;
            out.worst_rhs = rhs;
        }
    }
    Ok(out)
}
