//! Theorem-level checks, identity suites, conjecture metrics and parameter
//! sweeps. Every check produces a [`ReportItem`]; sweeps never stop early.

use std::collections::BTreeMap;
use std::f64::consts::{E, FRAC_2_PI, PI};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::extrema::{
    cos_ratio, find_local_maxima, global_max, inclusion_chain_holds, localization_windows,
    resolution,
};
use crate::jacobi::{eval_m, eval_weighted_sq, eval_z, standard_derivative, standard_value};
use crate::osc::{
    check_integral_identity, mu, mu_product_closed_form, pointwise_bound_check, w_envelope_check,
    wronskian_sides,
};
use crate::params::{delta_interval, derive_params, Interval, JacobiParams};
use crate::quadrature::integrate;
use crate::signed_log::SignedLog;
use crate::sonin::{d_at_delta_closed_form, d_coefficients, d_poly_value, find_x0, sonin_point, sonin_s, X0Path};

pub const TOL_DJ: f64 = 1e-9;
pub const TOL_MU_PRODUCT: f64 = 1e-12;
pub const TOL_ODE: f64 = 1e-9;
pub const TOL_WRONSKIAN: f64 = 1e-10;
pub const TOL_INTEGRAL: f64 = 1e-6;

/// Requested accuracy of the quadratures behind the integral identity and the mass.
pub const QUAD_TOL: f64 = 1e-10;

/// Interior points per parameter set for pointwise identities.
pub const IDENTITY_POINTS: usize = 64;

/// Interior samples per parameter set for the finite-difference sign test of `S`.
pub const SONIN_FD_SAMPLES: usize = 100;

/// Step of the centered difference of `S`, relative to `δ₁ − δ₋₁`. `S′` is
/// proportional to `Z′²`, so much smaller steps drown in the rounding of `S`.
/// `S` is monotone wherever `D` keeps its sign, so the wide step is safe away
/// from `x₀`.
pub const SONIN_FD_STEP: f64 = 1e-3;

/// Samples where `|Z′|` is at most this are excluded from the sign test.
pub const SONIN_MIN_ZPRIME: f64 = 1e-8;

/// Rounding allowance on `max Z² ≤ S(x₀)`.
pub const SONIN_ENVELOPE_SLACK: f64 = 1e-12;

pub const MIN_SAMPLES: usize = 1000;

pub fn theorem1_bound() -> f64 {
    3f64.sqrt() / 5f64.powf(0.25)
}

/// `3α^{1/3}(1+α/k)^{1/6}`.
pub fn theorem2_bound(p: &JacobiParams) -> f64 {
    3.0 * p.alpha.cbrt() * (1.0 + p.alpha / f64::from(p.k)).powf(1.0 / 6.0)
}

/// `2e(2+√(α²+β²))/π`, valid for every `k ≥ 0`.
pub fn baseline_bound(p: &JacobiParams) -> f64 {
    2.0 * E * (2.0 + p.alpha.hypot(p.beta)) / PI
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Theorem1,
    Theorem2,
    Identities,
    Grmax,
    Sonin,
    Oscillatory,
}

impl Check {
    pub const ALL: [Check; 6] = [
        Check::Theorem1,
        Check::Theorem2,
        Check::Identities,
        Check::Grmax,
        Check::Sonin,
        Check::Oscillatory,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Theorem1 => "theorem1",
            Check::Theorem2 => "theorem2",
            Check::Identities => "identities",
            Check::Grmax => "grmax",
            Check::Sonin => "sonin",
            Check::Oscillatory => "oscillatory",
        }
    }

    /// Human-readable hypothesis of the check.
    pub fn hypothesis(self) -> &'static str {
        match self {
            Check::Theorem1 => "theorem1 requires k ≥ 1, α ≥ β ≥ 0",
            Check::Theorem2 | Check::Grmax => "theorem2 requires k ≥ 6, α ≥ β ≥ (1+√2)/4",
            Check::Identities | Check::Oscillatory => "identities require k ≥ 1, α ≥ β ≥ 0",
            Check::Sonin => "sonin requires k ≥ 1, α > β > 0",
        }
    }

    pub fn applies_to(self, p: &JacobiParams) -> bool {
        match self {
            Check::Theorem1 | Check::Identities | Check::Oscillatory => p.in_theorem1_domain(),
            Check::Theorem2 | Check::Grmax => p.in_theorem2_domain(),
            Check::Sonin => p.k >= 1 && p.alpha > p.beta && p.beta > 0.0,
        }
    }

    fn require(self, p: &JacobiParams) -> Result<()> {
        if self.applies_to(p) {
            Ok(())
        } else {
            Err(Error::domain(format!("{}; got {p}", self.hypothesis())))
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown check `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportItem {
    pub params: JacobiParams,
    pub check: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `(rhs − lhs)/rhs`
    pub margin: f64,
    pub pass: bool,
    pub skipped: bool,
    pub witness_x: Option<f64>,
    pub note: Option<String>,
    pub extras: BTreeMap<String, f64>,
}

impl ReportItem {
    fn new(p: &JacobiParams, check: impl Into<String>, lhs: f64, rhs: f64, pass: bool) -> Self {
        Self {
            params: *p,
            check: check.into(),
            lhs,
            rhs,
            margin: (rhs - lhs) / rhs,
            pass,
            skipped: false,
            witness_x: None,
            note: None,
            extras: BTreeMap::new(),
        }
    }

    /// A strict upper-bound comparison `lhs < rhs`.
    fn bound(p: &JacobiParams, check: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Self::new(p, check, lhs, rhs, lhs < rhs)
    }

    fn with_witness(mut self, x: f64) -> Self {
        self.witness_x = Some(x);
        self
    }

    fn extra(mut self, key: &str, value: f64) -> Self {
        self.extras.insert(key.to_string(), value);
        self
    }

    pub fn skipped(p: &JacobiParams, check: &str, reason: &str) -> Self {
        let mut item = Self::new(p, check, f64::NAN, f64::NAN, false);
        item.skipped = true;
        item.margin = f64::NAN;
        item.note = Some(reason.to_string());
        item
    }

    pub fn errored(p: &JacobiParams, check: &str, err: &Error) -> Self {
        let mut item = Self::new(p, check, f64::NAN, f64::NAN, false);
        item.margin = f64::NAN;
        item.note = Some(err.to_string());
        item
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    /// Grid points outside every requested check's domain.
    pub filtered: usize,
    pub min_margin: Option<f64>,
    /// No item was evaluated.
    pub empty: bool,
}

impl Summary {
    pub fn of(items: &[ReportItem], filtered: usize) -> Self {
        let skipped = items.iter().filter(|i| i.skipped).count();
        let passed = items.iter().filter(|i| !i.skipped && i.pass).count();
        let failed = items.len() - skipped - passed;
        let min_margin = items
            .iter()
            .filter(|i| !i.skipped && !i.margin.is_nan())
            .map(|i| i.margin)
            .reduce(f64::min);
        Self {
            total: items.len(),
            passed,
            failed,
            skipped,
            filtered,
            min_margin,
            empty: passed + failed == 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSpec {
    pub k_values: Vec<u32>,
    pub alpha_values: Vec<f64>,
    pub beta_values: Vec<f64>,
    pub checks: Vec<Check>,
    pub samples: usize,
    pub seed: u64,
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if self.k_values.is_empty() || self.alpha_values.is_empty() || self.beta_values.is_empty() {
            return Err(Error::Invalid("grid lists must be non-empty".into()));
        }
        if self.checks.is_empty() {
            return Err(Error::Invalid("no checks requested".into()));
        }
        if self.samples < MIN_SAMPLES {
            return Err(Error::Invalid(format!(
                "samples must be at least {MIN_SAMPLES}, got {}",
                self.samples
            )));
        }
        for &v in self.alpha_values.iter().chain(&self.beta_values) {
            if !(v.is_finite() && v > -1.0) {
                return Err(Error::domain(format!("weight exponent {v} must be finite and > −1")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub items: Vec<ReportItem>,
    pub summary: Summary,
}

impl VerificationReport {
    pub fn from_items(mut items: Vec<ReportItem>, filtered: usize) -> Self {
        sort_items(&mut items);
        let summary = Summary::of(&items, filtered);
        Self { items, summary }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }
}

fn sort_items(items: &mut [ReportItem]) {
    items.sort_by(|a, b| {
        a.params
            .k
            .cmp(&b.params.k)
            .then(a.params.alpha.total_cmp(&b.params.alpha))
            .then(a.params.beta.total_cmp(&b.params.beta))
            .then(a.check.cmp(&b.check))
    });
}

/// `max |Z|` over `[δ₋₁, δ₁]` against `5^{−1/4}√3`.
pub fn verify_theorem1(p: &JacobiParams, samples: usize) -> Result<ReportItem> {
    Check::Theorem1.require(p)?;
    let iv = delta_interval(&derive_params(p))?;
    let g = global_max(|x| Ok(eval_z(p, x)?.powi(2)), &iv, resolution(p.k, samples))?;
    Ok(ReportItem::bound(p, "theorem1", g.value.sqrt(), theorem1_bound())
        .with_witness(g.x_star)
        .extra("max_z_sq", g.value))
}

/// `𝓜 = max M` over `[−1, 1]` against `3α^{1/3}(1+α/k)^{1/6}`; the older
/// bound is recorded alongside.
pub fn verify_theorem2(p: &JacobiParams, samples: usize) -> Result<ReportItem> {
    Check::Theorem2.require(p)?;
    let g = global_max(|x| eval_m(p, x), &Interval::closed(-1.0, 1.0), resolution(p.k, samples))?;
    let new_bound = theorem2_bound(p);
    let baseline = baseline_bound(p);
    Ok(ReportItem::bound(p, "theorem2", g.value, new_bound)
        .with_witness(g.x_star)
        .extra("baseline_bound", baseline)
        .extra("new_bound_smaller", f64::from(u8::from(new_bound < baseline)))
        .extra("below_baseline", f64::from(u8::from(g.value < baseline))))
}

/// Every local maximum of `M` lies in `(N′₋₁, N′₁)` and the windows nest.
pub fn verify_grmax(p: &JacobiParams, samples: usize) -> Result<ReportItem> {
    Check::Grmax.require(p)?;
    let dp = derive_params(p);
    let w = localization_windows(&dp)?;
    let chain = inclusion_chain_holds(&dp, &w)?;
    let maxima = find_local_maxima(|x| eval_m(p, x), &Interval::closed(-1.0, 1.0), resolution(p.k, samples))?;
    let (center, half) = (w.n_prime.midpoint(), 0.5 * w.n_prime.width());
    let outer = maxima
        .points
        .iter()
        .max_by(|a, b| (a.x - center).abs().total_cmp(&(b.x - center).abs()))
        .ok_or_else(|| Error::Invalid(format!("no local maximum of M located for {p}")))?;
    let all_inside = maxima.points.iter().all(|e| w.n_prime.contains(e.x));
    let mut item = ReportItem::new(p, "grmax", (outer.x - center).abs(), half, all_inside && chain)
        .with_witness(outer.x)
        .extra("maxima", maxima.points.len() as f64)
        .extra("chain_holds", f64::from(u8::from(chain)))
        .extra("cos_ratio", cos_ratio(&dp)?)
        .extra("n_prime_lo", w.n_prime.lo)
        .extra("n_prime_hi", w.n_prime.hi)
        .extra("n_lo", w.n.lo)
        .extra("n_hi", w.n.hi);
    if maxima.points.len() != p.k as usize + 1 {
        item.note = Some(format!("observed {} local maxima, expected k+1", maxima.points.len()));
    }
    Ok(item)
}

/// Deterministic interior points of `(lo, hi)` from the golden-ratio sequence.
fn golden_points(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    (1..=n)
        .map(|i| lo + (hi - lo) * (i as f64 * g).fract())
        .collect()
}

struct Worst {
    err: f64,
    x: f64,
}

impl Worst {
    fn new() -> Self {
        Self { err: 0.0, x: f64::NAN }
    }

    fn update(&mut self, err: f64, x: f64) {
        if err > self.err || self.x.is_nan() || err.is_nan() {
            self.err = err;
            self.x = x;
        }
    }

    fn item(&self, p: &JacobiParams, check: &str, tol: f64) -> ReportItem {
        ReportItem::bound(p, check, self.err, tol).with_witness(self.x)
    }
}

fn relative(residual: f64, size: f64) -> f64 {
    if size == 0.0 {
        residual.abs()
    } else {
        residual.abs() / size
    }
}

/// `D(δⱼ)` from its polynomial against the closed form, relative to the sum
/// of the magnitudes of the polynomial's terms.
fn identity_dj(p: &JacobiParams) -> Result<ReportItem> {
    let dp = derive_params(p);
    let iv = delta_interval(&dp)?;
    let coeffs = d_coefficients(dp.q, dp.s);
    let mut worst = Worst::new();
    for (j, x) in [(-1, iv.lo), (1, iv.hi)] {
        let poly = d_poly_value(dp.q, dp.s, x);
        let size: f64 = coeffs.iter().enumerate().map(|(i, c)| (c * x.powi(i as i32)).abs()).sum();
        worst.update(relative(poly - d_at_delta_closed_form(&dp, j), size), x);
    }
    Ok(worst.item(p, "identities.dj", TOL_DJ))
}

fn identity_mu_product(p: &JacobiParams) -> Result<ReportItem> {
    let dp = derive_params(p);
    let rho2 = dp.rho * dp.rho;
    let mut worst = Worst::new();
    for x in golden_points(-1.0, 1.0, IDENTITY_POINTS) {
        let size = (1.0 - x * x) * rho2
            + (2.0 * dp.eta * dp.sigma * x).abs()
            + dp.eta * dp.eta
            + dp.sigma * dp.sigma;
        let residual = mu(&dp, x, -1) * mu(&dp, x, 1) - mu_product_closed_form(&dp, x);
        worst.update(relative(residual, size), x);
    }
    Ok(worst.item(p, "identities.mu_product", TOL_MU_PRODUCT))
}

/// `(1−x²)y″ + (β−α−(α+β+2)x)y′ + k(k+α+β+1)y = 0`.
fn identity_ode(p: &JacobiParams) -> Result<ReportItem> {
    let (a, b, k) = (p.alpha, p.beta, f64::from(p.k));
    let mut worst = Worst::new();
    for x in golden_points(-1.0, 1.0, IDENTITY_POINTS) {
        let y = standard_value(p.k, a, b, x)?;
        let y1 = standard_derivative(p, x, 1)?;
        let y2 = standard_derivative(p, x, 2)?;
        let scale = SignedLog::common_scale(&[y, y1, y2]);
        let terms = [
            (1.0 - x * x) * y2.mantissa_at(scale),
            (b - a - (a + b + 2.0) * x) * y1.mantissa_at(scale),
            k * (k + a + b + 1.0) * y.mantissa_at(scale),
        ];
        let size: f64 = terms.iter().map(|t| t.abs()).sum();
        worst.update(relative(terms.iter().sum(), size), x);
    }
    Ok(worst.item(p, "identities.ode", TOL_ODE))
}

fn identity_wronskian(p: &JacobiParams) -> Result<ReportItem> {
    let mut worst = Worst::new();
    for x in golden_points(-1.0, 1.0, IDENTITY_POINTS) {
        let (lhs, rhs, size) = wronskian_sides(p, x)?;
        worst.update(relative(lhs - rhs, size), x);
    }
    Ok(worst.item(p, "identities.wronskian", TOL_WRONSKIAN))
}

fn identity_integral(p: &JacobiParams) -> Result<ReportItem> {
    let r = check_integral_identity(p, QUAD_TOL)?;
    Ok(ReportItem::bound(p, "identities.integral", r.rel_err, TOL_INTEGRAL)
        .extra("integral", r.lhs)
        .extra("closed_form", r.rhs)
        .extra("panels", r.quad.panels as f64))
}

type IdentityFn = fn(&JacobiParams) -> Result<ReportItem>;

/// The five identity checks, each as its own item.
pub fn verify_identities(p: &JacobiParams) -> Vec<ReportItem> {
    let checks: [(&str, IdentityFn); 5] = [
        ("identities.dj", identity_dj),
        ("identities.mu_product", identity_mu_product),
        ("identities.ode", identity_ode),
        ("identities.wronskian", identity_wronskian),
        ("identities.integral", identity_integral),
    ];
    if let Err(e) = Check::Identities.require(p) {
        return checks.iter().map(|(name, _)| ReportItem::errored(p, name, &e)).collect();
    }
    checks
        .iter()
        .map(|(name, f)| f(p).unwrap_or_else(|e| ReportItem::errored(p, name, &e)))
        .collect()
}

/// Outcome of the Sonin analysis for one parameter set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SoninReport {
    pub x0: f64,
    pub theta: f64,
    pub bracket_lo: f64,
    pub bracket_hi: f64,
    pub bracket_path: bool,
    /// `D > 0` at the bracket's left end and `D < 0` at its right end.
    pub sign_change: bool,
    pub s_at_x0: f64,
    pub max_z_sq: f64,
    pub argmax: f64,
    pub fd_checked: usize,
    pub fd_mismatches: usize,
    pub first_mismatch: Option<f64>,
}

impl SoninReport {
    pub fn max_abs_z(&self) -> f64 {
        self.max_z_sq.sqrt()
    }

    /// `(S(x₀) − max Z²)/S(x₀)`
    pub fn relative_gap(&self) -> f64 {
        (self.s_at_x0 - self.max_z_sq) / self.s_at_x0
    }
}

/// Locates `x₀`, compares `S(x₀)` with `max Z²`, and checks that the centered
/// difference of `S` has the sign of `D` at interior samples.
pub fn sonin_analysis(p: &JacobiParams, samples: usize) -> Result<SoninReport> {
    if !p.in_theorem1_domain() {
        return Err(Error::domain(format!("{}; got {p}", Check::Theorem1.hypothesis())));
    }
    let dp = derive_params(p);
    let iv = delta_interval(&dp)?;
    let x0 = find_x0(&dp)?;
    let (q, s) = (dp.q, dp.s);
    let sign_change = d_poly_value(q, s, x0.bracket.lo) > 0.0 && d_poly_value(q, s, x0.bracket.hi) < 0.0;
    let g = global_max(|x| Ok(eval_z(p, x)?.powi(2)), &iv, resolution(p.k, samples))?;
    let s_at_x0 = if x0.x0 > iv.lo && x0.x0 < iv.hi {
        sonin_s(p, x0.x0)?
    } else {
        f64::NAN
    };

    let h = SONIN_FD_STEP * iv.width();
    let (mut checked, mut mismatches, mut first_mismatch) = (0, 0, None);
    for i in 0..SONIN_FD_SAMPLES {
        let x = iv.lo + iv.width() * (i as f64 + 0.5) / SONIN_FD_SAMPLES as f64;
        let pt = sonin_point(p, &dp, x)?;
        let d = d_poly_value(q, s, x);
        let stencil_same_sign = d_poly_value(q, s, x - h).signum() == d.signum()
            && d_poly_value(q, s, x + h).signum() == d.signum();
        if pt.z_prime.abs() <= SONIN_MIN_ZPRIME || d == 0.0 || !stencil_same_sign {
            continue;
        }
        let ds = sonin_point(p, &dp, x + h)?.s - sonin_point(p, &dp, x - h)?.s;
        checked += 1;
        if ds.signum() != d.signum() {
            mismatches += 1;
            first_mismatch.get_or_insert(x);
        }
    }
    Ok(SoninReport {
        x0: x0.x0,
        theta: x0.theta,
        bracket_lo: x0.bracket.lo,
        bracket_hi: x0.bracket.hi,
        bracket_path: x0.path == X0Path::Bracket,
        sign_change,
        s_at_x0,
        max_z_sq: g.value,
        argmax: g.x_star,
        fd_checked: checked,
        fd_mismatches: mismatches,
        first_mismatch,
    })
}

/// Passes when `x₀` comes from a certified bracket sign change, `θ ∈ (0, ⅔)`,
/// every difference of `S` has the sign of `D`, and `max Z² ≤ S(x₀)`.
pub fn verify_sonin(p: &JacobiParams, samples: usize) -> Result<ReportItem> {
    Check::Sonin.require(p)?;
    let r = sonin_analysis(p, samples)?;
    let envelope_ok = r.max_z_sq <= r.s_at_x0 * (1.0 + SONIN_ENVELOPE_SLACK);
    let theta_ok = r.theta > 0.0 && r.theta < 2.0 / 3.0;
    let pass = r.bracket_path && r.sign_change && theta_ok && r.fd_mismatches == 0 && envelope_ok;
    let mut item = ReportItem::new(p, "sonin", r.max_z_sq, r.s_at_x0, pass)
        .with_witness(r.first_mismatch.unwrap_or(r.argmax))
        .extra("x0", r.x0)
        .extra("theta", r.theta)
        .extra("fd_checked", r.fd_checked as f64)
        .extra("fd_mismatches", r.fd_mismatches as f64)
        .extra("bracket_path", f64::from(u8::from(r.bracket_path)))
        .extra("sign_change", f64::from(u8::from(r.sign_change)));
    if !pass {
        item.note = Some(format!(
            "bracket={} sign_change={} theta_ok={theta_ok} fd_mismatches={} envelope_ok={envelope_ok}",
            r.bracket_path, r.sign_change, r.fd_mismatches
        ));
    }
    Ok(item)
}

/// The pointwise bound and the `W`-envelope on the grid of `𝒥`, as two items.
pub fn verify_oscillatory(p: &JacobiParams) -> Vec<ReportItem> {
    let names = ["oscillatory.pointwise", "oscillatory.w_envelope"];
    if let Err(e) = Check::Oscillatory.require(p) {
        return names.iter().map(|n| ReportItem::errored(p, n, &e)).collect();
    }
    let as_item = |name: &str, r: Result<crate::osc::GridCheck>| match r {
        Ok(g) => ReportItem::new(p, name, g.worst_lhs, g.worst_rhs, g.passed)
            .with_witness(g.worst_x)
            .extra("points", g.points as f64),
        Err(e) => ReportItem::errored(p, name, &e),
    };
    vec![
        as_item(names[0], pointwise_bound_check(p)),
        as_item(names[1], w_envelope_check(p)),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConjectureMetrics {
    /// `max √d·w·𝐏_k²` over `[δ₋₁, δ₁]`, divided by `2/π`.
    pub plateau_ratio: f64,
    pub plateau_argmax: f64,
    /// `∫ w·𝐏_k²` over `[δ₋₁, δ₁]`.
    pub mass: f64,
    pub mass_err_estimate: f64,
}

pub fn conjecture_metrics(p: &JacobiParams, samples: usize) -> Result<ConjectureMetrics> {
    if !p.in_theorem1_domain() {
        return Err(Error::domain(format!(
            "conjecture metrics require k ≥ 1, α ≥ β ≥ 0; got {p}"
        )));
    }
    let iv = delta_interval(&derive_params(p))?;
    let g = global_max(|x| Ok(eval_z(p, x)?.powi(2)), &iv, resolution(p.k, samples))?;
    let quad = integrate(
        |x| eval_weighted_sq(p, x, p.alpha, p.beta).unwrap_or(f64::NAN),
        iv.lo,
        iv.hi,
        QUAD_TOL,
        QUAD_TOL * 1e-3,
    )?;
    if !quad.converged || !quad.value.is_finite() {
        return Err(Error::Inconsistent {
            what: "mass quadrature did not converge (value, error estimate)",
            first: quad.value,
            second: quad.err_estimate,
        });
    }
    Ok(ConjectureMetrics {
        plateau_ratio: g.value / FRAC_2_PI,
        plateau_argmax: g.x_star,
        mass: quad.value,
        mass_err_estimate: quad.err_estimate,
    })
}

/// Items for one parameter set and check.
pub fn run_check(check: Check, p: &JacobiParams, samples: usize) -> Vec<ReportItem> {
    let single = |r: Result<ReportItem>| vec![r.unwrap_or_else(|e| ReportItem::errored(p, check.name(), &e))];
    match check {
        Check::Theorem1 => single(verify_theorem1(p, samples)),
        Check::Theorem2 => single(verify_theorem2(p, samples)),
        Check::Grmax => single(verify_grmax(p, samples)),
        Check::Sonin => single(verify_sonin(p, samples)),
        Check::Identities => verify_identities(p),
        Check::Oscillatory => verify_oscillatory(p),
    }
}

/// Runs the requested checks over the Cartesian grid. Pairs with `β > α` are
/// recorded as skipped; other points outside a check's domain are dropped and
/// counted in `summary.filtered`.
pub fn sweep(g: &GridSpec) -> Result<VerificationReport> {
    g.validate()?;
    let mut tasks = Vec::new();
    let mut items = Vec::new();
    let mut filtered = 0;
    for &k in &g.k_values {
        for &alpha in &g.alpha_values {
            for &beta in &g.beta_values {
                let p = JacobiParams::new(k, alpha, beta)?;
                for &check in &g.checks {
                    if beta > alpha {
                        items.push(ReportItem::skipped(&p, check.name(), "β > α (covered by symmetry)"));
                    } else if check.applies_to(&p) {
                        tasks.push((check, p));
                    } else {
                        filtered += 1;
                    }
                }
            }
        }
    }
    let evaluated: Vec<ReportItem> = tasks
        .par_iter()
        .flat_map_iter(|(check, p)| run_check(*check, p, g.samples))
        .collect();
    items.extend(evaluated);
    Ok(VerificationReport::from_items(items, filtered))
}

/// Runs checks on an explicit list of parameter sets.
pub fn run_on(params: &[JacobiParams], checks: &[Check], samples: usize) -> VerificationReport {
    let tasks: Vec<(Check, JacobiParams)> = params
        .iter()
        .flat_map(|p| checks.iter().map(move |c| (*c, *p)))
        .collect();
    let items = tasks
        .par_iter()
        .flat_map_iter(|(check, p)| run_check(*check, p, samples))
        .collect();
    VerificationReport::from_items(items, 0)
}

/// Seeded parameter sets with `1 ≤ k ≤ k_max` and `0 ≤ β ≤ α ≤ param_max`;
/// with `strict`, `α > β > 0`.
pub fn random_param_sets(n: usize, seed: u64, k_max: u32, param_max: f64, strict: bool) -> Vec<JacobiParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let k = rng.random_range(1..=k_max);
        let a: f64 = rng.random_range(0.0..param_max);
        let b: f64 = rng.random_range(0.0..param_max);
        let (alpha, beta) = if a >= b { (a, b) } else { (b, a) };
        if strict && !(alpha > beta && beta > 0.0) {
            continue;
        }
        out.push(JacobiParams { k, alpha, beta });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params(k: u32, a: f64, b: f64) -> JacobiParams {
        JacobiParams::new(k, a, b).unwrap()
    }

    #[test]
    fn bound_constants() {
        assert_relative_eq!(theorem1_bound(), 1.158_292_185_288_269, max_relative = 1e-15);
        assert_relative_eq!(theorem1_bound().powi(2), 3.0 * 5f64.sqrt() / 5.0, max_relative = 1e-15);
        let p = params(6, 1.0, 1.0);
        assert_relative_eq!(theorem2_bound(&p), 3.0 * (7.0f64 / 6.0).powf(1.0 / 6.0), max_relative = 1e-15);
        assert_relative_eq!(theorem2_bound(&p), 3.078, epsilon = 5e-4);
        assert_relative_eq!(baseline_bound(&p), 5.908, epsilon = 5e-4);
    }

    #[test]
    fn theorem1_legendre_degree_one() {
        let item = verify_theorem1(&params(1, 0.0, 0.0), 1000).unwrap();
        assert_relative_eq!(item.lhs, 3f64.powf(-0.25), max_relative = 1e-12);
        assert!(item.pass && item.margin > 0.3);
        assert_relative_eq!(item.witness_x.unwrap().abs(), (2.0f64 / 3.0).sqrt(), epsilon = 1e-7);
    }

    #[test]
    fn theorem1_examples_and_domain() {
        assert!(verify_theorem1(&params(10, 25.0, 3.0), 2000).unwrap().pass);
        let err = verify_theorem1(&params(3, 1.0, 2.0), 1000).unwrap_err();
        assert!(err.to_string().contains("theorem1 requires k ≥ 1, α ≥ β ≥ 0"));
    }

    #[test]
    fn theorem2_examples() {
        let item = verify_theorem2(&params(6, 1.0, 1.0), 1000).unwrap();
        assert!(item.pass);
        assert_eq!(item.extras["new_bound_smaller"], 1.0);
        let item = verify_theorem2(&params(6, 100.0, 100.0), 1000).unwrap();
        assert!(item.pass);
        assert!(item.rhs < item.extras["baseline_bound"]);
        assert!(verify_theorem2(&params(20, 5.0, 1.0), 1000).unwrap().pass);
        let err = verify_theorem2(&params(5, 1.0, 1.0), 1000).unwrap_err();
        assert!(err.to_string().contains("theorem2 requires k ≥ 6, α ≥ β ≥ (1+√2)/4"));
    }

    #[test]
    fn grmax_k6() {
        let item = verify_grmax(&params(6, 1.0, 1.0), 1000).unwrap();
        assert!(item.pass, "{item:?}");
        assert_eq!(item.extras["maxima"], 7.0);
        assert!(item.extras["cos_ratio"] > 12.0 / 13.0);
    }

    #[test]
    fn identities_examples() {
        for p in [params(1, 0.0, 0.0), params(1, 2.0, 1.0), params(7, 3.3, 0.7)] {
            let items = verify_identities(&p);
            assert_eq!(items.len(), 5);
            for it in &items {
                assert!(it.pass, "{p} {it:?}");
            }
        }
        // degree one: y″ = 0 and the rest cancels up to rounding
        let ode = &verify_identities(&params(1, 2.0, 1.0))[2];
        assert!(ode.lhs < 1e-15);
        let integral = &verify_identities(&params(1, 0.0, 0.0))[4];
        assert_relative_eq!(integral.extras["integral"], 16.0 / 3.0, max_relative = 1e-13);
    }

    #[test]
    fn sonin_example() {
        let item = verify_sonin(&params(1, 2.0, 1.0), 1000).unwrap();
        assert!(item.pass, "{item:?}");
        let theta = item.extras["theta"];
        assert!(theta > 0.0 && theta < 2.0 / 3.0);
        assert!(item.lhs <= item.rhs);
        assert!(verify_sonin(&params(3, 1.0, 1.0), 1000).is_err());
    }

    #[test]
    fn oscillatory_example() {
        for it in verify_oscillatory(&params(6, 1.0, 1.0)) {
            assert!(it.pass, "{it:?}");
        }
    }

    #[test]
    fn conjecture_mass_bounded() {
        let m = conjecture_metrics(&params(10, 2.0, 1.0), 1000).unwrap();
        assert!(m.mass <= 1.0 + 1e-8 && m.mass > 0.5);
        assert!(m.plateau_ratio > 0.5 && m.plateau_ratio < 2.0);
        assert!(conjecture_metrics(&params(10, 1.0, 2.0), 1000).is_err());
    }

    #[test]
    fn sweep_skips_and_sorts() {
        let g = GridSpec {
            k_values: vec![2, 1],
            alpha_values: vec![1.0, 0.0],
            beta_values: vec![0.0, 1.0],
            checks: vec![Check::Theorem1],
            samples: 1000,
            seed: 1,
        };
        let r = sweep(&g).unwrap();
        assert_eq!(r.summary.total, 8);
        assert_eq!(r.summary.skipped, 2);
        assert_eq!(r.summary.passed, 6);
        assert!(r.all_passed());
        assert!(r.items.windows(2).all(|w| (w[0].params.k, w[0].params.alpha) <= (w[1].params.k, w[1].params.alpha)));
        assert_eq!(format!("{r:?}"), format!("{:?}", sweep(&g).unwrap()));
    }

    #[test]
    fn sweep_empty_after_filtering() {
        let g = GridSpec {
            k_values: vec![1, 2],
            alpha_values: vec![1.0],
            beta_values: vec![1.0],
            checks: vec![Check::Theorem2],
            samples: 1000,
            seed: 0,
        };
        let r = sweep(&g).unwrap();
        assert!(r.summary.empty);
        assert_eq!(r.summary.filtered, 2);
        assert!(r.items.is_empty());
    }

    #[test]
    fn grid_validation() {
        let mut g = GridSpec {
            k_values: vec![1],
            alpha_values: vec![0.0],
            beta_values: vec![0.0],
            checks: vec![Check::Theorem1],
            samples: 10,
            seed: 0,
        };
        assert!(g.validate().is_err());
        g.samples = 1000;
        assert!(g.validate().is_ok());
        g.k_values.clear();
        assert!(g.validate().is_err());
    }

    #[test]
    fn random_sets_are_seeded() {
        let a = random_param_sets(50, 9, 50, 50.0, true);
        assert_eq!(a, random_param_sets(50, 9, 50, 50.0, true));
        assert!(a.iter().all(|p| p.alpha > p.beta && p.beta > 0.0 && (1..=50).contains(&p.k)));
        assert_ne!(a, random_param_sets(50, 10, 50, 50.0, true));
    }

    #[test]
    fn check_names_round_trip() {
        for c in Check::ALL {
            assert_eq!(c.name().parse::<Check>().unwrap(), c);
        }
        assert!("theorem3".parse::<Check>().is_err());
    }
}
