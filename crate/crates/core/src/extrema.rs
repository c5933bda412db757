//! Localization windows for the extrema of `M`, and a brute-force extremum
//! oracle (dense grid scan with golden-section refinement).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{delta_interval, DerivedParams, Interval};

/// Width below which golden-section refinement stops.
pub const REFINE_TOL: f64 = 1e-12;

/// Fraction of the width by which open endpoints are pulled inwards.
pub const OPEN_NUDGE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LocalizationWindows {
    /// `(N′₋₁, N′₁)`
    pub n_prime: Interval,
    /// `(N₋₁, N₁)`
    pub n: Interval,
    pub eps_minus: f64,
    pub eps_plus: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtremumKind {
    Max,
    Min,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Extremum {
    pub x: f64,
    pub value: f64,
    pub kind: ExtremumKind,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct ExtremaSet {
    pub points: Vec<Extremum>,
}

impl ExtremaSet {
    pub fn maxima(&self) -> impl Iterator<Item = &Extremum> {
        self.points.iter().filter(|e| e.kind == ExtremumKind::Max)
    }

    pub fn minima(&self) -> impl Iterator<Item = &Extremum> {
        self.points.iter().filter(|e| e.kind == ExtremumKind::Min)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GlobalMax {
    pub x_star: f64,
    pub value: f64,
}

/// `(sin⁴θ/(2cos a cos ω))^{1/3} r^{−2/3}`.
fn eps_term(theta: f64, base: f64, dp: &DerivedParams) -> f64 {
    (theta.sin().powi(4) / (2.0 * base.cos() * dp.omega.cos())).cbrt() * dp.r.powf(-2.0 / 3.0)
}

/// `N′ⱼ` (with `τ′` and `3/10`), `Nⱼ` (with `τ` and `5/17`) and `εⱼ`.
pub fn localization_windows(dp: &DerivedParams) -> Result<LocalizationWindows> {
    let tau_p = dp.tau_prime()?;
    let edge = |base: f64, c: f64, j: f64| {
        let theta = base + j * dp.omega;
        j * (theta.cos() - c * eps_term(theta, base, dp))
    };
    let eps_minus = eps_term(dp.tau - dp.omega, dp.tau, dp);
    let eps_plus = eps_term(dp.tau + dp.omega, dp.tau, dp);
    Ok(LocalizationWindows {
        n_prime: Interval::open(edge(tau_p, 0.3, -1.0), edge(tau_p, 0.3, 1.0)),
        n: Interval::open(edge(dp.tau, 5.0 / 17.0, -1.0), edge(dp.tau, 5.0 / 17.0, 1.0)),
        eps_minus,
        eps_plus,
    })
}

/// `(N′₋₁, N′₁) ⊂ (N₋₁, N₁) ⊂ (δ₋₁, δ₁)`, each endpoint strictly inside.
pub fn inclusion_chain_holds(dp: &DerivedParams, w: &LocalizationWindows) -> Result<bool> {
    let delta = delta_interval(dp)?;
    Ok(w.n_prime.is_strictly_inside(&w.n) && w.n.is_strictly_inside(&delta))
}

/// `cos²τ′/cos²τ`.
pub fn cos_ratio(dp: &DerivedParams) -> Result<f64> {
    let c = dp.tau_prime()?.cos() / dp.tau.cos();
    Ok(c * c)
}

fn sample_points(iv: &Interval, grid: usize) -> Vec<f64> {
    let width = iv.width();
    let lo = if iv.lo_closed { iv.lo } else { iv.lo + OPEN_NUDGE * width };
    let hi = if iv.hi_closed { iv.hi } else { iv.hi - OPEN_NUDGE * width };
    (0..=grid)
        .map(|i| {
            if i == grid {
                hi
            } else {
                lo + (hi - lo) * (i as f64 / grid as f64)
            }
        })
        .collect()
}

/// Golden-section search for a maximum of `sign·f` on `[a, b]`; returns the best
/// point seen, including `seed`.
fn golden_refine<F>(f: &F, sign: f64, mut a: f64, mut b: f64, seed: (f64, f64)) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut best = seed;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (sign * f(c)?, sign * f(d)?);
    while b - a > REFINE_TOL {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = sign * f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = sign * f(d)?;
        }
        if c == d {
            break;
        }
    }
    for (x, v) in [(c, fc), (d, fd)] {
        if v > sign * best.1 {
            best = (x, sign * v);
        }
    }
    Ok(best)
}

fn check_interval(iv: &Interval, grid: usize) -> Result<()> {
    if iv.is_empty() || !(iv.width() > 0.0) {
        return Err(Error::EmptyInterval { lo: iv.lo, hi: iv.hi });
    }
    if grid < 2 {
        return Err(Error::Invalid(format!("grid must have at least 2 cells, got {grid}")));
    }
    Ok(())
}

/// Strict local maxima and minima of `f` on a `grid`-cell scan of `iv`, each
/// refined to `REFINE_TOL` in `x`.
pub fn find_local_extrema<F>(f: F, iv: &Interval, grid: usize) -> Result<ExtremaSet>
where
    F: Fn(f64) -> Result<f64>,
{
    check_interval(iv, grid)?;
    let xs = sample_points(iv, grid);
    let ys = xs.iter().map(|&x| f(x)).collect::<Result<Vec<_>>>()?;
    let mut points = Vec::new();
    for i in 1..xs.len() - 1 {
        let (l, m, r) = (ys[i - 1], ys[i], ys[i + 1]);
        let kind = if l < m && m >= r {
            ExtremumKind::Max
        } else if l > m && m <= r {
            ExtremumKind::Min
        } else {
            continue;
        };
        let sign = if kind == ExtremumKind::Max { 1.0 } else { -1.0 };
        let (x, value) = golden_refine(&f, sign, xs[i - 1], xs[i + 1], (xs[i], m))?;
        points.push(Extremum { x, value, kind });
    }
    Ok(ExtremaSet { points })
}

pub fn find_local_maxima<F>(f: F, iv: &Interval, grid: usize) -> Result<ExtremaSet>
where
    F: Fn(f64) -> Result<f64>,
{
    let all = find_local_extrema(f, iv, grid)?;
    Ok(ExtremaSet {
        points: all.maxima().copied().collect(),
    })
}

/// Largest of the local maxima and, for closed ends, the endpoint values. If
/// neither exists the best grid sample is returned.
pub fn global_max<F>(f: F, iv: &Interval, grid: usize) -> Result<GlobalMax>
where
    F: Fn(f64) -> Result<f64>,
{
    check_interval(iv, grid)?;
    let maxima = find_local_maxima(&f, iv, grid)?;
    let mut candidates: Vec<GlobalMax> = maxima
        .points
        .iter()
        .map(|e| GlobalMax { x_star: e.x, value: e.value })
        .collect();
    if iv.lo_closed {
        candidates.push(GlobalMax { x_star: iv.lo, value: f(iv.lo)? });
    }
    if iv.hi_closed {
        candidates.push(GlobalMax { x_star: iv.hi, value: f(iv.hi)? });
    }
    if candidates.is_empty() {
        for x in sample_points(iv, grid) {
            candidates.push(GlobalMax { x_star: x, value: f(x)? });
        }
    }
    // first of equal values wins, so ties resolve to the leftmost point
    let mut best = candidates[0];
    for c in &candidates[1..] {
        if c.value > best.value || (c.value == best.value && c.x_star < best.x_star) {
            best = *c;
        }
    }
    if best.value.is_nan() {
        return Err(Error::Invalid("objective returned NaN".into()));
    }
    Ok(best)
}

/// Grid size used for degree-`k` data: at least `100(k+1)` cells.
pub fn resolution(k: u32, samples: usize) -> usize {
    samples.max(100 * (k as usize + 1))
}
