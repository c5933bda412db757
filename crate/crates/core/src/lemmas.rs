//! Exact rational certification of the proof polynomials behind the
//! uniqueness of the zero of `D` and the bracket for `x₀`.
//!
//! Points are parameterized by `q̄ = 1 − q²`, `s̄ = 1 − s²` with
//! `0 < s̄ < q̄ < 1` (equivalently `0 < q < s < 1`). Every `vᵢ`, `wᵢ`, `p₁`, `p₂`,
//! `h` is a polynomial in `q̄, s̄`. Each `uᵢ` is `qs` times such a polynomial, so
//! its sign is certified through the rational cofactor `uᵢ/(qs)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::sonin::d_poly_value;

/// Default fraction of sampled points placed near the boundary of the
/// `(s̄, q̄)` triangle.
pub const DEFAULT_CORNER_BIAS: f64 = 0.1;

/// Distance from the boundary for corner-biased samples.
pub const CORNER_BAND: i64 = 1000;

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPoint {
    qbar: BigRational,
    sbar: BigRational,
}

impl RationalPoint {
    /// Requires `0 < s̄ < q̄ < 1`.
    pub fn new(qbar: BigRational, sbar: BigRational) -> Result<Self> {
        if !(sbar.is_positive() && sbar < qbar && qbar < BigRational::one()) {
            return Err(Error::domain(format!(
                "rational point needs 0 < s̄ < q̄ < 1, got q̄ = {qbar}, s̄ = {sbar}"
            )));
        }
        Ok(Self { qbar, sbar })
    }

    pub fn from_ratios(qn: i64, qd: i64, sn: i64, sd: i64) -> Result<Self> {
        if qd == 0 || sd == 0 {
            return Err(Error::Invalid("zero denominator".into()));
        }
        Self::new(
            BigRational::new(qn.into(), qd.into()),
            BigRational::new(sn.into(), sd.into()),
        )
    }

    /// From rational `0 < q < s < 1` directly.
    pub fn from_q_s(q: BigRational, s: BigRational) -> Result<Self> {
        if !(q.is_positive() && q < s && s < BigRational::one()) {
            return Err(Error::domain(format!("need 0 < q < s < 1, got q = {q}, s = {s}")));
        }
        let one = BigRational::one();
        Self::new(&one - &q * &q, &one - &s * &s)
    }

    pub fn qbar(&self) -> &BigRational {
        &self.qbar
    }

    pub fn sbar(&self) -> &BigRational {
        &self.sbar
    }

    pub fn q_sq(&self) -> BigRational {
        BigRational::one() - &self.qbar
    }

    pub fn s_sq(&self) -> BigRational {
        BigRational::one() - &self.sbar
    }

    /// `(q, s)` as floats.
    pub fn q_s_f64(&self) -> (f64, f64) {
        (to_f64(&self.q_sq()).sqrt(), to_f64(&self.s_sq()).sqrt())
    }
}

pub(crate) fn to_f64(v: &BigRational) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

/// Exact values at one point. `u_over_qs[i] = uᵢ/(qs)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProofPolyValues {
    pub v: [BigRational; 7],
    pub u_over_qs: [BigRational; 7],
    /// `vᵢ² − (1−q²)(1−s²)uᵢ²`
    pub w: [BigRational; 3],
    /// `wᵢ` from their factored or expanded displays
    pub w_display: [BigRational; 3],
    pub p1: BigRational,
    pub p2: BigRational,
    /// `36p₁² − q̄s̄(1−q̄)(1−s̄)p₂²`
    pub h: BigRational,
    /// `h` from its expanded display in `q̄`
    pub h_expanded: BigRational,
    /// `5 + q² + s² − 7q²s²`
    pub d_minus_factor: BigRational,
}

pub fn eval_proof_polys(pt: &RationalPoint) -> ProofPolyValues {
    let (qq, ss) = (pt.q_sq(), pt.s_sq());
    let (qb, sb) = (pt.qbar.clone(), pt.sbar.clone());
    let one = BigRational::one();
    let qs2 = &qq * &ss;
    // (1−q²)(1−s²) = q̄s̄
    let rad_sq = &qb * &sb;
    let diff = &ss - &qq;
    let diff2 = &diff * &diff;

    let v0 = int(15) * (&diff2 + int(8) * &qs2 * &rad_sq);
    let v1 = int(12) * (int(4) * &rad_sq * (&qq + &ss + int(2) * &qs2) + int(3) * &diff2);
    let v2 = int(27) * &diff2 + int(8) * &rad_sq * (int(2) + int(4) * &qq + int(4) * &ss + &qs2);
    let u0 = int(-60) * (&qq + &ss - int(2) * &qs2);
    let u1 = int(-96) * (&one - &qs2);
    let u2 = int(-4) * (int(16) - int(7) * &qq - int(7) * &ss - int(2) * &qs2);

    // uᵢ² = q²s²·(uᵢ/qs)²
    let w_of = |v: &BigRational, u: &BigRational| v * v - &rad_sq * &qs2 * u * u;
    let w = [w_of(&v0, &u0), w_of(&v1, &u1), w_of(&v2, &u2)];

    let w0d = int(225) * &diff2 * &diff2;
    let w1d = int(144)
        * &diff2
        * (int(8) * (&one - &qs2) * (int(2) - &qq - &ss) + &diff2);
    let poly = |cs: &[i64]| -> BigRational {
        cs.iter().rev().fold(BigRational::zero(), |acc, &c| acc * &sb + int(c))
    };
    let sb2 = &sb * &sb;
    let sb3 = &sb2 * &sb;
    let sb4 = &sb3 * &sb;
    let qb2 = &qb * &qb;
    let qb3 = &qb2 * &qb;
    let qb4 = &qb3 * &qb;
    let w2d = poly(&[729, -864, 160]) * &qb4
        + int(4) * poly(&[135, -104, -16]) * &sb * &qb3
        + int(2) * poly(&[11, -208, 80]) * &sb2 * &qb2
        + int(108) * poly(&[5, -8]) * &sb3 * &qb
        + int(729) * &sb4;

    let mix = &qb * &sb * (&one - &qb) * (&one - &sb);
    let qb_m_sb = &qb - &sb;
    let p1 = int(1223) * &mix + int(189) * &qb_m_sb * &qb_m_sb + &qb * &sb * (int(93) - int(88) * &qb * &sb);
    let p2 = int(3942) * &qb + int(3942) * &sb - int(6815) * &qb * &sb;
    let h = int(36) * &p1 * &p1 - &mix * &p2 * &p2;
    let h_expanded = (int(9) - int(5) * &sb) * poly(&[142884, -43200, -21500, 13625]) * &qb4
        - int(5) * poly(&[555012, -221688, 127205, -46025]) * &sb * &qb3
        + int(36) * poly(&[87988, 30790, 625]) * &sb2 * &qb2
        - int(4860) * poly(&[571, 227]) * &sb3 * &qb
        + int(1285956) * &sb4;

    let d_minus_factor = int(5) + &qq + &ss - int(7) * &qs2;
    let zero = BigRational::zero();
    ProofPolyValues {
        v: [v0.clone(), v1.clone(), v2.clone(), zero.clone(), -&v2, -&v1, -&v0],
        u_over_qs: [u0.clone(), u1.clone(), u2.clone(), zero, u2, u1, u0],
        w,
        w_display: [w0d, w1d, w2d],
        p1,
        p2,
        h,
        h_expanded,
        d_minus_factor,
    }
}

/// `vᵢ > 0`, `uᵢ < 0`, `wᵢ > 0` for `i = 0, 1, 2`, exactly. Together with the
/// antisymmetry `v₆₋ᵢ = −vᵢ`, `u₆₋ᵢ = uᵢ` this forces the (+++0−−−) pattern.
pub fn check_sign_pattern(pt: &RationalPoint) -> bool {
    sign_pattern_failures(&eval_proof_polys(pt)).is_empty()
}

fn sign_pattern_failures(vals: &ProofPolyValues) -> Vec<&'static str> {
    const V: [&str; 3] = ["v0 > 0", "v1 > 0", "v2 > 0"];
    const U: [&str; 3] = ["u0 < 0", "u1 < 0", "u2 < 0"];
    const W: [&str; 3] = ["w0 > 0", "w1 > 0", "w2 > 0"];
    let mut out = Vec::new();
    for i in 0..3 {
        if !vals.v[i].is_positive() {
            out.push(V[i]);
        }
        if !vals.u_over_qs[i].is_negative() {
            out.push(U[i]);
        }
        if !vals.w[i].is_positive() {
            out.push(W[i]);
        }
    }
    out
}

/// `D(−qs) < 0` through its factor `5+q²+s²−7q²s² > 0`, and `h, p₁, p₂ > 0`.
pub fn check_bracket_endpoints(pt: &RationalPoint) -> bool {
    endpoint_failures(&eval_proof_polys(pt)).is_empty()
}

fn endpoint_failures(vals: &ProofPolyValues) -> Vec<&'static str> {
    let mut out = Vec::new();
    if !vals.d_minus_factor.is_positive() {
        out.push("5+q²+s²−7q²s² > 0");
    }
    if !vals.h.is_positive() {
        out.push("h > 0");
    }
    if !vals.p1.is_positive() {
        out.push("p1 > 0");
    }
    if !vals.p2.is_positive() {
        out.push("p2 > 0");
    }
    out
}

/// Both forms of each `wᵢ` and of `h` agree exactly.
pub fn check_two_way(vals: &ProofPolyValues) -> bool {
    vals.w == vals.w_display && vals.h == vals.h_expanded
}

/// `Σ(vᵢ + √((1−q²)(1−s²))uᵢ)xⁱ` (exact rational parts, one irrational factor)
/// and `(1+x)⁶/((1−q²)(1−s²))^{3/2}·D((δ₋₁+δ₁x)/(1+x))` in floating point.
pub fn mobius_sides(pt: &RationalPoint, x: &BigRational) -> (f64, f64) {
    let vals = eval_proof_polys(pt);
    let horner = |cs: &[BigRational; 7]| cs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c);
    let v_part = to_f64(&horner(&vals.v));
    let u_part = to_f64(&horner(&vals.u_over_qs));
    // √((1−q²)(1−s²))·qs = √(q̄s̄(1−q̄)(1−s̄))
    let one = BigRational::one();
    let mix = to_f64(&(pt.qbar() * pt.sbar() * (&one - pt.qbar()) * (&one - pt.sbar())));
    let lhs = v_part + mix.sqrt() * u_part;

    let (q, s) = pt.q_s_f64();
    let rad = (to_f64(pt.qbar()) * to_f64(pt.sbar())).sqrt();
    let xf = to_f64(x);
    let t = ((-q * s - rad) + (-q * s + rad) * xf) / (1.0 + xf);
    let rhs = (1.0 + xf).powi(6) / rad.powi(3) * d_poly_value(q, s, t);
    (lhs, rhs)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaTrial {
    pub index: u64,
    pub qbar: String,
    pub sbar: String,
    pub corner: bool,
    pub sign_pattern: bool,
    pub endpoints: bool,
    pub two_way: bool,
    pub failures: Vec<&'static str>,
}

impl LemmaTrial {
    pub fn passed(&self) -> bool {
        self.sign_pattern && self.endpoints && self.two_way
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaSummary {
    pub trials: u64,
    pub passed: u64,
    pub failed: u64,
    pub corner_trials: u64,
    pub seed: u64,
    pub corner_bias: f64,
    /// Instances only; global positivity is not proved by sampling.
    pub certification: &'static str,
    pub failures: Vec<LemmaTrial>,
}

fn random_unit(rng: &mut ChaCha8Rng) -> BigRational {
    let den: u32 = rng.random_range(2..=u32::MAX);
    let num: u32 = rng.random_range(1..den);
    BigRational::new(num.into(), den.into())
}

/// One seeded point; trial `index` uses its own ChaCha stream so results do
/// not depend on evaluation order.
pub fn sample_point(seed: u64, index: u64, corner_bias: f64) -> (RationalPoint, bool) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let one = BigRational::one();
    let band = BigRational::new(BigInt::one(), BigInt::from(CORNER_BAND));
    loop {
        let corner = rng.random_bool(corner_bias.clamp(0.0, 1.0));
        let (a, b) = (random_unit(&mut rng), random_unit(&mut rng));
        let (qbar, sbar) = if corner {
            match rng.random_range(0..3u8) {
                // s̄ near 0
                0 => {
                    let sbar = &a * &band;
                    (&sbar + (&one - &sbar) * &b, sbar)
                }
                // q̄ near 1
                1 => {
                    let qbar = &one - &a * &band;
                    (qbar.clone(), qbar * &b)
                }
                // s̄ near q̄
                _ => (a.clone(), &a - &a * &b * &band),
            }
        } else if a > b {
            (a, b)
        } else {
            (b, a)
        };
        if let Ok(pt) = RationalPoint::new(qbar, sbar) {
            return (pt, corner);
        }
    }
}

fn run_trial(seed: u64, index: u64, corner_bias: f64) -> LemmaTrial {
    let (pt, corner) = sample_point(seed, index, corner_bias);
    let vals = eval_proof_polys(&pt);
    let mut failures = sign_pattern_failures(&vals);
    let sign_pattern = failures.is_empty();
    let ends = endpoint_failures(&vals);
    let endpoints = ends.is_empty();
    failures.extend(ends);
    let two_way = check_two_way(&vals);
    if !two_way {
        failures.push("two-way recomputation");
    }
    LemmaTrial {
        index,
        qbar: pt.qbar.to_string(),
        sbar: pt.sbar.to_string(),
        corner,
        sign_pattern,
        endpoints,
        two_way,
        failures,
    }
}

pub fn certify_random(trials: u64, seed: u64, corner_bias: f64) -> Result<LemmaSummary> {
    if !(0.0..=1.0).contains(&corner_bias) {
        return Err(Error::domain(format!("corner bias must lie in [0, 1], got {corner_bias}")));
    }
    let results: Vec<LemmaTrial> = (0..trials)
        .into_par_iter()
        .map(|i| run_trial(seed, i, corner_bias))
        .collect();
    let passed = results.iter().filter(|t| t.passed()).count() as u64;
    Ok(LemmaSummary {
        trials,
        passed,
        failed: trials - passed,
        corner_trials: results.iter().filter(|t| t.corner).count() as u64,
        seed,
        corner_bias,
        certification: "sampled certification",
        failures: results.into_iter().filter(|t| !t.passed()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn w0_at_q_three_quarters() {
        let pt = RationalPoint::from_q_s(rat(3, 4), rat(15, 16)).unwrap();
        let vals = eval_proof_polys(&pt);
        assert_eq!(vals.w[0], rat(9_685_512_225, 4_294_967_296));
        assert_eq!(vals.w_display[0], vals.w[0]);
    }

    #[test]
    fn w0_at_half_quarter() {
        // q² = 1/2, s² = 3/4
        let pt = RationalPoint::from_ratios(1, 2, 1, 4).unwrap();
        assert_eq!(eval_proof_polys(&pt).w[0], rat(225, 256));
        assert!(check_sign_pattern(&pt));
        assert!(check_bracket_endpoints(&pt));
    }

    #[test]
    fn middle_and_mirrored_coefficients() {
        let pt = RationalPoint::from_ratios(7, 9, 2, 11).unwrap();
        let v = eval_proof_polys(&pt);
        assert!(v.v[3].is_zero() && v.u_over_qs[3].is_zero());
        for i in 0..3 {
            assert_eq!(v.v[6 - i], -v.v[i].clone());
            assert_eq!(v.u_over_qs[6 - i], v.u_over_qs[i]);
        }
        assert!(check_two_way(&v));
    }

    #[test]
    fn near_extreme_corner() {
        let pt = RationalPoint::from_ratios(999, 1000, 1, 1000).unwrap();
        assert!(check_sign_pattern(&pt));
        assert!(check_bracket_endpoints(&pt));
    }

    #[test]
    fn rejects_invalid_points() {
        assert!(RationalPoint::from_ratios(1, 2, 1, 2).is_err());
        assert!(RationalPoint::from_ratios(1, 1, 1, 2).is_err());
        assert!(RationalPoint::from_ratios(1, 4, 1, 2).is_err());
        assert!(RationalPoint::from_ratios(1, 2, 0, 1).is_err());
        assert!(RationalPoint::from_q_s(rat(1, 2), rat(1, 3)).is_err());
    }

    #[test]
    fn mobius_identity_matches_floating_d() {
        for i in 0..100 {
            let (pt, _) = sample_point(11, i, 0.0);
            for x in [rat(1, 3), rat(1, 1), rat(7, 2)] {
                let (lhs, rhs) = mobius_sides(&pt, &x);
                let vals = eval_proof_polys(&pt);
                let xf = to_f64(&x);
                // scale: sum of |coefficient|·xⁱ
                let size: f64 = (0..7)
                    .map(|j| (to_f64(&vals.v[j]).abs() + to_f64(&vals.u_over_qs[j]).abs()) * xf.powi(j as i32))
                    .sum();
                assert!((lhs - rhs).abs() <= 1e-9 * size, "trial {i}: {lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn sampler_is_deterministic_and_valid() {
        for i in 0..200 {
            let (a, ca) = sample_point(3, i, 0.5);
            let (b, cb) = sample_point(3, i, 0.5);
            assert_eq!((a.clone(), ca), (b, cb));
            assert!(a.sbar().is_positive() && a.sbar() < a.qbar() && *a.qbar() < BigRational::one());
        }
    }

    #[test]
    fn small_random_sweep() {
        let s = certify_random(500, 42, DEFAULT_CORNER_BIAS).unwrap();
        assert_eq!(s.failed, 0, "{:?}", s.failures.first());
        assert!(s.corner_trials > 10 && s.corner_trials < 120);
        assert_eq!(s, certify_random(500, 42, DEFAULT_CORNER_BIAS).unwrap());
        assert!(certify_random(1, 0, 1.5).is_err());
    }
}
