use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// A real number stored as `sign · exp(ln_abs)`.
///
/// Zero is `sign == 0` with `ln_abs == −∞`. Products and quotients are exact
/// in the exponent; sums rescale both operands to the larger exponent first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLog {
    pub sign: i8,
    pub ln_abs: f64,
}

impl SignedLog {
    pub const ZERO: SignedLog = SignedLog {
        sign: 0,
        ln_abs: f64::NEG_INFINITY,
    };
    pub const ONE: SignedLog = SignedLog {
        sign: 1,
        ln_abs: 0.0,
    };

    pub fn new(sign: i8, ln_abs: f64) -> Self {
        if sign == 0 || ln_abs == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            Self {
                sign: sign.signum(),
                ln_abs,
            }
        }
    }

    pub fn from_f64(v: f64) -> Self {
        if v == 0.0 {
            Self::ZERO
        } else {
            Self {
                sign: if v > 0.0 { 1 } else { -1 },
                ln_abs: v.abs().ln(),
            }
        }
    }

    /// Exponentiates; saturates to ±∞ or 0 outside the `f64` range.
    pub fn to_f64(self) -> f64 {
        if self.sign == 0 {
            0.0
        } else {
            f64::from(self.sign) * self.ln_abs.exp()
        }
    }

    /// `self / exp(ln_scale)` as a plain float.
    pub fn mantissa_at(self, ln_scale: f64) -> f64 {
        if self.sign == 0 {
            0.0
        } else {
            f64::from(self.sign) * (self.ln_abs - ln_scale).exp()
        }
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    pub fn abs(self) -> Self {
        Self {
            sign: self.sign.abs(),
            ln_abs: self.ln_abs,
        }
    }

    /// Multiplies by `exp(ln_factor)`.
    pub fn scale_ln(self, ln_factor: f64) -> Self {
        if self.sign == 0 {
            self
        } else {
            Self::new(self.sign, self.ln_abs + ln_factor)
        }
    }

    pub fn powi(self, n: i32) -> Self {
        if n == 0 {
            return Self::ONE;
        }
        let sign = if n % 2 == 0 { self.sign.abs() } else { self.sign };
        Self::new(sign, self.ln_abs * f64::from(n))
    }

    pub fn mul_f64(self, c: f64) -> Self {
        self * Self::from_f64(c)
    }

    /// Larger of the two exponents, ignoring zeros; `−∞` if both are zero.
    pub fn common_scale(values: &[SignedLog]) -> f64 {
        values
            .iter()
            .filter(|v| !v.is_zero())
            .map(|v| v.ln_abs)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

impl Mul for SignedLog {
    type Output = SignedLog;
    fn mul(self, rhs: SignedLog) -> SignedLog {
        if self.sign == 0 || rhs.sign == 0 {
            return SignedLog::ZERO;
        }
        SignedLog::new(self.sign * rhs.sign, self.ln_abs + rhs.ln_abs)
    }
}

impl Div for SignedLog {
    type Output = SignedLog;
    fn div(self, rhs: SignedLog) -> SignedLog {
        assert!(rhs.sign != 0, "division by a zero SignedLog");
        if self.sign == 0 {
            return SignedLog::ZERO;
        }
        SignedLog::new(self.sign * rhs.sign, self.ln_abs - rhs.ln_abs)
    }
}

impl Neg for SignedLog {
    type Output = SignedLog;
    fn neg(self) -> SignedLog {
        SignedLog {
            sign: -self.sign,
            ln_abs: self.ln_abs,
        }
    }
}

impl Add for SignedLog {
    type Output = SignedLog;
    fn add(self, rhs: SignedLog) -> SignedLog {
        if self.sign == 0 {
            return rhs;
        }
        if rhs.sign == 0 {
            return self;
        }
        let scale = self.ln_abs.max(rhs.ln_abs);
        let m = self.mantissa_at(scale) + rhs.mantissa_at(scale);
        SignedLog::from_f64(m).scale_ln(scale)
    }
}

impl Sub for SignedLog {
    type Output = SignedLog;
    fn sub(self, rhs: SignedLog) -> SignedLog {
        self + (-rhs)
    }
}

impl PartialOrd for SignedLog {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.sign.cmp(&other.sign) {
            Ordering::Equal => match self.sign {
                0 => Some(Ordering::Equal),
                1 => self.ln_abs.partial_cmp(&other.ln_abs),
                _ => other.ln_abs.partial_cmp(&self.ln_abs),
            },
            ord => Some(ord),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn zero_convention() {
        let z = SignedLog::from_f64(0.0);
        assert_eq!(z.sign, 0);
        assert_eq!(z.ln_abs, f64::NEG_INFINITY);
        assert_eq!(SignedLog::new(1, f64::NEG_INFINITY), SignedLog::ZERO);
        assert_eq!((z * SignedLog::from_f64(3.0)).to_f64(), 0.0);
    }

    #[test]
    fn arithmetic_round_trips() {
        let a = SignedLog::from_f64(-2.5);
        let b = SignedLog::from_f64(4.0);
        assert_relative_eq!((a * b).to_f64(), -10.0, max_relative = 1e-15);
        assert_relative_eq!((a / b).to_f64(), -0.625, max_relative = 1e-15);
        assert_relative_eq!((a + b).to_f64(), 1.5, max_relative = 1e-15);
        assert_relative_eq!((a - b).to_f64(), -6.5, max_relative = 1e-15);
        assert_relative_eq!(a.powi(3).to_f64(), -15.625, max_relative = 1e-15);
        assert_eq!(a.powi(2).sign, 1);
    }

    #[test]
    fn huge_magnitudes_stay_finite_in_log() {
        let big = SignedLog::new(1, 5000.0);
        let prod = big * big;
        assert_eq!(prod.ln_abs, 10000.0);
        assert_eq!(prod.to_f64(), f64::INFINITY);
        let ratio = prod / big.powi(2);
        assert_relative_eq!(ratio.to_f64(), 1.0);
        let sum = big + big;
        assert_relative_eq!(sum.ln_abs, 5000.0 + 2f64.ln(), max_relative = 1e-15);
    }

    #[test]
    fn ordering() {
        let vals = [-3.0, -0.5, 0.0, 0.25, 7.0];
        for w in vals.windows(2) {
            assert!(SignedLog::from_f64(w[0]) < SignedLog::from_f64(w[1]));
        }
    }
}
