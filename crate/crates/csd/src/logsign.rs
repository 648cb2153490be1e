//! Sign–log-magnitude arithmetic.
//!
//! High-order generator derivatives ψ⁽ᵈ⁾ shrink (or grow) geometrically in d
//! and leave the f64 range long before the *ratio* ψ⁽ᵈ⁺¹⁾/ψ⁽ᵈ⁾ does. Carrying
//! magnitudes as `(sign, ln|x|)` keeps products, quotients and the final ratio
//! exact while only sums pay a log-sum-exp.

/// A real number stored as `sign * exp(log_abs)`.
///
/// `sign == 0` encodes exact zero (with `log_abs` irrelevant).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogSigned {
    pub log_abs: f64,
    pub sign: i8,
}

impl LogSigned {
    pub const ZERO: LogSigned = LogSigned { log_abs: f64::NEG_INFINITY, sign: 0 };
    pub const ONE: LogSigned = LogSigned { log_abs: 0.0, sign: 1 };

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            Self { log_abs: x.abs().ln(), sign: if x > 0.0 { 1 } else { -1 } }
        }
    }

    /// Construct from a sign and the log of the magnitude.
    pub fn from_parts(sign: i8, log_abs: f64) -> Self {
        if sign == 0 {
            Self::ZERO
        } else {
            Self { log_abs, sign: sign.signum() }
        }
    }

    /// Convert back to f64. Over/underflows saturate to ±inf / ±0 exactly as
    /// `exp` does; callers that must not overflow check `log_abs` first.
    pub fn to_f64(self) -> f64 {
        self.sign as f64 * self.log_abs.exp()
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    pub fn neg(self) -> Self {
        Self { log_abs: self.log_abs, sign: -self.sign }
    }

    pub fn mul(self, other: Self) -> Self {
        if self.sign == 0 || other.sign == 0 {
            return Self::ZERO;
        }
        Self { log_abs: self.log_abs + other.log_abs, sign: self.sign * other.sign }
    }

    pub fn div(self, other: Self) -> Self {
        debug_assert!(other.sign != 0, "division by log-signed zero");
        if self.sign == 0 {
            return Self::ZERO;
        }
        Self { log_abs: self.log_abs - other.log_abs, sign: self.sign * other.sign }
    }

    /// Multiply by a plain f64 scalar.
    pub fn scale(self, s: f64) -> Self {
        self.mul(Self::from_f64(s))
    }

    /// Signed addition via log-sum-exp with max shift.
    pub fn add(self, other: Self) -> Self {
        if self.sign == 0 {
            return other;
        }
        if other.sign == 0 {
            return self;
        }
        // Order by magnitude so the shift argument is <= 0.
        let (big, small) = if self.log_abs >= other.log_abs { (self, other) } else { (other, self) };
        let delta = small.log_abs - big.log_abs; // <= 0
        if self.sign == other.sign {
            Self { log_abs: big.log_abs + delta.exp().ln_1p(), sign: big.sign }
        } else {
            let diff = -delta.exp(); // in [-1, 0)
            if 1.0 + diff == 0.0 {
                // Exact cancellation to working precision.
                return Self::ZERO;
            }
            Self { log_abs: big.log_abs + diff.ln_1p(), sign: big.sign }
        }
    }

    pub fn sub(self, other: Self) -> Self {
        self.add(other.neg())
    }
}
