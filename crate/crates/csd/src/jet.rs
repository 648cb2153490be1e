//! Truncated Taylor-series (jet) arithmetic.
//!
//! A jet of order `p` at `t₀` stores the normalized coefficients
//! `c_j = f⁽ʲ⁾(t₀)/j!` for `j = 0..=p`. Propagating jets through an
//! elementary-function program yields derivatives that are exact to floating
//! point — no truncation error, unlike finite differences — at O(p²) cost
//! per operation.
//!
//! The coefficient type is generic: `TaylorJet<f64>` is the everyday engine,
//! while `TaylorJet<LogSigned>` carries magnitudes in sign–log form so that
//! order-60 generator derivatives neither underflow nor overflow.

use crate::logsign::LogSigned;

/// Scalar operations a jet coefficient type must support.
///
/// Separate from `num_traits::Float` because [`LogSigned`] is not a float:
/// `exp`/`ln`/`powf` act on the *represented value*, whatever the encoding.
pub trait JetScalar: Copy {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_f64(x: f64) -> Self;
    fn add(self, o: Self) -> Self;
    fn sub(self, o: Self) -> Self;
    fn mul(self, o: Self) -> Self;
    fn div(self, o: Self) -> Self;
    /// Multiply by an exact f64 factor (index weights in recurrences).
    fn scale(self, s: f64) -> Self;
    fn exp_value(self) -> Self;
    fn ln_value(self) -> Self;
    fn pow_value(self, p: f64) -> Self;
    fn is_zero(self) -> bool;
}

impl JetScalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_f64(x: f64) -> Self {
        x
    }
    fn add(self, o: Self) -> Self {
        self + o
    }
    fn sub(self, o: Self) -> Self {
        self - o
    }
    fn mul(self, o: Self) -> Self {
        self * o
    }
    fn div(self, o: Self) -> Self {
        self / o
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn exp_value(self) -> Self {
        self.exp()
    }
    fn ln_value(self) -> Self {
        self.ln()
    }
    fn pow_value(self, p: f64) -> Self {
        self.powf(p)
    }
    fn is_zero(self) -> bool {
        self == 0.0
    }
}

impl JetScalar for LogSigned {
    fn zero() -> Self {
        LogSigned::ZERO
    }
    fn one() -> Self {
        LogSigned::ONE
    }
    fn from_f64(x: f64) -> Self {
        LogSigned::from_f64(x)
    }
    fn add(self, o: Self) -> Self {
        LogSigned::add(self, o)
    }
    fn sub(self, o: Self) -> Self {
        LogSigned::sub(self, o)
    }
    fn mul(self, o: Self) -> Self {
        LogSigned::mul(self, o)
    }
    fn div(self, o: Self) -> Self {
        LogSigned::div(self, o)
    }
    fn scale(self, s: f64) -> Self {
        LogSigned::scale(self, s)
    }
    fn exp_value(self) -> Self {
        // exp(sign * e^{log_abs}) has log-magnitude equal to the value itself.
        let v = self.to_f64();
        LogSigned::from_parts(1, v)
    }
    fn ln_value(self) -> Self {
        debug_assert!(self.sign > 0, "ln of non-positive log-signed value");
        LogSigned::from_f64(self.log_abs)
    }
    fn pow_value(self, p: f64) -> Self {
        debug_assert!(self.sign > 0, "powf of non-positive log-signed value");
        LogSigned::from_parts(1, self.log_abs * p)
    }
    fn is_zero(self) -> bool {
        LogSigned::is_zero(self)
    }
}

/// Truncated power series with normalized coefficients `c_j = f⁽ʲ⁾(t₀)/j!`.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorJet<T = f64> {
    pub coefficients: Vec<T>,
}

impl<T: JetScalar> TaylorJet<T> {
    /// Jet of the identity map `t ↦ t` at `t0`: `[t0, 1, 0, ...]`.
    pub fn variable(t0: f64, order: usize) -> Self {
        let mut c = vec![T::zero(); order + 1];
        c[0] = T::from_f64(t0);
        if order >= 1 {
            c[1] = T::one();
        }
        Self { coefficients: c }
    }

    pub fn constant(value: f64, order: usize) -> Self {
        let mut c = vec![T::zero(); order + 1];
        c[0] = T::from_f64(value);
        Self { coefficients: c }
    }

    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Unnormalized derivative `f⁽ᵏ⁾(t₀) = c_k · k!`.
    pub fn derivative(&self, k: usize) -> T {
        let mut factorial = 1.0f64;
        for i in 2..=k {
            factorial *= i as f64;
        }
        self.coefficients[k].scale(factorial)
    }

    pub fn neg(&self) -> Self {
        Self { coefficients: self.coefficients.iter().map(|c| T::zero().sub(*c)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.order(), other.order());
        Self {
            coefficients: self
                .coefficients
                .iter()
                .zip(&other.coefficients)
                .map(|(a, b)| a.add(*b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.order(), other.order());
        Self {
            coefficients: self
                .coefficients
                .iter()
                .zip(&other.coefficients)
                .map(|(a, b)| a.sub(*b))
                .collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { coefficients: self.coefficients.iter().map(|c| c.scale(s)).collect() }
    }

    pub fn add_scalar(&self, s: f64) -> Self {
        let mut c = self.coefficients.clone();
        c[0] = c[0].add(T::from_f64(s));
        Self { coefficients: c }
    }

    /// Cauchy product.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.order(), other.order());
        let n = self.coefficients.len();
        let mut c = vec![T::zero(); n];
        for k in 0..n {
            let mut acc = T::zero();
            for j in 0..=k {
                acc = acc.add(self.coefficients[j].mul(other.coefficients[k - j]));
            }
            c[k] = acc;
        }
        Self { coefficients: c }
    }

    /// Recursive division; requires `other` to be invertible at the
    /// expansion point.
    pub fn div(&self, other: &Self) -> Self {
        assert_eq!(self.order(), other.order());
        assert!(!other.coefficients[0].is_zero(), "jet division by zero constant term");
        let n = self.coefficients.len();
        let mut c = vec![T::zero(); n];
        for k in 0..n {
            let mut acc = self.coefficients[k];
            for j in 1..=k {
                acc = acc.sub(other.coefficients[j].mul(c[k - j]));
            }
            c[k] = acc.div(other.coefficients[0]);
        }
        Self { coefficients: c }
    }

    pub fn recip(&self) -> Self {
        Self::constant(1.0, self.order()).div(self)
    }

    /// `exp` of the series: `b_k = (1/k) Σ_{j=1}^{k} j·a_j·b_{k-j}`.
    pub fn exp(&self) -> Self {
        let n = self.coefficients.len();
        let mut b = vec![T::zero(); n];
        b[0] = self.coefficients[0].exp_value();
        for k in 1..n {
            let mut acc = T::zero();
            for j in 1..=k {
                acc = acc.add(self.coefficients[j].scale(j as f64).mul(b[k - j]));
            }
            b[k] = acc.scale(1.0 / k as f64);
        }
        Self { coefficients: b }
    }

    /// `ln` of the series: `b_k = (a_k - (1/k) Σ_{j=1}^{k-1} j·b_j·a_{k-j}) / a_0`.
    pub fn ln(&self) -> Self {
        let n = self.coefficients.len();
        let mut b = vec![T::zero(); n];
        b[0] = self.coefficients[0].ln_value();
        for k in 1..n {
            let mut acc = self.coefficients[k];
            for j in 1..k {
                acc = acc.sub(b[j].scale(j as f64 / k as f64).mul(self.coefficients[k - j]));
            }
            b[k] = acc.div(self.coefficients[0]);
        }
        Self { coefficients: b }
    }

    /// Real power `a^p`: `b_k = (1/(k·a_0)) Σ_{j=1}^{k} ((p+1)j - k)·a_j·b_{k-j}`.
    pub fn powf(&self, p: f64) -> Self {
        let n = self.coefficients.len();
        let mut b = vec![T::zero(); n];
        b[0] = self.coefficients[0].pow_value(p);
        for k in 1..n {
            let mut acc = T::zero();
            for j in 1..=k {
                let w = (p + 1.0) * j as f64 - k as f64;
                acc = acc.add(self.coefficients[j].scale(w).mul(b[k - j]));
            }
            b[k] = acc.scale(1.0 / k as f64).div(self.coefficients[0]);
        }
        Self { coefficients: b }
    }
}

impl TaylorJet<LogSigned> {
    /// Lower to plain f64 coefficients, failing loudly on overflow instead of
    /// silently producing `inf`.
    pub fn to_f64_jet(&self) -> crate::error::Result<TaylorJet<f64>> {
        const MAX_LOG: f64 = 709.0; // ln(f64::MAX) ≈ 709.78
        let mut c = Vec::with_capacity(self.coefficients.len());
        for v in &self.coefficients {
            if !v.is_zero() && v.log_abs > MAX_LOG {
                return Err(crate::error::CsdError::Overflow { log_abs: v.log_abs });
            }
            c.push(v.to_f64());
        }
        Ok(TaylorJet { coefficients: c })
    }
}
