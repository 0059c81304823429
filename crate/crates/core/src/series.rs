//! Truncated power series in √q.
//!
//! `coeffs[i]` multiplies `(√q)^i`. A series carries its own truncation
//! length; binary operations keep the shorter one, since coefficients past
//! either operand's truncation are unknown.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub const DEFAULT_ORDER: usize = 8;

/// Coefficients at or below this magnitude count as zero when locating
/// leading terms.
pub const ZERO_THRESHOLD: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct SqrtQSeries {
    coeffs: Vec<f64>,
}

impl SqrtQSeries {
    /// Series with the given coefficients, padded with zeros or truncated to
    /// `order + 1` terms.
    pub fn new(coeffs: &[f64], order: usize) -> Self {
        let mut c = coeffs.to_vec();
        c.resize(order + 1, 0.0);
        Self { coeffs: c }
    }

    pub fn from_coeffs(coeffs: Vec<f64>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least one coefficient");
        Self { coeffs }
    }

    pub fn constant(c: f64, order: usize) -> Self {
        Self::new(&[c], order)
    }

    pub fn zero(order: usize) -> Self {
        Self::new(&[], order)
    }

    /// The series √q itself.
    pub fn sqrt_q(order: usize) -> Self {
        Self::new(&[0.0, 1.0], order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of `(√q)^i`, zero past the truncation.
    pub fn coeff(&self, i: usize) -> f64 {
        self.coeffs.get(i).copied().unwrap_or(0.0)
    }

    pub fn set_coeff(&mut self, i: usize, value: f64) {
        self.coeffs[i] = value;
    }

    pub fn with_order(&self, order: usize) -> Self {
        Self::new(&self.coeffs, order)
    }

    /// Horner evaluation at `sqrt_q`.
    pub fn eval(&self, sqrt_q: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * sqrt_q + c)
    }

    pub fn scale(&self, k: f64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    /// Multiplies by √q, dropping the top coefficient.
    pub fn shift(&self) -> Self {
        let mut c = vec![0.0];
        c.extend_from_slice(&self.coeffs[..self.coeffs.len() - 1]);
        Self { coeffs: c }
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn recip(&self) -> Option<Self> {
        let a0 = self.coeffs[0];
        if a0.abs() <= ZERO_THRESHOLD {
            return None;
        }
        let n = self.coeffs.len();
        let mut r = vec![0.0; n];
        r[0] = 1.0 / a0;
        for k in 1..n {
            let s: f64 = (1..=k).map(|j| self.coeffs[j] * r[k - j]).sum();
            r[k] = -s / a0;
        }
        Some(Self { coeffs: r })
    }

    pub fn div(&self, other: &Self) -> Option<Self> {
        Some(self * &other.recip()?)
    }

    /// Index of the first coefficient with magnitude above `threshold`.
    pub fn leading_index(&self, threshold: f64) -> Option<usize> {
        self.coeffs.iter().position(|c| c.abs() > threshold)
    }

    pub fn is_zero(&self, threshold: f64) -> bool {
        self.leading_index(threshold).is_none()
    }

    fn zip(&self, other: &Self, op: impl Fn(f64, f64) -> f64) -> Self {
        let n = self.coeffs.len().min(other.coeffs.len());
        Self { coeffs: (0..n).map(|i| op(self.coeffs[i], other.coeffs[i])).collect() }
    }
}

impl Add for &SqrtQSeries {
    type Output = SqrtQSeries;
    fn add(self, rhs: &SqrtQSeries) -> SqrtQSeries {
        self.zip(rhs, |a, b| a + b)
    }
}

impl Sub for &SqrtQSeries {
    type Output = SqrtQSeries;
    fn sub(self, rhs: &SqrtQSeries) -> SqrtQSeries {
        self.zip(rhs, |a, b| a - b)
    }
}

impl Mul for &SqrtQSeries {
    type Output = SqrtQSeries;
    fn mul(self, rhs: &SqrtQSeries) -> SqrtQSeries {
        let n = self.coeffs.len().min(rhs.coeffs.len());
        let mut c = vec![0.0; n];
        for (i, a) in self.coeffs.iter().take(n).enumerate() {
            for (j, b) in rhs.coeffs.iter().take(n - i).enumerate() {
                c[i + j] += a * b;
            }
        }
        SqrtQSeries { coeffs: c }
    }
}

impl Add<f64> for &SqrtQSeries {
    type Output = SqrtQSeries;
    fn add(self, rhs: f64) -> SqrtQSeries {
        let mut s = self.clone();
        s.coeffs[0] += rhs;
        s
    }
}

impl Mul<f64> for &SqrtQSeries {
    type Output = SqrtQSeries;
    fn mul(self, rhs: f64) -> SqrtQSeries {
        self.scale(rhs)
    }
}

impl Neg for &SqrtQSeries {
    type Output = SqrtQSeries;
    fn neg(self) -> SqrtQSeries {
        self.scale(-1.0)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for SqrtQSeries {
            type Output = SqrtQSeries;
            fn $m(self, rhs: SqrtQSeries) -> SqrtQSeries {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&SqrtQSeries> for SqrtQSeries {
            type Output = SqrtQSeries;
            fn $m(self, rhs: &SqrtQSeries) -> SqrtQSeries {
                (&self).$m(rhs)
            }
        }
        impl $tr<SqrtQSeries> for &SqrtQSeries {
            type Output = SqrtQSeries;
            fn $m(self, rhs: SqrtQSeries) -> SqrtQSeries {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for SqrtQSeries {
    /// Comma-separated coefficients with trailing zeros dropped, the same
    /// grammar the CLI accepts.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.coeffs.iter().rposition(|c| *c != 0.0).unwrap_or(0);
        let parts: Vec<String> = self.coeffs[..=last].iter().map(|c| format!("{c:?}")).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl std::str::FromStr for SqrtQSeries {
    type Err = String;
    /// Parses `c0,c1,c2,...` into a series of [`DEFAULT_ORDER`] (or longer if
    /// more coefficients are given).
    fn from_str(s: &str) -> Result<Self, String> {
        let coeffs = s
            .split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|_| format!("bad coefficient `{t}`")))
            .collect::<Result<Vec<_>, _>>()?;
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err("coefficients must be finite".into());
        }
        let order = DEFAULT_ORDER.max(coeffs.len() - 1);
        Ok(Self::new(&coeffs, order))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sigma_expansion() {
        // (1−√q)/(1+√q) = 1 − 2√q + 2q − 2q^{3/2} + ...
        let d = 6;
        let num = SqrtQSeries::new(&[1.0, -1.0], d);
        let den = SqrtQSeries::new(&[1.0, 1.0], d);
        let sigma = num.div(&den).unwrap();
        assert_eq!(sigma.coeffs(), &[1.0, -2.0, 2.0, -2.0, 2.0, -2.0, 2.0]);
    }

    #[test]
    fn parse_and_print() {
        let s: SqrtQSeries = "1,0,0.5".parse().unwrap();
        assert_eq!(s.order(), DEFAULT_ORDER);
        assert_eq!(s.coeff(2), 0.5);
        assert_eq!(s.to_string(), "1.0,0.0,0.5");
        assert!("1,x".parse::<SqrtQSeries>().is_err());
    }

    proptest! {
        #[test]
        fn product_evaluates_like_product(a in prop::collection::vec(-2.0..2.0f64, 3),
                                          b in prop::collection::vec(-2.0..2.0f64, 3),
                                          x in 0.0..0.5f64) {
            // polynomials of degree 2 times degree 2 fit in order 4 exactly
            let sa = SqrtQSeries::new(&a, 4);
            let sb = SqrtQSeries::new(&b, 4);
            let lhs = (&sa * &sb).eval(x);
            let rhs = sa.eval(x) * sb.eval(x);
            prop_assert!((lhs - rhs).abs() < 1e-12);
        }

        #[test]
        fn recip_is_inverse(a in prop::collection::vec(-1.0..1.0f64, 5), a0 in 0.5..2.0f64) {
            let mut c = a.clone();
            c[0] = a0;
            let s = SqrtQSeries::new(&c, 8);
            let one = &s * &s.recip().unwrap();
            prop_assert!((one.coeff(0) - 1.0).abs() < 1e-12);
            for i in 1..=8 {
                prop_assert!(one.coeff(i).abs() < 1e-9);
            }
        }
    }
}
