//! Complex values that stay exact while every input is cyclotomic.

use std::fmt;

use num_complex::Complex64;

use crate::arith::{to_f64, Q};
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};

/// Default tolerance for comparisons involving a float value.
pub const FLOAT_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub enum CValue {
    Exact(Cyclotomic),
    Float(Complex64),
}

impl CValue {
    pub fn zero() -> Self {
        CValue::Exact(Cyclotomic::zero())
    }

    pub fn one() -> Self {
        CValue::Exact(Cyclotomic::one())
    }

    pub fn from_q(x: Q) -> Self {
        CValue::Exact(Cyclotomic::from_q(x))
    }

    pub fn from_i64(x: i64) -> Self {
        CValue::Exact(Cyclotomic::from_i64(x))
    }

    pub fn float(re: f64, im: f64) -> Self {
        CValue::Float(Complex64::new(re, im))
    }

    pub fn zeta_pow(m: u64, k: i64) -> Self {
        CValue::Exact(Cyclotomic::zeta_pow(m, k))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, CValue::Exact(_))
    }

    pub fn exact(&self) -> Option<&Cyclotomic> {
        match self {
            CValue::Exact(c) => Some(c),
            CValue::Float(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<Q> {
        self.exact().and_then(|c| c.as_rational())
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            CValue::Exact(c) => c.to_complex(),
            CValue::Float(z) => *z,
        }
    }

    pub fn abs(&self) -> f64 {
        self.to_complex().norm()
    }

    /// Exactly zero in exact mode; within [`FLOAT_TOL`] in float mode.
    pub fn is_zero(&self) -> bool {
        match self {
            CValue::Exact(c) => c.is_zero(),
            CValue::Float(z) => z.norm() < FLOAT_TOL,
        }
    }

    pub fn is_exactly_zero(&self) -> bool {
        matches!(self, CValue::Exact(c) if c.is_zero())
    }

    pub fn approx_eq(&self, o: &Self, tol: f64) -> bool {
        (self.to_complex() - o.to_complex()).norm() <= tol
    }

    /// Equality: exact when both sides are exact, otherwise within [`FLOAT_TOL`].
    pub fn equals(&self, o: &Self) -> bool {
        match (self, o) {
            (CValue::Exact(a), CValue::Exact(b)) => a == b,
            _ => self.approx_eq(o, FLOAT_TOL),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        match (self, o) {
            (CValue::Exact(a), CValue::Exact(b)) => CValue::Exact(a.add(b)),
            _ => CValue::Float(self.to_complex() + o.to_complex()),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        match self {
            CValue::Exact(a) => CValue::Exact(a.neg()),
            CValue::Float(z) => CValue::Float(-z),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        match (self, o) {
            (CValue::Exact(a), CValue::Exact(b)) => CValue::Exact(a.mul(b)),
            _ => CValue::Float(self.to_complex() * o.to_complex()),
        }
    }

    pub fn scale(&self, x: &Q) -> Self {
        match self {
            CValue::Exact(a) => CValue::Exact(a.scale(x)),
            CValue::Float(z) => CValue::Float(z * to_f64(x)),
        }
    }

    pub fn inv(&self) -> Result<Self> {
        match self {
            CValue::Exact(a) => Ok(CValue::Exact(a.inv()?)),
            CValue::Float(z) => {
                if z.norm() == 0.0 {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(CValue::Float(z.inv()))
                }
            }
        }
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, n: i64) -> Result<Self> {
        match self {
            CValue::Exact(a) => Ok(CValue::Exact(a.pow(n)?)),
            CValue::Float(z) => {
                if n < 0 && z.norm() == 0.0 {
                    return Err(Error::DivisionByZero);
                }
                Ok(CValue::Float(z.powi(n as i32)))
            }
        }
    }

    pub fn conj(&self) -> Self {
        match self {
            CValue::Exact(a) => CValue::Exact(a.conj()),
            CValue::Float(z) => CValue::Float(z.conj()),
        }
    }

    /// Whether the value is exactly `1` or `-1`.
    pub fn is_plus_minus_one(&self) -> bool {
        match self.as_rational() {
            Some(r) => r == Q::from_integer(1.into()) || r == Q::from_integer((-1).into()),
            None => false,
        }
    }

    /// Parses `3`, `-1/2`, `sqrt(5)`, `-sqrt(5)`, or a float `re[,im]`.
    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest.trim()),
            None => (false, s),
        };
        if let Some(inner) = body.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
            let x: f64 = inner.trim().parse().ok()?;
            let v = x.sqrt();
            return Some(CValue::float(if neg { -v } else { v }, 0.0));
        }
        if let Some(r) = crate::arith::parse_rational(s) {
            return Some(CValue::from_q(r));
        }
        let mut parts = s.split(',');
        let re: f64 = parts.next()?.trim().parse().ok()?;
        let im: f64 = match parts.next() {
            Some(t) => t.trim().parse().ok()?,
            None => 0.0,
        };
        Some(CValue::float(re, im))
    }
}

impl fmt::Display for CValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CValue::Exact(c) => write!(f, "{c}"),
            CValue::Float(z) => write!(f, "{:.12}{:+.12}i", z.re, z.im),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, qfrac};

    #[test]
    fn modes_combine() {
        let a = CValue::from_q(qfrac(1, 2));
        let b = CValue::zeta_pow(4, 1);
        let c = a.mul(&b);
        assert!(c.is_exact());
        let d = c.add(&CValue::float(0.0, 0.5));
        assert!(!d.is_exact());
        assert!(d.approx_eq(&CValue::float(0.0, 1.0), 1e-12));
    }

    #[test]
    fn parsing() {
        assert_eq!(CValue::parse("-1").unwrap().as_rational(), Some(q(-1)));
        assert!(CValue::parse("sqrt(5)").unwrap().approx_eq(&CValue::float(5f64.sqrt(), 0.0), 1e-15));
        assert!(CValue::parse("0.5,1").unwrap().approx_eq(&CValue::float(0.5, 1.0), 0.0));
        assert!(CValue::parse("abc").is_none());
        assert!(CValue::from_i64(-1).is_plus_minus_one());
        assert!(!CValue::from_i64(2).is_plus_minus_one());
    }
}
