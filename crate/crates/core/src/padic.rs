//! Elements of Q_p at capped precision.
//!
//! A [`Padic`] is `p^val * unit + O(p^(val + prec))`. Every operation tracks how much
//! precision its inputs justify, so a result never claims digits it does not know.
//! A value known only to be divisible by `p^a` is the zero element with absolute
//! precision `a`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{inv_mod, ord_q, pow_big, split_p, Q};
use crate::error::{Error, Result};

/// Absolute precision used for values that are known exactly.
pub const EXACT: i64 = 1 << 40;

/// Cap on the relative precision of a nonzero value built from a rational.
pub const MAX_REL_PREC: u32 = 512;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Padic {
    p: u64,
    /// Valuation, or the absolute precision for a zero.
    val: i64,
    /// Unit part in `[0, p^prec)`; zero for the zero element.
    unit: BigInt,
    /// Relative precision of the unit part; zero for the zero element.
    prec: u32,
}

impl Padic {
    pub fn zero(p: u64, abs_prec: i64) -> Self {
        Padic { p, val: abs_prec, unit: BigInt::zero(), prec: 0 }
    }

    pub fn one(p: u64, prec: u32) -> Self {
        Self::from_int(p, &BigInt::one(), prec as i64)
    }

    fn normalize(p: u64, v: i64, s: BigInt, k: u32) -> Self {
        let m = pow_big(p, k);
        let s = s.mod_floor(&m);
        if s.is_zero() {
            return Self::zero(p, v.saturating_add(k as i64));
        }
        let (e, u) = split_p(&s, p);
        Padic { p, val: v + e as i64, unit: u, prec: k - e }
    }

    pub fn from_int(p: u64, n: &BigInt, abs_prec: i64) -> Self {
        Self::from_rational(p, &Q::from_integer(n.clone()), abs_prec)
    }

    pub fn from_i64(p: u64, n: i64, abs_prec: i64) -> Self {
        Self::from_int(p, &BigInt::from(n), abs_prec)
    }

    /// The rational `x` known modulo `p^abs_prec`, keeping at most
    /// [`MAX_REL_PREC`] significant digits.
    pub fn from_rational(p: u64, x: &Q, abs_prec: i64) -> Self {
        let v = match ord_q(x, p) {
            None => return Self::zero(p, abs_prec),
            Some(v) => v,
        };
        if v >= abs_prec {
            return Self::zero(p, abs_prec);
        }
        let prec = (abs_prec - v).min(MAX_REL_PREC as i64) as u32;
        let m = pow_big(p, prec);
        let (_, nu) = split_p(x.numer(), p);
        let (_, du) = split_p(x.denom(), p);
        let inv = inv_mod(&du, &m).expect("denominator unit is invertible");
        let unit = (nu * inv).mod_floor(&m);
        Padic { p, val: v, unit, prec }
    }

    /// The rational `x` with `rel_prec` significant p-adic digits.
    pub fn from_rational_rel(p: u64, x: &Q, rel_prec: u32) -> Self {
        match ord_q(x, p) {
            None => Self::zero(p, EXACT),
            Some(v) => Self::from_rational(p, x, v + rel_prec as i64),
        }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    /// Valuation, or `None` when the value is zero to its precision.
    pub fn valuation(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.val)
        }
    }

    pub fn abs_prec(&self) -> i64 {
        if self.is_zero() {
            self.val
        } else {
            self.val + self.prec as i64
        }
    }

    pub fn rel_prec(&self) -> u32 {
        self.prec
    }

    pub fn unit(&self) -> &BigInt {
        &self.unit
    }

    pub fn is_unit(&self) -> bool {
        !self.is_zero() && self.val == 0
    }

    /// A rational representative `unit * p^val`.
    pub fn to_rational(&self) -> Q {
        if self.is_zero() {
            return Q::zero();
        }
        Q::from_integer(self.unit.clone()) * crate::arith::pow_q(self.p, self.val)
    }

    /// Integer residue modulo `p^k` of a p-integral value; `None` if the value is not
    /// integral or `k` exceeds the known precision.
    pub fn residue(&self, k: u32) -> Option<BigInt> {
        if (k as i64) > self.abs_prec() {
            return None;
        }
        if self.is_zero() {
            return Some(BigInt::zero());
        }
        if self.val < 0 {
            return None;
        }
        let m = pow_big(self.p, k);
        Some((&self.unit * pow_big(self.p, self.val.min(k as i64) as u32)).mod_floor(&m))
    }

    pub fn with_abs_prec(&self, a: i64) -> Self {
        if a >= self.abs_prec() {
            return self.clone();
        }
        if self.is_zero() || a <= self.val {
            return Self::zero(self.p, a);
        }
        let prec = (a - self.val) as u32;
        let unit = self.unit.mod_floor(&pow_big(self.p, prec));
        Padic { p: self.p, val: self.val, unit, prec }
    }

    /// Equality modulo `p^k`, which requires both sides to be known that far.
    pub fn congruent(&self, other: &Self, k: i64) -> bool {
        if self.abs_prec() < k || other.abs_prec() < k {
            return false;
        }
        (self - other).with_abs_prec(k).is_zero()
    }

    pub fn neg(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let m = pow_big(self.p, self.prec);
        Padic { p: self.p, val: self.val, unit: (-&self.unit).mod_floor(&m), prec: self.prec }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.p, o.p, "mixing different primes");
        let a = self.abs_prec().min(o.abs_prec());
        if self.is_zero() {
            return o.with_abs_prec(a);
        }
        if o.is_zero() {
            return self.with_abs_prec(a);
        }
        let v = self.val.min(o.val);
        if a <= v {
            return Self::zero(self.p, a);
        }
        let k = (a - v) as u32;
        let s = &self.unit * pow_big(self.p, (self.val - v) as u32)
            + &o.unit * pow_big(self.p, (o.val - v) as u32);
        Self::normalize(self.p, v, s, k)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.p, o.p, "mixing different primes");
        match (self.is_zero(), o.is_zero()) {
            (true, true) => Self::zero(self.p, self.val.saturating_add(o.val)),
            (true, false) => Self::zero(self.p, self.val.saturating_add(o.val)),
            (false, true) => Self::zero(self.p, o.val.saturating_add(self.val)),
            (false, false) => {
                let prec = self.prec.min(o.prec);
                let m = pow_big(self.p, prec);
                Padic {
                    p: self.p,
                    val: self.val + o.val,
                    unit: (&self.unit * &o.unit).mod_floor(&m),
                    prec,
                }
            }
        }
    }

    /// Multiplication by an exactly known rational.
    pub fn scale(&self, x: &Q) -> Self {
        match ord_q(x, self.p) {
            None => Self::zero(self.p, EXACT),
            Some(v) => {
                let other = Self::from_rational(self.p, x, v + self.prec.max(1) as i64);
                if self.is_zero() {
                    return Self::zero(self.p, self.val.saturating_add(v));
                }
                self.mul(&other)
            }
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let m = pow_big(self.p, self.prec);
        let unit = inv_mod(&self.unit, &m).expect("unit part is invertible");
        Ok(Padic { p: self.p, val: -self.val, unit, prec: self.prec })
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, n: i64) -> Result<Self> {
        if n < 0 {
            return self.inv()?.pow(-n);
        }
        if n == 0 {
            return Ok(Self::one(self.p, self.prec.max(1)));
        }
        if self.is_zero() {
            return Ok(Self::zero(self.p, self.val.saturating_mul(n)));
        }
        let m = pow_big(self.p, self.prec);
        Ok(Padic {
            p: self.p,
            val: self.val * n,
            unit: self.unit.modpow(&BigInt::from(n), &m),
            prec: self.prec,
        })
    }

    /// Teichmüller representative of the unit part.
    pub fn teichmuller_of_unit(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroInput("teichmuller"));
        }
        teichmuller(&self.unit, self.p, self.prec)
    }

    /// `<u> = u / omega(u)` for the unit part `u`; congruent to 1 mod p (mod 4 if p = 2).
    pub fn one_unit_part(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroInput("one-unit part"));
        }
        let u = Padic { p: self.p, val: 0, unit: self.unit.clone(), prec: self.prec };
        let w = torsion_part(&self.unit, self.p, self.prec);
        u.div(&w)
    }

    /// Iwasawa logarithm: `log_p(p) = 0`, vanishes on roots of unity.
    pub fn log(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroInput("log"));
        }
        let p = self.p;
        let big_p = self.prec;
        let one_unit = self.one_unit_part()?;
        let modulus = pow_big(p, big_p);
        let z = (one_unit.unit - BigInt::one()).mod_floor(&modulus);
        if z.is_zero() {
            return Ok(Self::zero(p, big_p as i64));
        }
        // ord(z) >= w; the terms z^k / k have valuation >= k w - ord_p(k).
        let w: u32 = if p == 2 { 2 } else { 1 };
        let mut k_max = 1u32;
        while (k_max * w) as i64 - floor_log(k_max as u64, p) as i64 <= big_p as i64 {
            k_max += 1;
        }
        let e_max = floor_log(k_max as u64, p);
        let work = pow_big(p, big_p + e_max);
        let mut zk = BigInt::one();
        let mut sum = BigInt::zero();
        for k in 1..=k_max {
            zk = (&zk * &z).mod_floor(&work);
            let (e, kp) = split_p(&BigInt::from(k), p);
            let t = (&zk / pow_big(p, e)).mod_floor(&modulus);
            let t = t * inv_mod(&kp, &modulus).expect("k' is a unit");
            if k % 2 == 1 {
                sum += t;
            } else {
                sum -= t;
            }
        }
        Ok(Self::from_int(p, &sum.mod_floor(&modulus), big_p as i64))
    }

    /// p-adic exponential on `ord(x) > 1/(p-1)`.
    pub fn exp(&self) -> Result<Self> {
        let p = self.p;
        let a = self.abs_prec();
        let need = if p == 2 { 2 } else { 1 };
        if a <= 0 {
            return Err(Error::Divergent("exp input has no integral precision".into()));
        }
        if self.is_zero() {
            return Ok(Self::one(p, a.min(MAX_REL_PREC as i64) as u32));
        }
        if self.val < need {
            return Err(Error::Divergent(format!("exp_p needs ord(x) >= {need}, got {}", self.val)));
        }
        let a = a as u32;
        let v = self.val as u32;
        // ord(x^k / k!) >= k v - (k - 1)/(p - 1), which increases with k.
        let mut k_max = 1u32;
        while (k_max * v) as i64 - ((k_max - 1) / (p as u32 - 1)) as i64 <= a as i64 {
            k_max += 1;
        }
        let e_max = legendre_fact(k_max as u64, p);
        let modulus = pow_big(p, a);
        let work = pow_big(p, a + e_max);
        let x = (&self.unit * pow_big(p, v)).mod_floor(&work);
        let mut xk = BigInt::one();
        let mut fact_unit = BigInt::one();
        let mut sum = BigInt::one();
        for k in 1..=k_max {
            xk = (&xk * &x).mod_floor(&work);
            let (_, ku) = split_p(&BigInt::from(k), p);
            fact_unit = (fact_unit * ku).mod_floor(&modulus);
            let e = legendre_fact(k as u64, p);
            let t = (&xk / pow_big(p, e)).mod_floor(&modulus);
            sum += t * inv_mod(&fact_unit, &modulus).expect("unit");
        }
        Ok(Self::from_int(p, &sum.mod_floor(&modulus), a as i64))
    }
}

fn floor_log(k: u64, p: u64) -> u32 {
    let mut e = 0;
    let mut t = p;
    while t <= k {
        e += 1;
        t = t.saturating_mul(p);
    }
    e
}

/// `ord_p(k!)`.
fn legendre_fact(k: u64, p: u64) -> u32 {
    let mut e = 0;
    let mut t = p;
    while t <= k {
        e += (k / t) as u32;
        t = t.saturating_mul(p);
    }
    e
}

/// Roots of unity in Z_p^* congruent to `u`: the Teichmüller lift for odd p, `±1` for p = 2.
fn torsion_part(u: &BigInt, p: u64, prec: u32) -> Padic {
    if p == 2 {
        let s = if u.mod_floor(&BigInt::from(4)) == BigInt::one() { 1 } else { -1 };
        return Padic::from_i64(2, s, prec as i64);
    }
    teichmuller(u, p, prec).expect("unit input")
}

/// The root of unity `omega(a)` with `omega(a) ≡ a mod p`, to absolute precision `p^prec`.
pub fn teichmuller(a: &BigInt, p: u64, prec: u32) -> Result<Padic> {
    let pb = BigInt::from(p);
    if a.mod_floor(&pb).is_zero() {
        return Err(Error::NotAUnit(a.to_string(), p));
    }
    let prec = prec.max(1);
    let m = pow_big(p, prec);
    let mut x = a.mod_floor(&m);
    // x -> x^p contracts towards the root of unity; each step gains one digit.
    for _ in 0..=prec + 1 {
        let y = x.modpow(&pb, &m);
        if y == x {
            break;
        }
        x = y;
    }
    Ok(Padic::from_int(p, &x, prec as i64))
}

/// The unit root of `X^2 - a_p X + p`, lifted by Newton iteration from `a_p mod p`.
pub fn unit_root(ap: i64, p: u64, prec: u32) -> Result<Padic> {
    let pb = BigInt::from(p);
    let a = BigInt::from(ap);
    if a.mod_floor(&pb).is_zero() {
        return Err(Error::Supersingular { p, ap });
    }
    let m = pow_big(p, prec);
    let mut r = a.mod_floor(&pb);
    for _ in 0..=2 * prec + 2 {
        let f = (&r * &r - &a * &r + &pb).mod_floor(&m);
        if f.is_zero() {
            break;
        }
        let df = (BigInt::from(2) * &r - &a).mod_floor(&m);
        let inv = inv_mod(&df, &m).expect("derivative is a unit");
        r = (&r - f * inv).mod_floor(&m);
    }
    Ok(Padic::from_int(p, &r, prec as i64))
}

/// Valuation of an element of Q_p or Q; `None` is +infinity.
pub fn ord(x: &Padic) -> Option<i64> {
    x.valuation()
}

impl fmt::Display for Padic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "O({}^{})", self.p, self.val);
        }
        if self.val == 0 {
            write!(f, "{} + O({}^{})", self.unit, self.p, self.abs_prec())
        } else {
            write!(f, "{}*{}^{} + O({}^{})", self.unit, self.p, self.val, self.p, self.abs_prec())
        }
    }
}

impl Add for &Padic {
    type Output = Padic;
    fn add(self, o: &Padic) -> Padic {
        Padic::add(self, o)
    }
}

impl Sub for &Padic {
    type Output = Padic;
    fn sub(self, o: &Padic) -> Padic {
        Padic::sub(self, o)
    }
}

impl Mul for &Padic {
    type Output = Padic;
    fn mul(self, o: &Padic) -> Padic {
        Padic::mul(self, o)
    }
}

impl Neg for &Padic {
    type Output = Padic;
    fn neg(self) -> Padic {
        Padic::neg(self)
    }
}

impl Padic {
    /// Residue of the unit part as a machine integer, for small precisions.
    pub fn unit_u64(&self) -> Option<u64> {
        self.unit.to_u64()
    }

    pub fn is_negative_representative(&self) -> bool {
        self.unit.is_negative()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, qfrac};

    fn pad(p: u64, n: i64, a: i64) -> Padic {
        Padic::from_i64(p, n, a)
    }

    #[test]
    fn ord_examples() {
        assert_eq!(pad(5, 50, 10).valuation(), Some(2));
        assert_eq!(pad(5, 1, 10).valuation(), Some(0));
        assert_eq!(Padic::from_rational(5, &qfrac(3, 25), 10).valuation(), Some(-2));
        assert_eq!(pad(5, 0, 10).valuation(), None);
    }

    #[test]
    fn teichmuller_examples() {
        let w1 = teichmuller(&BigInt::from(1), 5, 3).unwrap();
        assert_eq!(w1.residue(3), Some(BigInt::from(1)));
        let w2 = teichmuller(&BigInt::from(2), 5, 3).unwrap();
        assert_eq!(w2.residue(3), Some(BigInt::from(57)));
        // 57^2 = -1 mod 125
        assert_eq!((BigInt::from(57 * 57) + 1) % 125, BigInt::zero());
        let w4 = teichmuller(&BigInt::from(4), 5, 2).unwrap();
        assert_eq!(w4.residue(2), Some(BigInt::from(24)));
        assert!(teichmuller(&BigInt::from(10), 5, 3).is_err());
    }

    #[test]
    fn teichmuller_is_torsion() {
        for p in [3u64, 5, 7, 11, 13] {
            for a in 1..p {
                let w = teichmuller(&BigInt::from(a), p, 6).unwrap();
                let wp = w.pow((p - 1) as i64).unwrap();
                assert!(wp.congruent(&Padic::one(p, 6), 6), "p={p} a={a}");
            }
        }
    }

    #[test]
    fn log_examples() {
        assert!(pad(5, 1, 5).log().unwrap().is_zero());
        let w2 = teichmuller(&BigInt::from(2), 5, 5).unwrap();
        assert!(w2.log().unwrap().is_zero());
        let l6 = pad(5, 6, 3).log().unwrap();
        assert_eq!(l6.residue(3), Some(BigInt::from(55)));
        assert!(pad(5, 5, 4).log().unwrap().is_zero());
        assert!(pad(5, 0, 4).log().is_err());
    }

    #[test]
    fn log_against_exact_rational_series() {
        // Oracle: sum (-1)^(k+1) z^k / k over Q for z = p*y, truncated where the tail
        // is below p^prec, then reduced.
        for (p, y) in [(5u64, 1i64), (7, 3), (3, 2), (11, 4)] {
            let prec = 6i64;
            let z = q((p as i64) * y);
            let mut s = q(0);
            let mut zk = q(1);
            for k in 1..60 {
                zk = &zk * &z;
                let term = &zk / q(k);
                if k % 2 == 1 {
                    s += term;
                } else {
                    s -= term;
                }
            }
            let expect = Padic::from_rational(p, &s, prec);
            let got = pad(p, 1 + (p as i64) * y, prec).log().unwrap();
            assert!(got.congruent(&expect, prec), "p={p} y={y}: {got} vs {expect}");
        }
    }

    #[test]
    fn log_is_additive() {
        let p = 7;
        for (a, b) in [(3i64, 5i64), (8, 15), (49 * 2 + 1, 6), (14, 9)] {
            let x = pad(p, a, 8);
            let y = pad(p, b, 8);
            let lhs = x.mul(&y).log().unwrap();
            let rhs = x.log().unwrap().add(&y.log().unwrap());
            let k = lhs.abs_prec().min(rhs.abs_prec());
            assert!(lhs.congruent(&rhs, k));
        }
    }

    #[test]
    fn exp_inverts_log() {
        for p in [3u64, 5, 7, 11] {
            for y in 0..6i64 {
                let x = pad(p, 1 + (p as i64) * y, 8);
                let back = x.log().unwrap().exp().unwrap();
                assert!(back.congruent(&x, 8), "p={p} y={y}");
            }
        }
    }

    #[test]
    fn exp_domain() {
        assert!(pad(5, 1, 5).exp().is_err());
        assert!(pad(5, 5, 5).exp().is_ok());
    }

    #[test]
    fn unit_root_examples() {
        for p in [3u64, 5, 7, 11] {
            let r = unit_root(1 + p as i64, p, 6).unwrap();
            assert_eq!(r.residue(6), Some(BigInt::from(1)));
        }
        let r = unit_root(-1, 3, 2).unwrap();
        assert_eq!(r.residue(2), Some(BigInt::from(2)));
        let r = unit_root(2, 7, 3).unwrap();
        assert_eq!(r.residue(1), Some(BigInt::from(2)));
        let f = r.mul(&r).sub(&r.scale(&q(2))).add(&pad(7, 7, 3));
        assert!(f.with_abs_prec(3).is_zero());
        assert!(unit_root(6, 3, 4).is_err());
    }

    #[test]
    fn unit_root_times_conjugate_is_p() {
        for (ap, p) in [(-1i64, 3u64), (2, 7), (1, 5), (-2, 13)] {
            let a = unit_root(ap, p, 10).unwrap();
            let other = pad(p, ap, 10).sub(&a);
            assert!(a.mul(&other).congruent(&pad(p, p as i64, 10), 10));
        }
    }

    #[test]
    fn precision_is_tracked() {
        let x = pad(5, 1, 3);
        let y = pad(5, 126, 6);
        let d = y.sub(&x);
        // 125 known only mod 5^3
        assert!(d.is_zero());
        assert_eq!(d.abs_prec(), 3);
        let z = pad(5, 25, 4).mul(&pad(5, 10, 4));
        assert_eq!(z.valuation(), Some(3));
        assert_eq!(z.rel_prec(), 2);
    }
}
