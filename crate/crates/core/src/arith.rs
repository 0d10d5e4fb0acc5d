//! Integer and rational helpers shared by the p-adic, tree and modular-symbol code.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qfrac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn pow_big(p: u64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), e as usize)
}

/// `p^e` as a rational, for any integer `e`.
pub fn pow_q(p: u64, e: i64) -> Q {
    if e >= 0 {
        Q::from_integer(pow_big(p, e as u32))
    } else {
        Q::new(BigInt::one(), pow_big(p, (-e) as u32))
    }
}

/// Largest `k` with `p^k | n`; `None` for `n = 0`.
pub fn ord_int(n: &BigInt, p: u64) -> Option<i64> {
    if n.is_zero() {
        return None;
    }
    let pb = BigInt::from(p);
    let mut n = n.abs();
    let mut k = 0;
    loop {
        let (quo, rem) = n.div_rem(&pb);
        if !rem.is_zero() {
            return Some(k);
        }
        n = quo;
        k += 1;
    }
}

/// p-adic valuation of a rational; `None` encodes +infinity (zero).
pub fn ord_q(x: &Q, p: u64) -> Option<i64> {
    let vn = ord_int(x.numer(), p)?;
    let vd = ord_int(x.denom(), p).unwrap_or(0);
    Some(vn - vd)
}

/// Valuation with zero mapped to `i64::MAX`, convenient for comparisons.
pub fn ord_or_max(x: &Q, p: u64) -> i64 {
    ord_q(x, p).unwrap_or(i64::MAX)
}

/// Splits off the p-part: `n = p^k * m` with `p ∤ m`.
pub fn split_p(n: &BigInt, p: u64) -> (u32, BigInt) {
    let pb = BigInt::from(p);
    let mut m = n.clone();
    let mut k = 0;
    if m.is_zero() {
        return (0, m);
    }
    loop {
        let (quo, rem) = m.div_rem(&pb);
        if !rem.is_zero() {
            return (k, m);
        }
        m = quo;
        k += 1;
    }
}

pub fn mod_floor(a: &BigInt, m: &BigInt) -> BigInt {
    a.mod_floor(m)
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let e = a.mod_floor(m).extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

pub fn inv_mod_u64(a: u64, m: u64) -> Option<u64> {
    inv_mod(&BigInt::from(a), &BigInt::from(m)).and_then(|x| x.to_u64())
}

pub fn pow_mod_u64(base: u64, mut exp: u64, m: u64) -> u64 {
    let m = m as u128;
    let mut acc: u128 = 1 % m;
    let mut b = base as u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Residue of a p-integral rational modulo `p^k` as an integer in `[0, p^k)`.
pub fn residue_mod_pk(x: &Q, p: u64, k: u32) -> Option<BigInt> {
    let m = pow_big(p, k);
    let (e, dprime) = split_p(x.denom(), p);
    if e > 0 {
        // denominator divisible by p: only fine when the numerator compensates, which
        // cannot happen for a reduced fraction.
        return None;
    }
    let inv = inv_mod(&dprime, &m)?;
    Some((x.numer() * inv).mod_floor(&m))
}

/// Canonical representative of `x mod p^k Z_p` inside `Z[1/p] ∩ [0, p^k)`.
pub fn reduce_mod_pk(x: &Q, p: u64, k: i64) -> Q {
    if x.is_zero() {
        return Q::zero();
    }
    let (e, dprime) = split_p(x.denom(), p);
    let top = k + e as i64;
    if top <= 0 {
        return Q::zero();
    }
    let m = pow_big(p, top as u32);
    let inv = inv_mod(&dprime, &m).expect("unit part of denominator is invertible");
    let r = (x.numer() * inv).mod_floor(&m);
    Q::new(r, pow_big(p, e))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&k| is_prime(k)).collect()
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// Euler's totient.
pub fn totient(n: u64) -> u64 {
    let mut r = n;
    for p in prime_factors(n) {
        r = r / p * (p - 1);
    }
    r
}

/// Parses `a`, `-a` or `a/b`.
pub fn parse_rational(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Q::new(n, d))
    } else {
        let n: BigInt = s.parse().ok()?;
        Some(Q::from_integer(n))
    }
}

pub fn to_f64(x: &Q) -> f64 {
    x.numer().to_f64().unwrap_or(f64::NAN) / x.denom().to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuations() {
        assert_eq!(ord_q(&q(50), 5), Some(2));
        assert_eq!(ord_q(&q(1), 5), Some(0));
        assert_eq!(ord_q(&qfrac(3, 25), 5), Some(-2));
        assert_eq!(ord_q(&q(0), 5), None);
    }

    #[test]
    fn reduction_is_canonical() {
        // 1/2 mod 5^1 Z_5 is 3
        assert_eq!(reduce_mod_pk(&qfrac(1, 2), 5, 1), q(3));
        // 1/25 is not in 5^{-1} Z_5, and it is its own representative
        assert_eq!(reduce_mod_pk(&qfrac(1, 25), 5, -1), qfrac(1, 25));
        assert_eq!(reduce_mod_pk(&qfrac(6, 25), 5, -1), qfrac(1, 25));
        assert_eq!(reduce_mod_pk(&qfrac(7, 5), 5, -1), q(0));
    }

    #[test]
    fn totients() {
        assert_eq!(totient(25), 20);
        assert_eq!(totient(110), 40);
    }
}
