//! Tate periods from the j-invariant, and the L-invariant `log_p(q) / ord_p(q)`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::Q;
use crate::error::{Error, Result};
use crate::mtt::curve::{EllipticCurve, Reduction};
use crate::padic::Padic;

/// Integer power series truncated to `len` coefficients.
type Series = Vec<BigInt>;

fn mul(a: &[BigInt], b: &[BigInt], len: usize) -> Series {
    let mut out = vec![BigInt::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Inverse of a series with constant term 1.
fn inverse(a: &[BigInt], len: usize) -> Series {
    let mut out = vec![BigInt::zero(); len];
    out[0] = BigInt::one();
    for n in 1..len {
        let mut s = BigInt::zero();
        for k in 1..=n.min(a.len() - 1) {
            s += &a[k] * &out[n - k];
        }
        out[n] = -s;
    }
    out
}

fn sigma3(n: u64) -> u64 {
    (1..=n).filter(|d| n.is_multiple_of(*d)).map(|d| d * d * d).sum()
}

/// `q j(q) = E_4(q)^3 / prod (1 - q^n)^24 = 1 + 744 q + 196884 q^2 + ...`.
pub fn q_times_j(len: usize) -> Series {
    let e4: Series = (0..len).map(|n| if n == 0 { BigInt::one() } else { BigInt::from(240 * sigma3(n as u64)) }).collect();
    let e4_cubed = mul(&mul(&e4, &e4, len), &e4, len);
    let mut eta24: Series = vec![BigInt::zero(); len];
    eta24[0] = BigInt::one();
    for n in 1..len {
        let mut factor = vec![BigInt::zero(); len];
        factor[0] = BigInt::one();
        factor[n] = BigInt::from(-1);
        for _ in 0..24 {
            eta24 = mul(&eta24, &factor, len);
        }
    }
    mul(&e4_cubed, &inverse(&eta24, len), len)
}

/// Coefficients `b_k` of `q = sum_k b_k w^k` solving `w = 1 / j(q)`, for `k < len`.
/// By Lagrange inversion `b_k = [q^(k-1)] (q j(q))^k / k`.
pub fn inverse_j_series(len: usize) -> Series {
    let f = q_times_j(len);
    let mut power = vec![BigInt::one()];
    let mut out = vec![BigInt::zero(); len];
    for k in 1..len {
        power = mul(&power, &f, len);
        let c = &power[k - 1];
        debug_assert!((c % BigInt::from(k)).is_zero());
        out[k] = c / BigInt::from(k);
    }
    out
}

/// The Tate period `q_E` modulo `p^abs_prec`, with `j(q_E) = j(E)` and `ord_p(q_E) = -ord_p(j)`.
pub fn tate_period(e: &EllipticCurve, p: u64, abs_prec: i64) -> Result<Padic> {
    let j = e.j_invariant();
    let v = match e.ord_j(p) {
        Some(v) if v < 0 => -v,
        _ => return Err(Error::GoodReduction(p)),
    };
    let w = Padic::from_rational(p, &(Q::one() / j), abs_prec);
    // The omitted terms have valuation at least `len * v`.
    let len = (abs_prec / v + 2) as usize;
    let b = inverse_j_series(len);
    let mut q = Padic::zero(p, abs_prec);
    let mut wk = w.clone();
    for bk in &b[1..] {
        q = q.add(&wk.scale(&Q::from_integer(bk.clone())));
        wk = wk.mul(&w);
    }
    Ok(q.with_abs_prec(abs_prec))
}

/// `j(q) = (1 / q) sum_k c_k q^k`, truncated where the terms drop below the precision of `q`.
pub fn j_of_q(q: &Padic) -> Result<Padic> {
    let v = q.valuation().ok_or(Error::ZeroInput("q"))?;
    if v <= 0 {
        return Err(Error::Divergent("the j-series needs ord(q) > 0".into()));
    }
    let len = (q.abs_prec() / v + 2) as usize;
    let c = q_times_j(len);
    let mut s = Padic::zero(q.prime(), q.abs_prec());
    let mut qk = Padic::one(q.prime(), q.rel_prec());
    for ck in &c {
        s = s.add(&qk.scale(&Q::from_integer(ck.clone())));
        qk = qk.mul(q);
    }
    s.div(q)
}

#[derive(Clone, Debug)]
pub struct LInvariant {
    pub q: Padic,
    pub ord_q: i64,
    pub log_q: Padic,
    pub value: Padic,
}

/// `L_p(E) = log_p(q_E) / ord_p(q_E)` for split multiplicative reduction at `p`.
pub fn l_invariant(e: &EllipticCurve, p: u64, abs_prec: i64) -> Result<LInvariant> {
    match e.reduction_type(p)? {
        Reduction::Split => {}
        Reduction::NonSplit => return Err(Error::NonSplit(p)),
        Reduction::Good => return Err(Error::GoodReduction(p)),
        Reduction::Additive => return Err(Error::AdditiveReduction(p)),
    }
    let q = tate_period(e, p, abs_prec)?;
    let ord_q = q.valuation().expect("q has finite valuation");
    let log_q = q.log()?;
    let value = log_q.scale(&Q::new(1.into(), ord_q.into()));
    Ok(LInvariant { q, ord_q, log_q, value })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e11() -> EllipticCurve {
        EllipticCurve::new("11a1", 11, [0, -1, 1, -10, -20]).unwrap()
    }

    #[test]
    fn j_coefficients() {
        let c = q_times_j(4);
        assert_eq!(c, [1, 744, 196884, 21493760].map(BigInt::from).to_vec());
    }

    #[test]
    fn inversion_leading_terms() {
        let b = inverse_j_series(4);
        assert_eq!(b[1], BigInt::one());
        assert_eq!(b[2], BigInt::from(744));
        // Substituting back into w = q - 744 q^2 + (744^2 - 196884) q^3.
        assert_eq!(b[3], BigInt::from(2 * 744 * 744 - (744 * 744 - 196884)));
    }

    #[test]
    fn tate_period_round_trip() {
        let e = e11();
        let q = tate_period(&e, 11, 20).unwrap();
        assert_eq!(q.valuation(), Some(5));
        let j = j_of_q(&q).unwrap();
        let expect = Padic::from_rational(11, &e.j_invariant(), j.abs_prec());
        assert!(j.sub(&expect).is_zero());
        assert!(j.abs_prec() >= 10);
    }

    #[test]
    fn l_invariant_structure() {
        let l = l_invariant(&e11(), 11, 20).unwrap();
        assert_eq!(l.ord_q, 5);
        assert!(l.log_q.valuation().is_none_or(|v| v >= 1));
        assert!(matches!(l_invariant(&e11(), 3, 10), Err(Error::GoodReduction(3))));
    }
}
