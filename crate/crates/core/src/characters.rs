//! Quasicharacters of Q_p^*, the additive character psi, Gauss sums, and the local
//! factors attached to ordinary parameters.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::arith::{gcd_u64, ord_q, pow_q, reduce_mod_pk, split_p, to_f64, Q};
use crate::cvalue::CValue;
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};

/// Exponent `(level, k)` with `psi(x) = zeta_level^k`.
///
/// `psi(x) = exp(2 pi i {x}_p)` where `{x}_p` is the p-adic fractional part; `psi` is
/// trivial exactly on Z_p.
pub fn psi_exponent(p: u64, x: &Q) -> (u64, u64) {
    match ord_q(x, p) {
        None => (1, 0),
        Some(v) if v >= 0 => (1, 0),
        Some(v) => {
            let k = (-v) as u32;
            let level = p.pow(k);
            let fr = reduce_mod_pk(x, p, 0) * Q::from_integer(level.into());
            let n = fr.to_integer().to_u64().expect("fractional part numerator");
            (level, n % level)
        }
    }
}

pub fn psi(p: u64, x: &Q) -> Cyclotomic {
    let (m, k) = psi_exponent(p, x);
    Cyclotomic::zeta_pow(m, k as i64)
}

pub fn psi_complex(p: u64, x: &Q) -> Complex64 {
    let (m, k) = psi_exponent(p, x);
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / m as f64)
}

/// `int_{c + p^m Z_p} psi(x) dx`: `p^-m psi(c)` when `m >= 0`, and 0 otherwise since
/// `psi` is then a nontrivial character of `p^m Z_p`.
pub fn psi_ball_integral(b: &crate::compact_open::Ball) -> Cyclotomic {
    if b.radius() < 0 {
        return Cyclotomic::zero();
    }
    psi(b.p(), b.center()).scale(&b.volume())
}

fn units_mod(p: u64, f: u32) -> impl Iterator<Item = u64> {
    let m = p.pow(f);
    (0..m).filter(move |u| u % p != 0 || m == 1)
}

/// A generator of `(Z/p^f)^*` for odd p, or of `(Z/4)^*` when `p = 2`.
fn cyclic_generator(p: u64, f: u32) -> u64 {
    if p == 2 {
        return if f >= 2 { 3 } else { 1 };
    }
    let phi = p - 1;
    let factors = crate::arith::prime_factors(phi);
    let g = (2..p)
        .find(|&g| factors.iter().all(|&r| crate::arith::pow_mod_u64(g, phi / r, p) != 1))
        .unwrap_or(1);
    if f >= 2 && crate::arith::pow_mod_u64(g, phi, p * p) == 1 {
        g + p
    } else {
        g
    }
}

/// A quasicharacter `chi` of Q_p^*: `chi(p^v u) = t^v chi_0(u mod p^f)` with
/// `chi_0` taking values `zeta_order^k`.
#[derive(Clone, Debug)]
pub struct Quasicharacter {
    p: u64,
    t: CValue,
    f: u32,
    order: u64,
    /// Exponent of `zeta_order` for each residue mod p^f; `None` on non-units.
    table: Vec<Option<u64>>,
}

impl Quasicharacter {
    pub fn unramified(p: u64, t: CValue) -> Result<Self> {
        Self::from_table(p, 0, 1, vec![Some(0)], t)
    }

    pub fn trivial(p: u64) -> Self {
        Self::unramified(p, CValue::one()).expect("nonzero t")
    }

    /// The character sending a fixed generator `g` of `(Z/p^f)^*` to `zeta_phi^j`,
    /// re-normalized to its true conductor. For `p = 2` only `f <= 2` is supported.
    pub fn from_index(p: u64, f: u32, j: u64, t: CValue) -> Result<Self> {
        if f == 0 {
            return Self::unramified(p, t);
        }
        if p == 2 && f > 2 {
            return Err(Error::InvalidCharacter("p = 2 supports conductor exponent <= 2".into()));
        }
        let m = p.pow(f);
        let phi = m / p * (p - 1);
        let g = cyclic_generator(p, f);
        let mut table = vec![None; m as usize];
        let mut x = 1u64;
        for i in 0..phi {
            table[x as usize] = Some((i * j) % phi);
            x = x * g % m;
        }
        Self::from_table(p, f, phi, table, t)
    }

    /// Builds from an exponent table mod p^f, dropping to the true conductor.
    pub fn from_table(p: u64, f: u32, order: u64, table: Vec<Option<u64>>, t: CValue) -> Result<Self> {
        if t.is_zero() {
            return Err(Error::InvalidCharacter("chi(p) must be nonzero".into()));
        }
        let m = p.pow(f);
        if table.len() != m as usize {
            return Err(Error::InvalidCharacter("table size must be p^f".into()));
        }
        for a in units_mod(p, f) {
            for b in units_mod(p, f) {
                let (ka, kb, kab) = (table[a as usize], table[b as usize], table[(a * b % m) as usize]);
                match (ka, kb, kab) {
                    (Some(x), Some(y), Some(z)) if (x + y) % order == z % order => {}
                    _ => return Err(Error::InvalidCharacter("table is not multiplicative".into())),
                }
            }
        }
        // True conductor: least c with chi trivial on 1 + p^c Z_p.
        let mut c = f;
        while c > 0 {
            let step = p.pow(c - 1);
            let trivial = (0..m / step).all(|i| {
                let u = (1 + i * step) % m;
                u.is_multiple_of(p) || table[u as usize] == Some(0)
            });
            if !trivial {
                break;
            }
            c -= 1;
        }
        let mc = p.pow(c);
        let mut new_table: Vec<Option<u64>> = vec![None; mc as usize];
        for r in units_mod(p, c) {
            // r and r + mc are congruent mod p^c, so any unit lift mod p^f works.
            let lift = (0..).map(|i| r + i * mc).find(|u| u % p != 0).unwrap_or(1) % m;
            new_table[r as usize] = table[lift as usize];
        }
        if c == 0 {
            new_table = vec![Some(0)];
        }
        let g = new_table.iter().flatten().fold(order, |acc, &k| gcd_u64(acc, k));
        let order_reduced = order / g.max(1);
        let new_table = new_table.into_iter().map(|k| k.map(|k| k / g.max(1))).collect();
        Ok(Quasicharacter { p, t, f: c, order: order_reduced.max(1), table: new_table })
    }

    /// All primitive characters of conductor exactly `p^f` with `chi(p) = t`.
    pub fn all_primitive(p: u64, f: u32, t: CValue) -> Result<Vec<Self>> {
        if f == 0 {
            return Ok(vec![Self::unramified(p, t)?]);
        }
        let m = p.pow(f);
        let phi = m / p * (p - 1);
        let mut out = Vec::new();
        for j in 0..phi {
            let c = Self::from_index(p, f, j, t.clone())?;
            if c.f == f {
                out.push(c);
            }
        }
        Ok(out)
    }

    /// The quadratic character of `(Z/p)^*` for odd p.
    pub fn legendre(p: u64) -> Result<Self> {
        Self::from_index(p, 1, (p - 1) / 2, CValue::one())
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn t(&self) -> &CValue {
        &self.t
    }

    pub fn conductor_exp(&self) -> u32 {
        self.f
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn is_unramified(&self) -> bool {
        self.f == 0
    }

    /// `(level, k)` with `chi_0(u) = zeta_level^k`.
    pub fn unit_exponent(&self, u: &BigInt) -> Result<(u64, u64)> {
        let m = BigInt::from(self.p.pow(self.f));
        let r = u.mod_floor(&m).to_u64().unwrap_or(0);
        if self.f == 0 {
            return Ok((1, 0));
        }
        match self.table[r as usize] {
            Some(k) => Ok((self.order, k)),
            None => Err(Error::NotAUnit(u.to_string(), self.p)),
        }
    }

    pub fn unit_value(&self, u: &BigInt) -> Result<Cyclotomic> {
        let (m, k) = self.unit_exponent(u)?;
        Ok(Cyclotomic::zeta_pow(m, k as i64))
    }

    /// `chi(x)` for a nonzero rational x.
    pub fn eval(&self, x: &Q) -> Result<CValue> {
        let v = ord_q(x, self.p).ok_or(Error::ZeroInput("character argument"))?;
        let u = x / pow_q(self.p, v);
        let (_, nu) = split_p(u.numer(), self.p);
        let (_, du) = split_p(u.denom(), self.p);
        let unit = self.unit_value(&nu)?.div(&self.unit_value(&du)?)?;
        Ok(self.t.pow(v)?.mul(&CValue::Exact(unit)))
    }

    pub fn value_at_minus_one(&self) -> Cyclotomic {
        self.unit_value(&BigInt::from(-1)).expect("-1 is a unit")
    }

    pub fn inverse(&self) -> Result<Self> {
        let table = self.table.iter().map(|k| k.map(|k| (self.order - k % self.order) % self.order)).collect();
        Self::from_table(self.p, self.f, self.order, table, self.t.inv()?)
    }

    /// `chi * chi'` where `chi'` is unramified with `chi'(p) = alpha`.
    pub fn twist_unramified(&self, alpha: &CValue) -> Self {
        let mut out = self.clone();
        out.t = self.t.mul(alpha);
        out
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.p != o.p {
            return Err(Error::InvalidCharacter("characters at different primes".into()));
        }
        let f = self.f.max(o.f);
        let m = self.p.pow(f);
        let order = crate::arith::lcm_u64(self.order, o.order);
        let mut table = vec![None; m as usize];
        for u in units_mod(self.p, f) {
            let (m1, k1) = self.unit_exponent(&BigInt::from(u))?;
            let (m2, k2) = o.unit_exponent(&BigInt::from(u))?;
            table[u as usize] = Some((k1 * (order / m1) + k2 * (order / m2)) % order);
        }
        Self::from_table(self.p, f, order, table, self.t.mul(&o.t))
    }

    /// Unit residues mod p^f with their exponents, at the common level `lcm(p^f, order)`.
    fn unit_sum_level(&self) -> u64 {
        crate::arith::lcm_u64(self.p.pow(self.f), self.order)
    }
}

/// `tau(chi) = sum over unit residues u mod p^f of psi(p^-f u) chi(p^-f u)`; 1 when f = 0.
///
/// Exact whenever `chi(p)` is exact.
pub fn gauss_sum(chi: &Quasicharacter) -> Result<CValue> {
    let f = chi.f;
    if f == 0 {
        return Ok(CValue::one());
    }
    let pf = chi.p.pow(f);
    let level = chi.unit_sum_level();
    let mut ring = vec![Q::zero(); level as usize];
    for u in units_mod(chi.p, f) {
        let (_, k) = chi.unit_exponent(&BigInt::from(u))?;
        let idx = (u * (level / pf) + k * (level / chi.order)) % level;
        ring[idx as usize] += Q::from_integer(1.into());
    }
    let s = CValue::Exact(Cyclotomic::from_group_ring(level, ring));
    Ok(s.mul(&chi.t.pow(-(f as i64))?))
}

/// The same sum as [`gauss_sum`] evaluated directly in floating point.
pub fn gauss_sum_numeric(chi: &Quasicharacter) -> Result<Complex64> {
    let f = chi.f;
    if f == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let pf = chi.p.pow(f);
    let mut s = Complex64::new(0.0, 0.0);
    for u in units_mod(chi.p, f) {
        let x = Q::new(BigInt::from(u), BigInt::from(pf));
        let (m, k) = chi.unit_exponent(&BigInt::from(u))?;
        let c = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / m as f64);
        s += psi_complex(chi.p, &x) * c;
    }
    Ok(s * chi.t.to_complex().powi(-(f as i32)))
}

fn check_convergence(chi: &Quasicharacter, bound: f64) -> Result<()> {
    let q = chi.p as f64;
    if let Some(t) = chi.t.as_rational() {
        if t == Q::from_integer(chi.p.into()) {
            return Err(Error::Pole("chi(p) = q".into()));
        }
    }
    let a = chi.t.abs();
    if (a - q).abs() < 1e-12 && bound == q {
        return Err(Error::Pole(format!("|chi(p)| = {q}")));
    }
    if a >= bound {
        return Err(Error::Divergent(format!("|chi(p)| = {a} must be below {bound}")));
    }
    Ok(())
}

/// Closed form of `int chi(x) psi(x) dx` over Q_p for `|chi(p)| < q`.
pub fn mellin_closed_form(chi: &Quasicharacter) -> Result<CValue> {
    check_convergence(chi, chi.p as f64)?;
    if chi.f > 0 {
        return gauss_sum(chi);
    }
    let t = &chi.t;
    let one = CValue::one();
    let q_inv = CValue::from_q(Q::new(1.into(), chi.p.into()));
    let num = one.sub(&t.inv()?);
    let den = one.sub(&t.mul(&q_inv));
    num.div(&den)
}

/// The interpolation factor `e(alpha, chi)`.
pub fn euler_factor(alpha: &CValue, chi: &Quasicharacter) -> Result<CValue> {
    if chi.f > 0 {
        return alpha.pow(-(chi.f as i64));
    }
    let t = &chi.t;
    let one = CValue::one();
    if alpha.is_plus_minus_one() {
        return Ok(one.sub(&alpha.div(t)?));
    }
    let a = one.sub(&t.div(alpha)?);
    let b = one.sub(&alpha.mul(t).inv()?);
    Ok(a.mul(&b))
}

/// `q^(-e)` for rational e, exact when e is an integer.
fn q_pow_neg(p: u64, e: &Q) -> CValue {
    if e.is_integer() {
        CValue::from_q(pow_q(p, -e.to_integer().to_i64().expect("small exponent")))
    } else {
        CValue::float((p as f64).powf(-to_f64(e)), 0.0)
    }
}

/// `L(s, pi_alpha x chi)`: one Euler factor for `alpha = ±1`, two otherwise, 1 when ramified.
pub fn local_l(s: &Q, alpha: &CValue, chi: &Quasicharacter) -> Result<CValue> {
    if chi.f > 0 {
        return Ok(CValue::one());
    }
    let half = Q::new(1.into(), 2.into());
    let one = CValue::one();
    let t = &chi.t;
    let upper = one.sub(&t.mul(alpha).mul(&q_pow_neg(chi.p, &(s + &half))));
    if upper.is_zero() {
        return Err(Error::Pole("L-factor pole".into()));
    }
    let mut l = upper.inv()?;
    if !alpha.is_plus_minus_one() {
        let lower = one.sub(&t.div(alpha)?.mul(&q_pow_neg(chi.p, &(s - &half))));
        if lower.is_zero() {
            return Err(Error::Pole("L-factor pole".into()));
        }
        l = l.mul(&lower.inv()?);
    }
    Ok(l)
}

/// `tau(chi) e(alpha, chi) L(1/2, pi_alpha x chi)`.
pub fn interpolation_target(alpha: &CValue, chi: &Quasicharacter) -> Result<CValue> {
    let half = Q::new(1.into(), 2.into());
    Ok(gauss_sum(chi)?.mul(&euler_factor(alpha, chi)?).mul(&local_l(&half, alpha, chi)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, qfrac};

    #[test]
    fn psi_is_trivial_on_integers() {
        assert!(psi(5, &q(7)).as_rational() == Some(q(1)));
        assert_eq!(psi(5, &qfrac(1, 5)), Cyclotomic::zeta_pow(5, 1));
        assert_eq!(psi(5, &qfrac(7, 25)), Cyclotomic::zeta_pow(25, 7));
        // 1/2 is a 5-adic integer
        assert!(psi(5, &qfrac(1, 2)).as_rational() == Some(q(1)));
        // 1/10 = 3/5 + (integer) 5-adically since 1/2 = 3 mod 5
        assert_eq!(psi(5, &qfrac(1, 10)), Cyclotomic::zeta_pow(5, 3));
    }

    #[test]
    fn psi_is_additive() {
        let xs = [qfrac(1, 9), qfrac(5, 27), qfrac(2, 3), qfrac(7, 4)];
        for x in &xs {
            for y in &xs {
                assert_eq!(psi(3, &(x + y)), psi(3, x).mul(&psi(3, y)));
            }
        }
    }

    #[test]
    fn conductor_is_normalized() {
        let c = Quasicharacter::from_index(5, 2, 5, CValue::one()).unwrap();
        // j = 5 kills the elements of order 5, so it factors through (Z/5)^*
        assert_eq!(c.conductor_exp(), 1);
        let c = Quasicharacter::from_index(5, 2, 0, CValue::one()).unwrap();
        assert_eq!(c.conductor_exp(), 0);
        assert_eq!(Quasicharacter::all_primitive(5, 2, CValue::one()).unwrap().len(), 16);
        assert_eq!(Quasicharacter::all_primitive(7, 1, CValue::one()).unwrap().len(), 5);
        assert_eq!(Quasicharacter::all_primitive(2, 2, CValue::one()).unwrap().len(), 1);
    }

    #[test]
    fn character_is_multiplicative() {
        let c = Quasicharacter::from_index(7, 2, 5, CValue::from_i64(2)).unwrap();
        let xs = [qfrac(3, 7), q(10), qfrac(1, 2), q(49 * 3 + 1), qfrac(-5, 49)];
        for x in &xs {
            for y in &xs {
                let lhs = c.eval(&(x * y)).unwrap();
                let rhs = c.eval(x).unwrap().mul(&c.eval(y).unwrap());
                assert!(lhs.equals(&rhs));
            }
        }
        assert!(c.eval(&q(7)).unwrap().equals(&CValue::from_i64(2)));
    }

    #[test]
    fn gauss_sum_examples() {
        assert!(gauss_sum(&Quasicharacter::trivial(5)).unwrap().equals(&CValue::one()));
        let leg = Quasicharacter::legendre(5).unwrap();
        let tau = gauss_sum(&leg).unwrap();
        assert!(tau.mul(&tau.conj()).equals(&CValue::from_i64(5)));
        // quadratic Gauss sum for p = 1 mod 4 is sqrt(p)
        assert!(tau.approx_eq(&CValue::float(5f64.sqrt(), 0.0), 1e-12));
        let quartic = Quasicharacter::from_index(5, 1, 1, CValue::one()).unwrap();
        let tq = gauss_sum_numeric(&quartic).unwrap();
        assert!((tq.norm_sqr() - 5.0).abs() < 1e-9);
        assert!(gauss_sum(&quartic).unwrap().approx_eq(&CValue::Float(tq), 1e-12));
    }

    #[test]
    fn gauss_product_identity_at_higher_conductor() {
        for chi in Quasicharacter::all_primitive(3, 2, CValue::from_i64(2)).unwrap() {
            let lhs = gauss_sum(&chi).unwrap().mul(&gauss_sum(&chi.inverse().unwrap()).unwrap());
            let rhs = CValue::Exact(chi.value_at_minus_one()).scale(&q(9));
            assert!(lhs.equals(&rhs));
        }
    }

    #[test]
    fn closed_form_examples() {
        let c = Quasicharacter::trivial(5);
        assert!(mellin_closed_form(&c).unwrap().is_exactly_zero());
        let c = Quasicharacter::unramified(5, CValue::from_i64(2)).unwrap();
        assert_eq!(mellin_closed_form(&c).unwrap().as_rational(), Some(qfrac(5, 6)));
        let leg = Quasicharacter::legendre(5).unwrap();
        assert!(mellin_closed_form(&leg).unwrap().equals(&gauss_sum(&leg).unwrap()));
        let pole = Quasicharacter::unramified(5, CValue::from_i64(5)).unwrap();
        assert!(matches!(mellin_closed_form(&pole), Err(Error::Pole(_))));
        let div = Quasicharacter::unramified(5, CValue::from_i64(7)).unwrap();
        assert!(matches!(mellin_closed_form(&div), Err(Error::Divergent(_))));
    }

    #[test]
    fn euler_factor_examples() {
        let triv = Quasicharacter::trivial(5);
        assert!(euler_factor(&CValue::one(), &triv).unwrap().is_exactly_zero());
        assert_eq!(euler_factor(&CValue::from_i64(-1), &triv).unwrap().as_rational(), Some(q(2)));
        let c = Quasicharacter::from_index(5, 2, 1, CValue::one()).unwrap();
        let a = CValue::from_i64(3);
        assert_eq!(euler_factor(&a, &c).unwrap().as_rational(), Some(qfrac(1, 9)));
    }

    #[test]
    fn local_l_examples() {
        let half = qfrac(1, 2);
        let triv = Quasicharacter::trivial(5);
        let leg = Quasicharacter::legendre(5).unwrap();
        assert_eq!(local_l(&half, &CValue::one(), &leg).unwrap().as_rational(), Some(q(1)));
        assert_eq!(local_l(&half, &CValue::one(), &triv).unwrap().as_rational(), Some(qfrac(5, 4)));
        assert_eq!(local_l(&half, &CValue::from_i64(2), &triv).unwrap().as_rational(), Some(qfrac(10, 3)));
        let s = q(1);
        let v = local_l(&s, &CValue::one(), &triv).unwrap();
        assert!(v.approx_eq(&CValue::float(1.0 / (1.0 - 5f64.powf(-1.5)), 0.0), 1e-12));
    }
}
