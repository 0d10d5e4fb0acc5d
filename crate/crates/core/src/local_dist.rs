//! The local distributions `mu_alpha = psi(x) chi_alpha(x) dx` with
//! `chi_alpha(x) = alpha^ord(x)`, evaluated by explicit finite character sums.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{lcm_u64, ord_q, pow_q, totient, Q};
use crate::characters::{psi_exponent, Quasicharacter};
use crate::compact_open::{Ball, BallFunction};
use crate::cvalue::CValue;
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};

/// Past this many residue classes the additive sum is replaced by its known value 0.
const MAX_RESIDUE_SUM: u64 = 1 << 22;

/// `int_B psi(x) dx`, summing `psi` over the unit balls that make up `B`.
pub fn psi_ball_sum(b: &Ball) -> Cyclotomic {
    let p = b.p();
    let m = b.radius();
    let c = b.center();
    if m >= 0 {
        let (lvl, k) = psi_exponent(p, c);
        return Cyclotomic::zeta_pow(lvl, k as i64).scale(&b.volume());
    }
    let count = p.checked_pow((-m) as u32).unwrap_or(u64::MAX);
    if count > MAX_RESIDUE_SUM {
        return Cyclotomic::zero();
    }
    let depth = (-m).max(-ord_q(c, p).unwrap_or(0)).max(0) as u32;
    let level = p.pow(depth);
    let step = pow_q(p, m);
    let mut ring = vec![Q::zero(); level as usize];
    for j in 0..count {
        let x = c + Q::from_integer(BigInt::from(j)) * &step;
        let (lvl, k) = psi_exponent(p, &x);
        ring[(k * (level / lvl)) as usize] += Q::one();
    }
    Cyclotomic::from_group_ring(level, ring)
}

/// `mu_alpha(B)`. For `alpha != 1` the ball must avoid 0, where `chi_alpha` is constant.
pub fn mu_alpha_ball(alpha: &CValue, b: &Ball) -> Result<CValue> {
    let base = CValue::Exact(psi_ball_sum(b));
    if alpha.as_rational().is_some_and(|a| a.is_one()) {
        return Ok(base);
    }
    if !b.avoids_zero() {
        return Err(Error::Divergent(format!("{b} contains 0; mu_alpha needs pieces in Q_p^*")));
    }
    let k = ord_q(b.center(), b.p()).expect("ball avoids 0");
    Ok(alpha.pow(k)?.mul(&base))
}

/// `int f dmu_alpha`.
pub fn integrate_mu_alpha(f: &BallFunction<Q>, alpha: &CValue) -> Result<CValue> {
    f.canonical()
        .iter()
        .try_fold(CValue::zero(), |acc, (b, x)| Ok(acc.add(&mu_alpha_ball(alpha, b)?.scale(x))))
}

/// `int (a f) dmu_alpha` with `(a f)(x) = f(a^-1 x)`: the value `W_f(diag(a, 1))`.
pub fn whittaker_value(f: &BallFunction<Q>, alpha: &CValue, a: &Q) -> Result<CValue> {
    if a.is_zero() {
        return Err(Error::ZeroInput("a"));
    }
    integrate_mu_alpha(&f.translate(a, &Q::zero()), alpha)
}

/// `[U : H] int f(x) W_H(diag(x, 1)) d^x x` for `H = U^(1)` and `f` constant on
/// `H`-cosets, with `W_H(diag(x, 1)) = mu_alpha(x H)` and `vol(aH) = 1 / [U : H]`.
pub fn whittaker_h_side(f: &BallFunction<Q>, alpha: &CValue) -> Result<CValue> {
    let p = f.p();
    let mut total = CValue::zero();
    for (b, x) in f.canonical() {
        if !b.avoids_zero() {
            return Err(Error::InvalidArgument(format!("{b} meets 0")));
        }
        let v = ord_q(b.center(), p).expect("avoids 0");
        if b.radius() > v + 1 {
            return Err(Error::InvalidArgument(format!("f is not constant on U^(1)-cosets near {b}")));
        }
        // Cosets a U^(1) = a + p^(v+1) Z_p.
        for coset in b.subdivide(v + 1) {
            let w = mu_alpha_ball(alpha, &Ball::new(p, coset.center(), v + 1))?;
            total = total.add(&w.scale(&x));
        }
    }
    Ok(total)
}

/// `int_U chi_0(u) psi(a u) d^x u` with `vol(U) = 1`, as a finite sum over `(Z/p^L)^*`.
pub fn unit_integral(chi: &Quasicharacter, a: &Q) -> Result<Cyclotomic> {
    let p = chi.p();
    let oa = ord_q(a, p).ok_or(Error::ZeroInput("a"))?;
    let l = (chi.conductor_exp() as i64).max(-oa).max(1) as u32;
    let pl = p.pow(l);
    let mut level = lcm_u64(chi.order(), p.pow((-oa).max(0) as u32));
    let mut entries = Vec::with_capacity(pl as usize);
    for u in (1..pl).filter(|u| u % p != 0) {
        let (m1, k1) = chi.unit_exponent(&BigInt::from(u))?;
        let (m2, k2) = psi_exponent(p, &(a * Q::from_integer(BigInt::from(u))));
        level = lcm_u64(level, lcm_u64(m1, m2));
        entries.push((m1, k1, m2, k2));
    }
    let mut ring = vec![Q::zero(); level as usize];
    for (m1, k1, m2, k2) in entries {
        ring[((k1 * (level / m1) + k2 * (level / m2)) % level) as usize] += Q::one();
    }
    let n = Q::from_integer(totient(pl).into());
    Ok(Cyclotomic::from_group_ring(level, ring).scale(&(Q::one() / n)))
}

/// `int_{p^n U} chi(x) psi(x) d^x x = chi(p)^n int_U chi_0(u) psi(p^n u) d^x u`.
pub fn shell_integral(chi: &Quasicharacter, n: i64) -> Result<CValue> {
    let inner = unit_integral(chi, &pow_q(chi.p(), n))?;
    Ok(chi.t().pow(n)?.mul(&CValue::Exact(inner)))
}

/// A truncated shell sum for `int chi(x) chi_alpha(x) psi(x) dx`.
#[derive(Clone, Debug)]
pub struct MellinSum {
    pub n_min: i64,
    pub n_max: i64,
    pub partial: CValue,
    /// Bound on the modulus of every omitted shell with `n > n_max`.
    pub tail_bound: f64,
    /// `partial` plus the exact geometric tail, when `chi(p) alpha` is exact.
    pub completed: Option<CValue>,
}

/// `sum_{n_min <= n <= n_max} (1 - 1/q) q^-n int_{p^n U} chi chi_alpha psi d^x x`.
///
/// Shells below `-(f + 1)` vanish; the sum starts one shell lower so that this is
/// visible. Beyond `n_max` every shell has modulus at most `(1 - 1/q) r^n` with
/// `r = |chi(p) alpha| / q`.
pub fn mellin_mu_alpha(chi: &Quasicharacter, alpha: &CValue, n_max: i64) -> Result<MellinSum> {
    let p = chi.p();
    let q = p as f64;
    let tw = chi.twist_unramified(alpha);
    let t = tw.t();
    if t.as_rational().is_some_and(|x| x == Q::from_integer(p.into())) {
        return Err(Error::Pole("chi(p) alpha = q".into()));
    }
    let r = t.abs() / q;
    if r >= 1.0 {
        return Err(Error::Divergent(format!("|chi(p) alpha| = {} must be below {q}", t.abs())));
    }
    let f = chi.conductor_exp() as i64;
    let n_min = -(f + 2);
    let weight = Q::one() - Q::new(1.into(), p.into());
    let mut partial = CValue::zero();
    for n in n_min..=n_max {
        let term = shell_integral(&tw, n)?.scale(&(&weight * pow_q(p, -n)));
        partial = partial.add(&term);
    }
    let tail_bound = (1.0 - 1.0 / q) * r.powi((n_max + 1) as i32) / (1.0 - r);
    let completed = if t.is_exact() {
        // For n >= 0, psi(p^n u) = 1 and the shell integral is t^n int_U chi_0,
        // which is 1 when f = 0 and 0 otherwise.
        let tail = if f == 0 {
            let ratio = t.scale(&Q::new(1.into(), p.into()));
            ratio.pow(n_max + 1)?.scale(&weight).div(&CValue::one().sub(&ratio))?
        } else {
            CValue::zero()
        };
        Some(partial.add(&tail))
    } else {
        None
    };
    Ok(MellinSum { n_min, n_max, partial, tail_bound, completed })
}

/// `n_max` making the tail bound of [`mellin_mu_alpha`] at most `tol`.
pub fn shells_for_tolerance(chi: &Quasicharacter, alpha: &CValue, tol: f64) -> i64 {
    let q = chi.p() as f64;
    let r = chi.t().abs() * alpha.abs() / q;
    if r == 0.0 {
        return 0;
    }
    let mut n = 0i64;
    while (1.0 - 1.0 / q) * r.powi((n + 1) as i32) / (1.0 - r) > tol && n < 10_000 {
        n += 1;
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, qfrac};
    use crate::characters::{interpolation_target, psi_ball_integral};

    #[test]
    fn additive_ball_examples() {
        let p = 5;
        assert_eq!(psi_ball_sum(&Ball::zp(p)), Cyclotomic::one());
        assert!(psi_ball_sum(&Ball::new(p, &q(0), -1)).is_zero());
        assert!(psi_ball_sum(&Ball::new(p, &qfrac(1, 125), -2)).is_zero());
        for k in 0..4 {
            let b = Ball::new(p, &q(0), k);
            assert_eq!(psi_ball_sum(&b).as_rational(), Some(b.volume()));
        }
    }

    #[test]
    fn sums_match_closed_form() {
        let p = 3;
        for (c, m) in [(qfrac(1, 3), 0), (qfrac(2, 9), -1), (qfrac(1, 27), 1), (q(2), -2)] {
            let b = Ball::new(p, &c, m);
            assert_eq!(psi_ball_sum(&b), psi_ball_integral(&b));
        }
    }

    #[test]
    fn unit_integral_matches_nongauss_values() {
        let chi = Quasicharacter::trivial(5);
        assert_eq!(unit_integral(&chi, &q(3)).unwrap().as_rational(), Some(q(1)));
        assert_eq!(unit_integral(&chi, &qfrac(2, 5)).unwrap().as_rational(), Some(qfrac(-1, 4)));
        assert!(unit_integral(&chi, &qfrac(1, 25)).unwrap().is_zero());
    }

    #[test]
    fn trivial_alpha_one_vanishes_exactly() {
        let chi = Quasicharacter::trivial(3);
        let s = mellin_mu_alpha(&chi, &CValue::one(), 20).unwrap();
        assert!(s.completed.unwrap().is_exactly_zero());
    }

    #[test]
    fn interpolation_alpha_minus_one() {
        let chi = Quasicharacter::trivial(5);
        let alpha = CValue::from_i64(-1);
        let s = mellin_mu_alpha(&chi, &alpha, 30).unwrap();
        let target = interpolation_target(&alpha, &chi).unwrap();
        assert!(s.partial.approx_eq(&target, 1e-8 + s.tail_bound));
        assert!(s.completed.unwrap().equals(&target));
    }

    #[test]
    fn divergence_is_reported() {
        let chi = Quasicharacter::unramified(3, CValue::from_i64(2)).unwrap();
        assert!(matches!(mellin_mu_alpha(&chi, &CValue::from_i64(2), 5), Err(Error::Divergent(_))));
        assert!(matches!(mellin_mu_alpha(&chi, &qv(3, 2), 5), Err(Error::Pole(_))));
    }

    fn qv(n: i64, d: i64) -> CValue {
        CValue::from_q(qfrac(n, d))
    }
}
