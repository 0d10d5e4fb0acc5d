//! The extension of the Steinberg representation by a homomorphism `l: Q_p^* -> R`:
//! the function `phi_0` on `GL_2`, the cocycle `z_l`, and the coboundary identity
//! relating them.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{ord_q, pow_q, Q};
use crate::compact_open::{Ball, BallFunction, Coeff, Mat2};
use crate::error::{Error, Result};
use crate::padic::Padic;

/// A continuous homomorphism `l: Q_p^* -> R` evaluated on nonzero rationals.
pub trait Ell {
    type V: Coeff;

    fn p(&self) -> u64;
    fn eval(&self, x: &Q) -> Result<Self::V>;
    fn zero(&self) -> Self::V;
    /// Relative depth `d` with `l` constant on every `x (1 + p^d Z_p)` to the
    /// precision of its values.
    fn resolution(&self) -> u32;
    fn same(&self, a: &Self::V, b: &Self::V) -> bool;
}

/// `l = ord_p`, exact.
#[derive(Clone, Copy, Debug)]
pub struct OrdEll {
    pub p: u64,
}

impl Ell for OrdEll {
    type V = Q;

    fn p(&self) -> u64 {
        self.p
    }

    fn eval(&self, x: &Q) -> Result<Q> {
        ord_q(x, self.p).map(|v| Q::from_integer(v.into())).ok_or(Error::ZeroInput("ord"))
    }

    fn zero(&self) -> Q {
        Q::zero()
    }

    fn resolution(&self) -> u32 {
        1
    }

    fn same(&self, a: &Q, b: &Q) -> bool {
        a == b
    }
}

/// `l = log_p`, the Iwasawa logarithm with `log_p(p) = 0`, to `prec` digits.
#[derive(Clone, Copy, Debug)]
pub struct LogEll {
    pub p: u64,
    pub prec: u32,
}

impl Ell for LogEll {
    type V = Padic;

    fn p(&self) -> u64 {
        self.p
    }

    fn eval(&self, x: &Q) -> Result<Padic> {
        if x.is_zero() {
            return Err(Error::ZeroInput("log"));
        }
        // Values known mod p^prec need a unit part known to prec digits.
        Padic::from_rational_rel(self.p, x, self.prec + 1).log().map(|v| v.with_abs_prec(self.prec as i64))
    }

    fn zero(&self) -> Padic {
        Padic::zero(self.p, self.prec as i64)
    }

    fn resolution(&self) -> u32 {
        if self.p == 2 {
            self.prec.max(2)
        } else {
            self.prec.max(1)
        }
    }

    fn same(&self, a: &Padic, b: &Padic) -> bool {
        a.sub(b).is_zero()
    }
}

/// `phi_0(a b; c d)`: `l(a^2 / det)` if `ord a < ord c`, else `l(c^2 / det)`.
pub fn phi0<L: Ell>(g: &Mat2, ell: &L) -> Result<L::V> {
    let det = g.det();
    if det.is_zero() {
        return Err(Error::SingularMatrix);
    }
    let p = ell.p();
    // `None` is ord = +infinity.
    let a_first = match (ord_q(&g.a, p), ord_q(&g.c, p)) {
        (Some(oa), Some(oc)) => oa < oc,
        (Some(_), None) => true,
        (None, _) => false,
    };
    let top = if a_first { &g.a } else { &g.c };
    ell.eval(&(top * top / det))
}

/// `z_l(a)(x) = l(x)(1_O(x) - 1_{aO}(x)) + l(a) 1_{aO}(x)`, evaluated at one point.
pub fn z_ell_at<L: Ell>(a: &Q, x: &Q, ell: &L) -> Result<L::V> {
    let p = ell.p();
    let oa = ord_q(a, p).ok_or(Error::ZeroInput("a"))?;
    let ox = ord_q(x, p);
    let in_o = ox.is_none_or(|v| v >= 0);
    let in_ao = ox.is_none_or(|v| v >= oa);
    let mut out = ell.zero();
    if in_ao {
        out = out.plus(&ell.eval(a)?);
    }
    match (in_o, in_ao) {
        (true, false) => out = out.plus(&ell.eval(x)?),
        (false, true) => out = out.minus(&ell.eval(x)?),
        _ => {}
    }
    Ok(out)
}

/// The shell `p^j U` split into balls `p^j (u + p^d Z_p)` with `d = l.resolution()`,
/// each carrying `sign * l(center)`.
fn shell_terms<L: Ell>(j: i64, ell: &L, negate: bool) -> Result<Vec<(Ball, L::V)>> {
    let p = ell.p();
    let d = ell.resolution();
    let m = p.pow(d);
    let scale = pow_q(p, j);
    let mut out = Vec::new();
    for u in (1..m).filter(|u| u % p != 0) {
        let c = Q::from_integer(BigInt::from(u)) * &scale;
        let v = ell.eval(&c)?;
        let v = if negate { v.negated() } else { v };
        if !v.vanishes() {
            out.push((Ball::new(p, &c, j + d as i64), v));
        }
    }
    Ok(out)
}

/// `z_l(a) = (1 - a)(l 1_O)` as a ball function. For `l = log` the values on each ball
/// are those at its center, accurate to the precision of `l`.
pub fn z_ell<L: Ell>(a: &Q, ell: &L) -> Result<BallFunction<L::V>> {
    let p = ell.p();
    let k = ord_q(a, p).ok_or(Error::ZeroInput("a"))?;
    let mut f = BallFunction::zero(p);
    let la = ell.eval(a)?;
    if !la.vanishes() {
        f.push(Ball::new(p, &Q::zero(), k), la);
    }
    let (range, negate) = if k >= 0 { (0..k, false) } else { (k..0, true) };
    for j in range {
        for (b, v) in shell_terms(j, ell, negate)? {
            f.push(b, v);
        }
    }
    Ok(f)
}

/// `(a . f)(x) = f(a^-1 x)`.
pub fn act_scalar<V: Coeff>(a: &Q, f: &BallFunction<V>) -> BallFunction<V> {
    f.translate(a, &Q::zero())
}

/// Both sides of `phi_0(d_a^-1 w_x) - phi_0(d_a^-1) - phi_0(w_x) + phi_0(1) = 2 z_l(a)(x)`
/// with `d_a = diag(a, 1)` and `w_x = (x -1; 1 0)`.
pub fn coboundary_check<L: Ell>(a: &Q, x: &Q, ell: &L) -> Result<(L::V, L::V)> {
    if a.is_zero() || x.is_zero() {
        return Err(Error::ZeroInput("a and x must be nonzero"));
    }
    let d_inv = Mat2::diag(Q::one() / a, Q::one());
    let w = Mat2::new(x.clone(), -Q::one(), Q::one(), Q::zero());
    let lhs = phi0(&d_inv.mul(&w), ell)?
        .minus(&phi0(&d_inv, ell)?)
        .minus(&phi0(&w, ell)?)
        .plus(&phi0(&Mat2::identity(), ell)?);
    let z = z_ell_at(a, x, ell)?;
    Ok((lhs, z.plus(&z)))
}

/// Whether two ball functions agree everywhere, up to the precision of `l`.
pub fn ball_functions_agree<L: Ell>(f: &BallFunction<L::V>, g: &BallFunction<L::V>, ell: &L) -> bool {
    f.sub(g).canonical().values().all(|v| ell.same(v, &ell.zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, qfrac};

    #[test]
    fn phi0_examples() {
        let ord = OrdEll { p: 3 };
        assert_eq!(phi0(&Mat2::identity(), &ord).unwrap(), q(0));
        assert_eq!(phi0(&Mat2::diag(q(9), q(1)), &ord).unwrap(), q(2));
        assert_eq!(phi0(&Mat2::from_i64(0, 1, 1, 0), &ord).unwrap(), q(0));
        assert!(phi0(&Mat2::from_i64(1, 2, 2, 4), &ord).is_err());
    }

    #[test]
    fn z_ord_examples() {
        let ord = OrdEll { p: 5 };
        assert!(z_ell(&q(1), &ord).unwrap().is_zero());
        let zp = z_ell(&q(5), &ord).unwrap();
        assert!(zp.equals(&BallFunction::indicator(Ball::new(5, &q(0), 1), q(1))));
        let zinv = z_ell(&qfrac(1, 5), &ord).unwrap();
        // -1 on p^-1 Z_p plus the shell correction +1 on p^-1 U.
        assert!(zinv.equals(&BallFunction::indicator(Ball::zp(5), q(-1))));
        assert_eq!(z_ell_at(&qfrac(1, 5), &qfrac(2, 5), &ord).unwrap(), q(0));
    }

    #[test]
    fn coboundary_examples() {
        let ord = OrdEll { p: 3 };
        assert_eq!(coboundary_check(&q(3), &q(1), &ord).unwrap(), (q(0), q(0)));
        assert_eq!(coboundary_check(&q(3), &q(3), &ord).unwrap(), (q(2), q(2)));
        assert_eq!(coboundary_check(&q(1), &qfrac(7, 9), &ord).unwrap(), (q(0), q(0)));
    }

    #[test]
    fn log_kills_p_and_roots_of_unity() {
        let l = LogEll { p: 5, prec: 8 };
        assert!(l.eval(&q(5)).unwrap().is_zero());
        assert!(l.eval(&q(-1)).unwrap().is_zero());
        let (lhs, rhs) = coboundary_check(&q(6), &qfrac(7, 25), &l).unwrap();
        assert!(l.same(&lhs, &rhs));
    }
}
