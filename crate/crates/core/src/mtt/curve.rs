//! Elliptic curves over Q in Weierstrass form, with Frobenius traces from point counts.

use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::arith::{is_prime, ord_q, pow_mod_u64, prime_factors, Q};
use crate::error::{Error, Result};

/// `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6`, assumed minimal, with its conductor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EllipticCurve {
    pub label: String,
    pub conductor: u64,
    pub a: [i64; 5],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reduction {
    Good,
    Split,
    NonSplit,
    Additive,
}

impl fmt::Display for Reduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Reduction::Good => "good",
            Reduction::Split => "split multiplicative",
            Reduction::NonSplit => "non-split multiplicative",
            Reduction::Additive => "additive",
        })
    }
}

impl EllipticCurve {
    pub fn new(label: &str, conductor: u64, a: [i64; 5]) -> Result<Self> {
        let e = EllipticCurve { label: label.to_string(), conductor, a };
        if e.discriminant().is_zero() {
            return Err(Error::InvalidArgument(format!("{label} is singular")));
        }
        Ok(e)
    }

    /// Parses `label N a1 a2 a3 a4 a6`.
    pub fn parse(text: &str) -> Result<Self> {
        let line = text
            .lines()
            .map(str::trim)
            .find(|l| !l.is_empty() && !l.starts_with('#'))
            .ok_or_else(|| Error::Parse("empty curve file".into()))?;
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 7 {
            return Err(Error::Parse(format!("expected `label N a1 a2 a3 a4 a6`, got {line:?}")));
        }
        let n = f[1].parse::<u64>().map_err(|_| Error::Parse(format!("bad conductor {:?}", f[1])))?;
        let mut a = [0i64; 5];
        for (slot, s) in a.iter_mut().zip(&f[2..]) {
            *slot = s.parse().map_err(|_| Error::Parse(format!("bad coefficient {s:?}")))?;
        }
        Self::new(f[0], n, a)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    fn b_invariants(&self) -> [BigInt; 4] {
        let [a1, a2, a3, a4, a6] = self.a.map(BigInt::from);
        let b2 = &a1 * &a1 + 4 * &a2;
        let b4 = 2 * &a4 + &a1 * &a3;
        let b6 = &a3 * &a3 + 4 * &a6;
        let b8 = &a1 * &a1 * &a6 + 4 * &a2 * &a6 - &a1 * &a3 * &a4 + &a2 * &a3 * &a3 - &a4 * &a4;
        [b2, b4, b6, b8]
    }

    pub fn c4(&self) -> BigInt {
        let [b2, b4, ..] = self.b_invariants();
        &b2 * &b2 - 24 * b4
    }

    pub fn c6(&self) -> BigInt {
        let [b2, b4, b6, _] = self.b_invariants();
        -(&b2 * &b2 * &b2) + 36 * &b2 * &b4 - 216 * b6
    }

    pub fn discriminant(&self) -> BigInt {
        let [b2, b4, b6, b8] = self.b_invariants();
        -(&b2 * &b2 * &b8) - 8 * &b4 * &b4 * &b4 - 27 * &b6 * &b6 + 9 * &b2 * &b4 * &b6
    }

    pub fn j_invariant(&self) -> Q {
        let c4 = self.c4();
        Q::new(&c4 * &c4 * &c4, self.discriminant())
    }

    pub fn bad_primes(&self) -> Vec<u64> {
        prime_factors(self.conductor)
    }

    /// Left side minus right side of the equation, reduced mod `l`.
    fn eval_mod(&self, x: i64, y: i64, l: i64) -> i64 {
        let [a1, a2, a3, a4, a6] = self.a.map(|c| c.rem_euclid(l));
        let lhs = (y * y + a1 * x % l * y + a3 * y) % l;
        let rhs = (x * x % l * x + a2 * x % l * x + a4 * x + a6) % l;
        (lhs - rhs).rem_euclid(l)
    }

    /// Number of points over `F_l`, including infinity and any singular point.
    pub fn count_points(&self, l: u64) -> u64 {
        let li = l as i64;
        if l == 2 {
            let affine = (0..2).flat_map(|x| (0..2).map(move |y| (x, y))).filter(|&(x, y)| self.eval_mod(x, y, 2) == 0);
            return 1 + affine.count() as u64;
        }
        // (2y + a1 x + a3)^2 = 4(x^3 + a2 x^2 + a4 x + a6) + (a1 x + a3)^2.
        let [a1, a2, a3, a4, a6] = self.a.map(|c| c.rem_euclid(li));
        let mut count = 1u64;
        for x in 0..li {
            let cubic = (x * x % li * x + a2 * x % li * x + a4 * x + a6) % li;
            let lin = (a1 * x + a3) % li;
            let d = (4 * cubic + lin * lin) % li;
            count += match legendre(d as u64, l) {
                0 => 1,
                1 => 2,
                _ => 0,
            };
        }
        count
    }

    pub fn reduction_type(&self, l: u64) -> Result<Reduction> {
        if !is_prime(l) {
            return Err(Error::InvalidArgument(format!("{l} is not prime")));
        }
        if !self.conductor.is_multiple_of(l) {
            return Ok(Reduction::Good);
        }
        let li = l as i64;
        let (x0, _) = self.singular_point(li).ok_or_else(|| {
            Error::InvalidArgument(format!("{l} divides the conductor but the reduction is smooth"))
        })?;
        // Moving the node to the origin leaves the tangent cone Y^2 + a1 XY - (a2 + 3 x0) X^2.
        let a1 = self.a[0].rem_euclid(li);
        let c = (self.a[1] + 3 * x0).rem_euclid(li);
        let slopes = (0..li).filter(|t| (t * t + a1 * t - c).rem_euclid(li) == 0).count();
        Ok(match slopes {
            0 => Reduction::NonSplit,
            1 => Reduction::Additive,
            _ => Reduction::Split,
        })
    }

    fn singular_point(&self, l: i64) -> Option<(i64, i64)> {
        let [a1, a2, a3, a4, _] = self.a.map(|c| c.rem_euclid(l));
        (0..l).flat_map(|x| (0..l).map(move |y| (x, y))).find(|&(x, y)| {
            self.eval_mod(x, y, l) == 0
                && (2 * y + a1 * x + a3) % l == 0
                && (a1 * y - 3 * x * x - 2 * a2 * x - a4).rem_euclid(l) == 0
        })
    }

    /// `a_l`: `l + 1 - #E(F_l)` for good `l`, `+1` split, `-1` non-split.
    pub fn ap(&self, l: u64) -> Result<i64> {
        match self.reduction_type(l)? {
            Reduction::Good => Ok(l as i64 + 1 - self.count_points(l) as i64),
            Reduction::Split => Ok(1),
            Reduction::NonSplit => Ok(-1),
            Reduction::Additive => Err(Error::AdditiveReduction(l)),
        }
    }

    pub fn ord_j(&self, p: u64) -> Option<i64> {
        ord_q(&self.j_invariant(), p)
    }
}

impl fmt::Display for EllipticCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a1, a2, a3, a4, a6] = self.a;
        write!(f, "{} (N = {}): [{a1}, {a2}, {a3}, {a4}, {a6}]", self.label, self.conductor)
    }
}

/// The Legendre symbol `(a / l)` for an odd prime `l`, as 0, 1 or -1.
fn legendre(a: u64, l: u64) -> i32 {
    match pow_mod_u64(a % l, (l - 1) / 2, l) {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}
