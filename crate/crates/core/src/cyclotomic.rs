//! Exact arithmetic in cyclotomic fields Q(zeta_m).
//!
//! Elements are coefficient vectors in the power basis `1, z, ..., z^(phi(m)-1)`
//! reduced modulo the cyclotomic polynomial, so equal elements at the same level
//! have equal coefficients. Elements at different levels are compared and combined
//! after lifting both to the lcm level.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::arith::{lcm_u64, to_f64, Q};
use crate::error::{Error, Result};
use crate::linalg;

fn poly_divexact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    let lead = den[dd];
    let mut out = vec![0i64; num.len() - dd];
    for i in (0..out.len()).rev() {
        let c = r[i + dd] / lead;
        out[i] = c;
        for (j, &d) in den.iter().enumerate() {
            r[i + j] -= c * d;
        }
    }
    out
}

fn compute_cyclotomic_poly(m: u64) -> Vec<i64> {
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    let mut p = num;
    for d in 1..m {
        if m.is_multiple_of(d) {
            p = poly_divexact(&p, &cyclotomic_poly(d));
        }
    }
    p
}

/// Coefficients of the m-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_poly(m: u64) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&m) {
        return v.clone();
    }
    let v = Arc::new(compute_cyclotomic_poly(m));
    cache.lock().unwrap().insert(m, v.clone());
    v
}

#[derive(Clone, Debug)]
pub struct Cyclotomic {
    m: u64,
    coeffs: Vec<Q>,
}

impl Cyclotomic {
    /// Reduces an arbitrary polynomial in `zeta_m` to canonical form.
    pub fn from_poly(m: u64, mut v: Vec<Q>) -> Self {
        let phi = cyclotomic_poly(m);
        let d = phi.len() - 1;
        for i in (d..v.len()).rev() {
            if v[i].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut v[i]);
            for (j, &pj) in phi.iter().enumerate().take(d) {
                if pj != 0 {
                    v[i - d + j] -= &c * Q::from_integer(pj.into());
                }
            }
        }
        v.resize(d, Q::zero());
        Cyclotomic { m, coeffs: v }
    }

    /// Reduces a group-ring element `sum_k c_k zeta_m^k` with `k` taken mod m.
    pub fn from_group_ring(m: u64, v: Vec<Q>) -> Self {
        Self::from_poly(m, v)
    }

    pub fn from_q(x: Q) -> Self {
        Cyclotomic { m: 1, coeffs: vec![x] }
    }

    pub fn from_i64(x: i64) -> Self {
        Self::from_q(Q::from_integer(x.into()))
    }

    pub fn zero() -> Self {
        Self::from_i64(0)
    }

    pub fn one() -> Self {
        Self::from_i64(1)
    }

    /// `zeta_m^k` with `zeta_m = exp(2 pi i / m)`.
    pub fn zeta_pow(m: u64, k: i64) -> Self {
        let mut v = vec![Q::zero(); m as usize];
        v[k.rem_euclid(m as i64) as usize] = Q::one();
        Self::from_poly(m, v)
    }

    pub fn level(&self) -> u64 {
        self.m
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The rational value, if the element lies in Q.
    pub fn as_rational(&self) -> Option<Q> {
        if self.coeffs.iter().skip(1).all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Re-expresses the element at level `m2`, a multiple of the current level.
    pub fn lift(&self, m2: u64) -> Self {
        assert!(m2.is_multiple_of(self.m), "lift target must be a multiple");
        if m2 == self.m {
            return self.clone();
        }
        let step = (m2 / self.m) as usize;
        let mut v = vec![Q::zero(); step * self.coeffs.len().max(1)];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i * step] = c.clone();
        }
        Self::from_poly(m2, v)
    }

    fn common(&self, o: &Self) -> (Self, Self) {
        let m = lcm_u64(self.m, o.m);
        (self.lift(m), o.lift(m))
    }

    pub fn add(&self, o: &Self) -> Self {
        let (a, b) = self.common(o);
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        Cyclotomic { m: a.m, coeffs }
    }

    pub fn neg(&self) -> Self {
        Cyclotomic { m: self.m, coeffs: self.coeffs.iter().map(|x| -x).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (a, b) = self.common(o);
        let n = a.coeffs.len();
        let mut v = vec![Q::zero(); 2 * n - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    v[i + j] += x * y;
                }
            }
        }
        Self::from_poly(a.m, v)
    }

    pub fn scale(&self, x: &Q) -> Self {
        Cyclotomic { m: self.m, coeffs: self.coeffs.iter().map(|c| c * x).collect() }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let d = self.coeffs.len();
        // Column j of the multiplication matrix is self * z^j.
        let cols: Vec<Vec<Q>> = (0..d)
            .map(|j| {
                let mut v = vec![Q::zero(); d + j];
                for (i, c) in self.coeffs.iter().enumerate() {
                    v[i + j] = c.clone();
                }
                Self::from_poly(self.m, v).coeffs
            })
            .collect();
        let mat = linalg::transpose(&cols);
        let mut e = vec![Q::zero(); d];
        e[0] = Q::one();
        let x = linalg::solve(&mat, &e).ok_or(Error::SingularMatrix)?;
        Ok(Cyclotomic { m: self.m, coeffs: x })
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, n: i64) -> Result<Self> {
        if n < 0 {
            return self.inv()?.pow(-n);
        }
        let mut result = Self::one().lift(self.m);
        let mut base = self.clone();
        let mut e = n as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        Ok(result)
    }

    /// Complex conjugation `zeta -> zeta^-1`.
    pub fn conj(&self) -> Self {
        let m = self.m as usize;
        let mut v = vec![Q::zero(); m];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[(m - i % m) % m] += c;
        }
        Self::from_poly(self.m, v)
    }

    pub fn to_complex(&self) -> Complex64 {
        let m = self.m as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| Complex64::from_polar(to_f64(c), 2.0 * PI * i as f64 / m))
            .sum()
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, o: &Self) -> bool {
        let (a, b) = self.common(o);
        a.coeffs == b.coeffs
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("({c})*z{}", self.m),
                _ => format!("({c})*z{}^{i}", self.m),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_poly(25).len() - 1, 20);
    }

    #[test]
    fn roots_of_unity_sum_to_zero() {
        for m in [3u64, 4, 5, 8, 9, 12, 25] {
            let s = (0..m as i64).fold(Cyclotomic::zero(), |acc, k| acc.add(&Cyclotomic::zeta_pow(m, k)));
            assert!(s.is_zero(), "m={m}");
            let z = Cyclotomic::zeta_pow(m, 1);
            assert_eq!(z.pow(m as i64).unwrap(), Cyclotomic::one());
        }
    }

    #[test]
    fn lifting_is_compatible() {
        let z3 = Cyclotomic::zeta_pow(3, 1);
        assert_eq!(z3, Cyclotomic::zeta_pow(12, 4));
        let i = Cyclotomic::zeta_pow(4, 1);
        assert_eq!(i.mul(&i), Cyclotomic::from_i64(-1));
        assert_eq!(Cyclotomic::zeta_pow(2, 1), Cyclotomic::from_i64(-1));
    }

    #[test]
    fn inverse_and_conjugate() {
        let x = Cyclotomic::zeta_pow(5, 1).add(&Cyclotomic::from_i64(2));
        let y = x.inv().unwrap();
        assert_eq!(x.mul(&y), Cyclotomic::one());
        let n = x.mul(&x.conj());
        let c = n.to_complex();
        assert!(c.im.abs() < 1e-12);
        assert!((c.re - x.to_complex().norm_sqr()).abs() < 1e-9);
        assert!(Cyclotomic::zero().inv().is_err());
        assert_eq!(Cyclotomic::from_q(q(3)).inv().unwrap(), Cyclotomic::from_q(crate::arith::qfrac(1, 3)));
    }

    #[test]
    fn complex_embedding() {
        let z = Cyclotomic::zeta_pow(8, 3).to_complex();
        let w = Complex64::from_polar(1.0, 2.0 * PI * 3.0 / 8.0);
        assert!((z - w).norm() < 1e-12);
    }
}
