//! Weight-2 modular symbols for `Gamma_0(N)` through Manin symbols.
//!
//! The Manin symbol `(c : d)` stands for `g {0, oo}` with `g = (a b; c d)` in `SL_2(Z)`.
//! Functionals on the plus quotient are functions on `P^1(Z/N)` that are odd under
//! `(c : d) -> (d : -c)`, even under `(c : d) -> (-c : d)`, and sum to zero over the
//! orbits of `(c : d) -> (d : -c - d)`. Hecke operators act through Heilbronn matrices.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::arith::{gcd_u64, primes_up_to, Q};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::mtt::curve::EllipticCurve;

/// Levels above this are refused.
pub const MAX_LEVEL: u64 = 200;

/// `P^1(Z/N)` with a canonical representative for each point.
#[derive(Clone, Debug)]
pub struct P1 {
    n: u64,
    points: Vec<(u64, u64)>,
    /// `index[c * N + d]` for `gcd(c, d, N) = 1`.
    index: Vec<Option<usize>>,
}

impl P1 {
    pub fn new(n: u64) -> Self {
        let units: Vec<u64> = (1..=n).filter(|&u| gcd_u64(u, n) == 1).map(|u| u % n).collect();
        let mut points = Vec::new();
        let mut canon: BTreeMap<(u64, u64), usize> = BTreeMap::new();
        let mut index = vec![None; (n * n) as usize];
        for c in 0..n {
            for d in 0..n {
                if gcd_u64(gcd_u64(c, d), n) != 1 {
                    continue;
                }
                let rep = units.iter().map(|&u| (u * c % n, u * d % n)).min().expect("a unit exists");
                let i = *canon.entry(rep).or_insert_with(|| {
                    points.push(rep);
                    points.len() - 1
                });
                index[(c * n + d) as usize] = Some(i);
            }
        }
        P1 { n, points, index }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> (u64, u64) {
        self.points[i]
    }

    /// Index of `(c : d)`, or `None` when `gcd(c, d, N) > 1`.
    pub fn index_of(&self, c: i128, d: i128) -> Option<usize> {
        let n = self.n as i128;
        let (c, d) = (c.rem_euclid(n) as u64, d.rem_euclid(n) as u64);
        self.index[(c * self.n + d) as usize]
    }
}

/// `(a b; c d)` with `ad - bc = l`, `a > b >= 0`, `d > c >= 0`.
pub fn heilbronn(l: u64) -> Vec<[i128; 4]> {
    let l = l as i128;
    let mut out = Vec::new();
    for a in 1..=l {
        for d in 1..=(l + 1 - a) {
            let ad = a * d;
            for b in 0..a {
                if b == 0 {
                    if ad == l {
                        out.extend((0..d).map(|c| [a, 0, c, d]));
                    }
                    continue;
                }
                let bc = ad - l;
                if bc >= 0 && bc % b == 0 && bc / b < d {
                    out.push([a, b, bc / b, d]);
                }
            }
        }
    }
    out
}

/// The plus-quotient functionals on Manin symbols for `Gamma_0(N)`.
#[derive(Clone, Debug)]
pub struct ModularSymbols {
    pub p1: P1,
    /// Each symbol is `sign * variable` or zero.
    reduce: Vec<Option<(usize, i64)>>,
    n_vars: usize,
    /// Basis of functionals, each a value per variable.
    basis: Vec<Vec<Q>>,
    /// For each basis vector, a variable where it is 1 and every other basis vector is 0.
    coords: Vec<usize>,
}

impl ModularSymbols {
    pub fn new(n: u64) -> Result<Self> {
        if n == 0 || n > MAX_LEVEL {
            return Err(Error::InvalidArgument(format!("level {n} outside 1..={MAX_LEVEL}")));
        }
        let p1 = P1::new(n);
        let m = p1.len();
        let (reduce, n_vars) = two_term_classes(&p1);
        let mut rows: Matrix = Vec::new();
        for i in 0..m {
            let (c, d) = p1.point(i);
            let (c, d) = (c as i128, d as i128);
            let mut row = vec![Q::zero(); n_vars];
            for j in [Some(i), p1.index_of(d, -c - d), p1.index_of(-c - d, c)] {
                if let Some((v, s)) = reduce[j.expect("P^1 is stable under SL_2(Z)")] {
                    row[v] += Q::from_integer(s.into());
                }
            }
            if row.iter().any(|x| !x.is_zero()) {
                rows.push(row);
            }
        }
        let mut echelon = rows.clone();
        let pivots = linalg::rref(&mut echelon);
        let coords: Vec<usize> = (0..n_vars).filter(|c| !pivots.contains(c)).collect();
        let basis = linalg::kernel(&rows, n_vars);
        Ok(ModularSymbols { p1, reduce, n_vars, basis, coords })
    }

    pub fn level(&self) -> u64 {
        self.p1.n
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Value of the functional `phi` (values per variable) on the symbol with index `i`.
    pub fn eval_symbol(&self, phi: &[Q], i: usize) -> Q {
        match self.reduce[i] {
            Some((v, s)) => &phi[v] * Q::from_integer(s.into()),
            None => Q::zero(),
        }
    }

    /// Matrix of `T_l` on the functional basis: row `i` holds the coordinates of `T_l phi_i`.
    pub fn hecke_matrix(&self, l: u64) -> Matrix {
        let hs = heilbronn(l);
        let reps = self.variable_representatives();
        self.basis
            .iter()
            .map(|phi| {
                self.coords
                    .iter()
                    .map(|&v| {
                        let (c, d) = self.p1.point(reps[v]);
                        self.apply_heilbronn(phi, &hs, c as i128, d as i128)
                    })
                    .collect()
            })
            .collect()
    }

    fn apply_heilbronn(&self, phi: &[Q], hs: &[[i128; 4]], c: i128, d: i128) -> Q {
        let mut s = Q::zero();
        for [a, b, c2, d2] in hs {
            if let Some(j) = self.p1.index_of(c * a + d * c2, c * b + d * d2) {
                s += self.eval_symbol(phi, j);
            }
        }
        s
    }

    /// `(T_l phi)` as values per variable.
    pub fn hecke_apply(&self, phi: &[Q], l: u64) -> Vec<Q> {
        let hs = heilbronn(l);
        let reps = self.variable_representatives();
        (0..self.n_vars)
            .map(|v| {
                let (c, d) = self.p1.point(reps[v]);
                self.apply_heilbronn(phi, &hs, c as i128, d as i128)
            })
            .collect()
    }

    fn variable_representatives(&self) -> Vec<usize> {
        let mut reps = vec![usize::MAX; self.n_vars];
        for (i, r) in self.reduce.iter().enumerate() {
            if let Some((v, 1)) = r {
                if reps[*v] == usize::MAX {
                    reps[*v] = i;
                }
            }
        }
        reps
    }

    /// The plus eigen-functional of `e`: integral with content 1 on Manin symbols and
    /// `lambda(0) > 0` when nonzero. Good primes are added until the common eigenspace
    /// is a line.
    pub fn eigensymbol(&self, e: &EllipticCurve) -> Result<EigenSymbol> {
        if e.conductor != self.level() {
            return Err(Error::InvalidArgument(format!("curve of conductor {} on level {}", e.conductor, self.level())));
        }
        let d = self.dimension();
        let mut stacked: Matrix = Vec::new();
        let mut used = Vec::new();
        let mut dim = d;
        for l in primes_up_to(1000).into_iter().filter(|l| !self.level().is_multiple_of(*l)) {
            let ap = Q::from_integer(e.ap(l)?.into());
            let t = linalg::transpose(&self.hecke_matrix(l));
            for (i, row) in t.into_iter().enumerate() {
                let mut row = row;
                row[i] -= &ap;
                stacked.push(row);
            }
            used.push(l);
            let ker = linalg::kernel(&stacked, d);
            dim = ker.len();
            if dim == 1 {
                let phi = combine(&self.basis, &ker[0], self.n_vars);
                return Ok(EigenSymbol::normalized(self.clone(), phi, used));
            }
            if dim == 0 || used.len() >= 12 {
                break;
            }
        }
        Err(Error::EigenspaceNotIsolated { dim, bound: used.last().copied().unwrap_or(0) })
    }
}

fn combine(basis: &[Vec<Q>], coeffs: &[Q], n_vars: usize) -> Vec<Q> {
    let mut out = vec![Q::zero(); n_vars];
    for (b, c) in basis.iter().zip(coeffs) {
        for (o, x) in out.iter_mut().zip(b) {
            *o += c * x;
        }
    }
    out
}

/// Classes under `x -> -x sigma` and `x -> x*`; a class meeting its own negative is zero.
fn two_term_classes(p1: &P1) -> (Vec<Option<(usize, i64)>>, usize) {
    let m = p1.len();
    let mut sign: Vec<i64> = vec![0; m];
    let mut class: Vec<usize> = vec![usize::MAX; m];
    let mut n_classes = 0;
    let mut zero_class: Vec<bool> = Vec::new();
    for start in 0..m {
        if class[start] != usize::MAX {
            continue;
        }
        let id = n_classes;
        n_classes += 1;
        zero_class.push(false);
        class[start] = id;
        sign[start] = 1;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            let (c, d) = p1.point(i);
            let (c, d) = (c as i128, d as i128);
            let sigma = p1.index_of(d, -c).expect("stable");
            let star = p1.index_of(-c, d).expect("stable");
            for (j, s) in [(sigma, -sign[i]), (star, sign[i])] {
                if class[j] == usize::MAX {
                    class[j] = id;
                    sign[j] = s;
                    stack.push(j);
                } else if sign[j] != s {
                    zero_class[id] = true;
                }
            }
        }
    }
    let mut var_of = vec![usize::MAX; n_classes];
    let mut n_vars = 0;
    for (id, z) in zero_class.iter().enumerate() {
        if !z {
            var_of[id] = n_vars;
            n_vars += 1;
        }
    }
    let reduce = (0..m)
        .map(|i| {
            let id = class[i];
            (!zero_class[id]).then(|| (var_of[id], sign[i]))
        })
        .collect();
    (reduce, n_vars)
}

/// Convergents `p_k / q_k` of `num / den`, starting from `p_-1 / q_-1 = 1 / 0`.
fn convergents(num: &BigInt, den: &BigInt) -> Vec<(BigInt, BigInt)> {
    let mut out = vec![(BigInt::one(), BigInt::zero())];
    let (mut pm2, mut qm2) = (BigInt::zero(), BigInt::one());
    let (mut pm1, mut qm1) = (BigInt::one(), BigInt::zero());
    let (mut a, mut b) = (num.clone(), den.clone());
    while !b.is_zero() {
        let (t, r) = a.div_mod_floor(&b);
        let pk = &t * &pm1 + &pm2;
        let qk = &t * &qm1 + &qm2;
        out.push((pk.clone(), qk.clone()));
        pm2 = std::mem::replace(&mut pm1, pk);
        qm2 = std::mem::replace(&mut qm1, qk);
        a = std::mem::replace(&mut b, r);
    }
    out
}

/// A normalized plus eigen-functional and the modular symbol `lambda(r) = phi({oo, r})`.
#[derive(Clone, Debug)]
pub struct EigenSymbol {
    space: ModularSymbols,
    phi: Vec<Q>,
    /// Primes whose Hecke eigenvalues isolated the eigenspace.
    pub isolating_primes: Vec<u64>,
}

impl EigenSymbol {
    fn normalized(space: ModularSymbols, phi: Vec<Q>, isolating_primes: Vec<u64>) -> Self {
        let den = phi.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<BigInt> = phi.iter().map(|x| (x * Q::from_integer(den.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        let mut phi: Vec<Q> = ints.into_iter().map(|x| Q::from_integer(x / &g)).collect();
        let mut s = EigenSymbol { space, phi: phi.clone(), isolating_primes };
        let l0 = s.lambda(&Q::zero());
        let flip = if l0.is_zero() { phi.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) } else { l0.is_negative() };
        if flip {
            phi.iter_mut().for_each(|x| *x = -x.clone());
            s.phi = phi;
        }
        s
    }

    pub fn space(&self) -> &ModularSymbols {
        &self.space
    }

    /// Values per variable of the functional.
    pub fn values(&self) -> &[Q] {
        &self.phi
    }

    /// Value on the Manin symbol `(c : d)`.
    pub fn manin(&self, c: i128, d: i128) -> Q {
        match self.space.p1.index_of(c, d) {
            Some(i) => self.space.eval_symbol(&self.phi, i),
            None => Q::zero(),
        }
    }

    /// `lambda(r) = phi({oo, r})`, summing the unimodular steps between convergents.
    pub fn lambda(&self, r: &Q) -> Q {
        let n = self.level() as i128;
        let conv = convergents(r.numer(), r.denom());
        let mut s = Q::zero();
        for k in 1..conv.len() {
            // Step from p_(k-2)/q_(k-2) to p_(k-1)/q_(k-1), with sign (-1)^(k-2).
            let q_prev = mod_n(&conv[k - 1].1, n);
            let q_k = mod_n(&conv[k].1, n);
            let c = if k % 2 == 0 { q_k } else { -q_k };
            s += self.manin(c, q_prev);
        }
        s
    }

    pub fn level(&self) -> u64 {
        self.space.level()
    }

    /// `lambda(a / m)` for `a` in `0..m`, computed in parallel.
    pub fn lambda_table(&self, m: u64) -> Vec<Q> {
        (0..m).into_par_iter().map(|a| self.lambda(&Q::new(BigInt::from(a), BigInt::from(m)))).collect()
    }

    /// Whether `T_l phi = a phi`.
    pub fn is_eigen(&self, l: u64, a: i64) -> bool {
        let t = self.space.hecke_apply(&self.phi, l);
        let a = Q::from_integer(a.into());
        t.iter().zip(&self.phi).all(|(x, y)| *x == &a * y)
    }
}

fn mod_n(x: &BigInt, n: i128) -> i128 {
    let r = x.mod_floor(&BigInt::from(n));
    i128::try_from(r).expect("residue fits")
}
