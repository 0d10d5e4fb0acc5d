//! Balls in Q_p, compact open subsets of P^1(Q_p), and locally constant functions
//! given as finite sums of ball indicators.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};

use crate::arith::{ord_q, pow_q, reduce_mod_pk, Q};
use crate::padic::Padic;

/// The ball `c + p^m Z_p` with `c` reduced to its canonical representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ball {
    p: u64,
    m: i64,
    c: Q,
}

impl Ball {
    pub fn new(p: u64, c: &Q, m: i64) -> Self {
        Ball { p, m, c: reduce_mod_pk(c, p, m) }
    }

    pub fn zp(p: u64) -> Self {
        Ball::new(p, &Q::zero(), 0)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Radius exponent: the ball is a coset of `p^m Z_p`.
    pub fn radius(&self) -> i64 {
        self.m
    }

    pub fn center(&self) -> &Q {
        &self.c
    }

    /// Haar measure with `Z_p` of volume 1.
    pub fn volume(&self) -> Q {
        pow_q(self.p, -self.m)
    }

    pub fn contains_point(&self, x: &Q) -> bool {
        match ord_q(&(x - &self.c), self.p) {
            None => true,
            Some(v) => v >= self.m,
        }
    }

    pub fn contains(&self, o: &Ball) -> bool {
        o.m >= self.m && self.contains_point(&o.c)
    }

    pub fn disjoint(&self, o: &Ball) -> bool {
        !self.contains(o) && !o.contains(self)
    }

    pub fn parent(&self) -> Ball {
        Ball::new(self.p, &self.c, self.m - 1)
    }

    pub fn children(&self) -> Vec<Ball> {
        let step = pow_q(self.p, self.m);
        (0..self.p)
            .map(|j| Ball::new(self.p, &(&self.c + &step * Q::from_integer(j.into())), self.m + 1))
            .collect()
    }

    /// All sub-balls of radius `m2 >= m`.
    pub fn subdivide(&self, m2: i64) -> Vec<Ball> {
        let mut cur = vec![self.clone()];
        for _ in self.m..m2 {
            cur = cur.iter().flat_map(|b| b.children()).collect();
        }
        cur
    }

    pub fn child_containing(&self, x: &Q) -> Ball {
        Ball::new(self.p, x, self.m + 1)
    }

    /// Image under `x -> a x + b`, `a != 0`.
    pub fn affine(&self, a: &Q, b: &Q) -> Ball {
        let v = ord_q(a, self.p).expect("nonzero scale");
        Ball::new(self.p, &(a * &self.c + b), self.m + v)
    }

    /// Whether the ball avoids zero, i.e. is a coset `x U^(n)`.
    pub fn avoids_zero(&self) -> bool {
        !self.contains_point(&Q::zero())
    }

    /// The smallest ball containing both.
    pub fn join(&self, o: &Ball) -> Ball {
        let mut m = self.m.min(o.m);
        if let Some(v) = ord_q(&(&self.c - &o.c), self.p) {
            m = m.min(v);
        }
        Ball::new(self.p, &self.c, m)
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}^{}Z_{}", self.c, self.p, self.m, self.p)
    }
}

/// Pieces of `x` outside `b`.
fn ball_minus(x: &Ball, b: &Ball) -> Vec<Ball> {
    if b.contains(x) {
        return Vec::new();
    }
    if !x.contains(b) {
        return vec![x.clone()];
    }
    let mut out = Vec::new();
    let mut cur = x.clone();
    while cur.m < b.m {
        let next = cur.child_containing(&b.c);
        out.extend(cur.children().into_iter().filter(|c| *c != next));
        cur = next;
    }
    out
}

/// Canonical form of a union of balls: disjoint, sorted, full sibling sets merged.
pub fn normalize_balls(balls: Vec<Ball>) -> Vec<Ball> {
    let mut sorted = balls;
    sorted.sort_by(|a, b| a.m.cmp(&b.m).then_with(|| a.c.cmp(&b.c)));
    sorted.dedup();
    let mut kept: Vec<Ball> = Vec::new();
    for b in sorted {
        if !kept.iter().any(|k| k.contains(&b)) {
            kept.push(b);
        }
    }
    let mut set: BTreeSet<Ball> = kept.into_iter().collect();
    loop {
        let mut groups: BTreeMap<Ball, usize> = BTreeMap::new();
        for b in &set {
            *groups.entry(b.parent()).or_default() += 1;
        }
        let full: Vec<Ball> = groups.into_iter().filter(|(par, n)| *n as u64 == par.p).map(|(par, _)| par).collect();
        if full.is_empty() {
            break;
        }
        for par in full {
            for c in par.children() {
                set.remove(&c);
            }
            set.insert(par);
        }
    }
    set.into_iter().collect()
}

/// A point of P^1(Q_p).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum P1Point {
    Finite(Q),
    Infinity,
}

/// A 2x2 matrix over Q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat2 {
    pub a: Q,
    pub b: Q,
    pub c: Q,
    pub d: Q,
}

impl Mat2 {
    pub fn new(a: Q, b: Q, c: Q, d: Q) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Self {
        let q = |x: i64| Q::from_integer(x.into());
        Mat2::new(q(a), q(b), q(c), q(d))
    }

    pub fn identity() -> Self {
        Mat2::from_i64(1, 0, 0, 1)
    }

    pub fn diag(x: Q, y: Q) -> Self {
        Mat2::new(x, Q::zero(), Q::zero(), y)
    }

    pub fn det(&self) -> Q {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2::new(
            &self.a * &o.a + &self.b * &o.c,
            &self.a * &o.b + &self.b * &o.d,
            &self.c * &o.a + &self.d * &o.c,
            &self.c * &o.b + &self.d * &o.d,
        )
    }

    pub fn inv(&self) -> Option<Mat2> {
        let det = self.det();
        if det.is_zero() {
            return None;
        }
        Some(Mat2::new(&self.d / &det, -&self.b / &det, -&self.c / &det, &self.a / &det))
    }

    /// Möbius action on P^1.
    pub fn apply(&self, x: &P1Point) -> P1Point {
        match x {
            P1Point::Infinity => {
                if self.c.is_zero() {
                    P1Point::Infinity
                } else {
                    P1Point::Finite(&self.a / &self.c)
                }
            }
            P1Point::Finite(x) => {
                let den = &self.c * x + &self.d;
                if den.is_zero() {
                    P1Point::Infinity
                } else {
                    P1Point::Finite((&self.a * x + &self.b) / den)
                }
            }
        }
    }
}

/// A compact open subset of P^1(Q_p): a finite union of balls, or the complement of one.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CompactOpen {
    p: u64,
    balls: Vec<Ball>,
    cofinite: bool,
}

impl CompactOpen {
    pub fn from_balls(p: u64, balls: Vec<Ball>) -> Self {
        CompactOpen { p, balls: normalize_balls(balls), cofinite: false }
    }

    pub fn ball(b: Ball) -> Self {
        let p = b.p;
        Self::from_balls(p, vec![b])
    }

    pub fn empty(p: u64) -> Self {
        CompactOpen { p, balls: Vec::new(), cofinite: false }
    }

    pub fn whole(p: u64) -> Self {
        CompactOpen { p, balls: Vec::new(), cofinite: true }
    }

    pub fn balls(&self) -> &[Ball] {
        &self.balls
    }

    /// True when the set is `P^1` minus the listed balls (and so contains infinity).
    pub fn is_cofinite(&self) -> bool {
        self.cofinite
    }

    pub fn is_empty(&self) -> bool {
        !self.cofinite && self.balls.is_empty()
    }

    pub fn contains(&self, x: &P1Point) -> bool {
        match x {
            P1Point::Infinity => self.cofinite,
            P1Point::Finite(x) => self.balls.iter().any(|b| b.contains_point(x)) != self.cofinite,
        }
    }

    pub fn complement(&self) -> Self {
        CompactOpen { p: self.p, balls: self.balls.clone(), cofinite: !self.cofinite }
    }

    fn finite_union(a: &[Ball], b: &[Ball]) -> Vec<Ball> {
        normalize_balls(a.iter().chain(b).cloned().collect())
    }

    fn finite_intersection(a: &[Ball], b: &[Ball]) -> Vec<Ball> {
        let mut out = Vec::new();
        for x in a {
            for y in b {
                if y.contains(x) {
                    out.push(x.clone());
                } else if x.contains(y) {
                    out.push(y.clone());
                }
            }
        }
        normalize_balls(out)
    }

    fn finite_minus(a: &[Ball], b: &[Ball]) -> Vec<Ball> {
        let mut pieces: Vec<Ball> = a.to_vec();
        for y in b {
            pieces = pieces.iter().flat_map(|x| ball_minus(x, y)).collect();
        }
        normalize_balls(pieces)
    }

    pub fn union(&self, o: &Self) -> Self {
        let (balls, cofinite) = match (self.cofinite, o.cofinite) {
            (false, false) => (Self::finite_union(&self.balls, &o.balls), false),
            (true, true) => (Self::finite_intersection(&self.balls, &o.balls), true),
            (true, false) => (Self::finite_minus(&self.balls, &o.balls), true),
            (false, true) => (Self::finite_minus(&o.balls, &self.balls), true),
        };
        CompactOpen { p: self.p, balls, cofinite }
    }

    pub fn intersection(&self, o: &Self) -> Self {
        self.complement().union(&o.complement()).complement()
    }

    pub fn difference(&self, o: &Self) -> Self {
        self.intersection(&o.complement())
    }

    pub fn is_disjoint(&self, o: &Self) -> bool {
        self.intersection(o).is_empty()
    }

    /// Image of a finite ball under `x -> 1/x`.
    fn invert_ball(b: &Ball) -> CompactOpen {
        let p = b.p;
        if b.avoids_zero() {
            let v = ord_q(&b.c, p).expect("center is nonzero");
            let c = Q::one() / &b.c;
            CompactOpen::ball(Ball::new(p, &c, b.m - 2 * v))
        } else {
            // 1 / (p^m Z_p) = {ord <= -m} together with infinity.
            CompactOpen::ball(Ball::new(p, &Q::zero(), 1 - b.m)).complement()
        }
    }

    fn map_finite(&self, f: &dyn Fn(&Ball) -> CompactOpen) -> CompactOpen {
        let img = self.balls.iter().fold(CompactOpen::empty(self.p), |acc, b| acc.union(&f(b)));
        if self.cofinite {
            img.complement()
        } else {
            img
        }
    }

    /// Image under the Möbius transformation of `g`.
    pub fn mobius(&self, g: &Mat2) -> CompactOpen {
        if g.c.is_zero() {
            let a = &g.a / &g.d;
            let b = &g.b / &g.d;
            return self.map_finite(&|x: &Ball| CompactOpen::ball(x.affine(&a, &b)));
        }
        // g x = a/c - det / (c^2 (x + d/c))
        let shift = &g.d / &g.c;
        let scale = -g.det() / (&g.c * &g.c);
        let last = &g.a / &g.c;
        let s1 = self.map_finite(&|x: &Ball| CompactOpen::ball(x.affine(&Q::one(), &shift)));
        let s2 = s1.map_finite(&Self::invert_ball);
        s2.map_finite(&|x: &Ball| CompactOpen::ball(x.affine(&scale, &last)))
    }
}

impl fmt::Display for CompactOpen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inner: Vec<String> = self.balls.iter().map(|b| b.to_string()).collect();
        if self.cofinite {
            write!(f, "P1 - [{}]", inner.join(", "))
        } else {
            write!(f, "[{}]", inner.join(", "))
        }
    }
}

/// Coefficients for ball functions.
pub trait Coeff: Clone + fmt::Debug + Send + Sync {
    fn plus(&self, o: &Self) -> Self;
    fn negated(&self) -> Self;
    fn vanishes(&self) -> bool;
    fn scaled(&self, x: &Q) -> Self;

    fn minus(&self, o: &Self) -> Self {
        self.plus(&o.negated())
    }
}

impl Coeff for Q {
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn scaled(&self, x: &Q) -> Self {
        self * x
    }
}

impl Coeff for Padic {
    fn plus(&self, o: &Self) -> Self {
        Padic::add(self, o)
    }
    fn negated(&self) -> Self {
        Padic::neg(self)
    }
    fn vanishes(&self) -> bool {
        Padic::is_zero(self)
    }
    fn scaled(&self, x: &Q) -> Self {
        Padic::scale(self, x)
    }
}

/// A compactly supported locally constant function on Q_p, `sum_i v_i 1_{B_i}`.
#[derive(Clone, Debug)]
pub struct BallFunction<V: Coeff> {
    p: u64,
    terms: Vec<(Ball, V)>,
}

impl<V: Coeff> BallFunction<V> {
    pub fn zero(p: u64) -> Self {
        BallFunction { p, terms: Vec::new() }
    }

    pub fn indicator(b: Ball, v: V) -> Self {
        BallFunction { p: b.p, terms: vec![(b, v)] }
    }

    pub fn from_terms(p: u64, terms: Vec<(Ball, V)>) -> Self {
        BallFunction { p, terms }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn terms(&self) -> &[(Ball, V)] {
        &self.terms
    }

    pub fn push(&mut self, b: Ball, v: V) {
        self.terms.push((b, v));
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(o.terms.iter().cloned());
        BallFunction { p: self.p, terms }
    }

    pub fn neg(&self) -> Self {
        BallFunction { p: self.p, terms: self.terms.iter().map(|(b, v)| (b.clone(), v.negated())).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, x: &Q) -> Self {
        BallFunction { p: self.p, terms: self.terms.iter().map(|(b, v)| (b.clone(), v.scaled(x))).collect() }
    }

    /// `x -> f(x)`; `None` when no ball contains `x`.
    pub fn eval(&self, x: &Q) -> Option<V> {
        self.terms
            .iter()
            .filter(|(b, _)| b.contains_point(x))
            .map(|(_, v)| v.clone())
            .reduce(|a, b| a.plus(&b))
    }

    /// `(g f)(x) = f(g^-1 x)` for `g = (a b; 0 1)`, i.e. the push-forward along `x -> a x + b`.
    pub fn translate(&self, a: &Q, b: &Q) -> Self {
        BallFunction {
            p: self.p,
            terms: self.terms.iter().map(|(ball, v)| (ball.affine(a, b), v.clone())).collect(),
        }
    }

    /// Disjoint, maximally merged representation with no zero values.
    pub fn canonical(&self) -> BTreeMap<Ball, V> {
        let mut map: BTreeMap<Ball, V> = BTreeMap::new();
        for (b, v) in &self.terms {
            match map.get_mut(b) {
                Some(acc) => *acc = acc.plus(v),
                None => {
                    map.insert(b.clone(), v.clone());
                }
            }
        }
        // Push values down until no ball contains another.
        loop {
            let Some(min_m) = map.keys().map(|b| b.m).min() else { break };
            let mut split: BTreeSet<Ball> = BTreeSet::new();
            for d in map.keys() {
                let mut a = d.clone();
                while a.m > min_m {
                    a = a.parent();
                    if map.contains_key(&a) {
                        split.insert(a.clone());
                    }
                }
            }
            if split.is_empty() {
                break;
            }
            for a in split {
                let v = map.remove(&a).expect("present");
                for c in a.children() {
                    match map.get_mut(&c) {
                        Some(acc) => *acc = acc.plus(&v),
                        None => {
                            map.insert(c, v.clone());
                        }
                    }
                }
            }
        }
        map.retain(|_, v| !v.vanishes());
        loop {
            let mut groups: BTreeMap<Ball, Vec<Ball>> = BTreeMap::new();
            for b in map.keys() {
                groups.entry(b.parent()).or_default().push(b.clone());
            }
            let mut changed = false;
            for (par, kids) in groups {
                if kids.len() as u64 != self.p {
                    continue;
                }
                let v0 = map[&kids[0]].clone();
                if kids.iter().all(|k| map[k].minus(&v0).vanishes()) {
                    for k in &kids {
                        map.remove(k);
                    }
                    map.insert(par, v0);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        map
    }

    pub fn is_zero(&self) -> bool {
        self.canonical().is_empty()
    }

    pub fn equals(&self, o: &Self) -> bool {
        self.sub(o).is_zero()
    }

    /// Support as a compact open of Q_p.
    pub fn support(&self) -> CompactOpen {
        CompactOpen::from_balls(self.p, self.canonical().into_keys().collect())
    }
}

impl BallFunction<Q> {
    /// Integral against Haar measure with `vol(Z_p) = 1`.
    pub fn haar_integral(&self) -> Q {
        self.terms.iter().fold(Q::zero(), |acc, (b, v)| acc + v * b.volume())
    }
}

/// A locally constant function on P^1: `constant + f` with `f` compactly supported in Q_p.
#[derive(Clone, Debug)]
pub struct P1Function {
    pub constant: Q,
    pub finite: BallFunction<Q>,
}

impl P1Function {
    pub fn indicator(u: &CompactOpen) -> Self {
        let p = u.p;
        let f = BallFunction::from_terms(p, u.balls.iter().map(|b| (b.clone(), Q::one())).collect());
        if u.cofinite {
            P1Function { constant: Q::one(), finite: f.neg() }
        } else {
            P1Function { constant: Q::zero(), finite: f }
        }
    }

    pub fn eval(&self, x: &P1Point) -> Q {
        match x {
            P1Point::Infinity => self.constant.clone(),
            P1Point::Finite(x) => &self.constant + self.finite.eval(x).unwrap_or_else(Q::zero),
        }
    }

    pub fn value_at_infinity(&self) -> Q {
        self.constant.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, qfrac};

    #[test]
    fn balls_nest() {
        let b = Ball::new(3, &q(4), 1);
        assert_eq!(b.center(), &q(1));
        assert!(b.contains_point(&q(7)));
        assert!(!b.contains_point(&q(2)));
        assert!(b.parent().contains(&b));
        assert_eq!(b.children().len(), 3);
        assert!(b.children().iter().all(|c| b.contains(c)));
        let c = Ball::new(3, &qfrac(4, 9), -1);
        assert_eq!(c.center(), &qfrac(1, 9));
        assert_eq!(Ball::new(3, &qfrac(1, 3), -1).center(), &q(0));
        assert_eq!(c.volume(), q(3));
    }

    #[test]
    fn normalize_merges_siblings() {
        let z = Ball::zp(2);
        let kids = z.children();
        let n = normalize_balls(kids);
        assert_eq!(n, vec![z.clone()]);
        let n = normalize_balls(vec![z.clone(), Ball::new(2, &q(1), 3)]);
        assert_eq!(n, vec![z]);
    }

    #[test]
    fn set_algebra() {
        let p = 3;
        let zp = CompactOpen::ball(Ball::zp(p));
        let pzp = CompactOpen::ball(Ball::new(p, &q(0), 1));
        let units = zp.difference(&pzp);
        assert_eq!(units.balls().len(), 2);
        assert!(units.union(&pzp) == zp);
        assert!(units.is_disjoint(&pzp));
        let outside = zp.complement();
        assert!(outside.contains(&P1Point::Infinity));
        assert!(outside.union(&zp) == CompactOpen::whole(p));
        assert!(outside.intersection(&zp).is_empty());
    }

    #[test]
    fn inversion_swaps_inside_and_outside() {
        let p = 5;
        let g = Mat2::from_i64(0, 1, 1, 0);
        let pzp = CompactOpen::ball(Ball::new(p, &q(0), 1));
        let img = pzp.mobius(&g);
        assert!(img.is_cofinite());
        assert!(img == CompactOpen::ball(Ball::zp(p)).complement());
        let units = CompactOpen::ball(Ball::zp(p)).difference(&pzp);
        assert!(units.mobius(&g) == units);
    }

    #[test]
    fn mobius_matches_pointwise() {
        let p = 3;
        let g = Mat2::from_i64(2, 1, 3, 5);
        let u = CompactOpen::ball(Ball::new(p, &q(1), 2));
        let img = u.mobius(&g);
        for k in -20i64..20 {
            let x = qfrac(k, 9);
            let inside = u.contains(&P1Point::Finite(x.clone()));
            let gx = g.apply(&P1Point::Finite(x));
            assert_eq!(img.contains(&gx), inside);
        }
    }

    #[test]
    fn ball_function_canonical_form() {
        let p = 2;
        let z = Ball::zp(p);
        let mut f = BallFunction::indicator(z.clone(), q(1));
        for c in z.children() {
            f.push(c, q(-1));
        }
        assert!(f.is_zero());
        let g = BallFunction::indicator(Ball::new(p, &q(0), 1), q(3));
        let h = BallFunction::from_terms(p, vec![(Ball::new(p, &q(0), 2), q(3)), (Ball::new(p, &q(2), 2), q(3))]);
        assert!(g.equals(&h));
        assert_eq!(g.eval(&q(4)), Some(q(3)));
        assert_eq!(g.eval(&q(1)), None);
    }

    #[test]
    fn p1_indicators() {
        let p = 3;
        let u = CompactOpen::ball(Ball::zp(p)).complement();
        let f = P1Function::indicator(&u);
        assert_eq!(f.eval(&P1Point::Infinity), q(1));
        assert_eq!(f.eval(&P1Point::Finite(q(1))), q(0));
        assert_eq!(f.eval(&P1Point::Finite(qfrac(1, 3))), q(1));
    }
}
