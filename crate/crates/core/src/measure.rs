//! p-adic measures on Z_p^* given by their values on residue balls, with Riemann-sum
//! integration of `<x>^s` and of powers of `log_p`.
//!
//! Precision contract. If `|mu(B)| <= p^c` on every ball and `g` varies by at most
//! `p^-e` on each ball of level `n`, the level-`n` Riemann sum of `g` is within `p^-(e-c)`
//! of the integral. For `g = <x>^s`, writing `x = a (1 + p^n y)`,
//! `<x>^s / <a>^s = exp(s log(1 + p^n y)) = 1 + O(p^(n + ord s))`, so `e = n + ord s`.
//! For `g = (log x)^k`, `log x - log a ∈ p^n Z_p` and `log a ∈ p Z_p`, so
//! `(log x)^k - (log a)^k ∈ p^(n + k - 1) Z_p` and `e = n + k - 1`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::arith::{parse_rational, Q};
use crate::error::{Error, Result};
use crate::padic::{Padic, EXACT};

#[derive(Clone, Debug)]
pub struct BallMeasure {
    p: u64,
    n_max: u32,
    /// `levels[n - 1][a]` is `mu(a + p^n Z_p)` for units `a` in `[1, p^n)`.
    levels: Vec<BTreeMap<u64, Padic>>,
}

/// Result of [`BallMeasure::check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasureReport {
    /// Least `c >= 0` with `ord_p(mu(B)) >= -c` for every stored ball.
    pub bound: i64,
    pub balls_checked: usize,
}

/// A value with the exponent `e` such that it is correct modulo `p^e`.
#[derive(Clone, Debug)]
pub struct Approx {
    pub value: Padic,
    pub error_exponent: i64,
}

#[derive(Clone, Debug)]
pub struct VanishingReport {
    /// Least `k` whose moment is nonzero at its precision; `None` when all vanish.
    pub order: Option<u32>,
    pub moments: Vec<Approx>,
}

fn units(p: u64, n: u32) -> impl Iterator<Item = u64> {
    (1..p.pow(n)).filter(move |a| a % p != 0)
}

impl BallMeasure {
    /// Builds every level from `f(n, a)`; nothing is assumed about compatibility.
    pub fn from_fn(p: u64, n_max: u32, f: impl Fn(u32, u64) -> Padic) -> Self {
        let levels = (1..=n_max).map(|n| units(p, n).map(|a| (a, f(n, a))).collect()).collect();
        BallMeasure { p, n_max, levels }
    }

    /// Builds the top level from `f` and sums down, so the distribution relation holds.
    pub fn from_top_level(p: u64, n_max: u32, f: impl Fn(u64) -> Padic) -> Self {
        let mut levels: Vec<BTreeMap<u64, Padic>> = vec![BTreeMap::new(); n_max as usize];
        levels[n_max as usize - 1] = units(p, n_max).map(|a| (a, f(a))).collect();
        for n in (1..n_max).rev() {
            let m = p.pow(n);
            let mut lower: BTreeMap<u64, Padic> = BTreeMap::new();
            for (a, v) in &levels[n as usize] {
                let e = lower.entry(a % m).or_insert_with(|| Padic::zero(p, EXACT));
                *e = e.add(v);
            }
            levels[n as usize - 1] = lower;
        }
        BallMeasure { p, n_max, levels }
    }

    /// The point mass at the unit integer `x`, with values known modulo `p^abs_prec`.
    pub fn dirac(p: u64, n_max: u32, x: i64, abs_prec: i64) -> Result<Self> {
        let xb = BigInt::from(x);
        if (&xb % BigInt::from(p)).is_zero() {
            return Err(Error::NotAUnit(x.to_string(), p));
        }
        let top = p.pow(n_max) as i64;
        let r = x.rem_euclid(top) as u64;
        Ok(Self::from_top_level(p, n_max, |a| {
            Padic::from_i64(p, if a == r { 1 } else { 0 }, abs_prec)
        }))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn max_level(&self) -> u32 {
        self.n_max
    }

    /// `mu(a + p^n Z_p)`.
    pub fn value(&self, n: u32, a: u64) -> Option<&Padic> {
        if n == 0 || n > self.n_max {
            return None;
        }
        self.levels[n as usize - 1].get(&(a % self.p.pow(n)))
    }

    pub fn set(&mut self, n: u32, a: u64, v: Padic) {
        let m = self.p.pow(n);
        self.levels[n as usize - 1].insert(a % m, v);
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        if self.p != o.p || self.n_max != o.n_max {
            return Err(Error::InvalidArgument("measures with different p or depth".into()));
        }
        let levels = self
            .levels
            .iter()
            .zip(&o.levels)
            .map(|(x, y)| {
                let mut out = x.clone();
                for (a, v) in y {
                    let e = out.entry(*a).or_insert_with(|| Padic::zero(self.p, EXACT));
                    *e = e.add(v);
                }
                out
            })
            .collect();
        Ok(BallMeasure { p: self.p, n_max: self.n_max, levels })
    }

    pub fn scale(&self, x: &Q) -> Self {
        let levels = self.levels.iter().map(|l| l.iter().map(|(a, v)| (*a, v.scale(x))).collect()).collect();
        BallMeasure { p: self.p, n_max: self.n_max, levels }
    }

    /// Total mass `mu(Z_p^*)`.
    pub fn total_mass(&self) -> Padic {
        self.levels[0].values().fold(Padic::zero(self.p, EXACT), |acc, v| acc.add(v))
    }

    /// Verifies the distribution relation at every level and returns the bound `c`.
    pub fn check(&self) -> Result<MeasureReport> {
        let p = self.p;
        let mut min_ord = 0i64;
        let mut checked = 0usize;
        for n in 1..=self.n_max {
            for a in units(p, n) {
                let v = self.value(n, a).ok_or(Error::DistributionViolation { level: n, residue: a })?;
                if let Some(o) = v.valuation() {
                    min_ord = min_ord.min(o);
                }
                checked += 1;
                if n == self.n_max {
                    continue;
                }
                let m = p.pow(n);
                let mut sum = Padic::zero(p, EXACT);
                for j in 0..p {
                    let b = a + j * m;
                    let w = self.value(n + 1, b).ok_or(Error::DistributionViolation { level: n + 1, residue: b })?;
                    sum = sum.add(w);
                }
                if !v.sub(&sum).is_zero() {
                    return Err(Error::DistributionViolation { level: n, residue: a });
                }
            }
        }
        Ok(MeasureReport { bound: -min_ord, balls_checked: checked })
    }

    /// Least absolute precision among the level-`n` values.
    fn level_precision(&self, n: u32) -> i64 {
        self.levels[n as usize - 1].values().map(|v| v.abs_prec()).min().unwrap_or(EXACT)
    }

    fn riemann_sum(&self, n: u32, g: impl Fn(u64) -> Result<Padic> + Sync) -> Result<Padic> {
        if n == 0 || n > self.n_max {
            return Err(Error::InvalidArgument(format!("level {n} outside 1..={}", self.n_max)));
        }
        let p = self.p;
        let terms: Vec<(&u64, &Padic)> = self.levels[n as usize - 1].iter().collect();
        let parts: Result<Vec<Padic>> = terms.par_iter().map(|(a, v)| Ok(g(**a)?.mul(v))).collect();
        Ok(parts?.iter().fold(Padic::zero(p, EXACT), |acc, x| acc.add(x)))
    }

    /// `L_p(s) = int <x>^s dmu` at level `n`, for `s = 0` or `ord_p(s) >= 1`
    /// (`>= 2` when `p = 2`).
    pub fn gamma_transform(&self, s: &Padic, n: u32) -> Result<Approx> {
        let p = self.p;
        let c = self.check_bound();
        let os = s.valuation();
        let need = if p == 2 { 2 } else { 1 };
        if os.is_some_and(|v| v < need) {
            return Err(Error::Divergent(format!("<x>^s needs ord_p(s) >= {need}")));
        }
        let prec = self.level_precision(n).min(s.abs_prec().max(1) + 1).min(60);
        let value = self.riemann_sum(n, |a| {
            if s.is_zero() {
                return Ok(Padic::one(p, prec.max(1) as u32));
            }
            let la = Padic::from_i64(p, a as i64, prec.max(1)).log()?;
            s.mul(&la).exp()
        })?;
        let theoretical = match os {
            None => EXACT,
            Some(v) => n as i64 + v - c,
        };
        Ok(Approx { error_exponent: theoretical.min(value.abs_prec()), value })
    }

    /// `int (log_p x)^k dmu` at level `n`, for `k <= 4`.
    pub fn moment(&self, k: u32, n: u32) -> Result<Approx> {
        if k > 4 {
            return Err(Error::InvalidArgument("moments are supported up to k = 4".into()));
        }
        let p = self.p;
        let c = self.check_bound();
        let prec = self.level_precision(n).clamp(1, 60);
        let value = self.riemann_sum(n, |a| {
            if k == 0 {
                return Ok(Padic::one(p, prec as u32));
            }
            Padic::from_i64(p, a as i64, prec + k as i64).log()?.pow(k as i64)
        })?;
        let theoretical = if k == 0 { EXACT } else { n as i64 + k as i64 - 1 - c };
        Ok(Approx { error_exponent: theoretical.min(value.abs_prec()), value })
    }

    /// The least `k <= r_max` whose moment is nonzero modulo its error exponent.
    pub fn vanishing_order(&self, r_max: u32, n: u32) -> Result<VanishingReport> {
        let mut moments = Vec::new();
        let mut order = None;
        for k in 0..=r_max {
            let m = self.moment(k, n)?;
            let nonzero = !m.value.with_abs_prec(m.error_exponent).is_zero();
            moments.push(m);
            if nonzero {
                order = Some(k);
                break;
            }
        }
        Ok(VanishingReport { order, moments })
    }

    fn check_bound(&self) -> i64 {
        let min_ord = self
            .levels
            .iter()
            .flat_map(|l| l.values())
            .filter_map(|v| v.valuation())
            .min()
            .unwrap_or(0);
        (-min_ord).max(0)
    }

    /// Text form: header `p N c`, then one line `n a num/den` per ball.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {} {}", self.p, self.n_max, self.check_bound());
        for (i, level) in self.levels.iter().enumerate() {
            for (a, v) in level {
                let _ = writeln!(s, "{} {} {}", i + 1, a, v.to_rational());
            }
        }
        s
    }

    /// Parses [`to_text`](Self::to_text) output, reading values modulo `p^abs_prec`.
    pub fn from_text(text: &str, abs_prec: i64) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty measure file".into()))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        let parse_u = |s: &str| s.parse::<u64>().map_err(|_| Error::Parse(format!("bad integer {s:?}")));
        if h.len() != 3 {
            return Err(Error::Parse(format!("header must be `p N c`, got {header:?}")));
        }
        let p = parse_u(h[0])?;
        let n_max = parse_u(h[1])? as u32;
        if n_max == 0 {
            return Err(Error::Parse("N must be positive".into()));
        }
        let mut m = BallMeasure { p, n_max, levels: vec![BTreeMap::new(); n_max as usize] };
        for line in lines {
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 3 {
                return Err(Error::Parse(format!("expected `n a num/den`, got {line:?}")));
            }
            let n = parse_u(f[0])? as u32;
            let a = parse_u(f[1])?;
            if n == 0 || n > n_max {
                return Err(Error::Parse(format!("level {n} outside 1..={n_max}")));
            }
            let x = parse_rational(f[2]).ok_or_else(|| Error::Parse(format!("bad rational {:?}", f[2])))?;
            m.set(n, a, Padic::from_rational(p, &x, abs_prec));
        }
        Ok(m)
    }

    pub fn load(path: &Path, abs_prec: i64) -> Result<Self> {
        Self::from_text(&std::fs::read_to_string(path)?, abs_prec)
    }
}

/// `<x>^s` for a unit rational `x`.
pub fn angle_pow(x: &Q, s: &Padic) -> Result<Padic> {
    let p = s.prime();
    let prec = s.abs_prec().clamp(1, 60) + 1;
    if s.is_zero() {
        return Ok(Padic::one(p, prec as u32));
    }
    s.mul(&Padic::from_rational(p, x, prec).log()?).exp()
}

impl Approx {
    pub fn exact(value: Padic) -> Self {
        Approx { error_exponent: value.abs_prec(), value }
    }

    /// Agreement modulo the smaller error exponent of the two.
    pub fn agrees(&self, o: &Approx) -> bool {
        let e = self.error_exponent.min(o.error_exponent);
        self.value.sub(&o.value).with_abs_prec(e).is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn dirac_checks() {
        let m = BallMeasure::dirac(5, 3, 1, 30).unwrap();
        let rep = m.check().unwrap();
        assert_eq!(rep.bound, 0);
        assert_eq!(m.total_mass().to_rational(), Q::one());
        assert!(BallMeasure::dirac(5, 3, 10, 30).is_err());
    }

    #[test]
    fn perturbation_is_pinpointed() {
        let mut m = BallMeasure::dirac(3, 3, 2, 30).unwrap();
        m.set(2, 4, Padic::from_i64(3, 7, 30));
        assert!(matches!(m.check(), Err(Error::DistributionViolation { level: 1, residue: 1 })));
    }

    #[test]
    fn dipole_moments() {
        let p = 5u64;
        let d = BallMeasure::dirac(p, 4, 6, 30).unwrap().add(&BallMeasure::dirac(p, 4, 1, 30).unwrap().scale(&-Q::one())).unwrap();
        let rep = d.vanishing_order(3, 4).unwrap();
        assert_eq!(rep.order, Some(1));
        let expect = Padic::from_i64(p, 6, 20).log().unwrap();
        assert!(rep.moments[1].agrees(&Approx::exact(expect)));
    }

    #[test]
    fn text_round_trip() {
        let m = BallMeasure::dirac(3, 2, 4, 30).unwrap();
        let back = BallMeasure::from_text(&m.to_text(), 20).unwrap();
        assert!(back.check().is_ok());
        assert_eq!(back.value(2, 4).unwrap().to_rational(), Q::one());
        assert!(BallMeasure::from_text("3 2", 20).is_err());
    }
}
