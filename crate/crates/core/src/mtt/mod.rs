//! The p-adic measure of an elliptic curve over Q built from its plus modular symbol,
//! and the reports comparing it with the Euler factor and the Tate-period L-invariant.
//!
//! Every reported quantity is a ratio to `lambda(0)`, which removes the period.

pub mod curve;
pub mod modsym;
pub mod tate;

use std::fmt;

use num_traits::{One, Zero};

use crate::arith::Q;
use crate::error::{Error, Result};
use crate::measure::{Approx, BallMeasure};
use crate::padic::{unit_root, Padic};

pub use curve::{EllipticCurve, Reduction};
pub use modsym::{EigenSymbol, ModularSymbols};
pub use tate::{l_invariant, tate_period, LInvariant};

/// Primes above this are refused.
pub const MAX_PRIME: u64 = 13;
/// Levels above this are refused.
pub const MAX_MEASURE_LEVEL: u32 = 5;

/// The curve with its eigensymbol.
#[derive(Clone, Debug)]
pub struct CurveData {
    pub curve: EllipticCurve,
    pub symbol: EigenSymbol,
}

impl CurveData {
    pub fn new(curve: EllipticCurve) -> Result<Self> {
        let symbol = ModularSymbols::new(curve.conductor)?.eigensymbol(&curve)?;
        Ok(CurveData { curve, symbol })
    }

    pub fn lambda0(&self) -> Q {
        self.symbol.lambda(&Q::zero())
    }
}

/// The root `alpha` used at `p`: the unit root for good ordinary `p`, `a_p = ±1` at `p || N`.
pub fn alpha_at(e: &EllipticCurve, p: u64, prec: u32) -> Result<(Padic, Reduction)> {
    let red = e.reduction_type(p)?;
    match red {
        Reduction::Good => Ok((unit_root(e.ap(p)?, p, prec)?, red)),
        Reduction::Split | Reduction::NonSplit => Ok((Padic::from_i64(p, e.ap(p)?, prec as i64), red)),
        Reduction::Additive => Err(Error::AdditiveReduction(p)),
    }
}

/// `mu(a + p^n Z_p) = alpha^-n lambda(a / p^n) - alpha^-(n+1) lambda(a / p^(n-1))`, the
/// second term dropped when `p | N`, for `1 <= n <= level`.
pub fn mtt_measure(data: &CurveData, p: u64, alpha: &Padic, level: u32) -> Result<BallMeasure> {
    if p > MAX_PRIME || level == 0 || level > MAX_MEASURE_LEVEL {
        return Err(Error::InvalidArgument(format!("need p <= {MAX_PRIME} and 1 <= level <= {MAX_MEASURE_LEVEL}")));
    }
    let bad = data.curve.conductor.is_multiple_of(p);
    let prec = alpha.abs_prec();
    let inv = alpha.inv()?;
    let tables: Vec<Vec<Q>> = (0..=level).map(|n| data.symbol.lambda_table(p.pow(n))).collect();
    let inv_pows: Vec<Padic> = (0..=level as i64 + 1).map(|k| inv.pow(k)).collect::<Result<_>>()?;
    let m = BallMeasure::from_fn(p, level, |n, a| {
        let n = n as usize;
        let first = inv_pows[n].scale(&tables[n][a as usize]);
        if bad {
            return first.with_abs_prec(prec);
        }
        let coarse = &tables[n - 1][(a % p.pow(n as u32 - 1)) as usize];
        first.sub(&inv_pows[n + 1].scale(coarse)).with_abs_prec(prec)
    });
    m.check()?;
    Ok(m)
}

/// Total mass against the Euler factor `(1 - 1/alpha)^2` (good) or `1 - 1/alpha` (`p || N`).
#[derive(Clone, Debug)]
pub struct InterpolationReport {
    pub label: String,
    pub p: u64,
    pub level: u32,
    pub alpha: Padic,
    pub lambda0: Q,
    pub bound: i64,
    pub mass_ratio: Padic,
    pub euler_factor: Padic,
    pub digits: i64,
    pub pass: bool,
}

pub fn interpolation_report(data: &CurveData, p: u64, level: u32, digits: i64) -> Result<InterpolationReport> {
    let lambda0 = data.lambda0();
    if lambda0.is_zero() {
        return Err(Error::InvalidArgument(format!("lambda(0) = 0 for {}", data.curve.label)));
    }
    let prec = (digits + 10) as u32;
    let (alpha, red) = alpha_at(&data.curve, p, prec)?;
    let mu = mtt_measure(data, p, &alpha, level)?;
    let bound = mu.check()?.bound;
    let mass_ratio = mu.total_mass().scale(&(Q::one() / &lambda0));
    let one = Padic::one(p, prec);
    let e1 = one.sub(&alpha.inv()?);
    let euler_factor = if red == Reduction::Good { e1.mul(&e1) } else { e1 };
    let pass = mass_ratio.congruent(&euler_factor, digits);
    Ok(InterpolationReport {
        label: data.curve.label.clone(),
        p,
        level,
        alpha,
        lambda0,
        bound,
        mass_ratio,
        euler_factor,
        digits,
        pass,
    })
}

impl fmt::Display for InterpolationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "curve {} at p = {}, level {}", self.label, self.p, self.level)?;
        writeln!(f, "  alpha            = {}", self.alpha)?;
        writeln!(f, "  lambda(0)        = {}", self.lambda0)?;
        writeln!(f, "  bound c          = {}", self.bound)?;
        writeln!(f, "  mass / lambda(0) = {}", self.mass_ratio)?;
        writeln!(f, "  Euler factor     = {}", self.euler_factor)?;
        write!(f, "  congruent mod {}^{}: {}", self.p, self.digits, self.pass)
    }
}

/// Exceptional-zero data at a split multiplicative prime.
#[derive(Clone, Debug)]
pub struct ExceptionalZeroReport {
    pub label: String,
    pub p: u64,
    pub level: u32,
    pub lambda0: Q,
    pub bound: i64,
    /// `L_p(0) / lambda(0)` with its error exponent.
    pub value_at_zero: Approx,
    pub value_vanishes: bool,
    /// `int log_p dmu / lambda(0)` with its error exponent.
    pub derivative: Approx,
    pub l_invariant: LInvariant,
    /// Digits of agreement requested between the derivative and the L-invariant.
    pub digits: i64,
    pub derivative_matches: bool,
    pub vanishing_order: Option<u32>,
}

impl ExceptionalZeroReport {
    pub fn pass(&self) -> bool {
        self.value_vanishes && self.derivative_matches && self.vanishing_order.is_none_or(|k| k >= 1)
    }
}

pub fn exceptional_zero_report(data: &CurveData, p: u64, level: u32, digits: i64) -> Result<ExceptionalZeroReport> {
    let e = &data.curve;
    match e.reduction_type(p)? {
        Reduction::Split => {}
        Reduction::NonSplit => return Err(Error::NonSplit(p)),
        Reduction::Good => return Err(Error::GoodReduction(p)),
        Reduction::Additive => return Err(Error::AdditiveReduction(p)),
    }
    let lambda0 = data.lambda0();
    if lambda0.is_zero() {
        return Err(Error::InvalidArgument(format!("lambda(0) = 0 for {}; the comparison is vacuous", e.label)));
    }
    let prec = digits + level as i64 + 10;
    let alpha = Padic::one(p, prec as u32);
    let mu = mtt_measure(data, p, &alpha, level)?;
    let bound = mu.check()?.bound;
    let inv0 = Q::one() / &lambda0;
    let ratio = |a: Approx| {
        let shift = crate::arith::ord_q(&lambda0, p).unwrap_or(0);
        Approx { value: a.value.scale(&inv0), error_exponent: a.error_exponent - shift }
    };
    let value_at_zero = ratio(mu.gamma_transform(&Padic::zero(p, prec), level)?);
    let value_at_zero = Approx { error_exponent: value_at_zero.error_exponent.min(level as i64 - bound), ..value_at_zero };
    let value_vanishes = value_at_zero.value.with_abs_prec(level as i64 - bound).is_zero();
    let derivative = ratio(mu.moment(1, level)?);
    let l_invariant = l_invariant(e, p, prec)?;
    let derivative_matches =
        derivative.error_exponent >= digits && derivative.value.congruent(&l_invariant.value, digits);
    let vanishing_order = mu.vanishing_order(2, level)?.order;
    Ok(ExceptionalZeroReport {
        label: e.label.clone(),
        p,
        level,
        lambda0,
        bound,
        value_at_zero,
        value_vanishes,
        derivative,
        l_invariant,
        digits,
        derivative_matches,
        vanishing_order,
    })
}

impl fmt::Display for ExceptionalZeroReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "curve {} at p = {} (split multiplicative), level {}", self.label, self.p, self.level)?;
        writeln!(f, "  lambda(0)               = {}", self.lambda0)?;
        writeln!(f, "  bound c                 = {}", self.bound)?;
        writeln!(
            f,
            "  L_p(0) / lambda(0)      = {}  (mod {}^{}: vanishes = {})",
            self.value_at_zero.value,
            self.p,
            self.level as i64 - self.bound,
            self.value_vanishes
        )?;
        writeln!(f, "  moment_1 / lambda(0)    = {}  (error exponent {})", self.derivative.value, self.derivative.error_exponent)?;
        writeln!(f, "  Tate period q           = {}", self.l_invariant.q)?;
        writeln!(f, "  log_p(q) / ord_p(q)     = {}", self.l_invariant.value)?;
        writeln!(f, "  vanishing order         = {:?}", self.vanishing_order)?;
        write!(f, "  derivative = L-invariant mod {}^{}: {}", self.p, self.digits, self.derivative_matches)
    }
}

/// The curves shipped with the crate, as `label N a1 a2 a3 a4 a6` lines.
pub const BUNDLED_CURVES: &[(&str, &str)] = &[
    ("11a1", include_str!("../../data/11a1.txt")),
    ("14a1", include_str!("../../data/14a1.txt")),
    ("15a1", include_str!("../../data/15a1.txt")),
    ("17a1", include_str!("../../data/17a1.txt")),
    ("19a1", include_str!("../../data/19a1.txt")),
    ("37a1", include_str!("../../data/37a1.txt")),
];

pub fn bundled_curve(label: &str) -> Result<EllipticCurve> {
    let (_, text) = BUNDLED_CURVES
        .iter()
        .find(|(l, _)| *l == label)
        .ok_or_else(|| Error::InvalidArgument(format!("no bundled curve {label}")))?;
    EllipticCurve::parse(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn control_at_three() {
        let data = CurveData::new(bundled_curve("11a1").unwrap()).unwrap();
        let r = interpolation_report(&data, 3, 3, 3).unwrap();
        assert!(r.pass, "{r}");
    }

    #[test]
    fn exceptional_zero_at_eleven() {
        let data = CurveData::new(bundled_curve("11a1").unwrap()).unwrap();
        let r = exceptional_zero_report(&data, 11, 3, 2).unwrap();
        assert!(r.pass(), "{r}");
    }
}
