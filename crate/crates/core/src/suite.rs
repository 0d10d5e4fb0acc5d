//! Runners for the ten acceptance criteria, shared by the `acceptance` test target
//! and the `suite` subcommand.

use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{pow_q, Q};
use crate::characters::{gauss_sum, gauss_sum_numeric, interpolation_target, mellin_closed_form, Quasicharacter};
use crate::cvalue::CValue;
use crate::detcheck::{det_fixedpointfree_expansion, random_zero_row_sum};
use crate::error::Result;
use crate::local_dist::{mellin_mu_alpha, shells_for_tolerance};
use crate::measure::BallMeasure;
use crate::mtt::{self, CurveData};
use crate::padic::Padic;
use crate::steinberg::{act_scalar, ball_functions_agree, coboundary_check, z_ell, Ell, LogEll, OrdEll};
use crate::tree::Vertex;
use crate::tree_rep::{
    check_delta_image, check_delta_star_injective, delta, delta_star, hecke_t_at, random_edge_function,
    random_vertex_function, rho, tilde_delta_lower, tilde_delta_upper, Sign,
};

pub const DEFAULT_SEED: u64 = 20240611;

#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Smaller tree sizes and trial counts.
    pub quick: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: DEFAULT_SEED, quick: false }
    }
}

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Option<Duration>,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let budget = self.budget.map(|b| format!(" budget={}s", b.as_secs())).unwrap_or_default();
        write!(
            f,
            "criterion {:>2} {:<26} {} elapsed={:.2}s{budget} {}",
            self.id,
            self.name,
            if self.pass { "PASS" } else { "FAIL" },
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

pub const CRITERIA: [(u32, &str); 10] = [
    (1, "tree-identities"),
    (2, "mellin-shell-sum"),
    (3, "interpolation"),
    (4, "gauss-sums"),
    (5, "steinberg-coboundary"),
    (6, "determinant-expansion"),
    (7, "measure-engine"),
    (8, "ordinary-control"),
    (9, "exceptional-zero"),
    (10, "vanishing-order"),
];

fn budget(id: u32) -> Option<Duration> {
    match id {
        1 => Some(Duration::from_secs(30)),
        2 => Some(Duration::from_secs(10)),
        6 => Some(Duration::from_secs(5)),
        8 => Some(Duration::from_secs(60)),
        9 => Some(Duration::from_secs(120)),
        _ => None,
    }
}

/// Runs one criterion; an internal error counts as a failure.
pub fn run_criterion(id: u32, cfg: &SuiteConfig) -> CriterionResult {
    let name = CRITERIA.iter().find(|(i, _)| *i == id).map_or("unknown", |(_, n)| n);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(id as u64));
    let start = Instant::now();
    let outcome = match id {
        1 => tree_identities(cfg, &mut rng),
        2 => mellin_shell_sum(&mut rng),
        3 => interpolation(),
        4 => gauss_sums(),
        5 => steinberg_coboundary(&mut rng),
        6 => determinant_expansion(&mut rng),
        7 => measure_engine(&mut rng),
        8 => ordinary_control(),
        9 => exceptional_zero(),
        10 => vanishing_order(),
        _ => Ok((false, format!("no criterion {id}"))),
    };
    let elapsed = start.elapsed();
    let budget = budget(id);
    let (ok, mut detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    let in_time = budget.is_none_or(|b| elapsed <= b);
    if !in_time {
        detail.push_str(" over-budget");
    }
    CriterionResult { id, name, pass: ok && in_time, detail, elapsed, budget }
}

pub fn run_all(cfg: &SuiteConfig) -> Vec<CriterionResult> {
    CRITERIA.iter().map(|(id, _)| run_criterion(*id, cfg)).collect()
}

type Outcome = Result<(bool, String)>;
type Weight<'a> = dyn Fn(&Vertex) -> Q + 'a;

fn tree_identities(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Outcome {
    let (primes, radius, trials): (&[u64], u64, usize) = if cfg.quick { (&[2, 3], 2, 100) } else { (&[2, 3, 5], 3, 180) };
    let mut instances = 0usize;
    let mut failures = Vec::new();
    for &p in primes {
        for r in 1..=radius {
            for sign in [Sign::Plus, Sign::Minus] {
                instances += 2;
                if !check_delta_image(p, r, sign) || !check_delta_star_injective(p, r, sign) {
                    failures.push(format!("rank p={p} r={r} {sign}"));
                }
            }
        }
        let q1 = Q::from_integer((p + 1).into());
        for i in 0..trials / primes.len() {
            let r = 1 + (i as u64 % radius);
            let phi = random_vertex_function(p, r, 1 + i % 6, rng);
            // (q + 1) phi ∓ T phi.
            for sign in [Sign::Plus, Sign::Minus] {
                let lhs = delta(&delta_star(&phi, sign));
                let rhs = phi.scale(&q1).sub(&phi.hecke_t().scale(&sign.value()));
                instances += 1;
                if lhs != rhs {
                    failures.push(format!("delta delta* p={p} {sign}"));
                }
                let c = random_edge_function(p, r, sign, 1 + i % 5, rng);
                instances += 1;
                if delta(&c).pair(&phi) != c.pair(&delta_star(&phi, sign)) {
                    failures.push(format!("adjoint p={p} {sign}"));
                }
            }
            for alpha in [Q::one(), -Q::one(), Q::from_integer(2.into())] {
                let ra = |v: &Vertex| rho(&alpha, v);
                let one = |_: &Vertex| Q::one();
                let pairs: [(&Weight, &Weight); 3] = [(&ra, &ra), (&one, &ra), (&ra, &one)];
                for (r1, r2) in pairs {
                    let lhs = tilde_delta_lower(r1, &tilde_delta_upper(r2, &phi))?;
                    let prod = |v: &Vertex| r1(v) * r2(v);
                    let rhs = phi.weighted(&|v| hecke_t_at(&prod, v)).sub(&phi.weighted(r1).hecke_t().weighted(r2));
                    instances += 1;
                    if lhs != rhs {
                        failures.push(format!("composite p={p} alpha={alpha}"));
                    }
                }
            }
        }
    }
    let ok = failures.is_empty() && (cfg.quick || instances >= 500);
    failures.truncate(3);
    Ok((ok, format!("instances={instances} failures={failures:?}")))
}

fn random_t(p: u64, rng: &mut ChaCha8Rng) -> CValue {
    let q = p as i64;
    let num = rng.gen_range(1..=9 * q);
    let modulus = Q::new(num.into(), 10.into());
    let m = [1u64, 2, 3, 4, 6][rng.gen_range(0..5)];
    CValue::zeta_pow(m, rng.gen_range(0..m as i64)).scale(&modulus)
}

fn random_character(p: u64, rng: &mut ChaCha8Rng) -> Result<Quasicharacter> {
    let f = rng.gen_range(0..=2u32);
    let t = random_t(p, rng);
    if f == 0 {
        return Quasicharacter::unramified(p, t);
    }
    let chars = Quasicharacter::all_primitive(p, f, t)?;
    Ok(chars[rng.gen_range(0..chars.len())].clone())
}

fn mellin_shell_sum(rng: &mut ChaCha8Rng) -> Outcome {
    let tol = 1e-8;
    let mut worst = 0.0f64;
    let mut dishonest = 0;
    let mut count = 0;
    for p in [3u64, 5, 7] {
        for _ in 0..50 {
            let chi = random_character(p, rng)?;
            let n_max = shells_for_tolerance(&chi, &CValue::one(), tol / 10.0);
            let s = mellin_mu_alpha(&chi, &CValue::one(), n_max)?;
            let closed = mellin_closed_form(&chi)?;
            let err = s.partial.sub(&closed).abs();
            worst = worst.max(err);
            if err > s.tail_bound + 1e-12 {
                dishonest += 1;
            }
            count += 1;
        }
    }
    Ok((worst <= tol && dishonest == 0, format!("characters={count} max_error={worst:.2e} tail_bound_violations={dishonest}")))
}

fn interpolation() -> Outcome {
    let tol = 1e-8;
    let mut worst = 0.0f64;
    let mut count = 0;
    let mut exact_zero = true;
    for p in [3u64, 5, 7] {
        let sqrt_q = CValue::float((p as f64).sqrt(), 0.0);
        let mut chars = vec![Quasicharacter::trivial(p)];
        chars.extend(Quasicharacter::all_primitive(p, 1, CValue::one())?);
        for alpha in [CValue::one(), CValue::from_i64(-1), sqrt_q] {
            for chi in &chars {
                let n_max = shells_for_tolerance(&chi.twist_unramified(&alpha), &CValue::one(), tol / 10.0);
                let s = mellin_mu_alpha(chi, &alpha, n_max)?;
                let target = interpolation_target(&alpha, chi)?;
                worst = worst.max(s.partial.sub(&target).abs());
                count += 1;
                if alpha.as_rational().is_some_and(|a| a.is_one()) && chi.conductor_exp() == 0 {
                    exact_zero &= s.completed.as_ref().is_some_and(CValue::is_exactly_zero);
                }
            }
        }
    }
    Ok((worst <= tol && exact_zero, format!("cases={count} max_error={worst:.2e} trivial_alpha_one_exact_zero={exact_zero}")))
}

fn gauss_sums() -> Outcome {
    let mut count = 0;
    let mut exact_ok = true;
    let mut worst = 0.0f64;
    for p in [3u64, 5, 7, 11] {
        for chi in Quasicharacter::all_primitive(p, 1, CValue::one())? {
            let prod = gauss_sum(&chi)?.mul(&gauss_sum(&chi.inverse()?)?);
            let expect = CValue::Exact(chi.value_at_minus_one()).scale(&Q::from_integer(p.into()));
            exact_ok &= prod.equals(&expect) && prod.is_exact();
            let t = gauss_sum_numeric(&chi)?;
            worst = worst.max((t.norm_sqr() - p as f64).abs());
            count += 1;
        }
    }
    Ok((exact_ok && worst <= 1e-9, format!("characters={count} exact_identity={exact_ok} max_abs_sq_error={worst:.2e}")))
}

fn random_nonzero(p: u64, max_ord: i64, rng: &mut ChaCha8Rng) -> Q {
    let mut num = rng.gen_range(1..=60i64);
    while num % p as i64 == 0 {
        num += 1;
    }
    let mut den = rng.gen_range(1..=40i64);
    while den % p as i64 == 0 {
        den += 1;
    }
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    Q::new((sign * num).into(), den.into()) * pow_q(p, rng.gen_range(-max_ord..=max_ord))
}

fn steinberg_coboundary(rng: &mut ChaCha8Rng) -> Outcome {
    let mut cob = 0;
    let mut cob_fail = 0;
    let mut cocycle = 0;
    let mut cocycle_fail = 0;
    for i in 0..200 {
        let p = [2u64, 3, 5][i % 3];
        let a = random_nonzero(p, 3, rng);
        let x = random_nonzero(p, 3, rng);
        let ord = OrdEll { p };
        let (l, r) = coboundary_check(&a, &x, &ord)?;
        cob_fail += usize::from(l != r);
        let log = LogEll { p, prec: 12 };
        let (l, r) = coboundary_check(&a, &x, &log)?;
        cob_fail += usize::from(!log.same(&l, &r));
        cob += 2;
    }
    for i in 0..100 {
        let p = [2u64, 3, 5][i % 3];
        let a = random_nonzero(p, 2, rng);
        let b = random_nonzero(p, 2, rng);
        cocycle_fail += usize::from(!cocycle_holds(&a, &b, &OrdEll { p })?);
        let prec = if p == 2 { 4 } else { 3 };
        cocycle_fail += usize::from(!cocycle_holds(&a, &b, &LogEll { p, prec })?);
        cocycle += 2;
    }
    Ok((
        cob_fail == 0 && cocycle_fail == 0,
        format!("coboundary={cob} failures={cob_fail} cocycle={cocycle} failures={cocycle_fail}"),
    ))
}

/// `z(ab) = z(a) + a . z(b)`.
pub fn cocycle_holds<L: Ell>(a: &Q, b: &Q, ell: &L) -> Result<bool> {
    let lhs = z_ell(&(a * b), ell)?;
    let rhs = z_ell(a, ell)?.add(&act_scalar(a, &z_ell(b, ell)?));
    Ok(ball_functions_agree(&lhs, &rhs, ell))
}

fn determinant_expansion(rng: &mut ChaCha8Rng) -> Outcome {
    let mut fails = 0;
    let mut maps = 0usize;
    for _ in 0..1000 {
        let k = rng.gen_range(1..=4usize);
        let m = rng.gen_range(k.max(2)..=5usize);
        let mut a = random_zero_row_sum(k, m, rng);
        let e = det_fixedpointfree_expansion(&a)?;
        maps += e.admissible_maps;
        fails += usize::from(!e.holds());
        // Shuffling the columns past k keeps both sides equal.
        let mut perm: Vec<usize> = (k..m).collect();
        perm.shuffle(rng);
        for row in a.iter_mut() {
            let tail: Vec<i64> = perm.iter().map(|&j| row[j]).collect();
            row[k..].copy_from_slice(&tail);
        }
        fails += usize::from(!det_fixedpointfree_expansion(&a)?.holds());
    }
    Ok((fails == 0, format!("matrices=1000 admissible_maps={maps} failures={fails}")))
}

/// A random combination of point masses with `p`-power denominators.
fn synthetic_measure(p: u64, n_max: u32, rng: &mut ChaCha8Rng) -> Result<BallMeasure> {
    let prec = 30;
    let top = p.pow(n_max) as i64;
    let mut m = BallMeasure::from_top_level(p, n_max, |_| Padic::zero(p, prec));
    for _ in 0..rng.gen_range(1..=5) {
        let mut x = rng.gen_range(1..top);
        if x % p as i64 == 0 {
            x += 1;
        }
        let w = Q::new(rng.gen_range(-20i64..=20).into(), BigInt::from(p.pow(rng.gen_range(0..=1u32))));
        m = m.add(&BallMeasure::dirac(p, n_max, x, prec)?.scale(&w))?;
    }
    Ok(m)
}

fn measure_engine(rng: &mut ChaCha8Rng) -> Outcome {
    let mut consistent = 0;
    let mut checked = 0;
    let mut failures = Vec::new();
    for i in 0..20 {
        let p = [3u64, 5, 7][i % 3];
        let m = synthetic_measure(p, 4, rng)?;
        let rep = m.check()?;
        checked += rep.balls_checked;
        let s = Padic::from_i64(p, p as i64 * rng.gen_range(1..=20), 30);
        let lo = m.gamma_transform(&s, 3)?;
        let hi = m.gamma_transform(&s, 4)?;
        if lo.agrees(&hi) && lo.error_exponent >= 1 {
            consistent += 1;
        } else {
            failures.push(format!("p={p} e={}", lo.error_exponent));
        }
    }
    // The curve measures must also satisfy the distribution relation at every level.
    let data = CurveData::new(mtt::bundled_curve("11a1")?)?;
    let (alpha, _) = mtt::alpha_at(&data.curve, 3, 12)?;
    let mut bounds = Vec::new();
    for level in 1..=3 {
        bounds.push(mtt::mtt_measure(&data, 3, &alpha, level)?.check()?.bound);
    }
    let level_independent = bounds.windows(2).all(|w| w[0] == w[1]);
    Ok((
        consistent == 20 && level_independent,
        format!("synthetic=20 consistent={consistent} balls_checked={checked} curve_bounds={bounds:?} failures={failures:?}"),
    ))
}

fn ordinary_control() -> Outcome {
    let data = CurveData::new(mtt::bundled_curve("11a1")?)?;
    let r = mtt::interpolation_report(&data, 3, 4, 4)?;
    Ok((r.pass, format!("mass/lambda(0)={} euler={} mod 3^4", r.mass_ratio.with_abs_prec(4), r.euler_factor.with_abs_prec(4))))
}

fn exceptional_zero() -> Outcome {
    let data = CurveData::new(mtt::bundled_curve("11a1")?)?;
    let r = mtt::exceptional_zero_report(&data, 11, 4, 3)?;
    Ok((
        r.value_vanishes && r.derivative_matches,
        format!(
            "c={} L_p(0)_vanishes={} moment1/lambda(0)={} L-invariant={} mod 11^3",
            r.bound,
            r.value_vanishes,
            r.derivative.value.with_abs_prec(r.digits + 1),
            r.l_invariant.value.with_abs_prec(r.digits + 1)
        ),
    ))
}

fn vanishing_order() -> Outcome {
    let mut curve_orders = Vec::new();
    let mut ok = true;
    for (label, p) in [("11a1", 11u64), ("14a1", 7), ("15a1", 5)] {
        let data = CurveData::new(mtt::bundled_curve(label)?)?;
        let mu = mtt::mtt_measure(&data, p, &Padic::one(p, 20), 3)?;
        let order = mu.vanishing_order(2, 3)?.order;
        ok &= order != Some(0);
        curve_orders.push(format!("{label}@{p}:{order:?}"));
    }
    let mut dipoles = Vec::new();
    for p in [3u64, 5, 7] {
        let d = BallMeasure::dirac(p, 4, 1 + p as i64, 30)?.add(&BallMeasure::dirac(p, 4, 1, 30)?.scale(&-Q::one()))?;
        let rep = d.vanishing_order(3, 4)?;
        let expect = Padic::from_i64(p, 1 + p as i64, 30).log()?;
        let m1 = &rep.moments[1];
        let exact = m1.value.congruent(&expect, m1.error_exponent);
        ok &= rep.order == Some(1) && exact;
        dipoles.push(format!("p={p}:order={:?},moment1_exact={exact}", rep.order));
    }
    Ok((ok, format!("curves=[{}] dipoles=[{}]", curve_orders.join(" "), dipoles.join(" "))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_tree_criterion() {
        let r = run_criterion(1, &SuiteConfig { seed: 1, quick: true });
        assert!(r.pass, "{r}");
    }

    #[test]
    fn cocycle_small_cases() {
        assert!(cocycle_holds(&Q::from_integer(3.into()), &Q::new(1.into(), 3.into()), &OrdEll { p: 3 }).unwrap());
        assert!(cocycle_holds(&Q::from_integer(6.into()), &Q::new(5.into(), 9.into()), &LogEll { p: 3, prec: 3 }).unwrap());
    }
}
