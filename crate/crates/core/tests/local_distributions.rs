use exzero_core::arith::{pow_q, Q};
use exzero_core::characters::*;
use exzero_core::compact_open::{Ball, BallFunction};
use exzero_core::cvalue::CValue;
use exzero_core::local_dist::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

fn qf(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

fn random_character(p: u64, f: u32, t: CValue, rng: &mut ChaCha8Rng) -> Quasicharacter {
    let chars = Quasicharacter::all_primitive(p, f, t).unwrap();
    chars[rng.gen_range(0..chars.len())].clone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn mu_alpha_is_finitely_additive(
        p in prop::sample::select(vec![2u64, 3, 5]),
        u in 1i64..30,
        k in -2i64..=2,
        alpha in prop::sample::select(vec![(1i64, 1i64), (-1, 1), (2, 1), (1, 3)]),
    ) {
        prop_assume!(u % p as i64 != 0);
        let al = CValue::from_q(qf(alpha.0, alpha.1));
        let b = Ball::new(p, &(q(u) * pow_q(p, k)), k + 1);
        let whole = mu_alpha_ball(&al, &b).unwrap();
        let parts = b.children().iter().fold(CValue::zero(), |acc, c| acc.add(&mu_alpha_ball(&al, c).unwrap()));
        prop_assert!(whole.equals(&parts));
    }

    #[test]
    fn additive_character_translation(p in prop::sample::select(vec![2u64, 3, 5]), seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut terms = Vec::new();
        for _ in 0..3 {
            let c = qf(rng.gen_range(-30..30), p.pow(rng.gen_range(0..3)) as i64);
            terms.push((Ball::new(p, &c, rng.gen_range(-2..=2)), q(rng.gen_range(-3..=3))));
        }
        let f = BallFunction::from_terms(p, terms);
        let x = qf(rng.gen_range(-40..40), p.pow(rng.gen_range(0..4)) as i64);
        let one = CValue::one();
        let moved = integrate_mu_alpha(&f.translate(&q(1), &x), &one).unwrap();
        let expect = integrate_mu_alpha(&f, &one).unwrap().mul(&CValue::Exact(psi(p, &x)));
        prop_assert!(moved.equals(&expect));
    }

    #[test]
    fn tail_bound_is_honest(
        p in prop::sample::select(vec![3u64, 5, 7]),
        f in 0u32..=2,
        n_max in 0i64..6,
        tnum in 1i64..60,
        seed: u64,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = CValue::from_q(qf(tnum, 10));
        prop_assume!(t.abs() < p as f64 * 0.95);
        let chi = random_character(p, f, t, &mut rng);
        let s = mellin_mu_alpha(&chi, &CValue::one(), n_max).unwrap();
        let closed = mellin_closed_form(&chi).unwrap();
        prop_assert!(s.partial.sub(&closed).abs() <= s.tail_bound + 1e-12);
        prop_assert!(s.completed.unwrap().equals(&closed));
    }

    #[test]
    fn ramified_unit_integrals_need_the_conductor(
        p in prop::sample::select(vec![3u64, 5, 7]),
        f in 1u32..=2,
        k in -4i64..=1,
        u in 1i64..50,
        seed: u64,
    ) {
        prop_assume!(u % p as i64 != 0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let chi = random_character(p, f, CValue::one(), &mut rng);
        let v = unit_integral(&chi, &(q(u) * pow_q(p, k))).unwrap();
        if k != -(f as i64) {
            prop_assert!(v.is_zero());
        } else {
            prop_assert!(!v.is_zero());
        }
    }
}

#[test]
fn unramified_unit_integrals() {
    for p in [2u64, 3, 5, 7] {
        let chi = Quasicharacter::trivial(p);
        let pq = p as i64;
        for u in [1i64, 2, 3].into_iter().filter(|u| u % pq != 0) {
            assert_eq!(unit_integral(&chi, &q(u)).unwrap().as_rational(), Some(q(1)));
            assert_eq!(unit_integral(&chi, &qf(u, pq)).unwrap().as_rational(), Some(qf(-1, pq - 1)));
            assert!(unit_integral(&chi, &qf(u, pq * pq)).unwrap().is_zero());
        }
    }
}

#[test]
fn psi_integrates_to_zero_over_units_below_level_two() {
    for p in [2u64, 3, 5] {
        for m in 2..4 {
            let b = Ball::new(p, &pow_q(p, -m), -m + 1);
            assert!(psi_ball_sum(&b).is_zero());
        }
    }
}

#[test]
fn gauss_sums_at_conductor_square() {
    for p in [3u64, 5] {
        let q2 = q((p * p) as i64);
        for chi in Quasicharacter::all_primitive(p, 2, CValue::one()).unwrap() {
            let prod = gauss_sum(&chi).unwrap().mul(&gauss_sum(&chi.inverse().unwrap()).unwrap());
            assert!(prod.equals(&CValue::Exact(chi.value_at_minus_one()).scale(&q2)));
            let t = gauss_sum_numeric(&chi).unwrap();
            assert!((t.norm_sqr() - (p * p) as f64).abs() < 1e-9);
        }
    }
}

#[test]
fn interpolation_exact_cases() {
    for p in [3u64, 5, 7] {
        let chi = Quasicharacter::trivial(p);
        let s = mellin_mu_alpha(&chi, &CValue::one(), 3).unwrap();
        assert!(s.completed.unwrap().is_exactly_zero());
        for chi in Quasicharacter::all_primitive(p, 1, CValue::one()).unwrap() {
            for alpha in [CValue::one(), CValue::from_i64(-1)] {
                let s = mellin_mu_alpha(&chi, &alpha, 2).unwrap();
                assert!(s.completed.unwrap().equals(&interpolation_target(&alpha, &chi).unwrap()));
            }
        }
    }
}

#[test]
fn whittaker_h_side_matches_direct_integral() {
    let p = 3;
    let f = BallFunction::from_terms(
        p,
        vec![(Ball::new(p, &q(1), 1), q(2)), (Ball::new(p, &qf(2, 3), 0), q(-1)), (Ball::new(p, &q(6), 2), q(5))],
    );
    for alpha in [CValue::one(), CValue::from_i64(-1), CValue::from_i64(2)] {
        let direct = integrate_mu_alpha(&f, &alpha).unwrap();
        assert!(whittaker_h_side(&f, &alpha).unwrap().equals(&direct));
    }
}
