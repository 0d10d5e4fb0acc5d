use exzero_core::arith::{ord_q, pow_q, Q};
use exzero_core::compact_open::{Ball, BallFunction, Mat2};
use exzero_core::tree::Vertex;
use exzero_core::tree_rep::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5])
}

fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

/// A random `a = ± p^k u / v` with small `k`.
fn random_scalar(p: u64, rng: &mut ChaCha8Rng) -> Q {
    let mut u = rng.gen_range(1..20i64);
    while u % p as i64 == 0 {
        u += 1;
    }
    let s = if rng.gen_bool(0.5) { 1 } else { -1 };
    q(s * u) * pow_q(p, rng.gen_range(-2..=2))
}

/// A ball function on `F^*` built from balls avoiding 0.
fn random_ball_function(p: u64, rng: &mut ChaCha8Rng) -> BallFunction<Q> {
    let mut terms = Vec::new();
    for _ in 0..rng.gen_range(1..4) {
        let k = rng.gen_range(-2..=2i64);
        let mut u = rng.gen_range(1..(p * p) as i64);
        if u % p as i64 == 0 {
            u += 1;
        }
        let center = q(u) * pow_q(p, k);
        terms.push((Ball::new(p, &center, k + rng.gen_range(1..=2)), q(rng.gen_range(-4..=4))));
    }
    BallFunction::from_terms(p, terms)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn delta_after_delta_star(p in prime(), r in 1u64..=3, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = random_vertex_function(p, r, 5, &mut rng);
        let q1 = q(p as i64 + 1);
        prop_assert_eq!(delta(&delta_star(&phi, Sign::Plus)), phi.scale(&q1).sub(&phi.hecke_t()));
        prop_assert_eq!(delta(&delta_star(&phi, Sign::Minus)), phi.scale(&q1).add(&phi.hecke_t()));
    }

    #[test]
    fn adjoint_pairing(p in prime(), r in 1u64..=3, seed: u64, plus: bool) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sign = if plus { Sign::Plus } else { Sign::Minus };
        let c = random_edge_function(p, r, sign, 6, &mut rng);
        let phi = random_vertex_function(p, r + 1, 6, &mut rng);
        prop_assert_eq!(delta(&c).pair(&phi), c.pair(&delta_star(&phi, sign)));
    }

    #[test]
    fn weighted_composite(p in prime(), seed: u64, alpha in prop::sample::select(vec![1i64, -1, 2, 3])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = random_vertex_function(p, 2, 4, &mut rng);
        let a = q(alpha);
        let r1 = |v: &Vertex| rho(&a, v);
        let r2 = |v: &Vertex| rho(&(q(1) / &a), v) + q(1);
        let lhs = tilde_delta_lower(&r1, &tilde_delta_upper(&r2, &phi)).unwrap();
        let prod = |v: &Vertex| r1(v) * r2(v);
        let rhs = phi.weighted(&|v| hecke_t_at(&prod, v)).sub(&phi.weighted(&r1).hecke_t().weighted(&r2));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn upper_and_lower_maps_are_adjoint(p in prime(), seed: u64, alpha in prop::sample::select(vec![-1i64, 2, 3])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = q(alpha);
        let rf = |v: &Vertex| rho(&a, v);
        let c = random_edge_function(p, 2, Sign::Plus, 4, &mut rng);
        let phi = random_vertex_function(p, 3, 5, &mut rng);
        prop_assert_eq!(tilde_delta_lower(&rf, &c).unwrap().pair(&phi), c.pair(&tilde_delta_upper(&rf, &phi)));
    }

    #[test]
    fn twist_swaps_the_hecke_eigenvalue_sign(p in prime(), seed: u64, a in -6i64..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = random_vertex_function(p, 3, 5, &mut rng);
        let a = q(a);
        prop_assert_eq!(phi.t_minus(&a).twist(), phi.twist().t_minus(&-a.clone()).neg());
        prop_assert_eq!(phi.twist().twist(), phi);
    }

    #[test]
    fn lower_map_equivariance(p in prime(), seed: u64, alpha in prop::sample::select(vec![1i64, -1, 2])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let al = q(alpha);
        let rf = |v: &Vertex| rho(&al, v);
        let c = random_edge_function(p, 2, Sign::Plus, 4, &mut rng);
        let a = random_scalar(p, &mut rng);
        let b = random_scalar(p, &mut rng);
        let g = Mat2::new(a.clone(), b, q(0), q(1));
        let k = ord_q(&a, p).unwrap() as i32;
        let lhs = tilde_delta_lower(&rf, &c.act(&g).unwrap()).unwrap();
        let rhs = tilde_delta_lower(&rf, &c).unwrap().act(&g).unwrap().scale(&al.pow(-k));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn delta_alpha_is_torus_equivariant(p in prime(), seed: u64, alpha in prop::sample::select(vec![-1i64, 2, 3])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let al = q(alpha);
        let f = random_ball_function(p, &mut rng);
        let t = random_scalar(p, &mut rng);
        let lhs = delta_alpha(&f.translate(&t, &q(0)), &al).unwrap();
        let rhs = delta_alpha(&f, &al).unwrap().act(&Mat2::diag(t, q(1))).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn delta_alpha_image_is_orthogonal_to_rho(p in prime(), seed: u64, alpha in prop::sample::select(vec![-1i64, 2, 3])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let al = q(alpha);
        let img = delta_alpha(&random_ball_function(p, &mut rng), &al).unwrap();
        prop_assert_eq!(img.pair_fn(&|v| rho(&al, v)), q(0));
    }

    #[test]
    fn image_of_t_minus_a_is_recognized(p in prime(), seed: u64, a in -5i64..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = random_vertex_function(p, 2, 3, &mut rng);
        let a = q(a);
        match in_image_t_minus_a(&psi.t_minus(&a), &a, 3).outcome {
            Membership::Member(found) => prop_assert_eq!(found, psi),
            other => prop_assert!(false, "expected a member, got {:?}", other),
        }
    }

    #[test]
    fn solver_inverts_lower_map(p in prime(), seed: u64, alpha in prop::sample::select(vec![1i64, -1, 2])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let al = q(alpha);
        let c = random_edge_function(p, 3, Sign::Plus, 4, &mut rng);
        let phi = tilde_delta_lower(&|v: &Vertex| rho(&al, v), &c).unwrap();
        prop_assert_eq!(solve_tilde_delta(&phi, &al), Some(c));
    }
}

#[test]
fn hecke_against_tau() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for p in [2u64, 3, 5] {
        let phi = random_vertex_function(p, 2, 5, &mut rng);
        let q1 = q(p as i64 + 1);
        for sign in [Sign::Plus, Sign::Minus] {
            let lhs = phi.hecke_t().pair_tau(sign);
            assert_eq!(lhs, sign.value() * &q1 * phi.pair_tau(sign));
        }
    }
}

#[test]
fn rank_certificates() {
    for p in [2u64, 3, 5] {
        for r in 1..=3 {
            for sign in [Sign::Plus, Sign::Minus] {
                assert!(check_delta_image(p, r, sign), "image p={p} r={r} {sign}");
                assert!(check_delta_star_injective(p, r, sign), "injective p={p} r={r} {sign}");
            }
        }
    }
}
