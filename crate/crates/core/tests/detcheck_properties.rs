use exzero_core::detcheck::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn expansion_matches_the_determinant(k in 1usize..=4, extra in 0usize..=2, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_zero_row_sum(k, k + extra, &mut rng);
        let e = det_fixedpointfree_expansion(&a).unwrap();
        prop_assert!(e.holds(), "det {} vs sum {}", e.det, e.sum);
    }

    #[test]
    fn random_rows_sum_to_zero(k in 1usize..=5, m in 5usize..=8, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for row in random_zero_row_sum(k, m, &mut rng) {
            prop_assert_eq!(row.len(), m);
            prop_assert_eq!(row.iter().sum::<i64>(), 0);
        }
    }
}

#[test]
fn admissible_maps_for_one_row() {
    // f(0) ranges over the m - 1 targets other than 0.
    let a = vec![vec![3, -1, -2]];
    let e = det_fixedpointfree_expansion(&a).unwrap();
    assert_eq!(e.admissible_maps, 2);
    assert!(e.holds());
}

#[test]
fn cycles_are_inadmissible() {
    assert!(!is_admissible(&[1, 0, 3], 2));
    assert!(is_admissible(&[1, 2, 3], 2));
    assert!(!is_admissible(&[0, 2], 1));
}

#[test]
fn bad_input_is_rejected() {
    assert!(det_fixedpointfree_expansion(&[]).is_err());
    assert!(det_fixedpointfree_expansion(&[vec![1, -1], vec![1, -1], vec![1, -1]]).is_err());
    assert!(det_fixedpointfree_expansion(&[vec![1, 1]]).is_err());
}
