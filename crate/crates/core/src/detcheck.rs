//! For a `k x m` integer matrix with zero row sums,
//! `det(a_ij)_{i,j <= k} = (-1)^k sum_f prod_i a_{i f(i)}`, the sum running over maps
//! `f: {1..k} -> {1..m}` with `f(S) ⊄ S` for every nonempty `S ⊆ {1..k}`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;

use crate::arith::Q;
use crate::error::{Error, Result};
use crate::linalg;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expansion {
    pub det: BigInt,
    pub sum: BigInt,
    pub admissible_maps: usize,
}

impl Expansion {
    pub fn holds(&self) -> bool {
        self.det == self.sum
    }
}

/// Whether `f` (0-based, values in `0..m`) has a cycle inside `0..k`, i.e. a nonempty
/// `S ⊆ {0..k}` with `f(S) ⊆ S`. Only the entries of `f` already assigned are followed.
fn has_cycle(f: &[usize], k: usize) -> bool {
    // 0 = unseen, 1 = on the current path, 2 = finished.
    let mut state = vec![0u8; k];
    for start in 0..f.len() {
        let mut path = Vec::new();
        let mut i = start;
        while i < f.len() && state[i] == 0 {
            state[i] = 1;
            path.push(i);
            i = f[i];
            if i >= k {
                break;
            }
        }
        if i < f.len() && i < k && state[i] == 1 {
            return true;
        }
        for j in path {
            state[j] = 2;
        }
    }
    false
}

/// Whether `f: {0..k} -> {0..m}` is admissible. Entries past `k` are ignored.
pub fn is_admissible(f: &[usize], k: usize) -> bool {
    !has_cycle(&f[..f.len().min(k)], k)
}

/// Both sides of the expansion. Maps are enumerated depth-first, abandoning a partial
/// assignment as soon as it closes a cycle.
pub fn det_fixedpointfree_expansion(a: &[Vec<i64>]) -> Result<Expansion> {
    let k = a.len();
    if k == 0 {
        return Err(Error::InvalidArgument("need at least one row".into()));
    }
    let m = a[0].len();
    if m < k || a.iter().any(|r| r.len() != m) {
        return Err(Error::InvalidArgument(format!("need a k x m matrix with k <= m, got {k} rows")));
    }
    if let Some(i) = a.iter().position(|r| r.iter().sum::<i64>() != 0) {
        return Err(Error::InvalidArgument(format!("row {} does not sum to zero", i + 1)));
    }
    let block: linalg::Matrix =
        a.iter().map(|r| r[..k].iter().map(|&x| Q::from_integer(x.into())).collect()).collect();
    let det = linalg::det(&block);
    debug_assert!(det.is_integer());
    let det = det.to_integer();

    let mut sum = BigInt::zero();
    let mut count = 0usize;
    let mut f = Vec::with_capacity(k);
    enumerate(a, k, m, &mut f, &BigInt::one(), &mut sum, &mut count);
    if k % 2 == 1 {
        sum = -sum;
    }
    Ok(Expansion { det, sum, admissible_maps: count })
}

fn enumerate(
    a: &[Vec<i64>],
    k: usize,
    m: usize,
    f: &mut Vec<usize>,
    prod: &BigInt,
    sum: &mut BigInt,
    count: &mut usize,
) {
    let i = f.len();
    if i == k {
        *sum += prod;
        *count += 1;
        return;
    }
    for j in 0..m {
        f.push(j);
        if !has_cycle(f, k) {
            enumerate(a, k, m, f, &(prod * a[i][j]), sum, count);
        }
        f.pop();
    }
}

/// A random `k x m` matrix with entries in `[-9, 9]`, the last column set to zero the
/// row sums.
pub fn random_zero_row_sum<R: Rng>(k: usize, m: usize, rng: &mut R) -> Vec<Vec<i64>> {
    (0..k)
        .map(|_| {
            let mut row: Vec<i64> = (0..m - 1).map(|_| rng.gen_range(-9..=9)).collect();
            row.push(-row.iter().sum::<i64>());
            row
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_row() {
        let e = det_fixedpointfree_expansion(&[vec![7, -7]]).unwrap();
        assert_eq!(e.det, BigInt::from(7));
        assert!(e.holds());
        assert_eq!(e.admissible_maps, 1);
    }

    #[test]
    fn square_has_no_admissible_map() {
        let e = det_fixedpointfree_expansion(&[vec![1, -1], vec![-1, 1]]).unwrap();
        assert_eq!(e.admissible_maps, 0);
        assert!(e.det.is_zero() && e.holds());
    }

    #[test]
    fn two_by_three() {
        let a = [vec![2, 5, -7], vec![-3, 4, -1]];
        let e = det_fixedpointfree_expansion(&a).unwrap();
        // f(1) in {2, 3}, f(2) in {1, 3}, minus the 2-cycle (2, 1).
        assert_eq!(e.admissible_maps, 3);
        assert_eq!(e.det, BigInt::from(23));
        assert!(e.holds());
    }

    #[test]
    fn cycle_detection() {
        assert!(has_cycle(&[0], 1));
        assert!(has_cycle(&[1, 2, 0], 3));
        assert!(!has_cycle(&[1, 2, 3], 3));
        assert!(has_cycle(&[3, 2, 1, 0], 4));
    }

    #[test]
    fn row_sum_violation() {
        assert!(det_fixedpointfree_expansion(&[vec![1, 1]]).is_err());
    }
}
