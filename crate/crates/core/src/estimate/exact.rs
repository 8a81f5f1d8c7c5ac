use std::collections::BTreeMap;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::map::faces_from_images;
use crate::perm::{Partition, Permutation, Rational};

pub const DEFAULT_ENUM_LIMIT: usize = 9;

/// Largest `n` accepted by the class-side cross-check.
pub const CLASS_SIDE_LIMIT: usize = 7;

/// Mean cycle count over an exhaustive enumeration, with the histogram of
/// cycle counts it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactResult {
    pub mean: Rational,
    pub histogram: BTreeMap<usize, u64>,
    pub total: u64,
}

impl ExactResult {
    fn from_counts(counts: Vec<u64>) -> Self {
        let total: u64 = counts.iter().sum();
        let weighted: u128 = counts
            .iter()
            .enumerate()
            .map(|(c, &k)| c as u128 * k as u128)
            .sum();
        let histogram = counts
            .into_iter()
            .enumerate()
            .filter(|&(_, k)| k > 0)
            .collect();
        ExactResult {
            mean: Rational::new(BigInt::from(weighted), BigInt::from(total)),
            histogram,
            total,
        }
    }
}

/// Lexicographic successor in place; false after the last arrangement.
pub(crate) fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

fn check_sizes(alpha: &Partition, beta: &Partition) -> Result<usize> {
    if alpha.n() != beta.n() {
        return Err(Error::SizeMismatch {
            alpha: alpha.n(),
            beta: beta.n(),
        });
    }
    Ok(alpha.n())
}

pub fn exact_expected_cycles(alpha: &Partition, beta: &Partition) -> Result<ExactResult> {
    exact_expected_cycles_with_limit(alpha, beta, DEFAULT_ENUM_LIMIT)
}

/// `(1/n!) sum over pi in S_n` of the face count of `m_pi`, i.e. of the
/// cycle count of `sigma0 pi omega0 pi^-1`. Work is split over the first
/// two images of `pi`.
pub fn exact_expected_cycles_with_limit(
    alpha: &Partition,
    beta: &Partition,
    limit: usize,
) -> Result<ExactResult> {
    let n = check_sizes(alpha, beta)?;
    if n > limit {
        return Err(Error::EnumerationLimit { n, limit });
    }
    let sigma = alpha.canonical_permutation();
    let omega = beta.canonical_permutation();
    let (sigma, omega) = (sigma.zero_based(), omega.zero_based());

    let prefixes: Vec<Vec<usize>> = if n == 1 {
        vec![vec![0]]
    } else {
        (0..n)
            .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| vec![a, b]))
            .collect()
    };
    let counts = prefixes
        .par_iter()
        .map(|prefix| {
            let mut counts = vec![0u64; n + 1];
            let mut rest: Vec<usize> = (0..n).filter(|x| !prefix.contains(x)).collect();
            let mut pi = prefix.clone();
            pi.resize(n, 0);
            let mut pi_inv = vec![0; n];
            let (mut scratch, mut seen) = (Vec::with_capacity(n), Vec::with_capacity(n));
            loop {
                pi[prefix.len()..].copy_from_slice(&rest);
                for (i, &p) in pi.iter().enumerate() {
                    pi_inv[p] = i;
                }
                counts[faces_from_images(sigma, omega, &pi, &pi_inv, &mut scratch, &mut seen)] += 1;
                if !next_permutation(&mut rest) {
                    break;
                }
            }
            counts
        })
        .reduce(
            || vec![0u64; n + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(ExactResult::from_counts(counts))
}

/// Mean of `c(sigma omega)` over all `sigma` of type `alpha` and `omega` of
/// type `beta`, by listing both classes. Independent of the map model; only
/// meant as a cross-check for small `n`.
pub fn class_side_expected_cycles(alpha: &Partition, beta: &Partition) -> Result<ExactResult> {
    let n = check_sizes(alpha, beta)?;
    if n > CLASS_SIDE_LIMIT {
        return Err(Error::EnumerationLimit {
            n,
            limit: CLASS_SIDE_LIMIT,
        });
    }
    let mut class_a = Vec::new();
    let mut class_b = Vec::new();
    let mut images: Vec<usize> = (1..=n).collect();
    loop {
        let p = Permutation::from_images(images.clone())?;
        let ty = p.cycle_type();
        if ty == *alpha {
            class_a.push(p.clone());
        }
        if ty == *beta {
            class_b.push(p);
        }
        if !next_permutation(&mut images) {
            break;
        }
    }
    let mut counts = vec![0u64; n + 1];
    for s in &class_a {
        for w in &class_b {
            counts[s.compose(w)?.cycle_count()] += 1;
        }
    }
    Ok(ExactResult::from_counts(counts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::rational;

    fn part(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn next_permutation_walks_all_orders() {
        let mut v = vec![0, 1, 2, 3];
        let mut count = 1;
        while next_permutation(&mut v) {
            count += 1;
        }
        assert_eq!(count, 24);
        assert_eq!(v, vec![3, 2, 1, 0]);
    }

    #[test]
    fn small_exact_means() {
        let r = exact_expected_cycles(&part("2"), &part("2")).unwrap();
        assert_eq!(r.mean, rational(2, 1));
        assert_eq!(r.histogram, BTreeMap::from([(2, 2)]));
        let r = exact_expected_cycles(&part("3"), &part("3")).unwrap();
        assert_eq!(r.mean, rational(2, 1));
        assert_eq!(r.histogram, BTreeMap::from([(1, 3), (3, 3)]));
        let r = exact_expected_cycles(&part("1"), &part("1")).unwrap();
        assert_eq!(r.mean, rational(1, 1));
    }

    #[test]
    fn limit_and_size_errors() {
        assert_eq!(
            exact_expected_cycles_with_limit(&part("5"), &part("5"), 4),
            Err(Error::EnumerationLimit { n: 5, limit: 4 })
        );
        assert!(matches!(
            exact_expected_cycles(&part("3"), &part("2")),
            Err(Error::SizeMismatch { .. })
        ));
    }

    #[test]
    fn class_side_agrees_on_small_cases() {
        for (a, b) in [("2", "2"), ("3", "2,1"), ("2,2", "4"), ("3,2", "5"), ("2,2,1", "3,1,1")] {
            let map_side = exact_expected_cycles(&part(a), &part(b)).unwrap().mean;
            let class_side = class_side_expected_cycles(&part(a), &part(b)).unwrap().mean;
            assert_eq!(map_side, class_side, "{a} x {b}");
        }
    }

    #[test]
    fn histogram_total_is_factorial() {
        let r = exact_expected_cycles(&part("4,3"), &part("3,2,2")).unwrap();
        assert_eq!(r.total, 5040);
        assert_eq!(r.histogram.values().sum::<u64>(), 5040);
        // sign(sigma omega) = sign(sigma) sign(omega) forces c = len(alpha) + len(beta) - n mod 2
        assert!(r.histogram.keys().all(|c| c % 2 == 0));
    }
}
