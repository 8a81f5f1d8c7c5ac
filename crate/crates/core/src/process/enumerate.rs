//! Exhaustive walk over every pairing choice of a process.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::Result;
use crate::map::Dart;
use crate::perm::{Partition, Permutation, Rational};
use crate::process::{Process, StepRecord, Variant};

/// One edge of the choice tree: the state before the step, the dart pair
/// chosen, and the record the step produced.
pub struct ChoiceVisit<'a> {
    pub before: &'a Process,
    pub after: &'a Process,
    pub record: &'a StepRecord,
    /// Probability of reaching `after`.
    pub probability: &'a Rational,
}

fn walk<F: FnMut(&ChoiceVisit<'_>)>(
    process: &Process,
    probability: &Rational,
    visit: &mut F,
    leaves: &mut BTreeMap<Permutation, Rational>,
) -> Result<()> {
    if process.is_finished() {
        let pi = process
            .state()
            .pairing()
            .to_permutation()
            .expect("complete pairing");
        *leaves.entry(pi).or_insert_with(Rational::zero) += probability;
        return Ok(());
    }
    let mut probe = process.clone();
    let active = probe.active_dart()?;
    let options: Vec<Dart> = if active.is_s() {
        probe.state().unpaired_t()
    } else {
        probe.state().unpaired_s()
    };
    let p = probability / Rational::from_integer(BigInt::from(options.len()));
    for pairing in options {
        let mut next = probe.clone();
        let record = next.step_with(pairing)?;
        visit(&ChoiceVisit {
            before: &probe,
            after: &next,
            record: &record,
            probability: &p,
        });
        walk(&next, &p, visit, leaves)?;
    }
    Ok(())
}

/// Visits every step of every choice sequence and returns the probability
/// of each output map, keyed by its pairing permutation `pi`.
pub fn enumerate_choice_tree<F: FnMut(&ChoiceVisit<'_>)>(
    alpha: &Partition,
    beta: &Partition,
    variant: Variant,
    mut visit: F,
) -> Result<BTreeMap<Permutation, Rational>> {
    let root = Process::new(alpha, beta, variant)?;
    let mut leaves = BTreeMap::new();
    walk(&root, &Rational::one(), &mut visit, &mut leaves)?;
    Ok(leaves)
}

pub fn exact_output_distribution(
    alpha: &Partition,
    beta: &Partition,
    variant: Variant,
) -> Result<BTreeMap<Permutation, Rational>> {
    enumerate_choice_tree(alpha, beta, variant, |_| {})
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::rational;

    #[test]
    fn n_two_has_two_equiprobable_outcomes() {
        let two: Partition = "2".parse().unwrap();
        for variant in [Variant::A, Variant::B] {
            let dist = exact_output_distribution(&two, &two, variant).unwrap();
            assert_eq!(dist.len(), 2);
            assert!(dist.values().all(|p| *p == rational(1, 2)));
        }
    }

    #[test]
    fn uniform_at_n_four() {
        let a: Partition = "2,2".parse().unwrap();
        for variant in [Variant::A, Variant::B] {
            let dist = exact_output_distribution(&a, &a, variant).unwrap();
            assert_eq!(dist.len(), 24);
            assert!(dist.values().all(|p| *p == rational(1, 24)));
        }
    }

    #[test]
    fn visits_every_edge_once() {
        let a: Partition = "3".parse().unwrap();
        let mut edges = 0;
        enumerate_choice_tree(&a, &a, Variant::B, |v| {
            assert_eq!(v.after.state().completed_steps(), v.record.k);
            edges += 1;
        })
        .unwrap();
        // 3 + 3*2 + 3*2*1
        assert_eq!(edges, 15);
    }
}
