//! Partitions, permutations on `{1..n}`, and harmonic numbers.

mod harmonic;
mod partition;
mod permutation;

pub use harmonic::{
    harmonic, harmonic_exact, harmonic_f64, rational, rational_to_f64, Number, Rational,
    RATIONAL_THRESHOLD,
};
pub use partition::Partition;
pub use permutation::Permutation;

pub(crate) use permutation::count_cycles;
