use thiserror::Error;

use crate::map::Dart;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("a partition needs at least one part")]
    EmptyPartition,
    #[error("partition parts must be positive, got {0}")]
    NonPositivePart(i64),
    #[error("prefix index {index} out of range 0..={len}")]
    PrefixOutOfRange { index: usize, len: usize },
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("not a bijection on 1..={0}")]
    NotABijection(usize),
    #[error("harmonic numbers start at n = 1")]
    HarmonicZero,
    #[error("partitions must have the same size, got {alpha} and {beta}")]
    SizeMismatch { alpha: usize, beta: usize },
    #[error("partition {0} has a part of size 1")]
    PartOfSizeOne(String),
    #[error("map is incomplete: {paired} of {n} darts in S are paired")]
    IncompleteMap { paired: usize, n: usize },
    #[error("cannot pair {0} with {1}: both on the same side")]
    SameSidePairing(Dart, Dart),
    #[error("dart {0} is already paired")]
    AlreadyPaired(Dart),
    #[error("dart {dart} does not exist in a map of degree {n}")]
    DartOutOfRange { dart: Dart, n: usize },
    #[error("no unpaired darts left")]
    EmptyState,
    #[error("n = {n} exceeds the enumeration limit {limit}")]
    EnumerationLimit { n: usize, limit: usize },
    #[error("closed form needs n >= 2, got {0}")]
    TooSmall(usize),
    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
