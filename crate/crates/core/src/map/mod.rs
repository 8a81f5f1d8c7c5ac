//! Bipartite maps on the darts `s_1..s_n, t_1..t_n`: rotation scheme,
//! partial edge involution, faces, and the unpaired permutation.

mod dart;
mod incremental;
mod partial;
mod walkthrough;

pub use dart::{Dart, DartPermutation, Side};
pub use incremental::{PairOutcome, UnpairedCycles, UnpairedView};
pub use partial::{edge_involution, rotation_scheme, PartialMap, PartialPairing, UnpairedPermutation};
pub use walkthrough::correspondence_walkthrough;

use crate::error::Result;
use crate::perm::{Partition, Permutation};

/// The complete map `m_pi`.
pub fn map_from_permutation(alpha: &Partition, beta: &Partition, pi: &Permutation) -> Result<PartialMap> {
    PartialMap::from_permutation(alpha.clone(), beta.clone(), pi)
}

/// Faces of the complete map `m_pi` from 0-based images of the canonical
/// permutations, `pi` and its inverse. Every face visits an `s` dart, so
/// this is the cycle count of the projection `i -> pi^-1(omega(pi(sigma(i))))`.
pub(crate) fn faces_from_images(
    sigma: &[usize],
    omega: &[usize],
    pi: &[usize],
    pi_inv: &[usize],
    scratch: &mut Vec<usize>,
    seen: &mut Vec<bool>,
) -> usize {
    let n = sigma.len();
    scratch.clear();
    scratch.extend((0..n).map(|i| pi_inv[omega[pi[sigma[i]]]]));
    seen.resize(n, false);
    crate::perm::count_cycles(scratch, seen)
}
