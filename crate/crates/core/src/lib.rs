//! Bipartite-map model of products of conjugacy classes in `S_n`.
//!
//! A pair of partitions `alpha`, `beta` of `n` fixes a rotation scheme on
//! the darts `s_1..s_n, t_1..t_n`; each `pi` in `S_n` adds the edges
//! `s_i t_pi(i)` and yields a map whose faces correspond to the cycles of
//! `sigma0 pi omega0 pi^-1`. The crate builds these maps, runs the two
//! random edge-pairing processes with per-step observables, and estimates
//! the expected cycle count exactly or by Monte Carlo.

pub mod error;
pub mod estimate;
pub mod map;
pub mod perm;
pub mod process;

pub use error::{Error, Result};
pub use map::{Dart, PartialMap, Side};
pub use perm::{Number, Partition, Permutation, Rational};
