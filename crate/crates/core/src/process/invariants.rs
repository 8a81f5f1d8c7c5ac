//! Structural checks on the state at the start of a step, computed from the
//! baseline `u_m` so they do not trust the incremental structure.

use std::fmt;

use crate::map::{Dart, PartialMap, Side, UnpairedPermutation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantViolation {
    pub rule: &'static str,
    pub detail: String,
}

impl fmt::Display for InvariantViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.rule, self.detail)
    }
}

impl std::error::Error for InvariantViolation {}

fn fail(rule: &'static str, detail: String) -> Result<(), InvariantViolation> {
    Err(InvariantViolation { rule, detail })
}

fn show(cycle: &[Dart]) -> String {
    let parts: Vec<String> = cycle.iter().map(|d| d.to_string()).collect();
    format!("({})", parts.join(" "))
}

/// Number of S-to-T or T-to-S changes going once around the cycle.
fn side_changes(cycle: &[Dart]) -> usize {
    (0..cycle.len())
        .filter(|&i| cycle[i].side() != cycle[(i + 1) % cycle.len()].side())
        .count()
}

fn balanced_sides(map: &PartialMap) -> Result<(), InvariantViolation> {
    let free = map.unpaired_darts();
    let s = free.iter().filter(|d| d.is_s()).count();
    let t = free.len() - s;
    let expected = map.n() - map.pairing().len();
    if s != expected || t != expected {
        return fail(
            "unpaired-counts",
            format!("|S^u| = {s}, |T^u| = {t}, expected {expected}"),
        );
    }
    Ok(())
}

/// Process A, before pairing `active`: at most two bad darts, at most one
/// mixed face of the form (s..s t..t), an active dart inside it is its
/// first `s` dart, and `active` follows the priority rule.
pub fn check_rpa_invariants(map: &PartialMap, active: Dart) -> Result<(), InvariantViolation> {
    balanced_sides(map)?;
    let u = map.unpaired_permutation();
    let bad = u.fixed_points();
    if bad.len() > 2 {
        return fail("bad-darts", format!("{} bad darts", bad.len()));
    }
    let expected = bad
        .iter()
        .copied()
        .min()
        .or_else(|| u.darts().filter(|d| d.is_s()).min());
    if expected != Some(active) {
        return fail(
            "active-priority",
            format!("active {active}, priority gives {expected:?}"),
        );
    }
    let mixed = u.mixed_cycles();
    if mixed.len() > 1 {
        return fail("mixed-faces", format!("{} mixed partial faces", mixed.len()));
    }
    if let Some(face) = mixed.first() {
        if side_changes(face) != 2 {
            return fail("mixed-shape", show(face));
        }
        if face.contains(&active) && active.is_s() {
            let before = u.apply_inverse(active).expect("unpaired");
            if before.side() != Side::T {
                return fail(
                    "active-position",
                    format!("{active} is not the first s dart of {}", show(face)),
                );
            }
        }
        if face.contains(&active) && active.is_t() {
            return fail("active-position", format!("{active} is a t dart in {}", show(face)));
        }
    }
    Ok(())
}

/// Process B at step `k` (active `s_k`): `s_1..s_{k-1}` paired and the rest
/// unpaired; `u` has the cycle `(s_k .. s_last t ..)` where `s_last` ends the
/// vertex of `s_k`; no other face is mixed; at a vertex's first dart the map
/// is bad.
pub fn check_rpb_invariants(map: &PartialMap, k: usize) -> Result<(), InvariantViolation> {
    balanced_sides(map)?;
    let n = map.n();
    for i in 1..=n {
        if map.is_paired(Dart::s(i)) != (i < k) {
            return fail(
                "rpb-prefix",
                format!("s{i} paired = {} at step {k}", map.is_paired(Dart::s(i))),
            );
        }
    }
    let (_, first, last) = map.alpha().block_of(k).expect("k within 1..n");
    let u: UnpairedPermutation = map.unpaired_permutation();
    let mut cycle = vec![Dart::s(k)];
    let mut x = u.apply(Dart::s(k)).expect("unpaired");
    while x != Dart::s(k) {
        cycle.push(x);
        x = u.apply(x).expect("unpaired");
    }
    let s_part: Vec<Dart> = (k..=last).map(Dart::s).collect();
    let rest = &cycle[s_part.len().min(cycle.len())..];
    if cycle.len() < s_part.len() || cycle[..s_part.len()] != s_part[..] || rest.iter().any(|d| d.is_s())
    {
        return fail("rpb-active-face", show(&cycle));
    }
    for face in u.mixed_cycles() {
        if !face.contains(&Dart::s(k)) {
            return fail("rpb-other-mixed", show(&face));
        }
    }
    if k == first && !map.is_bad_map() {
        return fail("rpb-forced-bad", format!("map not bad at block start k = {k}"));
    }
    Ok(())
}
