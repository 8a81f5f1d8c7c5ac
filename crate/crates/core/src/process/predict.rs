//! Face and bad-dart deltas of one pairing, read off `u` before the step.
//!
//! For an active dart `d` and pairing dart `p`:
//!
//! * `d` bad: a face closes iff `p` is bad; a bad dart appears iff `p`
//!   sits in a partial face of length 2.
//! * `d` not bad: a face closes for each of `p = u(d)`, `p = u^-1(d)`, and
//!   a bad dart appears for each of `p = u^2(d)`, `p = u^-2(d)` (when that
//!   is not `d` itself). If `d` lies in a partial face of length 2 and `p`
//!   is bad, the partner of `d` becomes bad as well.
//!
//! Every paired bad dart stops being bad.

use serde::Serialize;

use crate::map::{Dart, PairOutcome, UnpairedView};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct StepEffects {
    pub faces_added: usize,
    pub bad_created: usize,
    pub bad_consumed: usize,
}

impl StepEffects {
    /// Net change in the number of bad darts.
    pub fn bad_delta(&self) -> isize {
        self.bad_created as isize - self.bad_consumed as isize
    }
}

impl From<PairOutcome> for StepEffects {
    fn from(o: PairOutcome) -> Self {
        StepEffects {
            faces_added: o.faces_added,
            bad_created: o.bad_created,
            bad_consumed: o.bad_consumed,
        }
    }
}

fn is_bad<U: UnpairedView + ?Sized>(u: &U, d: Dart) -> bool {
    u.next(d) == Some(d)
}

/// Both darts must be unpaired and on opposite sides; not rechecked here.
pub fn predict_step_effects<U: UnpairedView + ?Sized>(u: &U, d: Dart, p: Dart) -> StepEffects {
    let next = |x: Dart| u.next(x).expect("unpaired dart");
    let prev = |x: Dart| u.prev(x).expect("unpaired dart");
    let d_bad = is_bad(u, d);
    let p_bad = is_bad(u, p);
    let bad_consumed = d_bad as usize + p_bad as usize;
    if d_bad {
        let p_in_pair = !p_bad && next(next(p)) == p;
        return StepEffects {
            faces_added: p_bad as usize,
            bad_created: p_in_pair as usize,
            bad_consumed,
        };
    }
    let (fwd, back) = (next(d), prev(d));
    let (fwd2, back2) = (next(fwd), prev(back));
    let faces_added = (p == fwd) as usize + (p == back) as usize;
    let mut bad_created = (p == fwd2 && fwd2 != d) as usize + (p == back2 && back2 != d) as usize;
    if fwd2 == d && p_bad {
        bad_created += 1;
    }
    StepEffects {
        faces_added,
        bad_created,
        bad_consumed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::{PartialMap, PartialPairing, UnpairedCycles};
    use crate::perm::Partition;

    fn map(alpha: &str, beta: &str, pairs: &[(usize, usize)]) -> PartialMap {
        let alpha: Partition = alpha.parse().unwrap();
        let pairing = PartialPairing::from_pairs(alpha.n(), pairs).unwrap();
        PartialMap::with_pairing(alpha, beta.parse().unwrap(), pairing).unwrap()
    }

    fn observed(m: &PartialMap, d: Dart, p: Dart) -> StepEffects {
        let mut cycles = UnpairedCycles::from_map(m);
        cycles.pair(d, p).unwrap().into()
    }

    #[test]
    fn bad_active_with_bad_pairing_closes_one_face() {
        let m = map("4", "4", &[(1, 1), (2, 3), (3, 2)]);
        let u = m.unpaired_permutation();
        let e = predict_step_effects(&u, Dart::s(4), Dart::t(4));
        assert_eq!(
            e,
            StepEffects { faces_added: 1, bad_created: 0, bad_consumed: 2 }
        );
        assert_eq!(e.bad_delta(), -2);
        assert_eq!(e, observed(&m, Dart::s(4), Dart::t(4)));
    }

    #[test]
    fn bad_active_into_face_of_length_two_creates_bad_dart() {
        // u = (s3 s4)(t2)(t4): bad t2 paired into (s3 s4) leaves s4 alone
        let m = map("2,2", "4", &[(1, 1), (2, 3)]);
        let u = m.unpaired_permutation();
        assert_eq!(u.to_string(), "(s3 s4)(t2)(t4)");
        let e = predict_step_effects(&u, Dart::t(2), Dart::s(3));
        assert_eq!(
            e,
            StepEffects { faces_added: 0, bad_created: 1, bad_consumed: 1 }
        );
        assert_eq!(e, observed(&m, Dart::t(2), Dart::s(3)));
    }

    #[test]
    fn pairing_at_distance_two_creates_two_bad_darts() {
        // u = (s5 s6 t2 t5): u^2(s5) = u^-2(s5) = t2
        let m = map("6", "6", &[(1, 1), (2, 3), (3, 4), (4, 6)]);
        let u = m.unpaired_permutation();
        assert_eq!(
            u.cycles(),
            vec![vec![Dart::s(5), Dart::s(6), Dart::t(2), Dart::t(5)]]
        );
        let e = predict_step_effects(&u, Dart::s(5), Dart::t(2));
        assert_eq!(
            e,
            StepEffects { faces_added: 0, bad_created: 2, bad_consumed: 0 }
        );
        assert_eq!(e, observed(&m, Dart::s(5), Dart::t(2)));
    }

    #[test]
    fn closing_edge_completes_two_faces() {
        let m = map("4,4", "4,2,2", &[(1, 3), (2, 1), (3, 2)]);
        let u = m.unpaired_permutation();
        let e = predict_step_effects(&u, Dart::s(4), Dart::t(4));
        assert_eq!(e.faces_added, 2);
        assert_eq!(e, observed(&m, Dart::s(4), Dart::t(4)));
    }

    #[test]
    fn two_cycle_active_with_bad_pairing() {
        // active s3 in (s3 s4), bad pairing t2: s4 is left alone
        let m = map("2,2", "4", &[(1, 1), (2, 3)]);
        let u = m.unpaired_permutation();
        let e = predict_step_effects(&u, Dart::s(3), Dart::t(2));
        assert_eq!(
            e,
            StepEffects { faces_added: 0, bad_created: 1, bad_consumed: 1 }
        );
        assert_eq!(e, observed(&m, Dart::s(3), Dart::t(2)));
    }
}
