//! Incrementally maintained unpaired permutation.
//!
//! The partial faces are kept as doubly linked cycles over the unpaired
//! darts. Adding the edge `d -- p` relinks at most four pointers: the cycle
//! through both darts splits in two, or the two cycles through them merge.
//! Each cycle carries an id with its length and per-side counts, so bad
//! darts (length one) and mixed faces (both sides present) are tracked
//! without rescanning. On a split the smaller piece is relabelled, found by
//! walking both pieces in lockstep; on a merge the smaller cycle is folded
//! into the larger.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::map::dart::{Dart, Side};
use crate::map::partial::{PartialMap, UnpairedPermutation};
use crate::perm::Partition;

const NONE: usize = usize::MAX;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct CycleInfo {
    len: usize,
    s: usize,
    t: usize,
}

impl CycleInfo {
    fn is_mixed(&self) -> bool {
        self.s > 0 && self.t > 0
    }
}

/// Effect of one pairing on the partial faces.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PairOutcome {
    /// Completed faces closed by the new edge (0, 1 or 2).
    pub faces_added: usize,
    /// Unpaired darts that became fixed points of `u`.
    pub bad_created: usize,
    /// Bad darts that stopped being bad because they were paired.
    pub bad_consumed: usize,
}

/// Read access to `u` and `u^-1` on unpaired darts.
pub trait UnpairedView {
    fn next(&self, d: Dart) -> Option<Dart>;
    fn prev(&self, d: Dart) -> Option<Dart>;
}

impl UnpairedView for UnpairedPermutation {
    fn next(&self, d: Dart) -> Option<Dart> {
        self.apply(d)
    }

    fn prev(&self, d: Dart) -> Option<Dart> {
        self.apply_inverse(d)
    }
}

#[derive(Debug, Clone)]
pub struct UnpairedCycles {
    n: usize,
    succ: Vec<usize>,
    pred: Vec<usize>,
    cycle_of: Vec<usize>,
    cycles: Vec<CycleInfo>,
    bad: BTreeSet<usize>,
    bad_t: usize,
    mixed: usize,
    completed: usize,
    unpaired: usize,
}

impl UnpairedCycles {
    /// State of a map with no edges: `u = R`.
    pub fn new(alpha: &Partition, beta: &Partition) -> Result<Self> {
        let map = PartialMap::new(alpha.clone(), beta.clone())?;
        Ok(UnpairedCycles::from_map(&map))
    }

    pub fn from_map(map: &PartialMap) -> Self {
        let n = map.n();
        let u = map.unpaired_permutation();
        let mut this = UnpairedCycles {
            n,
            succ: vec![NONE; 2 * n],
            pred: vec![NONE; 2 * n],
            cycle_of: vec![NONE; 2 * n],
            cycles: Vec::new(),
            bad: BTreeSet::new(),
            bad_t: 0,
            mixed: 0,
            completed: map.completed_faces(),
            unpaired: 0,
        };
        for cycle in u.cycles() {
            let id = this.cycles.len();
            let mut info = CycleInfo::default();
            for (i, &d) in cycle.iter().enumerate() {
                let c = d.code(n);
                let next = cycle[(i + 1) % cycle.len()].code(n);
                this.succ[c] = next;
                this.pred[next] = c;
                this.cycle_of[c] = id;
                info.len += 1;
                match d.side() {
                    Side::S => info.s += 1,
                    Side::T => info.t += 1,
                }
            }
            this.unpaired += info.len;
            if info.len == 1 {
                this.insert_bad(cycle[0].code(n));
            }
            this.mixed += info.is_mixed() as usize;
            this.cycles.push(info);
        }
        this
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn is_unpaired(&self, d: Dart) -> bool {
        d.index() <= self.n && self.succ[d.code(self.n)] != NONE
    }

    pub fn succ(&self, d: Dart) -> Option<Dart> {
        self.code_link(&self.succ, d)
    }

    pub fn pred(&self, d: Dart) -> Option<Dart> {
        self.code_link(&self.pred, d)
    }

    fn code_link(&self, links: &[usize], d: Dart) -> Option<Dart> {
        if d.index() > self.n {
            return None;
        }
        match links[d.code(self.n)] {
            NONE => None,
            c => Some(Dart::from_code(c, self.n)),
        }
    }

    /// Length of the partial face through `d`.
    pub fn cycle_len(&self, d: Dart) -> Option<usize> {
        self.is_unpaired(d)
            .then(|| self.cycles[self.cycle_of[d.code(self.n)]].len)
    }

    pub fn is_bad(&self, d: Dart) -> bool {
        self.cycle_len(d) == Some(1)
    }

    pub fn bad_darts(&self) -> impl Iterator<Item = Dart> + '_ {
        self.bad.iter().map(|&c| Dart::from_code(c, self.n))
    }

    /// Smallest bad dart in dart order: any bad `s` dart before any bad `t` dart.
    pub fn smallest_bad(&self) -> Option<Dart> {
        self.bad.first().map(|&c| Dart::from_code(c, self.n))
    }

    pub fn bad_count(&self) -> usize {
        self.bad.len()
    }

    pub fn bad_t_count(&self) -> usize {
        self.bad_t
    }

    pub fn mixed_count(&self) -> usize {
        self.mixed
    }

    pub fn is_bad_map(&self) -> bool {
        self.mixed == 0
    }

    pub fn completed_faces(&self) -> usize {
        self.completed
    }

    pub fn unpaired_count(&self) -> usize {
        self.unpaired
    }

    /// The partial face through `d`, starting at `d`.
    pub fn cycle_through(&self, d: Dart) -> Vec<Dart> {
        if !self.is_unpaired(d) {
            return Vec::new();
        }
        let start = d.code(self.n);
        let mut out = vec![d];
        let mut x = self.succ[start];
        while x != start {
            out.push(Dart::from_code(x, self.n));
            x = self.succ[x];
        }
        out
    }

    pub fn to_unpaired_permutation(&self) -> UnpairedPermutation {
        let next = self
            .succ
            .iter()
            .map(|&c| (c != NONE).then_some(c))
            .collect();
        UnpairedPermutation::from_next(self.n, next)
    }

    /// Adds the edge between two unpaired darts on opposite sides.
    pub fn pair(&mut self, a: Dart, b: Dart) -> Result<PairOutcome> {
        a.check(self.n)?;
        b.check(self.n)?;
        if a.side() == b.side() {
            return Err(Error::SameSidePairing(a, b));
        }
        for d in [a, b] {
            if !self.is_unpaired(d) {
                return Err(Error::AlreadyPaired(d));
            }
        }
        Ok(self.pair_codes(a.code(self.n), b.code(self.n)))
    }

    fn is_t_code(&self, c: usize) -> bool {
        c >= self.n
    }

    fn insert_bad(&mut self, c: usize) {
        if self.bad.insert(c) && self.is_t_code(c) {
            self.bad_t += 1;
        }
    }

    fn remove_bad(&mut self, c: usize) -> bool {
        let removed = self.bad.remove(&c);
        if removed && self.is_t_code(c) {
            self.bad_t -= 1;
        }
        removed
    }

    fn side_counts(&self, c: usize) -> (usize, usize) {
        if self.is_t_code(c) {
            (0, 1)
        } else {
            (1, 0)
        }
    }

    pub(crate) fn pair_codes(&mut self, d: usize, p: usize) -> PairOutcome {
        let mut out = PairOutcome {
            bad_consumed: self.remove_bad(d) as usize + self.remove_bad(p) as usize,
            ..Default::default()
        };

        let (cd, cp) = (self.cycle_of[d], self.cycle_of[p]);
        let (sd, pd, sp, pp) = (self.succ[d], self.pred[d], self.succ[p], self.pred[p]);
        let (ds, dt) = self.side_counts(d);
        let (ps, pt) = self.side_counts(p);

        if cd == cp {
            let old = self.cycles[cd];
            self.mixed -= old.is_mixed() as usize;
            // pieces: sd ..= pp (between d and p) and sp ..= pd (between p and d)
            let a_empty = sd == p;
            let b_empty = sp == d;
            out.faces_added = a_empty as usize + b_empty as usize;
            if !a_empty {
                self.succ[pp] = sd;
                self.pred[sd] = pp;
            }
            if !b_empty {
                self.succ[pd] = sp;
                self.pred[sp] = pd;
            }
            let rest = CycleInfo {
                len: old.len - 2,
                s: old.s - ds - ps,
                t: old.t - dt - pt,
            };
            let pieces = match (a_empty, b_empty) {
                (true, true) => vec![],
                (false, true) => {
                    self.cycles[cd] = rest;
                    vec![cd]
                }
                (true, false) => {
                    self.cycles[cd] = rest;
                    vec![cd]
                }
                (false, false) => {
                    let (small_start, small) = self.smaller_piece(sd, sp);
                    let id = self.cycles.len();
                    self.cycles.push(small);
                    self.relabel(small_start, small.len, id);
                    self.cycles[cd] = CycleInfo {
                        len: rest.len - small.len,
                        s: rest.s - small.s,
                        t: rest.t - small.t,
                    };
                    vec![cd, id]
                }
            };
            for id in pieces {
                let info = self.cycles[id];
                self.mixed += info.is_mixed() as usize;
                if info.len == 1 {
                    out.bad_created += 1;
                }
            }
            if !a_empty && self.cycles[self.cycle_of[sd]].len == 1 {
                self.insert_bad(sd);
            }
            if !b_empty && self.cycles[self.cycle_of[sp]].len == 1 {
                self.insert_bad(sp);
            }
        } else {
            let (id_d, id_p) = (self.cycles[cd], self.cycles[cp]);
            self.mixed -= id_d.is_mixed() as usize + id_p.is_mixed() as usize;
            let merged = CycleInfo {
                len: id_d.len + id_p.len - 2,
                s: id_d.s + id_p.s - ds - ps,
                t: id_d.t + id_p.t - dt - pt,
            };
            if merged.len == 0 {
                out.faces_added = 1;
            } else {
                // fold the survivors of the shorter cycle into the longer one
                let keep = if id_d.len >= id_p.len {
                    if id_p.len > 1 {
                        self.relabel(sp, id_p.len - 1, cd);
                    }
                    cd
                } else {
                    if id_d.len > 1 {
                        self.relabel(sd, id_d.len - 1, cp);
                    }
                    cp
                };
                match (id_d.len, id_p.len) {
                    (1, _) => {
                        self.succ[pp] = sp;
                        self.pred[sp] = pp;
                    }
                    (_, 1) => {
                        self.succ[pd] = sd;
                        self.pred[sd] = pd;
                    }
                    _ => {
                        self.succ[pd] = sp;
                        self.pred[sp] = pd;
                        self.succ[pp] = sd;
                        self.pred[sd] = pp;
                    }
                }
                self.cycles[keep] = merged;
                self.mixed += merged.is_mixed() as usize;
                if merged.len == 1 {
                    out.bad_created = 1;
                    let survivor = if id_d.len == 1 { sp } else { sd };
                    self.insert_bad(survivor);
                }
            }
        }

        for c in [d, p] {
            self.succ[c] = NONE;
            self.pred[c] = NONE;
            self.cycle_of[c] = NONE;
        }
        self.unpaired -= 2;
        self.completed += out.faces_added;
        out
    }

    /// Walks the two (already relinked) pieces from `a` and `b` in lockstep
    /// and returns the start and census of whichever closes first.
    fn smaller_piece(&self, a: usize, b: usize) -> (usize, CycleInfo) {
        let mut walkers = [(a, a, CycleInfo::default()), (b, b, CycleInfo::default())];
        loop {
            for w in walkers.iter_mut() {
                let (start, cur, info) = w;
                info.len += 1;
                if *cur >= self.n {
                    info.t += 1;
                } else {
                    info.s += 1;
                }
                *cur = self.succ[*cur];
                if *cur == *start {
                    return (*start, *info);
                }
            }
        }
    }

    fn relabel(&mut self, start: usize, len: usize, id: usize) {
        let mut x = start;
        for _ in 0..len {
            self.cycle_of[x] = id;
            x = self.succ[x];
        }
    }
}

impl UnpairedView for UnpairedCycles {
    fn next(&self, d: Dart) -> Option<Dart> {
        self.succ(d)
    }

    fn prev(&self, d: Dart) -> Option<Dart> {
        self.pred(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::PartialPairing;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn part(s: &str) -> Partition {
        s.parse().unwrap()
    }

    /// Full comparison against a map recomputed from scratch.
    fn assert_matches_baseline(inc: &UnpairedCycles, map: &PartialMap) {
        let u = map.unpaired_permutation();
        assert_eq!(inc.to_unpaired_permutation(), u, "u differs");
        let bad: Vec<Dart> = inc.bad_darts().collect();
        assert_eq!(bad, map.bad_darts());
        assert_eq!(inc.bad_t_count(), bad.iter().filter(|d| d.is_t()).count());
        assert_eq!(inc.mixed_count(), map.mixed_partial_faces().len());
        assert_eq!(inc.completed_faces(), map.completed_faces());
        assert_eq!(inc.unpaired_count(), u.len());
        for cycle in u.cycles() {
            let s = cycle.iter().filter(|d| d.is_s()).count();
            for &d in &cycle {
                assert_eq!(inc.cycle_len(d), Some(cycle.len()));
                let id = inc.cycle_of[d.code(inc.n)];
                assert_eq!(inc.cycles[id].s, s);
                assert_eq!(inc.cycles[id].t, cycle.len() - s);
            }
        }
    }

    #[test]
    fn initial_state_is_rotation() {
        let inc = UnpairedCycles::new(&part("4,3"), &part("3,2,2")).unwrap();
        assert_eq!(inc.succ(Dart::s(4)), Some(Dart::s(1)));
        assert_eq!(inc.pred(Dart::t(1)), Some(Dart::t(3)));
        assert_eq!(inc.bad_count(), 0);
        assert!(inc.is_bad_map());
        assert_eq!(inc.unpaired_count(), 14);

        let with_ones = UnpairedCycles::new(&part("2,1"), &part("1,1,1")).unwrap();
        assert_eq!(with_ones.bad_count(), 4);
        assert_eq!(with_ones.bad_t_count(), 3);
        assert_eq!(with_ones.smallest_bad(), Some(Dart::s(3)));
    }

    #[test]
    fn seven_point_partial_state() {
        let pairing =
            PartialPairing::from_pairs(7, &[(1, 5), (2, 3), (3, 2), (4, 4), (7, 7)]).unwrap();
        let map = PartialMap::with_pairing(part("4,3"), part("3,2,2"), pairing).unwrap();
        let inc = UnpairedCycles::from_map(&map);
        assert_matches_baseline(&inc, &map);
        assert_eq!(inc.smallest_bad(), Some(Dart::t(1)));
        assert_eq!(inc.mixed_count(), 1);
        assert_eq!(inc.cycle_through(Dart::s(5)).len(), 3);
    }

    #[test]
    fn pair_errors() {
        let mut inc = UnpairedCycles::new(&part("2"), &part("2")).unwrap();
        assert_eq!(
            inc.pair(Dart::s(1), Dart::s(2)),
            Err(Error::SameSidePairing(Dart::s(1), Dart::s(2)))
        );
        inc.pair(Dart::s(1), Dart::t(2)).unwrap();
        assert_eq!(inc.pair(Dart::t(2), Dart::s(2)), Err(Error::AlreadyPaired(Dart::t(2))));
        assert!(inc.pair(Dart::s(3), Dart::t(1)).is_err());
    }

    #[test]
    fn random_sequences_agree_with_baseline() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..2_000 {
            let n = rng.gen_range(1..=9);
            let all = Partition::all(n);
            let alpha = all.choose(&mut rng).unwrap().clone();
            let beta = all.choose(&mut rng).unwrap().clone();
            let mut map = PartialMap::new(alpha.clone(), beta.clone()).unwrap();
            let mut inc = UnpairedCycles::new(&alpha, &beta).unwrap();
            let mut s: Vec<usize> = (1..=n).collect();
            let mut t: Vec<usize> = (1..=n).collect();
            s.shuffle(&mut rng);
            t.shuffle(&mut rng);
            for (&i, &j) in s.iter().zip(&t) {
                let (a, b) = if rng.gen_bool(0.5) {
                    (Dart::s(i), Dart::t(j))
                } else {
                    (Dart::t(j), Dart::s(i))
                };
                inc.pair(a, b).unwrap();
                map.pair(a, b).unwrap();
                assert_matches_baseline(&inc, &map);
            }
        }
    }
}
