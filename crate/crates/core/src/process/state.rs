use rand::Rng;

use crate::error::{Error, Result};
use crate::map::{Dart, PairOutcome, PartialMap, PartialPairing, Side, UnpairedCycles};
use crate::perm::Partition;
use crate::process::predict::{predict_step_effects, StepEffects};

/// Dense set of 0-based indices with O(1) insert, remove and uniform sampling.
#[derive(Debug, Clone)]
pub(crate) struct DenseSet {
    items: Vec<usize>,
    pos: Vec<usize>,
}

const ABSENT: usize = usize::MAX;

impl DenseSet {
    fn full(n: usize) -> Self {
        DenseSet {
            items: (0..n).collect(),
            pos: (0..n).collect(),
        }
    }

    fn from_members(n: usize, members: impl Iterator<Item = usize>) -> Self {
        let mut set = DenseSet {
            items: Vec::new(),
            pos: vec![ABSENT; n],
        };
        for x in members {
            set.pos[x] = set.items.len();
            set.items.push(x);
        }
        set
    }

    fn len(&self) -> usize {
        self.items.len()
    }

    fn contains(&self, x: usize) -> bool {
        self.pos[x] != ABSENT
    }

    fn remove(&mut self, x: usize) {
        let i = self.pos[x];
        let last = *self.items.last().unwrap();
        self.items.swap_remove(i);
        if last != x {
            self.pos[last] = i;
        }
        self.pos[x] = ABSENT;
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.items[rng.gen_range(0..self.items.len())]
    }

    fn sorted(&self) -> Vec<usize> {
        let mut v = self.items.clone();
        v.sort_unstable();
        v
    }
}

/// A partial map part-way through a pairing process, with the unpaired
/// permutation maintained incrementally.
#[derive(Debug, Clone)]
pub struct ProcessState {
    alpha: Partition,
    beta: Partition,
    pairing: PartialPairing,
    cycles: UnpairedCycles,
    free_s: DenseSet,
    free_t: DenseSet,
    // no unpaired s dart below this 0-based index
    s_floor: usize,
}

impl ProcessState {
    /// The empty partial map. Parts of size 1 are allowed here.
    pub fn new(alpha: &Partition, beta: &Partition) -> Result<Self> {
        let map = PartialMap::new(alpha.clone(), beta.clone())?;
        let n = map.n();
        Ok(ProcessState {
            cycles: UnpairedCycles::from_map(&map),
            alpha: alpha.clone(),
            beta: beta.clone(),
            pairing: PartialPairing::new(n),
            free_s: DenseSet::full(n),
            free_t: DenseSet::full(n),
            s_floor: 0,
        })
    }

    /// Resumes from an arbitrary partial map.
    pub fn from_partial_map(map: &PartialMap) -> Self {
        let n = map.n();
        let pairing = map.pairing().clone();
        let free_s = DenseSet::from_members(n, (0..n).filter(|&i| pairing.image(i + 1).is_none()));
        let free_t =
            DenseSet::from_members(n, (0..n).filter(|&j| pairing.preimage(j + 1).is_none()));
        ProcessState {
            alpha: map.alpha().clone(),
            beta: map.beta().clone(),
            cycles: UnpairedCycles::from_map(map),
            pairing,
            free_s,
            free_t,
            s_floor: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.alpha.n()
    }

    pub fn alpha(&self) -> &Partition {
        &self.alpha
    }

    pub fn beta(&self) -> &Partition {
        &self.beta
    }

    pub fn pairing(&self) -> &PartialPairing {
        &self.pairing
    }

    pub fn cycles(&self) -> &UnpairedCycles {
        &self.cycles
    }

    /// Number of edges placed so far.
    pub fn completed_steps(&self) -> usize {
        self.pairing.len()
    }

    /// 1-based index `k` of the next step.
    pub fn step(&self) -> usize {
        self.pairing.len() + 1
    }

    pub fn is_finished(&self) -> bool {
        self.pairing.is_complete()
    }

    pub fn is_unpaired(&self, d: Dart) -> bool {
        d.index() <= self.n()
            && match d.side() {
                Side::S => self.free_s.contains(d.index() - 1),
                Side::T => self.free_t.contains(d.index() - 1),
            }
    }

    pub fn unpaired_s(&self) -> Vec<Dart> {
        self.free_s.sorted().into_iter().map(|i| Dart::s(i + 1)).collect()
    }

    pub fn unpaired_t(&self) -> Vec<Dart> {
        self.free_t.sorted().into_iter().map(|j| Dart::t(j + 1)).collect()
    }

    pub fn unpaired_s_count(&self) -> usize {
        self.free_s.len()
    }

    pub fn unpaired_t_count(&self) -> usize {
        self.free_t.len()
    }

    pub fn completed_faces(&self) -> usize {
        self.cycles.completed_faces()
    }

    /// `O_k`: bad darts in `T^u`.
    pub fn bad_t_count(&self) -> usize {
        self.cycles.bad_t_count()
    }

    /// `b_k`: no mixed partial face.
    pub fn is_bad_map(&self) -> bool {
        self.cycles.is_bad_map()
    }

    pub fn to_partial_map(&self) -> PartialMap {
        PartialMap::with_pairing(self.alpha.clone(), self.beta.clone(), self.pairing.clone())
            .expect("consistent sizes")
    }

    /// Active dart of process A: the smallest bad `s` dart, else the
    /// smallest bad `t` dart, else the smallest unpaired `s` dart.
    pub fn rpa_active_dart(&mut self) -> Result<Dart> {
        if self.free_s.len() == 0 {
            return Err(Error::EmptyState);
        }
        if let Some(d) = self.cycles.smallest_bad() {
            return Ok(d);
        }
        while !self.free_s.contains(self.s_floor) {
            self.s_floor += 1;
        }
        Ok(Dart::s(self.s_floor + 1))
    }

    /// Active dart of process B: `s_k` at step `k`.
    pub fn rpb_active_dart(&self) -> Result<Dart> {
        if self.free_s.len() == 0 {
            return Err(Error::EmptyState);
        }
        let d = Dart::s(self.step());
        if !self.is_unpaired(d) {
            return Err(Error::AlreadyPaired(d));
        }
        Ok(d)
    }

    /// A uniformly random unpaired dart on the side opposite to `active`.
    pub fn sample_pairing<R: Rng + ?Sized>(&self, active: Dart, rng: &mut R) -> Result<Dart> {
        Ok(match active.side() {
            Side::S if self.free_t.len() > 0 => Dart::t(self.free_t.sample(rng) + 1),
            Side::T if self.free_s.len() > 0 => Dart::s(self.free_s.sample(rng) + 1),
            _ => return Err(Error::EmptyState),
        })
    }

    fn validate(&self, active: Dart, pairing: Dart) -> Result<()> {
        active.check(self.n())?;
        pairing.check(self.n())?;
        if active.side() == pairing.side() {
            return Err(Error::SameSidePairing(active, pairing));
        }
        for d in [active, pairing] {
            if !self.is_unpaired(d) {
                return Err(Error::AlreadyPaired(d));
            }
        }
        Ok(())
    }

    /// Adds the edge `active -- pairing`.
    pub fn apply_pairing(&mut self, active: Dart, pairing: Dart) -> Result<PairOutcome> {
        self.validate(active, pairing)?;
        let (s, t) = match active.side() {
            Side::S => (active, pairing),
            Side::T => (pairing, active),
        };
        self.pairing.insert(s.index(), t.index())?;
        self.free_s.remove(s.index() - 1);
        self.free_t.remove(t.index() - 1);
        let n = self.n();
        Ok(self.cycles.pair_codes(active.code(n), pairing.code(n)))
    }

    /// What `apply_pairing(active, pairing)` would do, read off `u` alone.
    pub fn predict_step_effects(&self, active: Dart, pairing: Dart) -> Result<StepEffects> {
        self.validate(active, pairing)?;
        Ok(predict_step_effects(&self.cycles, active, pairing))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn part(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn state_from_pairs(alpha: &str, beta: &str, pairs: &[(usize, usize)]) -> ProcessState {
        let alpha = part(alpha);
        let pairing = PartialPairing::from_pairs(alpha.n(), pairs).unwrap();
        let map = PartialMap::with_pairing(alpha, part(beta), pairing).unwrap();
        ProcessState::from_partial_map(&map)
    }

    #[test]
    fn dense_set_sampling_is_exhaustive() {
        let mut set = DenseSet::full(5);
        set.remove(2);
        set.remove(4);
        assert_eq!(set.sorted(), vec![0, 1, 3]);
        assert!(!set.contains(4));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut hits = [0usize; 5];
        for _ in 0..3000 {
            hits[set.sample(&mut rng)] += 1;
        }
        assert_eq!(hits[2] + hits[4], 0);
        assert!(hits[0] > 800 && hits[1] > 800 && hits[3] > 800);
    }

    #[test]
    fn rpa_prefers_bad_s_then_bad_t_then_smallest_s() {
        // bad darts s4 and t4
        let mut st = state_from_pairs("4", "4", &[(1, 1), (2, 3), (3, 2)]);
        let bad: Vec<Dart> = st.cycles().bad_darts().collect();
        assert_eq!(bad, vec![Dart::s(4), Dart::t(4)]);
        assert_eq!(st.rpa_active_dart().unwrap(), Dart::s(4));

        // u = (s6 s7 s8)(t1)(t7 t8), bad t1 only
        let mut st = state_from_pairs("8", "6,2", &[(1, 2), (2, 3), (3, 4), (4, 6), (5, 5)]);
        assert!(st.is_unpaired(Dart::s(6)));
        assert_eq!(st.cycles().bad_darts().collect::<Vec<_>>(), vec![Dart::t(1)]);
        assert_eq!(st.rpa_active_dart().unwrap(), Dart::t(1));

        // no bad darts, u = (s3 t6 t7 s7)
        let mut st = state_from_pairs(
            "4,3",
            "4,3",
            &[(1, 1), (2, 2), (4, 3), (5, 4), (6, 5)],
        );
        assert_eq!(st.cycles().bad_count(), 0);
        assert_eq!(st.unpaired_s(), vec![Dart::s(3), Dart::s(7)]);
        assert_eq!(st.rpa_active_dart().unwrap(), Dart::s(3));
    }

    #[test]
    fn rpb_picks_s_k() {
        let st = ProcessState::new(&part("8"), &part("6,2")).unwrap();
        assert_eq!(st.rpb_active_dart().unwrap(), Dart::s(1));
        let st = state_from_pairs("8", "6,2", &[(1, 2), (2, 3), (3, 4), (4, 6), (5, 5)]);
        assert_eq!(st.rpb_active_dart().unwrap(), Dart::s(6));
        let st = state_from_pairs("3", "3", &[(1, 2), (2, 3)]);
        assert_eq!(st.rpb_active_dart().unwrap(), Dart::s(3));
        let done = state_from_pairs("2", "2", &[(1, 2), (2, 1)]);
        assert_eq!(done.rpb_active_dart(), Err(Error::EmptyState));
    }

    #[test]
    fn apply_pairing_errors() {
        let mut st = ProcessState::new(&part("2"), &part("2")).unwrap();
        assert_eq!(
            st.apply_pairing(Dart::s(1), Dart::s(2)),
            Err(Error::SameSidePairing(Dart::s(1), Dart::s(2)))
        );
        st.apply_pairing(Dart::s(1), Dart::t(1)).unwrap();
        assert_eq!(
            st.apply_pairing(Dart::s(1), Dart::t(2)),
            Err(Error::AlreadyPaired(Dart::s(1)))
        );
        assert_eq!(
            st.predict_step_effects(Dart::t(1), Dart::s(2)),
            Err(Error::AlreadyPaired(Dart::t(1)))
        );
    }

    #[test]
    fn first_step_never_closes_a_face() {
        for (a, b) in [("2", "2"), ("4,3", "3,2,2"), ("5", "3,2")] {
            let (alpha, beta) = (part(a), part(b));
            for j in 1..=alpha.n() {
                let mut st = ProcessState::new(&alpha, &beta).unwrap();
                let out = st.apply_pairing(Dart::s(1), Dart::t(j)).unwrap();
                assert_eq!(out.faces_added, 0);
            }
        }
    }

    #[test]
    fn closing_edge_completes_two_faces() {
        // u = (s5 s6 s7 s8)(t5 t6)(t7 t8)(s4 t4) and s4 -- t4
        let mut st = state_from_pairs("4,4", "4,2,2", &[(1, 3), (2, 1), (3, 2)]);
        let u = st.cycles();
        assert_eq!(u.succ(Dart::s(4)), Some(Dart::t(4)));
        assert_eq!(u.pred(Dart::s(4)), Some(Dart::t(4)));
        let out = st.apply_pairing(Dart::s(4), Dart::t(4)).unwrap();
        assert_eq!(out.faces_added, 2);
        let faces = st.to_partial_map().completed_face_cycles();
        let strings: Vec<String> = faces
            .iter()
            .map(|c| c.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        assert!(strings.contains(&"s1 t1 s3 t4 s2 t2".to_string()), "{strings:?}");
        assert!(strings.contains(&"s4 t3".to_string()), "{strings:?}");
    }

    #[test]
    fn bad_map_transitions_at_s6() {
        // bad map: pairing s6 with the bad dart t1 keeps it bad
        let top = state_from_pairs("8", "6,2", &[(1, 2), (2, 3), (3, 4), (4, 6), (5, 5)]);
        assert!(top.is_bad_map());
        for (t, stays_bad) in [(1, true), (7, false), (8, false)] {
            let mut st = top.clone();
            st.apply_pairing(Dart::s(6), Dart::t(t)).unwrap();
            assert_eq!(st.is_bad_map(), stays_bad, "t{t}");
        }
        // u = (s6 s7 s8 t3 t8)(t1); only t3 gives a bad map
        let bottom = state_from_pairs("8", "6,2", &[(1, 2), (2, 4), (3, 5), (4, 6), (5, 7)]);
        assert!(!bottom.is_bad_map());
        assert_eq!(
            bottom.cycles().cycle_through(Dart::s(6)),
            vec![Dart::s(6), Dart::s(7), Dart::s(8), Dart::t(3), Dart::t(8)]
        );
        for (t, bad) in [(3, true), (1, false), (8, false)] {
            let mut st = bottom.clone();
            st.apply_pairing(Dart::s(6), Dart::t(t)).unwrap();
            assert_eq!(st.is_bad_map(), bad, "t{t}");
        }
    }
}
