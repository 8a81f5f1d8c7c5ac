//! The two random edge-pairing processes, one edge per step.
//!
//! Process A picks its active dart by priority (bad `s`, bad `t`, smallest
//! unpaired `s`); process B always pairs `s_k` at step `k`. Both draw the
//! pairing dart uniformly from the unpaired darts on the other side.

mod enumerate;
mod invariants;
mod predict;
mod state;

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::{map_from_permutation, Dart, PartialMap};
use crate::perm::{Partition, Permutation};

pub use enumerate::{enumerate_choice_tree, exact_output_distribution, ChoiceVisit};
pub use invariants::{check_rpa_invariants, check_rpb_invariants, InvariantViolation};
pub use predict::{predict_step_effects, StepEffects};
pub use state::ProcessState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    A,
    B,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::A => "A",
            Variant::B => "B",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Variant::A),
            "B" | "b" => Ok(Variant::B),
            _ => Err(Error::InvalidArgument(format!("unknown variant {s:?}"))),
        }
    }
}

/// One step of a run. Serializes as `{k, active, pairing, faces_added, O_k, b_k}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub k: usize,
    pub active: Dart,
    pub pairing: Dart,
    pub faces_added: usize,
    /// Bad `t` darts before the step.
    #[serde(rename = "O_k")]
    pub bad_t_before: usize,
    /// Whether the map was bad before the step.
    #[serde(rename = "b_k")]
    pub bad_map_before: bool,
    #[serde(skip)]
    pub unpaired_before: usize,
    #[serde(skip)]
    pub bad_created: usize,
    #[serde(skip)]
    pub bad_consumed: usize,
}

#[derive(Debug, Clone)]
pub struct Trace {
    pub alpha: Partition,
    pub beta: Partition,
    pub variant: Variant,
    pub seed: Option<u64>,
    pub records: Vec<StepRecord>,
    pub final_map: PartialMap,
}

impl Trace {
    pub fn total_faces(&self) -> usize {
        self.records.iter().map(|r| r.faces_added).sum()
    }

    /// One JSON object per step, newline terminated.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("plain record"));
            out.push('\n');
        }
        out
    }
}

/// Checks the hypotheses the processes are run under.
pub fn validate_partitions(alpha: &Partition, beta: &Partition) -> Result<()> {
    if alpha.n() != beta.n() {
        return Err(Error::SizeMismatch {
            alpha: alpha.n(),
            beta: beta.n(),
        });
    }
    for p in [alpha, beta] {
        if !p.is_fixed_point_free() {
            return Err(Error::PartOfSizeOne(p.to_string()));
        }
    }
    Ok(())
}

/// A running process: state plus the active-dart rule.
#[derive(Debug, Clone)]
pub struct Process {
    state: ProcessState,
    variant: Variant,
}

impl Process {
    pub fn new(alpha: &Partition, beta: &Partition, variant: Variant) -> Result<Self> {
        validate_partitions(alpha, beta)?;
        Ok(Process {
            state: ProcessState::new(alpha, beta)?,
            variant,
        })
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn state(&self) -> &ProcessState {
        &self.state
    }

    pub fn is_finished(&self) -> bool {
        self.state.is_finished()
    }

    pub fn active_dart(&mut self) -> Result<Dart> {
        match self.variant {
            Variant::A => self.state.rpa_active_dart(),
            Variant::B => self.state.rpb_active_dart(),
        }
    }

    /// Takes one step with a uniformly drawn pairing dart.
    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<StepRecord> {
        let active = self.active_dart()?;
        let pairing = self.state.sample_pairing(active, rng)?;
        self.pair(active, pairing)
    }

    /// Takes one step with a chosen pairing dart.
    pub fn step_with(&mut self, pairing: Dart) -> Result<StepRecord> {
        let active = self.active_dart()?;
        self.pair(active, pairing)
    }

    fn pair(&mut self, active: Dart, pairing: Dart) -> Result<StepRecord> {
        let k = self.state.step();
        let bad_t_before = self.state.bad_t_count();
        let bad_map_before = self.state.is_bad_map();
        let unpaired_before = self.state.unpaired_s_count();
        let out = self.state.apply_pairing(active, pairing)?;
        Ok(StepRecord {
            k,
            active,
            pairing,
            faces_added: out.faces_added,
            bad_t_before,
            bad_map_before,
            unpaired_before,
            bad_created: out.bad_created,
            bad_consumed: out.bad_consumed,
        })
    }

    /// Runs to completion, handing each record to `observe`.
    pub fn finish<R, F>(&mut self, rng: &mut R, mut observe: F) -> Result<()>
    where
        R: Rng + ?Sized,
        F: FnMut(&ProcessState, &StepRecord),
    {
        while !self.is_finished() {
            let record = self.step(rng)?;
            observe(&self.state, &record);
        }
        Ok(())
    }

    pub fn into_state(self) -> ProcessState {
        self.state
    }
}

/// A full traced run.
pub fn run_process<R: Rng + ?Sized>(
    alpha: &Partition,
    beta: &Partition,
    variant: Variant,
    rng: &mut R,
) -> Result<Trace> {
    let mut process = Process::new(alpha, beta, variant)?;
    let mut records = Vec::with_capacity(alpha.n());
    process.finish(rng, |_, r| records.push(r.clone()))?;
    Ok(Trace {
        alpha: alpha.clone(),
        beta: beta.clone(),
        variant,
        seed: None,
        records,
        final_map: process.state.to_partial_map(),
    })
}

/// A traced run on the stream of `trial_rng(seed, 0)`.
pub fn run_process_seeded(
    alpha: &Partition,
    beta: &Partition,
    variant: Variant,
    seed: u64,
) -> Result<Trace> {
    let mut trace = run_process(alpha, beta, variant, &mut trial_rng(seed, 0))?;
    trace.seed = Some(seed);
    Ok(trace)
}

/// Face count of the output map, without recording steps.
pub fn run_process_faces<R: Rng + ?Sized>(
    alpha: &Partition,
    beta: &Partition,
    variant: Variant,
    rng: &mut R,
) -> Result<usize> {
    let mut process = Process::new(alpha, beta, variant)?;
    process.finish(rng, |_, _| {})?;
    Ok(process.state.completed_faces())
}

/// Independent reproducible stream for trial `trial` under `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Uniform `pi` in `S_n` (unbiased shuffle), as a permutation.
pub fn uniform_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Permutation {
    let mut images: Vec<usize> = (1..=n).collect();
    images.shuffle(rng);
    Permutation::from_images(images).expect("shuffle of 1..n")
}

/// The map `m_pi` for a uniform `pi`. Parts of size 1 are allowed.
pub fn sample_uniform_map<R: Rng + ?Sized>(
    alpha: &Partition,
    beta: &Partition,
    rng: &mut R,
) -> Result<PartialMap> {
    if alpha.n() != beta.n() {
        return Err(Error::SizeMismatch {
            alpha: alpha.n(),
            beta: beta.n(),
        });
    }
    map_from_permutation(alpha, beta, &uniform_permutation(alpha.n(), rng))
}
