use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::faces_from_images;
use crate::perm::{Partition, Rational};
use crate::process::{trial_rng, validate_partitions, Process, Variant};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "exact")]
    Exact,
    #[serde(rename = "mc-A")]
    McA,
    #[serde(rename = "mc-B")]
    McB,
    #[serde(rename = "mc-uniform")]
    McUniform,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Exact, Method::McA, Method::McB, Method::McUniform];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::McA => "mc-A",
            Method::McB => "mc-B",
            Method::McUniform => "mc-uniform",
        }
    }

    pub fn is_exact(self) -> bool {
        self == Method::Exact
    }

    fn variant(self) -> Option<Variant> {
        match self {
            Method::McA => Some(Variant::A),
            Method::McB => Some(Variant::B),
            _ => None,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown method {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub method: Method,
    pub trials: u64,
    pub seed: u64,
    /// Collect per-step aggregates (process methods only).
    pub record_steps: bool,
}

impl McConfig {
    pub fn new(method: Method, trials: u64, seed: u64) -> Self {
        McConfig {
            method,
            trials,
            seed,
            record_steps: false,
        }
    }

    pub fn with_steps(mut self) -> Self {
        self.record_steps = true;
        self
    }
}

/// Integer sum, sum of squares and count; merging is exact and associative.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Moments {
    pub count: u64,
    pub sum: u128,
    pub sum_sq: u128,
}

impl Moments {
    pub fn push(&mut self, x: u64) {
        self.count += 1;
        self.sum += x as u128;
        self.sum_sq += (x as u128) * (x as u128);
    }

    pub fn merge(&mut self, other: &Moments) {
        self.count += other.count;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
    }

    pub fn mean_exact(&self) -> Rational {
        Rational::new(BigInt::from(self.sum), BigInt::from(self.count.max(1)))
    }

    pub fn mean(&self) -> f64 {
        if self.count == 0 {
            return 0.0;
        }
        self.sum as f64 / self.count as f64
    }

    /// Sample standard deviation over `sqrt(count)`; 0 below two samples.
    pub fn stderr(&self) -> f64 {
        if self.count < 2 {
            return 0.0;
        }
        let t = self.count as u128;
        // t * sum_sq - sum^2 >= 0 exactly; shrink before going to floats
        let centered = t * self.sum_sq - self.sum * self.sum;
        let var = centered as f64 / (t as f64 * (t - 1) as f64);
        (var / t as f64).sqrt()
    }
}

/// Per-step sums over traced runs, indexed by `k - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepAggregates {
    pub n: usize,
    pub faces: Vec<Moments>,
    pub bad_t: Vec<Moments>,
    pub bad_map: Vec<Moments>,
}

impl StepAggregates {
    pub fn new(n: usize) -> Self {
        StepAggregates {
            n,
            faces: vec![Moments::default(); n],
            bad_t: vec![Moments::default(); n],
            bad_map: vec![Moments::default(); n],
        }
    }

    pub fn merge(&mut self, other: &StepAggregates) {
        for (a, b) in [
            (&mut self.faces, &other.faces),
            (&mut self.bad_t, &other.bad_t),
            (&mut self.bad_map, &other.bad_map),
        ] {
            a.iter_mut().zip(b).for_each(|(x, y)| x.merge(y));
        }
    }

    pub fn trials(&self) -> u64 {
        self.faces.first().map_or(0, |m| m.count)
    }

    /// `sum_k mean(faces_added at k)`, exactly.
    pub fn sum_of_face_means(&self) -> Rational {
        self.faces.iter().map(Moments::mean_exact).sum()
    }

    pub fn mean_faces(&self, k: usize) -> f64 {
        self.faces[k - 1].mean()
    }

    pub fn mean_bad_t(&self, k: usize) -> f64 {
        self.bad_t[k - 1].mean()
    }

    pub fn stderr_bad_t(&self, k: usize) -> f64 {
        self.bad_t[k - 1].stderr()
    }

    pub fn freq_bad_map(&self, k: usize) -> f64 {
        self.bad_map[k - 1].mean()
    }

    pub fn stderr_bad_map(&self, k: usize) -> f64 {
        self.bad_map[k - 1].stderr()
    }

    /// Faces closed at step `k`, summed over all trials.
    pub fn faces_sum(&self, k: usize) -> u128 {
        self.faces[k - 1].sum
    }
}

/// Aggregated output of a Monte Carlo run.
#[derive(Debug, Clone, PartialEq)]
pub struct McResult {
    pub moments: Moments,
    pub histogram: BTreeMap<usize, u64>,
    pub steps: Option<StepAggregates>,
}

struct Acc {
    moments: Moments,
    histogram: Vec<u64>,
    steps: Option<StepAggregates>,
}

impl Acc {
    fn new(n: usize, steps: bool) -> Self {
        Acc {
            moments: Moments::default(),
            histogram: vec![0; n + 1],
            steps: steps.then(|| StepAggregates::new(n)),
        }
    }

    fn push(&mut self, faces: usize) {
        self.moments.push(faces as u64);
        self.histogram[faces] += 1;
    }

    fn merge(mut self, other: Acc) -> Acc {
        self.moments.merge(&other.moments);
        self.histogram
            .iter_mut()
            .zip(other.histogram)
            .for_each(|(a, b)| *a += b);
        if let (Some(a), Some(b)) = (self.steps.as_mut(), other.steps.as_ref()) {
            a.merge(b);
        }
        self
    }
}

/// Face counts of `trials` independent maps. Trial `i` uses
/// `trial_rng(seed, i)`, so results do not depend on the thread count.
pub fn run_mc(alpha: &Partition, beta: &Partition, config: &McConfig) -> Result<McResult> {
    if config.trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    if alpha.n() != beta.n() {
        return Err(Error::SizeMismatch {
            alpha: alpha.n(),
            beta: beta.n(),
        });
    }
    let n = alpha.n();
    let variant = config.method.variant();
    match config.method {
        Method::Exact => {
            return Err(Error::InvalidArgument(
                "exact is not a Monte Carlo method".into(),
            ))
        }
        Method::McA | Method::McB => validate_partitions(alpha, beta)?,
        Method::McUniform => {}
    }
    let record = config.record_steps && variant.is_some();
    let sigma = alpha.canonical_permutation();
    let omega = beta.canonical_permutation();
    let (sigma, omega) = (sigma.zero_based(), omega.zero_based());

    let acc = (0..config.trials)
        .into_par_iter()
        .fold(
            || (Acc::new(n, record), Scratch::new(n)),
            |(mut acc, mut scratch), trial| {
                let mut rng = trial_rng(config.seed, trial);
                let faces = match variant {
                    None => {
                        // reset so trial i sees the same input on any thread
                        scratch.pi.iter_mut().enumerate().for_each(|(i, p)| *p = i);
                        scratch.pi.shuffle(&mut rng);
                        for (i, &p) in scratch.pi.iter().enumerate() {
                            scratch.pi_inv[p] = i;
                        }
                        faces_from_images(
                            sigma,
                            omega,
                            &scratch.pi,
                            &scratch.pi_inv,
                            &mut scratch.buf,
                            &mut scratch.seen,
                        )
                    }
                    Some(v) => {
                        let mut process = Process::new(alpha, beta, v).expect("validated");
                        match acc.steps.as_mut() {
                            Some(steps) => process.finish(&mut rng, |_, r| {
                                let i = r.k - 1;
                                steps.faces[i].push(r.faces_added as u64);
                                steps.bad_t[i].push(r.bad_t_before as u64);
                                steps.bad_map[i].push(r.bad_map_before as u64);
                            }),
                            None => process.finish(&mut rng, |_, _| {}),
                        }
                        .expect("valid steps");
                        process.state().completed_faces()
                    }
                };
                acc.push(faces);
                (acc, scratch)
            },
        )
        .map(|(acc, _)| acc)
        .reduce(|| Acc::new(n, record), Acc::merge);

    Ok(McResult {
        moments: acc.moments,
        histogram: acc
            .histogram
            .into_iter()
            .enumerate()
            .filter(|&(_, k)| k > 0)
            .collect(),
        steps: acc.steps,
    })
}

struct Scratch {
    pi: Vec<usize>,
    pi_inv: Vec<usize>,
    buf: Vec<usize>,
    seen: Vec<bool>,
}

impl Scratch {
    fn new(n: usize) -> Self {
        Scratch {
            pi: (0..n).collect(),
            pi_inv: vec![0; n],
            buf: Vec::with_capacity(n),
            seen: Vec::with_capacity(n),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.to_string().parse::<Method>().unwrap(), m);
            assert_eq!(
                serde_json::to_string(&m).unwrap(),
                format!("\"{}\"", m.as_str())
            );
        }
        assert!("mc-C".parse::<Method>().is_err());
    }

    #[test]
    fn moments_match_textbook_formulas() {
        let xs = [3u64, 1, 4, 1, 5, 9, 2, 6];
        let mut m = Moments::default();
        xs.iter().for_each(|&x| m.push(x));
        let mean = xs.iter().sum::<u64>() as f64 / 8.0;
        let var = xs.iter().map(|&x| (x as f64 - mean).powi(2)).sum::<f64>() / 7.0;
        assert!((m.mean() - mean).abs() < 1e-12);
        assert!((m.stderr() - (var / 8.0).sqrt()).abs() < 1e-12);
        let mut single = Moments::default();
        single.push(4);
        assert_eq!(single.stderr(), 0.0);
    }

    #[test]
    fn results_do_not_depend_on_thread_count() {
        let cfg = McConfig::new(Method::McB, 3000, 11).with_steps();
        let (a, b) = (part("5,3"), part("4,2,2"));
        let wide = run_mc(&a, &b, &cfg).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let narrow = pool.install(|| run_mc(&a, &b, &cfg).unwrap());
        assert_eq!(wide, narrow);
    }

    #[test]
    fn single_trial_is_a_face_count() {
        for method in [Method::McA, Method::McB, Method::McUniform] {
            let r = run_mc(&part("4,3"), &part("3,2,2"), &McConfig::new(method, 1, 5)).unwrap();
            assert_eq!(r.moments.count, 1);
            assert!(r.moments.sum >= 1);
            assert_eq!(r.moments.stderr(), 0.0);
        }
    }

    #[test]
    fn process_methods_reject_fixed_points() {
        let cfg = McConfig::new(Method::McA, 10, 0);
        assert_eq!(
            run_mc(&part("3,1"), &part("4"), &cfg).unwrap_err(),
            Error::PartOfSizeOne("(3,1)".into())
        );
        let cfg = McConfig::new(Method::McUniform, 10, 0);
        assert!(run_mc(&part("3,1"), &part("4"), &cfg).is_ok());
        assert!(run_mc(&part("4"), &part("4"), &McConfig::new(Method::McUniform, 0, 0)).is_err());
    }

    #[test]
    fn step_sums_add_up() {
        let cfg = McConfig::new(Method::McB, 2000, 3).with_steps();
        let r = run_mc(&part("6,4"), &part("5,5"), &cfg).unwrap();
        let steps = r.steps.unwrap();
        assert_eq!(steps.trials(), 2000);
        assert_eq!(steps.sum_of_face_means(), r.moments.mean_exact());
        assert_eq!(steps.freq_bad_map(1), 1.0);
        assert_eq!(steps.freq_bad_map(7), 1.0);
        assert_eq!(steps.faces_sum(1), 0);
        assert_eq!(steps.faces_sum(7), 0);
    }
}
