//! Exact and Monte Carlo estimates of the expected face (cycle) count,
//! the harmonic windows it is checked against, and report formats.

mod exact;
mod mc;
mod report;

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{harmonic, harmonic_exact, Number, Partition, Rational};
use crate::process::trial_rng;

pub use exact::{
    class_side_expected_cycles, exact_expected_cycles, exact_expected_cycles_with_limit,
    ExactResult, CLASS_SIDE_LIMIT, DEFAULT_ENUM_LIMIT,
};
pub use mc::{run_mc, McConfig, McResult, Method, Moments, StepAggregates};
pub use report::{reports_to_csv, reports_to_json, reports_to_jsonl, ReportRow};

/// An interval with per-end open/closed flags.
#[derive(Debug, Clone, PartialEq)]
pub struct Window {
    pub low: Number,
    pub high: Number,
    pub low_inclusive: bool,
    pub high_inclusive: bool,
}

impl Window {
    pub fn contains(&self, x: &Number) -> bool {
        use std::cmp::Ordering::*;
        let above = match x.compare(&self.low) {
            Greater => true,
            Equal => self.low_inclusive,
            Less => false,
        };
        let below = match x.compare(&self.high) {
            Less => true,
            Equal => self.high_inclusive,
            Greater => false,
        };
        above && below
    }

    /// Whether the closed interval `[lo, hi]` meets the window.
    pub fn meets(&self, lo: f64, hi: f64) -> bool {
        let (low, high) = (self.low.to_f64(), self.high.to_f64());
        let low_ok = if self.low_inclusive { hi >= low } else { hi > low };
        let high_ok = if self.high_inclusive { lo <= high } else { lo < high };
        low_ok && high_ok
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.low_inclusive { '[' } else { '(' },
            self.low,
            self.high,
            if self.high_inclusive { ']' } else { ')' }
        )
    }
}

/// `(H_n - 3, H_n + 1]`.
pub fn theorem_window(n: usize) -> Result<Window> {
    let h = harmonic(n)?;
    Ok(Window {
        low: h.add_int(-3),
        high: h.add_int(1),
        low_inclusive: false,
        high_inclusive: true,
    })
}

/// `[H_{n-1} - 4/n, H_{n-1} + 4/n]`, the window for one full-cycle class.
pub fn stanley_window(n: usize) -> Result<Window> {
    if n < 2 {
        return Err(Error::TooSmall(n));
    }
    let h = harmonic(n - 1)?;
    let slack = if n - 1 <= crate::perm::RATIONAL_THRESHOLD {
        Number::Exact(Rational::new(BigInt::from(4), BigInt::from(n)))
    } else {
        Number::Approx(4.0 / n as f64)
    };
    Ok(Window {
        low: h.sub(&slack),
        high: h.add(&slack),
        low_inclusive: true,
        high_inclusive: true,
    })
}

/// `H_{n-1} + 1/ceil(n/2)`, the known mean for two full cycles.
pub fn closed_form_nn(n: usize) -> Result<Rational> {
    if n < 2 {
        return Err(Error::TooSmall(n));
    }
    Ok(harmonic_exact(n - 1) + Rational::new(BigInt::from(1), BigInt::from(n.div_ceil(2))))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    /// Exact mean inside the window.
    Pass,
    /// Monte Carlo interval meets the window.
    Consistent,
    Violation,
}

impl Verdict {
    pub fn is_ok(self) -> bool {
        self != Verdict::Violation
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Consistent => "consistent",
            Verdict::Violation => "violation",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Half-width of the Monte Carlo gate, in standard errors.
pub const GATE_SIGMAS: f64 = 3.0;

#[derive(Debug, Clone, PartialEq)]
pub struct EstimateReport {
    pub alpha: Partition,
    pub beta: Partition,
    pub n: usize,
    pub method: Method,
    pub trials: u64,
    pub seed: Option<u64>,
    pub mean: Number,
    pub stderr: f64,
    pub window: Window,
    pub verdict: Verdict,
    pub histogram: std::collections::BTreeMap<usize, u64>,
    /// Exact mean of the sampled face counts (Monte Carlo only).
    pub sample_mean: Option<Rational>,
    pub steps: Option<StepAggregates>,
}

/// Exact reports compare rationals (floats past the harmonic threshold);
/// Monte Carlo reports pass when `mean +- 3 stderr` meets the window.
pub fn check_bounds(report: &EstimateReport) -> Verdict {
    if report.method.is_exact() {
        if report.window.contains(&report.mean) {
            Verdict::Pass
        } else {
            Verdict::Violation
        }
    } else {
        let m = report.mean.to_f64();
        let w = GATE_SIGMAS * report.stderr;
        if report.window.meets(m - w, m + w) {
            Verdict::Consistent
        } else {
            Verdict::Violation
        }
    }
}

fn finish(mut report: EstimateReport) -> EstimateReport {
    report.verdict = check_bounds(&report);
    report
}

pub fn exact_report(alpha: &Partition, beta: &Partition, limit: usize) -> Result<EstimateReport> {
    let r = exact_expected_cycles_with_limit(alpha, beta, limit)?;
    Ok(finish(EstimateReport {
        alpha: alpha.clone(),
        beta: beta.clone(),
        n: alpha.n(),
        method: Method::Exact,
        trials: 0,
        seed: None,
        mean: Number::Exact(r.mean),
        stderr: 0.0,
        window: theorem_window(alpha.n())?,
        verdict: Verdict::Pass,
        histogram: r.histogram,
        sample_mean: None,
        steps: None,
    }))
}

pub fn mc_expected_cycles(
    alpha: &Partition,
    beta: &Partition,
    config: &McConfig,
) -> Result<EstimateReport> {
    let r = run_mc(alpha, beta, config)?;
    Ok(finish(EstimateReport {
        alpha: alpha.clone(),
        beta: beta.clone(),
        n: alpha.n(),
        method: config.method,
        trials: config.trials,
        seed: Some(config.seed),
        mean: Number::Approx(r.moments.mean()),
        stderr: r.moments.stderr(),
        window: theorem_window(alpha.n())?,
        verdict: Verdict::Pass,
        histogram: r.histogram,
        sample_mean: Some(r.moments.mean_exact()),
        steps: r.steps,
    }))
}

/// Dispatches on `config.method`; `exact` ignores trials and seed.
pub fn estimate(
    alpha: &Partition,
    beta: &Partition,
    config: &McConfig,
    limit: usize,
) -> Result<EstimateReport> {
    if config.method.is_exact() {
        exact_report(alpha, beta, limit)
    } else {
        mc_expected_cycles(alpha, beta, config)
    }
}

/// Largest family enumerated in full by `sweep`.
pub const SWEEP_FULL_FAMILY: u128 = 12;

/// Partitions of `n` used by `sweep`: all fixed-point-free ones when there
/// are few, else a spread of shapes (one part, two halves, all twos, all
/// threes, and one seeded random partition).
pub fn sweep_family(n: usize, seed: u64) -> Vec<Partition> {
    if n < 2 {
        return Vec::new();
    }
    if Partition::count_fixed_point_free(n) <= SWEEP_FULL_FAMILY {
        return Partition::all_fixed_point_free(n);
    }
    let mut parts: Vec<Vec<usize>> = vec![vec![n]];
    if n >= 4 {
        parts.push(vec![n.div_ceil(2), n / 2]);
    }
    let twos = if n.is_multiple_of(2) {
        vec![2; n / 2]
    } else {
        let mut v = vec![3];
        v.extend(vec![2; (n - 3) / 2]);
        v
    };
    parts.push(twos);
    let threes = match n % 3 {
        0 => vec![3; n / 3],
        1 => {
            let mut v = vec![4];
            v.extend(vec![3; (n - 4) / 3]);
            v
        }
        _ => {
            let mut v = vec![2];
            v.extend(vec![3; (n - 2) / 3]);
            v
        }
    };
    parts.push(threes);
    let mut out: Vec<Partition> = Vec::new();
    for p in parts {
        let p = Partition::new(p).expect("positive parts");
        if !out.contains(&p) {
            out.push(p);
        }
    }
    let mut rng = trial_rng(seed, u64::MAX);
    let random = Partition::random_fixed_point_free(n, &mut rng).expect("n >= 2");
    if !out.contains(&random) {
        out.push(random);
    }
    out
}

/// One report per ordered pair of `sweep_family(n, seed)`. `exact` falls
/// back to `mc-uniform` when `n` is above the enumeration limit.
pub fn sweep(
    n: usize,
    method: Method,
    trials: u64,
    seed: u64,
    limit: usize,
) -> Result<Vec<EstimateReport>> {
    let method = if method.is_exact() && n > limit {
        Method::McUniform
    } else {
        method
    };
    let family = sweep_family(n, seed);
    let config = McConfig::new(method, trials, seed);
    let mut out = Vec::with_capacity(family.len() * family.len());
    for a in &family {
        for b in &family {
            out.push(estimate(a, b, &config, limit)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::rational;

    fn part(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn closed_form_values() {
        assert_eq!(closed_form_nn(2).unwrap(), rational(2, 1));
        assert_eq!(closed_form_nn(3).unwrap(), rational(2, 1));
        assert_eq!(closed_form_nn(4).unwrap(), rational(7, 3));
        assert_eq!(closed_form_nn(1), Err(Error::TooSmall(1)));
    }

    #[test]
    fn windows() {
        let w = theorem_window(1).unwrap();
        assert_eq!(w.to_string(), "(-2, 2]");
        let w = theorem_window(4).unwrap();
        assert_eq!(w.low, Number::Exact(rational(25, 12) - rational(3, 1)));
        assert_eq!(w.high, Number::Exact(rational(37, 12)));
        assert!(w.contains(&Number::Exact(rational(37, 12))));
        assert!(!w.contains(&Number::Exact(rational(25, 12) - rational(3, 1))));
        let s = stanley_window(4).unwrap();
        assert_eq!(s.low, Number::Exact(rational(5, 6)));
        assert_eq!(s.high, Number::Exact(rational(17, 6)));
        assert!(s.contains(&Number::Exact(rational(5, 6))));
        assert!(matches!(theorem_window(100).unwrap().low, Number::Approx(_)));
        assert_eq!(stanley_window(1), Err(Error::TooSmall(1)));
    }

    #[test]
    fn verdicts() {
        let mut r = exact_report(&part("3"), &part("3"), 9).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        r.mean = r.window.high.clone();
        assert_eq!(check_bounds(&r), Verdict::Pass);
        r.mean = r.window.low.clone();
        assert_eq!(check_bounds(&r), Verdict::Violation);

        r.method = Method::McB;
        r.stderr = 0.01;
        r.mean = r.window.high.add_int(1);
        assert_eq!(check_bounds(&r), Verdict::Violation);
        r.mean = Number::Approx(r.window.high.to_f64() + 0.02);
        assert_eq!(check_bounds(&r), Verdict::Consistent);
    }

    #[test]
    fn mc_agrees_with_exact_at_seven() {
        let (a, b) = (part("4,3"), part("3,2,2"));
        let exact = exact_expected_cycles(&a, &b).unwrap().mean;
        let exact = crate::perm::rational_to_f64(&exact);
        for method in [Method::McA, Method::McB, Method::McUniform] {
            let r = mc_expected_cycles(&a, &b, &McConfig::new(method, 20_000, 1)).unwrap();
            assert!(
                (r.mean.to_f64() - exact).abs() < 3.0 * r.stderr,
                "{method}: {} vs {exact} (se {})",
                r.mean,
                r.stderr
            );
            assert_eq!(r.verdict, Verdict::Consistent);
        }
    }

    #[test]
    fn sweep_sizes() {
        assert_eq!(sweep(4, Method::Exact, 0, 0, 9).unwrap().len(), 4);
        assert_eq!(sweep(6, Method::Exact, 0, 0, 9).unwrap().len(), 16);
        assert!(sweep(1, Method::Exact, 0, 0, 9).unwrap().is_empty());
        let big = sweep_family(100, 7);
        assert!(big.len() >= 4 && big.len() <= 5);
        assert!(big.iter().all(|p| p.is_fixed_point_free() && p.n() == 100));
        assert_eq!(sweep_family(100, 7), big);
        let fallback = sweep(12, Method::Exact, 50, 0, 9).unwrap();
        assert!(fallback.iter().all(|r| r.method == Method::McUniform));
    }
}
