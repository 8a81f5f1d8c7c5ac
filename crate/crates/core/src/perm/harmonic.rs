use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Harmonic numbers up to this index are returned as exact rationals.
pub const RATIONAL_THRESHOLD: usize = 64;

const ASYMPTOTIC_FROM: usize = 10_000;
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// A real quantity that is either an exact rational or a float.
#[derive(Debug, Clone, PartialEq)]
pub enum Number {
    Exact(Rational),
    Approx(f64),
}

impl Number {
    pub fn to_f64(&self) -> f64 {
        match self {
            Number::Exact(r) => rational_to_f64(r),
            Number::Approx(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Number::Exact(r) => Some(r),
            Number::Approx(_) => None,
        }
    }

    /// Exact when both sides are exact, float otherwise.
    pub fn compare(&self, other: &Number) -> Ordering {
        match (self, other) {
            (Number::Exact(a), Number::Exact(b)) => a.cmp(b),
            _ => self
                .to_f64()
                .partial_cmp(&other.to_f64())
                .expect("finite values"),
        }
    }

    pub fn add_int(&self, k: i64) -> Number {
        match self {
            Number::Exact(r) => Number::Exact(r + Rational::from_integer(BigInt::from(k))),
            Number::Approx(x) => Number::Approx(x + k as f64),
        }
    }

    pub fn add(&self, other: &Number) -> Number {
        match (self, other) {
            (Number::Exact(a), Number::Exact(b)) => Number::Exact(a + b),
            _ => Number::Approx(self.to_f64() + other.to_f64()),
        }
    }

    pub fn sub(&self, other: &Number) -> Number {
        match (self, other) {
            (Number::Exact(a), Number::Exact(b)) => Number::Exact(a - b),
            _ => Number::Approx(self.to_f64() - other.to_f64()),
        }
    }
}

/// Exact values print as `p/q` (or `p` when integral), floats in shortest
/// round-trip form.
impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Number::Exact(r) => write!(f, "{r}"),
            Number::Approx(x) => write!(f, "{x}"),
        }
    }
}

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Nearest-ish float of a big rational. Scales before dividing so that huge
/// numerators and denominators do not overflow to infinity.
pub fn rational_to_f64(r: &Rational) -> f64 {
    if let Some(x) = r.to_f64() {
        if x.is_finite() {
            return x;
        }
    }
    let shift = r.numer().bits().max(r.denom().bits()) as i64 - 60;
    let (num, den) = if shift > 0 {
        (r.numer() >> shift as usize, r.denom() >> shift as usize)
    } else {
        (r.numer().clone(), r.denom().clone())
    };
    num.to_f64().unwrap_or(0.0) / den.to_f64().unwrap_or(1.0)
}

/// `H_n`, exact for `n <= RATIONAL_THRESHOLD` and a float above it.
///
/// Float values have relative error below 1e-12: compensated summation
/// up to 10^4 terms, the asymptotic expansion beyond.
pub fn harmonic(n: usize) -> Result<Number> {
    if n == 0 {
        return Err(Error::HarmonicZero);
    }
    Ok(if n <= RATIONAL_THRESHOLD {
        Number::Exact(harmonic_exact(n))
    } else {
        Number::Approx(harmonic_f64(n))
    })
}

/// `H_n` as an exact rational regardless of size; `H_0 = 0`.
pub fn harmonic_exact(n: usize) -> Rational {
    let mut acc = Rational::zero();
    for i in 1..=n {
        acc += Rational::new(BigInt::one(), BigInt::from(i));
    }
    acc
}

pub fn harmonic_f64(n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    if n < ASYMPTOTIC_FROM {
        // Neumaier summation, smallest terms first
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        for i in (1..=n).rev() {
            let term = 1.0 / i as f64;
            let t = sum + term;
            if sum.abs() >= term.abs() {
                comp += (sum - t) + term;
            } else {
                comp += (term - t) + sum;
            }
            sum = t;
        }
        sum + comp
    } else {
        let x = n as f64;
        let x2 = x * x;
        x.ln() + EULER_GAMMA + 1.0 / (2.0 * x) - 1.0 / (12.0 * x2) + 1.0 / (120.0 * x2 * x2)
            - 1.0 / (252.0 * x2 * x2 * x2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(harmonic(1).unwrap(), Number::Exact(rational(1, 1)));
        assert_eq!(harmonic(2).unwrap(), Number::Exact(rational(3, 2)));
        assert_eq!(harmonic(4).unwrap(), Number::Exact(rational(25, 12)));
        assert_eq!(harmonic(0), Err(Error::HarmonicZero));
        assert_eq!(harmonic(4).unwrap().to_string(), "25/12");
    }

    #[test]
    fn consecutive_differences_are_reciprocals() {
        for n in 2..=RATIONAL_THRESHOLD {
            let diff = harmonic_exact(n) - harmonic_exact(n - 1);
            assert_eq!(diff, rational(1, n as i64));
        }
    }

    #[test]
    fn threshold_switches_representation() {
        assert!(matches!(harmonic(RATIONAL_THRESHOLD).unwrap(), Number::Exact(_)));
        assert!(matches!(harmonic(RATIONAL_THRESHOLD + 1).unwrap(), Number::Approx(_)));
    }

    #[test]
    fn float_accuracy_against_exact() {
        for n in [65, 100, 999, 1000, 2500] {
            let exact = rational_to_f64(&harmonic_exact(n));
            let approx = harmonic_f64(n);
            let rel = ((approx - exact) / exact).abs();
            assert!(rel < 1e-12, "n = {n}: rel err {rel}");
        }
    }

    #[test]
    fn asymptotic_branch_matches_summation() {
        fn compensated(n: usize) -> f64 {
            let (mut sum, mut comp) = (0.0f64, 0.0f64);
            for i in (1..=n).rev() {
                let y = 1.0 / i as f64 - comp;
                let t = sum + y;
                comp = (t - sum) - y;
                sum = t;
            }
            sum
        }
        for n in [10_000, 10_001, 54_321, 1_000_000] {
            let rel = ((harmonic_f64(n) - compensated(n)) / compensated(n)).abs();
            assert!(rel < 1e-12, "n = {n}: rel err {rel}");
        }
    }

    #[test]
    fn number_comparisons() {
        let a = Number::Exact(rational(1, 3));
        let b = Number::Exact(rational(2, 6));
        assert_eq!(a.compare(&b), Ordering::Equal);
        assert_eq!(a.compare(&Number::Approx(0.5)), Ordering::Less);
        assert_eq!(a.add_int(1), Number::Exact(rational(4, 3)));
        assert_eq!(Number::Exact(rational(4, 2)).to_string(), "2");
    }

    #[test]
    fn huge_rationals_convert() {
        let h = harmonic_exact(3000);
        let x = rational_to_f64(&h);
        assert!((x - harmonic_f64(3000)).abs() < 1e-10);
    }
}
