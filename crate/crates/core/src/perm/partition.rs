use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// An integer partition, parts stored nonincreasing.
///
/// `prefix(j)` is the sum of the first `j` parts, so part `j` (1-based)
/// covers the indices `prefix(j-1)+1 ..= prefix(j)`. These blocks are the
/// cycles of the canonical permutation and the vertices of a map.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
    prefix: Vec<usize>,
}

impl Partition {
    pub fn new(parts: impl Into<Vec<usize>>) -> Result<Self> {
        let mut parts = parts.into();
        if parts.is_empty() {
            return Err(Error::EmptyPartition);
        }
        if parts.contains(&0) {
            return Err(Error::NonPositivePart(0));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        let mut prefix = Vec::with_capacity(parts.len() + 1);
        prefix.push(0);
        let mut acc = 0;
        for &p in &parts {
            acc += p;
            prefix.push(acc);
        }
        Ok(Partition { parts, prefix })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn n(&self) -> usize {
        *self.prefix.last().unwrap()
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn prefix(&self, j: usize) -> Result<usize> {
        self.prefix.get(j).copied().ok_or(Error::PrefixOutOfRange {
            index: j,
            len: self.parts.len(),
        })
    }

    pub fn prefix_sums(&self) -> &[usize] {
        &self.prefix
    }

    pub fn is_fixed_point_free(&self) -> bool {
        self.parts.iter().all(|&p| p >= 2)
    }

    /// `(1 .. prefix(1))(prefix(1)+1 .. prefix(2))...`
    pub fn canonical_permutation(&self) -> Permutation {
        let mut images = vec![0; self.n()];
        for w in self.prefix.windows(2) {
            let (start, end) = (w[0], w[1]);
            for (i, img) in images.iter_mut().enumerate().take(end).skip(start) {
                *img = if i + 1 == end { start } else { i + 1 };
            }
        }
        Permutation::from_zero_based(images)
    }

    /// The 1-based block `(j, first, last)` containing index `i` (1-based),
    /// with `first = prefix(j-1) + 1` and `last = prefix(j)`.
    pub fn block_of(&self, i: usize) -> Option<(usize, usize, usize)> {
        if i == 0 || i > self.n() {
            return None;
        }
        // first prefix >= i
        let j = self.prefix.partition_point(|&p| p < i);
        Some((j, self.prefix[j - 1] + 1, self.prefix[j]))
    }

    /// True when `k = prefix(j) + 1` for some `0 <= j < len()`, i.e. index `k`
    /// is the first one of its block.
    pub fn is_block_start(&self, k: usize) -> bool {
        self.prefix[..self.parts.len()].binary_search(&(k.wrapping_sub(1))).is_ok()
    }

    /// The partition of `self.n() + other.n()` whose parts are those of both.
    pub fn union(&self, other: &Partition) -> Partition {
        let mut parts = self.parts.clone();
        parts.extend_from_slice(&other.parts);
        Partition::new(parts).expect("union of valid partitions")
    }

    /// All partitions of `n` in reverse lexicographic order, `(n)` first.
    pub fn all(n: usize) -> Vec<Partition> {
        fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition::new(cur.clone()).unwrap());
                return;
            }
            for p in (1..=rest.min(max)).rev() {
                cur.push(p);
                rec(rest - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if n > 0 {
            rec(n, n, &mut Vec::new(), &mut out);
        }
        out
    }

    /// Partitions of `n` with every part at least 2, `(n)` first.
    pub fn all_fixed_point_free(n: usize) -> Vec<Partition> {
        fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition::new(cur.clone()).unwrap());
                return;
            }
            for p in (2..=rest.min(max)).rev() {
                if rest - p == 1 {
                    continue;
                }
                cur.push(p);
                rec(rest - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if n >= 2 {
            rec(n, n, &mut Vec::new(), &mut out);
        }
        out
    }

    /// Number of partitions of `n` with no part equal to 1.
    pub fn count_fixed_point_free(n: usize) -> u128 {
        // p(n) - p(n-1) via the standard coin-change recurrence
        let mut p = vec![0u128; n + 1];
        p[0] = 1;
        for part in 1..=n {
            for total in part..=n {
                p[total] += p[total - part];
            }
        }
        match n {
            0 => 1,
            _ => p[n] - p[n - 1],
        }
    }

    /// A random fixed-point-free partition of `n >= 2`, built by cutting
    /// random parts of size at least 2 off the remainder.
    ///
    /// Not uniform over partitions; used to pick representatives when the
    /// full family is too large to enumerate.
    pub fn random_fixed_point_free<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Partition> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!(
                "no fixed-point-free partition of {n}"
            )));
        }
        let mut parts = Vec::new();
        let mut rest = n;
        while rest > 0 {
            if rest <= 3 {
                parts.push(rest);
                break;
            }
            let mut p = rng.gen_range(2..=rest);
            if rest - p == 1 {
                p -= 1;
            }
            parts.push(p);
            rest -= p;
        }
        Partition::new(parts)
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;

    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// Parses `4,3`, `3, 4` or `(4,3)`; parts may come in any order.
impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let s = s
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .unwrap_or(s);
        if s.trim().is_empty() {
            return Err(Error::EmptyPartition);
        }
        let mut parts = Vec::new();
        for tok in s.split(',') {
            let tok = tok.trim();
            let v: i64 = tok
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("not an integer part: {tok:?}")))?;
            if v <= 0 {
                return Err(Error::NonPositivePart(v));
            }
            parts.push(v as usize);
        }
        Partition::new(parts)
    }
}
