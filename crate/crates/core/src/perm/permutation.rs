use std::fmt;

use crate::error::{Error, Result};
use crate::perm::Partition;

/// A bijection on `{1, ..., n}`.
///
/// Every public method speaks 1-based points. Products are read left to
/// right: `p.compose(&q)` applies `p` first, then `q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    // images[i] is the 0-based image of the 0-based point i
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    /// Builds from the 1-based image list `[p(1), p(2), ..., p(n)]`.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        let mut zero_based = Vec::with_capacity(n);
        for x in images {
            if x == 0 || x > n || seen[x - 1] {
                return Err(Error::NotABijection(n));
            }
            seen[x - 1] = true;
            zero_based.push(x - 1);
        }
        Ok(Permutation { images: zero_based })
    }

    /// Builds from disjoint cycles of 1-based points; unlisted points are fixed.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut seen = vec![false; n];
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                if x == 0 || x > n || seen[x - 1] {
                    return Err(Error::NotABijection(n));
                }
                seen[x - 1] = true;
                images[x - 1] = cycle[(i + 1) % cycle.len()] - 1;
            }
        }
        Ok(Permutation { images })
    }

    /// Parses cycle notation such as `(1)(2 3 5)(4 7 6)`.
    pub fn parse_cycles(n: usize, s: &str) -> Result<Self> {
        let mut cycles = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::InvalidArgument(format!("expected '(' in {s:?}")))?;
            let close = body
                .find(')')
                .ok_or_else(|| Error::InvalidArgument(format!("unclosed cycle in {s:?}")))?;
            let cycle = body[..close]
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::InvalidArgument(format!("bad point {t:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            cycles.push(cycle);
            rest = body[close + 1..].trim_start();
        }
        Permutation::from_cycles(n, &cycles)
    }

    pub(crate) fn from_zero_based(images: Vec<usize>) -> Self {
        debug_assert!({
            let mut seen = vec![false; images.len()];
            images.iter().all(|&x| x < seen.len() && !std::mem::replace(&mut seen[x], true))
        });
        Permutation { images }
    }

    pub(crate) fn zero_based(&self) -> &[usize] {
        &self.images
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of the 1-based point `x`. Panics if `x` is outside `1..=n`.
    pub fn image(&self, x: usize) -> usize {
        self.images[x - 1] + 1
    }

    pub fn images(&self) -> impl Iterator<Item = usize> + '_ {
        self.images.iter().map(|&x| x + 1)
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// Left-to-right product: `(p.compose(q))(x) = q(p(x))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(Permutation {
            images: self.images.iter().map(|&x| other.images[x]).collect(),
        })
    }

    /// Left-to-right product of all factors; `None` for an empty list.
    pub fn compose_all<'a>(factors: impl IntoIterator<Item = &'a Permutation>) -> Result<Option<Permutation>> {
        let mut acc: Option<Permutation> = None;
        for f in factors {
            acc = Some(match acc {
                None => f.clone(),
                Some(a) => a.compose(f)?,
            });
        }
        Ok(acc)
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { images: inv }
    }

    /// All cycles including fixed points, each starting at its smallest
    /// point, ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.images.len()];
        let mut out = Vec::new();
        for start in 0..self.images.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x + 1);
                x = self.images[x];
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_count(&self) -> usize {
        count_cycles(&self.images, &mut vec![false; self.images.len()])
    }

    /// Cycle lengths, fixed points included. Panics on the empty permutation
    /// since there is no partition of 0.
    pub fn cycle_type(&self) -> Partition {
        Partition::new(self.cycles().iter().map(Vec::len).collect::<Vec<_>>())
            .expect("nonempty permutation")
    }
}

/// Cycle count of a 0-based image array, reusing `seen` as scratch.
pub(crate) fn count_cycles(images: &[usize], seen: &mut [bool]) -> usize {
    seen.iter_mut().for_each(|s| *s = false);
    let mut count = 0;
    for start in 0..images.len() {
        if seen[start] {
            continue;
        }
        count += 1;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = images[x];
        }
    }
    count
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.images.is_empty() {
            return write!(f, "()");
        }
        for cycle in self.cycles() {
            write!(f, "(")?;
            for (i, x) in cycle.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}
