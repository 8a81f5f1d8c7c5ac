use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{Partition, Permutation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    S,
    T,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::S => Side::T,
            Side::T => Side::S,
        }
    }
}

/// A half-edge `s_i` or `t_j`. Ordered with every `s` dart before every
/// `t` dart, then by index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Dart {
    side: Side,
    index: usize,
}

impl Dart {
    pub fn new(side: Side, index: usize) -> Dart {
        assert!(index >= 1, "dart indices start at 1");
        Dart { side, index }
    }

    pub fn s(index: usize) -> Dart {
        Dart::new(Side::S, index)
    }

    pub fn t(index: usize) -> Dart {
        Dart::new(Side::T, index)
    }

    pub fn side(self) -> Side {
        self.side
    }

    pub fn index(self) -> usize {
        self.index
    }

    pub fn is_s(self) -> bool {
        self.side == Side::S
    }

    pub fn is_t(self) -> bool {
        self.side == Side::T
    }

    // s_i -> i-1, t_j -> n+j-1; monotone in the dart order
    pub(crate) fn code(self, n: usize) -> usize {
        match self.side {
            Side::S => self.index - 1,
            Side::T => n + self.index - 1,
        }
    }

    pub(crate) fn from_code(code: usize, n: usize) -> Dart {
        if code < n {
            Dart::s(code + 1)
        } else {
            Dart::t(code - n + 1)
        }
    }

    pub(crate) fn check(self, n: usize) -> Result<()> {
        if self.index > n {
            Err(Error::DartOutOfRange { dart: self, n })
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for Dart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.side {
            Side::S => write!(f, "s{}", self.index),
            Side::T => write!(f, "t{}", self.index),
        }
    }
}

impl FromStr for Dart {
    type Err = Error;

    fn from_str(s: &str) -> Result<Dart> {
        let bad = || Error::InvalidArgument(format!("not a dart: {s:?}"));
        let s = s.trim();
        let side = match s.chars().next() {
            Some('s') => Side::S,
            Some('t') => Side::T,
            _ => return Err(bad()),
        };
        let index: usize = s[1..].parse().map_err(|_| bad())?;
        if index == 0 {
            return Err(bad());
        }
        Ok(Dart { side, index })
    }
}

impl TryFrom<String> for Dart {
    type Error = Error;

    fn try_from(s: String) -> Result<Dart> {
        s.parse()
    }
}

impl From<Dart> for String {
    fn from(d: Dart) -> String {
        d.to_string()
    }
}

/// A permutation of the `2n` darts of a map of degree `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DartPermutation {
    n: usize,
    perm: Permutation,
}

impl DartPermutation {
    pub(crate) fn from_codes(n: usize, images: Vec<usize>) -> Self {
        debug_assert_eq!(images.len(), 2 * n);
        DartPermutation {
            n,
            perm: Permutation::from_zero_based(images),
        }
    }

    pub fn identity(n: usize) -> Self {
        DartPermutation::from_codes(n, (0..2 * n).collect())
    }

    /// Builds from disjoint dart cycles; unlisted darts are fixed.
    pub fn from_cycles(n: usize, cycles: &[Vec<Dart>]) -> Result<Self> {
        let mut lifted = Vec::with_capacity(cycles.len());
        for c in cycles {
            let mut out = Vec::with_capacity(c.len());
            for &d in c {
                d.check(n)?;
                out.push(d.code(n) + 1);
            }
            lifted.push(out);
        }
        Ok(DartPermutation {
            n,
            perm: Permutation::from_cycles(2 * n, &lifted)?,
        })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn apply(&self, d: Dart) -> Dart {
        Dart::from_code(self.perm.zero_based()[d.code(self.n)], self.n)
    }

    pub(crate) fn codes(&self) -> &[usize] {
        self.perm.zero_based()
    }

    /// Left to right: `self` first, then `other`.
    pub fn compose(&self, other: &DartPermutation) -> Result<DartPermutation> {
        Ok(DartPermutation {
            n: self.n,
            perm: self.perm.compose(&other.perm)?,
        })
    }

    pub fn inverse(&self) -> DartPermutation {
        DartPermutation {
            n: self.n,
            perm: self.perm.inverse(),
        }
    }

    /// All cycles, fixed points included, each starting at its smallest dart.
    pub fn cycles(&self) -> Vec<Vec<Dart>> {
        self.perm
            .cycles()
            .into_iter()
            .map(|c| c.into_iter().map(|x| Dart::from_code(x - 1, self.n)).collect())
            .collect()
    }

    pub fn fixed_points(&self) -> Vec<Dart> {
        let codes = self.codes();
        (0..2 * self.n)
            .filter(|&c| codes[c] == c)
            .map(|c| Dart::from_code(c, self.n))
            .collect()
    }

    pub fn cycle_count(&self) -> usize {
        self.perm.cycle_count()
    }

    pub fn cycle_type(&self) -> Partition {
        self.perm.cycle_type()
    }

    pub fn is_involution(&self) -> bool {
        self.compose(self).map(|p| p.perm.is_identity()).unwrap_or(false)
    }
}

/// Cycle notation over darts with fixed points omitted, e.g. `(s1 t1)(s2 t3)`.
impl fmt::Display for DartPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write_cycle(f, &c)?;
        }
        Ok(())
    }
}

pub(crate) fn write_cycle(f: &mut fmt::Formatter<'_>, cycle: &[Dart]) -> fmt::Result {
    write!(f, "(")?;
    for (i, d) in cycle.iter().enumerate() {
        if i > 0 {
            write!(f, " ")?;
        }
        write!(f, "{d}")?;
    }
    write!(f, ")")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_puts_s_before_t() {
        assert!(Dart::s(7) < Dart::t(1));
        assert!(Dart::t(1) < Dart::t(2));
        for n in 1..5 {
            let mut darts: Vec<Dart> = (0..2 * n).map(|c| Dart::from_code(c, n)).collect();
            let sorted = {
                let mut d = darts.clone();
                d.sort();
                d
            };
            assert_eq!(darts, sorted);
            darts.iter_mut().enumerate().for_each(|(c, d)| assert_eq!(d.code(n), c));
        }
    }

    #[test]
    fn parse_and_print() {
        assert_eq!("s12".parse::<Dart>().unwrap(), Dart::s(12));
        assert_eq!(Dart::t(3).to_string(), "t3");
        assert!("x1".parse::<Dart>().is_err());
        assert!("s0".parse::<Dart>().is_err());
        assert!("t".parse::<Dart>().is_err());
    }

    #[test]
    fn dart_permutation_display_omits_fixed_points() {
        let p = DartPermutation::from_cycles(2, &[vec![Dart::s(1), Dart::t(1)]]).unwrap();
        assert_eq!(p.to_string(), "(s1 t1)");
        assert_eq!(p.fixed_points(), vec![Dart::s(2), Dart::t(2)]);
        assert!(p.is_involution());
        assert_eq!(DartPermutation::identity(2).to_string(), "()");
        assert!(DartPermutation::from_cycles(2, &[vec![Dart::s(3)]]).is_err());
    }
}
