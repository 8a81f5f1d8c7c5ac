use std::fmt;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::map::dart::{write_cycle, Dart, DartPermutation, Side};
use crate::perm::{Partition, Permutation};

/// An injection from a subset `X` of `{1..n}` into `{1..n}`; `i -> j` means
/// the edge `s_i t_j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartialPairing {
    forward: Vec<Option<usize>>,
    backward: Vec<Option<usize>>,
    len: usize,
}

impl PartialPairing {
    pub fn new(n: usize) -> Self {
        PartialPairing {
            forward: vec![None; n],
            backward: vec![None; n],
            len: 0,
        }
    }

    pub fn from_permutation(pi: &Permutation) -> Self {
        let mut p = PartialPairing::new(pi.degree());
        for (i, j) in pi.images().enumerate() {
            p.insert(i + 1, j).expect("permutation is injective");
        }
        p
    }

    /// Builds from 1-based `(i, j)` pairs.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut p = PartialPairing::new(n);
        for &(i, j) in pairs {
            p.insert(i, j)?;
        }
        Ok(p)
    }

    pub fn degree(&self) -> usize {
        self.forward.len()
    }

    /// Records `s_i -- t_j` (1-based).
    pub fn insert(&mut self, i: usize, j: usize) -> Result<()> {
        let n = self.degree();
        Dart::s(i).check(n)?;
        Dart::t(j).check(n)?;
        if self.forward[i - 1].is_some() {
            return Err(Error::AlreadyPaired(Dart::s(i)));
        }
        if self.backward[j - 1].is_some() {
            return Err(Error::AlreadyPaired(Dart::t(j)));
        }
        self.forward[i - 1] = Some(j - 1);
        self.backward[j - 1] = Some(i - 1);
        self.len += 1;
        Ok(())
    }

    pub fn image(&self, i: usize) -> Option<usize> {
        self.forward.get(i.wrapping_sub(1)).copied().flatten().map(|j| j + 1)
    }

    pub fn preimage(&self, j: usize) -> Option<usize> {
        self.backward.get(j.wrapping_sub(1)).copied().flatten().map(|i| i + 1)
    }

    /// Size of the domain `X`.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_complete(&self) -> bool {
        self.len == self.degree()
    }

    /// `(i, j)` pairs in increasing `i`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.forward
            .iter()
            .enumerate()
            .filter_map(|(i, j)| j.map(|j| (i + 1, j + 1)))
    }

    pub fn to_permutation(&self) -> Option<Permutation> {
        if !self.is_complete() {
            return None;
        }
        Some(Permutation::from_zero_based(
            self.forward.iter().map(|j| j.unwrap()).collect(),
        ))
    }

    pub fn partner(&self, d: Dart) -> Option<Dart> {
        match d.side() {
            Side::S => self.image(d.index()).map(Dart::t),
            Side::T => self.preimage(d.index()).map(Dart::s),
        }
    }

    pub fn is_paired(&self, d: Dart) -> bool {
        self.partner(d).is_some()
    }
}

/// `R`: `s_i -> s_{sigma0(i)}`, `t_j -> t_{omega0(j)}`.
pub fn rotation_scheme(alpha: &Partition, beta: &Partition) -> Result<DartPermutation> {
    if alpha.n() != beta.n() {
        return Err(Error::SizeMismatch {
            alpha: alpha.n(),
            beta: beta.n(),
        });
    }
    let n = alpha.n();
    let sigma0 = alpha.canonical_permutation();
    let omega0 = beta.canonical_permutation();
    let mut images = Vec::with_capacity(2 * n);
    images.extend_from_slice(sigma0.zero_based());
    images.extend(omega0.zero_based().iter().map(|&j| n + j));
    Ok(DartPermutation::from_codes(n, images))
}

/// `E(pi)`: the product of the transpositions `(s_i t_pi(i))`; unpaired darts are fixed.
pub fn edge_involution(pairing: &PartialPairing) -> DartPermutation {
    let n = pairing.degree();
    let mut images: Vec<usize> = (0..2 * n).collect();
    for (i, j) in pairing.pairs() {
        images[i - 1] = n + j - 1;
        images[n + j - 1] = i - 1;
    }
    DartPermutation::from_codes(n, images)
}

/// A partial map `(D, R, E(pi))`. With a complete pairing it is the map `m_pi`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartialMap {
    alpha: Partition,
    beta: Partition,
    pairing: PartialPairing,
}

impl PartialMap {
    /// The map with no edges.
    pub fn new(alpha: Partition, beta: Partition) -> Result<Self> {
        let n = alpha.n();
        PartialMap::with_pairing(alpha, beta, PartialPairing::new(n))
    }

    pub fn with_pairing(alpha: Partition, beta: Partition, pairing: PartialPairing) -> Result<Self> {
        if alpha.n() != beta.n() {
            return Err(Error::SizeMismatch {
                alpha: alpha.n(),
                beta: beta.n(),
            });
        }
        if pairing.degree() != alpha.n() {
            return Err(Error::DegreeMismatch {
                left: alpha.n(),
                right: pairing.degree(),
            });
        }
        Ok(PartialMap {
            alpha,
            beta,
            pairing,
        })
    }

    /// The complete map `m_pi`.
    pub fn from_permutation(alpha: Partition, beta: Partition, pi: &Permutation) -> Result<Self> {
        if pi.degree() != alpha.n() {
            return Err(Error::DegreeMismatch {
                left: alpha.n(),
                right: pi.degree(),
            });
        }
        PartialMap::with_pairing(alpha, beta, PartialPairing::from_permutation(pi))
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

    pub fn is_complete(&self) -> bool {
        self.pairing.is_complete()
    }

    pub fn is_paired(&self, d: Dart) -> bool {
        self.pairing.is_paired(d)
    }

    /// Adds the edge between two unpaired darts on opposite sides.
    pub fn pair(&mut self, a: Dart, b: Dart) -> Result<()> {
        a.check(self.n())?;
        b.check(self.n())?;
        let (s, t) = match (a.side(), b.side()) {
            (Side::S, Side::T) => (a, b),
            (Side::T, Side::S) => (b, a),
            _ => return Err(Error::SameSidePairing(a, b)),
        };
        self.pairing.insert(s.index(), t.index())
    }

    pub fn unpaired_darts(&self) -> Vec<Dart> {
        let n = self.n();
        (0..2 * n)
            .map(|c| Dart::from_code(c, n))
            .filter(|&d| !self.is_paired(d))
            .collect()
    }

    pub fn rotation_scheme(&self) -> DartPermutation {
        rotation_scheme(&self.alpha, &self.beta).expect("sizes checked at construction")
    }

    pub fn edge_involution(&self) -> DartPermutation {
        edge_involution(&self.pairing)
    }

    /// `R . E`: apply `R`, then `E`. Unpaired darts stay in the traversal.
    pub fn face_permutation(&self) -> DartPermutation {
        self.rotation_scheme()
            .compose(&self.edge_involution())
            .expect("same degree")
    }

    /// Cycles of `R . E` made of paired darts only.
    pub fn completed_face_cycles(&self) -> Vec<Vec<Dart>> {
        self.face_permutation()
            .cycles()
            .into_iter()
            .filter(|c| c.iter().all(|&d| self.is_paired(d)))
            .collect()
    }

    pub fn completed_faces(&self) -> usize {
        let n = self.n();
        let faces = self.face_permutation();
        let codes = faces.codes();
        let mut seen = vec![false; 2 * n];
        let mut count = 0;
        for start in 0..2 * n {
            if seen[start] {
                continue;
            }
            let mut all_paired = true;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                all_paired &= self.is_paired(Dart::from_code(x, n));
                x = codes[x];
            }
            count += all_paired as usize;
        }
        count
    }

    /// `u_m`, found by iterating `R . E` from each unpaired dart until the
    /// next unpaired dart.
    pub fn unpaired_permutation(&self) -> UnpairedPermutation {
        let n = self.n();
        let faces = self.face_permutation();
        let codes = faces.codes();
        let mut next = vec![None; 2 * n];
        for c in 0..2 * n {
            if self.is_paired(Dart::from_code(c, n)) {
                continue;
            }
            let mut x = codes[c];
            while self.is_paired(Dart::from_code(x, n)) {
                x = codes[x];
            }
            next[c] = Some(x);
        }
        UnpairedPermutation::from_next(n, next)
    }

    /// Fixed points of `u_m`, in dart order.
    pub fn bad_darts(&self) -> Vec<Dart> {
        self.unpaired_permutation().fixed_points()
    }

    /// Cycles of `u_m` with darts on both sides.
    pub fn mixed_partial_faces(&self) -> Vec<Vec<Dart>> {
        self.unpaired_permutation().mixed_cycles()
    }

    /// True when no partial face is mixed (vacuously for complete maps).
    pub fn is_bad_map(&self) -> bool {
        self.mixed_partial_faces().is_empty()
    }

    /// `sigma0 pi omega0 pi^-1`, read off `R . E` by skipping `t` darts.
    pub fn project_to_permutation(&self) -> Result<Permutation> {
        if !self.is_complete() {
            return Err(Error::IncompleteMap {
                paired: self.pairing.len(),
                n: self.n(),
            });
        }
        let n = self.n();
        let faces = self.face_permutation();
        let codes = faces.codes();
        let images = (0..n)
            .map(|i| {
                let mut x = codes[i];
                while x >= n {
                    x = codes[x];
                }
                x
            })
            .collect();
        Ok(Permutation::from_zero_based(images))
    }

    /// Graphviz rendering: one node per vertex (cycle of `R`) listing its
    /// darts in rotation order, one edge per pair; unpaired darts are
    /// listed in brackets on their vertex.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph partial_map {\n");
        let mut vertex_of = std::collections::HashMap::new();
        for (side, part, prefix) in [
            ("S", &self.alpha, self.alpha.prefix_sums()),
            ("T", &self.beta, self.beta.prefix_sums()),
        ] {
            for j in 0..part.len() {
                let name = format!("{side}{}", j + 1);
                let darts: Vec<String> = (prefix[j] + 1..=prefix[j + 1])
                    .map(|i| {
                        let d = if side == "S" { Dart::s(i) } else { Dart::t(i) };
                        vertex_of.insert(d, name.clone());
                        if self.is_paired(d) {
                            d.to_string()
                        } else {
                            format!("[{d}]")
                        }
                    })
                    .collect();
                let _ = writeln!(out, "  {name} [label=\"{}\"];", darts.join(" "));
            }
        }
        for (i, j) in self.pairing.pairs() {
            let (s, t) = (Dart::s(i), Dart::t(j));
            let _ = writeln!(
                out,
                "  {} -- {} [label=\"{s}-{t}\"];",
                vertex_of[&s], vertex_of[&t]
            );
        }
        out.push_str("}\n");
        out
    }
}

/// The permutation induced by `R . E` on the unpaired darts. Its cycles
/// are the partial faces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnpairedPermutation {
    n: usize,
    next: Vec<Option<usize>>,
    prev: Vec<Option<usize>>,
}

impl UnpairedPermutation {
    pub(crate) fn from_next(n: usize, next: Vec<Option<usize>>) -> Self {
        let mut prev = vec![None; 2 * n];
        for (c, x) in next.iter().enumerate() {
            if let Some(x) = x {
                prev[*x] = Some(c);
            }
        }
        UnpairedPermutation { n, next, prev }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    /// `u(d)`, or `None` if `d` is paired.
    pub fn apply(&self, d: Dart) -> Option<Dart> {
        self.next
            .get(d.code(self.n))
            .copied()
            .flatten()
            .map(|c| Dart::from_code(c, self.n))
    }

    pub fn apply_inverse(&self, d: Dart) -> Option<Dart> {
        self.prev
            .get(d.code(self.n))
            .copied()
            .flatten()
            .map(|c| Dart::from_code(c, self.n))
    }

    pub fn darts(&self) -> impl Iterator<Item = Dart> + '_ {
        self.next
            .iter()
            .enumerate()
            .filter(|(_, x)| x.is_some())
            .map(|(c, _)| Dart::from_code(c, self.n))
    }

    /// Number of unpaired darts.
    pub fn len(&self) -> usize {
        self.next.iter().filter(|x| x.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Each cycle starts at its smallest dart; cycles ordered by that dart.
    pub fn cycles(&self) -> Vec<Vec<Dart>> {
        let mut seen = vec![false; 2 * self.n];
        let mut out = Vec::new();
        for start in 0..2 * self.n {
            if seen[start] || self.next[start].is_none() {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(Dart::from_code(x, self.n));
                x = self.next[x].unwrap();
            }
            out.push(cycle);
        }
        out
    }

    pub fn fixed_points(&self) -> Vec<Dart> {
        self.next
            .iter()
            .enumerate()
            .filter(|&(c, x)| *x == Some(c))
            .map(|(c, _)| Dart::from_code(c, self.n))
            .collect()
    }

    pub fn mixed_cycles(&self) -> Vec<Vec<Dart>> {
        self.cycles()
            .into_iter()
            .filter(|c| c.iter().any(|d| d.is_s()) && c.iter().any(|d| d.is_t()))
            .collect()
    }
}

/// All cycles, fixed points included, e.g. `(s5 s6 t6)(t1)`.
impl fmt::Display for UnpairedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write_cycle(f, &c)?;
        }
        Ok(())
    }
}
