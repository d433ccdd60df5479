//! Permutations of poset points and their cycle structure.

use crate::error::{Error, Result};

/// A permutation of `{0, .., n-1}`, stored as its image vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Permutation {
        Permutation { image: (0..n).collect() }
    }

    /// Validates that `image` is a bijection.
    pub fn from_image(image: Vec<usize>) -> Result<Permutation> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &y in &image {
            if y >= n || seen[y] {
                return Err(Error::NotABijection);
            }
            seen[y] = true;
        }
        Ok(Permutation { image })
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(x, &y)| x == y)
    }

    pub fn apply(&self, x: usize) -> usize {
        self.image[x]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    /// Function composition: `self.compose(other)` applies `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len());
        Permutation { image: other.image.iter().map(|&y| self.image[y]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (x, &y) in self.image.iter().enumerate() {
            inv[y] = x;
        }
        Permutation { image: inv }
    }

    /// `self` raised to the power `m`; negative exponents use the inverse.
    pub fn power(&self, m: i64) -> Permutation {
        let mut base = if m < 0 { self.inverse() } else { self.clone() };
        let mut e = m.unsigned_abs();
        let mut acc = Permutation::identity(self.len());
        while e > 0 {
            if e & 1 == 1 {
                acc = base.compose(&acc);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        acc
    }

    /// The cycles of length at least 2, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.image[start] == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x);
                x = self.image[x];
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_type(&self) -> CycleType {
        let cycles = self.cycles();
        let lengths: Vec<u64> = cycles.iter().map(|c| c.len() as u64).collect();
        let moved: usize = cycles.iter().map(|c| c.len()).sum();
        CycleType::new(lengths, self.len() - moved)
    }

    /// Multiplicative order: the lcm of the cycle lengths.
    pub fn order(&self) -> u128 {
        self.cycle_type().order()
    }
}

impl std::fmt::Display for Permutation {
    /// Cycle notation, e.g. `(0 1)(2 3 4)`; the identity prints as `()`.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cycle in cycles {
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

impl std::fmt::Debug for Permutation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        std::fmt::Display::fmt(self, f)
    }
}

/// Multiset of nontrivial cycle lengths plus the number of fixed points.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CycleType {
    /// Sorted in decreasing order; every entry is at least 2.
    lengths: Vec<u64>,
    fixed: usize,
}

impl CycleType {
    pub fn new(mut lengths: Vec<u64>, fixed: usize) -> CycleType {
        assert!(lengths.iter().all(|&l| l >= 2), "cycle lengths must be at least 2");
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        CycleType { lengths, fixed }
    }

    /// Parses a comma-separated length list such as "6,6,4,4".
    pub fn parse(s: &str) -> Result<CycleType> {
        let mut lengths = Vec::new();
        for part in s.split(',') {
            let l: u64 = part
                .trim()
                .parse()
                .map_err(|_| Error::Format(format!("bad cycle length {part:?}")))?;
            if l < 2 {
                return Err(Error::CycleTooShort(l));
            }
            lengths.push(l);
        }
        Ok(CycleType::new(lengths, 0))
    }

    pub fn lengths(&self) -> &[u64] {
        &self.lengths
    }

    pub fn fixed_points(&self) -> usize {
        self.fixed
    }

    pub fn moved_points(&self) -> u64 {
        self.lengths.iter().sum()
    }

    /// The lcm of the lengths; 1 for the identity type.
    pub fn order(&self) -> u128 {
        self.lengths.iter().fold(1u128, |acc, &l| num::integer::lcm(acc, l as u128))
    }
}

impl std::fmt::Display for CycleType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (i, l) in self.lengths.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "}}")
    }
}
