//! Finite strict partial orders stored as dense bit matrices.
//!
//! A `Poset` keeps the full transitive relation (`x < y`) as one bitset row
//! per point, together with its transpose and the cover relation derived from
//! it. All construction paths go through transitive closure and a cycle
//! check, so a `Poset` value is always a valid strict order.

use std::fmt;

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Hard capacity bound. Keeps bit rows short and memory use predictable.
pub const MAX_POINTS: usize = 512;

pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

pub(crate) fn get_bit(row: &[u64], i: usize) -> bool {
    row[i >> 6] & (1u64 << (i & 63)) != 0
}

pub(crate) fn set_bit(row: &mut [u64], i: usize) {
    row[i >> 6] |= 1u64 << (i & 63);
}

/// Calls `f` for every set bit index in `row`, in increasing order.
pub(crate) fn for_each_bit(row: &[u64], mut f: impl FnMut(usize)) {
    for (wi, &word) in row.iter().enumerate() {
        let mut w = word;
        while w != 0 {
            f((wi << 6) | w.trailing_zeros() as usize);
            w &= w - 1;
        }
    }
}

fn count_bits(row: &[u64]) -> u32 {
    row.iter().map(|w| w.count_ones()).sum()
}

#[derive(Clone)]
pub struct Poset {
    n: usize,
    words: usize,
    /// Row x holds the set { y : x < y }.
    up: Vec<u64>,
    /// Row x holds the set { y : y < x }.
    down: Vec<u64>,
    /// Row x holds the covers of x from below: { y : x is covered by y }.
    covers_up: Vec<u64>,
    labels: Option<Vec<String>>,
}

impl Poset {
    /// Builds a poset on `n` points from an arbitrary list of `a < b` pairs.
    ///
    /// The relation is closed transitively; a pair `(a, a)` or any directed
    /// cycle is rejected.
    pub fn from_relations(n: usize, relations: &[(usize, usize)]) -> Result<Poset> {
        if n > MAX_POINTS {
            return Err(Error::TooManyPoints { n, max: MAX_POINTS });
        }
        let words = words_for(n);
        let mut up = vec![0u64; n * words];
        for &(a, b) in relations {
            if a >= n {
                return Err(Error::IndexOutOfRange { point: a, n });
            }
            if b >= n {
                return Err(Error::IndexOutOfRange { point: b, n });
            }
            if a == b {
                return Err(Error::Cycle);
            }
            set_bit(&mut up[a * words..(a + 1) * words], b);
        }
        transitive_close(&mut up, n, words);
        for x in 0..n {
            if get_bit(&up[x * words..(x + 1) * words], x) {
                return Err(Error::Cycle);
            }
        }
        Ok(Self::from_closed_up(n, up))
    }

    /// Wraps an already transitively closed, irreflexive relation.
    pub(crate) fn from_closed_up(n: usize, up: Vec<u64>) -> Poset {
        let words = words_for(n);
        debug_assert_eq!(up.len(), n * words);
        let mut down = vec![0u64; n * words];
        for x in 0..n {
            for_each_bit(&up[x * words..(x + 1) * words], |y| {
                set_bit(&mut down[y * words..(y + 1) * words], x);
            });
        }
        let covers_up = covers_from_closed(&up, n, words);
        Poset { n, words, up, down, covers_up, labels: None }
    }

    pub fn antichain(n: usize) -> Poset {
        Poset::from_relations(n, &[]).expect("an antichain is always valid")
    }

    pub fn chain(n: usize) -> Poset {
        let rels: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        Poset::from_relations(n, &rels).expect("a chain is always valid")
    }

    pub fn empty() -> Poset {
        Poset::antichain(0)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn less(&self, x: usize, y: usize) -> bool {
        get_bit(self.up_row(x), y)
    }

    /// True when `y` covers `x`: `x < y` with nothing strictly between.
    pub fn covers(&self, x: usize, y: usize) -> bool {
        get_bit(&self.covers_up[x * self.words..(x + 1) * self.words], y)
    }

    pub(crate) fn up_row(&self, x: usize) -> &[u64] {
        &self.up[x * self.words..(x + 1) * self.words]
    }

    pub(crate) fn down_row(&self, x: usize) -> &[u64] {
        &self.down[x * self.words..(x + 1) * self.words]
    }

    pub fn up_set(&self, x: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for_each_bit(self.up_row(x), |y| out.push(y));
        out
    }

    pub fn down_set(&self, x: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for_each_bit(self.down_row(x), |y| out.push(y));
        out
    }

    /// Number of points strictly above x.
    pub fn out_degree(&self, x: usize) -> u32 {
        count_bits(self.up_row(x))
    }

    /// Number of points strictly below x.
    pub fn in_degree(&self, x: usize) -> u32 {
        count_bits(self.down_row(x))
    }

    /// Number of comparable pairs x < y.
    pub fn comparabilities(&self) -> usize {
        self.up.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// The transitive reduction: all cover edges `(x, y)` with `x` covered by
    /// `y`, sorted lexicographically.
    pub fn cover_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.n {
            for_each_bit(&self.covers_up[x * self.words..(x + 1) * self.words], |y| {
                out.push((x, y));
            });
        }
        out
    }

    /// Length (in edges) of the longest chain ending at each point.
    pub fn heights(&self) -> Vec<u32> {
        let mut order: Vec<usize> = (0..self.n).collect();
        // Sorting by |down-set| is a linear extension: y < x forces
        // down(y) to be a proper subset of down(x).
        order.sort_by_key(|&x| self.in_degree(x));
        let mut h = vec![0u32; self.n];
        for &x in &order {
            let mut best = 0;
            for_each_bit(self.down_row(x), |y| best = best.max(h[y] + 1));
            h[x] = best;
        }
        h
    }

    /// Length of the longest chain starting at each point.
    pub fn depths(&self) -> Vec<u32> {
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&x| self.out_degree(x));
        let mut d = vec![0u32; self.n];
        for &x in &order {
            let mut best = 0;
            for_each_bit(self.up_row(x), |y| best = best.max(d[y] + 1));
            d[x] = best;
        }
        d
    }

    /// The dual poset: all relations reversed.
    pub fn opposite(&self) -> Poset {
        let mut covers_up = vec![0u64; self.n * self.words];
        for x in 0..self.n {
            for_each_bit(&self.covers_up[x * self.words..(x + 1) * self.words], |y| {
                set_bit(&mut covers_up[y * self.words..(y + 1) * self.words], x);
            });
        }
        Poset {
            n: self.n,
            words: self.words,
            up: self.down.clone(),
            down: self.up.clone(),
            covers_up,
            labels: self.labels.clone(),
        }
    }

    /// Stacks the parts: every point of an earlier part lies below every
    /// point of a later part. An empty list yields the empty poset.
    pub fn ordinal_sum(parts: &[Poset]) -> Result<Poset> {
        let n: usize = parts.iter().map(|p| p.n).sum();
        if n > MAX_POINTS {
            return Err(Error::TooManyPoints { n, max: MAX_POINTS });
        }
        let words = words_for(n);
        let mut up = vec![0u64; n * words];
        let mut offset = 0;
        for part in parts {
            for x in 0..part.n {
                let row = &mut up[(offset + x) * words..(offset + x + 1) * words];
                for_each_bit(part.up_row(x), |y| set_bit(row, offset + y));
                for z in offset + part.n..n {
                    set_bit(row, z);
                }
            }
            offset += part.n;
        }
        let labels = if !parts.is_empty() && parts.iter().all(|p| p.labels.is_some()) {
            let mut all = Vec::with_capacity(n);
            for part in parts {
                all.extend(part.labels.as_ref().unwrap().iter().cloned());
            }
            Some(all)
        } else {
            None
        };
        let mut sum = Poset::from_closed_up(n, up);
        sum.labels = labels;
        Ok(sum)
    }

    /// Moves point `x` to position `perm(x)`.
    pub fn relabel(&self, perm: &Permutation) -> Result<Poset> {
        if perm.len() != self.n {
            return Err(Error::LengthMismatch { got: perm.len(), want: self.n });
        }
        let mut up = vec![0u64; self.n * self.words];
        for x in 0..self.n {
            let nx = perm.apply(x);
            let row = &mut up[nx * self.words..(nx + 1) * self.words];
            for_each_bit(self.up_row(x), |y| set_bit(row, perm.apply(y)));
        }
        let mut q = Poset::from_closed_up(self.n, up);
        if let Some(labels) = &self.labels {
            let mut moved = vec![String::new(); self.n];
            for x in 0..self.n {
                moved[perm.apply(x)] = labels[x].clone();
            }
            q.labels = Some(moved);
        }
        Ok(q)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Poset {
        assert_eq!(labels.len(), self.n, "one label per point");
        self.labels = Some(labels);
        self
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Display name for a point: its label if present, otherwise its index.
    pub fn point_name(&self, x: usize) -> String {
        match &self.labels {
            Some(labels) => labels[x].clone(),
            None => x.to_string(),
        }
    }
}

impl PartialEq for Poset {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.up == other.up
    }
}

impl Eq for Poset {}

impl std::hash::Hash for Poset {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.up.hash(state);
    }
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poset(n={}, covers={:?})", self.n, self.cover_edges())
    }
}

/// In-place bit-parallel Warshall closure: row x |= row k whenever x < k.
fn transitive_close(up: &mut [u64], n: usize, words: usize) {
    let mut scratch = vec![0u64; words];
    for k in 0..n {
        scratch.copy_from_slice(&up[k * words..(k + 1) * words]);
        for x in 0..n {
            let row = &mut up[x * words..(x + 1) * words];
            if get_bit(row, k) {
                for (dst, src) in row.iter_mut().zip(&scratch) {
                    *dst |= src;
                }
            }
        }
    }
}

/// Cover rows of a closed relation: x is covered by y iff x < y and no z has
/// x < z < y. Removes, from each row, everything reachable in two steps.
fn covers_from_closed(up: &[u64], n: usize, words: usize) -> Vec<u64> {
    let mut covers = up.to_vec();
    let mut reach2 = vec![0u64; words];
    for x in 0..n {
        reach2.fill(0);
        for_each_bit(&up[x * words..(x + 1) * words], |z| {
            for (dst, src) in reach2.iter_mut().zip(&up[z * words..(z + 1) * words]) {
                *dst |= src;
            }
        });
        for (dst, src) in covers[x * words..(x + 1) * words].iter_mut().zip(&reach2) {
            *dst &= !src;
        }
    }
    covers
}

#[cfg(test)]
mod tests {
    use super::*;

    fn relation_pairs(p: &Poset) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..p.n() {
            for y in 0..p.n() {
                if p.less(x, y) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    #[test]
    fn closure_completes_a_chain() {
        let p = Poset::from_relations(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(p.less(0, 2));
        assert_eq!(p.cover_edges(), vec![(0, 1), (1, 2)]);
        assert_eq!(p.comparabilities(), 3);
    }

    #[test]
    fn cycles_are_rejected() {
        assert!(matches!(Poset::from_relations(2, &[(0, 1), (1, 0)]), Err(Error::Cycle)));
        assert!(matches!(Poset::from_relations(1, &[(0, 0)]), Err(Error::Cycle)));
        assert!(matches!(
            Poset::from_relations(3, &[(0, 1), (1, 2), (2, 0)]),
            Err(Error::Cycle)
        ));
    }

    #[test]
    fn out_of_range_points_are_rejected() {
        assert!(matches!(
            Poset::from_relations(2, &[(0, 5)]),
            Err(Error::IndexOutOfRange { point: 5, n: 2 })
        ));
    }

    #[test]
    fn capacity_is_enforced() {
        assert!(matches!(
            Poset::from_relations(MAX_POINTS + 1, &[]),
            Err(Error::TooManyPoints { .. })
        ));
    }

    #[test]
    fn empty_poset_works() {
        let p = Poset::empty();
        assert_eq!(p.n(), 0);
        assert!(p.cover_edges().is_empty());
    }

    #[test]
    fn duplicate_and_implied_relations_are_harmless() {
        let p = Poset::from_relations(3, &[(0, 1), (0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(p.cover_edges(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn heights_and_depths_of_a_fence() {
        // 0 < 1 > 2 < 3
        let p = Poset::from_relations(4, &[(0, 1), (2, 1), (2, 3)]).unwrap();
        assert_eq!(p.heights(), vec![0, 1, 0, 1]);
        assert_eq!(p.depths(), vec![1, 0, 1, 0]);
    }

    #[test]
    fn opposite_is_an_involution_and_flips_relations() {
        let p = Poset::from_relations(4, &[(0, 1), (1, 2), (0, 3)]).unwrap();
        let q = p.opposite();
        assert!(q.less(2, 0));
        assert!(!q.less(0, 2));
        assert_eq!(q.opposite(), p);
        let mut flipped: Vec<(usize, usize)> =
            relation_pairs(&q).into_iter().map(|(a, b)| (b, a)).collect();
        flipped.sort();
        assert_eq!(flipped, relation_pairs(&p));
    }

    #[test]
    fn ordinal_sum_stacks_parts() {
        let sum = Poset::ordinal_sum(&[Poset::antichain(2), Poset::antichain(2)]).unwrap();
        assert_eq!(sum.n(), 4);
        for x in 0..2 {
            for y in 2..4 {
                assert!(sum.less(x, y));
            }
        }
        assert!(!sum.less(0, 1));
        assert!(!sum.less(2, 3));
        assert_eq!(sum.cover_edges().len(), 4);
    }

    #[test]
    fn ordinal_sum_of_nothing_is_empty() {
        assert_eq!(Poset::ordinal_sum(&[]).unwrap(), Poset::empty());
        let with_empty =
            Poset::ordinal_sum(&[Poset::empty(), Poset::chain(2), Poset::empty()]).unwrap();
        assert_eq!(with_empty, Poset::chain(2));
    }

    #[test]
    fn relabel_moves_relations() {
        let p = Poset::from_relations(3, &[(0, 1), (1, 2)]).unwrap();
        let sigma = Permutation::from_image(vec![2, 1, 0]).unwrap();
        let q = p.relabel(&sigma).unwrap();
        assert!(q.less(2, 1));
        assert!(q.less(1, 0));
        assert!(!q.less(0, 1));
    }
}
