//! Canonical forms for posets up to isomorphism.
//!
//! The canonical form is the lexicographically smallest row-major bit string
//! of the relation matrix over all point orderings consistent with the
//! refined partition, found by individualization-refinement backtracking.
//! Two posets are isomorphic exactly when their forms are equal.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::poset::{Poset, MAX_POINTS};
use crate::refine::{initial_partition, refine, Partition};

/// A canonical byte string: two little-endian length bytes, then the
/// relabelled relation matrix packed row-major, most significant bit first.
pub fn canonical_form(p: &Poset) -> Vec<u8> {
    canonical_labeling(p).0
}

/// The canonical form together with a permutation realizing it (point to
/// canonical position). The permutation is deterministic but only unique up
/// to automorphisms of `p`.
pub fn canonical_labeling(p: &Poset) -> (Vec<u8>, Permutation) {
    let part = initial_partition(p);
    let mut search = Search {
        p,
        best: None,
        seen: BTreeMap::new(),
        path: Vec::new(),
    };
    search.dfs(&part);
    let (bytes, positions) = search.best.expect("search always visits at least one leaf");
    let image: Vec<usize> = positions.iter().map(|&x| x as usize).collect();
    (bytes, Permutation::from_image(image).expect("positions form a bijection"))
}

pub fn are_isomorphic(p: &Poset, q: &Poset) -> bool {
    p.n() == q.n() && canonical_form(p) == canonical_form(q)
}

/// Rebuilds a poset from its canonical byte string.
pub fn poset_from_canonical(bytes: &[u8]) -> Result<Poset> {
    if bytes.len() < 2 {
        return Err(Error::Format("canonical form is shorter than its header".into()));
    }
    let n = u16::from_le_bytes([bytes[0], bytes[1]]) as usize;
    if n > MAX_POINTS {
        return Err(Error::TooManyPoints { n, max: MAX_POINTS });
    }
    if bytes.len() != 2 + (n * n).div_ceil(8) {
        return Err(Error::Format(format!("canonical form for n={n} has the wrong size")));
    }
    let mut relations = Vec::new();
    for x in 0..n {
        for y in 0..n {
            let i = x * n + y;
            if bytes[2 + (i >> 3)] & (0x80 >> (i & 7)) != 0 {
                relations.push((x, y));
            }
        }
    }
    Poset::from_relations(n, &relations)
}

struct Search<'a> {
    p: &'a Poset,
    best: Option<(Vec<u8>, Vec<u32>)>,
    /// Leaf matrix -> individualization path of its first occurrence. A
    /// repeated leaf exposes an automorphism, which makes the rest of the
    /// current branch redundant.
    seen: BTreeMap<Vec<u8>, Vec<u32>>,
    path: Vec<u32>,
}

impl Search<'_> {
    /// Returns the depth to backjump to, if a repeated leaf was found.
    fn dfs(&mut self, part: &Partition) -> Option<usize> {
        if part.is_discrete() {
            let positions = part.positions();
            let bytes = pack(self.p, &positions);
            if let Some(first) = self.seen.get(&bytes) {
                // The subtrees skipped by backjumping are images of already
                // explored ones under the automorphism relating the two
                // leaves, so no new matrices are lost.
                let fca = first.iter().zip(&self.path).take_while(|(a, b)| a == b).count();
                return Some(fca + 1);
            }
            self.seen.insert(bytes.clone(), self.path.clone());
            if self.best.as_ref().is_none_or(|(b, _)| bytes < *b) {
                self.best = Some((bytes, positions));
            }
            return None;
        }
        let ci = part.first_non_singleton().expect("partition is not discrete");
        for &v in part.cell(ci) {
            let mut child = part.clone();
            child.individualize(v);
            refine(self.p, &mut child);
            self.path.push(v);
            let cut = self.dfs(&child);
            self.path.pop();
            if let Some(depth) = cut {
                if depth <= self.path.len() {
                    return Some(depth);
                }
            }
        }
        None
    }
}

/// Packs the matrix relabelled by `positions` (point -> position).
fn pack(p: &Poset, positions: &[u32]) -> Vec<u8> {
    let n = p.n();
    let mut point_at = vec![0u32; n];
    for (v, &pos) in positions.iter().enumerate() {
        point_at[pos as usize] = v as u32;
    }
    let mut bytes = vec![0u8; 2 + (n * n).div_ceil(8)];
    bytes[0..2].copy_from_slice(&(n as u16).to_le_bytes());
    for x in 0..n {
        let v = point_at[x] as usize;
        for (y, &w) in point_at.iter().enumerate() {
            if p.less(v, w as usize) {
                let i = x * n + y;
                bytes[2 + (i >> 3)] |= 0x80 >> (i & 7);
            }
        }
    }
    bytes
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_roundtrips() {
        let p = Poset::from_relations(5, &[(0, 2), (1, 2), (2, 3)]).unwrap();
        let form = canonical_form(&p);
        let q = poset_from_canonical(&form).unwrap();
        assert_eq!(canonical_form(&q), form);
        assert!(are_isomorphic(&p, &q));
    }

    #[test]
    fn forms_are_invariant_under_relabelling() {
        let p = Poset::from_relations(6, &[(0, 1), (1, 2), (3, 2), (4, 5)]).unwrap();
        let form = canonical_form(&p);
        let sigma = Permutation::from_image(vec![3, 5, 0, 2, 4, 1]).unwrap();
        let q = p.relabel(&sigma).unwrap();
        assert_eq!(canonical_form(&q), form);
    }

    #[test]
    fn non_isomorphic_posets_get_distinct_forms() {
        let v = Poset::from_relations(3, &[(0, 1), (0, 2)]).unwrap();
        let lambda = v.opposite();
        let chain = Poset::chain(3);
        assert_ne!(canonical_form(&v), canonical_form(&lambda));
        assert_ne!(canonical_form(&v), canonical_form(&chain));
        assert!(!are_isomorphic(&v, &lambda));
    }

    #[test]
    fn labeled_three_point_posets_fall_into_five_classes() {
        // Classes derived below by brute force over all 3^3 assignments of
        // {incomparable, <, >} to the three point pairs.
        let mut forms = std::collections::BTreeSet::new();
        let mut labeled = 0u32;
        let pairs = [(0usize, 1usize), (0, 2), (1, 2)];
        for code in 0..27u32 {
            let mut rels = Vec::new();
            let mut c = code;
            for &(a, b) in &pairs {
                match c % 3 {
                    1 => rels.push((a, b)),
                    2 => rels.push((b, a)),
                    _ => {}
                }
                c /= 3;
            }
            let Ok(p) = Poset::from_relations(3, &rels) else { continue };
            // Count only transitively closed assignments as labeled posets.
            if p.comparabilities() == rels.len() {
                labeled += 1;
                forms.insert(canonical_form(&p));
            }
        }
        assert_eq!(labeled, 19);
        assert_eq!(forms.len(), 5);
    }

    #[test]
    fn empty_and_singleton_forms() {
        assert_eq!(canonical_form(&Poset::empty()), vec![0, 0]);
        let one = canonical_form(&Poset::antichain(1));
        assert_eq!(one, vec![1, 0, 0]);
        assert_eq!(poset_from_canonical(&one).unwrap().n(), 1);
    }
}
