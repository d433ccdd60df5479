//! Automorphism groups of posets.
//!
//! The solver runs a refinement-guided backtracking search over pairs of
//! partitions: the source side individualizes the smallest point of the
//! first non-singleton cell, the target side branches over every candidate
//! image in the matching cell. Group orders come from an orbit-stabilizer
//! chain along the source side, so they never require materializing large
//! groups; element lists are produced only up to a configurable cap.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::poset::Poset;
use crate::refine::{initial_partition, refine, Partition};

/// Default cap on the number of materialized group elements.
pub const DEFAULT_ELEMENT_CAP: u64 = 1_000_000;

/// Checks whether `sigma` preserves the relation in both directions.
pub fn is_automorphism(p: &Poset, sigma: &Permutation) -> Result<bool> {
    if sigma.len() != p.n() {
        return Err(Error::LengthMismatch { got: sigma.len(), want: p.n() });
    }
    Ok(is_automorphism_unchecked(p, sigma))
}

/// `sigma` must act on exactly `p.n()` points. A bijection that maps every
/// related pair to a related pair is an automorphism (the count argument
/// covers the reverse direction).
fn is_automorphism_unchecked(p: &Poset, sigma: &Permutation) -> bool {
    for x in 0..p.n() {
        let sx = sigma.apply(x);
        let mut ok = true;
        crate::poset::for_each_bit(p.up_row(x), |y| {
            if !p.less(sx, sigma.apply(y)) {
                ok = false;
            }
        });
        if !ok {
            return false;
        }
    }
    true
}

/// Summary of an automorphism group.
#[derive(Clone, Debug)]
pub struct GroupDescription {
    order: u128,
    elements: Option<Vec<Permutation>>,
    has_element_of_order: BTreeMap<u128, bool>,
}

impl GroupDescription {
    pub fn order(&self) -> u128 {
        self.order
    }

    /// All elements, present when the order is within the cap.
    pub fn elements(&self) -> Option<&[Permutation]> {
        self.elements.as_deref()
    }

    /// Whether the group has an element of order `m`. Known for every
    /// divisor of the group order when elements are materialized.
    pub fn has_element_of_order(&self, m: u128) -> Option<bool> {
        if self.elements.is_some() && !self.order.is_multiple_of(m) {
            return Some(false);
        }
        self.has_element_of_order.get(&m).copied()
    }

    /// A group is cyclic exactly when some element has full order.
    pub fn is_cyclic(&self) -> Option<bool> {
        self.has_element_of_order(self.order)
    }
}

/// Computes the group with the default element cap. Groups larger than the
/// cap are described by order only.
pub fn automorphism_group(p: &Poset) -> Result<GroupDescription> {
    automorphism_group_with(p, DEFAULT_ELEMENT_CAP, false)
}

/// As `automorphism_group`, with an explicit cap. With `require_elements`
/// set, exceeding the cap is an error instead of an order-only description.
pub fn automorphism_group_with(
    p: &Poset,
    element_cap: u64,
    require_elements: bool,
) -> Result<GroupDescription> {
    let order = group_order(p)?;
    if order > element_cap as u128 {
        if require_elements {
            return Err(Error::CapExceeded { order, cap: element_cap });
        }
        return Ok(GroupDescription { order, elements: None, has_element_of_order: BTreeMap::new() });
    }
    let elements = enumerate_automorphisms(p);
    debug_assert_eq!(elements.len() as u128, order);
    let mut seen_orders: BTreeMap<u128, bool> = BTreeMap::new();
    for g in &elements {
        seen_orders.insert(g.order(), true);
    }
    let mut has_element_of_order = BTreeMap::new();
    for d in divisors(order) {
        has_element_of_order.insert(d, seen_orders.contains_key(&d));
    }
    Ok(GroupDescription { order, elements: Some(elements), has_element_of_order })
}

/// Exact group order by orbit-stabilizer along the individualization spine:
/// the order is the product, over spine levels, of the orbit size of the
/// individualized point under the stabilizer of the previous levels.
pub fn group_order(p: &Poset) -> Result<u128> {
    let mut current = initial_partition(p);
    let mut total: u128 = 1;
    while let Some(ci) = current.first_non_singleton() {
        let cell: Vec<u32> = current.cell(ci).to_vec();
        let v = cell[0];
        let mut fixed = current.clone();
        fixed.individualize(v);
        refine(p, &mut fixed);
        let mut orbit: u128 = 1;
        for &u in &cell[1..] {
            let mut tgt = current.clone();
            tgt.individualize(u);
            refine(p, &mut tgt);
            if fixed.same_shape(&tgt) && find_extension(p, &fixed, &tgt).is_some() {
                orbit += 1;
            }
        }
        total = total.checked_mul(orbit).ok_or(Error::OrderOverflow)?;
        current = fixed;
    }
    Ok(total)
}

/// All automorphisms, in a deterministic search order.
pub(crate) fn enumerate_automorphisms(p: &Poset) -> Vec<Permutation> {
    let base = initial_partition(p);
    let mut out = Vec::new();
    let _ = search(p, &base, &base, &mut |sigma| {
        out.push(sigma);
        ControlFlow::<()>::Continue(())
    });
    out
}

/// The first automorphism satisfying `pred`, in the same deterministic
/// order as `enumerate_automorphisms`.
fn find_automorphism(p: &Poset, mut pred: impl FnMut(&Permutation) -> bool) -> Option<Permutation> {
    let base = initial_partition(p);
    let mut found = None;
    let _ = search(p, &base, &base, &mut |sigma| {
        if pred(&sigma) {
            found = Some(sigma);
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    found
}

/// Is there an automorphism sending each `a` to the paired `b`?
pub fn exists_automorphism_mapping(p: &Poset, pairs: &[(usize, usize)]) -> bool {
    let base = initial_partition(p);
    let mut src = base.clone();
    let mut tgt = base;
    for &(a, b) in pairs {
        if src.cell_index_of(a as u32) != tgt.cell_index_of(b as u32) {
            return false;
        }
        if src.cell(src.cell_index_of(a as u32)).len() == 1 {
            // Both are already pinned to the same cell; the pair is
            // consistent exactly when the cells coincide, checked above.
            continue;
        }
        src.individualize(a as u32);
        refine(p, &mut src);
        tgt.individualize(b as u32);
        refine(p, &mut tgt);
        if !src.same_shape(&tgt) {
            return false;
        }
    }
    find_extension(p, &src, &tgt).is_some()
}

/// True when the automorphism group is cyclic of order exactly `m`.
pub fn is_cyclic_aut_of_order(p: &Poset, m: u128) -> Result<bool> {
    let order = group_order(p)?;
    if order != m {
        return Ok(false);
    }
    if m == 1 {
        return Ok(true);
    }
    Ok(find_automorphism(p, |g| g.order() == m).is_some())
}

/// A generator of a cyclic automorphism group: the first element of full
/// order in search order. Deterministic across runs.
pub fn find_generator(p: &Poset) -> Result<Permutation> {
    let order = group_order(p)?;
    if order == 1 {
        return Ok(Permutation::identity(p.n()));
    }
    find_automorphism(p, |g| g.order() == order).ok_or(Error::NotCyclic { order })
}

/// Completes the (src, tgt) pair to a full automorphism, if possible.
fn find_extension(p: &Poset, src: &Partition, tgt: &Partition) -> Option<Permutation> {
    let mut found = None;
    let _ = search(p, src, tgt, &mut |sigma| {
        found = Some(sigma);
        ControlFlow::Break(())
    });
    found
}

/// Core two-partition backtracking. Visits every automorphism compatible
/// with the given partition pair exactly once; `visit` may stop the search.
fn search(
    p: &Poset,
    src: &Partition,
    tgt: &Partition,
    visit: &mut impl FnMut(Permutation) -> ControlFlow<()>,
) -> ControlFlow<()> {
    debug_assert!(src.same_shape(tgt));
    let Some(ci) = src.first_non_singleton() else {
        let src_pos = src.positions();
        let tgt_pos = tgt.positions();
        let mut point_at = vec![0usize; tgt_pos.len()];
        for (v, &pos) in tgt_pos.iter().enumerate() {
            point_at[pos as usize] = v;
        }
        let image: Vec<usize> = src_pos.iter().map(|&pos| point_at[pos as usize]).collect();
        let sigma = Permutation::from_image(image).expect("discrete partitions give a bijection");
        if is_automorphism_unchecked(p, &sigma) {
            return visit(sigma);
        }
        return ControlFlow::Continue(());
    };
    let v = src.cell(ci)[0];
    let mut src_next = src.clone();
    src_next.individualize(v);
    refine(p, &mut src_next);
    for &u in tgt.cell(ci) {
        let mut tgt_next = tgt.clone();
        tgt_next.individualize(u);
        refine(p, &mut tgt_next);
        if src_next.same_shape(&tgt_next) {
            search(p, &src_next, &tgt_next, visit)?;
        }
    }
    ControlFlow::Continue(())
}

fn divisors(n: u128) -> Vec<u128> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d: u128 = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}
