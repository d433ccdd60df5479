//! Independent ground truth: exhaustive enumeration of small posets up to
//! isomorphism, brute-force automorphism groups, and machine verification
//! of the structural facts the constructions rely on.
//!
//! The enumerator grows posets one point at a time. A child is produced
//! from a parent by attaching a new point whose strict down-set is a
//! down-closed subset and whose strict up-set is an up-closed subset of
//! the admissible remainder; it is kept only when the new point sits in
//! the automorphism orbit of the canonical deletion point. Every
//! isomorphism class therefore appears exactly once, a fact the count
//! fixtures pin down rather than take on faith.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::ops::ControlFlow;
use std::path::PathBuf;

use rand::Rng;
use rayon::prelude::*;

use crate::aut::{
    automorphism_group_with, exists_automorphism_mapping, group_order, is_automorphism,
    is_cyclic_aut_of_order, DEFAULT_ELEMENT_CAP,
};
use crate::canon::{canonical_labeling, poset_from_canonical};
use crate::constructions::factorize;
use crate::error::{Error, Result};
use crate::perm::{CycleType, Permutation};
use crate::poset::Poset;
use crate::weights::{audit_generator, lemma_constraints};

/// Default ceiling on exhaustive enumeration; one level higher is minutes
/// of work, two are hours.
pub const DEFAULT_ENUMERATION_LIMIT: usize = 10;

/// Brute force filters all `n!` permutations, so it stops here.
pub const BRUTE_FORCE_CAP: usize = 10;

/// Isomorph-free enumeration of posets by point count, with the completed
/// levels kept in memory and optionally mirrored to a cache directory.
pub struct Enumerator {
    limit: usize,
    cache_dir: Option<PathBuf>,
    levels: Vec<Vec<Vec<u8>>>,
}

impl Enumerator {
    pub fn new(limit: usize) -> Enumerator {
        Enumerator {
            limit,
            cache_dir: None,
            levels: vec![vec![crate::canon::canonical_form(&Poset::empty())]],
        }
    }

    /// Like [`Enumerator::new`], but levels are loaded from and saved to
    /// `dir` as they complete. The files are trusted as-is.
    pub fn with_cache(limit: usize, dir: impl Into<PathBuf>) -> Enumerator {
        Enumerator {
            cache_dir: Some(dir.into()),
            ..Enumerator::new(limit)
        }
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    /// The canonical forms of all posets on `n` points, sorted. Levels are
    /// built on demand and retained.
    pub fn forms(&mut self, n: usize) -> Result<&[Vec<u8>]> {
        if n > self.limit {
            return Err(Error::EnumerationLimit { n, limit: self.limit });
        }
        while self.levels.len() <= n {
            let level = self.build_level(self.levels.len())?;
            self.levels.push(level);
        }
        Ok(&self.levels[n])
    }

    /// The number of isomorphism classes of posets on `n` points.
    pub fn count(&mut self, n: usize) -> Result<u64> {
        Ok(self.forms(n)?.len() as u64)
    }

    /// One representative per isomorphism class, in canonical-form order.
    pub fn posets(&mut self, n: usize) -> Result<Vec<Poset>> {
        self.forms(n)?.iter().map(|f| poset_from_canonical(f)).collect()
    }

    /// The smallest point count at or below the limit admitting a poset
    /// whose automorphism group is cyclic of order exactly `m`.
    pub fn min_points_with_cyclic_aut(&mut self, m: u64) -> Result<Option<usize>> {
        // No permutation of fewer points has an element of order m at all.
        let start = minimal_degree(m)? as usize;
        for n in start..=self.limit {
            let hit = self
                .forms(n)?
                .par_iter()
                .map(|form| is_cyclic_aut_of_order(&poset_from_canonical(form)?, u128::from(m)))
                .find_any(|outcome| outcome.as_ref().map_or(true, |&found| found));
            match hit {
                Some(Err(e)) => return Err(e),
                Some(Ok(true)) => return Ok(Some(n)),
                _ => {}
            }
        }
        Ok(None)
    }

    fn build_level(&self, n: usize) -> Result<Vec<Vec<u8>>> {
        if let Some(cached) = self.load_cached(n)? {
            return Ok(cached);
        }
        let parents = &self.levels[n - 1];
        let expanded = parents
            .par_iter()
            .map(|form| expand_parent(form))
            .collect::<Result<Vec<_>>>()?;
        let mut forms: Vec<Vec<u8>> = expanded.into_iter().flatten().collect();
        forms.par_sort_unstable();
        let before = forms.len();
        forms.dedup();
        debug_assert_eq!(before, forms.len(), "duplicate forms across parents");
        self.store_cache(n, &forms)?;
        Ok(forms)
    }

    fn cache_path(&self, n: usize) -> Option<PathBuf> {
        self.cache_dir
            .as_ref()
            .map(|dir| dir.join(format!("posets-{n:02}.bin")))
    }

    fn load_cached(&self, n: usize) -> Result<Option<Vec<Vec<u8>>>> {
        let Some(path) = self.cache_path(n) else {
            return Ok(None);
        };
        if !path.exists() {
            return Ok(None);
        }
        let bytes = fs::read(&path)?;
        Ok(Some(parse_cache(&bytes, n)?))
    }

    fn store_cache(&self, n: usize, forms: &[Vec<u8>]) -> Result<()> {
        let Some(path) = self.cache_path(n) else {
            return Ok(());
        };
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir)?;
        }
        let mut bytes = Vec::new();
        for form in forms {
            bytes.extend_from_slice(&(form.len() as u32).to_le_bytes());
            bytes.extend_from_slice(form);
        }
        let tmp = path.with_extension(format!("tmp-{}", std::process::id()));
        fs::write(&tmp, &bytes)?;
        fs::rename(&tmp, &path)?;
        Ok(())
    }
}

fn parse_cache(bytes: &[u8], n: usize) -> Result<Vec<Vec<u8>>> {
    let expected = 2 + (n * n).div_ceil(8);
    let mut forms = Vec::new();
    let mut at = 0;
    while at < bytes.len() {
        let header = bytes
            .get(at..at + 4)
            .ok_or_else(|| Error::Format("truncated cache record header".into()))?;
        let len = u32::from_le_bytes(header.try_into().unwrap()) as usize;
        at += 4;
        let body = bytes
            .get(at..at + len)
            .ok_or_else(|| Error::Format("truncated cache record".into()))?;
        at += len;
        if len != expected || body[..2] != (n as u16).to_le_bytes() {
            return Err(Error::Format(format!(
                "cache record does not describe a {n}-point poset"
            )));
        }
        forms.push(body.to_vec());
    }
    Ok(forms)
}

/// All children of one canonical parent that survive the deletion test,
/// deduplicated and sorted.
fn expand_parent(form: &[u8]) -> Result<Vec<Vec<u8>>> {
    let parent = poset_from_canonical(form)?;
    let m = parent.n();
    assert!(m < 64, "enumeration levels this deep are out of reach");
    let word = |row: &[u64]| row.first().copied().unwrap_or(0);
    let up: Vec<u64> = (0..m).map(|v| word(parent.up_row(v))).collect();
    let down: Vec<u64> = (0..m).map(|v| word(parent.down_row(v))).collect();
    let full: u64 = (1 << m) - 1;

    let mut accepted = BTreeSet::new();
    for below in 0..=full {
        // The new point's down-set must be down-closed.
        if (0..m).any(|v| below & (1 << v) != 0 && down[v] & !below != 0) {
            continue;
        }
        // Points eligible to sit above the new point: everything outside
        // its down-set that is already above all of it.
        let mut eligible = 0u64;
        for (y, &d) in down.iter().enumerate() {
            if below & (1 << y) == 0 && below & !d == 0 {
                eligible |= 1 << y;
            }
        }
        let mut above = eligible;
        loop {
            // The up-set must be up-closed; everything above an eligible
            // point is itself eligible, so the check stays inside the mask.
            if (0..m).all(|v| above & (1 << v) == 0 || up[v] & !above == 0) {
                let child = attach_point(&parent, below, above);
                let (bytes, labeling) = canonical_labeling(&child);
                let new_point = m;
                let canonical_last = labeling
                    .image()
                    .iter()
                    .position(|&pos| pos == new_point)
                    .expect("labeling is a bijection");
                let keep = canonical_last == new_point
                    || exists_automorphism_mapping(&child, &[(new_point, canonical_last)]);
                if keep {
                    accepted.insert(bytes);
                }
            }
            if above == 0 {
                break;
            }
            above = (above - 1) & eligible;
        }
    }
    Ok(accepted.into_iter().collect())
}

/// The parent plus one point above `below` and beneath `above`; both masks
/// are chosen so the result is already transitively closed.
fn attach_point(parent: &Poset, below: u64, above: u64) -> Poset {
    let m = parent.n();
    let word = |row: &[u64]| row.first().copied().unwrap_or(0);
    let mut up = Vec::with_capacity(m + 1);
    for x in 0..m {
        let mut row = word(parent.up_row(x));
        if below & (1 << x) != 0 {
            row |= 1 << m;
        }
        up.push(row);
    }
    up.push(above);
    Poset::from_closed_up(m + 1, up)
}

/// One representative per isomorphism class of posets on `n` points, for
/// `n` up to the default limit.
pub fn enumerate_posets(n: usize) -> Result<Vec<Poset>> {
    Enumerator::new(DEFAULT_ENUMERATION_LIMIT).posets(n)
}

/// See [`Enumerator::min_points_with_cyclic_aut`].
pub fn min_points_with_cyclic_aut(m: u64, limit: usize) -> Result<Option<usize>> {
    Enumerator::new(limit).min_points_with_cyclic_aut(m)
}

/// Census of one enumeration level.
#[derive(Clone, Debug, serde::Serialize)]
pub struct EnumerationRecord {
    pub n: usize,
    /// Isomorphism classes on `n` points.
    pub total: u64,
    /// For each order `m`, the number of classes whose automorphism group
    /// is cyclic of order `m`. Order 1 counts the rigid posets.
    pub with_cyclic_aut: BTreeMap<u64, u64>,
}

/// Counts the classes on `n` points and buckets the ones with a cyclic
/// automorphism group by its order.
pub fn survey(enumerator: &mut Enumerator, n: usize) -> Result<EnumerationRecord> {
    let forms = enumerator.forms(n)?;
    let orders = forms
        .par_iter()
        .map(|form| cyclic_order_of(&poset_from_canonical(form)?))
        .collect::<Result<Vec<_>>>()?;
    let mut with_cyclic_aut = BTreeMap::new();
    for order in orders.into_iter().flatten() {
        *with_cyclic_aut.entry(order).or_insert(0) += 1;
    }
    Ok(EnumerationRecord {
        n,
        total: forms.len() as u64,
        with_cyclic_aut,
    })
}

/// The order of the automorphism group when it is cyclic.
pub fn cyclic_order_of(p: &Poset) -> Result<Option<u64>> {
    let order = group_order(p)?;
    if order == 1 {
        return Ok(Some(1));
    }
    // A cyclic group needs an element of full order, and an element of
    // order m moves at least the sum of the maximal prime-power divisors
    // of m; this rules the large groups out without enumerating them.
    let Ok(m) = u64::try_from(order) else {
        return Ok(None);
    };
    if minimal_degree(m)? > p.n() as u64 {
        return Ok(None);
    }
    Ok(is_cyclic_aut_of_order(p, order)?.then_some(m))
}

/// The fewest points a permutation of order `m` can move: the sum of the
/// maximal prime-power divisors of `m`.
fn minimal_degree(m: u64) -> Result<u64> {
    Ok(factorize(m)?.prime_power_parts().into_iter().sum())
}

/// Every automorphism of `p`, found by filtering all `n!` permutations.
pub fn brute_force_automorphisms(p: &Poset) -> Result<Vec<Permutation>> {
    let n = p.n();
    if n > BRUTE_FORCE_CAP {
        return Err(Error::BruteForceCap { n, cap: BRUTE_FORCE_CAP });
    }
    let mut found = Vec::new();
    let _ = for_each_permutation(n, &mut |image| {
        let preserves = (0..n).all(|x| {
            let mut ok = true;
            crate::poset::for_each_bit(p.up_row(x), |y| {
                if !p.less(image[x], image[y]) {
                    ok = false;
                }
            });
            ok
        });
        if preserves {
            found.push(
                Permutation::from_image(image.to_vec()).expect("generated images are bijections"),
            );
        }
        ControlFlow::Continue(())
    });
    found.sort_unstable();
    Ok(found)
}

/// Visits every arrangement of `0..n` exactly once.
fn for_each_permutation(
    n: usize,
    visit: &mut impl FnMut(&[usize]) -> ControlFlow<()>,
) -> ControlFlow<()> {
    fn rec(
        items: &mut [usize],
        k: usize,
        visit: &mut impl FnMut(&[usize]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if k <= 1 {
            return visit(items);
        }
        for i in 0..k - 1 {
            rec(items, k - 1, visit)?;
            if k.is_multiple_of(2) {
                items.swap(i, k - 1);
            } else {
                items.swap(0, k - 1);
            }
        }
        rec(items, k - 1, visit)
    }
    let mut items: Vec<usize> = (0..n).collect();
    rec(&mut items, n, visit)
}

/// A poset drawn by relating each pair `i < j` of indices independently
/// with the given probability and closing transitively. Every isomorphism
/// class has positive probability of appearing.
pub fn random_poset<R: Rng + ?Sized>(n: usize, density: f64, rng: &mut R) -> Result<Poset> {
    let mut relations = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(density) {
                relations.push((a, b));
            }
        }
    }
    Poset::from_relations(n, &relations)
}

/// One structure on two `p`-point orbits: the difference set, and the
/// orbit-preserving automorphism found beyond the rotations (if any).
#[derive(Clone, Debug)]
pub struct TwoOrbitCase {
    pub shifts: Vec<u64>,
    pub witness: Option<Permutation>,
}

/// Outcome of [`verify_lemma_two_orbits`] for one prime: the fully
/// incomparable structure first, then one case per difference set, so
/// `cases.len() == 2^p + 1`.
#[derive(Clone, Debug)]
pub struct TwoOrbitReport {
    pub p: u64,
    pub cases: Vec<TwoOrbitCase>,
}

impl TwoOrbitReport {
    /// True when every structure admits a non-rotation automorphism that
    /// keeps both orbits invariant.
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|case| case.witness.is_some())
    }
}

/// Checks, for p in {3, 5, 7}, that every poset on two size-p orbits of a
/// rotation — comparabilities `i < j'` exactly when `j - i` falls in a
/// difference set — has an automorphism preserving both orbits that is not
/// a power of the rotation.
pub fn verify_lemma_two_orbits(p: u64) -> Result<TwoOrbitReport> {
    if !matches!(p, 3 | 5 | 7) {
        return Err(Error::UnsupportedPrime(p));
    }
    let p = p as usize;
    let rotations: Vec<Permutation> = (0..p)
        .map(|t| {
            let image: Vec<usize> =
                (0..p).map(|i| (i + t) % p).chain((0..p).map(|j| p + (j + t) % p)).collect();
            Permutation::from_image(image).expect("rotation is a bijection")
        })
        .collect();
    let mut cases = Vec::new();
    // The fully incomparable structure stands on its own, ahead of the
    // difference sets (the empty set describes the same antichain, but the
    // two readings are distinct configurations and both get checked).
    {
        let antichain = Poset::antichain(2 * p);
        let witness = two_orbit_witness(&antichain, p, &rotations);
        debug_assert!(witness.is_some());
        cases.push(TwoOrbitCase { shifts: Vec::new(), witness });
    }
    for shift_mask in 0u32..1 << p {
        let shifts: Vec<u64> = (0..p).filter(|s| shift_mask & (1 << s) != 0).map(|s| s as u64).collect();
        let relations: Vec<(usize, usize)> = (0..p)
            .flat_map(|i| {
                let shifts = &shifts;
                (0..p).filter_map(move |j| {
                    shifts
                        .contains(&(((j + p - i) % p) as u64))
                        .then_some((i, p + j))
                })
            })
            .collect();
        let poset = Poset::from_relations(2 * p, &relations)?;
        let witness = two_orbit_witness(&poset, p, &rotations);
        if let Some(w) = &witness {
            debug_assert!(matches!(is_automorphism(&poset, w), Ok(true)));
        }
        cases.push(TwoOrbitCase { shifts, witness });
    }
    Ok(TwoOrbitReport { p: p as u64, cases })
}

/// First orbit-preserving automorphism that is not a rotation: tries every
/// permutation of the lower orbit and matches upper points by the image of
/// their down-sets.
fn two_orbit_witness(poset: &Poset, p: usize, rotations: &[Permutation]) -> Option<Permutation> {
    let down_mask = |j: usize| -> u32 {
        (0..p).fold(0, |mask, i| {
            if poset.less(i, p + j) {
                mask | 1 << i
            } else {
                mask
            }
        })
    };
    let masks: Vec<u32> = (0..p).map(down_mask).collect();
    let mut witness = None;
    let _ = for_each_permutation(p, &mut |lower| {
        let mapped: Vec<u32> = masks
            .iter()
            .map(|&mask| (0..p).filter(|&i| mask & (1 << i) != 0).fold(0, |acc, i| acc | 1 << lower[i]))
            .collect();
        let mut upper = vec![usize::MAX; p];
        let mut used = 0u32;
        if match_upper(&masks, &mapped, &mut upper, &mut used, 0, &mut |upper| {
            let image: Vec<usize> = lower
                .iter()
                .copied()
                .chain(upper.iter().map(|&k| p + k))
                .collect();
            let candidate = Permutation::from_image(image).expect("assembled a bijection");
            if rotations.contains(&candidate) {
                ControlFlow::Continue(())
            } else {
                witness = Some(candidate);
                ControlFlow::Break(())
            }
        })
        .is_break()
        {
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    });
    witness
}

/// Backtracks over assignments of upper points to upper points with equal
/// transformed down-sets.
fn match_upper(
    masks: &[u32],
    mapped: &[u32],
    upper: &mut [usize],
    used: &mut u32,
    j: usize,
    leaf: &mut impl FnMut(&[usize]) -> ControlFlow<()>,
) -> ControlFlow<()> {
    if j == masks.len() {
        return leaf(upper);
    }
    for k in 0..masks.len() {
        if *used & (1 << k) == 0 && masks[k] == mapped[j] {
            upper[j] = k;
            *used |= 1 << k;
            match_upper(masks, mapped, upper, used, j + 1, leaf)?;
            *used &= !(1 << k);
        }
    }
    ControlFlow::Continue(())
}

/// Outcome of checking one family of orbit sizes in [`verify_lemma_z4`].
#[derive(Clone, Debug)]
pub struct InvariantFamilyReport {
    pub orbit_sizes: Vec<usize>,
    /// All enumerated relation configurations.
    pub configurations: usize,
    /// Configurations that close into a strict order.
    pub valid: usize,
    /// Valid configurations with a non-induced orbit-preserving
    /// automorphism.
    pub verified: usize,
    /// Valid configurations without one; expected empty.
    pub counterexamples: Vec<Poset>,
}

impl InvariantFamilyReport {
    pub fn passed(&self) -> bool {
        self.verified == self.valid && self.counterexamples.is_empty()
    }
}

/// Outcome of [`verify_lemma_z4`]: one report per orbit pattern.
#[derive(Clone, Debug)]
pub struct Z4LemmaReport {
    pub families: Vec<InvariantFamilyReport>,
}

impl Z4LemmaReport {
    pub fn passed(&self) -> bool {
        self.families.iter().all(InvariantFamilyReport::passed)
    }
}

/// Relations between one ordered pair of orbits: none, or a nonempty set
/// of index differences (reduced modulo the smaller orbit size) in one of
/// the two directions.
#[derive(Clone, Copy, Debug)]
enum PairRule {
    Incomparable,
    Up(u8),
    Down(u8),
}

fn pair_rules(smaller: usize) -> Vec<PairRule> {
    let full = (1u8 << smaller) - 1;
    let mut rules = vec![PairRule::Incomparable];
    for mask in 1..=full {
        rules.push(PairRule::Up(mask));
        rules.push(PairRule::Down(mask));
    }
    rules
}

fn pair_relations(
    (off_a, size_a): (usize, usize),
    (off_b, size_b): (usize, usize),
    rule: PairRule,
    out: &mut Vec<(usize, usize)>,
) {
    let small = size_a.min(size_b);
    for i in 0..size_a {
        for j in 0..size_b {
            let diff_up = (j % small + small - i % small) % small;
            let diff_down = (i % small + small - j % small) % small;
            match rule {
                PairRule::Incomparable => {}
                PairRule::Up(mask) => {
                    if mask & (1 << (diff_up % small)) != 0 {
                        out.push((off_a + i, off_b + j));
                    }
                }
                PairRule::Down(mask) => {
                    if mask & (1 << (diff_down % small)) != 0 {
                        out.push((off_b + j, off_a + i));
                    }
                }
            }
        }
    }
}

/// Checks that every poset on which a 4-element rotation acts with two
/// orbits of size 4 — or two of size 4 and one of size 2 — has an
/// automorphism, beyond the four induced powers, keeping every orbit
/// invariant.
pub fn verify_lemma_z4() -> Result<Z4LemmaReport> {
    let families = vec![
        z4_family(&[4, 4])?,
        z4_family(&[4, 4, 2])?,
    ];
    Ok(Z4LemmaReport { families })
}

fn z4_family(orbit_sizes: &[usize]) -> Result<InvariantFamilyReport> {
    let offsets: Vec<usize> = orbit_sizes
        .iter()
        .scan(0, |acc, &s| {
            let at = *acc;
            *acc += s;
            Some(at)
        })
        .collect();
    let total: usize = orbit_sizes.iter().sum();
    let generator = {
        let mut image = vec![0; total];
        for (&off, &size) in offsets.iter().zip(orbit_sizes) {
            for i in 0..size {
                image[off + i] = off + (i + 1) % size;
            }
        }
        Permutation::from_image(image).expect("rotation is a bijection")
    };
    let powers: Vec<Permutation> = (0..4).map(|t| generator.power(t)).collect();
    let orbit_perms: Vec<Vec<Vec<usize>>> = orbit_sizes
        .iter()
        .map(|&size| {
            let mut all = Vec::new();
            let _ = for_each_permutation(size, &mut |arr| {
                all.push(arr.to_vec());
                ControlFlow::Continue(())
            });
            all
        })
        .collect();

    let pairs: Vec<(usize, usize)> = (0..orbit_sizes.len())
        .flat_map(|a| (a + 1..orbit_sizes.len()).map(move |b| (a, b)))
        .collect();
    let rule_sets: Vec<Vec<PairRule>> = pairs
        .iter()
        .map(|&(a, b)| pair_rules(orbit_sizes[a].min(orbit_sizes[b])))
        .collect();

    let mut report = InvariantFamilyReport {
        orbit_sizes: orbit_sizes.to_vec(),
        configurations: 0,
        valid: 0,
        verified: 0,
        counterexamples: Vec::new(),
    };
    let mut choice = vec![0usize; pairs.len()];
    loop {
        report.configurations += 1;
        let mut relations = Vec::new();
        for (slot, &(a, b)) in pairs.iter().enumerate() {
            pair_relations(
                (offsets[a], orbit_sizes[a]),
                (offsets[b], orbit_sizes[b]),
                rule_sets[slot][choice[slot]],
                &mut relations,
            );
        }
        match Poset::from_relations(total, &relations) {
            Err(Error::Cycle) => {}
            Err(other) => return Err(other),
            Ok(poset) => {
                debug_assert!(matches!(is_automorphism(&poset, &generator), Ok(true)));
                report.valid += 1;
                match z4_witness(&poset, orbit_sizes, &offsets, &orbit_perms, &powers)? {
                    Some(_) => report.verified += 1,
                    None => report.counterexamples.push(poset),
                }
            }
        }
        // Advance the mixed-radix configuration counter.
        let mut slot = 0;
        loop {
            if slot == pairs.len() {
                return Ok(report);
            }
            choice[slot] += 1;
            if choice[slot] < rule_sets[slot].len() {
                break;
            }
            choice[slot] = 0;
            slot += 1;
        }
    }
}

/// First orbit-preserving automorphism outside the induced powers, by
/// brute force over the product of per-orbit permutations.
fn z4_witness(
    poset: &Poset,
    orbit_sizes: &[usize],
    offsets: &[usize],
    orbit_perms: &[Vec<Vec<usize>>],
    powers: &[Permutation],
) -> Result<Option<Permutation>> {
    let total: usize = orbit_sizes.iter().sum();
    let mut pick = vec![0usize; orbit_sizes.len()];
    loop {
        let mut image = vec![0usize; total];
        for (slot, &off) in offsets.iter().enumerate() {
            for (i, &target) in orbit_perms[slot][pick[slot]].iter().enumerate() {
                image[off + i] = off + target;
            }
        }
        let candidate = Permutation::from_image(image).expect("assembled a bijection");
        if !powers.contains(&candidate) && is_automorphism(poset, &candidate)? {
            return Ok(Some(candidate));
        }
        let mut slot = 0;
        loop {
            if slot == pick.len() {
                return Ok(None);
            }
            pick[slot] += 1;
            if pick[slot] < orbit_perms[slot].len() {
                break;
            }
            pick[slot] = 0;
            slot += 1;
        }
    }
}

/// A generator cycle type that failed a constraint it should satisfy.
#[derive(Clone, Debug)]
pub struct ConstraintViolation {
    pub points: usize,
    pub order: u64,
    pub cycle_type: CycleType,
}

/// Outcome of [`verify_lemma_constraints_exhaustive`].
#[derive(Clone, Debug)]
pub struct ConstraintSweep {
    pub limit: usize,
    /// Classes examined across all levels up to the limit.
    pub posets_seen: u64,
    /// Classes with cyclic automorphism group, keyed by its order; only
    /// orders at least 2 are recorded.
    pub cyclic_seen: BTreeMap<u64, u64>,
    pub generators_checked: u64,
    pub violations: Vec<ConstraintViolation>,
}

impl ConstraintSweep {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// For every poset on at most `limit` points whose automorphism group is
/// cyclic of order at least 2, checks that the cycle type of every
/// generator passes both the structural constraints and the weight audit.
pub fn verify_lemma_constraints_exhaustive(
    enumerator: &mut Enumerator,
    limit: usize,
) -> Result<ConstraintSweep> {
    let mut sweep = ConstraintSweep {
        limit,
        posets_seen: 0,
        cyclic_seen: BTreeMap::new(),
        generators_checked: 0,
        violations: Vec::new(),
    };
    for n in 0..=limit {
        let forms = enumerator.forms(n)?;
        sweep.posets_seen += forms.len() as u64;
        let examined = forms
            .par_iter()
            .map(|form| examine_generators(&poset_from_canonical(form)?))
            .collect::<Result<Vec<_>>>()?;
        for (order, checked, bad_types) in examined.into_iter().flatten() {
            *sweep.cyclic_seen.entry(order).or_insert(0) += 1;
            sweep.generators_checked += checked;
            sweep
                .violations
                .extend(bad_types.into_iter().map(|cycle_type| ConstraintViolation {
                    points: n,
                    order,
                    cycle_type,
                }));
        }
    }
    Ok(sweep)
}

type GeneratorFindings = Option<(u64, u64, Vec<CycleType>)>;

fn examine_generators(poset: &Poset) -> Result<GeneratorFindings> {
    let Some(order) = cyclic_order_of(poset)? else {
        return Ok(None);
    };
    if order < 2 {
        return Ok(None);
    }
    // The group is cyclic of modest order, so materializing it is cheap.
    let group = automorphism_group_with(poset, DEFAULT_ELEMENT_CAP, true)?;
    let elements = group.elements().expect("elements requested");
    let mut checked = 0;
    let mut bad = Vec::new();
    for element in elements {
        if element.order() != u128::from(order) {
            continue;
        }
        checked += 1;
        let cycle_type = element.cycle_type();
        let ok = lemma_constraints(&cycle_type, order)?.passed()
            && audit_generator(&cycle_type, order)?.passed();
        if !ok {
            bad.push(cycle_type);
        }
    }
    Ok(Some((order, checked, bad)))
}
