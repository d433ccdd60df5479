//! Minimum-size posets with cyclic automorphism group.
//!
//! `minimal_poset(n)` realizes the cyclic group of order n on `beta(n)`
//! points as an ordinal sum of prime-power blocks: a two-point antichain for
//! 2, a three-level fence for 3, 4, 5 and 7, a two-level circulant for prime
//! powers of at least 8, and one special 20-point block that fuses the
//! blocks for 4 and 3 whenever both would otherwise appear.

use crate::error::{Error, Result};
use crate::poset::{Poset, MAX_POINTS};

/// A number as its sorted list of `(prime, exponent)` pairs.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Factorization {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn n(&self) -> u64 {
        self.n
    }

    /// Prime powers in increasing prime order.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// The maximal prime-power divisors `p^r` of n, in increasing prime order.
    pub fn prime_power_parts(&self) -> Vec<u64> {
        self.factors.iter().map(|&(p, r)| p.pow(r)).collect()
    }

    pub fn exponent_of(&self, p: u64) -> u32 {
        self.factors.iter().find(|&&(q, _)| q == p).map_or(0, |&(_, r)| r)
    }
}

pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    let mut rest = n;
    let mut factors = Vec::new();
    let mut p: u64 = 2;
    while p * p <= rest {
        if rest.is_multiple_of(p) {
            let mut r = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                r += 1;
            }
            factors.push((p, r));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(Factorization { n, factors })
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n).is_ok_and(|f| f.factors() == [(n, 1)])
}

/// True when `p^r` divides n but `p^(r+1)` does not.
pub fn exactly_divides(p: u64, r: u32, n: u64) -> bool {
    assert!(p >= 2 && r >= 1);
    let q = (p as u128).pow(r);
    let n = n as u128;
    n.is_multiple_of(q) && !n.is_multiple_of(q * p as u128)
}

/// Number of cycles of length q that a generator must spend on the prime
/// power q: 0 for 1, 1 for 2, 3 for 3, 4, 5 and 7, and 2 for every other
/// prime power.
pub fn b_value(q: u64) -> Result<u64> {
    if q == 1 {
        return Ok(0);
    }
    let f = factorize(q)?;
    if f.factors().len() != 1 {
        return Err(Error::NotPrimePower(q));
    }
    Ok(match q {
        2 => 1,
        3 | 4 | 5 | 7 => 3,
        _ => 2,
    })
}

/// Minimum number of points of a poset whose automorphism group is cyclic
/// of order n: the sum of `b(q) * q` over the maximal prime-power divisors
/// q of n, minus 1 when 3 and 4 both exactly divide n.
pub fn beta(n: u64) -> Result<u64> {
    let f = factorize(n)?;
    let mut total = 0;
    for q in f.prime_power_parts() {
        total += b_value(q)? * q;
    }
    if fused_twelve(&f) {
        total -= 1;
    }
    Ok(total)
}

/// The 20-point block replaces the separate blocks for 4 and 3 exactly when
/// 4 and 3 are both maximal prime-power divisors of n.
fn fused_twelve(f: &Factorization) -> bool {
    f.exponent_of(2) == 2 && f.exponent_of(3) == 1
}

/// Three-level fence on `Z_n x {0,1,2}`: chains `(i,0) < (i,1) < (i,2)`
/// linked by `(i,0) < (i+1,2)`. Its automorphism group is cyclic of order n
/// for n in {3, 4, 5, 7}. Point `(i, level)` has index `3 * i + level`.
pub fn frucht_poset(n: u64) -> Result<Poset> {
    if n < 3 {
        return Err(Error::ParameterTooSmall { n, min: 3 });
    }
    let points = check_points(3 * n)?;
    let idx = |i: u64, level: u64| (3 * i + level) as usize;
    let mut rels = Vec::with_capacity(points);
    let mut labels = Vec::with_capacity(points);
    for i in 0..n {
        rels.push((idx(i, 0), idx(i, 1)));
        rels.push((idx(i, 1), idx(i, 2)));
        rels.push((idx(i, 0), idx((i + 1) % n, 2)));
        for level in 0..3 {
            labels.push(format!("({i},{level})"));
        }
    }
    Ok(Poset::from_relations(points, &rels)?.with_labels(labels))
}

/// Two-level poset on `Z_n x {0,1}`: `i < j'` exactly when `j - i mod n`
/// lies in `shifts`. Lower point i has index i, upper point `j'` has index
/// `n + j`.
pub fn circulant_two_level(n: u64, shifts: &[u64]) -> Result<Poset> {
    if n < 1 {
        return Err(Error::ParameterTooSmall { n, min: 1 });
    }
    let points = check_points(2 * n)?;
    let mut rels = Vec::new();
    for i in 0..n {
        for &s in shifts {
            rels.push((i as usize, (n + (i + s) % n) as usize));
        }
    }
    let mut labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    labels.extend((0..n).map(|i| format!("{i}'")));
    Ok(Poset::from_relations(points, &rels)?.with_labels(labels))
}

/// The shift set whose two-level circulant is rigid relative to the
/// rotation action for every n of at least 8.
pub const CIRCULANT_SHIFTS: [u64; 4] = [0, 1, 2, 4];

/// A poset on `b(p^r) * p^r` points with cyclic automorphism group of order
/// `p^r`. `r = 0` encodes the trivial group on the empty poset.
pub fn prime_power_poset(p: u64, r: u32) -> Result<Poset> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if r == 0 {
        return Ok(Poset::empty());
    }
    let q = (p as u128).pow(r);
    if q > MAX_POINTS as u128 {
        return Err(Error::TooManyPoints { n: q as usize, max: MAX_POINTS });
    }
    let q = q as u64;
    match q {
        2 => Ok(Poset::antichain(2).with_labels(vec!["0".into(), "1".into()])),
        3 | 4 | 5 | 7 => frucht_poset(q),
        _ => circulant_two_level(q, &CIRCULANT_SHIFTS),
    }
}

/// The 20-point poset with cyclic automorphism group of order 12.
///
/// Four orbits: A = Z6 (indices 0-5), A' = Z6 (6-11), B = Z4 (12-15) and
/// B' = Z4 (16-19), written i, i', i'' and i'''. Relations: i < j' when
/// `j - i mod 6` is 0, 1 or 3; i'' < j''' when `j - i mod 4` is 0 or 1;
/// i''' < j' and i'' < j when j - i is even; and i'' < j' always. The
/// rotation that adds 1 in every orbit generates the group; its cycle type
/// is {6,6,4,4}.
pub fn z12_poset() -> Poset {
    let a = |i: u64| i as usize;
    let a1 = |j: u64| (6 + j) as usize;
    let b = |i: u64| (12 + i) as usize;
    let b1 = |j: u64| (16 + j) as usize;
    let mut rels = Vec::new();
    for i in 0..6 {
        for j in 0..6 {
            if matches!((j + 6 - i) % 6, 0 | 1 | 3) {
                rels.push((a(i), a1(j)));
            }
        }
    }
    for i in 0..4 {
        for j in 0..4 {
            if matches!((j + 4 - i) % 4, 0 | 1) {
                rels.push((b(i), b1(j)));
            }
        }
    }
    for i in 0..4u64 {
        for j in 0..6u64 {
            if (i + j) % 2 == 0 {
                rels.push((b1(i), a1(j)));
                rels.push((b(i), a(j)));
            }
            rels.push((b(i), a1(j)));
        }
    }
    let mut labels: Vec<String> = (0..6).map(|i| format!("{i}")).collect();
    labels.extend((0..6).map(|j| format!("{j}'")));
    labels.extend((0..4).map(|i| format!("{i}''")));
    labels.extend((0..4).map(|j| format!("{j}'''")));
    Poset::from_relations(20, &rels)
        .expect("the fixed relation table is a valid order")
        .with_labels(labels)
}

/// A poset on exactly `beta(n)` points whose automorphism group is cyclic
/// of order n: the ordinal sum of the prime-power blocks in increasing
/// prime order, with the blocks for 4 and 3 fused into the 20-point block
/// (at the position of the 4-block) when both occur.
pub fn minimal_poset(n: u64) -> Result<Poset> {
    let f = factorize(n)?;
    let fuse = fused_twelve(&f);
    let mut parts = Vec::new();
    for &(p, r) in f.factors() {
        if fuse && p == 2 {
            parts.push(z12_poset());
        } else if fuse && p == 3 {
            continue;
        } else {
            parts.push(prime_power_poset(p, r)?);
        }
    }
    Poset::ordinal_sum(&parts)
}

fn check_points(points: u64) -> Result<usize> {
    if points as usize > MAX_POINTS {
        Err(Error::TooManyPoints { n: points as usize, max: MAX_POINTS })
    } else {
        Ok(points as usize)
    }
}
