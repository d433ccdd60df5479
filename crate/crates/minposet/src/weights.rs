//! Prime-power weights of permutation cycles and the point-count audit.
//!
//! A cycle of length `l` in a permutation of order `n` spreads its points
//! over the prime powers dividing `n`: the weights `w_q` are nonnegative
//! rationals satisfying `sum of w_q * q = l` in every rule branch. Summed
//! over the cycles of a generator of a cyclic automorphism group they obey
//! sharp inequalities, and the bounds of those inequalities add up to the
//! minimum number of points computed by [`beta`](crate::constructions::beta).

use std::collections::BTreeMap;
use std::fmt;

use num::rational::Ratio;
use num::Zero;

use crate::constructions::{b_value, exactly_divides, factorize};
use crate::error::{Error, Result};
use crate::perm::CycleType;

/// Exact rational weight.
pub type Rat = Ratio<i64>;

fn rat(num: i64, den: i64) -> Rat {
    Ratio::new(num, den)
}

fn int(n: u64) -> Rat {
    Ratio::from_integer(n as i64)
}

/// The weights of a single cycle, indexed by prime power.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightVector {
    cycle_length: u64,
    modulus: u64,
    weights: BTreeMap<u64, Rat>,
}

impl WeightVector {
    pub fn cycle_length(&self) -> u64 {
        self.cycle_length
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// The weight of the prime power `q`; zero unless a rule assigned one.
    pub fn get(&self, q: u64) -> Rat {
        self.weights.get(&q).copied().unwrap_or_else(Rat::zero)
    }

    /// The nonzero weights, keyed by prime power.
    pub fn nonzero(&self) -> &BTreeMap<u64, Rat> {
        &self.weights
    }

    /// `sum of w_q * q` over all prime powers, which equals the cycle
    /// length in every rule branch.
    pub fn weighted_sum(&self) -> Rat {
        self.weights.iter().map(|(&q, &w)| w * int(q)).sum()
    }
}

/// Assigns the weights of one cycle of length `l` in a permutation of
/// order `n`. Requires `l >= 2` and `l | n`.
///
/// The lengths 6, 12, 10 and 14 have ad hoc rules; every other length
/// splits `l / q` evenly among its maximal prime-power divisors `q`,
/// except that a bare factor of 2 defers to the prime power 4, at half
/// value, whenever 4 divides `n`.
pub fn weight_vector(l: u64, n: u64) -> Result<WeightVector> {
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    if l < 2 {
        return Err(Error::CycleTooShort(l));
    }
    if !n.is_multiple_of(l) {
        return Err(Error::LengthNotDividing { length: l, modulus: n });
    }
    let two_exact = exactly_divides(2, 1, n);
    let three_exact = exactly_divides(3, 1, n);
    let mut weights = BTreeMap::new();
    match l {
        6 => {
            if three_exact {
                weights.insert(3, rat(2, 1));
            } else if two_exact {
                weights.insert(2, rat(3, 1));
            } else {
                weights.insert(4, rat(3, 2));
            }
        }
        12 => {
            if three_exact {
                weights.insert(3, rat(4, 1));
            } else {
                weights.insert(4, rat(3, 1));
            }
        }
        10 | 14 => {
            let p = (l / 2) as i64;
            if two_exact {
                weights.insert(2, rat(1, 1));
            } else {
                weights.insert(4, rat(1, 2));
            }
            weights.insert(l / 2, rat(2 * (p - 1), p));
        }
        _ => {
            let parts = factorize(l)?.prime_power_parts();
            let k = parts.len() as i64;
            for &q in &parts {
                let rest = (l / q) as i64;
                if q == 2 && !two_exact {
                    // l is even and divides n, so 2 | n; since 2 does not
                    // exactly divide n, 4 does divide it.
                    weights.insert(4, rat(rest, 2 * k));
                } else {
                    weights.insert(q, rat(rest, k));
                }
            }
        }
    }
    let vector = WeightVector {
        cycle_length: l,
        modulus: n,
        weights,
    };
    debug_assert_eq!(vector.weighted_sum(), int(l));
    Ok(vector)
}

/// The inequality a single [`AuditCheck`] evaluates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundKind {
    /// `sum of w_q >= b(q)` for one exact prime-power divisor `q` of `n`.
    Plain { q: u64 },
    /// `sum of 2 w_2 + 3 w_3 >= 11`; applies when 2 and 3 both exactly
    /// divide `n`.
    CombinedTwoThree,
    /// `sum of 4 w_4 + 3 w_3 >= 20`; applies when 4 and 3 both exactly
    /// divide `n`.
    CombinedFourThree,
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundKind::Plain { q } => write!(f, "sum w[{q}]"),
            BoundKind::CombinedTwoThree => write!(f, "sum 2 w[2] + 3 w[3]"),
            BoundKind::CombinedFourThree => write!(f, "sum 4 w[4] + 3 w[3]"),
        }
    }
}

/// One evaluated inequality: the weight sum reached, the bound it must
/// meet, and whether it does.
#[derive(Clone, Debug)]
pub struct AuditCheck {
    pub kind: BoundKind,
    pub value: Rat,
    pub bound: u64,
    pub satisfied: bool,
}

/// The outcome of auditing a cycle type against the weight inequalities.
#[derive(Clone, Debug)]
pub struct AuditReport {
    n: u64,
    cycle_type: CycleType,
    sums: BTreeMap<u64, Rat>,
    checks: Vec<AuditCheck>,
    lower_bound_points: u64,
}

impl AuditReport {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn cycle_type(&self) -> &CycleType {
        &self.cycle_type
    }

    /// For each prime power `q`, the sum of `w_q` over all cycles.
    pub fn sums(&self) -> &BTreeMap<u64, Rat> {
        &self.sums
    }

    pub fn sum(&self, q: u64) -> Rat {
        self.sums.get(&q).copied().unwrap_or_else(Rat::zero)
    }

    pub fn checks(&self) -> &[AuditCheck] {
        &self.checks
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|check| check.satisfied)
    }

    /// The point count the inequalities certify: any poset whose
    /// automorphism group is cyclic of order `n` has at least this many
    /// points. The bounds of the checks add up to exactly this number,
    /// with the combined checks contributing their joint bound once.
    pub fn lower_bound_points(&self) -> u64 {
        self.lower_bound_points
    }
}

/// Audits the cycle type of a candidate generator: sums the weights of its
/// cycles and evaluates every inequality that applies to `n`.
///
/// Each exact prime-power divisor `q` of `n` other than 2 and 4 gets the
/// plain check against `b(q)`; so do 2 and 4 unless 3 exactly divides `n`,
/// in which case the applicable combined check replaces them. The cycle
/// type must have order `n` (the lcm of its lengths).
pub fn audit_generator(ct: &CycleType, n: u64) -> Result<AuditReport> {
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    let lcm = ct.order();
    if lcm != u128::from(n) {
        return Err(Error::LcmMismatch { lcm, modulus: n });
    }
    let mut sums: BTreeMap<u64, Rat> = BTreeMap::new();
    for &l in ct.lengths() {
        for (&q, &w) in weight_vector(l, n)?.nonzero() {
            *sums.entry(q).or_insert_with(Rat::zero) += w;
        }
    }
    let sum_of = |q: u64| sums.get(&q).copied().unwrap_or_else(Rat::zero);
    let three_exact = exactly_divides(3, 1, n);
    let combined_two = three_exact && exactly_divides(2, 1, n);
    let combined_four = three_exact && exactly_divides(2, 2, n);

    let mut checks = Vec::new();
    let mut lower_bound = 0;
    for q in factorize(n)?.prime_power_parts() {
        if (q == 2 || q == 4) && three_exact {
            // Folded into the combined check below.
            continue;
        }
        let bound = b_value(q)?;
        checks.push(AuditCheck {
            kind: BoundKind::Plain { q },
            value: sum_of(q),
            bound,
            satisfied: sum_of(q) >= int(bound),
        });
        if q != 3 || !(combined_two || combined_four) {
            lower_bound += bound * q;
        }
    }
    if combined_two {
        let value = rat(2, 1) * sum_of(2) + rat(3, 1) * sum_of(3);
        checks.push(AuditCheck {
            kind: BoundKind::CombinedTwoThree,
            value,
            bound: 11,
            satisfied: value >= int(11),
        });
        lower_bound += 11;
    }
    if combined_four {
        let value = rat(4, 1) * sum_of(4) + rat(3, 1) * sum_of(3);
        checks.push(AuditCheck {
            kind: BoundKind::CombinedFourThree,
            value,
            bound: 20,
            satisfied: value >= int(20),
        });
        lower_bound += 20;
    }
    Ok(AuditReport {
        n,
        cycle_type: ct.clone(),
        sums,
        checks,
        lower_bound_points: lower_bound,
    })
}

/// The structural constraint a single [`LemmaCheck`] evaluates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LemmaKind {
    /// Each exact prime-power divisor `q != 2` of `n` needs at least two
    /// cycle lengths divisible by `q`.
    TwoMultiples { q: u64 },
    /// For `p` in {3, 5, 7} exactly dividing `n`: a `p`-cycle alongside a
    /// second cycle of length `p k` with `p` not dividing `k` forces a
    /// third length divisible by `p`.
    ThirdMultiple { p: u64 },
    /// Two 4-cycles force a third length divisible by 4, or two further
    /// even lengths.
    FourCycleCompanions,
}

impl fmt::Display for LemmaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LemmaKind::TwoMultiples { q } => {
                write!(f, "at least two lengths divisible by {q}")
            }
            LemmaKind::ThirdMultiple { p } => {
                write!(f, "a {p}-cycle and a companion need a third multiple of {p}")
            }
            LemmaKind::FourCycleCompanions => {
                write!(f, "two 4-cycles need a third multiple of 4 or two more even lengths")
            }
        }
    }
}

/// One evaluated structural constraint. An untriggered check is satisfied
/// vacuously.
#[derive(Clone, Debug)]
pub struct LemmaCheck {
    pub kind: LemmaKind,
    pub triggered: bool,
    pub satisfied: bool,
}

/// The outcome of checking a cycle type against the structural
/// constraints on generators.
#[derive(Clone, Debug)]
pub struct LemmaReport {
    n: u64,
    cycle_type: CycleType,
    checks: Vec<LemmaCheck>,
}

impl LemmaReport {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn cycle_type(&self) -> &CycleType {
        &self.cycle_type
    }

    pub fn checks(&self) -> &[LemmaCheck] {
        &self.checks
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|check| check.satisfied)
    }
}

/// Checks the structural constraints that the cycle type of a generator
/// of a cyclic automorphism group must satisfy. The report contains one
/// check per constraint applicable to `n`; the cycle type must have order
/// `n`.
pub fn lemma_constraints(ct: &CycleType, n: u64) -> Result<LemmaReport> {
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    let lcm = ct.order();
    if lcm != u128::from(n) {
        return Err(Error::LcmMismatch { lcm, modulus: n });
    }
    let lengths = ct.lengths();
    let count_multiples = |d: u64| lengths.iter().filter(|&&l| l % d == 0).count();

    let mut checks = Vec::new();
    for q in factorize(n)?.prime_power_parts() {
        if q == 2 {
            continue;
        }
        checks.push(LemmaCheck {
            kind: LemmaKind::TwoMultiples { q },
            triggered: true,
            satisfied: count_multiples(q) >= 2,
        });
    }
    for p in [3, 5, 7] {
        if !exactly_divides(p, 1, n) {
            continue;
        }
        let has_p_cycle = lengths.contains(&p);
        // Cycles of length p k with p not dividing k; the p-cycle itself
        // is one of them, a second one completes the trigger.
        let bare = lengths
            .iter()
            .filter(|&&l| l % p == 0 && (l / p) % p != 0)
            .count();
        let triggered = has_p_cycle && bare >= 2;
        checks.push(LemmaCheck {
            kind: LemmaKind::ThirdMultiple { p },
            triggered,
            satisfied: !triggered || count_multiples(p) >= 3,
        });
    }
    if n.is_multiple_of(4) {
        let triggered = lengths.iter().filter(|&&l| l == 4).count() >= 2;
        let satisfied =
            !triggered || count_multiples(4) >= 3 || count_multiples(2) >= 4;
        checks.push(LemmaCheck {
            kind: LemmaKind::FourCycleCompanions,
            triggered,
            satisfied,
        });
    }
    Ok(LemmaReport {
        n,
        cycle_type: ct.clone(),
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::beta;

    fn ct(lengths: &[u64]) -> CycleType {
        CycleType::new(lengths.to_vec(), 0)
    }

    #[test]
    fn weight_rules_by_branch() {
        // Length 6 under the three possible moduli classes.
        assert_eq!(weight_vector(6, 6).unwrap().get(3), rat(2, 1));
        assert_eq!(weight_vector(6, 12).unwrap().get(3), rat(2, 1));
        assert_eq!(weight_vector(6, 18).unwrap().get(2), rat(3, 1));
        assert_eq!(weight_vector(6, 36).unwrap().get(4), rat(3, 2));
        // Length 12.
        assert_eq!(weight_vector(12, 12).unwrap().get(3), rat(4, 1));
        assert_eq!(weight_vector(12, 36).unwrap().get(4), rat(3, 1));
        // Lengths 10 and 14.
        let w = weight_vector(10, 10).unwrap();
        assert_eq!((w.get(2), w.get(5)), (rat(1, 1), rat(8, 5)));
        let w = weight_vector(10, 20).unwrap();
        assert_eq!((w.get(4), w.get(5)), (rat(1, 2), rat(8, 5)));
        let w = weight_vector(14, 14).unwrap();
        assert_eq!((w.get(2), w.get(7)), (rat(1, 1), rat(12, 7)));
        // General case: prime powers weigh 1, composites split evenly.
        assert_eq!(weight_vector(9, 9).unwrap().get(9), rat(1, 1));
        let w = weight_vector(15, 15).unwrap();
        assert_eq!((w.get(3), w.get(5)), (rat(5, 2), rat(3, 2)));
        // A bare 2 defers to 4 when 4 divides the modulus.
        assert_eq!(weight_vector(2, 2).unwrap().get(2), rat(1, 1));
        let w = weight_vector(2, 4).unwrap();
        assert_eq!((w.get(2), w.get(4)), (rat(0, 1), rat(1, 2)));
        let w = weight_vector(30, 60).unwrap();
        assert_eq!(w.get(4), rat(15, 6));
        assert_eq!(w.get(3), rat(10, 3));
        assert_eq!(w.get(5), rat(6, 3));
    }

    #[test]
    fn weight_vector_validates_input() {
        assert!(matches!(
            weight_vector(1, 5),
            Err(Error::CycleTooShort(1))
        ));
        assert!(matches!(
            weight_vector(3, 5),
            Err(Error::LengthNotDividing {
                length: 3,
                modulus: 5
            })
        ));
        assert!(matches!(weight_vector(2, 0), Err(Error::ZeroModulus)));
    }

    #[test]
    fn weighted_sum_equals_length() {
        for n in [6, 12, 18, 36, 10, 20, 14, 28, 60, 120, 2520] {
            for l in 2..=n {
                if n % l != 0 {
                    continue;
                }
                let w = weight_vector(l, n).unwrap();
                assert_eq!(w.weighted_sum(), int(l), "l={l} n={n}");
            }
        }
    }

    #[test]
    fn support_is_parts_of_length_or_four() {
        for n in [12u64, 40, 60, 90, 2520] {
            for l in 2..=n {
                if n % l != 0 {
                    continue;
                }
                let parts = factorize(l).unwrap().prime_power_parts();
                for (&q, &w) in weight_vector(l, n).unwrap().nonzero() {
                    assert!(w >= Rat::zero());
                    assert!(parts.contains(&q) || q == 4, "l={l} n={n} q={q}");
                }
            }
        }
    }

    #[test]
    fn audit_accepts_the_tight_example() {
        let report = audit_generator(&ct(&[6, 6, 4, 4]), 12).unwrap();
        assert!(report.passed());
        assert_eq!(report.lower_bound_points(), 20);
        assert_eq!(report.sum(3), rat(4, 1));
        assert_eq!(report.sum(4), rat(2, 1));
        let combined = report
            .checks()
            .iter()
            .find(|c| c.kind == BoundKind::CombinedFourThree)
            .unwrap();
        assert_eq!(combined.value, int(20));
        assert_eq!(combined.bound, 20);
    }

    #[test]
    fn audit_rejects_two_three_cycles() {
        let report = audit_generator(&ct(&[3, 3]), 3).unwrap();
        assert!(!report.passed());
        assert_eq!(report.lower_bound_points(), 9);
        assert_eq!(report.sum(3), rat(2, 1));
    }

    #[test]
    fn audit_accepts_doubled_prime_powers() {
        for q in [8, 9, 25, 16, 27] {
            let report = audit_generator(&ct(&[q, q]), q).unwrap();
            assert!(report.passed(), "q={q}");
            assert_eq!(report.sum(q), rat(2, 1));
        }
    }

    #[test]
    fn audit_requires_matching_order() {
        assert!(matches!(
            audit_generator(&ct(&[3, 3]), 6),
            Err(Error::LcmMismatch { lcm: 3, modulus: 6 })
        ));
    }

    #[test]
    fn audit_checks_three_separately_from_combined() {
        // The combined two-three bound alone would tolerate this type;
        // the plain check on 3 rejects it.
        let report = audit_generator(&ct(&[6, 2, 2, 2]), 6).unwrap();
        assert!(!report.passed());
        let plain = report
            .checks()
            .iter()
            .find(|c| c.kind == (BoundKind::Plain { q: 3 }))
            .unwrap();
        assert!(!plain.satisfied);
        let combined = report
            .checks()
            .iter()
            .find(|c| c.kind == BoundKind::CombinedTwoThree)
            .unwrap();
        assert!(combined.satisfied);
    }

    #[test]
    fn lower_bound_matches_beta_everywhere() {
        for n in 1..=400 {
            // Any cycle type of the right order gives the same bound; the
            // maximal prime-power divisors themselves are one.
            let parts = factorize(n).unwrap().prime_power_parts();
            let report = audit_generator(&CycleType::new(parts, 0), n).unwrap();
            assert_eq!(report.lower_bound_points(), beta(n).unwrap(), "n={n}");
        }
    }

    #[test]
    fn lemma_checks_on_known_types() {
        // Two 3-cycles alone: the pair triggers the third-multiple rule.
        let report = lemma_constraints(&ct(&[3, 3]), 3).unwrap();
        assert!(!report.passed());
        // A 3-cycle next to a 6-cycle with nothing else fails too.
        let report = lemma_constraints(&ct(&[3, 6]), 6).unwrap();
        assert!(!report.passed());
        let failing = report.checks().iter().find(|c| !c.satisfied).unwrap();
        assert_eq!(failing.kind, LemmaKind::ThirdMultiple { p: 3 });
        // Three 3-cycles and a 2-cycle: the minimal type for order 6.
        let report = lemma_constraints(&ct(&[3, 3, 3, 2]), 6).unwrap();
        assert!(report.passed());
        // Two 4-cycles demand companions...
        let report = lemma_constraints(&ct(&[4, 4]), 4).unwrap();
        assert!(!report.passed());
        // ...which two even lengths provide...
        let report = lemma_constraints(&ct(&[4, 4, 2, 2]), 4).unwrap();
        assert!(report.passed());
        // ...as does a third multiple of 4.
        let report = lemma_constraints(&ct(&[4, 4, 4]), 4).unwrap();
        assert!(report.passed());
        // A 6-cycle and a 9-cycle: only one length divisible by 9.
        let report = lemma_constraints(&ct(&[6, 9]), 18).unwrap();
        assert!(!report.passed());
        let failing = report.checks().iter().find(|c| !c.satisfied).unwrap();
        assert_eq!(failing.kind, LemmaKind::TwoMultiples { q: 9 });
    }

    #[test]
    fn lemma_third_multiple_only_for_exact_divisors() {
        // When 9 divides the order, the third-multiple rule for 3 does
        // not apply at all.
        let report = lemma_constraints(&ct(&[3, 9]), 9).unwrap();
        assert!(!report
            .checks()
            .iter()
            .any(|c| matches!(c.kind, LemmaKind::ThirdMultiple { .. })));
        // A lone p-cycle does not trigger the rule either.
        let report = lemma_constraints(&ct(&[5, 2]), 10).unwrap();
        let third = report
            .checks()
            .iter()
            .find(|c| c.kind == (LemmaKind::ThirdMultiple { p: 5 }))
            .unwrap();
        assert!(!third.triggered && third.satisfied);
    }

    #[test]
    fn lemma_minimal_types_pass() {
        // The generator types of the minimal constructions.
        for (lengths, n) in [
            (&[2][..], 2),
            (&[3, 3, 3], 3),
            (&[4, 4, 4], 4),
            (&[5, 5, 5], 5),
            (&[3, 3, 3, 2], 6),
            (&[7, 7, 7], 7),
            (&[8, 8], 8),
            (&[6, 6, 4, 4], 12),
        ] {
            let report = lemma_constraints(&ct(lengths), n).unwrap();
            assert!(report.passed(), "n={n}");
            let audit = audit_generator(&ct(lengths), n).unwrap();
            assert!(audit.passed(), "n={n}");
        }
    }
}
