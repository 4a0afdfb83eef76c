//! Sufficient conditions on a prime triple `(p, q, r)` for `x^4 - q^4 = p y^r`
//! to have no coprime solution with `p ∤ y`, and enumeration of the triples
//! that satisfy all of them.
//!
//! Triples are always stored in `(p, q, r)` order: `p` is the coefficient of
//! `y^r`, `q` the subtracted fourth power, `r` the exponent.

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{self, is_prime_u64, GeneratorTest};
use crate::cyclotomic::{self, SymbolTag};
use crate::error::{Error, Result};

/// Default cap on the number of candidate triples visited by
/// [`enumerate_triples`].
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PrimeTriple {
    pub p: u64,
    pub q: u64,
    pub r: u64,
}

impl PrimeTriple {
    /// A triple whose three entries are all prime.
    pub fn new(p: u64, q: u64, r: u64) -> Result<Self> {
        for (name, v) in [("p", p), ("q", q), ("r", r)] {
            if !is_prime_u64(v) {
                return Err(Error::InvalidInput(format!("{name} = {v} is not prime")));
            }
        }
        Ok(PrimeTriple { p, q, r })
    }
}

/// A congruence verdict with the residue that decided it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueCheck {
    pub residue: u64,
    pub holds: bool,
}

/// A generator verdict. `order` is the order of the element and
/// `group_order` the size of the ambient group; both are absent when the
/// question is undefined (non-prime modulus, element not invertible).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorCheck {
    pub holds: bool,
    #[serde(with = "crate::serde_big::option")]
    pub order: Option<BigUint>,
    #[serde(with = "crate::serde_big::option")]
    pub group_order: Option<BigUint>,
}

impl GeneratorCheck {
    fn undefined() -> Self {
        GeneratorCheck { holds: false, order: None, group_order: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub triple: PrimeTriple,
    /// p, q and r are all prime.
    pub primes: bool,
    /// p, q and r are pairwise distinct.
    pub distinct: bool,
    pub q_not_two: bool,
    /// p ≡ 3 (mod 4).
    pub p_mod4: ResidueCheck,
    /// p ≡ 1 (mod r).
    pub p_mod_r: ResidueCheck,
    /// r ≡ ±3 (mod 8), i.e. r mod 8 ∈ {3, 5}.
    pub r_mod8: ResidueCheck,
    /// p generates U(Z/q^(r-1)).
    pub p_generates: GeneratorCheck,
    /// q generates (Z/r)^*.
    pub q_generates: GeneratorCheck,
    /// 2 is an r-th power residue in Z/q.
    pub two_residue: bool,
    /// 2 is an r-th power in the residue field of Z[ζ_r] at q, i.e. the
    /// power residue symbol {2/(q)} is not a nontrivial root of unity.
    /// Absent when the symbol is undefined.
    pub two_residue_in_residue_field: Option<bool>,
    pub generator_test: GeneratorTest,
    pub all_satisfied: bool,
}

impl ConditionReport {
    /// The individual verdicts whose conjunction is `all_satisfied`.
    pub fn verdicts(&self) -> [(&'static str, bool); 9] {
        [
            ("primes", self.primes),
            ("distinct", self.distinct),
            ("q_not_two", self.q_not_two),
            ("p_mod4", self.p_mod4.holds),
            ("p_mod_r", self.p_mod_r.holds),
            ("r_mod8", self.r_mod8.holds),
            ("p_generates", self.p_generates.holds),
            ("q_generates", self.q_generates.holds),
            ("two_residue", self.two_residue),
        ]
    }
}

fn p_generates(p: u64, q: u64, r: u64, test: GeneratorTest) -> Result<GeneratorCheck> {
    if q == 2 || !is_prime_u64(q) || r < 2 || p % q == 0 {
        return Ok(GeneratorCheck::undefined());
    }
    let k = u32::try_from(r - 1)
        .map_err(|_| Error::InvalidInput(format!("exponent r - 1 = {} too large", r - 1)))?;
    let a = BigInt::from(p);
    let holds = arith::is_generator_mod_prime_power_with(&a, q, k, test)?;
    let order = arith::order_mod_prime_power(&a, q, k, test)?;
    let group_order = arith::euler_phi(&arith::Factorization::prime_power(q, k));
    debug_assert_eq!(holds, order == group_order);
    Ok(GeneratorCheck { holds, order: Some(order), group_order: Some(group_order) })
}

fn q_generates(q: u64, r: u64) -> Result<GeneratorCheck> {
    if !is_prime_u64(r) || q % r == 0 {
        return Ok(GeneratorCheck::undefined());
    }
    let order = arith::multiplicative_order(&BigInt::from(q), &BigUint::from(r))?;
    let group_order = BigUint::from(r - 1);
    Ok(GeneratorCheck { holds: order == group_order, order: Some(order), group_order: Some(group_order) })
}

/// Evaluates every hypothesis for `(p, q, r)` with the default lifted
/// generator test.
pub fn check_conditions(p: u64, q: u64, r: u64) -> Result<ConditionReport> {
    check_conditions_with(p, q, r, GeneratorTest::Lifted)
}

/// Evaluates every hypothesis for `(p, q, r)`. Inputs need not be prime;
/// failures are reported in the flags rather than as errors.
pub fn check_conditions_with(p: u64, q: u64, r: u64, test: GeneratorTest) -> Result<ConditionReport> {
    let primes = is_prime_u64(p) && is_prime_u64(q) && is_prime_u64(r);
    let distinct = p != q && q != r && r != p;
    let q_not_two = q != 2;

    let p_mod4 = ResidueCheck { residue: p % 4, holds: p % 4 == 3 };
    let p_mod_r = match r {
        0 => ResidueCheck { residue: p, holds: p == 1 },
        _ => ResidueCheck { residue: p % r, holds: p % r == 1 % r },
    };
    let r_mod8 = ResidueCheck { residue: r % 8, holds: matches!(r % 8, 3 | 5) };

    let p_generates = p_generates(p, q, r, test)?;
    let q_generates = q_generates(q, r)?;

    let two = BigInt::from(2u8);
    let both_prime = is_prime_u64(q) && is_prime_u64(r);
    let two_residue = both_prime && cyclotomic::rth_power_residue_mod_prime(&two, r, q)?;
    let two_residue_in_residue_field = if both_prime && q != r {
        let symbol = cyclotomic::power_residue_symbol_rational(&two, r, q)?;
        Some(symbol.tag != SymbolTag::Nontrivial)
    } else {
        None
    };

    let mut report = ConditionReport {
        triple: PrimeTriple { p, q, r },
        primes,
        distinct,
        q_not_two,
        p_mod4,
        p_mod_r,
        r_mod8,
        p_generates,
        q_generates,
        two_residue,
        two_residue_in_residue_field,
        generator_test: test,
        all_satisfied: false,
    };
    report.all_satisfied = report.verdicts().iter().all(|(_, v)| *v);
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationOptions {
    /// Upper limit on candidate triples, and on the sieve length.
    pub budget: u64,
    pub generator_test: GeneratorTest,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions { budget: DEFAULT_ENUMERATION_BUDGET, generator_test: GeneratorTest::Lifted }
    }
}

/// All triples with `p <= p_max`, `q <= q_max`, `r <= r_max` satisfying every
/// hypothesis, sorted by `(p, q, r)`.
pub fn enumerate_triples(p_max: u64, q_max: u64, r_max: u64) -> Result<Vec<ConditionReport>> {
    enumerate_triples_with(p_max, q_max, r_max, &EnumerationOptions::default())
}

pub fn enumerate_triples_with(
    p_max: u64,
    q_max: u64,
    r_max: u64,
    opts: &EnumerationOptions,
) -> Result<Vec<ConditionReport>> {
    if p_max < 2 || q_max < 2 || r_max < 2 {
        return Err(Error::InvalidInput("enumeration bounds must be at least 2".into()));
    }
    let longest = p_max.max(q_max).max(r_max);
    if longest > opts.budget {
        return Err(Error::BudgetExceeded { needed: u128::from(longest), budget: opts.budget });
    }
    let primes = arith::primes_up_to(longest);
    let upto = |bound: u64| &primes[..primes.partition_point(|&x| x <= bound)];
    let (ps, qs, rs) = (upto(p_max), upto(q_max), upto(r_max));
    let needed = ps.len() as u128 * qs.len() as u128 * rs.len() as u128;
    if needed > u128::from(opts.budget) {
        return Err(Error::BudgetExceeded { needed, budget: opts.budget });
    }

    // the congruence conditions are cheap and necessary; the generator and
    // residue tests only run on survivors
    let candidates: Vec<PrimeTriple> = ps
        .iter()
        .filter(|&&p| p % 4 == 3)
        .flat_map(|&p| {
            qs.iter().filter(|&&q| q != 2).flat_map(move |&q| {
                rs.iter()
                    .filter(move |&&r| matches!(r % 8, 3 | 5) && p % r == 1 && p != q && q != r)
                    .map(move |&r| PrimeTriple { p, q, r })
            })
        })
        .collect();

    let mut out: Vec<ConditionReport> = candidates
        .par_iter()
        .map(|t| check_conditions_with(t.p, t.q, t.r, opts.generator_test))
        .filter(|res| res.as_ref().map_or(true, |rep| rep.all_satisfied))
        .collect::<Result<_>>()?;
    out.sort_by_key(|rep| rep.triple);
    Ok(out)
}

impl GeneratorCheck {
    /// The witness order divides the group order whenever both are defined.
    pub fn order_divides_group(&self) -> bool {
        match (&self.order, &self.group_order) {
            (Some(o), Some(g)) => (g % o).is_zero(),
            _ => true,
        }
    }
}
