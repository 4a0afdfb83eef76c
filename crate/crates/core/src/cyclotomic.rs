//! Splitting of rational primes in cyclotomic rings `Z[ζ_l]` and in the
//! Kummer extensions `Q(ζ_r, a^(1/r))`, driven by the rational r-th power
//! residue character.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, is_prime_u64, pow_mod_u64};
use crate::error::{Error, Result};

/// Decomposition data `(e, f, g)` of a rational prime in `Z[ζ_l]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingReport {
    pub rational_prime: u64,
    pub conductor: u64,
    /// Ramification index.
    pub e: u64,
    /// Residual degree.
    pub f: u64,
    /// Number of distinct primes above `rational_prime`.
    pub g: u64,
    /// Norm of each prime above, `rational_prime^f`.
    #[serde(with = "crate::serde_big")]
    pub norm: BigUint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SymbolTag {
    Zero,
    One,
    Nontrivial,
}

/// Value of the power residue character `{a / (q)}` for a rational `a`.
///
/// `witness` is `a^((N - 1)/r)` reduced into the prime field `[0, q)`; it is
/// absent when `q | a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolValue {
    pub tag: SymbolTag,
    pub witness: Option<u64>,
}

/// How a prime of `Z[ζ_r]` lying over `q` behaves in the Kummer ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KummerSplitting {
    /// `PA` is the r-th power of a prime of `A`.
    RamifiedPower,
    /// `PA` is a product of r distinct primes.
    SplitsCompletely,
    /// `PA` stays prime.
    Inert,
}

fn require_prime(n: u64, what: &str) -> Result<()> {
    if is_prime_u64(n) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{what} = {n} is not prime")))
    }
}

fn residue_mod(a: &BigInt, m: u64) -> u64 {
    a.mod_floor(&BigInt::from(m))
        .to_u64()
        .expect("residue below a word-sized modulus")
}

fn order_u64(a: u64, n: u64) -> Result<u64> {
    let ord = arith::multiplicative_order(&BigInt::from(a), &BigUint::from(n))?;
    Ok(ord.to_u64().expect("order is below the modulus"))
}

fn totient_u64(n: u64) -> Result<u64> {
    let phi = arith::euler_phi(&arith::factorize(&BigUint::from(n))?);
    Ok(phi.to_u64().expect("totient is below the argument"))
}

/// Splitting of the prime `p` in `Z[ζ_l]`.
///
/// Unramified when `p ∤ l`: `e = 1`, `f = ord_l(p)`, `g = φ(l)/f`. The only
/// ramified conductor supported is `l = p`, which is totally ramified.
pub fn split_prime_in_cyclotomic(p: u64, l: u64) -> Result<SplittingReport> {
    require_prime(p, "p")?;
    if l < 3 {
        return Err(Error::InvalidInput(format!("conductor must be at least 3, got {l}")));
    }
    let (e, f, g) = if l % p != 0 {
        let f = order_u64(p % l, l)?;
        let phi = totient_u64(l)?;
        (1, f, phi / f)
    } else if l == p {
        (p - 1, 1, 1)
    } else {
        return Err(Error::UnsupportedConductor { prime: p, conductor: l });
    };
    Ok(SplittingReport {
        rational_prime: p,
        conductor: l,
        e,
        f,
        g,
        norm: BigUint::from(p).pow(f as u32),
    })
}

/// Euler's criterion: `a^((q-1)/2) = 1 (mod q)`.
pub fn is_quadratic_residue(a: &BigInt, q: u64) -> Result<bool> {
    if q == 2 || !is_prime_u64(q) {
        return Err(Error::InvalidInput(format!("{q} is not an odd prime")));
    }
    let residue = residue_mod(a, q);
    if residue == 0 {
        return Err(Error::NotCoprime { a: a.clone(), n: BigInt::from(q), gcd: BigInt::from(q) });
    }
    Ok(pow_mod_u64(residue, (q - 1) / 2, q) == 1)
}

/// Whether `x^r = a (mod q)` has an integer solution.
///
/// Zero is always an r-th power. Otherwise the r-th powers of `(Z/q)^*` are
/// the subgroup of index `gcd(r, q-1)`, so the test is
/// `a^((q-1)/gcd(r, q-1)) = 1`. When `gcd(r, q-1) = 1` every residue passes.
pub fn rth_power_residue_mod_prime(a: &BigInt, r: u64, q: u64) -> Result<bool> {
    require_prime(r, "r")?;
    require_prime(q, "q")?;
    let a = residue_mod(a, q);
    if a == 0 {
        return Ok(true);
    }
    let d = (q - 1).gcd(&r);
    Ok(pow_mod_u64(a, (q - 1) / d, q) == 1)
}

/// The r-th power residue character of the rational `a` at the primes of
/// `Z[ζ_r]` above `q`.
///
/// With `f = ord_r(q)` each such prime has norm `N = q^f`. Because `a` lies
/// in the prime field of the residue field, `a^((N-1)/r)` only depends on the
/// exponent modulo `q - 1`, and the value lands in `[0, q)`.
pub fn power_residue_symbol_rational(a: &BigInt, r: u64, q: u64) -> Result<SymbolValue> {
    require_prime(r, "r")?;
    require_prime(q, "q")?;
    if q == r {
        return Err(Error::RamifiedModulus(q));
    }
    let base = residue_mod(a, q);
    if base == 0 {
        return Ok(SymbolValue { tag: SymbolTag::Zero, witness: None });
    }
    let f = order_u64(q % r, r)?;
    let norm_minus_one = BigUint::from(q).pow(f as u32) - 1u8;
    debug_assert!((&norm_minus_one % r).is_zero());
    let exponent = (norm_minus_one / r) % (q - 1);
    let exponent = exponent.to_u64().expect("reduced below q - 1");
    let witness = pow_mod_u64(base, exponent, q);
    let tag = if witness == 1 { SymbolTag::One } else { SymbolTag::Nontrivial };
    Ok(SymbolValue { tag, witness: Some(witness) })
}

impl From<SymbolTag> for KummerSplitting {
    fn from(tag: SymbolTag) -> Self {
        match tag {
            SymbolTag::Zero => KummerSplitting::RamifiedPower,
            SymbolTag::One => KummerSplitting::SplitsCompletely,
            SymbolTag::Nontrivial => KummerSplitting::Inert,
        }
    }
}

pub fn classify_kummer_splitting(a: &BigInt, r: u64, q: u64) -> Result<KummerSplitting> {
    Ok(power_residue_symbol_rational(a, r, q)?.tag.into())
}

impl SymbolValue {
    pub fn is_one(&self) -> bool {
        self.tag == SymbolTag::One
    }
}

impl SplittingReport {
    pub fn is_inert(&self) -> bool {
        self.e == 1 && self.g == 1
    }
}
