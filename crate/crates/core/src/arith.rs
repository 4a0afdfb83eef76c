//! Exact integer arithmetic and the elementary number-theoretic primitives
//! used by the other modules.
//!
//! Everything is arbitrary precision. Values that fit in a machine word take
//! a `u64`/`u128` fast path; results are identical either way.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, RandBigInt, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Miller-Rabin rounds used above 2^64.
pub const DEFAULT_MR_ROUNDS: u32 = 40;

/// Witnesses that make Miller-Rabin deterministic for every n < 3.3 * 10^24.
const DETERMINISTIC_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

const MR_SEED: u64 = 0x6b75_6d6d_6572_3471;

/// Work limits for [`factorize_with_budget`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorBudget {
    /// Largest prime tried by trial division.
    pub trial_bound: u64,
    /// Total polynomial evaluations allowed across all rho attempts.
    pub rho_steps: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget { trial_bound: 1_000_000, rho_steps: 100_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PrimePower {
    #[serde(with = "crate::serde_big")]
    pub prime: BigUint,
    pub exponent: u32,
}

/// A positive integer together with its prime factorization.
///
/// Primes are strictly increasing and every exponent is at least one. The
/// empty factor list represents 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    #[serde(with = "crate::serde_big")]
    value: BigUint,
    factors: Vec<PrimePower>,
}

impl Factorization {
    pub fn one() -> Self {
        Factorization { value: BigUint::one(), factors: Vec::new() }
    }

    /// `prime^exponent`. The caller guarantees `prime` is prime.
    pub fn prime_power(prime: u64, exponent: u32) -> Self {
        debug_assert!(is_prime_u64(prime));
        if exponent == 0 {
            return Self::one();
        }
        let p = BigUint::from(prime);
        Factorization {
            value: p.pow(exponent),
            factors: vec![PrimePower { prime: p, exponent }],
        }
    }

    /// Builds a factorization from `(prime, exponent)` pairs, checking every
    /// invariant.
    pub fn from_factors(pairs: impl IntoIterator<Item = (BigUint, u32)>) -> Result<Self> {
        let mut factors: Vec<PrimePower> = Vec::new();
        let mut value = BigUint::one();
        for (prime, exponent) in pairs {
            if exponent == 0 {
                return Err(Error::InvalidInput(format!("exponent of {prime} is zero")));
            }
            if let Some(last) = factors.last() {
                if last.prime >= prime {
                    return Err(Error::InvalidInput("primes must be strictly increasing".into()));
                }
            }
            if !is_prime(&prime) {
                return Err(Error::InvalidInput(format!("{prime} is not prime")));
            }
            value *= prime.pow(exponent);
            factors.push(PrimePower { prime, exponent });
        }
        Ok(Factorization { value, factors })
    }

    fn from_map(map: BTreeMap<BigUint, u32>) -> Self {
        let mut value = BigUint::one();
        let factors = map
            .into_iter()
            .filter(|(_, e)| *e > 0)
            .map(|(prime, exponent)| {
                value *= prime.pow(exponent);
                PrimePower { prime, exponent }
            })
            .collect();
        Factorization { value, factors }
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn factors(&self) -> &[PrimePower] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.factors.iter().map(|f| &f.prime)
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// Factorization of the product `self * other`.
    pub fn multiply(&self, other: &Factorization) -> Factorization {
        let mut map: BTreeMap<BigUint, u32> = BTreeMap::new();
        for f in self.factors.iter().chain(other.factors.iter()) {
            *map.entry(f.prime.clone()).or_default() += f.exponent;
        }
        Self::from_map(map)
    }
}

// ---------------------------------------------------------------------------
// word-sized helpers

#[inline]
fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Deterministic primality test for machine words.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &DETERMINISTIC_BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    'witness: for &a in &DETERMINISTIC_BASES {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn small_primes(bound: u64) -> std::borrow::Cow<'static, [u32]> {
    const CACHED: u64 = 1_000_000;
    static TABLE: OnceLock<Vec<u32>> = OnceLock::new();
    if bound <= CACHED {
        let table = TABLE.get_or_init(|| sieve(CACHED));
        let end = table.partition_point(|&p| u64::from(p) <= bound);
        std::borrow::Cow::Borrowed(&table[..end])
    } else {
        std::borrow::Cow::Owned(sieve(bound))
    }
}

fn sieve(bound: u64) -> Vec<u32> {
    let n = bound as usize;
    if n < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u32);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Brent's variant of Pollard rho. Returns a nontrivial divisor of the odd
/// composite `n`, charging each polynomial evaluation to `steps`.
fn rho_u64(n: u64, steps: &mut u64) -> Option<u64> {
    const BATCH: u64 = 128;
    let f = |x: u64, c: u64| ((mul_mod_u64(x, x, n) as u128 + c as u128) % n as u128) as u64;
    let absdiff = |a: u64, b: u64| a.abs_diff(b);
    for c in 1..n {
        let mut y = 2 % n;
        let mut x = y;
        let mut ys = y;
        let mut r = 1u64;
        let mut q = 1u64;
        let mut g = 1u64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y, c);
            }
            *steps = steps.checked_sub(r)?;
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                let batch = BATCH.min(r - k);
                for _ in 0..batch {
                    y = f(y, c);
                    q = mul_mod_u64(q, absdiff(x, y), n);
                }
                *steps = steps.checked_sub(batch)?;
                g = gcd_u64(q, n);
                k += batch;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys, c);
                *steps = steps.checked_sub(1)?;
                g = gcd_u64(absdiff(x, ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return Some(g);
        }
    }
    None
}

fn rho_big(n: &BigUint, steps: &mut u64) -> Option<BigUint> {
    const BATCH: u64 = 128;
    let absdiff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u8);
        let mut x = y.clone();
        let mut ys = y.clone();
        let mut r = 1u64;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            *steps = steps.checked_sub(r)?;
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                let batch = BATCH.min(r - k);
                for _ in 0..batch {
                    y = f(&y);
                    q = (q * absdiff(&x, &y)) % n;
                }
                *steps = steps.checked_sub(batch)?;
                g = q.gcd(n);
                k += batch;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                *steps = steps.checked_sub(1)?;
                g = absdiff(&x, &ys).gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return Some(g);
        }
        c += 1u8;
    }
}

// ---------------------------------------------------------------------------
// public operations

/// Non-negative greatest common divisor; `gcd(0, 0) = 0`.
pub fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}

/// `base^exp mod modulus`, reduced into `[0, modulus)` for any sign of `base`.
///
/// Panics if `modulus` is zero.
pub fn pow_mod(base: &BigInt, exp: &BigUint, modulus: &BigUint) -> BigUint {
    assert!(!modulus.is_zero(), "pow_mod: zero modulus");
    let m = BigInt::from(modulus.clone());
    let b = base.mod_floor(&m).magnitude().clone();
    if let (Some(b), Some(e), Some(m)) = (b.to_u64(), exp.to_u64(), modulus.to_u64()) {
        return BigUint::from(pow_mod_u64(b, e, m));
    }
    b.modpow(exp, modulus)
}

/// Primality test: exact below 2^64, Miller-Rabin with
/// [`DEFAULT_MR_ROUNDS`] seeded rounds above.
pub fn is_prime(n: &BigUint) -> bool {
    is_prime_with_rounds(n, DEFAULT_MR_ROUNDS)
}

/// As [`is_prime`] with an explicit round count for inputs of 2^64 and up.
/// The bases are drawn from a fixed-seed generator, so the answer is a pure
/// function of `(n, rounds)`.
pub fn is_prime_with_rounds(n: &BigUint, rounds: u32) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    for &p in small_primes(1000).iter() {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let two = BigUint::from(2u8);
    let mut rng = ChaCha8Rng::seed_from_u64(MR_SEED);
    'witness: for _ in 0..rounds {
        let a = rng.gen_biguint_range(&two, &n_minus_1);
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Factorization under the default [`FactorBudget`].
pub fn factorize(n: &BigUint) -> Result<Factorization> {
    factorize_with_budget(n, &FactorBudget::default())
}

/// Trial division up to `budget.trial_bound`, then Brent rho on whatever
/// composite cofactor remains.
pub fn factorize_with_budget(n: &BigUint, budget: &FactorBudget) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::InvalidInput("cannot factor zero".into()));
    }
    let exceeded = || Error::FactorizationExceededBudget(BigInt::from(n.clone()));
    let mut steps = budget.rho_steps;
    let mut found: BTreeMap<BigUint, u32> = BTreeMap::new();

    if let Some(small) = n.to_u64() {
        for (p, e) in factor_u64(small, budget.trial_bound, &mut steps).ok_or_else(exceeded)? {
            found.insert(BigUint::from(p), e);
        }
        return Ok(Factorization::from_map(found));
    }

    let mut rest = n.clone();
    let primes = small_primes(budget.trial_bound);
    for &p in primes.iter() {
        if let Some(small) = rest.to_u64() {
            // the remainder has no factor below p, so start the word path there
            let mut sub = Vec::new();
            factor_u64_from(small, p as u64, budget.trial_bound, &mut steps, &mut sub)
                .ok_or_else(exceeded)?;
            for (q, e) in sub {
                *found.entry(BigUint::from(q)).or_default() += e;
            }
            return Ok(Factorization::from_map(found));
        }
        let p_big = BigUint::from(p);
        if &p_big * &p_big > rest {
            break;
        }
        while (&rest % p).is_zero() {
            rest /= p;
            *found.entry(p_big.clone()).or_default() += 1;
        }
        if p == 1009 && is_prime(&rest) {
            break;
        }
    }

    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if let Some(small) = m.to_u64() {
            let mut sub = Vec::new();
            factor_u64_from(small, 2, 0, &mut steps, &mut sub).ok_or_else(exceeded)?;
            for (q, e) in sub {
                *found.entry(BigUint::from(q)).or_default() += e;
            }
        } else if is_prime(&m) {
            *found.entry(m).or_default() += 1;
        } else {
            let d = rho_big(&m, &mut steps).ok_or_else(exceeded)?;
            let other = &m / &d;
            stack.push(d);
            stack.push(other);
        }
    }
    Ok(Factorization::from_map(found))
}

fn factor_u64(n: u64, trial_bound: u64, steps: &mut u64) -> Option<Vec<(u64, u32)>> {
    let mut out = Vec::new();
    factor_u64_from(n, 2, trial_bound, steps, &mut out)?;
    let mut map: BTreeMap<u64, u32> = BTreeMap::new();
    for (p, e) in out {
        *map.entry(p).or_default() += e;
    }
    Some(map.into_iter().collect())
}

/// Factors `n`, assumed free of primes below `start`. Output may contain
/// repeated primes; callers merge.
fn factor_u64_from(
    mut n: u64,
    start: u64,
    trial_bound: u64,
    steps: &mut u64,
    out: &mut Vec<(u64, u32)>,
) -> Option<()> {
    let primes = small_primes(trial_bound);
    let from = primes.partition_point(|&p| u64::from(p) < start);
    for &p in &primes[from..] {
        let p = u64::from(p);
        if p * p > n {
            break;
        }
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        if p == 1009 && is_prime_u64(n) {
            break;
        }
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u64(m) {
            out.push((m, 1));
        } else if m % 2 == 0 {
            out.push((2, 1));
            stack.push(m / 2);
        } else {
            let d = rho_u64(m, steps)?;
            stack.push(d);
            stack.push(m / d);
        }
    }
    Some(())
}

/// Euler's totient from a factorization.
pub fn euler_phi(f: &Factorization) -> BigUint {
    f.factors.iter().fold(BigUint::one(), |acc, pp| {
        let p = &pp.prime;
        acc * p.pow(pp.exponent - 1) * (p - 1u8)
    })
}

/// Factorization of `φ(n)` given the factorization of `n`. Only the values
/// `p - 1` for primes `p | n` need to be factored.
pub fn phi_factorization(f: &Factorization) -> Result<Factorization> {
    let mut acc = Factorization::one();
    for pp in &f.factors {
        let part = factorize(&(&pp.prime - 1u8))?;
        let mut map: BTreeMap<BigUint, u32> = BTreeMap::new();
        if pp.exponent > 1 {
            map.insert(pp.prime.clone(), pp.exponent - 1);
        }
        acc = acc.multiply(&Factorization::from_map(map)).multiply(&part);
    }
    Ok(acc)
}

/// Least `t >= 1` with `a^t = 1 (mod n)`, for `n >= 2`.
pub fn multiplicative_order(a: &BigInt, n: &BigUint) -> Result<BigUint> {
    if n < &BigUint::from(2u8) {
        return Err(Error::InvalidInput(format!("order modulus must be at least 2, got {n}")));
    }
    let modulus = factorize(n)?;
    multiplicative_order_with(a, &modulus)
}

/// [`multiplicative_order`] for a modulus whose factorization is already
/// known, e.g. a prime power.
pub fn multiplicative_order_with(a: &BigInt, modulus: &Factorization) -> Result<BigUint> {
    let n = modulus.value();
    if n < &BigUint::from(2u8) {
        return Err(Error::InvalidInput(format!("order modulus must be at least 2, got {n}")));
    }
    let n_int = BigInt::from(n.clone());
    let g = a.gcd(&n_int);
    if !g.is_one() {
        return Err(Error::NotCoprime { a: a.clone(), n: n_int, gcd: g });
    }
    let group = phi_factorization(modulus)?;
    let a_red = a.mod_floor(&n_int).magnitude().clone();

    if let (Some(a), Some(n), Some(t)) = (a_red.to_u64(), n.to_u64(), group.value().to_u64()) {
        let mut t = t;
        for pp in group.factors() {
            let s = pp.prime.to_u64().expect("divisor of a word fits in a word");
            for _ in 0..pp.exponent {
                if pow_mod_u64(a, t / s, n) == 1 {
                    t /= s;
                } else {
                    break;
                }
            }
        }
        return Ok(BigUint::from(t));
    }

    let mut t = group.value().clone();
    for pp in group.factors() {
        for _ in 0..pp.exponent {
            let candidate = &t / &pp.prime;
            if a_red.modpow(&candidate, n).is_one() {
                t = candidate;
            } else {
                break;
            }
        }
    }
    Ok(t)
}

/// How [`is_generator_mod_prime_power_with`] tests a prime-power modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorTest {
    /// For `k >= 2` test at `q^2`; a primitive root mod `q^2` is one mod
    /// every higher power of an odd prime.
    #[default]
    Lifted,
    /// Test directly at `q^k`.
    FullOrder,
}

/// Whether `a` generates `U(Z/q^k)`, using the lifting shortcut.
pub fn is_generator_mod_prime_power(a: &BigInt, q: u64, k: u32) -> Result<bool> {
    is_generator_mod_prime_power_with(a, q, k, GeneratorTest::Lifted)
}

pub fn is_generator_mod_prime_power_with(
    a: &BigInt,
    q: u64,
    k: u32,
    test: GeneratorTest,
) -> Result<bool> {
    if q == 2 || !is_prime_u64(q) {
        return Err(Error::InvalidInput(format!("{q} is not an odd prime")));
    }
    if k == 0 {
        return Err(Error::InvalidInput("prime-power exponent must be at least 1".into()));
    }
    let q_int = BigInt::from(q);
    let g = a.gcd(&q_int);
    if !g.is_one() {
        return Err(Error::NotCoprime { a: a.clone(), n: q_int, gcd: g });
    }
    let k = match test {
        GeneratorTest::Lifted => k.min(2),
        GeneratorTest::FullOrder => k,
    };
    let modulus = BigUint::from(q).pow(k);
    let group_order = BigUint::from(q).pow(k - 1) * (q - 1);
    let mut primes: Vec<BigUint> = factorize(&BigUint::from(q - 1))?.primes().cloned().collect();
    if k >= 2 {
        primes.push(BigUint::from(q));
    }
    Ok(primes
        .iter()
        .all(|s| !pow_mod(a, &(&group_order / s), &modulus).is_one()))
}

/// Order of `a` in `U(Z/q^k)` for an odd prime `q`.
///
/// `Lifted` uses `ord_{q^k}(a) = t * q^max(0, k - v)` where `t = ord_q(a)` and
/// `q^v` exactly divides `a^t - 1`; `FullOrder` runs the generic descent at
/// modulus `q^k`.
pub fn order_mod_prime_power(a: &BigInt, q: u64, k: u32, test: GeneratorTest) -> Result<BigUint> {
    if q == 2 || !is_prime_u64(q) {
        return Err(Error::InvalidInput(format!("{q} is not an odd prime")));
    }
    if k == 0 {
        return Err(Error::InvalidInput("prime-power exponent must be at least 1".into()));
    }
    if test == GeneratorTest::FullOrder {
        return multiplicative_order_with(a, &Factorization::prime_power(q, k));
    }
    let t = multiplicative_order_with(a, &Factorization::prime_power(q, 1))?;
    let q_big = BigUint::from(q);
    let modulus = q_big.pow(k);
    let mut rest = pow_mod(a, &t, &modulus) + &modulus - 1u8;
    rest %= &modulus;
    if rest.is_zero() {
        return Ok(t);
    }
    let mut v = 0u32;
    while (&rest % q).is_zero() {
        rest /= q;
        v += 1;
    }
    Ok(t * q_big.pow(k - v))
}

/// All primes `<= bound`, ascending.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    small_primes(bound).iter().map(|&p| u64::from(p)).collect()
}

/// `(floor(x^(1/n)), root^n == x)`. Panics if `n == 0`.
pub fn integer_nth_root(n: u32, x: &BigUint) -> (BigUint, bool) {
    assert!(n >= 1, "integer_nth_root: n must be positive");
    let mut root = x.nth_root(n);
    // clamp so that root^n <= x < (root + 1)^n
    while root.pow(n) > *x {
        root -= 1u8;
    }
    while (&root + 1u8).pow(n) <= *x {
        root += 1u8;
    }
    let exact = root.pow(n) == *x;
    (root, exact)
}

/// The integer `z` with `z^n = x`, if one exists. Negative `x` only has a
/// root for odd `n`.
pub fn exact_signed_root(n: u32, x: &BigInt) -> Option<BigInt> {
    let (root, exact) = integer_nth_root(n, x.magnitude());
    match (exact, x.sign()) {
        (false, _) => None,
        (true, Sign::Minus) if n % 2 == 0 => None,
        (true, Sign::Minus) => Some(-BigInt::from(root)),
        (true, _) => Some(BigInt::from(root)),
    }
}
