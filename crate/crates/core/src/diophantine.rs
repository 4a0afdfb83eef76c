//! Verification, exhaustive search and case tracing for integer solutions of
//! `x^4 - q^4 = p * y^r`.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{self, is_prime_u64};
use crate::error::{BranchResidual, Error, Result};

/// Default cap on the number of `y` values visited by a search.
pub const DEFAULT_SEARCH_BUDGET: u64 = 10_000_000;

/// Parameters of one equation. `r` is an odd prime, so `y^r` keeps the sign
/// of `y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EquationInstance {
    pub p: u64,
    pub q: u64,
    pub r: u64,
}

impl EquationInstance {
    pub fn new(p: u64, q: u64, r: u64) -> Result<Self> {
        for (name, v) in [("p", p), ("q", q), ("r", r)] {
            if !is_prime_u64(v) {
                return Err(Error::InvalidInput(format!("{name} = {v} is not prime")));
            }
        }
        if r == 2 {
            return Err(Error::InvalidInput("the exponent r must be odd".into()));
        }
        if u32::try_from(r).is_err() {
            return Err(Error::InvalidInput(format!("exponent r = {r} is too large")));
        }
        Ok(EquationInstance { p, q, r })
    }

    fn exponent(&self) -> u32 {
        self.r as u32
    }

    fn q4(&self) -> BigInt {
        BigInt::from(self.q).pow(4)
    }
}

impl fmt::Display for EquationInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^4 - {}^4 = {}*y^{}", self.q, self.p, self.r)
    }
}

/// `x^4 - q^4 - p*y^r`, exactly.
pub fn evaluate(inst: &EquationInstance, x: &BigInt, y: &BigInt) -> BigInt {
    x.pow(4) - inst.q4() - BigInt::from(inst.p) * y.pow(inst.exponent())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionRecord {
    #[serde(with = "crate::serde_big")]
    pub x: BigInt,
    #[serde(with = "crate::serde_big")]
    pub y: BigInt,
    pub is_solution: bool,
    /// gcd(x, y) = 1.
    pub coprime: bool,
    pub xy_nonzero: bool,
    /// Only evaluated for actual solutions.
    pub p_divides_y: Option<bool>,
    #[serde(with = "crate::serde_big")]
    pub residual: BigInt,
}

impl SolutionRecord {
    /// A coprime solution with `xy != 0` and `p ∤ y`.
    pub fn is_counterexample(&self) -> bool {
        self.is_solution && self.coprime && self.xy_nonzero && self.p_divides_y == Some(false)
    }
}

pub fn verify_solution(inst: &EquationInstance, x: &BigInt, y: &BigInt) -> SolutionRecord {
    let residual = evaluate(inst, x, y);
    let is_solution = residual.is_zero();
    SolutionRecord {
        x: x.clone(),
        y: y.clone(),
        is_solution,
        coprime: arith::gcd(x, y).is_one(),
        xy_nonzero: !x.is_zero() && !y.is_zero(),
        p_divides_y: is_solution.then(|| (y % BigInt::from(inst.p)).is_zero()),
        residual,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Upper limit on the number of `y` values examined.
    pub budget: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { budget: DEFAULT_SEARCH_BUDGET }
    }
}

/// Every solution with `|y| <= y_bound` and `|x| <= x_bound`, sorted by
/// `(y, x)`. Degenerate solutions are kept and flagged.
pub fn search_solutions(inst: &EquationInstance, y_bound: u64, x_bound: u64) -> Result<Vec<SolutionRecord>> {
    search_solutions_with(inst, y_bound, x_bound, &SearchOptions::default())
}

/// For each `y` the candidate `x` is recovered as the exact fourth root of
/// `q^4 + p*y^r`, so the cost is linear in the `y` range.
pub fn search_solutions_with(
    inst: &EquationInstance,
    y_bound: u64,
    x_bound: u64,
    opts: &SearchOptions,
) -> Result<Vec<SolutionRecord>> {
    let needed = 2 * u128::from(y_bound) + 1;
    if needed > u128::from(opts.budget) {
        return Err(Error::BudgetExceeded { needed, budget: opts.budget });
    }
    let q4 = inst.q4();
    let p = BigInt::from(inst.p);
    let y_lo = -i128::from(y_bound);
    let y_hi = i128::from(y_bound);
    let mut out: Vec<SolutionRecord> = (y_lo..=y_hi)
        .into_par_iter()
        .flat_map_iter(|y| {
            let y = BigInt::from(y);
            let t = &q4 + &p * y.pow(inst.exponent());
            let mut found = Vec::new();
            if t.sign() != Sign::Minus {
                let (root, exact) = arith::integer_nth_root(4, t.magnitude());
                if exact && root <= x_bound.into() {
                    let root = BigInt::from(root);
                    if !root.is_zero() {
                        found.push(verify_solution(inst, &-&root, &y));
                    }
                    found.push(verify_solution(inst, &root, &y));
                }
            }
            found
        })
        .collect();
    out.sort_by(|a, b| (&a.y, &a.x).cmp(&(&b.y, &b.x)));
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ParityCase {
    XOdd,
    XEven,
}

/// The four factorizations of `(x^2 - q^2)(x^2 + q^2) = p*y^r`.
///
/// * `B1a`: `x^2 - q^2 = 2^(r-1) p y1^r`, `x^2 + q^2 = 2 y2^r`
/// * `B1b`: `x^2 - q^2 = 2^(r-1) y1^r`, `x^2 + q^2 = 2p y2^r`
/// * `B2a`: `x^2 - q^2 = p y1^r`, `x^2 + q^2 = y2^r`
/// * `B2b`: `x^2 - q^2 = y1^r`, `x^2 + q^2 = p y2^r`
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    B1a,
    B1b,
    B2a,
    B2b,
}

impl Branch {
    pub const ALL: [Branch; 4] = [Branch::B1a, Branch::B1b, Branch::B2a, Branch::B2b];

    /// `(c_lhs, c_rhs, scale)` with `x^2 - q^2 = c_lhs y1^r`,
    /// `x^2 + q^2 = c_rhs y2^r` and `y = scale * y1 * y2`.
    fn coefficients(self, p: &BigInt, r: u32) -> (BigInt, BigInt, BigInt) {
        let two = BigInt::from(2u8);
        let two_pow = two.pow(r - 1);
        match self {
            Branch::B1a => (&two_pow * p, two.clone(), two),
            Branch::B1b => (two_pow, &two * p, two),
            Branch::B2a => (p.clone(), BigInt::one(), BigInt::one()),
            Branch::B2b => (BigInt::one(), p.clone(), BigInt::one()),
        }
    }

    fn lemma_variant(self) -> LemmaVariant {
        match self {
            Branch::B1a | Branch::B1b => LemmaVariant::TwoPower,
            Branch::B2a | Branch::B2b => LemmaVariant::Plain,
        }
    }
}

/// Which coprimality lemma a trace is measured against: the one for
/// `Q(ζ, p^(1/r))` or the one for `Q(ζ, (2^(r-2) p)^(1/r))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LemmaVariant {
    Plain,
    TwoPower,
}

/// Divisibility hypotheses of the coprimality lemmas, evaluated on
/// concrete `(y1, y2)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub variant: LemmaVariant,
    pub gcd_y1_y2_is_1: bool,
    pub p_divides_y2: bool,
    /// `r | y2 - y1`.
    pub r_divides_y2_minus_y1: bool,
    /// `r | y2 - 2^(r-2) p y1`.
    pub r_divides_y2_minus_2r2p_y1: bool,
    /// Every hypothesis of the selected lemma holds: gcd 1, `p ∤ y2` (`p ∤ 2 y2`
    /// for the two-power variant) and the selected difference not divisible
    /// by `r`.
    pub lemma_applies: bool,
}

pub fn lemma_hypotheses(y1: &BigInt, y2: &BigInt, p: u64, r: u64, variant: LemmaVariant) -> HypothesisReport {
    let p_big = BigInt::from(p);
    let r_big = BigInt::from(r);
    let divides = |d: &BigInt, n: &BigInt| (n % d).is_zero();

    let gcd_y1_y2_is_1 = y1.gcd(y2).is_one();
    let p_divides_y2 = divides(&p_big, y2);
    let r_divides_y2_minus_y1 = divides(&r_big, &(y2 - y1));
    let shift = if r >= 2 { BigInt::from(2u8).pow((r - 2) as u32) } else { BigInt::zero() };
    let r_divides_y2_minus_2r2p_y1 = divides(&r_big, &(y2 - shift * &p_big * y1));

    let lemma_applies = match variant {
        LemmaVariant::Plain => gcd_y1_y2_is_1 && !p_divides_y2 && !r_divides_y2_minus_y1,
        LemmaVariant::TwoPower => {
            gcd_y1_y2_is_1 && !divides(&p_big, &(y2 * 2)) && !r_divides_y2_minus_2r2p_y1
        }
    };
    HypothesisReport {
        variant,
        gcd_y1_y2_is_1,
        p_divides_y2,
        r_divides_y2_minus_y1,
        r_divides_y2_minus_2r2p_y1,
        lemma_applies,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoteTag {
    /// `p | x^2 + q^2` with `p ≡ 3 (mod 4)`: the branch is eliminated.
    CongruenceEliminates,
    /// `p | x^2 + q^2` but `p ≢ 3 (mod 4)`: the elimination does not apply.
    CongruenceInapplicable,
    /// The coprimality lemma's hypotheses hold for `(y1, y2)`.
    LemmaHypothesesHold,
    /// At least one hypothesis of the coprimality lemma fails.
    LemmaHypothesesFail,
}

/// Which step of the case analysis this input reaches, and whether it goes
/// through.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContradictionNote {
    pub tag: NoteTag,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceReport {
    pub instance: EquationInstance,
    #[serde(with = "crate::serde_big")]
    pub x: BigInt,
    #[serde(with = "crate::serde_big")]
    pub y: BigInt,
    pub parity_case: ParityCase,
    /// gcd(x^2 - q^2, x^2 + q^2).
    #[serde(with = "crate::serde_big")]
    pub d: BigInt,
    pub branch: Branch,
    #[serde(with = "crate::serde_big")]
    pub y1: BigInt,
    #[serde(with = "crate::serde_big")]
    pub y2: BigInt,
    /// `(x^2 - q^2)(x^2 + q^2) = p (scale y1 y2)^r` and `y = scale y1 y2`.
    pub recombination_holds: bool,
    /// The identity obtained by subtracting the two factor equations:
    /// `q^2 = y2^r - 2^(r-2) p y1^r` (B1a), `q^2 = p y2^r - 2^(r-2) y1^r` (B1b),
    /// `2q^2 = y2^r - p y1^r` (B2a), `2q^2 = p y2^r - y1^r` (B2b).
    pub key_identity_holds: bool,
    pub lemma_hypotheses: HypothesisReport,
    pub contradiction_note: ContradictionNote,
}

fn truncated_root(r: u32, n: &BigInt) -> BigInt {
    let (root, _) = arith::integer_nth_root(r, n.magnitude());
    let root = BigInt::from(root);
    if n.is_negative() {
        -root
    } else {
        root
    }
}

fn attempt_branch(
    branch: Branch,
    inst: &EquationInstance,
    lhs: &BigInt,
    rhs: &BigInt,
) -> std::result::Result<(BigInt, BigInt), BranchResidual> {
    let r = inst.exponent();
    let p = BigInt::from(inst.p);
    let (c_lhs, c_rhs, _) = branch.coefficients(&p, r);
    let y1 = truncated_root(r, &(lhs / &c_lhs));
    let y2 = truncated_root(r, &(rhs / &c_rhs));
    let lhs_residual = lhs - &c_lhs * y1.pow(r);
    let rhs_residual = rhs - &c_rhs * y2.pow(r);
    if lhs_residual.is_zero() && rhs_residual.is_zero() {
        Ok((y1, y2))
    } else {
        Err(BranchResidual { branch, lhs_residual, rhs_residual })
    }
}

fn key_identity(branch: Branch, inst: &EquationInstance, y1: &BigInt, y2: &BigInt) -> bool {
    let r = inst.exponent();
    let p = BigInt::from(inst.p);
    let q2 = BigInt::from(inst.q).pow(2);
    let shift = BigInt::from(2u8).pow(r - 2);
    let (a, b) = (y1.pow(r), y2.pow(r));
    match branch {
        Branch::B1a => q2 == b - shift * p * a,
        Branch::B1b => q2 == p * b - shift * a,
        Branch::B2a => q2 * 2 == b - p * a,
        Branch::B2b => q2 * 2 == p * b - a,
    }
}

fn note_for(branch: Branch, parity: ParityCase, p: u64, hyp: &HypothesisReport) -> ContradictionNote {
    let case = match parity {
        ParityCase::XOdd => "x-odd",
        ParityCase::XEven => "x-even",
    };
    match branch {
        Branch::B1b | Branch::B2b if p % 4 == 3 => ContradictionNote {
            tag: NoteTag::CongruenceEliminates,
            message: format!("{branch:?} requires p | x^2 + q^2, incompatible with p ≡ 3 (mod 4)"),
        },
        Branch::B1b | Branch::B2b => ContradictionNote {
            tag: NoteTag::CongruenceInapplicable,
            message: format!(
                "p ≡ {} (mod 4): the {case} elimination of {branch:?} does not apply",
                p % 4
            ),
        },
        Branch::B1a | Branch::B2a => {
            let field = match hyp.variant {
                LemmaVariant::Plain => "Q(ζ, p^(1/r))",
                LemmaVariant::TwoPower => "Q(ζ, (2^(r-2) p)^(1/r))",
            };
            if hyp.lemma_applies {
                ContradictionNote {
                    tag: NoteTag::LemmaHypothesesHold,
                    message: format!(
                        "{branch:?}: coprimality hypotheses hold in {field}; the conjugate factors are pairwise coprime"
                    ),
                }
            } else {
                let mut failing = Vec::new();
                if !hyp.gcd_y1_y2_is_1 {
                    failing.push("gcd(y1, y2) != 1");
                }
                match hyp.variant {
                    LemmaVariant::Plain => {
                        if hyp.p_divides_y2 {
                            failing.push("p | y2");
                        }
                        if hyp.r_divides_y2_minus_y1 {
                            failing.push("r | y2 - y1");
                        }
                    }
                    LemmaVariant::TwoPower => {
                        if hyp.p_divides_y2 || p == 2 {
                            failing.push("p | 2 y2");
                        }
                        if hyp.r_divides_y2_minus_2r2p_y1 {
                            failing.push("r | y2 - 2^(r-2) p y1");
                        }
                    }
                }
                ContradictionNote {
                    tag: NoteTag::LemmaHypothesesFail,
                    message: format!("{branch:?}: coprimality hypotheses fail in {field}: {}", failing.join(", ")),
                }
            }
        }
    }
}

/// Replays the parity case split and factor extraction on a concrete
/// coprime solution with `xy != 0`.
pub fn decompose_solution(inst: &EquationInstance, x: &BigInt, y: &BigInt) -> Result<TraceReport> {
    let record = verify_solution(inst, x, y);
    let reject = |reason: String| Error::NotASolution { x: x.clone(), y: y.clone(), reason };
    if !record.is_solution {
        return Err(reject(format!("residual {}", record.residual)));
    }
    if !record.xy_nonzero {
        return Err(reject("xy = 0".into()));
    }
    if !record.coprime {
        return Err(reject(format!("gcd(x, y) = {}", arith::gcd(x, y))));
    }

    let r = inst.exponent();
    let x2 = x * x;
    let q2 = BigInt::from(inst.q).pow(2);
    let lhs = &x2 - &q2;
    let rhs = &x2 + &q2;
    let d = lhs.gcd(&rhs);
    let parity_case = if x.is_odd() { ParityCase::XOdd } else { ParityCase::XEven };

    let mut matched = Vec::new();
    let mut residuals = Vec::new();
    for branch in Branch::ALL {
        match attempt_branch(branch, inst, &lhs, &rhs) {
            Ok((y1, y2)) => matched.push((branch, y1, y2)),
            Err(res) => residuals.push(res),
        }
    }
    assert!(matched.len() <= 1, "branches are mutually exclusive on coprime solutions: {matched:?}");
    let Some((branch, y1, y2)) = matched.pop() else {
        return Err(Error::NoBranchMatched(residuals));
    };

    let p = BigInt::from(inst.p);
    let (_, _, scale) = branch.coefficients(&p, r);
    let combined = &scale * &y1 * &y2;
    let recombination_holds = &combined == y && &lhs * &rhs == &p * combined.pow(r);
    let key_identity_holds = key_identity(branch, inst, &y1, &y2);
    let lemma_hypotheses = lemma_hypotheses(&y1, &y2, inst.p, inst.r, branch.lemma_variant());
    let contradiction_note = note_for(branch, parity_case, inst.p, &lemma_hypotheses);

    Ok(TraceReport {
        instance: *inst,
        x: x.clone(),
        y: y.clone(),
        parity_case,
        d,
        branch,
        y1,
        y2,
        recombination_holds,
        key_identity_holds,
        lemma_hypotheses,
        contradiction_note,
    })
}
