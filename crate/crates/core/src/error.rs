use std::fmt;

use num_bigint::BigInt;

use crate::diophantine::Branch;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("not coprime: gcd({a}, {n}) = {gcd}")]
    NotCoprime { a: BigInt, n: BigInt, gcd: BigInt },

    #[error("factorization of {0} exceeded the work budget")]
    FactorizationExceededBudget(BigInt),

    #[error("unsupported conductor {conductor} for prime {prime}: only p not dividing l, or l = p")]
    UnsupportedConductor { prime: u64, conductor: u64 },

    #[error("modulus {0} is ramified in the cyclotomic ring of the same prime")]
    RamifiedModulus(u64),

    #[error("work budget exceeded: {needed} units requested, budget {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },

    #[error("({x}, {y}) is not a coprime nontrivial solution: {reason}")]
    NotASolution { x: BigInt, y: BigInt, reason: String },

    #[error("no branch matched: {}", BranchResiduals(.0))]
    NoBranchMatched(Vec<BranchResidual>),
}

impl Error {
    /// Short stable identifier, used by the CLI on the error stream.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "InvalidInput",
            Error::NotCoprime { .. } => "NotCoprime",
            Error::FactorizationExceededBudget(_) => "FactorizationExceededBudget",
            Error::UnsupportedConductor { .. } => "UnsupportedConductor",
            Error::RamifiedModulus(_) => "RamifiedModulus",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::NotASolution { .. } => "NotASolution",
            Error::NoBranchMatched(_) => "NoBranchMatched",
        }
    }
}

/// Outcome of one factor-extraction attempt during solution tracing.
///
/// `lhs_residual` is `(x^2 - q^2) - c_lhs * y1^r` where `y1` is the truncated
/// r-th root of the truncated quotient; likewise for the right-hand factor
/// `x^2 + q^2`. Both vanish exactly when the branch matches.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchResidual {
    pub branch: Branch,
    pub lhs_residual: BigInt,
    pub rhs_residual: BigInt,
}

struct BranchResiduals<'a>(&'a [BranchResidual]);

impl fmt::Display for BranchResiduals<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{:?}: lhs {} rhs {}", r.branch, r.lhs_residual, r.rhs_residual)?;
        }
        Ok(())
    }
}
