use thiserror::Error;

use crate::exactnum::Val;

/// Invalid primes, rationals, pair specifications and residue fields.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("{0} is not a supported prime")]
    NotPrime(u64),
    #[error("malformed rational {0:?}")]
    BadRational(String),
    #[error("pair {index}: {reason}")]
    InvalidPair { index: usize, reason: String },
    #[error("residue generator {index} is reducible over F_p")]
    GeneratorReducible { index: usize },
    #[error("residue generator degrees {a} and {b} are not coprime")]
    DegreesNotCoprime { a: usize, b: usize },
    #[error("expected {expected} variables, found {found}")]
    VariableCount { expected: usize, found: usize },
    #[error("residue element {0:?} does not reduce into the residue field")]
    BadResidueElement(String),
    #[error("{0}")]
    Json(String),
    #[error(transparent)]
    Guard(#[from] GuardExceeded),
}

/// A search exceeded its configured candidate budget.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{what}: {needed} candidates exceed the limit of {limit} (raise --limit)")]
pub struct GuardExceeded {
    pub what: &'static str,
    pub needed: String,
    pub limit: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("variable count mismatch: {0} vs {1}")]
    VariableCount(usize, usize),
    #[error("variable index {0} out of range")]
    VariableIndex(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at {pos}: {message}")]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

/// Failures while extracting the normalized residue of a polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResidueError {
    #[error("not normalized: w(f) = {value} but the required level is {expected}")]
    NotNormalized { value: Val, expected: Val },
    #[error("contributing index {index:?} has exponent not divisible by e = {e} in variable {var}")]
    NonDivisibleIndex { index: Vec<u32>, var: usize, e: u64 },
    #[error("contributing index {index:?} leaves a non-integral power of p")]
    FractionalPPower { index: Vec<u32> },
    #[error("expected {expected} degree entries, found {found}")]
    DegreeCount { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("residue polynomial is not monic")]
    NotMonic,
    #[error("residue polynomial is the variable Z_{0}, excluded from certification")]
    ResidueIsVariable(usize),
    #[error("residue polynomial has degree 0 in Z_{0}")]
    MissingVariable(usize),
    #[error("coefficient of Z^{index:?} involves the generator of variable {var}; no lifting keeps deg_x{var} fixed")]
    NotLiftable { index: Vec<u32>, var: usize },
    #[error(transparent)]
    Config(#[from] ConfigError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("oracle accepts at most {limit} variables, input has {found}")]
    TooManyVariables { found: usize, limit: usize },
    #[error("oracle accepts total degree at most {limit}, input has {found}")]
    DegreeTooLarge { found: u32, limit: u32 },
    #[error(transparent)]
    Guard(#[from] GuardExceeded),
}
