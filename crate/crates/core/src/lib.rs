//! Irreducibility certificates for multivariate polynomials over ℚ.
//!
//! A polynomial is certified irreducible over `ℚ_p` (hence over ℚ) when it is
//! a lifting, for a choice of one minimal pair per variable, of an
//! irreducible residue polynomial `T(Z_1..Z_n)` over the residue field.
//! [`lifting::certify_irreducible`] checks the conditions and records every
//! compared quantity; [`oracle::brute_factor`] is an independent exact
//! factorizer used for cross-checks.

pub mod error;
pub mod exactnum;
pub mod finitefield;
pub mod lifting;
pub mod multipoly;
pub mod oracle;
pub mod parse;
pub mod scalar;
pub mod unipoly;
pub mod valuation;

pub use error::*;
pub use exactnum::{vp, Prime, Val};
pub use finitefield::{is_irreducible_multivariate, ResidueElement, ResidueField, ResiduePoly};
pub use lifting::{certify_irreducible, check_lifting, generate_lifting, suggest_pairs, CertifyOptions, LiftingCertificate, Verdict};
pub use multipoly::{phi_expand, MultiPoly, PhiExpansion};
pub use oracle::{brute_factor, FactorizationResult, OracleLimits};
pub use parse::parse_polynomial;
pub use unipoly::UniPoly;
pub use valuation::{MinimalPairSpec, PairConfig, PairFile};

pub type Rational = num_rational::BigRational;
pub type QPoly = MultiPoly<Rational>;
pub type ZPoly = MultiPoly<num_bigint::BigInt>;
