//! Minimal pairs, their invariants `(λ, e, N, h)` and the valuation
//! `w(Σ a_I φ^I) = min_I (v(a_I(α)) + Σ_j i_j λ_j)` on `ℚ[x_1..x_n]`.
//!
//! Two pair kinds are supported:
//!
//! * `RationalCenter { center, delta }`: `φ = x - center`, `λ = delta`. The
//!   Gauss pair is `(0, 0)`.
//! * `Inert { phi, delta }`: `φ` monic over ℤ whose reduction mod `p` is
//!   irreducible of the same degree, `delta > 0`. `λ` is the least value of
//!   the Taylor terms of `φ` around a root `α`.
//!
//! Coefficients `a_I(α)` live in an unramified extension of `ℚ_p` whose
//! residue field is the composite [`ResidueField`]. On the monomial basis of
//! such an extension the valuation of an element is the least `v_p` of its
//! coordinates (the content rule), which is how [`PairConfig::coefficient_value`]
//! evaluates them.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{ConfigError, PolyError, ResidueError};
use crate::exactnum::{rational_string, vp, Prime, Val};
use crate::finitefield::{ResidueField, ResiduePoly};
use crate::multipoly::{phi_expand, Monomial, MultiPoly, PhiExpansion};
use crate::unipoly::UniPoly;
use crate::{QPoly, Rational};

/// A user-declared minimal pair for one variable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MinimalPairSpec {
    RationalCenter {
        #[serde(with = "rational_string")]
        center: Rational,
        #[serde(with = "rational_string")]
        delta: Rational,
    },
    Inert {
        /// Coefficients low to high.
        phi: Vec<i64>,
        #[serde(with = "rational_string")]
        delta: Rational,
    },
}

impl MinimalPairSpec {
    pub fn gauss() -> Self {
        MinimalPairSpec::RationalCenter { center: Rational::zero(), delta: Rational::zero() }
    }

    pub fn rational_center(center: Rational, delta: Rational) -> Self {
        MinimalPairSpec::RationalCenter { center, delta }
    }

    pub fn inert(phi: Vec<i64>, delta: Rational) -> Self {
        MinimalPairSpec::Inert { phi, delta }
    }

    pub fn delta(&self) -> &Rational {
        match self {
            MinimalPairSpec::RationalCenter { delta, .. } | MinimalPairSpec::Inert { delta, .. } => delta,
        }
    }
}

/// Pair file: `{"prime":3,"pairs":[{"kind":"rational_center","center":"0","delta":"0"}, ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairFile {
    pub prime: Prime,
    pub pairs: Vec<MinimalPairSpec>,
}

/// Derived invariants of one validated pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairData {
    pub spec: MinimalPairSpec,
    /// `x_i - center` or the inert `φ`, in the original coordinates.
    pub phi: UniPoly<Rational>,
    pub m: usize,
    pub lambda: Rational,
    pub e: u64,
    /// `N = e λ`, so that `h = p^N` has value `e λ`.
    pub n_exp: i64,
    pub h: Rational,
    /// Index of this pair's generator in the residue field (inert pairs).
    pub generator: Option<usize>,
}

impl PairData {
    pub fn center(&self) -> Option<&Rational> {
        match &self.spec {
            MinimalPairSpec::RationalCenter { center, .. } => Some(center),
            MinimalPairSpec::Inert { .. } => None,
        }
    }
}

fn inert_phi(phi: &[i64]) -> UniPoly<Rational> {
    UniPoly::new(phi.iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect())
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Validates a pair spec and returns `λ = w(φ)`.
///
/// For an inert pair, `φ(x) = Σ_k c_k (x - α)^k` with
/// `c_k = φ^{(k)}(α)/k! = Σ_{j ≥ k} C(j, k) φ_j α^{j-k}`, a polynomial in `α`
/// of degree below `deg φ`, valued by the content rule; then
/// `λ = min_{k ≥ 1} (v(c_k) + k δ)`.
pub fn compute_lambda(pair: &MinimalPairSpec, p: Prime) -> Result<Rational, String> {
    match pair {
        MinimalPairSpec::RationalCenter { delta, .. } => {
            if delta.is_negative() {
                return Err("delta must be nonnegative".into());
            }
            Ok(delta.clone())
        }
        MinimalPairSpec::Inert { phi, delta } => {
            if !delta.is_positive() {
                return Err("inert pairs need delta > 0".into());
            }
            if phi.len() < 3 || *phi.last().expect("nonempty") != 1 {
                return Err("inert phi must be monic of degree at least 2".into());
            }
            let m = phi.len() - 1;
            let mut best: Option<Rational> = None;
            for k in 1..=m {
                let taylor = UniPoly::new(
                    (k..=m)
                        .map(|j| Rational::from_integer(binomial(j, k) * BigInt::from(phi[j])))
                        .collect(),
                );
                let content = taylor
                    .coeffs()
                    .iter()
                    .map(|c| vp(c, p))
                    .min()
                    .unwrap_or(Val::Infinity);
                if let Val::Finite(v) = content {
                    let value = v + delta * Rational::from_integer(BigInt::from(k));
                    best = Some(match best {
                        Some(b) if b <= value => b,
                        _ => value,
                    });
                }
            }
            Ok(best.expect("c_m = 1 has finite value"))
        }
    }
}

/// `e` = denominator of `λ` in lowest terms, `N = e λ`.
pub fn compute_e_h(lambda: &Rational) -> (u64, i64) {
    let e = lambda.denom().to_u64().expect("ramification index fits in u64");
    (e, lambda.numer().to_i64().expect("N fits in i64"))
}

/// Valuation of one term of a φ-adic expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermValue {
    pub index: Monomial,
    pub coefficient_value: Val,
    pub value: Val,
}

/// `w(f)` with its per-index table and argmin set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WValue {
    pub value: Val,
    pub contributing: Vec<Monomial>,
    pub table: Vec<TermValue>,
}

/// A validated list of pairs (one per variable) over a fixed prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairConfig {
    prime: Prime,
    pairs: Vec<PairData>,
    field: ResidueField,
}

impl PairConfig {
    pub fn new(prime: Prime, specs: Vec<MinimalPairSpec>, limit: u64) -> Result<Self, ConfigError> {
        let mut pairs = Vec::with_capacity(specs.len());
        let mut generators = Vec::new();
        let mut owners = Vec::new();
        for (index, spec) in specs.into_iter().enumerate() {
            let lambda = compute_lambda(&spec, prime).map_err(|reason| ConfigError::InvalidPair { index, reason })?;
            let (e, n_exp) = compute_e_h(&lambda);
            let (phi, generator) = match &spec {
                MinimalPairSpec::RationalCenter { center, .. } => (UniPoly::linear_root(center.clone()), None),
                MinimalPairSpec::Inert { phi, .. } => {
                    generators.push(phi.iter().map(|c| c.rem_euclid(prime.get() as i64) as u64).collect());
                    owners.push(index);
                    (inert_phi(phi), Some(generators.len() - 1))
                }
            };
            let m = phi.degree().expect("nonzero");
            pairs.push(PairData { spec, phi, m, lambda, e, n_exp, h: prime.pow(n_exp), generator });
        }
        let field = ResidueField::new(prime, generators, limit).map_err(|err| match err {
            ConfigError::GeneratorReducible { index } => ConfigError::InvalidPair {
                index: owners[index],
                reason: "phi is reducible modulo p".into(),
            },
            other => other,
        })?;
        Ok(PairConfig { prime, pairs, field })
    }

    pub fn from_file(file: &PairFile, limit: u64) -> Result<Self, ConfigError> {
        Self::new(file.prime, file.pairs.clone(), limit)
    }

    /// All-Gauss configuration `(0, 0)` in every variable.
    pub fn gauss(prime: Prime, nvars: usize) -> Self {
        Self::new(prime, vec![MinimalPairSpec::gauss(); nvars], 1).expect("Gauss pairs are always valid")
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn pairs(&self) -> &[PairData] {
        &self.pairs
    }

    pub fn specs(&self) -> Vec<MinimalPairSpec> {
        self.pairs.iter().map(|p| p.spec.clone()).collect()
    }

    pub fn nvars(&self) -> usize {
        self.pairs.len()
    }

    pub fn field(&self) -> &ResidueField {
        &self.field
    }

    pub fn lcm_e(&self) -> u64 {
        self.pairs.iter().fold(1, |acc, p| acc.lcm(&p.e))
    }

    /// True when the ramification indices are pairwise coprime.
    pub fn ramification_coprime(&self) -> bool {
        self.pairs
            .iter()
            .enumerate()
            .all(|(a, pa)| self.pairs[a + 1..].iter().all(|pb| pa.e.gcd(&pb.e) == 1))
    }

    fn check_nvars(&self, f: &QPoly) -> Result<(), PolyError> {
        if f.nvars() == self.nvars() {
            Ok(())
        } else {
            Err(PolyError::VariableCount(self.nvars(), f.nvars()))
        }
    }

    /// Canonical φ-expansion of `f` for these pairs.
    ///
    /// Rational-center variables are recentred (`x_j ↦ x_j + center`) and
    /// expanded in plain powers of `x_j`; inert variables are divided by `φ_j`.
    /// The resulting coefficients do not involve rational-center variables, so
    /// the same table is the expansion in the original `φ_j = x_j - center`.
    pub fn expand(&self, f: &QPoly) -> Result<PhiExpansion<Rational>, PolyError> {
        self.check_nvars(f)?;
        let n = self.nvars();
        let mut shifted = f.clone();
        let mut work = Vec::with_capacity(n);
        for (j, pair) in self.pairs.iter().enumerate() {
            match pair.center() {
                Some(c) => {
                    shifted = shifted.shift_var(j, c);
                    work.push(UniPoly::linear_root(Rational::zero()));
                }
                None => work.push(pair.phi.clone()),
            }
        }
        let mut expansion = phi_expand(&shifted, &work)?;
        expansion.phis = self.pairs.iter().map(|p| p.phi.clone()).collect();
        Ok(expansion)
    }

    /// `v(a(α_1..α_n))` for an expansion coefficient `a`, by the content rule.
    pub fn coefficient_value(&self, a: &QPoly) -> Val {
        a.content_valuation(self.prime)
    }

    fn index_weight(&self, index: &[u32], only: Option<usize>) -> Rational {
        let mut acc = Rational::zero();
        for (j, (&i, pair)) in index.iter().zip(&self.pairs).enumerate() {
            if only.is_none_or(|o| o == j) {
                acc += &pair.lambda * Rational::from_integer(BigInt::from(i));
            }
        }
        acc
    }

    pub fn w_value(&self, f: &QPoly) -> Result<WValue, PolyError> {
        let expansion = self.expand(f)?;
        Ok(self.w_from_expansion(&expansion))
    }

    pub fn w_from_expansion(&self, expansion: &PhiExpansion<Rational>) -> WValue {
        let table: Vec<TermValue> = expansion
            .terms
            .iter()
            .map(|(index, a)| {
                let cv = self.coefficient_value(a);
                let value = cv.clone() + &self.index_weight(index, None);
                TermValue { index: index.clone(), coefficient_value: cv, value }
            })
            .collect();
        let value = table.iter().map(|t| t.value.clone()).min().unwrap_or(Val::Infinity);
        let contributing = if value.is_infinite() {
            Vec::new()
        } else {
            table.iter().filter(|t| t.value == value).map(|t| t.index.clone()).collect()
        };
        WValue { value, contributing, table }
    }

    /// Marginal value in variable `var`: `min_I (v(a_I(α)) + i_var λ_var)`.
    ///
    /// The other variables contribute through the coefficient value only,
    /// i.e. `φ_j` for `j ≠ var` is given value zero.
    pub fn w_marginal(&self, f: &QPoly, var: usize) -> Result<Val, PolyError> {
        let expansion = self.expand(f)?;
        Ok(self.marginal_from_expansion(&expansion, var))
    }

    pub fn marginal_from_expansion(&self, expansion: &PhiExpansion<Rational>, var: usize) -> Val {
        expansion
            .terms
            .iter()
            .map(|(index, a)| self.coefficient_value(a) + &self.index_weight(index, Some(var)))
            .min()
            .unwrap_or(Val::Infinity)
    }

    /// `Σ_j e_j t_j λ_j`, the value a lifting of degree vector `t` must have.
    pub fn level(&self, t: &[u32]) -> Rational {
        t.iter()
            .zip(&self.pairs)
            .map(|(&ti, p)| Rational::from_integer(BigInt::from(p.n_exp) * BigInt::from(ti)))
            .fold(Rational::zero(), |a, b| a + b)
    }

    /// `e_var t_var λ_var`.
    pub fn marginal_level(&self, t: &[u32], var: usize) -> Rational {
        Rational::from_integer(BigInt::from(self.pairs[var].n_exp) * BigInt::from(t[var]))
    }

    /// Residue of `f / ∏ h_j^{t_j}` as a polynomial in `Z_j = φ_j^{e_j} / h_j`.
    pub fn residue_normalized(&self, f: &QPoly, t: &[u32]) -> Result<ResiduePoly, ResidueError> {
        let expansion = self.expand(f).map_err(|_| ResidueError::DegreeCount {
            expected: self.nvars(),
            found: f.nvars(),
        })?;
        self.residue_from_expansion(&expansion, t)
    }

    pub fn residue_from_expansion(
        &self,
        expansion: &PhiExpansion<Rational>,
        t: &[u32],
    ) -> Result<ResiduePoly, ResidueError> {
        if t.len() != self.nvars() {
            return Err(ResidueError::DegreeCount { expected: self.nvars(), found: t.len() });
        }
        let wv = self.w_from_expansion(expansion);
        let expected = Val::Finite(self.level(t));
        if wv.value != expected {
            return Err(ResidueError::NotNormalized { value: wv.value, expected });
        }
        let n = self.nvars();
        let k = self.field.num_generators();
        let mut out = ResiduePoly::zero(n);
        for index in &wv.contributing {
            let mut reduced = Vec::with_capacity(n);
            let mut shift: i64 = 0;
            for (var, (&i, pair)) in index.iter().zip(&self.pairs).enumerate() {
                if !(i as u64).is_multiple_of(pair.e) {
                    return Err(ResidueError::NonDivisibleIndex { index: index.clone(), var, e: pair.e });
                }
                let j = (i as u64 / pair.e) as u32;
                shift += pair.n_exp * (j as i64 - t[var] as i64);
                reduced.push(j);
            }
            let a = &expansion.terms[index];
            let depleted = a.scale(&self.prime.pow(shift));
            if self.coefficient_value(&depleted) != Val::zero() {
                return Err(ResidueError::FractionalPPower { index: index.clone() });
            }
            let projected = MultiPoly::from_terms(
                k,
                depleted.terms().map(|(e, c)| {
                    let mut y = vec![0u32; k];
                    for (var, pair) in self.pairs.iter().enumerate() {
                        if let Some(g) = pair.generator {
                            y[g] = e[var];
                        }
                    }
                    (y, c.clone())
                }),
            );
            let c = self
                .field
                .from_rational_poly(&projected)
                .ok_or(ResidueError::FractionalPPower { index: index.clone() })?;
            out.add_term(&self.field, reduced, c);
        }
        Ok(out)
    }
}
