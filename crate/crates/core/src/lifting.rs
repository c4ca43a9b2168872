//! Lifting checks, irreducibility certificates and the generative inverse.
//!
//! A polynomial `f` is a lifting of `T(Z_1..Z_n)` for the pairs `(φ_i, λ_i)`
//! when, with `t_i = deg_{x_i} f / (e_i m_i)`:
//!
//! 1. `deg f = Σ e_i t_i m_i`, `deg_{x_i} f = e_i t_i m_i` and the coefficient
//!    of `∏ x_i^{e_i t_i m_i}` is one;
//! 2. `w(f) = Σ e_i t_i λ_i` and each marginal value is `e_i t_i λ_i`;
//! 3. the normalized residue `T` exists with `deg_{Z_i} T = t_i`, monic.
//!
//! If moreover `T` is irreducible over the residue field and `T ≠ Z_i`, then
//! `f` is irreducible over `ℚ_p`, hence over `ℚ`. This implementation also
//! requires the ramification indices `e_i` to be pairwise coprime: without
//! that, `x^2 y^2 - 4` at `p = 2` with `λ = (1/2, 1/2)` passes every check
//! with `T = Z_1 Z_2 + 1` but factors as `(xy - 2)(xy + 2)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{GenerateError, GuardExceeded, ResidueError};
use crate::exactnum::{format_rational, vp, Prime, Val};
use crate::finitefield::{is_irreducible_multivariate, ResiduePoly, ResiduePolyJson};
use crate::multipoly::{default_names, Monomial, MultiPoly};
use crate::valuation::{MinimalPairSpec, PairConfig};
use crate::{QPoly, Rational};

/// One named comparison, with both sides as printed quantities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
}

impl Check {
    fn new(name: impl Into<String>, lhs: impl ToString, rhs: impl ToString, pass: bool) -> Self {
        Check { name: name.into(), lhs: lhs.to_string(), rhs: rhs.to_string(), pass }
    }
}

/// Why `f` is not a lifting. Each failed condition has its own variant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Diagnosis {
    ZeroPolynomial,
    VariableCount { expected: usize, found: usize },
    /// `deg_{x_var} f` is not a positive multiple of `e m`.
    DegreeNotDivisible { var: usize, degree: u32, e_m: u64 },
    TotalDegree { lhs: u32, rhs: u64 },
    NotMonic { monomial: Vec<u32>, coefficient: String },
    ValueMismatch { lhs: String, rhs: String },
    MarginalMismatch { var: usize, lhs: String, rhs: String },
    NonDivisibleIndex { index: Vec<u32>, var: usize, e: u64 },
    FractionalPPower { index: Vec<u32> },
    ResidueDegree { var: usize, lhs: u32, rhs: u32 },
    ResidueNotMonic,
}

impl Diagnosis {
    /// The condition (1, 2 or 3) the diagnosis belongs to; 0 for input errors.
    pub fn condition(&self) -> u8 {
        match self {
            Diagnosis::ZeroPolynomial | Diagnosis::VariableCount { .. } => 0,
            Diagnosis::DegreeNotDivisible { .. } | Diagnosis::TotalDegree { .. } | Diagnosis::NotMonic { .. } => 1,
            Diagnosis::ValueMismatch { .. } | Diagnosis::MarginalMismatch { .. } => 2,
            _ => 3,
        }
    }
}

impl fmt::Display for Diagnosis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnosis::ZeroPolynomial => write!(f, "the zero polynomial is not a lifting"),
            Diagnosis::VariableCount { expected, found } => {
                write!(f, "pairs cover {expected} variables, polynomial has {found}")
            }
            Diagnosis::DegreeNotDivisible { var, degree, e_m } => write!(
                f,
                "(i) deg in variable {} is {degree}, not a positive multiple of e*m = {e_m}",
                var + 1
            ),
            Diagnosis::TotalDegree { lhs, rhs } => write!(f, "(i) deg f = {lhs} but sum e*t*m = {rhs}"),
            Diagnosis::NotMonic { monomial, coefficient } => {
                write!(f, "(i) coefficient of the extreme monomial {monomial:?} is {coefficient}, not 1")
            }
            Diagnosis::ValueMismatch { lhs, rhs } => write!(f, "(ii) w(f) = {lhs} but sum e*t*lambda = {rhs}"),
            Diagnosis::MarginalMismatch { var, lhs, rhs } => {
                write!(f, "(ii) marginal value in variable {} is {lhs} but e*t*lambda = {rhs}", var + 1)
            }
            Diagnosis::NonDivisibleIndex { index, var, e } => write!(
                f,
                "(iii) contributing index {index:?} not divisible by e = {e} in variable {}",
                var + 1
            ),
            Diagnosis::FractionalPPower { index } => {
                write!(f, "(iii) contributing index {index:?} leaves a fractional power of p")
            }
            Diagnosis::ResidueDegree { var, lhs, rhs } => {
                write!(f, "(iii) deg_Z{} T = {lhs} but t = {rhs}", var + 1)
            }
            Diagnosis::ResidueNotMonic => write!(f, "(iii) residue polynomial is not monic"),
        }
    }
}

/// Outcome of the certification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Certified,
    NotALifting(Diagnosis),
    ResidueReducible,
    ResidueIsVariable { var: usize },
    ResidueNotMonic,
    /// Ramification indices `e_a`, `e_b` share a factor; the criterion is not
    /// sound in that case.
    RamificationNotCoprime { a: usize, b: usize },
}

impl Verdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, Verdict::Certified)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Certified => "Certified",
            Verdict::NotALifting(_) => "NotALifting",
            Verdict::ResidueReducible => "ResidueReducible",
            Verdict::ResidueIsVariable { .. } => "ResidueIsVariable",
            Verdict::ResidueNotMonic => "ResidueNotMonic",
            Verdict::RamificationNotCoprime { .. } => "RamificationNotCoprime",
        }
    }
}

/// Result of [`check_lifting`]: every check run, in order, up to the first failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftingReport {
    pub t: Option<Vec<u32>>,
    pub checks: Vec<Check>,
    pub outcome: Result<ResiduePoly, Diagnosis>,
}

impl LiftingReport {
    pub fn into_result(self) -> Result<(ResiduePoly, Vec<u32>), Diagnosis> {
        let t = self.t;
        self.outcome.map(|r| (r, t.expect("t is known once the residue exists")))
    }
}

fn monomial_text(exp: &[u32], names: &[String]) -> String {
    MultiPoly::monomial(exp.to_vec(), Rational::one()).to_text(names)
}

/// Checks the three lifting conditions with first-failure discipline.
pub fn check_lifting(f: &QPoly, config: &PairConfig, names: &[String]) -> LiftingReport {
    let mut checks = Vec::new();
    let fail = |checks: Vec<Check>, t: Option<Vec<u32>>, d: Diagnosis| LiftingReport { t, checks, outcome: Err(d) };
    let n = config.nvars();
    if f.nvars() != n {
        return fail(checks, None, Diagnosis::VariableCount { expected: n, found: f.nvars() });
    }
    if f.is_zero() {
        return fail(checks, None, Diagnosis::ZeroPolynomial);
    }
    let pairs = config.pairs();

    // (i)
    let mut t = Vec::with_capacity(n);
    let mut box_degrees = Vec::with_capacity(n);
    for (var, pair) in pairs.iter().enumerate() {
        let degree = f.degree_in(var);
        let e_m = pair.e * pair.m as u64;
        let ok = degree > 0 && (degree as u64).is_multiple_of(e_m);
        checks.push(Check::new(format!("(i) deg_{} f divisible by e*m", names[var]), degree, e_m, ok));
        if !ok {
            return fail(checks, None, Diagnosis::DegreeNotDivisible { var, degree, e_m });
        }
        t.push((degree as u64 / e_m) as u32);
        box_degrees.push(degree);
    }
    let total = f.degree().expect("nonzero");
    let rhs: u64 = box_degrees.iter().map(|&d| d as u64).sum();
    let ok = total as u64 == rhs;
    checks.push(Check::new("(i) deg f = sum e*t*m", total, rhs, ok));
    if !ok {
        return fail(checks, Some(t), Diagnosis::TotalDegree { lhs: total, rhs });
    }
    let lead = f.coeff(&box_degrees);
    let ok = lead.is_one();
    checks.push(Check::new(
        format!("(i) coefficient of {}", monomial_text(&box_degrees, names)),
        format_rational(&lead),
        "1",
        ok,
    ));
    if !ok {
        return fail(
            checks,
            Some(t),
            Diagnosis::NotMonic { monomial: box_degrees, coefficient: format_rational(&lead) },
        );
    }

    // (ii)
    let expansion = config.expand(f).expect("variable count checked");
    let wv = config.w_from_expansion(&expansion);
    let level = Val::Finite(config.level(&t));
    let ok = wv.value == level;
    checks.push(Check::new("(ii) w(f) = sum e*t*lambda", &wv.value, &level, ok));
    if !ok {
        return fail(
            checks,
            Some(t),
            Diagnosis::ValueMismatch { lhs: wv.value.to_string(), rhs: level.to_string() },
        );
    }
    for var in 0..n {
        let lhs = config.marginal_from_expansion(&expansion, var);
        let rhs = Val::Finite(config.marginal_level(&t, var));
        let ok = lhs == rhs;
        checks.push(Check::new(format!("(ii) w_{}(f) = e*t*lambda", names[var]), &lhs, &rhs, ok));
        if !ok {
            return fail(
                checks,
                Some(t),
                Diagnosis::MarginalMismatch { var, lhs: lhs.to_string(), rhs: rhs.to_string() },
            );
        }
    }

    // (iii)
    let residue = match config.residue_from_expansion(&expansion, &t) {
        Ok(r) => r,
        Err(err) => {
            checks.push(Check::new("(iii) residue exists", err.to_string(), "ok", false));
            let d = match err {
                ResidueError::NonDivisibleIndex { index, var, e } => Diagnosis::NonDivisibleIndex { index, var, e },
                ResidueError::FractionalPPower { index } => Diagnosis::FractionalPPower { index },
                other => unreachable!("level and degree count already checked: {other}"),
            };
            return fail(checks, Some(t), d);
        }
    };
    checks.push(Check::new(
        "(iii) residue exists",
        residue.to_text(config.field()),
        "ok",
        true,
    ));
    for var in 0..n {
        let lhs = residue.degree_in(var);
        let ok = lhs == t[var];
        checks.push(Check::new(format!("(iii) deg_Z{} T = t_{}", var + 1, names[var]), lhs, t[var], ok));
        if !ok {
            return fail(checks, Some(t.clone()), Diagnosis::ResidueDegree { var, lhs, rhs: t[var] });
        }
    }
    let ok = residue.is_monic(config.field());
    let extreme = residue.coeff(&t).map(|c| config.field().format(c)).unwrap_or_else(|| "0".into());
    checks.push(Check::new("(iii) T monic", extreme, "1", ok));
    if !ok {
        return fail(checks, Some(t), Diagnosis::ResidueNotMonic);
    }
    LiftingReport { t: Some(t), checks, outcome: Ok(residue) }
}

/// One row of the per-variable table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairRow {
    pub var: String,
    pub phi: String,
    pub m: usize,
    pub lambda: String,
    pub e: u64,
    #[serde(rename = "N")]
    pub n_exp: i64,
    pub h: String,
}

/// Full audit record of a certification attempt.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftingCertificate {
    pub tool: String,
    pub version: String,
    pub input: String,
    pub variables: Vec<String>,
    pub prime: Prime,
    pub pairs: Vec<MinimalPairSpec>,
    pub table: Vec<PairRow>,
    pub t: Option<Vec<u32>>,
    pub residue: Option<ResiduePolyJson>,
    pub residue_text: Option<String>,
    pub checks: Vec<Check>,
    pub verdict: Verdict,
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<String>,
}

impl LiftingCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

const NOTES: [&str; 4] = [
    "expansion coefficients satisfy the syntactic bound deg_{x_j} a_I < deg phi_j, which implies the bound after substituting the other roots",
    "inert lambda = min_{k>=1} (v(phi^(k)(alpha)/k!) + k*delta); coefficient values take the least v_p over the basis of monomials in the roots",
    "residue coefficient of Z^J is the reduction of a_I * p^(sum_j N_j (J_j - t_j)) for the contributing index I = e*J",
    "Certified means irreducible over Q_p, hence over Q; pairwise coprime ramification indices are required",
];

/// Options for [`certify_irreducible`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifyOptions {
    /// Variable names; defaults to `x, y, z` / `x1..xn`.
    pub names: Option<Vec<String>>,
    /// Candidate budget of the residue irreducibility search.
    pub limit: u64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions { names: None, limit: crate::finitefield::DEFAULT_CANDIDATE_LIMIT }
    }
}

/// Runs [`check_lifting`] and the residue tests, recording every quantity.
pub fn certify_irreducible(
    f: &QPoly,
    config: &PairConfig,
    options: &CertifyOptions,
) -> Result<LiftingCertificate, GuardExceeded> {
    let names = options.names.clone().unwrap_or_else(|| default_names(f.nvars()));
    let field = config.field();
    let table = config
        .pairs()
        .iter()
        .zip(names.iter().chain(std::iter::repeat(&"?".to_string())))
        .map(|(p, name)| PairRow {
            var: name.clone(),
            phi: p.phi.to_multi(1, 0).to_text(std::slice::from_ref(name)),
            m: p.m,
            lambda: format_rational(&p.lambda),
            e: p.e,
            n_exp: p.n_exp,
            h: format_rational(&p.h),
        })
        .collect();
    let input_names = if names.len() == f.nvars() { names.clone() } else { default_names(f.nvars()) };
    let mut cert = LiftingCertificate {
        tool: "liftcert".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        input: f.to_text(&input_names),
        variables: names.clone(),
        prime: config.prime(),
        pairs: config.specs(),
        table,
        t: None,
        residue: None,
        residue_text: None,
        checks: Vec::new(),
        verdict: Verdict::ResidueReducible,
        notes: NOTES.iter().map(|s| s.to_string()).collect(),
        oracle: None,
    };
    let report = check_lifting(f, config, &input_names);
    cert.t = report.t;
    cert.checks = report.checks;
    let residue = match report.outcome {
        Ok(r) => r,
        Err(Diagnosis::ResidueNotMonic) => {
            cert.verdict = Verdict::ResidueNotMonic;
            return Ok(cert);
        }
        Err(d) => {
            cert.verdict = Verdict::NotALifting(d);
            return Ok(cert);
        }
    };
    cert.residue = Some(residue.to_json(field));
    cert.residue_text = Some(residue.to_text(field));

    let variable = (0..residue.nvars()).find(|&v| residue.is_variable(field, v));
    cert.checks.push(Check::new(
        "T != Z_i",
        cert.residue_text.clone().unwrap_or_default(),
        variable.map(|v| format!("Z{}", v + 1)).unwrap_or_else(|| "none".into()),
        variable.is_none(),
    ));
    if let Some(var) = variable {
        cert.verdict = Verdict::ResidueIsVariable { var };
        return Ok(cert);
    }

    let pairs = config.pairs();
    let clash = (0..pairs.len())
        .flat_map(|a| (a + 1..pairs.len()).map(move |b| (a, b)))
        .find(|&(a, b)| pairs[a].e.gcd(&pairs[b].e) != 1);
    let es: Vec<String> = pairs.iter().map(|p| p.e.to_string()).collect();
    cert.checks.push(Check::new(
        "ramification indices pairwise coprime",
        format!("e = ({})", es.join(", ")),
        "coprime",
        clash.is_none(),
    ));
    if let Some((a, b)) = clash {
        cert.verdict = Verdict::RamificationNotCoprime { a, b };
        return Ok(cert);
    }

    let irreducible = is_irreducible_multivariate(&residue, field, options.limit)?;
    let q = field.order_big();
    cert.checks.push(Check::new(
        format!("T irreducible over F_{q}"),
        if irreducible { "irreducible" } else { "reducible" },
        "irreducible",
        irreducible,
    ));
    cert.verdict = if irreducible { Verdict::Certified } else { Verdict::ResidueReducible };
    Ok(cert)
}

/// Builds a lifting of `residue` for `config`, optionally with seeded
/// noise terms of strictly higher value.
pub fn generate_lifting(residue: &ResiduePoly, config: &PairConfig, seed: u64) -> Result<QPoly, GenerateError> {
    let n = config.nvars();
    let field = config.field();
    if residue.nvars() != n {
        return Err(crate::error::ConfigError::VariableCount { expected: n, found: residue.nvars() }.into());
    }
    if !residue.is_monic(field) {
        return Err(GenerateError::NotMonic);
    }
    if let Some(var) = (0..n).find(|&v| residue.is_variable(field, v)) {
        return Err(GenerateError::ResidueIsVariable(var));
    }
    let t = residue.degrees();
    if let Some(var) = t.iter().position(|&ti| ti == 0) {
        return Err(GenerateError::MissingVariable(var));
    }
    let pairs = config.pairs();
    let mut owner = vec![0usize; field.num_generators()];
    for (var, pair) in pairs.iter().enumerate() {
        if let Some(g) = pair.generator {
            owner[g] = var;
        }
    }
    let p = config.prime();
    let mut f = QPoly::zero(n);
    for (exp, c) in residue.terms() {
        let lifted = field.lift(c);
        for (var, pair) in pairs.iter().enumerate() {
            if let Some(g) = pair.generator {
                if exp[var] == t[var] && lifted.degree_in(g) > 0 {
                    return Err(GenerateError::NotLiftable { index: exp.clone(), var });
                }
            }
        }
        let mut term = MultiPoly::from_terms(
            n,
            lifted.terms().map(|(ye, c)| {
                let mut xe = vec![0u32; n];
                for (g, &k) in ye.iter().enumerate() {
                    xe[owner[g]] = k;
                }
                (xe, Rational::from_integer(c.clone()))
            }),
        );
        let shift: i64 = pairs.iter().zip(exp).zip(&t).map(|((pr, &j), &ti)| pr.n_exp * (ti as i64 - j as i64)).sum();
        term = term.scale(&p.pow(shift));
        for (var, pair) in pairs.iter().enumerate() {
            term = &term * &pair.phi.to_multi(n, var).pow(pair.e as u32 * exp[var]);
        }
        f = &f + &term;
    }
    if seed != 0 {
        f = &f + &noise(&f, config, &t, seed);
    }
    Ok(f)
}

/// `p^k g` for a random sparse `g` inside the degree box of `f`, with `k`
/// chosen so that `w(p^k g) > w(f)` and every marginal stays at its level.
fn noise(f: &QPoly, config: &PairConfig, t: &[u32], seed: u64) -> QPoly {
    let n = config.nvars();
    let degrees = f.degrees();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = rng.gen_range(1..=3);
    let mut g = QPoly::zero(n);
    for _ in 0..count {
        let exp: Monomial = degrees.iter().map(|&d| rng.gen_range(0..=d)).collect();
        if exp == degrees {
            continue;
        }
        let mut c: i64 = rng.gen_range(1..=5);
        if rng.gen_bool(0.5) {
            c = -c;
        }
        g.add_term(exp, Rational::from_integer(BigInt::from(c)));
    }
    if g.is_zero() {
        return g;
    }
    let wg = config.w_value(&g).expect("same variable count");
    let wg = wg.value.finite().expect("nonzero").clone();
    let mut k = (config.level(t) - wg).floor().to_integer() + BigInt::one();
    for var in 0..n {
        let marginal = config.w_marginal(&g, var).expect("same variable count");
        let need = (config.marginal_level(t, var) - marginal.finite().expect("nonzero")).ceil().to_integer();
        k = k.max(need);
    }
    let k = k.max(BigInt::one()).to_i64().expect("small exponent");
    g.scale(&config.prime().pow(k))
}

/// Heuristic pair configurations: all-Gauss first, then
/// `RationalCenter(0, δ)` per variable for each positive `δ = -slope` of the
/// lower Newton polygon of `f` restricted to that variable.
pub fn suggest_pairs(f: &QPoly, p: Prime, max_configs: usize) -> Vec<Vec<MinimalPairSpec>> {
    let n = f.nvars();
    let choices: Vec<Vec<Rational>> = (0..n)
        .map(|var| {
            let mut deltas = vec![Rational::zero()];
            deltas.extend(newton_slopes(f, var, p).into_iter().map(|s| -s).filter(|d| d.is_positive()));
            deltas
        })
        .collect();
    let mut out = Vec::new();
    let mut odometer = vec![0usize; n];
    loop {
        if out.len() >= max_configs.max(1) {
            break;
        }
        out.push(
            odometer
                .iter()
                .zip(&choices)
                .map(|(&i, c)| MinimalPairSpec::rational_center(Rational::zero(), c[i].clone()))
                .collect(),
        );
        let mut pos = n;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            odometer[pos] += 1;
            if odometer[pos] < choices[pos].len() {
                break;
            }
            odometer[pos] = 0;
        }
    }
    out
}

/// Slopes of the lower convex hull of `(k, v_p(a_k))` for `f(0, .., x_var, .., 0)`.
fn newton_slopes(f: &QPoly, var: usize, p: Prime) -> Vec<Rational> {
    let mut points: Vec<(i64, Rational)> = f
        .terms()
        .filter(|(e, _)| e.iter().enumerate().all(|(j, &k)| j == var || k == 0))
        .filter_map(|(e, c)| vp(c, p).finite().map(|v| (e[var] as i64, v.clone())))
        .collect();
    points.sort_by_key(|a| a.0);
    let mut hull: Vec<(i64, Rational)> = Vec::new();
    for pt in points {
        while hull.len() >= 2 {
            let (a, b) = (&hull[hull.len() - 2], &hull[hull.len() - 1]);
            // drop b when it lies on or above the segment a..pt
            let lhs = (&b.1 - &a.1) * Rational::from_integer(BigInt::from(pt.0 - a.0));
            let rhs = (&pt.1 - &a.1) * Rational::from_integer(BigInt::from(b.0 - a.0));
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    hull.windows(2)
        .map(|w| (&w[1].1 - &w[0].1) / Rational::from_integer(BigInt::from(w[1].0 - w[0].0)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn poly(text: &str, n: usize) -> QPoly {
        parse_polynomial(text, &default_names(n)).unwrap()
    }

    fn config(p: u64, specs: Vec<MinimalPairSpec>) -> PairConfig {
        PairConfig::new(Prime::new(p).unwrap(), specs, 1_000_000).unwrap()
    }

    fn eis(p: u64, delta: Rational) -> PairConfig {
        config(p, vec![MinimalPairSpec::rational_center(q(0, 1), delta)])
    }

    fn certify(f: &QPoly, cfg: &PairConfig) -> LiftingCertificate {
        certify_irreducible(f, cfg, &CertifyOptions::default()).unwrap()
    }

    #[test]
    fn example_lifting() {
        let cfg = PairConfig::gauss(Prime::new(3).unwrap(), 2);
        let f = poly("x^2*y^2 + 3*x*y + 6*x + 3*y + 1", 2);
        let (t_poly, t) = check_lifting(&f, &cfg, &default_names(2)).into_result().unwrap();
        assert_eq!(t, vec![2, 2]);
        assert_eq!(t_poly.to_text(cfg.field()), "Z1^2*Z2^2 + 1");
        let cert = certify(&f, &cfg);
        assert_eq!(cert.verdict, Verdict::Certified);
        assert!(cert.checks.iter().all(|c| c.pass));
        assert_eq!(cert.table[0].h, "1");
    }

    #[test]
    fn eisenstein_and_negative_controls() {
        let cfg = eis(2, q(1, 2));
        let (t_poly, t) = check_lifting(&poly("x^2 + 2", 1), &cfg, &default_names(1)).into_result().unwrap();
        assert_eq!((t_poly.to_text(cfg.field()).as_str(), t), ("Z1 + 1", vec![1]));
        assert_eq!(certify(&poly("x^2 + 2", 1), &cfg).verdict, Verdict::Certified);
        assert_eq!(certify(&poly("x^2 + 2*x + 4", 1), &cfg).verdict, Verdict::ResidueIsVariable { var: 0 });

        let gauss = PairConfig::gauss(Prime::new(3).unwrap(), 2);
        let f = poly("x^2*y^2 - 1", 2);
        let (t_poly, _) = check_lifting(&f, &gauss, &default_names(2)).into_result().unwrap();
        assert_eq!(t_poly.to_text(gauss.field()), "Z1^2*Z2^2 + 2");
        assert_eq!(certify(&f, &gauss).verdict, Verdict::ResidueReducible);

        let cert = certify(&poly("2*x", 1), &cfg);
        assert!(matches!(cert.verdict, Verdict::NotALifting(Diagnosis::DegreeNotDivisible { .. })));
    }

    #[test]
    fn first_failure_discipline() {
        let cfg = PairConfig::gauss(Prime::new(3).unwrap(), 2);
        // fails monicity and would also fail the value check
        let cert = certify(&poly("2*x^2*y^2 + 1/3", 2), &cfg);
        match &cert.verdict {
            Verdict::NotALifting(d) => assert_eq!(d.condition(), 1),
            other => panic!("{other:?}"),
        }
        assert!(cert.checks.iter().all(|c| !c.name.starts_with("(ii)")));
        assert!(!cert.checks.last().unwrap().pass);

        let cert = certify(&poly("x^2*y^2 + 1/3", 2), &cfg);
        assert!(matches!(cert.verdict, Verdict::NotALifting(Diagnosis::ValueMismatch { .. })));
        let cert = certify(&poly("x^2*y + x*y^2", 2), &cfg);
        assert!(matches!(cert.verdict, Verdict::NotALifting(Diagnosis::TotalDegree { .. })));
        let cert = certify(&QPoly::zero(2), &cfg);
        assert_eq!(cert.verdict, Verdict::NotALifting(Diagnosis::ZeroPolynomial));
        let cert = certify(&poly("1", 2), &cfg);
        assert!(matches!(cert.verdict, Verdict::NotALifting(Diagnosis::DegreeNotDivisible { .. })));
    }

    #[test]
    fn value_failure_in_mixed_configuration() {
        // the term 3 x^2 has value 1 below the level 0 + 2 * 1
        let cfg = config(
            3,
            vec![MinimalPairSpec::gauss(), MinimalPairSpec::rational_center(q(0, 1), q(1, 1))],
        );
        let cert = certify(&poly("x^2*y^2 + 3*x^2 + 9", 2), &cfg);
        assert!(matches!(cert.verdict, Verdict::NotALifting(Diagnosis::ValueMismatch { .. })), "{:?}", cert.verdict);
    }

    #[test]
    fn non_coprime_ramification_rejected() {
        let cfg = config(
            2,
            vec![
                MinimalPairSpec::rational_center(q(0, 1), q(1, 2)),
                MinimalPairSpec::rational_center(q(0, 1), q(1, 2)),
            ],
        );
        let f = poly("x^2*y^2 - 4", 2);
        let (t_poly, _) = check_lifting(&f, &cfg, &default_names(2)).into_result().unwrap();
        assert_eq!(t_poly.to_text(cfg.field()), "Z1*Z2 + 1");
        assert_eq!(certify(&f, &cfg).verdict, Verdict::RamificationNotCoprime { a: 0, b: 1 });
    }

    #[test]
    fn generate_examples() {
        let f3 = config(3, vec![MinimalPairSpec::gauss(), MinimalPairSpec::gauss()]);
        let field = f3.field();
        let t = ResiduePoly::from_terms(field, 2, [(vec![2, 2], field.one()), (vec![0, 0], field.one())]);
        assert_eq!(generate_lifting(&t, &f3, 0).unwrap(), poly("x^2*y^2 + 1", 2));

        let cfg = eis(2, q(1, 2));
        let field = cfg.field();
        let t = ResiduePoly::from_terms(field, 1, [(vec![1], field.one()), (vec![0], field.one())]);
        assert_eq!(generate_lifting(&t, &cfg, 0).unwrap(), poly("x^2 + 2", 1));

        let z = ResiduePoly::from_terms(field, 1, [(vec![1], field.one())]);
        assert_eq!(generate_lifting(&z, &cfg, 0), Err(GenerateError::ResidueIsVariable(0)));
        let not_monic = ResiduePoly::from_terms(field, 1, [(vec![0], field.one())]);
        assert!(generate_lifting(&not_monic, &cfg, 0).is_err());
    }

    #[test]
    fn generate_with_noise_round_trips() {
        let cfg = config(
            3,
            vec![MinimalPairSpec::rational_center(q(1, 1), q(2, 3)), MinimalPairSpec::inert(vec![1, 0, 1], q(1, 2))],
        );
        let field = cfg.field();
        // Z1*Z2 + (y1) * Z2 ... keep coefficients of the top Z2 power free of y1
        let y = field.generator(0);
        let t = ResiduePoly::from_terms(
            field,
            2,
            [(vec![1, 1], field.one()), (vec![1, 0], y.clone()), (vec![0, 0], field.constant(1))],
        );
        for seed in 0..5 {
            let f = generate_lifting(&t, &cfg, seed).unwrap();
            let (back, _) = check_lifting(&f, &cfg, &default_names(2)).into_result().unwrap();
            assert_eq!(back, t, "seed {seed}");
        }
        let bad = ResiduePoly::from_terms(field, 2, [(vec![1, 1], field.one()), (vec![0, 1], y)]);
        assert!(matches!(generate_lifting(&bad, &cfg, 0), Err(GenerateError::NotLiftable { var: 1, .. })));
    }

    #[test]
    fn suggestions() {
        let p2 = Prime::new(2).unwrap();
        let s = suggest_pairs(&poly("x^2 + 2", 1), p2, 16);
        assert_eq!(s[0], vec![MinimalPairSpec::gauss()]);
        assert!(s.contains(&vec![MinimalPairSpec::rational_center(q(0, 1), q(1, 2))]));
        assert_eq!(suggest_pairs(&poly("1", 1), p2, 16), vec![vec![MinimalPairSpec::gauss()]]);
        let f = poly("x^2*y^2 + 3*x*y + 6*x + 3*y + 1", 2);
        let s = suggest_pairs(&f, Prime::new(3).unwrap(), 16);
        assert_eq!(s[0], vec![MinimalPairSpec::gauss(); 2]);
        // x^4 + 2x^2 + 8 at 2: points (0,3),(2,1),(4,0) -> slopes -1, -1/2
        let s = suggest_pairs(&poly("x^4 + 2*x^2 + 8", 1), p2, 16);
        assert_eq!(s.len(), 3);
        assert_eq!(s[1], vec![MinimalPairSpec::rational_center(q(0, 1), q(1, 1))]);
        assert_eq!(suggest_pairs(&poly("x^4 + 2*x^2 + 8", 1), p2, 2).len(), 2);
        // (2,2) lies above the chord in x^4 + 4x^2 + 8: one slope only
        assert_eq!(suggest_pairs(&poly("x^4 + 4*x^2 + 8", 1), p2, 16).len(), 2);
    }

    #[test]
    fn certificate_round_trip() {
        let cfg = PairConfig::gauss(Prime::new(3).unwrap(), 2);
        for text in ["x^2*y^2 + 3*x*y + 6*x + 3*y + 1", "x^2*y^2 - 1", "2*x*y"] {
            let cert = certify(&poly(text, 2), &cfg);
            let json = cert.to_json();
            let back = LiftingCertificate::from_json(&json).unwrap();
            assert_eq!(back, cert);
            assert_eq!(back.to_json(), json);
        }
    }
}
