//! Prime fields, composite residue fields `F_p[y_1..y_k]/(g_1..g_k)` and
//! exhaustive irreducibility tests for residue polynomials.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{ConfigError, GuardExceeded};
use crate::exactnum::{inv_mod, Prime};
use crate::multipoly::{grlex_cmp, Monomial};
use crate::parse::parse_polynomial;
use crate::{QPoly, ZPoly};

/// Default budget for exhaustive candidate searches.
pub const DEFAULT_CANDIDATE_LIMIT: u64 = 1_000_000;

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Reduces coefficients into `0..p` and strips leading zeros.
pub fn fp_normalize(coeffs: &[i64], p: Prime) -> Vec<u64> {
    let pm = p.get() as i64;
    let mut v: Vec<u64> = coeffs.iter().map(|c| c.rem_euclid(pm) as u64).collect();
    trim(&mut v);
    v
}

/// Remainder of `a` modulo the monic `m` over `F_p`.
fn fp_rem_monic(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let dm = m.len() - 1;
    let mut r = a.to_vec();
    while r.len() > dm {
        let lead = r.pop().expect("nonempty");
        if lead == 0 {
            continue;
        }
        let off = r.len() - dm;
        for k in 0..dm {
            r[off + k] = (r[off + k] + (p - lead) * m[k]) % p;
        }
    }
    trim(&mut r);
    r
}

/// Trial-division irreducibility test for a monic polynomial over `F_p`
/// (coefficients low to high).
pub fn is_irreducible_univariate(g: &[u64], p: Prime, limit: u64) -> Result<bool, GuardExceeded> {
    let pv = p.get();
    let d = g.len().checked_sub(1).expect("nonzero polynomial");
    assert!(d >= 1 && g[d] == 1, "monic of degree at least one");
    if d == 1 {
        return Ok(true);
    }
    let half = d / 2;
    let mut count: u128 = 0;
    for k in 1..=half {
        count = count.saturating_add((pv as u128).saturating_pow(k as u32));
    }
    if count > limit as u128 {
        return Err(GuardExceeded {
            what: "univariate trial division",
            needed: count.to_string(),
            limit,
        });
    }
    for k in 1..=half {
        let mut cand = vec![0u64; k + 1];
        cand[k] = 1;
        loop {
            if fp_rem_monic(g, &cand, pv).is_empty() {
                return Ok(false);
            }
            // odometer over the k lower coefficients
            let mut i = 0;
            while i < k {
                cand[i] += 1;
                if cand[i] < pv {
                    break;
                }
                cand[i] = 0;
                i += 1;
            }
            if i == k {
                break;
            }
        }
    }
    Ok(true)
}

/// An element of a [`ResidueField`]: the fully reduced representative, stored
/// densely in mixed radix (`y_i` exponents below `deg g_i`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResidueElement(Vec<u64>);

impl ResidueElement {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }
}

/// `F_p[y_1..y_k]/(g_1(y_1)..g_k(y_k))` with irreducible `g_i` of pairwise
/// coprime degrees, which makes the quotient a field of order `p^(∏ deg g_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueField {
    p: Prime,
    gens: Vec<Vec<u64>>,
    degs: Vec<usize>,
    strides: Vec<usize>,
    dim: usize,
}

impl ResidueField {
    pub fn prime_field(p: Prime) -> Self {
        ResidueField { p, gens: Vec::new(), degs: Vec::new(), strides: Vec::new(), dim: 1 }
    }

    /// Validates the generators (monic, degree ≥ 2, irreducible, pairwise
    /// coprime degrees) and builds the field.
    pub fn new(p: Prime, generators: Vec<Vec<u64>>, limit: u64) -> Result<Self, ConfigError> {
        let pv = p.get();
        let mut gens = Vec::with_capacity(generators.len());
        for (index, g) in generators.into_iter().enumerate() {
            let mut g: Vec<u64> = g.into_iter().map(|c| c % pv).collect();
            trim(&mut g);
            if g.len() < 3 || g.last() != Some(&1) {
                return Err(ConfigError::InvalidPair {
                    index,
                    reason: "residue generator must be monic of degree at least 2".into(),
                });
            }
            if !is_irreducible_univariate(&g, p, limit)? {
                return Err(ConfigError::GeneratorReducible { index });
            }
            gens.push(g);
        }
        let degs: Vec<usize> = gens.iter().map(|g| g.len() - 1).collect();
        for a in 0..degs.len() {
            for b in a + 1..degs.len() {
                if degs[a].gcd(&degs[b]) != 1 {
                    return Err(ConfigError::DegreesNotCoprime { a: degs[a], b: degs[b] });
                }
            }
        }
        let mut strides = Vec::with_capacity(degs.len());
        let mut dim = 1;
        for &m in &degs {
            strides.push(dim);
            dim *= m;
        }
        Ok(ResidueField { p, gens, degs, strides, dim })
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    /// Degree of the field over `F_p`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generator_degrees(&self) -> &[usize] {
        &self.degs
    }

    pub fn num_generators(&self) -> usize {
        self.gens.len()
    }

    /// Field order `q`, if it fits in a `u64`.
    pub fn order(&self) -> Option<u64> {
        self.p.get().checked_pow(self.dim as u32)
    }

    pub fn order_big(&self) -> BigUint {
        num_traits::pow::pow(BigUint::from(self.p.get()), self.dim)
    }

    pub fn zero(&self) -> ResidueElement {
        ResidueElement(vec![0; self.dim])
    }

    pub fn one(&self) -> ResidueElement {
        self.constant(1)
    }

    pub fn constant(&self, c: u64) -> ResidueElement {
        let mut v = vec![0; self.dim];
        v[0] = c % self.p.get();
        ResidueElement(v)
    }

    /// The class of `y_i`.
    pub fn generator(&self, i: usize) -> ResidueElement {
        let mut exps = vec![0u32; self.gens.len()];
        exps[i] = 1;
        self.from_monomials([(exps, 1)])
    }

    fn decode(&self, mut idx: usize) -> Vec<usize> {
        self.degs
            .iter()
            .map(|&m| {
                let e = idx % m;
                idx /= m;
                e
            })
            .collect()
    }

    pub fn add(&self, a: &ResidueElement, b: &ResidueElement) -> ResidueElement {
        let p = self.p.get();
        ResidueElement(a.0.iter().zip(&b.0).map(|(x, y)| (x + y) % p).collect())
    }

    pub fn neg(&self, a: &ResidueElement) -> ResidueElement {
        let p = self.p.get();
        ResidueElement(a.0.iter().map(|&x| (p - x) % p).collect())
    }

    pub fn sub(&self, a: &ResidueElement, b: &ResidueElement) -> ResidueElement {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &ResidueElement, c: u64) -> ResidueElement {
        let p = self.p.get();
        ResidueElement(a.0.iter().map(|&x| x * (c % p) % p).collect())
    }

    pub fn mul(&self, a: &ResidueElement, b: &ResidueElement) -> ResidueElement {
        let p = self.p.get();
        if self.dim == 1 {
            return ResidueElement(vec![a.0[0] * b.0[0] % p]);
        }
        // product with y_i exponents up to 2 m_i - 2, then reduce
        let wide_dims: Vec<usize> = self.degs.iter().map(|&m| 2 * m - 1).collect();
        let mut wide_strides = Vec::with_capacity(wide_dims.len());
        let mut size = 1;
        for &w in &wide_dims {
            wide_strides.push(size);
            size *= w;
        }
        let mut wide = vec![0u64; size];
        for (ia, &ca) in a.0.iter().enumerate() {
            if ca == 0 {
                continue;
            }
            let ea = self.decode(ia);
            for (ib, &cb) in b.0.iter().enumerate() {
                if cb == 0 {
                    continue;
                }
                let eb = self.decode(ib);
                let w: usize = ea.iter().zip(&eb).zip(&wide_strides).map(|((x, y), s)| (x + y) * s).sum();
                wide[w] = (wide[w] + ca * cb) % p;
            }
        }
        self.reduce_wide(wide, &wide_dims, &wide_strides)
    }

    fn reduce_wide(&self, mut wide: Vec<u64>, dims: &[usize], strides: &[usize]) -> ResidueElement {
        let p = self.p.get();
        for (i, g) in self.gens.iter().enumerate() {
            let m = self.degs[i];
            for k in (m..dims[i]).rev() {
                for idx in 0..wide.len() {
                    if (idx / strides[i]) % dims[i] != k || wide[idx] == 0 {
                        continue;
                    }
                    let c = std::mem::replace(&mut wide[idx], 0);
                    let base = idx - k * strides[i];
                    for (j, &gj) in g.iter().take(m).enumerate() {
                        let t = base + (k - m + j) * strides[i];
                        wide[t] = (wide[t] + (p - c) * gj) % p;
                    }
                }
            }
        }
        let mut out = vec![0u64; self.dim];
        for (idx, &c) in wide.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let mut rest = idx;
            let mut target = 0;
            for (i, &d) in dims.iter().enumerate() {
                let e = rest % d;
                rest /= d;
                debug_assert!(e < self.degs[i]);
                target += e * self.strides[i];
            }
            out[target] = c;
        }
        ResidueElement(out)
    }

    pub fn pow(&self, a: &ResidueElement, exp: &BigUint) -> ResidueElement {
        let mut acc = self.one();
        for i in (0..exp.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if exp.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    /// Multiplicative inverse, `a^(q-2)`.
    pub fn inv(&self, a: &ResidueElement) -> Option<ResidueElement> {
        if a.is_zero() {
            return None;
        }
        if self.dim == 1 {
            return Some(self.constant(inv_mod(a.0[0], self.p.get())));
        }
        let e = self.order_big() - BigUint::from(2u32);
        Some(self.pow(a, &e))
    }

    /// Reduces `Σ c · y^exps` (exponents unrestricted) to canonical form.
    pub fn from_monomials(&self, terms: impl IntoIterator<Item = (Vec<u32>, u64)>) -> ResidueElement {
        let mut acc = self.zero();
        for (exps, c) in terms {
            assert_eq!(exps.len(), self.gens.len());
            if exps.iter().zip(&self.degs).all(|(&e, &m)| (e as usize) < m) {
                let idx: usize = exps.iter().zip(&self.strides).map(|(&e, s)| e as usize * s).sum();
                acc.0[idx] = (acc.0[idx] + c) % self.p.get();
                continue;
            }
            let mut term = self.constant(c);
            for (i, &e) in exps.iter().enumerate() {
                let g = self.generator_raw(i);
                term = self.mul(&term, &self.pow(&g, &BigUint::from(e)));
            }
            acc = self.add(&acc, &term);
        }
        acc
    }

    fn generator_raw(&self, i: usize) -> ResidueElement {
        let mut v = vec![0u64; self.dim];
        v[self.strides[i]] = 1;
        ResidueElement(v)
    }

    /// Image of a polynomial over ℚ in the generator variables.
    pub fn from_rational_poly(&self, poly: &QPoly) -> Option<ResidueElement> {
        assert_eq!(poly.nvars(), self.gens.len());
        let mut terms = Vec::with_capacity(poly.len());
        for (e, c) in poly.terms() {
            terms.push((e.clone(), self.p.reduce(c)?));
        }
        Some(self.from_monomials(terms))
    }

    /// Canonical integer representative, coefficients in `0..p`.
    pub fn lift(&self, a: &ResidueElement) -> ZPoly {
        let k = self.gens.len();
        let mut out = ZPoly::zero(k);
        for (idx, &c) in a.0.iter().enumerate() {
            if c != 0 {
                let exps = self.decode(idx).into_iter().map(|e| e as u32).collect();
                out.add_term(exps, BigInt::from(c));
            }
        }
        out
    }

    pub fn generator_names(&self) -> Vec<String> {
        (1..=self.gens.len()).map(|i| format!("y{i}")).collect()
    }

    pub fn format(&self, a: &ResidueElement) -> String {
        self.lift(a).to_text(&self.generator_names())
    }

    pub fn parse(&self, text: &str) -> Result<ResidueElement, ConfigError> {
        let poly = parse_polynomial(text, &self.generator_names())
            .map_err(|e| ConfigError::BadResidueElement(format!("{text}: {e}")))?;
        self.from_rational_poly(&poly)
            .ok_or_else(|| ConfigError::BadResidueElement(text.to_string()))
    }

    /// The `k`-th element in a fixed enumeration of the field (`k < q`).
    pub fn element(&self, mut k: u64) -> ResidueElement {
        let p = self.p.get();
        let mut v = vec![0u64; self.dim];
        for slot in v.iter_mut() {
            *slot = k % p;
            k /= p;
        }
        ResidueElement(v)
    }

    pub fn index_of(&self, a: &ResidueElement) -> u64 {
        let p = self.p.get();
        a.0.iter().rev().fold(0u64, |acc, &c| acc * p + c)
    }
}

/// Polynomial in `Z_1..Z_n` with coefficients in a [`ResidueField`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResiduePoly {
    nvars: usize,
    terms: BTreeMap<Monomial, ResidueElement>,
}

impl ResiduePoly {
    pub fn zero(nvars: usize) -> Self {
        ResiduePoly { nvars, terms: BTreeMap::new() }
    }

    pub fn from_terms(
        field: &ResidueField,
        nvars: usize,
        terms: impl IntoIterator<Item = (Monomial, ResidueElement)>,
    ) -> Self {
        let mut out = Self::zero(nvars);
        for (e, c) in terms {
            out.add_term(field, e, c);
        }
        out
    }

    pub fn add_term(&mut self, field: &ResidueField, exp: Monomial, c: ResidueElement) {
        assert_eq!(exp.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&exp) {
            Some(old) => field.add(&old, &c),
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(exp, sum);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &ResidueElement)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: &[u32]) -> Option<&ResidueElement> {
        self.terms.get(exp)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    pub fn degrees(&self) -> Vec<u32> {
        (0..self.nvars).map(|i| self.degree_in(i)).collect()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Monic: the coefficient of `∏ Z_i^{deg_{Z_i}}` is one.
    pub fn is_monic(&self, field: &ResidueField) -> bool {
        self.coeff(&self.degrees()).is_some_and(|c| *c == field.one())
    }

    /// True when the polynomial is exactly `Z_var`.
    pub fn is_variable(&self, field: &ResidueField, var: usize) -> bool {
        let mut e = vec![0u32; self.nvars];
        e[var] = 1;
        self.terms.len() == 1 && self.coeff(&e).is_some_and(|c| *c == field.one())
    }

    pub fn mul(&self, field: &ResidueField, rhs: &Self) -> Self {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(field, e, field.mul(ca, cb));
            }
        }
        out
    }

    /// Canonical text in `Z1..Zn`, coefficients as polynomials in `y1..yk`.
    pub fn to_text(&self, field: &ResidueField) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| grlex_cmp(b.0, a.0));
        let parts: Vec<String> = terms
            .into_iter()
            .map(|(e, c)| {
                let mut factors = Vec::new();
                let is_const = e.iter().all(|&k| k == 0);
                if *c != field.one() || is_const {
                    let text = field.format(c);
                    if text.contains(' ') {
                        factors.push(format!("({text})"));
                    } else {
                        factors.push(text);
                    }
                }
                for (i, &k) in e.iter().enumerate() {
                    match k {
                        0 => {}
                        1 => factors.push(format!("Z{}", i + 1)),
                        _ => factors.push(format!("Z{}^{k}", i + 1)),
                    }
                }
                factors.join("*")
            })
            .collect();
        parts.join(" + ")
    }

    pub fn to_json(&self, field: &ResidueField) -> ResiduePolyJson {
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| grlex_cmp(b.0, a.0));
        ResiduePolyJson {
            p: field.prime().get(),
            coeffs: terms
                .into_iter()
                .map(|(e, c)| ResidueTermJson { exp: e.clone(), c: field.format(c) })
                .collect(),
        }
    }

    pub fn from_json(json: &ResiduePolyJson, field: &ResidueField) -> Result<Self, ConfigError> {
        if json.p != field.prime().get() {
            return Err(ConfigError::Json(format!(
                "residue polynomial is over p = {} but the pairs use p = {}",
                json.p,
                field.prime()
            )));
        }
        let nvars = json.coeffs.first().map(|t| t.exp.len()).unwrap_or(0);
        let mut out = Self::zero(nvars);
        for t in &json.coeffs {
            if t.exp.len() != nvars {
                return Err(ConfigError::Json("exponent vectors of different lengths".into()));
            }
            out.add_term(field, t.exp.clone(), field.parse(&t.c)?);
        }
        Ok(out)
    }
}

/// File form of a residue polynomial, e.g.
/// `{"p":3,"coeffs":[{"exp":[2,2],"c":"1"},{"exp":[0,0],"c":"1"}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResiduePolyJson {
    pub p: u64,
    pub coeffs: Vec<ResidueTermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueTermJson {
    pub exp: Vec<u32>,
    pub c: String,
}

/// Element arithmetic used by the divisor search.
trait SearchArith {
    type E: Clone + PartialEq;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn sub_mul(&self, acc: &Self::E, a: &Self::E, b: &Self::E) -> Self::E;
    fn element(&self, k: u64) -> Self::E;
}

/// Lookup tables for small fields.
struct Tables {
    q: usize,
    mul: Vec<u16>,
    sub: Vec<u16>,
}

impl Tables {
    const MAX_ORDER: u64 = 256;

    fn build(field: &ResidueField) -> Option<Self> {
        let q = field.order().filter(|&q| q <= Self::MAX_ORDER)? as usize;
        let elems: Vec<ResidueElement> = (0..q as u64).map(|k| field.element(k)).collect();
        let mut mul = vec![0u16; q * q];
        let mut sub = vec![0u16; q * q];
        for a in 0..q {
            for b in 0..q {
                mul[a * q + b] = field.index_of(&field.mul(&elems[a], &elems[b])) as u16;
                sub[a * q + b] = field.index_of(&field.sub(&elems[a], &elems[b])) as u16;
            }
        }
        Some(Tables { q, mul, sub })
    }
}

impl SearchArith for Tables {
    type E = u16;
    fn is_zero(&self, a: &u16) -> bool {
        *a == 0
    }
    fn sub_mul(&self, acc: &u16, a: &u16, b: &u16) -> u16 {
        let prod = self.mul[*a as usize * self.q + *b as usize];
        self.sub[*acc as usize * self.q + prod as usize]
    }
    fn element(&self, k: u64) -> u16 {
        k as u16
    }
}

impl SearchArith for ResidueField {
    type E = ResidueElement;
    fn is_zero(&self, a: &ResidueElement) -> bool {
        a.is_zero()
    }
    fn sub_mul(&self, acc: &ResidueElement, a: &ResidueElement, b: &ResidueElement) -> ResidueElement {
        self.sub(acc, &self.mul(a, b))
    }
    fn element(&self, k: u64) -> ResidueElement {
        ResidueField::element(self, k)
    }
}

/// Decides whether `t` factors as a product of two non-constant polynomials
/// by enumerating every candidate divisor `g` with
/// `deg_{Z_i} g ≤ deg_{Z_i} t`, `1 ≤ deg g ≤ deg t / 2` and lexicographic
/// leading coefficient one, and testing exact division.
///
/// A divisor's lex-leading and lex-trailing monomials divide those of `t`,
/// which fixes the candidate supports; only the coefficients strictly between
/// them are free.
pub fn is_irreducible_multivariate(t: &ResiduePoly, field: &ResidueField, limit: u64) -> Result<bool, GuardExceeded> {
    let total = t.total_degree().expect("nonzero residue polynomial");
    assert!(total >= 1, "residue polynomial of positive degree");
    let half = total / 2;
    if half == 0 {
        return Ok(true);
    }
    let q = field.order_big();
    let degs = t.degrees();
    let lead_t = t.terms.keys().next_back().expect("nonzero").clone();
    let trail_t = t.terms.keys().next().expect("nonzero").clone();

    let mut boxed: Vec<Monomial> = Vec::new();
    enumerate_box(&degs, half, &mut vec![0; degs.len()], 0, &mut boxed);
    boxed.sort();

    let divides = |a: &Monomial, b: &Monomial| a.iter().zip(b).all(|(x, y)| x <= y);
    let mut shapes = Vec::new();
    let mut count = BigUint::zero();
    for (li, lead) in boxed.iter().enumerate() {
        if lead.iter().all(|&e| e == 0) || !divides(lead, &lead_t) {
            continue;
        }
        for (mi, trail) in boxed[..=li].iter().enumerate() {
            if !divides(trail, &trail_t) {
                continue;
            }
            let middle: Vec<Monomial> = if mi < li { boxed[mi + 1..li].to_vec() } else { Vec::new() };
            let n = if mi == li {
                BigUint::one()
            } else {
                (&q - BigUint::one()) * num_traits::pow::pow(q.clone(), middle.len())
            };
            count += n;
            shapes.push((lead.clone(), (mi != li).then(|| trail.clone()), middle));
        }
    }
    if count > BigUint::from(limit) {
        return Err(GuardExceeded { what: "residue divisor search", needed: count.to_string(), limit });
    }
    let q = q.to_u64().expect("bounded by the limit");
    let found = match Tables::build(field) {
        Some(tables) => {
            let dense = Dense::new(t, &degs, |c| field.index_of(c) as u16, 0);
            search_shapes(&tables, &dense, &shapes, q)
        }
        None => {
            let dense = Dense::new(t, &degs, |c| c.clone(), field.zero());
            search_shapes(field, &dense, &shapes, q)
        }
    };
    Ok(!found)
}

fn enumerate_box(degs: &[u32], budget: u32, cur: &mut Vec<u32>, var: usize, out: &mut Vec<Monomial>) {
    if var == degs.len() {
        out.push(cur.clone());
        return;
    }
    for e in 0..=degs[var].min(budget) {
        cur[var] = e;
        enumerate_box(degs, budget - e, cur, var + 1, out);
    }
    cur[var] = 0;
}

/// Dense coefficient array over the degree box of `t`, ordered so that
/// increasing index is increasing lexicographic order.
struct Dense<E> {
    dims: Vec<u32>,
    strides: Vec<usize>,
    coeffs: Vec<E>,
}

impl<E: Clone> Dense<E> {
    fn new(t: &ResiduePoly, degs: &[u32], conv: impl Fn(&ResidueElement) -> E, zero: E) -> Self {
        let n = degs.len();
        let mut strides = vec![1usize; n];
        for i in (0..n.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * (degs[i + 1] as usize + 1);
        }
        let size = if n == 0 { 1 } else { strides[0] * (degs[0] as usize + 1) };
        let mut coeffs = vec![zero; size];
        for (e, c) in t.terms() {
            coeffs[Self::offset(&strides, e)] = conv(c);
        }
        Dense { dims: degs.to_vec(), strides, coeffs }
    }

    fn offset(strides: &[usize], e: &[u32]) -> usize {
        e.iter().zip(strides).map(|(&k, s)| k as usize * s).sum()
    }

    fn decode(&self, mut idx: usize) -> Vec<u32> {
        self.strides
            .iter()
            .map(|&s| {
                let e = idx / s;
                idx %= s;
                e as u32
            })
            .collect()
    }
}

fn search_shapes<A: SearchArith>(
    arith: &A,
    target: &Dense<A::E>,
    shapes: &[(Monomial, Option<Monomial>, Vec<Monomial>)],
    q: u64,
) -> bool {
    let exps: Vec<Vec<u32>> = (0..target.coeffs.len()).map(|i| target.decode(i)).collect();
    for (lead, trail, middle) in shapes {
        let mut slots: Vec<Monomial> = Vec::new();
        if let Some(t) = trail {
            slots.push(t.clone());
        }
        slots.extend(middle.iter().cloned());
        // digit 0 of the trailing slot ranges over nonzero elements
        let mut digits = vec![0u64; slots.len()];
        if trail.is_some() {
            digits[0] = 1;
        }
        let one = arith.element(1);
        loop {
            let mut g: Vec<(Monomial, A::E)> = vec![(lead.clone(), one.clone())];
            for (slot, &d) in slots.iter().zip(&digits) {
                if d != 0 {
                    g.push((slot.clone(), arith.element(d)));
                }
            }
            if divides_dense(arith, target, &exps, lead, &g) {
                return true;
            }
            let mut i = 0;
            while i < digits.len() {
                digits[i] += 1;
                if digits[i] < q {
                    break;
                }
                digits[i] = if i == 0 && trail.is_some() { 1 } else { 0 };
                i += 1;
            }
            if i == digits.len() {
                break;
            }
        }
    }
    false
}

/// Exact division test of `target` by `g` (lex-leading term `lead` with
/// coefficient one). Any divisor's cofactor keeps all partial products
/// inside the degree box of `target`.
fn divides_dense<A: SearchArith>(
    arith: &A,
    target: &Dense<A::E>,
    exps: &[Vec<u32>],
    lead: &[u32],
    g: &[(Monomial, A::E)],
) -> bool {
    let mut rem = target.coeffs.clone();
    for idx in (0..rem.len()).rev() {
        if arith.is_zero(&rem[idx]) {
            continue;
        }
        let e = &exps[idx];
        if e.iter().zip(lead).any(|(a, b)| a < b) {
            return false;
        }
        let c = rem[idx].clone();
        for (ge, gc) in g {
            let mut off = 0;
            for i in 0..e.len() {
                let k = e[i] - lead[i] + ge[i];
                if k > target.dims[i] {
                    return false;
                }
                off += k as usize * target.strides[i];
            }
            rem[off] = arith.sub_mul(&rem[off], &c, gc);
        }
        if !arith.is_zero(&rem[idx]) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn prime(p: u64) -> Prime {
        Prime::new(p).unwrap()
    }

    fn necklace(p: u64, d: u64) -> u64 {
        fn mobius(mut n: u64) -> i64 {
            let mut r = 1;
            let mut k = 2;
            while k * k <= n {
                if n.is_multiple_of(k) {
                    n /= k;
                    if n.is_multiple_of(k) {
                        return 0;
                    }
                    r = -r;
                }
                k += 1;
            }
            if n > 1 {
                r = -r;
            }
            r
        }
        let s: i64 = (1..=d).filter(|k| d.is_multiple_of(*k)).map(|k| mobius(k) * (p as i64).pow((d / k) as u32)).sum();
        (s / d as i64) as u64
    }

    #[test]
    fn univariate_examples() {
        assert!(is_irreducible_univariate(&[1, 0, 1], prime(3), DEFAULT_CANDIDATE_LIMIT).unwrap());
        assert!(!is_irreducible_univariate(&[1, 0, 1], prime(2), DEFAULT_CANDIDATE_LIMIT).unwrap());
        assert!(is_irreducible_univariate(&[0, 1], prime(5), DEFAULT_CANDIDATE_LIMIT).unwrap());
        assert!(is_irreducible_univariate(&[1, 0, 0, 0, 0, 0, 1], prime(3), 2).is_err());
    }

    #[test]
    fn irreducible_counts_match_necklace_formula() {
        for p in [2u64, 3] {
            for d in 1..=4usize {
                let mut count = 0;
                let total = p.pow(d as u32);
                for k in 0..total {
                    let mut g: Vec<u64> = (0..d).map(|i| (k / p.pow(i as u32)) % p).collect();
                    g.push(1);
                    if is_irreducible_univariate(&g, prime(p), DEFAULT_CANDIDATE_LIMIT).unwrap() {
                        count += 1;
                    }
                }
                assert_eq!(count, necklace(p, d as u64), "p={p} d={d}");
            }
        }
    }

    #[test]
    fn residue_field_construction() {
        let f = ResidueField::new(prime(2), vec![vec![1, 1, 1], vec![1, 1, 0, 1]], DEFAULT_CANDIDATE_LIMIT).unwrap();
        assert_eq!(f.order(), Some(64));
        let f3 = ResidueField::new(prime(3), vec![], DEFAULT_CANDIDATE_LIMIT).unwrap();
        assert_eq!(f3.order(), Some(3));
        assert_eq!(
            ResidueField::new(prime(2), vec![vec![1, 1, 1], vec![1, 1, 1]], DEFAULT_CANDIDATE_LIMIT),
            Err(ConfigError::DegreesNotCoprime { a: 2, b: 2 })
        );
        assert_eq!(
            ResidueField::new(prime(2), vec![vec![1, 0, 1]], DEFAULT_CANDIDATE_LIMIT),
            Err(ConfigError::GeneratorReducible { index: 0 })
        );
    }

    #[test]
    fn generator_satisfies_its_polynomial() {
        let f = ResidueField::new(prime(2), vec![vec![1, 1, 1], vec![1, 1, 0, 1]], DEFAULT_CANDIDATE_LIMIT).unwrap();
        let y1 = f.generator(0);
        let y2 = f.generator(1);
        // y1^2 + y1 + 1 = 0, y2^3 + y2 + 1 = 0
        let r1 = f.add(&f.add(&f.mul(&y1, &y1), &y1), &f.one());
        assert!(r1.is_zero());
        let y2c = f.mul(&f.mul(&y2, &y2), &y2);
        assert!(f.add(&f.add(&y2c, &y2), &f.one()).is_zero());
        assert_eq!(f.format(&f.add(&y1, &f.one())), "y1 + 1");
        assert_eq!(f.parse("y1^2").unwrap(), f.add(&y1, &f.one()));
    }

    fn field_of(q: u64) -> ResidueField {
        match q {
            2 | 3 | 5 => ResidueField::prime_field(prime(q)),
            4 => ResidueField::new(prime(2), vec![vec![1, 1, 1]], DEFAULT_CANDIDATE_LIMIT).unwrap(),
            8 => ResidueField::new(prime(2), vec![vec![1, 1, 0, 1]], DEFAULT_CANDIDATE_LIMIT).unwrap(),
            9 => ResidueField::new(prime(3), vec![vec![1, 0, 1]], DEFAULT_CANDIDATE_LIMIT).unwrap(),
            64 => ResidueField::new(prime(2), vec![vec![1, 1, 1], vec![1, 1, 0, 1]], DEFAULT_CANDIDATE_LIMIT).unwrap(),
            _ => unreachable!(),
        }
    }

    fn rp(field: &ResidueField, terms: &[(&[u32], u64)]) -> ResiduePoly {
        let n = terms[0].0.len();
        ResiduePoly::from_terms(field, n, terms.iter().map(|(e, c)| (e.to_vec(), field.constant(*c))))
    }

    #[test]
    fn multivariate_examples() {
        let f3 = field_of(3);
        let t = rp(&f3, &[(&[2, 2], 1), (&[0, 0], 1)]);
        assert!(is_irreducible_multivariate(&t, &f3, DEFAULT_CANDIDATE_LIMIT).unwrap());
        let t = rp(&f3, &[(&[2, 2], 1), (&[0, 0], 2)]);
        assert!(!is_irreducible_multivariate(&t, &f3, DEFAULT_CANDIDATE_LIMIT).unwrap());
        let f2 = field_of(2);
        let t = rp(&f2, &[(&[1, 0], 1), (&[0, 1], 1)]);
        assert!(is_irreducible_multivariate(&t, &f2, DEFAULT_CANDIDATE_LIMIT).unwrap());
        // Z1 Z2 has the monomial factorization Z1 · Z2
        let t = rp(&f2, &[(&[1, 1], 1)]);
        assert!(!is_irreducible_multivariate(&t, &f2, DEFAULT_CANDIDATE_LIMIT).unwrap());
        // x^2 + 1 over F_9 has the roots ±y1
        let f9 = field_of(9);
        let t = rp(&f9, &[(&[2], 1), (&[0], 1)]);
        assert!(!is_irreducible_multivariate(&t, &f9, DEFAULT_CANDIDATE_LIMIT).unwrap());
        let t = rp(&f3, &[(&[2], 1), (&[0], 1)]);
        assert!(is_irreducible_multivariate(&t, &f3, DEFAULT_CANDIDATE_LIMIT).unwrap());
    }

    #[test]
    fn divisor_search_respects_the_guard() {
        let f9 = field_of(9);
        let t = rp(&f9, &[(&[3, 3], 1), (&[0, 0], 1)]);
        let err = is_irreducible_multivariate(&t, &f9, 10).unwrap_err();
        assert_eq!(err.limit, 10);
    }

    #[test]
    fn residue_json_round_trip() {
        let f4 = field_of(4);
        let y = f4.generator(0);
        let t = ResiduePoly::from_terms(&f4, 2, [(vec![1, 1], f4.one()), (vec![0, 0], f4.add(&y, &f4.one()))]);
        let json = t.to_json(&f4);
        assert_eq!(serde_json::to_string(&json).unwrap(), r#"{"p":2,"coeffs":[{"exp":[1,1],"c":"1"},{"exp":[0,0],"c":"y1 + 1"}]}"#);
        assert_eq!(ResiduePoly::from_json(&json, &f4).unwrap(), t);
        assert_eq!(t.to_text(&f4), "Z1*Z2 + (y1 + 1)");
    }

    fn arb_small_poly(q: u64) -> impl Strategy<Value = ResiduePoly> {
        let field = field_of(q);
        proptest::collection::vec((0u32..=2, 0u32..=2, 0..q), 1..5).prop_filter_map("positive degree", move |ts| {
            let p = ResiduePoly::from_terms(
                &field,
                2,
                ts.into_iter().filter(|(a, b, _)| a + b <= 2).map(|(a, b, k)| (vec![a, b], field.element(k))),
            );
            (p.total_degree().unwrap_or(0) >= 1).then_some(p)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn field_axioms(qi in 0usize..4, a in 0u64..64, b in 0u64..64, c in 0u64..64) {
            let field = field_of([4, 8, 9, 64][qi]);
            let q = field.order().unwrap();
            let (a, b, c) = (field.element(a % q), field.element(b % q), field.element(c % q));
            if !a.is_zero() {
                let inv = field.inv(&a).unwrap();
                prop_assert_eq!(field.mul(&a, &inv), field.one());
            }
            let lhs = field.mul(&a, &field.add(&b, &c));
            let rhs = field.add(&field.mul(&a, &b), &field.mul(&a, &c));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn element_index_round_trip(k in 0u64..64) {
            let field = field_of(64);
            prop_assert_eq!(field.index_of(&field.element(k)), k);
        }

        #[test]
        fn products_are_reducible(
            (q, g, h) in prop_oneof![Just(2u64), Just(3u64), Just(4u64), Just(5u64), Just(9u64)]
                .prop_flat_map(|q| (Just(q), arb_small_poly(q), arb_small_poly(q)))
        ) {
            let field = field_of(q);
            let gh = g.mul(&field, &h);
            prop_assert!(!is_irreducible_multivariate(&gh, &field, DEFAULT_CANDIDATE_LIMIT).unwrap());
        }
    }

}
