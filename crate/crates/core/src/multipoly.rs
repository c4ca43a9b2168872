//! Sparse multivariate polynomials and the φ-adic expansion.
//!
//! A polynomial is a map from exponent vectors of a fixed length to nonzero
//! coefficients. Every constructor and operation keeps the map free of zero
//! entries, so structural equality is polynomial equality.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::Signed;

use crate::error::PolyError;
use crate::exactnum::{format_rational, vp, Prime, Val};
use crate::scalar::{FieldScalar, Scalar};
use crate::unipoly::UniPoly;
use crate::Rational;

pub type Monomial = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly<S> {
    nvars: usize,
    terms: BTreeMap<Monomial, S>,
}

/// Graded-lexicographic comparison: total degree first, then lexicographic
/// with the first variable most significant.
pub fn grlex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

impl<S: Scalar> MultiPoly<S> {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: S) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, S::one())
    }

    /// The variable `x_var`.
    pub fn var(nvars: usize, var: usize) -> Self {
        let mut exp = vec![0; nvars];
        exp[var] = 1;
        Self::monomial(exp, S::one())
    }

    pub fn monomial(exp: Monomial, c: S) -> Self {
        let mut p = Self::zero(exp.len());
        p.add_term(exp, c);
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, S)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    /// Adds `c · x^exp` in place.
    pub fn add_term(&mut self, exp: Monomial, c: S) {
        assert_eq!(exp.len(), self.nvars, "exponent vector length");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
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

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: &[u32]) -> S {
        self.terms.get(exp).cloned().unwrap_or_else(S::zero)
    }

    pub fn constant_term(&self) -> S {
        self.coeff(&vec![0; self.nvars])
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| k == 0))
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Degree in `x_var`; zero for the zero polynomial.
    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    pub fn degrees(&self) -> Vec<u32> {
        (0..self.nvars).map(|i| self.degree_in(i)).collect()
    }

    /// Leading term under graded-lex order.
    pub fn leading_grlex(&self) -> Option<(&Monomial, &S)> {
        self.terms.iter().max_by(|a, b| grlex_cmp(a.0, b.0))
    }

    pub fn scale(&self, k: &S) -> Self {
        Self::from_terms(
            self.nvars,
            self.terms.iter().map(|(e, c)| (e.clone(), c.clone() * k.clone())),
        )
    }

    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> T) -> MultiPoly<T> {
        MultiPoly::from_terms(self.nvars, self.terms.iter().map(|(e, c)| (e.clone(), f(c))))
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self, PolyError> {
        self.same_ring(rhs)?;
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self, PolyError> {
        self.same_ring(rhs)?;
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, PolyError> {
        self.same_ring(rhs)?;
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca.clone() * cb.clone());
            }
        }
        Ok(out)
    }

    fn same_ring(&self, rhs: &Self) -> Result<(), PolyError> {
        if self.nvars == rhs.nvars {
            Ok(())
        } else {
            Err(PolyError::VariableCount(self.nvars, rhs.nvars))
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.nvars);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Coefficients of `self` viewed as a polynomial in `x_var`; entry `k`
    /// multiplies `x_var^k` and does not involve `x_var`.
    pub fn split_var(&self, var: usize) -> Vec<Self> {
        let mut out = vec![Self::zero(self.nvars); self.degree_in(var) as usize + 1];
        if self.is_zero() {
            return Vec::new();
        }
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = std::mem::replace(&mut e2[var], 0) as usize;
            out[k].terms.insert(e2, c.clone());
        }
        out
    }

    /// Inverse of [`split_var`](Self::split_var).
    pub fn join_var(nvars: usize, var: usize, parts: &[Self]) -> Self {
        let mut out = Self::zero(nvars);
        for (k, part) in parts.iter().enumerate() {
            for (e, c) in &part.terms {
                let mut e2 = e.clone();
                e2[var] += k as u32;
                out.add_term(e2, c.clone());
            }
        }
        out
    }

    /// Replaces `x_var` by `value`.
    pub fn substitute(&self, var: usize, value: &Self) -> Result<Self, PolyError> {
        self.same_ring(value)?;
        if var >= self.nvars {
            return Err(PolyError::VariableIndex(var));
        }
        let parts = self.split_var(var);
        let mut acc = Self::zero(self.nvars);
        for part in parts.iter().rev() {
            acc = &(&acc * value) + part;
        }
        Ok(acc)
    }

    /// `f(.., x_var + shift, ..)`.
    pub fn shift_var(&self, var: usize, shift: &S) -> Self {
        if shift.is_zero() {
            return self.clone();
        }
        let mut value = Self::var(self.nvars, var);
        value.add_term(vec![0; self.nvars], shift.clone());
        self.substitute(var, &value).expect("same ring")
    }

    /// Divides by a monic univariate polynomial in `x_var`.
    pub fn divrem_var(&self, var: usize, phi: &UniPoly<S>) -> (Self, Self) {
        assert!(phi.is_monic(), "divisor must be monic");
        let m = phi.degree().expect("monic divisor is nonzero");
        let mut c = self.split_var(var);
        if c.len() <= m {
            return (Self::zero(self.nvars), self.clone());
        }
        let mut q = vec![Self::zero(self.nvars); c.len() - m];
        for d in (m..c.len()).rev() {
            let lead = std::mem::replace(&mut c[d], Self::zero(self.nvars));
            if lead.is_zero() {
                continue;
            }
            for k in 0..m {
                let pk = phi.coeff(k);
                if pk.is_zero() {
                    continue;
                }
                c[d - m + k] = &c[d - m + k] - &lead.scale(&pk);
            }
            q[d - m] = lead;
        }
        c.truncate(m);
        (Self::join_var(self.nvars, var, &q), Self::join_var(self.nvars, var, &c))
    }

    /// Base-φ digits of `self` in `x_var`: `self = Σ_k digit_k · φ^k` with
    /// `deg_{x_var} digit_k < deg φ`.
    pub fn phi_digits(&self, var: usize, phi: &UniPoly<S>) -> Vec<Self> {
        let mut digits = Vec::new();
        let mut cur = self.clone();
        while !cur.is_zero() {
            let (q, r) = cur.divrem_var(var, phi);
            digits.push(r);
            cur = q;
        }
        digits
    }
}

impl<S: FieldScalar> MultiPoly<S> {
    /// Exact quotient `self / divisor`, or `None` if the division leaves a
    /// remainder. Uses lexicographic leading terms.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let (lead_e, lead_c) = divisor.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut quo = Self::zero(self.nvars);
        while let Some((e, c)) = rem.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
            if e.iter().zip(&lead_e).any(|(a, b)| a < b) {
                return None;
            }
            let qe: Monomial = e.iter().zip(&lead_e).map(|(a, b)| a - b).collect();
            let qc = c / lead_c.clone();
            let term = Self::monomial(qe, qc);
            rem = &rem - &(&term * divisor);
            quo = &quo + &term;
        }
        Some(quo)
    }
}

impl MultiPoly<Rational> {
    /// Gauss content valuation: minimum `v_p` over the coefficients.
    pub fn content_valuation(&self, p: Prime) -> Val {
        self.terms
            .values()
            .map(|c| vp(c, p))
            .min()
            .unwrap_or(Val::Infinity)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<S: Scalar> $tr for &MultiPoly<S> {
            type Output = MultiPoly<S>;
            fn $method(self, rhs: &MultiPoly<S>) -> MultiPoly<S> {
                self.$checked(rhs).expect("polynomials over different variable sets")
            }
        }
        impl<S: Scalar> $tr for MultiPoly<S> {
            type Output = MultiPoly<S>;
            fn $method(self, rhs: MultiPoly<S>) -> MultiPoly<S> {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl<S: Scalar> Neg for &MultiPoly<S> {
    type Output = MultiPoly<S>;
    fn neg(self) -> MultiPoly<S> {
        self.map_coeffs(|c| -c.clone())
    }
}

/// Coefficient types with a canonical text form.
pub trait TextCoeff: Scalar {
    /// Sign and magnitude text, e.g. `(true, "3/2")` for `-3/2`.
    fn sign_magnitude(&self) -> (bool, String);
}

impl TextCoeff for Rational {
    fn sign_magnitude(&self) -> (bool, String) {
        (self.is_negative(), format_rational(&self.abs()))
    }
}

impl TextCoeff for BigInt {
    fn sign_magnitude(&self) -> (bool, String) {
        (self.is_negative(), self.abs().to_string())
    }
}

impl<S: TextCoeff> MultiPoly<S> {
    /// Canonical text: graded-lex descending, explicit `*`, `^` for powers.
    pub fn to_text(&self, names: &[String]) -> String {
        assert_eq!(names.len(), self.nvars, "one name per variable");
        if self.is_zero() {
            return "0".to_string();
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| grlex_cmp(b.0, a.0));
        let mut out = String::new();
        for (i, (e, c)) in terms.into_iter().enumerate() {
            let (neg, mag) = c.sign_magnitude();
            match (i, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let mut factors = Vec::new();
            let is_const = e.iter().all(|&k| k == 0);
            if mag != "1" || is_const {
                factors.push(mag);
            }
            for (name, &k) in names.iter().zip(e.iter()) {
                match k {
                    0 => {}
                    1 => factors.push(name.clone()),
                    _ => factors.push(format!("{name}^{k}")),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

/// Default variable names: `x, y, z` for up to three variables, `x1..xn` otherwise.
pub fn default_names(nvars: usize) -> Vec<String> {
    if nvars <= 3 {
        ["x", "y", "z"][..nvars].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=nvars).map(|i| format!("x{i}")).collect()
    }
}

/// Canonical representation `f = Σ_I a_I · φ_1^{i_1} ⋯ φ_n^{i_n}` with
/// `deg_{x_j} a_I < deg φ_j` for every stored coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiExpansion<S> {
    pub phis: Vec<UniPoly<S>>,
    pub terms: BTreeMap<Monomial, MultiPoly<S>>,
}

impl<S: Scalar> PhiExpansion<S> {
    pub fn nvars(&self) -> usize {
        self.phis.len()
    }

    /// `Σ_I a_I ∏_j φ_j^{i_j}`, exactly.
    pub fn reconstruct(&self) -> MultiPoly<S> {
        let n = self.nvars();
        let mut out = MultiPoly::zero(n);
        for (idx, a) in &self.terms {
            let mut term = a.clone();
            for (j, &k) in idx.iter().enumerate() {
                if k > 0 {
                    term = &term * &self.phis[j].to_multi(n, j).pow(k);
                }
            }
            out = &out + &term;
        }
        out
    }
}

/// Expands `f` in powers of the monic univariate `phis[j]` (in `x_j`), one
/// variable at a time.
pub fn phi_expand<S: Scalar>(f: &MultiPoly<S>, phis: &[UniPoly<S>]) -> Result<PhiExpansion<S>, PolyError> {
    if phis.len() != f.nvars() {
        return Err(PolyError::VariableCount(phis.len(), f.nvars()));
    }
    for (j, phi) in phis.iter().enumerate() {
        if !phi.is_monic() || phi.degree().unwrap_or(0) == 0 {
            return Err(PolyError::VariableIndex(j));
        }
    }
    let mut terms = BTreeMap::new();
    let mut idx = vec![0u32; f.nvars()];
    expand_from(f, phis, 0, &mut idx, &mut terms);
    Ok(PhiExpansion { phis: phis.to_vec(), terms })
}

fn expand_from<S: Scalar>(
    f: &MultiPoly<S>,
    phis: &[UniPoly<S>],
    var: usize,
    idx: &mut Monomial,
    out: &mut BTreeMap<Monomial, MultiPoly<S>>,
) {
    if f.is_zero() {
        return;
    }
    if var == phis.len() {
        out.insert(idx.clone(), f.clone());
        return;
    }
    for (k, digit) in f.phi_digits(var, &phis[var]).iter().enumerate() {
        idx[var] = k as u32;
        expand_from(digit, phis, var + 1, idx, out);
    }
    idx[var] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::QPoly;
    use num_traits::FromPrimitive;
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n).unwrap()
    }

    fn qpoly(nvars: usize, terms: &[(&[u32], i64)]) -> QPoly {
        MultiPoly::from_terms(nvars, terms.iter().map(|(e, c)| (e.to_vec(), q(*c))))
    }

    fn example21() -> QPoly {
        qpoly(2, &[(&[2, 2], 1), (&[1, 1], 3), (&[1, 0], 6), (&[0, 1], 3), (&[0, 0], 1)])
    }

    fn upoly(c: &[i64]) -> UniPoly<Rational> {
        UniPoly::new(c.iter().map(|&k| q(k)).collect())
    }

    #[test]
    fn arithmetic_examples() {
        let x = QPoly::var(2, 0);
        let y = QPoly::var(2, 1);
        assert_eq!(&(&x + &y) * &(&x - &y), &x.pow(2) - &y.pow(2));
        let f = example21();
        let sub = f.substitute(1, &QPoly::zero(2)).unwrap();
        assert_eq!(sub, qpoly(2, &[(&[1, 0], 6), (&[0, 0], 1)]));
        assert_eq!((&x + &QPoly::one(2)).pow(0), QPoly::one(2));
        assert!(x.checked_add(&QPoly::var(3, 0)).is_err());
    }

    #[test]
    fn canonical_text() {
        let names = default_names(2);
        assert_eq!(example21().to_text(&names), "x^2*y^2 + 3*x*y + 6*x + 3*y + 1");
        let g = qpoly(2, &[(&[1, 0], -1), (&[0, 0], -2)]);
        assert_eq!(g.to_text(&names), "-x - 2");
        let h = QPoly::monomial(vec![0, 1], Rational::new(1.into(), 2.into()));
        assert_eq!(h.to_text(&names), "1/2*y");
        assert_eq!(QPoly::zero(2).to_text(&names), "0");
    }

    #[test]
    fn expand_by_variables() {
        let f = qpoly(1, &[(&[2], 1), (&[0], 2)]);
        let e = phi_expand(&f, &[upoly(&[0, 1])]).unwrap();
        assert_eq!(e.terms.len(), 2);
        assert_eq!(e.terms[&vec![2]], QPoly::one(1));
        assert_eq!(e.terms[&vec![0]], QPoly::constant(1, q(2)));

        let f = example21();
        let e = phi_expand(&f, &[upoly(&[0, 1]), upoly(&[0, 1])]).unwrap();
        for (idx, a) in &e.terms {
            assert_eq!(a, &QPoly::constant(2, f.coeff(idx)));
        }
        assert_eq!(e.terms.len(), f.len());
        assert_eq!(e.reconstruct(), f);
    }

    #[test]
    fn expand_by_quadratic() {
        // x^3 + x + 1 = x (x^2 + 1) + 1
        let f = qpoly(1, &[(&[3], 1), (&[1], 1), (&[0], 1)]);
        let e = phi_expand(&f, &[upoly(&[1, 0, 1])]).unwrap();
        assert_eq!(e.terms.len(), 2);
        assert_eq!(e.terms[&vec![1]], QPoly::var(1, 0));
        assert_eq!(e.terms[&vec![0]], QPoly::one(1));
        assert_eq!(e.reconstruct(), f);
    }

    #[test]
    fn empty_expansion_is_zero() {
        let e: PhiExpansion<Rational> = PhiExpansion { phis: vec![upoly(&[0, 1])], terms: BTreeMap::new() };
        assert!(e.reconstruct().is_zero());
    }

    #[test]
    fn content_valuation_examples() {
        let p3 = Prime::new(3).unwrap();
        assert_eq!(qpoly(1, &[(&[1], 3), (&[0], 9)]).content_valuation(p3), Val::from_int(1));
        assert_eq!(QPoly::zero(2).content_valuation(p3), Val::Infinity);
        assert_eq!(example21().content_valuation(p3), Val::from_int(0));
    }

    #[test]
    fn exact_division() {
        let x = QPoly::var(2, 0);
        let y = QPoly::var(2, 1);
        let a = &(&x * &y) + &QPoly::one(2);
        let b = &x - &y;
        assert_eq!((&a * &b).exact_div(&b), Some(a.clone()));
        assert_eq!((&(&a * &b) + &QPoly::one(2)).exact_div(&b), None);
    }

    pub(crate) fn arb_poly(nvars: usize, max_deg: u32) -> impl Strategy<Value = QPoly> {
        proptest::collection::vec(
            (proptest::collection::vec(0..=max_deg, nvars), -20i64..=20),
            0..8,
        )
        .prop_map(move |ts| MultiPoly::from_terms(nvars, ts.into_iter().map(|(e, c)| (e, q(c)))))
    }

    fn arb_monic(max_deg: usize) -> impl Strategy<Value = UniPoly<Rational>> {
        proptest::collection::vec(-4i64..=4, 1..=max_deg).prop_map(|mut c| {
            c.push(1);
            upoly(&c)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]
        #[test]
        fn expansion_round_trips(
            (f, phis) in (1usize..=3).prop_flat_map(|n| (arb_poly(n, 6), proptest::collection::vec(arb_monic(3), n)))
        ) {
            let e = phi_expand(&f, &phis).unwrap();
            for (j, phi) in phis.iter().enumerate() {
                let m = phi.degree().unwrap() as u32;
                for a in e.terms.values() {
                    prop_assert!(a.degree_in(j) < m);
                }
            }
            prop_assert_eq!(e.reconstruct(), f);
        }

        #[test]
        fn content_is_multiplicative(f in arb_poly(2, 3), g in arb_poly(2, 3), pi in 0usize..3) {
            let p = Prime::new([2, 3, 5][pi]).unwrap();
            prop_assert_eq!((&f * &g).content_valuation(p), f.content_valuation(p) + g.content_valuation(p));
        }
    }
}
