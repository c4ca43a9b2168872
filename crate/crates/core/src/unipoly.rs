//! Dense univariate polynomials, coefficients stored low to high.

use std::ops::{Add, Mul, Neg, Sub};


use crate::multipoly::MultiPoly;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UniPoly<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> UniPoly<S> {
    pub fn new(mut coeffs: Vec<S>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: S) -> Self {
        Self::new(vec![c])
    }

    /// `x - a`.
    pub fn linear_root(a: S) -> Self {
        Self::new(vec![-a, S::one()])
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> S {
        self.coeffs.get(k).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&S> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn eval(&self, x: &S) -> S {
        self.coeffs
            .iter()
            .rev()
            .fold(S::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn scale(&self, k: &S) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * k.clone()).collect())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::constant(S::one());
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

    /// Quotient and remainder by a monic divisor.
    pub fn divrem_monic(&self, divisor: &Self) -> (Self, Self) {
        assert!(divisor.is_monic(), "divisor must be monic");
        let m = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= m {
            return (Self::zero(), self.clone());
        }
        let mut quo = vec![S::zero(); rem.len() - m];
        for d in (m..rem.len()).rev() {
            let lead = std::mem::replace(&mut rem[d], S::zero());
            if lead.is_zero() {
                continue;
            }
            for k in 0..m {
                let t = lead.clone() * divisor.coeffs[k].clone();
                rem[d - m + k] = rem[d - m + k].clone() - t;
            }
            quo[d - m] = lead;
        }
        rem.truncate(m);
        (Self::new(quo), Self::new(rem))
    }

    /// Embeds as a polynomial in variable `var` of an `nvars`-variate ring.
    pub fn to_multi(&self, nvars: usize, var: usize) -> MultiPoly<S> {
        let mut out = MultiPoly::zero(nvars);
        for (k, c) in self.coeffs.iter().enumerate() {
            let mut exp = vec![0u32; nvars];
            exp[var] = k as u32;
            out.add_term(exp, c.clone());
        }
        out
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> UniPoly<T> {
        UniPoly::new(self.coeffs.iter().map(f).collect())
    }
}

impl<S: Scalar> Add for &UniPoly<S> {
    type Output = UniPoly<S>;
    fn add(self, rhs: &UniPoly<S>) -> UniPoly<S> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<S: Scalar> Sub for &UniPoly<S> {
    type Output = UniPoly<S>;
    fn sub(self, rhs: &UniPoly<S>) -> UniPoly<S> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<S: Scalar> Neg for &UniPoly<S> {
    type Output = UniPoly<S>;
    fn neg(self) -> UniPoly<S> {
        UniPoly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<S: Scalar> Mul for &UniPoly<S> {
    type Output = UniPoly<S>;
    fn mul(self, rhs: &UniPoly<S>) -> UniPoly<S> {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![S::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        UniPoly::new(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divrem_by_monic() {
        // x^3 + x + 1 = x (x^2 + 1) + 1
        let f = UniPoly::new(vec![1i64, 1, 0, 1]);
        let g = UniPoly::new(vec![1i64, 0, 1]);
        let (q, r) = f.divrem_monic(&g);
        assert_eq!(q, UniPoly::new(vec![0, 1]));
        assert_eq!(r, UniPoly::new(vec![1]));
    }

    #[test]
    fn pow_and_eval() {
        let f = UniPoly::new(vec![1i64, 1]);
        assert_eq!(f.pow(0), UniPoly::constant(1));
        assert_eq!(f.pow(3), UniPoly::new(vec![1, 3, 3, 1]));
        assert_eq!(f.pow(3).eval(&2), 27);
    }
}
