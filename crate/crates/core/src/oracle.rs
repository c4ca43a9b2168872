//! Exact factorization over ℚ by Kronecker's method, independent of every
//! valuation code path. Exponential, meant for small inputs only.
//!
//! A polynomial in `x_1..x_n` with partial degrees below `D` is sent to
//! `U(x) = f(x, x^D, .., x^{D^{n-1}})`; `U` is factored over ℤ by
//! interpolation through divisors of its values, and true factors of `f` are
//! recovered as images of subsets of the univariate factors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{GuardExceeded, OracleError};
use crate::multipoly::{default_names, MultiPoly};
use crate::{QPoly, Rational, ZPoly};

/// Bounds of the search; exceeding them is an error, never a wrong answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_vars: usize,
    pub max_degree: u32,
    /// Budget shared by divisor-tuple nodes and recombination subsets.
    pub candidates: u64,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits { max_vars: 2, max_degree: 8, candidates: 1_000_000 }
    }
}

impl OracleLimits {
    pub fn describe(&self) -> String {
        format!("n <= {}, deg <= {}, candidates <= {}", self.max_vars, self.max_degree, self.candidates)
    }
}

/// `f = scalar · ∏ factor^multiplicity`, factors primitive over ℤ with positive
/// graded-lex leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationResult {
    pub factors: Vec<(QPoly, u32)>,
    pub scalar: Rational,
}

impl FactorizationResult {
    /// Exactly one factor of multiplicity one.
    pub fn is_irreducible(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }

    pub fn reconstruct(&self, nvars: usize) -> QPoly {
        let mut acc = QPoly::constant(nvars, self.scalar.clone());
        for (g, k) in &self.factors {
            acc = &acc * &g.pow(*k);
        }
        acc
    }

    pub fn to_text(&self, names: &[String]) -> String {
        let mut parts = vec![crate::exactnum::format_rational(&self.scalar)];
        for (g, k) in &self.factors {
            let base = format!("({})", g.to_text(names));
            parts.push(if *k == 1 { base } else { format!("{base}^{k}") });
        }
        parts.join(" * ")
    }
}

struct Budget {
    used: u64,
    limit: u64,
}

impl Budget {
    fn spend(&mut self, what: &'static str) -> Result<(), GuardExceeded> {
        self.used += 1;
        if self.used > self.limit {
            return Err(GuardExceeded { what, needed: format!("more than {}", self.limit), limit: self.limit });
        }
        Ok(())
    }
}

/// Factors `f` over ℚ into irreducibles.
pub fn brute_factor(f: &QPoly, limits: &OracleLimits) -> Result<FactorizationResult, OracleError> {
    let n = f.nvars();
    if n > limits.max_vars {
        return Err(OracleError::TooManyVariables { found: n, limit: limits.max_vars });
    }
    let degree = f.degree().unwrap_or(0);
    if degree > limits.max_degree {
        return Err(OracleError::DegreeTooLarge { found: degree, limit: limits.max_degree });
    }
    if f.is_zero() {
        return Ok(FactorizationResult { factors: Vec::new(), scalar: Rational::zero() });
    }
    let (scalar, mut prim) = primitive_part(f);
    let mut found: Vec<ZPoly> = Vec::new();

    // monomial content first: it never survives substitution as anything but x^k
    let shift: Vec<u32> = (0..n).map(|i| prim.terms().map(|(e, _)| e[i]).min().unwrap_or(0)).collect();
    if shift.iter().any(|&s| s > 0) {
        prim = MultiPoly::from_terms(
            n,
            prim.terms().map(|(e, c)| (e.iter().zip(&shift).map(|(a, b)| a - b).collect(), c.clone())),
        );
        for (i, &s) in shift.iter().enumerate() {
            for _ in 0..s {
                found.push(ZPoly::var(n, i));
            }
        }
    }

    let mut budget = Budget { used: 0, limit: limits.candidates };
    if !prim.is_constant() {
        found.extend(factor_primitive(&prim, &mut budget)?);
    }

    let mut factors: Vec<(QPoly, u32)> = Vec::new();
    found.sort_by(|a, b| order(a, b, n));
    for g in found {
        let g = g.map_coeffs(|c| Rational::from_integer(c.clone()));
        match factors.last_mut() {
            Some((h, k)) if *h == g => *k += 1,
            _ => factors.push((g, 1)),
        }
    }
    Ok(FactorizationResult { factors, scalar })
}

fn order(a: &ZPoly, b: &ZPoly, n: usize) -> std::cmp::Ordering {
    let names = default_names(n);
    a.degree().cmp(&b.degree()).then_with(|| a.to_text(&names).cmp(&b.to_text(&names)))
}

/// Writes `f = c · g` with `g` primitive over ℤ and positive graded-lex lead.
fn primitive_part(f: &QPoly) -> (Rational, ZPoly) {
    let denom = f.terms().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let ints: Vec<_> = f.terms().map(|(e, c)| (e.clone(), (c * Rational::from_integer(denom.clone())).to_integer())).collect();
    let mut content = ints.iter().fold(BigInt::zero(), |acc, (_, c)| acc.gcd(c));
    let z = ZPoly::from_terms(f.nvars(), ints);
    let (_, lead) = z.leading_grlex().expect("nonzero");
    if lead.is_negative() {
        content = -content;
    }
    let g = MultiPoly::from_terms(f.nvars(), z.terms().map(|(e, c)| (e.clone(), c / &content)));
    (Rational::new(content, denom), g)
}

fn normalize(g: ZPoly) -> ZPoly {
    let content = g.terms().fold(BigInt::zero(), |acc, (_, c)| acc.gcd(c));
    let negative = g.leading_grlex().is_some_and(|(_, c)| c.is_negative());
    let content = if negative { -content } else { content };
    MultiPoly::from_terms(g.nvars(), g.terms().map(|(e, c)| (e.clone(), c / &content)))
}

fn exact_div_z(a: &ZPoly, b: &ZPoly) -> Option<ZPoly> {
    let qa = a.map_coeffs(|c| Rational::from_integer(c.clone()));
    let qb = b.map_coeffs(|c| Rational::from_integer(c.clone()));
    let quotient = qa.exact_div(&qb)?;
    if quotient.terms().all(|(_, c)| c.is_integer()) {
        Some(quotient.map_coeffs(|c| c.to_integer()))
    } else {
        None
    }
}

fn factor_primitive(f: &ZPoly, budget: &mut Budget) -> Result<Vec<ZPoly>, GuardExceeded> {
    let n = f.nvars();
    let d = 1 + f.degrees().into_iter().max().unwrap_or(0) as u64;
    let weights: Vec<u64> = (0..n).map(|i| d.pow(i as u32)).collect();
    let udeg = f.terms().map(|(e, _)| e.iter().zip(&weights).map(|(&k, w)| k as u64 * w).sum::<u64>()).max().unwrap_or(0);
    let mut u = vec![BigInt::zero(); udeg as usize + 1];
    for (e, c) in f.terms() {
        let k: u64 = e.iter().zip(&weights).map(|(&k, w)| k as u64 * w).sum();
        u[k as usize] += c;
    }
    let mut pieces = factor_univariate(u, budget)?;

    let decode = |p: &[BigInt]| -> ZPoly {
        MultiPoly::from_terms(
            n,
            p.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| {
                let mut k = k as u64;
                let exp = (0..n)
                    .map(|_| {
                        let digit = k % d;
                        k /= d;
                        digit as u32
                    })
                    .collect();
                (exp, c.clone())
            }),
        )
    };

    let mut rest = f.clone();
    let mut out = Vec::new();
    let mut size = 1;
    'outer: while 2 * size <= pieces.len() {
        let mut subset: Vec<usize> = (0..size).collect();
        loop {
            budget.spend("oracle recombination subsets")?;
            let product = subset.iter().fold(vec![BigInt::one()], |acc, &i| mul_uni(&acc, &pieces[i]));
            let candidate = normalize(decode(&product));
            if !candidate.is_constant() {
                if let Some(q) = exact_div_z(&rest, &candidate) {
                    out.push(candidate);
                    rest = q;
                    for &i in subset.iter().rev() {
                        pieces.remove(i);
                    }
                    continue 'outer;
                }
            }
            if !next_subset(&mut subset, pieces.len()) {
                break;
            }
        }
        size += 1;
    }
    if !rest.is_constant() {
        out.push(normalize(rest));
    }
    Ok(out)
}

fn next_subset(s: &mut [usize], n: usize) -> bool {
    let k = s.len();
    for i in (0..k).rev() {
        if s[i] < n - k + i {
            s[i] += 1;
            for j in i + 1..k {
                s[j] = s[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn trim(mut p: Vec<BigInt>) -> Vec<BigInt> {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn mul_uni(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn eval_uni(p: &[BigInt], x: &BigInt) -> BigInt {
    p.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

/// Exact quotient over ℤ, if `b` divides `a`.
fn div_uni(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let db = b.len() - 1;
    if a.len() < b.len() {
        return None;
    }
    let mut rem = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - db];
    for k in (0..q.len()).rev() {
        let (c, r) = rem[k + db].div_rem(&b[db]);
        if !r.is_zero() {
            return None;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[k + j] -= &c * bj;
        }
        q[k] = c;
    }
    rem.iter().all(|c| c.is_zero()).then(|| trim(q))
}

fn divisors(v: &BigInt) -> Result<Vec<BigInt>, GuardExceeded> {
    const MAX: u64 = 1 << 40;
    let m = v.abs().to_u64().filter(|&m| m <= MAX).ok_or_else(|| GuardExceeded {
        what: "oracle evaluation value",
        needed: v.abs().to_string(),
        limit: MAX,
    })?;
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= m {
        if m % d == 0 {
            small.push(d);
            if d * d != m {
                large.push(m / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Ok(small.into_iter().map(BigInt::from).collect())
}

/// Irreducible primitive factors of a primitive `u` over ℤ (positive leads).
fn factor_univariate(u: Vec<BigInt>, budget: &mut Budget) -> Result<Vec<Vec<BigInt>>, GuardExceeded> {
    let mut u = trim(u);
    let mut out = Vec::new();
    loop {
        let deg = u.len() - 1;
        if deg == 0 {
            return Ok(out);
        }
        match find_factor(&u, budget)? {
            Some(g) => {
                u = div_uni(&u, &g).expect("found factors divide");
                out.push(g);
            }
            None => {
                let sign = if u[deg].is_negative() { -BigInt::one() } else { BigInt::one() };
                out.push(u.into_iter().map(|c| c * &sign).collect());
                return Ok(out);
            }
        }
    }
}

fn points() -> impl Iterator<Item = BigInt> {
    (0i64..).flat_map(|k| if k == 0 { vec![0] } else { vec![k, -k] }).map(BigInt::from)
}

/// Extra evaluation points beyond the `deg/2 + 1` needed, so that the
/// interpolation nodes can be those with the fewest divisors.
const EXTRA_POINTS: usize = 4;

/// A factor of least degree `1 ≤ k ≤ deg/2`, or `None` if `u` is irreducible.
fn find_factor(u: &[BigInt], budget: &mut Budget) -> Result<Option<Vec<BigInt>>, GuardExceeded> {
    let deg = u.len() - 1;
    let lead = &u[deg];
    let half = deg / 2;
    let mut pool: Vec<(BigInt, BigInt)> = Vec::new();
    for a in points() {
        if pool.len() > half + EXTRA_POINTS {
            break;
        }
        let v = eval_uni(u, &a);
        if v.is_zero() {
            return Ok(Some(vec![-a, BigInt::one()]));
        }
        pool.push((a, v));
    }
    if half == 0 {
        return Ok(None);
    }
    // any k + 1 distinct nodes determine a degree-k candidate; prefer small divisor sets
    let mut usable: Vec<(BigInt, Vec<BigInt>)> = Vec::new();
    let mut oversized = None;
    for (a, v) in pool {
        match divisors(&v) {
            Ok(d) => usable.push((a, d)),
            Err(e) => oversized = Some(e),
        }
    }
    if usable.len() <= half {
        return Err(oversized.expect("only oversized values are dropped"));
    }
    usable.sort_by_key(|(_, d)| d.len());
    let (nodes, choices): (Vec<BigInt>, Vec<Vec<BigInt>>) = usable.into_iter().unzip();
    for k in 1..=half {
        let mut newton = Vec::with_capacity(k + 1);
        if let Some(g) = search(u, lead, &nodes[..=k], &choices[..=k], &mut newton, budget)? {
            return Ok(Some(g));
        }
    }
    Ok(None)
}

/// Depth-first choice of `g(a_j)` among divisors of `u(a_j)`, keeping the
/// Newton coefficients of the interpolant integral.
fn search(
    u: &[BigInt],
    lead: &BigInt,
    nodes: &[BigInt],
    choices: &[Vec<BigInt>],
    newton: &mut Vec<BigInt>,
    budget: &mut Budget,
) -> Result<Option<Vec<BigInt>>, GuardExceeded> {
    let j = newton.len();
    let k = nodes.len() - 1;
    if j == nodes.len() {
        let top = &newton[k];
        if top.is_zero() || !(lead % top).is_zero() {
            return Ok(None);
        }
        let g = from_newton(nodes, newton);
        if let Some(_q) = div_uni(u, &g) {
            let sign = if g[k].is_negative() { -BigInt::one() } else { BigInt::one() };
            return Ok(Some(g.into_iter().map(|c| c * &sign).collect()));
        }
        return Ok(None);
    }
    let a = &nodes[j];
    // Newton interpolant through the first j points, evaluated at a_j
    let mut prefix = BigInt::zero();
    let mut basis = BigInt::one();
    for (i, c) in newton.iter().enumerate() {
        prefix += c * &basis;
        basis *= a - &nodes[i];
    }
    for d in &choices[j] {
        for value in [d.clone(), -d] {
            if j == 0 && value.is_negative() {
                continue;
            }
            budget.spend("oracle divisor tuples")?;
            let (c, r) = (&value - &prefix).div_rem(&basis);
            if !r.is_zero() {
                continue;
            }
            newton.push(c);
            let found = search(u, lead, nodes, choices, newton, budget)?;
            newton.pop();
            if found.is_some() {
                return Ok(found);
            }
        }
    }
    Ok(None)
}

fn from_newton(nodes: &[BigInt], coeffs: &[BigInt]) -> Vec<BigInt> {
    // Horner in the Newton basis: c_0 + (x - a_0)(c_1 + (x - a_1)(...))
    let mut acc = vec![coeffs[coeffs.len() - 1].clone()];
    for i in (0..coeffs.len() - 1).rev() {
        acc = mul_uni(&acc, &[-&nodes[i], BigInt::one()]);
        acc[0] += &coeffs[i];
    }
    trim(acc)
}
