//! Sparse multivariate polynomials over the rationals.
//!
//! Two variable families share one representation: the dual ring
//! `S = Q[X1..Xn]`, where Macaulay dual generators live, and the operator
//! ring `R = Q[x1..xn]` acting on `S` by partial differentiation
//! (`xi = d/dXi`). The marker type parameter keeps the two apart.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponents of a monomial, one entry per variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExponentVector {
    entries: Vec<u32>,
    degree: u32,
}

impl ExponentVector {
    pub fn new(entries: Vec<u32>) -> Self {
        let degree = entries.iter().sum();
        ExponentVector { entries, degree }
    }

    pub fn zero(n: usize) -> Self {
        ExponentVector { entries: vec![0; n], degree: 0 }
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut entries = vec![0; n];
        entries[i] = 1;
        ExponentVector { entries, degree: 1 }
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Componentwise `self <= other`.
    pub fn divides(&self, other: &ExponentVector) -> bool {
        self.entries.len() == other.entries.len()
            && self.entries.iter().zip(&other.entries).all(|(a, b)| a <= b)
    }

    pub fn checked_sub(&self, other: &ExponentVector) -> Option<ExponentVector> {
        if !other.divides(self) {
            return None;
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        Some(ExponentVector { entries, degree: self.degree - other.degree })
    }

    pub fn add(&self, other: &ExponentVector) -> ExponentVector {
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        ExponentVector { entries, degree: self.degree + other.degree }
    }

    /// Componentwise minimum (exponents of the gcd).
    pub fn min(&self, other: &ExponentVector) -> ExponentVector {
        ExponentVector::new(self.entries.iter().zip(&other.entries).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn permuted(&self, perm: &[usize]) -> ExponentVector {
        // position i of the result holds entry perm[i] of self
        ExponentVector::new(perm.iter().map(|&j| self.entries[j]).collect())
    }
}

impl From<Vec<u32>> for ExponentVector {
    fn from(v: Vec<u32>) -> Self {
        ExponentVector::new(v)
    }
}

/// A monomial `X^e` (or `x^e` on the operator side).
///
/// Ordering: higher total degree first compares greater; within a degree the
/// comparison is lexicographic with variable 1 most significant. Listing a
/// degree in descending order therefore gives `x1^t, x1^(t-1) x2, ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<u32>", into = "Vec<u32>")]
pub struct Monomial {
    exponents: ExponentVector,
}

impl From<Vec<u32>> for Monomial {
    fn from(v: Vec<u32>) -> Self {
        Monomial { exponents: ExponentVector::new(v) }
    }
}

impl From<Monomial> for Vec<u32> {
    fn from(m: Monomial) -> Self {
        m.exponents.entries
    }
}

impl Monomial {
    pub fn new(entries: Vec<u32>) -> Self {
        Monomial { exponents: ExponentVector::new(entries) }
    }

    pub fn one(n: usize) -> Self {
        Monomial { exponents: ExponentVector::zero(n) }
    }

    pub fn var(n: usize, i: usize) -> Self {
        Monomial { exponents: ExponentVector::unit(n, i) }
    }

    pub fn exponents(&self) -> &ExponentVector {
        &self.exponents
    }

    pub fn entries(&self) -> &[u32] {
        self.exponents.entries()
    }

    pub fn degree(&self) -> u32 {
        self.exponents.degree()
    }

    pub fn nvars(&self) -> usize {
        self.exponents.len()
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exponents.divides(&other.exponents)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial { exponents: self.exponents.add(&other.exponents) }
    }

    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        self.exponents.checked_sub(&other.exponents).map(|exponents| Monomial { exponents })
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial { exponents: self.exponents.min(&other.exponents) }
    }

    pub fn support(&self) -> Vec<usize> {
        self.entries().iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i).collect()
    }

    /// `prod_i beta_i! / (beta_i - alpha_i)!` for `self = alpha | beta`.
    pub fn falling_factorial(&self, target: &Monomial) -> BigInt {
        let mut acc = BigInt::one();
        for (&a, &b) in self.entries().iter().zip(target.entries()) {
            for k in (b - a + 1)..=b {
                acc *= k;
            }
        }
        acc
    }

    pub fn permuted(&self, perm: &[usize]) -> Monomial {
        Monomial { exponents: self.exponents.permuted(perm) }
    }

    /// Writes the monomial with the given variable letter, `1` when constant.
    pub fn fmt_with(&self, f: &mut fmt::Formatter<'_>, letter: char) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.entries().iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "{}{}", letter, i + 1)?;
            if e > 1 {
                write!(f, "^{}", e)?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.entries().cmp(other.entries()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials of degree `t` in `n` variables, `x1^t` first.
pub fn monomials_of_degree(n: usize, t: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut current = vec![0u32; n];
    fill_monomials(0, t, &mut current, &mut out);
    out
}

fn fill_monomials(i: usize, remaining: u32, current: &mut Vec<u32>, out: &mut Vec<Monomial>) {
    let n = current.len();
    if n == 0 {
        if remaining == 0 {
            out.push(Monomial::new(Vec::new()));
        }
        return;
    }
    if i == n - 1 {
        current[i] = remaining;
        out.push(Monomial::new(current.clone()));
        return;
    }
    for e in (0..=remaining).rev() {
        current[i] = e;
        fill_monomials(i + 1, remaining - e, current, out);
    }
    current[i] = 0;
}

/// Number of monomials of degree `t` in `n` variables.
pub fn count_monomials(n: usize, t: u32) -> usize {
    if n == 0 {
        return usize::from(t == 0);
    }
    let mut acc: u128 = 1;
    let top = t as u128 + n as u128 - 1;
    for k in 0..(n as u128 - 1) {
        acc = acc * (top - k) / (k + 1);
    }
    acc as usize
}

pub trait VarKind: Clone + fmt::Debug + PartialEq + Eq + Send + Sync + 'static {
    const LETTER: char;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dual;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Operator;

impl VarKind for Dual {
    const LETTER: char = 'X';
}

impl VarKind for Operator {
    const LETTER: char = 'x';
}

/// Sparse polynomial: monomial -> nonzero rational coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial<V: VarKind> {
    nvars: usize,
    terms: BTreeMap<Monomial, BigRational>,
    _kind: PhantomData<V>,
}

pub type DualPolynomial = Polynomial<Dual>;
pub type OperatorPolynomial = Polynomial<Operator>;

impl<V: VarKind> Polynomial<V> {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new(), _kind: PhantomData }
    }

    pub fn one(nvars: usize) -> Self {
        Self::from_monomial(Monomial::one(nvars), BigRational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::from_monomial(Monomial::var(nvars, i), BigRational::one())
    }

    pub fn from_monomial(m: Monomial, c: BigRational) -> Self {
        let mut p = Self::zero(m.nvars());
        p.add_term(m, c);
        p
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        Self::from_monomial(Monomial::one(nvars), c)
    }

    /// Builds from `(exponents, integer coefficient)` pairs, merging repeats.
    pub fn from_int_terms(nvars: usize, terms: &[(Vec<u32>, i64)]) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length mismatch");
            p.add_term(Monomial::new(e.clone()), BigRational::from_integer((*c).into()));
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, BigRational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
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

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, m: Monomial, c: BigRational) {
        assert_eq!(m.nvars(), self.nvars, "monomial variable count mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Largest total degree of a term, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        let terms = self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect();
        Polynomial { nvars: self.nvars, terms, _kind: PhantomData }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        let terms = self.terms.iter().map(|(t, k)| (t.mul(m), k.clone())).collect();
        Polynomial { nvars: self.nvars, terms, _kind: PhantomData }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn evaluate(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.nvars, "evaluation point has wrong length");
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (x, &e) in point.iter().zip(m.entries()) {
                if e > 0 {
                    v *= num_traits::pow::pow(x.clone(), e as usize);
                }
            }
            acc += v;
        }
        acc
    }

    /// Exact division; `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let (lm, lc) = divisor.leading_term()?;
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        while let Some((m, c)) = rem.leading_term() {
            let qm = m.div(lm)?;
            let qc = c / lc;
            let step = divisor.mul_monomial(&qm).scale(&qc);
            rem = &rem - &step;
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Relabels variables: variable `i` of the result is variable `perm[i]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self::from_terms(self.nvars, self.terms.iter().map(|(m, c)| (m.permuted(perm), c.clone())))
    }

    /// Reinterprets the same coefficients in the other variable family.
    pub fn cast<W: VarKind>(&self) -> Polynomial<W> {
        Polynomial { nvars: self.nvars, terms: self.terms.clone(), _kind: PhantomData }
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        use num_integer::Integer;
        self.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Parses `c*X1^a1*...*Xn^an + ...`; lowercase `x` is accepted too, as are
    /// the letters X, Y, Z, W for the first four variables.
    pub fn parse(s: &str) -> Result<Self> {
        Self::parse_with_vars(s, 0)
    }

    /// As [`Polynomial::parse`], with at least `min_vars` variables.
    pub fn parse_with_vars(s: &str, min_vars: usize) -> Result<Self> {
        let raw = parse_terms(s)?;
        let nvars = raw.iter().flat_map(|(f, _)| f.keys().map(|&i| i + 1)).max().unwrap_or(0).max(min_vars);
        let mut p = Self::zero(nvars);
        for (factors, c) in raw {
            let mut e = vec![0u32; nvars];
            for (i, k) in factors {
                e[i] += k;
            }
            p.add_term(Monomial::new(e), c);
        }
        Ok(p)
    }
}

type RawTerm = (BTreeMap<usize, u32>, BigRational);

fn parse_terms(s: &str) -> Result<Vec<RawTerm>> {
    let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
    if chars.is_empty() {
        return Err(Error::input("empty polynomial"));
    }
    let mut pos = 0;
    let mut out = Vec::new();
    while pos < chars.len() {
        let mut sign = BigRational::one();
        while pos < chars.len() && (chars[pos] == '+' || chars[pos] == '-') {
            if chars[pos] == '-' {
                sign = -sign;
            }
            pos += 1;
        }
        if pos >= chars.len() {
            return Err(Error::input(format!("dangling sign in '{}'", s)));
        }
        let mut coeff = sign;
        let mut factors: BTreeMap<usize, u32> = BTreeMap::new();
        loop {
            parse_factor(&chars, &mut pos, &mut coeff, &mut factors, s)?;
            if pos < chars.len() && chars[pos] == '*' {
                pos += 1;
                continue;
            }
            break;
        }
        if pos < chars.len() && chars[pos] != '+' && chars[pos] != '-' {
            return Err(Error::input(format!("unexpected '{}' in '{}'", chars[pos], s)));
        }
        out.push((factors, coeff));
    }
    Ok(out)
}

fn parse_uint(chars: &[char], pos: &mut usize) -> Option<BigInt> {
    let start = *pos;
    while *pos < chars.len() && chars[*pos].is_ascii_digit() {
        *pos += 1;
    }
    if start == *pos {
        return None;
    }
    chars[start..*pos].iter().collect::<String>().parse().ok()
}

fn parse_factor(
    chars: &[char],
    pos: &mut usize,
    coeff: &mut BigRational,
    factors: &mut BTreeMap<usize, u32>,
    src: &str,
) -> Result<()> {
    let bad = |what: &str| Error::input(format!("{} in '{}'", what, src));
    let c = *chars.get(*pos).ok_or_else(|| bad("missing factor"))?;
    if c.is_ascii_digit() {
        let num = parse_uint(chars, pos).ok_or_else(|| bad("bad number"))?;
        let mut value = BigRational::from_integer(num);
        if *pos < chars.len() && chars[*pos] == '/' {
            *pos += 1;
            let den = parse_uint(chars, pos).ok_or_else(|| bad("bad denominator"))?;
            if den.is_zero() {
                return Err(bad("zero denominator"));
            }
            value /= BigRational::from_integer(den);
        }
        *coeff *= value;
        return Ok(());
    }
    let index = match c {
        'X' | 'x' => {
            *pos += 1;
            match parse_uint(chars, pos) {
                Some(i) => {
                    let i = i.to_usize().filter(|&i| i >= 1).ok_or_else(|| bad("variable index must be >= 1"))?;
                    i - 1
                }
                None => 0,
            }
        }
        'Y' | 'y' => {
            *pos += 1;
            1
        }
        'Z' | 'z' => {
            *pos += 1;
            2
        }
        'W' | 'w' => {
            *pos += 1;
            3
        }
        other => return Err(bad(&format!("unexpected character '{}'", other))),
    };
    let mut exp = 1u32;
    if *pos < chars.len() && chars[*pos] == '^' {
        *pos += 1;
        exp = parse_uint(chars, pos).and_then(|e| e.to_u32()).ok_or_else(|| bad("bad exponent"))?;
    }
    *factors.entry(index).or_insert(0) += exp;
    Ok(())
}

impl<V: VarKind> fmt::Display for Polynomial<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let constant = m.degree() == 0;
            if constant {
                write!(f, "{}", abs)?;
            } else {
                if !abs.is_one() {
                    write!(f, "{}*", abs)?;
                }
                m.fmt_with(f, V::LETTER)?;
            }
        }
        Ok(())
    }
}

impl<'a, V: VarKind> Add<&'a Polynomial<V>> for &'a Polynomial<V> {
    type Output = Polynomial<V>;
    fn add(self, rhs: &'a Polynomial<V>) -> Polynomial<V> {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a, V: VarKind> Sub<&'a Polynomial<V>> for &'a Polynomial<V> {
    type Output = Polynomial<V>;
    fn sub(self, rhs: &'a Polynomial<V>) -> Polynomial<V> {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<V: VarKind> Neg for &Polynomial<V> {
    type Output = Polynomial<V>;
    fn neg(self) -> Polynomial<V> {
        self.scale(&-BigRational::one())
    }
}

impl<'a, V: VarKind> Mul<&'a Polynomial<V>> for &'a Polynomial<V> {
    type Output = Polynomial<V>;
    fn mul(self, rhs: &'a Polynomial<V>) -> Polynomial<V> {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = Polynomial::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

fn check_vars(p: &OperatorPolynomial, f: &DualPolynomial) -> Result<()> {
    if p.nvars() != f.nvars() {
        return Err(Error::input(format!(
            "operator has {} variables but polynomial has {}",
            p.nvars(),
            f.nvars()
        )));
    }
    Ok(())
}

/// `p o F` with `xi` acting as `d/dXi`.
pub fn diff_apply(p: &OperatorPolynomial, f: &DualPolynomial) -> Result<DualPolynomial> {
    check_vars(p, f)?;
    let mut out = DualPolynomial::zero(f.nvars());
    for (alpha, c) in p.terms() {
        for (beta, k) in f.terms() {
            if let Some(rest) = beta.div(alpha) {
                let factor = BigRational::from_integer(alpha.falling_factorial(beta));
                out.add_term(rest, c * k * factor);
            }
        }
    }
    Ok(out)
}

/// Contraction action: `x^alpha o X^beta = X^(beta - alpha)`, no factorials.
pub fn contract_apply(p: &OperatorPolynomial, f: &DualPolynomial) -> Result<DualPolynomial> {
    check_vars(p, f)?;
    let mut out = DualPolynomial::zero(f.nvars());
    for (alpha, c) in p.terms() {
        for (beta, k) in f.terms() {
            if let Some(rest) = beta.div(alpha) {
                out.add_term(rest, c * k);
            }
        }
    }
    Ok(out)
}

/// Monomial operator applied to a polynomial under differentiation.
pub fn diff_monomial(alpha: &Monomial, f: &DualPolynomial) -> DualPolynomial {
    let mut out = DualPolynomial::zero(f.nvars());
    for (beta, k) in f.terms() {
        if let Some(rest) = beta.div(alpha) {
            out.add_term(rest, k * BigRational::from_integer(alpha.falling_factorial(beta)));
        }
    }
    out
}

pub fn rational(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}
