//! Exact sparse multivariate polynomials over the rationals.
//!
//! Terms are stored in a map from dense exponent vectors to nonzero
//! [`Rational`] coefficients, ordered graded-lexicographically. Besides the
//! ring operations this module provides the symmetric-group action on
//! variables, divided differences along transpositions, and the Dunkl
//! operators of type `A_{n-1}`:
//!
//! ```text
//! D_i p = ∂_i p + κ Σ_{j≠i} (p − p∘(i j)) / (x_i − x_j)
//! ```
//!
//! Nothing in here rounds. Floating multiplicities are converted to their
//! exact binary rational value before use.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("variable index {index} out of range for {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },
    #[error("({0}, {0}) is not a transposition")]
    DegenerateTransposition(usize),
    #[error("exact division by (x{i} - x{j}) left a nonzero remainder")]
    InexactDivision { i: usize, j: usize },
    #[error("multiplicity must be nonnegative and finite, got {0}")]
    InvalidMultiplicity(String),
    #[error("polynomial parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// Exponent vector of a single term.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn swapped(&self, a: usize, b: usize) -> Self {
        let mut e = self.0.clone();
        e.swap(a, b);
        Monomial(e)
    }
}

// Graded lexicographic: total degree first, then x1 > x2 > ...
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A transposition `(i j)` of two variables, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Transposition {
    i: usize,
    j: usize,
}

impl Transposition {
    pub fn new(i: usize, j: usize) -> Result<Self, PolyError> {
        if i == 0 || j == 0 {
            return Err(PolyError::IndexOutOfRange { index: 0, nvars: 0 });
        }
        if i == j {
            return Err(PolyError::DegenerateTransposition(i));
        }
        Ok(Transposition { i, j })
    }

    pub fn i(&self) -> usize {
        self.i
    }

    pub fn j(&self) -> usize {
        self.j
    }

    fn check(&self, nvars: usize) -> Result<(), PolyError> {
        for index in [self.i, self.j] {
            if index > nvars {
                return Err(PolyError::IndexOutOfRange { index, nvars });
            }
        }
        Ok(())
    }

    /// Swap coordinates `i` and `j` of a point.
    pub fn apply_to_point<T: Clone>(&self, x: &[T]) -> Vec<T> {
        let mut y = x.to_vec();
        y.swap(self.i - 1, self.j - 1);
        y
    }
}

/// The multiplicity parameter κ ≥ 0, either exact or floating.
#[derive(Clone, Debug, PartialEq)]
pub enum Multiplicity {
    Exact(Rational),
    Float(f64),
}

impl Multiplicity {
    pub fn exact(kappa: Rational) -> Result<Self, PolyError> {
        if kappa.is_negative() {
            return Err(PolyError::InvalidMultiplicity(kappa.to_string()));
        }
        Ok(Multiplicity::Exact(kappa))
    }

    pub fn float(kappa: f64) -> Result<Self, PolyError> {
        if !kappa.is_finite() || kappa < 0.0 {
            return Err(PolyError::InvalidMultiplicity(kappa.to_string()));
        }
        Ok(Multiplicity::Float(kappa))
    }

    /// `p/q` (or a bare integer) is exact, anything else is parsed as a float.
    pub fn parse(s: &str) -> Result<Self, PolyError> {
        let s = s.trim();
        let bad = || PolyError::InvalidMultiplicity(s.to_string());
        if s.contains('/') || s.bytes().all(|b| b.is_ascii_digit()) && !s.is_empty() {
            let r = parse_rational(s).ok_or_else(bad)?;
            Self::exact(r)
        } else {
            let v: f64 = s.parse().map_err(|_| bad())?;
            Self::float(v)
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Multiplicity::Exact(_))
    }

    pub fn to_rational(&self) -> Rational {
        match self {
            Multiplicity::Exact(r) => r.clone(),
            Multiplicity::Float(v) => Rational::from_float(*v).expect("finite multiplicity"),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Multiplicity::Exact(r) => rational_to_f64(r),
            Multiplicity::Float(v) => *v,
        }
    }
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Multiplicity::Exact(r) => write!(f, "{r}"),
            Multiplicity::Float(v) => write!(f, "{v}"),
        }
    }
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Rational::new(p, q))
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // numerator/denominator overflow f64 individually
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Sparse polynomial in `nvars` variables with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    /// The coordinate function `x_i` (1-based).
    pub fn var(nvars: usize, i: usize) -> Result<Self, PolyError> {
        check_index(i, nvars)?;
        let mut e = vec![0; nvars];
        e[i - 1] = 1;
        Ok(Self::monomial(e, Rational::one()))
    }

    pub fn monomial(exps: Vec<u32>, coeff: Rational) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(Monomial(exps), coeff);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending graded-lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms
            .get(&Monomial(exps.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Highest total degree, `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        debug_assert_eq!(m.0.len(), self.nvars);
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

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.nvars);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Multiply by `x_v` (0-based).
    fn shift_var(&self, v: usize) -> Self {
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = m.0.clone();
                    e[v] += 1;
                    (Monomial(e), c.clone())
                })
                .collect(),
        }
    }

    /// Relabel variables by the transposition `s`.
    pub fn transpose(&self, s: Transposition) -> Result<Self, PolyError> {
        s.check(self.nvars)?;
        Ok(self.swap_unchecked(s.i - 1, s.j - 1))
    }

    fn swap_unchecked(&self, a: usize, b: usize) -> Self {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.swapped(a, b), c.clone())).collect(),
        }
    }

    /// Exact partial derivative with respect to `x_i` (1-based).
    pub fn partial(&self, i: usize) -> Result<Self, PolyError> {
        check_index(i, self.nvars)?;
        let v = i - 1;
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let k = m.0[v];
            if k == 0 {
                continue;
            }
            let mut e = m.0.clone();
            e[v] -= 1;
            out.add_term(Monomial(e), c * Rational::from_integer(BigInt::from(k)));
        }
        Ok(out)
    }

    /// `(p − p∘(i j)) / (x_i − x_j)`, computed by synthetic division in
    /// `x_i` with `x_j` treated as part of the coefficient ring.
    pub fn divided_difference(&self, s: Transposition) -> Result<Self, PolyError> {
        s.check(self.nvars)?;
        let (vi, vj) = (s.i - 1, s.j - 1);
        let numer = self - &self.swap_unchecked(vi, vj);
        if numer.is_zero() {
            return Ok(Self::zero(self.nvars));
        }

        // numer = Σ_k c_k x_i^k, with c_k free of x_i
        let mut coeffs: BTreeMap<u32, MultiPoly> = BTreeMap::new();
        for (m, c) in &numer.terms {
            let k = m.0[vi];
            let mut e = m.0.clone();
            e[vi] = 0;
            coeffs
                .entry(k)
                .or_insert_with(|| Self::zero(self.nvars))
                .add_term(Monomial(e), c.clone());
        }
        let top = *coeffs.keys().next_back().expect("nonzero numerator");
        let zero = Self::zero(self.nvars);
        let c_at = |k: u32| coeffs.get(&k).unwrap_or(&zero);

        // Horner at the root x_i = x_j
        let mut quotient = Self::zero(self.nvars);
        let mut carry = Self::zero(self.nvars);
        for k in (1..=top).rev() {
            carry = c_at(k) + &carry.shift_var(vj);
            for (m, c) in &carry.terms {
                let mut e = m.0.clone();
                e[vi] = k - 1;
                quotient.add_term(Monomial(e), c.clone());
            }
        }
        let remainder = c_at(0) + &carry.shift_var(vj);
        if !remainder.is_zero() {
            return Err(PolyError::InexactDivision { i: s.i, j: s.j });
        }
        Ok(quotient)
    }

    /// The Dunkl operator `D_i` for the symmetric group on `nvars` letters.
    pub fn dunkl(&self, i: usize, kappa: &Multiplicity) -> Result<Self, PolyError> {
        check_index(i, self.nvars)?;
        let k = kappa.to_rational();
        let mut out = self.partial(i)?;
        if k.is_zero() {
            return Ok(out);
        }
        let mut reflections = Self::zero(self.nvars);
        for j in (1..=self.nvars).filter(|&j| j != i) {
            reflections = &reflections + &self.divided_difference(Transposition { i, j })?;
        }
        out = &out + &reflections.scale(&k);
        Ok(out)
    }

    pub fn eval_exact(&self, x: &[Rational]) -> Rational {
        assert_eq!(x.len(), self.nvars, "point dimension mismatch");
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &e) in x.iter().zip(&m.0) {
                if e > 0 {
                    t *= num_traits::pow(xi.clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.nvars, "point dimension mismatch");
        self.terms
            .iter()
            .map(|(m, c)| {
                let mono: f64 = x.iter().zip(&m.0).map(|(xi, &e)| xi.powi(e as i32)).product();
                rational_to_f64(c) * mono
            })
            .sum()
    }

    /// Parse the textual format with an explicit number of variables.
    pub fn parse(s: &str, nvars: usize) -> Result<Self, PolyError> {
        let terms = Parser::new(s).parse()?;
        let needed = terms
            .iter()
            .flat_map(|(vars, _)| vars.iter().map(|(v, _)| *v))
            .max()
            .unwrap_or(0);
        if needed > nvars {
            return Err(PolyError::IndexOutOfRange { index: needed, nvars });
        }
        let mut p = Self::zero(nvars);
        for (vars, c) in terms {
            let mut e = vec![0u32; nvars];
            for (v, k) in vars {
                e[v - 1] += k;
            }
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }
}

fn check_index(i: usize, nvars: usize) -> Result<(), PolyError> {
    if i == 0 || i > nvars {
        Err(PolyError::IndexOutOfRange { index: i, nvars })
    } else {
        Ok(())
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;

    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;

    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;

    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = MultiPoly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let e = ma.0.iter().zip(&mb.0).map(|(a, b)| a + b).collect();
                out.add_term(Monomial(e), ca * cb);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;

    fn neg(self) -> MultiPoly {
        self.scale(&-Rational::one())
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            if m.degree() == 0 {
                continue;
            }
            write!(f, " *")?;
            for (v, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, " x{}", v + 1)?,
                    _ => write!(f, " x{}^{}", v + 1, e)?,
                }
            }
        }
        Ok(())
    }
}

/// Infers the number of variables from the highest index that appears.
impl FromStr for MultiPoly {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let terms = Parser::new(s).parse()?;
        let nvars = terms
            .iter()
            .flat_map(|(vars, _)| vars.iter().map(|(v, _)| *v))
            .max()
            .unwrap_or(1);
        Self::parse(s, nvars)
    }
}

type RawTerm = (Vec<(usize, u32)>, Rational);

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(s: &'a str) -> Self {
        Parser {
            src: s.as_bytes(),
            pos: 0,
        }
    }

    fn err<T>(&self, msg: &str) -> Result<T, PolyError> {
        Err(PolyError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn digits(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }

    fn parse(mut self) -> Result<Vec<RawTerm>, PolyError> {
        let mut out = Vec::new();
        if self.peek().is_none() {
            return self.err("empty polynomial");
        }
        loop {
            out.push(self.term()?);
            match self.peek() {
                None => return Ok(out),
                Some(b'+') | Some(b'-') => {}
                Some(_) => return self.err("expected '+' or '-' between terms"),
            }
        }
    }

    fn term(&mut self) -> Result<RawTerm, PolyError> {
        let mut negative = false;
        while let Some(b) = self.peek() {
            match b {
                b'+' => {}
                b'-' => negative = !negative,
                _ => break,
            }
            self.pos += 1;
        }

        let mut coeff = Rational::one();
        let mut have_coeff = false;
        if let Some(p) = self.digits() {
            let p: BigInt = p.parse().expect("ascii digits");
            coeff = Rational::from_integer(p);
            have_coeff = true;
            if self.peek() == Some(b'/') {
                self.pos += 1;
                let Some(q) = self.digits() else {
                    return self.err("expected denominator after '/'");
                };
                let q: BigInt = q.parse().expect("ascii digits");
                if q.is_zero() {
                    return self.err("zero denominator");
                }
                coeff /= Rational::from_integer(q);
            }
            if self.peek() == Some(b'*') {
                self.pos += 1;
            }
        }

        let mut vars = Vec::new();
        while self.peek() == Some(b'x') {
            self.pos += 1;
            let Some(idx) = self.digits() else {
                return self.err("expected variable index after 'x'");
            };
            let idx: usize = idx.parse().map_err(|_| PolyError::Parse {
                pos: self.pos,
                msg: "variable index too large".into(),
            })?;
            if idx == 0 {
                return self.err("variables are numbered from x1");
            }
            let mut e = 1u32;
            if self.peek() == Some(b'^') {
                self.pos += 1;
                let Some(k) = self.digits() else {
                    return self.err("expected exponent after '^'");
                };
                e = k.parse().map_err(|_| PolyError::Parse {
                    pos: self.pos,
                    msg: "exponent too large".into(),
                })?;
            }
            vars.push((idx, e));
            if self.peek() == Some(b'*') {
                self.pos += 1;
                if self.peek() != Some(b'x') {
                    return self.err("expected variable after '*'");
                }
            }
        }
        if !have_coeff && vars.is_empty() {
            return self.err("expected a coefficient or variable");
        }
        if negative {
            coeff = -coeff;
        }
        Ok((vars, coeff))
    }
}

/// `W(λ) = (λ1 − λ2)(λ1 − λ3)(λ2 − λ3)`, expanded.
pub fn alternating_poly_a2() -> MultiPoly {
    let x = |i| MultiPoly::var(3, i).expect("valid index");
    let (x1, x2, x3) = (x(1), x(2), x(3));
    let f12 = &x1 - &x2;
    let f13 = &x1 - &x3;
    let f23 = &x2 - &x3;
    &(&f12 * &f13) * &f23
}
