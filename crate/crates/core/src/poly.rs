//! Exact sparse polynomials over ℚ in the three formal variables λ, μ, ∂.
//!
//! Every coefficient object of the calculus lives here: structure constants,
//! action tables, flag-datum entries. Terms are kept in a `BTreeMap` keyed by
//! exponent triples under graded-lexicographic order (λ > μ > ∂), so the
//! printed form is canonical and equality is plain map equality.
//!
//! Text form uses `L` for λ, `M` for μ and `D` for ∂:
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := base ('^' nonneg-int)?
//! base   := 'L' | 'M' | 'D' | rational | '(' expr ')'
//! ```
//!
//! A leading unary minus is also accepted at the start of an `expr`, which is
//! what [`Poly`]'s `Display` emits for a negative leading coefficient.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Exact rational coefficient.
pub type Rational = BigRational;

/// Integer rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n/d` as an exact rational. Panics on `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Prints a rational as `p` or `p/q`.
pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p` or `p/q` (with optional leading `-`).
pub fn parse_rational(s: &str) -> Result<Rational, ParseError> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| ParseError::new(0, ParseErrorKind::Unexpected(s.to_string())))?;
    let d: BigInt = den.parse().map_err(|_| ParseError::new(0, ParseErrorKind::Unexpected(s.to_string())))?;
    if d.is_zero() {
        return Err(ParseError::new(0, ParseErrorKind::ZeroDenominator));
    }
    Ok(Rational::new(n, d))
}

/// The closed variable universe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Var {
    Lambda,
    Mu,
    Partial,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::Lambda, Var::Mu, Var::Partial];

    pub fn index(self) -> usize {
        match self {
            Var::Lambda => 0,
            Var::Mu => 1,
            Var::Partial => 2,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Var::Lambda => 'L',
            Var::Mu => 'M',
            Var::Partial => 'D',
        }
    }
}

/// Exponent triple `(e_λ, e_μ, e_∂)` ordered graded-lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub [u32; 3]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0, 0, 0]);

    pub fn var(v: Var) -> Self {
        let mut e = [0; 3];
        e[v.index()] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exp(&self, v: Var) -> u32 {
        self.0[v.index()]
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial([self.0[0] + other.0[0], self.0[1] + other.0[1], self.0[2] + other.0[2]])
    }
}

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

/// Sparse polynomial in λ, μ, ∂ with no zero coefficients stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::term(Monomial::ONE, c)
    }

    pub fn int(n: i64) -> Self {
        Poly::constant(int(n))
    }

    pub fn var(v: Var) -> Self {
        Poly::term(Monomial::var(v), Rational::one())
    }

    pub fn lambda() -> Self {
        Poly::var(Var::Lambda)
    }

    pub fn mu() -> Self {
        Poly::var(Var::Mu)
    }

    pub fn partial() -> Self {
        Poly::var(Var::Partial)
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    /// Parses the text grammar described in the module docs.
    pub fn parse(text: &str) -> Result<Poly, ParseError> {
        Parser::new(text).parse_all()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Degree in one variable; `None` for the zero polynomial.
    pub fn degree_in(&self, v: Var) -> Option<u32> {
        self.terms.keys().map(|m| m.exp(v)).max()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn contains(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exp(v) > 0)
    }

    /// The constant value, if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::ONE).cloned(),
            _ => None,
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, k)| (*m, k * c)).collect() }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Image under a linear substitution; fails if a variable of `self` is unassigned.
    pub fn substitute(&self, s: &LinearSubstitution) -> Result<Poly, SubstitutionError> {
        for v in Var::ALL {
            if s.image(v).is_none() && self.contains(v) {
                return Err(SubstitutionError::Unassigned(v));
            }
        }
        Ok(self.subst_unchecked(s))
    }

    /// Substitution where unassigned variables are left fixed.
    pub fn subst(&self, s: &LinearSubstitution) -> Poly {
        self.subst_unchecked(s)
    }

    fn subst_unchecked(&self, s: &LinearSubstitution) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut powers: [Vec<Poly>; 3] = Default::default();
        for v in Var::ALL {
            let max = self.degree_in(v).unwrap_or(0) as usize;
            let base = s.image(v).cloned().unwrap_or_else(|| Poly::var(v));
            let table = &mut powers[v.index()];
            table.push(Poly::one());
            for k in 1..=max {
                let next = &table[k - 1] * &base;
                table.push(next);
            }
        }
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut t = powers[0][m.0[0] as usize].scale(c);
            if m.0[1] > 0 {
                t = &t * &powers[1][m.0[1] as usize];
            }
            if m.0[2] > 0 {
                t = &t * &powers[2][m.0[2] as usize];
            }
            out += t;
        }
        out
    }

    /// Checks that the polynomial is affine (total degree ≤ 1).
    pub fn is_affine(&self) -> bool {
        self.total_degree().is_none_or(|d| d <= 1)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (idx, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            let mut factors: Vec<String> = Vec::new();
            if *m == Monomial::ONE || !abs.is_one() {
                factors.push(fmt_rational(&abs));
            }
            for v in Var::ALL {
                match m.exp(v) {
                    0 => {}
                    1 => factors.push(v.symbol().to_string()),
                    e => factors.push(format!("{}^{}", v.symbol(), e)),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl FromStr for Poly {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Poly::parse(s)
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        Poly::parse(&text).map_err(serde::de::Error::custom)
    }
}

impl From<Rational> for Poly {
    fn from(c: Rational) -> Self {
        Poly::constant(c)
    }
}

impl From<i64> for Poly {
    fn from(n: i64) -> Self {
        Poly::int(n)
    }
}

impl AddAssign<Poly> for Poly {
    fn add_assign(&mut self, rhs: Poly) {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, -c.clone());
        }
    }
}

impl SubAssign<Poly> for Poly {
    fn sub_assign(&mut self, rhs: Poly) {
        *self -= &rhs;
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        self += rhs;
        self
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(mut self, rhs: Poly) -> Poly {
        self -= &rhs;
        self
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        if self.is_zero() || rhs.is_zero() {
            return out;
        }
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

/// Simultaneous affine substitution of the three variables.
///
/// Unassigned variables are either an error ([`Poly::substitute`]) or left
/// fixed ([`Poly::subst`]).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LinearSubstitution {
    images: [Option<Poly>; 3],
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubstitutionError {
    #[error("variable {} is not assigned by the substitution", .0.symbol())]
    Unassigned(Var),
    #[error("substitution image `{0}` is not affine")]
    NotAffine(String),
}

impl LinearSubstitution {
    /// Assigns nothing.
    pub fn empty() -> Self {
        Self::default()
    }

    /// Assigns every variable to itself.
    pub fn identity() -> Self {
        let mut s = Self::empty();
        for v in Var::ALL {
            s.images[v.index()] = Some(Poly::var(v));
        }
        s
    }

    /// Builder-style assignment. Panics if `image` is not affine; use
    /// [`LinearSubstitution::try_assign`] for unchecked input.
    pub fn with(mut self, v: Var, image: Poly) -> Self {
        self.try_assign(v, image).expect("affine substitution image");
        self
    }

    pub fn try_assign(&mut self, v: Var, image: Poly) -> Result<(), SubstitutionError> {
        if !image.is_affine() {
            return Err(SubstitutionError::NotAffine(image.to_string()));
        }
        self.images[v.index()] = Some(image);
        Ok(())
    }

    pub fn image(&self, v: Var) -> Option<&Poly> {
        self.images[v.index()].as_ref()
    }

    /// The substitution "apply `self`, then `next`":
    /// `p.subst(&a.then(&b)) == p.subst(&a).subst(&b)`.
    pub fn then(&self, next: &LinearSubstitution) -> LinearSubstitution {
        let mut out = LinearSubstitution::empty();
        for v in Var::ALL {
            let img = match self.image(v) {
                Some(p) => p.subst(next),
                None => match next.image(v) {
                    Some(p) => p.clone(),
                    None => continue,
                },
            };
            out.images[v.index()] = Some(img);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("polynomial syntax error at position {pos}: {kind}")]
pub struct ParseError {
    pub pos: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    fn new(pos: usize, kind: ParseErrorKind) -> Self {
        ParseError { pos, kind }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected `{0}`")]
    Unexpected(String),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),
    #[error("negative exponent")]
    NegativeExponent,
    #[error("non-integer exponent")]
    NonIntegerExponent,
    #[error("exponent too large")]
    ExponentTooLarge,
    #[error("zero denominator")]
    ZeroDenominator,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser { src: text.as_bytes(), pos: 0 }
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

    fn err_here(&mut self, kind: ParseErrorKind) -> ParseError {
        ParseError::new(self.pos, kind)
    }

    fn unexpected(&mut self) -> ParseError {
        match self.peek() {
            Some(c) => self.err_here(ParseErrorKind::Unexpected((c as char).to_string())),
            None => self.err_here(ParseErrorKind::UnexpectedEnd),
        }
    }

    fn parse_all(mut self) -> Result<Poly, ParseError> {
        let p = self.expr()?;
        if self.peek().is_some() {
            return Err(self.unexpected());
        }
        Ok(p)
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let mut acc = if self.peek() == Some(b'-') {
            self.pos += 1;
            -self.term()?
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc += self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc -= self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly, ParseError> {
        let base = self.base()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        match self.peek() {
            Some(b'-') => return Err(self.err_here(ParseErrorKind::NegativeExponent)),
            Some(c) if c.is_ascii_digit() => {}
            _ => return Err(self.unexpected()),
        }
        let start = self.pos;
        let digits = self.digits();
        if matches!(self.src.get(self.pos), Some(b'/') | Some(b'.')) {
            return Err(ParseError::new(start, ParseErrorKind::NonIntegerExponent));
        }
        let e: u32 = digits
            .parse::<BigInt>()
            .ok()
            .and_then(|n| n.to_u32())
            .filter(|&n| n <= 1024)
            .ok_or_else(|| ParseError::new(start, ParseErrorKind::ExponentTooLarge))?;
        Ok(base.pow(e))
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn base(&mut self) -> Result<Poly, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.unexpected());
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let num: BigInt = self.digits().parse().expect("digit run");
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let at = self.pos;
                    if !self.peek().is_some_and(|c| c.is_ascii_digit()) {
                        return Err(self.unexpected());
                    }
                    let den: BigInt = self.digits().parse().expect("digit run");
                    if den.is_zero() {
                        return Err(ParseError::new(at, ParseErrorKind::ZeroDenominator));
                    }
                    Ok(Poly::constant(Rational::new(num, den)))
                } else {
                    Ok(Poly::constant(Rational::from_integer(num)))
                }
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let ident = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
                match ident.as_str() {
                    "L" => Ok(Poly::lambda()),
                    "M" => Ok(Poly::mu()),
                    "D" => Ok(Poly::partial()),
                    _ => Err(ParseError::new(start, ParseErrorKind::UnknownIdentifier(ident))),
                }
            }
            _ => Err(self.unexpected()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Poly {
        Poly::parse(s).unwrap()
    }

    fn mono(l: u32, m: u32, d: u32) -> Monomial {
        Monomial([l, m, d])
    }

    #[test]
    fn parse_examples() {
        assert!(p("0").is_zero());
        let q = p("L*D + 2");
        assert_eq!(q.num_terms(), 2);
        assert_eq!(q.coeff(&mono(1, 0, 1)), int(1));
        assert_eq!(q.coeff(&Monomial::ONE), int(2));
        assert_eq!(p("(L+D)^2 - L^2 - D^2"), Poly::term(mono(1, 0, 1), int(2)));
    }

    #[test]
    fn arithmetic_examples() {
        assert!((&p("L") + &p("-L")).is_zero());
        assert_eq!(&p("L+D") * &p("L-D"), p("L^2 - D^2"));
        assert_eq!(p("2/3").scale(&int(3)), Poly::int(2));
    }

    #[test]
    fn substitution_examples() {
        let s = LinearSubstitution::empty().with(Var::Partial, p("-L-M"));
        assert_eq!(p("D").substitute(&s).unwrap(), p("-L-M"));

        let s = LinearSubstitution::empty()
            .with(Var::Partial, p("L+D"))
            .with(Var::Lambda, p("L"));
        assert_eq!(p("L*D").substitute(&s).unwrap(), p("L^2 + L*D"));

        let s = LinearSubstitution::empty()
            .with(Var::Lambda, p("M"))
            .with(Var::Partial, p("L+D"));
        assert_eq!(p("L + 2*D").substitute(&s).unwrap(), p("M + 2*L + 2*D"));
    }

    #[test]
    fn substitution_requires_assignment() {
        let s = LinearSubstitution::empty().with(Var::Partial, p("L"));
        assert_eq!(p("M*D").substitute(&s), Err(SubstitutionError::Unassigned(Var::Mu)));
        // zero polynomial mentions no variable
        assert!(p("0").substitute(&LinearSubstitution::empty()).unwrap().is_zero());
    }

    #[test]
    fn substitution_rejects_nonlinear_image() {
        let mut s = LinearSubstitution::empty();
        assert!(matches!(s.try_assign(Var::Lambda, p("L^2")), Err(SubstitutionError::NotAffine(_))));
    }

    #[test]
    fn parse_errors() {
        let e = Poly::parse("L + X").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownIdentifier("X".into()));
        assert_eq!(e.pos, 4);
        assert_eq!(Poly::parse("L^-1").unwrap_err().kind, ParseErrorKind::NegativeExponent);
        assert_eq!(Poly::parse("L^1/2").unwrap_err().kind, ParseErrorKind::NonIntegerExponent);
        assert_eq!(Poly::parse("1/0").unwrap_err().kind, ParseErrorKind::ZeroDenominator);
        assert_eq!(Poly::parse("(L").unwrap_err().kind, ParseErrorKind::UnexpectedEnd);
        assert_eq!(Poly::parse("2L").unwrap_err().kind, ParseErrorKind::Unexpected("L".into()));
        assert!(Poly::parse("").is_err());
        assert!(Poly::parse("L +").is_err());
    }

    #[test]
    fn canonical_printing() {
        assert_eq!(p("D + L").to_string(), "L + D");
        assert_eq!(p("1 - L^2 + 3/2*L*D").to_string(), "-L^2 + 3/2*L*D + 1");
        assert_eq!(p("-2*M^3*D").to_string(), "-2*M^3*D");
        assert_eq!(p("D^2 + M^2 + L*M").to_string(), "L*M + M^2 + D^2");
        assert_eq!(p(" ( L ) ").to_string(), "L");
    }

    #[test]
    fn degrees() {
        let q = p("L^2*D + M - 1");
        assert_eq!(q.degree_in(Var::Lambda), Some(2));
        assert_eq!(q.degree_in(Var::Mu), Some(1));
        assert_eq!(q.total_degree(), Some(3));
        assert_eq!(Poly::zero().total_degree(), None);
        assert_eq!(p("7/3").as_constant(), Some(ratio(7, 3)));
        assert_eq!(p("L").as_constant(), None);
    }

    fn arb_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec(((0u32..3, 0u32..3, 0u32..3), -3i64..=3, 1i64..=3), 0..5).prop_map(|ts| {
            let mut out = Poly::zero();
            for ((a, b, c), n, d) in ts {
                out += Poly::term(Monomial([a, b, c]), ratio(n, d));
            }
            out
        })
    }

    fn arb_affine() -> impl Strategy<Value = Poly> {
        (-2i64..=2, -2i64..=2, -2i64..=2, -2i64..=2).prop_map(|(a, b, c, k)| {
            &(&(&p("L").scale(&int(a)) + &p("M").scale(&int(b))) + &p("D").scale(&int(c))) + &Poly::int(k)
        })
    }

    fn arb_subst() -> impl Strategy<Value = LinearSubstitution> {
        (arb_affine(), arb_affine(), arb_affine()).prop_map(|(x, y, z)| {
            LinearSubstitution::empty()
                .with(Var::Lambda, x)
                .with(Var::Mu, y)
                .with(Var::Partial, z)
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn substitution_is_ring_homomorphism(a in arb_poly(), b in arb_poly(), s in arb_subst()) {
            let lhs = (&a * &b).substitute(&s).unwrap();
            let rhs = &a.substitute(&s).unwrap() * &b.substitute(&s).unwrap();
            prop_assert_eq!(lhs, rhs);
            let sum = (&a + &b).substitute(&s).unwrap();
            prop_assert_eq!(sum, &a.substitute(&s).unwrap() + &b.substitute(&s).unwrap());
        }

        #[test]
        fn substitution_composition(a in arb_poly(), s in arb_subst(), t in arb_subst()) {
            let stepwise = a.substitute(&s).unwrap().substitute(&t).unwrap();
            prop_assert_eq!(a.substitute(&s.then(&t)).unwrap(), stepwise);
        }

        #[test]
        fn print_parse_fixed_point(a in arb_poly()) {
            let text = a.to_string();
            let back = Poly::parse(&text).unwrap();
            prop_assert_eq!(&back, &a);
            prop_assert_eq!(back.to_string(), text);
        }
    }
}
