//! Finite free conformal algebras and the λ-product calculus.
//!
//! A conformal bilinear map `U × V → W[λ]` between free ℂ[∂]-modules is
//! determined by its values on basis pairs, stored as a [`BilinearMap`]. For
//! general arguments it extends by sesquilinearity: `∂` in the left argument
//! becomes `-ν` and `∂` in the right argument becomes `ν+∂`, where `ν` is
//! the product variable. Every product in the crate goes through
//! [`BilinearMap::apply`].

use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{LinearSubstitution, Poly, Rational, Var};
use crate::report::{Report, ReportBuilder};

/// A vector of polynomial coordinates, i.e. an element of `V[λ, μ]`.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LambdaElement(Vec<Poly>);

/// Elements proper have ∂-only coordinates; the type is shared.
pub type Element = LambdaElement;

impl LambdaElement {
    pub fn new(coords: Vec<Poly>) -> Self {
        LambdaElement(coords)
    }

    pub fn zero(dim: usize) -> Self {
        LambdaElement(vec![Poly::zero(); dim])
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zero(dim);
        v.0[i] = Poly::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Poly] {
        &self.0
    }

    pub fn coord(&self, i: usize) -> &Poly {
        &self.0[i]
    }

    pub fn coords_mut(&mut self) -> &mut [Poly] {
        &mut self.0
    }

    pub fn into_coords(self) -> Vec<Poly> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Poly::is_zero)
    }

    /// Multiplies every coordinate by `p`.
    pub fn mul_poly(&self, p: &Poly) -> Self {
        LambdaElement(self.0.iter().map(|c| c * p).collect())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        LambdaElement(self.0.iter().map(|p| p.scale(c)).collect())
    }

    pub fn subst(&self, s: &LinearSubstitution) -> Self {
        LambdaElement(self.0.iter().map(|p| p.subst(s)).collect())
    }

    pub fn contains(&self, v: Var) -> bool {
        self.0.iter().any(|p| p.contains(v))
    }

    /// Concatenation `(self, other)` in a direct sum.
    pub fn concat(&self, other: &LambdaElement) -> Self {
        let mut c = self.0.clone();
        c.extend(other.0.iter().cloned());
        LambdaElement(c)
    }

    /// Coordinates `range` as a new element.
    pub fn slice(&self, start: usize, end: usize) -> Self {
        LambdaElement(self.0[start..end].to_vec())
    }
}

impl fmt::Debug for LambdaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LambdaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

fn check_dims(a: &LambdaElement, b: &LambdaElement) {
    assert_eq!(a.dim(), b.dim(), "element dimension mismatch");
}

impl AddAssign<&LambdaElement> for LambdaElement {
    fn add_assign(&mut self, rhs: &LambdaElement) {
        check_dims(self, rhs);
        for (a, b) in self.0.iter_mut().zip(&rhs.0) {
            *a += b;
        }
    }
}

impl AddAssign<LambdaElement> for LambdaElement {
    fn add_assign(&mut self, rhs: LambdaElement) {
        check_dims(self, &rhs);
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a += b;
        }
    }
}

impl SubAssign<&LambdaElement> for LambdaElement {
    fn sub_assign(&mut self, rhs: &LambdaElement) {
        check_dims(self, rhs);
        for (a, b) in self.0.iter_mut().zip(&rhs.0) {
            *a -= b;
        }
    }
}

impl SubAssign<LambdaElement> for LambdaElement {
    fn sub_assign(&mut self, rhs: LambdaElement) {
        *self -= &rhs;
    }
}

impl Add for LambdaElement {
    type Output = LambdaElement;
    fn add(mut self, rhs: LambdaElement) -> LambdaElement {
        self += rhs;
        self
    }
}

impl Add<&LambdaElement> for &LambdaElement {
    type Output = LambdaElement;
    fn add(self, rhs: &LambdaElement) -> LambdaElement {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for LambdaElement {
    type Output = LambdaElement;
    fn sub(mut self, rhs: LambdaElement) -> LambdaElement {
        self -= &rhs;
        self
    }
}

impl Sub<&LambdaElement> for &LambdaElement {
    type Output = LambdaElement;
    fn sub(self, rhs: &LambdaElement) -> LambdaElement {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for LambdaElement {
    type Output = LambdaElement;
    fn neg(self) -> LambdaElement {
        LambdaElement(self.0.into_iter().map(|p| -p).collect())
    }
}

/// The variable indexing a product: λ, μ, λ+μ, or any other affine form
/// such as `-λ-∂`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductVariable {
    nu: Poly,
    left: LinearSubstitution,
    right: LinearSubstitution,
    structure: LinearSubstitution,
}

impl ProductVariable {
    /// Panics unless `nu` is affine.
    pub fn new(nu: Poly) -> Self {
        assert!(nu.is_affine(), "product variable must be affine");
        let left = LinearSubstitution::empty().with(Var::Partial, -&nu);
        let right = LinearSubstitution::empty().with(Var::Partial, &nu + &Poly::partial());
        let structure = LinearSubstitution::empty().with(Var::Lambda, nu.clone());
        ProductVariable { nu, left, right, structure }
    }

    pub fn lambda() -> Self {
        Self::new(Poly::lambda())
    }

    pub fn mu() -> Self {
        Self::new(Poly::mu())
    }

    pub fn lambda_plus_mu() -> Self {
        Self::new(&Poly::lambda() + &Poly::mu())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let p = Poly::parse(text)?;
        if !p.is_affine() {
            return Err(Error::Invalid(format!("product variable `{p}` is not affine")));
        }
        Ok(Self::new(p))
    }

    pub fn as_poly(&self) -> &Poly {
        &self.nu
    }

    /// `∂ ↦ -ν`, applied to left-slot coefficients.
    pub fn left_shift(&self) -> &LinearSubstitution {
        &self.left
    }

    /// `∂ ↦ ν+∂`, applied to right-slot coefficients.
    pub fn right_shift(&self) -> &LinearSubstitution {
        &self.right
    }

    /// `λ ↦ ν`, applied to stored values.
    pub fn rename(&self) -> &LinearSubstitution {
        &self.structure
    }
}

/// Values of a conformal bilinear map on basis pairs.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BilinearMap {
    left: usize,
    right: usize,
    out: usize,
    table: Vec<Vec<LambdaElement>>,
}

impl BilinearMap {
    pub fn zero(left: usize, right: usize, out: usize) -> Self {
        BilinearMap { left, right, out, table: vec![vec![LambdaElement::zero(out); right]; left] }
    }

    /// Builds from `table[l][r]`, all of dimension `out`.
    pub fn from_table(left: usize, right: usize, out: usize, table: Vec<Vec<LambdaElement>>) -> Result<Self> {
        if table.len() != left || table.iter().any(|row| row.len() != right) {
            return Err(Error::RankMismatch(format!("expected a {left}x{right} table")));
        }
        if table.iter().flatten().any(|e| e.dim() != out) {
            return Err(Error::RankMismatch(format!("every value must have {out} coordinates")));
        }
        Ok(BilinearMap { left, right, out, table })
    }

    pub fn left_dim(&self) -> usize {
        self.left
    }

    pub fn right_dim(&self) -> usize {
        self.right
    }

    pub fn out_dim(&self) -> usize {
        self.out
    }

    pub fn get(&self, l: usize, r: usize) -> &LambdaElement {
        &self.table[l][r]
    }

    pub fn set(&mut self, l: usize, r: usize, value: LambdaElement) {
        assert_eq!(value.dim(), self.out);
        self.table[l][r] = value;
    }

    pub fn table(&self) -> &[Vec<LambdaElement>] {
        &self.table
    }

    pub fn is_zero(&self) -> bool {
        self.table.iter().flatten().all(LambdaElement::is_zero)
    }

    pub fn contains(&self, v: Var) -> bool {
        self.table.iter().flatten().any(|e| e.contains(v))
    }

    /// `p ₍ν₎ q` by sesquilinear extension. Parameters (λ, μ) already present
    /// in the coordinates of `p` and `q` are left untouched.
    pub fn apply(&self, p: &LambdaElement, q: &LambdaElement, nu: &ProductVariable) -> LambdaElement {
        assert_eq!(p.dim(), self.left, "left argument dimension");
        assert_eq!(q.dim(), self.right, "right argument dimension");
        let mut out = LambdaElement::zero(self.out);
        let rights: Vec<(usize, Poly)> = q
            .coords()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(r, c)| (r, c.subst(nu.right_shift())))
            .collect();
        for (l, pl) in p.coords().iter().enumerate() {
            if pl.is_zero() {
                continue;
            }
            let pl = pl.subst(nu.left_shift());
            for (r, qr) in &rights {
                let value = &self.table[l][*r];
                if value.is_zero() {
                    continue;
                }
                let coeff = &pl * qr;
                for (k, c) in value.coords().iter().enumerate() {
                    if !c.is_zero() {
                        out.coords_mut()[k] += &coeff * &c.subst(nu.rename());
                    }
                }
            }
        }
        out
    }

    /// Value on basis vectors with λ renamed to `nu`.
    pub fn basis_value(&self, l: usize, r: usize, nu: &ProductVariable) -> LambdaElement {
        self.table[l][r].subst(nu.rename())
    }

    /// The map with arguments swapped and the commutativity substitution
    /// applied: `(r, l) ↦ values of (l, r)` at `-λ-∂`.
    pub fn opposite(&self) -> BilinearMap {
        let nu = ProductVariable::new(-(&Poly::lambda() + &Poly::partial()));
        let mut out = BilinearMap::zero(self.right, self.left, self.out);
        for l in 0..self.left {
            for r in 0..self.right {
                out.table[r][l] = self.basis_value(l, r, &nu);
            }
        }
        out
    }
}

/// Finite free conformal algebra given by structure polynomials
/// `e_i ₍λ₎ e_j = Σ_k c_ij^k(λ,∂) e_k`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConformalAlgebra {
    basis: Vec<String>,
    product: BilinearMap,
}

impl ConformalAlgebra {
    pub fn new(basis: Vec<String>, product: BilinearMap) -> Result<Self> {
        let n = basis.len();
        if n == 0 {
            return Err(Error::ZeroRank);
        }
        if product.left_dim() != n || product.right_dim() != n || product.out_dim() != n {
            return Err(Error::RankMismatch(format!("product table must be {n}x{n}x{n}")));
        }
        if product.contains(Var::Mu) {
            return Err(Error::MuInEntry { what: "structure constants".into() });
        }
        Ok(ConformalAlgebra { basis, product })
    }

    /// Builds from `c[i][j][k]` with default basis names.
    pub fn from_structure(c: Vec<Vec<Vec<Poly>>>) -> Result<Self> {
        let n = c.len();
        let table = c
            .into_iter()
            .map(|row| row.into_iter().map(LambdaElement::new).collect())
            .collect();
        let product = BilinearMap::from_table(n, n, n, table)?;
        Self::new(default_names("e", n), product)
    }

    /// Current algebra of a scalar multiplication table `t[i][j][k]`.
    pub fn cur(table: &[Vec<Vec<Rational>>]) -> Result<Self> {
        let c = table
            .iter()
            .map(|row| row.iter().map(|v| v.iter().cloned().map(Poly::constant).collect()).collect())
            .collect();
        Self::from_structure(c)
    }

    /// `Cur₁`: one idempotent `e ∘ e = e`.
    pub fn cur1() -> Self {
        Self::cur(&[vec![vec![crate::poly::int(1)]]]).expect("rank 1")
    }

    /// Rank-`n` algebra with all products zero.
    pub fn trivial(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroRank);
        }
        Self::new(default_names("e", n), BilinearMap::zero(n, n, n))
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis
    }

    pub fn product(&self) -> &BilinearMap {
        &self.product
    }

    pub fn structure(&self, i: usize, j: usize) -> &LambdaElement {
        self.product.get(i, j)
    }

    pub fn e(&self, i: usize) -> LambdaElement {
        LambdaElement::basis(self.rank(), i)
    }

    pub fn lambda_product(&self, p: &LambdaElement, q: &LambdaElement, at: &ProductVariable) -> Result<LambdaElement> {
        if p.dim() != self.rank() || q.dim() != self.rank() {
            return Err(Error::RankMismatch(format!("arguments must have {} coordinates", self.rank())));
        }
        Ok(self.mul(p, q, at))
    }

    /// Unchecked form of [`ConformalAlgebra::lambda_product`].
    pub fn mul(&self, p: &LambdaElement, q: &LambdaElement, at: &ProductVariable) -> LambdaElement {
        self.product.apply(p, q, at)
    }

    /// `e_i ₍λ₎ (e_j ₍μ₎ e_k) - (e_i ₍λ₎ e_j) ₍λ+μ₎ e_k`.
    pub fn associator(&self, i: usize, j: usize, k: usize) -> LambdaElement {
        let (l, m, lm) = (ProductVariable::lambda(), ProductVariable::mu(), ProductVariable::lambda_plus_mu());
        let inner = self.mul(&self.e(j), &self.e(k), &m);
        let lhs = self.mul(&self.e(i), &inner, &l);
        let left = self.mul(&self.e(i), &self.e(j), &l);
        let rhs = self.mul(&left, &self.e(k), &lm);
        lhs - rhs
    }

    pub fn check_associativity(&self) -> Report {
        self.associativity_into("associativity", "ASSOC")
    }

    pub(crate) fn associativity_into(&self, check: &str, axiom: &str) -> Report {
        let n = self.rank();
        let triples: Vec<[usize; 3]> = (0..n)
            .flat_map(|i| (0..n).flat_map(move |j| (0..n).map(move |k| [i, j, k])))
            .collect();
        let residuals: Vec<LambdaElement> =
            triples.par_iter().map(|t| self.associator(t[0], t[1], t[2])).collect();
        let mut b = ReportBuilder::new(check);
        for (t, r) in triples.iter().zip(&residuals) {
            b.record(axiom, t, r);
        }
        b.finish()
    }

    /// Compares `e_i ₍λ₎ e_j` with `e_j ₍-λ-∂₎ e_i` on all pairs.
    pub fn check_commutativity(&self) -> Report {
        let n = self.rank();
        let opp = self.product.opposite();
        let mut b = ReportBuilder::new("commutativity");
        for i in 0..n {
            for j in 0..n {
                let r = self.product.get(i, j) - opp.get(i, j);
                b.record("COMM", &[i, j], &r);
            }
        }
        b.finish()
    }

    /// Block-diagonal sum; basis of `other` follows basis of `self`.
    pub fn direct_sum(&self, other: &ConformalAlgebra) -> ConformalAlgebra {
        let (n, m) = (self.rank(), other.rank());
        let mut product = BilinearMap::zero(n + m, n + m, n + m);
        for i in 0..n {
            for j in 0..n {
                product.set(i, j, self.structure(i, j).concat(&LambdaElement::zero(m)));
            }
        }
        for i in 0..m {
            for j in 0..m {
                product.set(n + i, n + j, LambdaElement::zero(n).concat(other.structure(i, j)));
            }
        }
        let mut basis = self.basis.clone();
        basis.extend(other.basis.iter().cloned());
        ConformalAlgebra { basis, product }
    }

    /// Same algebra with basis reordered: new basis vector `i` is old `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> ConformalAlgebra {
        let n = self.rank();
        assert_eq!(perm.len(), n);
        let mut inv = vec![0; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let mut product = BilinearMap::zero(n, n, n);
        for i in 0..n {
            for j in 0..n {
                let old = self.structure(perm[i], perm[j]);
                let mut coords = vec![Poly::zero(); n];
                for (k, c) in old.coords().iter().enumerate() {
                    coords[inv[k]] = c.clone();
                }
                product.set(i, j, LambdaElement::new(coords));
            }
        }
        let basis = perm.iter().map(|&o| self.basis[o].clone()).collect();
        ConformalAlgebra { basis, product }
    }
}

pub(crate) fn default_names(prefix: &str, n: usize) -> Vec<String> {
    if n == 1 {
        vec![prefix.to_string()]
    } else {
        (1..=n).map(|i| format!("{prefix}{i}")).collect()
    }
}
