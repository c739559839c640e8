//! Flag datums: extending structures by a free rank-1 module `Q = ℂ[∂]x`.
//!
//! A flag datum `(h, D, g, T, Q₀, P)` encodes
//! `a ⇀ x = h(a) x`, `a ↼ x = D(a)`, `x ◁ a = g(a) x`, `x ▷ a = T(a)`,
//! `x ∘ x = P x`, `f(x, x) = Q₀`. The maps `h` and `D` are left conformal
//! (`∂a ↦ -λ·value`), `g` and `T` are conformal (`∂a ↦ (λ+∂)·value`).

use rayon::prelude::*;

use crate::conformal::{BilinearMap, ConformalAlgebra, LambdaElement, ProductVariable};
use crate::error::{Error, Result};
use crate::extend::{DatumMap, ExtendingDatum};
use crate::poly::{int, LinearSubstitution, Poly, Rational, Var};
use crate::report::{Report, ReportBuilder};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FlagDatum {
    pub base: ConformalAlgebra,
    /// `h_λ(e_i, ∂)`
    pub h: Vec<Poly>,
    /// `D_λ(e_i)`
    pub d: Vec<LambdaElement>,
    /// `g_λ(e_i, ∂)`
    pub g: Vec<Poly>,
    /// `T_λ(e_i)`
    pub t: Vec<LambdaElement>,
    /// `Q₀(λ, ∂)`
    pub q0: LambdaElement,
    /// `P(λ, ∂)`
    pub p: Poly,
}

impl std::hash::Hash for ConformalAlgebra {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.basis_names().hash(state);
        for row in self.product().table() {
            row.hash(state);
        }
    }
}

impl FlagDatum {
    pub fn zero(base: ConformalAlgebra) -> Self {
        let n = base.rank();
        FlagDatum {
            h: vec![Poly::zero(); n],
            d: vec![LambdaElement::zero(n); n],
            g: vec![Poly::zero(); n],
            t: vec![LambdaElement::zero(n); n],
            q0: LambdaElement::zero(n),
            p: Poly::zero(),
            base,
        }
    }

    pub fn n(&self) -> usize {
        self.base.rank()
    }

    /// Checks ranks and that no entry mentions μ.
    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        let lens_ok = self.h.len() == n && self.g.len() == n && self.d.len() == n && self.t.len() == n;
        let dims_ok = self.d.iter().chain(&self.t).chain(std::iter::once(&self.q0)).all(|e| e.dim() == n);
        if !lens_ok || !dims_ok {
            return Err(Error::RankMismatch(format!("flag datum entries must match base rank {n}")));
        }
        let mu = self.h.iter().chain(&self.g).chain(std::iter::once(&self.p)).any(|p| p.contains(Var::Mu))
            || self.d.iter().chain(&self.t).chain(std::iter::once(&self.q0)).any(|e| e.contains(Var::Mu));
        if mu {
            return Err(Error::MuInEntry { what: "flag datum".into() });
        }
        Ok(())
    }

    /// `h_ν(a, ∂)` for an element `a` with ∂-dependent coordinates.
    pub fn h_at(&self, a: &LambdaElement, nu: &ProductVariable) -> Poly {
        left_scalar(&self.h, a, nu)
    }

    /// `g_ν(a, ∂)`.
    pub fn g_at(&self, a: &LambdaElement, nu: &ProductVariable) -> Poly {
        right_scalar(&self.g, a, nu)
    }

    /// `D_ν(a)`.
    pub fn d_at(&self, a: &LambdaElement, nu: &ProductVariable) -> LambdaElement {
        left_vector(&self.d, a, nu, self.n())
    }

    /// `T_ν(a)`.
    pub fn t_at(&self, a: &LambdaElement, nu: &ProductVariable) -> LambdaElement {
        right_vector(&self.t, a, nu, self.n())
    }
}

fn left_scalar(vals: &[Poly], a: &LambdaElement, nu: &ProductVariable) -> Poly {
    let mut out = Poly::zero();
    for (c, v) in a.coords().iter().zip(vals) {
        if !c.is_zero() && !v.is_zero() {
            out += &c.subst(nu.left_shift()) * &v.subst(nu.rename());
        }
    }
    out
}

fn right_scalar(vals: &[Poly], a: &LambdaElement, nu: &ProductVariable) -> Poly {
    let mut out = Poly::zero();
    for (c, v) in a.coords().iter().zip(vals) {
        if !c.is_zero() && !v.is_zero() {
            out += &c.subst(nu.right_shift()) * &v.subst(nu.rename());
        }
    }
    out
}

fn left_vector(vals: &[LambdaElement], a: &LambdaElement, nu: &ProductVariable, n: usize) -> LambdaElement {
    let mut out = LambdaElement::zero(n);
    for (c, v) in a.coords().iter().zip(vals) {
        if !c.is_zero() && !v.is_zero() {
            out += v.subst(nu.rename()).mul_poly(&c.subst(nu.left_shift()));
        }
    }
    out
}

fn right_vector(vals: &[LambdaElement], a: &LambdaElement, nu: &ProductVariable, n: usize) -> LambdaElement {
    let mut out = LambdaElement::zero(n);
    for (c, v) in a.coords().iter().zip(vals) {
        if !c.is_zero() && !v.is_zero() {
            out += v.subst(nu.rename()).mul_poly(&c.subst(nu.right_shift()));
        }
    }
    out
}

fn lam() -> Poly {
    Poly::lambda()
}
fn mu() -> Poly {
    Poly::mu()
}
fn del() -> Poly {
    Poly::partial()
}

/// Replaces the second argument `∂` of a scalar value, e.g. `h_μ(b, λ+∂)`.
fn at_second(p: &Poly, arg: Poly) -> Poly {
    p.subst(&LinearSubstitution::empty().with(Var::Partial, arg))
}

/// `P(first, second)`.
fn p_at(p: &Poly, first: Poly, second: Poly) -> Poly {
    p.subst(&LinearSubstitution::empty().with(Var::Lambda, first).with(Var::Partial, second))
}

/// `Q₀(first, ∂)`.
fn q_at(q: &LambdaElement, first: Poly) -> LambdaElement {
    q.subst(&LinearSubstitution::empty().with(Var::Lambda, first))
}

fn scalar(p: Poly) -> LambdaElement {
    LambdaElement::new(vec![p])
}

/// Number of basis arguments of identity `f{k}`.
fn arity(k: usize) -> usize {
    match k {
        1..=6 => 2,
        7..=12 => 1,
        _ => 0,
    }
}

/// Residual of `f{k}` on a basis tuple of `A`.
fn flag_identity(fd: &FlagDatum, k: usize, idx: &[usize]) -> LambdaElement {
    let a_alg = &fd.base;
    let (l, m, lm) = (ProductVariable::lambda(), ProductVariable::mu(), ProductVariable::lambda_plus_mu());
    let e = |i: usize| a_alg.e(i);
    let neg_lm = -(&lam() + &mu());
    let l_plus_d = &lam() + &del();
    match k {
        1 => {
            let (a, b) = (e(idx[0]), e(idx[1]));
            let lhs = fd.d_at(&a_alg.mul(&a, &b, &l), &lm);
            let rhs = a_alg.mul(&a, &fd.d_at(&b, &m), &l)
                + fd.d_at(&a, &l).mul_poly(&at_second(&fd.h_at(&b, &m), l_plus_d));
            lhs - rhs
        }
        2 => {
            let (a, b) = (e(idx[0]), e(idx[1]));
            let lhs = &at_second(&fd.h_at(&b, &m), l_plus_d) * &fd.h_at(&a, &l);
            scalar(lhs - fd.h_at(&a_alg.mul(&a, &b, &l), &lm))
        }
        3 => {
            let (a, b) = (e(idx[0]), e(idx[1]));
            let lhs = a_alg.mul(&a, &fd.t_at(&b, &m), &l)
                + fd.d_at(&a, &l).mul_poly(&at_second(&fd.g_at(&b, &m), l_plus_d));
            let rhs = a_alg.mul(&fd.d_at(&a, &l), &b, &lm)
                + fd.t_at(&b, &lm).mul_poly(&at_second(&fd.h_at(&a, &l), neg_lm));
            lhs - rhs
        }
        4 => {
            let (a, b) = (e(idx[0]), e(idx[1]));
            let lhs = &at_second(&fd.g_at(&b, &m), l_plus_d) * &fd.h_at(&a, &l);
            let rhs = &at_second(&fd.h_at(&a, &l), neg_lm) * &fd.g_at(&b, &lm);
            scalar(lhs - rhs)
        }
        5 => {
            let (a, b) = (e(idx[0]), e(idx[1]));
            let lhs = fd.t_at(&a_alg.mul(&a, &b, &m), &l);
            let rhs = a_alg.mul(&fd.t_at(&a, &l), &b, &lm)
                + fd.t_at(&b, &lm).mul_poly(&at_second(&fd.g_at(&a, &l), neg_lm));
            lhs - rhs
        }
        6 => {
            let (a, b) = (e(idx[0]), e(idx[1]));
            let lhs = fd.g_at(&a_alg.mul(&a, &b, &m), &l);
            let rhs = &at_second(&fd.g_at(&a, &l), neg_lm) * &fd.g_at(&b, &lm);
            scalar(lhs - rhs)
        }
        7 => {
            let a = e(idx[0]);
            let lhs = fd.d_at(&a, &l).mul_poly(&p_at(&fd.p, mu(), l_plus_d));
            let rhs = fd.d_at(&fd.d_at(&a, &l), &lm)
                + q_at(&fd.q0, &lam() + &mu()).mul_poly(&at_second(&fd.h_at(&a, &l), neg_lm))
                - a_alg.mul(&a, &q_at(&fd.q0, mu()), &l);
            lhs - rhs
        }
        8 => {
            let a = e(idx[0]);
            let lhs = &p_at(&fd.p, mu(), l_plus_d) * &fd.h_at(&a, &l);
            let rhs = &at_second(&fd.h_at(&a, &l), neg_lm) * &p_at(&fd.p, &lam() + &mu(), del())
                + fd.h_at(&fd.d_at(&a, &l), &lm);
            scalar(lhs - rhs)
        }
        9 => {
            let a = e(idx[0]);
            let lhs = fd.t_at(&fd.d_at(&a, &m), &l)
                + fd.q0.mul_poly(&at_second(&fd.h_at(&a, &m), l_plus_d));
            let rhs = fd.d_at(&fd.t_at(&a, &l), &lm)
                + q_at(&fd.q0, &lam() + &mu()).mul_poly(&at_second(&fd.g_at(&a, &l), neg_lm));
            lhs - rhs
        }
        10 => {
            let a = e(idx[0]);
            let lhs = fd.g_at(&fd.d_at(&a, &m), &l) + &at_second(&fd.h_at(&a, &m), l_plus_d) * &fd.p;
            let rhs = fd.h_at(&fd.t_at(&a, &l), &lm)
                + &at_second(&fd.g_at(&a, &l), neg_lm) * &p_at(&fd.p, &lam() + &mu(), del());
            scalar(lhs - rhs)
        }
        11 => {
            let a = e(idx[0]);
            let lhs = fd.t_at(&fd.t_at(&a, &m), &l)
                + fd.q0.mul_poly(&at_second(&fd.g_at(&a, &m), l_plus_d));
            let rhs = a_alg.mul(&fd.q0, &a, &lm) + fd.t_at(&a, &lm).mul_poly(&p_at(&fd.p, lam(), neg_lm));
            lhs - rhs
        }
        12 => {
            let a = e(idx[0]);
            let lhs = fd.g_at(&fd.t_at(&a, &m), &l) + &at_second(&fd.g_at(&a, &m), l_plus_d) * &fd.p;
            let rhs = &p_at(&fd.p, lam(), neg_lm) * &fd.g_at(&a, &lm);
            scalar(lhs - rhs)
        }
        13 => {
            let lhs = fd.t_at(&q_at(&fd.q0, mu()), &l) + fd.q0.mul_poly(&p_at(&fd.p, mu(), l_plus_d));
            let rhs = fd.d_at(&fd.q0, &lm)
                + q_at(&fd.q0, &lam() + &mu()).mul_poly(&p_at(&fd.p, lam(), neg_lm));
            lhs - rhs
        }
        14 => {
            let lhs = fd.g_at(&q_at(&fd.q0, mu()), &l) + &p_at(&fd.p, mu(), l_plus_d) * &fd.p;
            let rhs = fd.h_at(&fd.q0, &lm) + &p_at(&fd.p, lam(), neg_lm) * &p_at(&fd.p, &lam() + &mu(), del());
            scalar(lhs - rhs)
        }
        _ => unreachable!("flag identity index"),
    }
}

fn index_tuples(n: usize, arity: usize) -> Vec<Vec<usize>> {
    match arity {
        0 => vec![vec![]],
        1 => (0..n).map(|i| vec![i]).collect(),
        _ => (0..n).flat_map(|i| (0..n).map(move |j| vec![i, j])).collect(),
    }
}

/// True when `f{k}` holds on every basis tuple.
pub fn flag_identity_holds(fd: &FlagDatum, k: usize) -> bool {
    index_tuples(fd.n(), arity(k)).iter().all(|t| flag_identity(fd, k, t).is_zero())
}

/// Base associativity under id `BASE`, then f1–f14 on all basis tuples.
pub fn check_flag(fd: &FlagDatum) -> Report {
    let mut b = ReportBuilder::new("flag");
    if let Err(e) = fd.validate() {
        return Report::error("flag", e.to_string());
    }
    b.absorb("", &fd.base.associativity_into("base", "BASE"));
    let results: Vec<Vec<(Vec<usize>, LambdaElement)>> = (1..=14usize)
        .into_par_iter()
        .map(|k| {
            index_tuples(fd.n(), arity(k))
                .into_iter()
                .map(|t| {
                    let r = flag_identity(fd, k, &t);
                    (t, r)
                })
                .collect()
        })
        .collect();
    for (k, inst) in results.iter().enumerate() {
        let id = format!("f{}", k + 1);
        for (idx, r) in inst {
            b.record(&id, idx, r);
        }
    }
    b.finish()
}

pub fn flag_to_datum(fd: &FlagDatum) -> Result<ExtendingDatum> {
    fd.validate()?;
    let n = fd.n();
    let col = |vals: &[LambdaElement]| vals.iter().map(|v| vec![v.clone()]).collect::<Vec<_>>();
    let col_scalar = |vals: &[Poly]| vals.iter().map(|v| vec![scalar(v.clone())]).collect::<Vec<_>>();
    let row = |vals: Vec<Vec<LambdaElement>>| vec![vals.into_iter().map(|mut v| v.remove(0)).collect::<Vec<_>>()];
    let maps = [
        BilinearMap::from_table(n, 1, n, col(&fd.d))?,
        BilinearMap::from_table(n, 1, 1, col_scalar(&fd.h))?,
        BilinearMap::from_table(1, n, 1, row(col_scalar(&fd.g)))?,
        BilinearMap::from_table(1, n, n, row(col(&fd.t)))?,
        BilinearMap::from_table(1, 1, n, vec![vec![fd.q0.clone()]])?,
        BilinearMap::from_table(1, 1, 1, vec![vec![scalar(fd.p.clone())]])?,
    ];
    ExtendingDatum::new(fd.base.clone(), 1, maps)
}

pub fn datum_to_flag(d: &ExtendingDatum) -> Result<FlagDatum> {
    if d.q_rank() != 1 {
        return Err(Error::UnsupportedQRank(d.q_rank()));
    }
    let n = d.n();
    let first = |e: &LambdaElement| e.coord(0).clone();
    Ok(FlagDatum {
        base: d.base().clone(),
        h: (0..n).map(|i| first(d.map(DatumMap::Rharp).get(i, 0))).collect(),
        d: (0..n).map(|i| d.map(DatumMap::Lharp).get(i, 0).clone()).collect(),
        g: (0..n).map(|i| first(d.map(DatumMap::Ltri).get(0, i))).collect(),
        t: (0..n).map(|i| d.map(DatumMap::Rtri).get(0, i).clone()).collect(),
        q0: d.map(DatumMap::F).get(0, 0).clone(),
        p: first(d.map(DatumMap::Circ).get(0, 0)),
    })
}

/// The flag datum obtained from `fd_prime` by `(T₀, β)`: the datum `fd`
/// with `fd ≡ fd_prime` witnessed by `u(x) = T₀`, `v(x) = βx`.
pub fn flag_transform(fd_prime: &FlagDatum, t0: &LambdaElement, beta: &Rational) -> Result<FlagDatum> {
    use num_traits::Zero;
    if beta.is_zero() {
        return Err(Error::ZeroBeta);
    }
    fd_prime.validate()?;
    let a = &fd_prime.base;
    let n = fd_prime.n();
    if t0.dim() != n {
        return Err(Error::RankMismatch("T0 must be an element of A".into()));
    }
    let l = ProductVariable::lambda();
    let h = fd_prime.h.clone();
    let g = fd_prime.g.clone();
    let d = (0..n)
        .map(|i| a.mul(&a.e(i), t0, &l) + fd_prime.d[i].scale(beta) - t0.mul_poly(&h[i]))
        .collect();
    let t = (0..n)
        .map(|i| a.mul(t0, &a.e(i), &l) + fd_prime.t[i].scale(beta) - t0.mul_poly(&g[i]))
        .collect();
    let p = fd_prime.h_at(t0, &l) + fd_prime.g_at(t0, &l) + fd_prime.p.scale(beta);
    let q0 = a.mul(t0, t0, &l) + fd_prime.d_at(t0, &l).scale(beta) + fd_prime.t_at(t0, &l).scale(beta)
        + fd_prime.q0.scale(&(beta * beta))
        - t0.mul_poly(&p);
    Ok(FlagDatum { base: a.clone(), h, d, g, t, q0, p })
}

/// Compares `fd` against the image of `fd_prime` under `(T₀, β)`.
///
/// Ids: `h`, `g` (these must agree outright), then `D`, `T`, `P`, `Q0`.
pub fn flag_equiv(fd: &FlagDatum, fd_prime: &FlagDatum, t0: &LambdaElement, beta: &Rational) -> Result<Report> {
    let image = flag_transform(fd_prime, t0, beta)?;
    fd.validate()?;
    if fd.base != fd_prime.base {
        return Err(Error::Invalid("flag datums over different base algebras".into()));
    }
    let mut b = ReportBuilder::new("flag-equivalence");
    for i in 0..fd.n() {
        b.record("h", &[i], &scalar(&fd.h[i] - &fd_prime.h[i]));
    }
    for i in 0..fd.n() {
        b.record("g", &[i], &scalar(&fd.g[i] - &fd_prime.g[i]));
    }
    for i in 0..fd.n() {
        b.record("D", &[i], &(&fd.d[i] - &image.d[i]));
    }
    for i in 0..fd.n() {
        b.record("T", &[i], &(&fd.t[i] - &image.t[i]));
    }
    b.record("P", &[], &scalar(&fd.p - &image.p));
    b.record("Q0", &[], &(&fd.q0 - &image.q0));
    Ok(b.finish())
}

/// The two classification lists over rank-1 bases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FixtureSet {
    /// Over the trivial rank-1 algebra: five families.
    Hh2,
    /// Over `Cur₁`: seven families.
    Hh3,
}

impl FixtureSet {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hh2" => Some(FixtureSet::Hh2),
            "hh3" => Some(FixtureSet::Hh3),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FixtureSet::Hh2 => "hh2",
            FixtureSet::Hh3 => "hh3",
        }
    }

    pub fn base(self) -> ConformalAlgebra {
        match self {
            FixtureSet::Hh2 => ConformalAlgebra::trivial(1).expect("rank 1"),
            FixtureSet::Hh3 => ConformalAlgebra::cur1(),
        }
    }

    pub fn family_count(self) -> usize {
        match self {
            FixtureSet::Hh2 => 5,
            FixtureSet::Hh3 => 7,
        }
    }

    pub fn family_label(self, family: usize) -> String {
        format!("{}-({family})", self.name().to_ascii_uppercase())
    }
}

/// One member of a classification family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixture {
    pub set: FixtureSet,
    pub family: usize,
    /// Parameter value for parametric families.
    pub param: Option<String>,
    pub flag: FlagDatum,
}

impl Fixture {
    pub fn label(&self) -> String {
        let base = self.set.family_label(self.family);
        match &self.param {
            Some(p) => format!("{base}[{p}]"),
            None => base,
        }
    }
}

pub fn default_q_samples() -> Vec<Poly> {
    ["1", "L", "D", "L*D", "L+D"].iter().map(|s| Poly::parse(s).expect("sample")).collect()
}

pub fn default_c_samples() -> Vec<Rational> {
    vec![int(0), int(1), int(-1), int(2)]
}

pub fn default_p_samples() -> Vec<Poly> {
    ["0", "1", "L", "L^2-1"].iter().map(|s| Poly::parse(s).expect("sample")).collect()
}

/// Rank-1 flag datum `(h, D, g, T, Q₀, P)` with every A-valued slot a
/// polynomial multiple of `e`.
pub fn rank1_flag(base: ConformalAlgebra, v: [Poly; 6]) -> FlagDatum {
    assert_eq!(base.rank(), 1);
    let [h, d, g, t, q, p] = v;
    FlagDatum {
        base,
        h: vec![h],
        d: vec![scalar(d)],
        g: vec![g],
        t: vec![scalar(t)],
        q0: scalar(q),
        p,
    }
}

fn c(n: i64) -> Poly {
    Poly::int(n)
}

pub fn hh2_fixtures(q_samples: &[Poly]) -> Vec<Fixture> {
    let set = FixtureSet::Hh2;
    let base = set.base();
    let mut out: Vec<Fixture> = q_samples
        .iter()
        .map(|q| Fixture {
            set,
            family: 1,
            param: Some(q.to_string()),
            flag: rank1_flag(base.clone(), [c(0), c(0), c(0), c(0), q.clone(), c(0)]),
        })
        .collect();
    let plain = [
        (2, [c(0), c(0), c(0), c(0), c(0), c(1)]),
        (3, [c(0), c(0), c(0), c(1), c(0), c(1)]),
        (4, [c(0), c(1), c(0), c(0), c(0), c(1)]),
        (5, [c(0), c(1), c(0), c(1), c(0), c(1)]),
    ];
    for (family, v) in plain {
        out.push(Fixture { set, family, param: None, flag: rank1_flag(base.clone(), v) });
    }
    out
}

pub fn hh3_fixtures(c_samples: &[Rational]) -> Vec<Fixture> {
    let set = FixtureSet::Hh3;
    let base = set.base();
    let plain = [
        (1, [c(0), c(0), c(0), c(0), c(0), c(0)]),
        (2, [c(0), c(0), c(0), c(0), c(0), c(1)]),
        (3, [c(1), c(0), c(0), c(0), c(0), c(0)]),
        (4, [c(0), c(0), c(1), c(0), c(0), c(0)]),
        (5, [c(1), c(0), c(1), c(0), c(0), c(0)]),
        (6, [c(1), c(0), c(1), c(0), c(1), c(0)]),
    ];
    let mut out: Vec<Fixture> = plain
        .into_iter()
        .map(|(family, v)| Fixture { set, family, param: None, flag: rank1_flag(base.clone(), v) })
        .collect();
    for cv in c_samples {
        out.push(Fixture {
            set,
            family: 7,
            param: Some(crate::poly::fmt_rational(cv)),
            flag: rank1_flag(base.clone(), [c(1), c(0), c(1), c(0), Poly::constant(cv.clone()), c(1)]),
        });
    }
    out
}

/// Fixtures with the default parameter samples.
pub fn fixtures(which: FixtureSet) -> Vec<Fixture> {
    match which {
        FixtureSet::Hh2 => hh2_fixtures(&default_q_samples()),
        FixtureSet::Hh3 => hh3_fixtures(&default_c_samples()),
    }
}

/// `(0, Dᵖ, 0, Tᵖ, Qᵖ e, 1)` over `Cur₁` with `Dᵖ(e) = p(-λ-∂)e`,
/// `Tᵖ(e) = p(λ)e`, `Qᵖ = p(λ)p(-λ-∂) - p(-∂)`, together with
/// `T₀ = p(-∂)e` relating it to `(0,0,0,0,0,1)`.
pub fn hh3_shifted(p: &Poly) -> (FlagDatum, LambdaElement) {
    assert!(!p.contains(Var::Mu) && !p.contains(Var::Partial), "p must be a polynomial in L");
    let at = |x: Poly| p.subst(&LinearSubstitution::empty().with(Var::Lambda, x));
    let neg_ld = -(&lam() + &del());
    let dp = at(neg_ld.clone());
    let tp = p.clone();
    let qp = &(&tp * &dp) - &at(-del());
    let fd = rank1_flag(ConformalAlgebra::cur1(), [c(0), dp, c(0), tp, qp, c(1)]);
    (fd, scalar(at(-del())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extend::check_ace;
    use crate::poly::ratio;

    fn p(s: &str) -> Poly {
        Poly::parse(s).unwrap()
    }

    fn f6(base: ConformalAlgebra, v: [&str; 6]) -> FlagDatum {
        rank1_flag(base, v.map(p))
    }

    #[test]
    fn check_flag_examples() {
        let triv = ConformalAlgebra::trivial(1).unwrap();
        assert!(check_flag(&f6(triv, ["0", "0", "0", "0", "L*D + 3", "0"])).passed());
        for cv in ["0", "1", "-1", "2", "7/3"] {
            let fd = f6(ConformalAlgebra::cur1(), ["1", "0", "1", "0", cv, "1"]);
            assert!(check_flag(&fd).passed(), "c = {cv}");
        }
        // f9 forces Q0 = 0 for (h, g, T) = (1, 0, e); Q0 = e breaks it
        let bad = f6(ConformalAlgebra::cur1(), ["1", "0", "0", "1", "1", "1"]);
        let r = check_flag(&bad);
        assert!(r.fails("f9"), "{}", r.to_text());
    }

    #[test]
    fn right_zero_algebra_is_a_flag_datum() {
        // (h, D, g, T, Q0, P) = (1, 0, 0, e, 0, 1) gives a b = b on span{e, x}
        let fd = f6(ConformalAlgebra::cur1(), ["1", "0", "0", "1", "0", "1"]);
        assert!(check_flag(&fd).passed());
        let left = f6(ConformalAlgebra::cur1(), ["0", "1", "1", "0", "0", "1"]);
        assert!(check_flag(&left).passed());
        let e = crate::extend::build_unified(&flag_to_datum(&fd).unwrap());
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(e.algebra.structure(i, j), &LambdaElement::basis(2, j));
            }
        }
    }

    #[test]
    fn conversion_examples() {
        let z = FlagDatum::zero(ConformalAlgebra::cur1());
        let d = flag_to_datum(&z).unwrap();
        assert!(DatumMap::ALL.iter().all(|&k| d.is_zero_map(k)));
        let two = f6(ConformalAlgebra::cur1(), ["0", "0", "0", "0", "0", "1"]);
        let d = flag_to_datum(&two).unwrap();
        assert_eq!(d.map(DatumMap::Circ).get(0, 0), &scalar(c(1)));
        assert!(d.is_zero_map(DatumMap::F) && d.is_zero_map(DatumMap::Lharp));
        assert_eq!(datum_to_flag(&d).unwrap(), two);
        let wide = ExtendingDatum::zero(ConformalAlgebra::cur1(), 2).unwrap();
        assert_eq!(datum_to_flag(&wide).unwrap_err(), Error::UnsupportedQRank(2));
    }

    #[test]
    fn flag_and_ace_agree_on_examples() {
        let cases = [
            ["1", "0", "0", "1", "1", "1"],
            ["1", "0", "1", "0", "1", "0"],
            ["L", "D", "1", "L", "D", "1"],
            ["0", "L+D", "0", "L", "-L^2-L*D-D", "1"],
        ];
        for v in cases {
            let fd = f6(ConformalAlgebra::cur1(), v);
            let flag = check_flag(&fd);
            let ace = check_ace(&flag_to_datum(&fd).unwrap());
            assert_eq!(flag.passed(), ace.passed(), "{v:?}");
            let fl: Vec<String> = flag.failing_axioms().iter().map(|a| a.trim_start_matches('f').to_string()).collect();
            let ac: Vec<String> =
                ace.failing_axioms().iter().map(|a| a.trim_start_matches("ACE").to_string()).collect();
            assert_eq!(fl, ac, "{v:?}");
        }
    }

    #[test]
    fn flag_equiv_examples() {
        let cur = ConformalAlgebra::cur1();
        let fd = f6(cur.clone(), ["1", "0", "1", "0", "2", "1"]);
        assert!(flag_equiv(&fd, &fd, &LambdaElement::zero(1), &int(1)).unwrap().passed());
        let triv = ConformalAlgebra::trivial(1).unwrap();
        let q = f6(triv.clone(), ["0", "0", "0", "0", "L+D", "0"]);
        let q4 = f6(triv, ["0", "0", "0", "0", "4*L+4*D", "0"]);
        assert!(flag_equiv(&q4, &q, &LambdaElement::zero(1), &int(2)).unwrap().passed());
        assert!(flag_equiv(&q4, &q, &LambdaElement::zero(1), &int(-2)).unwrap().passed());
        assert!(!flag_equiv(&q4, &q, &LambdaElement::zero(1), &int(4)).unwrap().passed());
        assert_eq!(flag_equiv(&q4, &q, &LambdaElement::zero(1), &int(0)).unwrap_err(), Error::ZeroBeta);
        let two = f6(cur, ["0", "0", "0", "0", "0", "1"]);
        for ps in default_p_samples() {
            let (fd, t0) = hh3_shifted(&ps);
            assert!(check_flag(&fd).passed());
            assert!(flag_equiv(&fd, &two, &t0, &int(1)).unwrap().passed(), "p = {ps}");
        }
    }

    #[test]
    fn hh3_six_is_seven_at_c_zero() {
        // (6) is obtained from (7) with c = 0 by T0 = -e, β = 2
        let six = &fixtures(FixtureSet::Hh3)[5].flag;
        let seven0 = f6(ConformalAlgebra::cur1(), ["1", "0", "1", "0", "0", "1"]);
        let t0 = scalar(c(-1));
        assert!(flag_equiv(six, &seven0, &t0, &int(2)).unwrap().passed());
        assert!(flag_equiv(&seven0, six, &scalar(Poly::constant(ratio(1, 2))), &ratio(1, 2)).unwrap().passed());
    }

    #[test]
    fn fixtures_pass() {
        assert_eq!(fixtures(FixtureSet::Hh2).iter().map(|f| f.family).max(), Some(5));
        assert_eq!(fixtures(FixtureSet::Hh3).iter().map(|f| f.family).max(), Some(7));
        for f in fixtures(FixtureSet::Hh2).into_iter().chain(fixtures(FixtureSet::Hh3)) {
            assert!(check_flag(&f.flag).passed(), "{}", f.label());
        }
    }
}
