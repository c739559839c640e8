//! Extending datums, unified products and their axiom checkers.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conformal::{default_names, BilinearMap, ConformalAlgebra, LambdaElement, ProductVariable};
use crate::error::{Error, Result};
use crate::poly::{Poly, Var};
use crate::repchecks::bimodule_into;
use crate::report::{Report, ReportBuilder};

/// The six maps of an extending datum, in storage order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DatumMap {
    /// `↼ : A × Q → A`
    Lharp,
    /// `⇀ : A × Q → Q`
    Rharp,
    /// `◁ : Q × A → Q`
    Ltri,
    /// `▷ : Q × A → A`
    Rtri,
    /// `f : Q × Q → A`
    F,
    /// `∘ : Q × Q → Q`
    Circ,
}

impl DatumMap {
    pub const ALL: [DatumMap; 6] =
        [DatumMap::Lharp, DatumMap::Rharp, DatumMap::Ltri, DatumMap::Rtri, DatumMap::F, DatumMap::Circ];

    pub fn name(self) -> &'static str {
        match self {
            DatumMap::Lharp => "lharp",
            DatumMap::Rharp => "rharp",
            DatumMap::Ltri => "ltri",
            DatumMap::Rtri => "rtri",
            DatumMap::F => "f",
            DatumMap::Circ => "circ",
        }
    }

    /// `(left, right, out)` dimensions for base rank `n` and Q rank `m`.
    pub fn dims(self, n: usize, m: usize) -> (usize, usize, usize) {
        match self {
            DatumMap::Lharp => (n, m, n),
            DatumMap::Rharp => (n, m, m),
            DatumMap::Ltri => (m, n, m),
            DatumMap::Rtri => (m, n, n),
            DatumMap::F => (m, m, n),
            DatumMap::Circ => (m, m, m),
        }
    }
}

/// `Ω(A, Q) = (↼, ⇀, ◁, ▷, f, ∘)` for a free `Q` of rank `q_rank`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendingDatum {
    base: ConformalAlgebra,
    q_rank: usize,
    maps: [BilinearMap; 6],
}

impl ExtendingDatum {
    pub fn zero(base: ConformalAlgebra, q_rank: usize) -> Result<Self> {
        if q_rank == 0 {
            return Err(Error::ZeroRank);
        }
        let n = base.rank();
        let maps = DatumMap::ALL.map(|k| {
            let (l, r, o) = k.dims(n, q_rank);
            BilinearMap::zero(l, r, o)
        });
        Ok(ExtendingDatum { base, q_rank, maps })
    }

    /// Maps in [`DatumMap::ALL`] order.
    pub fn new(base: ConformalAlgebra, q_rank: usize, maps: [BilinearMap; 6]) -> Result<Self> {
        let mut d = Self::zero(base, q_rank)?;
        for (k, m) in DatumMap::ALL.into_iter().zip(maps) {
            d.set(k, m)?;
        }
        Ok(d)
    }

    pub fn base(&self) -> &ConformalAlgebra {
        &self.base
    }

    pub fn n(&self) -> usize {
        self.base.rank()
    }

    pub fn q_rank(&self) -> usize {
        self.q_rank
    }

    pub fn map(&self, k: DatumMap) -> &BilinearMap {
        &self.maps[k as usize]
    }

    pub fn set(&mut self, k: DatumMap, m: BilinearMap) -> Result<()> {
        let want = k.dims(self.n(), self.q_rank);
        if (m.left_dim(), m.right_dim(), m.out_dim()) != want {
            return Err(Error::RankMismatch(format!("{} must have dimensions {:?}", k.name(), want)));
        }
        if m.contains(Var::Mu) {
            return Err(Error::MuInEntry { what: k.name().into() });
        }
        self.maps[k as usize] = m;
        Ok(())
    }

    /// Sets one basis value, e.g. `x_s ▷ e_i` for `(Rtri, s, i)`.
    pub fn set_value(&mut self, k: DatumMap, l: usize, r: usize, value: LambdaElement) -> Result<()> {
        let (_, _, out) = k.dims(self.n(), self.q_rank);
        if value.dim() != out || value.contains(Var::Mu) {
            return Err(Error::Invalid(format!("bad value for {}", k.name())));
        }
        self.maps[k as usize].set(l, r, value);
        Ok(())
    }

    pub fn is_zero_map(&self, k: DatumMap) -> bool {
        self.map(k).is_zero()
    }

    fn ctx(&self) -> Ctx<'_> {
        Ctx { d: self }
    }
}

/// An algebra on `A ⊕ Q` with the first `split` basis vectors spanning `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitAlgebra {
    pub algebra: ConformalAlgebra,
    pub split: usize,
}

impl SplitAlgebra {
    pub fn new(algebra: ConformalAlgebra, split: usize) -> Result<Self> {
        if split == 0 || split >= algebra.rank() {
            return Err(Error::Invalid(format!(
                "split must satisfy 0 < split < rank ({})",
                algebra.rank()
            )));
        }
        Ok(SplitAlgebra { algebra, split })
    }
}

/// The unified product on `A ⊕ Q`.
pub fn build_unified(d: &ExtendingDatum) -> SplitAlgebra {
    let (n, m) = (d.n(), d.q_rank());
    let mut p = BilinearMap::zero(n + m, n + m, n + m);
    let zq = LambdaElement::zero(m);
    for i in 0..n {
        for j in 0..n {
            p.set(i, j, d.base.structure(i, j).concat(&zq));
        }
        for s in 0..m {
            p.set(i, n + s, d.map(DatumMap::Lharp).get(i, s).concat(d.map(DatumMap::Rharp).get(i, s)));
            p.set(n + s, i, d.map(DatumMap::Rtri).get(s, i).concat(d.map(DatumMap::Ltri).get(s, i)));
        }
    }
    for s in 0..m {
        for t in 0..m {
            p.set(n + s, n + t, d.map(DatumMap::F).get(s, t).concat(d.map(DatumMap::Circ).get(s, t)));
        }
    }
    let mut names = d.base.basis_names().to_vec();
    names.extend(default_names("x", m));
    SplitAlgebra {
        algebra: ConformalAlgebra::new(names, p).expect("consistent unified product"),
        split: n,
    }
}

/// Projects every block product of `e` onto `A` and `Q`.
pub fn extract_datum(e: &SplitAlgebra) -> Result<ExtendingDatum> {
    let n = e.split;
    let total = e.algebra.rank();
    if n == 0 || n >= total {
        return Err(Error::Invalid("split must leave both blocks nonempty".into()));
    }
    let m = total - n;
    let s = |v: &LambdaElement| (v.slice(0, n), v.slice(n, total));
    let mut base = vec![vec![Vec::new(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let (a, q) = s(e.algebra.structure(i, j));
            if !q.is_zero() {
                return Err(Error::NotClosed(format!(
                    "{} * {} has Q-part {q}",
                    e.algebra.basis_names()[i],
                    e.algebra.basis_names()[j]
                )));
            }
            base[i][j] = a.into_coords();
        }
    }
    let names = e.algebra.basis_names()[..n].to_vec();
    let table = base
        .into_iter()
        .map(|row| row.into_iter().map(LambdaElement::new).collect())
        .collect();
    let base = ConformalAlgebra::new(names, BilinearMap::from_table(n, n, n, table)?)?;
    let mut d = ExtendingDatum::zero(base, m)?;
    for i in 0..n {
        for t in 0..m {
            let (a, q) = s(e.algebra.structure(i, n + t));
            d.maps[DatumMap::Lharp as usize].set(i, t, a);
            d.maps[DatumMap::Rharp as usize].set(i, t, q);
            let (a, q) = s(e.algebra.structure(n + t, i));
            d.maps[DatumMap::Rtri as usize].set(t, i, a);
            d.maps[DatumMap::Ltri as usize].set(t, i, q);
        }
    }
    for x in 0..m {
        for y in 0..m {
            let (a, q) = s(e.algebra.structure(n + x, n + y));
            d.maps[DatumMap::F as usize].set(x, y, a);
            d.maps[DatumMap::Circ as usize].set(x, y, q);
        }
    }
    Ok(d)
}

/// Shorthand evaluation of the seven products of a datum.
struct Ctx<'a> {
    d: &'a ExtendingDatum,
}

impl Ctx<'_> {
    fn ea(&self, i: usize) -> LambdaElement {
        LambdaElement::basis(self.d.n(), i)
    }
    fn eq(&self, s: usize) -> LambdaElement {
        LambdaElement::basis(self.d.q_rank(), s)
    }
    fn ap(&self, a: &LambdaElement, b: &LambdaElement, nu: &ProductVariable) -> LambdaElement {
        self.d.base.mul(a, b, nu)
    }
    fn lh(&self, a: &LambdaElement, x: &LambdaElement, nu: &ProductVariable) -> LambdaElement {
        self.d.map(DatumMap::Lharp).apply(a, x, nu)
    }
    fn rh(&self, a: &LambdaElement, x: &LambdaElement, nu: &ProductVariable) -> LambdaElement {
        self.d.map(DatumMap::Rharp).apply(a, x, nu)
    }
    fn lt(&self, x: &LambdaElement, a: &LambdaElement, nu: &ProductVariable) -> LambdaElement {
        self.d.map(DatumMap::Ltri).apply(x, a, nu)
    }
    fn rt(&self, x: &LambdaElement, a: &LambdaElement, nu: &ProductVariable) -> LambdaElement {
        self.d.map(DatumMap::Rtri).apply(x, a, nu)
    }
    fn f(&self, x: &LambdaElement, y: &LambdaElement, nu: &ProductVariable) -> LambdaElement {
        self.d.map(DatumMap::F).apply(x, y, nu)
    }
    fn ci(&self, x: &LambdaElement, y: &LambdaElement, nu: &ProductVariable) -> LambdaElement {
        self.d.map(DatumMap::Circ).apply(x, y, nu)
    }

    fn q_algebra(&self) -> ConformalAlgebra {
        ConformalAlgebra::new(default_names("x", self.d.q_rank()), self.d.map(DatumMap::Circ).clone())
            .expect("circ is a product table on Q")
    }
}

/// Which blocks an identity's three arguments come from.
#[derive(Clone, Copy)]
enum Slot {
    A,
    Q,
}

type Instances = Vec<(Vec<usize>, LambdaElement)>;

fn tuples(d: &ExtendingDatum, slots: [Slot; 3]) -> Vec<[usize; 3]> {
    let size = |s: Slot| match s {
        Slot::A => d.n(),
        Slot::Q => d.q_rank(),
    };
    let (p, q, r) = (size(slots[0]), size(slots[1]), size(slots[2]));
    (0..p)
        .flat_map(|i| (0..q).flat_map(move |j| (0..r).map(move |k| [i, j, k])))
        .collect()
}

fn vars() -> (ProductVariable, ProductVariable, ProductVariable) {
    (ProductVariable::lambda(), ProductVariable::mu(), ProductVariable::lambda_plus_mu())
}

/// Residual `lhs - rhs` of ACE`k` on one basis triple.
fn ace(c: &Ctx<'_>, k: usize, t: [usize; 3]) -> LambdaElement {
    let (l, m, lm) = vars();
    match k {
        1 => {
            let (a, b, x) = (c.ea(t[0]), c.ea(t[1]), c.eq(t[2]));
            let lhs = c.lh(&c.ap(&a, &b, &l), &x, &lm);
            let rhs = c.ap(&a, &c.lh(&b, &x, &m), &l) + c.lh(&a, &c.rh(&b, &x, &m), &l);
            lhs - rhs
        }
        2 => {
            let (a, b, x) = (c.ea(t[0]), c.ea(t[1]), c.eq(t[2]));
            c.rh(&a, &c.rh(&b, &x, &m), &l) - c.rh(&c.ap(&a, &b, &l), &x, &lm)
        }
        3 => {
            let (a, x, b) = (c.ea(t[0]), c.eq(t[1]), c.ea(t[2]));
            let lhs = c.ap(&a, &c.rt(&x, &b, &m), &l) + c.lh(&a, &c.lt(&x, &b, &m), &l);
            let rhs = c.ap(&c.lh(&a, &x, &l), &b, &lm) + c.rt(&c.rh(&a, &x, &l), &b, &lm);
            lhs - rhs
        }
        4 => {
            let (a, x, b) = (c.ea(t[0]), c.eq(t[1]), c.ea(t[2]));
            c.rh(&a, &c.lt(&x, &b, &m), &l) - c.lt(&c.rh(&a, &x, &l), &b, &lm)
        }
        5 => {
            let (x, a, b) = (c.eq(t[0]), c.ea(t[1]), c.ea(t[2]));
            let lhs = c.rt(&x, &c.ap(&a, &b, &m), &l);
            let rhs = c.ap(&c.rt(&x, &a, &l), &b, &lm) + c.rt(&c.lt(&x, &a, &l), &b, &lm);
            lhs - rhs
        }
        6 => {
            let (x, a, b) = (c.eq(t[0]), c.ea(t[1]), c.ea(t[2]));
            c.lt(&x, &c.ap(&a, &b, &m), &l) - c.lt(&c.lt(&x, &a, &l), &b, &lm)
        }
        7 => {
            let (a, x, y) = (c.ea(t[0]), c.eq(t[1]), c.eq(t[2]));
            let lhs = c.lh(&a, &c.ci(&x, &y, &m), &l);
            let rhs = c.lh(&c.lh(&a, &x, &l), &y, &lm) + c.f(&c.rh(&a, &x, &l), &y, &lm)
                - c.ap(&a, &c.f(&x, &y, &m), &l);
            lhs - rhs
        }
        8 => {
            let (a, x, y) = (c.ea(t[0]), c.eq(t[1]), c.eq(t[2]));
            let lhs = c.rh(&a, &c.ci(&x, &y, &m), &l);
            let rhs = c.ci(&c.rh(&a, &x, &l), &y, &lm) + c.rh(&c.lh(&a, &x, &l), &y, &lm);
            lhs - rhs
        }
        9 => {
            let (x, a, y) = (c.eq(t[0]), c.ea(t[1]), c.eq(t[2]));
            let lhs = c.rt(&x, &c.lh(&a, &y, &m), &l) + c.f(&x, &c.rh(&a, &y, &m), &l);
            let rhs = c.lh(&c.rt(&x, &a, &l), &y, &lm) + c.f(&c.lt(&x, &a, &l), &y, &lm);
            lhs - rhs
        }
        10 => {
            let (x, a, y) = (c.eq(t[0]), c.ea(t[1]), c.eq(t[2]));
            let lhs = c.lt(&x, &c.lh(&a, &y, &m), &l) + c.ci(&x, &c.rh(&a, &y, &m), &l);
            let rhs = c.rh(&c.rt(&x, &a, &l), &y, &lm) + c.ci(&c.lt(&x, &a, &l), &y, &lm);
            lhs - rhs
        }
        11 => {
            let (x, y, a) = (c.eq(t[0]), c.eq(t[1]), c.ea(t[2]));
            let lhs = c.rt(&x, &c.rt(&y, &a, &m), &l) + c.f(&x, &c.lt(&y, &a, &m), &l);
            let rhs = c.ap(&c.f(&x, &y, &l), &a, &lm) + c.rt(&c.ci(&x, &y, &l), &a, &lm);
            lhs - rhs
        }
        12 => {
            let (x, y, a) = (c.eq(t[0]), c.eq(t[1]), c.ea(t[2]));
            let lhs = c.lt(&x, &c.rt(&y, &a, &m), &l) + c.ci(&x, &c.lt(&y, &a, &m), &l);
            lhs - c.lt(&c.ci(&x, &y, &l), &a, &lm)
        }
        13 => {
            let (x, y, z) = (c.eq(t[0]), c.eq(t[1]), c.eq(t[2]));
            let lhs = c.rt(&x, &c.f(&y, &z, &m), &l) + c.f(&x, &c.ci(&y, &z, &m), &l);
            let rhs = c.lh(&c.f(&x, &y, &l), &z, &lm) + c.f(&c.ci(&x, &y, &l), &z, &lm);
            lhs - rhs
        }
        14 => {
            let (x, y, z) = (c.eq(t[0]), c.eq(t[1]), c.eq(t[2]));
            let lhs = c.lt(&x, &c.f(&y, &z, &m), &l) + c.ci(&x, &c.ci(&y, &z, &m), &l);
            let rhs = c.rh(&c.f(&x, &y, &l), &z, &lm) + c.ci(&c.ci(&x, &y, &l), &z, &lm);
            lhs - rhs
        }
        _ => unreachable!("ACE index"),
    }
}

fn ace_slots(k: usize) -> [Slot; 3] {
    use Slot::*;
    match k {
        1 | 2 => [A, A, Q],
        3 | 4 => [A, Q, A],
        5 | 6 => [Q, A, A],
        7 | 8 => [A, Q, Q],
        9 | 10 => [Q, A, Q],
        11 | 12 => [Q, Q, A],
        _ => [Q, Q, Q],
    }
}

fn ace_instances(d: &ExtendingDatum, k: usize) -> Instances {
    let c = d.ctx();
    tuples(d, ace_slots(k)).into_iter().map(|t| (t.to_vec(), ace(&c, k, t))).collect()
}

/// Base associativity under id `BASE`, then ACE1–ACE14 on all basis triples.
pub fn check_ace(d: &ExtendingDatum) -> Report {
    let mut b = ReportBuilder::new("ace");
    let base = d.base.associativity_into("base", "BASE");
    b.absorb("", &base);
    let results: Vec<Instances> = (1..=14usize).into_par_iter().map(|k| ace_instances(d, k)).collect();
    for (k, inst) in results.iter().enumerate() {
        let id = format!("ACE{}", k + 1);
        for (idx, r) in inst {
            b.record(&id, idx, r);
        }
    }
    b.finish()
}

/// Special unified-product shapes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SpecialKind {
    /// `↼` and `▷` vanish.
    CocycleSemidirect,
    /// `↼`, `▷` and `f` vanish.
    SemidirectSum,
    /// `⇀` and `◁` vanish.
    Crossed,
    /// `f` vanishes.
    Bicrossed,
}

impl SpecialKind {
    pub const ALL: [SpecialKind; 4] =
        [SpecialKind::CocycleSemidirect, SpecialKind::SemidirectSum, SpecialKind::Crossed, SpecialKind::Bicrossed];

    pub fn name(self) -> &'static str {
        match self {
            SpecialKind::CocycleSemidirect => "COCYCLE_SEMIDIRECT",
            SpecialKind::SemidirectSum => "SEMIDIRECT_SUM",
            SpecialKind::Crossed => "CROSSED",
            SpecialKind::Bicrossed => "BICROSSED",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        let norm = s.to_ascii_uppercase().replace('-', "_");
        Self::ALL.into_iter().find(|k| k.name() == norm)
    }

    /// Maps required to vanish.
    pub fn trivial_maps(self) -> &'static [DatumMap] {
        match self {
            SpecialKind::CocycleSemidirect => &[DatumMap::Lharp, DatumMap::Rtri],
            SpecialKind::SemidirectSum => &[DatumMap::Lharp, DatumMap::Rtri, DatumMap::F],
            SpecialKind::Crossed => &[DatumMap::Rharp, DatumMap::Ltri],
            SpecialKind::Bicrossed => &[DatumMap::F],
        }
    }

    /// True when `d` has the required shape.
    pub fn fits(self, d: &ExtendingDatum) -> bool {
        self.trivial_maps().iter().all(|&k| d.is_zero_map(k))
    }
}

/// Residual of the `k`-th listed condition of a special kind.
fn special_condition(c: &Ctx<'_>, kind: SpecialKind, k: usize, t: [usize; 3]) -> LambdaElement {
    let (l, m, lm) = vars();
    use SpecialKind::*;
    match (kind, k) {
        (CocycleSemidirect, 1) => {
            let (a, x, y) = (c.ea(t[0]), c.eq(t[1]), c.eq(t[2]));
            c.f(&c.rh(&a, &x, &l), &y, &lm) - c.ap(&a, &c.f(&x, &y, &m), &l)
        }
        (CocycleSemidirect, 2) | (SemidirectSum, 1) => {
            let (a, x, y) = (c.ea(t[0]), c.eq(t[1]), c.eq(t[2]));
            c.rh(&a, &c.ci(&x, &y, &m), &l) - c.ci(&c.rh(&a, &x, &l), &y, &lm)
        }
        (CocycleSemidirect, 3) => {
            let (x, a, y) = (c.eq(t[0]), c.ea(t[1]), c.eq(t[2]));
            c.f(&x, &c.rh(&a, &y, &m), &l) - c.f(&c.lt(&x, &a, &l), &y, &lm)
        }
        (CocycleSemidirect, 4) | (SemidirectSum, 2) => {
            let (x, a, y) = (c.eq(t[0]), c.ea(t[1]), c.eq(t[2]));
            c.ci(&x, &c.rh(&a, &y, &m), &l) - c.ci(&c.lt(&x, &a, &l), &y, &lm)
        }
        (CocycleSemidirect, 5) => {
            let (x, y, a) = (c.eq(t[0]), c.eq(t[1]), c.ea(t[2]));
            c.f(&x, &c.lt(&y, &a, &m), &l) - c.ap(&c.f(&x, &y, &l), &a, &lm)
        }
        (CocycleSemidirect, 6) | (SemidirectSum, 3) => {
            let (x, y, a) = (c.eq(t[0]), c.eq(t[1]), c.ea(t[2]));
            c.ci(&x, &c.lt(&y, &a, &m), &l) - c.lt(&c.ci(&x, &y, &l), &a, &lm)
        }
        (CocycleSemidirect, 7) => {
            let (x, y, z) = (c.eq(t[0]), c.eq(t[1]), c.eq(t[2]));
            c.f(&x, &c.ci(&y, &z, &m), &l) - c.f(&c.ci(&x, &y, &l), &z, &lm)
        }
        (Crossed, 1) => {
            let (a, b, x) = (c.ea(t[0]), c.ea(t[1]), c.eq(t[2]));
            c.lh(&c.ap(&a, &b, &l), &x, &lm) - c.ap(&a, &c.lh(&b, &x, &m), &l)
        }
        (Crossed, 2) => {
            let (a, x, b) = (c.ea(t[0]), c.eq(t[1]), c.ea(t[2]));
            c.ap(&a, &c.rt(&x, &b, &m), &l) - c.ap(&c.lh(&a, &x, &l), &b, &lm)
        }
        (Crossed, 3) => {
            let (x, a, b) = (c.eq(t[0]), c.ea(t[1]), c.ea(t[2]));
            c.rt(&x, &c.ap(&a, &b, &m), &l) - c.ap(&c.rt(&x, &a, &l), &b, &lm)
        }
        (Crossed, 4) => {
            let (a, x, y) = (c.ea(t[0]), c.eq(t[1]), c.eq(t[2]));
            let lhs = c.lh(&a, &c.ci(&x, &y, &m), &l);
            lhs - (c.lh(&c.lh(&a, &x, &l), &y, &lm) - c.ap(&a, &c.f(&x, &y, &m), &l))
        }
        (Crossed, 5) => {
            let (x, a, y) = (c.eq(t[0]), c.ea(t[1]), c.eq(t[2]));
            c.rt(&x, &c.lh(&a, &y, &m), &l) - c.lh(&c.rt(&x, &a, &l), &y, &lm)
        }
        (Crossed, 6) => {
            let (x, y, a) = (c.eq(t[0]), c.eq(t[1]), c.ea(t[2]));
            let rhs = c.ap(&c.f(&x, &y, &l), &a, &lm) + c.rt(&c.ci(&x, &y, &l), &a, &lm);
            c.rt(&x, &c.rt(&y, &a, &m), &l) - rhs
        }
        (Crossed, 7) => ace(c, 13, t),
        (Bicrossed, 1) => ace(c, 1, t),
        (Bicrossed, 2) => ace(c, 3, t),
        (Bicrossed, 3) => ace(c, 5, t),
        (Bicrossed, 4) => ace(c, 8, t),
        (Bicrossed, 5) => ace(c, 10, t),
        (Bicrossed, 6) => ace(c, 12, t),
        _ => unreachable!("special condition index"),
    }
}

fn special_slots(kind: SpecialKind, k: usize) -> [Slot; 3] {
    use Slot::*;
    use SpecialKind::*;
    match (kind, k) {
        (CocycleSemidirect, 1 | 2) | (SemidirectSum, 1) | (Crossed, 4) => [A, Q, Q],
        (CocycleSemidirect, 3 | 4) | (SemidirectSum, 2) | (Crossed, 5) => [Q, A, Q],
        (CocycleSemidirect, 5 | 6) | (SemidirectSum, 3) | (Crossed, 6) => [Q, Q, A],
        (CocycleSemidirect, 7) | (Crossed, 7) => [Q, Q, Q],
        (Crossed, 1) => [A, A, Q],
        (Crossed, 2) => [A, Q, A],
        (Crossed, 3) => [Q, A, A],
        (Bicrossed, k) => ace_slots([1, 3, 5, 8, 10, 12][k - 1]),
        _ => unreachable!("special condition index"),
    }
}

fn special_count(kind: SpecialKind) -> usize {
    match kind {
        SpecialKind::CocycleSemidirect | SpecialKind::Crossed => 7,
        SpecialKind::SemidirectSum => 3,
        SpecialKind::Bicrossed => 6,
    }
}

fn special_prefix(kind: SpecialKind) -> &'static str {
    match kind {
        SpecialKind::CocycleSemidirect => "CS",
        SpecialKind::SemidirectSum => "SS",
        SpecialKind::Crossed => "CP",
        SpecialKind::Bicrossed => "BC",
    }
}

/// Verifies the condition list attached to a special shape.
///
/// Ids: `BASE` (associativity of A), `Q/LM2`, `Q/RM2`, `Q/BIMOD` (Q as an
/// A-bimodule), `Q/ASSOC` (associativity of `(Q, ∘)`), `A/LM2`, `A/RM2`,
/// `A/BIMOD` (A as a Q-bimodule via `▷` and `↼`), `ACE14`, and the listed
/// compatibility conditions `CS1..7`, `SS1..3`, `CP1..7`, `BC1..6`.
pub fn check_special(d: &ExtendingDatum, kind: SpecialKind) -> Result<Report> {
    for &k in kind.trivial_maps() {
        if !d.is_zero_map(k) {
            return Err(Error::Shape { kind: kind.name().into(), map: k.name().into() });
        }
    }
    let c = d.ctx();
    let mut b = ReportBuilder::new(format!("special {}", kind.name()));
    b.absorb("", &d.base.associativity_into("base", "BASE"));
    let q_bimodule = |b: &mut ReportBuilder| {
        bimodule_into(&d.base, d.map(DatumMap::Rharp), d.map(DatumMap::Ltri), b, "Q/");
    };
    let q_assoc = |b: &mut ReportBuilder| b.absorb("", &c.q_algebra().associativity_into("q", "Q/ASSOC"));
    match kind {
        SpecialKind::CocycleSemidirect => {
            q_bimodule(&mut b);
            for t in tuples(d, [Slot::Q, Slot::Q, Slot::Q]) {
                b.record("ACE14", &t, &ace(&c, 14, t));
            }
        }
        SpecialKind::SemidirectSum => {
            q_bimodule(&mut b);
            q_assoc(&mut b);
        }
        SpecialKind::Crossed => q_assoc(&mut b),
        SpecialKind::Bicrossed => {
            q_assoc(&mut b);
            q_bimodule(&mut b);
            bimodule_into(&c.q_algebra(), d.map(DatumMap::Rtri), d.map(DatumMap::Lharp), &mut b, "A/");
        }
    }
    let prefix = special_prefix(kind);
    let results: Vec<Instances> = (1..=special_count(kind))
        .into_par_iter()
        .map(|k| {
            tuples(d, special_slots(kind, k))
                .into_iter()
                .map(|t| (t.to_vec(), special_condition(&c, kind, k, t)))
                .collect()
        })
        .collect();
    for (k, inst) in results.iter().enumerate() {
        let id = format!("{prefix}{}", k + 1);
        for (idx, r) in inst {
            b.record(&id, idx, r);
        }
    }
    Ok(b.finish())
}

/// `(◁, ▷, f, ∘)` over a commutative base; `↼` and `⇀` are determined by
/// `a ↼₍λ₎ x = x ▷₍-λ-∂₎ a` and `a ⇀₍λ₎ x = x ◁₍-λ-∂₎ a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedDatum {
    base: ConformalAlgebra,
    q_rank: usize,
    ltri: BilinearMap,
    rtri: BilinearMap,
    f: BilinearMap,
    circ: BilinearMap,
}

impl ReducedDatum {
    pub fn new(
        base: ConformalAlgebra,
        q_rank: usize,
        ltri: BilinearMap,
        rtri: BilinearMap,
        f: BilinearMap,
        circ: BilinearMap,
    ) -> Result<Self> {
        let mut d = ExtendingDatum::zero(base, q_rank)?;
        d.set(DatumMap::Ltri, ltri)?;
        d.set(DatumMap::Rtri, rtri)?;
        d.set(DatumMap::F, f)?;
        d.set(DatumMap::Circ, circ)?;
        Ok(Self::from_datum(&d))
    }

    /// Keeps `◁, ▷, f, ∘` of a full datum and drops `↼, ⇀`.
    pub fn from_datum(d: &ExtendingDatum) -> Self {
        ReducedDatum {
            base: d.base.clone(),
            q_rank: d.q_rank,
            ltri: d.map(DatumMap::Ltri).clone(),
            rtri: d.map(DatumMap::Rtri).clone(),
            f: d.map(DatumMap::F).clone(),
            circ: d.map(DatumMap::Circ).clone(),
        }
    }

    pub fn base(&self) -> &ConformalAlgebra {
        &self.base
    }

    pub fn q_rank(&self) -> usize {
        self.q_rank
    }

    pub fn map(&self, k: DatumMap) -> Option<&BilinearMap> {
        match k {
            DatumMap::Ltri => Some(&self.ltri),
            DatumMap::Rtri => Some(&self.rtri),
            DatumMap::F => Some(&self.f),
            DatumMap::Circ => Some(&self.circ),
            _ => None,
        }
    }

    /// The full datum with `↼` and `⇀` reconstructed.
    pub fn to_datum(&self) -> ExtendingDatum {
        let maps = [
            self.rtri.opposite(),
            self.ltri.opposite(),
            self.ltri.clone(),
            self.rtri.clone(),
            self.f.clone(),
            self.circ.clone(),
        ];
        ExtendingDatum::new(self.base.clone(), self.q_rank, maps).expect("consistent reduced datum")
    }
}

pub fn build_commutative_unified(d: &ReducedDatum) -> Result<SplitAlgebra> {
    if !d.base.check_commutativity().passed() {
        return Err(Error::NonCommutativeBase);
    }
    Ok(build_unified(&d.to_datum()))
}

/// BASE (associativity of A), then CCE1–CCE7 on basis tuples.
pub fn check_cce(d: &ReducedDatum) -> Result<Report> {
    if !d.base.check_commutativity().passed() {
        return Err(Error::NonCommutativeBase);
    }
    let full = d.to_datum();
    let c = full.ctx();
    let (l, m, lm) = vars();
    let n1 = ProductVariable::new(-(&Poly::mu() + &Poly::partial()));
    let n2 = ProductVariable::new(-(&Poly::lambda() + &Poly::partial()));
    let n3 = ProductVariable::new(-(&(&Poly::lambda() + &Poly::mu()) + &Poly::partial()));
    let mut b = ReportBuilder::new("cce");
    b.absorb("", &d.base.associativity_into("base", "BASE"));
    let (nq, fo, co) = (d.q_rank, d.f.opposite(), d.circ.opposite());
    for x in 0..nq {
        for y in 0..nq {
            let r = d.f.get(x, y) - fo.get(x, y);
            b.record("CCE1", &[0, x, y], &r);
        }
    }
    for x in 0..nq {
        for y in 0..nq {
            let r = d.circ.get(x, y) - co.get(x, y);
            b.record("CCE1", &[1, x, y], &r);
        }
    }
    let cce = |k: usize, t: [usize; 3]| -> LambdaElement {
        match k {
            2 => {
                let (a, bb, x) = (c.ea(t[0]), c.ea(t[1]), c.eq(t[2]));
                let lhs = c.ap(&a, &c.rt(&x, &bb, &n1), &l) + c.rt(&c.lt(&x, &bb, &n1), &a, &n2);
                lhs - c.rt(&x, &c.ap(&a, &bb, &l), &n3)
            }
            3 => {
                let (a, bb, x) = (c.ea(t[0]), c.ea(t[1]), c.eq(t[2]));
                c.lt(&c.lt(&x, &bb, &n1), &a, &n2) - c.lt(&x, &c.ap(&a, &bb, &l), &n3)
            }
            4 => {
                let (a, x, y) = (c.ea(t[0]), c.eq(t[1]), c.eq(t[2]));
                let lhs = c.ap(&a, &c.f(&x, &y, &m), &l) + c.rt(&c.ci(&x, &y, &m), &a, &n2);
                let rhs = c.rt(&y, &c.rt(&x, &a, &n2), &n3) + c.f(&c.lt(&x, &a, &n2), &y, &lm);
                lhs - rhs
            }
            5 => {
                let (a, x, y) = (c.ea(t[0]), c.eq(t[1]), c.eq(t[2]));
                let lhs = c.lt(&c.ci(&x, &y, &m), &a, &n2);
                let rhs = c.lt(&y, &c.rt(&x, &a, &n2), &n3) + c.ci(&c.lt(&x, &a, &n2), &y, &lm);
                lhs - rhs
            }
            6 => {
                let (x, y, z) = (c.eq(t[0]), c.eq(t[1]), c.eq(t[2]));
                let lhs = c.rt(&x, &c.f(&y, &z, &m), &l) + c.f(&x, &c.ci(&y, &z, &m), &l);
                let rhs = c.rt(&z, &c.f(&x, &y, &l), &n3) + c.f(&c.ci(&x, &y, &l), &z, &lm);
                lhs - rhs
            }
            7 => {
                let (x, y, z) = (c.eq(t[0]), c.eq(t[1]), c.eq(t[2]));
                let lhs = c.lt(&x, &c.f(&y, &z, &m), &l) + c.ci(&x, &c.ci(&y, &z, &m), &l);
                let rhs = c.lt(&z, &c.f(&x, &y, &l), &n3) + c.ci(&c.ci(&x, &y, &l), &z, &lm);
                lhs - rhs
            }
            _ => unreachable!("CCE index"),
        }
    };
    let slots = |k: usize| match k {
        2 | 3 => [Slot::A, Slot::A, Slot::Q],
        4 | 5 => [Slot::A, Slot::Q, Slot::Q],
        _ => [Slot::Q, Slot::Q, Slot::Q],
    };
    let results: Vec<Instances> = (2..=7usize)
        .into_par_iter()
        .map(|k| tuples(&full, slots(k)).into_iter().map(|t| (t.to_vec(), cce(k, t))).collect())
        .collect();
    for (k, inst) in results.iter().enumerate() {
        let id = format!("CCE{}", k + 2);
        for (idx, r) in inst {
            b.record(&id, idx, r);
        }
    }
    Ok(b.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::int;

    fn p(s: &str) -> Poly {
        Poly::parse(s).unwrap()
    }

    fn el(cs: &[&str]) -> LambdaElement {
        LambdaElement::new(cs.iter().map(|c| p(c)).collect())
    }

    /// Rank-1 datum over a rank-1 base given as (h, D, g, T, Q0, P).
    fn rank1(base: ConformalAlgebra, v: [&str; 6]) -> ExtendingDatum {
        let mut d = ExtendingDatum::zero(base, 1).unwrap();
        d.set_value(DatumMap::Rharp, 0, 0, el(&[v[0]])).unwrap();
        d.set_value(DatumMap::Lharp, 0, 0, el(&[v[1]])).unwrap();
        d.set_value(DatumMap::Ltri, 0, 0, el(&[v[2]])).unwrap();
        d.set_value(DatumMap::Rtri, 0, 0, el(&[v[3]])).unwrap();
        d.set_value(DatumMap::F, 0, 0, el(&[v[4]])).unwrap();
        d.set_value(DatumMap::Circ, 0, 0, el(&[v[5]])).unwrap();
        d
    }

    fn cur1() -> ConformalAlgebra {
        ConformalAlgebra::cur1()
    }

    fn triv() -> ConformalAlgebra {
        ConformalAlgebra::trivial(1).unwrap()
    }

    #[test]
    fn zero_datum_gives_direct_sum() {
        let d = ExtendingDatum::zero(cur1(), 2).unwrap();
        let e = build_unified(&d);
        let expected = cur1().direct_sum(&ConformalAlgebra::trivial(2).unwrap());
        assert_eq!(e.algebra.product(), expected.product());
        assert!(check_ace(&d).passed());
    }

    #[test]
    fn unified_examples() {
        let d = rank1(cur1(), ["0", "0", "0", "0", "0", "1"]);
        let e = build_unified(&d);
        assert_eq!(e.algebra.product(), cur1().direct_sum(&cur1()).product());
        let d = rank1(triv(), ["0", "0", "0", "0", "L*D + 3", "0"]);
        let e = build_unified(&d);
        assert_eq!(e.algebra.structure(1, 1), &el(&["L*D + 3", "0"]));
        assert!(e.algebra.structure(0, 1).is_zero() && e.algebra.structure(1, 0).is_zero());
    }

    #[test]
    fn ace_examples() {
        assert!(check_ace(&rank1(cur1(), ["1", "0", "1", "0", "1", "0"])).passed());
        let bad = rank1(cur1(), ["1", "0", "0", "1", "1", "1"]);
        let r = check_ace(&bad);
        assert!(!r.passed());
        assert!(r.fails("ACE9"), "{}", r.to_text());
    }

    #[test]
    fn extract_examples() {
        let d = ExtendingDatum::zero(cur1(), 1).unwrap();
        let e = SplitAlgebra::new(cur1().direct_sum(&triv()), 1).unwrap();
        assert_eq!(extract_datum(&e).unwrap().maps, d.maps);
        let two = SplitAlgebra::new(cur1().direct_sum(&cur1()), 1).unwrap();
        let x = extract_datum(&two).unwrap();
        assert!(x.is_zero_map(DatumMap::F));
        assert_eq!(x.map(DatumMap::Circ).get(0, 0), &el(&["1"]));
        for k in [DatumMap::Lharp, DatumMap::Rharp, DatumMap::Ltri, DatumMap::Rtri] {
            assert!(x.is_zero_map(k));
        }
        let d = rank1(cur1(), ["1", "L", "0", "D", "2", "L-D"]);
        assert_eq!(extract_datum(&build_unified(&d)).unwrap(), d);
    }

    #[test]
    fn extract_rejects_open_block() {
        // e ∘ e = x in a rank-2 current algebra
        let z = int(0);
        let o = int(1);
        let t = vec![
            vec![vec![z.clone(), o.clone()], vec![z.clone(), z.clone()]],
            vec![vec![z.clone(), z.clone()], vec![z.clone(), z.clone()]],
        ];
        let e = SplitAlgebra::new(ConformalAlgebra::cur(&t).unwrap(), 1).unwrap();
        assert!(matches!(extract_datum(&e), Err(Error::NotClosed(_))));
    }

    #[test]
    fn special_examples() {
        let z = ExtendingDatum::zero(cur1(), 1).unwrap();
        for k in SpecialKind::ALL {
            assert!(check_special(&z, k).unwrap().passed());
        }
        let direct = rank1(cur1(), ["0", "0", "0", "0", "0", "1"]);
        assert!(check_special(&direct, SpecialKind::Bicrossed).unwrap().passed());
        let crossed = rank1(triv(), ["0", "0", "0", "0", "L*D + 3", "0"]);
        assert!(check_special(&crossed, SpecialKind::Crossed).unwrap().passed());
        let err = check_special(&crossed, SpecialKind::Bicrossed).unwrap_err();
        assert_eq!(err, Error::Shape { kind: "BICROSSED".into(), map: "f".into() });
    }

    #[test]
    fn commutative_examples() {
        let zero = ReducedDatum::from_datum(&ExtendingDatum::zero(cur1(), 1).unwrap());
        let e = build_commutative_unified(&zero).unwrap();
        assert!(e.algebra.check_commutativity().passed());
        assert!(check_cce(&zero).unwrap().passed());

        // f(x,x) = e, everything else zero: commutative but not associative
        let d = ReducedDatum::from_datum(&rank1(cur1(), ["0", "0", "0", "0", "1", "0"]));
        let e = build_commutative_unified(&d).unwrap();
        assert!(e.algebra.check_commutativity().passed());
        let assoc = e.algebra.check_associativity().passed();
        assert_eq!(check_cce(&d).unwrap().passed(), assoc);
        assert!(!assoc);

        // f(x,x) = ∂e is symmetric since it has no λ; f(x,x) = λe is not
        let sym = ReducedDatum::from_datum(&rank1(cur1(), ["0", "0", "0", "0", "D", "0"]));
        assert!(!check_cce(&sym).unwrap().fails("CCE1"));
        let asym = ReducedDatum::from_datum(&rank1(cur1(), ["0", "0", "0", "0", "L", "0"]));
        assert!(check_cce(&asym).unwrap().fails("CCE1"));

        let noncomm = ConformalAlgebra::from_structure(vec![vec![vec![p("L")]]]).unwrap();
        let d = ReducedDatum::from_datum(&ExtendingDatum::zero(noncomm, 1).unwrap());
        assert_eq!(check_cce(&d).unwrap_err(), Error::NonCommutativeBase);
    }

    #[test]
    fn asymmetric_circ_fails_cce1() {
        let mut d = ExtendingDatum::zero(triv(), 2).unwrap();
        d.set_value(DatumMap::Circ, 0, 1, el(&["1", "0"])).unwrap();
        let r = check_cce(&ReducedDatum::from_datum(&d)).unwrap();
        assert!(r.fails("CCE1"));
    }

    #[test]
    fn valid_datum_actions_form_a_bimodule() {
        use crate::repchecks::{check_bimodule, BilinearAction, Side};
        let d = rank1(cur1(), ["1", "0", "1", "0", "1", "0"]);
        assert!(check_ace(&d).passed());
        let l = BilinearAction::new(Side::Left, d.map(DatumMap::Rharp).clone()).unwrap();
        let r = BilinearAction::new(Side::Right, d.map(DatumMap::Ltri).clone()).unwrap();
        assert!(check_bimodule(d.base(), &l, &r).unwrap().passed());
    }
}
