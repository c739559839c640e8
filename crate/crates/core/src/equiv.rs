//! Equivalence of extending datums under `(u, v)` transformations.
//!
//! A witness `(u, v)` with `u : Q → A`, `v ∈ Aut(Q)` turns a datum `d′` into
//! the datum `d` obtained by pulling the unified product of `d′` back along
//! `(a, x) ↦ (a + u(x), v(x))`.

use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;

use crate::conformal::{BilinearMap, LambdaElement, ProductVariable};
use crate::error::{Error, Result};
use crate::extend::{DatumMap, ExtendingDatum};
use crate::linsolve::{solve_quadratic, QuadEq};
use crate::poly::{int, ratio, Monomial, Poly, Rational, Var};
use crate::report::{Report, ReportBuilder};

/// Polynomial matrices in `∂` acting on row vectors: `u(x_s) = Σ_i u[s][i] e_i`,
/// `v(x_s) = Σ_t v[s][t] x_t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    u: Vec<Vec<Poly>>,
    v: Vec<Vec<Poly>>,
    v_inv: Vec<Vec<Poly>>,
}

fn identity(m: usize) -> Vec<Vec<Poly>> {
    (0..m).map(|i| (0..m).map(|j| if i == j { Poly::one() } else { Poly::zero() }).collect()).collect()
}

fn mat_mul(a: &[Vec<Poly>], b: &[Vec<Poly>]) -> Vec<Vec<Poly>> {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut s = Poly::zero();
                    for (k, x) in row.iter().enumerate() {
                        if !x.is_zero() && !b[k][j].is_zero() {
                            s += x * &b[k][j];
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

fn minor(a: &[Vec<Poly>], row: usize, col: usize) -> Vec<Vec<Poly>> {
    a.iter()
        .enumerate()
        .filter(|&(i, _)| i != row)
        .map(|(_, r)| r.iter().enumerate().filter(|&(j, _)| j != col).map(|(_, x)| x.clone()).collect())
        .collect()
}

fn det(a: &[Vec<Poly>]) -> Poly {
    match a.len() {
        0 => Poly::one(),
        1 => a[0][0].clone(),
        _ => {
            let mut s = Poly::zero();
            for (j, x) in a[0].iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let term = x * &det(&minor(a, 0, j));
                if j % 2 == 0 {
                    s += term;
                } else {
                    s -= term;
                }
            }
            s
        }
    }
}

/// Inverse over `ℚ[∂]`, which exists iff the determinant is a nonzero constant.
pub fn invert(a: &[Vec<Poly>]) -> Result<Vec<Vec<Poly>>> {
    let m = a.len();
    let d = det(a).as_constant().filter(|c| !c.is_zero()).ok_or(Error::NotInvertible)?;
    let inv_d = d.recip();
    if m == 1 {
        return Ok(vec![vec![Poly::constant(inv_d)]]);
    }
    Ok((0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let c = det(&minor(a, j, i)).scale(&inv_d);
                    if (i + j) % 2 == 0 { c } else { -c }
                })
                .collect()
        })
        .collect())
}

impl Witness {
    /// `v_inv` is computed when not supplied; a supplied one is checked.
    pub fn new(u: Vec<Vec<Poly>>, v: Vec<Vec<Poly>>, v_inv: Option<Vec<Vec<Poly>>>) -> Result<Self> {
        let m = v.len();
        if m == 0 {
            return Err(Error::ZeroRank);
        }
        if v.iter().any(|r| r.len() != m) || u.len() != m {
            return Err(Error::RankMismatch("v must be m×m and u must have m rows".into()));
        }
        let n = u[0].len();
        if u.iter().any(|r| r.len() != n) {
            return Err(Error::RankMismatch("u rows must have equal length".into()));
        }
        let only_d = |x: &Poly| !x.contains(Var::Lambda) && !x.contains(Var::Mu);
        let all = u.iter().chain(&v).chain(v_inv.iter().flatten());
        if !all.flatten().all(only_d) {
            return Err(Error::Invalid("witness entries must be polynomials in D only".into()));
        }
        let v_inv = match v_inv {
            Some(vi) => {
                if vi.len() != m || vi.iter().any(|r| r.len() != m) || mat_mul(&v, &vi) != identity(m) {
                    return Err(Error::NotInvertible);
                }
                vi
            }
            None => invert(&v)?,
        };
        Ok(Witness { u, v, v_inv })
    }

    pub fn identity(n: usize, m: usize) -> Self {
        Witness { u: vec![vec![Poly::zero(); n]; m], v: identity(m), v_inv: identity(m) }
    }

    /// The rank-1 witness `u(x) = T₀`, `v(x) = βx`.
    pub fn rank1(t0: &LambdaElement, beta: &Rational) -> Result<Self> {
        if beta.is_zero() {
            return Err(Error::ZeroBeta);
        }
        Witness::new(vec![t0.coords().to_vec()], vec![vec![Poly::constant(beta.clone())]], None)
    }

    /// Witness with `v = Id`.
    pub fn cohomology(u: Vec<Vec<Poly>>) -> Result<Self> {
        let m = u.len();
        Witness::new(u, identity(m), None)
    }

    pub fn u(&self) -> &[Vec<Poly>] {
        &self.u
    }

    pub fn v(&self) -> &[Vec<Poly>] {
        &self.v
    }

    pub fn v_inv(&self) -> &[Vec<Poly>] {
        &self.v_inv
    }

    pub fn q_rank(&self) -> usize {
        self.v.len()
    }

    pub fn base_rank(&self) -> usize {
        self.u[0].len()
    }

    /// The witness `w` with `transform(d, w) = transform(transform(d, outer), self)`.
    pub fn then(&self, outer: &Witness) -> Witness {
        let vu = mat_mul(&self.v, &outer.u);
        let u = self.u.iter().zip(vu).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + &y).collect()).collect();
        Witness { u, v: mat_mul(&self.v, &outer.v), v_inv: mat_mul(&outer.v_inv, &self.v_inv) }
    }

    pub fn apply_u(&self, x: &LambdaElement) -> LambdaElement {
        apply_rows(&self.u, x, self.base_rank())
    }

    pub fn apply_v(&self, x: &LambdaElement) -> LambdaElement {
        apply_rows(&self.v, x, self.q_rank())
    }

    pub fn apply_v_inv(&self, x: &LambdaElement) -> LambdaElement {
        apply_rows(&self.v_inv, x, self.q_rank())
    }
}

fn apply_rows(mat: &[Vec<Poly>], x: &LambdaElement, out_dim: usize) -> LambdaElement {
    let mut out = vec![Poly::zero(); out_dim];
    for (c, row) in x.coords().iter().zip(mat) {
        if c.is_zero() {
            continue;
        }
        for (o, e) in out.iter_mut().zip(row) {
            if !e.is_zero() {
                *o += c * e;
            }
        }
    }
    LambdaElement::new(out)
}

struct Options<'a> {
    uu: bool,
    circ: Option<&'a BilinearMap>,
}

fn transform_with(dp: &ExtendingDatum, w: &Witness, opt: &Options<'_>) -> Result<ExtendingDatum> {
    let (n, m) = (dp.n(), dp.q_rank());
    if w.q_rank() != m || w.base_rank() != n {
        return Err(Error::RankMismatch(format!(
            "witness is for ranks ({}, {}), datum has ({n}, {m})",
            w.base_rank(),
            w.q_rank()
        )));
    }
    let a = dp.base();
    let l = ProductVariable::lambda();
    let mp = |k: DatumMap| dp.map(k);
    let eq = |s: usize| LambdaElement::basis(m, s);
    let ux: Vec<LambdaElement> = (0..m).map(|s| w.apply_u(&eq(s))).collect();
    let vx: Vec<LambdaElement> = (0..m).map(|s| w.apply_v(&eq(s))).collect();
    let mut d = ExtendingDatum::zero(a.clone(), m)?;
    for i in 0..n {
        let ei = a.e(i);
        for s in 0..m {
            let rh = w.apply_v_inv(&mp(DatumMap::Rharp).apply(&ei, &vx[s], &l));
            let lh = a.mul(&ei, &ux[s], &l) + mp(DatumMap::Lharp).apply(&ei, &vx[s], &l) - w.apply_u(&rh);
            d.set_value(DatumMap::Rharp, i, s, rh)?;
            d.set_value(DatumMap::Lharp, i, s, lh)?;
            let lt = w.apply_v_inv(&mp(DatumMap::Ltri).apply(&vx[s], &ei, &l));
            let rt = a.mul(&ux[s], &ei, &l) + mp(DatumMap::Rtri).apply(&vx[s], &ei, &l) - w.apply_u(&lt);
            d.set_value(DatumMap::Ltri, s, i, lt)?;
            d.set_value(DatumMap::Rtri, s, i, rt)?;
        }
    }
    for s in 0..m {
        for t in 0..m {
            let ci = w.apply_v_inv(
                &(mp(DatumMap::Rharp).apply(&ux[s], &vx[t], &l)
                    + mp(DatumMap::Ltri).apply(&vx[s], &ux[t], &l)
                    + mp(DatumMap::Circ).apply(&vx[s], &vx[t], &l)),
            );
            let ci_used = match opt.circ {
                Some(c) => c.get(s, t).clone(),
                None => ci.clone(),
            };
            let mut f = mp(DatumMap::Lharp).apply(&ux[s], &vx[t], &l)
                + mp(DatumMap::Rtri).apply(&vx[s], &ux[t], &l)
                + mp(DatumMap::F).apply(&vx[s], &vx[t], &l)
                - w.apply_u(&ci_used);
            if opt.uu {
                f += a.mul(&ux[s], &ux[t], &l);
            }
            d.set_value(DatumMap::Circ, s, t, ci)?;
            d.set_value(DatumMap::F, s, t, f)?;
        }
    }
    Ok(d)
}

/// The datum `d` with `d ≡ d′` via `w`, by the six transformation laws
/// `⇀ = v⁻¹(a ⇀′ v(x))`, `↼ = a u(x) + a ↼′ v(x) - u(a ⇀ x)`, and so on.
pub fn transform_datum(dp: &ExtendingDatum, w: &Witness) -> Result<ExtendingDatum> {
    transform_with(dp, w, &Options { uu: true, circ: None })
}

/// Law ids paired with the map each one determines.
const LAWS: [(&str, DatumMap); 6] = [
    ("g1", DatumMap::Rharp),
    ("g2", DatumMap::Lharp),
    ("g3", DatumMap::Ltri),
    ("g4", DatumMap::Rtri),
    ("g5", DatumMap::Circ),
    ("g6", DatumMap::F),
];

/// Passes iff `transform_datum(d′, w) = d`. Items are per law `g1`–`g6`
/// with the basis indices of the entry.
pub fn check_equivalent(d: &ExtendingDatum, dp: &ExtendingDatum, w: &Witness) -> Report {
    const CHECK: &str = "equivalence";
    if d.n() != dp.n() || d.q_rank() != dp.q_rank() {
        return Report::error(CHECK, "datums have different ranks");
    }
    let t = match transform_datum(dp, w) {
        Ok(t) => t,
        Err(e) => return Report::error(CHECK, e.to_string()),
    };
    let mut b = ReportBuilder::new(CHECK);
    let n = d.n();
    for i in 0..n {
        for j in 0..n {
            b.record("BASE", &[i, j], &(d.base().structure(i, j) - dp.base().structure(i, j)));
        }
    }
    for (id, k) in LAWS {
        let (l, r, _) = k.dims(d.n(), d.q_rank());
        for x in 0..l {
            for y in 0..r {
                b.record(id, &[x, y], &(d.map(k).get(x, y) - t.map(k).get(x, y)));
            }
        }
    }
    b.finish()
}

/// Equivalence with `v = Id`.
pub fn check_cohomologous(d: &ExtendingDatum, dp: &ExtendingDatum, u: Vec<Vec<Poly>>) -> Report {
    match Witness::cohomology(u) {
        Ok(w) => check_equivalent(d, dp, &w),
        Err(e) => Report::error("equivalence", e.to_string()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    /// A verified witness with `transform_datum(d′, w) = d`.
    Found(Witness),
    /// No witness exists; the reason names the block that cannot match.
    ProvedInequivalent(String),
    /// Nothing found within the degree and β bounds.
    NotFound,
}

impl SearchOutcome {
    pub fn witness(&self) -> Option<&Witness> {
        match self {
            SearchOutcome::Found(w) => Some(w),
            _ => None,
        }
    }
}

pub fn default_betas() -> Vec<Rational> {
    vec![int(1), int(-1), int(2), int(-2), ratio(1, 2), ratio(-1, 2)]
}

pub const DEFAULT_DEG_BOUND: u32 = 3;

/// Searches rank-1 witnesses `u(x) = Σ c_{i,k} ∂ᵏ e_i` (`k ≤ deg_bound`),
/// `v = β` for `β` in `betas`, returning the first one in `betas` order.
///
/// For fixed β the laws are affine in the coefficients except the
/// `u(x) u(x)` term; the system is solved by iterated exact elimination and
/// every candidate is verified with [`check_equivalent`].
pub fn search_equivalence(
    d: &ExtendingDatum,
    dp: &ExtendingDatum,
    deg_bound: u32,
    betas: &[Rational],
) -> Result<SearchOutcome> {
    for x in [d, dp] {
        if x.q_rank() != 1 {
            return Err(Error::UnsupportedQRank(x.q_rank()));
        }
    }
    if d.n() != dp.n() {
        return Err(Error::RankMismatch("datums have different base ranks".into()));
    }
    if d.base() != dp.base() {
        return Err(Error::Invalid("datums over different base algebras".into()));
    }
    if betas.iter().any(Zero::is_zero) {
        return Err(Error::ZeroBeta);
    }
    for (k, sym) in [(DatumMap::Rharp, "⇀"), (DatumMap::Ltri, "◁")] {
        if d.map(k) != dp.map(k) {
            return Ok(SearchOutcome::ProvedInequivalent(format!(
                "the {sym} blocks differ and every rank-1 witness preserves them"
            )));
        }
    }
    let found: Vec<Option<Witness>> = betas.par_iter().map(|b| search_beta(d, dp, deg_bound, b)).collect();
    Ok(found.into_iter().flatten().next().map_or(SearchOutcome::NotFound, SearchOutcome::Found))
}

type EqKey = (usize, usize, usize, usize, Monomial);

fn search_beta(d: &ExtendingDatum, dp: &ExtendingDatum, deg_bound: u32, beta: &Rational) -> Option<Witness> {
    let n = d.n();
    let a = d.base();
    let unknowns: Vec<(usize, u32)> = (0..n).flat_map(|i| (0..=deg_bound).map(move |k| (i, k))).collect();
    let nv = unknowns.len();
    let basis_u = |j: usize| {
        let (i, k) = unknowns[j];
        let mut row = vec![Poly::zero(); n];
        row[i] = Poly::partial().pow(k);
        row
    };
    let v = vec![vec![Poly::constant(beta.clone())]];
    let wit = |u: Vec<Poly>| Witness::new(vec![u], v.clone(), None).expect("nonzero beta");
    let target_circ = d.map(DatumMap::Circ);
    let opts = Options { uu: false, circ: Some(target_circ) };
    let base = transform_with(dp, &wit(vec![Poly::zero(); n]), &opts).ok()?;
    let lin: Vec<ExtendingDatum> =
        (0..nv).map(|j| transform_with(dp, &wit(basis_u(j)), &opts).expect("ranks checked")).collect();

    let mut eqs: BTreeMap<EqKey, QuadEq> = BTreeMap::new();
    let mut add = |key: (usize, usize, usize, usize), p: &Poly, var: Option<(usize, Option<usize>)>, sign: i64| {
        for (mono, c) in p.terms() {
            let e = eqs.entry((key.0, key.1, key.2, key.3, *mono)).or_insert_with(|| QuadEq::new(nv));
            let c = c * int(sign);
            match var {
                None => e.constant += c,
                Some((j, None)) => e.linear[j] += c,
                Some((j, Some(l))) => e.add_quad(j, l, c),
            }
        }
    };
    let maps = [DatumMap::Lharp, DatumMap::Rtri, DatumMap::Circ, DatumMap::F];
    for (mi, &k) in maps.iter().enumerate() {
        let (lw, rw, _) = k.dims(n, 1);
        for x in 0..lw {
            for y in 0..rw {
                let target = d.map(k).get(x, y);
                let k0 = base.map(k).get(x, y);
                for (c, (tp, kp)) in target.coords().iter().zip(k0.coords()).enumerate() {
                    add((mi, x, y, c), &(tp - kp), None, 1);
                    for (j, lj) in lin.iter().enumerate() {
                        let delta = lj.map(k).get(x, y).coord(c) - kp;
                        add((mi, x, y, c), &delta, Some((j, None)), -1);
                    }
                }
            }
        }
    }
    let l = ProductVariable::lambda();
    let elems: Vec<LambdaElement> = (0..nv).map(|j| LambdaElement::new(basis_u(j))).collect();
    let fi = maps.iter().position(|&k| k == DatumMap::F).expect("f is listed");
    for j in 0..nv {
        for q in j..nv {
            let mut prod = a.mul(&elems[j], &elems[q], &l);
            if q != j {
                prod += a.mul(&elems[q], &elems[j], &l);
            }
            for (c, p) in prod.coords().iter().enumerate() {
                add((fi, 0, 0, c), p, Some((j, Some(q))), -1);
            }
        }
    }
    let eqs: Vec<QuadEq> = eqs.into_values().collect();
    let sol = solve_quadratic(&eqs, nv)?;
    let mut u = vec![Poly::zero(); n];
    for (j, c) in sol.iter().enumerate() {
        if !c.is_zero() {
            let (i, k) = unknowns[j];
            u[i] += Poly::partial().pow(k).scale(c);
        }
    }
    let w = wit(u);
    check_equivalent(d, dp, &w).passed().then_some(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conformal::ConformalAlgebra;
    use crate::extend::{build_unified, check_ace};
    use crate::flag::{flag_equiv, flag_to_datum, hh3_shifted, rank1_flag, FlagDatum};
    use proptest::prelude::*;

    fn p(s: &str) -> Poly {
        Poly::parse(s).unwrap()
    }

    fn flag(base: ConformalAlgebra, v: [&str; 6]) -> FlagDatum {
        rank1_flag(base, v.map(p))
    }

    fn datum(base: ConformalAlgebra, v: [&str; 6]) -> ExtendingDatum {
        flag_to_datum(&flag(base, v)).unwrap()
    }

    /// `φ(E) = E′` along `(a, x) ↦ (a + u(x), v(x))`.
    fn pullback_holds(d: &ExtendingDatum, dp: &ExtendingDatum, w: &Witness) -> bool {
        let e = build_unified(d).algebra;
        let ep = build_unified(dp).algebra;
        let n = d.n();
        let phi = |z: &LambdaElement| {
            let (a, x) = (z.slice(0, n), z.slice(n, z.dim()));
            (a + w.apply_u(&x)).concat(&w.apply_v(&x))
        };
        let l = ProductVariable::lambda();
        (0..e.rank()).all(|i| {
            (0..e.rank()).all(|j| phi(&e.mul(&e.e(i), &e.e(j), &l)) == ep.mul(&phi(&e.e(i)), &phi(&e.e(j)), &l))
        })
    }

    #[test]
    fn inverse_and_identity() {
        let v = vec![vec![p("1"), p("D")], vec![p("0"), p("2")]];
        let vi = invert(&v).unwrap();
        assert_eq!(mat_mul(&v, &vi), identity(2));
        assert_eq!(invert(&[vec![p("D")]]).unwrap_err(), Error::NotInvertible);
        assert!(Witness::new(vec![vec![p("0")]], vec![vec![p("2")]], Some(vec![vec![p("1")]])).is_err());
        let d = datum(ConformalAlgebra::cur1(), ["1", "0", "1", "0", "3", "1"]);
        assert_eq!(transform_datum(&d, &Witness::identity(1, 1)).unwrap(), d);
    }

    #[test]
    fn transform_examples() {
        let cur = ConformalAlgebra::cur1();
        let two = datum(cur.clone(), ["0", "0", "0", "0", "0", "1"]);
        let w = Witness::rank1(&LambdaElement::new(vec![p("1")]), &int(1)).unwrap();
        // D and T pick up e ₍λ₎ e = e while f(x, x) = e - P e vanishes
        assert_eq!(transform_datum(&two, &w).unwrap(), datum(cur.clone(), ["0", "1", "0", "1", "0", "1"]));
        let triv = ConformalAlgebra::trivial(1).unwrap();
        let q = datum(triv.clone(), ["0", "0", "0", "0", "L*D+1", "0"]);
        let w3 = Witness::rank1(&LambdaElement::zero(1), &int(3)).unwrap();
        let t = transform_datum(&q, &w3).unwrap();
        assert_eq!(t, datum(triv, ["0", "0", "0", "0", "9*L*D+9", "0"]));
        assert!(check_equivalent(&t, &q, &w3).passed());
    }

    #[test]
    fn check_equivalent_examples() {
        let cur = ConformalAlgebra::cur1();
        let d = datum(cur.clone(), ["1", "0", "1", "0", "0", "1"]);
        assert!(check_equivalent(&d, &d, &Witness::identity(1, 1)).passed());
        let other_h = datum(cur.clone(), ["0", "0", "1", "0", "0", "1"]);
        for b in default_betas() {
            for t0 in ["0", "1", "D", "-1"] {
                let w = Witness::rank1(&LambdaElement::new(vec![p(t0)]), &b).unwrap();
                assert!(check_equivalent(&other_h, &d, &w).fails("g1"));
            }
        }
        let f = datum(cur.clone(), ["1", "0", "1", "0", "1", "1"]);
        let f4 = datum(cur, ["1", "0", "1", "0", "4", "1"]);
        assert!(check_cohomologous(&f, &f, vec![vec![p("0")]]).passed());
        assert!(check_cohomologous(&f4, &f, vec![vec![p("0")]]).fails("g6"));
    }

    #[test]
    fn cohomologous_shifted_family() {
        let two = flag_to_datum(&flag(ConformalAlgebra::cur1(), ["0", "0", "0", "0", "0", "1"])).unwrap();
        for s in ["0", "1", "L", "L^2-1"] {
            let (fd, t0) = hh3_shifted(&p(s));
            let d = flag_to_datum(&fd).unwrap();
            assert!(check_cohomologous(&d, &two, vec![t0.coords().to_vec()]).passed(), "p = {s}");
        }
    }

    #[test]
    fn pullback_oracle() {
        let cur = ConformalAlgebra::cur1();
        let dp = datum(cur, ["1", "0", "1", "0", "2", "1"]);
        for (t0, b) in [("1", int(1)), ("D-1", int(2)), ("D^2", ratio(-1, 2))] {
            let w = Witness::rank1(&LambdaElement::new(vec![p(t0)]), &b).unwrap();
            let d = transform_datum(&dp, &w).unwrap();
            assert!(pullback_holds(&d, &dp, &w), "T0 = {t0}");
        }
        // rank-2 Q with a non-diagonal v
        let a = ConformalAlgebra::cur1();
        let mut dp = ExtendingDatum::zero(a.clone(), 2).unwrap();
        dp.set_value(DatumMap::Circ, 0, 0, LambdaElement::basis(2, 0)).unwrap();
        dp.set_value(DatumMap::Rharp, 0, 1, LambdaElement::basis(2, 1)).unwrap();
        let w = Witness::new(
            vec![vec![p("1")], vec![p("D")]],
            vec![vec![p("1"), p("D")], vec![p("0"), p("1")]],
            None,
        )
        .unwrap();
        let d = transform_datum(&dp, &w).unwrap();
        assert!(pullback_holds(&d, &dp, &w));
    }

    #[test]
    fn composition() {
        let dpp = datum(ConformalAlgebra::cur1(), ["1", "0", "1", "0", "1", "1"]);
        let w2 = Witness::rank1(&LambdaElement::new(vec![p("D+1")]), &int(2)).unwrap();
        let w1 = Witness::rank1(&LambdaElement::new(vec![p("-1")]), &ratio(-1, 2)).unwrap();
        let step = transform_datum(&transform_datum(&dpp, &w2).unwrap(), &w1).unwrap();
        assert_eq!(transform_datum(&dpp, &w1.then(&w2)).unwrap(), step);
    }

    #[test]
    fn search_examples() {
        let cur = ConformalAlgebra::cur1();
        let d = datum(cur.clone(), ["1", "0", "1", "0", "1", "1"]);
        let r = search_equivalence(&d, &d, 3, &default_betas()).unwrap();
        assert_eq!(r.witness(), Some(&Witness::identity(1, 1)));
        let two = datum(cur.clone(), ["0", "0", "0", "0", "0", "1"]);
        let (fd, t0) = hh3_shifted(&p("L^2-1"));
        let r = search_equivalence(&flag_to_datum(&fd).unwrap(), &two, 3, &default_betas()).unwrap();
        let w = r.witness().expect("witness");
        assert_eq!(w.u()[0], t0.coords().to_vec());
        let triv = ConformalAlgebra::trivial(1).unwrap();
        let f2 = datum(triv.clone(), ["0", "0", "0", "0", "0", "1"]);
        let f3 = datum(triv, ["0", "0", "0", "1", "0", "1"]);
        assert_eq!(search_equivalence(&f2, &f3, 3, &default_betas()).unwrap(), SearchOutcome::NotFound);
        let h1 = datum(cur, ["1", "0", "0", "0", "0", "0"]);
        assert!(matches!(
            search_equivalence(&h1, &d, 3, &default_betas()).unwrap(),
            SearchOutcome::ProvedInequivalent(_)
        ));
        let wide = ExtendingDatum::zero(ConformalAlgebra::cur1(), 2).unwrap();
        assert_eq!(search_equivalence(&wide, &wide, 1, &[int(1)]).unwrap_err(), Error::UnsupportedQRank(2));
    }

    #[test]
    fn search_scales_beyond_default_betas() {
        // Q0 = 2e and Q0 = 0 in the (h, g, P) = (1, 1, 1) family need β = ±3
        let seven2 = datum(ConformalAlgebra::cur1(), ["1", "0", "1", "0", "2", "1"]);
        let seven0 = datum(ConformalAlgebra::cur1(), ["1", "0", "1", "0", "0", "1"]);
        assert_eq!(search_equivalence(&seven2, &seven0, 1, &default_betas()).unwrap(), SearchOutcome::NotFound);
        let r = search_equivalence(&seven2, &seven0, 1, &[int(3)]).unwrap();
        assert!(pullback_holds(&seven2, &seven0, r.witness().unwrap()));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn transform_preserves_validity_and_structure(
            c in 0usize..4, t in proptest::sample::select(vec!["0", "1", "D", "-D+2", "D^2"]),
            bi in 0usize..6
        ) {
            let cs = ["0", "1", "-1", "2"];
            let dp = datum(ConformalAlgebra::cur1(), ["1", "0", "1", "0", cs[c], "1"]);
            let w = Witness::rank1(&LambdaElement::new(vec![p(t)]), &default_betas()[bi]).unwrap();
            let d = transform_datum(&dp, &w).unwrap();
            prop_assert!(check_ace(&d).passed());
            prop_assert_eq!(d.map(DatumMap::Rharp), dp.map(DatumMap::Rharp));
            prop_assert_eq!(d.map(DatumMap::Ltri), dp.map(DatumMap::Ltri));
            let (fd, fdp) = (crate::flag::datum_to_flag(&d).unwrap(), crate::flag::datum_to_flag(&dp).unwrap());
            let t0 = LambdaElement::new(vec![p(t)]);
            prop_assert!(flag_equiv(&fd, &fdp, &t0, &default_betas()[bi]).unwrap().passed());
            prop_assert!(search_equivalence(&d, &dp, 2, &default_betas()).unwrap().witness().is_some());
        }
    }
}
