//! Brute-force classification of rank-1 flag datums over a rank-1 base.
//!
//! Every slot ranges over polynomials in `λ, ∂` of bounded total degree with
//! coefficients from a finite set. Survivors of f1–f14 are grouped by the
//! witness search and each group is matched against the known families.

use rayon::prelude::*;
use serde::Serialize;

use crate::conformal::{ConformalAlgebra, LambdaElement};
use crate::equiv::{default_betas, search_equivalence, SearchOutcome, DEFAULT_DEG_BOUND};
use crate::error::{Error, Result};
use crate::flag::{check_flag, fixtures, flag_identity_holds, flag_to_datum, FixtureSet, FlagDatum};
use crate::poly::{Monomial, Poly, Rational};

pub const DEFAULT_CAP: u128 = 10_000_000;

/// Identities checked once their slots are bound, in binding order
/// `h`, `g`, `(P, D)`, `T`, `Q₀`.
const STAGES: [&[usize]; 5] = [&[2], &[6], &[8], &[12, 4, 10, 1, 3, 5], &[7, 9, 11, 13, 14]];

#[derive(Clone, Debug)]
pub struct GridOptions {
    pub deg_bound: u32,
    pub coeffs: Vec<Rational>,
    pub cap: u128,
    pub betas: Vec<Rational>,
    /// Degree bound for `T₀` in the equivalence search.
    pub search_deg: u32,
}

impl GridOptions {
    pub fn new(deg_bound: u32, coeffs: Vec<Rational>) -> Self {
        GridOptions { deg_bound, coeffs, cap: DEFAULT_CAP, betas: default_betas(), search_deg: DEFAULT_DEG_BOUND }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bucket {
    /// Members as `[h, D, g, T, Q0, P]` coefficient strings of `e` and `x`.
    pub members: Vec<[String; 6]>,
    /// Matched family labels; empty means unmatched.
    pub families: Vec<String>,
}

impl Bucket {
    pub fn matched(&self) -> bool {
        !self.families.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub fixture: String,
    pub candidates: u128,
    pub survivors: usize,
    pub buckets: Vec<Bucket>,
    /// Distinct matched families, in family order.
    pub families: Vec<String>,
    pub unmatched: usize,
    pub note: String,
}

impl Classification {
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "classify {}: {} candidates, {} survivors, {} buckets, {} unmatched\n",
            self.fixture,
            self.candidates,
            self.survivors,
            self.buckets.len(),
            self.unmatched
        );
        for (i, b) in self.buckets.iter().enumerate() {
            let label = if b.matched() { b.families.join(" = ") } else { "UNMATCHED".to_string() };
            out.push_str(&format!("  bucket {i}: {label} ({} members)\n", b.members.len()));
            for m in &b.members {
                out.push_str(&format!(
                    "    h={} D={} g={} T={} Q0={} P={}\n",
                    m[0], m[1], m[2], m[3], m[4], m[5]
                ));
            }
        }
        out.push_str(&format!("  families matched: {}\n", self.families.join(", ")));
        out.push_str(&format!("  note: {}\n", self.note));
        out
    }
}

/// All polynomials in `λ, ∂` of total degree `≤ deg` with coefficients in `coeffs`.
pub fn slot_polys(deg: u32, coeffs: &[Rational]) -> Vec<Poly> {
    let mut coeffs: Vec<Rational> = coeffs.to_vec();
    coeffs.sort();
    coeffs.dedup();
    let monos: Vec<Monomial> =
        (0..=deg).flat_map(|t| (0..=t).map(move |i| Monomial([i, 0, t - i]))).collect();
    let mut out = vec![Poly::zero()];
    for m in monos {
        out = out
            .iter()
            .flat_map(|p| coeffs.iter().map(move |c| p + &Poly::term(m, c.clone())))
            .collect();
    }
    out.sort_by_key(|p| p.to_string());
    out.dedup();
    out
}

fn encode(fd: &FlagDatum) -> [String; 6] {
    let s = |e: &LambdaElement| e.coord(0).to_string();
    [fd.h[0].to_string(), s(&fd.d[0]), fd.g[0].to_string(), s(&fd.t[0]), s(&fd.q0), fd.p.to_string()]
}

fn base_set(a: &ConformalAlgebra) -> Result<FixtureSet> {
    [FixtureSet::Hh2, FixtureSet::Hh3]
        .into_iter()
        .find(|s| s.base().product() == a.product())
        .ok_or(Error::UnsupportedBase)
}

fn survivors(base: &ConformalAlgebra, slots: &[Poly]) -> Vec<(Vec<usize>, FlagDatum)> {
    let k = slots.len();
    let ok = |fd: &FlagDatum, stage: usize| STAGES[stage].iter().all(|&f| flag_identity_holds(fd, f));
    let scalar = |p: &Poly| LambdaElement::new(vec![p.clone()]);
    let mut found: Vec<(Vec<usize>, FlagDatum)> = (0..k * k)
        .into_par_iter()
        .flat_map_iter(|hg| {
            let (hi, gi) = (hg / k, hg % k);
            let mut out = Vec::new();
            let mut fd = FlagDatum::zero(base.clone());
            fd.h[0] = slots[hi].clone();
            if !ok(&fd, 0) {
                return out.into_iter();
            }
            fd.g[0] = slots[gi].clone();
            if !ok(&fd, 1) {
                return out.into_iter();
            }
            for (pi, p) in slots.iter().enumerate() {
                fd.p = p.clone();
                for (di, d) in slots.iter().enumerate() {
                    fd.d[0] = scalar(d);
                    fd.t[0] = LambdaElement::zero(1);
                    fd.q0 = LambdaElement::zero(1);
                    if !ok(&fd, 2) {
                        continue;
                    }
                    for (ti, t) in slots.iter().enumerate() {
                        fd.t[0] = scalar(t);
                        fd.q0 = LambdaElement::zero(1);
                        if !ok(&fd, 3) {
                            continue;
                        }
                        for (qi, q) in slots.iter().enumerate() {
                            fd.q0 = scalar(q);
                            if ok(&fd, 4) && check_flag(&fd).passed() {
                                out.push((vec![hi, di, gi, ti, qi, pi], fd.clone()));
                            }
                        }
                    }
                }
            }
            out.into_iter()
        })
        .collect();
    found.sort_by(|a, b| a.0.cmp(&b.0));
    found
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

fn equivalent(a: &FlagDatum, b: &FlagDatum, opts: &GridOptions) -> bool {
    let (da, db) = (flag_to_datum(a).expect("valid"), flag_to_datum(b).expect("valid"));
    let found = |x, y| {
        matches!(search_equivalence(x, y, opts.search_deg, &opts.betas), Ok(SearchOutcome::Found(_)))
    };
    found(&da, &db) || found(&db, &da)
}

/// Shape recognisers for the parametric families.
fn recognise(set: FixtureSet, fd: &FlagDatum) -> Option<String> {
    let zero = |p: &Poly| p.is_zero();
    let one = |p: &Poly| p.as_constant().is_some_and(|c| c == Rational::from_integer(1.into()));
    match set {
        FixtureSet::Hh2 => (zero(&fd.h[0])
            && zero(fd.d[0].coord(0))
            && zero(&fd.g[0])
            && zero(fd.t[0].coord(0))
            && zero(&fd.p))
            .then(|| format!("{}[Q={}]", set.family_label(1), fd.q0.coord(0))),
        FixtureSet::Hh3 => (one(&fd.h[0])
            && one(&fd.g[0])
            && zero(fd.d[0].coord(0))
            && zero(fd.t[0].coord(0))
            && one(&fd.p))
            .then(|| fd.q0.coord(0).as_constant())
            .flatten()
            .map(|c| format!("{}[c={}]", set.family_label(7), crate::poly::fmt_rational(&c))),
    }
}

/// Enumerates the grid over `base`, which must be the trivial rank-1 algebra
/// or `Cur₁`.
pub fn classify_grid(base: &ConformalAlgebra, opts: &GridOptions) -> Result<Classification> {
    let set = base_set(base)?;
    let slots = slot_polys(opts.deg_bound, &opts.coeffs);
    let candidates = (slots.len() as u128).checked_pow(6).unwrap_or(u128::MAX);
    if candidates > opts.cap {
        return Err(Error::GridTooLarge { count: candidates, cap: opts.cap });
    }
    let base = set.base();
    let surv = survivors(&base, &slots);
    let n = surv.len();

    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| surv[i].1.h == surv[j].1.h && surv[i].1.g == surv[j].1.g)
        .collect();
    let joined: Vec<(usize, usize)> =
        pairs.into_par_iter().filter(|&(i, j)| equivalent(&surv[i].1, &surv[j].1, opts)).collect();
    let mut parent: Vec<usize> = (0..n).collect();
    for (i, j) in joined {
        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
        if ri != rj {
            parent[ri.max(rj)] = ri.min(rj);
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_at: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        match root_at[r] {
            Some(g) => groups[g].push(i),
            None => {
                root_at[r] = Some(groups.len());
                groups.push(vec![i]);
            }
        }
    }

    let fx = fixtures(set);
    let buckets: Vec<Bucket> = groups
        .par_iter()
        .map(|g| {
            let mut families: Vec<(usize, String)> = Vec::new();
            fn push(families: &mut Vec<(usize, String)>, fam: usize, s: String) {
                if !families.iter().any(|(f, _)| *f == fam) {
                    families.push((fam, s));
                }
            }
            for &i in g {
                if let Some(label) = recognise(set, &surv[i].1) {
                    push(&mut families, if set == FixtureSet::Hh2 { 1 } else { 7 }, label);
                }
            }
            for f in &fx {
                if families.iter().any(|(fam, _)| *fam == f.family) {
                    continue;
                }
                if g.iter().any(|&i| surv[i].1 == f.flag || equivalent(&surv[i].1, &f.flag, opts)) {
                    push(&mut families, f.family, f.label());
                }
            }
            families.sort();
            Bucket {
                members: g.iter().map(|&i| encode(&surv[i].1)).collect(),
                families: families.into_iter().map(|(_, s)| s).collect(),
            }
        })
        .collect();

    let mut fams: Vec<usize> = Vec::new();
    for b in &buckets {
        for f in &b.families {
            let num: usize = f
                .split_once("-(")
                .and_then(|(_, r)| r.split(')').next())
                .and_then(|x| x.parse().ok())
                .expect("family label");
            if !fams.contains(&num) {
                fams.push(num);
            }
        }
    }
    fams.sort();
    let note = match set {
        FixtureSet::Hh2 => {
            "family (1) is matched by shape; over Q its datums are identified only up to Q -> β²Q".to_string()
        }
        FixtureSet::Hh3 => "family (7) is matched by shape for every constant c".to_string(),
    };
    Ok(Classification {
        fixture: set.name().to_string(),
        candidates,
        survivors: n,
        unmatched: buckets.iter().filter(|b| !b.matched()).count(),
        families: fams.into_iter().map(|f| set.family_label(f)).collect(),
        buckets,
        note,
    })
}
