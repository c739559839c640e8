//! JSON file formats for algebras, actions, datums, witnesses and flag datums.
//!
//! Polynomials are strings in the `L`, `M`, `D` grammar. Map tables of a
//! datum are dense arrays indexed `[left][right][out]`.

use serde::{Deserialize, Serialize};

use crate::conformal::{default_names, BilinearMap, ConformalAlgebra, LambdaElement};
use crate::equiv::Witness;
use crate::error::{Error, Result};
use crate::extend::{DatumMap, ExtendingDatum, ReducedDatum};
use crate::flag::FlagDatum;
use crate::poly::Poly;
use crate::repchecks::{BilinearAction, Side};

fn poly(text: &str, at: &str) -> Result<Poly> {
    Poly::parse(text).map_err(|e| Error::Invalid(format!("{at}: {e}")))
}

fn polys(texts: &[String], at: &str) -> Result<Vec<Poly>> {
    texts.iter().enumerate().map(|(i, t)| poly(t, &format!("{at}[{i}]"))).collect()
}

fn strings(ps: &[Poly]) -> Vec<String> {
    ps.iter().map(|p| p.to_string()).collect()
}

fn json_err(e: serde_json::Error) -> Error {
    Error::Invalid(format!("malformed JSON: {e}"))
}

fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub k: usize,
    pub poly: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductJson {
    pub i: usize,
    pub j: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraJson {
    pub rank: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<String>>,
    pub products: Vec<ProductJson>,
}

fn sparse(map: &BilinearMap) -> Vec<ProductJson> {
    let mut out = Vec::new();
    for i in 0..map.left_dim() {
        for j in 0..map.right_dim() {
            let terms: Vec<TermJson> = map
                .get(i, j)
                .coords()
                .iter()
                .enumerate()
                .filter(|(_, p)| !p.is_zero())
                .map(|(k, p)| TermJson { k, poly: p.to_string() })
                .collect();
            if !terms.is_empty() {
                out.push(ProductJson { i, j, terms });
            }
        }
    }
    out
}

fn from_sparse(entries: &[ProductJson], dims: (usize, usize, usize), what: &str) -> Result<BilinearMap> {
    let (l, r, o) = dims;
    let mut map = BilinearMap::zero(l, r, o);
    for (n, e) in entries.iter().enumerate() {
        if e.i >= l || e.j >= r {
            return Err(Error::Invalid(format!("{what}.products[{n}]: index ({}, {}) out of range", e.i, e.j)));
        }
        let mut v = map.get(e.i, e.j).clone();
        for (t, term) in e.terms.iter().enumerate() {
            let at = format!("{what}.products[{n}].terms[{t}]");
            if term.k >= o {
                return Err(Error::Invalid(format!("{at}: k = {} out of range", term.k)));
            }
            let p = poly(&term.poly, &at)?;
            v.coords_mut()[term.k] += p;
        }
        map.set(e.i, e.j, v);
    }
    Ok(map)
}

impl AlgebraJson {
    pub fn from_algebra(a: &ConformalAlgebra) -> Self {
        AlgebraJson { rank: a.rank(), basis: Some(a.basis_names().to_vec()), products: sparse(a.product()) }
    }

    pub fn to_algebra(&self) -> Result<ConformalAlgebra> {
        let n = self.rank;
        if n == 0 {
            return Err(Error::ZeroRank);
        }
        let basis = match &self.basis {
            Some(b) if b.len() != n => {
                return Err(Error::Invalid(format!("basis lists {} names for rank {n}", b.len())))
            }
            Some(b) => b.clone(),
            None => default_names("e", n),
        };
        ConformalAlgebra::new(basis, from_sparse(&self.products, (n, n, n), "algebra")?)
    }
}

pub fn algebra_from_json(text: &str) -> Result<ConformalAlgebra> {
    serde_json::from_str::<AlgebraJson>(text).map_err(json_err)?.to_algebra()
}

pub fn algebra_to_json(a: &ConformalAlgebra) -> String {
    pretty(&AlgebraJson::from_algebra(a))
}

/// A left action lists `e_i ⇀ v_j`, a right action `v_i ◁ e_j`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionJson {
    pub side: Side,
    /// Rank of the module.
    pub rank: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<String>>,
    pub products: Vec<ProductJson>,
}

pub fn action_from_json(text: &str, algebra_rank: usize) -> Result<BilinearAction> {
    let a: ActionJson = serde_json::from_str(text).map_err(json_err)?;
    let (n, m) = (algebra_rank, a.rank);
    let dims = match a.side {
        Side::Left => (n, m, m),
        Side::Right => (m, n, m),
    };
    BilinearAction::new(a.side, from_sparse(&a.products, dims, "action")?)
}

pub fn action_to_json(act: &BilinearAction) -> String {
    pretty(&ActionJson { side: act.side(), rank: act.module_rank(), basis: None, products: sparse(act.map()) })
}

type Dense = Vec<Vec<Vec<String>>>;

fn dense(map: &BilinearMap) -> Dense {
    map.table().iter().map(|row| row.iter().map(|v| strings(v.coords())).collect()).collect()
}

fn from_dense(t: &Dense, dims: (usize, usize, usize), what: &str) -> Result<BilinearMap> {
    let (l, r, o) = dims;
    let shape = || Error::Invalid(format!("{what}: expected a {l}×{r}×{o} array"));
    if t.len() != l || t.iter().any(|row| row.len() != r || row.iter().any(|v| v.len() != o)) {
        return Err(shape());
    }
    let mut table = Vec::with_capacity(l);
    for (i, row) in t.iter().enumerate() {
        let mut out = Vec::with_capacity(r);
        for (j, v) in row.iter().enumerate() {
            out.push(LambdaElement::new(polys(v, &format!("{what}[{i}][{j}]"))?));
        }
        table.push(out);
    }
    BilinearMap::from_table(l, r, o, table)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatumJson {
    pub base: AlgebraJson,
    pub q_rank: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lharp: Option<Dense>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rharp: Option<Dense>,
    #[serde(default)]
    pub ltri: Option<Dense>,
    #[serde(default)]
    pub rtri: Option<Dense>,
    #[serde(default)]
    pub f: Option<Dense>,
    #[serde(default)]
    pub circ: Option<Dense>,
}

impl DatumJson {
    fn field(&self, k: DatumMap) -> Option<&Dense> {
        match k {
            DatumMap::Lharp => self.lharp.as_ref(),
            DatumMap::Rharp => self.rharp.as_ref(),
            DatumMap::Ltri => self.ltri.as_ref(),
            DatumMap::Rtri => self.rtri.as_ref(),
            DatumMap::F => self.f.as_ref(),
            DatumMap::Circ => self.circ.as_ref(),
        }
    }

    /// Missing maps are zero.
    pub fn to_datum(&self) -> Result<ExtendingDatum> {
        let base = self.base.to_algebra()?;
        let mut d = ExtendingDatum::zero(base, self.q_rank)?;
        for k in DatumMap::ALL {
            if let Some(t) = self.field(k) {
                d.set(k, from_dense(t, k.dims(d.n(), self.q_rank), k.name())?)?;
            }
        }
        Ok(d)
    }

    pub fn from_datum(d: &ExtendingDatum) -> Self {
        let m = |k| Some(dense(d.map(k)));
        DatumJson {
            base: AlgebraJson::from_algebra(d.base()),
            q_rank: d.q_rank(),
            lharp: m(DatumMap::Lharp),
            rharp: m(DatumMap::Rharp),
            ltri: m(DatumMap::Ltri),
            rtri: m(DatumMap::Rtri),
            f: m(DatumMap::F),
            circ: m(DatumMap::Circ),
        }
    }
}

pub fn datum_from_json(text: &str) -> Result<ExtendingDatum> {
    serde_json::from_str::<DatumJson>(text).map_err(json_err)?.to_datum()
}

pub fn datum_to_json(d: &ExtendingDatum) -> String {
    pretty(&DatumJson::from_datum(d))
}

/// Reads `ltri, rtri, f, circ`; `lharp` and `rharp` must be absent.
pub fn reduced_from_json(text: &str) -> Result<ReducedDatum> {
    let j: DatumJson = serde_json::from_str(text).map_err(json_err)?;
    if j.lharp.is_some() || j.rharp.is_some() {
        return Err(Error::Invalid("a reduced datum has no lharp or rharp; they are derived".into()));
    }
    Ok(ReducedDatum::from_datum(&j.to_datum()?))
}

pub fn reduced_to_json(d: &ReducedDatum) -> String {
    let mut j = DatumJson::from_datum(&d.to_datum());
    j.lharp = None;
    j.rharp = None;
    pretty(&j)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessJson {
    pub u: Vec<Vec<String>>,
    pub v: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v_inv: Option<Vec<Vec<String>>>,
}

fn matrix(rows: &[Vec<String>], what: &str) -> Result<Vec<Vec<Poly>>> {
    rows.iter().enumerate().map(|(i, r)| polys(r, &format!("{what}[{i}]"))).collect()
}

pub fn witness_from_json(text: &str) -> Result<Witness> {
    let j: WitnessJson = serde_json::from_str(text).map_err(json_err)?;
    let v_inv = j.v_inv.as_ref().map(|m| matrix(m, "v_inv")).transpose()?;
    Witness::new(matrix(&j.u, "u")?, matrix(&j.v, "v")?, v_inv)
}

pub fn witness_to_json(w: &Witness) -> String {
    let m = |x: &[Vec<Poly>]| x.iter().map(|r| strings(r)).collect();
    pretty(&WitnessJson { u: m(w.u()), v: m(w.v()), v_inv: Some(m(w.v_inv())) })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlagJson {
    pub base: AlgebraJson,
    pub h: Vec<String>,
    #[serde(rename = "D")]
    pub d: Vec<Vec<String>>,
    pub g: Vec<String>,
    #[serde(rename = "T")]
    pub t: Vec<Vec<String>>,
    #[serde(rename = "Q0")]
    pub q0: Vec<String>,
    #[serde(rename = "P")]
    pub p: String,
}

pub fn flag_from_json(text: &str) -> Result<FlagDatum> {
    let j: FlagJson = serde_json::from_str(text).map_err(json_err)?;
    let elems = |rows: &[Vec<String>], what: &str| -> Result<Vec<LambdaElement>> {
        rows.iter().enumerate().map(|(i, r)| Ok(LambdaElement::new(polys(r, &format!("{what}[{i}]"))?))).collect()
    };
    let fd = FlagDatum {
        base: j.base.to_algebra()?,
        h: polys(&j.h, "h")?,
        d: elems(&j.d, "D")?,
        g: polys(&j.g, "g")?,
        t: elems(&j.t, "T")?,
        q0: LambdaElement::new(polys(&j.q0, "Q0")?),
        p: poly(&j.p, "P")?,
    };
    fd.validate()?;
    Ok(fd)
}

pub fn flag_to_json(fd: &FlagDatum) -> String {
    let elems = |v: &[LambdaElement]| v.iter().map(|e| strings(e.coords())).collect();
    pretty(&FlagJson {
        base: AlgebraJson::from_algebra(&fd.base),
        h: strings(&fd.h),
        d: elems(&fd.d),
        g: strings(&fd.g),
        t: elems(&fd.t),
        q0: strings(fd.q0.coords()),
        p: fd.p.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flag::{fixtures, FixtureSet};

    #[test]
    fn algebra_round_trip() {
        let text = r#"{"rank": 1, "basis": ["e"], "products": [{"i": 0, "j": 0, "terms": [{"k": 0, "poly": "1"}]}]}"#;
        let a = algebra_from_json(text).unwrap();
        assert_eq!(a, ConformalAlgebra::cur1());
        assert_eq!(algebra_from_json(&algebra_to_json(&a)).unwrap(), a);
    }

    #[test]
    fn errors_carry_location() {
        let bad = r#"{"rank": 1, "products": [{"i": 0, "j": 0, "terms": [{"k": 0, "poly": "L+*2"}]}]}"#;
        let e = algebra_from_json(bad).unwrap_err().to_string();
        assert!(e.contains("algebra.products[0].terms[0]"), "{e}");
        let oob = r#"{"rank": 1, "products": [{"i": 1, "j": 0, "terms": []}]}"#;
        assert!(algebra_from_json(oob).is_err());
        let mu = r#"{"rank": 1, "products": [{"i": 0, "j": 0, "terms": [{"k": 0, "poly": "M"}]}]}"#;
        assert!(matches!(algebra_from_json(mu), Err(Error::MuInEntry { .. })));
        assert!(algebra_from_json("{").is_err());
    }

    #[test]
    fn datum_flag_witness_round_trip() {
        for f in fixtures(FixtureSet::Hh3) {
            let text = flag_to_json(&f.flag);
            assert_eq!(flag_from_json(&text).unwrap(), f.flag);
            let d = crate::flag::flag_to_datum(&f.flag).unwrap();
            let dt = datum_to_json(&d);
            assert_eq!(datum_from_json(&dt).unwrap(), d);
            assert_eq!(datum_to_json(&datum_from_json(&dt).unwrap()), dt);
        }
        let w = Witness::rank1(&LambdaElement::new(vec![Poly::parse("D-1").unwrap()]), &crate::poly::int(2)).unwrap();
        assert_eq!(witness_from_json(&witness_to_json(&w)).unwrap(), w);
        let plain = r#"{"u": [["0"]], "v": [["1/2"]]}"#;
        assert_eq!(witness_from_json(plain).unwrap().v_inv(), &[vec![Poly::int(2)]]);
        assert!(witness_from_json(r#"{"u": [["0"]], "v": [["D"]]}"#).is_err());
    }

    #[test]
    fn action_and_reduced() {
        let text = r#"{"side": "right", "rank": 1, "products": [{"i": 0, "j": 0, "terms": [{"k": 0, "poly": "1"}]}]}"#;
        let act = action_from_json(text, 1).unwrap();
        assert_eq!(act.side(), Side::Right);
        assert_eq!(action_from_json(&action_to_json(&act), 1).unwrap(), act);
        let r = ReducedDatum::from_datum(&ExtendingDatum::zero(ConformalAlgebra::cur1(), 1).unwrap());
        assert_eq!(reduced_from_json(&reduced_to_json(&r)).unwrap(), r);
    }
}
