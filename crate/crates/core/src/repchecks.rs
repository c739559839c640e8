//! Left modules, right modules and bimodules over a conformal algebra.
//!
//! Actions are stored on basis vectors and extended by the substitution
//! calculus, so LM1/RM1 hold by construction and only LM2, RM2 and the
//! bimodule compatibility are checked.

use serde::{Deserialize, Serialize};

use crate::conformal::{BilinearMap, ConformalAlgebra, LambdaElement, ProductVariable};
use crate::error::{Error, Result};
use crate::report::{Report, ReportBuilder};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// Action of an algebra of rank `n` on a free module of rank `m`.
///
/// A left action is stored as a map `A × M → M` (table `[i][s]`), a right
/// action as `M × A → M` (table `[s][i]`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearAction {
    side: Side,
    map: BilinearMap,
}

impl BilinearAction {
    pub fn new(side: Side, map: BilinearMap) -> Result<Self> {
        let (alg, module) = match side {
            Side::Left => (map.left_dim(), map.right_dim()),
            Side::Right => (map.right_dim(), map.left_dim()),
        };
        if map.out_dim() != module {
            return Err(Error::RankMismatch(format!(
                "action output has {} coordinates, module rank is {module}",
                map.out_dim()
            )));
        }
        if alg == 0 || module == 0 {
            return Err(Error::ZeroRank);
        }
        if map.contains(crate::poly::Var::Mu) {
            return Err(Error::MuInEntry { what: "action table".into() });
        }
        Ok(BilinearAction { side, map })
    }

    /// The algebra acting on itself by its own product.
    pub fn regular(a: &ConformalAlgebra, side: Side) -> Self {
        BilinearAction { side, map: a.product().clone() }
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn map(&self) -> &BilinearMap {
        &self.map
    }

    pub fn algebra_rank(&self) -> usize {
        match self.side {
            Side::Left => self.map.left_dim(),
            Side::Right => self.map.right_dim(),
        }
    }

    pub fn module_rank(&self) -> usize {
        self.map.out_dim()
    }

    fn expect(&self, side: Side, a: &ConformalAlgebra) -> Result<()> {
        if self.side != side {
            return Err(Error::Invalid(format!("expected a {side:?} action").to_lowercase()));
        }
        if self.algebra_rank() != a.rank() {
            return Err(Error::RankMismatch(format!(
                "action is for rank {}, algebra has rank {}",
                self.algebra_rank(),
                a.rank()
            )));
        }
        Ok(())
    }
}

fn lm2(a: &ConformalAlgebra, act: &BilinearMap, out: &mut ReportBuilder, id: &str) {
    let (l, m, lm) = (ProductVariable::lambda(), ProductVariable::mu(), ProductVariable::lambda_plus_mu());
    let n = a.rank();
    let q = act.out_dim();
    for i in 0..n {
        for j in 0..n {
            let ab = a.mul(&a.e(i), &a.e(j), &l);
            for s in 0..q {
                let v = LambdaElement::basis(q, s);
                let lhs = act.apply(&ab, &v, &lm);
                let rhs = act.apply(&a.e(i), &act.apply(&a.e(j), &v, &m), &l);
                out.record(id, &[i, j, s], &(lhs - rhs));
            }
        }
    }
}

fn rm2(a: &ConformalAlgebra, act: &BilinearMap, out: &mut ReportBuilder, id: &str) {
    let (l, m, lm) = (ProductVariable::lambda(), ProductVariable::mu(), ProductVariable::lambda_plus_mu());
    let n = a.rank();
    let q = act.out_dim();
    for s in 0..q {
        let v = LambdaElement::basis(q, s);
        for i in 0..n {
            let va = act.apply(&v, &a.e(i), &l);
            for j in 0..n {
                let lhs = act.apply(&va, &a.e(j), &lm);
                let rhs = act.apply(&v, &a.mul(&a.e(i), &a.e(j), &m), &l);
                out.record(id, &[s, i, j], &(lhs - rhs));
            }
        }
    }
}

fn compat(a: &ConformalAlgebra, left: &BilinearMap, right: &BilinearMap, out: &mut ReportBuilder, id: &str) {
    let (l, m, lm) = (ProductVariable::lambda(), ProductVariable::mu(), ProductVariable::lambda_plus_mu());
    let n = a.rank();
    let q = left.out_dim();
    for i in 0..n {
        for s in 0..q {
            let v = LambdaElement::basis(q, s);
            let av = left.apply(&a.e(i), &v, &l);
            for j in 0..n {
                let lhs = right.apply(&av, &a.e(j), &lm);
                let rhs = left.apply(&a.e(i), &right.apply(&v, &a.e(j), &m), &l);
                out.record(id, &[i, s, j], &(lhs - rhs));
            }
        }
    }
}

/// `(a ₍λ₎ b) ⇀₍λ+μ₎ v = a ⇀₍λ₎ (b ⇀₍μ₎ v)`.
pub fn check_left_module(a: &ConformalAlgebra, act: &BilinearAction) -> Result<Report> {
    act.expect(Side::Left, a)?;
    let mut b = ReportBuilder::new("left-module");
    lm2(a, &act.map, &mut b, "LM2");
    Ok(b.finish())
}

/// `(v ◁₍λ₎ a) ◁₍λ+μ₎ b = v ◁₍λ₎ (a ₍μ₎ b)`.
pub fn check_right_module(a: &ConformalAlgebra, act: &BilinearAction) -> Result<Report> {
    act.expect(Side::Right, a)?;
    let mut b = ReportBuilder::new("right-module");
    rm2(a, &act.map, &mut b, "RM2");
    Ok(b.finish())
}

/// Both module checks plus `(a ⇀₍λ₎ v) ◁₍λ+μ₎ b = a ⇀₍λ₎ (v ◁₍μ₎ b)`.
pub fn check_bimodule(a: &ConformalAlgebra, left: &BilinearAction, right: &BilinearAction) -> Result<Report> {
    left.expect(Side::Left, a)?;
    right.expect(Side::Right, a)?;
    if left.module_rank() != right.module_rank() {
        return Err(Error::RankMismatch("left and right actions act on modules of different rank".into()));
    }
    let mut b = ReportBuilder::new("bimodule");
    bimodule_into(a, &left.map, &right.map, &mut b, "");
    Ok(b.finish())
}

/// Records LM2, RM2 and BIMOD (each id prefixed) for raw tables.
pub(crate) fn bimodule_into(
    a: &ConformalAlgebra,
    left: &BilinearMap,
    right: &BilinearMap,
    out: &mut ReportBuilder,
    prefix: &str,
) {
    lm2(a, left, out, &format!("{prefix}LM2"));
    rm2(a, right, out, &format!("{prefix}RM2"));
    compat(a, left, right, out, &format!("{prefix}BIMOD"));
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;

    fn scalar_action(side: Side, c: &str) -> BilinearAction {
        let v = LambdaElement::new(vec![Poly::parse(c).unwrap()]);
        BilinearAction::new(side, BilinearMap::from_table(1, 1, 1, vec![vec![v]]).unwrap()).unwrap()
    }

    #[test]
    fn left_module_examples() {
        let c = ConformalAlgebra::cur1();
        assert!(check_left_module(&c, &BilinearAction::regular(&c, Side::Left)).unwrap().passed());
        assert!(check_left_module(&c, &scalar_action(Side::Left, "1")).unwrap().passed());
        let r = check_left_module(&c, &scalar_action(Side::Left, "L")).unwrap();
        assert!(!r.passed());
        // (e ₍λ₎ e) ⇀₍λ+μ₎ x = (λ+μ)x against e ⇀₍λ₎ (μ x) = λμ x
        assert_eq!(r.items[0].residual, vec!["-L*M + L + M".to_string()]);
    }

    #[test]
    fn right_module_examples() {
        let c = ConformalAlgebra::cur1();
        assert!(check_right_module(&c, &BilinearAction::regular(&c, Side::Right)).unwrap().passed());
        assert!(check_right_module(&c, &scalar_action(Side::Right, "1")).unwrap().passed());
        let t = ConformalAlgebra::trivial(1).unwrap();
        let r = check_right_module(&t, &scalar_action(Side::Right, "1")).unwrap();
        assert!(!r.passed());
        assert_eq!(r.items[0].axiom_id, "RM2");
    }

    #[test]
    fn bimodule_examples() {
        let c = ConformalAlgebra::cur1();
        let reg_l = BilinearAction::regular(&c, Side::Left);
        let reg_r = BilinearAction::regular(&c, Side::Right);
        assert!(check_bimodule(&c, &reg_l, &reg_r).unwrap().passed());
        let one_l = scalar_action(Side::Left, "1");
        assert!(check_bimodule(&c, &one_l, &scalar_action(Side::Right, "1")).unwrap().passed());
        assert!(check_bimodule(&c, &one_l, &scalar_action(Side::Right, "0")).unwrap().passed());
    }

    #[test]
    fn side_and_rank_errors() {
        let c = ConformalAlgebra::cur1();
        assert!(check_left_module(&c, &scalar_action(Side::Right, "1")).is_err());
        let two = ConformalAlgebra::trivial(2).unwrap();
        assert!(matches!(check_left_module(&two, &scalar_action(Side::Left, "1")), Err(Error::RankMismatch(_))));
    }

    #[test]
    fn module_permutation_invariance() {
        // Cur1 acting on a rank-2 module: e fixes x1 and kills x2
        let c = ConformalAlgebra::cur1();
        let p = |s: &str| Poly::parse(s).unwrap();
        let make = |a: &str, b: &str| {
            let t = vec![vec![
                LambdaElement::new(vec![p(a), Poly::zero()]),
                LambdaElement::new(vec![Poly::zero(), p(b)]),
            ]];
            BilinearAction::new(Side::Left, BilinearMap::from_table(1, 2, 2, t).unwrap()).unwrap()
        };
        for (a, b) in [("1", "0"), ("L", "0"), ("1", "D")] {
            let r1 = check_left_module(&c, &make(a, b)).unwrap().passed();
            let r2 = check_left_module(&c, &make(b, a)).unwrap().passed();
            assert_eq!(r1, r2);
        }
    }
}
