//! Exact linear algebra over ℚ and a linearising solver for small quadratic
//! systems.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::poly::Rational;

/// Affine solution set `p + N t` of a linear system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolution {
    pub particular: Vec<Rational>,
    /// Null-space basis, one vector per free parameter.
    pub kernel: Vec<Vec<Rational>>,
}

/// Solves `rows · x = rhs` by Gauss-Jordan elimination. `None` when
/// inconsistent.
pub fn solve_linear(rows: &[Vec<Rational>], rhs: &[Rational], nvars: usize) -> Option<AffineSolution> {
    let mut m: Vec<Vec<Rational>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.clone();
            row.resize(nvars, Rational::zero());
            row.push(b.clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..nvars {
        let Some(pr) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(r, pr);
        let inv = m[r][col].recip();
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in col..=nvars {
                    let delta = &f * &m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    if m[r..].iter().any(|row| !row[nvars].is_zero()) {
        return None;
    }
    let mut particular = vec![Rational::zero(); nvars];
    for (i, &c) in pivots.iter().enumerate() {
        particular[c] = m[i][nvars].clone();
    }
    let free: Vec<usize> = (0..nvars).filter(|c| !pivots.contains(c)).collect();
    let kernel = free
        .iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); nvars];
            v[f] = Rational::one();
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = -m[i][f].clone();
            }
            v
        })
        .collect();
    Some(AffineSolution { particular, kernel })
}

/// `constant + linear·x + Σ quad[(j,l)] x_j x_l = 0` with `j ≤ l`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QuadEq {
    pub constant: Rational,
    pub linear: Vec<Rational>,
    pub quad: BTreeMap<(usize, usize), Rational>,
}

impl QuadEq {
    pub fn new(nvars: usize) -> Self {
        QuadEq { constant: Rational::zero(), linear: vec![Rational::zero(); nvars], quad: BTreeMap::new() }
    }

    pub fn add_quad(&mut self, j: usize, l: usize, c: Rational) {
        let key = if j <= l { (j, l) } else { (l, j) };
        let e = self.quad.entry(key).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.quad.remove(&key);
        }
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        let mut v = self.constant.clone();
        for (c, xi) in self.linear.iter().zip(x) {
            v += c * xi;
        }
        for ((j, l), c) in &self.quad {
            v += c * &x[*j] * &x[*l];
        }
        v
    }

    /// The equation in the parameters `t` of `x = p + N t`.
    fn reparametrise(&self, p: &[Rational], n: &[Vec<Rational>]) -> QuadEq {
        let k = n.len();
        let mut out = QuadEq::new(k);
        out.constant = self.eval(p);
        let mut grad = self.linear.clone();
        for ((j, l), c) in &self.quad {
            grad[*j] += c * &p[*l];
            grad[*l] += c * &p[*j];
        }
        for (a, col) in n.iter().enumerate() {
            out.linear[a] = grad.iter().zip(col).map(|(g, v)| g * v).sum();
        }
        for ((j, l), c) in &self.quad {
            for a in 0..k {
                if n[a][*j].is_zero() {
                    continue;
                }
                for b in 0..k {
                    let w = c * &n[a][*j] * &n[b][*l];
                    if !w.is_zero() {
                        out.add_quad(a, b, w);
                    }
                }
            }
        }
        out
    }
}

/// Looks for a rational root of a quadratic system by repeatedly solving
/// the equations that are currently linear and substituting their general
/// solution. Remaining free parameters are set to zero. Any returned point
/// satisfies every equation; `None` means no root was found this way.
pub fn solve_quadratic(eqs: &[QuadEq], nvars: usize) -> Option<Vec<Rational>> {
    let mut p = vec![Rational::zero(); nvars];
    let mut n: Vec<Vec<Rational>> = (0..nvars)
        .map(|i| (0..nvars).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect();
    loop {
        if n.is_empty() {
            break;
        }
        let k = n.len();
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for e in eqs {
            let t = e.reparametrise(&p, &n);
            if !t.quad.is_empty() {
                continue;
            }
            if t.linear.iter().all(Zero::is_zero) {
                if !t.constant.is_zero() {
                    return None;
                }
                continue;
            }
            rhs.push(-t.constant.clone());
            rows.push(t.linear);
        }
        if rows.is_empty() {
            break;
        }
        let sol = solve_linear(&rows, &rhs, k)?;
        let lift = |v: &[Rational]| -> Vec<Rational> {
            (0..nvars).map(|i| n.iter().zip(v).map(|(col, t)| &col[i] * t).sum()).collect()
        };
        let shift = lift(&sol.particular);
        for (pi, si) in p.iter_mut().zip(shift) {
            *pi += si;
        }
        n = sol.kernel.iter().map(|v| lift(v)).collect();
    }
    eqs.iter().all(|e| e.eval(&p).is_zero()).then_some(p)
}
