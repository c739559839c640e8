//! Seeded generators of small algebras, datums and flag datums.
//!
//! Purely random datums almost never satisfy the axioms, so every generator
//! mixes three sources: valid datums (extracted from known associative
//! algebras and moved by random witnesses), valid datums with one entry
//! perturbed, and sparse random tables.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::conformal::{BilinearMap, ConformalAlgebra, LambdaElement};
use crate::equiv::{transform_datum, Witness};
use crate::extend::{build_unified, extract_datum, DatumMap, ExtendingDatum, ReducedDatum, SpecialKind, SplitAlgebra};
use crate::flag::{fixtures, flag_to_datum, flag_transform, FixtureSet, FlagDatum};
use crate::poly::{int, ratio, Monomial, Poly, Rational};

fn cur(table: &[&[&[i64]]]) -> ConformalAlgebra {
    let t: Vec<Vec<Vec<Rational>>> =
        table.iter().map(|r| r.iter().map(|v| v.iter().map(|&x| int(x)).collect()).collect()).collect();
    ConformalAlgebra::cur(&t).expect("well-formed table")
}

/// Known associative algebras of rank 1–3, including unified products of
/// the classification fixtures.
pub fn associative_algebras(rank: usize) -> Vec<ConformalAlgebra> {
    let t1 = ConformalAlgebra::trivial(1).expect("rank 1");
    let c1 = ConformalAlgebra::cur1();
    let mut rank2 = vec![
        ConformalAlgebra::trivial(2).expect("rank 2"),
        c1.direct_sum(&t1),
        c1.direct_sum(&c1),
        // e1 e1 = e2
        cur(&[&[&[0, 1], &[0, 0]], &[&[0, 0], &[0, 0]]]),
        // unit 1 and t with t t = 0
        cur(&[&[&[1, 0], &[0, 1]], &[&[0, 1], &[0, 0]]]),
        // right zero: e_i e_j = e_j
        cur(&[&[&[1, 0], &[0, 1]], &[&[1, 0], &[0, 1]]]),
    ];
    for set in [FixtureSet::Hh2, FixtureSet::Hh3] {
        for f in fixtures(set) {
            rank2.push(build_unified(&flag_to_datum(&f.flag).expect("fixture")).algebra);
        }
    }
    match rank {
        1 => vec![t1, c1],
        2 => rank2,
        3 => {
            // upper triangular 2×2 matrices on E11, E12, E22
            let mut out = vec![cur(&[
                &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 0]],
                &[&[0, 0, 0], &[0, 0, 0], &[0, 1, 0]],
                &[&[0, 0, 0], &[0, 0, 0], &[0, 0, 1]],
            ])];
            for a in &rank2 {
                out.push(a.direct_sum(&t1));
                out.push(a.direct_sum(&c1));
            }
            out
        }
        _ => Vec::new(),
    }
}

pub fn commutative_bases(rank: usize) -> Vec<ConformalAlgebra> {
    associative_algebras(rank).into_iter().filter(|a| a.check_commutativity().passed()).collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Datums `(A, Q)` with `rank A = n`, `rank Q = m` read off known
/// associative algebras of rank `n + m` under every basis ordering.
pub fn valid_datums(n: usize, m: usize) -> Vec<ExtendingDatum> {
    let mut out: Vec<ExtendingDatum> = Vec::new();
    for e in associative_algebras(n + m) {
        for perm in permutations(n + m) {
            let split = SplitAlgebra { algebra: e.permuted(&perm), split: n };
            if let Ok(d) = extract_datum(&split) {
                if !out.contains(&d) {
                    out.push(d);
                }
            }
        }
    }
    out
}

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn coeff(&mut self) -> Rational {
        int(self.rng.gen_range(-2..=2))
    }

    fn nonzero_coeff(&mut self) -> Rational {
        let c = [-2i64, -1, 1, 2][self.rng.gen_range(0..4)];
        int(c)
    }

    /// Sparse polynomial in `λ, ∂` of total degree `≤ deg`, coefficients in `-2..=2`.
    pub fn poly(&mut self, deg: u32) -> Poly {
        if self.rng.gen_bool(0.4) {
            return Poly::zero();
        }
        let mut p = Poly::zero();
        for _ in 0..self.rng.gen_range(1..=2) {
            let t = self.rng.gen_range(0..=deg);
            let i = self.rng.gen_range(0..=t);
            p += Poly::term(Monomial([i, 0, t - i]), self.coeff());
        }
        p
    }

    pub fn poly_in_d(&mut self, deg: u32) -> Poly {
        let mut p = Poly::zero();
        for k in 0..=deg {
            if self.rng.gen_bool(0.5) {
                p += Poly::term(Monomial([0, 0, k]), self.coeff());
            }
        }
        p
    }

    pub fn element(&mut self, dim: usize, deg: u32) -> LambdaElement {
        LambdaElement::new((0..dim).map(|_| self.poly(deg)).collect())
    }

    pub fn map(&mut self, dims: (usize, usize, usize), deg: u32) -> BilinearMap {
        let (l, r, o) = dims;
        let table = (0..l).map(|_| (0..r).map(|_| self.element(o, deg)).collect()).collect();
        BilinearMap::from_table(l, r, o, table).expect("dimensions")
    }

    fn beta(&mut self) -> Rational {
        [int(1), int(-1), int(2), int(-2), ratio(1, 2), ratio(-1, 2)][self.rng.gen_range(0..6)].clone()
    }

    /// Random witness with constant or linear `u` and a unimodular-times-diagonal `v`.
    pub fn witness(&mut self, n: usize, m: usize, with_u: bool) -> Witness {
        let u_deg = self.rng.gen_range(0..=1);
        let u: Vec<Vec<Poly>> = (0..m)
            .map(|_| (0..n).map(|_| if with_u { self.poly_in_d(u_deg) } else { Poly::zero() }).collect())
            .collect();
        let mut v: Vec<Vec<Poly>> =
            (0..m).map(|i| (0..m).map(|j| if i == j { Poly::constant(self.beta()) } else { Poly::zero() }).collect()).collect();
        if m == 2 && self.rng.gen_bool(0.5) {
            let (i, j) = if self.rng.gen_bool(0.5) { (0, 1) } else { (1, 0) };
            v[i][j] = self.poly_in_d(1);
        }
        Witness::new(u, v, None).expect("triangular with nonzero diagonal")
    }

    fn perturb(&mut self, d: &mut ExtendingDatum, allowed: &[DatumMap]) {
        let k = *allowed.choose(&mut self.rng).expect("nonempty");
        let (l, r, o) = k.dims(d.n(), d.q_rank());
        let (x, y, c) = (self.rng.gen_range(0..l), self.rng.gen_range(0..r), self.rng.gen_range(0..o));
        let mut v = d.map(k).get(x, y).clone();
        let deg = self.rng.gen_range(0..=2);
        let i = self.rng.gen_range(0..=deg);
        let c2 = self.nonzero_coeff();
        v.coords_mut()[c] += Poly::term(Monomial([i, 0, deg - i]), c2);
        d.set_value(k, x, y, v).expect("shape");
    }

    /// Datum over a known associative base of rank `n` with `rank Q = m`.
    /// Valid datums are drawn only when `n + m <= 3`; larger shapes are random.
    pub fn datum(&mut self, n: usize, m: usize) -> ExtendingDatum {
        let roll = self.rng.gen_range(0..4);
        let pool = if roll == 0 { Vec::new() } else { valid_datums(n, m) };
        if pool.is_empty() {
            let bases = associative_algebras(n);
            let base = bases.choose(&mut self.rng).expect("bases").clone();
            let mut d = ExtendingDatum::zero(base, m).expect("rank");
            for k in DatumMap::ALL {
                let map = self.map(k.dims(n, m), 2);
                d.set(k, map).expect("dims");
            }
            return d;
        }
        let mut d = pool.choose(&mut self.rng).expect("nonempty").clone();
        if self.rng.gen_bool(0.7) {
            let w = self.witness(n, m, true);
            d = transform_datum(&d, &w).expect("ranks");
        }
        if roll == 1 {
            self.perturb(&mut d, &DatumMap::ALL);
        }
        d
    }

    /// Datum whose maps listed by `kind` vanish.
    pub fn special_datum(&mut self, kind: SpecialKind, n: usize, m: usize) -> ExtendingDatum {
        let free: Vec<DatumMap> = DatumMap::ALL.into_iter().filter(|k| !kind.trivial_maps().contains(k)).collect();
        let roll = self.rng.gen_range(0..4);
        let pool: Vec<ExtendingDatum> = valid_datums(n, m).into_iter().filter(|d| kind.fits(d)).collect();
        if roll == 0 || pool.is_empty() {
            let base = associative_algebras(n).choose(&mut self.rng).expect("bases").clone();
            let mut d = ExtendingDatum::zero(base, m).expect("rank");
            for &k in &free {
                let map = self.map(k.dims(n, m), 2);
                d.set(k, map).expect("dims");
            }
            return d;
        }
        let mut d = pool.choose(&mut self.rng).expect("pool").clone();
        let w = self.witness(n, m, true);
        let moved = transform_datum(&d, &w).expect("ranks");
        if kind.fits(&moved) {
            d = moved;
        } else {
            d = transform_datum(&d, &self.witness(n, m, false)).expect("ranks");
        }
        if roll == 1 {
            self.perturb(&mut d, &free);
        }
        d
    }

    /// Reduced datum over a commutative base of rank `n`.
    pub fn reduced_datum(&mut self, n: usize, m: usize) -> ReducedDatum {
        let roll = self.rng.gen_range(0..4);
        let pool: Vec<ExtendingDatum> =
            valid_datums(n, m).into_iter().filter(|d| build_unified(d).algebra.check_commutativity().passed()).collect();
        if roll == 0 || pool.is_empty() {
            let base = commutative_bases(n).choose(&mut self.rng).expect("bases").clone();
            let maps: Vec<BilinearMap> =
                [DatumMap::Ltri, DatumMap::Rtri, DatumMap::F, DatumMap::Circ].iter().map(|k| self.map(k.dims(n, m), 2)).collect();
            let [lt, rt, f, c]: [BilinearMap; 4] = maps.try_into().expect("four maps");
            return ReducedDatum::new(base, m, lt, rt, f, c).expect("dims");
        }
        let mut d = pool.choose(&mut self.rng).expect("pool").clone();
        if self.rng.gen_bool(0.7) {
            d = transform_datum(&d, &self.witness(n, m, true)).expect("ranks");
        }
        if roll == 1 {
            self.perturb(&mut d, &[DatumMap::Ltri, DatumMap::Rtri, DatumMap::F, DatumMap::Circ]);
        }
        ReducedDatum::from_datum(&d)
    }

    /// Rank-1 flag datum over the trivial algebra or `Cur₁`.
    pub fn flag(&mut self) -> FlagDatum {
        let set = if self.rng.gen_bool(0.5) { FixtureSet::Hh2 } else { FixtureSet::Hh3 };
        let roll = self.rng.gen_range(0..4);
        if roll == 0 {
            let mut fd = FlagDatum::zero(set.base());
            fd.h[0] = self.poly(2);
            fd.g[0] = self.poly(2);
            fd.d[0] = self.element(1, 2);
            fd.t[0] = self.element(1, 2);
            fd.q0 = self.element(1, 2);
            fd.p = self.poly(2);
            return fd;
        }
        let fx = fixtures(set);
        let mut fd = fx.choose(&mut self.rng).expect("fixtures").flag.clone();
        if self.rng.gen_bool(0.7) {
            let t0 = LambdaElement::new(vec![self.poly_in_d(1)]);
            let b = self.beta();
            fd = flag_transform(&fd, &t0, &b).expect("nonzero beta");
        }
        if roll == 1 {
            let bump = Poly::term(Monomial([self.rng.gen_range(0..=1), 0, self.rng.gen_range(0..=1)]), self.nonzero_coeff());
            match self.rng.gen_range(0..6) {
                0 => fd.h[0] += bump,
                1 => fd.d[0].coords_mut()[0] += bump,
                2 => fd.g[0] += bump,
                3 => fd.t[0].coords_mut()[0] += bump,
                4 => fd.q0.coords_mut()[0] += bump,
                _ => fd.p += bump,
            }
        }
        fd
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extend::check_ace;

    #[test]
    fn known_algebras_are_associative() {
        for r in 1..=3 {
            for a in associative_algebras(r) {
                assert!(a.check_associativity().passed(), "{a:?}");
            }
        }
    }

    #[test]
    fn pools_are_valid() {
        for (n, m) in [(1, 1), (2, 1), (1, 2)] {
            let pool = valid_datums(n, m);
            assert!(pool.len() >= 4, "({n}, {m})");
            assert!(pool.iter().all(|d| check_ace(d).passed()));
        }
    }

    #[test]
    fn seeded_is_deterministic() {
        let a: Vec<_> = (0..5).map({
            let mut s = Sampler::new(7);
            move |_| s.datum(1, 1)
        }).collect();
        let b: Vec<_> = (0..5).map({
            let mut s = Sampler::new(7);
            move |_| s.datum(1, 1)
        }).collect();
        assert_eq!(a, b);
    }
}
