//! Symbolic ground truth: sparse polynomials in `x_1..x_n, y_1..y_n`,
//! symmetric and alternating basis elements, the trailing-term valuation and
//! the ideal-power and Newton-polytope tests that the semigroup module is
//! checked against.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::lp;
use crate::polygon::NewtonPolygon;
use crate::polytope::{HPolyhedron, HRow};
use crate::ratcore::{int, QVector, Rational};
use crate::semigroup::ValVector;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("the zero polynomial has no valuation")]
    ZeroPolynomial,
    #[error("determinant of a tuple with a repeated point {0:?}")]
    RepeatedPoint((u32, u32)),
    #[error("tuple has {got} points, expected {expected}")]
    TupleSize { expected: usize, got: usize },
    #[error("trailing term of a product is {actual}, expected {expected}")]
    ValuationMismatch { expected: ValVector, actual: ValVector },
}

/// Sparse polynomial over the rationals. Exponent vectors list the `x`
/// exponents then the `y` exponents; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MPoly {
    n: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl MPoly {
    pub fn zero(n: usize) -> Self {
        MPoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        let mut p = MPoly::zero(n);
        p.add_term(vec![0; 2 * n], c);
        p
    }

    pub fn one(n: usize) -> Self {
        MPoly::constant(n, Rational::one())
    }

    pub fn monomial(n: usize, exps: Vec<u32>, c: Rational) -> Self {
        assert_eq!(exps.len(), 2 * n, "exponent vector length");
        let mut p = MPoly::zero(n);
        p.add_term(exps, c);
        p
    }

    /// `x_i`, zero-based.
    pub fn x(n: usize, i: usize) -> Self {
        let mut e = vec![0; 2 * n];
        e[i] = 1;
        MPoly::monomial(n, e, Rational::one())
    }

    /// `y_i`, zero-based.
    pub fn y(n: usize, i: usize) -> Self {
        let mut e = vec![0; 2 * n];
        e[n + i] = 1;
        MPoly::monomial(n, e, Rational::one())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, exps: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exps).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            let key = self
                .terms
                .iter()
                .find(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone())
                .expect("just inserted");
            self.terms.remove(&key);
        }
    }

    pub fn pow(&self, k: u32) -> MPoly {
        (0..k).fold(MPoly::one(self.n), |acc, _| &acc * self)
    }

    /// Exponent vector of the lexicographically smallest term, with
    /// `x_1 > ... > x_n > y_1 > ... > y_n`.
    pub fn valuation(&self) -> Result<ValVector, OracleError> {
        let (e, _) = self.terms.iter().next().ok_or(OracleError::ZeroPolynomial)?;
        let coords: Vec<i64> = e.iter().map(|&v| v as i64).collect();
        Ok(ValVector::from_coords(&coords).expect("even length"))
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, other: &MPoly) -> MPoly {
        assert_eq!(self.n, other.n);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            n: self.n,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, other: &MPoly) -> MPoly {
        self + &(-other)
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, other: &MPoly) -> MPoly {
        assert_eq!(self.n, other.n);
        let mut acc: HashMap<Vec<u32>, Rational> = HashMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_insert_with(Rational::zero) += c1 * c2;
            }
        }
        MPoly {
            n: self.n,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (k, &p) in e.iter().enumerate() {
                if p == 0 {
                    continue;
                }
                let var = if k < self.n {
                    format!("x{}", k + 1)
                } else {
                    format!("y{}", k - self.n + 1)
                };
                if p == 1 {
                    write!(f, "*{var}")?;
                } else {
                    write!(f, "*{var}^{p}")?;
                }
            }
        }
        Ok(())
    }
}

/// `n` lattice points of the quadrant, kept in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointTuple {
    points: Vec<(u32, u32)>,
}

impl PointTuple {
    pub fn new(mut points: Vec<(u32, u32)>) -> Self {
        points.sort();
        PointTuple { points }
    }

    pub fn points(&self) -> &[(u32, u32)] {
        &self.points
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn is_distinct(&self) -> bool {
        self.points.windows(2).all(|w| w[0] != w[1])
    }

    /// The concatenated coordinates `(p_1..p_n, q_1..q_n)`.
    pub fn as_val(&self) -> ValVector {
        ValVector {
            a: self.points.iter().map(|p| p.0 as i64).collect(),
            b: self.points.iter().map(|p| p.1 as i64).collect(),
        }
    }
}

/// Calls `visit(perm, sign)` for every permutation of `0..n`.
fn for_each_permutation(n: usize, visit: &mut dyn FnMut(&[usize], i64)) {
    fn rec(k: usize, perm: &mut Vec<usize>, sign: i64, visit: &mut dyn FnMut(&[usize], i64)) {
        if k == perm.len() {
            visit(perm, sign);
            return;
        }
        for i in k..perm.len() {
            perm.swap(k, i);
            rec(k + 1, perm, if i == k { sign } else { -sign }, visit);
            perm.swap(k, i);
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    rec(0, &mut perm, 1, visit);
}

fn assigned_monomial(points: &[(u32, u32)], perm: &[usize]) -> Vec<u32> {
    let n = points.len();
    let mut e = vec![0; 2 * n];
    for (i, &j) in perm.iter().enumerate() {
        e[i] = points[j].0;
        e[n + i] = points[j].1;
    }
    e
}

/// Sum of the distinct monomials `Π x_i^{p_σ(i)} y_i^{q_σ(i)}`.
pub fn monomial_symmetric(t: &PointTuple) -> MPoly {
    let n = t.n();
    let mut seen = BTreeSet::new();
    for_each_permutation(n, &mut |perm, _| {
        seen.insert(assigned_monomial(&t.points, perm));
    });
    MPoly {
        n,
        terms: seen.into_iter().map(|e| (e, Rational::one())).collect(),
    }
}

/// `det(x_i^{p_j} y_i^{q_j})`, fully expanded.
pub fn determinant(t: &PointTuple) -> Result<MPoly, OracleError> {
    if let Some(w) = t.points.windows(2).find(|w| w[0] == w[1]) {
        return Err(OracleError::RepeatedPoint(w[0]));
    }
    let n = t.n();
    let mut out = MPoly::zero(n);
    for_each_permutation(n, &mut |perm, sign| {
        out.add_term(assigned_monomial(&t.points, perm), int(sign));
    });
    Ok(out)
}

fn binomial(n: u32, k: u32) -> Rational {
    let mut acc = Rational::one();
    for i in 0..k {
        acc = acc * int((n - i) as i64) / int((i + 1) as i64);
    }
    acc
}

/// Whether `f` lies in `J^r`, the intersection over pairs `i < j` of
/// `(x_i - x_j, y_i - y_j)^r`: after `x_j -> x_i + s`, `y_j -> y_i + t`
/// every surviving term must have `s`-`t` degree at least `r`.
pub fn jr_member(f: &MPoly, r: u32) -> bool {
    let n = f.n;
    for i in 0..n {
        for j in i + 1..n {
            let mut acc: HashMap<(Vec<u32>, u32), Rational> = HashMap::new();
            for (e, c) in &f.terms {
                let (ex, ey) = (e[j], e[n + j]);
                for ks in 0..=ex {
                    for kt in 0..=ey {
                        let mut rest = e.clone();
                        rest[j] = 0;
                        rest[n + j] = 0;
                        rest[i] += ex - ks;
                        rest[n + i] += ey - kt;
                        let coeff = c * binomial(ex, ks) * binomial(ey, kt);
                        *acc.entry((rest, ks + kt)).or_insert_with(Rational::zero) += coeff;
                    }
                }
            }
            if acc.iter().any(|((_, deg), c)| *deg < r && !c.is_zero()) {
                return false;
            }
        }
    }
    true
}

/// All sorted tuples of `n` distinct points in `[0, p_max] x [0, q_max]`.
pub fn distinct_tuples_in_box(n: usize, p_max: u32, q_max: u32) -> Vec<PointTuple> {
    let pool: Vec<(u32, u32)> = (0..=p_max).flat_map(|p| (0..=q_max).map(move |q| (p, q))).collect();
    distinct_tuples_from(n, &pool)
}

/// All sorted tuples of `n` distinct points from `pool`.
pub fn distinct_tuples_from(n: usize, pool: &[(u32, u32)]) -> Vec<PointTuple> {
    let mut pool = pool.to_vec();
    pool.sort();
    pool.dedup();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(start: usize, n: usize, pool: &[(u32, u32)], cur: &mut Vec<(u32, u32)>, out: &mut Vec<PointTuple>) {
        if cur.len() == n {
            out.push(PointTuple { points: cur.clone() });
            return;
        }
        for k in start..pool.len() {
            cur.push(pool[k]);
            rec(k + 1, n, pool, cur, out);
            cur.pop();
        }
    }
    rec(0, n, &pool, &mut cur, &mut out);
    out
}

/// Valuations of the determinants over the given tuples, from their
/// expansions.
pub fn determinant_valuations(tuples: &[PointTuple]) -> BTreeSet<ValVector> {
    tuples
        .iter()
        .map(|t| determinant(t).expect("distinct").valuation().expect("nonzero"))
        .collect()
}

/// `r`-fold sums of members of `base` that stay inside the box
/// `every p_i <= p_max, q_i <= q_max`; with `r = 0` the result is `{0}`.
pub fn minkowski_power_in_box(base: &BTreeSet<ValVector>, n: usize, r: u32, p_max: i64, q_max: i64) -> BTreeSet<ValVector> {
    let inside = |v: &ValVector| v.a.iter().all(|&p| p <= p_max) && v.b.iter().all(|&q| q <= q_max);
    // index the base by its p part so each step only visits compatible summands
    let mut by_p: BTreeMap<Vec<i64>, Vec<Vec<i64>>> = BTreeMap::new();
    for v in base.iter().filter(|v| inside(v)) {
        by_p.entry(v.a.clone()).or_default().push(v.b.clone());
    }
    let mut cur: BTreeSet<ValVector> = std::iter::once(ValVector::zero(n)).collect();
    for _ in 0..r {
        let mut next = BTreeSet::new();
        for s in &cur {
            for (pa, qs) in &by_p {
                if pa.iter().zip(&s.a).any(|(x, y)| x + y > p_max) {
                    continue;
                }
                let a: Vec<i64> = pa.iter().zip(&s.a).map(|(x, y)| x + y).collect();
                for qb in qs {
                    if qb.iter().zip(&s.b).any(|(x, y)| x + y > q_max) {
                        continue;
                    }
                    let b = qb.iter().zip(&s.b).map(|(x, y)| x + y).collect();
                    next.insert(ValVector { a: a.clone(), b });
                }
            }
        }
        cur = next;
    }
    cur
}

/// Valuations of products of `r` determinants whose valuation lies in the
/// box, using `ν(fg) = ν(f) + ν(g)`. The determinant valuations themselves
/// come from expanded polynomials.
pub fn valuation_set_ar(n: usize, r: u32, p_max: u32, q_max: u32) -> BTreeSet<ValVector> {
    if r == 0 {
        // A^0 is the symmetric polynomials: weakly increasing tuples
        return weak_tuples_in_box(n, p_max, q_max)
            .iter()
            .map(|t| monomial_symmetric(t).valuation().expect("nonzero"))
            .collect();
    }
    let g1 = determinant_valuations(&distinct_tuples_in_box(n, p_max, q_max));
    minkowski_power_in_box(&g1, n, r, p_max as i64, q_max as i64)
}

/// All sorted tuples of `n` points in the box, repeats allowed.
pub fn weak_tuples_in_box(n: usize, p_max: u32, q_max: u32) -> Vec<PointTuple> {
    let pool: Vec<(u32, u32)> = (0..=p_max).flat_map(|p| (0..=q_max).map(move |q| (p, q))).collect();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(start: usize, n: usize, pool: &[(u32, u32)], cur: &mut Vec<(u32, u32)>, out: &mut Vec<PointTuple>) {
        if cur.len() == n {
            out.push(PointTuple { points: cur.clone() });
            return;
        }
        for k in start..pool.len() {
            cur.push(pool[k]);
            rec(k, n, pool, cur, out);
            cur.pop();
        }
    }
    rec(0, n, &pool, &mut cur, &mut out);
    out
}

/// Multiplies out products of `r` determinants and checks that each
/// trailing term is the sum of the factors' valuations. Factors are taken
/// from `tuples` in a fixed stride pattern; returns how many products were
/// expanded.
pub fn verify_product_valuations(tuples: &[PointTuple], r: usize, count: usize) -> Result<usize, OracleError> {
    if tuples.is_empty() || r == 0 {
        return Ok(0);
    }
    let n = tuples[0].n();
    let len = tuples.len();
    for k in 0..count {
        let mut product = MPoly::one(n);
        let mut expected = ValVector::zero(n);
        for f in 0..r {
            let t = &tuples[(k * 7919 + f * 104_729 + k * f * 31) % len];
            let d = determinant(t)?;
            expected = expected.add(&d.valuation()?);
            product = &product * &d;
        }
        let actual = product.valuation()?;
        if actual != expected {
            return Err(OracleError::ValuationMismatch { expected, actual });
        }
    }
    Ok(count)
}

/// The bounds `Σ_{i<j, p_j-p_i<r} (r-p_j+p_i)` and
/// `Σ_{k>j, p_k-p_j<r} (r-p_k+p_j)` around column `j`.
fn column_spread(p: &[i64], j: usize, r: i64) -> (i64, i64) {
    let below = p[..j].iter().filter(|&&pi| p[j] - pi < r).map(|&pi| r - p[j] + pi).sum();
    let above = p[j + 1..].iter().filter(|&&pk| pk - p[j] < r).map(|&pk| r - pk + p[j]).sum();
    (below, above)
}

fn in_convex_hull(points: &[(i64, i64)], target: (i64, i64)) -> bool {
    // λ >= 0 with Σλ = 1 and Σλ point = target
    let m = points.len();
    let mut rows = Vec::new();
    for k in 0..m {
        rows.push(HRow::new(QVector::unit(m, k), Rational::zero()));
    }
    let mut eq = |coef: Vec<Rational>, rhs: Rational| {
        rows.push(HRow::new(QVector(coef.clone()), rhs.clone()));
        rows.push(HRow::new(QVector(coef.iter().map(|c| -c).collect()), -rhs));
    };
    eq(vec![Rational::one(); m], Rational::one());
    eq(points.iter().map(|p| int(p.0)).collect(), int(target.0));
    eq(points.iter().map(|p| int(p.1)).collect(), int(target.1));
    let h = HPolyhedron::new(m, rows).expect("rows are nonzero");
    lp::feasible_point(&h).is_some()
}

/// Checks that the Newton polytope of `f` reaches the predicted points
/// `(p_j, q_j - below_j)` and `(p_j, q_j + above_j)` in each `(a_j, b_j)`
/// projection, where `(p, q) = ν(f)`.
pub fn newton_polytope_bounds(f: &MPoly, r: i64) -> Result<bool, OracleError> {
    let v = f.valuation()?;
    let n = f.n;
    for j in 0..n {
        let (below, above) = column_spread(&v.a, j, r);
        let proj: BTreeSet<(i64, i64)> = f.terms.keys().map(|e| (e[j] as i64, e[n + j] as i64)).collect();
        let proj: Vec<(i64, i64)> = proj.into_iter().collect();
        for target in [(v.a[j], v.b[j] - below), (v.a[j], v.b[j] + above)] {
            if !in_convex_hull(&proj, target) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether every term of `f` has each `(deg_{x_i}, deg_{y_i})` inside `p`.
pub fn toric_restriction_filter(f: &MPoly, p: &NewtonPolygon) -> bool {
    let n = f.n;
    f.terms.keys().all(|e| (0..n).all(|i| p.contains(&int(e[i] as i64), &int(e[n + i] as i64))))
}

/// Valuations of the products of `r` determinants over lattice points of
/// `p` (symmetric monomials when `r = 0`) that survive
/// [`toric_restriction_filter`]. Every product is expanded.
pub fn toric_product_valuations(n: usize, r: u32, p: &NewtonPolygon) -> BTreeSet<ValVector> {
    let pts: Vec<(u32, u32)> = p
        .lattice_points()
        .expect("bounded polygon")
        .into_iter()
        .map(|(a, b)| (a as u32, b as u32))
        .collect();
    if r == 0 {
        let pmax = pts.iter().map(|p| p.0).max().unwrap_or(0);
        let qmax = pts.iter().map(|p| p.1).max().unwrap_or(0);
        return weak_tuples_in_box(n, pmax, qmax)
            .into_iter()
            .filter(|t| t.points().iter().all(|q| pts.contains(q)))
            .map(|t| monomial_symmetric(&t).valuation().expect("nonzero"))
            .collect();
    }
    let dets: Vec<MPoly> = distinct_tuples_from(n, &pts)
        .iter()
        .map(|t| determinant(t).expect("distinct"))
        .collect();
    let mut out = BTreeSet::new();
    fn rec(start: usize, left: u32, dets: &[MPoly], p: &NewtonPolygon, acc: &MPoly, out: &mut BTreeSet<ValVector>) {
        if left == 0 {
            if toric_restriction_filter(acc, p) {
                out.insert(acc.valuation().expect("nonzero"));
            }
            return;
        }
        for k in start..dets.len() {
            rec(k, left - 1, dets, p, &(acc * &dets[k]), out);
        }
    }
    rec(0, r, &dets, p, &MPoly::one(n), &mut out);
    out
}
