//! Polyhedral bodies: the inequality systems for the plane and toric
//! Hilbert schemes, vertex enumeration, exact volume, slices and the cell
//! count of the bounded part.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lp::{self, LPStatus};
use crate::polygon::{NewtonPolygon, PolygonError, PolygonFamily, SurfacePreset};
use crate::ratcore::{affine_rank, int, integer_direction, primitive, rational_str, QVector, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolytopeError {
    #[error("row {row} has length {got}, expected {dim}")]
    Dimension { row: usize, dim: usize, got: usize },
    #[error("row {0} reads 0 >= positive constant; the system is empty")]
    ContradictoryRow(usize),
    #[error("volume is only defined for bounded bodies; this one has {rays} rays and {lineality} lineality directions")]
    Unbounded { rays: usize, lineality: usize },
    #[error("slice parameter must be nonnegative, got {0}")]
    NegativeSlice(Rational),
    #[error("slicing needs an even dimension, got {0}")]
    OddDimension(usize),
    #[error(transparent)]
    Polygon(#[from] PolygonError),
}

/// `normal · x >= offset`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HRow {
    pub normal: QVector,
    #[serde(with = "rational_str")]
    pub offset: Rational,
}

impl HRow {
    pub fn new(normal: QVector, offset: Rational) -> Self {
        HRow { normal, offset }
    }

    pub fn holds_at(&self, x: &QVector) -> bool {
        self.normal.dot(x) >= self.offset
    }

    pub fn is_tight_at(&self, x: &QVector) -> bool {
        self.normal.dot(x) == self.offset
    }

    /// The same half-space with a primitive integer normal.
    fn canonical(&self) -> Option<HRow> {
        let k = self.normal.as_slice().iter().position(|v| !v.is_zero())?;
        let dir = integer_direction(self.normal.as_slice());
        let lambda = &self.normal[k] / Rational::from_integer(dir[k].clone());
        Some(HRow {
            normal: QVector(dir.into_iter().map(Rational::from_integer).collect()),
            offset: &self.offset / lambda,
        })
    }
}

impl fmt::Display for HRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} . x >= {}", self.normal, self.offset)
    }
}

/// Finite intersection of closed half-spaces in `Q^dim`.
///
/// Rows are stored with primitive integer normals; among rows with the same
/// normal only the strongest is kept.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HPolyhedron {
    dim: usize,
    rows: Vec<HRow>,
}

impl HPolyhedron {
    pub fn new(dim: usize, rows: Vec<HRow>) -> Result<Self, PolytopeError> {
        let mut out = HPolyhedron {
            dim,
            rows: Vec::with_capacity(rows.len()),
        };
        let mut seen: HashMap<QVector, usize> = HashMap::new();
        for (i, row) in rows.into_iter().enumerate() {
            if row.normal.dim() != dim {
                return Err(PolytopeError::Dimension {
                    row: i,
                    dim,
                    got: row.normal.dim(),
                });
            }
            let Some(row) = row.canonical() else {
                if row.offset.is_positive() {
                    return Err(PolytopeError::ContradictoryRow(i));
                }
                continue;
            };
            match seen.get(&row.normal) {
                Some(&at) => {
                    if row.offset > out.rows[at].offset {
                        out.rows[at].offset = row.offset;
                    }
                }
                None => {
                    seen.insert(row.normal.clone(), out.rows.len());
                    out.rows.push(row);
                }
            }
        }
        Ok(out)
    }

    /// All of `Q^dim`.
    pub fn whole_space(dim: usize) -> Self {
        HPolyhedron { dim, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[HRow] {
        &self.rows
    }

    pub fn contains(&self, x: &QVector) -> bool {
        self.rows.iter().all(|r| r.holds_at(x))
    }

    pub fn with_rows(&self, extra: impl IntoIterator<Item = HRow>) -> Result<Self, PolytopeError> {
        let rows = self.rows.iter().cloned().chain(extra).collect();
        HPolyhedron::new(self.dim, rows)
    }

    pub fn intersect(&self, other: &HPolyhedron) -> Result<Self, PolytopeError> {
        self.with_rows(other.rows.iter().cloned())
    }

    pub fn is_empty(&self) -> bool {
        lp::feasible_point(self).is_none()
    }

    /// Whether every point of `other` lies in `self`.
    pub fn contains_polyhedron(&self, other: &HPolyhedron) -> bool {
        assert_eq!(self.dim, other.dim);
        if other.is_empty() {
            return true;
        }
        self.rows.iter().all(|row| {
            let res = lp::minimize(other, &row.normal);
            res.status == LPStatus::Optimal && res.value.expect("optimal") >= row.offset
        })
    }

    /// Set equality by double inclusion.
    pub fn same_set(&self, other: &HPolyhedron) -> bool {
        self.contains_polyhedron(other) && other.contains_polyhedron(self)
    }

    /// Whether the body is bounded (empty bodies count as bounded).
    pub fn is_bounded(&self) -> bool {
        if self.is_empty() {
            return true;
        }
        (0..self.dim).all(|k| {
            [Rational::one(), -Rational::one()].into_iter().all(|s| {
                let obj = QVector::unit(self.dim, k).scale(&s);
                lp::minimize(self, &obj).status == LPStatus::Optimal
            })
        })
    }

    /// Drops rows implied by the others, one at a time.
    pub fn remove_redundant(&self) -> HPolyhedron {
        let mut keep: Vec<HRow> = self.rows.clone();
        let mut i = 0;
        while i < keep.len() {
            let others = HPolyhedron {
                dim: self.dim,
                rows: keep.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, r)| r.clone()).collect(),
            };
            let res = lp::minimize(&others, &keep[i].normal);
            let redundant = match res.status {
                LPStatus::Optimal => res.value.expect("optimal") >= keep[i].offset,
                LPStatus::Infeasible => true,
                LPStatus::Unbounded => false,
            };
            if redundant {
                keep.remove(i);
            } else {
                i += 1;
            }
        }
        HPolyhedron { dim: self.dim, rows: keep }
    }

    /// The part with `a_1 >= t`, translated by `-t` in every `a`
    /// coordinate. On bodies with `a` nondecreasing this is the whole region
    /// where all `a_i >= t`.
    pub fn slice_shift(&self, t: &Rational) -> Result<HPolyhedron, PolytopeError> {
        if t.is_negative() {
            return Err(PolytopeError::NegativeSlice(t.clone()));
        }
        if self.dim % 2 != 0 {
            return Err(PolytopeError::OddDimension(self.dim));
        }
        if t.is_zero() {
            return Ok(self.clone());
        }
        let n = self.dim / 2;
        let mut rows: Vec<HRow> = self
            .rows
            .iter()
            .map(|r| {
                let pull: Rational = r.normal.as_slice()[..n].iter().sum();
                HRow::new(r.normal.clone(), &r.offset - pull * t)
            })
            .collect();
        rows.push(HRow::new(QVector::unit(self.dim, 0), Rational::zero()));
        HPolyhedron::new(self.dim, rows)
    }
}

impl fmt::Display for HPolyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} rows in dimension {}", self.rows.len(), self.dim)?;
        for r in &self.rows {
            writeln!(f, "  {r}")?;
        }
        Ok(())
    }
}

/// `coeffs · params + constant`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineExpr {
    pub coeffs: Vec<Rational>,
    pub constant: Rational,
}

impl AffineExpr {
    pub fn constant(params: usize, value: Rational) -> Self {
        AffineExpr {
            coeffs: vec![Rational::zero(); params],
            constant: value,
        }
    }
}

/// A polygon whose cap and intercepts are affine in some parameters while
/// the slopes stay fixed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamPolygon {
    pub params: usize,
    pub cap: Option<AffineExpr>,
    pub lower: Vec<(Rational, AffineExpr)>,
    pub upper: Vec<(Rational, AffineExpr)>,
}

impl ParamPolygon {
    pub fn fixed(p: &NewtonPolygon) -> Self {
        let pieces = |ps: &[crate::polygon::Piece]| {
            ps.iter()
                .map(|pc| (pc.slope.clone(), AffineExpr::constant(0, pc.intercept.clone())))
                .collect()
        };
        ParamPolygon {
            params: 0,
            cap: p.cap().map(|c| AffineExpr::constant(0, c.clone())),
            lower: pieces(p.lower()),
            upper: pieces(p.upper()),
        }
    }

    /// `t P` with `t` as the single parameter.
    pub fn dilations(p: &NewtonPolygon) -> Self {
        let scaled = |v: &Rational| AffineExpr {
            coeffs: vec![v.clone()],
            constant: Rational::zero(),
        };
        let pieces = |ps: &[crate::polygon::Piece]| {
            ps.iter().map(|pc| (pc.slope.clone(), scaled(&pc.intercept))).collect()
        };
        ParamPolygon {
            params: 1,
            cap: p.cap().map(scaled),
            lower: pieces(p.lower()),
            upper: pieces(p.upper()),
        }
    }

    /// The polygon of a class, with the class coordinates as parameters.
    pub fn family(f: &PolygonFamily) -> Self {
        let linear = |form: &crate::polygon::LinearForm| AffineExpr {
            coeffs: form.0.clone(),
            constant: Rational::zero(),
        };
        ParamPolygon {
            params: f.rank(),
            cap: Some(linear(&f.cap)),
            lower: f.lower.iter().map(|(s, form)| (s.clone(), linear(form))).collect(),
            upper: f.upper.iter().map(|(s, form)| (s.clone(), linear(form))).collect(),
        }
    }
}

/// Inequalities of the upper-bound body of `D_n + rE` in the variables
/// `(a_1..a_n, b_1..b_n)` followed by the polygon parameters.
///
/// For `r >= 1` every triple of indices contributes one row per boundary
/// piece. For `r <= 0` the body is ordered `a` with each `(a_j, b_j)` in
/// the polygon.
pub fn build_param_body(pp: &ParamPolygon, n: usize, r: i64) -> HPolyhedron {
    assert!(n >= 1, "bodies need n >= 1");
    let dim = 2 * n + pp.params;
    let (a, b) = (|j: usize| j, |j: usize| n + j);
    let mut rows = Vec::new();
    let new_row = || vec![Rational::zero(); dim];
    let put_params = |row: &mut Vec<Rational>, e: &AffineExpr, sign: i64| {
        for (k, c) in e.coeffs.iter().enumerate() {
            row[2 * n + k] += c * int(sign);
        }
    };

    let mut first = new_row();
    first[a(0)] = Rational::one();
    rows.push(HRow::new(QVector(first), Rational::zero()));
    for j in 0..n - 1 {
        let mut row = new_row();
        row[a(j + 1)] = Rational::one();
        row[a(j)] = -Rational::one();
        rows.push(HRow::new(QVector(row), Rational::zero()));
    }
    if let Some(cap) = &pp.cap {
        let mut row = new_row();
        row[a(n - 1)] = -Rational::one();
        put_params(&mut row, cap, 1);
        rows.push(HRow::new(QVector(row), -cap.constant.clone()));
    }

    let r = r.max(0);
    let reach = |j: usize| if r == 0 { 0 } else { j };
    for j in 0..n {
        for (alpha, beta) in &pp.lower {
            for i in j - reach(j)..=j {
                let gap = (j - i) as i64;
                let mut row = new_row();
                row[b(j)] += Rational::one();
                row[a(j)] += int(gap) - alpha;
                for l in i..j {
                    row[a(l)] -= Rational::one();
                }
                put_params(&mut row, beta, -1);
                rows.push(HRow::new(QVector(row), int(gap * r) + &beta.constant));
            }
        }
        for (gamma, delta) in &pp.upper {
            let last = if r == 0 { j } else { n - 1 };
            for k in j..=last {
                let gap = (k - j) as i64;
                let mut row = new_row();
                row[b(j)] -= Rational::one();
                row[a(j)] += gamma - int(gap);
                for l in j + 1..=k {
                    row[a(l)] += Rational::one();
                }
                put_params(&mut row, delta, 1);
                rows.push(HRow::new(QVector(row), int(gap * r) - &delta.constant));
            }
        }
    }
    HPolyhedron::new(dim, rows).expect("builder rows have nonzero normals")
}

/// The upper-bound body for the polygon `p`.
pub fn build_toric_body(p: &NewtonPolygon, n: usize, r: i64) -> HPolyhedron {
    build_param_body(&ParamPolygon::fixed(p), n, r)
}

/// The body of `O(r)` on the Hilbert scheme of the plane.
pub fn build_c2_body(n: usize, r: i64) -> HPolyhedron {
    build_toric_body(&NewtonPolygon::quadrant(), n, r)
}

/// A class `D_n + rE` with `D` given in preset coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorClass {
    pub surface: SurfacePreset,
    #[serde(with = "crate::ratcore::rational_vec_str")]
    pub coeffs: Vec<Rational>,
    pub r: i64,
}

impl DivisorClass {
    pub fn new(surface: SurfacePreset, coeffs: Vec<Rational>, r: i64) -> Self {
        DivisorClass { surface, coeffs, r }
    }

    pub fn polygon(&self) -> Result<NewtonPolygon, PolygonError> {
        self.surface.polygon_of_class(&self.coeffs)
    }

    pub fn body(&self, n: usize) -> Result<HPolyhedron, PolygonError> {
        Ok(build_toric_body(&self.polygon()?, n, self.r))
    }
}

/// Generators of a polyhedron: `conv(vertices) + cone(rays) + span(lineality)`.
///
/// When `lineality` is nonempty the entries of `vertices` are one point on
/// each minimal face rather than vertices proper.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VPolytope {
    pub dim: usize,
    pub vertices: Vec<QVector>,
    pub rays: Vec<QVector>,
    #[serde(default)]
    pub lineality: Vec<QVector>,
}

impl VPolytope {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_bounded(&self) -> bool {
        self.rays.is_empty() && self.lineality.is_empty()
    }
}

/// Fixed-width bit set over row or vertex indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64).max(1)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn is_subset(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }
}

fn dot_int(g: &[BigInt], v: &[BigInt]) -> BigInt {
    g.iter()
        .zip(v)
        .filter(|(a, _)| !a.is_zero())
        .map(|(a, b)| a * b)
        .sum()
}

struct DdRay {
    v: Vec<BigInt>,
    zeros: Bits,
}

/// Generators of the cone `{ z : g · z >= 0 for every g in rows }`:
/// a lineality basis and the extreme rays modulo it.
fn cone_generators(rows: &[Vec<BigInt>], dim: usize) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let m = rows.len();
    let mut lineality: Vec<Vec<BigInt>> = (0..dim)
        .map(|k| (0..dim).map(|i| if i == k { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut rays: Vec<DdRay> = Vec::new();

    for (c, g) in rows.iter().enumerate() {
        let pivot = lineality.iter().position(|l| !dot_int(g, l).is_zero());
        if let Some(p) = pivot {
            let mut l0 = lineality.swap_remove(p);
            let mut v0 = dot_int(g, &l0);
            if v0.is_negative() {
                l0.iter_mut().for_each(|x| *x = -&*x);
                v0 = -v0;
            }
            let project = |v: &mut Vec<BigInt>| {
                let val = dot_int(g, v);
                if !val.is_zero() {
                    for (x, y) in v.iter_mut().zip(&l0) {
                        *x = &*x * &v0 - &val * y;
                    }
                    primitive(v);
                }
            };
            lineality.iter_mut().for_each(project);
            for ray in rays.iter_mut() {
                project(&mut ray.v);
                ray.zeros.set(c);
            }
            let mut zeros = Bits::new(m);
            (0..c).for_each(|i| zeros.set(i));
            rays.push(DdRay { v: l0, zeros });
            continue;
        }

        let vals: Vec<BigInt> = rays.iter().map(|r| dot_int(g, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        if neg.is_empty() {
            for (i, r) in rays.iter_mut().enumerate() {
                if vals[i].is_zero() {
                    r.zeros.set(c);
                }
            }
            continue;
        }
        let need = (dim - lineality.len()).saturating_sub(2);
        let mut fresh = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common = rays[p].zeros.and(&rays[q].zeros);
                if common.count() < need {
                    continue;
                }
                let blocked = rays
                    .iter()
                    .enumerate()
                    .any(|(k, r)| k != p && k != q && common.is_subset(&r.zeros));
                if blocked {
                    continue;
                }
                let (vp, vq) = (&vals[p], &vals[q]);
                let mut v: Vec<BigInt> = rays[q]
                    .v
                    .iter()
                    .zip(&rays[p].v)
                    .map(|(x, y)| vp * x - vq * y)
                    .collect();
                primitive(&mut v);
                let mut zeros = common;
                zeros.set(c);
                fresh.push(DdRay { v, zeros });
            }
        }
        let mut kept: Vec<DdRay> = Vec::with_capacity(rays.len() + fresh.len());
        for (i, mut r) in rays.into_iter().enumerate() {
            if vals[i].is_negative() {
                continue;
            }
            if vals[i].is_zero() {
                r.zeros.set(c);
            }
            kept.push(r);
        }
        kept.extend(fresh);
        rays = kept;
    }
    (lineality, rays.into_iter().map(|r| r.v).collect())
}

fn int_row(row: &HRow) -> (Vec<BigInt>, BigInt) {
    let mut all: Vec<Rational> = row.normal.as_slice().to_vec();
    all.push(row.offset.clone());
    let l = all.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let scaled: Vec<BigInt> = all.iter().map(|v| (v * Rational::from_integer(l.clone())).to_integer()).collect();
    let (normal, offset) = scaled.split_at(row.normal.dim());
    (normal.to_vec(), offset[0].clone())
}

/// Vertices, rays and lineality of `h` by the double description method on
/// its homogenization. Rows implied by the others are removed first.
pub fn vertex_enumerate(h: &HPolyhedron) -> VPolytope {
    let d = h.dim();
    let empty = VPolytope {
        dim: d,
        vertices: Vec::new(),
        rays: Vec::new(),
        lineality: Vec::new(),
    };
    if h.is_empty() {
        return empty;
    }
    let reduced = h.remove_redundant();
    // z = (x, λ): normal · x - offset λ >= 0 and λ >= 0
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(reduced.rows().len() + 1);
    let mut lambda = vec![BigInt::zero(); d + 1];
    lambda[d] = BigInt::one();
    rows.push(lambda);
    for row in reduced.rows() {
        let (mut normal, offset) = int_row(row);
        normal.push(-offset);
        rows.push(normal);
    }
    let (lin, rays) = cone_generators(&rows, d + 1);

    let to_q = |v: &[BigInt]| QVector(v.iter().cloned().map(Rational::from_integer).collect());
    let mut vertices = Vec::new();
    let mut recession = Vec::new();
    for v in rays {
        if v[d].is_positive() {
            let lam = Rational::from_integer(v[d].clone());
            vertices.push(QVector(v[..d].iter().map(|x| Rational::from_integer(x.clone()) / &lam).collect()));
        } else {
            recession.push(to_q(&v[..d]));
        }
    }
    if vertices.is_empty() {
        return empty;
    }
    vertices.sort();
    recession.sort();
    VPolytope {
        dim: d,
        vertices,
        rays: recession,
        lineality: lin.iter().map(|v| to_q(&v[..d])).collect(),
    }
}

/// Determinant of an integer matrix by fraction-free elimination.
fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Exact volume of a bounded polytope given by its vertices, by a pulling
/// triangulation that always cones from the lexicographically smallest
/// vertex of each face.
pub fn volume(v: &VPolytope) -> Result<Rational, PolytopeError> {
    if !v.is_bounded() {
        return Err(PolytopeError::Unbounded {
            rays: v.rays.len(),
            lineality: v.lineality.len(),
        });
    }
    let d = v.dim;
    if v.vertices.len() <= d || affine_rank(&v.vertices) < d {
        return Ok(Rational::zero());
    }
    let mut verts = v.vertices.clone();
    verts.sort();
    verts.dedup();

    let denom = verts
        .iter()
        .flat_map(|p| p.as_slice().iter())
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let points: Vec<Vec<BigInt>> = verts
        .iter()
        .map(|p| {
            p.as_slice()
                .iter()
                .map(|x| (x * Rational::from_integer(denom.clone())).to_integer())
                .collect()
        })
        .collect();

    // facets: extreme rays (w, w0) of { w · p - w0 >= 0 for all vertices p }
    let rows: Vec<Vec<BigInt>> = points
        .iter()
        .map(|p| {
            let mut row = p.clone();
            row.push(-BigInt::one());
            row
        })
        .collect();
    let (_, rays) = cone_generators(&rows, d + 1);
    let facets: Vec<Bits> = rays
        .iter()
        .filter(|w| w[..d].iter().any(|x| !x.is_zero()))
        .map(|w| {
            let mut tight = Bits::new(points.len());
            for (i, p) in points.iter().enumerate() {
                if dot_int(&w[..d], p) == w[d] {
                    tight.set(i);
                }
            }
            tight
        })
        .collect();

    let mut all = Bits::new(points.len());
    (0..points.len()).for_each(|i| all.set(i));
    let mut total = BigInt::zero();
    let mut apexes = Vec::with_capacity(d + 1);
    pull(&all, &facets, &points, &mut apexes, &mut total);
    Ok(Rational::new(total, factorial(d) * denom.pow(d as u32)))
}

fn pull(face: &Bits, facets: &[Bits], points: &[Vec<BigInt>], apexes: &mut Vec<usize>, total: &mut BigInt) {
    let v = face.first().expect("faces are nonempty");
    apexes.push(v);
    if face.count() == 1 {
        let base = &points[apexes[0]];
        let m: Vec<Vec<BigInt>> = apexes[1..]
            .iter()
            .map(|&i| points[i].iter().zip(base).map(|(x, y)| x - y).collect())
            .collect();
        *total += bareiss_det(m).abs();
    } else {
        let mut subs: Vec<Bits> = Vec::new();
        for f in facets {
            let g = face.and(f);
            if g.is_empty() || g == *face || subs.contains(&g) {
                continue;
            }
            subs.push(g);
        }
        let maximal: Vec<&Bits> = subs
            .iter()
            .filter(|g| !subs.iter().any(|h| h != *g && g.is_subset(h)))
            .collect();
        for g in maximal {
            if !g.get(v) {
                pull(g, facets, points, apexes, total);
            }
        }
    }
    apexes.pop();
}

/// Vertex set `{ p : p ∈ vertices }` as a sorted list with exact entries,
/// handy for comparing bodies.
pub fn sorted_vertices(v: &VPolytope) -> Vec<QVector> {
    let mut out = v.vertices.clone();
    out.sort();
    out
}

/// The cells of the unit cube of gap coordinates `t_j = a_{j+1} - a_j`
/// cut out by the conditions `a_j - a_i < 1`, each given by its set of short
/// pairs `(i, j)` (zero-based, `i < j`).
pub fn catalan_patterns(n: usize) -> Vec<Vec<(usize, usize)>> {
    assert!(n >= 2, "cells need n >= 2");
    // single gaps are short everywhere inside the cube
    let mut intervals: Vec<(usize, usize)> = Vec::new();
    for len in 2..n {
        for i in 0..n - len {
            intervals.push((i, i + len));
        }
    }
    let base: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
    let mut out = Vec::new();
    let mut short = base.clone();
    extend_patterns(n, &intervals, 0, &mut short, &mut out);
    out
}

fn extend_patterns(
    n: usize,
    intervals: &[(usize, usize)],
    at: usize,
    short: &mut Vec<(usize, usize)>,
    out: &mut Vec<Vec<(usize, usize)>>,
) {
    if at == intervals.len() {
        if cell_is_open(n, short) {
            let mut pattern = short.clone();
            pattern.sort();
            out.push(pattern);
        }
        return;
    }
    let (i, j) = intervals[at];
    // a pair is short only if both pairs it contains are: gaps are nonnegative
    if short.contains(&(i, j - 1)) && short.contains(&(i + 1, j)) {
        short.push((i, j));
        extend_patterns(n, intervals, at + 1, short, out);
        short.pop();
    }
    extend_patterns(n, intervals, at + 1, short, out);
}

/// Whether some point of the open cube satisfies every inequality of the
/// pattern strictly: the common slack `s` is maximized by an LP.
fn cell_is_open(n: usize, short: &[(usize, usize)]) -> bool {
    let g = n - 1;
    let dim = g + 1;
    let s = g;
    let mut rows = Vec::new();
    let mut push = |coef: Vec<(usize, i64)>, offset: i64| {
        let mut v = QVector::zeros(dim);
        for (k, c) in coef {
            v[k] += int(c);
        }
        rows.push(HRow::new(v, int(offset)));
    };
    for k in 0..g {
        push(vec![(k, 1), (s, -1)], 0);
        push(vec![(k, -1), (s, -1)], -1);
    }
    for i in 0..n {
        for j in i + 2..n {
            let gaps = i..j;
            if short.contains(&(i, j)) {
                let mut c: Vec<(usize, i64)> = gaps.map(|k| (k, -1)).collect();
                c.push((s, -1));
                push(c, -1);
            } else {
                let mut c: Vec<(usize, i64)> = gaps.map(|k| (k, 1)).collect();
                c.push((s, -1));
                push(c, 1);
            }
        }
    }
    push(vec![(s, -1)], -1);
    let h = HPolyhedron::new(dim, rows).expect("nonzero rows");
    let res = lp::minimize(&h, &QVector::unit(dim, s).scale(&-Rational::one()));
    res.status == LPStatus::Optimal && res.value.expect("optimal").is_negative()
}

/// Number of cells, which is the Catalan number `C_{n-1}`.
pub fn catalan_cells(n: usize) -> usize {
    catalan_patterns(n).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratcore::rat;
    use crate::semigroup::{GammaSpec, ValVector};
    use proptest::prelude::*;

    fn row(n: &[i64], o: i64) -> HRow {
        HRow::new(QVector::from_i64(n), int(o))
    }

    fn cube(d: usize) -> HPolyhedron {
        let mut rows = Vec::new();
        for k in 0..d {
            let mut e = vec![0; d];
            e[k] = 1;
            rows.push(row(&e, 0));
            e[k] = -1;
            rows.push(row(&e, -1));
        }
        HPolyhedron::new(d, rows).unwrap()
    }

    fn row_set(h: &HPolyhedron) -> Vec<(Vec<Rational>, Rational)> {
        let mut v: Vec<_> = h.rows().iter().map(|r| (r.normal.0.clone(), r.offset.clone())).collect();
        v.sort();
        v
    }

    #[test]
    fn rows_are_normalized_and_deduplicated() {
        let h = HPolyhedron::new(
            2,
            vec![
                HRow::new(QVector(vec![rat(2, 3), rat(4, 3)]), rat(1, 3)),
                row(&[1, 2], 1),
                row(&[0, 0], -5),
            ],
        )
        .unwrap();
        assert_eq!(h.rows().len(), 1);
        assert_eq!(h.rows()[0], row(&[1, 2], 1));
        assert!(matches!(
            HPolyhedron::new(1, vec![row(&[0], 1)]),
            Err(PolytopeError::ContradictoryRow(0))
        ));
    }

    #[test]
    fn plane_body_rows() {
        let h = build_c2_body(2, 1);
        let expected = HPolyhedron::new(
            4,
            vec![
                row(&[1, 0, 0, 0], 0),
                row(&[-1, 1, 0, 0], 0),
                row(&[0, 0, 1, 0], 0),
                row(&[0, 0, 0, 1], 0),
                row(&[-1, 1, 0, 1], 1),
            ],
        )
        .unwrap();
        assert_eq!(row_set(&h), row_set(&expected));
        assert_eq!(row_set(&build_c2_body(1, 5)), row_set(&HPolyhedron::new(2, vec![row(&[1, 0], 0), row(&[0, 1], 0)]).unwrap()));
        assert_eq!(row_set(&build_c2_body(2, -3)), row_set(&build_c2_body(2, 0)));
        assert_eq!(build_c2_body(2, 0).rows().len(), 4);
    }

    #[test]
    fn square_body_at_degree_zero() {
        let sq = SurfacePreset::P1xP1.polygon_of_class(&[int(1), int(1)]).unwrap();
        let h = build_toric_body(&sq, 2, 0);
        let expected = HPolyhedron::new(
            4,
            vec![
                row(&[1, 0, 0, 0], 0),
                row(&[-1, 1, 0, 0], 0),
                row(&[0, -1, 0, 0], -1),
                row(&[0, 0, 1, 0], 0),
                row(&[0, 0, -1, 0], -1),
                row(&[0, 0, 0, 1], 0),
                row(&[0, 0, 0, -1], -1),
            ],
        )
        .unwrap();
        assert!(h.same_set(&expected));
        let tri = NewtonPolygon::triangle(int(3)).unwrap();
        let one = build_toric_body(&tri, 1, 0);
        let v = vertex_enumerate(&one);
        assert_eq!(v.vertices, vec![QVector::from_i64(&[0, 0]), QVector::from_i64(&[0, 3]), QVector::from_i64(&[3, 0])]);
    }

    #[test]
    fn plane_degree_four_system_matches_the_hand_instance() {
        let tri = NewtonPolygon::triangle(int(4)).unwrap();
        let h = build_toric_body(&tri, 4, 1);
        // spot rows: b_2 >= 1 - a_2 + a_1 and b_1 <= 4 - a_1 - 3(1 + a_1) + a_2 + a_3 + a_4
        assert!(h.rows().contains(&row(&[-1, 1, 0, 0, 0, 1, 0, 0], 1)));
        assert!(h.rows().contains(&row(&[-4, 1, 1, 1, -1, 0, 0, 0], -1)));
        // ordering, cap, and 10 + 10 triple rows
        assert_eq!(h.rows().len(), 1 + 3 + 1 + 10 + 10);
    }

    #[test]
    fn cube_vertices_and_volume() {
        let v = vertex_enumerate(&cube(3));
        assert_eq!(v.vertices.len(), 8);
        assert!(v.rays.is_empty() && v.lineality.is_empty());
        assert_eq!(volume(&v).unwrap(), int(1));
        let scaled = HPolyhedron::new(2, vec![row(&[1, 0], 0), row(&[0, 1], 0), row(&[-1, -1], -3)]).unwrap();
        assert_eq!(volume(&vertex_enumerate(&scaled)).unwrap(), rat(9, 2));
    }

    #[test]
    fn unbounded_and_empty_bodies() {
        let v = vertex_enumerate(&build_c2_body(2, 1));
        assert!(!v.rays.is_empty());
        assert!(matches!(volume(&v), Err(PolytopeError::Unbounded { .. })));
        let empty = HPolyhedron::new(1, vec![row(&[1], 1), row(&[-1], 0)]).unwrap();
        let v = vertex_enumerate(&empty);
        assert!(v.vertices.is_empty() && v.rays.is_empty() && v.lineality.is_empty());
        let half = HPolyhedron::new(2, vec![row(&[1, 0], 0)]).unwrap();
        let v = vertex_enumerate(&half);
        assert_eq!(v.lineality.len(), 1);
        assert_eq!(v.rays.len(), 1);
    }

    #[test]
    fn plane_body_generators() {
        // n = 2, r = 1: vertices (0,0,0,1) and (0,1,0,0)
        let v = vertex_enumerate(&build_c2_body(2, 1));
        assert_eq!(v.vertices, vec![QVector::from_i64(&[0, 0, 0, 1]), QVector::from_i64(&[0, 1, 0, 0])]);
        assert!(v.lineality.is_empty());
        for x in &v.vertices {
            assert!(build_c2_body(2, 1).contains(x));
        }
    }

    #[test]
    fn flat_polytopes_have_zero_volume() {
        let flat = HPolyhedron::new(2, vec![row(&[1, 0], 0), row(&[-1, 0], 0), row(&[0, 1], 0), row(&[0, -1], -1)]).unwrap();
        assert_eq!(volume(&vertex_enumerate(&flat)).unwrap(), int(0));
    }

    #[test]
    fn square_product_volume() {
        let sq = SurfacePreset::P1xP1.polygon_of_class(&[int(1), int(1)]).unwrap();
        assert_eq!(volume(&vertex_enumerate(&build_toric_body(&sq, 2, 0))).unwrap(), rat(1, 2));
    }

    #[test]
    fn slices() {
        let h = build_c2_body(2, 1);
        assert_eq!(h.slice_shift(&int(0)).unwrap(), h);
        let q = HPolyhedron::new(2, vec![row(&[1, 0], 0), row(&[0, 1], 0)]).unwrap();
        assert!(q.slice_shift(&int(2)).unwrap().same_set(&q));
        let odd = HPolyhedron::new(3, vec![row(&[1, 0, 0], 0)]).unwrap();
        assert!(matches!(odd.slice_shift(&int(1)), Err(PolytopeError::OddDimension(3))));
        assert!(h.slice_shift(&int(-1)).is_err());
        let four = build_toric_body(&NewtonPolygon::triangle(int(4)).unwrap(), 2, 1);
        let three = build_toric_body(&NewtonPolygon::triangle(int(3)).unwrap(), 2, 1);
        assert!(four.slice_shift(&int(1)).unwrap().same_set(&three));
        assert!(!four.same_set(&three));
    }

    #[test]
    fn plane_body_is_the_quadrant_case() {
        for n in 1..=4 {
            for r in -2..=3 {
                let quad = build_toric_body(&NewtonPolygon::quadrant(), n, r);
                assert!(build_c2_body(n, r).same_set(&quad));
            }
        }
    }

    #[test]
    fn homogeneity_of_vertices() {
        for n in 1..=3 {
            for r in 1..=2 {
                let single = vertex_enumerate(&build_c2_body(n, r));
                let double = vertex_enumerate(&build_c2_body(n, 2 * r));
                let scaled: Vec<QVector> = single.vertices.iter().map(|v| v.scale(&int(2))).collect();
                assert_eq!(sorted_vertices(&double), scaled);
                assert_eq!(double.rays, single.rays);
            }
        }
    }

    #[test]
    fn lattice_points_and_the_semigroup() {
        let in_box = |m: i64, n: usize| -> Vec<ValVector> {
            let mut out = vec![vec![]];
            for _ in 0..2 * n {
                out = out
                    .into_iter()
                    .flat_map(|c: Vec<i64>| (0..=m).map(move |x| [c.clone(), vec![x]].concat()))
                    .collect();
            }
            out.into_iter().map(|c| ValVector::from_coords(&c).unwrap()).collect()
        };
        for n in 1..=3usize {
            let m = if n == 3 { 3 } else { 4 };
            for r in 0..=3 {
                let body = build_c2_body(n, r);
                let spec = GammaSpec::c2(n, r);
                for v in in_box(m, n) {
                    let x = QVector::from_i64(&v.coords());
                    let member = spec.member(&v).unwrap();
                    if member {
                        assert!(body.contains(&x), "{v} in Γ_{r} but outside the body");
                    }
                    let interior = body.rows().iter().all(|row| row.normal.dot(&x) > row.offset);
                    if interior {
                        assert!(member, "{v} interior but not in Γ_{r}");
                    }
                }
            }
        }
    }

    #[test]
    fn catalan_small() {
        assert_eq!(catalan_cells(2), 1);
        assert_eq!(catalan_cells(3), 2);
        assert_eq!(catalan_cells(5), 14);
        assert_eq!(catalan_patterns(3), vec![vec![(0, 1), (0, 2), (1, 2)], vec![(0, 1), (1, 2)]]);
    }

    #[test]
    fn json_shapes() {
        let h = HPolyhedron::new(1, vec![row(&[1], 3)]).unwrap();
        let s = serde_json::to_string(&h).unwrap();
        assert_eq!(s, r#"{"dim":1,"rows":[{"normal":["1"],"offset":"3"}]}"#);
        assert_eq!(serde_json::from_str::<HPolyhedron>(&s).unwrap(), h);
    }

    fn preset_and_scale() -> impl Strategy<Value = (SurfacePreset, Vec<Rational>)> {
        prop_oneof![
            (1i64..=3).prop_map(|d| (SurfacePreset::P2, vec![int(d)])),
            (1i64..=2, 1i64..=2).prop_map(|(x, y)| (SurfacePreset::P1xP1, vec![int(x), int(y)])),
            (1i64..=2, 1i64..=2, 0u32..=2).prop_map(|(x, y, e)| (SurfacePreset::Hirzebruch(e), vec![int(x), int(y)])),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]
        #[test]
        fn volume_is_area_power_over_factorial((preset, coeffs) in preset_and_scale(), n in 1usize..=3) {
            let p = preset.polygon_of_class(&coeffs).unwrap();
            let body = build_toric_body(&p, n, 0);
            let v = vertex_enumerate(&body);
            let area = p.area().unwrap();
            let mut expected = Rational::one();
            for k in 1..=n {
                expected = expected * &area / int(k as i64);
            }
            prop_assert_eq!(volume(&v).unwrap(), expected);
            for x in &v.vertices {
                prop_assert!(body.contains(x));
            }
        }

        #[test]
        fn vertices_satisfy_their_rows(n in 1usize..=3, d in 1i64..=4, r in 0i64..=2) {
            let body = build_toric_body(&NewtonPolygon::triangle(int(d)).unwrap(), n, r);
            let v = vertex_enumerate(&body);
            for x in &v.vertices {
                prop_assert!(body.contains(x));
                let tight: Vec<QVector> = body.rows().iter().filter(|row| row.is_tight_at(x)).map(|row| row.normal.clone()).collect();
                let rank = crate::ratcore::QMatrix::from_rows(tight.into_iter().map(|q| q.0).collect()).rank();
                prop_assert_eq!(rank, 2 * n);
            }
        }
    }
}
