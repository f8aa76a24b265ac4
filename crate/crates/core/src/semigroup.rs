//! Valuation semigroups `Γ_r` of the plane and `Γ(D_n + rE)` of a toric
//! surface, as explicit sets of integer vectors.
//!
//! A vector lists the `x` exponents first and the `y` exponents second:
//! `(p_1, ..., p_n, q_1, ..., q_n)`. The column `j` is the pair `(p_j, q_j)`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::polygon::NewtonPolygon;
use crate::ratcore::{ceil_to_i64, floor_to_i64, int};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemigroupError {
    #[error("expected {expected} columns, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("a has {a} entries but b has {b}")]
    LengthMismatch { a: usize, b: usize },
    #[error("vector needs at least one column")]
    Empty,
    #[error("{v} is not in Γ_{r}")]
    NotMember { v: ValVector, r: i64 },
    #[error("decomposition needs r >= 1, got {0}")]
    NonPositiveDegree(i64),
    #[error("the polygon is unbounded and no box was given")]
    UnboundedSearch,
}

/// A point of `Z^{2n}` in `(a, b)` coordinates.
///
/// The derived order compares `a` first, then `b`, which is the
/// lexicographic order on the concatenated vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValVector {
    pub a: Vec<i64>,
    pub b: Vec<i64>,
}

impl ValVector {
    pub fn new(a: Vec<i64>, b: Vec<i64>) -> Result<Self, SemigroupError> {
        if a.len() != b.len() {
            return Err(SemigroupError::LengthMismatch {
                a: a.len(),
                b: b.len(),
            });
        }
        if a.is_empty() {
            return Err(SemigroupError::Empty);
        }
        Ok(ValVector { a, b })
    }

    /// Splits `(p_1..p_n, q_1..q_n)` into its halves.
    pub fn from_coords(coords: &[i64]) -> Result<Self, SemigroupError> {
        if coords.len() % 2 != 0 {
            return Err(SemigroupError::LengthMismatch {
                a: coords.len() / 2 + 1,
                b: coords.len() / 2,
            });
        }
        let (a, b) = coords.split_at(coords.len() / 2);
        ValVector::new(a.to_vec(), b.to_vec())
    }

    pub fn zero(n: usize) -> Self {
        ValVector {
            a: vec![0; n],
            b: vec![0; n],
        }
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn coords(&self) -> Vec<i64> {
        self.a.iter().chain(&self.b).copied().collect()
    }

    pub fn add(&self, other: &ValVector) -> ValVector {
        assert_eq!(self.n(), other.n(), "adding vectors of different length");
        ValVector {
            a: self.a.iter().zip(&other.a).map(|(x, y)| x + y).collect(),
            b: self.b.iter().zip(&other.b).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn sum<'a>(n: usize, parts: impl IntoIterator<Item = &'a ValVector>) -> ValVector {
        parts.into_iter().fold(ValVector::zero(n), |acc, v| acc.add(v))
    }

    /// Total degree `(Σ p_i, Σ q_i)`.
    pub fn degree(&self) -> (i64, i64) {
        (self.a.iter().sum(), self.b.iter().sum())
    }
}

impl fmt::Display for ValVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords().iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Parameters of a semigroup: `Γ_r` when `polygon` is `None`, otherwise
/// the toric upper-bound semigroup `Γ(D_n + rE)` with `P_D = polygon`.
///
/// Negative `r` is folded to `0` (even) or `1` (odd) on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaSpec {
    n: usize,
    r: i64,
    polygon: Option<NewtonPolygon>,
}

pub fn normalize_degree(r: i64) -> i64 {
    if r >= 0 {
        r
    } else {
        r.rem_euclid(2)
    }
}

impl GammaSpec {
    pub fn new(n: usize, r: i64, polygon: Option<NewtonPolygon>) -> Self {
        assert!(n >= 1, "semigroups need n >= 1");
        GammaSpec {
            n,
            r: normalize_degree(r),
            polygon,
        }
    }

    pub fn c2(n: usize, r: i64) -> Self {
        GammaSpec::new(n, r, None)
    }

    pub fn toric(n: usize, r: i64, polygon: NewtonPolygon) -> Self {
        GammaSpec::new(n, r, Some(polygon))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> i64 {
        self.r
    }

    pub fn polygon(&self) -> Option<&NewtonPolygon> {
        self.polygon.as_ref()
    }

    /// Integer bounds on `q` imposed by the polygon alone, for `p` in `0..=pmax`.
    fn column_bounds(&self, pmax: i64) -> ColumnBounds {
        match &self.polygon {
            None => ColumnBounds {
                pmax,
                lower: vec![0; pmax as usize + 1],
                upper: None,
            },
            Some(poly) => {
                let pmax = match poly.cap() {
                    Some(c) => pmax.min(floor_to_i64(c).expect("cap fits in i64")),
                    None => pmax,
                };
                let pts = 0..=pmax.max(-1);
                let lower = pts
                    .clone()
                    .map(|p| ceil_to_i64(&poly.lower_at(&int(p))).expect("bound fits in i64"))
                    .collect();
                let upper = poly.cap().map(|_| {
                    pts.map(|p| {
                        floor_to_i64(&poly.upper_at(&int(p)).expect("capped")).expect("bound fits in i64")
                    })
                    .collect()
                });
                ColumnBounds { pmax, lower, upper }
            }
        }
    }

    /// Membership by the defining inequalities.
    pub fn member(&self, v: &ValVector) -> Result<bool, SemigroupError> {
        if v.n() != self.n {
            return Err(SemigroupError::DimensionMismatch {
                expected: self.n,
                got: v.n(),
            });
        }
        let pmax = *v.a.iter().max().expect("n >= 1");
        if v.a[0] < 0 || v.b.iter().any(|&q| q < 0) {
            return Ok(false);
        }
        let bounds = self.column_bounds(pmax.max(0));
        let mut state = Partial::new(self.n, self.r);
        for j in 0..self.n {
            if !state.admits(&bounds, v.a[j], v.b[j]) {
                return Ok(false);
            }
            state.push(v.a[j], v.b[j]);
        }
        Ok(true)
    }

    /// Members with every `p_i <= p_max` and `q_i <= q_max`, sorted.
    pub fn enumerate_box(&self, p_max: i64, q_max: i64) -> Vec<ValVector> {
        self.enumerate_bounded(&vec![p_max; self.n], &vec![q_max; self.n])
    }

    /// Members below per-coordinate bounds, sorted.
    pub fn enumerate_bounded(&self, p_max: &[i64], q_max: &[i64]) -> Vec<ValVector> {
        assert_eq!(p_max.len(), self.n);
        assert_eq!(q_max.len(), self.n);
        let top = p_max.iter().copied().max().unwrap_or(0);
        if top < 0 || q_max.iter().any(|&q| q < 0) {
            return Vec::new();
        }
        let bounds = self.column_bounds(top);
        let mut out = Vec::new();
        let mut state = Partial::new(self.n, self.r);
        let limits = Limits::Box { p_max, q_max };
        search(&bounds, &limits, &mut state, &mut |s| out.push(s.to_val()));
        out.sort();
        out
    }

    /// The graded piece: members with `Σ p_i = p` and `Σ q_i = q`, sorted.
    pub fn enumerate_graded(&self, p: i64, q: i64) -> Vec<ValVector> {
        let mut out = Vec::new();
        self.walk_graded(p, q, &mut |s| out.push(s.to_val()));
        out.sort();
        out
    }

    /// Size of the graded piece, without materializing it.
    pub fn graded_count(&self, p: i64, q: i64) -> u64 {
        let mut count = 0u64;
        self.walk_graded(p, q, &mut |_| count += 1);
        count
    }

    fn walk_graded(&self, p: i64, q: i64, visit: &mut dyn FnMut(&Partial)) {
        if p < 0 || q < 0 {
            return;
        }
        let bounds = self.column_bounds(p);
        let mut state = Partial::new(self.n, self.r);
        search(&bounds, &Limits::Graded { p, q }, &mut state, visit);
    }
}

struct ColumnBounds {
    pmax: i64,
    lower: Vec<i64>,
    upper: Option<Vec<i64>>,
}

/// A prefix of columns together with the data needed to test the next one.
struct Partial {
    n: usize,
    r: i64,
    p: Vec<i64>,
    q: Vec<i64>,
    /// `up[j]`: tightest upper bound on `q_j` implied by the columns chosen
    /// after `j`, minus `u(p_j)`; only meaningful for toric specs.
    up_slack: Vec<i64>,
}

impl Partial {
    fn new(n: usize, r: i64) -> Self {
        Partial {
            n,
            r,
            p: Vec::with_capacity(n),
            q: Vec::with_capacity(n),
            up_slack: Vec::with_capacity(n),
        }
    }

    fn len(&self) -> usize {
        self.p.len()
    }

    /// `max_{i<=j} (j-i)(r-p_j) + p_i + ... + p_{j-1}` for a candidate `p_j`.
    fn lower_bound(&self, pj: i64) -> i64 {
        let mut best = 0;
        let mut acc = 0;
        for &pi in self.p.iter().rev() {
            acc += self.r - pj + pi;
            best = best.max(acc);
        }
        best
    }

    /// Range of `q` admissible for a candidate `p_j`, ignoring upper
    /// bounds that depend on earlier columns.
    fn q_range(&self, bounds: &ColumnBounds, pj: i64) -> Option<(i64, i64)> {
        if pj < 0 || pj > bounds.pmax {
            return None;
        }
        if let Some(&last) = self.p.last() {
            if pj < last {
                return None;
            }
        }
        let mut lo = bounds.lower[pj as usize] + self.lower_bound(pj);
        if let (Some(&lp), Some(&lq)) = (self.p.last(), self.q.last()) {
            if lp == pj {
                lo = lo.max(lq + self.r);
            }
        }
        let hi = match &bounds.upper {
            Some(u) => u[pj as usize],
            None => i64::MAX,
        };
        let lo = lo.max(0);
        (lo <= hi).then_some((lo, hi))
    }

    /// Whether appending `p_k = pk` keeps every earlier upper bound valid.
    fn earlier_uppers_hold(&self, bounds: &ColumnBounds, pk: i64) -> bool {
        let Some(u) = &bounds.upper else { return true };
        for j in 0..self.len() {
            let need = self.up_slack[j] + (self.r - pk + self.p[j]);
            if self.q[j] > u[self.p[j] as usize] - need {
                return false;
            }
        }
        true
    }

    fn admits(&self, bounds: &ColumnBounds, pj: i64, qj: i64) -> bool {
        match self.q_range(bounds, pj) {
            Some((lo, hi)) => lo <= qj && qj <= hi && self.earlier_uppers_hold(bounds, pj),
            None => false,
        }
    }

    fn push(&mut self, pk: i64, qk: i64) {
        let r = self.r;
        for j in 0..self.len() {
            self.up_slack[j] += r - pk + self.p[j];
        }
        self.p.push(pk);
        self.q.push(qk);
        self.up_slack.push(0);
    }

    fn pop(&mut self) {
        let pk = self.p.pop().expect("nonempty");
        self.q.pop();
        self.up_slack.pop();
        let r = self.r;
        for j in 0..self.len() {
            self.up_slack[j] -= r - pk + self.p[j];
        }
    }

    fn to_val(&self) -> ValVector {
        ValVector {
            a: self.p.clone(),
            b: self.q.clone(),
        }
    }
}

enum Limits<'a> {
    Box { p_max: &'a [i64], q_max: &'a [i64] },
    Graded { p: i64, q: i64 },
}

fn search(bounds: &ColumnBounds, limits: &Limits, state: &mut Partial, visit: &mut dyn FnMut(&Partial)) {
    let j = state.len();
    if j == state.n {
        visit(state);
        return;
    }
    let remaining = (state.n - j) as i64;
    let p_lo = state.p.last().copied().unwrap_or(0);
    let (p_candidates, q_cap) = match limits {
        Limits::Box { p_max, q_max } => ((p_lo, p_max[j]), q_max[j]),
        Limits::Graded { p, q } => {
            let used_p: i64 = state.p.iter().sum();
            let used_q: i64 = state.q.iter().sum();
            let left_p = p - used_p;
            let left_q = q - used_q;
            if j + 1 == state.n {
                ((left_p, left_p), left_q)
            } else {
                // later p's are at least p_j
                ((p_lo, left_p.div_euclid(remaining)), left_q)
            }
        }
    };
    let (p_from, p_to) = p_candidates;
    for pj in p_from..=p_to.min(bounds.pmax) {
        let Some((lo, hi)) = state.q_range(bounds, pj) else { continue };
        if !state.earlier_uppers_hold(bounds, pj) {
            continue;
        }
        let hi = hi.min(q_cap);
        let q_values: Box<dyn Iterator<Item = i64>> = match limits {
            Limits::Graded { q, .. } if j + 1 == state.n => {
                let used_q: i64 = state.q.iter().sum();
                let last = q - used_q;
                Box::new((lo <= last && last <= hi).then_some(last).into_iter())
            }
            _ => Box::new(lo..=hi),
        };
        for qj in q_values {
            state.push(pj, qj);
            search(bounds, limits, state, visit);
            state.pop();
        }
    }
}

/// Writes `v ∈ Γ_r` as a sum of `r` members of `Γ_1`.
///
/// The vector is first reduced to one with `p_1 = 0`, jumps
/// `p_{j+1} - p_j <= r` and every `q_j` on its lower bound; the reduced
/// vector is split column by column, and the reductions are then undone on
/// suitable summands. The result is sorted.
pub fn minkowski_decompose(v: &ValVector, r: i64) -> Result<Vec<ValVector>, SemigroupError> {
    if r < 1 {
        return Err(SemigroupError::NonPositiveDegree(r));
    }
    let n = v.n();
    if !GammaSpec::c2(n, r).member(v)? {
        return Err(SemigroupError::NotMember { v: v.clone(), r });
    }

    enum Undo {
        ShiftP { from: usize, by: i64 },
        RaiseQ { from: usize, to: usize },
    }

    let mut cur = v.clone();
    let mut undo = Vec::new();
    if cur.a[0] > 0 {
        let by = cur.a[0];
        cur.a.iter_mut().for_each(|p| *p -= by);
        undo.push(Undo::ShiftP { from: 0, by });
    }
    for j in 0..n.saturating_sub(1) {
        let excess = cur.a[j + 1] - cur.a[j] - r;
        if excess > 0 {
            cur.a[j + 1..].iter_mut().for_each(|p| *p -= excess);
            undo.push(Undo::ShiftP { from: j + 1, by: excess });
        }
    }
    // Lowering q's keeps the p's, so one left-to-right pass settles each column.
    for j in 0..n {
        let bound = sum_form_bound(&cur.a, j, r);
        let slack = cur.b[j] - bound;
        if slack > 0 {
            let mut k = j;
            while k + 1 < n && cur.a[k + 1] == cur.a[j] {
                k += 1;
            }
            for _ in 0..slack {
                cur.b[j..=k].iter_mut().for_each(|q| *q -= 1);
                undo.push(Undo::RaiseQ { from: j, to: k });
            }
        }
    }

    let mut parts = split_tight(&cur.a, r as usize);
    while let Some(step) = undo.pop() {
        match step {
            Undo::ShiftP { from, by } => {
                parts[0].a[from..].iter_mut().for_each(|p| *p += by);
            }
            Undo::RaiseQ { from, to } => {
                let pick = if to + 1 == n {
                    0
                } else {
                    parts
                        .iter()
                        .position(|s| s.a[to] < s.a[to + 1])
                        .expect("the p-sums jump after the block, so some summand does")
                };
                parts[pick].b[from..=to].iter_mut().for_each(|q| *q += 1);
            }
        }
    }
    parts.sort();
    Ok(parts)
}

/// `Σ_{i<j, p_j - p_i < r} (r - p_j + p_i)`, with `j` zero-based.
fn sum_form_bound(p: &[i64], j: usize, r: i64) -> i64 {
    p[..j]
        .iter()
        .filter(|&&pi| p[j] - pi < r)
        .map(|&pi| r - p[j] + pi)
        .sum()
}

/// Splits a tight vector, given by its `p`'s, into `r` members of `Γ_1`,
/// in the order that keeps the induction running.
fn split_tight(p: &[i64], r: usize) -> Vec<ValVector> {
    let n = p.len();
    let mut parts: Vec<ValVector> = (0..r)
        .map(|_| ValVector {
            a: Vec::with_capacity(n),
            b: Vec::with_capacity(n),
        })
        .collect();
    for s in parts.iter_mut() {
        s.a.push(0);
        s.b.push(0);
    }
    for m in 1..n {
        let jump = (p[m] - p[m - 1]) as usize;
        for (k, s) in parts.iter_mut().enumerate() {
            let (lp, lq) = (s.a[m - 1], s.b[m - 1]);
            if k < jump {
                s.a.push(lp + 1);
                s.b.push(0);
            } else {
                s.a.push(lp);
                s.b.push(lq + 1);
            }
        }
        parts.rotate_left(jump);
    }
    parts
}
