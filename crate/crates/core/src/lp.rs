//! Exact linear programming and the effective-cone computations built on it.
//!
//! [`solve`] minimizes `c · x` over `{ x : A x >= b }` with `x` free. It
//! runs a revised simplex on the dual problem `max b · y, Aᵀ y = c, y >= 0`
//! whose basis has the size of `x` rather than the number of rows, which
//! suits the tall systems produced by the body builders. The basis inverse
//! is kept in fraction-free form `M = det(B) B⁻¹`, so every pivot is integer
//! arithmetic with exact division.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::polygon::{PolygonError, SurfacePreset};
use crate::polytope::{build_param_body, HPolyhedron, ParamPolygon};
use crate::ratcore::{int, QVector, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("objective has {got} entries, constraints live in dimension {dim}")]
    Shape { dim: usize, got: usize },
    #[error(transparent)]
    Polygon(#[from] PolygonError),
    #[error("the feasible region is empty")]
    Infeasible,
    #[error("the objective is unbounded below")]
    Unbounded,
    #[error("facet checks need a rank-2 surface, {0} has rank 1")]
    RankOne(SurfacePreset),
    #[error("facet needs {expected} coefficients (class, then E), got {got}")]
    FacetLength { expected: usize, got: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LPStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

impl fmt::Display for LPStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LPStatus::Optimal => "optimal",
            LPStatus::Infeasible => "infeasible",
            LPStatus::Unbounded => "unbounded",
        })
    }
}

/// Minimize `objective · x` subject to `constraints`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LPProblem {
    pub objective: QVector,
    pub constraints: HPolyhedron,
}

impl LPProblem {
    pub fn new(objective: QVector, constraints: HPolyhedron) -> Result<Self, LpError> {
        if objective.dim() != constraints.dim() {
            return Err(LpError::Shape {
                dim: constraints.dim(),
                got: objective.dim(),
            });
        }
        Ok(LPProblem {
            objective,
            constraints,
        })
    }

    pub fn feasibility(constraints: HPolyhedron) -> Self {
        LPProblem {
            objective: QVector::zeros(constraints.dim()),
            constraints,
        }
    }
}

/// Outcome of a solve. When optimal, `witness` is a feasible point
/// attaining `value` and `dual` holds nonnegative row multipliers `y` with
/// `Aᵀ y = objective` and `b · y = value`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LPResult {
    pub status: LPStatus,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        with = "opt_rational"
    )]
    pub value: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<QVector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual: Option<QVector>,
}

mod opt_rational {
    use super::*;
    use crate::ratcore::rational_str;

    pub fn serialize<S: serde::Serializer>(v: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => rational_str::serialize(v, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        #[derive(Deserialize)]
        struct Wrap(#[serde(with = "rational_str")] Rational);
        Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
    }
}

impl LPResult {
    fn bare(status: LPStatus) -> Self {
        LPResult {
            status,
            value: None,
            witness: None,
            dual: None,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LPStatus::Optimal
    }
}

/// Entering-variable rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PivotRule {
    /// Smallest eligible index throughout.
    Bland,
    /// Largest reduced cost, falling back to Bland for the rest of the
    /// phase after a run of degenerate pivots.
    #[default]
    DantzigThenBland,
}

const DEGENERATE_RUN: usize = 40;

pub fn solve(problem: &LPProblem) -> LPResult {
    solve_with(problem, PivotRule::default())
}

pub fn solve_with(problem: &LPProblem, rule: PivotRule) -> LPResult {
    let system = IntSystem::new(&problem.constraints, &problem.objective);
    match system.run(rule) {
        DualOutcome::Optimal(sol) => system.result(sol),
        DualOutcome::DualUnbounded => LPResult::bare(LPStatus::Infeasible),
        DualOutcome::DualInfeasible => {
            let zero = IntSystem::new(&problem.constraints, &QVector::zeros(problem.constraints.dim()));
            match zero.run(rule) {
                DualOutcome::Optimal(_) => LPResult::bare(LPStatus::Unbounded),
                _ => LPResult::bare(LPStatus::Infeasible),
            }
        }
    }
}

/// Minimize `objective` over `h`.
pub fn minimize(h: &HPolyhedron, objective: &QVector) -> LPResult {
    solve(&LPProblem {
        objective: objective.clone(),
        constraints: h.clone(),
    })
}

/// Some point of `h`, if there is one.
pub fn feasible_point(h: &HPolyhedron) -> Option<QVector> {
    let res = solve(&LPProblem::feasibility(h.clone()));
    res.witness
}

/// Sparse integer row `Σ coef_k x_k >= rhs`, equal to `scale` times the
/// source row.
struct IntRow {
    entries: Vec<(usize, BigInt)>,
    rhs: BigInt,
    scale: Rational,
}

struct IntSystem {
    dim: usize,
    rows: Vec<IntRow>,
    /// Objective times `obj_scale`, with signs flipped where `flip[k]`.
    rhs: Vec<BigInt>,
    flip: Vec<bool>,
    obj_scale: Rational,
}

struct DualSolution {
    basis: Vec<usize>,
    beta: Vec<BigInt>,
    det: BigInt,
    dpi: Vec<BigInt>,
}

enum DualOutcome {
    Optimal(DualSolution),
    DualUnbounded,
    DualInfeasible,
}

fn lcm_of_denoms<'a>(values: impl Iterator<Item = &'a Rational>) -> BigInt {
    values.fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

fn to_int(v: &Rational, scale: &BigInt) -> BigInt {
    let s = v * Rational::from_integer(scale.clone());
    debug_assert!(s.is_integer());
    s.to_integer()
}

impl IntSystem {
    fn new(h: &HPolyhedron, objective: &QVector) -> Self {
        let rows = h
            .rows()
            .iter()
            .map(|row| {
                let l = lcm_of_denoms(row.normal.as_slice().iter().chain(std::iter::once(&row.offset)));
                let entries = row
                    .normal
                    .as_slice()
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(k, v)| (k, to_int(v, &l)))
                    .collect();
                IntRow {
                    entries,
                    rhs: to_int(&row.offset, &l),
                    scale: Rational::from_integer(l),
                }
            })
            .collect();
        let l = lcm_of_denoms(objective.as_slice().iter());
        let c: Vec<BigInt> = objective.as_slice().iter().map(|v| to_int(v, &l)).collect();
        let flip: Vec<bool> = c.iter().map(|v| v.is_negative()).collect();
        IntSystem {
            dim: h.dim(),
            rows,
            rhs: c.into_iter().map(|v| v.abs()).collect(),
            flip,
            obj_scale: Rational::from_integer(l),
        }
    }

    fn n_real(&self) -> usize {
        self.rows.len()
    }

    /// Column `j` of the equality system as sparse entries.
    fn column(&self, j: usize) -> Vec<(usize, BigInt)> {
        if j < self.n_real() {
            self.rows[j]
                .entries
                .iter()
                .map(|(k, v)| (*k, if self.flip[*k] { -v.clone() } else { v.clone() }))
                .collect()
        } else {
            vec![(j - self.n_real(), BigInt::one())]
        }
    }

    fn run(&self, rule: PivotRule) -> DualOutcome {
        let d = self.dim;
        let mut t = Tableau {
            basis: (0..d).map(|k| self.n_real() + k).collect(),
            m: (0..d)
                .map(|i| (0..d).map(|k| if i == k { BigInt::one() } else { BigInt::zero() }).collect())
                .collect(),
            beta: self.rhs.clone(),
            det: BigInt::one(),
        };
        let columns: Vec<Vec<(usize, BigInt)>> = (0..self.n_real() + d).map(|j| self.column(j)).collect();

        let phase1_cost = |j: usize| -> BigInt {
            if j < self.n_real() {
                BigInt::zero()
            } else {
                -BigInt::one()
            }
        };
        if t.optimize(&columns, &phase1_cost, self.n_real() + d, rule).is_err() {
            unreachable!("phase one is bounded by zero");
        }
        let artificial_level: BigInt = t
            .basis
            .iter()
            .zip(&t.beta)
            .filter(|(j, _)| **j >= self.n_real())
            .map(|(_, b)| b.clone())
            .sum();
        if !artificial_level.is_zero() {
            return DualOutcome::DualInfeasible;
        }
        t.drive_out_artificials(&columns, self.n_real());

        let phase2_cost = |j: usize| -> BigInt {
            if j < self.n_real() {
                self.rows[j].rhs.clone()
            } else {
                BigInt::zero()
            }
        };
        match t.optimize(&columns, &phase2_cost, self.n_real(), rule) {
            Ok(dpi) => DualOutcome::Optimal(DualSolution {
                basis: t.basis,
                beta: t.beta,
                det: t.det,
                dpi,
            }),
            Err(()) => DualOutcome::DualUnbounded,
        }
    }

    fn result(&self, sol: DualSolution) -> LPResult {
        let det = Rational::from_integer(sol.det.clone());
        let witness: Vec<Rational> = (0..self.dim)
            .map(|k| {
                let v = Rational::from_integer(sol.dpi[k].clone()) / &det;
                if self.flip[k] {
                    -v
                } else {
                    v
                }
            })
            .collect();
        let mut dual = vec![Rational::zero(); self.n_real()];
        for (i, &j) in sol.basis.iter().enumerate() {
            if j < self.n_real() {
                // y for the scaled system, mapped back to the source rows
                let y = Rational::from_integer(sol.beta[i].clone()) / &det;
                dual[j] = y * &self.rows[j].scale / &self.obj_scale;
            }
        }
        let value: Rational = sol
            .basis
            .iter()
            .zip(&sol.beta)
            .filter(|(j, _)| **j < self.n_real())
            .map(|(j, b)| Rational::from_integer(&self.rows[*j].rhs * b))
            .sum::<Rational>()
            / (det * &self.obj_scale);
        LPResult {
            status: LPStatus::Optimal,
            value: Some(value),
            witness: Some(QVector(witness)),
            dual: Some(QVector(dual)),
        }
    }
}

struct Tableau {
    basis: Vec<usize>,
    /// `det * B⁻¹`, integral.
    m: Vec<Vec<BigInt>>,
    /// `det * x_B`.
    beta: Vec<BigInt>,
    det: BigInt,
}

impl Tableau {
    /// `det * B⁻¹ col`.
    fn ftran(&self, col: &[(usize, BigInt)]) -> Vec<BigInt> {
        self.m
            .iter()
            .map(|row| col.iter().map(|(k, v)| &row[*k] * v).sum())
            .collect()
    }

    fn pivot(&mut self, r: usize, entering: usize, w: &[BigInt]) {
        let p = w[r].clone();
        let d = self.m.len();
        let (mr, br) = (self.m[r].clone(), self.beta[r].clone());
        for i in 0..d {
            if i == r || w[i].is_zero() {
                if i != r {
                    for k in 0..d {
                        self.m[i][k] = &self.m[i][k] * &p / &self.det;
                    }
                    self.beta[i] = &self.beta[i] * &p / &self.det;
                }
                continue;
            }
            for k in 0..d {
                self.m[i][k] = (&self.m[i][k] * &p - &w[i] * &mr[k]) / &self.det;
            }
            self.beta[i] = (&self.beta[i] * &p - &w[i] * &br) / &self.det;
        }
        self.basis[r] = entering;
        self.det = p;
        if self.det.is_negative() {
            self.det = -&self.det;
            for row in self.m.iter_mut() {
                row.iter_mut().for_each(|v| *v = -&*v);
            }
            self.beta.iter_mut().for_each(|v| *v = -&*v);
        }
    }

    /// `det * c_Bᵀ B⁻¹`.
    fn multipliers(&self, cost: &dyn Fn(usize) -> BigInt) -> Vec<BigInt> {
        let d = self.m.len();
        let mut dpi = vec![BigInt::zero(); d];
        for (i, &j) in self.basis.iter().enumerate() {
            let c = cost(j);
            if c.is_zero() {
                continue;
            }
            for k in 0..d {
                dpi[k] += &c * &self.m[i][k];
            }
        }
        dpi
    }

    /// Maximizes `cost` over the current phase; columns `>= eligible` never
    /// enter. Returns `det * π` at the optimum, or `Err` when unbounded.
    fn optimize(
        &mut self,
        columns: &[Vec<(usize, BigInt)>],
        cost: &dyn Fn(usize) -> BigInt,
        eligible: usize,
        rule: PivotRule,
    ) -> Result<Vec<BigInt>, ()> {
        let mut bland = rule == PivotRule::Bland;
        let mut degenerate_run = 0usize;
        let mut in_basis = vec![false; columns.len()];
        for &j in &self.basis {
            in_basis[j] = true;
        }
        loop {
            let dpi = self.multipliers(cost);
            let mut entering: Option<(usize, BigInt)> = None;
            for (j, col) in columns.iter().enumerate().take(eligible) {
                if in_basis[j] {
                    continue;
                }
                let reduced: BigInt =
                    &self.det * cost(j) - col.iter().map(|(k, v)| &dpi[*k] * v).sum::<BigInt>();
                if reduced.is_positive() {
                    if bland {
                        entering = Some((j, reduced));
                        break;
                    }
                    if entering.as_ref().map_or(true, |(_, best)| reduced > *best) {
                        entering = Some((j, reduced));
                    }
                }
            }
            let Some((s, _)) = entering else { return Ok(dpi) };
            let w = self.ftran(&columns[s]);
            let mut leave: Option<usize> = None;
            for i in 0..w.len() {
                if !w[i].is_positive() {
                    continue;
                }
                leave = Some(match leave {
                    None => i,
                    Some(l) => {
                        // beta_i / w_i versus beta_l / w_l
                        match (&self.beta[i] * &w[l]).cmp(&(&self.beta[l] * &w[i])) {
                            Ordering::Less => i,
                            Ordering::Equal if self.basis[i] < self.basis[l] => i,
                            _ => l,
                        }
                    }
                });
            }
            let Some(r) = leave else { return Err(()) };
            if self.beta[r].is_zero() {
                degenerate_run += 1;
                if degenerate_run >= DEGENERATE_RUN {
                    bland = true;
                }
            } else {
                degenerate_run = 0;
            }
            in_basis[self.basis[r]] = false;
            in_basis[s] = true;
            self.pivot(r, s, &w);
        }
    }

    /// Replaces basic artificials sitting at zero by real columns where
    /// possible; the rest belong to redundant equations and never move.
    fn drive_out_artificials(&mut self, columns: &[Vec<(usize, BigInt)>], n_real: usize) {
        for r in 0..self.basis.len() {
            if self.basis[r] < n_real {
                continue;
            }
            let mut in_basis = vec![false; columns.len()];
            for &j in &self.basis {
                in_basis[j] = true;
            }
            let found = (0..n_real).filter(|&j| !in_basis[j]).find_map(|j| {
                let entry: BigInt = columns[j].iter().map(|(k, v)| &self.m[r][*k] * v).sum();
                (!entry.is_zero()).then_some(j)
            });
            if let Some(j) = found {
                let w = self.ftran(&columns[j]);
                self.pivot(r, j, &w);
            }
        }
    }
}

/// The body of `t P_D` for the class `coeffs`, as one system in `(a, b, t)`.
fn mu_system(preset: SurfacePreset, coeffs: &[Rational], n: usize) -> Result<HPolyhedron, LpError> {
    let polygon = preset.polygon_of_class(coeffs)?;
    Ok(build_param_body(&ParamPolygon::dilations(&polygon), n, 1))
}

/// The LP behind [`mu_slope`]: minimize `t` over `(a, b, t)`.
pub fn mu_lp(preset: SurfacePreset, coeffs: &[Rational], n: usize) -> Result<LPResult, LpError> {
    let h = mu_system(preset, coeffs, n)?;
    let mut objective = QVector::zeros(h.dim());
    objective[2 * n] = Rational::one();
    Ok(minimize(&h, &objective))
}

/// Least `t` with `t D_n + E` having a nonempty upper-bound body; `None`
/// when no `t` works.
pub fn mu_slope(preset: SurfacePreset, coeffs: &[Rational], n: usize) -> Result<Option<Rational>, LpError> {
    let res = mu_lp(preset, coeffs, n)?;
    match res.status {
        LPStatus::Optimal => Ok(res.value),
        LPStatus::Infeasible => Ok(None),
        LPStatus::Unbounded => Err(LpError::Unbounded),
    }
}

/// Whether the body of `t D_n + E` is nonempty for this particular `t`.
pub fn body_nonempty(preset: SurfacePreset, coeffs: &[Rational], t: &Rational, n: usize, r: i64) -> Result<bool, LpError> {
    let scaled: Vec<Rational> = coeffs.iter().map(|c| c * t).collect();
    let polygon = preset.polygon_of_class(&scaled)?;
    let h = crate::polytope::build_toric_body(&polygon, n, r);
    Ok(feasible_point(&h).is_some())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FacetVerdict {
    ValidAndTight,
    ValidNotTight,
    Violated,
}

impl fmt::Display for FacetVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FacetVerdict::ValidAndTight => "valid_and_tight",
            FacetVerdict::ValidNotTight => "valid_not_tight",
            FacetVerdict::Violated => "violated",
        })
    }
}

/// The system in `(a, b, class coordinates)` of classes `D + E` with
/// nonempty upper-bound body.
pub fn class_cone_system(preset: SurfacePreset, n: usize) -> HPolyhedron {
    build_param_body(&ParamPolygon::family(&preset.family()), n, 1)
}

/// Minimum of `class_coeffs · (x, y) - e_coeff` over classes `D + E` with
/// nonempty body; the inequality `class_coeffs · D >= e_coeff z` is valid
/// on that slice iff this is `>= 0` and tight iff it is `0`.
pub fn facet_margin(preset: SurfacePreset, n: usize, facet: &[Rational]) -> Result<Option<Rational>, LpError> {
    let rank = preset.picard_rank();
    if rank < 2 {
        return Err(LpError::RankOne(preset));
    }
    if facet.len() != rank + 1 {
        return Err(LpError::FacetLength {
            expected: rank + 1,
            got: facet.len(),
        });
    }
    let h = class_cone_system(preset, n);
    let mut objective = QVector::zeros(h.dim());
    for (k, v) in facet[..rank].iter().enumerate() {
        objective[2 * n + k] = v.clone();
    }
    let res = minimize(&h, &objective);
    match res.status {
        LPStatus::Optimal => Ok(Some(res.value.expect("optimal") - &facet[rank])),
        LPStatus::Unbounded => Ok(None),
        LPStatus::Infeasible => Err(LpError::Infeasible),
    }
}

pub fn facet_check(preset: SurfacePreset, n: usize, facet: &[Rational]) -> Result<FacetVerdict, LpError> {
    Ok(match facet_margin(preset, n, facet)? {
        None => FacetVerdict::Violated,
        Some(m) if m.is_negative() => FacetVerdict::Violated,
        Some(m) if m.is_zero() => FacetVerdict::ValidAndTight,
        Some(_) => FacetVerdict::ValidNotTight,
    })
}

/// Rational multiples used when reading class coordinates from integers.
pub fn ints(values: &[i64]) -> Vec<Rational> {
    values.iter().map(|&v| int(v)).collect()
}
