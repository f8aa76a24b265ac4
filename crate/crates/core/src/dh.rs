//! Graded counts of `Γ_r` against fiber volumes of the `r = 1` body over
//! the plane, and the grid comparison between them.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::polytope::{build_c2_body, vertex_enumerate, volume, HPolyhedron, HRow, PolytopeError};
use crate::ratcore::{approx_f64, rat, rational_str, QVector, Rational};
use crate::semigroup::GammaSpec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DhError {
    #[error("number of points must be positive")]
    ZeroPoints,
    #[error("scale must be positive, got {0}")]
    NonPositiveScale(i64),
    #[error("grid point ({p}, {q}) times {r} is not a lattice point")]
    OffLattice { p: Rational, q: Rational, r: i64 },
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

/// Volume of `{(a, b) in Δ(O(1)) : Σa = p, Σb = q}` in the coordinates
/// `a_1..a_{n-1}, b_1..b_{n-1}`.
pub fn fiber_volume(n: usize, p: &Rational, q: &Rational) -> Result<Rational, DhError> {
    if n == 0 {
        return Err(DhError::ZeroPoints);
    }
    if n == 1 {
        let inside = !p.is_negative() && !q.is_negative();
        return Ok(if inside { Rational::one() } else { Rational::zero() });
    }
    let fiber = fiber_body(n, p, q)?;
    let v = vertex_enumerate(&fiber);
    if v.is_empty() {
        return Ok(Rational::zero());
    }
    Ok(volume(&v)?)
}

fn fiber_body(n: usize, p: &Rational, q: &Rational) -> Result<HPolyhedron, DhError> {
    let body = build_c2_body(n, 1);
    let m = n - 1;
    let rows = body
        .rows()
        .iter()
        .map(|row| {
            let w = row.normal.as_slice();
            let (wa, wb) = (&w[n - 1], &w[2 * n - 1]);
            let mut normal = Vec::with_capacity(2 * m);
            normal.extend((0..m).map(|i| &w[i] - wa));
            normal.extend((0..m).map(|i| &w[n + i] - wb));
            HRow::new(QVector(normal), &row.offset - wa * p - wb * q)
        })
        .filter(|row| !row.normal.is_zero() || row.offset.is_positive());
    let rows: Vec<HRow> = rows.collect();
    if rows.iter().any(|r| r.normal.is_zero()) {
        // a constant row that fails: the fiber is empty
        return Ok(HPolyhedron::new(
            2 * m,
            vec![
                HRow::new(QVector::unit(2 * m, 0), Rational::one()),
                HRow::new(QVector::unit(2 * m, 0).scale(&-Rational::one()), Rational::zero()),
            ],
        )?);
    }
    Ok(HPolyhedron::new(2 * m, rows)?)
}

/// The sample grid `p, q in {1/2, 1, 3/2, 2, 5/2}`.
pub fn default_grid() -> Vec<(Rational, Rational)> {
    let vals: Vec<Rational> = (1..=5).map(|k| rat(k, 2)).collect();
    vals.iter()
        .flat_map(|p| vals.iter().map(move |q| (p.clone(), q.clone())))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DhRow {
    #[serde(with = "rational_str")]
    pub p: Rational,
    #[serde(with = "rational_str")]
    pub q: Rational,
    pub count: u64,
    #[serde(with = "rational_str")]
    pub count_scaled: Rational,
    #[serde(with = "rational_str")]
    pub fiber_volume: Rational,
    #[serde(with = "rational_str")]
    pub abs_dev: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DhGrid {
    pub n: usize,
    pub r: i64,
    pub rows: Vec<DhRow>,
    #[serde(with = "rational_str")]
    pub max_dev: Rational,
}

impl DhGrid {
    pub fn max_dev_f64(&self) -> f64 {
        approx_f64(&self.max_dev)
    }
}

/// Compares `#Γ_r^{(rp, rq)} / r^{2n-2}` with the fiber volume at each
/// grid point.
pub fn dh_compare(n: usize, r: i64, grid: &[(Rational, Rational)]) -> Result<DhGrid, DhError> {
    if n == 0 {
        return Err(DhError::ZeroPoints);
    }
    if r <= 0 {
        return Err(DhError::NonPositiveScale(r));
    }
    let spec = GammaSpec::c2(n, r);
    let rr = Rational::from_integer(r.into());
    let norm = num_traits::pow(rr.clone(), 2 * n - 2);
    let mut rows = Vec::with_capacity(grid.len());
    let mut max_dev = Rational::zero();
    for (p, q) in grid {
        let (rp, rq) = (p * &rr, q * &rr);
        if !rp.is_integer() || !rq.is_integer() {
            return Err(DhError::OffLattice {
                p: p.clone(),
                q: q.clone(),
                r,
            });
        }
        let to_i64 = |x: &Rational| i64::try_from(x.to_integer()).expect("grid fits in i64");
        let count = spec.graded_count(to_i64(&rp), to_i64(&rq));
        let count_scaled = Rational::from_integer(count.into()) / &norm;
        let fv = fiber_volume(n, p, q)?;
        let abs_dev = (&count_scaled - &fv).abs();
        if abs_dev > max_dev {
            max_dev = abs_dev.clone();
        }
        rows.push(DhRow {
            p: p.clone(),
            q: q.clone(),
            count,
            count_scaled,
            fiber_volume: fv,
            abs_dev,
        });
    }
    Ok(DhGrid { n, r, rows, max_dev })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratcore::int;

    #[test]
    fn one_point_fibers() {
        assert_eq!(fiber_volume(1, &int(3), &int(2)).unwrap(), int(1));
        assert_eq!(fiber_volume(1, &int(-1), &int(2)).unwrap(), int(0));
        assert!(matches!(fiber_volume(0, &int(1), &int(1)), Err(DhError::ZeroPoints)));
    }

    // Two points: with a_1 = s, b_1 = u the fiber is 0 <= s <= p/2 and
    // 0 <= u <= min(q, q - 1 + p - 2s). The integrand is piecewise linear,
    // so trapezoids between its breakpoints are exact.
    fn two_point_oracle(p: &Rational, q: &Rational) -> Rational {
        let c = q - int(1) + p;
        let f = |s: &Rational| {
            let v = std::cmp::min(q.clone(), &c - s * int(2));
            std::cmp::max(v, Rational::zero())
        };
        let end = p / int(2);
        let mut cuts = vec![Rational::zero(), end.clone(), (p - int(1)) / int(2), c.clone() / int(2)];
        cuts.retain(|x| !x.is_negative() && *x <= end);
        cuts.sort();
        cuts.windows(2)
            .map(|w| (&w[1] - &w[0]) * (f(&w[0]) + f(&w[1])) / int(2))
            .sum()
    }

    #[test]
    fn two_point_fibers_match_the_integral() {
        for (p, q) in default_grid().into_iter().chain([(int(3), int(0)), (rat(1, 3), rat(1, 3))]) {
            assert_eq!(fiber_volume(2, &p, &q).unwrap(), two_point_oracle(&p, &q), "({p}, {q})");
        }
    }

    #[test]
    fn off_lattice_grid_is_rejected() {
        assert!(matches!(dh_compare(2, 3, &default_grid()), Err(DhError::OffLattice { .. })));
        assert!(matches!(dh_compare(2, 0, &default_grid()), Err(DhError::NonPositiveScale(0))));
    }

    #[test]
    fn single_point_counts_are_exact() {
        let g = dh_compare(1, 4, &default_grid()).unwrap();
        assert_eq!(g.max_dev, Rational::zero());
        assert!(g.rows.iter().all(|r| r.count == 1));
    }

    #[test]
    fn deviation_shrinks_with_scale() {
        let devs: Vec<Rational> = [2, 4, 8]
            .iter()
            .map(|&r| dh_compare(2, r, &default_grid()).unwrap().max_dev)
            .collect();
        assert!(devs[0] > devs[1] && devs[1] > devs[2], "{devs:?}");
    }

    #[test]
    fn degenerate_column_has_no_density() {
        // p = 0 pins every a_i, so the fiber is lower dimensional
        assert_eq!(fiber_volume(2, &int(0), &int(2)).unwrap(), int(0));
        let scaled: Vec<Rational> = [10i64, 20, 40]
            .iter()
            .map(|&r| Rational::from_integer(GammaSpec::c2(2, r).graded_count(0, 2 * r).into()) / int(r * r))
            .collect();
        assert!(scaled[0] > scaled[1] && scaled[1] > scaled[2]);
        assert!(scaled[2] <= rat(1, 40));
    }

    #[test]
    fn fiber_volume_is_polynomial_on_a_chamber() {
        use crate::ratcore::{solve_linear, QMatrix};
        let h = rat(1, 10);
        let base = (int(2), int(2));
        let offsets = [(0, 0), (1, 0), (0, 1), (1, 1), (2, 0), (0, 2)];
        let pts: Vec<(Rational, Rational)> = offsets
            .iter()
            .map(|&(i, j)| (&base.0 + &h * int(i), &base.1 + &h * int(j)))
            .collect();
        let monomials = |p: &Rational, q: &Rational| vec![int(1), p.clone(), q.clone(), p * p, p * q, q * q];
        let m = QMatrix::from_rows(pts.iter().map(|(p, q)| monomials(p, q)).collect());
        let v = QVector(pts.iter().map(|(p, q)| fiber_volume(2, p, q).unwrap()).collect());
        let coef = solve_linear(&m, &v).expect("unisolvent points");
        for (p, q) in [(rat(41, 20), rat(43, 20)), (rat(9, 4), rat(11, 5))] {
            let predicted = QVector(monomials(&p, &q)).dot(&coef);
            assert_eq!(fiber_volume(2, &p, &q).unwrap(), predicted, "({p}, {q})");
        }
    }

    #[test]
    fn truncated_mass_matches_the_body() {
        let (pm, qm) = (int(2), int(3) / int(2));
        let mut body = build_c2_body(2, 1).rows().to_vec();
        body.push(HRow::new(QVector(vec![int(-1), int(-1), int(0), int(0)]), -pm.clone()));
        body.push(HRow::new(QVector(vec![int(0), int(0), int(-1), int(-1)]), -qm.clone()));
        let target = volume(&vertex_enumerate(&HPolyhedron::new(4, body).unwrap())).unwrap();
        let mut prev_mass = Rational::zero();
        let mut devs = Vec::new();
        for r in [4i64, 8, 16] {
            let spec = GammaSpec::c2(2, r);
            let (pmax, qmax) = ((&pm * int(r)).to_integer(), (&qm * int(r)).to_integer());
            let (pmax, qmax) = (i64::try_from(pmax).unwrap(), i64::try_from(qmax).unwrap());
            let mut mass = Rational::zero();
            for p in 0..=pmax {
                for q in 0..=qmax {
                    mass += Rational::from_integer(spec.graded_count(p, q).into());
                }
            }
            let mass = mass / num_traits::pow(int(r), 4);
            // a larger box never loses mass
            let smaller: u64 = (0..pmax).flat_map(|p| (0..qmax).map(move |q| (p, q))).map(|(p, q)| spec.graded_count(p, q)).sum();
            assert!(Rational::from_integer(smaller.into()) / num_traits::pow(int(r), 4) <= mass);
            devs.push((&mass - &target).abs());
            prev_mass = mass;
        }
        assert!(prev_mass > Rational::zero());
        assert!(devs[0] > devs[1] && devs[1] > devs[2], "{devs:?}");
        assert!(devs[2] <= rat(8, 16), "{devs:?}");
    }

    #[test]
    fn grid_json_round_trip() {
        let g = dh_compare(2, 2, &default_grid()[..3]).unwrap();
        let text = serde_json::to_string(&g).unwrap();
        let back: DhGrid = serde_json::from_str(&text).unwrap();
        assert_eq!(back, g);
    }
}
