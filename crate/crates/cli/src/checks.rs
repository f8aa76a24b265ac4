use std::collections::BTreeSet;

use hilbno::dh::{default_grid, dh_compare};
use hilbno::lp::mu_slope;
use hilbno::oracle::{
    determinant, determinant_valuations, distinct_tuples_in_box, jr_member, minkowski_power_in_box, verify_product_valuations,
};
use hilbno::polytope::{build_toric_body, catalan_cells, vertex_enumerate, volume};
use hilbno::ratcore::{format_rational, int, rat};
use hilbno::reference::reference_values;
use hilbno::semigroup::minkowski_decompose;
use hilbno::{GammaSpec, MPoly, NewtonPolygon, Rational, SurfacePreset, ValVector};
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::CliError;

pub const SUITES: [&str; 6] = ["semigroup", "oracle", "catalan", "dh", "mu", "volume"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckLine {
    pub suite: String,
    pub check: String,
    pub passed: bool,
    pub detail: String,
}

fn line(suite: &str, check: impl Into<String>, passed: bool, detail: impl Into<String>) -> CheckLine {
    CheckLine {
        suite: suite.into(),
        check: check.into(),
        passed,
        detail: detail.into(),
    }
}

pub fn run_suite(name: &str, cfg: &RunConfig) -> Result<Vec<CheckLine>, CliError> {
    match name {
        "semigroup" => Ok(semigroup()),
        "oracle" => Ok(oracle()),
        "catalan" => Ok(catalan()),
        "dh" => dh(),
        "mu" => mu(cfg),
        "volume" => volume_suite(),
        other => Err(CliError::Config(format!(
            "unknown suite {other:?}; expected one of {}",
            SUITES.join(", ")
        ))),
    }
}

/// Membership straight from the sum-form inequalities, with negative
/// degrees folded by parity.
fn sum_form_member(v: &ValVector, r: i64) -> bool {
    let r = if r < 0 { r.rem_euclid(2) } else { r };
    let (p, q) = (&v.a, &v.b);
    let n = p.len();
    if p.iter().any(|&x| x < 0) || q.iter().any(|&x| x < 0) {
        return false;
    }
    (0..n).all(|j| {
        let ordered = j + 1 == n || (p[j] <= p[j + 1] && (p[j] < p[j + 1] || q[j + 1] >= q[j] + r));
        let need: i64 = (0..j).filter(|&i| p[j] - p[i] < r).map(|i| r - p[j] + p[i]).sum();
        ordered && q[j] >= need
    })
}

fn box_points(n: usize, bound: i64) -> Vec<ValVector> {
    let dims = 2 * n;
    let side = (bound + 1) as usize;
    (0..side.pow(dims as u32))
        .map(|mut k| {
            let mut c = vec![0i64; dims];
            for slot in c.iter_mut() {
                *slot = (k % side) as i64;
                k /= side;
            }
            ValVector::from_coords(&c).expect("even length")
        })
        .collect()
}

fn semigroup() -> Vec<CheckLine> {
    let s = "semigroup";
    let mut out = Vec::new();
    for n in 1..=3usize {
        let pts = box_points(n, 3);
        for r in -2..=3i64 {
            let spec = GammaSpec::c2(n, r);
            let bad = pts.iter().filter(|v| spec.member(v).unwrap() != sum_form_member(v, r)).count();
            out.push(line(
                s,
                format!("membership n={n} r={r}"),
                bad == 0,
                format!("{} box points, {bad} disagreements with the sum form", pts.len()),
            ));
        }
    }
    for n in 1..=3usize {
        for r in 1..=3i64 {
            let g1 = GammaSpec::c2(n, 1);
            let members = GammaSpec::c2(n, r).enumerate_box(4, 4);
            let bad = members
                .iter()
                .filter(|v| match minkowski_decompose(v, r) {
                    Ok(parts) => {
                        parts.len() != r as usize
                            || ValVector::sum(n, &parts) != **v
                            || !parts.iter().all(|p| g1.member(p).unwrap_or(false))
                    }
                    Err(_) => true,
                })
                .count();
            out.push(line(
                s,
                format!("decomposition n={n} r={r}"),
                bad == 0,
                format!("{} members, {bad} failures", members.len()),
            ));
        }
    }
    for n in 1..=3usize {
        let spec = GammaSpec::c2(n, 2);
        let members = spec.enumerate_box(2, 2);
        let bad = members
            .iter()
            .flat_map(|u| members.iter().map(move |w| u.add(w)))
            .filter(|s| !spec.member(s).unwrap())
            .count();
        out.push(line(
            s,
            format!("closure under addition n={n} r=2"),
            bad == 0,
            format!("{} sums, {bad} outside", members.len() * members.len()),
        ));
    }
    out
}

fn oracle() -> Vec<CheckLine> {
    let s = "oracle";
    let bound = 6i64;
    let mut out = Vec::new();
    for n in 1..=3usize {
        let tuples = distinct_tuples_in_box(n, bound as u32, bound as u32);
        let dets = determinant_valuations(&tuples);
        let g1: BTreeSet<ValVector> = GammaSpec::c2(n, 1).enumerate_box(bound, bound).into_iter().collect();
        out.push(line(
            s,
            format!("determinant valuations n={n}"),
            dets == g1,
            format!("{} determinants, {} semigroup members", dets.len(), g1.len()),
        ));
        for r in 1..=3u32 {
            let gamma: BTreeSet<ValVector> = GammaSpec::c2(n, r as i64).enumerate_box(bound, bound).into_iter().collect();
            let sums = minkowski_power_in_box(&dets, n, r, bound, bound);
            out.push(line(
                s,
                format!("box equality n={n} r={r}"),
                gamma == sums,
                format!("{} members, {} product valuations", gamma.len(), sums.len()),
            ));
            let expanded = verify_product_valuations(&tuples, r as usize, 10);
            let in_ideal = (0..3).all(|k| {
                let f = (0..r as usize).fold(MPoly::one(n), |acc, f| {
                    &acc * &determinant(&tuples[(k * 101 + f * 37) % tuples.len()]).expect("distinct")
                });
                jr_member(&f, r)
            });
            out.push(line(
                s,
                format!("expanded products n={n} r={r}"),
                expanded.is_ok() && in_ideal,
                match expanded {
                    Ok(c) => format!("{c} trailing terms match, ideal power membership {in_ideal}"),
                    Err(e) => e.to_string(),
                },
            ));
        }
    }
    out
}

fn catalan() -> Vec<CheckLine> {
    reference_values()
        .catalan
        .iter()
        .map(|&(n, want)| {
            let got = catalan_cells(n) as u64;
            line("catalan", format!("cells n={n}"), got == want, format!("got {got}, expected {want}"))
        })
        .collect()
}

fn dh() -> Result<Vec<CheckLine>, CliError> {
    let s = "dh";
    let grid = default_grid();
    let mut devs = Vec::new();
    let mut out = Vec::new();
    for r in [10i64, 20, 40] {
        let g = dh_compare(2, r, &grid).map_err(|e| CliError::Internal(e.to_string()))?;
        out.push(line(s, format!("max deviation r={r}"), true, format_rational(&g.max_dev)));
        devs.push(g.max_dev);
    }
    let monotone = devs.windows(2).all(|w| w[1] < w[0]);
    out.push(line(s, "deviation decreases (empirical)", monotone, format!("{devs:?}")));
    let bound = rat(10, 40);
    out.push(line(
        s,
        "deviation at r=40 within 10/r (empirical)",
        devs[2] <= bound,
        format!("{} <= {}", format_rational(&devs[2]), format_rational(&bound)),
    ));
    let single = dh_compare(1, 4, &grid).map_err(|e| CliError::Internal(e.to_string()))?;
    out.push(line(
        s,
        "one point is exact",
        single.max_dev == Rational::from_integer(0.into()),
        format_rational(&single.max_dev),
    ));
    Ok(out)
}

fn mu(cfg: &RunConfig) -> Result<Vec<CheckLine>, CliError> {
    let refs = reference_values();
    let ns = cfg.n_values((2, 20))?;
    let surfaces: Vec<String> = match &cfg.surfaces {
        Some(list) => list.clone(),
        None => refs.mu_table.iter().map(|c| c.surface.clone()).collect(),
    };
    let mut jobs = Vec::new();
    for name in &surfaces {
        let col = refs
            .mu_column(name)
            .ok_or_else(|| CliError::Config(format!("no reference column for {name}")))?;
        for &n in &ns {
            let want = col
                .get(n)
                .ok_or_else(|| CliError::Config(format!("no reference value for {name} n={n}")))?;
            jobs.push((name.clone(), col.preset(), col.class.clone(), n, want.clone()));
        }
    }
    Ok(jobs
        .par_iter()
        .map(|(name, preset, class, n, want)| {
            let got = mu_slope(*preset, class, *n);
            let passed = matches!(&got, Ok(Some(v)) if v == want);
            let shown = match got {
                Ok(Some(v)) => format_rational(&v),
                Ok(None) => "infeasible".into(),
                Err(e) => e.to_string(),
            };
            line(
                "mu",
                format!("{name} n={n}"),
                passed,
                format!("got {shown}, expected {}", format_rational(want)),
            )
        })
        .collect())
}

fn volume_suite() -> Result<Vec<CheckLine>, CliError> {
    let s = "volume";
    let refs = reference_values().plane_degree_four;
    let internal = |e: hilbno::polytope::PolytopeError| CliError::Internal(e.to_string());
    let mut out = Vec::new();
    let four = build_toric_body(&NewtonPolygon::triangle(int(4)).unwrap(), 4, 1);
    let v = vertex_enumerate(&four);
    let vol = volume(&v).map_err(internal)?;
    out.push(line(
        s,
        "plane n=4 vertices",
        v.vertices.len() == refs.n4_vertices,
        format!("got {}, expected {}", v.vertices.len(), refs.n4_vertices),
    ));
    out.push(line(
        s,
        "plane n=4 volume",
        vol == refs.n4_volume,
        format!("got {}, expected {}", format_rational(&vol), format_rational(&refs.n4_volume)),
    ));
    let five = vertex_enumerate(&build_toric_body(&NewtonPolygon::triangle(int(4)).unwrap(), 5, 1));
    out.push(line(
        s,
        "plane n=5 vertices",
        five.vertices.len() == refs.n5_vertices,
        format!("got {}, expected {}", five.vertices.len(), refs.n5_vertices),
    ));
    let three = build_toric_body(&NewtonPolygon::triangle(refs.slice_target_degree.clone()).unwrap(), 4, 1);
    let sliced = four.slice_shift(&refs.slice_t).map_err(internal)?;
    let same = sliced.same_set(&three);
    out.push(line(s, "slice identity n=4", same, format!("same set {same}")));
    for preset in [
        SurfacePreset::P2,
        SurfacePreset::P1xP1,
        SurfacePreset::Hirzebruch(1),
        SurfacePreset::Hirzebruch(2),
    ] {
        let p = preset.polygon_of_class(&preset.generator()).unwrap();
        let area = p.area().unwrap();
        for n in 2..=3usize {
            let got = volume(&vertex_enumerate(&build_toric_body(&p, n, 0))).map_err(internal)?;
            let fact = (1..=n as i64).map(int).fold(Rational::one(), |a, b| a * b);
            let want = num_traits::pow(area.clone(), n) / fact;
            out.push(line(
                s,
                format!("area formula {preset} n={n}"),
                got == want,
                format!("got {}, expected {}", format_rational(&got), format_rational(&want)),
            ));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_suites_pass() {
        for suite in ["catalan", "semigroup"] {
            let lines = run_suite(suite, &RunConfig::default()).unwrap();
            assert!(!lines.is_empty());
            assert!(lines.iter().all(|l| l.passed), "{lines:?}");
        }
    }

    #[test]
    fn unknown_suite_is_a_config_error() {
        assert!(matches!(run_suite("plots", &RunConfig::default()), Err(CliError::Config(_))));
    }

    #[test]
    fn sum_form_examples() {
        let v = |c: &[i64]| ValVector::from_coords(c).unwrap();
        assert!(sum_form_member(&v(&[0, 0, 0, 2]), 2));
        assert!(!sum_form_member(&v(&[0, 0, 0, 1]), 2));
        assert!(sum_form_member(&v(&[0, 0, 0, 1]), -1));
        assert!(sum_form_member(&v(&[0, 0, 0, 0]), -2));
    }
}
