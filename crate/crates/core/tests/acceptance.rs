//! One PASS/FAIL line per acceptance criterion. Run with
//! `cargo test -p hilbno --test acceptance -- --nocapture` to see them.

use std::collections::BTreeSet;
use std::time::Instant;

use hilbno::dh::{default_grid, dh_compare};
use hilbno::lp::{body_nonempty, facet_check, mu_slope};
use hilbno::oracle::{determinant_valuations, distinct_tuples_in_box, minkowski_power_in_box, verify_product_valuations};
use hilbno::polytope::{build_toric_body, catalan_cells, vertex_enumerate, volume};
use hilbno::ratcore::{int, rat};
use hilbno::reference::reference_values;
use hilbno::semigroup::minkowski_decompose;
use hilbno::{FacetVerdict, GammaSpec, NewtonPolygon, Rational, SurfacePreset, ValVector};
use num_traits::{One, Zero};
use rayon::prelude::*;

struct Report {
    failures: Vec<usize>,
}

impl Report {
    fn record(&mut self, id: usize, title: &str, started: Instant, outcome: Result<String, String>) {
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS [{id:>2}] {title}: {detail} ({secs:.1}s)"),
            Err(detail) => {
                println!("FAIL [{id:>2}] {title}: {detail} ({secs:.1}s)");
                self.failures.push(id);
            }
        }
    }
}

fn factorial(n: usize) -> Rational {
    (1..=n as i64).map(int).fold(Rational::one(), |a, b| a * b)
}

fn mu_table() -> Result<String, String> {
    let refs = reference_values();
    let jobs: Vec<(String, SurfacePreset, Vec<Rational>, usize, Rational)> = refs
        .mu_table
        .iter()
        .flat_map(|col| {
            col.values
                .iter()
                .map(move |(n, v)| (col.surface.clone(), col.preset(), col.class.clone(), *n, v.0.clone()))
        })
        .collect();
    let mismatches: Vec<String> = jobs
        .par_iter()
        .filter_map(|(name, preset, class, n, want)| match mu_slope(*preset, class, *n) {
            Ok(Some(got)) if &got == want => None,
            other => Some(format!("{name} n={n}: got {other:?}, want {want}")),
        })
        .collect();
    if mismatches.is_empty() {
        Ok(format!("{} entries exact, n = 2..40 on P2, P1xP1, H1, H2", jobs.len()))
    } else {
        Err(mismatches.join("; "))
    }
}

fn plane_four() -> Result<String, String> {
    let refs = reference_values().plane_degree_four;
    let h = build_toric_body(&NewtonPolygon::triangle(int(4)).unwrap(), 4, 1);
    let v = vertex_enumerate(&h);
    let vol = volume(&v).map_err(|e| e.to_string())?;
    let scaled = &vol * factorial(8);
    let ok = v.vertices.len() == refs.n4_vertices && v.is_bounded() && vol == refs.n4_volume && scaled == refs.n4_volume_times_8_factorial;
    let detail = format!("{} vertices, volume {vol}, times 8! = {scaled}", v.vertices.len());
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn plane_five() -> Result<String, String> {
    let want = reference_values().plane_degree_four.n5_vertices;
    let h = build_toric_body(&NewtonPolygon::triangle(int(4)).unwrap(), 5, 1);
    let v = vertex_enumerate(&h);
    let detail = format!("{} vertices, bounded = {}", v.vertices.len(), v.is_bounded());
    if v.vertices.len() == want && v.is_bounded() {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn volume_formula() -> Result<String, String> {
    let presets = [
        SurfacePreset::P2,
        SurfacePreset::P1xP1,
        SurfacePreset::Hirzebruch(1),
        SurfacePreset::Hirzebruch(2),
    ];
    let mut bad = Vec::new();
    let mut checked = 0;
    for preset in presets {
        let p = preset.polygon_of_class(&preset.generator()).unwrap();
        let area = p.area().unwrap();
        for n in 2..=3usize {
            let v = vertex_enumerate(&build_toric_body(&p, n, 0));
            let got = volume(&v).map_err(|e| e.to_string())?;
            let want = num_traits::pow(area.clone(), n) / factorial(n);
            checked += 1;
            if got != want {
                bad.push(format!("{preset} n={n}: {got} vs {want}"));
            }
        }
    }
    if bad.is_empty() {
        Ok(format!("{checked} bodies equal area^n/n!"))
    } else {
        Err(bad.join("; "))
    }
}

fn catalan() -> Result<String, String> {
    let want = reference_values().catalan;
    let got: Vec<(usize, u64)> = want.iter().map(|&(n, _)| (n, catalan_cells(n) as u64)).collect();
    let detail = format!("{:?}", got.iter().map(|g| g.1).collect::<Vec<_>>());
    if got == want {
        Ok(detail)
    } else {
        Err(detail)
    }
}

const BOX: i64 = 6;

fn box_equivalence() -> Result<String, String> {
    let mut sizes = Vec::new();
    for n in 1..=3usize {
        let tuples = distinct_tuples_in_box(n, BOX as u32, BOX as u32);
        let from_dets = determinant_valuations(&tuples);
        let gamma1: BTreeSet<ValVector> = GammaSpec::c2(n, 1).enumerate_box(BOX, BOX).into_iter().collect();
        if from_dets != gamma1 {
            return Err(format!("n={n}: determinant valuations differ from the degree-one semigroup"));
        }
        for r in 1..=3u32 {
            let gamma: BTreeSet<ValVector> = GammaSpec::c2(n, r as i64).enumerate_box(BOX, BOX).into_iter().collect();
            let sums = minkowski_power_in_box(&gamma1, n, r, BOX, BOX);
            if gamma != sums {
                return Err(format!("n={n} r={r}: {} members vs {} sums", gamma.len(), sums.len()));
            }
            let expanded = verify_product_valuations(&tuples, r as usize, 10).map_err(|e| format!("n={n} r={r}: {e}"))?;
            sizes.push(format!("n{n}r{r}:{}/{expanded}", gamma.len()));
        }
    }
    Ok(format!("members/expanded products {}", sizes.join(" ")))
}

fn decomposition() -> Result<String, String> {
    let mut total = 0usize;
    for n in 1..=3usize {
        let gamma1 = GammaSpec::c2(n, 1);
        for r in 1..=3i64 {
            for v in GammaSpec::c2(n, r).enumerate_box(BOX, BOX) {
                let parts = minkowski_decompose(&v, r).map_err(|e| format!("{v}: {e}"))?;
                let ok = parts.len() == r as usize
                    && parts.iter().all(|p| gamma1.member(p).unwrap_or(false))
                    && ValVector::sum(n, &parts) == v;
                if !ok {
                    return Err(format!("n={n} r={r}: {v} split as {parts:?}"));
                }
                total += 1;
            }
        }
    }
    Ok(format!("{total} members split into degree-one parts"))
}

fn slice_identity() -> Result<String, String> {
    let refs = reference_values().plane_degree_four;
    let four = build_toric_body(&NewtonPolygon::triangle(int(4)).unwrap(), 4, 1);
    let three = build_toric_body(&NewtonPolygon::triangle(refs.slice_target_degree.clone()).unwrap(), 4, 1);
    let sliced = four.slice_shift(&refs.slice_t).map_err(|e| e.to_string())?;
    let (fwd, back) = (three.contains_polyhedron(&sliced), sliced.contains_polyhedron(&three));
    let detail = format!("sliced within target: {fwd}, target within sliced: {back}");
    if fwd && back {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn effective_cone() -> Result<String, String> {
    let refs = reference_values().plane_four_points_effective_cone;
    let p2 = SurfacePreset::P2;
    let h = [int(1)];
    let lower = &refs.mu - &refs.below_by;
    let at = body_nonempty(p2, &h, &refs.mu, 4, 1).map_err(|e| e.to_string())?;
    let below = body_nonempty(p2, &h, &lower, 4, 1).map_err(|e| e.to_string())?;
    // the 3H+2E ray: degree 2 normalization
    let ray = body_nonempty(p2, &h, &(&refs.mu * int(2)), 4, 2).map_err(|e| e.to_string())?;
    let ray_below = body_nonempty(p2, &h, &(&lower * int(2)), 4, 2).map_err(|e| e.to_string())?;
    let mut minus_e = true;
    for (t, r) in [(Rational::zero(), -1), (Rational::zero(), -3), (rat(1, 2), -1), (int(2), -2)] {
        minus_e &= body_nonempty(p2, &h, &t, 4, r).map_err(|e| e.to_string())?;
    }
    let detail = format!(
        "t={} feasible {at}, t={lower} feasible {below}, 3H+2E feasible {ray} (below {ray_below}), -E side nonempty {minus_e}",
        refs.mu
    );
    if at && !below && ray && !ray_below && minus_e {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn p1xp1_facets() -> Result<String, String> {
    let refs = reference_values().p1xp1_facets;
    let mut out = Vec::new();
    for f in &refs.facets {
        let v = facet_check(SurfacePreset::P1xP1, refs.n, &f.0).map_err(|e| e.to_string())?;
        let label = format!("({},{}|{}) {v}", f.0[0], f.0[1], f.0[2]);
        if v != FacetVerdict::ValidAndTight {
            return Err(label);
        }
        out.push(label);
    }
    Ok(out.join(", "))
}

fn dh_convergence() -> Result<String, String> {
    let grid = default_grid();
    let mut devs = Vec::new();
    for r in [10i64, 20, 40] {
        let g = dh_compare(2, r, &grid).map_err(|e| e.to_string())?;
        devs.push((r, g.max_dev));
    }
    let monotone = devs.windows(2).all(|w| w[1].1 < w[0].1);
    let last = &devs[2];
    let within = last.1 <= rat(10, last.0);
    let detail = format!(
        "max deviation {} (empirical thresholds: monotone {monotone}, r=40 within 10/r {within})",
        devs.iter().map(|(r, d)| format!("r={r}: {d}")).collect::<Vec<_>>().join(", ")
    );
    if monotone && within {
        Ok(detail)
    } else {
        Err(detail)
    }
}

#[test]
fn acceptance() {
    let mut report = Report { failures: Vec::new() };
    let criteria: Vec<(usize, &str, fn() -> Result<String, String>)> = vec![
        (1, "mu table", mu_table),
        (2, "plane, four points: vertices and volume", plane_four),
        (3, "plane, five points: vertices", plane_five),
        (4, "toric volume formula", volume_formula),
        (5, "bounded-face cells", catalan),
        (6, "box equivalence of the three descriptions", box_equivalence),
        (7, "decomposition round trip", decomposition),
        (8, "slice identity", slice_identity),
        (9, "effective-cone endpoints, plane, four points", effective_cone),
        (10, "P1xP1 n=17 facets", p1xp1_facets),
        (11, "fiber-volume convergence", dh_convergence),
    ];
    for (id, title, run) in criteria {
        let started = Instant::now();
        report.record(id, title, started, run());
    }
    assert!(report.failures.is_empty(), "failed criteria: {:?}", report.failures);
}
