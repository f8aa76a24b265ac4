use hilbno::dh::{default_grid, dh_compare, DhError};
use hilbno::lp::{mu_slope, LpError};
use hilbno::polytope::{build_c2_body, build_toric_body, sorted_vertices, vertex_enumerate, volume};
use hilbno::ratcore::format_rational;
use hilbno::semigroup::{minkowski_decompose, SemigroupError};
use hilbno::{GammaSpec, SurfacePreset, ValVector};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{RunConfig, SemigroupAction, Surface};
use crate::output::{approx, Emission};
use crate::CliError;

const DEFAULT_SURFACES: [&str; 4] = ["P2", "P1xP1", "H1", "H2"];

fn surface_label(cfg: &RunConfig) -> Result<String, CliError> {
    Ok(match cfg.surface()? {
        Surface::Plane => "c2".into(),
        Surface::Preset(p) => p.to_string(),
        Surface::Polygon(_) => "polygon".into(),
    })
}

pub fn mu_table(cfg: &RunConfig) -> Result<Emission, CliError> {
    let names: Vec<String> = match (&cfg.surfaces, &cfg.surface) {
        (Some(list), _) => list.clone(),
        (None, Some(_)) => vec![surface_label(cfg)?],
        (None, None) => DEFAULT_SURFACES.iter().map(|s| s.to_string()).collect(),
    };
    let presets: Vec<(String, SurfacePreset)> = names
        .iter()
        .map(|s| {
            s.parse::<SurfacePreset>()
                .map(|p| (s.clone(), p))
                .map_err(|e| CliError::Config(e.to_string()))
        })
        .collect::<Result<_, _>>()?;
    let coeffs = cfg.coeffs()?;
    let ns = cfg.n_values((2, 20))?;
    let jobs: Vec<(String, SurfacePreset, usize)> = presets
        .iter()
        .flat_map(|(name, p)| ns.iter().map(move |&n| (name.clone(), *p, n)))
        .collect();
    let results: Vec<Result<(String, usize, Option<hilbno::Rational>, &'static str), CliError>> = jobs
        .par_iter()
        .map(|(name, preset, n)| {
            let class = coeffs.clone().unwrap_or_else(|| preset.generator());
            match mu_slope(*preset, &class, *n) {
                Ok(Some(mu)) => Ok((name.clone(), *n, Some(mu), "")),
                Ok(None) => Ok((name.clone(), *n, None, "infeasible")),
                Err(LpError::Unbounded) => Ok((name.clone(), *n, None, "unbounded")),
                Err(LpError::Polygon(e)) => Err(CliError::Config(e.to_string())),
                Err(e) => Err(CliError::Internal(e.to_string())),
            }
        })
        .collect();
    let with_approx = cfg.approx.unwrap_or(false);
    let mut headers = vec!["surface".to_string(), "n".into(), "mu".into()];
    if with_approx {
        headers.push("mu_approx".into());
    }
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    for res in results {
        let (name, n, mu, status) = res?;
        let text = mu.as_ref().map(format_rational).unwrap_or_else(|| status.to_string());
        let mut row = vec![name.clone(), n.to_string(), text.clone()];
        let mut entry = json!({"surface": name, "n": n, "mu": text});
        if with_approx {
            let a = mu.as_ref().map(approx).unwrap_or_default();
            row.push(a.clone());
            entry["mu_approx"] = json!(a);
        }
        rows.push(row);
        entries.push(entry);
    }
    Ok(Emission {
        json: Value::Array(entries),
        headers,
        rows,
    })
}

pub fn body(cfg: &RunConfig) -> Result<Emission, CliError> {
    let n = cfg.require_n()?;
    let r = cfg.require_r()?;
    let h = match cfg.polygon()? {
        Some(p) => build_toric_body(&p, n, r),
        None => build_c2_body(n, r),
    };
    let bounded = h.is_bounded();
    let mut out = json!({
        "surface": surface_label(cfg)?,
        "n": n,
        "r": r,
        "dim": h.dim(),
        "unbounded": !bounded,
        "row_count": h.rows().len(),
        "h_representation": serde_json::to_value(&h).map_err(|e| CliError::Internal(e.to_string()))?,
    });
    let want_vertices = cfg.vertices.unwrap_or(false);
    let want_volume = cfg.volume.unwrap_or(false);
    let mut vertex_count = String::new();
    let mut vol_text = String::new();
    if want_vertices || want_volume {
        let v = vertex_enumerate(&h);
        vertex_count = v.vertices.len().to_string();
        if want_vertices {
            out["vertex_count"] = json!(v.vertices.len());
            out["vertices"] = serde_json::to_value(sorted_vertices(&v)).map_err(|e| CliError::Internal(e.to_string()))?;
            out["rays"] = serde_json::to_value(&v.rays).map_err(|e| CliError::Internal(e.to_string()))?;
            out["lineality"] = serde_json::to_value(&v.lineality).map_err(|e| CliError::Internal(e.to_string()))?;
        }
        if want_volume {
            let vol = volume(&v).map_err(|e| CliError::Config(e.to_string()))?;
            vol_text = format_rational(&vol);
            out["volume"] = json!(vol_text);
            if cfg.approx.unwrap_or(false) {
                out["volume_approx"] = json!(approx(&vol));
            }
        }
    }
    Ok(Emission {
        json: out,
        headers: vec!["n".into(), "r".into(), "vertex_count".into(), "volume".into()],
        rows: vec![vec![n.to_string(), r.to_string(), vertex_count, vol_text]],
    })
}

fn coords_headers(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("p{i}")).chain((1..=n).map(|i| format!("q{i}"))).collect()
}

fn coords_row(v: &ValVector) -> Vec<String> {
    v.coords().iter().map(|c| c.to_string()).collect()
}

fn semigroup_error(e: SemigroupError) -> CliError {
    CliError::Config(e.to_string())
}

fn vector_arg(cfg: &RunConfig) -> Result<ValVector, CliError> {
    let coords = cfg
        .vector
        .as_ref()
        .ok_or_else(|| CliError::Config("this action needs a vector".into()))?;
    ValVector::from_coords(coords).map_err(semigroup_error)
}

pub fn semigroup(cfg: &RunConfig) -> Result<Emission, CliError> {
    let action = cfg
        .action
        .ok_or_else(|| CliError::Config("semigroup needs an action: enumerate, decompose or member".into()))?;
    let r = cfg.require_r()?;
    match action {
        SemigroupAction::Enumerate => {
            let n = cfg.require_n()?;
            let spec = GammaSpec::new(n, r, cfg.polygon()?);
            let members = match (cfg.p, cfg.q, cfg.p_max, cfg.q_max) {
                (Some(p), Some(q), _, _) => spec.enumerate_graded(p, q),
                (_, _, Some(pm), Some(qm)) => spec.enumerate_box(pm, qm),
                _ => {
                    return Err(CliError::Config(
                        "enumerate needs either a degree (p and q) or a box (p_max and q_max)".into(),
                    ))
                }
            };
            Ok(Emission {
                json: json!({
                    "n": n,
                    "r": r,
                    "count": members.len(),
                    "members": members.iter().map(ValVector::coords).collect::<Vec<_>>(),
                }),
                headers: coords_headers(n),
                rows: members.iter().map(coords_row).collect(),
            })
        }
        SemigroupAction::Decompose => {
            let v = vector_arg(cfg)?;
            let parts = minkowski_decompose(&v, r).map_err(semigroup_error)?;
            Ok(Emission {
                json: json!({
                    "vector": v.coords(),
                    "r": r,
                    "parts": parts.iter().map(ValVector::coords).collect::<Vec<_>>(),
                }),
                headers: coords_headers(v.n()),
                rows: parts.iter().map(coords_row).collect(),
            })
        }
        SemigroupAction::Member => {
            let v = vector_arg(cfg)?;
            let spec = GammaSpec::new(v.n(), r, cfg.polygon()?);
            let member = spec.member(&v).map_err(semigroup_error)?;
            let text = v.coords().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ");
            Ok(Emission {
                json: json!({"vector": v.coords(), "r": r, "member": member}),
                headers: vec!["vector".into(), "r".into(), "member".into()],
                rows: vec![vec![text, r.to_string(), member.to_string()]],
            })
        }
    }
}

pub fn dh_grid(cfg: &RunConfig) -> Result<Emission, CliError> {
    let n = cfg.n.unwrap_or(2);
    let r = cfg.require_r()?;
    let grid = dh_compare(n, r, &default_grid()).map_err(|e| match e {
        DhError::Polytope(p) => CliError::Internal(p.to_string()),
        other => CliError::Config(other.to_string()),
    })?;
    let with_approx = cfg.approx.unwrap_or(false);
    let mut headers: Vec<String> = ["p", "q", "count_scaled", "fiber_volume", "abs_dev"].iter().map(|s| s.to_string()).collect();
    if with_approx {
        headers.extend(["count_scaled_approx", "fiber_volume_approx", "abs_dev_approx"].iter().map(|s| s.to_string()));
    }
    let rows = grid
        .rows
        .iter()
        .map(|row| {
            let mut out = vec![
                format_rational(&row.p),
                format_rational(&row.q),
                format_rational(&row.count_scaled),
                format_rational(&row.fiber_volume),
                format_rational(&row.abs_dev),
            ];
            if with_approx {
                out.extend([approx(&row.count_scaled), approx(&row.fiber_volume), approx(&row.abs_dev)]);
            }
            out
        })
        .collect();
    let mut json = serde_json::to_value(&grid).map_err(|e| CliError::Internal(e.to_string()))?;
    if with_approx {
        json["max_dev_approx"] = json!(approx(&grid.max_dev));
    }
    Ok(Emission { json, headers, rows })
}
