use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use hilbno::ratcore::parse_rational;
use hilbno::{NewtonPolygon, Rational, SurfacePreset};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    MuTable,
    Body,
    Semigroup,
    DhGrid,
    Check,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Command::MuTable => "mu-table",
            Command::Body => "body",
            Command::Semigroup => "semigroup",
            Command::DhGrid => "dh-grid",
            Command::Check => "check",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SemigroupAction {
    Enumerate,
    Decompose,
    Member,
}

/// A preset name, `c2` for the plane, or an explicit polygon.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum SurfaceSpec {
    Name(String),
    Polygon { polygon: NewtonPolygon },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Surface {
    Plane,
    Preset(SurfacePreset),
    Polygon(NewtonPolygon),
}

impl SurfaceSpec {
    pub fn resolve(&self) -> Result<Surface, CliError> {
        match self {
            SurfaceSpec::Name(name) if name == "c2" => Ok(Surface::Plane),
            SurfaceSpec::Name(name) => SurfacePreset::from_str(name)
                .map(Surface::Preset)
                .map_err(|e| CliError::Config(e.to_string())),
            SurfaceSpec::Polygon { polygon } => Ok(Surface::Polygon(polygon.clone())),
        }
    }
}

/// Everything a run needs. Every field is optional so that a config file
/// and the command-line flags can be layered.
#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<Command>,
    pub action: Option<SemigroupAction>,
    pub surface: Option<SurfaceSpec>,
    pub surfaces: Option<Vec<String>>,
    pub coeffs: Option<Vec<String>>,
    pub n: Option<usize>,
    pub n_range: Option<(usize, usize)>,
    pub r: Option<i64>,
    pub p: Option<i64>,
    pub q: Option<i64>,
    pub p_max: Option<i64>,
    pub q_max: Option<i64>,
    pub vector: Option<Vec<i64>>,
    pub vertices: Option<bool>,
    pub volume: Option<bool>,
    pub suite: Option<String>,
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
    pub approx: Option<bool>,
}

macro_rules! overlay {
    ($base:ident, $top:ident, $($field:ident),*) => {
        $( if $top.$field.is_some() { $base.$field = $top.$field; } )*
    };
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Fields set in `top` replace those in `self`.
    pub fn overlay(mut self, top: RunConfig) -> Self {
        overlay!(
            self, top, command, action, surface, surfaces, coeffs, n, n_range, r, p, q, p_max, q_max, vector, vertices,
            volume, suite, format, output, approx
        );
        self
    }

    pub fn require_n(&self) -> Result<usize, CliError> {
        match self.n {
            Some(0) => Err(CliError::Config("n must be positive".into())),
            Some(n) => Ok(n),
            None => Err(CliError::Config(format!("{} needs n", self.command_name()))),
        }
    }

    pub fn require_r(&self) -> Result<i64, CliError> {
        self.r
            .ok_or_else(|| CliError::Config(format!("{} needs r", self.command_name())))
    }

    pub fn coeffs(&self) -> Result<Option<Vec<Rational>>, CliError> {
        self.coeffs
            .as_ref()
            .map(|cs| {
                cs.iter()
                    .map(|c| parse_rational(c).map_err(|e| CliError::Config(format!("coefficient {c:?}: {e}"))))
                    .collect()
            })
            .transpose()
    }

    /// The configured surface, defaulting to the plane.
    pub fn surface(&self) -> Result<Surface, CliError> {
        match &self.surface {
            Some(s) => s.resolve(),
            None => Ok(Surface::Plane),
        }
    }

    /// The toric polygon of the configured class, or `None` for the plane.
    pub fn polygon(&self) -> Result<Option<NewtonPolygon>, CliError> {
        let coeffs = self.coeffs()?;
        match self.surface()? {
            Surface::Plane => {
                if coeffs.is_some() {
                    return Err(CliError::Config("coeffs make no sense for the plane".into()));
                }
                Ok(None)
            }
            Surface::Polygon(p) => {
                if coeffs.is_some() {
                    return Err(CliError::Config("coeffs make no sense for an explicit polygon".into()));
                }
                Ok(Some(p))
            }
            Surface::Preset(preset) => {
                let coeffs = coeffs.unwrap_or_else(|| preset.generator());
                preset
                    .polygon_of_class(&coeffs)
                    .map(Some)
                    .map_err(|e| CliError::Config(e.to_string()))
            }
        }
    }

    /// Either `n_range` or the single `n`, defaulting to `default`.
    pub fn n_values(&self, default: (usize, usize)) -> Result<Vec<usize>, CliError> {
        let (lo, hi) = match (self.n_range, self.n) {
            (Some(range), _) => range,
            (None, Some(n)) => (n, n),
            (None, None) => default,
        };
        if lo < 1 || lo > hi {
            return Err(CliError::Config(format!("bad n range {lo}..{hi}")));
        }
        Ok((lo..=hi).collect())
    }

    fn command_name(&self) -> String {
        self.command.map(|c| c.to_string()).unwrap_or_else(|| "this command".into())
    }
}

/// `a..b` or `a..=b` (both inclusive), or a single number.
pub fn parse_n_range(s: &str) -> Result<(usize, usize), String> {
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
    if let Some((a, b)) = s.split_once("..") {
        Ok((parse(a)?, parse(b.trim_start_matches('='))?))
    } else {
        let n = parse(s)?;
        Ok((n, n))
    }
}

/// A polygon given inline as JSON or as `@path`.
pub fn parse_polygon(s: &str) -> Result<NewtonPolygon, String> {
    let text = match s.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?,
        None => s.to_string(),
    };
    serde_json::from_str(&text).map_err(|e| e.to_string())
}
