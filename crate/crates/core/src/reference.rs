//! Published values the computations are checked against, shipped as a
//! data file so they can be audited in one place.

use serde::Deserialize;

use crate::polygon::SurfacePreset;
use crate::ratcore::{rational_str, rational_vec_str, Rational};

pub const REFERENCE_JSON: &str = include_str!("../data/reference_values.json");

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceValues {
    pub mu_table: Vec<MuColumn>,
    pub plane_degree_four: PlaneDegreeFour,
    pub plane_four_points_effective_cone: EffectiveConeEndpoint,
    pub catalan: Vec<(usize, u64)>,
    pub p1xp1_facets: FacetList,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MuColumn {
    pub surface: String,
    #[serde(with = "rational_vec_str")]
    pub class: Vec<Rational>,
    pub values: Vec<(usize, MuValue)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct MuValue(#[serde(with = "rational_str")] pub Rational);

impl MuColumn {
    pub fn preset(&self) -> SurfacePreset {
        self.surface.parse().expect("reference file names known surfaces")
    }

    pub fn get(&self, n: usize) -> Option<&Rational> {
        self.values.iter().find(|(m, _)| *m == n).map(|(_, v)| &v.0)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlaneDegreeFour {
    pub n4_vertices: usize,
    #[serde(with = "rational_str")]
    pub n4_volume: Rational,
    #[serde(with = "rational_str")]
    pub n4_volume_times_8_factorial: Rational,
    pub n5_vertices: usize,
    #[serde(with = "rational_str")]
    pub slice_t: Rational,
    #[serde(with = "rational_str")]
    pub slice_target_degree: Rational,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EffectiveConeEndpoint {
    #[serde(with = "rational_str")]
    pub mu: Rational,
    #[serde(with = "rational_str")]
    pub below_by: Rational,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FacetList {
    pub n: usize,
    pub facets: Vec<Facet>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct Facet(#[serde(with = "rational_vec_str")] pub Vec<Rational>);

pub fn reference_values() -> ReferenceValues {
    serde_json::from_str(REFERENCE_JSON).expect("reference data file parses")
}

impl ReferenceValues {
    pub fn mu_column(&self, surface: &str) -> Option<&MuColumn> {
        self.mu_table.iter().find(|c| c.surface == surface)
    }
}
