//! Newton polygons of torus-invariant divisors on smooth toric surfaces.
//!
//! A polygon is stored by its boundary pieces rather than its vertices:
//! `{ 0 <= a <= c, lower(a) <= b <= upper(a) }` where `lower` is the maximum
//! of a list of affine functions and `upper` the minimum of another list.
//! The body builders emit one inequality per piece, so this is the form
//! they want.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ratcore::{ceil_to_i64, floor_to_i64, int, rational_str, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolygonError {
    #[error("polygon is empty at a = {at}: lower piece {lower} exceeds upper piece {upper}")]
    Empty {
        at: Rational,
        lower: usize,
        upper: usize,
    },
    #[error("width cap must be nonnegative, got {0}")]
    NegativeCap(Rational),
    #[error("polygon needs at least one lower boundary piece")]
    NoLowerBoundary,
    #[error("an upper boundary requires a finite width cap")]
    UpperWithoutCap,
    #[error("scale factor must be nonnegative, got {0}")]
    NegativeScale(Rational),
    #[error("polygon is unbounded")]
    Unbounded,
    #[error("{surface} expects {expected} class coefficients, got {got}")]
    CoefficientCount {
        surface: String,
        expected: usize,
        got: usize,
    },
    #[error("unknown surface {0:?}")]
    UnknownSurface(String),
}

/// Affine function `a -> slope * a + intercept`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Piece {
    pub slope: Rational,
    pub intercept: Rational,
}

impl Piece {
    pub fn new(slope: Rational, intercept: Rational) -> Self {
        Piece { slope, intercept }
    }

    pub fn eval(&self, a: &Rational) -> Rational {
        &self.slope * a + &self.intercept
    }
}

impl Serialize for Piece {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        crate::ratcore::rational_vec_str::serialize(
            &[self.slope.clone(), self.intercept.clone()],
            s,
        )
    }
}

impl<'de> Deserialize<'de> for Piece {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let pair = crate::ratcore::rational_vec_str::deserialize(d)?;
        match <[Rational; 2]>::try_from(pair) {
            Ok([slope, intercept]) => Ok(Piece { slope, intercept }),
            Err(v) => Err(serde::de::Error::invalid_length(v.len(), &"a [slope, intercept] pair")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPolygon {
    #[serde(default, with = "opt_rational")]
    c: Option<Rational>,
    lower: Vec<Piece>,
    #[serde(default)]
    upper: Vec<Piece>,
}

mod opt_rational {
    use super::*;

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

/// The polygon `{ 0 <= a <= c, lower(a) <= b <= upper(a) }`.
///
/// `cap == None` together with an empty `upper` list describes an unbounded
/// region such as the positive quadrant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPolygon", into = "RawPolygon")]
pub struct NewtonPolygon {
    cap: Option<Rational>,
    lower: Vec<Piece>,
    upper: Vec<Piece>,
}

impl TryFrom<RawPolygon> for NewtonPolygon {
    type Error = PolygonError;
    fn try_from(raw: RawPolygon) -> Result<Self, PolygonError> {
        NewtonPolygon::new(raw.c, raw.lower, raw.upper)
    }
}

impl From<NewtonPolygon> for RawPolygon {
    fn from(p: NewtonPolygon) -> Self {
        RawPolygon {
            c: p.cap,
            lower: p.lower,
            upper: p.upper,
        }
    }
}

impl NewtonPolygon {
    pub fn new(
        cap: Option<Rational>,
        lower: Vec<Piece>,
        upper: Vec<Piece>,
    ) -> Result<Self, PolygonError> {
        if lower.is_empty() {
            return Err(PolygonError::NoLowerBoundary);
        }
        match &cap {
            Some(c) if c.is_negative() => return Err(PolygonError::NegativeCap(c.clone())),
            None if !upper.is_empty() => return Err(PolygonError::UpperWithoutCap),
            _ => {}
        }
        let polygon = NewtonPolygon { cap, lower, upper };
        // upper - lower is concave, so nonemptiness on [0, c] is decided at
        // the two endpoints.
        if let Some(c) = polygon.cap.clone() {
            for a in [Rational::zero(), c] {
                let (lo, li) = polygon.lower_arg(&a);
                let (hi, ui) = polygon.upper_arg(&a).expect("capped polygon has an upper boundary");
                if lo > hi {
                    return Err(PolygonError::Empty {
                        at: a,
                        lower: li,
                        upper: ui,
                    });
                }
            }
        }
        Ok(polygon)
    }

    /// The positive quadrant `a, b >= 0`.
    pub fn quadrant() -> Self {
        NewtonPolygon {
            cap: None,
            lower: vec![Piece::new(Rational::zero(), Rational::zero())],
            upper: Vec::new(),
        }
    }

    /// Triangle with legs `d` along both axes.
    pub fn triangle(d: Rational) -> Result<Self, PolygonError> {
        SurfacePreset::P2.polygon_of_class(&[d])
    }

    pub fn cap(&self) -> Option<&Rational> {
        self.cap.as_ref()
    }

    pub fn lower(&self) -> &[Piece] {
        &self.lower
    }

    pub fn upper(&self) -> &[Piece] {
        &self.upper
    }

    pub fn is_bounded(&self) -> bool {
        self.cap.is_some()
    }

    pub fn lower_at(&self, a: &Rational) -> Rational {
        self.lower_arg(a).0
    }

    pub fn upper_at(&self, a: &Rational) -> Option<Rational> {
        self.upper_arg(a).map(|(v, _)| v)
    }

    fn lower_arg(&self, a: &Rational) -> (Rational, usize) {
        let mut best: Option<(Rational, usize)> = None;
        for (i, piece) in self.lower.iter().enumerate() {
            let v = piece.eval(a);
            if best.as_ref().map_or(true, |(b, _)| v > *b) {
                best = Some((v, i));
            }
        }
        best.expect("lower boundary is nonempty")
    }

    fn upper_arg(&self, a: &Rational) -> Option<(Rational, usize)> {
        let mut best: Option<(Rational, usize)> = None;
        for (i, piece) in self.upper.iter().enumerate() {
            let v = piece.eval(a);
            if best.as_ref().map_or(true, |(b, _)| v < *b) {
                best = Some((v, i));
            }
        }
        best
    }

    pub fn contains(&self, a: &Rational, b: &Rational) -> bool {
        if a.is_negative() {
            return false;
        }
        if let Some(c) = &self.cap {
            if a > c {
                return false;
            }
        }
        if *b < self.lower_at(a) {
            return false;
        }
        match self.upper_at(a) {
            Some(u) => *b <= u,
            None => true,
        }
    }

    /// `t * P`: the cap and every intercept scale, slopes stay.
    pub fn scale(&self, t: &Rational) -> Result<Self, PolygonError> {
        if t.is_negative() {
            return Err(PolygonError::NegativeScale(t.clone()));
        }
        let scale_pieces = |ps: &[Piece]| {
            ps.iter()
                .map(|p| Piece::new(p.slope.clone(), &p.intercept * t))
                .collect::<Vec<_>>()
        };
        Ok(NewtonPolygon {
            cap: self.cap.as_ref().map(|c| c * t),
            lower: scale_pieces(&self.lower),
            upper: scale_pieces(&self.upper),
        })
    }

    /// Vertex cycle, counterclockwise, starting from `(0, lower(0))`.
    /// Collinear boundary points are dropped.
    pub fn vertices(&self) -> Result<Vec<(Rational, Rational)>, PolygonError> {
        let c = self.cap.clone().ok_or(PolygonError::Unbounded)?;
        let mut abscissae = vec![Rational::zero(), c.clone()];
        for pieces in [&self.lower, &self.upper] {
            for (i, p) in pieces.iter().enumerate() {
                for q in &pieces[i + 1..] {
                    if p.slope != q.slope {
                        let a = (&q.intercept - &p.intercept) / (&p.slope - &q.slope);
                        if a.is_positive() && a < c {
                            abscissae.push(a);
                        }
                    }
                }
            }
        }
        abscissae.sort();
        abscissae.dedup();

        let mut cycle: Vec<(Rational, Rational)> = abscissae
            .iter()
            .map(|a| (a.clone(), self.lower_at(a)))
            .collect();
        for a in abscissae.iter().rev() {
            cycle.push((a.clone(), self.upper_at(a).expect("bounded polygon")));
        }
        cycle.dedup();
        if cycle.len() > 1 && cycle.first() == cycle.last() {
            cycle.pop();
        }
        Ok(drop_collinear(cycle))
    }

    /// Exact Euclidean area by the shoelace formula.
    pub fn area(&self) -> Result<Rational, PolygonError> {
        let vs = self.vertices()?;
        let mut twice = Rational::zero();
        for i in 0..vs.len() {
            let (x0, y0) = &vs[i];
            let (x1, y1) = &vs[(i + 1) % vs.len()];
            twice += x0 * y1 - x1 * y0;
        }
        Ok(twice.abs() / int(2))
    }

    /// Integer points `(p, q)` with `0 <= p <= c` and `lower(p) <= q <= upper(p)`,
    /// in lexicographic order.
    pub fn lattice_points(&self) -> Result<Vec<(i64, i64)>, PolygonError> {
        let c = self.cap.as_ref().ok_or(PolygonError::Unbounded)?;
        let pmax = floor_to_i64(c).expect("cap fits in i64");
        let mut out = Vec::new();
        for p in 0..=pmax {
            let a = int(p);
            let lo = ceil_to_i64(&self.lower_at(&a)).expect("bound fits in i64");
            let hi = floor_to_i64(&self.upper_at(&a).expect("bounded")).expect("bound fits in i64");
            out.extend((lo..=hi).map(|q| (p, q)));
        }
        Ok(out)
    }
}

fn drop_collinear(mut cycle: Vec<(Rational, Rational)>) -> Vec<(Rational, Rational)> {
    loop {
        let n = cycle.len();
        if n < 3 {
            return cycle;
        }
        let mut removed = false;
        for i in 0..n {
            let (px, py) = &cycle[(i + n - 1) % n];
            let (x, y) = &cycle[i];
            let (nx, ny) = &cycle[(i + 1) % n];
            let cross = (x - px) * (ny - py) - (y - py) * (nx - px);
            if cross.is_zero() {
                cycle.remove(i);
                removed = true;
                break;
            }
        }
        if !removed {
            return cycle;
        }
    }
}

impl fmt::Display for NewtonPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.vertices() {
            Ok(vs) => {
                let parts: Vec<String> = vs.iter().map(|(a, b)| format!("({a},{b})")).collect();
                write!(f, "conv[{}]", parts.join(","))
            }
            Err(_) => write!(f, "unbounded polygon"),
        }
    }
}

/// Linear form over the class coordinates of a preset surface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearForm(pub Vec<Rational>);

impl LinearForm {
    pub fn eval(&self, coeffs: &[Rational]) -> Rational {
        crate::ratcore::dot(&self.0, coeffs)
    }

    fn of(values: &[i64]) -> Self {
        LinearForm(values.iter().map(|&v| int(v)).collect())
    }
}

/// A polygon whose cap and piece intercepts are linear in the class
/// coordinates; slopes are fixed. Valid on the nef range of each preset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolygonFamily {
    pub cap: LinearForm,
    pub lower: Vec<(Rational, LinearForm)>,
    pub upper: Vec<(Rational, LinearForm)>,
}

impl PolygonFamily {
    pub fn evaluate(&self, coeffs: &[Rational]) -> Result<NewtonPolygon, PolygonError> {
        let pieces = |ps: &[(Rational, LinearForm)]| {
            ps.iter()
                .map(|(s, form)| Piece::new(s.clone(), form.eval(coeffs)))
                .collect::<Vec<_>>()
        };
        NewtonPolygon::new(
            Some(self.cap.eval(coeffs)),
            pieces(&self.lower),
            pieces(&self.upper),
        )
    }

    pub fn rank(&self) -> usize {
        self.cap.0.len()
    }
}

/// The surfaces with a built-in divisor-to-polygon map.
///
/// The Hirzebruch orientation puts the fibre direction along `b`, so the
/// class `(x, y)` gives `c = y`, `lower = 0`, `upper(a) = x + e a`.
/// [`SurfacePreset::HirzebruchMirrored`] is the reflection `a -> c - a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SurfacePreset {
    P2,
    P1xP1,
    #[serde(rename = "hirzebruch")]
    Hirzebruch(u32),
    #[serde(rename = "hirzebruch_mirrored")]
    HirzebruchMirrored(u32),
}

impl SurfacePreset {
    pub fn picard_rank(&self) -> usize {
        match self {
            SurfacePreset::P2 => 1,
            _ => 2,
        }
    }

    pub fn family(&self) -> PolygonFamily {
        let zero = || (Rational::zero(), LinearForm::of(&vec![0; self.picard_rank()]));
        match *self {
            SurfacePreset::P2 => PolygonFamily {
                cap: LinearForm::of(&[1]),
                lower: vec![zero()],
                upper: vec![(-Rational::one(), LinearForm::of(&[1]))],
            },
            SurfacePreset::P1xP1 => PolygonFamily {
                cap: LinearForm::of(&[1, 0]),
                lower: vec![zero()],
                upper: vec![(Rational::zero(), LinearForm::of(&[0, 1]))],
            },
            SurfacePreset::Hirzebruch(e) => PolygonFamily {
                cap: LinearForm::of(&[0, 1]),
                lower: vec![zero()],
                upper: vec![(int(e as i64), LinearForm::of(&[1, 0]))],
            },
            SurfacePreset::HirzebruchMirrored(e) => PolygonFamily {
                cap: LinearForm::of(&[0, 1]),
                lower: vec![zero()],
                upper: vec![(-int(e as i64), LinearForm::of(&[1, e as i64]))],
            },
        }
    }

    /// Generator class whose polygon is drawn for each preset: `H` on the
    /// plane, `(1, 1)` otherwise.
    pub fn generator(&self) -> Vec<Rational> {
        vec![Rational::one(); self.picard_rank()]
    }

    pub fn polygon_of_class(&self, coeffs: &[Rational]) -> Result<NewtonPolygon, PolygonError> {
        if coeffs.len() != self.picard_rank() {
            return Err(PolygonError::CoefficientCount {
                surface: self.to_string(),
                expected: self.picard_rank(),
                got: coeffs.len(),
            });
        }
        self.family().evaluate(coeffs)
    }
}

impl fmt::Display for SurfacePreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfacePreset::P2 => write!(f, "P2"),
            SurfacePreset::P1xP1 => write!(f, "P1xP1"),
            SurfacePreset::Hirzebruch(e) => write!(f, "H{e}"),
            SurfacePreset::HirzebruchMirrored(e) => write!(f, "H{e}m"),
        }
    }
}

impl FromStr for SurfacePreset {
    type Err = PolygonError;

    /// `P2`, `P1xP1`, `H<e>` or `H<e>m`.
    fn from_str(s: &str) -> Result<Self, PolygonError> {
        let unknown = || PolygonError::UnknownSurface(s.to_string());
        match s {
            "P2" => Ok(SurfacePreset::P2),
            "P1xP1" => Ok(SurfacePreset::P1xP1),
            _ => {
                let rest = s.strip_prefix('H').ok_or_else(unknown)?;
                let (digits, mirrored) = match rest.strip_suffix('m') {
                    Some(d) => (d, true),
                    None => (rest, false),
                };
                let e: u32 = digits.parse().map_err(|_| unknown())?;
                Ok(if mirrored {
                    SurfacePreset::HirzebruchMirrored(e)
                } else {
                    SurfacePreset::Hirzebruch(e)
                })
            }
        }
    }
}

/// `{"surface": ..., "coeffs": [...]}` as found in surface config files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceConfig {
    pub surface: SurfacePreset,
    #[serde(with = "crate::ratcore::rational_vec_str")]
    pub coeffs: Vec<Rational>,
}

impl SurfaceConfig {
    pub fn polygon(&self) -> Result<NewtonPolygon, PolygonError> {
        self.surface.polygon_of_class(&self.coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratcore::rat;
    use proptest::prelude::*;

    fn pts(v: &[(i64, i64)]) -> Vec<(Rational, Rational)> {
        v.iter().map(|&(a, b)| (int(a), int(b))).collect()
    }

    fn unit_square() -> NewtonPolygon {
        SurfacePreset::P1xP1.polygon_of_class(&[int(1), int(1)]).unwrap()
    }

    #[test]
    fn plane_class_is_a_right_triangle() {
        let p = SurfacePreset::P2.polygon_of_class(&[int(4)]).unwrap();
        assert_eq!(p.vertices().unwrap(), pts(&[(0, 0), (4, 0), (0, 4)]));
    }

    #[test]
    fn preset_polygons_match_the_pictures() {
        assert_eq!(unit_square().vertices().unwrap(), pts(&[(0, 0), (1, 0), (1, 1), (0, 1)]));
        let h2 = SurfacePreset::Hirzebruch(2).polygon_of_class(&[int(1), int(1)]).unwrap();
        assert_eq!(h2.vertices().unwrap(), pts(&[(0, 0), (1, 0), (1, 3), (0, 1)]));
        let h1 = SurfacePreset::Hirzebruch(1).polygon_of_class(&[int(1), int(1)]).unwrap();
        assert_eq!(h1.vertices().unwrap(), pts(&[(0, 0), (1, 0), (1, 2), (0, 1)]));
        let h2m = SurfacePreset::HirzebruchMirrored(2)
            .polygon_of_class(&[int(1), int(1)])
            .unwrap();
        assert_eq!(h2m.vertices().unwrap(), pts(&[(0, 0), (1, 0), (1, 1), (0, 3)]));
    }

    #[test]
    fn empty_polygon_names_the_offending_pieces() {
        let err = NewtonPolygon::new(
            Some(int(2)),
            vec![Piece::new(int(0), int(0))],
            vec![Piece::new(int(-1), int(1))],
        )
        .unwrap_err();
        assert_eq!(
            err,
            PolygonError::Empty {
                at: int(2),
                lower: 0,
                upper: 0
            }
        );
        assert!(SurfacePreset::P2.polygon_of_class(&[int(-1)]).is_err());
        assert!(matches!(
            SurfacePreset::P1xP1.polygon_of_class(&[int(1)]),
            Err(PolygonError::CoefficientCount { .. })
        ));
    }

    #[test]
    fn scaling() {
        let tri = NewtonPolygon::triangle(int(1)).unwrap();
        assert_eq!(tri.scale(&int(3)).unwrap(), NewtonPolygon::triangle(int(3)).unwrap());
        let point = tri.scale(&int(0)).unwrap();
        assert_eq!(point.vertices().unwrap(), pts(&[(0, 0)]));
        assert_eq!(point.lattice_points().unwrap(), vec![(0, 0)]);
        assert_eq!(
            unit_square().scale(&int(2)).unwrap(),
            SurfacePreset::P1xP1.polygon_of_class(&[int(2), int(2)]).unwrap()
        );
        assert!(tri.scale(&int(-1)).is_err());
    }

    #[test]
    fn areas() {
        assert_eq!(NewtonPolygon::triangle(int(1)).unwrap().area().unwrap(), rat(1, 2));
        assert_eq!(unit_square().area().unwrap(), int(1));
        // shoelace over (0,0),(1,0),(1,2),(0,1): (0 + 2 + 1 - 0) / 2
        let h1 = SurfacePreset::Hirzebruch(1).polygon_of_class(&[int(1), int(1)]).unwrap();
        assert_eq!(h1.area().unwrap(), rat(3, 2));
        assert!(NewtonPolygon::quadrant().area().is_err());
    }

    #[test]
    fn lattice_points_by_direct_scan() {
        assert_eq!(
            NewtonPolygon::triangle(int(1)).unwrap().lattice_points().unwrap(),
            vec![(0, 0), (0, 1), (1, 0)]
        );
        assert_eq!(NewtonPolygon::triangle(int(2)).unwrap().lattice_points().unwrap().len(), 6);
        let h2 = SurfacePreset::Hirzebruch(2).polygon_of_class(&[int(1), int(1)]).unwrap();
        let mut expected = vec![(0, 0), (1, 0), (0, 1), (1, 1), (1, 2), (1, 3)];
        expected.sort();
        assert_eq!(h2.lattice_points().unwrap(), expected);
    }

    #[test]
    fn multi_piece_boundaries() {
        // lower = max(0, a - 1), upper = min(2, 3 - a) on [0, 2]
        let p = NewtonPolygon::new(
            Some(int(2)),
            vec![Piece::new(int(0), int(0)), Piece::new(int(1), int(-1))],
            vec![Piece::new(int(0), int(2)), Piece::new(int(-1), int(3))],
        )
        .unwrap();
        assert_eq!(
            p.vertices().unwrap(),
            pts(&[(0, 0), (1, 0), (2, 1), (1, 2), (0, 2)])
        );
        // 2x2 square minus two corner triangles of area 1/2
        assert_eq!(p.area().unwrap(), int(3));
    }

    #[test]
    fn json_schema() {
        let p = SurfacePreset::P2.polygon_of_class(&[rat(3, 2)]).unwrap();
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"{"c":"3/2","lower":[["0","0"]],"upper":[["-1","3/2"]]}"#);
        let back: NewtonPolygon = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
        let bad = r#"{"c":"1","lower":[["0","2"]],"upper":[["0","1"]]}"#;
        assert!(serde_json::from_str::<NewtonPolygon>(bad).is_err());

        let cfg: SurfaceConfig =
            serde_json::from_str(r#"{"surface":{"hirzebruch":2},"coeffs":["1",1]}"#).unwrap();
        assert_eq!(cfg.surface, SurfacePreset::Hirzebruch(2));
        assert_eq!(cfg.polygon().unwrap().area().unwrap(), int(2));
        let cfg: SurfaceConfig = serde_json::from_str(r#"{"surface":"P2","coeffs":[4]}"#).unwrap();
        assert_eq!(cfg.surface, SurfacePreset::P2);
        assert!(serde_json::from_str::<SurfaceConfig>(r#"{"surface":"P2","coeffs":[4],"x":1}"#).is_err());
    }

    #[test]
    fn preset_names_round_trip() {
        for s in ["P2", "P1xP1", "H1", "H2", "H3m"] {
            assert_eq!(s.parse::<SurfacePreset>().unwrap().to_string(), s);
        }
        assert!("Q7".parse::<SurfacePreset>().is_err());
    }

    proptest! {
        #[test]
        fn area_scales_quadratically(n in 0i64..40, d in 1i64..12, e in 0u32..4) {
            let t = rat(n, d);
            for p in [
                NewtonPolygon::triangle(int(1)).unwrap(),
                unit_square(),
                SurfacePreset::Hirzebruch(e).polygon_of_class(&[int(2), int(1)]).unwrap(),
            ] {
                let scaled = p.scale(&t).unwrap();
                prop_assert_eq!(scaled.area().unwrap(), &t * &t * p.area().unwrap());
                for (a, b) in scaled.vertices().unwrap() {
                    prop_assert!(scaled.contains(&a, &b));
                }
            }
        }
    }

    #[test]
    fn triangle_lattice_counts_follow_ehrhart() {
        let tri = NewtonPolygon::triangle(int(1)).unwrap();
        for m in 0..=20i64 {
            let count = tri.scale(&int(m)).unwrap().lattice_points().unwrap().len() as i64;
            assert_eq!(count, (m + 1) * (m + 2) / 2);
        }
    }
}
