//! Exact computations with Newton-Okounkov bodies of Hilbert schemes of
//! points on the plane and on smooth toric surfaces.
//!
//! Everything is done over the rationals. The crate is split into the
//! number layer ([`ratcore`]), Newton polygons of toric divisors
//! ([`polygon`]), the valuation semigroups ([`semigroup`]), polyhedral
//! bodies built from them ([`polytope`]), an exact simplex solver with the
//! effective-cone computations on top ([`lp`]), a symbolic polynomial
//! ground truth ([`oracle`]) and the Duistermaat-Heckman fiber volumes
//! ([`dh`]).

pub mod dh;
pub mod lp;
pub mod oracle;
pub mod polygon;
pub mod polytope;
pub mod ratcore;
pub mod reference;
pub mod semigroup;

pub use lp::{FacetVerdict, LPProblem, LPResult, LPStatus};
pub use oracle::{MPoly, PointTuple};
pub use polygon::{NewtonPolygon, Piece, SurfaceConfig, SurfacePreset};
pub use polytope::{DivisorClass, HPolyhedron, HRow, VPolytope};
pub use ratcore::{QMatrix, QVector, Rational};
pub use semigroup::{GammaSpec, ValVector};
