//! Inputs shared by the benchmarks.

use hilbno::polytope::build_toric_body;
use hilbno::ratcore::int;
use hilbno::{HPolyhedron, NewtonPolygon, PointTuple};

/// The upper-bound body of `4H + E` on the plane with `n` points.
pub fn plane_degree_four(n: usize) -> HPolyhedron {
    build_toric_body(&NewtonPolygon::triangle(int(4)).unwrap(), n, 1)
}

/// `n` distinct points on a diagonal strip, for determinant expansion.
pub fn strip_tuple(n: usize) -> PointTuple {
    PointTuple::new((0..n as u32).map(|i| (i, (i * 2) % 3)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_well_formed() {
        assert_eq!(plane_degree_four(2).dim(), 4);
        assert!(strip_tuple(4).is_distinct());
    }
}
