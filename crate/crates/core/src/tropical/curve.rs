use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::subdivision::{subdivide, EdgeKind, RegularSubdivision};
use super::{int, RatPoint, Rational, Result, TropicalError, TropicalPolynomial};
use crate::geom2d::{LatticePolygon, LatticeVector};

/// Undirected lattice edge mapped to (cell index, outer normal, lattice length).
type Incidence = BTreeMap<(LatticeVector, LatticeVector), Vec<(usize, LatticeVector, u64)>>;

/// Bounded edge between two curve vertices. `direction` is the primitive
/// vector pointing from `from` to `to`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveEdge {
    pub from: usize,
    pub to: usize,
    pub direction: LatticeVector,
    pub weight: u64,
}

/// Unbounded edge leaving `vertex` along the primitive `direction`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveRay {
    pub vertex: usize,
    pub direction: LatticeVector,
    pub weight: u64,
}

/// Full line through `point`, the foot of the perpendicular from the origin.
/// Only occurs when the Newton polygon is a segment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveLine {
    pub point: RatPoint,
    pub direction: LatticeVector,
    pub weight: u64,
}

/// Weighted balanced 1-complex dual to a regular subdivision.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TropicalCurve {
    pub newton: LatticePolygon,
    pub vertices: Vec<RatPoint>,
    pub edges: Vec<CurveEdge>,
    pub rays: Vec<CurveRay>,
    #[serde(default)]
    pub lines: Vec<CurveLine>,
}

impl TropicalCurve {
    /// The (empty) curve of a monomial.
    pub fn empty(newton: LatticePolygon) -> Self {
        Self { newton, vertices: Vec::new(), edges: Vec::new(), rays: Vec::new(), lines: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty() && self.rays.is_empty() && self.lines.is_empty()
    }

    /// Copy moved by `t`.
    pub fn translated(&self, t: &RatPoint) -> Self {
        Self {
            newton: self.newton.clone(),
            vertices: self.vertices.iter().map(|v| v.add(t)).collect(),
            edges: self.edges.clone(),
            rays: self.rays.clone(),
            lines: self
                .lines
                .iter()
                .map(|l| CurveLine { point: foot(&l.point.add(t), l.direction), ..l.clone() })
                .collect(),
        }
    }

    /// Per-vertex sums of `weight · outgoing primitive direction`.
    pub fn balancing_defects(&self) -> Vec<(i128, i128)> {
        let mut sums = vec![(0i128, 0i128); self.vertices.len()];
        let mut push = |v: usize, d: LatticeVector, w: u64, sign: i128| {
            sums[v].0 += sign * w as i128 * d.x as i128;
            sums[v].1 += sign * w as i128 * d.y as i128;
        };
        for e in &self.edges {
            push(e.from, e.direction, e.weight, 1);
            push(e.to, e.direction, e.weight, -1);
        }
        for r in &self.rays {
            push(r.vertex, r.direction, r.weight, 1);
        }
        sums
    }

    pub fn is_balanced(&self) -> bool {
        self.balancing_defects().iter().all(|&s| s == (0, 0))
    }

    /// Vertices match 2-cells and curve edges match subdivision edges.
    pub fn matches_duality_counts(&self, sub: &RegularSubdivision) -> bool {
        self.vertices.len() == sub.two_cells()
            && self.edges.len() + self.rays.len() + self.lines.len() == sub.edges.len()
    }
}

/// The point of the line through `p` along `dir` closest to the origin, the
/// canonical anchor of a [`CurveLine`].
fn foot(p: &RatPoint, dir: LatticeVector) -> RatPoint {
    let d = RatPoint::from_lattice(dir);
    let t = p.dot(&d) / d.dot(&d);
    p.sub(&RatPoint::new(&d.x * &t, &d.y * &t))
}

fn perp(v: LatticeVector) -> LatticeVector {
    LatticeVector::new(-v.y, v.x)
}

/// Curve vertex dual to a lower face with upward normal `(nx, ny, nz)`: the
/// point where all terms of the face tie, `-(gradient of the lift)`.
fn dual_vertex(normal: (i128, i128, i128), denom: &BigInt) -> RatPoint {
    let (nx, ny, nz) = normal;
    let scale = BigInt::from(nz) * denom;
    RatPoint::new(
        Rational::new(BigInt::from(nx), scale.clone()),
        Rational::new(BigInt::from(ny), scale),
    )
}

/// Tropical curve of `f`: the corner locus of the piecewise-linear minimum.
///
/// Each curve edge is orthogonal to its dual subdivision edge and weighted by
/// that edge's lattice length. Boundary edges of the Newton polygon give rays
/// along the inner normal.
pub fn tropical_curve(f: &TropicalPolynomial) -> Result<TropicalCurve> {
    let sub = subdivide(f)?;
    let newton = sub.subdivision.newton.clone();
    let denom = f.common_denominator();
    match newton.dimension() {
        0 => Err(TropicalError::ZeroDimensionalNewtonPolygon),
        1 => {
            let lines = sub
                .subdivision
                .edges
                .iter()
                .map(|e| {
                    let (dir, w) = e.to.checked_sub(e.from)?.primitive_part().expect("distinct ends");
                    // <dir, x> = (c_from - c_to) / w on the locus where both terms tie.
                    let level = Rational::new(BigInt::from(sub.lifts[&e.from] - sub.lifts[&e.to]), BigInt::from(w) * &denom);
                    let norm2 = int(dir.x * dir.x + dir.y * dir.y);
                    let t = level / norm2;
                    let point = RatPoint::new(&t * int(dir.x), &t * int(dir.y));
                    Ok(CurveLine { point, direction: perp(dir), weight: w })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(TropicalCurve { newton, vertices: Vec::new(), edges: Vec::new(), rays: Vec::new(), lines })
        }
        _ => {
            let cells = &sub.subdivision.cells;
            let vertices: Vec<RatPoint> = sub.normals.iter().map(|&n| dual_vertex(n, &denom)).collect();

            // Cells incident to each undirected edge, with the edge's outer
            // normal relative to that cell.
            let mut incident: Incidence = BTreeMap::new();
            for (ci, cell) in cells.iter().enumerate() {
                for (a, b) in cell.edges() {
                    let (dir, w) = b.checked_sub(a)?.primitive_part().expect("distinct vertices");
                    let outer = LatticeVector::new(dir.y, -dir.x);
                    incident.entry((a.min(b), a.max(b))).or_default().push((ci, outer, w));
                }
            }

            let mut edges = Vec::new();
            let mut rays = Vec::new();
            for ((a, b), inc) in incident {
                match inc.as_slice() {
                    [(ci, outer, w)] => rays.push(CurveRay { vertex: *ci, direction: outer.checked_neg()?, weight: *w }),
                    [(ci, outer, w), (cj, _, _)] => {
                        let step = vertices[*cj].sub(&vertices[*ci]);
                        let inward = outer.checked_neg()?;
                        let along = RatPoint::from_lattice(inward);
                        if !step.cross(&along).is_zero() || !step.dot(&along).is_positive() {
                            return Err(TropicalError::Internal(format!(
                                "dual edge of {a}-{b} is not along the inner normal {inward}"
                            )));
                        }
                        edges.push(CurveEdge { from: *ci, to: *cj, direction: inward, weight: *w });
                    }
                    _ => {
                        return Err(TropicalError::Internal(format!(
                            "edge {a}-{b} bounds {} cells",
                            inc.len()
                        )))
                    }
                }
            }
            debug_assert_eq!(edges.len() + rays.len(), sub.subdivision.edges.len());
            debug_assert!(sub.subdivision.edges.iter().all(|e| e.kind != EdgeKind::Segment));
            Ok(TropicalCurve { newton, vertices, edges, rays, lines: Vec::new() })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(terms: &[((i64, i64), i64)]) -> TropicalPolynomial {
        TropicalPolynomial::from_integer_lifts(terms).unwrap()
    }

    fn v(x: i64, y: i64) -> LatticeVector {
        LatticeVector::new(x, y)
    }

    #[test]
    fn tropical_line() {
        let c = tropical_curve(&poly(&[((0, 0), 0), ((1, 0), 0), ((0, 1), 0)])).unwrap();
        assert_eq!(c.vertices, vec![RatPoint::from_lattice(v(0, 0))]);
        let mut dirs: Vec<_> = c.rays.iter().map(|r| (r.direction, r.weight)).collect();
        dirs.sort();
        assert_eq!(dirs, vec![(v(-1, -1), 1), (v(0, 1), 1), (v(1, 0), 1)]);
        assert!(c.edges.is_empty());
        assert!(c.is_balanced());
    }

    #[test]
    fn shifted_line_moves_vertex_only() {
        // Lifting (0,1) to 3 moves the vertex to where 0 = x = y + 3.
        let c = tropical_curve(&poly(&[((0, 0), 0), ((1, 0), 0), ((0, 1), 3)])).unwrap();
        assert_eq!(c.vertices, vec![RatPoint::from_lattice(v(0, -3))]);
        assert_eq!(c.rays.len(), 3);
    }

    #[test]
    fn weighted_vertical_line() {
        let c = tropical_curve(&poly(&[((0, 0), 0), ((2, 0), 0)])).unwrap();
        assert!(c.vertices.is_empty());
        assert_eq!(c.lines.len(), 1);
        assert_eq!(c.lines[0].weight, 2);
        assert_eq!(c.lines[0].direction, v(0, 1));
        assert_eq!(c.lines[0].point, RatPoint::from_lattice(v(0, 0)));
    }

    #[test]
    fn line_position_follows_lifts() {
        // min(0, 2x + 4) has its corner at x = -2.
        let c = tropical_curve(&poly(&[((0, 0), 0), ((2, 0), 4)])).unwrap();
        assert_eq!(c.lines[0].point, RatPoint::from_lattice(v(-2, 0)));
    }

    #[test]
    fn monomial_has_no_curve() {
        assert_eq!(tropical_curve(&poly(&[((1, 1), 0)])), Err(TropicalError::ZeroDimensionalNewtonPolygon));
    }

    #[test]
    fn subdivided_square_has_bounded_edge() {
        let f = poly(&[((0, 0), 0), ((1, 0), 0), ((0, 1), 0), ((1, 1), 1)]);
        let c = tropical_curve(&f).unwrap();
        assert_eq!(c.vertices.len(), 2);
        assert_eq!(c.edges.len(), 1);
        assert_eq!(c.rays.len(), 4);
        assert!(c.is_balanced());
        assert!(c.matches_duality_counts(&super::super::regular_subdivision(&f).unwrap()));
    }
}
