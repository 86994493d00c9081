use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Result, TropicalError, TropicalPolynomial};
use crate::geom2d::{convex_hull, normalized_volume, LatticePolygon, LatticeVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EdgeKind {
    /// Shared by two 2-cells.
    Interior,
    /// On the boundary of a two-dimensional Newton polygon.
    Boundary,
    /// A maximal cell of a one-dimensional subdivision.
    Segment,
}

/// Edge between two support points, stored with `from < to`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubdivisionEdge {
    pub from: LatticeVector,
    pub to: LatticeVector,
    pub kind: EdgeKind,
}

/// Projection of the lower faces of the lifted support.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularSubdivision {
    pub newton: LatticePolygon,
    /// Maximal cells, sorted by vertex list.
    pub cells: Vec<LatticePolygon>,
    pub edges: Vec<SubdivisionEdge>,
}

impl RegularSubdivision {
    pub fn two_cells(&self) -> usize {
        self.cells.iter().filter(|c| c.dimension() == 2).count()
    }

    /// Cells lie in the Newton polygon and their areas add up to its area.
    /// Together with the lower-face construction this certifies a tiling.
    pub fn tiles_newton_polygon(&self) -> bool {
        let total = self.cells.iter().try_fold(0i128, |acc, c| Some(acc + normalized_volume(c).ok()?));
        total.is_some()
            && normalized_volume(&self.newton).ok() == total
            && self.cells.iter().all(|c| c.vertices().iter().all(|v| self.newton.contains(*v)))
    }
}

/// Upward normal `(nx, ny, nz)`, `nz > 0`, of the plane carrying a lower face.
/// The lifted height over `(x, y)` on that face has gradient `-(nx, ny) / nz`.
pub(crate) type FaceNormal = (i128, i128, i128);

pub(crate) struct Subdivided {
    pub subdivision: RegularSubdivision,
    /// Parallel to `subdivision.cells` for two-dimensional Newton polygons.
    pub normals: Vec<FaceNormal>,
    /// Integer lifts by support point, scaled by the polynomial's common denominator.
    pub lifts: BTreeMap<LatticeVector, i128>,
}

fn ovf() -> TropicalError {
    TropicalError::Overflow
}

fn cross3d(u: [i128; 3], v: [i128; 3]) -> Result<[i128; 3]> {
    let m = |a: i128, b: i128| a.checked_mul(b).ok_or_else(ovf);
    Ok([
        m(u[1], v[2])?.checked_sub(m(u[2], v[1])?).ok_or_else(ovf)?,
        m(u[2], v[0])?.checked_sub(m(u[0], v[2])?).ok_or_else(ovf)?,
        m(u[0], v[1])?.checked_sub(m(u[1], v[0])?).ok_or_else(ovf)?,
    ])
}

fn dot3(u: [i128; 3], v: [i128; 3]) -> Result<i128> {
    let mut acc: i128 = 0;
    for i in 0..3 {
        acc = u[i].checked_mul(v[i]).and_then(|t| acc.checked_add(t)).ok_or_else(ovf)?;
    }
    Ok(acc)
}

fn lifted(p: LatticeVector, l: i128) -> [i128; 3] {
    [p.x as i128, p.y as i128, l]
}

fn diff(a: [i128; 3], b: [i128; 3]) -> Result<[i128; 3]> {
    Ok([
        a[0].checked_sub(b[0]).ok_or_else(ovf)?,
        a[1].checked_sub(b[1]).ok_or_else(ovf)?,
        a[2].checked_sub(b[2]).ok_or_else(ovf)?,
    ])
}

pub(crate) fn subdivide(f: &TropicalPolynomial) -> Result<Subdivided> {
    let points = f.support();
    let lifts_vec = f.integer_lifts()?;
    let lifts: BTreeMap<LatticeVector, i128> = points.iter().copied().zip(lifts_vec.iter().copied()).collect();
    let newton = f.newton_polygon();

    let (cells, normals) = match newton.dimension() {
        0 => (vec![newton.clone()], Vec::new()),
        1 => (lower_chain(&newton, &points, &lifts)?, Vec::new()),
        _ => lower_faces(&points, &lifts_vec)?,
    };

    let edges = collect_edges(&newton, &cells);
    Ok(Subdivided { subdivision: RegularSubdivision { newton, cells, edges }, normals, lifts })
}

/// Upward normal of the plane through three lifted points; `None` if their
/// projections are collinear.
fn plane_normal(a: [i128; 3], b: [i128; 3], c: [i128; 3]) -> Result<Option<[i128; 3]>> {
    let n = cross3d(diff(b, a)?, diff(c, a)?)?;
    Ok(match n[2] {
        0 => None,
        z if z < 0 => Some([-n[0], -n[1], -n[2]]),
        _ => Some(n),
    })
}

/// Orientation of `c` relative to the projected line `a → b`.
fn turn(a: LatticeVector, b: LatticeVector, c: LatticeVector) -> Result<i128> {
    Ok(b.checked_sub(a)?.cross(c.checked_sub(a)?))
}

/// Lower facets of the lifted point set by gift wrapping: starting from one
/// facet, the plane is rotated about each facet edge that is not on the
/// boundary until it meets the next lifted point. A facet is the full set of
/// points on its plane, so coplanar configurations give non-simplicial cells.
fn lower_faces(points: &[LatticeVector], lifts: &[i128]) -> Result<(Vec<LatticePolygon>, Vec<FaceNormal>)> {
    let up: Vec<[i128; 3]> = points.iter().zip(lifts).map(|(&p, &l)| lifted(p, l)).collect();
    let index: BTreeMap<LatticeVector, usize> = points.iter().enumerate().map(|(i, &p)| (p, i)).collect();

    // Plane through the lower edge (a, b) rotated onto the points left of a → b.
    let wrap = |a: usize, b: usize| -> Result<Option<[i128; 3]>> {
        let mut best: Option<(usize, [i128; 3])> = None;
        for (m, &p) in points.iter().enumerate() {
            if turn(points[a], points[b], p)? <= 0 {
                continue;
            }
            let below = match best {
                None => true,
                Some((k, n)) => dot3(n, diff(up[m], up[k])?)? < 0,
            };
            if below {
                best = Some((m, plane_normal(up[a], up[b], up[m])?.expect("off the line")));
            }
        }
        Ok(best.map(|(_, n)| n))
    };

    // First edge: the lowest step along the Newton polygon edge leaving its
    // lexicographically smallest vertex, which keeps every point on its left.
    let newton = convex_hull(points)?;
    let vs = newton.vertices();
    let start = vs.iter().position(|v| v == vs.iter().min().expect("non-empty")).expect("present");
    let (a0, b0) = (vs[start], vs[(start + 1) % vs.len()]);
    let on_edge: Vec<usize> = (0..points.len()).filter(|&m| turn(a0, b0, points[m]).map(|t| t == 0).unwrap_or(false)).collect();
    let chain = lower_chain(&LatticePolygon::segment(a0, b0), &on_edge.iter().map(|&m| points[m]).collect::<Vec<_>>(), &on_edge.iter().map(|&m| (points[m], lifts[m])).collect())?;
    let first = chain
        .iter()
        .find(|seg| seg.vertices().contains(&a0))
        .expect("the chain starts at a Newton vertex");
    let (s0, s1) = (first.vertices()[0], first.vertices()[1]);
    let (e0, e1) = if s0 == a0 { (s0, s1) } else { (s1, s0) };

    let mut faces: BTreeMap<Vec<usize>, FaceNormal> = BTreeMap::new();
    let mut queue = vec![wrap(index[&e0], index[&e1])?.expect("two-dimensional support")];
    while let Some(normal) = queue.pop() {
        let anchor = (0..up.len())
            .min_by_key(|&m| dot3(normal, up[m]).unwrap_or(i128::MAX))
            .expect("non-empty");
        let mut on_plane = Vec::new();
        for (m, &q) in up.iter().enumerate() {
            let side = dot3(normal, diff(q, up[anchor])?)?;
            debug_assert!(side >= 0, "wrapped plane is not a lower support plane");
            if side == 0 {
                on_plane.push(m);
            }
        }
        if faces.contains_key(&on_plane) {
            continue;
        }
        let cell = convex_hull(&on_plane.iter().map(|&m| points[m]).collect::<Vec<_>>())?;
        for (a, b) in cell.edges() {
            if let Some(next) = wrap(index[&b], index[&a])? {
                queue.push(next);
            }
        }
        faces.insert(on_plane, (normal[0], normal[1], normal[2]));
    }

    let mut cells: Vec<(LatticePolygon, FaceNormal)> = faces
        .into_iter()
        .map(|(idx, normal)| {
            let pts: Vec<LatticeVector> = idx.iter().map(|&m| points[m]).collect();
            Ok((convex_hull(&pts)?, normal))
        })
        .collect::<Result<_>>()?;
    cells.sort_by(|a, b| a.0.vertices().cmp(b.0.vertices()));
    Ok(cells.into_iter().unzip())
}

/// Lower chain of collinear lifted points, as segments between consecutive
/// chain vertices.
fn lower_chain(
    newton: &LatticePolygon,
    points: &[LatticeVector],
    lifts: &BTreeMap<LatticeVector, i128>,
) -> Result<Vec<LatticePolygon>> {
    let base = newton.vertices()[0];
    let (dir, _) = newton.vertices()[1].checked_sub(base)?.primitive_part().expect("segment");
    // Position along the line in lattice steps.
    let pos = |p: LatticeVector| -> i128 {
        let d = LatticeVector::new(p.x - base.x, p.y - base.y);
        if dir.x != 0 {
            d.x as i128 / dir.x as i128
        } else {
            d.y as i128 / dir.y as i128
        }
    };
    let mut pts: Vec<(i128, i128, LatticeVector)> = points.iter().map(|&p| (pos(p), lifts[&p], p)).collect();
    pts.sort();

    let turn = |o: &(i128, i128, LatticeVector), a: &(i128, i128, LatticeVector), b: &(i128, i128, LatticeVector)| {
        let l = (a.0 - o.0).checked_mul(b.1 - o.1);
        let r = (a.1 - o.1).checked_mul(b.0 - o.0);
        match (l, r) {
            (Some(l), Some(r)) => l.checked_sub(r).ok_or_else(ovf),
            _ => Err(ovf()),
        }
    };
    let mut chain: Vec<(i128, i128, LatticeVector)> = Vec::new();
    for p in pts {
        while chain.len() >= 2 && turn(&chain[chain.len() - 2], &chain[chain.len() - 1], &p)? <= 0 {
            chain.pop();
        }
        chain.push(p);
    }
    Ok(chain.windows(2).map(|w| LatticePolygon::segment(w[0].2, w[1].2)).collect())
}

fn collect_edges(newton: &LatticePolygon, cells: &[LatticePolygon]) -> Vec<SubdivisionEdge> {
    if newton.dimension() < 2 {
        return cells
            .iter()
            .filter(|c| c.dimension() == 1)
            .map(|c| {
                let (a, b) = (c.vertices()[0], c.vertices()[1]);
                SubdivisionEdge { from: a.min(b), to: a.max(b), kind: EdgeKind::Segment }
            })
            .collect();
    }
    let mut count: BTreeMap<(LatticeVector, LatticeVector), usize> = BTreeMap::new();
    for cell in cells {
        for (a, b) in cell.edges() {
            *count.entry((a.min(b), a.max(b))).or_default() += 1;
        }
    }
    count
        .into_iter()
        .map(|((from, to), n)| SubdivisionEdge {
            from,
            to,
            kind: if n >= 2 { EdgeKind::Interior } else { EdgeKind::Boundary },
        })
        .collect()
}

/// Regular subdivision of the Newton polygon induced by the lifts (lower
/// faces, since `f` is a minimum).
pub fn regular_subdivision(f: &TropicalPolynomial) -> Result<RegularSubdivision> {
    Ok(subdivide(f)?.subdivision)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom2d::LatticeVector as V;

    fn poly(terms: &[((i64, i64), i64)]) -> TropicalPolynomial {
        TropicalPolynomial::from_integer_lifts(terms).unwrap()
    }

    #[test]
    fn flat_triangle_is_one_cell() {
        let s = regular_subdivision(&poly(&[((0, 0), 0), ((1, 0), 0), ((0, 1), 0)])).unwrap();
        assert_eq!(s.cells, vec![LatticePolygon::unit_triangle()]);
        assert_eq!(s.edges.len(), 3);
        assert!(s.edges.iter().all(|e| e.kind == EdgeKind::Boundary));
    }

    #[test]
    fn lifted_square_corner_splits_into_two_triangles() {
        let s = regular_subdivision(&poly(&[((0, 0), 0), ((1, 0), 0), ((0, 1), 0), ((1, 1), 1)])).unwrap();
        assert_eq!(s.two_cells(), 2);
        let interior: Vec<_> = s.edges.iter().filter(|e| e.kind == EdgeKind::Interior).collect();
        assert_eq!(interior.len(), 1);
        assert_eq!((interior[0].from, interior[0].to), (V::new(0, 1), V::new(1, 0)));
        assert!(s.tiles_newton_polygon());
    }

    #[test]
    fn collinear_support_gives_segment_cell() {
        let s = regular_subdivision(&poly(&[((0, 0), 0), ((1, 0), 0), ((2, 0), 0)])).unwrap();
        assert_eq!(s.cells, vec![LatticePolygon::segment(V::new(0, 0), V::new(2, 0))]);
        assert_eq!(s.edges.len(), 1);
        assert_eq!(s.edges[0].kind, EdgeKind::Segment);

        let s = regular_subdivision(&poly(&[((0, 0), 0), ((1, 0), -1), ((2, 0), 0)])).unwrap();
        assert_eq!(s.cells.len(), 2);
    }

    #[test]
    fn interior_point_lifted_high_is_skipped() {
        let s = regular_subdivision(&poly(&[((0, 0), 0), ((2, 0), 0), ((0, 2), 0), ((1, 0), 5), ((0, 1), 5), ((1, 1), 5)]))
            .unwrap();
        assert_eq!(s.cells.len(), 1);
        assert_eq!(s.edges.iter().filter(|e| e.kind == EdgeKind::Boundary).count(), 3);
    }

    /// Oracle: a triple spans a lower face iff no lifted point lies strictly
    /// below its plane.
    fn brute_force_cells(points: &[V], lifts: &[i128]) -> Vec<LatticePolygon> {
        let up: Vec<[i128; 3]> = points.iter().zip(lifts).map(|(&p, &l)| lifted(p, l)).collect();
        let mut faces = std::collections::BTreeSet::new();
        let n = up.len();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let Some(normal) = plane_normal(up[i], up[j], up[k]).unwrap() else { continue };
                    let sides: Vec<i128> = up.iter().map(|&q| dot3(normal, diff(q, up[i]).unwrap()).unwrap()).collect();
                    if sides.iter().all(|&s| s >= 0) {
                        faces.insert((0..n).filter(|&m| sides[m] == 0).collect::<Vec<_>>());
                    }
                }
            }
        }
        let mut cells: Vec<LatticePolygon> = faces
            .into_iter()
            .map(|idx| convex_hull(&idx.iter().map(|&m| points[m]).collect::<Vec<_>>()).unwrap())
            .collect();
        cells.sort_by(|a, b| a.vertices().cmp(b.vertices()));
        cells
    }

    #[test]
    fn gift_wrapping_matches_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for round in 0..300 {
            let n = rng.random_range(3..=14);
            let mut pts: Vec<V> = (0..n).map(|_| V::new(rng.random_range(-3..=3), rng.random_range(-3..=3))).collect();
            pts.sort();
            pts.dedup();
            if convex_hull(&pts).unwrap().dimension() < 2 {
                continue;
            }
            // Small lift range so that coplanar facets are common.
            let lifts: Vec<i128> = pts.iter().map(|_| rng.random_range(0..=if round % 2 == 0 { 1 } else { 20 })).collect();
            let (cells, _) = lower_faces(&pts, &lifts).unwrap();
            assert_eq!(cells, brute_force_cells(&pts, &lifts), "points {pts:?} lifts {lifts:?}");
        }
    }

    #[test]
    fn point_support() {
        let s = regular_subdivision(&poly(&[((3, 3), 7)])).unwrap();
        assert_eq!(s.cells.len(), 1);
        assert!(s.edges.is_empty());
    }
}
