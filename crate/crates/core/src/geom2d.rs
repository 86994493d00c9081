//! Exact planar lattice geometry.
//!
//! Coordinates are `i64`; every derived scalar (cross products, areas, support
//! values, mixed volumes) is computed in `i128` with checked arithmetic. Any
//! overflow surfaces as [`GeomError::Overflow`].
//!
//! Volumes follow the lattice normalization: `Vol₂` is twice the Euclidean
//! area, so the shoelace sum over a counterclockwise vertex cycle is already
//! the normalized value.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("convex hull of an empty point set")]
    EmptyInput,
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("lattice length is only defined for points and segments")]
    NotOneDimensional,
    #[error("polarization numerator {0} is odd")]
    OddPolarization(i128),
    #[error("mixed volume routines disagree: polarization {polarization}, support formula {support}")]
    MixedVolumeMismatch { polarization: i128, support: i128 },
}

pub type Result<T> = std::result::Result<T, GeomError>;

/// An integer point or vector of the plane. Serialized as `[x, y]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct LatticeVector {
    pub x: i64,
    pub y: i64,
}

impl From<[i64; 2]> for LatticeVector {
    fn from([x, y]: [i64; 2]) -> Self {
        Self { x, y }
    }
}

impl From<LatticeVector> for [i64; 2] {
    fn from(v: LatticeVector) -> Self {
        [v.x, v.y]
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl LatticeVector {
    pub const ZERO: Self = Self { x: 0, y: 0 };

    pub const fn new(x: i64, y: i64) -> Self {
        Self { x, y }
    }

    /// Exact inner product.
    pub fn dot(self, other: Self) -> i128 {
        // |x·x'| < 2^126, so the sum of two such terms fits in i128.
        self.x as i128 * other.x as i128 + self.y as i128 * other.y as i128
    }

    /// `det(self, other)`, positive when `other` is counterclockwise of `self`.
    pub fn cross(self, other: Self) -> i128 {
        self.x as i128 * other.y as i128 - self.y as i128 * other.x as i128
    }

    pub fn checked_add(self, other: Self) -> Result<Self> {
        Ok(Self {
            x: self.x.checked_add(other.x).ok_or(GeomError::Overflow("vector addition"))?,
            y: self.y.checked_add(other.y).ok_or(GeomError::Overflow("vector addition"))?,
        })
    }

    pub fn checked_sub(self, other: Self) -> Result<Self> {
        Ok(Self {
            x: self.x.checked_sub(other.x).ok_or(GeomError::Overflow("vector subtraction"))?,
            y: self.y.checked_sub(other.y).ok_or(GeomError::Overflow("vector subtraction"))?,
        })
    }

    pub fn checked_neg(self) -> Result<Self> {
        Ok(Self {
            x: self.x.checked_neg().ok_or(GeomError::Overflow("vector negation"))?,
            y: self.y.checked_neg().ok_or(GeomError::Overflow("vector negation"))?,
        })
    }

    /// `gcd(|x|, |y|)`; zero only for the zero vector.
    pub fn content(self) -> u64 {
        self.x.unsigned_abs().gcd(&self.y.unsigned_abs())
    }

    pub fn is_primitive(self) -> bool {
        self.content() == 1
    }

    /// The primitive vector pointing the same way, with the lattice length of
    /// `self` along it. `None` for the zero vector.
    pub fn primitive_part(self) -> Option<(Self, u64)> {
        let g = self.content();
        if g == 0 {
            return None;
        }
        // i128 division: g can be 2^63, which does not fit in i64.
        let x = (self.x as i128 / g as i128) as i64;
        let y = (self.y as i128 / g as i128) as i64;
        Some((Self { x, y }, g))
    }
}

/// Orientation of `o, a, b`; `None` on overflow, which needs coordinate
/// differences beyond `2^62`.
fn cross3(o: LatticeVector, a: LatticeVector, b: LatticeVector) -> Option<i128> {
    checked_cross3(o, a, b).ok()
}

/// Coordinate spread up to which every orientation test of a hull fits in i128.
const MAX_HULL_SPAN: i128 = 1 << 62;

/// Orders vertices for the canonical rotation: lowest `y`, then lowest `x`.
fn canonical_key(v: &LatticeVector) -> (i64, i64) {
    (v.y, v.x)
}

/// A convex lattice polygon, possibly degenerate (a point or a segment).
///
/// Vertices run counterclockwise with strict left turns and start at the
/// vertex with the smallest `(y, x)`. Two polygons are equal iff they are the
/// same point set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPolygon")]
pub struct LatticePolygon {
    vertices: Vec<LatticeVector>,
}

#[derive(Deserialize)]
struct RawPolygon {
    vertices: Vec<LatticeVector>,
}

impl TryFrom<RawPolygon> for LatticePolygon {
    type Error = GeomError;

    fn try_from(raw: RawPolygon) -> Result<Self> {
        convex_hull(&raw.vertices)
    }
}

impl LatticePolygon {
    pub fn point(p: LatticeVector) -> Self {
        Self { vertices: vec![p] }
    }

    pub fn segment(a: LatticeVector, b: LatticeVector) -> Self {
        convex_hull(&[a, b]).expect("two points")
    }

    /// The unit square `[0,1]²`.
    pub fn unit_square() -> Self {
        convex_hull(&[
            LatticeVector::new(0, 0),
            LatticeVector::new(1, 0),
            LatticeVector::new(1, 1),
            LatticeVector::new(0, 1),
        ])
        .expect("non-empty")
    }

    /// The standard triangle `conv{(0,0),(1,0),(0,1)}`.
    pub fn unit_triangle() -> Self {
        convex_hull(&[LatticeVector::new(0, 0), LatticeVector::new(1, 0), LatticeVector::new(0, 1)])
            .expect("non-empty")
    }

    pub fn vertices(&self) -> &[LatticeVector] {
        &self.vertices
    }

    /// 0 for a point, 1 for a segment, 2 otherwise.
    pub fn dimension(&self) -> usize {
        self.vertices.len().min(3) - 1
    }

    /// Directed edges `(vᵢ, vᵢ₊₁)` of the boundary cycle. Empty for a point;
    /// a segment yields its single edge once.
    pub fn edges(&self) -> Vec<(LatticeVector, LatticeVector)> {
        match self.vertices.len() {
            1 => Vec::new(),
            2 => vec![(self.vertices[0], self.vertices[1])],
            n => (0..n).map(|i| (self.vertices[i], self.vertices[(i + 1) % n])).collect(),
        }
    }

    /// Whether `p` lies in the closed polygon.
    pub fn contains(&self, p: LatticeVector) -> bool {
        match self.vertices.len() {
            1 => self.vertices[0] == p,
            2 => {
                let (a, b) = (self.vertices[0], self.vertices[1]);
                cross3(a, b, p) == Some(0)
                    && p.x >= a.x.min(b.x)
                    && p.x <= a.x.max(b.x)
                    && p.y >= a.y.min(b.y)
                    && p.y <= a.y.max(b.y)
            }
            // Overflow means `p` is farther out than the polygon is wide.
            _ => self.edges().iter().all(|&(a, b)| cross3(a, b, p).is_some_and(|c| c >= 0)),
        }
    }

    /// Every lattice point of the polygon, sorted lexicographically by `(x, y)`.
    pub fn lattice_points(&self) -> Vec<LatticeVector> {
        let (lo_x, hi_x) = min_max(self.vertices.iter().map(|v| v.x));
        let (lo_y, hi_y) = min_max(self.vertices.iter().map(|v| v.y));
        let mut out = Vec::new();
        for x in lo_x..=hi_x {
            for y in lo_y..=hi_y {
                let p = LatticeVector::new(x, y);
                if self.contains(p) {
                    out.push(p);
                }
            }
        }
        out
    }

    /// Translate by `t`.
    pub fn translate(&self, t: LatticeVector) -> Result<Self> {
        let pts = self.vertices.iter().map(|v| v.checked_add(t)).collect::<Result<Vec<_>>>()?;
        convex_hull(&pts)
    }

    /// Image under the integer linear map with columns `(m00, m10)` and `(m01, m11)`.
    pub fn linear_image(&self, m: [[i64; 2]; 2]) -> Result<Self> {
        let map = |v: &LatticeVector| -> Result<LatticeVector> {
            let x = m[0][0] as i128 * v.x as i128 + m[0][1] as i128 * v.y as i128;
            let y = m[1][0] as i128 * v.x as i128 + m[1][1] as i128 * v.y as i128;
            Ok(LatticeVector::new(
                i64::try_from(x).map_err(|_| GeomError::Overflow("linear image"))?,
                i64::try_from(y).map_err(|_| GeomError::Overflow("linear image"))?,
            ))
        };
        let pts = self.vertices.iter().map(map).collect::<Result<Vec<_>>>()?;
        convex_hull(&pts)
    }
}

impl fmt::Display for LatticePolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "conv{{")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

fn min_max(it: impl Iterator<Item = i64>) -> (i64, i64) {
    it.fold((i64::MAX, i64::MIN), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

/// Convex hull of a non-empty point set, in canonical form.
pub fn convex_hull(points: &[LatticeVector]) -> Result<LatticePolygon> {
    if points.is_empty() {
        return Err(GeomError::EmptyInput);
    }
    let mut pts = points.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() <= 2 {
        return Ok(canonicalize(pts));
    }
    let (xlo, xhi) = min_max(pts.iter().map(|p| p.x));
    let (ylo, yhi) = min_max(pts.iter().map(|p| p.y));
    if xhi as i128 - xlo as i128 > MAX_HULL_SPAN || yhi as i128 - ylo as i128 > MAX_HULL_SPAN {
        return Err(GeomError::Overflow("hull coordinate span"));
    }
    let turn = |o, a, b| cross3(o, a, b).expect("bounded span");

    // Andrew's monotone chain, dropping collinear points.
    let mut hull: Vec<LatticeVector> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    Ok(canonicalize(hull))
}

fn canonicalize(mut cycle: Vec<LatticeVector>) -> LatticePolygon {
    if let Some(start) = cycle
        .iter()
        .enumerate()
        .min_by_key(|(_, v)| canonical_key(v))
        .map(|(i, _)| i)
    {
        cycle.rotate_left(start);
    }
    LatticePolygon { vertices: cycle }
}

/// Twice the Euclidean area; zero for points and segments.
pub fn normalized_volume(p: &LatticePolygon) -> Result<i128> {
    if p.dimension() < 2 {
        return Ok(0);
    }
    let origin = p.vertices[0];
    let mut sum: i128 = 0;
    for w in p.vertices[1..].windows(2) {
        let term = checked_cross3(origin, w[0], w[1])?;
        sum = sum.checked_add(term).ok_or(GeomError::Overflow("shoelace sum"))?;
    }
    Ok(sum)
}

fn checked_cross3(o: LatticeVector, a: LatticeVector, b: LatticeVector) -> Result<i128> {
    let ax = a.x as i128 - o.x as i128;
    let ay = a.y as i128 - o.y as i128;
    let bx = b.x as i128 - o.x as i128;
    let by = b.y as i128 - o.y as i128;
    let l = ax.checked_mul(by).ok_or(GeomError::Overflow("cross product"))?;
    let r = ay.checked_mul(bx).ok_or(GeomError::Overflow("cross product"))?;
    l.checked_sub(r).ok_or(GeomError::Overflow("cross product"))
}

/// `|I ∩ Z²| - 1` for a point or segment.
pub fn lattice_length(p: &LatticePolygon) -> Result<u64> {
    match p.vertices.as_slice() {
        [_] => Ok(0),
        [a, b] => Ok(b.checked_sub(*a)?.content()),
        _ => Err(GeomError::NotOneDimensional),
    }
}

/// `max ⟨u, v⟩` over the vertices `v` of `p`.
pub fn support(p: &LatticePolygon, u: LatticeVector) -> i128 {
    p.vertices.iter().map(|v| v.dot(u)).max().expect("polygons are non-empty")
}

/// One side of a polygon: its outer primitive normal and its lattice length.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasureEntry {
    pub normal: LatticeVector,
    pub length: u64,
}

/// Lattice surface area measure: outer primitive side normals weighted by
/// side lengths. A segment carries both of its opposite normals; a point
/// carries nothing.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceMeasure {
    pub entries: Vec<MeasureEntry>,
}

impl SurfaceMeasure {
    /// `Σ length · normal`; zero for every polygon.
    pub fn closure(&self) -> (i128, i128) {
        self.entries.iter().fold((0, 0), |(sx, sy), e| {
            (sx + e.length as i128 * e.normal.x as i128, sy + e.length as i128 * e.normal.y as i128)
        })
    }

    pub fn normals(&self) -> impl Iterator<Item = LatticeVector> + '_ {
        self.entries.iter().map(|e| e.normal)
    }
}

pub fn surface_measure(p: &LatticePolygon) -> Result<SurfaceMeasure> {
    let outer = |a: LatticeVector, b: LatticeVector| -> Result<MeasureEntry> {
        let d = b.checked_sub(a)?;
        let (prim, len) = d.primitive_part().expect("distinct vertices");
        // Outer normal of a counterclockwise edge direction (dx, dy) is (dy, -dx).
        Ok(MeasureEntry { normal: LatticeVector::new(prim.y, -prim.x), length: len })
    };
    let entries = match p.vertices.as_slice() {
        [_] => Vec::new(),
        [a, b] => {
            let e = outer(*a, *b)?;
            vec![e, MeasureEntry { normal: e.normal.checked_neg()?, length: e.length }]
        }
        _ => p.edges().into_iter().map(|(a, b)| outer(a, b)).collect::<Result<Vec<_>>>()?,
    };
    Ok(SurfaceMeasure { entries })
}

/// `P + Q = {p + q}` as the hull of pairwise vertex sums.
pub fn minkowski_sum(p: &LatticePolygon, q: &LatticePolygon) -> Result<LatticePolygon> {
    let mut sums = Vec::with_capacity(p.vertices.len() * q.vertices.len());
    for a in &p.vertices {
        for b in &q.vertices {
            sums.push(a.checked_add(*b)?);
        }
    }
    convex_hull(&sums)
}

/// `V(P,Q) = (Vol₂(P+Q) - Vol₂(P) - Vol₂(Q)) / 2`.
pub fn mixed_volume_polarization(p: &LatticePolygon, q: &LatticePolygon) -> Result<i128> {
    let sum = normalized_volume(&minkowski_sum(p, q)?)?;
    let (vp, vq) = (normalized_volume(p)?, normalized_volume(q)?);
    let numerator = sum
        .checked_sub(vp)
        .and_then(|v| v.checked_sub(vq))
        .ok_or(GeomError::Overflow("polarization"))?;
    if numerator % 2 != 0 {
        return Err(GeomError::OddPolarization(numerator));
    }
    Ok(numerator / 2)
}

/// `V(P,Q) = Σ_{u ∈ U_Q} h_P(u) · Vol₁(Q^u)`.
pub fn mixed_volume_support(p: &LatticePolygon, q: &LatticePolygon) -> Result<i128> {
    let measure = surface_measure(q)?;
    measure.entries.iter().try_fold(0i128, |acc, e| {
        support(p, e.normal)
            .checked_mul(e.length as i128)
            .and_then(|t| acc.checked_add(t))
            .ok_or(GeomError::Overflow("support formula"))
    })
}

/// Coefficients `(Vol₂ P, V(P,Q), Vol₂ Q)` of `Vol₂(xP + yQ) = A x² + 2B xy + C y²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VolumeTriple {
    #[serde(rename = "A")]
    pub a: i128,
    #[serde(rename = "B")]
    pub b: i128,
    #[serde(rename = "C")]
    pub c: i128,
}

impl VolumeTriple {
    pub const fn new(a: i128, b: i128, c: i128) -> Self {
        Self { a, b, c }
    }

    /// `B² ≥ AC`, the lattice form of the Minkowski inequality.
    pub fn satisfies_minkowski(&self) -> bool {
        match (self.b.checked_mul(self.b), self.a.checked_mul(self.c)) {
            (Some(bb), Some(ac)) => bb >= ac,
            _ => false,
        }
    }
}

impl fmt::Display for VolumeTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// Volume polynomial of the pair, with the mixed term computed by both routines.
pub fn volume_polynomial(p: &LatticePolygon, q: &LatticePolygon) -> Result<VolumeTriple> {
    let polarization = mixed_volume_polarization(p, q)?;
    let support = mixed_volume_support(p, q)?;
    if polarization != support {
        return Err(GeomError::MixedVolumeMismatch { polarization, support });
    }
    Ok(VolumeTriple::new(normalized_volume(p)?, polarization, normalized_volume(q)?))
}

/// Counterclockwise angular order starting from the positive x-axis.
pub fn angular_cmp(a: LatticeVector, b: LatticeVector) -> Ordering {
    let half = |v: LatticeVector| u8::from(!(v.y > 0 || (v.y == 0 && v.x > 0)));
    half(a).cmp(&half(b)).then_with(|| 0.cmp(&a.cross(b)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: i64, y: i64) -> LatticeVector {
        LatticeVector::new(x, y)
    }

    fn hull(pts: &[(i64, i64)]) -> LatticePolygon {
        convex_hull(&pts.iter().map(|&(x, y)| v(x, y)).collect::<Vec<_>>()).unwrap()
    }

    fn example_p() -> LatticePolygon {
        hull(&[(0, 0), (0, 2), (4, 1), (4, 0)])
    }

    fn example_q() -> LatticePolygon {
        hull(&[(0, 0), (0, 2), (3, 0)])
    }

    #[test]
    fn hull_examples() {
        assert_eq!(hull(&[(0, 0)]).vertices(), &[v(0, 0)]);
        assert_eq!(hull(&[(0, 0), (2, 0), (1, 0)]).vertices(), &[v(0, 0), v(2, 0)]);
        let quad = hull(&[(0, 1), (0, 1), (1, 0), (2, 0), (2, 0), (1, 1)]);
        assert_eq!(quad.vertices(), &[v(1, 0), v(2, 0), v(1, 1), v(0, 1)]);
        assert_eq!(convex_hull(&[]), Err(GeomError::EmptyInput));
    }

    #[test]
    fn hull_drops_interior_and_collinear() {
        let sq = hull(&[(0, 0), (2, 0), (2, 2), (0, 2), (1, 1), (1, 0), (2, 1)]);
        assert_eq!(sq.vertices(), &[v(0, 0), v(2, 0), v(2, 2), v(0, 2)]);
        assert_eq!(sq.dimension(), 2);
    }

    #[test]
    fn normalized_volume_examples() {
        assert_eq!(normalized_volume(&hull(&[(0, 0), (3, 0), (3, 2), (0, 2)])).unwrap(), 12);
        assert_eq!(normalized_volume(&hull(&[(0, 0), (3, 0), (0, 2)])).unwrap(), 6);
        assert_eq!(normalized_volume(&example_p()).unwrap(), 12);
        assert_eq!(normalized_volume(&hull(&[(0, 0), (5, 5)])).unwrap(), 0);
    }

    #[test]
    fn lattice_length_examples() {
        assert_eq!(lattice_length(&hull(&[(3, 4)])).unwrap(), 0);
        assert_eq!(lattice_length(&hull(&[(0, 0), (4, 2)])).unwrap(), 2);
        assert_eq!(lattice_length(&hull(&[(0, 0), (0, 3)])).unwrap(), 3);
        assert_eq!(lattice_length(&example_q()), Err(GeomError::NotOneDimensional));
    }

    #[test]
    fn support_examples() {
        assert_eq!(support(&example_p(), v(2, 3)), 11);
        assert_eq!(support(&example_p(), v(0, 0)), 0);
        assert_eq!(support(&LatticePolygon::unit_square(), v(-1, -1)), 0);
    }

    #[test]
    fn surface_measure_of_example_triangle() {
        let m = surface_measure(&example_q()).unwrap();
        let mut got: Vec<_> = m.entries.iter().map(|e| (e.normal, e.length)).collect();
        got.sort();
        let mut want = vec![(v(2, 3), 1), (v(0, -1), 3), (v(-1, 0), 2)];
        want.sort();
        assert_eq!(got, want);
        assert_eq!(m.closure(), (0, 0));
    }

    #[test]
    fn surface_measure_degenerate() {
        assert!(surface_measure(&hull(&[(1, 1)])).unwrap().entries.is_empty());
        let seg = surface_measure(&hull(&[(0, 0), (2, 0)])).unwrap();
        let mut got: Vec<_> = seg.entries.iter().map(|e| (e.normal, e.length)).collect();
        got.sort();
        assert_eq!(got, vec![(v(0, -1), 2), (v(0, 1), 2)]);
    }

    #[test]
    fn minkowski_examples() {
        let p = example_p();
        assert_eq!(minkowski_sum(&p, &hull(&[(0, 0)])).unwrap(), p);
        let s = minkowski_sum(&hull(&[(0, 0), (1, 0)]), &hull(&[(0, 0), (0, 1)])).unwrap();
        assert_eq!(s, LatticePolygon::unit_square());
        let t = LatticePolygon::unit_triangle();
        assert_eq!(minkowski_sum(&t, &t).unwrap(), hull(&[(0, 0), (2, 0), (0, 2)]));
    }

    #[test]
    fn mixed_volume_examples() {
        let (p, q) = (example_p(), example_q());
        assert_eq!(mixed_volume_polarization(&p, &q).unwrap(), 11);
        assert_eq!(mixed_volume_support(&p, &q).unwrap(), 11);
        let sq = LatticePolygon::unit_square();
        assert_eq!(mixed_volume_polarization(&sq, &sq).unwrap(), 2);
        let seg = hull(&[(0, 0), (1, 0)]);
        let quad = hull(&[(1, 0), (2, 0), (0, 2), (0, 1)]);
        assert_eq!(mixed_volume_polarization(&seg, &quad).unwrap(), 2);
        assert_eq!(mixed_volume_support(&seg, &quad).unwrap(), 2);
        assert_eq!(mixed_volume_support(&quad, &seg).unwrap(), 2);
        assert_eq!(mixed_volume_support(&quad, &hull(&[(5, 5)])).unwrap(), 0);
    }

    #[test]
    fn volume_polynomial_examples() {
        let sq = LatticePolygon::unit_square();
        assert_eq!(volume_polynomial(&sq, &sq).unwrap(), VolumeTriple::new(2, 2, 2));
        assert_eq!(
            volume_polynomial(&example_p(), &example_q()).unwrap(),
            VolumeTriple::new(12, 11, 6)
        );
        let pt = hull(&[(0, 0)]);
        assert_eq!(volume_polynomial(&pt, &example_p()).unwrap(), VolumeTriple::new(0, 0, 12));
    }

    #[test]
    fn overflow_is_reported() {
        let big = hull(&[(i64::MAX, 0), (i64::MAX, 1)]);
        let one = hull(&[(1, 0)]);
        assert!(matches!(minkowski_sum(&big, &one), Err(GeomError::Overflow(_))));
        let huge = [v(i64::MIN, i64::MIN), v(i64::MAX, i64::MIN), v(i64::MAX, i64::MAX)];
        assert!(matches!(convex_hull(&huge), Err(GeomError::Overflow(_))));
        let wide = hull(&[(0, 0), (1 << 62, 0), (0, 1 << 62)]);
        assert_eq!(normalized_volume(&wide).unwrap(), 1i128 << 124);
        assert!(!wide.contains(v(i64::MIN, i64::MAX)));
    }

    #[test]
    fn polygon_json_is_hulled_on_load() {
        let p: LatticePolygon =
            serde_json::from_str(r#"{"vertices": [[0,1],[2,0],[1,0],[1,1],[2,0]]}"#).unwrap();
        assert_eq!(p.vertices(), &[v(1, 0), v(2, 0), v(1, 1), v(0, 1)]);
        assert_eq!(serde_json::to_string(&p).unwrap(), r#"{"vertices":[[1,0],[2,0],[1,1],[0,1]]}"#);
        assert!(serde_json::from_str::<LatticePolygon>(r#"{"vertices": []}"#).is_err());
    }

    #[test]
    fn angular_order() {
        let mut rays = vec![v(0, -1), v(-1, 0), v(1, 1), v(1, 0), v(0, 1), v(-1, -1)];
        rays.sort_by(|a, b| angular_cmp(*a, *b));
        assert_eq!(rays, vec![v(1, 0), v(1, 1), v(0, 1), v(-1, 0), v(-1, -1), v(0, -1)]);
    }

    #[test]
    fn lattice_points_of_square() {
        let sq = hull(&[(0, 0), (2, 0), (2, 2), (0, 2)]);
        assert_eq!(sq.lattice_points().len(), 9);
        assert_eq!(hull(&[(0, 0), (4, 2)]).lattice_points(), vec![v(0, 0), v(2, 1), v(4, 2)]);
    }
}
