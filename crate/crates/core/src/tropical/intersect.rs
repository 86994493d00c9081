use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{LiftSampler, RatPoint, Rational, Result, TropicalCurve, TropicalError};
use crate::geom2d::LatticeVector;

/// A transversal crossing and its multiplicity `w(e) w(h) |det(u, v)|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalIntersection {
    pub point: RatPoint,
    pub local_number: i128,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Extent {
    /// Parameter in `[0, 1]`.
    Segment,
    /// Parameter in `[0, ∞)`.
    Ray,
    /// Any parameter.
    Line,
}

/// `origin + t · span` for `t` in the extent's range.
struct Piece {
    origin: RatPoint,
    span: RatPoint,
    extent: Extent,
    primitive: LatticeVector,
    weight: u64,
}

impl Extent {
    fn lower(self) -> Option<Rational> {
        match self {
            Extent::Line => None,
            _ => Some(Rational::zero()),
        }
    }

    fn upper(self) -> Option<Rational> {
        match self {
            Extent::Segment => Some(Rational::one()),
            _ => None,
        }
    }

    fn contains(self, t: &Rational) -> bool {
        self.lower().is_none_or(|lo| *t >= lo) && self.upper().is_none_or(|hi| *t <= hi)
    }

    fn is_endpoint(self, t: &Rational) -> bool {
        self.lower().is_some_and(|lo| *t == lo) || self.upper().is_some_and(|hi| *t == hi)
    }
}

fn pieces(curve: &TropicalCurve) -> Vec<Piece> {
    let mut out = Vec::with_capacity(curve.edges.len() + curve.rays.len() + curve.lines.len());
    for e in &curve.edges {
        let origin = curve.vertices[e.from].clone();
        let span = curve.vertices[e.to].sub(&origin);
        out.push(Piece { origin, span, extent: Extent::Segment, primitive: e.direction, weight: e.weight });
    }
    for r in &curve.rays {
        out.push(Piece {
            origin: curve.vertices[r.vertex].clone(),
            span: RatPoint::from_lattice(r.direction),
            extent: Extent::Ray,
            primitive: r.direction,
            weight: r.weight,
        });
    }
    for l in &curve.lines {
        out.push(Piece {
            origin: l.point.clone(),
            span: RatPoint::from_lattice(l.direction),
            extent: Extent::Line,
            primitive: l.direction,
            weight: l.weight,
        });
    }
    out
}

/// Closed parameter interval of `other` projected onto `base`'s line.
fn projected_range(base: &Piece, other: &Piece) -> (Option<Rational>, Option<Rational>) {
    let norm = base.span.dot(&base.span);
    let param = |p: &RatPoint| p.sub(&base.origin).dot(&base.span) / &norm;
    let start = param(&other.origin);
    let step = other.span.dot(&base.span) / &norm;
    let at = |t: Option<Rational>| t.map(|t| &start + &step * t);
    let (a, b) = (at(other.extent.lower()), at(other.extent.upper()));
    // A missing bound is ±∞ in the direction of `step` (or `-step` for the lower end).
    if step.is_positive() {
        (a, b)
    } else {
        (b, a)
    }
}

fn overlaps(base: &Piece, other: &Piece) -> bool {
    let (lo, hi) = projected_range(base, other);
    let (blo, bhi) = (base.extent.lower(), base.extent.upper());
    let max_lo = match (lo, blo) {
        (Some(a), Some(b)) => Some(a.max(b)),
        (a, b) => a.or(b),
    };
    let min_hi = match (hi, bhi) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };
    match (max_lo, min_hi) {
        (Some(lo), Some(hi)) => lo <= hi,
        _ => true,
    }
}

fn not_transversal(msg: String) -> TropicalError {
    TropicalError::NotTransversal(msg)
}

/// All crossings of two curves, or `NotTransversal` if any common point is a
/// vertex of either curve or the curves share a segment.
pub fn transversal_intersections(vf: &TropicalCurve, vg: &TropicalCurve) -> Result<Vec<LocalIntersection>> {
    let (pf, pg) = (pieces(vf), pieces(vg));
    let mut out = Vec::new();
    for e in &pf {
        for h in &pg {
            let offset = h.origin.sub(&e.origin);
            let denom = e.span.cross(&h.span);
            if denom.is_zero() {
                if offset.cross(&e.span).is_zero() && overlaps(e, h) {
                    return Err(not_transversal(format!("overlapping parallel edges through {}", e.origin)));
                }
                continue;
            }
            let t = offset.cross(&h.span) / &denom;
            let u = offset.cross(&e.span) / &denom;
            if !e.extent.contains(&t) || !h.extent.contains(&u) {
                continue;
            }
            let point = e.origin.add(&RatPoint::new(&e.span.x * &t, &e.span.y * &t));
            if e.extent.is_endpoint(&t) || h.extent.is_endpoint(&u) {
                return Err(not_transversal(format!("curves meet at a vertex {point}")));
            }
            let det = e.primitive.cross(h.primitive).abs();
            out.push(LocalIntersection { point, local_number: e.weight as i128 * h.weight as i128 * det });
        }
    }
    out.sort_by(|a, b| a.point.cmp(&b.point));
    Ok(out)
}

/// Sum of local intersection numbers of a transversal pair.
pub fn intersection_number(vf: &TropicalCurve, vg: &TropicalCurve) -> Result<i128> {
    Ok(transversal_intersections(vf, vg)?.iter().map(|p| p.local_number).sum())
}

/// `(V_f, V_f)` as the intersection number with a random translate, redrawn
/// while the pair is not transversal.
///
/// Curves with a segment (or point) as Newton polygon get 0: parallel lines
/// have no transversal translate, and the normalized area is 0.
pub fn self_intersection(vf: &TropicalCurve, seed: u64, sampler: &LiftSampler) -> Result<i128> {
    if vf.newton.dimension() < 2 {
        return Ok(0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..sampler.retry_cap {
        let shift = sampler.draw_point(&mut rng);
        if shift.x.is_zero() && shift.y.is_zero() {
            continue;
        }
        match intersection_number(vf, &vf.translated(&shift)) {
            Ok(n) => return Ok(n),
            Err(TropicalError::NotTransversal(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(TropicalError::RetryCapExhausted(sampler.retry_cap))
}
