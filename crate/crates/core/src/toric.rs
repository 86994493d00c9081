//! Complete two-dimensional fans, torus-invariant divisors given by one
//! integer per ray, and their intersection numbers through the associated
//! polygons `P_D = {x : ⟨x, uᵢ⟩ ≤ aᵢ}` (outer-normal convention).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::construct::{self, ConstructError, RealizationResult};
use crate::geom2d::{
    angular_cmp, convex_hull, mixed_volume_polarization, normalized_volume, support, surface_measure, GeomError, LatticePolygon,
    LatticeVector, VolumeTriple,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ToricError {
    #[error("ray {0} is not primitive")]
    NonPrimitiveRay(LatticeVector),
    #[error("fan is not complete: {0}")]
    Incomplete(String),
    #[error("divisor has {got} coefficients for {rays} rays")]
    LengthMismatch { got: usize, rays: usize },
    #[error("the divisor polytope is empty")]
    EmptyPolytope,
    #[error("the divisor polytope has a non-lattice vertex ({0}, {1})")]
    NonLatticeVertex(String, String),
    #[error("divisor is not globally generated")]
    NotGloballyGenerated,
    #[error(transparent)]
    Geometry(#[from] GeomError),
    #[error(transparent)]
    Construct(#[from] ConstructError),
    #[error("toric invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, ToricError>;

/// Complete fan in the plane: primitive rays in counterclockwise order
/// starting from the positive x-axis; the cones are consecutive ray pairs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawFan")]
pub struct Fan {
    rays: Vec<LatticeVector>,
}

#[derive(Deserialize)]
struct RawFan {
    rays: Vec<LatticeVector>,
}

impl TryFrom<RawFan> for Fan {
    type Error = ToricError;

    fn try_from(raw: RawFan) -> Result<Self> {
        Fan::new(raw.rays)
    }
}

impl Fan {
    /// Sorts and validates the rays. Duplicates are merged.
    pub fn new(mut rays: Vec<LatticeVector>) -> Result<Self> {
        if let Some(bad) = rays.iter().find(|r| !r.is_primitive()) {
            return Err(ToricError::NonPrimitiveRay(*bad));
        }
        rays.sort_by(|a, b| angular_cmp(*a, *b));
        rays.dedup();
        if rays.len() < 3 {
            return Err(ToricError::Incomplete(format!("{} rays", rays.len())));
        }
        let n = rays.len();
        for i in 0..n {
            let (u, w) = (rays[i], rays[(i + 1) % n]);
            if u.cross(w) <= 0 {
                return Err(ToricError::Incomplete(format!("angular gap from {u} to {w} is at least π")));
            }
        }
        Ok(Self { rays })
    }

    /// `x ≤ 1`-style square fan with rays `±e₁, ±e₂`.
    pub fn square() -> Self {
        Self::new(standard_rays().to_vec()).expect("complete")
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    /// Consecutive ray pairs `(uᵢ, uᵢ₊₁)`, cyclically.
    pub fn cones(&self) -> impl Iterator<Item = (LatticeVector, LatticeVector)> + '_ {
        let n = self.rays.len();
        (0..n).map(move |i| (self.rays[i], self.rays[(i + 1) % n]))
    }

    /// Every cone is generated by a lattice basis.
    pub fn is_unimodular(&self) -> bool {
        self.cones().all(|(u, w)| u.cross(w) == 1)
    }

    pub fn position(&self, ray: LatticeVector) -> Option<usize> {
        self.rays.iter().position(|&r| r == ray)
    }
}

fn standard_rays() -> [LatticeVector; 4] {
    [LatticeVector::new(1, 0), LatticeVector::new(0, 1), LatticeVector::new(-1, 0), LatticeVector::new(0, -1)]
}

/// Integer coefficient `aᵢ` per ray of a fan.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ToricDivisor {
    pub coefficients: Vec<i128>,
}

impl ToricDivisor {
    pub fn new(coefficients: Vec<i128>) -> Self {
        Self { coefficients }
    }

    pub fn zero(fan: &Fan) -> Self {
        Self { coefficients: vec![0; fan.rays.len()] }
    }

    fn check_len(&self, fan: &Fan) -> Result<()> {
        if self.coefficients.len() != fan.rays.len() {
            return Err(ToricError::LengthMismatch { got: self.coefficients.len(), rays: fan.rays.len() });
        }
        Ok(())
    }
}

/// Fan spanned by the outer primitive normals of `P` and `Q`, optionally
/// padded with `±e₁, ±e₂` (needed when neither polygon is two-dimensional).
pub fn normal_fan_union(p: &LatticePolygon, q: &LatticePolygon, pad: bool) -> Result<Fan> {
    let mut rays: Vec<LatticeVector> = surface_measure(p)?.normals().chain(surface_measure(q)?.normals()).collect();
    if pad {
        rays.extend(standard_rays());
    }
    Fan::new(rays)
}

/// `aᵢ = h_P(uᵢ)`.
pub fn divisor_from_polytope(fan: &Fan, p: &LatticePolygon) -> ToricDivisor {
    ToricDivisor::new(fan.rays.iter().map(|&u| support(p, u)).collect())
}

fn ovf() -> ToricError {
    ToricError::Geometry(GeomError::Overflow("divisor polytope"))
}

/// A vertex `(x / den, y / den)` of `P_D`, `den > 0`.
type RationalVertex = (i128, i128, i128);

/// Vertices of `P_D` (with repeats); empty when `P_D` is empty.
fn polygon_vertices(fan: &Fan, d: &ToricDivisor) -> Result<Vec<RationalVertex>> {
    d.check_len(fan)?;
    let n = fan.rays.len();
    let a = &d.coefficients;
    let mut verts = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let (u, w) = (fan.rays[i], fan.rays[j]);
            let mut den = u.cross(w);
            if den == 0 {
                continue;
            }
            // Cramer's rule for ⟨x, u⟩ = aᵢ, ⟨x, w⟩ = aⱼ.
            let m = |c: i128, k: i64| c.checked_mul(k as i128).ok_or_else(ovf);
            let mut x = m(a[i], w.y)?.checked_sub(m(a[j], u.y)?).ok_or_else(ovf)?;
            let mut y = m(a[j], u.x)?.checked_sub(m(a[i], w.x)?).ok_or_else(ovf)?;
            if den < 0 {
                (x, y, den) = (-x, -y, -den);
            }
            let mut feasible = true;
            for (r, &ak) in fan.rays.iter().zip(a) {
                let lhs = m(x, r.x)?.checked_add(m(y, r.y)?).ok_or_else(ovf)?;
                if lhs > ak.checked_mul(den).ok_or_else(ovf)? {
                    feasible = false;
                    break;
                }
            }
            if feasible {
                verts.push((x, y, den));
            }
        }
    }
    Ok(verts)
}

fn rational_string(num: i128, den: i128) -> String {
    let g = num_integer::gcd(num, den);
    if den / g == 1 {
        (num / g).to_string()
    } else {
        format!("{}/{}", num / g, den / g)
    }
}

/// `P_D = {x : ⟨x, uᵢ⟩ ≤ aᵢ for all i}`; must be a non-empty lattice polygon.
pub fn polytope_from_divisor(fan: &Fan, d: &ToricDivisor) -> Result<LatticePolygon> {
    let verts = polygon_vertices(fan, d)?;
    if verts.is_empty() {
        return Err(ToricError::EmptyPolytope);
    }
    let mut lattice = Vec::with_capacity(verts.len());
    for &(x, y, den) in &verts {
        if x % den != 0 || y % den != 0 {
            return Err(ToricError::NonLatticeVertex(rational_string(x, den), rational_string(y, den)));
        }
        let to_i64 = |c: i128| i64::try_from(c / den).map_err(|_| ovf());
        lattice.push(LatticeVector::new(to_i64(x)?, to_i64(y)?));
    }
    Ok(convex_hull(&lattice)?)
}

/// `P_D` when `D` is globally generated, `None` otherwise.
fn generated_polytope(fan: &Fan, d: &ToricDivisor) -> Result<Option<LatticePolygon>> {
    match polytope_from_divisor(fan, d) {
        Ok(p) => {
            let tight = fan.rays.iter().zip(&d.coefficients).all(|(&u, &a)| support(&p, u) == a);
            Ok(tight.then_some(p))
        }
        Err(ToricError::EmptyPolytope | ToricError::NonLatticeVertex(..)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Every coefficient is attained by `P_D`: `h_{P_D}(uᵢ) = aᵢ`.
///
/// An empty `P_D` or one with a non-lattice vertex is reported as `false`.
pub fn is_globally_generated(fan: &Fan, d: &ToricDivisor) -> Result<bool> {
    Ok(generated_polytope(fan, d)?.is_some())
}

/// `(D, E) = V(P_D, P_E)` for globally generated `D`, `E`.
pub fn toric_intersection(fan: &Fan, d: &ToricDivisor, e: &ToricDivisor) -> Result<i128> {
    let pd = generated_polytope(fan, d)?.ok_or(ToricError::NotGloballyGenerated)?;
    let pe = generated_polytope(fan, e)?.ok_or(ToricError::NotGloballyGenerated)?;
    Ok(mixed_volume_polarization(&pd, &pe)?)
}

/// Inserts rays until every cone has determinant 1. A cone `(u, w)` with
/// `det = d > 1` is split by the unique `v = (p u + w) / d` with `0 < p < d`,
/// which has `det(u, v) = 1` and leaves `det(v, w) = p < d`.
pub fn unimodular_refine(fan: &Fan) -> Fan {
    let mut rays = Vec::with_capacity(fan.rays.len());
    for (u, w) in fan.cones() {
        rays.push(u);
        let mut left = u;
        loop {
            let det = left.cross(w);
            if det == 1 {
                break;
            }
            // With s·left.x + t·left.y = 1, the vector (-t, s) completes
            // `left` to a basis and w = α·left + det·(-t, s) with α = s·w.x + t·w.y.
            let eg = num_integer::Integer::extended_gcd(&(left.x as i128), &(left.y as i128));
            let (s, t) = if eg.gcd == 1 { (eg.x, eg.y) } else { (-eg.x, -eg.y) };
            let alpha = s * w.x as i128 + t * w.y as i128;
            let p = (-alpha).rem_euclid(det);
            let next = LatticeVector::new(
                ((p * left.x as i128 + w.x as i128) / det) as i64,
                ((p * left.y as i128 + w.y as i128) / det) as i64,
            );
            debug_assert_eq!(left.cross(next), 1);
            rays.push(next);
            left = next;
        }
    }
    Fan::new(rays).expect("refinement of a complete fan is complete")
}

/// Lattice points of `P_D` in `(x, y)` order: exponents of a basis of global
/// sections.
pub fn section_basis(fan: &Fan, d: &ToricDivisor) -> Result<Vec<LatticeVector>> {
    Ok(generated_polytope(fan, d)?.ok_or(ToricError::NotGloballyGenerated)?.lattice_points())
}

/// Fan with two divisors realizing `[[A, B], [B, C]]` as intersection matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToricRealization {
    pub fan: Fan,
    #[serde(rename = "D")]
    pub d: ToricDivisor,
    #[serde(rename = "E")]
    pub e: ToricDivisor,
    pub intersection_matrix: [[i128; 2]; 2],
    pub smooth: bool,
    pub padded: bool,
    pub polygons: RealizationResult,
}

pub fn realize_toric(target: VolumeTriple, smooth: bool) -> Result<ToricRealization> {
    let polygons = construct::realize(target)?;
    let (p, q) = (&polygons.p, &polygons.q);
    let padded = p.dimension() < 2 && q.dimension() < 2;
    let mut fan = normal_fan_union(p, q, padded)?;
    if smooth {
        fan = unimodular_refine(&fan);
    }
    let d = divisor_from_polytope(&fan, p);
    let e = divisor_from_polytope(&fan, q);
    let pd = generated_polytope(&fan, &d)?.ok_or(ToricError::NotGloballyGenerated)?;
    let pe = generated_polytope(&fan, &e)?.ok_or(ToricError::NotGloballyGenerated)?;
    if pd != *p || pe != *q {
        return Err(ToricError::Internal("divisor polytopes differ from the realizing pair".into()));
    }
    let dd = normalized_volume(&pd)?;
    let de = mixed_volume_polarization(&pd, &pe)?;
    let ee = normalized_volume(&pe)?;
    Ok(ToricRealization {
        fan,
        d,
        e,
        intersection_matrix: [[dd, de], [de, ee]],
        smooth,
        padded,
        polygons,
    })
}
