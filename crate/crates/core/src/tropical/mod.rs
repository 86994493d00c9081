//! Planar tropical curves `V_f` of min-plus polynomials
//! `f(x, y) = min { c_{a,b} + a x + b y }`, their transversal intersection
//! numbers, and realization of a volume triple as intersection data.
//!
//! All arithmetic is exact: lifts are rationals, curve vertices are rational
//! points, and transversality is decided without tolerances.

mod curve;
mod intersect;
mod subdivision;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::construct::{self, ConstructError, RealizationResult};
use crate::geom2d::{GeomError, LatticePolygon, LatticeVector, VolumeTriple};

pub use curve::{tropical_curve, CurveEdge, CurveLine, CurveRay, TropicalCurve};
pub use intersect::{intersection_number, self_intersection, transversal_intersections, LocalIntersection};
pub use subdivision::{regular_subdivision, EdgeKind, RegularSubdivision, SubdivisionEdge};

pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TropicalError {
    #[error("tropical polynomial needs a non-empty support")]
    EmptySupport,
    #[error("support point {0} appears twice")]
    DuplicateSupport(LatticeVector),
    #[error("a monomial has no tropical curve")]
    ZeroDimensionalNewtonPolygon,
    #[error("curves do not intersect transversally: {0}")]
    NotTransversal(String),
    #[error("no transversal configuration after {0} attempts")]
    RetryCapExhausted(u32),
    #[error("lift arithmetic overflowed i128")]
    Overflow,
    #[error("tropical invariant violated: {0}")]
    Internal(String),
    #[error(transparent)]
    Geometry(#[from] GeomError),
    #[error(transparent)]
    Construct(#[from] ConstructError),
}

pub type Result<T> = std::result::Result<T, TropicalError>;

/// A point of `Q²`. Serialized as `["n/d", "n/d"]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatPoint {
    pub x: Rational,
    pub y: Rational,
}

impl RatPoint {
    pub fn new(x: Rational, y: Rational) -> Self {
        Self { x, y }
    }

    pub fn from_lattice(v: LatticeVector) -> Self {
        Self { x: int(v.x), y: int(v.y) }
    }

    pub fn add(&self, other: &RatPoint) -> RatPoint {
        RatPoint::new(&self.x + &other.x, &self.y + &other.y)
    }

    pub fn sub(&self, other: &RatPoint) -> RatPoint {
        RatPoint::new(&self.x - &other.x, &self.y - &other.y)
    }

    pub fn cross(&self, other: &RatPoint) -> Rational {
        &self.x * &other.y - &self.y * &other.x
    }

    pub fn dot(&self, other: &RatPoint) -> Rational {
        &self.x * &other.x + &self.y * &other.y
    }

    pub fn to_f64(&self) -> (f64, f64) {
        use num_traits::ToPrimitive;
        (self.x.to_f64().unwrap_or(f64::NAN), self.y.to_f64().unwrap_or(f64::NAN))
    }
}

impl fmt::Display for RatPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", rat_string(&self.x), rat_string(&self.y))
    }
}

pub(crate) fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// `"n/d"` with the denominator always present.
pub fn rat_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn parse_rat(s: &str) -> std::result::Result<Rational, String> {
    Rational::from_str(s).map_err(|e| format!("bad rational {s:?}: {e}"))
}

impl Serialize for RatPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [rat_string(&self.x), rat_string(&self.y)].serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [x, y] = <[String; 2]>::deserialize(d)?;
        Ok(RatPoint::new(parse_rat(&x).map_err(de::Error::custom)?, parse_rat(&y).map_err(de::Error::custom)?))
    }
}

/// One term `c + a x + b y` of a tropical polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub point: LatticeVector,
    pub lift: Rational,
}

/// `f(x, y) = min over terms of (lift + ⟨point, (x, y)⟩)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalPolynomial {
    terms: Vec<Term>,
}

impl TropicalPolynomial {
    pub fn new(terms: Vec<Term>) -> Result<Self> {
        if terms.is_empty() {
            return Err(TropicalError::EmptySupport);
        }
        let mut seen: Vec<LatticeVector> = terms.iter().map(|t| t.point).collect();
        seen.sort_unstable();
        if let Some(w) = seen.windows(2).find(|w| w[0] == w[1]) {
            return Err(TropicalError::DuplicateSupport(w[0]));
        }
        Ok(Self { terms })
    }

    /// Convenience constructor with integer lifts.
    pub fn from_integer_lifts(terms: &[((i64, i64), i64)]) -> Result<Self> {
        Self::new(
            terms
                .iter()
                .map(|&((x, y), c)| Term { point: LatticeVector::new(x, y), lift: int(c) })
                .collect(),
        )
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn support(&self) -> Vec<LatticeVector> {
        self.terms.iter().map(|t| t.point).collect()
    }

    pub fn newton_polygon(&self) -> LatticePolygon {
        crate::geom2d::convex_hull(&self.support()).expect("support is non-empty")
    }

    /// `f(x + x₀, y + y₀)`: lifts change by the linear function `a x₀ + b y₀`,
    /// and the curve moves by `-(x₀, y₀)`.
    pub fn shifted(&self, shift: &RatPoint) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                point: t.point,
                lift: &t.lift + RatPoint::from_lattice(t.point).dot(shift),
            })
            .collect();
        Self { terms }
    }

    /// Lifts rescaled by a common positive denominator to exact integers.
    fn integer_lifts(&self) -> Result<Vec<i128>> {
        let mut denom = BigInt::one();
        for t in &self.terms {
            denom = num_integer::Integer::lcm(&denom, t.lift.denom());
        }
        self.terms
            .iter()
            .map(|t| {
                let scaled = (&t.lift * Rational::from_integer(denom.clone())).to_integer();
                i128::try_from(scaled).map_err(|_| TropicalError::Overflow)
            })
            .collect()
    }

    fn common_denominator(&self) -> BigInt {
        self.terms
            .iter()
            .fold(BigInt::one(), |acc, t| num_integer::Integer::lcm(&acc, t.lift.denom()))
    }
}

/// How "generic" lifts and translations are drawn: numerators uniform in
/// `[-numerator_bound, numerator_bound]` over a fixed denominator, redrawn on
/// a non-transversal configuration at most `retry_cap` times.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftSampler {
    pub numerator_bound: i64,
    pub denominator: i64,
    pub retry_cap: u32,
}

impl Default for LiftSampler {
    fn default() -> Self {
        Self { numerator_bound: 1_000_000, denominator: 1_000, retry_cap: 64 }
    }
}

impl LiftSampler {
    pub fn with_retry_cap(self, retry_cap: u32) -> Self {
        Self { retry_cap, ..self }
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> Rational {
        let n = rng.random_range(-self.numerator_bound..=self.numerator_bound);
        Rational::new(BigInt::from(n), BigInt::from(self.denominator))
    }

    fn draw_point(&self, rng: &mut ChaCha8Rng) -> RatPoint {
        RatPoint::new(self.draw(rng), self.draw(rng))
    }

    /// A tropical polynomial supported on `support` with random lifts.
    pub fn polynomial(&self, support: &[LatticeVector], rng: &mut ChaCha8Rng) -> Result<TropicalPolynomial> {
        TropicalPolynomial::new(support.iter().map(|&p| Term { point: p, lift: self.draw(rng) }).collect())
    }
}

/// Curve pair realizing a volume triple as intersection numbers.
#[derive(Clone, Debug)]
pub struct TropicalRealization {
    pub polygons: RealizationResult,
    pub f: TropicalPolynomial,
    pub g: TropicalPolynomial,
    pub curve_f: TropicalCurve,
    pub curve_g: TropicalCurve,
    /// `(V_f, V_f)`.
    pub self_f: i128,
    /// `(V_f, V_g)`.
    pub mutual: i128,
    /// `(V_g, V_g)`.
    pub self_g: i128,
    /// Lift draws used before the pair intersected transversally.
    pub attempts: u32,
    pub seed: u64,
    pub sampler: LiftSampler,
}

impl TropicalRealization {
    pub fn numbers(&self) -> VolumeTriple {
        VolumeTriple::new(self.self_f, self.mutual, self.self_g)
    }
}

/// The curve of a polynomial supported on `support`, or the empty curve when
/// the support is a single point.
fn curve_or_empty(f: &TropicalPolynomial) -> Result<TropicalCurve> {
    match tropical_curve(f) {
        Err(TropicalError::ZeroDimensionalNewtonPolygon) => Ok(TropicalCurve::empty(f.newton_polygon())),
        other => other,
    }
}

/// Tropical curves with `(V_f, V_f) = A`, `(V_f, V_g) = B`, `(V_g, V_g) = C`.
///
/// Supports are all lattice points of the realizing polygons. A polygon that
/// is a single point yields the empty curve (a monomial).
pub fn realize_tropical(target: VolumeTriple, seed: u64, sampler: &LiftSampler) -> Result<TropicalRealization> {
    let polygons = construct::realize(target)?;
    let support_p = polygons.p.lattice_points();
    let support_q = polygons.q.lattice_points();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    for attempt in 1..=sampler.retry_cap {
        let f = sampler.polynomial(&support_p, &mut rng)?;
        let g = sampler.polynomial(&support_q, &mut rng)?;
        let curve_f = curve_or_empty(&f)?;
        let curve_g = curve_or_empty(&g)?;
        let mutual = match intersection_number(&curve_f, &curve_g) {
            Ok(n) => n,
            Err(TropicalError::NotTransversal(_)) => continue,
            Err(e) => return Err(e),
        };
        let self_f = self_intersection(&curve_f, rng.random(), sampler)?;
        let self_g = self_intersection(&curve_g, rng.random(), sampler)?;
        return Ok(TropicalRealization {
            polygons,
            f,
            g,
            curve_f,
            curve_g,
            self_f,
            mutual,
            self_g,
            attempts: attempt,
            seed,
            sampler: *sampler,
        });
    }
    Err(TropicalError::RetryCapExhausted(sampler.retry_cap))
}
