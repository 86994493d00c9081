//! Realizing a triple `(A, B, C)` with `AC ≤ B²` as the normalized volume
//! polynomial of two lattice polygons, plus the continuous analogue with
//! axis-parallel rectangles.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom2d::{
    convex_hull, mixed_volume_polarization, mixed_volume_support, normalized_volume, GeomError,
    LatticePolygon, LatticeVector, VolumeTriple,
};
use crate::quadform::{reduce, QuadForm, QuadFormError, ReducedForm, ReductionResult};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstructError {
    #[error("coefficients must be non-negative, got {0}")]
    Negative(VolumeTriple),
    #[error("definite form: AC > B² for {0}")]
    Definite(VolumeTriple),
    #[error("case template precondition violated: {0}")]
    TemplatePrecondition(String),
    #[error("case template vertex {0} has a negative coordinate")]
    NegativeTemplateVertex(LatticeVector),
    #[error("real coefficients must be finite and non-negative")]
    InvalidReal,
    #[error("definite real form: AC - B² = {0} exceeds tolerance")]
    DefiniteReal(f64),
    #[error("realization of {target} failed verification: computed {computed:?}")]
    VerificationFailed { target: VolumeTriple, computed: Option<VolumeTriple> },
    #[error(transparent)]
    Geometry(#[from] GeomError),
    #[error(transparent)]
    Reduction(#[from] QuadFormError),
}

impl ConstructError {
    /// Whether the error is the caller's fault (bad triple) rather than an
    /// internal invariant failure.
    pub fn is_user_error(&self) -> bool {
        matches!(
            self,
            Self::Negative(_) | Self::Definite(_) | Self::InvalidReal | Self::DefiniteReal(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, ConstructError>;

/// Which construction produced a realization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseTag {
    /// `a`, `c` even.
    Case1,
    /// `a` even, `c` odd.
    Case2,
    /// `a` odd, `c` even.
    Case3,
    /// `a`, `c` odd.
    Case4,
    /// `A = 0 < B`: unit segment against a quadrilateral.
    DegenerateAZero,
    /// `C = 0 < A, B`: the `A = 0` construction with roles swapped.
    DegenerateCZero,
    /// `B = 0` and exactly one of `A`, `C` positive: one polygon is a point.
    DegenerateBothZero,
    /// `(0, 0, 0)`.
    PointCase,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl CaseTag {
    fn from_parity(a: i128, c: i128) -> Self {
        match (a % 2 == 0, c % 2 == 0) {
            (true, true) => Self::Case1,
            (true, false) => Self::Case2,
            (false, true) => Self::Case3,
            (false, false) => Self::Case4,
        }
    }
}

fn coord(v: i128) -> Result<i64> {
    i64::try_from(v).map_err(|_| ConstructError::Geometry(GeomError::Overflow("template vertex")))
}

fn lv(x: i128, y: i128) -> Result<LatticeVector> {
    Ok(LatticeVector::new(coord(x)?, coord(y)?))
}

/// Six template vertices for the parity case of `(a, c)`, before hulling.
///
/// With `d = ⌊a/2⌋`, `e = ⌊c/2⌋` the polygon is an `x` by `dx + by` rectangle
/// (widened by a right isosceles triangle when `a` is odd) with two corners cut
/// off, so its normalized area is `a x² + 2b xy - c y²`.
pub fn case_template(a: i128, b: i128, c: i128, x: i128, y: i128) -> Result<[LatticeVector; 6]> {
    if a < 0 || b < 0 || c < 0 {
        return Err(ConstructError::TemplatePrecondition(format!("negative coefficient ({a}, {b}, {c})")));
    }
    let ovf = || ConstructError::Geometry(GeomError::Overflow("template vertex"));
    let m = |p: i128, q: i128| p.checked_mul(q).ok_or_else(ovf);
    let add = |p: i128, q: i128| p.checked_add(q).ok_or_else(ovf);
    let at_one_one = add(a, m(2, b)?)? - c;
    if at_one_one <= 0 {
        return Err(ConstructError::TemplatePrecondition(format!("a + 2b - c = {at_one_one} <= 0")));
    }
    if !(x >= y && y >= 0) || x == 0 {
        return Err(ConstructError::TemplatePrecondition(format!("column ({x}, {y}) violates x >= y >= 0, x > 0")));
    }
    let (d, e) = (a / 2, c / 2);
    let tag = CaseTag::from_parity(a, c);
    let a_odd = matches!(tag, CaseTag::Case3 | CaseTag::Case4);
    let c_odd = matches!(tag, CaseTag::Case2 | CaseTag::Case4);

    let dx = m(d, x)?;
    let by = m(b, y)?;
    // Bottom-right corner: the rectangle is widened by x when a is odd.
    let base = add(dx, by)?;
    let right = if a_odd { add(base, x)? } else { base };
    // Top-right cut: outer normal (1, e), or (1, e + 1) when c is odd.
    let top_cut = if c_odd { e + 1 } else { e };
    let top_x = add(dx, m(b - top_cut, y)?)?;
    let shoulder = if a_odd { (add(base, y)?, x - y) } else { (base, x - y) };

    let verts = [
        lv(0, y)?,
        lv(0, x)?,
        lv(m(e, y)?, 0)?,
        lv(right, 0)?,
        lv(shoulder.0, shoulder.1)?,
        lv(top_x, x)?,
    ];
    if let Some(bad) = verts.iter().find(|v| v.x < 0 || v.y < 0) {
        return Err(ConstructError::NegativeTemplateVertex(*bad));
    }
    Ok(verts)
}

/// Hull of [`case_template`]; its normalized volume is `a x² + 2b xy - c y²`.
pub fn case_polygon(a: i128, b: i128, c: i128, x: i128, y: i128) -> Result<LatticePolygon> {
    Ok(convex_hull(&case_template(a, b, c, x, y)?)?)
}

/// A realization of a volume triple by two lattice polygons.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizationResult {
    #[serde(rename = "P")]
    pub p: LatticePolygon,
    #[serde(rename = "Q")]
    pub q: LatticePolygon,
    #[serde(rename = "case")]
    pub case_tag: CaseTag,
    #[serde(rename = "reduction")]
    pub certificate: Option<ReductionResult>,
}

/// Unique `(s, r)` with `C = sB - r`, `s ≥ 1` and `0 < r ≤ B`; needs `B > 0`.
fn split_by(b: i128, c: i128) -> (i128, i128) {
    let s = c / b + 1;
    (s, s * b - c)
}

/// `P` = unit segment, `Q = conv{(s,0), (1,0), (0,r), (0,B)}` for `(0, B, C)`, `B > 0`.
fn realize_a_zero(b: i128, c: i128) -> Result<(LatticePolygon, LatticePolygon)> {
    let (s, r) = split_by(b, c);
    let p = LatticePolygon::segment(LatticeVector::new(0, 0), LatticeVector::new(1, 0));
    let q = convex_hull(&[lv(s, 0)?, lv(1, 0)?, lv(0, r)?, lv(0, b)?])?;
    Ok((p, q))
}

/// `P` = origin, `Q = conv{(0,0), (C,0), (0,1)}` (a point when `C = 0`).
fn realize_point(c: i128) -> Result<(LatticePolygon, LatticePolygon)> {
    let origin = LatticeVector::ZERO;
    let q = if c == 0 {
        LatticePolygon::point(origin)
    } else {
        convex_hull(&[origin, lv(c, 0)?, lv(0, 1)?])?
    };
    Ok((LatticePolygon::point(origin), q))
}

/// Lattice polygons `P`, `Q` with `Vol₂(xP + yQ) = A x² + 2B xy + C y²`.
///
/// The result is verified with both mixed-volume routines before returning.
pub fn realize(target: VolumeTriple) -> Result<RealizationResult> {
    let VolumeTriple { a, b, c } = target;
    if a < 0 || b < 0 || c < 0 {
        return Err(ConstructError::Negative(target));
    }
    if !target.satisfies_minkowski() {
        return Err(ConstructError::Definite(target));
    }

    let (p, q, case_tag, certificate) = if a > 0 && c > 0 {
        let red = reduce(&QuadForm::new(a, b, c))?;
        let ReducedForm { a: ra, b: rb, c: rc } = red.reduced;
        let (x1, y1) = red.transform.first_column();
        let (x2, y2) = red.transform.second_column();
        let p = case_polygon(ra, rb, rc, x1, y1)?;
        let q = case_polygon(ra, rb, rc, x2, y2)?;
        (p, q, CaseTag::from_parity(ra, rc), Some(red))
    } else if b == 0 {
        if a == 0 && c == 0 {
            let (p, q) = realize_point(0)?;
            (p, q, CaseTag::PointCase, None)
        } else if a == 0 {
            let (p, q) = realize_point(c)?;
            (p, q, CaseTag::DegenerateBothZero, None)
        } else {
            let (q, p) = realize_point(a)?;
            (p, q, CaseTag::DegenerateBothZero, None)
        }
    } else if a == 0 {
        let (p, q) = realize_a_zero(b, c)?;
        (p, q, CaseTag::DegenerateAZero, None)
    } else {
        let (q, p) = realize_a_zero(b, a)?;
        (p, q, CaseTag::DegenerateCZero, None)
    };

    let report = verify(&p, &q, target);
    if !report.passed {
        return Err(ConstructError::VerificationFailed { target, computed: report.computed });
    }
    Ok(RealizationResult { p, q, case_tag, certificate })
}

/// Structured comparison of a polygon pair against a target triple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub target: VolumeTriple,
    /// `None` if a geometry routine failed (overflow).
    pub computed: Option<VolumeTriple>,
    pub polarization: Option<i128>,
    pub support_formula: Option<i128>,
    pub routines_agree: bool,
    pub a_matches: bool,
    pub b_matches: bool,
    pub c_matches: bool,
    pub passed: bool,
}

pub fn verify(p: &LatticePolygon, q: &LatticePolygon, target: VolumeTriple) -> VerificationReport {
    let polarization = mixed_volume_polarization(p, q).ok();
    let support_formula = mixed_volume_support(p, q).ok();
    let vol_p = normalized_volume(p).ok();
    let vol_q = normalized_volume(q).ok();
    let routines_agree = polarization.is_some() && polarization == support_formula;
    let computed = match (vol_p, polarization, vol_q) {
        (Some(a), Some(b), Some(c)) => Some(VolumeTriple::new(a, b, c)),
        _ => None,
    };
    let a_matches = vol_p == Some(target.a);
    let b_matches = routines_agree && polarization == Some(target.b);
    let c_matches = vol_q == Some(target.c);
    VerificationReport {
        target,
        computed,
        polarization,
        support_formula,
        routines_agree,
        a_matches,
        b_matches,
        c_matches,
        passed: a_matches && b_matches && c_matches,
    }
}

/// The rectangle `[0, width] × [0, height]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealBox {
    pub width: f64,
    pub height: f64,
}

impl RealBox {
    pub fn area(&self) -> f64 {
        self.width * self.height
    }

    /// Euclidean mixed area of two axis-parallel boxes: `(αδ + βγ) / 2`.
    pub fn mixed_area(&self, other: &RealBox) -> f64 {
        (self.width * other.height + self.height * other.width) / 2.0
    }
}

/// Relative slack allowed on `AC ≤ B²` before a real triple is rejected.
pub const REAL_DEFINITE_TOLERANCE: f64 = 1e-9;

/// Rectangles `K`, `L` with `vol₂(K) = A`, `v(K, L) = B`, `vol₂(L) = C`
/// (Euclidean, unnormalized).
pub fn realize_real(a: f64, b: f64, c: f64) -> Result<(RealBox, RealBox)> {
    if ![a, b, c].iter().all(|v| v.is_finite() && *v >= 0.0) {
        return Err(ConstructError::InvalidReal);
    }
    let excess = a * c - b * b;
    if excess > REAL_DEFINITE_TOLERANCE * (b * b).max(1.0) {
        return Err(ConstructError::DefiniteReal(excess));
    }
    let k = (b * b - a * c).max(0.0);
    let boxes = if a > 0.0 {
        let gamma = (b + k.sqrt()) / a;
        let delta = if gamma == 0.0 { 0.0 } else { c / gamma };
        (RealBox { width: 1.0, height: a }, RealBox { width: gamma, height: delta })
    } else if b > 0.0 {
        (RealBox { width: 1.0, height: 0.0 }, RealBox { width: c / (2.0 * b), height: 2.0 * b })
    } else {
        (RealBox { width: 0.0, height: 0.0 }, RealBox { width: 1.0, height: c })
    };
    Ok(boxes)
}

/// Degenerate-path parameters `(s, r)` exposed for tests and reports.
pub fn degenerate_split(b: i128, c: i128) -> Option<(i128, i128)> {
    (b > 0 && c >= 0).then(|| split_by(b, c))
}
