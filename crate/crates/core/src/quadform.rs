//! Integer binary quadratic forms `a x² + 2b xy + c y²` and the reduction of
//! indefinite forms with positive coefficients to the shape
//! `a x² + 2b xy - c y²` with `a, b, c ≥ 0` and `a + 2b - c > 0`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuadFormError {
    #[error("matrix has determinant {0}, expected ±1")]
    NotUnimodular(i128),
    #[error("reduction needs positive coefficients, got ({a}, {b}, {c})")]
    NonPositiveCoefficient { a: i128, b: i128, c: i128 },
    #[error("definite form: b² - ac = {0} < 0")]
    NegativeDiscriminant(i128),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("reduction invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, QuadFormError>;

fn ovf(what: &'static str) -> QuadFormError {
    QuadFormError::Overflow(what)
}

fn mul(a: i128, b: i128, what: &'static str) -> Result<i128> {
    a.checked_mul(b).ok_or(ovf(what))
}

fn add(a: i128, b: i128, what: &'static str) -> Result<i128> {
    a.checked_add(b).ok_or(ovf(what))
}

fn sub(a: i128, b: i128, what: &'static str) -> Result<i128> {
    a.checked_sub(b).ok_or(ovf(what))
}

/// `a x² + 2b xy + c y²`. JSON keys are `A`, `B`, `C`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadForm {
    #[serde(rename = "A")]
    pub a: i128,
    #[serde(rename = "B")]
    pub b: i128,
    #[serde(rename = "C")]
    pub c: i128,
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x^2 + 2*{}xy + {}y^2", self.a, self.b, self.c)
    }
}

impl QuadForm {
    pub const fn new(a: i128, b: i128, c: i128) -> Self {
        Self { a, b, c }
    }

    pub fn eval(&self, x: i128, y: i128) -> Result<i128> {
        let xx = mul(mul(self.a, x, "form evaluation")?, x, "form evaluation")?;
        let xy = mul(mul(2 * self.b, x, "form evaluation")?, y, "form evaluation")?;
        let yy = mul(mul(self.c, y, "form evaluation")?, y, "form evaluation")?;
        add(add(xx, xy, "form evaluation")?, yy, "form evaluation")
    }

    /// `k = b² - ac`, a quarter of the discriminant.
    pub fn discriminant(&self) -> Result<i128> {
        sub(mul(self.b, self.b, "discriminant")?, mul(self.a, self.c, "discriminant")?, "discriminant")
    }

    /// `k ≥ 0`, including the semidefinite boundary.
    pub fn is_indefinite(&self) -> Result<bool> {
        Ok(self.discriminant()? >= 0)
    }
}

/// Integer 2×2 matrix `[[x1, x2], [y1, y2]]` of determinant ±1, i.e. with
/// columns `(x1, y1)` and `(x2, y2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix")]
pub struct UnimodularMatrix {
    x1: i128,
    x2: i128,
    y1: i128,
    y2: i128,
}

#[derive(Deserialize)]
struct RawMatrix {
    x1: i128,
    x2: i128,
    y1: i128,
    y2: i128,
}

impl TryFrom<RawMatrix> for UnimodularMatrix {
    type Error = QuadFormError;

    fn try_from(r: RawMatrix) -> Result<Self> {
        Self::new(r.x1, r.x2, r.y1, r.y2)
    }
}

impl UnimodularMatrix {
    pub const IDENTITY: Self = Self { x1: 1, x2: 0, y1: 0, y2: 1 };
    pub const SWAP: Self = Self { x1: 0, x2: 1, y1: 1, y2: 0 };

    pub fn new(x1: i128, x2: i128, y1: i128, y2: i128) -> Result<Self> {
        let det = sub(mul(x1, y2, "determinant")?, mul(x2, y1, "determinant")?, "determinant")?;
        if det != 1 && det != -1 {
            return Err(QuadFormError::NotUnimodular(det));
        }
        Ok(Self { x1, x2, y1, y2 })
    }

    /// `[[s, 1], [1, 0]]`, the inverse of the substitution `(x, y) ↦ (y, x - s y)`.
    fn division_step_inverse(s: i128) -> Self {
        Self { x1: s, x2: 1, y1: 1, y2: 0 }
    }

    pub fn det(&self) -> i128 {
        self.x1 * self.y2 - self.x2 * self.y1
    }

    pub fn first_column(&self) -> (i128, i128) {
        (self.x1, self.y1)
    }

    pub fn second_column(&self) -> (i128, i128) {
        (self.x2, self.y2)
    }

    pub fn entries(&self) -> [[i128; 2]; 2] {
        [[self.x1, self.x2], [self.y1, self.y2]]
    }

    /// Matrix product `self · rhs`.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        let dot = |a: i128, b: i128, c: i128, d: i128| -> Result<i128> {
            add(mul(a, b, "matrix product")?, mul(c, d, "matrix product")?, "matrix product")
        };
        Ok(Self {
            x1: dot(self.x1, rhs.x1, self.x2, rhs.y1)?,
            x2: dot(self.x1, rhs.x2, self.x2, rhs.y2)?,
            y1: dot(self.y1, rhs.x1, self.y2, rhs.y1)?,
            y2: dot(self.y1, rhs.x2, self.y2, rhs.y2)?,
        })
    }
}

/// The form `F(G(x, y))`: `a' = F(x1, y1)`, `c' = F(x2, y2)` and
/// `b' = a x1 x2 + b (x1 y2 + x2 y1) + c y1 y2`.
pub fn apply_unimodular(f: &QuadForm, g: &UnimodularMatrix) -> Result<QuadForm> {
    const W: &str = "unimodular change of variables";
    let a = f.eval(g.x1, g.y1)?;
    let c = f.eval(g.x2, g.y2)?;
    let b = add(
        add(
            mul(mul(f.a, g.x1, W)?, g.x2, W)?,
            mul(f.b, add(mul(g.x1, g.y2, W)?, mul(g.x2, g.y1, W)?, W)?, W)?,
            W,
        )?,
        mul(mul(f.c, g.y1, W)?, g.y2, W)?,
        W,
    )?;
    Ok(QuadForm { a, b, c })
}

/// `a x² + 2b xy - c y²` with `a, b, c ≥ 0`. Note the implicit minus sign on `c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ReducedForm {
    pub a: i128,
    pub b: i128,
    pub c: i128,
}

impl ReducedForm {
    pub const SIGN_CONVENTION: &'static str = "a*x^2 + 2*b*x*y - c*y^2";

    pub fn to_signed(self) -> QuadForm {
        QuadForm::new(self.a, self.b, -self.c)
    }

    /// `f(1, 1) = a + 2b - c`.
    pub fn value_at_one_one(&self) -> i128 {
        self.a + 2 * self.b - self.c
    }
}

/// Record of the division steps taken by [`reduce`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionTrace {
    /// Whether the variables were swapped first because `A < C`.
    pub swapped: bool,
    /// Quotients `s₁, …, sₙ` in order; the last one is `s'` when adjusted.
    pub steps: Vec<i128>,
    /// Whether the last quotient was lowered to the smallest `s'` with `F(1, -s') ≤ 0`.
    pub last_step_adjusted: bool,
}

/// Output of [`reduce`]: `apply_unimodular(reduced.to_signed(), transform)`
/// is the input form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionResult {
    pub reduced: ReducedForm,
    pub transform: UnimodularMatrix,
    pub trace: ReductionTrace,
}

impl ReductionResult {
    /// Checks every postcondition of the reduction against `original`.
    pub fn check(&self, original: &QuadForm) -> Result<()> {
        let r = &self.reduced;
        let fail = |m: &str| Err(QuadFormError::Internal(m.to_owned()));
        if r.a < 0 || r.b < 0 || r.c < 0 {
            return fail("negative reduced coefficient");
        }
        if r.value_at_one_one() <= 0 {
            return fail("f(1,1) <= 0");
        }
        let g = &self.transform;
        if g.det().abs() != 1 {
            return fail("transform not unimodular");
        }
        if !(g.x1 >= g.y1 && g.y1 >= 0 && g.x2 >= g.y2 && g.y2 >= 0) {
            return fail("transform columns violate x_i >= y_i >= 0");
        }
        if r.to_signed().discriminant()? != original.discriminant()? {
            return fail("discriminant changed");
        }
        if apply_unimodular(&r.to_signed(), g)? != *original {
            return fail("back-transform does not reproduce the input");
        }
        Ok(())
    }
}

/// Reduce an indefinite form with positive coefficients.
///
/// Swap variables when `A < C`; then divide `b = s c + r` and substitute
/// `(x, y) ↦ (y, x - s y)` while `c > 0`. If the final form has `f(1,1) ≤ 0`
/// the last step is redone with the smallest `s'` such that the previous form
/// satisfies `F(1, -s') ≤ 0`.
pub fn reduce(form: &QuadForm) -> Result<ReductionResult> {
    let QuadForm { a, b, c } = *form;
    if a <= 0 || b <= 0 || c <= 0 {
        return Err(QuadFormError::NonPositiveCoefficient { a, b, c });
    }
    let k = form.discriminant()?;
    if k < 0 {
        return Err(QuadFormError::NegativeDiscriminant(k));
    }

    let swapped = a < c;
    let mut current = if swapped { QuadForm::new(c, b, a) } else { *form };
    let mut steps = Vec::new();
    // (form before the step, quotient) for the most recent step.
    let mut last: Option<(QuadForm, i128)> = None;

    while current.c > 0 {
        let prev = current;
        let s = prev.b / prev.c;
        if s < 1 {
            return Err(QuadFormError::Internal(format!("division quotient {s} < 1 at {prev}")));
        }
        current = QuadForm::new(prev.c, prev.b - s * prev.c, prev.eval(1, -s)?);
        if current.c >= prev.c {
            return Err(QuadFormError::Internal("c did not strictly decrease".into()));
        }
        steps.push(s);
        last = Some((prev, s));
    }

    let (prev, s) = last.expect("c > 0 on entry, so at least one step runs");
    let mut last_step_adjusted = false;
    if current.a + 2 * current.b + current.c <= 0 {
        let s_min = smallest_nonpositive_shift(&prev, s)?;
        if s_min != s {
            current = QuadForm::new(prev.c, prev.b - s_min * prev.c, prev.eval(1, -s_min)?);
            *steps.last_mut().expect("non-empty") = s_min;
            last_step_adjusted = true;
        }
    }

    let mut transform = if swapped { UnimodularMatrix::SWAP } else { UnimodularMatrix::IDENTITY };
    for &s in &steps {
        transform = UnimodularMatrix::division_step_inverse(s).mul(&transform)?;
    }
    let result = ReductionResult {
        reduced: ReducedForm { a: current.a, b: current.b, c: -current.c },
        transform,
        trace: ReductionTrace { swapped, steps, last_step_adjusted },
    };
    result.check(form)?;
    Ok(result)
}

/// Smallest `t ∈ [1, s]` with `F(1, -t) ≤ 0`, given `F(1, 0) > 0` and
/// `F(1, -s) ≤ 0`. `F(1, -t)` is a convex quadratic in `t`, so the predicate
/// is monotone on `[0, s]` and bisection finds the threshold.
fn smallest_nonpositive_shift(f: &QuadForm, s: i128) -> Result<i128> {
    let (mut lo, mut hi) = (0i128, s);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if f.eval(1, -mid)? <= 0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(x1: i128, x2: i128, y1: i128, y2: i128) -> UnimodularMatrix {
        UnimodularMatrix::new(x1, x2, y1, y2).unwrap()
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(QuadForm::new(2, 3, 2).discriminant().unwrap(), 5);
        assert_eq!(QuadForm::new(1, 1, 1).discriminant().unwrap(), 0);
        assert_eq!(QuadForm::new(1, 0, 1).discriminant().unwrap(), -1);
    }

    #[test]
    fn apply_examples() {
        let f = QuadForm::new(7, -3, 11);
        assert_eq!(apply_unimodular(&f, &UnimodularMatrix::IDENTITY).unwrap(), f);
        let g = QuadForm::new(2, 1, -2);
        assert_eq!(apply_unimodular(&g, &m(1, 1, 1, 0)).unwrap(), QuadForm::new(2, 3, 2));
        assert_eq!(apply_unimodular(&f, &UnimodularMatrix::SWAP).unwrap(), QuadForm::new(11, -3, 7));
    }

    #[test]
    fn non_unimodular_rejected() {
        assert_eq!(UnimodularMatrix::new(2, 0, 0, 1), Err(QuadFormError::NotUnimodular(2)));
        assert!(serde_json::from_str::<UnimodularMatrix>(r#"{"x1":1,"x2":1,"y1":1,"y2":1}"#).is_err());
    }

    #[test]
    fn reduce_examples() {
        let r = reduce(&QuadForm::new(2, 3, 2)).unwrap();
        assert_eq!(r.reduced, ReducedForm { a: 2, b: 1, c: 2 });
        assert_eq!(r.transform, m(1, 1, 1, 0));

        let r = reduce(&QuadForm::new(1, 1, 1)).unwrap();
        assert_eq!(r.reduced, ReducedForm { a: 1, b: 0, c: 0 });
        assert_eq!(r.transform, m(1, 1, 1, 0));

        let r = reduce(&QuadForm::new(5, 5, 5)).unwrap();
        assert_eq!(r.reduced, ReducedForm { a: 5, b: 0, c: 0 });
        assert_eq!(r.transform, m(1, 1, 1, 0));
    }

    #[test]
    fn reduce_swaps_when_a_less_than_c() {
        let f = QuadForm::new(1, 3, 4);
        let r = reduce(&f).unwrap();
        assert!(r.trace.swapped);
        r.check(&f).unwrap();
    }

    #[test]
    fn reduce_adjusts_last_step() {
        // (3, 4, 5) after the swap is (5, 4, 3): 4 = 1·3 + 1 gives (3, 1, F(1,-1) = 0),
        // f(1,1) = 5 > 0. Scan a range to hit adjusted cases and check them all.
        let mut adjusted = 0;
        for a in 1..40 {
            for b in 1..40 {
                for c in 1..40 {
                    let f = QuadForm::new(a, b, c);
                    if f.discriminant().unwrap() < 0 {
                        continue;
                    }
                    let r = reduce(&f).unwrap();
                    r.check(&f).unwrap();
                    adjusted += usize::from(r.trace.last_step_adjusted);
                }
            }
        }
        assert!(adjusted > 0);
    }

    #[test]
    fn reduce_rejects_bad_input() {
        assert!(matches!(
            reduce(&QuadForm::new(0, 1, 1)),
            Err(QuadFormError::NonPositiveCoefficient { .. })
        ));
        assert_eq!(reduce(&QuadForm::new(1, 1, 2)), Err(QuadFormError::NegativeDiscriminant(-1)));
    }

    #[test]
    fn composition_law() {
        let f = QuadForm::new(3, -1, 4);
        let g = m(2, 1, 1, 1);
        let h = m(1, -3, 0, 1);
        let lhs = apply_unimodular(&apply_unimodular(&f, &g).unwrap(), &h).unwrap();
        assert_eq!(lhs, apply_unimodular(&f, &g.mul(&h).unwrap()).unwrap());
    }

    #[test]
    fn large_coefficients() {
        let f = QuadForm::new(1_000_000_000, 999_999_999, 999_999_997);
        let r = reduce(&f).unwrap();
        r.check(&f).unwrap();
    }
}
