//! Scalar abstraction enforcing the per-ray arithmetic budget.
//!
//! The inner loop of the solver — culling, triangle intersection, segment
//! extraction, and velocity accumulation — is written generically over
//! [`Scalar`], a trait that exposes *only* addition, subtraction,
//! multiplication, division, negation, comparison, and conversion from
//! `f64` constants. There is deliberately no square root, no trigonometry,
//! and no exponentiation: code written against this trait cannot call them,
//! so the "no sqrt/trig per ray" budget is checked by the compiler. The
//! acceptance suite additionally instantiates the kernels with a counting
//! scalar type to audit operation counts at run time.
//!
//! The `f64` implementation is a transparent passthrough; with inlining the
//! generic kernels monomorphize to exactly the code one would write by hand.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Arithmetic available to the solver's per-ray hot path.
pub trait Scalar:
    Copy
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Embed an `f64` constant (tolerances, factors of one half, table
    /// entries). This is a conversion, not an arithmetic operation.
    fn from_f64(x: f64) -> Self;

    #[inline]
    fn zero() -> Self {
        Self::from_f64(0.0)
    }

    #[inline]
    fn one() -> Self {
        Self::from_f64(1.0)
    }
}

impl Scalar for f64 {
    #[inline(always)]
    fn from_f64(x: f64) -> Self {
        x
    }
}

/// Dot product on raw 3-arrays of any scalar.
#[inline(always)]
pub fn dot3<S: Scalar>(a: [S; 3], b: [S; 3]) -> S {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Cross product on raw 3-arrays of any scalar.
#[inline(always)]
pub fn cross3<S: Scalar>(a: [S; 3], b: [S; 3]) -> [S; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

#[inline(always)]
pub fn sub3<S: Scalar>(a: [S; 3], b: [S; 3]) -> [S; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline(always)]
pub fn add3<S: Scalar>(a: [S; 3], b: [S; 3]) -> [S; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[inline(always)]
pub fn scale3<S: Scalar>(a: [S; 3], s: S) -> [S; 3] {
    [a[0] * s, a[1] * s, a[2] * s]
}
