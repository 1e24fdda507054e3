//! Scalar abstraction: everything in this crate is generic over a real
//! floating-point type implementing [`Real`].

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Floating-point scalar the whole crate is generic over (`f32`, `f64`).
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + core::fmt::Debug
    + core::fmt::Display
    + core::fmt::LowerExp
    + Send
    + Sync
    + 'static
{
    /// Shorthand for lossy conversion from an `f64` literal.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal must convert into the scalar type")
    }
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + NumAssign
        + core::fmt::Debug
        + core::fmt::Display
        + core::fmt::LowerExp
        + Send
        + Sync
        + 'static
{
}

/// Complex number in the reference plane C, as opposed to an embedded slice value.
pub type PlaneComplex<T> = Complex<T>;

/// Deterministic pairwise summation; the reduction tree depends only on `len`,
/// never on thread count or chunking.
pub fn pairwise_sum<T: Real>(xs: &[Complex<T>]) -> Complex<T> {
    match xs.len() {
        0 => Complex::new(T::zero(), T::zero()),
        1 => xs[0],
        2 => xs[0] + xs[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
        }
    }
}
