//! Scalar abstraction for the numeric kernel.
//!
//! Everything numeric in this crate is generic over [`Scalar`] so the same
//! model code runs in single or double precision. The crate root exposes
//! `f64` aliases, which is what the CLI uses throughout.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar the toolkit can compute with.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossless-enough conversion from an `f64` literal or option value.
    fn from_f64_lit(value: f64) -> Self {
        Self::from_f64(value).expect("finite f64 converts to scalar")
    }

    /// Conversion to `f64` for reporting.
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().expect("scalar converts to f64")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Shorthand used across the crate for converting literals and options.
pub fn cast<T: Scalar>(value: f64) -> T {
    T::from_f64_lit(value)
}
