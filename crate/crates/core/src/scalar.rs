//! Scalar abstraction for the real-valued parts of the toolkit.
//!
//! Statistics, readability formulas, classifier weights, and rate summaries
//! are generic over [`Real`] so they run at `f32`, `f64`, or any other
//! float-like type. Counts stay `usize` everywhere; they are converted at
//! the point where a ratio or score is formed.

use std::fmt;
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssignOps};

/// Floating-point scalar usable throughout the crate.
///
/// Blanket-implemented for every type with the listed bounds, which covers
/// `f32` and `f64` out of the box.
pub trait Real:
    Float + FromPrimitive + NumAssignOps + Sum<Self> + fmt::Debug + fmt::Display + Send + Sync
{
}

impl<T> Real for T where
    T: Float + FromPrimitive + NumAssignOps + Sum<T> + fmt::Debug + fmt::Display + Send + Sync
{
}

/// Converts an `f64` constant into `F`.
///
/// Panics if the value is not representable, which cannot happen for the
/// finite literals this crate feeds it.
pub fn real<F: Real>(value: f64) -> F {
    F::from_f64(value).expect("finite constant must convert to the scalar type")
}

/// Converts a count into `F`, rounding if `F` cannot hold it exactly.
pub fn from_count<F: Real>(n: usize) -> F {
    F::from_usize(n).expect("count must convert to the scalar type")
}

/// `numerator / denominator` over counts; `0` when the denominator is zero.
pub fn ratio<F: Real>(numerator: usize, denominator: usize) -> F {
    if denominator == 0 {
        F::zero()
    } else {
        from_count::<F>(numerator) / from_count::<F>(denominator)
    }
}

/// Share of `part` in `whole` expressed in percent; `0` when `whole` is zero.
pub fn percent<F: Real>(part: usize, whole: usize) -> F {
    ratio::<F>(part, whole) * real(100.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn converts_to_both_float_widths() {
        assert_eq!(real::<f64>(206.835), 206.835);
        assert_eq!(real::<f32>(0.5), 0.5f32);
        assert_eq!(from_count::<f64>(42), 42.0);
    }

    #[test]
    fn ratio_handles_zero_denominator() {
        assert_eq!(ratio::<f64>(5, 0), 0.0);
        assert_eq!(ratio::<f64>(3, 4), 0.75);
        assert_eq!(percent::<f64>(31, 50), 62.0);
        assert_eq!(percent::<f64>(1, 0), 0.0);
    }
}
