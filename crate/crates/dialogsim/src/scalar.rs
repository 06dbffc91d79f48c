//! Floating-point scalar abstraction.
//!
//! All similarity scores, distances and derived statistics are generic over
//! the scalar type so the same pipeline runs in `f32` or `f64`. Ranks stay
//! integer-valued (see [`crate::matrix::RankingMatrix`]); only the
//! real-valued side of the computation is generic.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Scalar type usable for distances, similarities and evaluation statistics.
///
/// Blanket-implemented for every type satisfying the bounds, in particular
/// `f32` and `f64`.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Sum<Self> + Display + Debug + Send + Sync + 'static
{
    /// Lossless-enough conversion from an integer count.
    fn from_count(c: usize) -> Self {
        Self::from_usize(c).expect("count representable as scalar")
    }
}

impl<T> Scalar for T where
    T: Float + FromPrimitive + ToPrimitive + Sum<T> + Display + Debug + Send + Sync + 'static
{
}
