use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FromPrimitive, NumCast, ToPrimitive};

/// Floating point type the model and solvers are generic over (`f32` or `f64`).
///
/// Integer counters are exact regardless of the scalar; only the job parameters
/// and the derived statistics live in `T`.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + NumCast
    + Debug
    + Display
    + LowerExp
    + Default
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from a count or literal. Panics only if `T` cannot
    /// represent finite `f64` values at all, which no supported scalar does.
    #[inline]
    fn of(value: f64) -> Self {
        <Self as NumCast>::from(value).expect("finite f64 is representable")
    }

    #[inline]
    fn of_count(value: u64) -> Self {
        <Self as NumCast>::from(value).expect("count is representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
