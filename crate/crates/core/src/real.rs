//! Scalar abstraction shared by the kernel samplers and the statistics code.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Default + Debug + Display + Send + Sync + 'static
{
    /// Converts an `f64` constant. Every `Real` can represent (a rounding of) any finite `f64`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 constant")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Maps a uniform draw in `[0, 1)` taken at `f64` precision into `[0, 1)` for this type.
    #[inline]
    fn unit_from_f64(u: f64) -> Self {
        let v = Self::lit(u);
        if v >= Self::one() {
            Self::one() - Self::epsilon()
        } else {
            v
        }
    }
}

impl Real for f32 {}
impl Real for f64 {}
