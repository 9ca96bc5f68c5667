//! Scalar abstraction shared by the numeric modules.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar used for similarities, statistics and regression.
///
/// Implemented for `f32` and `f64`. Embedding storage is always `f32`; the
/// scalar chosen here is the type the arithmetic is carried out in.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from a count or index.
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize is representable in a float scalar")
    }

    /// Lossy conversion from `f64` literals and external data.
    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).expect("f64 is representable in a float scalar")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}
