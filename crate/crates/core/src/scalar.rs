//! Scalar abstraction shared by the geometry, inner learner and outer learners.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point type the learners are generic over (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Absolute tolerance for accepting a vector as a point of the simplex.
    const SIMPLEX_TOL: f64;
    /// Target residual |Σx − 1| for the mirror-step normalizer.
    const SOLVER_TOL: f64;

    /// Converts an `f64` constant; every finite `f64` is representable (possibly rounded).
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 constant")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("real converts to f64")
    }

    #[inline]
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("usize converts to real")
    }

    #[inline]
    fn of_u64(n: u64) -> Self {
        Self::from_u64(n).expect("u64 converts to real")
    }
}

impl Real for f64 {
    const SIMPLEX_TOL: f64 = 1e-9;
    const SOLVER_TOL: f64 = 1e-12;
}

impl Real for f32 {
    const SIMPLEX_TOL: f64 = 1e-5;
    const SOLVER_TOL: f64 = 1e-6;
}
