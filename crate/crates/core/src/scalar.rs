//! Scalar abstraction for the geometry kernel.

use num_traits::{Float, FloatConst, FromPrimitive};
use std::fmt::{Debug, Display};

/// Real field used by the geometry kernel. Implemented for `f32` and `f64`.
pub trait Real: Float + FloatConst + FromPrimitive + Debug + Display + Send + Sync + 'static {
    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    /// Tolerance for coincidence of projective points, in radians.
    fn angle_tol() -> Self {
        Self::lit(1e-12).max(Self::epsilon() * Self::lit(64.0))
    }
}

impl<T> Real for T where T: Float + FloatConst + FromPrimitive + Debug + Display + Send + Sync + 'static {}

/// Reduce an angle to `[0, period)`.
pub fn wrap<T: Real>(theta: T, period: T) -> T {
    let r = theta - period * (theta / period).floor();
    if r >= period || r < T::zero() {
        T::zero()
    } else {
        r
    }
}
