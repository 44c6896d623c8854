//! Scalar abstraction shared by every geometric routine.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar the geometry is computed in: `f32` or `f64`.
///
/// The two tolerances are the only precision-dependent constants in the
/// crate. `trace_tol` is the width of the band around `|tr| = 2` treated as
/// parabolic, `det_tol` the accepted determinant drift of a constructed
/// matrix.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    fn trace_tol() -> Self;
    fn det_tol() -> Self;

    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    fn trace_tol() -> Self {
        1e-12
    }
    fn det_tol() -> Self {
        1e-9
    }
}

impl Real for f32 {
    fn trace_tol() -> Self {
        1e-4
    }
    fn det_tol() -> Self {
        1e-4
    }
}

/// `arccosh(x)` for `x >= 1`, evaluated as `log1p(t + sqrt(t(t + 2)))` with
/// `t = x - 1` so that arguments just above 1 keep full relative accuracy.
#[inline]
pub fn acosh_stable<T: Real>(x: T) -> T {
    let t = (x - T::one()).max(T::zero());
    (t + (t * (t + T::lit(2.0))).sqrt()).ln_1p()
}
