//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, NumAssign};

/// Floating-point scalar the toolkit is generic over (`f32` or `f64`).
///
/// Tolerances in this crate are written as `f64` literals tuned for double
/// precision. [`Real::tol`] lifts such a literal into `Self`, never letting it
/// drop below a small multiple of the type's machine epsilon, so the same code
/// stays meaningful in single precision.
pub trait Real:
    Float + FloatConst + NumAssign + Sum + Debug + Display + Default + Send + Sync + 'static
{
    fn lit(v: f64) -> Self {
        <Self as num_traits::NumCast>::from(v).expect("f64 literal representable")
    }

    fn tol(v: f64) -> Self {
        Self::lit(v).max(Self::epsilon() * Self::lit(64.0))
    }

    fn from_usize(n: usize) -> Self {
        <Self as num_traits::NumCast>::from(n).expect("usize representable")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `base^exp` with `0^0 = 1`, and `0^e` for `e < 0` reported as `+inf`.
///
/// This is exactly `powf` on IEEE types; the helper exists so call sites
/// read as the power convention they rely on.
#[inline]
pub fn pow<T: Real>(base: T, exp: T) -> T {
    if exp == T::zero() {
        return T::one();
    }
    base.powf(exp)
}
