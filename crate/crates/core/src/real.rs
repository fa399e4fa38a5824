use core::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

use crate::error::{Error, Result};

/// Scalar type for the sampling kernels: `f32` or `f64`.
pub trait Real: Float + FloatConst + FromPrimitive + Debug + Display + 'static {}

impl Real for f32 {}
impl Real for f64 {}

/// Convert an `f64` constant into the working scalar.
#[inline]
pub(crate) fn lit<R: Real>(x: f64) -> R {
    R::from_f64(x).expect("f64 constant converts to the scalar type")
}

/// Validate that `x` lies strictly inside (0, 1). NaN is rejected.
#[inline]
pub(crate) fn check_open_unit<R: Real>(x: R, name: &'static str) -> Result<R> {
    if x > R::zero() && x < R::one() {
        Ok(x)
    } else {
        Err(Error::OutsideOpenUnit {
            name,
            value: x.to_f64().unwrap_or(f64::NAN),
        })
    }
}

/// Pull a boundary rounding back into the open unit interval.
///
/// The exact-arithmetic maps never reach 0 or 1, but a float evaluation can
/// round onto a boundary (an underflowing product, or a sum landing on 1).
/// Exact zero is replaced by the smallest positive normal value and exact
/// one by the largest value below one; everything else passes through.
#[inline]
pub(crate) fn into_open_unit<R: Real>(x: R) -> R {
    if x <= R::zero() {
        R::min_positive_value()
    } else if x >= R::one() {
        below_one()
    } else {
        x
    }
}

/// Largest representable value strictly below one.
#[inline]
pub(crate) fn below_one<R: Real>() -> R {
    R::one() - R::epsilon() / (R::one() + R::one())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn below_one_is_the_predecessor_of_one() {
        assert!(below_one::<f64>() < 1.0);
        assert_eq!(below_one::<f64>() + f64::EPSILON / 2.0, 1.0);
        assert!(below_one::<f32>() < 1.0);
    }

    #[test]
    fn into_open_unit_only_touches_the_boundary() {
        assert_eq!(into_open_unit(0.5f64), 0.5);
        assert_eq!(into_open_unit(1e-320f64), 1e-320); // subnormals pass through
        assert!(into_open_unit(0.0f64) > 0.0);
        assert!(into_open_unit(1.0f64) < 1.0);
    }

    #[test]
    fn check_open_unit_rejects_boundaries_and_nan() {
        assert!(check_open_unit(0.0f64, "x").is_err());
        assert!(check_open_unit(1.0f64, "x").is_err());
        assert!(check_open_unit(f64::NAN, "x").is_err());
        assert!(check_open_unit(0.3f64, "x").is_ok());
    }
}
