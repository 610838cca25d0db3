//! Coefficient types.
//!
//! Polynomials and linear combinations are generic over [`Scalar`]. The
//! correlator evaluators themselves always work in [`crate::Rational`];
//! the floating-point impls exist for quick numeric previews.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, ToPrimitive};

/// A field-like coefficient type.
pub trait Scalar: Clone + Debug + PartialEq + Num + Neg<Output = Self> + Send + Sync {
    fn from_int(value: i64) -> Self;

    fn from_bigint(value: &BigInt) -> Self;

    fn ratio(numer: i64, denom: i64) -> Self {
        Self::from_int(numer) / Self::from_int(denom)
    }

    /// Exact types report exact zero; floats use an absolute tolerance.
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }
}

impl Scalar for BigRational {
    fn from_int(value: i64) -> Self {
        BigRational::from_integer(BigInt::from(value))
    }

    fn from_bigint(value: &BigInt) -> Self {
        BigRational::from_integer(value.clone())
    }
}

macro_rules! impl_float_scalar {
    ($f:ty, $eps:expr) => {
        impl Scalar for $f {
            fn from_int(value: i64) -> Self {
                <$f as FromPrimitive>::from_i64(value).unwrap_or(<$f>::NAN)
            }

            fn from_bigint(value: &BigInt) -> Self {
                value.to_f64().map(|v| v as $f).unwrap_or(<$f>::INFINITY)
            }

            fn is_negligible(&self) -> bool {
                self.abs() <= $eps
            }
        }
    };
}

impl_float_scalar!(f32, 1e-5);
impl_float_scalar!(f64, 1e-12);
