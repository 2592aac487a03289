//! Scalar abstraction shared by the Ising model, the energy oracles and the
//! solvers.
//!
//! Exact coefficients use [`Rational`](crate::Rational); the simulators use
//! `f64` (or `f32`). Integer scalars (`i64`) are used internally by the
//! exhaustive oracle after clearing denominators.

use std::fmt::Debug;
use std::ops::Neg;

use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, ToPrimitive};

/// Ring-like scalar with enough structure to evaluate Ising energies.
pub trait Scalar:
    Num + Neg<Output = Self> + Clone + PartialOrd + Debug + FromPrimitive + ToPrimitive + Send + Sync
{
    /// `num / den` in this scalar type. Panics if `den == 0`.
    fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_i64(num).expect("numerator representable") / Self::from_i64(den).expect("denominator representable")
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
impl Scalar for i64 {
    fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0 && num % den == 0, "{num}/{den} is not an integer");
        num / den
    }
}
impl Scalar for Ratio<i64> {
    fn ratio(num: i64, den: i64) -> Self {
        Ratio::new(num, den)
    }
}

/// Floating-point scalar used by the simulators.
pub trait Real: num_traits::Float + Scalar + 'static {}
impl Real for f32 {}
impl Real for f64 {}

/// Lift a `p = ±1` spin value into the scalar.
#[inline]
pub(crate) fn spin<T: Scalar>(bit: bool) -> T {
    if bit {
        -T::one()
    } else {
        T::one()
    }
}
