//! Floating-point scalar abstraction shared by every numeric layer.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Real scalar type used for evaluation, integration and sampling.
///
/// Symbolic expressions keep their literals as `f64`; they are converted to
/// the evaluation scalar with [`Scalar::lit`].
pub trait Scalar:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Cube root of the machine epsilon, the step scale for central differences.
    const EPSILON_CBRT: Self;

    /// Converts an `f64` literal into this scalar.
    fn lit(value: f64) -> Self {
        Self::from_f64(value).expect("f64 literal representable in scalar type")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {
    const EPSILON_CBRT: Self = 0.004_921_566_8;
}

impl Scalar for f64 {
    const EPSILON_CBRT: Self = 6.055_454_452_393_339_5e-6;
}

/// Maximum absolute value of a slice, zero for an empty slice.
pub fn max_abs<T: Scalar>(values: &[T]) -> T {
    values.iter().fold(T::zero(), |acc, v| acc.max(v.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cbrt_epsilon_matches_std() {
        assert!((f64::EPSILON.cbrt() - <f64 as Scalar>::EPSILON_CBRT).abs() < 1e-20);
        assert!((f32::EPSILON.cbrt() - <f32 as Scalar>::EPSILON_CBRT).abs() < 1e-9);
    }

    #[test]
    fn max_abs_of_mixed_signs() {
        assert_eq!(max_abs(&[1.0, -3.0, 2.0]), 3.0);
        assert_eq!(max_abs::<f64>(&[]), 0.0);
    }
}
