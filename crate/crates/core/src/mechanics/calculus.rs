//! Derivatives and integrals of uniformly sampled values.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Time derivative of samples spaced `h` apart.
///
/// Central differences inside, second-order three-point stencils at the two
/// ends. Needs at least three samples.
pub fn time_derivative<T: Scalar>(values: &[T], h: T) -> Result<Vec<T>> {
    let n = values.len();
    if n < 3 {
        return Err(Error::InvalidTrajectory(format!("{n} samples; at least 3 are needed")));
    }
    let two_h = h + h;
    let three = T::lit(3.0);
    let four = T::lit(4.0);
    let mut out = Vec::with_capacity(n);
    out.push((four * values[1] - three * values[0] - values[2]) / two_h);
    for k in 1..n - 1 {
        out.push((values[k + 1] - values[k - 1]) / two_h);
    }
    out.push((three * values[n - 1] - four * values[n - 2] + values[n - 3]) / two_h);
    Ok(out)
}

/// Composite trapezoid rule.
pub fn trapezoid<T: Scalar>(values: &[T], h: T) -> T {
    match values {
        [] | [_] => T::zero(),
        [first, .., last] => {
            let sum = values.iter().fold(T::zero(), |acc, &v| acc + v);
            h * (sum - (*first + *last) / T::lit(2.0))
        }
    }
}

/// Largest magnitude among the interior samples (endpoints excluded).
pub fn interior_max_abs<T: Scalar>(values: &[T]) -> T {
    if values.len() <= 2 {
        return T::zero();
    }
    crate::scalar::max_abs(&values[1..values.len() - 1])
}
