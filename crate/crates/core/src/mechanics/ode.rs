//! Fixed-step classical Runge–Kutta integration.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Largest number of steps a single integration may take.
pub const MAX_STEPS: usize = 10_000_000;

/// Number of uniform steps covering `[t0, t1]` with step at most `h`, and the
/// effective step.
///
/// A span that is an integer multiple of `h` (to a relative `1e-9`) keeps `h`;
/// otherwise the step shrinks so the last sample lands exactly on `t1`.
pub fn uniform_steps<T: Scalar>(t0: T, t1: T, h: T) -> Result<(usize, T)> {
    if !(h > T::zero()) || !h.is_finite() {
        return Err(Error::InvalidArgument(format!("step must be positive, got {h}")));
    }
    if !(t1 > t0) || !t0.is_finite() || !t1.is_finite() {
        return Err(Error::InvalidArgument(format!("need t1 > t0, got [{t0}, {t1}]")));
    }
    let ratio = ((t1 - t0) / h).as_f64();
    let rounded = ratio.round();
    let steps = if (ratio - rounded).abs() <= 1e-9 * ratio.max(1.0) { rounded } else { ratio.ceil() };
    if steps > MAX_STEPS as f64 {
        return Err(Error::InvalidArgument(format!("{steps} steps exceed the limit of {MAX_STEPS}")));
    }
    let steps = (steps as usize).max(1);
    Ok((steps, (t1 - t0) / T::lit(steps as f64)))
}

/// Sample times `t0 + k·h` for `k = 0..=steps`, the last one exactly `t1`.
pub fn grid<T: Scalar>(t0: T, t1: T, steps: usize, h: T) -> Vec<T> {
    let mut times: Vec<T> = (0..=steps).map(|k| t0 + T::lit(k as f64) * h).collect();
    times[steps] = t1;
    times
}

/// Output of [`rk4`]: every sample time, every state, and the effective step.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution<T> {
    pub times: Vec<T>,
    pub states: Vec<Vec<T>>,
    pub step: T,
}

/// Integrates `y' = f(t, y)` from `(t0, y0)` to `t1` with classical RK4.
///
/// Stops with [`Error::NonFiniteState`] on the first non-finite state,
/// reporting the last good one.
pub fn rk4<T, F>(mut f: F, t0: T, y0: &[T], t1: T, h: T) -> Result<Solution<T>>
where
    T: Scalar,
    F: FnMut(T, &[T]) -> Result<Vec<T>>,
{
    let (steps, h) = uniform_steps(t0, t1, h)?;
    let times = grid(t0, t1, steps, h);
    let half = h / T::lit(2.0);
    let sixth = h / T::lit(6.0);
    let two = T::lit(2.0);
    let shifted = |y: &[T], k: &[T], scale: T| -> Vec<T> { y.iter().zip(k).map(|(&a, &b)| a + scale * b).collect() };

    let mut states = Vec::with_capacity(steps + 1);
    states.push(y0.to_vec());
    for step in 0..steps {
        let t = times[step];
        let y = &states[step];
        let k1 = f(t, y)?;
        let k2 = f(t + half, &shifted(y, &k1, half))?;
        let k3 = f(t + half, &shifted(y, &k2, half))?;
        let k4 = f(t + h, &shifted(y, &k3, h))?;
        let next: Vec<T> = (0..y.len()).map(|i| y[i] + sixth * (k1[i] + two * (k2[i] + k3[i]) + k4[i])).collect();
        if next.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteState {
                t: times[step + 1].as_f64(),
                last_t: t.as_f64(),
                last_state: y.iter().map(|v| v.as_f64()).collect(),
            });
        }
        states.push(next);
    }
    Ok(Solution { times, states, step: h })
}
