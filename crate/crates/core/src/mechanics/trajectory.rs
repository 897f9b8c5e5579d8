//! Sampled curves on a velocity or momentum chart.

use crate::error::{Error, Result};
use crate::expr::{ChartKind, ChartSpec, ScalarField};
use crate::mechanics::ode;
use crate::scalar::Scalar;

/// Time-stamped samples `(t, x, v)` or `(t, x, p)` at a fixed step.
///
/// Each sample is a full chart point with time at index 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    chart: ChartSpec,
    points: Vec<Vec<T>>,
    step: T,
}

impl<T: Scalar> Trajectory<T> {
    /// Validates uniform spacing (to `1e-12` relative to the span) and
    /// finiteness.
    pub fn new(chart: ChartSpec, points: Vec<Vec<T>>, step: T) -> Result<Self> {
        if chart.kind() == ChartKind::Configuration {
            return Err(Error::InvalidTrajectory("trajectories live on velocity or momentum charts".into()));
        }
        if points.len() < 2 {
            return Err(Error::InvalidTrajectory("need at least two samples".into()));
        }
        if !(step > T::zero()) {
            return Err(Error::InvalidTrajectory(format!("step must be positive, got {step}")));
        }
        let span = (points[points.len() - 1][0] - points[0][0]).abs().max(T::one());
        let slack = T::lit(1e-12).max(T::epsilon() * T::lit(16.0)) * span;
        for (k, point) in points.iter().enumerate() {
            if point.len() != chart.len() {
                return Err(Error::InvalidTrajectory(format!(
                    "sample {k} has {} coordinates, chart needs {}",
                    point.len(),
                    chart.len()
                )));
            }
            if point.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidTrajectory(format!("sample {k} is not finite")));
            }
            if k > 0 && ((point[0] - points[k - 1][0]) - step).abs() > slack {
                return Err(Error::InvalidTrajectory(format!("sample {k} breaks the uniform step {step}")));
            }
        }
        Ok(Self { chart, points, step })
    }

    /// Samples `state(t) = (x, fiber)` on the uniform grid over `[t0, t1]`.
    pub fn from_fn(chart: ChartSpec, t0: T, t1: T, h: T, mut state: impl FnMut(T) -> Vec<T>) -> Result<Self> {
        let (steps, h) = ode::uniform_steps(t0, t1, h)?;
        let points = ode::grid(t0, t1, steps, h)
            .into_iter()
            .map(|t| {
                let mut point = vec![t];
                point.extend(state(t));
                point
            })
            .collect();
        Self::new(chart, points, h)
    }

    /// Velocity-chart curve from expressions `x(t)` and, optionally, `v(t)`.
    ///
    /// The expressions live on the configuration chart and may depend on `t`
    /// only. Without `v` the curve is the 1-jet prolongation `v = dx/dt`,
    /// differentiated symbolically.
    pub fn from_curve(x: &[ScalarField], v: Option<&[ScalarField]>, t0: T, t1: T, h: T) -> Result<Self> {
        let n = x.len();
        if n == 0 {
            return Err(Error::InvalidArgument("a curve needs at least one coordinate".into()));
        }
        let base = ChartSpec::configuration(n);
        let prolonged: Vec<ScalarField>;
        let v = match v {
            Some(v) => v,
            None => {
                prolonged = x.iter().map(|xi| xi.diff_at(0)).collect();
                &prolonged
            }
        };
        if v.len() != n {
            return Err(Error::InvalidArgument(format!("{} velocity expressions for {n} coordinates", v.len())));
        }
        for f in x.iter().chain(v) {
            if f.chart() != base {
                return Err(Error::ChartMismatch(format!("curve expression on {:?}, expected {base:?}", f.chart())));
            }
            if (1..base.len()).any(|i| f.depends_on(i)) {
                return Err(Error::InvalidArgument(format!("curve expression `{f}` must depend on t only")));
            }
        }
        let (steps, h) = ode::uniform_steps(t0, t1, h)?;
        let mut points = Vec::with_capacity(steps + 1);
        for t in ode::grid(t0, t1, steps, h) {
            let mut arg = vec![T::zero(); base.len()];
            arg[0] = t;
            let mut point = vec![t];
            for f in x.iter().chain(v) {
                point.push(f.eval(&arg)?);
            }
            points.push(point);
        }
        Self::new(ChartSpec::velocity(n), points, h)
    }

    pub fn chart(&self) -> ChartSpec {
        self.chart
    }

    pub fn kind(&self) -> ChartKind {
        self.chart.kind()
    }

    pub fn dimension(&self) -> usize {
        self.chart.dimension()
    }

    pub fn step(&self) -> T {
        self.step
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<T>] {
        &self.points
    }

    pub fn point(&self, k: usize) -> &[T] {
        &self.points[k]
    }

    pub fn time(&self, k: usize) -> T {
        self.points[k][0]
    }

    pub fn times(&self) -> Vec<T> {
        self.points.iter().map(|p| p[0]).collect()
    }

    pub fn x(&self, k: usize, i: usize) -> T {
        self.points[k][self.chart.x_index(i)]
    }

    /// Velocity or momentum component `i` at sample `k`.
    pub fn fiber(&self, k: usize, i: usize) -> T {
        self.points[k][self.chart.fiber_index(i)]
    }

    /// Series of one coordinate over all samples.
    pub fn series(&self, index: usize) -> Vec<T> {
        self.points.iter().map(|p| p[index]).collect()
    }

    /// Values of `f` along the trajectory.
    pub fn eval(&self, f: &ScalarField) -> Result<Vec<T>> {
        if f.chart() != self.chart {
            return Err(Error::ChartMismatch(format!("field on {:?}, trajectory on {:?}", f.chart(), self.chart)));
        }
        self.points.iter().map(|p| f.eval(p)).collect()
    }

    pub fn last(&self) -> &[T] {
        &self.points[self.points.len() - 1]
    }
}
