//! Numeric Legendre transform `H(t, x, p) = pᵢ vⁱ(t, x, p) − L(t, x, v(p))`.

use crate::error::{Error, Result};
use crate::expr::{ChartKind, ChartSpec, ScalarField};
use crate::mechanics::lagrangian::{mass_matrix, momentum_map};
use crate::mechanics::linalg;
use crate::scalar::Scalar;

/// Newton iteration limit for inverting the momentum map.
pub const MAX_NEWTON_ITERATIONS: usize = 50;

/// Residual target for the momentum-map inversion.
pub const NEWTON_TOLERANCE: f64 = 1e-12;

/// Lagrangian together with its momentum map and mass matrix, inverted
/// pointwise by Newton's method.
#[derive(Debug, Clone)]
pub struct LegendreTransform {
    lagrangian: ScalarField,
    momentum: Vec<ScalarField>,
    mass: Vec<Vec<ScalarField>>,
}

impl LegendreTransform {
    /// Fails with [`Error::SingularMassMatrix`] when the mass matrix is
    /// constant and singular; a state-dependent one is checked on every solve.
    pub fn new(lagrangian: &ScalarField) -> Result<Self> {
        let momentum = momentum_map(lagrangian)?;
        let mass = mass_matrix(lagrangian)?;
        let constant: Option<Vec<Vec<f64>>> =
            mass.iter().map(|row| row.iter().map(ScalarField::as_constant).collect()).collect();
        if let Some(m) = constant {
            let n = m.len();
            linalg::solve(m, vec![0.0; n])?;
        }
        Ok(Self { lagrangian: lagrangian.clone(), momentum, mass })
    }

    pub fn lagrangian(&self) -> &ScalarField {
        &self.lagrangian
    }

    pub fn momentum_map(&self) -> &[ScalarField] {
        &self.momentum
    }

    pub fn mass_matrix(&self) -> &[Vec<ScalarField>] {
        &self.mass
    }

    pub fn velocity_chart(&self) -> ChartSpec {
        self.lagrangian.chart()
    }

    pub fn momentum_chart(&self) -> ChartSpec {
        ChartSpec::momentum(self.lagrangian.chart().dimension())
    }

    /// `pᵢ = ∂L/∂vⁱ` at a velocity-chart point.
    pub fn momenta<T: Scalar>(&self, velocity_point: &[T]) -> Result<Vec<T>> {
        self.momentum.iter().map(|p| p.eval(velocity_point)).collect()
    }

    /// `v(t, x, p)`: Newton iteration on `∂L/∂v = p` from the guess `v = p`.
    pub fn velocity<T: Scalar>(&self, momentum_point: &[T]) -> Result<Vec<T>> {
        let chart = self.momentum_chart();
        if momentum_point.len() != chart.len() {
            return Err(Error::InvalidArgument(format!(
                "point has {} coordinates, chart needs {}",
                momentum_point.len(),
                chart.len()
            )));
        }
        let n = chart.dimension();
        let target = &momentum_point[n + 1..];
        let scale = target.iter().fold(T::one(), |acc, p| acc.max(T::one() + p.abs()));
        let tolerance = T::lit(NEWTON_TOLERANCE).max(T::lit(64.0) * T::epsilon() * scale);
        let mut point = momentum_point.to_vec();
        let mut residual = T::infinity();
        for _ in 0..=MAX_NEWTON_ITERATIONS {
            let r: Vec<T> =
                self.momenta(&point)?.iter().zip(target).map(|(&p, &goal)| p - goal).collect();
            residual = crate::scalar::max_abs(&r);
            if !residual.is_finite() {
                break;
            }
            if residual <= tolerance {
                return Ok(point[n + 1..].to_vec());
            }
            let m = self
                .mass
                .iter()
                .map(|row| row.iter().map(|f| f.eval(&point)).collect::<Result<Vec<T>>>())
                .collect::<Result<Vec<_>>>()?;
            let dv = linalg::solve(m, r)?;
            for (i, d) in dv.into_iter().enumerate() {
                point[n + 1 + i] = point[n + 1 + i] - d;
            }
        }
        Err(Error::NewtonDivergence { iterations: MAX_NEWTON_ITERATIONS, residual: residual.as_f64() })
    }

    /// `H = pᵢ vⁱ − L` at a momentum-chart point.
    pub fn hamiltonian<T: Scalar>(&self, momentum_point: &[T]) -> Result<T> {
        let v = self.velocity(momentum_point)?;
        let n = v.len();
        let mut velocity_point = momentum_point[..=n].to_vec();
        velocity_point.extend(&v);
        let pv = v.iter().zip(&momentum_point[n + 1..]).fold(T::zero(), |acc, (&vi, &pi)| acc + vi * pi);
        Ok(pv - self.lagrangian.eval(&velocity_point)?)
    }
}

/// Legendre transform of `lagrangian`; see [`LegendreTransform`].
pub fn legendre_transform(lagrangian: &ScalarField) -> Result<LegendreTransform> {
    if lagrangian.chart().kind() != ChartKind::Velocity {
        return Err(Error::ChartMismatch("Legendre transform needs a velocity-chart Lagrangian".into()));
    }
    LegendreTransform::new(lagrangian)
}
