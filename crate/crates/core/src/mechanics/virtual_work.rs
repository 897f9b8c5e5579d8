//! Fundamental 1-forms `φ = P dt + Fᵢ dxⁱ + pᵢ dvⁱ`, virtual work and the
//! Newtonian equations of motion `Fᵢ = dpᵢ/dt`.

use crate::error::{Error, Result};
use crate::expr::{same_chart, ChartKind, ChartSpec, ScalarField};
use crate::mechanics::calculus::{interior_max_abs, time_derivative, trapezoid};
use crate::mechanics::lagrangian::{require_integrable, require_velocity};
use crate::mechanics::linalg;
use crate::mechanics::ode;
use crate::mechanics::trajectory::Trajectory;
use crate::scalar::Scalar;

/// Power `P`, forces `Fᵢ` and momenta `pᵢ` on a velocity chart.
#[derive(Debug, Clone, PartialEq)]
pub struct FundamentalForm {
    pub power: ScalarField,
    pub force: Vec<ScalarField>,
    pub momentum: Vec<ScalarField>,
}

impl FundamentalForm {
    pub fn new(power: ScalarField, force: Vec<ScalarField>, momentum: Vec<ScalarField>) -> Result<Self> {
        let chart = power.chart();
        if chart.kind() != ChartKind::Velocity {
            return Err(Error::ChartMismatch(format!("fundamental form needs a velocity chart, got {:?}", chart.kind())));
        }
        let n = chart.dimension();
        if force.len() != n || momentum.len() != n {
            return Err(Error::InvalidArgument(format!(
                "{} forces and {} momenta on a chart of dimension {n}",
                force.len(),
                momentum.len()
            )));
        }
        for f in force.iter().chain(&momentum) {
            same_chart(&power, f)?;
        }
        Ok(Self { power, force, momentum })
    }

    /// `φ = dL`.
    pub fn from_lagrangian(l: &ScalarField) -> Result<Self> {
        let chart = l.chart();
        let n = chart.dimension();
        Self::new(
            l.diff_at(0),
            (0..n).map(|i| l.diff_at(chart.x_index(i))).collect(),
            (0..n).map(|i| l.diff_at(chart.fiber_index(i))).collect(),
        )
    }

    /// Form of the first-form Lagrange equations: `p = ∂T/∂v`,
    /// `F = Q + ∂T/∂x`, `P = ∂T/∂t`.
    pub fn from_kinetic_energy(kinetic: &ScalarField, generalized_forces: &[ScalarField]) -> Result<Self> {
        let chart = kinetic.chart();
        let n = chart.dimension();
        if generalized_forces.len() != n {
            return Err(Error::InvalidArgument(format!("{} generalized forces for dimension {n}", generalized_forces.len())));
        }
        let mut force = Vec::with_capacity(n);
        for (i, q) in generalized_forces.iter().enumerate() {
            same_chart(kinetic, q)?;
            force.push(q + &kinetic.diff_at(chart.x_index(i)));
        }
        Self::new(kinetic.diff_at(0), force, (0..n).map(|i| kinetic.diff_at(chart.fiber_index(i))).collect())
    }

    pub fn chart(&self) -> ChartSpec {
        self.power.chart()
    }
}

/// Variation `δx(t)` tabulated on the samples of a trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct VariationField<T> {
    values: Vec<Vec<T>>,
}

impl<T: Scalar> VariationField<T> {
    pub fn from_values(values: Vec<Vec<T>>) -> Result<Self> {
        let n = values.first().map_or(0, Vec::len);
        if n == 0 || values.iter().any(|v| v.len() != n) {
            return Err(Error::InvalidArgument("variation samples must be non-empty with a common length".into()));
        }
        Ok(Self { values })
    }

    pub fn zero(traj: &Trajectory<T>) -> Self {
        Self { values: vec![vec![T::zero(); traj.dimension()]; traj.len()] }
    }

    /// Evaluates expressions on the configuration chart at `(t, x(t))` for
    /// every sample of `traj`.
    pub fn from_fields(fields: &[ScalarField], traj: &Trajectory<T>) -> Result<Self> {
        let n = traj.dimension();
        let base = ChartSpec::configuration(n);
        if fields.len() != n {
            return Err(Error::InvalidArgument(format!("{} variation components for dimension {n}", fields.len())));
        }
        if let Some(f) = fields.iter().find(|f| f.chart() != base) {
            return Err(Error::ChartMismatch(format!("variation on {:?}, expected {base:?}", f.chart())));
        }
        let values = traj
            .points()
            .iter()
            .map(|point| {
                let arg = &point[..base.len()];
                fields.iter().map(|f| f.eval(arg)).collect::<Result<Vec<T>>>()
            })
            .collect::<Result<_>>()?;
        Ok(Self { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, k: usize, i: usize) -> T {
        self.values[k][i]
    }

    pub fn values(&self) -> &[Vec<T>] {
        &self.values
    }

    /// Prolongation `δvⁱ = d(δxⁱ)/dt` from sampled differences.
    pub fn velocities(&self, step: T) -> Result<Vec<Vec<T>>> {
        let n = self.values[0].len();
        let columns: Vec<Vec<T>> = (0..n)
            .map(|i| time_derivative(&self.values.iter().map(|v| v[i]).collect::<Vec<_>>(), step))
            .collect::<Result<_>>()?;
        Ok((0..self.len()).map(|k| columns.iter().map(|c| c[k]).collect()).collect())
    }

    /// Largest `|δx|` at the two endpoints.
    pub fn endpoint_magnitude(&self) -> T {
        let ends = [&self.values[0], &self.values[self.len() - 1]];
        ends.iter().flat_map(|v| v.iter()).fold(T::zero(), |acc, v| acc.max(v.abs()))
    }

    pub(crate) fn check_against(&self, traj: &Trajectory<T>) -> Result<()> {
        if self.len() != traj.len() || self.values[0].len() != traj.dimension() {
            return Err(Error::InvalidArgument(format!(
                "variation has {}x{} samples, trajectory {}x{}",
                self.len(),
                self.values[0].len(),
                traj.len(),
                traj.dimension()
            )));
        }
        Ok(())
    }
}

/// How the boundary term of a variation is treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundaryCondition {
    /// Variations vanish at both ends; only the interior integral matters.
    #[default]
    FixedEndpoints,
    /// Free ends; the boundary bracket must vanish as well.
    Transversality,
}

/// Interior integral and boundary bracket of a first variation or of a total
/// virtual work.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstVariation<T> {
    pub interior: T,
    pub boundary: T,
}

impl<T: Scalar> FirstVariation<T> {
    pub fn total(&self) -> T {
        self.interior + self.boundary
    }

    /// The quantity that vanishes on a motion under `condition`: `|interior|`
    /// for fixed endpoints, the larger of `|interior|` and `|boundary|` for
    /// transversality.
    pub fn stationarity_defect(&self, condition: BoundaryCondition) -> T {
        match condition {
            BoundaryCondition::FixedEndpoints => self.interior.abs(),
            BoundaryCondition::Transversality => self.interior.abs().max(self.boundary.abs()),
        }
    }
}

fn require_form<T: Scalar>(phi: &FundamentalForm, traj: &Trajectory<T>) -> Result<()> {
    require_velocity(traj)?;
    if phi.chart() != traj.chart() {
        return Err(Error::ChartMismatch(format!("form on {:?}, trajectory on {:?}", phi.chart(), traj.chart())));
    }
    Ok(())
}

/// `Fᵢ − dpᵢ/dt` per component, sampled along the trajectory.
fn newtonian_defects<T: Scalar>(phi: &FundamentalForm, traj: &Trajectory<T>) -> Result<Vec<Vec<T>>> {
    require_form(phi, traj)?;
    require_integrable(traj)?;
    phi.force
        .iter()
        .zip(&phi.momentum)
        .map(|(f, p)| {
            let force = traj.eval(f)?;
            let pdot = time_derivative(&traj.eval(p)?, traj.step())?;
            Ok(force.iter().zip(&pdot).map(|(&a, &b)| a - b).collect())
        })
        .collect()
}

/// `W = ∫ (Fᵢ − dpᵢ/dt) δxⁱ dt + [pᵢ δxⁱ]`.
pub fn virtual_work_total<T: Scalar>(
    phi: &FundamentalForm,
    traj: &Trajectory<T>,
    delta: &VariationField<T>,
) -> Result<FirstVariation<T>> {
    let defects = newtonian_defects(phi, traj)?;
    delta.check_against(traj)?;
    let last = traj.len() - 1;
    let mut integrand = vec![T::zero(); traj.len()];
    let mut boundary = T::zero();
    for (i, defect) in defects.iter().enumerate() {
        for k in 0..traj.len() {
            integrand[k] = integrand[k] + defect[k] * delta.value(k, i);
        }
        let p_end = phi.momentum[i].eval(traj.point(last))?;
        let p_start = phi.momentum[i].eval(traj.point(0))?;
        boundary = boundary + p_end * delta.value(last, i) - p_start * delta.value(0, i);
    }
    Ok(FirstVariation { interior: trapezoid(&integrand, traj.step()), boundary })
}

/// Max over interior samples of `|Fᵢ − dpᵢ/dt|`.
pub fn newtonian_residual<T: Scalar>(phi: &FundamentalForm, traj: &Trajectory<T>) -> Result<T> {
    let defects = newtonian_defects(phi, traj)?;
    Ok(defects.iter().fold(T::zero(), |acc, d| acc.max(interior_max_abs(d))))
}

/// Equations `Fᵢ = dpᵢ/dt` solved for the accelerations:
/// `(∂pᵢ/∂vʲ) v̇ʲ = Fᵢ − ∂pᵢ/∂t − (∂pᵢ/∂xʲ) vʲ`.
#[derive(Debug, Clone)]
pub struct NewtonianSystem {
    chart: ChartSpec,
    jacobian: Vec<Vec<ScalarField>>,
    rhs: Vec<ScalarField>,
}

impl NewtonianSystem {
    pub fn new(phi: &FundamentalForm) -> Self {
        let chart = phi.chart();
        let n = chart.dimension();
        let jacobian =
            phi.momentum.iter().map(|p| (0..n).map(|j| p.diff_at(chart.fiber_index(j))).collect()).collect();
        let rhs = phi
            .force
            .iter()
            .zip(&phi.momentum)
            .map(|(f, p)| {
                (0..n).fold(f - &p.diff_at(0), |acc, j| {
                    &acc - &(&p.diff_at(chart.x_index(j)) * &ScalarField::coordinate_at(chart, chart.fiber_index(j)))
                })
            })
            .collect();
        Self { chart, jacobian, rhs }
    }

    pub fn chart(&self) -> ChartSpec {
        self.chart
    }

    /// Accelerations at a velocity-chart point `(t, x, v)`.
    pub fn accelerations<T: Scalar>(&self, point: &[T]) -> Result<Vec<T>> {
        let a = self
            .jacobian
            .iter()
            .map(|row| row.iter().map(|m| m.eval(point)).collect::<Result<Vec<T>>>())
            .collect::<Result<Vec<_>>>()?;
        let b = self.rhs.iter().map(|r| r.eval(point)).collect::<Result<Vec<T>>>()?;
        linalg::solve(a, b)
    }

    /// RK4 integration of `(x, v)` from `initial = (t0, x0, v0)` to `t1`.
    pub fn integrate<T: Scalar>(&self, initial: &[T], t1: T, h: T) -> Result<Trajectory<T>> {
        if initial.len() != self.chart.len() {
            return Err(Error::InvalidArgument(format!(
                "initial point has {} coordinates, chart needs {}",
                initial.len(),
                self.chart.len()
            )));
        }
        let n = self.chart.dimension();
        let mut point = vec![T::zero(); self.chart.len()];
        let sol = ode::rk4(
            |t, y: &[T]| {
                point[0] = t;
                point[1..].copy_from_slice(y);
                let mut dy = y[n..].to_vec();
                dy.extend(self.accelerations(&point)?);
                Ok(dy)
            },
            initial[0],
            &initial[1..],
            t1,
            h,
        )?;
        let points = sol
            .times
            .iter()
            .zip(sol.states)
            .map(|(&t, y)| {
                let mut p = vec![t];
                p.extend(y);
                p
            })
            .collect();
        Trajectory::new(self.chart, points, sol.step)
    }
}

/// Accelerations of the generalized Newtonian equations at `point`.
pub fn newtonian_rhs<T: Scalar>(phi: &FundamentalForm, point: &[T]) -> Result<Vec<T>> {
    NewtonianSystem::new(phi).accelerations(point)
}

/// Accelerations from `d/dt(∂T/∂v) − ∂T/∂x = Q` at a velocity-chart point.
pub fn lagrange_first_form_rhs<T: Scalar>(
    kinetic: &ScalarField,
    generalized_forces: &[ScalarField],
    point: &[T],
) -> Result<Vec<T>> {
    newtonian_rhs(&FundamentalForm::from_kinetic_energy(kinetic, generalized_forces)?, point)
}
