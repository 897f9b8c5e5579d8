//! Normal forms `η = dH − μₐ dvᵃ` and the generalized Hamilton equations
//!
//! ```text
//! dxⁱ/dt =  ∂H/∂pᵢ − μₐ ∂vᵃ/∂pᵢ
//! dpᵢ/dt = −∂H/∂xⁱ + μₐ ∂vᵃ/∂xⁱ
//! ```

use crate::error::{Error, Result};
use crate::expr::{same_chart, ChartKind, ChartSpec, ScalarField};
use crate::geometry::{poisson_bracket, NormalFormVectorField, OneForm};
use crate::mechanics::calculus::{interior_max_abs, time_derivative};
use crate::mechanics::ode;
use crate::mechanics::trajectory::Trajectory;
use crate::scalar::Scalar;

/// Hamiltonian `H` with correction pairs `(μₐ, vᵃ)` on a momentum chart.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalForm {
    pub hamiltonian: ScalarField,
    /// Pairs `(μₐ, vᵃ)`.
    pub terms: Vec<(ScalarField, ScalarField)>,
}

impl NormalForm {
    pub fn new(hamiltonian: ScalarField, terms: Vec<(ScalarField, ScalarField)>) -> Result<Self> {
        if hamiltonian.chart().kind() != ChartKind::Momentum {
            return Err(Error::ChartMismatch(format!(
                "normal form needs a momentum chart, got {:?}",
                hamiltonian.chart().kind()
            )));
        }
        for (mu, v) in &terms {
            same_chart(&hamiltonian, mu)?;
            same_chart(&hamiltonian, v)?;
        }
        Ok(Self { hamiltonian, terms })
    }

    /// The exact case `η = dH`.
    pub fn exact(hamiltonian: ScalarField) -> Result<Self> {
        Self::new(hamiltonian, Vec::new())
    }

    pub fn chart(&self) -> ChartSpec {
        self.hamiltonian.chart()
    }

    pub fn is_exact(&self) -> bool {
        self.terms.is_empty()
    }

    /// `η` as the normal-form vector field data `ι⁻¹η = ∇Ω H − μₐ ∇Ω vᵃ`.
    /// The motion is the negative of its realization.
    pub fn to_vector_field(&self) -> NormalFormVectorField {
        NormalFormVectorField {
            f: self.hamiltonian.clone(),
            terms: self.terms.iter().map(|(mu, v)| (-mu, v.clone())).collect(),
        }
    }

    /// Symbolic right-hand sides of the generalized Hamilton equations.
    pub fn equations(&self) -> HamiltonEquations {
        let chart = self.chart();
        let n = chart.dimension();
        let h = &self.hamiltonian;
        let mut xdot = Vec::with_capacity(n);
        let mut pdot = Vec::with_capacity(n);
        for i in 0..n {
            let (xi, pi) = (chart.x_index(i), chart.fiber_index(i));
            let mut dx = h.diff_at(pi);
            let mut dp = -&h.diff_at(xi);
            for (mu, v) in &self.terms {
                dx = &dx - &(mu * &v.diff_at(pi));
                dp = &dp + &(mu * &v.diff_at(xi));
            }
            xdot.push(dx);
            pdot.push(dp);
        }
        HamiltonEquations { chart, xdot, pdot }
    }
}

/// `η` expanded in coordinates: `(∂H/∂c − μₐ ∂vᵃ/∂c) dc` for every coordinate `c`.
pub fn eta_components(nf: &NormalForm) -> OneForm {
    let chart = nf.chart();
    let components = (0..chart.len())
        .map(|c| nf.terms.iter().fold(nf.hamiltonian.diff_at(c), |acc, (mu, v)| &acc - &(mu * &v.diff_at(c))))
        .collect();
    OneForm::from_components(chart, components).expect("components share the normal form's chart")
}

/// Largest `|eta_components(nf) − η_given|` over `points` and components.
pub fn normal_form_consistency<T: Scalar>(nf: &NormalForm, eta_given: &OneForm, points: &[Vec<T>]) -> Result<T> {
    eta_components(nf).max_abs_difference(eta_given, points)
}

/// Compiled right-hand sides `(ẋ, ṗ)` of a normal form.
#[derive(Debug, Clone)]
pub struct HamiltonEquations {
    chart: ChartSpec,
    pub xdot: Vec<ScalarField>,
    pub pdot: Vec<ScalarField>,
}

impl HamiltonEquations {
    pub fn chart(&self) -> ChartSpec {
        self.chart
    }

    /// `(ẋ, ṗ)` at a momentum-chart point.
    pub fn eval<T: Scalar>(&self, point: &[T]) -> Result<(Vec<T>, Vec<T>)> {
        let xdot = self.xdot.iter().map(|f| f.eval(point)).collect::<Result<_>>()?;
        let pdot = self.pdot.iter().map(|f| f.eval(point)).collect::<Result<_>>()?;
        Ok((xdot, pdot))
    }

    /// RK4 from `initial = (t0, x0, p0)` to `t1`.
    pub fn integrate<T: Scalar>(&self, initial: &[T], t1: T, h: T) -> Result<Trajectory<T>> {
        if initial.len() != self.chart.len() {
            return Err(Error::InvalidArgument(format!(
                "initial point has {} coordinates, chart needs {}",
                initial.len(),
                self.chart.len()
            )));
        }
        let mut point = vec![T::zero(); self.chart.len()];
        let sol = ode::rk4(
            |t, y: &[T]| {
                point[0] = t;
                point[1..].copy_from_slice(y);
                let (mut dx, dp) = self.eval(&point)?;
                dx.extend(dp);
                Ok(dx)
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

/// `(ẋ, ṗ)` of the generalized Hamilton equations at `point`.
pub fn hamilton_rhs<T: Scalar>(nf: &NormalForm, point: &[T]) -> Result<(Vec<T>, Vec<T>)> {
    nf.equations().eval(point)
}

/// Fixed-step RK4 trajectory of the generalized Hamilton equations.
pub fn integrate_hamilton<T: Scalar>(nf: &NormalForm, initial: &[T], t1: T, h: T) -> Result<Trajectory<T>> {
    nf.equations().integrate(initial, t1, h)
}

fn require_phase_trajectory<T: Scalar>(nf: &NormalForm, traj: &Trajectory<T>) -> Result<()> {
    if traj.chart() != nf.chart() {
        return Err(Error::ChartMismatch(format!("normal form on {:?}, trajectory on {:?}", nf.chart(), traj.chart())));
    }
    Ok(())
}

/// `∂H/∂t − μₐ {H, vᵃ}`, the rate of change of `H` along the motion.
pub fn energy_rate(nf: &NormalForm) -> Result<ScalarField> {
    let h = &nf.hamiltonian;
    nf.terms.iter().try_fold(h.diff_at(0), |acc, (mu, v)| Ok(&acc - &(mu * &poisson_bracket(h, v)?)))
}

/// Max over interior samples of `|dH/dt − ∂H/∂t + μₐ{H, vᵃ}|`, with `dH/dt`
/// from sampled differences of `H` along the trajectory.
pub fn energy_balance_residual<T: Scalar>(nf: &NormalForm, traj: &Trajectory<T>) -> Result<T> {
    require_phase_trajectory(nf, traj)?;
    let dh = time_derivative(&traj.eval(&nf.hamiltonian)?, traj.step())?;
    let rate = traj.eval(&energy_rate(nf)?)?;
    let r: Vec<T> = dh.iter().zip(&rate).map(|(&a, &b)| a - b).collect();
    Ok(interior_max_abs(&r))
}

/// Largest `|H(t_k) − H(t_0)|` along the trajectory.
pub fn energy_drift<T: Scalar>(nf: &NormalForm, traj: &Trajectory<T>) -> Result<T> {
    require_phase_trajectory(nf, traj)?;
    let h = traj.eval(&nf.hamiltonian)?;
    Ok(h.iter().fold(T::zero(), |acc, &v| acc.max((v - h[0]).abs())))
}
