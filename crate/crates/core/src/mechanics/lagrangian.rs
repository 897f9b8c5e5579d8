//! Functionals of a Lagrangian along velocity-chart curves.

use crate::error::{Error, Result};
use crate::expr::{ChartKind, ScalarField};
use crate::mechanics::calculus::{interior_max_abs, time_derivative, trapezoid};
use crate::mechanics::trajectory::Trajectory;
use crate::mechanics::virtual_work::{virtual_work_total, FirstVariation, FundamentalForm, VariationField};
use crate::scalar::Scalar;

/// Absolute bound on `|v − dx/dt|` for a curve to count as integrable.
pub const INTEGRABILITY_TOLERANCE: f64 = 1e-4;

pub(crate) fn require_velocity<T: Scalar>(traj: &Trajectory<T>) -> Result<()> {
    if traj.kind() == ChartKind::Velocity {
        Ok(())
    } else {
        Err(Error::ChartMismatch(format!("expected a velocity-chart trajectory, got {:?}", traj.kind())))
    }
}

pub(crate) fn require_lagrangian<T: Scalar>(l: &ScalarField, traj: &Trajectory<T>) -> Result<()> {
    require_velocity(traj)?;
    if l.chart() != traj.chart() {
        return Err(Error::ChartMismatch(format!("Lagrangian on {:?}, trajectory on {:?}", l.chart(), traj.chart())));
    }
    Ok(())
}

/// `rⁱ(t_k) = vⁱ(t_k) − ẋⁱ(t_k)` per sample, with `ẋ` from sampled differences.
pub fn integrability_residual<T: Scalar>(traj: &Trajectory<T>) -> Result<Vec<Vec<T>>> {
    require_velocity(traj)?;
    let chart = traj.chart();
    let n = chart.dimension();
    let xdot: Vec<Vec<T>> =
        (0..n).map(|i| time_derivative(&traj.series(chart.x_index(i)), traj.step())).collect::<Result<_>>()?;
    Ok((0..traj.len()).map(|k| (0..n).map(|i| traj.fiber(k, i) - xdot[i][k]).collect()).collect())
}

/// Largest `|rⁱ(t_k)|` over all samples and components.
pub fn max_integrability_residual<T: Scalar>(traj: &Trajectory<T>) -> Result<T> {
    let r = integrability_residual(traj)?;
    Ok(r.iter().flatten().fold(T::zero(), |acc, v| acc.max(v.abs())))
}

/// Fails with [`Error::NonIntegrable`] when `v` is not the derivative of `x`.
///
/// The bound is [`INTEGRABILITY_TOLERANCE`], widened to the round-off floor
/// of a central difference for coarse scalar types.
pub fn require_integrable<T: Scalar>(traj: &Trajectory<T>) -> Result<()> {
    let worst = max_integrability_residual(traj)?;
    let scale = traj.points().iter().flatten().fold(T::one(), |acc, v| acc.max(v.abs()));
    let tolerance = T::lit(INTEGRABILITY_TOLERANCE).max(T::lit(8.0) * T::epsilon() * scale / traj.step());
    if worst <= tolerance {
        Ok(())
    } else {
        Err(Error::NonIntegrable { max_residual: worst.as_f64() })
    }
}

/// `S = ∫ L(t, x, ẋ) dt` by the trapezoid rule.
pub fn action_value<T: Scalar>(l: &ScalarField, traj: &Trajectory<T>) -> Result<T> {
    require_lagrangian(l, traj)?;
    require_integrable(traj)?;
    Ok(trapezoid(&traj.eval(l)?, traj.step()))
}

/// Momentum map `pᵢ = ∂L/∂vⁱ`.
pub fn momentum_map(l: &ScalarField) -> Result<Vec<ScalarField>> {
    let chart = l.chart();
    if chart.kind() != ChartKind::Velocity {
        return Err(Error::ChartMismatch(format!("Lagrangian must live on a velocity chart, got {:?}", chart.kind())));
    }
    Ok((0..chart.dimension()).map(|i| l.diff_at(chart.fiber_index(i))).collect())
}

/// Mass matrix `mᵢⱼ = ∂²L/∂vⁱ∂vʲ`.
pub fn mass_matrix(l: &ScalarField) -> Result<Vec<Vec<ScalarField>>> {
    let chart = l.chart();
    Ok(momentum_map(l)?
        .iter()
        .map(|pi| (0..chart.dimension()).map(|j| pi.diff_at(chart.fiber_index(j))).collect())
        .collect())
}

/// `δL/δxⁱ = d/dt(∂L/∂vⁱ) − ∂L/∂xⁱ` per sample.
pub fn variational_derivative<T: Scalar>(l: &ScalarField, traj: &Trajectory<T>) -> Result<Vec<Vec<T>>> {
    require_lagrangian(l, traj)?;
    require_integrable(traj)?;
    let chart = traj.chart();
    let n = chart.dimension();
    let mut columns = Vec::with_capacity(n);
    for i in 0..n {
        let momentum = traj.eval(&l.diff_at(chart.fiber_index(i)))?;
        let force = traj.eval(&l.diff_at(chart.x_index(i)))?;
        let pdot = time_derivative(&momentum, traj.step())?;
        columns.push(pdot.iter().zip(&force).map(|(&a, &b)| a - b).collect::<Vec<T>>());
    }
    Ok((0..traj.len()).map(|k| columns.iter().map(|c| c[k]).collect()).collect())
}

/// Max-norm of the variational derivative over interior samples.
pub fn euler_lagrange_residual<T: Scalar>(l: &ScalarField, traj: &Trajectory<T>) -> Result<T> {
    let vd = variational_derivative(l, traj)?;
    let n = traj.dimension();
    Ok((0..n).fold(T::zero(), |acc, i| {
        let column: Vec<T> = vd.iter().map(|row| row[i]).collect();
        acc.max(interior_max_abs(&column))
    }))
}

/// `δS = −∫ (δL/δxⁱ) δxⁱ dt + [∂L/∂vⁱ δxⁱ]`, split into its two parts.
pub fn first_variation<T: Scalar>(
    l: &ScalarField,
    traj: &Trajectory<T>,
    delta: &VariationField<T>,
) -> Result<FirstVariation<T>> {
    require_lagrangian(l, traj)?;
    virtual_work_total(&FundamentalForm::from_lagrangian(l)?, traj, delta)
}

/// `∫ (∂L/∂xⁱ δxⁱ + ∂L/∂vⁱ δvⁱ) dt` with `δv` from sampled differences: the
/// first variation before integration by parts.
pub fn direct_first_variation<T: Scalar>(
    l: &ScalarField,
    traj: &Trajectory<T>,
    delta: &VariationField<T>,
) -> Result<T> {
    require_lagrangian(l, traj)?;
    require_integrable(traj)?;
    delta.check_against(traj)?;
    let chart = traj.chart();
    let dv = delta.velocities(traj.step())?;
    let mut integrand = vec![T::zero(); traj.len()];
    for i in 0..chart.dimension() {
        let lx = traj.eval(&l.diff_at(chart.x_index(i)))?;
        let lv = traj.eval(&l.diff_at(chart.fiber_index(i)))?;
        for k in 0..traj.len() {
            integrand[k] = integrand[k] + lx[k] * delta.value(k, i) + lv[k] * dv[k][i];
        }
    }
    Ok(trapezoid(&integrand, traj.step()))
}

/// `E = ∂L/∂vⁱ ẋⁱ − L` per sample, with `ẋ` read from the velocity slot of
/// the (integrable) curve.
pub fn total_energy<T: Scalar>(l: &ScalarField, traj: &Trajectory<T>) -> Result<Vec<T>> {
    require_lagrangian(l, traj)?;
    require_integrable(traj)?;
    let chart = traj.chart();
    let momenta = momentum_map(l)?;
    traj.points()
        .iter()
        .map(|point| {
            let mut e = -l.eval(point)?;
            for (i, p) in momenta.iter().enumerate() {
                e = e + p.eval(point)? * point[chart.fiber_index(i)];
            }
            Ok(e)
        })
        .collect()
}

/// Max over interior samples of `|dE/dt + ∂L/∂t|`; vanishes along extremals.
pub fn energy_theorem_residual<T: Scalar>(l: &ScalarField, traj: &Trajectory<T>) -> Result<T> {
    let energy = total_energy(l, traj)?;
    let de = time_derivative(&energy, traj.step())?;
    let lt = traj.eval(&l.diff_at(0))?;
    let r: Vec<T> = de.iter().zip(&lt).map(|(&a, &b)| a + b).collect();
    Ok(interior_max_abs(&r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::ChartSpec;
    use crate::mechanics::virtual_work::BoundaryCondition;

    fn lagrangian(src: &str) -> ScalarField {
        ScalarField::parse(src, ChartSpec::velocity(1)).unwrap()
    }

    fn curve(src: &[&str], t0: f64, t1: f64, h: f64) -> Trajectory<f64> {
        let base = ChartSpec::configuration(src.len());
        let x: Vec<_> = src.iter().map(|s| ScalarField::parse(s, base).unwrap()).collect();
        Trajectory::from_curve(&x, None, t0, t1, h).unwrap()
    }

    fn variation(src: &str, traj: &Trajectory<f64>) -> VariationField<f64> {
        let f = ScalarField::parse(src, ChartSpec::configuration(1)).unwrap();
        VariationField::from_fields(&[f], traj).unwrap()
    }

    #[test]
    fn action_examples() {
        let traj = curve(&["t"], 0.0, 1.0, 1e-3);
        assert_eq!(action_value(&lagrangian("0"), &traj).unwrap(), 0.0);
        assert!((action_value(&lagrangian("v1^2/2"), &traj).unwrap() - 0.5).abs() <= 1e-6);
        let traj = curve(&["t"], 0.0, 2.0, 1e-3);
        assert!((action_value(&lagrangian("v1^2"), &traj).unwrap() - 2.0).abs() <= 1e-5);
    }

    #[test]
    fn action_rejects_non_integrable_curves() {
        let base = ChartSpec::configuration(1);
        let x = [ScalarField::parse("t", base).unwrap()];
        let v = [ScalarField::parse("0", base).unwrap()];
        let traj: Trajectory<f64> = Trajectory::from_curve(&x, Some(&v), 0.0, 1.0, 1e-2).unwrap();
        assert!(matches!(action_value(&lagrangian("v1^2"), &traj), Err(Error::NonIntegrable { .. })));
    }

    #[test]
    fn integrability_examples() {
        let traj = curve(&["sin(t)"], 0.0, 3.0, 1e-3);
        assert!(max_integrability_residual(&traj).unwrap() <= 1e-5);

        let base = ChartSpec::configuration(1);
        let x = [ScalarField::parse("t", base).unwrap()];
        let v = [ScalarField::parse("0", base).unwrap()];
        let traj: Trajectory<f64> = Trajectory::from_curve(&x, Some(&v), 0.0, 1.0, 1e-2).unwrap();
        for r in integrability_residual(&traj).unwrap() {
            assert!((r[0] + 1.0).abs() < 1e-12);
        }

        // rotating frame: v = ẋ + ωx with ω the unit rotation generator
        let base = ChartSpec::configuration(2);
        let parse = |s: &str| ScalarField::parse(s, base).unwrap();
        let x = [parse("cos(t)"), parse("sin(t)")];
        let v = [parse("-2*sin(t)"), parse("2*cos(t)")];
        let traj: Trajectory<f64> = Trajectory::from_curve(&x, Some(&v), 0.0, 2.0 * std::f64::consts::PI, 1e-3).unwrap();
        let r = integrability_residual(&traj).unwrap();
        for (k, rk) in r.iter().enumerate() {
            let t = traj.time(k);
            assert!((rk[0] + t.sin()).abs() <= 1e-5 && (rk[1] - t.cos()).abs() <= 1e-5);
        }
        assert!((max_integrability_residual(&traj).unwrap() - 1.0).abs() <= 1e-5);
    }

    #[test]
    fn variational_derivative_examples() {
        let traj = curve(&["t"], 0.0, 1.0, 1e-3);
        assert_eq!(euler_lagrange_residual(&lagrangian("v1^2/2"), &traj).unwrap(), 0.0);

        let traj = curve(&["cos(t)"], 0.0, 5.0, 1e-3);
        assert!(euler_lagrange_residual(&lagrangian("(v1^2 - x1^2)/2"), &traj).unwrap() <= 1e-4);

        let traj = curve(&["t^2"], 0.0, 1.0, 1e-3);
        for row in variational_derivative(&lagrangian("v1^2/2"), &traj).unwrap() {
            assert!((row[0] - 2.0).abs() < 1e-9);
        }
        assert!((euler_lagrange_residual(&lagrangian("v1^2/2"), &traj).unwrap() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn first_variation_examples() {
        let l = lagrangian("v1^2/2");
        let traj = curve(&["t"], 0.0, 1.0, 1e-3);
        let zero = first_variation(&l, &traj, &VariationField::zero(&traj)).unwrap();
        assert_eq!((zero.interior, zero.boundary), (0.0, 0.0));

        let bump = variation("sin(pi*t)", &traj);
        let fv = first_variation(&l, &traj, &bump).unwrap();
        assert!(fv.interior.abs() <= 1e-6);
        assert!(fv.boundary.abs() <= 1e-12);
        assert!(fv.stationarity_defect(BoundaryCondition::FixedEndpoints) <= 1e-6);

        let traj = curve(&["t^2"], 0.0, 1.0, 1e-3);
        let fv = first_variation(&l, &traj, &variation("1", &traj)).unwrap();
        assert!((fv.interior + 2.0).abs() <= 1e-9);
        assert!((fv.boundary - 2.0).abs() <= 1e-9);
        assert!(fv.total().abs() <= 1e-9);
        assert!((fv.stationarity_defect(BoundaryCondition::Transversality) - 2.0).abs() <= 1e-9);
    }

    #[test]
    fn first_variation_matches_unintegrated_form() {
        let l = lagrangian("(v1^2 - x1^2)/2 + t*x1*v1");
        let traj = curve(&["sin(2*t) + t"], 0.0, 2.0, 1e-3);
        let delta = variation("cos(t) + t^2", &traj);
        let fv = first_variation(&l, &traj, &delta).unwrap();
        let direct = direct_first_variation(&l, &traj, &delta).unwrap();
        // both are second-order approximations of the same integral
        assert!((fv.total() - direct).abs() <= 1e-4 * direct.abs().max(1.0), "{} vs {direct}", fv.total());
    }

    #[test]
    fn energy_examples() {
        let traj = curve(&["cos(t)"], 0.0, 5.0, 1e-3);
        let e = total_energy(&lagrangian("(v1^2 - x1^2)/2"), &traj).unwrap();
        assert!(e.iter().all(|v| (v - 0.5).abs() <= 1e-6));

        let traj = curve(&["t"], 0.0, 1.0, 1e-3);
        let e = total_energy(&lagrangian("v1^2/2"), &traj).unwrap();
        assert!(e.iter().all(|v| (v - 0.5).abs() <= 1e-15));
    }

    #[test]
    fn energy_theorem_along_integrated_extremal() {
        let l = lagrangian("v1^2/2 - t*x1");
        let phi = crate::mechanics::FundamentalForm::from_lagrangian(&l).unwrap();
        let traj = crate::mechanics::NewtonianSystem::new(&phi).integrate(&[0.0f64, 0.3, -0.2], 3.0, 1e-3).unwrap();
        assert!(euler_lagrange_residual(&l, &traj).unwrap() <= 1e-4);
        assert!(energy_theorem_residual(&l, &traj).unwrap() <= 1e-4);
        // extremal x = −t³/6 + x0 + v0 t
        let end = traj.last();
        let expected = -27.0 / 6.0 + 0.3 - 0.2 * 3.0;
        assert!((end[1] - expected).abs() <= 1e-9);
    }

    #[test]
    fn momentum_and_mass_examples() {
        let l = ScalarField::parse("(v1^2 + v2^2)/2", ChartSpec::velocity(2)).unwrap();
        let p = momentum_map(&l).unwrap();
        assert_eq!(p[0].to_string(), "v1");
        assert_eq!(p[1].to_string(), "v2");
        let m = mass_matrix(&l).unwrap();
        let values: Vec<Vec<Option<f64>>> = m.iter().map(|r| r.iter().map(ScalarField::as_constant).collect()).collect();
        assert_eq!(values, vec![vec![Some(1.0), Some(0.0)], vec![Some(0.0), Some(1.0)]]);

        let l = lagrangian("2*v1^2/2");
        assert_eq!(momentum_map(&l).unwrap()[0].eval(&[0.0, 0.0, 3.0]).unwrap(), 6.0);
        assert_eq!(mass_matrix(&l).unwrap()[0][0].as_constant(), Some(2.0));

        assert_eq!(mass_matrix(&lagrangian("v1")).unwrap()[0][0].as_constant(), Some(0.0));
        assert!(momentum_map(&ScalarField::parse("p1", ChartSpec::momentum(1)).unwrap()).is_err());
    }
}
