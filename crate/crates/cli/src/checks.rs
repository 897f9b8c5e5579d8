//! Named checks a scenario can request, with their default tolerances.

use std::fmt;

use hamflow_core::geometry::{bracket_decomposition, lie_bracket, poisson_bracket, realize, symplectic_gradient};
use hamflow_core::hj::{closure_residual, generalized_hj_residual, gradient_hj_residual, hj_residual, DEFAULT_HJ_POINTS};
use hamflow_core::mechanics::ode::rk4;
use hamflow_core::mechanics::{
    energy_balance_residual, energy_drift, energy_theorem_residual, euler_lagrange_residual, hamilton_rhs,
    integrate_hamilton, legendre_transform, max_integrability_residual, newtonian_residual, normal_form_consistency,
    total_energy, NewtonianSystem,
};
use hamflow_core::sampling::{FieldSampler, DEFAULT_POINTS};
use hamflow_core::{fd_check, ChartSpec, Error, NormalForm, NormalFormVectorField, ScalarField, Trajectory64};

use crate::error::CliError;
use crate::scenario::{Model, System};

/// Number of random pairs or triples drawn by the algebraic checks.
const ALGEBRA_SAMPLES: u64 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Check {
    EnergyBalance,
    EnergyDrift,
    ClassicalReduction,
    EulerLagrange,
    CrossPicture,
    ReferenceTrajectory,
    Integrability,
    CanonicalRelations,
    BracketDecomposition,
    Homomorphism,
    Jacobi,
    NormalFormConsistency,
    HjResidual,
    GeneralizedHj,
    HjGradient,
    Closure,
    LegendreRoundTrip,
    HamiltonianMatch,
    SymbolicDerivatives,
}

impl Check {
    pub const ALL: [Check; 19] = [
        Check::EnergyBalance,
        Check::EnergyDrift,
        Check::ClassicalReduction,
        Check::EulerLagrange,
        Check::CrossPicture,
        Check::ReferenceTrajectory,
        Check::Integrability,
        Check::CanonicalRelations,
        Check::BracketDecomposition,
        Check::Homomorphism,
        Check::Jacobi,
        Check::NormalFormConsistency,
        Check::HjResidual,
        Check::GeneralizedHj,
        Check::HjGradient,
        Check::Closure,
        Check::LegendreRoundTrip,
        Check::HamiltonianMatch,
        Check::SymbolicDerivatives,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::EnergyBalance => "energy_balance",
            Check::EnergyDrift => "energy_drift",
            Check::ClassicalReduction => "classical_reduction",
            Check::EulerLagrange => "euler_lagrange",
            Check::CrossPicture => "cross_picture",
            Check::ReferenceTrajectory => "reference_trajectory",
            Check::Integrability => "integrability",
            Check::CanonicalRelations => "canonical_relations",
            Check::BracketDecomposition => "bracket_decomposition",
            Check::Homomorphism => "homomorphism",
            Check::Jacobi => "jacobi",
            Check::NormalFormConsistency => "normal_form_consistency",
            Check::HjResidual => "hj_residual",
            Check::GeneralizedHj => "generalized_hj",
            Check::HjGradient => "hj_gradient",
            Check::Closure => "closure",
            Check::LegendreRoundTrip => "legendre_round_trip",
            Check::HamiltonianMatch => "hamiltonian_match",
            Check::SymbolicDerivatives => "symbolic_derivatives",
        }
    }

    pub fn from_name(name: &str) -> Result<Self, CliError> {
        Self::ALL.into_iter().find(|c| c.name() == name).ok_or_else(|| {
            let valid: Vec<_> = Self::ALL.iter().map(|c| c.name()).collect();
            CliError::Config(format!("unknown check `{name}`; valid checks: {}", valid.join(", ")))
        })
    }

    pub fn default_tolerance(self) -> f64 {
        match self {
            Check::EnergyBalance | Check::CrossPicture | Check::ReferenceTrajectory => 1e-6,
            Check::EnergyDrift | Check::BracketDecomposition | Check::Homomorphism | Check::Jacobi => 1e-9,
            Check::ClassicalReduction | Check::CanonicalRelations | Check::Closure => 1e-12,
            Check::EulerLagrange | Check::Integrability | Check::SymbolicDerivatives => 1e-5,
            Check::HjGradient => 1e-8,
            Check::NormalFormConsistency
            | Check::HjResidual
            | Check::GeneralizedHj
            | Check::LegendreRoundTrip
            | Check::HamiltonianMatch => 1e-10,
        }
    }

    /// Checks that read the integrated trajectory or integrate on their own;
    /// `verify` skips them.
    pub fn needs_integration(self) -> bool {
        matches!(
            self,
            Check::EnergyBalance
                | Check::EnergyDrift
                | Check::ClassicalReduction
                | Check::EulerLagrange
                | Check::CrossPicture
                | Check::ReferenceTrajectory
        )
    }

    /// Rejects checks whose system variant or scenario section is missing.
    pub fn applicable(self, model: &Model) -> Result<(), CliError> {
        let nf = model.normal_form();
        let lagrangian = model.lagrangian();
        let has_s = model.hj.as_ref().is_some_and(|hj| hj.generating_function.is_some());
        let problem = match self {
            Check::EnergyBalance if nf.is_none() && lagrangian.is_none() => Some("a normal_form or lagrangian system"),
            Check::EnergyDrift => match &model.system {
                System::NormalForm(nf) if nf.is_exact() && !nf.hamiltonian.depends_on(0) => None,
                System::Lagrangian(l) if !l.depends_on(0) => None,
                _ => Some("a time-independent lagrangian or a normal_form without terms and without t in H"),
            },
            Check::ClassicalReduction if nf.is_none() => Some("a normal_form system"),
            Check::EulerLagrange if nf.is_some() => Some("a lagrangian or fundamental_form system"),
            Check::CrossPicture if lagrangian.is_none() && (nf.is_none() || model.counterpart.is_none()) => {
                Some("a lagrangian system, or a normal_form system with a `counterpart` section")
            }
            Check::ReferenceTrajectory if model.reference.is_none() => Some("a `reference` section"),
            Check::Integrability if model.curve.is_none() => Some("a `curve` section"),
            Check::NormalFormConsistency if nf.is_none() || model.eta.is_none() => {
                Some("a normal_form system and an `eta` section")
            }
            Check::HjResidual | Check::HjGradient if nf.is_none() || !has_s => {
                Some("a normal_form system and an `hj.S` section")
            }
            Check::GeneralizedHj if nf.is_none() || model.hj.is_none() => Some("a normal_form system and an `hj` section"),
            Check::Closure if model.hj.is_none() => Some("an `hj` section"),
            Check::LegendreRoundTrip if lagrangian.is_none() => Some("a lagrangian system"),
            Check::HamiltonianMatch if lagrangian.is_none() || model.hamiltonian.is_none() => {
                Some("a lagrangian system and a `hamiltonian` section")
            }
            _ => None,
        };
        match problem {
            Some(need) => Err(CliError::Config(format!("check `{}` needs {need}", self.name()))),
            None => Ok(()),
        }
    }

    /// Measured value; the check passes when it is at most the tolerance.
    pub fn measure(self, model: &Model, trajectory: Option<&Trajectory64>) -> Result<f64, CliError> {
        let traj = || trajectory.ok_or_else(|| CliError::Config(format!("check `{}` needs a trajectory", self.name())));
        let value = match self {
            Check::EnergyBalance => match &model.system {
                System::NormalForm(nf) => energy_balance_residual(nf, traj()?)?,
                System::Lagrangian(l) => energy_theorem_residual(l, traj()?)?,
                System::FundamentalForm(_) => unreachable!("rejected by `applicable`"),
            },
            Check::EnergyDrift => match &model.system {
                System::NormalForm(nf) => energy_drift(nf, traj()?)?,
                System::Lagrangian(l) => {
                    let e = total_energy(l, traj()?)?;
                    e.iter().fold(0.0_f64, |acc, v| acc.max((v - e[0]).abs()))
                }
                System::FundamentalForm(_) => unreachable!("rejected by `applicable`"),
            },
            Check::ClassicalReduction => classical_reduction(model)?,
            Check::EulerLagrange => match &model.system {
                System::Lagrangian(l) => euler_lagrange_residual(l, traj()?)?,
                System::FundamentalForm(phi) => newtonian_residual(phi, traj()?)?,
                System::NormalForm(_) => unreachable!("rejected by `applicable`"),
            },
            Check::CrossPicture => cross_picture(model, traj()?)?,
            Check::ReferenceTrajectory => reference_gap(model, traj()?)?,
            Check::Integrability => {
                let curve = model.curve.as_ref().expect("checked by `applicable`");
                let sampled =
                    Trajectory64::from_curve(&curve.x, curve.v.as_deref(), model.initial[0], model.t1, model.step)?;
                (max_integrability_residual(&sampled)? - curve.expected).abs()
            }
            Check::CanonicalRelations => canonical_relations(model.dimension)?,
            Check::BracketDecomposition => decomposition(model)?,
            Check::Homomorphism => homomorphism(model)?,
            Check::Jacobi => jacobi(model)?,
            Check::NormalFormConsistency => {
                let nf = model.normal_form().expect("checked by `applicable`");
                normal_form_consistency(nf, model.eta.as_ref().expect("checked by `applicable`"), &phase_points(model))?
            }
            Check::HjResidual => {
                let (s, nf) = hj_parts(model);
                hj_residual(s, &nf.hamiltonian, &configuration_points(model))?
            }
            Check::GeneralizedHj => {
                let hj = model.hj.as_ref().expect("checked by `applicable`");
                let nf = model.normal_form().expect("checked by `applicable`");
                let (a, b) = generalized_hj_residual(&hj.contact_field, nf, &configuration_points(model))?;
                a.max(b)
            }
            Check::HjGradient => {
                let (s, nf) = hj_parts(model);
                gradient_hj_residual(s, nf, &configuration_points(model))?
            }
            Check::Closure => {
                let hj = model.hj.as_ref().expect("checked by `applicable`");
                (closure_residual(&hj.contact_field, &configuration_points(model))? - hj.expected_closure).abs()
            }
            Check::LegendreRoundTrip => legendre_round_trip(model)?,
            Check::HamiltonianMatch => hamiltonian_match(model)?,
            Check::SymbolicDerivatives => symbolic_derivatives(model)?,
        };
        Ok(value)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Integrates the scenario's system from its initial point.
pub fn simulate(model: &Model) -> Result<Trajectory64, CliError> {
    let traj = match &model.system {
        System::NormalForm(nf) => integrate_hamilton(nf, &model.initial, model.t1, model.step)?,
        System::Lagrangian(l) => newtonian(&hamflow_core::FundamentalForm::from_lagrangian(l)?, model)?,
        System::FundamentalForm(phi) => newtonian(phi, model)?,
    };
    Ok(traj)
}

fn newtonian(phi: &hamflow_core::FundamentalForm, model: &Model) -> Result<Trajectory64, Error> {
    NewtonianSystem::new(phi).integrate(&model.initial, model.t1, model.step)
}

fn phase_points(model: &Model) -> Vec<Vec<f64>> {
    model.sample_box.sample(DEFAULT_POINTS, model.seed)
}

fn configuration_points(model: &Model) -> Vec<Vec<f64>> {
    model.configuration_box().sample(DEFAULT_HJ_POINTS, model.seed)
}

fn hj_parts(model: &Model) -> (&hamflow_core::GeneratingFunction, &NormalForm) {
    let s = model.hj.as_ref().and_then(|hj| hj.generating_function.as_ref()).expect("checked by `applicable`");
    (s, model.normal_form().expect("checked by `applicable`"))
}

fn max_gap(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter().zip(b).flat_map(|(u, w)| u.iter().zip(w).map(|(p, q)| (p - q).abs())).fold(0.0, f64::max)
}

/// Gap between the normal form with every μ set to zero and the exact form
/// of the same Hamiltonian.
fn classical_reduction(model: &Model) -> Result<f64, CliError> {
    let nf = model.normal_form().expect("checked by `applicable`");
    let zeroed = NormalForm::new(
        nf.hamiltonian.clone(),
        nf.terms.iter().map(|(mu, v)| (mu.scale(0.0), v.clone())).collect(),
    )?;
    let exact = NormalForm::exact(nf.hamiltonian.clone())?;
    let a = integrate_hamilton(&zeroed, &model.initial, model.t1, model.step)?;
    let b = integrate_hamilton(&exact, &model.initial, model.t1, model.step)?;
    if a.len() != b.len() {
        return Ok(f64::INFINITY);
    }
    Ok(max_gap(a.points(), b.points()))
}

/// Integrates the other picture of the same system and compares positions.
fn cross_picture(model: &Model, traj: &Trajectory64) -> Result<f64, CliError> {
    let n = model.dimension;
    let other: Vec<Vec<f64>> = match &model.system {
        System::Lagrangian(l) => {
            // Hamilton's equations through the numerical Legendre transform
            let lt = legendre_transform(l)?;
            let chart = l.chart();
            let forces: Vec<ScalarField> = (0..n).map(|i| l.diff_at(chart.x_index(i))).collect();
            let p0 = lt.momenta(&model.initial)?;
            let y0: Vec<f64> = model.initial[1..=n].iter().copied().chain(p0).collect();
            let solution = rk4(
                |t, y: &[f64]| {
                    let mut phase = vec![t];
                    phase.extend_from_slice(y);
                    let v = lt.velocity(&phase)?;
                    let mut point = phase[..=n].to_vec();
                    point.extend(&v);
                    let mut dy = v;
                    for f in &forces {
                        dy.push(f.eval(&point)?);
                    }
                    Ok(dy)
                },
                model.initial[0],
                &y0,
                model.t1,
                model.step,
            )?;
            solution.states
        }
        System::NormalForm(nf) => {
            let phi = model.counterpart.as_ref().expect("checked by `applicable`");
            let (xdot, _) = hamilton_rhs(nf, &model.initial)?;
            let start: Vec<f64> = model.initial[..=n].iter().copied().chain(xdot).collect();
            let other = NewtonianSystem::new(phi).integrate(&start, model.t1, model.step)?;
            other.points().iter().map(|p| p[1..].to_vec()).collect()
        }
        System::FundamentalForm(_) => unreachable!("rejected by `applicable`"),
    };
    if other.len() != traj.len() {
        return Ok(f64::INFINITY);
    }
    let positions = |rows: Vec<Vec<f64>>| rows.into_iter().map(|mut r| {
        r.truncate(n);
        r
    }).collect::<Vec<_>>();
    let ours = positions(traj.points().iter().map(|p| p[1..].to_vec()).collect());
    Ok(max_gap(&ours, &positions(other)))
}

fn reference_gap(model: &Model, traj: &Trajectory64) -> Result<f64, CliError> {
    let reference = model.reference.as_ref().expect("checked by `applicable`");
    let n = model.dimension;
    let mut worst: f64 = 0.0;
    for k in 0..traj.len() {
        let point = &traj.point(k)[..=n];
        for (i, x) in reference.iter().enumerate() {
            worst = worst.max((traj.x(k, i) - x.eval(point)?).abs());
        }
    }
    Ok(worst)
}

fn canonical_relations(n: usize) -> Result<f64, CliError> {
    let chart = ChartSpec::momentum(n);
    let x = |i| ScalarField::coordinate_at(chart, chart.x_index(i));
    let p = |i| ScalarField::coordinate_at(chart, chart.fiber_index(i));
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let delta = if i == j { 1.0 } else { 0.0 };
            for (a, b, expected) in [(x(i), x(j), 0.0), (p(i), p(j), 0.0), (x(i), p(j), delta)] {
                let bracket = poisson_bracket(&a, &b)?;
                let value = bracket.as_constant().unwrap_or(f64::INFINITY);
                worst = worst.max((value - expected).abs());
            }
        }
    }
    Ok(worst)
}

fn random_normal_form(s: &mut FieldSampler, chart: ChartSpec, terms: usize) -> Result<NormalFormVectorField, Error> {
    let f = s.polynomial(chart, 2, false);
    let terms = (0..terms).map(|_| (s.polynomial(chart, 2, false), s.polynomial(chart, 2, false))).collect();
    NormalFormVectorField::new(f, terms)
}

/// Largest `|a − b| / max(1, |a|)` over components and points.
fn relative_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, w)| (u - w).abs() / u.abs().max(1.0)).fold(0.0, f64::max)
}

/// Decomposed bracket against the direct Lie bracket, over seeded pairs; the
/// scenario's own normal form takes the first slot of every other pair.
fn decomposition(model: &Model) -> Result<f64, CliError> {
    let chart = ChartSpec::momentum(model.dimension);
    let points = phase_points(model);
    let own = model.normal_form().map(NormalForm::to_vector_field);
    let mut worst: f64 = 0.0;
    for k in 0..ALGEBRA_SAMPLES {
        let mut s = FieldSampler::new(model.seed.wrapping_add(k));
        let b = random_normal_form(&mut s, chart, (k as usize / 2) % 3)?;
        let a = match &own {
            Some(a) if k % 2 == 0 => a.clone(),
            _ => random_normal_form(&mut s, chart, k as usize % 3)?,
        };
        let direct = lie_bracket(&realize(&a)?, &realize(&b)?)?;
        let assembled = bracket_decomposition(&a, &b)?;
        for point in &points {
            worst = worst.max(relative_gap(&direct.eval(point)?, &assembled.eval(point)?));
        }
    }
    Ok(worst)
}

fn random_triple(model: &Model, k: u64) -> [ScalarField; 3] {
    let chart = ChartSpec::momentum(model.dimension);
    let mut s = FieldSampler::new(model.seed.wrapping_add(1000 + k));
    let first = match model.normal_form() {
        Some(nf) if k % 2 == 0 => nf.hamiltonian.clone(),
        _ => s.polynomial(chart, 3, true),
    };
    [first, s.polynomial(chart, 3, true), s.polynomial(chart, 3, true)]
}

/// `∇Ω{f, g}` against `[∇Ω f, ∇Ω g]`.
fn homomorphism(model: &Model) -> Result<f64, CliError> {
    let points = phase_points(model);
    let mut worst: f64 = 0.0;
    for k in 0..ALGEBRA_SAMPLES {
        let [f, g, _] = random_triple(model, k);
        let lhs = symplectic_gradient(&poisson_bracket(&f, &g)?)?;
        let rhs = lie_bracket(&symplectic_gradient(&f)?, &symplectic_gradient(&g)?)?;
        for point in &points {
            worst = worst.max(relative_gap(&lhs.eval(point)?, &rhs.eval(point)?));
        }
    }
    Ok(worst)
}

/// Cyclic sum of nested brackets, relative to its largest term.
fn jacobi(model: &Model) -> Result<f64, CliError> {
    let points = phase_points(model);
    let mut worst: f64 = 0.0;
    for k in 0..ALGEBRA_SAMPLES {
        let [f, g, h] = random_triple(model, k);
        let terms = [
            poisson_bracket(&f, &poisson_bracket(&g, &h)?)?,
            poisson_bracket(&g, &poisson_bracket(&h, &f)?)?,
            poisson_bracket(&h, &poisson_bracket(&f, &g)?)?,
        ];
        for point in &points {
            let values = terms.iter().map(|t| t.eval(point)).collect::<Result<Vec<f64>, Error>>()?;
            let scale = values.iter().fold(1.0_f64, |acc, v| acc.max(v.abs()));
            worst = worst.max(values.iter().sum::<f64>().abs() / scale);
        }
    }
    Ok(worst)
}

fn legendre_round_trip(model: &Model) -> Result<f64, CliError> {
    let l = model.lagrangian().expect("checked by `applicable`");
    let lt = legendre_transform(l)?;
    let n = model.dimension;
    let mut worst: f64 = 0.0;
    for point in phase_points(model) {
        let mut phase = point[..=n].to_vec();
        phase.extend(lt.momenta(&point)?);
        let v = lt.velocity(&phase)?;
        worst = v.iter().zip(&point[n + 1..]).fold(worst, |acc, (a, b)| acc.max((a - b).abs()));
    }
    Ok(worst)
}

fn hamiltonian_match(model: &Model) -> Result<f64, CliError> {
    let l = model.lagrangian().expect("checked by `applicable`");
    let given = model.hamiltonian.as_ref().expect("checked by `applicable`");
    let lt = legendre_transform(l)?;
    let n = model.dimension;
    let mut worst: f64 = 0.0;
    for point in phase_points(model) {
        let mut phase = point[..=n].to_vec();
        phase.extend(lt.momenta(&point)?);
        worst = worst.max((lt.hamiltonian(&phase)? - given.eval(&phase)?).abs());
    }
    Ok(worst)
}

/// Symbolic partials of every system expression against central differences;
/// points outside an expression's domain are skipped.
fn symbolic_derivatives(model: &Model) -> Result<f64, CliError> {
    let points = phase_points(model);
    let mut worst: f64 = 0.0;
    for field in model.system.fields() {
        for name in field.chart().coordinate_names() {
            for point in &points {
                match fd_check(field, &name, point) {
                    Ok((symbolic, numeric)) => {
                        worst = worst.max((symbolic - numeric).abs() / symbolic.abs().max(1.0));
                    }
                    Err(Error::Domain { .. }) => {}
                    Err(e) => return Err(e.into()),
                }
            }
        }
    }
    Ok(worst)
}
