//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion misses its tolerance or its runtime budget.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use hamflow_core::geometry::{
    bracket_decomposition, lie_bracket, poisson_bracket, realize, symplectic_gradient,
};
use hamflow_core::hj::{closure_residual, generalized_hj_residual, gradient_hj_residual, hj_residual, DEFAULT_HJ_POINTS};
use hamflow_core::mechanics::{
    energy_balance_residual, energy_drift, euler_lagrange_residual, first_variation, integrate_hamilton,
    legendre_transform, FundamentalForm, NewtonianSystem, NormalForm,
};
use hamflow_core::sampling::{FieldSampler, SampleBox, DEFAULT_POINTS};
use hamflow_core::{
    fd_check, ChartSpec, ContactField, Error, GeneratingFunction, NormalFormVectorField, Result, ScalarField,
    Trajectory64, VariationField64,
};

mod common;
use common::{damped_closed_form, random_bump, Quadratic};

const GAMMA: f64 = 0.1;

/// Outcome of one criterion: named measurements against their tolerances.
struct Outcome {
    measurements: Vec<Measurement>,
}

struct Measurement {
    label: &'static str,
    value: f64,
    pass: bool,
    bound: String,
}

impl Outcome {
    fn new() -> Self {
        Self { measurements: Vec::new() }
    }

    fn at_most(mut self, label: &'static str, value: f64, tolerance: f64) -> Self {
        let pass = value <= tolerance;
        self.measurements.push(Measurement { label, value, pass, bound: format!("<= {tolerance:e}") });
        self
    }

    fn within(mut self, label: &'static str, value: f64, lo: f64, hi: f64) -> Self {
        let pass = (lo..=hi).contains(&value);
        self.measurements.push(Measurement { label, value, pass, bound: format!("in [{lo}, {hi}]") });
        self
    }

    fn holds(mut self, label: &'static str, pass: bool) -> Self {
        self.measurements.push(Measurement { label, value: f64::from(u8::from(pass)), pass, bound: "== 1".into() });
        self
    }

    fn passed(&self) -> bool {
        self.measurements.iter().all(|m| m.pass)
    }
}

type Criterion = (&'static str, Duration, fn() -> Result<Outcome>);

fn m(src: &str, n: usize) -> ScalarField {
    ScalarField::parse(src, ChartSpec::momentum(n)).unwrap()
}

fn v1(src: &str) -> ScalarField {
    ScalarField::parse(src, ChartSpec::velocity(1)).unwrap()
}

fn harmonic() -> NormalForm {
    NormalForm::exact(m("(x1^2 + p1^2)/2", 1)).unwrap()
}

fn damped(gamma: f64) -> NormalForm {
    NormalForm::new(m("(x1^2 + p1^2)/2", 1), vec![(m("p1", 1).scale(-gamma), m("x1", 1))]).unwrap()
}

fn canonical_relations() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for n in 1..=3 {
        let chart = ChartSpec::momentum(n);
        let x = |i: usize| ScalarField::coordinate_at(chart, chart.x_index(i));
        let p = |i: usize| ScalarField::coordinate_at(chart, chart.fiber_index(i));
        for i in 0..n {
            for j in 0..n {
                let delta = f64::from(u8::from(i == j));
                for (a, b, expected) in [(x(i), x(j), 0.0), (p(i), p(j), 0.0), (x(i), p(j), delta)] {
                    let value = poisson_bracket(&a, &b)?.as_constant().unwrap_or(f64::INFINITY);
                    worst = worst.max((value - expected).abs());
                }
            }
        }
    }
    Ok(Outcome::new().at_most("max |{.,.} - delta|", worst, 1e-12))
}

fn random_normal_form(s: &mut FieldSampler, chart: ChartSpec, terms: usize) -> Result<NormalFormVectorField> {
    let f = s.polynomial(chart, 2, false);
    let terms = (0..terms).map(|_| (s.polynomial(chart, 2, false), s.polynomial(chart, 2, false))).collect();
    NormalFormVectorField::new(f, terms)
}

fn bracket_decomposition_matches() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    let mut magnitude: f64 = 0.0;
    for k in 0..20u64 {
        let chart = ChartSpec::momentum(1 + (k as usize % 2));
        let mut s = FieldSampler::new(1000 + k);
        let a = random_normal_form(&mut s, chart, (k as usize / 2) % 3)?;
        let b = random_normal_form(&mut s, chart, (k as usize / 6) % 3)?;
        let direct = lie_bracket(&realize(&a)?, &realize(&b)?)?;
        let assembled = bracket_decomposition(&a, &b)?;
        for point in SampleBox::unit(&chart).sample::<f64>(DEFAULT_POINTS, k) {
            for (u, w) in direct.eval(&point)?.iter().zip(assembled.eval(&point)?) {
                worst = worst.max((u - w).abs());
                magnitude = magnitude.max(u.abs());
            }
        }
    }
    Ok(Outcome::new().at_most("max |decomposition - [a, b]|", worst, 1e-9).at_most("max |[a, b]|", magnitude, 10.0))
}

fn homomorphism_and_jacobi() -> Result<Outcome> {
    let mut hom: f64 = 0.0;
    let mut jacobi: f64 = 0.0;
    for k in 0..20u64 {
        let chart = ChartSpec::momentum(1 + (k as usize % 2));
        let mut s = FieldSampler::new(2000 + k);
        let (f, g, h) = (s.polynomial(chart, 3, false), s.polynomial(chart, 3, false), s.polynomial(chart, 3, false));
        let points = SampleBox::unit(&chart).sample::<f64>(DEFAULT_POINTS, k);
        let lhs = symplectic_gradient(&poisson_bracket(&f, &g)?)?;
        let rhs = lie_bracket(&symplectic_gradient(&f)?, &symplectic_gradient(&g)?)?;
        hom = hom.max(lhs.max_abs_difference(&rhs, &points)?);
        let pb = |a: &ScalarField, b: &ScalarField| poisson_bracket(a, b);
        let cyclic = &(&pb(&f, &pb(&g, &h)?)? + &pb(&g, &pb(&h, &f)?)?) + &pb(&h, &pb(&f, &g)?)?;
        for point in &points {
            jacobi = jacobi.max(cyclic.eval(point)?.abs());
        }
    }
    Ok(Outcome::new().at_most("homomorphism defect", hom, 1e-9).at_most("Jacobi defect", jacobi, 1e-9))
}

fn classical_reduction() -> Result<Outcome> {
    let two_pi = 2.0 * std::f64::consts::PI;
    let undamped = integrate_hamilton(&damped(0.0), &[0.0f64, 1.0, 0.0], two_pi, 1e-3)?;
    let classical = integrate_hamilton(&harmonic(), &[0.0f64, 1.0, 0.0], two_pi, 1e-3)?;
    let gap = undamped
        .points()
        .iter()
        .zip(classical.points())
        .flat_map(|(a, b)| a.iter().zip(b).map(|(u, w)| (u - w).abs()))
        .fold(0.0, f64::max);
    Ok(Outcome::new()
        .at_most("trajectory gap gamma=0 vs harmonic", gap, 1e-12)
        .at_most("energy drift", energy_drift(&harmonic(), &classical)?, 1e-9))
}

fn generalized_energy_balance() -> Result<Outcome> {
    let nf = damped(GAMMA);
    let traj = integrate_hamilton(&nf, &[0.0f64, 1.0, 0.0], 10.0, 1e-3)?;
    let closed = traj.points().iter().map(|p| (p[1] - damped_closed_form(GAMMA, p[0])).abs()).fold(0.0, f64::max);
    Ok(Outcome::new()
        .at_most("|dH/dt + gamma p^2|", energy_balance_residual(&nf, &traj)?, 1e-6)
        .at_most("closed-form gap", closed, 1e-6))
}

fn cross_picture() -> Result<Outcome> {
    let phi = FundamentalForm::from_kinetic_energy(&v1("v1^2/2"), &[v1("-0.1*v1 - x1")])?;
    let lagrange = NewtonianSystem::new(&phi).integrate(&[0.0f64, 1.0, 0.0], 10.0, 1e-3)?;
    let hamilton = integrate_hamilton(&damped(GAMMA), &[0.0f64, 1.0, 0.0], 10.0, 1e-3)?;
    let gap: f64 = (0..lagrange.len().min(hamilton.len()))
        .map(|k| (lagrange.x(k, 0) - hamilton.x(k, 0)).abs())
        .fold(0.0, f64::max);
    Ok(Outcome::new().at_most("max |x_L - x_H|", gap, 1e-6).holds("same sample count", lagrange.len() == hamilton.len()))
}

fn legendre() -> Result<Outcome> {
    let mut round_trip: f64 = 0.0;
    let mut hamiltonian: f64 = 0.0;
    for k in 0..10u64 {
        let n = 1 + (k as usize % 2);
        let q = Quadratic::random(3000 + k, n);
        let lt = legendre_transform(&q.lagrangian())?;
        for point in SampleBox::unit(&ChartSpec::velocity(n)).sample::<f64>(DEFAULT_POINTS, k) {
            let p = lt.momenta(&point)?;
            let mut phase = point[..=n].to_vec();
            phase.extend(&p);
            let v = lt.velocity(&phase)?;
            round_trip = v.iter().zip(&point[n + 1..]).fold(round_trip, |acc, (a, b)| acc.max((a - b).abs()));
            hamiltonian = hamiltonian.max((lt.hamiltonian(&phase)? - q.hamiltonian(point[0], &point[1..=n], &p)).abs());
        }
    }
    let singular = matches!(legendre_transform(&v1("v1")), Err(Error::SingularMassMatrix { .. }));
    Ok(Outcome::new()
        .at_most("round trip", round_trip, 1e-10)
        .at_most("H vs hand-derived", hamiltonian, 1e-10)
        .holds("L = v1 singular", singular))
}

fn extremal_duality() -> Result<Outcome> {
    let l = v1("(v1^2 - x1^2)/2");
    let phi = FundamentalForm::from_lagrangian(&l)?;
    let extremal = NewtonianSystem::new(&phi).integrate(&[0.0f64, 0.7, -0.4], 3.0, 1e-3)?;
    let mut s = FieldSampler::new(4000);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        worst = worst.max(first_variation(&l, &extremal, &random_bump(&mut s, &extremal))?.interior.abs());
    }

    let free = v1("v1^2/2");
    let x = [ScalarField::parse("t^2", ChartSpec::configuration(1))?];
    let curve = Trajectory64::from_curve(&x, None, 0.0, 1.0, 1e-3)?;
    let unit = VariationField64::from_values(vec![vec![1.0]; curve.len()])?;
    let non_extremal = first_variation(&free, &curve, &unit)?;
    Ok(Outcome::new()
        .at_most("extremal EL residual", euler_lagrange_residual(&l, &extremal)?, 1e-5)
        .at_most("max |interior| on extremal", worst, 1e-5)
        .at_most("|interior + 2| off extremal", (non_extremal.interior + 2.0).abs(), 1e-4))
}

fn hamilton_jacobi() -> Result<Outcome> {
    let base = ChartSpec::configuration(1);
    let points = SampleBox::unit(&base).sample::<f64>(DEFAULT_HJ_POINTS, 5000);
    let h = m("p1^2/2", 1);
    let complete = GeneratingFunction::parse("2*x1 - 2*t", 1)?;
    let classical = hj_residual(&complete, &h, &points)?;
    let (a, b) = generalized_hj_residual(&complete.contact_field(), &NormalForm::exact(h.clone())?, &points)?;

    let damped_free = NormalForm::new(h, vec![(m("p1", 1).scale(-GAMMA), m("x1", 1))])?;
    let witness = GeneratingFunction::parse("exp(-0.1*t)*x1", 1)?;
    let reduced = gradient_hj_residual(&witness, &damped_free, &points)?;

    let plane = SampleBox::unit(&ChartSpec::configuration(2)).sample::<f64>(DEFAULT_HJ_POINTS, 5001);
    let curl = ContactField::parse(&["x2", "-x1"])?;
    let b_max = closure_residual(&curl, &plane)?;
    Ok(Outcome::new()
        .at_most("free particle hj residual", classical, 1e-10)
        .at_most("generalized residual (A)", a, 1e-10)
        .at_most("generalized residual (B)", b, 1e-10)
        .at_most("damped witness", reduced, 1e-8)
        .at_most("|B_max - 2| for (x2, -x1)", (b_max - 2.0).abs(), 1e-12))
}

fn symbolic_vs_finite_difference() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    let mut s = FieldSampler::new(6000);
    for k in 0..50u64 {
        let chart = if k % 2 == 0 { ChartSpec::momentum(2) } else { ChartSpec::velocity(1) };
        let f = s.expression(chart, 4);
        for point in SampleBox::unit(&chart).sample::<f64>(DEFAULT_POINTS, k) {
            for name in chart.coordinate_names() {
                match fd_check(&f, &name, &point) {
                    Ok((symbolic, numeric)) => worst = worst.max((symbolic - numeric).abs() / symbolic.abs().max(1.0)),
                    Err(Error::Domain { .. }) => {}
                    Err(other) => return Err(other),
                }
            }
        }
    }
    Ok(Outcome::new().at_most("max relative gap", worst, 1e-5))
}

fn rk4_order() -> Result<Outcome> {
    let two_pi = 2.0 * std::f64::consts::PI;
    let error = |steps: f64| -> Result<f64> {
        let traj = integrate_hamilton(&harmonic(), &[0.0f64, 1.0, 0.0], two_pi, two_pi / steps)?;
        let end = traj.last();
        Ok((end[1] - 1.0).abs().max(end[2].abs()))
    };
    Ok(Outcome::new().within("error(h) / error(h/2)", error(64.0)? / error(128.0)?, 12.0, 20.0))
}

fn main() -> ExitCode {
    let seconds = Duration::from_secs;
    let criteria: [Criterion; 11] = [
        ("canonical relations", seconds(1), canonical_relations),
        ("bracket decomposition", seconds(30), bracket_decomposition_matches),
        ("homomorphism and Jacobi identity", seconds(10), homomorphism_and_jacobi),
        ("classical reduction", seconds(5), classical_reduction),
        ("generalized energy balance", seconds(5), generalized_energy_balance),
        ("Lagrangian / Hamiltonian agreement", seconds(5), cross_picture),
        ("Legendre transform", seconds(5), legendre),
        ("Euler-Lagrange / first variation duality", seconds(5), extremal_duality),
        ("Hamilton-Jacobi residuals", seconds(5), hamilton_jacobi),
        ("symbolic vs finite differences", seconds(5), symbolic_vs_finite_difference),
        ("RK4 order", seconds(5), rk4_order),
    ];
    let mut failures = 0;
    for (k, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let (ok, detail) = match result {
            Ok(outcome) => {
                let detail = outcome
                    .measurements
                    .iter()
                    .map(|m| format!("{} = {:.3e} ({}){}", m.label, m.value, m.bound, if m.pass { "" } else { " MISSED" }))
                    .collect::<Vec<_>>()
                    .join("; ");
                (outcome.passed(), detail)
            }
            Err(e) => (false, format!("error: {e}")),
        };
        let in_time = elapsed <= *budget;
        let pass = ok && in_time;
        if !pass {
            failures += 1;
        }
        println!(
            "{} {:>2}. {name}: {detail}; {:.2} s (budget {} s{})",
            if pass { "PASS" } else { "FAIL" },
            k + 1,
            elapsed.as_secs_f64(),
            budget.as_secs(),
            if in_time { "" } else { ", exceeded" }
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
