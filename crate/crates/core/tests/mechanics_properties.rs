use hamflow_core::mechanics::{
    energy_balance_residual, eta_components, euler_lagrange_residual, first_variation, integrate_hamilton,
    legendre_transform, FundamentalForm, NewtonianSystem, NormalForm,
};
use hamflow_core::sampling::{FieldSampler, SampleBox, DEFAULT_POINTS};
use hamflow_core::{ChartSpec, ScalarField, Trajectory64};
use proptest::prelude::*;
use rand::Rng;

mod common;
use common::{derivative, invert, random_bump, Quadratic};

const GAMMA: f64 = 0.1;

fn m1(src: &str) -> ScalarField {
    ScalarField::parse(src, ChartSpec::momentum(1)).unwrap()
}

fn v1(src: &str) -> ScalarField {
    ScalarField::parse(src, ChartSpec::velocity(1)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn legendre_round_trip(seed in any::<u64>(), n in 1usize..=2) {
        let q = Quadratic::random(seed, n);
        let lt = legendre_transform(&q.lagrangian()).unwrap();
        for point in SampleBox::unit(&ChartSpec::velocity(n)).sample::<f64>(DEFAULT_POINTS, seed) {
            let (x, v) = (&point[1..=n], &point[n + 1..]);
            let p = lt.momenta(&point).unwrap();
            let expected = q.momentum(x, v);
            prop_assert!(p.iter().zip(&expected).all(|(a, b)| (a - b).abs() <= 1e-12));
            let mut phase = point[..=n].to_vec();
            phase.extend(&p);
            let back = lt.velocity(&phase).unwrap();
            prop_assert!(back.iter().zip(v).all(|(a, b)| (a - b).abs() <= 1e-10));
            let h = lt.hamiltonian(&phase).unwrap();
            prop_assert!((h - q.hamiltonian(point[0], x, &p)).abs() <= 1e-10);
        }
    }

    #[test]
    fn exact_normal_form_balances_energy(seed in any::<u64>()) {
        let chart = ChartSpec::momentum(1);
        let mut s = FieldSampler::new(seed);
        let h = &(&m1("(x1^2 + p1^2)/2") + &s.polynomial(chart, 2, true).scale(0.3)) + &s.polynomial(chart, 2, false).scale(0.3);
        let nf = NormalForm::exact(h).unwrap();
        let x0: f64 = s.rng().gen_range(-1.0..1.0);
        let p0: f64 = s.rng().gen_range(-1.0..1.0);
        let traj = integrate_hamilton(&nf, &[0.0, x0, p0], 1.0, 1e-3).unwrap();
        prop_assert!(energy_balance_residual(&nf, &traj).unwrap() <= 1e-7);
    }

    #[test]
    fn extremals_annihilate_fixed_endpoint_variations(seed in any::<u64>()) {
        let l = v1("(v1^2 - x1^2)/2");
        let phi = FundamentalForm::from_lagrangian(&l).unwrap();
        let mut s = FieldSampler::new(seed);
        let (x0, v0) = (s.rng().gen_range(-1.0..1.0), s.rng().gen_range(-1.0..1.0));
        let traj = NewtonianSystem::new(&phi).integrate(&[0.0, x0, v0], 3.0, 1e-3).unwrap();
        prop_assert!(euler_lagrange_residual(&l, &traj).unwrap() <= 1e-5);
        for _ in 0..10 {
            let delta = random_bump(&mut s, &traj);
            prop_assert!(first_variation(&l, &traj, &delta).unwrap().interior.abs() <= 1e-5);
        }
    }

    #[test]
    fn non_extremals_are_detected_by_some_variation(seed in any::<u64>()) {
        let l = v1("(v1^2 - x1^2)/2");
        let base = ChartSpec::configuration(1);
        let x = [ScalarField::parse("t^2 - t", base).unwrap()];
        let traj: Trajectory64 = Trajectory64::from_curve(&x, None, 0.0, 3.0, 1e-3).unwrap();
        prop_assert!(euler_lagrange_residual(&l, &traj).unwrap() > 1.0);
        let mut s = FieldSampler::new(seed);
        let worst = (0..10)
            .map(|_| first_variation(&l, &traj, &random_bump(&mut s, &traj)).unwrap().interior.abs())
            .fold(0.0, f64::max);
        prop_assert!(worst > 1e-3);
    }
}

#[test]
fn lagrangian_and_hamiltonian_pictures_agree() {
    let phi = FundamentalForm::from_kinetic_energy(&v1("v1^2/2"), &[v1("-0.1*v1 - x1")]).unwrap();
    let lagrange = NewtonianSystem::new(&phi).integrate(&[0.0f64, 1.0, 0.0], 10.0, 1e-3).unwrap();
    let nf = NormalForm::new(m1("(x1^2 + p1^2)/2"), vec![(m1("p1").scale(-GAMMA), m1("x1"))]).unwrap();
    let hamilton = integrate_hamilton(&nf, &[0.0, 1.0, 0.0], 10.0, 1e-3).unwrap();
    assert_eq!(lagrange.len(), hamilton.len());
    let worst = (0..lagrange.len()).map(|k| (lagrange.x(k, 0) - hamilton.x(k, 0)).abs()).fold(0.0, f64::max);
    assert!(worst <= 1e-6, "{worst:e}");
}

#[test]
fn eta_plus_pulled_back_dl_is_d_of_pv() {
    // η = d(pᵢvⁱ) − φ with φ = dL pulled to the momentum chart through v(t, x, p)
    for seed in 0..5 {
        let n = 1 + (seed as usize % 2);
        let q = Quadratic::random(seed, n);
        let l = q.lagrangian();
        let lt = legendre_transform(&l).unwrap();
        let chart = ChartSpec::momentum(n);
        let mut h_terms = String::from("0");
        // symbolic H from the closed form, expanded into a polynomial
        let inv = invert(&q.m);
        for i in 0..n {
            for j in 0..n {
                let qi = format!("(p{} - ({}))", i + 1, (0..n).map(|k| format!("{}*x{}", q.b[i][k], k + 1)).collect::<Vec<_>>().join(" + "));
                let qj = format!("(p{} - ({}))", j + 1, (0..n).map(|k| format!("{}*x{}", q.b[j][k], k + 1)).collect::<Vec<_>>().join(" + "));
                h_terms.push_str(&format!(" + {}*{qi}*{qj}/2", inv[i][j]));
            }
            h_terms.push_str(&format!(" + {}*x{}^2/2", q.c, i + 1));
        }
        h_terms.push_str(&format!(" - {}*t*x1", q.d));
        let nf = NormalForm::exact(ScalarField::parse(&h_terms, chart).unwrap()).unwrap();
        let eta = eta_components(&nf);

        let pulled_l = |point: &[f64]| {
            let v = lt.velocity(point).unwrap();
            let mut vp = point[..=n].to_vec();
            vp.extend(v);
            l.eval(&vp).unwrap()
        };
        let pv = |point: &[f64]| {
            let v = lt.velocity(point).unwrap();
            v.iter().zip(&point[n + 1..]).map(|(a, b)| a * b).sum::<f64>()
        };
        for point in SampleBox::unit(&chart).sample::<f64>(DEFAULT_POINTS, seed) {
            let values = eta.eval(&point).unwrap();
            for c in 0..chart.len() {
                let lhs = values[c] + derivative(pulled_l, &point, c);
                let rhs = derivative(pv, &point, c);
                assert!((lhs - rhs).abs() <= 1e-8, "component {c}: {lhs} vs {rhs}");
            }
        }
    }
}

#[test]
fn rk4_converges_at_fourth_order() {
    let nf = NormalForm::exact(m1("(x1^2 + p1^2)/2")).unwrap();
    let two_pi = 2.0 * std::f64::consts::PI;
    let error = |steps: f64| {
        let traj = integrate_hamilton(&nf, &[0.0, 1.0, 0.0], two_pi, two_pi / steps).unwrap();
        let end = traj.last();
        (end[1] - 1.0).abs().max(end[2].abs())
    };
    let ratio = error(64.0) / error(128.0);
    assert!((12.0..=20.0).contains(&ratio), "ratio {ratio}");
}
