//! Helpers shared by the integration tests.
#![allow(dead_code)]

use hamflow_core::sampling::FieldSampler;
use hamflow_core::{ChartSpec, ScalarField, Trajectory64, VariationField64};
use rand::Rng;

/// Random convex quadratic `L = ½ vᵀMv + (B x)·v − ½ c |x|² + d t x1` with
/// `M = AᵀA + I`, returned with `M`, `B`, `c`, `d`.
pub struct Quadratic {
    pub n: usize,
    pub m: Vec<Vec<f64>>,
    pub b: Vec<Vec<f64>>,
    pub c: f64,
    pub d: f64,
}

impl Quadratic {
    pub fn random(seed: u64, n: usize) -> Self {
        let mut s = FieldSampler::new(seed);
        let rng = s.rng();
        let a: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
        let m = (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| a[k][i] * a[k][j]).sum::<f64>() + f64::from(u8::from(i == j))).collect())
            .collect();
        let b = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
        Self { n, m, b, c: rng.gen_range(0.0..2.0), d: rng.gen_range(-1.0..1.0) }
    }

    pub fn lagrangian(&self) -> ScalarField {
        let mut terms = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                terms.push(format!("{}*v{}*v{}/2", self.m[i][j], i + 1, j + 1));
                terms.push(format!("{}*x{}*v{}", self.b[i][j], j + 1, i + 1));
            }
            terms.push(format!("-{}*x{}^2/2", self.c, i + 1));
        }
        terms.push(format!("{}*t*x1", self.d));
        ScalarField::parse(&terms.join(" + "), ChartSpec::velocity(self.n)).unwrap()
    }

    pub fn momentum(&self, x: &[f64], v: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.m[i][j] * v[j] + self.b[i][j] * x[j]).sum())
            .collect()
    }

    /// `H = ½ (p − Bx)ᵀ M⁻¹ (p − Bx) + ½ c |x|² − d t x1`.
    pub fn hamiltonian(&self, t: f64, x: &[f64], p: &[f64]) -> f64 {
        let q: Vec<f64> = (0..self.n).map(|i| p[i] - (0..self.n).map(|j| self.b[i][j] * x[j]).sum::<f64>()).collect();
        let w = solve(&self.m, &q);
        let kinetic: f64 = q.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>() / 2.0;
        kinetic + self.c * x.iter().map(|v| v * v).sum::<f64>() / 2.0 - self.d * t * x[0]
    }
}

/// Cramer's rule for 1x1 and 2x2 systems.
pub fn solve(m: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    match m.len() {
        1 => vec![b[0] / m[0][0]],
        2 => {
            let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            vec![(b[0] * m[1][1] - m[0][1] * b[1]) / det, (m[0][0] * b[1] - m[1][0] * b[0]) / det]
        }
        _ => unreachable!(),
    }
}

/// Five-point central difference of `f` along coordinate `i`.
pub fn derivative(f: impl Fn(&[f64]) -> f64, point: &[f64], i: usize) -> f64 {
    let h = 1e-3 * point[i].abs().max(1.0);
    let at = |k: f64| {
        let mut q = point.to_vec();
        q[i] += k * h;
        f(&q)
    };
    (at(-2.0) - 8.0 * at(-1.0) + 8.0 * at(1.0) - at(2.0)) / (12.0 * h)
}

pub fn invert(m: &[Vec<f64>]) -> Vec<Vec<f64>> {
    match m.len() {
        1 => vec![vec![1.0 / m[0][0]]],
        _ => {
            let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            vec![vec![m[1][1] / det, -m[0][1] / det], vec![-m[1][0] / det, m[0][0] / det]]
        }
    }
}


/// `Σ aₖ sin(kπ(t − t0)/(t1 − t0))`, vanishing at both ends.
pub fn random_bump(s: &mut FieldSampler, traj: &Trajectory64) -> VariationField64 {
    let (t0, t1) = (traj.time(0), traj.time(traj.len() - 1));
    let coefficients: Vec<f64> = (1..=3).map(|_| s.rng().gen_range(-1.0..1.0)).collect();
    let values = traj
        .times()
        .iter()
        .map(|&t| {
            let u = std::f64::consts::PI * (t - t0) / (t1 - t0);
            vec![coefficients.iter().enumerate().map(|(k, a)| a * ((k + 1) as f64 * u).sin()).sum()]
        })
        .collect();
    VariationField64::from_values(values).unwrap()
}


/// x(t) for ẍ + γẋ + x = 0 with x(0) = 1, ẋ(0) = 0.
pub fn damped_closed_form(gamma: f64, t: f64) -> f64 {
    let wd = (1.0 - gamma * gamma / 4.0).sqrt();
    (-gamma * t / 2.0).exp() * ((wd * t).cos() + gamma / (2.0 * wd) * (wd * t).sin())
}
