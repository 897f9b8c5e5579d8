//! Seeded sample boxes and random test fields.
//!
//! Equality of symbolic fields is decided by evaluation at seeded points, so
//! every check that compares fields draws its points from here.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::expr::{build, ChartSpec, Func, Node, ScalarField};
use crate::scalar::Scalar;

pub const DEFAULT_SEED: u64 = 20_240_517;

/// Default number of points for pointwise field comparisons.
pub const DEFAULT_POINTS: usize = 64;

/// Axis-aligned box of chart points.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBox {
    bounds: Vec<(f64, f64)>,
}

impl SampleBox {
    pub fn new(bounds: Vec<(f64, f64)>) -> Result<Self> {
        if bounds.is_empty() {
            return Err(Error::InvalidArgument("sample box needs at least one coordinate".into()));
        }
        for (i, &(lo, hi)) in bounds.iter().enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(Error::InvalidArgument(format!("bad bounds [{lo}, {hi}] for coordinate {i}")));
            }
        }
        Ok(Self { bounds })
    }

    /// `[lo, hi]` on every coordinate of `chart`.
    pub fn cube(chart: &ChartSpec, lo: f64, hi: f64) -> Self {
        Self::new(vec![(lo, hi); chart.len()]).expect("valid cube bounds")
    }

    /// `[-1, 1]` on every coordinate of `chart`.
    pub fn unit(chart: &ChartSpec) -> Self {
        Self::cube(chart, -1.0, 1.0)
    }

    /// Replaces the bounds of one coordinate.
    pub fn with_bounds(mut self, index: usize, lo: f64, hi: f64) -> Result<Self> {
        if index >= self.bounds.len() {
            return Err(Error::InvalidArgument(format!("coordinate {index} outside sample box")));
        }
        self.bounds[index] = (lo, hi);
        Self::new(self.bounds)
    }

    pub fn len(&self) -> usize {
        self.bounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bounds.is_empty()
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    /// `count` uniform points, reproducible from `seed`.
    pub fn sample<T: Scalar>(&self, count: usize, seed: u64) -> Vec<Vec<T>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                self.bounds
                    .iter()
                    .map(|&(lo, hi)| T::lit(if lo == hi { lo } else { rng.gen_range(lo..=hi) }))
                    .collect()
            })
            .collect()
    }
}

/// Seeded generator of random polynomial and composite fields.
pub struct FieldSampler {
    rng: ChaCha8Rng,
}

impl FieldSampler {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Random polynomial of total degree at most `degree` with coefficients
    /// in `[-1, 1]`. Time is left out unless `with_time` is set.
    pub fn polynomial(&mut self, chart: ChartSpec, degree: usize, with_time: bool) -> ScalarField {
        let vars: Vec<usize> = (usize::from(!with_time)..chart.len()).collect();
        let terms = self.rng.gen_range(1..=4);
        let mut body = build::constant(0.0);
        for _ in 0..terms {
            let coefficient = self.rng.gen_range(-1.0..=1.0);
            let d = self.rng.gen_range(0..=degree);
            let mut monomial = build::constant(coefficient);
            for _ in 0..d {
                let v = *vars.choose(&mut self.rng).expect("chart has coordinates");
                monomial = build::mul(monomial, build::var(v));
            }
            body = build::add(body, monomial);
        }
        ScalarField::from_expr(chart, body).expect("variables drawn from chart")
    }

    /// Random composite expression of bounded depth. Arguments of `ln`,
    /// `sqrt` and denominators are shifted squares, so the result is defined
    /// everywhere.
    pub fn expression(&mut self, chart: ChartSpec, depth: usize) -> ScalarField {
        let body = self.node(&chart, depth);
        ScalarField::from_expr(chart, body).expect("variables drawn from chart")
    }

    fn node(&mut self, chart: &ChartSpec, depth: usize) -> Node {
        if depth == 0 || self.rng.gen_bool(0.2) {
            return if self.rng.gen_bool(0.7) {
                build::var(self.rng.gen_range(0..chart.len()))
            } else {
                build::constant(self.rng.gen_range(-2.0..=2.0))
            };
        }
        let positive = |s: &mut Self, inner: Node| {
            let shift = s.rng.gen_range(0.5..=2.0);
            build::add(build::constant(shift), build::pow(inner, 2.0))
        };
        match self.rng.gen_range(0..10) {
            0 => build::add(self.node(chart, depth - 1), self.node(chart, depth - 1)),
            1 => build::sub(self.node(chart, depth - 1), self.node(chart, depth - 1)),
            2 | 3 => build::mul(self.node(chart, depth - 1), self.node(chart, depth - 1)),
            4 => {
                let num = self.node(chart, depth - 1);
                let den = self.node(chart, depth - 1);
                build::div(num, positive(self, den))
            }
            5 => build::pow(self.node(chart, depth - 1), f64::from(self.rng.gen_range(2..=3))),
            6 => build::call(Func::Sin, self.node(chart, depth - 1)),
            7 => build::call(Func::Cos, self.node(chart, depth - 1)),
            8 => {
                let inner = self.node(chart, depth - 1);
                let func = if self.rng.gen_bool(0.5) { Func::Ln } else { Func::Sqrt };
                build::call(func, positive(self, inner))
            }
            _ => {
                let inner = self.node(chart, depth - 1);
                build::call(Func::Exp, build::mul(build::constant(0.5), inner))
            }
        }
    }
}
