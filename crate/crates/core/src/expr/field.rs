use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::ast::{self, Node};
use super::chart::ChartSpec;
use super::parser::parse_expr;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A real-valued expression on a chart.
///
/// Immutable; cloning shares the expression tree.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    chart: ChartSpec,
    body: Node,
}

impl ScalarField {
    pub fn parse(source: &str, chart: ChartSpec) -> Result<Self> {
        let body = parse_expr(source, &chart)?;
        Ok(Self { chart, body })
    }

    /// Wraps an expression tree; fails if it references a coordinate outside
    /// the chart.
    pub fn from_expr(chart: ChartSpec, body: Node) -> Result<Self> {
        if let Some(i) = body.max_var() {
            if i >= chart.len() {
                return Err(Error::InvalidArgument(format!(
                    "expression references coordinate {i} on a chart of {} coordinates",
                    chart.len()
                )));
            }
        }
        Ok(Self { chart, body })
    }

    pub fn constant(chart: ChartSpec, value: f64) -> Self {
        Self { chart, body: ast::constant(value) }
    }

    pub fn zero(chart: ChartSpec) -> Self {
        Self::constant(chart, 0.0)
    }

    pub fn coordinate(chart: ChartSpec, name: &str) -> Result<Self> {
        let index = chart.index_of(name).ok_or_else(|| Error::UnknownCoordinate(name.to_string()))?;
        Ok(Self::coordinate_at(chart, index))
    }

    pub fn coordinate_at(chart: ChartSpec, index: usize) -> Self {
        assert!(index < chart.len(), "coordinate index out of range");
        Self { chart, body: ast::var(index) }
    }

    pub fn chart(&self) -> ChartSpec {
        self.chart
    }

    pub fn body(&self) -> &Node {
        &self.body
    }

    pub fn eval<T: Scalar>(&self, point: &[T]) -> Result<T> {
        if point.len() != self.chart.len() {
            return Err(Error::InvalidArgument(format!(
                "point has {} coordinates, chart needs {}",
                point.len(),
                self.chart.len()
            )));
        }
        self.body.eval(point, &self.chart)
    }

    pub fn diff(&self, coord: &str) -> Result<Self> {
        let index = self.chart.index_of(coord).ok_or_else(|| Error::UnknownCoordinate(coord.to_string()))?;
        Ok(self.diff_at(index))
    }

    pub fn diff_at(&self, index: usize) -> Self {
        assert!(index < self.chart.len(), "coordinate index out of range");
        Self { chart: self.chart, body: self.body.diff(index) }
    }

    /// True when the simplified tree is the literal zero.
    pub fn is_zero(&self) -> bool {
        ast::is_zero(&self.body)
    }

    pub fn as_constant(&self) -> Option<f64> {
        self.body.as_const()
    }

    pub fn depends_on(&self, index: usize) -> bool {
        self.body.depends_on(index)
    }

    /// Same expression re-homed on another chart. Fails if a referenced
    /// coordinate does not exist there.
    pub fn on_chart(&self, chart: ChartSpec) -> Result<Self> {
        Self::from_expr(chart, self.body.clone())
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self { chart: self.chart, body: ast::mul(ast::constant(factor), self.body.clone()) }
    }

    fn combine(&self, other: &Self, op: fn(Node, Node) -> Node) -> Self {
        assert_eq!(self.chart, other.chart, "scalar fields live on different charts");
        Self { chart: self.chart, body: op(self.body.clone(), other.body.clone()) }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        same_chart(self, other)?;
        Ok(self.combine(other, ast::add))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        same_chart(self, other)?;
        Ok(self.combine(other, ast::sub))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        same_chart(self, other)?;
        Ok(self.combine(other, ast::mul))
    }
}

pub(crate) fn same_chart(a: &ScalarField, b: &ScalarField) -> Result<()> {
    if a.chart == b.chart {
        Ok(())
    } else {
        Err(Error::ChartMismatch(format!("{:?} vs {:?}", a.chart, b.chart)))
    }
}

impl fmt::Display for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.body.display(&self.chart))
    }
}

// Operator forms panic on a chart mismatch; the `try_*` methods report it.
impl Add for &ScalarField {
    type Output = ScalarField;
    fn add(self, rhs: &ScalarField) -> ScalarField {
        self.combine(rhs, ast::add)
    }
}

impl Sub for &ScalarField {
    type Output = ScalarField;
    fn sub(self, rhs: &ScalarField) -> ScalarField {
        self.combine(rhs, ast::sub)
    }
}

impl Mul for &ScalarField {
    type Output = ScalarField;
    fn mul(self, rhs: &ScalarField) -> ScalarField {
        self.combine(rhs, ast::mul)
    }
}

impl Neg for &ScalarField {
    type Output = ScalarField;
    fn neg(self) -> ScalarField {
        ScalarField { chart: self.chart, body: ast::neg(self.body.clone()) }
    }
}

/// Symbolic partial next to a central-difference estimate at `point`.
///
/// The step is `cbrt(eps) * max(1, |point[coord]|)`.
pub fn fd_check<T: Scalar>(f: &ScalarField, coord: &str, point: &[T]) -> Result<(T, T)> {
    let index = f.chart().index_of(coord).ok_or_else(|| Error::UnknownCoordinate(coord.to_string()))?;
    let symbolic = f.diff_at(index).eval(point)?;
    let numeric = central_difference(f, index, point)?;
    Ok((symbolic, numeric))
}

pub(crate) fn central_difference<T: Scalar>(f: &ScalarField, index: usize, point: &[T]) -> Result<T> {
    let h = T::EPSILON_CBRT * T::one().max(point[index].abs());
    let mut forward = point.to_vec();
    forward[index] = point[index] + h;
    let mut backward = point.to_vec();
    backward[index] = point[index] - h;
    // the effective step is what the perturbed coordinates actually differ by
    let step = forward[index] - backward[index];
    Ok((f.eval(&forward)? - f.eval(&backward)?) / step)
}
