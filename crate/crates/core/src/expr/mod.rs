//! Expression language over chart coordinates: parsing, evaluation, exact
//! partial derivatives and a finite-difference oracle for them.

mod ast;
mod chart;
mod field;
mod parser;

pub use ast::{Expr, Func, Node};
pub use chart::{ChartKind, ChartSpec};
pub use field::{fd_check, ScalarField};

pub(crate) use field::same_chart;

/// Builders for expression trees with light simplification.
pub mod build {
    pub use super::ast::{add, call, constant, div, mul, neg, pow, sub, var};
}

/// Parses `source` over `chart`.
pub fn parse(source: &str, chart: ChartSpec) -> crate::Result<ScalarField> {
    ScalarField::parse(source, chart)
}
