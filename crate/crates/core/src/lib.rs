//! Mechanics from fundamental 1-forms.
//!
//! Systems are described by a Lagrangian, by a fundamental 1-form
//! `φ = P dt + Fᵢ dxⁱ + pᵢ dvⁱ`, or on phase space by a Pfaffian normal form
//! `η = dH − μₐ dvᵃ`. The crate derives and integrates the resulting
//! generalized Hamilton equations, computes symplectic gradients, Poisson and
//! Lie brackets (including the decomposition of the Lie bracket of two
//! normal-form vector fields), and evaluates classical and generalized
//! Hamilton–Jacobi residuals.
//!
//! Symbolic work happens on [`ScalarField`]s; every numeric layer is generic
//! over [`Scalar`] (`f64` and `f32`).

pub mod error;
pub mod expr;
pub mod geometry;
pub mod hj;
pub mod mechanics;
pub mod sampling;
pub mod scalar;

pub use error::{Error, Result};
pub use expr::{fd_check, ChartKind, ChartSpec, ScalarField};
pub use geometry::{NormalFormVectorField, OneForm, PhaseVectorField};
pub use hj::{ContactField, GeneratingFunction};
pub use mechanics::{FundamentalForm, LegendreTransform, NormalForm, Trajectory, VariationField};
pub use scalar::Scalar;

pub type Trajectory64 = Trajectory<f64>;
pub type Trajectory32 = Trajectory<f32>;
pub type VariationField64 = VariationField<f64>;
pub type VariationField32 = VariationField<f32>;
pub type FirstVariation64 = mechanics::FirstVariation<f64>;
pub type FirstVariation32 = mechanics::FirstVariation<f32>;
