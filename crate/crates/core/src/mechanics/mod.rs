//! Lagrangian, Newtonian and generalized Hamiltonian mechanics.

pub mod calculus;
pub mod hamiltonian;
pub mod lagrangian;
pub mod legendre;
pub mod linalg;
pub mod ode;
pub mod trajectory;
pub mod virtual_work;

pub use lagrangian::{
    action_value, direct_first_variation, energy_theorem_residual, euler_lagrange_residual, first_variation,
    integrability_residual, mass_matrix, max_integrability_residual, momentum_map, total_energy,
    variational_derivative,
};
pub use hamiltonian::{
    energy_balance_residual, energy_drift, energy_rate, eta_components, hamilton_rhs, integrate_hamilton,
    normal_form_consistency, HamiltonEquations, NormalForm,
};
pub use legendre::{legendre_transform, LegendreTransform};
pub use trajectory::Trajectory;
pub use virtual_work::{
    lagrange_first_form_rhs, newtonian_residual, newtonian_rhs, virtual_work_total, BoundaryCondition,
    FirstVariation, FundamentalForm, NewtonianSystem, VariationField,
};
