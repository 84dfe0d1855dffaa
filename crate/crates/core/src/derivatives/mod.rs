//! System parameters, Hamiltonian families H(η), finite-difference operator
//! derivatives and energy derivatives of variational states.

mod cost;
mod energy;
mod family;
mod parameters;
mod report;
mod stencil;

pub use cost::cost_estimate;
pub use energy::{
    first_order, matrix_element_real, second_order, second_order_from_shifted, shifted_state,
    theta_gradient_norm, SecondOrder, STALE_GRADIENT,
};
pub use family::HamiltonianFamily;
pub use parameters::{Parameter, ParameterKind, SystemParameters};
pub use report::{derivative_report, DerivativeReport};
pub use stencil::{d2_hamiltonian, d_hamiltonian, linear_combination, DEFAULT_STEP};
