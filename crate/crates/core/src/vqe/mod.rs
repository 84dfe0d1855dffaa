//! Variational minimization, parameter-shift derivatives in θ, SS-VQE and
//! particle-number filtering.

mod config;
mod minimize;
mod objective;
mod solver;
mod ssvqe;

pub use config::{OptimizerConfig, OptimizerKind, SpsaGains};
pub use minimize::{initial_point, minimize, vqe_minimize, vqe_minimize_from, TraceStep, VqeResult};
pub use objective::{
    parameter_shift_gradient, parameter_shift_hessian, shift_derivative, shift_gradient,
    shift_second_derivative, EnergyObjective, Objective, WeightedObjective,
};
pub use solver::GroundStateSolver;
pub use ssvqe::{
    particle_filter, particle_numbers, particle_tolerance, ssvqe_minimize, SsvqeConfig,
    SsvqeResult, SsvqeState,
};
