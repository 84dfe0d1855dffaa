//! Ground- and excited-state energies and their derivatives for small
//! molecules, computed with a statevector-simulated variational eigensolver.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod applications;
pub mod chem;
pub mod derivatives;
pub mod operators;
pub mod report;
pub mod simulator;
pub mod vqe;
mod error;

pub use error::{Error, Result};
