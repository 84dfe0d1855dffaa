use super::circuit::ParameterizedCircuit;
use super::statevector::Statevector;
use crate::error::Result;

/// A full state-preparation circuit (reference gates included) together
/// with bound parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct PreparedState {
    pub circuit: ParameterizedCircuit,
    pub theta: Vec<f64>,
}

impl PreparedState {
    pub fn new(circuit: ParameterizedCircuit, theta: Vec<f64>) -> Self {
        PreparedState { circuit, theta }
    }

    pub fn n_qubits(&self) -> usize {
        self.circuit.n_qubits()
    }

    pub fn statevector(&self) -> Result<Statevector> {
        self.circuit.prepare(&self.theta)
    }

    /// Same circuit, different parameters.
    pub fn with_theta(&self, theta: Vec<f64>) -> Self {
        PreparedState {
            circuit: self.circuit.clone(),
            theta,
        }
    }
}
