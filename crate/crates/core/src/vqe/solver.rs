use super::config::OptimizerConfig;
use super::minimize::{initial_point, vqe_minimize_from, VqeResult};
use crate::error::{Error, Result};
use crate::operators::PauliSum;
use crate::simulator::{Engine, ParameterizedCircuit, PreparedState};

/// Ground-state VQE: a reference circuit, an ansatz, an optimizer and a
/// number of independent random starts.
#[derive(Debug, Clone)]
pub struct GroundStateSolver {
    pub reference: ParameterizedCircuit,
    pub ansatz: ParameterizedCircuit,
    pub optimizer: OptimizerConfig,
    pub engine: Engine,
    /// Start r draws its initial point with seed `optimizer.seed + r`.
    pub restarts: usize,
}

impl GroundStateSolver {
    pub fn new(
        reference: ParameterizedCircuit,
        ansatz: ParameterizedCircuit,
        optimizer: OptimizerConfig,
        engine: Engine,
    ) -> Self {
        GroundStateSolver {
            reference,
            ansatz,
            optimizer,
            engine,
            restarts: 1,
        }
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn n_qubits(&self) -> usize {
        self.ansatz.n_qubits()
    }

    pub fn circuit(&self) -> Result<ParameterizedCircuit> {
        self.reference.then(&self.ansatz)
    }

    /// Lowest energy over all starts.
    pub fn solve(&self, h: &PauliSum) -> Result<(PreparedState, VqeResult)> {
        if self.restarts == 0 {
            return Err(Error::Config("at least one restart required".into()));
        }
        let circuit = self.circuit()?;
        let mut best: Option<(PreparedState, VqeResult)> = None;
        for r in 0..self.restarts {
            let opt = OptimizerConfig {
                seed: self.optimizer.seed.wrapping_add(r as u64),
                ..self.optimizer.clone()
            };
            let theta0 = initial_point(circuit.n_slots(), &opt);
            let run = vqe_minimize_from(h, &circuit, theta0, &opt, self.engine)?;
            if best.as_ref().is_none_or(|(_, b)| run.1.energy < b.energy) {
                best = Some(run);
            }
        }
        Ok(best.expect("at least one start"))
    }

    /// One optimization started from `start`, with tightened tolerances when
    /// `tight` is set.
    pub fn refine(
        &self,
        h: &PauliSum,
        start: &PreparedState,
        tight: bool,
    ) -> Result<(PreparedState, VqeResult)> {
        let opt = if tight {
            self.optimizer.tightened()
        } else {
            self.optimizer.clone()
        };
        vqe_minimize_from(h, &start.circuit, start.theta.clone(), &opt, self.engine)
    }
}
