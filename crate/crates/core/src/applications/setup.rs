use std::f64::consts::PI;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::chem::Molecule;
use crate::derivatives::{HamiltonianFamily, SystemParameters};
use crate::error::{Error, Result};
use crate::operators::Encoding;
use crate::simulator::{
    basis_state_circuit, excitation_ansatz, hea_ansatz, tapered_ansatz, Engine, Entangler,
    ParameterizedCircuit,
};
use crate::vqe::{GroundStateSolver, OptimizerConfig};

/// A molecule plus the qubit-mapping choices applied to it.
#[derive(Debug, Clone)]
pub struct System {
    pub molecule: Molecule,
    pub encoding: Encoding,
    pub taper: bool,
}

impl System {
    pub fn new(molecule: Molecule, encoding: Encoding, taper: bool) -> Self {
        System {
            molecule,
            encoding,
            taper,
        }
    }

    /// Family over the chain bond lengths R1, R2, … of the molecule.
    pub fn bond_family(&self) -> Result<HamiltonianFamily> {
        let params = SystemParameters::chain_bonds(&self.molecule)?;
        HamiltonianFamily::new(self.molecule.clone(), params, self.encoding, self.taper)
    }

    /// Family over one field component at the molecule's geometry.
    pub fn field_family(&self, axis: usize) -> Result<HamiltonianFamily> {
        HamiltonianFamily::new(
            self.molecule.clone(),
            SystemParameters::field(axis)?,
            self.encoding,
            self.taper,
        )
    }

    /// Same system with every chain bond set to `r` (Å).
    pub fn stretched(&self, r: f64) -> Result<System> {
        let params = SystemParameters::chain_bonds(&self.molecule)?;
        let mol = params.apply_geometry(&self.molecule, &vec![r; params.len()])?;
        Ok(System {
            molecule: mol,
            ..self.clone()
        })
    }

    /// Same system at explicit chain bond lengths (Å).
    pub fn with_bonds(&self, bonds: &[f64]) -> Result<System> {
        let params = SystemParameters::chain_bonds(&self.molecule)?;
        let mol = params.apply_geometry(&self.molecule, bonds)?;
        Ok(System {
            molecule: mol,
            ..self.clone()
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AnsatzKind {
    /// Hardware-efficient layers of Ry·Rz and a nearest-neighbour entangler.
    Hea,
    /// Particle- and S_z-conserving single/double excitation rotations.
    Excitation,
    /// One-parameter circuit for the two-qubit tapered H₂ problem.
    Tapered,
}

impl FromStr for AnsatzKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hea" => Ok(AnsatzKind::Hea),
            "excitation" => Ok(AnsatzKind::Excitation),
            "tapered" => Ok(AnsatzKind::Tapered),
            other => Err(Error::Config(format!("unknown ansatz `{other}`"))),
        }
    }
}

/// How ground states are prepared and optimized.
#[derive(Debug, Clone, PartialEq)]
pub struct VqeSetup {
    pub ansatz: AnsatzKind,
    pub depth: usize,
    pub entangler: Entangler,
    pub optimizer: OptimizerConfig,
    pub engine: Engine,
    pub restarts: usize,
}

impl Default for VqeSetup {
    /// Hardware-efficient ansatz (CZ, depth 3), BFGS from four random
    /// starts spread over [−π, π].
    fn default() -> Self {
        VqeSetup {
            ansatz: AnsatzKind::Hea,
            depth: 3,
            entangler: Entangler::Cz,
            optimizer: OptimizerConfig::bfgs().with_jitter(PI, 0),
            engine: Engine::Exact,
            restarts: 4,
        }
    }
}

impl VqeSetup {
    /// One layer of excitation rotations started at θ = 0.
    pub fn excitation() -> Self {
        VqeSetup {
            ansatz: AnsatzKind::Excitation,
            depth: 1,
            optimizer: OptimizerConfig::bfgs(),
            restarts: 1,
            ..Self::default()
        }
    }

    /// One-parameter tapered circuit started at θ = 0.
    pub fn tapered() -> Self {
        VqeSetup {
            ansatz: AnsatzKind::Tapered,
            depth: 1,
            optimizer: OptimizerConfig::bfgs(),
            restarts: 1,
            ..Self::default()
        }
    }

    pub fn ansatz_for(&self, family: &HamiltonianFamily) -> Result<ParameterizedCircuit> {
        let n = family.n_qubits();
        match self.ansatz {
            AnsatzKind::Hea => hea_ansatz(n, self.depth, self.entangler),
            AnsatzKind::Excitation => {
                if !family.tapering().removed.is_empty() {
                    return Err(Error::Config(
                        "the excitation ansatz acts on the untapered register".into(),
                    ));
                }
                excitation_ansatz(n, family.encoding(), self.depth)
            }
            AnsatzKind::Tapered => {
                if n != 2 {
                    return Err(Error::Config(format!(
                        "the tapered ansatz needs a 2-qubit problem, got {n} qubits"
                    )));
                }
                Ok(tapered_ansatz())
            }
        }
    }

    pub fn solver_for(&self, family: &HamiltonianFamily) -> Result<GroundStateSolver> {
        let reference = basis_state_circuit(family.n_qubits(), family.reference_bits()?)?;
        Ok(GroundStateSolver::new(
            reference,
            self.ansatz_for(family)?,
            self.optimizer.clone(),
            self.engine,
        )
        .with_restarts(self.restarts))
    }
}
