use nalgebra::DMatrix;

use super::encoding::{encode, Encoding};
use super::fermion::{hamiltonian_from_integrals, FermionOperator, Ladder};
use super::pauli::PauliSum;
use crate::chem::{OrbitalKind, SpinOrbitalIntegrals};
use crate::error::Result;

/// Encoded Σ_i a†_i a_i.
pub fn number_operator(n_modes: usize, encoding: Encoding) -> PauliSum {
    let mut op = FermionOperator::zero(n_modes);
    for i in 0..n_modes {
        op.push(1.0, vec![Ladder::create(i), Ladder::annihilate(i)])
            .expect("mode in range");
    }
    encode(&op, encoding).expect("width matches")
}

/// Encoded one-body operator Σ d_ij a†_i a_j built from spin-orbital
/// dipole integrals (no two-body part, no constant).
pub fn dipole_operator(dipole_so: &DMatrix<f64>, encoding: Encoding) -> Result<PauliSum> {
    let so = SpinOrbitalIntegrals::one_body_only(dipole_so.clone(), 0.0, OrbitalKind::Rhf);
    encode(&hamiltonian_from_integrals(&so)?, encoding)
}

/// Encoded molecular Hamiltonian.
pub fn qubit_hamiltonian(so: &SpinOrbitalIntegrals, encoding: Encoding) -> Result<PauliSum> {
    encode(&hamiltonian_from_integrals(so)?, encoding)
}
