//! Fermionic operators, qubit encodings, Pauli algebra and tapering.

mod dense;
mod encoding;
mod fermion;
mod observables;
mod pauli;
mod taper;

pub use dense::{
    apply_string, eigh, ground_energy, sector_spectrum, spectrum, to_dense_matrix,
    DENSE_QUBIT_LIMIT,
};
pub use encoding::{bravyi_kitaev, encode, jordan_wigner, Encoding, LinearEncoding};
pub use fermion::{hamiltonian_from_integrals, FermionOperator, Ladder, LadderProduct};
pub use observables::{dipole_operator, number_operator, qubit_hamiltonian};
pub use pauli::{
    pauli_product, sum_simplify, Pauli, PauliString, PauliSum, PauliTerm, MAX_QUBITS,
    PRUNE_TOLERANCE,
};
pub use taper::{
    sector_energy_gap, select_sector, taper, taperable_qubits, z_string, TaperingMap,
};
