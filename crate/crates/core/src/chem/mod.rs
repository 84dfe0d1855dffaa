//! Molecular input, STO-3G integrals, Hartree-Fock and spin-orbital data.

mod basis;
mod integrals;
mod molecule;
mod scf;
mod spin_orbital;

pub use basis::{BasisSet, Primitive, Shell};
pub use integrals::{boys_f0, core_integrals, Eri, IntegralSet};
pub use molecule::{
    nuclear_dipole, nuclear_repulsion, parse_xyz, Atom, Molecule, ANGSTROM_TO_BOHR,
    BOHR_IN_ANGSTROM,
};
pub use scf::{fix_phases, inverse_sqrt, run_rhf, run_rhf_with, RhfSolution, SCF_MAX_CYCLES, SCF_TOLERANCE};
pub use spin_orbital::{
    spin_orbital_integrals, spin_orbital_one_body, OrbitalKind, Orbitals, SpinOrbitalIntegrals,
};

/// AO integrals for `mol` in STO-3G.
pub fn sto3g_integrals(mol: &Molecule) -> crate::Result<IntegralSet> {
    core_integrals(mol, &BasisSet::sto3g(mol))
}
