use super::parameters::SystemParameters;
use crate::chem::{spin_orbital_integrals, spin_orbital_one_body, sto3g_integrals, Molecule, Orbitals};
use crate::error::{Error, Result};
use crate::operators::{
    dipole_operator, number_operator, qubit_hamiltonian, select_sector, taperable_qubits,
    Encoding, PauliSum, TaperingMap,
};
use crate::simulator::hf_bits;

/// Offset used to find which qubits stay taperable as parameters move.
const PROBE_STEP: f64 = 1e-2;

/// H(η) through the full pipeline: geometry and field → STO-3G integrals →
/// orbitals → encoded Hamiltonian → fixed tapering map.
///
/// Orbitals are always taken from the field-free problem at the current
/// geometry, so H is exactly linear in the field.
#[derive(Debug, Clone)]
pub struct HamiltonianFamily {
    molecule: Molecule,
    parameters: SystemParameters,
    encoding: Encoding,
    n_electrons: usize,
    map: TaperingMap,
    base: PauliSum,
}

impl HamiltonianFamily {
    /// With `taper`, removes every qubit that carries only I/Z in H at the
    /// base point and after a probe step in each parameter, keeping the
    /// sector that holds the base ground state. The map is then frozen.
    pub fn new(
        molecule: Molecule,
        parameters: SystemParameters,
        encoding: Encoding,
        taper: bool,
    ) -> Result<Self> {
        let n_electrons = molecule.n_electrons();
        let mut family = HamiltonianFamily {
            molecule,
            parameters,
            encoding,
            n_electrons,
            map: TaperingMap::identity(0),
            base: PauliSum::zero(0),
        };
        let values = family.parameters.values();
        let full = family.build_untapered(&values)?;
        family.map = TaperingMap::identity(full.n_qubits());
        if taper {
            let mut qubits = taperable_qubits(&full);
            for i in 0..values.len() {
                let mut probe = values.clone();
                probe[i] += PROBE_STEP;
                let shifted = family.build_untapered(&probe)?;
                let keep = taperable_qubits(&shifted);
                qubits.retain(|q| keep.contains(q));
            }
            let (_, map) = select_sector(&full, &qubits)?;
            family.map = map;
        }
        family.base = family.map.apply(&full)?;
        Ok(family)
    }

    pub fn parameters(&self) -> &SystemParameters {
        &self.parameters
    }

    pub fn base_values(&self) -> Vec<f64> {
        self.parameters.values()
    }

    pub fn base_molecule(&self) -> &Molecule {
        &self.molecule
    }

    pub fn encoding(&self) -> Encoding {
        self.encoding
    }

    pub fn n_electrons(&self) -> usize {
        self.n_electrons
    }

    pub fn tapering(&self) -> &TaperingMap {
        &self.map
    }

    pub fn n_qubits(&self) -> usize {
        self.map.n_tapered()
    }

    /// H at the base parameters.
    pub fn base(&self) -> &PauliSum {
        &self.base
    }

    pub fn molecule_at(&self, values: &[f64]) -> Result<Molecule> {
        self.parameters.apply_geometry(&self.molecule, values)
    }

    /// Same pipeline around a different base point (same frozen map).
    pub fn rebased(&self, values: &[f64]) -> Result<Self> {
        let parameters = self.parameters.with_values(values)?;
        let base = self.build(values)?;
        Ok(HamiltonianFamily {
            parameters,
            base,
            ..self.clone()
        })
    }

    /// H(η) on the tapered register.
    pub fn build(&self, values: &[f64]) -> Result<PauliSum> {
        let full = self.build_untapered(values)?;
        self.map.apply(&full).map_err(|e| self.wrap(values, e))
    }

    fn build_untapered(&self, values: &[f64]) -> Result<PauliSum> {
        self.parameters.check(values)?;
        let run = || -> Result<PauliSum> {
            let mol = self.molecule_at(values)?;
            let ints = sto3g_integrals(&mol)?;
            let orbitals = Orbitals::for_electrons(&ints, self.n_electrons)?;
            let field = self.parameters.field_vector(values);
            let ints = if field == [0.0; 3] { ints } else { ints.apply_field(field)? };
            qubit_hamiltonian(&spin_orbital_integrals(&ints, &orbitals)?, self.encoding)
        };
        run().map_err(|e| self.wrap(values, e))
    }

    /// Names the parameter that moved away from the base point (or the
    /// first one) in a builder failure.
    fn wrap(&self, values: &[f64], e: Error) -> Error {
        if matches!(e, Error::Builder { .. }) {
            return e;
        }
        let entries = self.parameters.entries();
        let k = entries
            .iter()
            .zip(values)
            .position(|(p, v)| p.value != *v)
            .unwrap_or(0);
        match entries.get(k) {
            Some(p) => Error::Builder {
                parameter: p.name.clone(),
                value: values[k],
                source: Box::new(e),
            },
            None => e,
        }
    }

    /// Encoded particle-number operator on the tapered register.
    pub fn number_operator(&self) -> Result<PauliSum> {
        self.map.apply(&number_operator(self.map.n_qubits, self.encoding))
    }

    /// Electronic dipole operator μ̂ = D̂ − μ_N along `axis` at `values`,
    /// in the field-free orbitals, on the tapered register. Its expectation
    /// equals −∂E/∂F_axis.
    pub fn dipole_operator(&self, axis: usize, values: &[f64]) -> Result<PauliSum> {
        if axis > 2 {
            return Err(Error::Config(format!("axis {axis} out of range")));
        }
        let mol = self.molecule_at(values)?;
        let ints = sto3g_integrals(&mol)?;
        let orbitals = Orbitals::for_electrons(&ints, self.n_electrons)?;
        let so = spin_orbital_one_body(&ints.dipole[axis], &orbitals)?;
        let d = dipole_operator(&so, self.encoding)?;
        let shifted = &d - &PauliSum::identity(d.n_qubits(), ints.nuclear_dipole[axis]);
        self.map.apply(&shifted)
    }

    /// Nuclear dipole component about the dipole origin (a.u.).
    pub fn nuclear_dipole(&self, axis: usize, values: &[f64]) -> Result<f64> {
        let ints = sto3g_integrals(&self.molecule_at(values)?)?;
        Ok(ints.nuclear_dipole.get(axis).copied().unwrap_or(0.0))
    }

    /// Hartree-Fock determinant on the tapered register.
    pub fn reference_bits(&self) -> Result<u64> {
        let full = hf_bits(self.n_electrons, self.encoding, self.map.n_qubits)?;
        self.map.apply_bits(full).ok_or_else(|| {
            Error::Config("Hartree-Fock determinant lies outside the tapered sector".into())
        })
    }
}
