use serde::{Deserialize, Serialize};

use crate::chem::Molecule;
use crate::error::{Error, Result};

const AXES: [&str; 3] = ["x", "y", "z"];

/// What a system parameter controls.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ParameterKind {
    /// Cartesian coordinate of one atom (Å).
    Nuclear { atom: usize, axis: usize },
    /// z-separation between atoms `bond` and `bond + 1` (Å); every later
    /// atom moves with the second one.
    ChainBond { bond: usize },
    /// Uniform electric field component (a.u.).
    Field { axis: usize },
}

impl ParameterKind {
    pub fn units(&self) -> &'static str {
        match self {
            ParameterKind::Field { .. } => "au",
            _ => "angstrom",
        }
    }

    pub fn is_field(&self) -> bool {
        matches!(self, ParameterKind::Field { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Parameter {
    pub name: String,
    pub kind: ParameterKind,
    pub value: f64,
}

/// Named system parameters η with unique names and finite values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemParameters {
    entries: Vec<Parameter>,
}

impl SystemParameters {
    pub fn new(entries: Vec<Parameter>) -> Result<Self> {
        for (k, p) in entries.iter().enumerate() {
            if entries[..k].iter().any(|q| q.name == p.name) {
                return Err(Error::Config(format!("duplicate parameter name `{}`", p.name)));
            }
            if !p.value.is_finite() {
                return Err(Error::Config(format!("parameter `{}` is not finite", p.name)));
            }
            let axis = match p.kind {
                ParameterKind::Nuclear { axis, .. } | ParameterKind::Field { axis } => axis,
                ParameterKind::ChainBond { .. } => 0,
            };
            if axis > 2 {
                return Err(Error::Config(format!("parameter `{}` has axis {axis}", p.name)));
            }
        }
        Ok(SystemParameters { entries })
    }

    /// One bond-length parameter per consecutive pair of a z-aligned chain,
    /// named R1, R2, ….
    pub fn chain_bonds(mol: &Molecule) -> Result<Self> {
        let atoms = mol.atoms();
        let mut entries = Vec::new();
        for b in 0..atoms.len().saturating_sub(1) {
            let (p, q) = (atoms[b].position, atoms[b + 1].position);
            if (p[0] - q[0]).abs() > 1e-9 || (p[1] - q[1]).abs() > 1e-9 {
                return Err(Error::InvalidMolecule("chain is not aligned with z".into()));
            }
            entries.push(Parameter {
                name: format!("R{}", b + 1),
                kind: ParameterKind::ChainBond { bond: b },
                value: q[2] - p[2],
            });
        }
        SystemParameters::new(entries)
    }

    /// Cartesian coordinates of the given atoms along `axis`, named Z1, Z2, ….
    pub fn coordinates(mol: &Molecule, atoms: &[usize], axis: usize) -> Result<Self> {
        let entries = atoms
            .iter()
            .map(|&a| {
                let atom = mol
                    .atoms()
                    .get(a)
                    .ok_or_else(|| Error::InvalidMolecule(format!("atom index {a} out of range")))?;
                Ok(Parameter {
                    name: format!("{}{}", AXES.get(axis).copied().unwrap_or("?").to_uppercase(), a + 1),
                    kind: ParameterKind::Nuclear { atom: a, axis },
                    value: atom.position[axis.min(2)],
                })
            })
            .collect::<Result<Vec<_>>>()?;
        SystemParameters::new(entries)
    }

    /// A single field component at zero, named F_x, F_y or F_z.
    pub fn field(axis: usize) -> Result<Self> {
        SystemParameters::new(vec![Parameter {
            name: format!("F_{}", AXES.get(axis).copied().unwrap_or("?")),
            kind: ParameterKind::Field { axis },
            value: 0.0,
        }])
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Parameter] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> Result<&Parameter> {
        self.entries.get(i).ok_or_else(|| {
            Error::Config(format!("parameter index {i} out of range ({})", self.entries.len()))
        })
    }

    pub fn values(&self) -> Vec<f64> {
        self.entries.iter().map(|p| p.value).collect()
    }

    pub fn names(&self) -> Vec<String> {
        self.entries.iter().map(|p| p.name.clone()).collect()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.entries.iter().position(|p| p.name == name)
    }

    /// Same parameters at new values.
    pub fn with_values(&self, values: &[f64]) -> Result<Self> {
        self.check(values)?;
        let mut out = self.clone();
        for (p, &v) in out.entries.iter_mut().zip(values) {
            p.value = v;
        }
        Ok(out)
    }

    pub(crate) fn check(&self, values: &[f64]) -> Result<()> {
        if values.len() != self.entries.len() {
            return Err(Error::Config(format!(
                "{} values for {} parameters",
                values.len(),
                self.entries.len()
            )));
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Config(format!("parameter `{}` is not finite", self.entries[k].name)));
        }
        Ok(())
    }

    /// `base` with every geometric parameter applied in order.
    pub fn apply_geometry(&self, base: &Molecule, values: &[f64]) -> Result<Molecule> {
        self.check(values)?;
        let mut atoms = base.atoms().to_vec();
        for (p, &v) in self.entries.iter().zip(values) {
            match p.kind {
                ParameterKind::Nuclear { atom, axis } => {
                    let a = atoms.get_mut(atom).ok_or_else(|| {
                        Error::InvalidMolecule(format!("atom index {atom} out of range"))
                    })?;
                    a.position[axis] = v;
                }
                ParameterKind::ChainBond { bond } => {
                    if bond + 1 >= atoms.len() {
                        return Err(Error::InvalidMolecule(format!("bond {bond} out of range")));
                    }
                    let shift = v - (atoms[bond + 1].position[2] - atoms[bond].position[2]);
                    for a in &mut atoms[bond + 1..] {
                        a.position[2] += shift;
                    }
                }
                ParameterKind::Field { .. } => {}
            }
        }
        Molecule::new(atoms, base.net_charge())
    }

    /// Field vector (a.u.) from the field parameters.
    pub fn field_vector(&self, values: &[f64]) -> [f64; 3] {
        let mut f = [0.0; 3];
        for (p, &v) in self.entries.iter().zip(values) {
            if let ParameterKind::Field { axis } = p.kind {
                f[axis] += v;
            }
        }
        f
    }
}
