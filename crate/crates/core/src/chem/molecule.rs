use crate::error::{Error, Result};

/// Ångström per Bohr.
pub const BOHR_IN_ANGSTROM: f64 = 0.52917721092;
pub const ANGSTROM_TO_BOHR: f64 = 1.0 / BOHR_IN_ANGSTROM;

const MIN_SEPARATION_ANGSTROM: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub symbol: String,
    pub charge: u32,
    /// Position in Ångström.
    pub position: [f64; 3],
}

impl Atom {
    pub fn hydrogen(position: [f64; 3]) -> Self {
        Atom {
            symbol: "H".to_string(),
            charge: 1,
            position,
        }
    }

    pub fn position_bohr(&self) -> [f64; 3] {
        self.position.map(|x| x * ANGSTROM_TO_BOHR)
    }
}

/// A validated set of nuclei plus a net charge.
#[derive(Debug, Clone, PartialEq)]
pub struct Molecule {
    atoms: Vec<Atom>,
    net_charge: i32,
}

fn nuclear_charge(symbol: &str) -> Option<u32> {
    match symbol {
        "H" | "h" => Some(1),
        _ => None,
    }
}

impl Molecule {
    pub fn new(atoms: Vec<Atom>, net_charge: i32) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidMolecule("no atoms".into()));
        }
        for (i, a) in atoms.iter().enumerate() {
            if a.charge == 0 {
                return Err(Error::InvalidMolecule(format!("atom {i} has Z = 0")));
            }
            if a.position.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidMolecule(format!("atom {i} has a non-finite position")));
            }
        }
        for i in 0..atoms.len() {
            for j in (i + 1)..atoms.len() {
                if distance(&atoms[i].position, &atoms[j].position) < MIN_SEPARATION_ANGSTROM {
                    return Err(Error::CoincidentAtoms(i, j));
                }
            }
        }
        let total: i64 = atoms.iter().map(|a| a.charge as i64).sum();
        let electrons = total - net_charge as i64;
        if electrons < 1 {
            return Err(Error::InvalidMolecule(format!(
                "electron count {electrons} must be at least 1"
            )));
        }
        Ok(Molecule { atoms, net_charge })
    }

    /// Hydrogen atoms placed along z at the given consecutive separations (Å).
    pub fn hydrogen_chain(bonds: &[f64]) -> Result<Self> {
        let mut z = 0.0;
        let mut atoms = vec![Atom::hydrogen([0.0, 0.0, 0.0])];
        for b in bonds {
            z += b;
            atoms.push(Atom::hydrogen([0.0, 0.0, z]));
        }
        Molecule::new(atoms, 0)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn net_charge(&self) -> i32 {
        self.net_charge
    }

    pub fn n_electrons(&self) -> usize {
        let total: i64 = self.atoms.iter().map(|a| a.charge as i64).sum();
        (total - self.net_charge as i64) as usize
    }

    /// Copy with one coordinate (Å) replaced.
    pub fn with_coordinate(&self, atom: usize, axis: usize, value: f64) -> Result<Self> {
        let mut atoms = self.atoms.clone();
        let a = atoms.get_mut(atom).ok_or_else(|| {
            Error::InvalidMolecule(format!("atom index {atom} out of range"))
        })?;
        a.position[axis] = value;
        Molecule::new(atoms, self.net_charge)
    }

    /// Centre of nuclear charge in Bohr.
    pub fn charge_center_bohr(&self) -> [f64; 3] {
        let total: f64 = self.atoms.iter().map(|a| a.charge as f64).sum();
        let mut c = [0.0; 3];
        for a in &self.atoms {
            let r = a.position_bohr();
            for k in 0..3 {
                c[k] += a.charge as f64 * r[k] / total;
            }
        }
        c
    }

    /// Rigid translation by `shift` (Å).
    pub fn translated(&self, shift: [f64; 3]) -> Self {
        let atoms = self
            .atoms
            .iter()
            .map(|a| Atom {
                position: [
                    a.position[0] + shift[0],
                    a.position[1] + shift[1],
                    a.position[2] + shift[2],
                ],
                ..a.clone()
            })
            .collect();
        Molecule {
            atoms,
            net_charge: self.net_charge,
        }
    }
}

fn distance(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

/// Parses XYZ text: count line, comment line (may carry `charge=k`), then
/// `Symbol x y z` lines in Ångström.
pub fn parse_xyz(text: &str) -> Result<Molecule> {
    let mut lines = text.lines().enumerate();
    let (_, count_line) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "empty input".into(),
    })?;
    let count: usize = count_line.trim().parse().map_err(|_| Error::Parse {
        line: 1,
        message: format!("expected atom count, found `{}`", count_line.trim()),
    })?;
    let comment = lines.next().map(|(_, l)| l).unwrap_or("");
    let mut net_charge = 0i32;
    for token in comment.split_whitespace() {
        if let Some(v) = token.strip_prefix("charge=") {
            net_charge = v.parse().map_err(|_| Error::Parse {
                line: 2,
                message: format!("bad charge token `{token}`"),
            })?;
        }
    }

    let mut atoms = Vec::with_capacity(count);
    for (idx, line) in lines {
        if atoms.len() == count {
            if line.trim().is_empty() {
                continue;
            }
            return Err(Error::Parse {
                line: idx + 1,
                message: format!("more atom lines than the declared {count}"),
            });
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(Error::Parse {
                line: idx + 1,
                message: format!("expected `Symbol x y z`, found `{}`", line.trim()),
            });
        }
        let charge = nuclear_charge(fields[0])
            .ok_or_else(|| Error::UnsupportedElement(fields[0].to_string()))?;
        let mut position = [0.0; 3];
        for k in 0..3 {
            position[k] = fields[k + 1].parse().map_err(|_| Error::Parse {
                line: idx + 1,
                message: format!("bad coordinate `{}`", fields[k + 1]),
            })?;
        }
        atoms.push(Atom {
            symbol: "H".to_string(),
            charge,
            position,
        });
    }
    if atoms.len() != count {
        return Err(Error::Parse {
            line: text.lines().count(),
            message: format!("declared {count} atoms, found {}", atoms.len()),
        });
    }
    Molecule::new(atoms, net_charge)
}

/// Nuclear repulsion energy in Hartree.
pub fn nuclear_repulsion(mol: &Molecule) -> Result<f64> {
    let atoms = mol.atoms();
    let mut e = 0.0;
    for i in 0..atoms.len() {
        for j in (i + 1)..atoms.len() {
            let r = distance(&atoms[i].position_bohr(), &atoms[j].position_bohr());
            if r < MIN_SEPARATION_ANGSTROM * ANGSTROM_TO_BOHR {
                return Err(Error::CoincidentAtoms(i, j));
            }
            e += (atoms[i].charge * atoms[j].charge) as f64 / r;
        }
    }
    Ok(e)
}

/// Σ_A Z_A (R_A − origin), in atomic units; `origin` in Bohr.
pub fn nuclear_dipole(mol: &Molecule, origin: [f64; 3]) -> [f64; 3] {
    let mut mu = [0.0; 3];
    for a in mol.atoms() {
        let r = a.position_bohr();
        for k in 0..3 {
            mu[k] += a.charge as f64 * (r[k] - origin[k]);
        }
    }
    mu
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_h2() {
        let m = parse_xyz("2\n\nH 0 0 0\nH 0 0 0.741").unwrap();
        assert_eq!(m.atoms().len(), 2);
        assert_eq!(m.n_electrons(), 2);
        assert_eq!(m.atoms()[1].position, [0.0, 0.0, 0.741]);
    }

    #[test]
    fn cation_without_electrons_is_rejected() {
        let err = parse_xyz("1\ncharge=1\nH 0 0 0").unwrap_err();
        assert!(matches!(err, Error::InvalidMolecule(_)), "{err}");
    }

    #[test]
    fn parses_collinear_h3() {
        let m = parse_xyz("3\n\nH 0 0 0\nH 0 0 0.936\nH 0 0 1.872").unwrap();
        assert_eq!(m.n_electrons(), 3);
    }

    #[test]
    fn reports_line_numbers_and_elements() {
        match parse_xyz("2\n\nH 0 0 0\nH 0 0").unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 4),
            e => panic!("unexpected {e}"),
        }
        assert!(matches!(
            parse_xyz("1\n\nHe 0 0 0").unwrap_err(),
            Error::UnsupportedElement(_)
        ));
        assert!(matches!(
            parse_xyz("2\n\nH 0 0 0\nH 0 0 0").unwrap_err(),
            Error::CoincidentAtoms(0, 1)
        ));
    }

    #[test]
    fn repulsion_values() {
        let one_bohr = Molecule::hydrogen_chain(&[BOHR_IN_ANGSTROM]).unwrap();
        assert!((nuclear_repulsion(&one_bohr).unwrap() - 1.0).abs() < 1e-14);
        // 1 / (0.741 / 0.52917721092), evaluated by hand.
        let h2 = Molecule::hydrogen_chain(&[0.741]).unwrap();
        assert!((nuclear_repulsion(&h2).unwrap() - 0.714139286).abs() < 1e-8);
    }

    #[test]
    fn homonuclear_dipole_vanishes_at_midpoint() {
        let h2 = Molecule::hydrogen_chain(&[0.741]).unwrap();
        let mu = nuclear_dipole(&h2, h2.charge_center_bohr());
        assert!(mu.iter().all(|x| x.abs() < 1e-14));
    }
}
