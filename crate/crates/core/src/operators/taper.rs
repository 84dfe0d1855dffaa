use super::dense::ground_energy;
use super::pauli::{Pauli, PauliString, PauliSum, PauliTerm};
use crate::error::{Error, Result};

/// Which qubits were removed, the ±1 eigenvalue substituted for each, and
/// where the survivors landed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaperingMap {
    pub n_qubits: usize,
    pub removed: Vec<usize>,
    pub eigenvalues: Vec<i8>,
    /// `surviving[k]` is the original index of new qubit `k`.
    pub surviving: Vec<usize>,
}

impl TaperingMap {
    pub fn identity(n: usize) -> Self {
        TaperingMap {
            n_qubits: n,
            removed: Vec::new(),
            eigenvalues: Vec::new(),
            surviving: (0..n).collect(),
        }
    }

    pub fn n_tapered(&self) -> usize {
        self.surviving.len()
    }

    /// Applies this map to any sum on the original register.
    pub fn apply(&self, s: &PauliSum) -> Result<PauliSum> {
        if s.n_qubits() != self.n_qubits {
            return Err(Error::QubitMismatch(self.n_qubits, s.n_qubits()));
        }
        let mut terms = Vec::with_capacity(s.len());
        for t in s.terms() {
            let mut coeff = t.coeff;
            for (&q, &ev) in self.removed.iter().zip(&self.eigenvalues) {
                match t.string.get(q) {
                    Pauli::I => {}
                    Pauli::Z => coeff *= ev as f64,
                    _ => return Err(Error::NotTaperable(q)),
                }
            }
            terms.push(PauliTerm::new(coeff, t.string.remove_qubits(&self.removed)));
        }
        PauliSum::from_terms(self.n_tapered(), terms)
    }

    /// Maps a computational-basis state of the original register, or `None`
    /// when it lies outside the selected sector.
    pub fn apply_bits(&self, bits: u64) -> Option<u64> {
        for (&q, &ev) in self.removed.iter().zip(&self.eigenvalues) {
            let z = if bits >> q & 1 == 1 { -1 } else { 1 };
            if z != ev {
                return None;
            }
        }
        Some(
            self.surviving
                .iter()
                .enumerate()
                .fold(0u64, |acc, (k, &q)| acc | ((bits >> q & 1) << k)),
        )
    }
}

/// Qubits that carry only I or Z in every term.
pub fn taperable_qubits(s: &PauliSum) -> Vec<usize> {
    let xs = s.terms().iter().fold(0u64, |acc, t| acc | t.string.x_mask());
    (0..s.n_qubits()).filter(|&q| xs >> q & 1 == 0).collect()
}

/// Replaces each removed qubit's Z by its sector eigenvalue and reindexes.
pub fn taper(s: &PauliSum, sector: &[(usize, i8)]) -> Result<(PauliSum, TaperingMap)> {
    let n = s.n_qubits();
    let mut removed: Vec<(usize, i8)> = sector.to_vec();
    removed.sort_by_key(|&(q, _)| q);
    for &(q, ev) in &removed {
        if q >= n {
            return Err(Error::Config(format!("qubit {q} out of range")));
        }
        if ev != 1 && ev != -1 {
            return Err(Error::Config(format!("eigenvalue {ev} is not ±1")));
        }
    }
    let map = TaperingMap {
        n_qubits: n,
        removed: removed.iter().map(|&(q, _)| q).collect(),
        eigenvalues: removed.iter().map(|&(_, e)| e).collect(),
        surviving: (0..n).filter(|q| !removed.iter().any(|&(r, _)| r == *q)).collect(),
    };
    Ok((map.apply(s)?, map))
}

/// Enumerates every ±1 assignment on `qubits` and keeps the sector whose
/// reduced ground energy reproduces the full ground energy (first match in
/// enumeration order, all-(+1) first).
pub fn select_sector(s: &PauliSum, qubits: &[usize]) -> Result<(PauliSum, TaperingMap)> {
    let full = ground_energy(s)?;
    let mut best: Option<(f64, PauliSum, TaperingMap)> = None;
    for mask in 0u32..(1 << qubits.len()) {
        let sector: Vec<(usize, i8)> = qubits
            .iter()
            .enumerate()
            .map(|(k, &q)| (q, if mask >> k & 1 == 1 { -1 } else { 1 }))
            .collect();
        let (reduced, map) = taper(s, &sector)?;
        let e = ground_energy(&reduced)?;
        if (e - full).abs() < 1e-10 {
            return Ok((reduced, map));
        }
        if best.as_ref().is_none_or(|(b, _, _)| e < *b) {
            best = Some((e, reduced, map));
        }
    }
    let (e, _, _) = best.expect("at least one sector");
    Err(Error::Config(format!(
        "no sector reproduces the ground energy {full:.12} (best {e:.12})"
    )))
}

/// Difference between the reduced and full ground energies for a sector.
pub fn sector_energy_gap(s: &PauliSum, sector: &[(usize, i8)]) -> Result<f64> {
    let (reduced, _) = taper(s, sector)?;
    Ok(ground_energy(&reduced)? - ground_energy(s)?)
}

/// Convenience used by tests: the string on `n` qubits with Z on `qs`.
pub fn z_string(n: usize, qs: &[usize]) -> PauliString {
    PauliString::from_sparse(n, &qs.iter().map(|&q| (q, Pauli::Z)).collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_qubits_is_identity() {
        let s = PauliSum::from_text("0.5 Z X\n-0.2 I Y\n").unwrap();
        let (t, map) = taper(&s, &[]).unwrap();
        assert_eq!(t, s);
        assert_eq!(map, TaperingMap::identity(2));
    }

    #[test]
    fn x_qubit_is_not_taperable() {
        let s = PauliSum::from_text("0.5 Z X\n").unwrap();
        assert!(matches!(taper(&s, &[(1, 1)]), Err(Error::NotTaperable(1))));
        assert_eq!(taperable_qubits(&s), vec![0]);
    }

    #[test]
    fn substitution_and_reindexing() {
        let s = PauliSum::from_text("1.0 Z X Z\n2.0 I I Z\n").unwrap();
        let (t, map) = taper(&s, &[(2, -1)]).unwrap();
        assert_eq!(map.surviving, vec![0, 1]);
        let expected = PauliSum::from_text("-1.0 Z X\n-2.0 I I\n").unwrap();
        assert!(t.max_difference(&expected) < 1e-15);
        assert_eq!(map.apply_bits(0b100), Some(0b00));
        assert_eq!(map.apply_bits(0b001), None);
    }
}
