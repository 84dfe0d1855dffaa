//! Dense-matrix oracle for small Pauli sums.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use super::pauli::{PauliString, PauliSum};
use crate::error::{Error, Result};

pub const DENSE_QUBIT_LIMIT: usize = 16;

/// Applies a Pauli string to basis state `b`: returns (phase, b').
#[inline]
pub fn apply_string(s: &PauliString, b: usize) -> (Complex64, usize) {
    let b64 = b as u64;
    let mut phase = match s.y_count() % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    };
    if (b64 & s.z_mask()).count_ones() % 2 == 1 {
        phase = -phase;
    }
    (phase, (b64 ^ s.x_mask()) as usize)
}

/// Kronecker assembly of the 2^N × 2^N matrix (qubit q ↔ bit q of the index).
pub fn to_dense_matrix(s: &PauliSum) -> Result<DMatrix<Complex64>> {
    let n = s.n_qubits();
    if n > DENSE_QUBIT_LIMIT {
        return Err(Error::TooManyQubits(n, DENSE_QUBIT_LIMIT));
    }
    let dim = 1usize << n;
    let mut m = DMatrix::zeros(dim, dim);
    for t in s.terms() {
        for b in 0..dim {
            let (phase, out) = apply_string(&t.string, b);
            m[(out, b)] += t.coeff * phase;
        }
    }
    Ok(m)
}

/// Ascending eigenvalues and eigenvectors (columns) of a Hermitian sum.
pub fn eigh(s: &PauliSum) -> Result<(DVector<f64>, DMatrix<Complex64>)> {
    let m = to_dense_matrix(s)?;
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = DVector::from_iterator(order.len(), order.iter().map(|&i| eig.eigenvalues[i]));
    let vectors = DMatrix::from_columns(
        &order
            .iter()
            .map(|&i| eig.eigenvectors.column(i).into_owned())
            .collect::<Vec<_>>(),
    );
    Ok((values, vectors))
}

/// Ascending spectrum.
pub fn spectrum(s: &PauliSum) -> Result<Vec<f64>> {
    Ok(eigh(s)?.0.iter().copied().collect())
}

/// Lowest eigenvalue: the FCI energy for a molecular Hamiltonian.
pub fn ground_energy(s: &PauliSum) -> Result<f64> {
    Ok(spectrum(s)?[0])
}

/// Eigenvalues of `h` restricted to states with ⟨N⟩ = `target` (exact for
/// eigenvectors of a Hamiltonian commuting with N), ascending.
pub fn sector_spectrum(h: &PauliSum, number: &PauliSum, target: f64) -> Result<Vec<f64>> {
    let (values, vectors) = eigh(h)?;
    let nm = to_dense_matrix(number)?;
    // Diagonalize N inside each degenerate block so mixed eigenvectors split.
    let mut out = Vec::new();
    let mut i = 0;
    while i < values.len() {
        let mut j = i + 1;
        while j < values.len() && (values[j] - values[i]).abs() < 1e-9 {
            j += 1;
        }
        let block = vectors.columns(i, j - i).into_owned();
        let projected = block.adjoint() * &nm * &block;
        let nvals = SymmetricEigen::new(projected).eigenvalues;
        for nv in nvals.iter() {
            if (nv - target).abs() < 1e-6 {
                out.push(values[i]);
            }
        }
        i = j;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::pauli::{Pauli, PauliTerm};

    #[test]
    fn z_is_diagonal() {
        let z = PauliSum::single(1.0, PauliString::from_letters(&[Pauli::Z]));
        let m = to_dense_matrix(&z).unwrap();
        assert_eq!(m[(0, 0)], Complex64::new(1.0, 0.0));
        assert_eq!(m[(1, 1)], Complex64::new(-1.0, 0.0));
        assert_eq!(m[(0, 1)], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn y_matrix_entries() {
        let y = PauliSum::single(1.0, PauliString::from_letters(&[Pauli::Y]));
        let m = to_dense_matrix(&y).unwrap();
        assert_eq!(m[(0, 1)], Complex64::new(0.0, -1.0));
        assert_eq!(m[(1, 0)], Complex64::new(0.0, 1.0));
    }

    #[test]
    fn size_limit() {
        let big = PauliSum::identity(17, 1.0);
        assert!(matches!(to_dense_matrix(&big), Err(Error::TooManyQubits(17, 16))));
    }

    #[test]
    fn two_qubit_spectrum() {
        // X⊗X has eigenvalues ±1, each doubly degenerate.
        let s = PauliSum::from_terms(
            2,
            vec![PauliTerm::new(1.0, PauliString::from_letters(&[Pauli::X, Pauli::X]))],
        )
        .unwrap();
        let e = spectrum(&s).unwrap();
        assert!((e[0] + 1.0).abs() < 1e-12 && (e[3] - 1.0).abs() < 1e-12);
    }
}
