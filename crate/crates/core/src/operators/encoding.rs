//! Fermion-to-qubit encodings of the form b = β·n (mod 2).
//!
//! Jordan-Wigner uses β = I; Bravyi-Kitaev uses the binary-tree (Fenwick)
//! matrix, built at the next power of two and truncated to the mode count.
//! For a linear encoding the ladder operators follow directly from β:
//!
//! * flipping n_j flips every qubit i with β_ij = 1 (X on column j),
//! * the Jordan-Wigner sign (−1)^{Σ_{k<j} n_k} is a Z string on the rows of
//!   π·β⁻¹ (π strictly lower-triangular ones),
//! * n_j itself is the parity of the qubits in row j of β⁻¹.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use super::fermion::{FermionOperator, Ladder};
use super::pauli::{PauliString, PauliSum, PauliTerm};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Encoding {
    JordanWigner,
    BravyiKitaev,
}

impl fmt::Display for Encoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Encoding::JordanWigner => "jw",
            Encoding::BravyiKitaev => "bk",
        })
    }
}

impl FromStr for Encoding {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "jw" | "jordan-wigner" => Ok(Encoding::JordanWigner),
            "bk" | "bravyi-kitaev" => Ok(Encoding::BravyiKitaev),
            other => Err(Error::Config(format!("unknown mapping `{other}`"))),
        }
    }
}

/// Row-bitmask representation of a binary matrix (row i → bits over columns).
fn bk_matrix(n: usize) -> Vec<u64> {
    let size = n.next_power_of_two().max(1);
    let mut rows = vec![1u64];
    let mut m = 1;
    while m < size {
        let mut next = rows.clone();
        for (i, r) in rows.iter().enumerate() {
            let mut shifted = r << m;
            if i == m - 1 {
                // Last row of the lower block also stores the upper block's total.
                shifted |= (1u64 << m) - 1;
            }
            next.push(shifted);
        }
        rows = next;
        m *= 2;
    }
    let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    rows.truncate(n);
    rows.iter().map(|r| r & mask).collect()
}

/// Inverse of a lower-triangular binary matrix with unit diagonal.
fn invert_unit_lower(rows: &[u64]) -> Vec<u64> {
    let n = rows.len();
    let mut inv = vec![0u64; n];
    for i in 0..n {
        // row_i(β)·β⁻¹ = e_i  ⇒  inv_i = e_i ⊕ Σ_{k<i, β_ik=1} inv_k
        let mut r = 1u64 << i;
        for (k, inv_k) in inv.iter().enumerate().take(i) {
            if rows[i] >> k & 1 == 1 {
                r ^= inv_k;
            }
        }
        inv[i] = r;
    }
    inv
}

/// Per-mode qubit sets for a linear encoding.
#[derive(Debug, Clone)]
pub struct LinearEncoding {
    n: usize,
    /// Qubits flipped when n_j flips (column j of β).
    flip: Vec<u64>,
    /// Qubits whose parity equals Σ_{k<j} n_k.
    parity: Vec<u64>,
    /// Qubits whose parity equals n_j.
    occupation: Vec<u64>,
    rows: Vec<u64>,
}

impl LinearEncoding {
    pub fn new(encoding: Encoding, n: usize) -> Self {
        assert!(n <= 64, "at most 64 modes");
        let rows: Vec<u64> = match encoding {
            Encoding::JordanWigner => (0..n).map(|i| 1u64 << i).collect(),
            Encoding::BravyiKitaev => bk_matrix(n),
        };
        let inv = invert_unit_lower(&rows);
        let flip = (0..n)
            .map(|j| {
                (0..n)
                    .filter(|&i| rows[i] >> j & 1 == 1)
                    .fold(0u64, |acc, i| acc | 1 << i)
            })
            .collect();
        let parity = (0..n)
            .map(|j| inv.iter().take(j).fold(0u64, |acc, r| acc ^ r))
            .collect();
        LinearEncoding {
            n,
            flip,
            parity,
            occupation: inv,
            rows,
        }
    }

    pub fn n_modes(&self) -> usize {
        self.n
    }

    /// Qubit bitstring encoding an occupation bitstring.
    pub fn encode_occupation(&self, occupation: u64) -> u64 {
        self.rows
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, r)| acc | (((r & occupation).count_ones() as u64 & 1) << i))
    }

    /// Pauli sum for one ladder operator.
    pub fn ladder(&self, op: Ladder) -> PauliSum {
        let j = op.mode;
        let n = self.n;
        let base = PauliString::from_masks(n, self.flip[j], self.parity[j]);
        let occ = PauliString::from_masks(n, 0, self.occupation[j]);
        // a_j = X_C Z_P (1 − Z_F)/2,  a†_j = X_C Z_P (1 + Z_F)/2
        let sign = if op.dagger { 0.5 } else { -0.5 };
        let (k, prod) = base.multiply(&occ);
        let phase = match k {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        PauliSum::from_terms(
            n,
            vec![
                PauliTerm::new(0.5, base),
                PauliTerm::new(phase * sign, prod),
            ],
        )
        .expect("width matches")
    }

    pub fn encode(&self, op: &FermionOperator) -> Result<PauliSum> {
        if op.n_modes() != self.n {
            return Err(Error::QubitMismatch(self.n, op.n_modes()));
        }
        let ladders: Vec<[PauliSum; 2]> = (0..self.n)
            .map(|j| [self.ladder(Ladder::annihilate(j)), self.ladder(Ladder::create(j))])
            .collect();
        let mut terms = Vec::new();
        for (c, ops) in op.terms() {
            let mut acc = PauliSum::identity(self.n, 1.0).scale(*c);
            for o in ops {
                acc = &acc * &ladders[o.mode][o.dagger as usize];
                if acc.is_empty() {
                    break;
                }
            }
            terms.extend_from_slice(acc.terms());
        }
        PauliSum::from_terms(self.n, terms)
    }
}

pub fn jordan_wigner(op: &FermionOperator) -> Result<PauliSum> {
    LinearEncoding::new(Encoding::JordanWigner, op.n_modes()).encode(op)
}

pub fn bravyi_kitaev(op: &FermionOperator) -> Result<PauliSum> {
    LinearEncoding::new(Encoding::BravyiKitaev, op.n_modes()).encode(op)
}

pub fn encode(op: &FermionOperator, encoding: Encoding) -> Result<PauliSum> {
    LinearEncoding::new(encoding, op.n_modes()).encode(op)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::pauli::Pauli;

    #[test]
    fn bk_matrix_for_four_modes() {
        // q0 = n0, q1 = n0+n1, q2 = n2, q3 = n0+n1+n2+n3
        assert_eq!(bk_matrix(4), vec![0b0001, 0b0011, 0b0100, 0b1111]);
        let b8 = bk_matrix(8);
        assert_eq!(b8[7], 0xFF);
        assert_eq!(b8[5], 0b0011_0000);
        assert_eq!(bk_matrix(6).len(), 6);
    }

    #[test]
    fn inverse_is_inverse() {
        for n in 1..=12 {
            let rows = bk_matrix(n);
            let inv = invert_unit_lower(&rows);
            for i in 0..n {
                // (β · β⁻¹)_i = ⊕_{k: β_ik} inv_k
                let prod = (0..n)
                    .filter(|&k| rows[i] >> k & 1 == 1)
                    .fold(0u64, |acc, k| acc ^ inv[k]);
                assert_eq!(prod, 1 << i);
            }
        }
    }

    #[test]
    fn jw_number_operator_of_mode_zero() {
        let mut op = FermionOperator::zero(1);
        op.push(1.0, vec![Ladder::create(0), Ladder::annihilate(0)]).unwrap();
        let s = jordan_wigner(&op).unwrap();
        let expected = PauliSum::from_text("0.5 I\n-0.5 Z").unwrap();
        assert!(s.max_difference(&expected) < 1e-15);
    }

    #[test]
    fn jw_annihilator_is_x_plus_iy() {
        let enc = LinearEncoding::new(Encoding::JordanWigner, 3);
        let a2 = enc.ladder(Ladder::annihilate(2));
        let zzx = PauliString::from_letters(&[Pauli::Z, Pauli::Z, Pauli::X]);
        let zzy = PauliString::from_letters(&[Pauli::Z, Pauli::Z, Pauli::Y]);
        assert_eq!(a2.coefficient(&zzx), Complex64::new(0.5, 0.0));
        assert_eq!(a2.coefficient(&zzy), Complex64::new(0.0, 0.5));
    }

    #[test]
    fn occupation_encoding() {
        let bk = LinearEncoding::new(Encoding::BravyiKitaev, 4);
        // two electrons in modes 0, 1 → q1 holds n0+n1 = 0, q3 total = 0
        assert_eq!(bk.encode_occupation(0b0011), 0b0001);
        let jw = LinearEncoding::new(Encoding::JordanWigner, 4);
        assert_eq!(jw.encode_occupation(0b0011), 0b0011);
    }
}
