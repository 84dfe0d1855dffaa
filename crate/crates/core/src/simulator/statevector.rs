use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operators::{apply_string, PauliString, DENSE_QUBIT_LIMIT};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// 2^N complex amplitudes; qubit q is bit q of the basis index.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    n: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    /// |0…0⟩ on `n` qubits.
    pub fn zero(n: usize) -> Result<Self> {
        Self::basis(n, 0)
    }

    /// Computational-basis state |bits⟩.
    pub fn basis(n: usize, bits: u64) -> Result<Self> {
        if n > DENSE_QUBIT_LIMIT {
            return Err(Error::TooManyQubits(n, DENSE_QUBIT_LIMIT));
        }
        let dim = 1usize << n;
        if bits as usize >= dim {
            return Err(Error::Config(format!("basis state {bits} outside {n} qubits")));
        }
        let mut amps = vec![ZERO; dim];
        amps[bits as usize] = ONE;
        Ok(Statevector { n, amps })
    }

    /// Wraps raw amplitudes, normalizing them.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if !dim.is_power_of_two() {
            return Err(Error::Config(format!("{dim} amplitudes is not a power of two")));
        }
        let n = dim.trailing_zeros() as usize;
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Config("state has zero or non-finite norm".into()));
        }
        Ok(Statevector {
            n,
            amps: amps.into_iter().map(|a| a / norm).collect(),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &Statevector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// P|ψ⟩ for a Pauli string.
    pub fn apply_pauli(&mut self, s: &PauliString) {
        let mut out = vec![ZERO; self.amps.len()];
        for (b, a) in self.amps.iter().enumerate() {
            let (phase, b2) = apply_string(s, b);
            out[b2] = phase * a;
        }
        self.amps = out;
    }

    /// exp(−iφP/2)|ψ⟩ = cos(φ/2)|ψ⟩ − i sin(φ/2) P|ψ⟩.
    pub fn apply_pauli_rotation(&mut self, s: &PauliString, phi: f64) {
        let (sn, cs) = (phi / 2.0).sin_cos();
        let mut out: Vec<Complex64> = self.amps.iter().map(|a| a * cs).collect();
        let k = Complex64::new(0.0, -sn);
        for (b, a) in self.amps.iter().enumerate() {
            let (phase, b2) = apply_string(s, b);
            out[b2] += k * phase * a;
        }
        self.amps = out;
    }

    /// ⟨ψ|P|ψ⟩ (real for Hermitian P).
    pub fn pauli_expectation(&self, s: &PauliString) -> f64 {
        let mut acc = ZERO;
        for (b, a) in self.amps.iter().enumerate() {
            let (phase, b2) = apply_string(s, b);
            acc += self.amps[b2].conj() * phase * a;
        }
        acc.re
    }

    /// Applies a 2×2 unitary `[[m00, m01], [m10, m11]]` to qubit `q`.
    pub fn apply_single(&mut self, q: usize, m: [[Complex64; 2]; 2]) {
        let bit = 1usize << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a0, a1) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[i | bit] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    pub fn apply_x(&mut self, q: usize) {
        let bit = 1usize << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                self.amps.swap(i, i | bit);
            }
        }
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) {
        let (c, t) = (1usize << control, 1usize << target);
        for i in 0..self.amps.len() {
            if i & c != 0 && i & t == 0 {
                self.amps.swap(i, i | t);
            }
        }
    }

    pub fn apply_cz(&mut self, a: usize, b: usize) {
        let mask = (1usize << a) | (1usize << b);
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if i & mask == mask {
                *amp = -*amp;
            }
        }
    }
}
