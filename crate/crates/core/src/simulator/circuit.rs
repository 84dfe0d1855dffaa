use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::statevector::Statevector;
use crate::error::{Error, Result};
use crate::operators::{
    encode, sum_simplify, Encoding, FermionOperator, Ladder, LadderProduct, LinearEncoding,
    PauliString,
};

/// A rotation angle: either fixed or `scale · θ[index]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Angle {
    Fixed(f64),
    Slot { index: usize, scale: f64 },
}

impl Angle {
    pub fn slot(index: usize) -> Self {
        Angle::Slot { index, scale: 1.0 }
    }

    fn resolve(&self, theta: &[f64]) -> f64 {
        match *self {
            Angle::Fixed(v) => v,
            Angle::Slot { index, scale } => scale * theta[index],
        }
    }

    fn negated(&self) -> Self {
        match *self {
            Angle::Fixed(v) => Angle::Fixed(-v),
            Angle::Slot { index, scale } => Angle::Slot { index, scale: -scale },
        }
    }

    fn offset(&self, by: usize) -> Self {
        match *self {
            Angle::Slot { index, scale } => Angle::Slot {
                index: index + by,
                scale,
            },
            fixed => fixed,
        }
    }

    fn slot_index(&self) -> Option<usize> {
        match *self {
            Angle::Slot { index, .. } => Some(index),
            Angle::Fixed(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    X(usize),
    H(usize),
    Ry(usize, Angle),
    Rz(usize, Angle),
    Cnot { control: usize, target: usize },
    Cz(usize, usize),
    /// A whole Pauli string applied as a unitary.
    Pauli(PauliString),
    /// exp(−iφP/2) for a Pauli string P.
    PauliRotation(PauliString, Angle),
}

impl Gate {
    fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::X(q) | Gate::H(q) | Gate::Ry(q, _) | Gate::Rz(q, _) => vec![*q],
            Gate::Cnot { control, target } => vec![*control, *target],
            Gate::Cz(a, b) => vec![*a, *b],
            Gate::Pauli(_) | Gate::PauliRotation(..) => Vec::new(),
        }
    }

    fn angle(&self) -> Option<&Angle> {
        match self {
            Gate::Ry(_, a) | Gate::Rz(_, a) | Gate::PauliRotation(_, a) => Some(a),
            _ => None,
        }
    }

    fn apply(&self, psi: &mut Statevector, theta: &[f64]) {
        match self {
            Gate::X(q) => psi.apply_x(*q),
            Gate::H(q) => {
                let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
                psi.apply_single(*q, [[h, h], [h, -h]]);
            }
            Gate::Ry(q, a) => {
                let t = a.resolve(theta) / 2.0;
                let (s, c) = t.sin_cos();
                let (c, s) = (Complex64::new(c, 0.0), Complex64::new(s, 0.0));
                psi.apply_single(*q, [[c, -s], [s, c]]);
            }
            Gate::Rz(q, a) => {
                let t = a.resolve(theta) / 2.0;
                let zero = Complex64::new(0.0, 0.0);
                psi.apply_single(
                    *q,
                    [[Complex64::from_polar(1.0, -t), zero], [zero, Complex64::from_polar(1.0, t)]],
                );
            }
            Gate::Cnot { control, target } => psi.apply_cnot(*control, *target),
            Gate::Cz(a, b) => psi.apply_cz(*a, *b),
            Gate::Pauli(s) => psi.apply_pauli(s),
            Gate::PauliRotation(s, a) => psi.apply_pauli_rotation(s, a.resolve(theta)),
        }
    }

    fn inverse(&self) -> Gate {
        match self {
            Gate::Ry(q, a) => Gate::Ry(*q, a.negated()),
            Gate::Rz(q, a) => Gate::Rz(*q, a.negated()),
            Gate::PauliRotation(s, a) => Gate::PauliRotation(*s, a.negated()),
            other => other.clone(),
        }
    }

    fn with_angle(&self, angle: Angle) -> Gate {
        match self {
            Gate::Ry(q, _) => Gate::Ry(*q, angle),
            Gate::Rz(q, _) => Gate::Rz(*q, angle),
            Gate::PauliRotation(s, _) => Gate::PauliRotation(*s, angle),
            other => other.clone(),
        }
    }

    fn offset_slots(&self, by: usize) -> Gate {
        match self {
            Gate::Ry(q, a) => Gate::Ry(*q, a.offset(by)),
            Gate::Rz(q, a) => Gate::Rz(*q, a.offset(by)),
            Gate::PauliRotation(s, a) => Gate::PauliRotation(*s, a.offset(by)),
            other => other.clone(),
        }
    }
}

/// Two-qubit gate used between rotation layers of the hardware-efficient
/// ansatz.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Entangler {
    Cnot,
    #[default]
    Cz,
}

impl std::str::FromStr for Entangler {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cnot" => Ok(Entangler::Cnot),
            "cz" => Ok(Entangler::Cz),
            other => Err(Error::Config(format!("unknown entangler `{other}`"))),
        }
    }
}

/// Gate sequence on `n` qubits with `n_slots` bindable angles.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterizedCircuit {
    n: usize,
    gates: Vec<Gate>,
    n_slots: usize,
    depth: Option<usize>,
}

impl ParameterizedCircuit {
    pub fn new(n: usize) -> Self {
        ParameterizedCircuit {
            n,
            gates: Vec::new(),
            n_slots: 0,
            depth: None,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn n_slots(&self) -> usize {
        self.n_slots
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn depth(&self) -> Option<usize> {
        self.depth
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        if let Some(&q) = gate.qubits().iter().find(|&&q| q >= self.n) {
            return Err(Error::Config(format!("qubit {q} outside {} qubits", self.n)));
        }
        if let Gate::Pauli(s) | Gate::PauliRotation(s, _) = &gate {
            if s.n_qubits() != self.n {
                return Err(Error::QubitMismatch(self.n, s.n_qubits()));
            }
        }
        if let Gate::Cnot { control, target } = gate {
            if control == target {
                return Err(Error::Config("CNOT control equals target".into()));
            }
        }
        if let Some(i) = gate.angle().and_then(Angle::slot_index) {
            self.n_slots = self.n_slots.max(i + 1);
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Every slot below `n_slots` is used by at least one gate.
    pub fn slots_are_dense(&self) -> bool {
        let mut used = vec![false; self.n_slots];
        for g in &self.gates {
            if let Some(i) = g.angle().and_then(Angle::slot_index) {
                used[i] = true;
            }
        }
        used.into_iter().all(|u| u)
    }

    /// True when every slot drives exactly one gate with unit scale, so the
    /// two-point shift rule differentiates each slot directly.
    pub fn has_simple_slots(&self) -> bool {
        let mut uses = vec![0usize; self.n_slots];
        for g in &self.gates {
            if let Some(Angle::Slot { index, scale }) = g.angle() {
                if *scale != 1.0 {
                    return false;
                }
                uses[*index] += 1;
            }
        }
        uses.into_iter().all(|u| u == 1)
    }

    /// Copy with one fresh unit-scale slot per angle occurrence, plus
    /// `(original slot, scale)` for each fresh slot.
    pub fn expanded(&self) -> (ParameterizedCircuit, Vec<(usize, f64)>) {
        let mut map = Vec::new();
        let mut out = ParameterizedCircuit::new(self.n);
        out.depth = self.depth;
        for g in &self.gates {
            let gate = match g.angle() {
                Some(&Angle::Slot { index, scale }) => {
                    map.push((index, scale));
                    g.with_angle(Angle::slot(map.len() - 1))
                }
                _ => g.clone(),
            };
            out.gates.push(gate);
        }
        out.n_slots = map.len();
        (out, map)
    }

    /// `self` followed by `other`, with `other`'s slots shifted past ours.
    pub fn then(&self, other: &ParameterizedCircuit) -> Result<ParameterizedCircuit> {
        if other.n != self.n {
            return Err(Error::QubitMismatch(self.n, other.n));
        }
        let mut out = self.clone();
        for g in &other.gates {
            out.push(g.offset_slots(self.n_slots))?;
        }
        out.n_slots = self.n_slots + other.n_slots;
        out.depth = other.depth.or(self.depth);
        Ok(out)
    }

    /// Reversed gate order with negated angles.
    pub fn inverse(&self) -> ParameterizedCircuit {
        ParameterizedCircuit {
            n: self.n,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
            n_slots: self.n_slots,
            depth: self.depth,
        }
    }

    /// Binds `theta` and applies the circuit to `input`.
    pub fn bind_and_run(&self, theta: &[f64], input: &Statevector) -> Result<Statevector> {
        if theta.len() != self.n_slots {
            return Err(Error::ParameterLength {
                expected: self.n_slots,
                got: theta.len(),
            });
        }
        if input.n_qubits() != self.n {
            return Err(Error::QubitMismatch(self.n, input.n_qubits()));
        }
        let mut psi = input.clone();
        for g in &self.gates {
            g.apply(&mut psi, theta);
        }
        Ok(psi)
    }

    /// Runs the circuit on |0…0⟩.
    pub fn prepare(&self, theta: &[f64]) -> Result<Statevector> {
        self.bind_and_run(theta, &Statevector::zero(self.n)?)
    }
}

pub fn bind_and_run(
    c: &ParameterizedCircuit,
    theta: &[f64],
    input: &Statevector,
) -> Result<Statevector> {
    c.bind_and_run(theta, input)
}

/// X gates preparing computational-basis state `bits`.
pub fn basis_state_circuit(n: usize, bits: u64) -> Result<ParameterizedCircuit> {
    if n < 64 && bits >> n != 0 {
        return Err(Error::Config(format!("bitstring {bits:#b} wider than {n} qubits")));
    }
    let mut c = ParameterizedCircuit::new(n);
    for q in (0..n).filter(|q| bits >> q & 1 == 1) {
        c.push(Gate::X(q))?;
    }
    Ok(c)
}

/// Qubit bitstring of the Hartree-Fock determinant (lowest spin orbitals
/// filled) under `encoding`.
pub fn hf_bits(n_electrons: usize, encoding: Encoding, n: usize) -> Result<u64> {
    if n_electrons > n {
        return Err(Error::Config(format!(
            "{n_electrons} electrons do not fit in {n} spin orbitals"
        )));
    }
    let occupation = if n_electrons == 64 { u64::MAX } else { (1u64 << n_electrons) - 1 };
    Ok(LinearEncoding::new(encoding, n).encode_occupation(occupation))
}

pub fn hf_reference_circuit(
    n_electrons: usize,
    encoding: Encoding,
    n: usize,
) -> Result<ParameterizedCircuit> {
    basis_state_circuit(n, hf_bits(n_electrons, encoding, n)?)
}

/// `depth` blocks of per-qubit Ry·Rz followed by a linear entangling chain,
/// then a final rotation layer: 2N(D+1) slots.
pub fn hea_ansatz(n: usize, depth: usize, entangler: Entangler) -> Result<ParameterizedCircuit> {
    if depth == 0 {
        return Err(Error::Config("ansatz depth must be at least 1".into()));
    }
    let mut c = ParameterizedCircuit::new(n);
    let mut slot = 0;
    let mut rotations = |c: &mut ParameterizedCircuit| -> Result<()> {
        for q in 0..n {
            c.push(Gate::Ry(q, Angle::slot(slot)))?;
            c.push(Gate::Rz(q, Angle::slot(slot + 1)))?;
            slot += 2;
        }
        Ok(())
    };
    for _ in 0..depth {
        rotations(&mut c)?;
        for q in 0..n.saturating_sub(1) {
            c.push(match entangler {
                Entangler::Cnot => Gate::Cnot {
                    control: q,
                    target: q + 1,
                },
                Entangler::Cz => Gate::Cz(q, q + 1),
            })?;
        }
    }
    rotations(&mut c)?;
    c.depth = Some(depth);
    Ok(c)
}

/// Single-parameter two-qubit circuit: Ry on qubit 1 then CNOT(1→0). From
/// |01⟩ it spans cos(θ/2)|01⟩ + sin(θ/2)|10⟩.
pub fn tapered_ansatz() -> ParameterizedCircuit {
    let mut c = ParameterizedCircuit::new(2);
    c.push(Gate::Ry(1, Angle::slot(0))).expect("valid gate");
    c.push(Gate::Cnot {
        control: 1,
        target: 0,
    })
    .expect("valid gate");
    c.depth = Some(1);
    c
}

/// Spin-conserving excitations on interleaved spin orbitals (index 2p+σ):
/// every single p→q and every double (i,j)→(k,l), each unordered pair once.
fn spin_conserving_excitations(n_modes: usize) -> Vec<LadderProduct> {
    let spin = |m: usize| m % 2;
    let mut out = Vec::new();
    for p in 0..n_modes {
        for q in p + 1..n_modes {
            if spin(p) == spin(q) {
                out.push(vec![Ladder::create(q), Ladder::annihilate(p)]);
            }
        }
    }
    let pairs: Vec<(usize, usize)> = (0..n_modes)
        .flat_map(|i| (i + 1..n_modes).map(move |j| (i, j)))
        .collect();
    for (a, &(i, j)) in pairs.iter().enumerate() {
        for &(k, l) in &pairs[a + 1..] {
            if spin(i) + spin(j) == spin(k) + spin(l) {
                out.push(vec![
                    Ladder::create(l),
                    Ladder::create(k),
                    Ladder::annihilate(i),
                    Ladder::annihilate(j),
                ]);
            }
        }
    }
    out
}

/// Appends exp(θ(T − T†)) for one excitation T as commuting Pauli rotations
/// sharing `slot`.
fn push_excitation(
    c: &mut ParameterizedCircuit,
    excitation: &LadderProduct,
    encoding: Encoding,
    slot: usize,
) -> Result<()> {
    let n = c.n;
    let mut op = FermionOperator::zero(n);
    op.push(Complex64::new(0.0, 1.0), excitation.clone())?;
    let adjoint: LadderProduct = excitation
        .iter()
        .rev()
        .map(|l| Ladder {
            mode: l.mode,
            dagger: !l.dagger,
        })
        .collect();
    op.push(Complex64::new(0.0, -1.0), adjoint)?;
    // exp(θ(T − T†)) = exp(−iθG) with G = i(T − T†) Hermitian.
    let g = sum_simplify(&encode(&op, encoding)?);
    let terms = g.terms();
    for (a, t) in terms.iter().enumerate() {
        if t.coeff.im.abs() > 1e-12 {
            return Err(Error::NotHermitian("excitation generator".into()));
        }
        if terms[..a].iter().any(|u| !u.string.commutes_with(&t.string)) {
            return Err(Error::Config("excitation terms do not commute".into()));
        }
    }
    for t in terms.iter().filter(|t| !t.string.is_identity()) {
        c.push(Gate::PauliRotation(
            t.string,
            Angle::Slot {
                index: slot,
                scale: 2.0 * t.coeff.re,
            },
        ))?;
    }
    Ok(())
}

/// `layers` repetitions of every spin-conserving single and double
/// excitation rotation, one slot per excitation per layer. The circuit
/// conserves particle number and S_z, and θ = 0 is the identity.
pub fn excitation_ansatz(
    n_modes: usize,
    encoding: Encoding,
    layers: usize,
) -> Result<ParameterizedCircuit> {
    if layers == 0 {
        return Err(Error::Config("ansatz depth must be at least 1".into()));
    }
    let excitations = spin_conserving_excitations(n_modes);
    let mut c = ParameterizedCircuit::new(n_modes);
    for layer in 0..layers {
        for (k, e) in excitations.iter().enumerate() {
            push_excitation(&mut c, e, encoding, layer * excitations.len() + k)?;
        }
    }
    c.n_slots = layers * excitations.len();
    c.depth = Some(layers);
    Ok(c)
}
