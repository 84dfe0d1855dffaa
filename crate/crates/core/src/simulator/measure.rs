use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::circuit::{Angle, Gate, ParameterizedCircuit};
use super::statevector::Statevector;
use crate::error::{Error, Result};
use crate::operators::{Pauli, PauliString, PauliSum};

/// Σ_P h_P ⟨ψ|P|ψ⟩ for a real-coefficient observable.
pub fn expectation(obs: &PauliSum, psi: &Statevector) -> Result<f64> {
    obs.require_observable()?;
    if obs.n_qubits() != psi.n_qubits() {
        return Err(Error::QubitMismatch(obs.n_qubits(), psi.n_qubits()));
    }
    Ok(obs
        .terms()
        .iter()
        .map(|t| t.coeff.re * psi.pauli_expectation(&t.string))
        .sum())
}

/// Independent RNG stream for one (seed, stream) pair.
pub fn rng_stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn sample_counts(probs: &[f64], shots: u64, rng: &mut ChaCha8Rng) -> Result<Vec<u64>> {
    let dist = WeightedIndex::new(probs)
        .map_err(|e| Error::Config(format!("cannot sample state: {e}")))?;
    let mut counts = vec![0u64; probs.len()];
    for _ in 0..shots {
        counts[dist.sample(rng)] += 1;
    }
    Ok(counts)
}

/// Rotates each qubit so that measuring Z reads out the letter of `s`.
fn rotate_to_basis(psi: &mut Statevector, s: &PauliString) {
    for q in 0..s.n_qubits() {
        let g = match s.get(q) {
            Pauli::X => vec![Gate::H(q)],
            Pauli::Y => vec![Gate::Rz(q, Angle::Fixed(-std::f64::consts::FRAC_PI_2)), Gate::H(q)],
            _ => continue,
        };
        let mut c = ParameterizedCircuit::new(s.n_qubits());
        for g in g {
            c.push(g).expect("qubit in range");
        }
        *psi = c.bind_and_run(&[], psi).expect("parameter-free circuit");
    }
}

/// Shot-based estimate of ⟨obs⟩ on the state prepared by `circuit(θ)`:
/// per non-identity term, rotate into its eigenbasis, sample bitstrings and
/// average (−1)^(parity over the term's support). Term k uses stream k of
/// `seed`, so results are reproducible and independent of evaluation order.
pub fn sampled_expectation(
    obs: &PauliSum,
    circuit: &ParameterizedCircuit,
    theta: &[f64],
    shots: u64,
    seed: u64,
) -> Result<f64> {
    obs.require_observable()?;
    if shots == 0 {
        return Err(Error::Config("shots must be positive".into()));
    }
    if obs.n_qubits() != circuit.n_qubits() {
        return Err(Error::QubitMismatch(obs.n_qubits(), circuit.n_qubits()));
    }
    let psi = circuit.prepare(theta)?;
    let mut total = 0.0;
    for (k, t) in obs.terms().iter().enumerate() {
        if t.string.is_identity() {
            total += t.coeff.re;
            continue;
        }
        let mut rotated = psi.clone();
        rotate_to_basis(&mut rotated, &t.string);
        let mut rng = rng_stream(seed, k as u64);
        let counts = sample_counts(&rotated.probabilities(), shots, &mut rng)?;
        let support = t.string.support();
        let signed: i64 = counts
            .iter()
            .enumerate()
            .map(|(b, &c)| {
                if (b as u64 & support).count_ones().is_multiple_of(2) {
                    c as i64
                } else {
                    -(c as i64)
                }
            })
            .sum();
        total += t.coeff.re * signed as f64 / shots as f64;
    }
    Ok(total)
}

/// |⟨ψ₁|ψ₂⟩|² computed from the amplitudes.
pub fn overlap_probability(
    c1: &ParameterizedCircuit,
    theta1: &[f64],
    c2: &ParameterizedCircuit,
    theta2: &[f64],
) -> Result<f64> {
    let a = c1.prepare(theta1)?;
    let b = c2.prepare(theta2)?;
    if a.n_qubits() != b.n_qubits() {
        return Err(Error::QubitMismatch(a.n_qubits(), b.n_qubits()));
    }
    Ok(a.inner(&b).norm_sqr())
}

/// Circuit U₁†U₂ whose all-zeros probability is |⟨ψ₁|ψ₂⟩|². Slots are
/// θ₂ followed by θ₁.
pub fn overlap_circuit(
    c1: &ParameterizedCircuit,
    c2: &ParameterizedCircuit,
) -> Result<ParameterizedCircuit> {
    c2.then(&c1.inverse())
}

/// Shot-based |⟨ψ₁|ψ₂⟩|²: fraction of all-zeros outcomes of U₁†U₂|0⟩.
pub fn sampled_overlap_probability(
    c1: &ParameterizedCircuit,
    theta1: &[f64],
    c2: &ParameterizedCircuit,
    theta2: &[f64],
    shots: u64,
    seed: u64,
) -> Result<f64> {
    if shots == 0 {
        return Err(Error::Config("shots must be positive".into()));
    }
    let joint = overlap_circuit(c1, c2)?;
    let theta: Vec<f64> = theta2.iter().chain(theta1).copied().collect();
    let psi = joint.prepare(&theta)?;
    let counts = sample_counts(&psi.probabilities(), shots, &mut rng_stream(seed, 0))?;
    Ok(counts[0] as f64 / shots as f64)
}

/// How energies are evaluated: exact statevector expectation or shot
/// sampling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
#[derive(Default)]
pub enum Engine {
    #[default]
    Exact,
    Sampled { shots: u64, seed: u64 },
}


impl Engine {
    pub fn is_exact(&self) -> bool {
        matches!(self, Engine::Exact)
    }

    /// ⟨obs⟩ on `circuit(θ)`. `draw` distinguishes repeated sampled
    /// evaluations so each sees fresh shot noise.
    pub fn energy(
        &self,
        obs: &PauliSum,
        circuit: &ParameterizedCircuit,
        theta: &[f64],
        draw: u64,
    ) -> Result<f64> {
        match *self {
            Engine::Exact => expectation(obs, &circuit.prepare(theta)?),
            Engine::Sampled { shots, seed } => {
                sampled_expectation(obs, circuit, theta, shots, mix_seed(seed, draw))
            }
        }
    }
}

pub fn mix_seed(seed: u64, draw: u64) -> u64 {
    seed ^ draw.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::PauliTerm;

    fn obs(text: &str) -> PauliSum {
        PauliSum::from_text(text).unwrap()
    }

    #[test]
    fn z_on_zero_and_x_on_plus() {
        let zero = Statevector::zero(1).unwrap();
        assert_eq!(expectation(&obs("1 Z"), &zero).unwrap(), 1.0);
        let mut c = ParameterizedCircuit::new(1);
        c.push(Gate::H(0)).unwrap();
        let plus = c.prepare(&[]).unwrap();
        assert!((expectation(&obs("1 X"), &plus).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn complex_observable_rejected() {
        let s = PauliSum::from_terms(
            1,
            vec![PauliTerm::new(
                num_complex::Complex64::new(0.0, 1.0),
                PauliString::from_letters(&[Pauli::Z]),
            )],
        )
        .unwrap();
        let zero = Statevector::zero(1).unwrap();
        assert!(matches!(expectation(&s, &zero), Err(Error::NotObservable(_))));
    }

    #[test]
    fn sampled_is_deterministic_and_close() {
        let mut c = ParameterizedCircuit::new(2);
        c.push(Gate::Ry(0, Angle::slot(0))).unwrap();
        c.push(Gate::Cnot { control: 0, target: 1 }).unwrap();
        c.push(Gate::Rz(1, Angle::slot(1))).unwrap();
        let h = obs("0.3 I I\n0.5 Z Z\n-0.7 X X\n0.2 Y Y\n0.4 Z I");
        let theta = [0.7, 0.3];
        let exact = expectation(&h, &c.prepare(&theta).unwrap()).unwrap();
        let a = sampled_expectation(&h, &c, &theta, 20_000, 7).unwrap();
        let b = sampled_expectation(&h, &c, &theta, 20_000, 7).unwrap();
        assert_eq!(a, b);
        assert!((a - exact).abs() < 5.0 * h.one_norm() / (20_000f64).sqrt());
    }

    #[test]
    fn overlap_of_identical_and_orthogonal() {
        let mut c = ParameterizedCircuit::new(1);
        c.push(Gate::Ry(0, Angle::slot(0))).unwrap();
        assert!((overlap_probability(&c, &[0.4], &c, &[0.4]).unwrap() - 1.0).abs() < 1e-14);
        assert!(overlap_probability(&c, &[0.0], &c, &[std::f64::consts::PI]).unwrap() < 1e-30);
        let p = sampled_overlap_probability(&c, &[0.4], &c, &[0.4], 1000, 1).unwrap();
        assert_eq!(p, 1.0);
    }
}
