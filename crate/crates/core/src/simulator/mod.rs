//! Dense statevector simulation of parameterized circuits.

mod circuit;
mod measure;
mod prepared;
mod statevector;

pub use circuit::{
    basis_state_circuit, bind_and_run, excitation_ansatz, hea_ansatz, hf_bits, hf_reference_circuit,
    tapered_ansatz, Angle, Entangler, Gate, ParameterizedCircuit,
};
pub use measure::{
    expectation, mix_seed, overlap_circuit, overlap_probability, rng_stream,
    sampled_expectation, sampled_overlap_probability, Engine,
};
pub use prepared::PreparedState;
pub use statevector::Statevector;
