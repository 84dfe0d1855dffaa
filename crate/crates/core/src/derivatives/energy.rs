use num_complex::Complex64;

use super::family::HamiltonianFamily;
use super::stencil::{d2_hamiltonian, d_hamiltonian};
use crate::error::{Error, Result};
use crate::operators::PauliSum;
use crate::simulator::{mix_seed, sampled_overlap_probability, Engine, Gate, PreparedState, Statevector};
use crate::vqe::{EnergyObjective, GroundStateSolver, Objective};

/// θ-gradient norm above which a state is reported as not optimized for
/// the Hamiltonian it is differentiated against.
pub const STALE_GRADIENT: f64 = 1e-3;

/// ⟨ψ| ∂H/∂η_i |ψ⟩ with a central-difference operator derivative.
pub fn first_order(
    family: &HamiltonianFamily,
    values: &[f64],
    state: &PreparedState,
    i: usize,
    h: f64,
    engine: Engine,
) -> Result<f64> {
    let dh = d_hamiltonian(family, values, i, h)?;
    expectation_on(&dh, state, engine, i as u64)
}

fn expectation_on(op: &PauliSum, state: &PreparedState, engine: Engine, draw: u64) -> Result<f64> {
    if op.n_qubits() != state.n_qubits() {
        return Err(Error::QubitMismatch(op.n_qubits(), state.n_qubits()));
    }
    engine.energy(op, &state.circuit, &state.theta, draw)
}

/// Exact norm of ∂⟨H⟩/∂θ at the state's parameters.
pub fn theta_gradient_norm(h: &PauliSum, state: &PreparedState) -> Result<f64> {
    let obj = EnergyObjective::new(h, &state.circuit, Engine::Exact);
    let g = obj.gradient(&state.theta, std::f64::consts::FRAC_PI_2)?;
    Ok(g.iter().map(|x| x * x).sum::<f64>().sqrt())
}

/// ⟨a|P|b⟩ for every term of `op`, paired with its coefficient.
fn term_elements(op: &PauliSum, a: &Statevector, b: &Statevector) -> Vec<(f64, Complex64)> {
    op.terms()
        .iter()
        .map(|t| {
            let mut pb = b.clone();
            pb.apply_pauli(&t.string);
            (t.coeff.re, a.inner(&pb))
        })
        .collect()
}

/// Re⟨ψ₁|A|ψ₂⟩ scaled by a global phase e^{−iφ} applied to ψ₂.
fn element_with_phase(
    op: &PauliSum,
    psi1: &PreparedState,
    psi2: &PreparedState,
    phase: Complex64,
    engine: Engine,
) -> Result<f64> {
    op.require_observable()?;
    if op.n_qubits() != psi1.n_qubits() || op.n_qubits() != psi2.n_qubits() {
        return Err(Error::QubitMismatch(op.n_qubits(), psi2.n_qubits()));
    }
    let (a, b) = (psi1.statevector()?, psi2.statevector()?);
    let exact = term_elements(op, &a, &b);
    match engine {
        Engine::Exact => Ok(exact.iter().map(|(c, m)| c * (phase.conj() * m).re).sum()),
        Engine::Sampled { shots, seed } => {
            let mut total = 0.0;
            for (k, (t, (c, m))) in op.terms().iter().zip(&exact).enumerate() {
                // |⟨ψ₁|P|ψ₂⟩|² from the all-zeros rate of U₁†·P·U₂; the sign
                // comes from the noiseless amplitude (real-amplitude convention).
                let mut c2 = psi2.circuit.clone();
                c2.push(Gate::Pauli(t.string))?;
                let p = sampled_overlap_probability(
                    &psi1.circuit,
                    &psi1.theta,
                    &c2,
                    &psi2.theta,
                    shots,
                    mix_seed(seed, k as u64),
                )?;
                let aligned = phase.conj() * m;
                let sign = if aligned.norm() < 1e-14 { 0.0 } else { aligned.re / aligned.norm() };
                total += c * p.sqrt() * sign;
            }
            Ok(total)
        }
    }
}

/// Re⟨ψ₁|A|ψ₂⟩ for a real-coefficient sum A.
pub fn matrix_element_real(
    op: &PauliSum,
    psi1: &PreparedState,
    psi2: &PreparedState,
    engine: Engine,
) -> Result<f64> {
    element_with_phase(op, psi1, psi2, Complex64::new(1.0, 0.0), engine)
}

/// Unit phase of ⟨ψ₁|ψ₂⟩ (1 when the states are orthogonal).
fn relative_phase(psi1: &PreparedState, psi2: &PreparedState) -> Result<Complex64> {
    let ov = psi1.statevector()?.inner(&psi2.statevector()?);
    Ok(if ov.norm() < 1e-12 { Complex64::new(1.0, 0.0) } else { ov / ov.norm() })
}

/// A second derivative split into its Hamiltonian-curvature part and its
/// state-response part.
#[derive(Debug, Clone, PartialEq)]
pub struct SecondOrder {
    pub value: f64,
    /// ⟨ψ| ∂²H/∂η_i∂η_j |ψ⟩.
    pub curvature: f64,
    /// (2/dη)·Re[⟨ψ|∂H/∂η_j|ψ(η + dη·e_i)⟩ − ⟨ψ|∂H/∂η_j|ψ⟩].
    pub response: f64,
    /// State re-optimized at η + dη·e_i.
    pub shifted: PreparedState,
    pub shifted_converged: bool,
}

/// ∂²E/∂η_i∂η_j from a state at η and one re-optimized at η + dη·e_i.
#[allow(clippy::too_many_arguments)]
pub fn second_order_from_shifted(
    family: &HamiltonianFamily,
    values: &[f64],
    state: &PreparedState,
    shifted: &PreparedState,
    i: usize,
    j: usize,
    h: f64,
    d_eta: f64,
    engine: Engine,
) -> Result<(f64, f64)> {
    if !(d_eta > 0.0 && d_eta.is_finite()) {
        return Err(Error::Config(format!("state step {d_eta} must be positive")));
    }
    let curvature = expectation_on(&d2_hamiltonian(family, values, i, j, h)?, state, engine, 0)?;
    let dhj = d_hamiltonian(family, values, j, h)?;
    let diagonal = expectation_on(&dhj, state, engine, j as u64)?;
    let phase = relative_phase(state, shifted)?;
    let off = element_with_phase(&dhj, state, shifted, phase, engine)?;
    Ok((curvature, 2.0 / d_eta * (off - diagonal)))
}

/// ∂²E/∂η_i∂η_j at a ground state optimized at η: one warm-started,
/// tightened re-optimization at η + dη·e_i supplies the state response.
#[allow(clippy::too_many_arguments)]
pub fn second_order(
    family: &HamiltonianFamily,
    values: &[f64],
    state: &PreparedState,
    i: usize,
    j: usize,
    h: f64,
    d_eta: f64,
    solver: &GroundStateSolver,
) -> Result<SecondOrder> {
    let (shifted, converged) = shifted_state(family, values, state, i, d_eta, solver)?;
    let (curvature, response) = second_order_from_shifted(
        family,
        values,
        state,
        &shifted,
        i,
        j,
        h,
        d_eta,
        solver.engine,
    )?;
    Ok(SecondOrder {
        value: curvature + response,
        curvature,
        response,
        shifted,
        shifted_converged: converged,
    })
}

/// Re-optimizes `state` at η + dη·e_i, warm-started and tightened.
pub fn shifted_state(
    family: &HamiltonianFamily,
    values: &[f64],
    state: &PreparedState,
    i: usize,
    d_eta: f64,
    solver: &GroundStateSolver,
) -> Result<(PreparedState, bool)> {
    let mut v = values.to_vec();
    *v.get_mut(i)
        .ok_or_else(|| Error::Config(format!("parameter index {i} out of range")))? += d_eta;
    let h = family.build(&v)?;
    let (shifted, run) = solver.refine(&h, state, true)?;
    Ok((shifted, run.converged))
}
