use serde::{Deserialize, Serialize};

use super::config::OptimizerConfig;
use super::minimize::{initial_point, minimize, VqeResult};
use super::objective::WeightedObjective;
use crate::error::{Error, Result};
use crate::operators::{Encoding, LinearEncoding, PauliSum};
use crate::simulator::{basis_state_circuit, Engine, ParameterizedCircuit, PreparedState};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SsvqeConfig {
    /// Strictly decreasing positive weights, one per state.
    pub weights: Vec<f64>,
    /// Computational-basis inputs |ψ_i⟩, pairwise distinct.
    pub initial_states: Vec<u64>,
    /// Independent optimizations; the lowest weighted cost wins.
    pub repeats: usize,
}

impl SsvqeConfig {
    /// Weights w_i = ratio^i.
    pub fn geometric(initial_states: Vec<u64>, ratio: f64) -> Self {
        SsvqeConfig {
            weights: (0..initial_states.len()).map(|i| ratio.powi(i as i32)).collect(),
            initial_states,
            repeats: 5,
        }
    }

    /// The `k` lowest basis states in bitstring order with w_i = 0.5^i.
    pub fn lowest_bitstrings(k: usize) -> Self {
        Self::geometric((0..k as u64).collect(), 0.5)
    }

    /// The `count` lowest `n_electrons`-electron determinants with the
    /// smallest |S_z| (interleaved spin orbitals), ordered by the sum of
    /// occupied spatial indices, encoded under `encoding`; w_i = 0.5^i.
    pub fn determinants(
        n_modes: usize,
        n_electrons: usize,
        encoding: Encoding,
        count: usize,
    ) -> Result<Self> {
        if n_modes > 20 || n_electrons > n_modes {
            return Err(Error::Config(format!(
                "{n_electrons} electrons in {n_modes} spin orbitals"
            )));
        }
        let alpha_mask = (0..n_modes).step_by(2).fold(0u64, |m, q| m | 1 << q);
        let n_alpha = n_electrons.div_ceil(2) as u32;
        let mut occ: Vec<(u32, u64)> = (0u64..1 << n_modes)
            .filter(|o| o.count_ones() as usize == n_electrons && (o & alpha_mask).count_ones() == n_alpha)
            .map(|o| {
                let cost = (0..n_modes).filter(|q| o >> q & 1 == 1).map(|q| q as u32 / 2).sum();
                (cost, o)
            })
            .collect();
        occ.sort_unstable();
        if occ.len() < count || count == 0 {
            return Err(Error::Config(format!(
                "requested {count} determinants, {} available",
                occ.len()
            )));
        }
        let enc = LinearEncoding::new(encoding, n_modes);
        Ok(Self::geometric(
            occ.iter().take(count).map(|&(_, o)| enc.encode_occupation(o)).collect(),
            0.5,
        ))
    }

    pub fn k(&self) -> usize {
        self.weights.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.weights.is_empty() || self.weights.len() != self.initial_states.len() {
            return Err(Error::Config("one weight per initial state required".into()));
        }
        if self.weights.iter().any(|w| !(*w > 0.0)) {
            return Err(Error::Config("weights must be positive".into()));
        }
        if self.weights.windows(2).any(|p| p[1] >= p[0]) {
            return Err(Error::Config("weights must be strictly decreasing".into()));
        }
        let mut s = self.initial_states.clone();
        s.sort_unstable();
        if s.windows(2).any(|p| p[0] == p[1]) {
            return Err(Error::Config("initial states must be pairwise orthogonal".into()));
        }
        if self.repeats == 0 {
            return Err(Error::Config("at least one repeat required".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SsvqeState {
    pub initial_bits: u64,
    pub state: PreparedState,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SsvqeResult {
    /// States sorted by energy (ties by initial bitstring).
    pub states: Vec<SsvqeState>,
    pub cost: f64,
    pub converged: bool,
    pub best_repeat: usize,
    pub repeat_costs: Vec<f64>,
    pub run: VqeResult,
}

/// Minimizes Σ_i w_i ⟨ψ_i|U(θ)† H U(θ)|ψ_i⟩ over a shared θ. Repeat r uses
/// optimizer seed `opt.seed + r`.
pub fn ssvqe_minimize(
    h: &PauliSum,
    ansatz: &ParameterizedCircuit,
    cfg: &SsvqeConfig,
    opt: &OptimizerConfig,
    engine: Engine,
) -> Result<SsvqeResult> {
    cfg.validate()?;
    h.require_observable()?;
    let n = ansatz.n_qubits();
    if h.n_qubits() != n {
        return Err(Error::QubitMismatch(h.n_qubits(), n));
    }
    if n < 64 && cfg.k() > 1usize << n {
        return Err(Error::Config(format!("{} states exceed 2^{n}", cfg.k())));
    }
    let circuits = cfg
        .initial_states
        .iter()
        .map(|&b| basis_state_circuit(n, b)?.then(ansatz))
        .collect::<Result<Vec<_>>>()?;
    let obj_engine = engine;
    let mut best: Option<(usize, VqeResult)> = None;
    let mut repeat_costs = Vec::with_capacity(cfg.repeats);
    for r in 0..cfg.repeats {
        let ropt = OptimizerConfig {
            seed: opt.seed.wrapping_add(r as u64),
            ..opt.clone()
        };
        let obj = WeightedObjective::new(h, &circuits, &cfg.weights, obj_engine)?;
        let res = minimize(&obj, initial_point(ansatz.n_slots(), &ropt), &ropt)?;
        repeat_costs.push(res.energy);
        if best.as_ref().is_none_or(|(_, b)| res.energy < b.energy) {
            best = Some((r, res));
        }
    }
    let (best_repeat, run) = best.expect("at least one repeat");
    let mut states = circuits
        .into_iter()
        .zip(&cfg.initial_states)
        .enumerate()
        .map(|(i, (c, &bits))| {
            let energy = engine.energy(h, &c, &run.theta, u64::MAX - i as u64)?;
            Ok(SsvqeState {
                initial_bits: bits,
                state: PreparedState::new(c, run.theta.clone()),
                energy,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    states.sort_by(|a, b| {
        a.energy
            .total_cmp(&b.energy)
            .then(a.initial_bits.cmp(&b.initial_bits))
    });
    Ok(SsvqeResult {
        states,
        cost: run.energy,
        converged: run.converged,
        best_repeat,
        repeat_costs,
        run,
    })
}

/// Tolerance on |⟨N⟩ − target| for the exact and sampled engines.
pub fn particle_tolerance(engine: &Engine) -> f64 {
    if engine.is_exact() {
        1e-3
    } else {
        0.05
    }
}

/// ⟨N⟩ for each state.
pub fn particle_numbers(
    states: &[PreparedState],
    number_op: &PauliSum,
    engine: Engine,
) -> Result<Vec<f64>> {
    states
        .iter()
        .enumerate()
        .map(|(i, s)| engine.energy(number_op, &s.circuit, &s.theta, i as u64))
        .collect()
}

/// Indices of the states whose ⟨N⟩ is within tolerance of `target`.
pub fn particle_filter(
    states: &[PreparedState],
    number_op: &PauliSum,
    target: f64,
    engine: Engine,
) -> Result<Vec<usize>> {
    let tol = particle_tolerance(&engine);
    Ok(particle_numbers(states, number_op, engine)?
        .into_iter()
        .enumerate()
        .filter(|(_, n)| (n - target).abs() < tol)
        .map(|(i, _)| i)
        .collect())
}
