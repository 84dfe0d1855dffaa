use std::cell::Cell;

use crate::error::{Error, Result};
use crate::operators::PauliSum;
use crate::simulator::{Engine, ParameterizedCircuit};

/// A scalar cost over circuit parameters that is a linear combination of
/// expectation values, so the parameter-shift rule applies to it.
pub trait Objective {
    fn n_params(&self) -> usize;
    fn value(&self, theta: &[f64]) -> Result<f64>;
    fn evaluations(&self) -> u64;

    /// Gradient by the two-point shift rule with shift `s`.
    fn gradient(&self, theta: &[f64], s: f64) -> Result<Vec<f64>> {
        shift_gradient(self, theta, s)
    }
}

/// Circuits rewritten with one slot per rotation, for objectives whose
/// slots are shared or scaled.
struct Expansion {
    circuits: Vec<ParameterizedCircuit>,
    map: Vec<(usize, f64)>,
}

impl Expansion {
    fn of(circuits: &[&ParameterizedCircuit]) -> Option<Expansion> {
        if circuits.iter().all(|c| c.has_simple_slots()) {
            return None;
        }
        let mut map = Vec::new();
        let circuits = circuits
            .iter()
            .map(|c| {
                let (e, m) = c.expanded();
                map = m;
                e
            })
            .collect();
        Some(Expansion { circuits, map })
    }

    fn angles(&self, theta: &[f64]) -> Vec<f64> {
        self.map.iter().map(|&(i, scale)| scale * theta[i]).collect()
    }

    /// Σ_k scale_k ∂f/∂φ_k accumulated onto the original slots.
    fn gradient(
        &self,
        theta: &[f64],
        s: f64,
        mut f: impl FnMut(&[f64]) -> Result<f64>,
    ) -> Result<Vec<f64>> {
        let phi = self.angles(theta);
        let mut g = vec![0.0; theta.len()];
        let mut t = phi.clone();
        for (k, &(i, scale)) in self.map.iter().enumerate() {
            t[k] = phi[k] + s;
            let plus = f(&t)?;
            t[k] = phi[k] - s;
            let minus = f(&t)?;
            t[k] = phi[k];
            g[i] += scale * (plus - minus) / (2.0 * s.sin());
        }
        Ok(g)
    }
}

/// ⟨H⟩ on one circuit.
pub struct EnergyObjective<'a> {
    pub hamiltonian: &'a PauliSum,
    pub circuit: &'a ParameterizedCircuit,
    pub engine: Engine,
    count: Cell<u64>,
    expansion: Option<Expansion>,
}

impl<'a> EnergyObjective<'a> {
    pub fn new(hamiltonian: &'a PauliSum, circuit: &'a ParameterizedCircuit, engine: Engine) -> Self {
        EnergyObjective {
            hamiltonian,
            circuit,
            engine,
            count: Cell::new(0),
            expansion: Expansion::of(&[circuit]),
        }
    }

    fn eval(&self, circuit: &ParameterizedCircuit, theta: &[f64]) -> Result<f64> {
        let draw = self.count.get();
        self.count.set(draw + 1);
        self.engine.energy(self.hamiltonian, circuit, theta, draw)
    }
}

impl Objective for EnergyObjective<'_> {
    fn n_params(&self) -> usize {
        self.circuit.n_slots()
    }

    fn value(&self, theta: &[f64]) -> Result<f64> {
        self.eval(self.circuit, theta)
    }

    fn evaluations(&self) -> u64 {
        self.count.get()
    }

    fn gradient(&self, theta: &[f64], s: f64) -> Result<Vec<f64>> {
        check_length(self, theta)?;
        match &self.expansion {
            None => shift_gradient(self, theta, s),
            Some(e) => e.gradient(theta, s, |phi| self.eval(&e.circuits[0], phi)),
        }
    }
}

/// Σ_i w_i ⟨H⟩ over circuits sharing one parameter vector.
pub struct WeightedObjective<'a> {
    pub hamiltonian: &'a PauliSum,
    pub circuits: &'a [ParameterizedCircuit],
    pub weights: &'a [f64],
    pub engine: Engine,
    count: Cell<u64>,
    expansion: Option<Expansion>,
}

impl<'a> WeightedObjective<'a> {
    pub fn new(
        hamiltonian: &'a PauliSum,
        circuits: &'a [ParameterizedCircuit],
        weights: &'a [f64],
        engine: Engine,
    ) -> Result<Self> {
        if circuits.len() != weights.len() || circuits.is_empty() {
            return Err(Error::Config("one weight per circuit required".into()));
        }
        let k = circuits[0].n_slots();
        if circuits.iter().any(|c| c.n_slots() != k) {
            return Err(Error::Config("circuits must share the parameter vector".into()));
        }
        let refs: Vec<&ParameterizedCircuit> = circuits.iter().collect();
        let expansion = Expansion::of(&refs);
        if let Some(e) = &expansion {
            let first = circuits[0].expanded().1;
            if circuits.iter().any(|c| c.expanded().1 != first) {
                return Err(Error::Config("circuits must use their slots identically".into()));
            }
            debug_assert_eq!(e.map, first);
        }
        Ok(WeightedObjective {
            hamiltonian,
            circuits,
            weights,
            engine,
            count: Cell::new(0),
            expansion,
        })
    }

    fn eval<'c>(
        &self,
        circuits: impl Iterator<Item = &'c ParameterizedCircuit>,
        theta: &[f64],
    ) -> Result<f64> {
        let draw = self.count.get();
        self.count.set(draw + 1);
        let mut total = 0.0;
        for (i, (c, w)) in circuits.zip(self.weights).enumerate() {
            let d = draw * self.circuits.len() as u64 + i as u64;
            total += w * self.engine.energy(self.hamiltonian, c, theta, d)?;
        }
        Ok(total)
    }
}

impl Objective for WeightedObjective<'_> {
    fn n_params(&self) -> usize {
        self.circuits[0].n_slots()
    }

    fn value(&self, theta: &[f64]) -> Result<f64> {
        self.eval(self.circuits.iter(), theta)
    }

    fn evaluations(&self) -> u64 {
        self.count.get()
    }

    fn gradient(&self, theta: &[f64], s: f64) -> Result<Vec<f64>> {
        check_length(self, theta)?;
        match &self.expansion {
            None => shift_gradient(self, theta, s),
            Some(e) => e.gradient(theta, s, |phi| self.eval(e.circuits.iter(), phi)),
        }
    }
}

fn check_length<O: Objective + ?Sized>(obj: &O, theta: &[f64]) -> Result<()> {
    if theta.len() != obj.n_params() {
        return Err(Error::ParameterLength {
            expected: obj.n_params(),
            got: theta.len(),
        });
    }
    Ok(())
}

fn check_slot<O: Objective + ?Sized>(obj: &O, j: usize) -> Result<()> {
    if j >= obj.n_params() {
        return Err(Error::SlotOutOfRange {
            slot: j,
            count: obj.n_params(),
        });
    }
    Ok(())
}

/// (f(θ + s·e_j) − f(θ − s·e_j)) / (2 sin s).
pub fn shift_derivative<O: Objective + ?Sized>(
    obj: &O,
    theta: &[f64],
    j: usize,
    s: f64,
) -> Result<f64> {
    check_slot(obj, j)?;
    let mut t = theta.to_vec();
    t[j] = theta[j] + s;
    let plus = obj.value(&t)?;
    t[j] = theta[j] - s;
    let minus = obj.value(&t)?;
    Ok((plus - minus) / (2.0 * s.sin()))
}

pub fn shift_gradient<O: Objective + ?Sized>(obj: &O, theta: &[f64], s: f64) -> Result<Vec<f64>> {
    (0..theta.len()).map(|j| shift_derivative(obj, theta, j, s)).collect()
}

/// Four-point double-shift rule for ∂²f/∂θ_i∂θ_j.
pub fn shift_second_derivative<O: Objective + ?Sized>(
    obj: &O,
    theta: &[f64],
    i: usize,
    j: usize,
    s1: f64,
    s2: f64,
) -> Result<f64> {
    check_slot(obj, i)?;
    check_slot(obj, j)?;
    let eval = |di: f64, dj: f64| {
        let mut t = theta.to_vec();
        t[i] += di;
        t[j] += dj;
        obj.value(&t)
    };
    let pp = eval(s1, s2)?;
    let pm = eval(s1, -s2)?;
    let mp = eval(-s1, s2)?;
    let mm = eval(-s1, -s2)?;
    Ok((pp - pm - mp + mm) / (4.0 * s1.sin() * s2.sin()))
}

/// ∂⟨H⟩/∂θ_j on `circuit` by the parameter-shift rule, summed over every
/// rotation the slot drives.
pub fn parameter_shift_gradient(
    circuit: &ParameterizedCircuit,
    theta: &[f64],
    h: &PauliSum,
    j: usize,
    s: f64,
) -> Result<f64> {
    let obj = EnergyObjective::new(h, circuit, Engine::Exact);
    check_slot(&obj, j)?;
    if circuit.has_simple_slots() {
        return shift_derivative(&obj, theta, j, s);
    }
    check_length(&obj, theta)?;
    let (e, map) = circuit.expanded();
    let phi: Vec<f64> = map.iter().map(|&(i, scale)| scale * theta[i]).collect();
    let inner = EnergyObjective::new(h, &e, Engine::Exact);
    let mut g = 0.0;
    for (k, &(i, scale)) in map.iter().enumerate() {
        if i == j {
            g += scale * shift_derivative(&inner, &phi, k, s)?;
        }
    }
    Ok(g)
}

/// ∂²⟨H⟩/∂θ_i∂θ_j on `circuit` by the double-shift rule, summed over every
/// pair of rotations the two slots drive.
pub fn parameter_shift_hessian(
    circuit: &ParameterizedCircuit,
    theta: &[f64],
    h: &PauliSum,
    i: usize,
    j: usize,
    s1: f64,
    s2: f64,
) -> Result<f64> {
    let obj = EnergyObjective::new(h, circuit, Engine::Exact);
    check_slot(&obj, i)?;
    check_slot(&obj, j)?;
    if circuit.has_simple_slots() {
        return shift_second_derivative(&obj, theta, i, j, s1, s2);
    }
    check_length(&obj, theta)?;
    let (e, map) = circuit.expanded();
    let phi: Vec<f64> = map.iter().map(|&(k, scale)| scale * theta[k]).collect();
    let inner = EnergyObjective::new(h, &e, Engine::Exact);
    let mut total = 0.0;
    for (k, &(_, sa)) in map.iter().enumerate().filter(|(_, m)| m.0 == i) {
        for (l, &(_, sb)) in map.iter().enumerate().filter(|(_, m)| m.0 == j) {
            total += sa * sb * shift_second_derivative(&inner, &phi, k, l, s1, s2)?;
        }
    }
    Ok(total)
}
