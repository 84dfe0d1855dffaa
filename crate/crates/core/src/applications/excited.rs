use rayon::prelude::*;

use super::setup::System;
use crate::derivatives::{first_order, HamiltonianFamily, DEFAULT_STEP};
use crate::error::{Error, Result};
use crate::operators::{eigh, sector_spectrum, to_dense_matrix};
use crate::report::{Table, Value};
use crate::simulator::{excitation_ansatz, hea_ansatz, Engine, Entangler, ParameterizedCircuit};
use crate::vqe::{particle_numbers, particle_tolerance, ssvqe_minimize, OptimizerConfig, SsvqeConfig};

use super::setup::AnsatzKind;

/// How excited states are found.
#[derive(Debug, Clone, PartialEq)]
pub struct ExcitedSetup {
    pub ansatz: AnsatzKind,
    pub depth: usize,
    pub entangler: Entangler,
    /// `None` takes the lowest determinants with the molecule's electron
    /// count (four, or fewer if the space is smaller).
    pub ssvqe: Option<SsvqeConfig>,
    pub optimizer: OptimizerConfig,
    pub engine: Engine,
}

impl Default for ExcitedSetup {
    /// One layer of excitation rotations on the four lowest S_z = 0
    /// determinants, BFGS, three repeats.
    fn default() -> Self {
        ExcitedSetup {
            ansatz: AnsatzKind::Excitation,
            depth: 1,
            entangler: Entangler::Cz,
            ssvqe: None,
            optimizer: OptimizerConfig::bfgs().with_jitter(0.3, 0),
            engine: Engine::Exact,
        }
    }
}

impl ExcitedSetup {
    fn ansatz(&self, family: &HamiltonianFamily) -> Result<ParameterizedCircuit> {
        let n = family.n_qubits();
        match self.ansatz {
            AnsatzKind::Hea => hea_ansatz(n, self.depth, self.entangler),
            AnsatzKind::Excitation if family.tapering().removed.is_empty() => {
                excitation_ansatz(n, family.encoding(), self.depth)
            }
            _ => Err(Error::Config("excited states need an untapered hea or excitation ansatz".into())),
        }
    }

    fn config(&self, family: &HamiltonianFamily) -> Result<SsvqeConfig> {
        if let Some(c) = &self.ssvqe {
            return Ok(c.clone());
        }
        let n = family.n_qubits();
        let ne = family.n_electrons();
        let mut last = None;
        for k in (1..=4).rev() {
            match SsvqeConfig::determinants(n, ne, family.encoding(), k) {
                Ok(mut c) => {
                    c.repeats = 3;
                    return Ok(c);
                }
                Err(e) => last = Some(e),
            }
        }
        Err(last.expect("at least one attempt"))
    }
}

/// One particle-filtered state at one bond length.
#[derive(Debug, Clone, PartialEq)]
pub struct ExcitedPoint {
    pub r: f64,
    pub index: usize,
    pub energy: f64,
    pub derivative: f64,
    pub particles: f64,
    pub exact_energy: f64,
    pub exact_derivative: f64,
}

/// Eigenvalues in the target electron-count sector at each of R−h, R, R+h.
fn sector_levels(family: &HamiltonianFamily, r: f64, h: f64) -> Result<[Vec<f64>; 3]> {
    let n_op = family.number_operator()?;
    let target = family.n_electrons() as f64;
    let at = |x: f64| -> Result<Vec<f64>> {
        let v = vec![x; family.parameters().len()];
        sector_spectrum(&family.build(&v)?, &n_op, target)
    };
    Ok([at(r - h)?, at(r)?, at(r + h)?])
}

/// States and derivatives at one bond length of a symmetric stretch.
pub fn excited_point(system: &System, r: f64, setup: &ExcitedSetup) -> Result<Vec<ExcitedPoint>> {
    let family = system.stretched(r)?.bond_family()?;
    let cfg = setup.config(&family)?;
    let ansatz = setup.ansatz(&family)?;
    let h = family.base();
    let res = ssvqe_minimize(h, &ansatz, &cfg, &setup.optimizer, setup.engine)?;
    let prepared: Vec<_> = res.states.iter().map(|s| s.state.clone()).collect();
    let n_op = family.number_operator()?;
    let counts = particle_numbers(&prepared, &n_op, setup.engine)?;
    let target = family.n_electrons() as f64;
    let tol = particle_tolerance(&setup.engine);
    let levels = sector_levels(&family, r, DEFAULT_STEP)?;
    let values = family.base_values();
    let n_params = values.len();
    let mut out = Vec::new();
    for (s, &count) in res.states.iter().zip(&counts) {
        if (count - target).abs() >= tol {
            continue;
        }
        // Symmetric stretch: dE/dR = Σ_i ∂E/∂R_i.
        let derivative = (0..n_params)
            .map(|i| first_order(&family, &values, &s.state, i, DEFAULT_STEP, setup.engine))
            .sum::<Result<f64>>()?;
        let k = nearest(&levels[1], s.energy);
        out.push(ExcitedPoint {
            r,
            index: out.len(),
            energy: s.energy,
            derivative,
            particles: count,
            exact_energy: levels[1][k],
            exact_derivative: (levels[2][k] - levels[0][k]) / (2.0 * DEFAULT_STEP),
        });
    }
    Ok(out)
}

fn nearest(levels: &[f64], e: f64) -> usize {
    levels
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 - e).abs().total_cmp(&(b.1 - e).abs()))
        .map(|(k, _)| k)
        .unwrap_or(0)
}

/// Particle-filtered SS-VQE energies and Hellmann–Feynman derivatives along
/// a symmetric stretch, with exact sector eigenvalues for comparison.
pub fn excited_derivative_curves(system: &System, grid: &[f64], setup: &ExcitedSetup) -> Result<Table> {
    let results: Vec<Result<Vec<ExcitedPoint>>> =
        grid.par_iter().map(|&r| excited_point(system, r, setup)).collect();
    let mut table = Table::new(&[
        "R_angstrom",
        "state",
        "E_vqe",
        "dE_dR",
        "E_exact",
        "dE_dR_exact",
        "N",
        "units",
    ]);
    for (&r, res) in grid.iter().zip(results) {
        match res {
            Ok(points) => {
                for p in points {
                    table.push(vec![
                        r.into(),
                        p.index.into(),
                        p.energy.into(),
                        p.derivative.into(),
                        p.exact_energy.into(),
                        p.exact_derivative.into(),
                        p.particles.into(),
                        "hartree/angstrom".into(),
                    ])?;
                }
            }
            Err(e) => {
                table.notes.push(format!("R={r:.6}: {e}"));
                let mut row = vec![Value::from(r)];
                row.extend(std::iter::repeat_n(Value::Missing, 6));
                row.push("hartree/angstrom".into());
                table.push(row)?;
            }
        }
    }
    Ok(table)
}

/// Every eigenvalue of the family's base Hamiltonian with its ⟨N⟩.
pub fn labelled_spectrum(family: &HamiltonianFamily) -> Result<Vec<(f64, f64)>> {
    let (vals, vecs) = eigh(family.base())?;
    let n = to_dense_matrix(&family.number_operator()?)?;
    Ok((0..vals.len())
        .map(|k| {
            let v = vecs.column(k);
            ((v.adjoint() * &n * v)[(0, 0)].re, vals[k])
        })
        .map(|(count, e)| (e, count))
        .collect())
}
