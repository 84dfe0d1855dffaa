use std::fmt::Write;

use rayon::prelude::*;

use super::energy::{first_order, second_order_from_shifted, shifted_state, theta_gradient_norm, STALE_GRADIENT};
use super::family::HamiltonianFamily;
use crate::error::Result;
use crate::report::format_number;
use crate::simulator::{Engine, PreparedState};
use crate::vqe::GroundStateSolver;

/// Energy derivatives of one state with respect to every system parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeReport {
    /// 0 for the ground state.
    pub state_index: usize,
    pub names: Vec<String>,
    pub units: Vec<String>,
    pub values: Vec<f64>,
    pub energy: f64,
    pub first: Vec<f64>,
    /// Row i, column j holds ∂²E/∂η_i∂η_j.
    pub second: Option<Vec<Vec<f64>>>,
    pub step: f64,
    pub state_step: f64,
    pub engine: Engine,
    pub warnings: Vec<String>,
}

impl DerivativeReport {
    /// Largest |H_ij − H_ji|.
    pub fn symmetry_error(&self) -> f64 {
        let Some(m) = &self.second else { return 0.0 };
        let mut worst: f64 = 0.0;
        for i in 0..m.len() {
            for j in 0..i {
                worst = worst.max((m[i][j] - m[j][i]).abs());
            }
        }
        worst
    }

    /// One `key=value` line per field.
    pub fn to_record(&self) -> String {
        let mut s = String::new();
        let (shots, seed) = match self.engine {
            Engine::Exact => ("exact".to_string(), "none".to_string()),
            Engine::Sampled { shots, seed } => (shots.to_string(), seed.to_string()),
        };
        let _ = writeln!(s, "state={}", self.state_index);
        let _ = writeln!(s, "energy={}", format_number(self.energy));
        let _ = writeln!(s, "energy_units=hartree");
        let _ = writeln!(s, "engine={}", if self.engine.is_exact() { "exact" } else { "sampled" });
        let _ = writeln!(s, "shots={shots}");
        let _ = writeln!(s, "seed={seed}");
        let _ = writeln!(s, "step={}", format_number(self.step));
        let _ = writeln!(s, "state_step={}", format_number(self.state_step));
        for (k, name) in self.names.iter().enumerate() {
            let _ = writeln!(s, "parameter.{name}={}", format_number(self.values[k]));
            let _ = writeln!(s, "parameter.{name}.units={}", self.units[k]);
            let _ = writeln!(s, "d1.{name}={}", format_number(self.first[k]));
            let _ = writeln!(s, "d1.{name}.units=hartree/{}", self.units[k]);
        }
        if let Some(m) = &self.second {
            for (i, a) in self.names.iter().enumerate() {
                for (j, b) in self.names.iter().enumerate() {
                    let _ = writeln!(s, "d2.{a}.{b}={}", format_number(m[i][j]));
                    let units = if i == j {
                        format!("hartree/{}^2", self.units[i])
                    } else {
                        format!("hartree/({}*{})", self.units[i], self.units[j])
                    };
                    let _ = writeln!(s, "d2.{a}.{b}.units={units}");
                }
            }
        }
        for (k, w) in self.warnings.iter().enumerate() {
            let _ = writeln!(s, "warning.{k}={w}");
        }
        s
    }
}

/// First (and optionally second) derivatives of a ground state optimized
/// at `values`. Second derivatives use one re-optimized state per
/// parameter, shared across the row.
pub fn derivative_report(
    family: &HamiltonianFamily,
    values: &[f64],
    state: &PreparedState,
    solver: &GroundStateSolver,
    step: f64,
    state_step: f64,
    with_second: bool,
) -> Result<DerivativeReport> {
    let h = family.build(values)?;
    let engine = solver.engine;
    let energy = engine.energy(&h, &state.circuit, &state.theta, u64::MAX)?;
    let n = values.len();
    let mut warnings = Vec::new();
    let stale = theta_gradient_norm(&h, state)?;
    if stale > STALE_GRADIENT {
        warnings.push(format!(
            "state gradient norm {} exceeds {STALE_GRADIENT}; derivatives assume an optimized state",
            format_number(stale)
        ));
    }
    let first = (0..n)
        .into_par_iter()
        .map(|i| first_order(family, values, state, i, step, engine))
        .collect::<Result<Vec<_>>>()?;
    let second = if with_second {
        let shifted = (0..n)
            .into_par_iter()
            .map(|i| shifted_state(family, values, state, i, state_step, solver))
            .collect::<Result<Vec<_>>>()?;
        for (i, (_, converged)) in shifted.iter().enumerate() {
            if !converged {
                warnings.push(format!(
                    "re-optimization at {} + {} did not converge",
                    family.parameters().entries()[i].name,
                    format_number(state_step)
                ));
            }
        }
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
        let flat = pairs
            .par_iter()
            .map(|&(i, j)| {
                second_order_from_shifted(family, values, state, &shifted[i].0, i, j, step, state_step, engine)
                    .map(|(c, r)| c + r)
            })
            .collect::<Result<Vec<_>>>()?;
        Some(flat.chunks(n).map(|r| r.to_vec()).collect())
    } else {
        None
    };
    let params = family.parameters();
    Ok(DerivativeReport {
        state_index: 0,
        names: params.names(),
        units: params.entries().iter().map(|p| p.kind.units().to_string()).collect(),
        values: values.to_vec(),
        energy,
        first,
        second,
        step,
        state_step,
        engine,
        warnings,
    })
}
