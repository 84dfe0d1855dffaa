use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::setup::{System, VqeSetup};
use crate::derivatives::{first_order, second_order, DEFAULT_STEP};
use crate::error::{Error, Result};
use crate::report::{Table, Value};

/// Dipole and polarizability along one axis (atomic units).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResponseReport {
    pub axis: usize,
    pub energy: f64,
    /// −∂E/∂F at zero field.
    pub mu_electronic: f64,
    pub mu_nuclear: f64,
    /// μ_N − μ_E.
    pub mu_net: f64,
    /// ⟨ψ|μ̂|ψ⟩ with the encoded dipole operator.
    pub mu_operator: f64,
    /// −∂²E/∂F² from the second-derivative formula.
    pub alpha_energy: f64,
    /// Central difference of μ_E(F) between re-optimized states at ±h.
    pub alpha_dipole: f64,
    pub field_step: f64,
    pub warnings: Vec<String>,
}

/// Zero-field dipole and polarizability of the system's ground state.
pub fn response_properties(
    system: &System,
    axis: usize,
    field_step: f64,
    setup: &VqeSetup,
) -> Result<ResponseReport> {
    if !(field_step > 0.0) {
        return Err(Error::Config(format!("field step {field_step} must be positive")));
    }
    let family = system.field_family(axis)?;
    let solver = setup.solver_for(&family)?;
    let engine = setup.engine;
    let zero = [0.0];
    let (state, run) = solver.solve(family.base())?;
    let mut warnings = Vec::new();
    if !run.converged {
        warnings.push("zero-field optimization did not converge".to_string());
    }
    let mu_electronic = -first_order(&family, &zero, &state, 0, DEFAULT_STEP, engine)?;
    let mu_nuclear = family.nuclear_dipole(axis, &zero)?;
    let mu_operator = engine.energy(
        &family.dipole_operator(axis, &zero)?,
        &state.circuit,
        &state.theta,
        u64::MAX,
    )?;
    let so = second_order(&family, &zero, &state, 0, 0, DEFAULT_STEP, field_step, &solver)?;
    if !so.shifted_converged {
        warnings.push("shifted-field re-optimization did not converge".to_string());
    }
    let mut mu_at = |f: f64| -> Result<f64> {
        let h = family.build(&[f])?;
        let (s, r) = solver.refine(&h, &state, true)?;
        if !r.converged {
            warnings.push(format!("re-optimization at F = {f} did not converge"));
        }
        Ok(-first_order(&family, &[f], &s, 0, DEFAULT_STEP, engine)?)
    };
    let alpha_dipole = (mu_at(field_step)? - mu_at(-field_step)?) / (2.0 * field_step);
    Ok(ResponseReport {
        axis,
        energy: run.energy,
        mu_electronic,
        mu_nuclear,
        mu_net: mu_nuclear - mu_electronic,
        mu_operator,
        alpha_energy: -so.value,
        alpha_dipole,
        field_step,
        warnings,
    })
}

/// [`response_properties`] at each bond length of a symmetric stretch.
pub fn response_scan(
    system: &System,
    grid: &[f64],
    axis: usize,
    field_step: f64,
    setup: &VqeSetup,
) -> Result<Table> {
    let results: Vec<Result<ResponseReport>> = grid
        .par_iter()
        .map(|&r| response_properties(&system.stretched(r)?, axis, field_step, setup))
        .collect();
    let mut table = Table::new(&[
        "R_angstrom",
        "E_vqe",
        "mu_electronic",
        "mu_nuclear",
        "mu_net",
        "mu_operator",
        "alpha_energy",
        "alpha_dipole",
        "units",
    ]);
    for (&r, res) in grid.iter().zip(results) {
        match res {
            Ok(rep) => {
                for w in &rep.warnings {
                    table.notes.push(format!("R={r:.6}: {w}"));
                }
                table.push(vec![
                    r.into(),
                    rep.energy.into(),
                    rep.mu_electronic.into(),
                    rep.mu_nuclear.into(),
                    rep.mu_net.into(),
                    rep.mu_operator.into(),
                    rep.alpha_energy.into(),
                    rep.alpha_dipole.into(),
                    "au".into(),
                ])?;
            }
            Err(e) => {
                table.notes.push(format!("R={r:.6}: {e}"));
                let mut row = vec![Value::from(r)];
                row.extend(std::iter::repeat_n(Value::Missing, 7));
                row.push("au".into());
                table.push(row)?;
            }
        }
    }
    Ok(table)
}
