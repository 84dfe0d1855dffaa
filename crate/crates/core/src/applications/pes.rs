use rayon::prelude::*;

use super::setup::{System, VqeSetup};
use super::surface::sector_ground_energy;
use crate::error::Result;
use crate::report::{Table, Value};
use crate::simulator::{basis_state_circuit, expectation, PreparedState};

/// One point of a symmetric-stretch scan.
#[derive(Debug, Clone, PartialEq)]
pub struct PesPoint {
    pub r: f64,
    pub e_vqe: f64,
    pub e_fci: f64,
    /// Energy of the Hartree-Fock determinant.
    pub e_hf: f64,
    pub state: PreparedState,
    pub converged: bool,
}

pub fn pes_point(system: &System, r: f64, setup: &VqeSetup) -> Result<PesPoint> {
    let family = system.stretched(r)?.bond_family()?;
    let h = family.base();
    let solver = setup.solver_for(&family)?;
    let (state, run) = solver.solve(h)?;
    let reference = basis_state_circuit(family.n_qubits(), family.reference_bits()?)?;
    let e_hf = expectation(h, &reference.prepare(&[])?)?;
    Ok(PesPoint {
        r,
        e_vqe: run.energy,
        e_fci: sector_ground_energy(&family, h)?,
        e_hf,
        state,
        converged: run.converged,
    })
}

/// Ground-state energies along a symmetric stretch (every chain bond set to
/// each grid value). Failed points keep their row with empty values and a
/// note.
pub fn pes_scan(system: &System, grid: &[f64], setup: &VqeSetup) -> Result<Table> {
    let points: Vec<Result<PesPoint>> = grid.par_iter().map(|&r| pes_point(system, r, setup)).collect();
    let mut table = Table::new(&["R_angstrom", "E_vqe", "E_fci", "E_hf", "abs_error"]);
    for (&r, p) in grid.iter().zip(points) {
        match p {
            Ok(p) => {
                if !p.converged {
                    table.notes.push(format!("R={r:.6}: optimization did not converge"));
                }
                table.push(vec![
                    r.into(),
                    p.e_vqe.into(),
                    p.e_fci.into(),
                    p.e_hf.into(),
                    (p.e_vqe - p.e_fci).abs().into(),
                ])?;
            }
            Err(e) => {
                table.notes.push(format!("R={r:.6}: {e}"));
                table.push(vec![r.into(), Value::Missing, Value::Missing, Value::Missing, Value::Missing])?;
            }
        }
    }
    Ok(table)
}

/// E(R, θ) of the one-parameter ansatz over a grid, for plotting the
/// landscape the geometry search moves across.
pub fn energy_landscape(
    system: &System,
    r_grid: &[f64],
    theta_grid: &[f64],
    setup: &VqeSetup,
) -> Result<Table> {
    let mut table = Table::new(&["R_angstrom", "theta", "E"]);
    for &r in r_grid {
        let family = system.stretched(r)?.bond_family()?;
        let solver = setup.solver_for(&family)?;
        let circuit = solver.circuit()?;
        if circuit.n_slots() != 1 {
            return Err(crate::Error::Config(format!(
                "landscape needs a one-parameter ansatz, got {} parameters",
                circuit.n_slots()
            )));
        }
        for &t in theta_grid {
            let e = expectation(family.base(), &circuit.prepare(&[t])?)?;
            table.push(vec![r.into(), t.into(), e.into()])?;
        }
    }
    Ok(table)
}

/// VQE and exact ground energies at explicit chain-bond geometries (one
/// `R{k}_angstrom` column per bond), e.g. a two-bond contour grid.
pub fn bond_scan(system: &System, geometries: &[Vec<f64>], setup: &VqeSetup) -> Result<Table> {
    let n_bonds = system.bond_family()?.parameters().len();
    if let Some(g) = geometries.iter().find(|g| g.len() != n_bonds) {
        return Err(crate::Error::Config(format!(
            "geometry has {} bond lengths, molecule has {n_bonds}",
            g.len()
        )));
    }
    let energies: Vec<Result<(f64, f64, bool)>> = geometries
        .par_iter()
        .map(|bonds| {
            let family = system.with_bonds(bonds)?.bond_family()?;
            let (_, run) = setup.solver_for(&family)?.solve(family.base())?;
            Ok((run.energy, sector_ground_energy(&family, family.base())?, run.converged))
        })
        .collect();
    let mut columns: Vec<String> = (1..=n_bonds).map(|k| format!("R{k}_angstrom")).collect();
    columns.extend(["E_vqe", "E_fci", "abs_error"].map(String::from));
    let mut table = Table::new(&columns.iter().map(String::as_str).collect::<Vec<_>>());
    for (bonds, res) in geometries.iter().zip(energies) {
        let mut row: Vec<Value> = bonds.iter().map(|&r| r.into()).collect();
        match res {
            Ok((e_vqe, e_fci, converged)) => {
                if !converged {
                    table.notes.push(format!("R={bonds:.6?}: optimization did not converge"));
                }
                row.extend([e_vqe.into(), e_fci.into(), (e_vqe - e_fci).abs().into()]);
            }
            Err(e) => {
                table.notes.push(format!("R={bonds:.6?}: {e}"));
                row.extend([Value::Missing, Value::Missing, Value::Missing]);
            }
        }
        table.push(row)?;
    }
    Ok(table)
}
