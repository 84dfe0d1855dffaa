use qderiv::applications::{
    bond_scan, energy_landscape, excited_derivative_curves, geometry_optimize, pes_scan,
    response_scan, transition_state_search, ExcitedSetup, GeometryOptions, ReactionSpec, System,
    VqeSurface,
};
use qderiv::chem::{parse_xyz, Molecule};
use qderiv::derivatives::{derivative_report, DEFAULT_STEP};
use qderiv::report::{Table, Value};

use crate::args::CommandKind;
use crate::config::RunConfig;
use crate::error::CliError;

/// Result of one command before it is written out.
pub struct Outcome {
    pub table: Table,
    pub summary: String,
    /// False when part of the computation failed or did not converge.
    pub ok: bool,
    /// Additional (path, rendered content) pairs.
    pub extra: Vec<Extra>,
}

pub enum Extra {
    Table(std::path::PathBuf, Table),
    Text(std::path::PathBuf, String),
}

fn load_molecule(rc: &RunConfig) -> Result<Molecule, CliError> {
    let text = std::fs::read_to_string(&rc.molecule)
        .map_err(|e| CliError::Usage(format!("cannot read molecule {}: {e}", rc.molecule.display())))?;
    parse_xyz(&text).map_err(|e| CliError::Usage(format!("{}: {e}", rc.molecule.display())))
}

fn numbers(table: &Table, column: &str) -> Vec<f64> {
    table
        .column(column)
        .unwrap_or_default()
        .into_iter()
        .flatten()
        .collect()
}

fn max_abs(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn grid_values(rc: &RunConfig) -> Result<Vec<f64>, CliError> {
    rc.grid
        .map(|g| g.values())
        .ok_or_else(|| CliError::Usage(format!("{} needs --grid", rc.command.name())))
}

fn list(values: &[f64], decimals: usize) -> String {
    let parts: Vec<String> = values.iter().map(|v| format!("{v:.decimals$}")).collect();
    if parts.len() == 1 {
        parts[0].clone()
    } else {
        format!("({})", parts.join(", "))
    }
}

pub fn run(rc: &RunConfig) -> Result<Outcome, CliError> {
    let system = System::new(load_molecule(rc)?, rc.mapping, rc.taper);
    match rc.command {
        CommandKind::Scan => scan(rc, &system),
        CommandKind::Optimize => optimize(rc, &system),
        CommandKind::Response => response(rc, &system),
        CommandKind::Ts => ts(rc, &system),
        CommandKind::Excited => excited(rc, &system),
        CommandKind::Derivative => derivative(rc, &system),
    }
}

fn scan(rc: &RunConfig, system: &System) -> Result<Outcome, CliError> {
    let grid = grid_values(rc)?;
    let setup = rc.vqe_setup();
    let table = pes_scan(system, &grid, &setup)?;
    let mut extra = Vec::new();
    if let Some(theta) = rc.theta_grid {
        let path = rc
            .surface_out
            .clone()
            .ok_or_else(|| CliError::Usage("--theta-grid needs --surface-out".into()))?;
        extra.push(Extra::Table(path, energy_landscape(system, &grid, &theta.values(), &setup)?));
    }
    let e = table.column("E_vqe").unwrap_or_default();
    let best = grid
        .iter()
        .zip(&e)
        .filter_map(|(r, e)| e.map(|e| (*r, e)))
        .min_by(|a, b| a.1.total_cmp(&b.1));
    let summary = match best {
        Some((r, e)) => format!(
            "scan: {} points, min E_vqe = {e:.6} Ha at R = {r:.3} A, max |E_vqe - E_fci| = {:.3e} Ha",
            table.len(),
            max_abs(numbers(&table, "abs_error"))
        ),
        None => format!("scan: {} points, no converged energies", table.len()),
    };
    Ok(Outcome {
        ok: table.notes.is_empty(),
        table,
        summary,
        extra,
    })
}

fn optimize(rc: &RunConfig, system: &System) -> Result<Outcome, CliError> {
    let family = system.bond_family()?;
    let start = family.base_values();
    let names: Vec<String> = family.parameters().names();
    let mut surface = VqeSurface::new(family, &rc.vqe_setup())?;
    let options = GeometryOptions {
        method: rc.method,
        gamma: rc.gamma,
        ctol: rc.ctol,
        ..GeometryOptions::new(rc.method)
    };
    let trajectory = geometry_optimize(&mut surface, &start, &options)?;

    let mut columns = vec!["iteration".to_string()];
    columns.extend(names.iter().map(|n| format!("{n}_angstrom")));
    columns.push("E".into());
    columns.extend(names.iter().map(|n| format!("dE_d{n}")));
    columns.extend(names.iter().map(|n| format!("d2E_d{n}2")));
    columns.extend(["step_bohr", "fallback", "units"].map(String::from));
    let mut table = Table::new(&columns.iter().map(String::as_str).collect::<Vec<_>>());
    for (k, s) in trajectory.steps.iter().enumerate() {
        let mut row: Vec<Value> = vec![k.into()];
        row.extend(s.coordinates.iter().map(|&x| Value::from(x)));
        row.push(s.energy.into());
        row.extend(s.gradient.iter().map(|&x| Value::from(x)));
        match &s.curvature {
            Some(c) => row.extend(c.iter().map(|&x| Value::from(x))),
            None => row.extend(names.iter().map(|_| Value::Missing)),
        }
        row.push(s.step.iter().map(|x| x * x).sum::<f64>().sqrt().into());
        row.push(if s.fallback { "yes" } else { "no" }.into());
        row.push("hartree/angstrom".into());
        table.push(row)?;
        for w in &s.warnings {
            table.notes.push(format!("iteration {k}: {w}"));
        }
    }
    let (r, e) = match (trajectory.final_coordinates(), trajectory.final_energy()) {
        (Some(r), Some(e)) => (list(r, 3), e),
        _ => return Err(CliError::Compute(qderiv::Error::Config("empty trajectory".into()))),
    };
    let summary = format!(
        "optimize: {} {} after {} iterations: R = {r} A, E = {e:.3} Ha ({e:.6})",
        trajectory.method,
        if trajectory.converged { "converged" } else { "did not converge" },
        trajectory.iterations()
    );
    Ok(Outcome {
        ok: trajectory.converged,
        table,
        summary,
        extra: Vec::new(),
    })
}

fn response(rc: &RunConfig, system: &System) -> Result<Outcome, CliError> {
    let grid = grid_values(rc)?;
    let axis = rc.field_axis.unwrap_or(2);
    let table = response_scan(system, &grid, axis, rc.field_step, &rc.vqe_setup())?;
    let alpha_gap = numbers(&table, "alpha_energy")
        .iter()
        .zip(numbers(&table, "alpha_dipole"))
        .map(|(a, b)| a - b)
        .collect::<Vec<_>>();
    let summary = format!(
        "response: {} points, max |mu_net| = {:.3e} au, max |alpha_E - alpha_mu| = {:.3e} au",
        table.len(),
        max_abs(numbers(&table, "mu_net")),
        max_abs(alpha_gap)
    );
    Ok(Outcome {
        ok: table.notes.is_empty(),
        table,
        summary,
        extra: Vec::new(),
    })
}

fn ts(rc: &RunConfig, system: &System) -> Result<Outcome, CliError> {
    let family = system.bond_family()?;
    if family.parameters().len() != 2 {
        return Err(CliError::Usage("ts needs a three-atom chain (two bonds)".into()));
    }
    let reactants = rc.reactants.clone().unwrap_or_else(|| family.base_values());
    let products = rc
        .products
        .clone()
        .unwrap_or_else(|| reactants.iter().rev().copied().collect());
    let pair = |v: &[f64], what: &str| -> Result<[f64; 2], CliError> {
        v.try_into()
            .map_err(|_| CliError::Usage(format!("--{what} needs two bond lengths")))
    };
    let spec = ReactionSpec::two_bond(pair(&reactants, "reactants")?, pair(&products, "products")?)?;
    let setup = rc.vqe_setup();

    let mut extra = Vec::new();
    if let Some(path) = &rc.surface_out {
        let grid = grid_values(rc)?;
        let points: Vec<Vec<f64>> = grid
            .iter()
            .flat_map(|&a| grid.iter().map(move |&b| vec![a, b]))
            .collect();
        extra.push(Extra::Table(path.clone(), bond_scan(system, &points, &setup)?));
    }

    let mut surface = VqeSurface::new(family, &setup)?;
    let result = transition_state_search(&mut surface, &spec, rc.gamma, rc.ctol, 100);
    let mut table = Table::new(&[
        "mode",
        "iteration",
        "R1_angstrom",
        "R2_angstrom",
        "E",
        "step_bohr",
        "units",
    ]);
    let (attempts, summary, ok) = match result {
        Ok((state, attempts)) => {
            let summary = format!(
                "ts: saddle at R = {} A, E = {:.6} Ha, discriminant = {:.4e}, {} iterations",
                list(&state.geometry, 4),
                state.energy,
                state.test.discriminant,
                attempts.last().map_or(0, |a| a.trajectory.iterations())
            );
            (attempts, summary, true)
        }
        Err(qderiv::Error::SearchFailed { modes }) => {
            (Vec::new(), format!("ts: no saddle found along {modes} modes"), false)
        }
        Err(e) => return Err(e.into()),
    };
    for a in &attempts {
        for (k, s) in a.trajectory.steps.iter().enumerate() {
            let mut row: Vec<Value> = vec![a.mode.into(), k.into()];
            row.extend(s.coordinates.iter().map(|&x| Value::from(x)));
            row.push(s.energy.into());
            row.push(s.step.iter().map(|x| x * x).sum::<f64>().sqrt().into());
            row.push("angstrom;hartree;bohr".into());
            table.push(row)?;
        }
        if let Some(t) = &a.test {
            table.notes.push(format!(
                "mode {}: a = {:.6e}, b = {:.6e}, c = {:.6e}, discriminant = {:.6e}, saddle = {}",
                a.mode, t.a, t.b, t.c, t.discriminant, t.saddle
            ));
        }
        if let Some(n) = &a.note {
            table.notes.push(format!("mode {}: {n}", a.mode));
        }
    }
    if table.is_empty() {
        table.push(vec![Value::Missing; 6].into_iter().chain(["angstrom;hartree;bohr".into()]).collect())?;
    }
    Ok(Outcome {
        table,
        summary,
        ok,
        extra,
    })
}

fn excited(rc: &RunConfig, system: &System) -> Result<Outcome, CliError> {
    let grid = grid_values(rc)?;
    let mut setup = ExcitedSetup {
        ansatz: rc.ansatz,
        depth: rc.depth,
        engine: rc.engine,
        ..ExcitedSetup::default()
    };
    setup.optimizer.seed = rc.seed;
    let table = excited_derivative_curves(system, &grid, &setup)?;
    let diff = |a: &str, b: &str| {
        numbers(&table, a)
            .iter()
            .zip(numbers(&table, b))
            .map(|(x, y)| x - y)
            .collect::<Vec<_>>()
    };
    let summary = format!(
        "excited: {} points, {} states, max |E_vqe - E_exact| = {:.3e} Ha, max |dE/dR - exact| = {:.3e} Ha/A",
        grid.len(),
        table.len(),
        max_abs(diff("E_vqe", "E_exact")),
        max_abs(diff("dE_dR", "dE_dR_exact"))
    );
    Ok(Outcome {
        ok: table.notes.is_empty(),
        table,
        summary,
        extra: Vec::new(),
    })
}

fn derivative(rc: &RunConfig, system: &System) -> Result<Outcome, CliError> {
    let (family, state_step) = match rc.field_axis {
        Some(axis) => (system.field_family(axis)?, rc.field_step),
        None => (system.bond_family()?, DEFAULT_STEP),
    };
    let values = family.base_values();
    let solver = rc.vqe_setup().solver_for(&family)?;
    let (state, run) = solver.solve(family.base())?;
    let with_second = rc.method == qderiv::applications::StepMethod::Hessian;
    let report = derivative_report(&family, &values, &state, &solver, DEFAULT_STEP, state_step, with_second)?;

    let mut table = Table::new(&["quantity", "parameter", "parameter_2", "value", "units"]);
    table.push(vec!["energy".into(), Value::Missing, Value::Missing, report.energy.into(), "hartree".into()])?;
    for (k, name) in report.names.iter().enumerate() {
        table.push(vec![
            "d1".into(),
            name.as_str().into(),
            Value::Missing,
            report.first[k].into(),
            format!("hartree/{}", report.units[k]).into(),
        ])?;
    }
    if let Some(m) = &report.second {
        for (i, a) in report.names.iter().enumerate() {
            for (j, b) in report.names.iter().enumerate() {
                let units = if i == j {
                    format!("hartree/{}^2", report.units[i])
                } else {
                    format!("hartree/({}*{})", report.units[i], report.units[j])
                };
                table.push(vec!["d2".into(), a.as_str().into(), b.as_str().into(), m[i][j].into(), units.into()])?;
            }
        }
    }
    if !run.converged {
        table.notes.push("ground-state optimization did not converge".into());
    }
    table.notes.extend(report.warnings.iter().cloned());
    let firsts: Vec<String> = report
        .names
        .iter()
        .zip(&report.first)
        .zip(&report.units)
        .map(|((n, d), u)| format!("dE/d{n} = {d:.6} hartree/{u}"))
        .collect();
    let summary = format!("derivative: E = {:.6} Ha, {}", report.energy, firsts.join(", "));
    let extra = rc
        .record
        .clone()
        .map(|p| Extra::Text(p, report.to_record()))
        .into_iter()
        .collect();
    Ok(Outcome {
        ok: run.converged,
        table,
        summary,
        extra,
    })
}
