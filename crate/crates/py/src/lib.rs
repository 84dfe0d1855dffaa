//! Python module `qderiv`: molecules are passed as XYZ text, tables come
//! back as `{"columns", "rows", "notes"}` dictionaries.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use qderiv::applications::{
    excited_derivative_curves, geometry_optimize, pes_scan, sector_ground_energy, AnsatzKind,
    ExcitedSetup, GeometryOptions, StepMethod, System, VqeSetup, VqeSurface,
};
use qderiv::chem::parse_xyz;
use qderiv::derivatives::{derivative_report, DEFAULT_STEP};
use qderiv::report::{Table, Value};

fn to_py(e: qderiv::Error) -> PyErr {
    use qderiv::Error as E;
    match e {
        E::Parse { .. } | E::UnsupportedElement(_) | E::InvalidMolecule(_) | E::CoincidentAtoms(..) | E::Config(_) => {
            PyValueError::new_err(e.to_string())
        }
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

/// System and ground-state setup from the keyword arguments shared by
/// every entry point.
pub fn build(
    xyz: &str,
    mapping: &str,
    taper: bool,
    ansatz: &str,
    depth: Option<usize>,
    seed: u64,
) -> qderiv::Result<(System, VqeSetup)> {
    let molecule = parse_xyz(xyz)?;
    let system = System::new(molecule, mapping.parse()?, taper);
    let mut setup = match ansatz.parse::<AnsatzKind>()? {
        AnsatzKind::Hea => VqeSetup::default(),
        AnsatzKind::Excitation => VqeSetup::excitation(),
        AnsatzKind::Tapered => VqeSetup::tapered(),
    };
    if let Some(d) = depth {
        if d == 0 {
            return Err(qderiv::Error::Config("depth must be at least 1".into()));
        }
        setup.depth = d;
    }
    setup.optimizer.seed = seed;
    Ok((system, setup))
}

fn table_to_dict<'py>(py: Python<'py>, table: &Table) -> PyResult<Bound<'py, PyDict>> {
    let rows = PyList::empty(py);
    for row in &table.rows {
        let d = PyDict::new(py);
        for (c, v) in table.columns.iter().zip(row) {
            match v {
                Value::Number(x) => d.set_item(c, *x)?,
                Value::Integer(i) => d.set_item(c, *i)?,
                Value::Text(s) => d.set_item(c, s)?,
                Value::Missing => d.set_item(c, py.None())?,
            }
        }
        rows.append(d)?;
    }
    let out = PyDict::new(py);
    out.set_item("columns", &table.columns)?;
    out.set_item("rows", rows)?;
    out.set_item("notes", &table.notes)?;
    Ok(out)
}

/// Qubit Hamiltonian as Pauli text, one `coeff letters` term per line.
#[pyfunction]
#[pyo3(signature = (xyz, mapping = "bk", taper = false))]
fn qubit_hamiltonian(xyz: &str, mapping: &str, taper: bool) -> PyResult<String> {
    let (system, _) = build(xyz, mapping, taper, "hea", None, 0).map_err(to_py)?;
    let family = system.bond_family().map_err(to_py)?;
    Ok(family.base().to_text())
}

/// Exact ground energy (hartree) in the molecule's electron-count sector.
#[pyfunction]
#[pyo3(signature = (xyz, mapping = "bk", taper = false))]
fn exact_ground_energy(xyz: &str, mapping: &str, taper: bool) -> PyResult<f64> {
    let (system, _) = build(xyz, mapping, taper, "hea", None, 0).map_err(to_py)?;
    let family = system.bond_family().map_err(to_py)?;
    sector_ground_energy(&family, family.base()).map_err(to_py)
}

/// VQE, FCI and HF energies along a symmetric stretch.
#[pyfunction]
#[pyo3(signature = (xyz, grid, mapping = "bk", taper = false, ansatz = "hea", depth = None, seed = 0))]
#[allow(clippy::too_many_arguments)]
fn scan<'py>(
    py: Python<'py>,
    xyz: &str,
    grid: Vec<f64>,
    mapping: &str,
    taper: bool,
    ansatz: &str,
    depth: Option<usize>,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let (system, setup) = build(xyz, mapping, taper, ansatz, depth, seed).map_err(to_py)?;
    let table = py.allow_threads(|| pes_scan(&system, &grid, &setup)).map_err(to_py)?;
    table_to_dict(py, &table)
}

/// Geometry search from the input bond lengths; returns the final bonds
/// (Å), energy (hartree), iteration count and convergence flag.
#[pyfunction]
#[pyo3(signature = (xyz, method = "gradient", gamma = None, ctol = 1e-3, mapping = "bk", taper = false, ansatz = "hea", seed = 0))]
#[allow(clippy::too_many_arguments)]
fn optimize<'py>(
    py: Python<'py>,
    xyz: &str,
    method: &str,
    gamma: Option<f64>,
    ctol: f64,
    mapping: &str,
    taper: bool,
    ansatz: &str,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let (system, setup) = build(xyz, mapping, taper, ansatz, None, seed).map_err(to_py)?;
    let method: StepMethod = method.parse().map_err(to_py)?;
    let options = GeometryOptions {
        gamma: gamma.unwrap_or(method.default_gamma()),
        ctol,
        ..GeometryOptions::new(method)
    };
    let trajectory = py
        .allow_threads(|| {
            let family = system.bond_family()?;
            let start = family.base_values();
            let mut surface = VqeSurface::new(family, &setup)?;
            geometry_optimize(&mut surface, &start, &options)
        })
        .map_err(to_py)?;
    let last = trajectory
        .last()
        .ok_or_else(|| PyRuntimeError::new_err("empty trajectory"))?;
    let out = PyDict::new(py);
    out.set_item("bonds", &last.coordinates)?;
    out.set_item("energy", last.energy)?;
    out.set_item("iterations", trajectory.iterations())?;
    out.set_item("converged", trajectory.converged)?;
    out.set_item("energies", trajectory.steps.iter().map(|s| s.energy).collect::<Vec<_>>())?;
    Ok(out)
}

/// Energy derivatives of the VQE ground state as a `key=value` record.
/// With `field_axis` (0, 1, 2) the parameter is that field component,
/// otherwise every chain bond length.
#[pyfunction]
#[pyo3(signature = (xyz, second = false, field_axis = None, field_step = 1e-3, mapping = "bk", taper = false, ansatz = "hea", seed = 0))]
#[allow(clippy::too_many_arguments)]
fn derivatives(
    py: Python<'_>,
    xyz: &str,
    second: bool,
    field_axis: Option<usize>,
    field_step: f64,
    mapping: &str,
    taper: bool,
    ansatz: &str,
    seed: u64,
) -> PyResult<String> {
    let (system, setup) = build(xyz, mapping, taper, ansatz, None, seed).map_err(to_py)?;
    py.allow_threads(|| {
        let (family, state_step) = match field_axis {
            Some(axis) => (system.field_family(axis)?, field_step),
            None => (system.bond_family()?, DEFAULT_STEP),
        };
        let solver = setup.solver_for(&family)?;
        let (state, _) = solver.solve(family.base())?;
        let values = family.base_values();
        derivative_report(&family, &values, &state, &solver, DEFAULT_STEP, state_step, second)
            .map(|r| r.to_record())
    })
    .map_err(to_py)
}

/// Particle-filtered excited-state energies and dE/dR along a symmetric
/// stretch, with exact comparison columns.
#[pyfunction]
#[pyo3(signature = (xyz, grid, mapping = "bk", seed = 0))]
fn excited<'py>(py: Python<'py>, xyz: &str, grid: Vec<f64>, mapping: &str, seed: u64) -> PyResult<Bound<'py, PyDict>> {
    let (system, _) = build(xyz, mapping, false, "excitation", None, seed).map_err(to_py)?;
    let mut setup = ExcitedSetup::default();
    setup.optimizer.seed = seed;
    let table = py
        .allow_threads(|| excited_derivative_curves(&system, &grid, &setup))
        .map_err(to_py)?;
    table_to_dict(py, &table)
}

#[pymodule]
#[pyo3(name = "qderiv")]
fn qderiv_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_function(wrap_pyfunction!(qubit_hamiltonian, m)?)?;
    m.add_function(wrap_pyfunction!(exact_ground_energy, m)?)?;
    m.add_function(wrap_pyfunction!(scan, m)?)?;
    m.add_function(wrap_pyfunction!(optimize, m)?)?;
    m.add_function(wrap_pyfunction!(derivatives, m)?)?;
    m.add_function(wrap_pyfunction!(excited, m)?)?;
    Ok(())
}
