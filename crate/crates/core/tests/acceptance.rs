//! One PASS/FAIL line per acceptance criterion, noiseless engine throughout.

use std::time::{Duration, Instant};

use qderiv::applications::*;
use qderiv::chem::Molecule;
use qderiv::derivatives::{cost_estimate, first_order, DEFAULT_STEP};
use qderiv::operators::*;
use qderiv::simulator::*;

struct Outcome {
    pass: bool,
    detail: String,
}

fn h2(taper: bool) -> System {
    System::new(Molecule::hydrogen_chain(&[0.741]).unwrap(), Encoding::BravyiKitaev, taper)
}

fn grid(start: f64, stop: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| start + (stop - start) * i as f64 / (n - 1) as f64).collect()
}

fn within(x: f64, target: f64, tol: f64) -> bool {
    (x - target).abs() <= tol
}

fn pes_accuracy() -> Outcome {
    let table = pes_scan(&h2(false), &grid(0.2, 1.5, 27), &VqeSetup::default()).unwrap();
    let errors: Vec<f64> = table.column("abs_error").unwrap().into_iter().map(|e| e.unwrap_or(f64::INFINITY)).collect();
    let worst = errors.iter().copied().fold(0.0, f64::max);
    Outcome {
        pass: errors.len() == 27 && worst < 1.6e-3,
        detail: format!("27 points, max |E_vqe - E_fci| = {worst:.3e} Ha (< 1.6e-3)"),
    }
}

fn equilibrium_geometry() -> Outcome {
    let run = |method| {
        let family = h2(false).stretched(0.2).unwrap().bond_family().unwrap();
        let mut surface = VqeSurface::new(family, &VqeSetup::default()).unwrap();
        geometry_optimize(&mut surface, &[0.2], &GeometryOptions::new(method)).unwrap()
    };
    let g = run(StepMethod::Gradient);
    let h = run(StepMethod::Hessian);
    let (rg, eg) = (g.final_coordinates().unwrap()[0], g.final_energy().unwrap());
    let (rh, eh) = (h.final_coordinates().unwrap()[0], h.final_energy().unwrap());
    let gradient_ok = g.converged && within(rg, 0.741, 0.005) && within(eg, -1.137, 1e-3);
    let hessian_ok = h.converged && within(rh, 0.740, 0.005) && within(eh, -1.137, 1e-3);
    let order_ok = h.iterations() <= g.iterations();
    Outcome {
        pass: gradient_ok && hessian_ok && order_ok,
        detail: format!(
            "gradient: {rg:.5} A, {eg:.6} Ha, {} iterations [{}]; hessian: {rh:.5} A, {eh:.6} Ha, {} iterations [{}]; hessian <= gradient iterations [{}]",
            g.iterations(),
            verdict(gradient_ok),
            h.iterations(),
            verdict(hessian_ok),
            verdict(order_ok)
        ),
    }
}

fn response_properties_check() -> Outcome {
    let table = response_scan(&h2(false), &grid(0.3, 1.6, 14), 2, 1e-3, &VqeSetup::excitation()).unwrap();
    let col = |name: &str| -> Vec<f64> {
        table.column(name).unwrap().into_iter().map(|v| v.unwrap_or(f64::NAN)).collect()
    };
    let (net, mu_e, mu_op) = (col("mu_net"), col("mu_electronic"), col("mu_operator"));
    let (a_e, a_d) = (col("alpha_energy"), col("alpha_dipole"));
    let worst = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let net_max = net.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let hf_op = worst(&mu_e, &mu_op);
    let alpha = worst(&a_e, &a_d);
    let finite = net.iter().chain(&a_e).chain(&a_d).all(|x| x.is_finite());
    Outcome {
        pass: finite && net.len() == 14 && net_max < 1e-6 && hf_op < 1e-6 && alpha < 1e-3,
        detail: format!(
            "14 points, max |mu_net| = {net_max:.2e} au (< 1e-6), max |mu_E - <mu>| = {hf_op:.2e} au (< 1e-6), max |alpha_E - alpha_mu| = {alpha:.2e} au (< 1e-3)"
        ),
    }
}

fn transition_state() -> Outcome {
    let h3 = System::new(Molecule::hydrogen_chain(&[0.74, 1.30]).unwrap(), Encoding::BravyiKitaev, false);
    let mut surface = VqeSurface::new(h3.bond_family().unwrap(), &VqeSetup::excitation()).unwrap();
    let spec = ReactionSpec::two_bond([0.74, 1.30], [1.30, 0.74]).unwrap();
    match transition_state_search(&mut surface, &spec, 1.0, 1e-3, 100) {
        Ok((ts, attempts)) => {
            let (r1, r2) = (ts.geometry[0], ts.geometry[1]);
            let iterations = attempts.last().map_or(0, |a| a.trajectory.iterations());
            let ok = within(r1, 0.936, 0.01) && within(r2, 0.936, 0.01) && ts.test.discriminant < 0.0 && iterations <= 10;
            Outcome {
                pass: ok,
                detail: format!(
                    "saddle at ({r1:.4}, {r2:.4}) A, E = {:.6} Ha, discriminant {:.4} (< 0), stationary phase {iterations} iterations (<= 10)",
                    ts.energy, ts.test.discriminant
                ),
            }
        }
        Err(e) => Outcome {
            pass: false,
            detail: format!("search failed: {e}"),
        },
    }
}

fn excited_derivatives() -> Outcome {
    let points = grid(0.24, 1.54, 14);
    let table = excited_derivative_curves(&h2(false), &points, &ExcitedSetup::default()).unwrap();
    let idx = |c: &str| table.column_index(c).unwrap();
    let (r, e, de, ex, dex) = (idx("R_angstrom"), idx("E_vqe"), idx("dE_dR"), idx("E_exact"), idx("dE_dR_exact"));
    let num = |row: &Vec<qderiv::report::Value>, k: usize| row[k].as_f64().unwrap_or(f64::NAN);
    let mut energy_err: f64 = 0.0;
    let mut slope_err: f64 = 0.0;
    let mut fewest = usize::MAX;
    for &x in &points {
        let rows: Vec<_> = table.rows.iter().filter(|row| (num(row, r) - x).abs() < 1e-12).collect();
        fewest = fewest.min(rows.len());
        for row in rows {
            energy_err = energy_err.max((num(row, e) - num(row, ex)).abs());
            slope_err = slope_err.max((num(row, de) - num(row, dex)).abs());
        }
    }
    Outcome {
        pass: fewest >= 3 && energy_err < 5e-3 && slope_err < 1e-3,
        detail: format!(
            "14 points, >= {fewest} N=2 states each (>= 3), max energy error {energy_err:.2e} Ha (< 5e-3), max slope error {slope_err:.2e} Ha/A (< 1e-3)"
        ),
    }
}

fn property_suite() -> Outcome {
    let mut checks = Vec::new();
    let system = h2(false);
    let family = system.bond_family().unwrap();
    let h = family.base().clone();

    let cost = |params: usize, eps: f64, order: u32| cost_estimate(&h, params, eps, order).unwrap() as f64;
    let ratio_ok = |x: f64, y: f64, r: f64| (x / y - r).abs() < 1e-6 * r;
    let quadratic_eps = ratio_ok(cost(1, 5e-4, 1), cost(1, 1e-3, 1), 4.0);
    let order_ratio = ratio_ok(cost(3, 1e-3, 2), cost(3, 1e-3, 1), 3.0);
    let linear_n = ratio_ok(cost(2, 1e-3, 1), cost(1, 1e-3, 1), 2.0);
    checks.push(("cost scaling", quadratic_eps && order_ratio && linear_n));

    let circuit = basis_state_circuit(4, family.reference_bits().unwrap())
        .unwrap()
        .then(&hea_ansatz(4, 3, Entangler::Cz).unwrap())
        .unwrap();
    let theta: Vec<f64> = (0..circuit.n_slots()).map(|k| (0.37 * k as f64).sin()).collect();
    let energy = |t: &[f64]| expectation(&h, &circuit.prepare(t).unwrap()).unwrap();
    let shift_ok = (0..circuit.n_slots()).all(|j| {
        let g = qderiv::vqe::parameter_shift_gradient(&circuit, &theta, &h, j, std::f64::consts::FRAC_PI_2).unwrap();
        let (mut p, mut m) = (theta.clone(), theta.clone());
        p[j] += 1e-5;
        m[j] -= 1e-5;
        (g - (energy(&p) - energy(&m)) / 2e-5).abs() < 1e-6
    });
    checks.push(("parameter shift vs FD", shift_ok));

    let at = system.stretched(0.5).unwrap().bond_family().unwrap();
    let solver = VqeSetup::default().solver_for(&at).unwrap();
    let (state, _) = solver.solve(at.base()).unwrap();
    let hf = first_order(&at, &[0.5], &state, 0, DEFAULT_STEP, Engine::Exact).unwrap();
    let e = |r: f64| solver.refine(&at.build(&[r]).unwrap(), &state, true).unwrap().1.energy;
    let fd = (e(0.501) - e(0.499)) / 0.002;
    checks.push(("Hellmann-Feynman vs re-optimized FD", (hf - fd).abs() < 1e-4));

    let jw = System::new(system.molecule.clone(), Encoding::JordanWigner, false).bond_family().unwrap();
    let (a, b) = (spectrum(jw.base()).unwrap(), spectrum(&h).unwrap());
    checks.push(("JW/BK isospectral", a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-10)));

    let (tapered, _) = select_sector(&h, &taperable_qubits(&h)).unwrap();
    let gap = (ground_energy(&tapered).unwrap() - ground_energy(&h).unwrap()).abs();
    checks.push(("tapering preserves ground energy", gap < 1e-10));

    let n = family.number_operator().unwrap();
    let comm = sum_simplify(&(&(&h * &n) - &(&n * &h)));
    let worst = comm.terms().iter().map(|t| t.coeff.norm()).fold(0.0, f64::max);
    checks.push(("[H, N] = 0", worst < 1e-10));

    let detail = checks.iter().map(|(name, ok)| format!("{name} [{}]", verdict(*ok))).collect::<Vec<_>>().join("; ");
    Outcome {
        pass: checks.iter().all(|(_, ok)| *ok),
        detail,
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "fail"
    }
}

fn main() {
    type Check = fn() -> Outcome;
    let criteria: [(&str, Check, Duration); 6] = [
        ("1 PES accuracy", pes_accuracy, Duration::from_secs(120)),
        ("2 equilibrium geometry", equilibrium_geometry, Duration::from_secs(120)),
        ("3 response properties", response_properties_check, Duration::from_secs(120)),
        ("4 transition state", transition_state, Duration::from_secs(180)),
        ("5 excited-state derivatives", excited_derivatives, Duration::from_secs(180)),
        ("6 property suite", property_suite, Duration::from_secs(600)),
    ];
    let mut failures = 0;
    for (name, check, budget) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let pass = outcome.pass && elapsed <= budget;
        if !pass {
            failures += 1;
        }
        println!(
            "{} criterion {name}: {}; runtime {:.1} s (<= {} s)",
            if pass { "PASS" } else { "FAIL" },
            outcome.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    if failures > 0 {
        println!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
}
