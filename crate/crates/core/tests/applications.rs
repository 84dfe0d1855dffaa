use qderiv::applications::*;
use qderiv::chem::{Molecule, BOHR_IN_ANGSTROM};
use qderiv::derivatives::{HamiltonianFamily, SystemParameters};
use qderiv::operators::Encoding;

fn h2() -> System {
    System::new(Molecule::hydrogen_chain(&[0.741]).unwrap(), Encoding::BravyiKitaev, false)
}

fn tapered_h2() -> System {
    System::new(Molecule::hydrogen_chain(&[0.741]).unwrap(), Encoding::BravyiKitaev, true)
}

fn h3(bonds: [f64; 2]) -> System {
    System::new(Molecule::hydrogen_chain(&bonds).unwrap(), Encoding::BravyiKitaev, false)
}

fn grid(start: f64, stop: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| start + (stop - start) * i as f64 / (n - 1) as f64).collect()
}

fn optimize(method: StepMethod, start: f64) -> OptimizationTrajectory {
    let family = tapered_h2().stretched(start).unwrap().bond_family().unwrap();
    let mut surface = VqeSurface::new(family, &VqeSetup::tapered()).unwrap();
    geometry_optimize(&mut surface, &[start], &GeometryOptions::new(method)).unwrap()
}

#[test]
fn pes_ordering_and_minimum() {
    let r = grid(0.2, 1.5, 27);
    let table = pes_scan(&tapered_h2(), &r, &VqeSetup::tapered()).unwrap();
    let fci: Vec<f64> = table.column("E_fci").unwrap().into_iter().map(Option::unwrap).collect();
    let hf: Vec<f64> = table.column("E_hf").unwrap().into_iter().map(Option::unwrap).collect();
    assert!(fci.iter().zip(&hf).all(|(f, h)| *f <= h + 1e-12));
    let k = (0..fci.len()).min_by(|&a, &b| fci[a].total_cmp(&fci[b])).unwrap();
    assert!((r[k] - 0.74).abs() <= r[1] - r[0] + 1e-12, "FCI minimum at {}", r[k]);
    assert!(table.notes.is_empty());
}

#[test]
fn landscape_spans_the_grid() {
    let table = energy_landscape(&tapered_h2(), &[0.2, 0.74], &grid(-3.0, 3.0, 7), &VqeSetup::tapered()).unwrap();
    assert_eq!(table.len(), 14);
    assert!(energy_landscape(&h2(), &[0.74], &[0.0], &VqeSetup::default()).is_err());
}

#[test]
fn gradient_trajectory_descends() {
    let t = optimize(StepMethod::Gradient, 0.2);
    assert!(t.converged);
    for w in t.steps.windows(2) {
        assert!(w[1].energy <= w[0].energy + 1e-12, "{} -> {}", w[0].energy, w[1].energy);
    }
    let last = t.last().unwrap();
    assert!(last.step[0].abs() < 1e-3);
    assert!(last.coordinates.iter().all(|x| x.is_finite()));
}

#[test]
fn converged_geometry_is_method_independent() {
    let g = optimize(StepMethod::Gradient, 0.2);
    let h = optimize(StepMethod::Hessian, 0.2);
    let (rg, rh) = (g.final_coordinates().unwrap()[0], h.final_coordinates().unwrap()[0]);
    println!("gradient {rg:.5} A in {} iterations, hessian {rh:.5} A in {}", g.iterations(), h.iterations());
    assert!((rg - rh).abs() < 0.002, "gradient {rg} vs hessian {rh}");
}

#[test]
fn fixed_point_converges_immediately() {
    let h = optimize(StepMethod::Hessian, 0.2);
    let r = h.final_coordinates().unwrap()[0];
    let again = optimize(StepMethod::Hessian, r);
    assert!(again.converged);
    assert_eq!(again.iterations(), 1);
}

#[test]
fn converged_points_have_small_gradient() {
    let ctol = 1e-3;
    let mut magnitudes = Vec::new();
    for method in [StepMethod::Gradient, StepMethod::Hessian] {
        let t = optimize(method, 0.2);
        assert!(t.converged);
        magnitudes.push((method.to_string(), t.last().unwrap().gradient[0].abs() * BOHR_IN_ANGSTROM));
    }
    let mut surface = ExactSurface::new(h3([0.74, 1.30]).bond_family().unwrap());
    let spec = ReactionSpec::two_bond([0.74, 1.30], [1.30, 0.74]).unwrap();
    let (ts, _) = transition_state_search(&mut surface, &spec, 1.0, ctol, 100).unwrap();
    let p = surface.evaluate(&ts.geometry, false).unwrap();
    let g = p.gradient.iter().map(|x| x * x).sum::<f64>().sqrt() * BOHR_IN_ANGSTROM;
    magnitudes.push(("transition state".into(), g));
    let large: Vec<_> = magnitudes.iter().filter(|(_, g)| *g >= ctol).collect();
    assert!(large.is_empty(), "|dE/dq| >= ctol (hartree/bohr): {large:?}");
}

#[test]
fn minimum_is_not_a_saddle() {
    let mol = Molecule::hydrogen_chain(&[0.73485]).unwrap();
    let params = SystemParameters::coordinates(&mol, &[0, 1], 2).unwrap();
    let family = HamiltonianFamily::new(mol, params, Encoding::BravyiKitaev, false).unwrap();
    let q = family.base_values();
    let mut surface = ExactSurface::new(family);
    let (test, _) = second_derivative_test(&mut surface, &q, &[1.0, 0.0], &[0.0, 1.0], 1e-3).unwrap();
    assert!(!test.saddle, "{test:?}");
    assert!(test.a > 0.0 && test.b > 0.0);
    // Translation leaves the energy unchanged, so C = −A and the discriminant
    // is zero up to difference noise.
    assert!((test.c + test.a).abs() < 1e-3);
    assert!(test.discriminant.abs() < 1e-3);

    let off = [0.0, 0.9];
    assert!(matches!(
        second_derivative_test(&mut surface, &off, &[1.0, 0.0], &[0.0, 1.0], 1e-3),
        Err(qderiv::Error::NotExtremum(_))
    ));
}

#[test]
fn exact_transition_state_keeps_symmetry() {
    let mut surface = ExactSurface::new(h3([0.74, 1.30]).bond_family().unwrap());
    let spec = ReactionSpec::two_bond([0.74, 1.30], [1.30, 0.74]).unwrap();
    let (ts, attempts) = transition_state_search(&mut surface, &spec, 1.0, 1e-3, 100).unwrap();
    assert!(ts.test.saddle);
    for a in &attempts {
        for s in &a.trajectory.steps {
            assert!((s.coordinates[0] - s.coordinates[1]).abs() < 1e-12);
        }
    }
    assert!((ts.geometry[0] - 0.936).abs() < 0.01, "{:?}", ts.geometry);
}

#[test]
fn saddle_test_matches_dense_differences() {
    let point = [0.9368, 0.9368];
    let family = h3(point).bond_family().unwrap();
    let mut vqe = VqeSurface::new(family.clone(), &VqeSetup::excitation()).unwrap();
    let m1 = [1.0 / 2f64.sqrt(), 1.0 / 2f64.sqrt()];
    let m2 = [1.0 / 2f64.sqrt(), -1.0 / 2f64.sqrt()];
    let (test, _) = second_derivative_test(&mut vqe, &point, &m1, &m2, 1e-3).unwrap();

    let exact = ExactSurface::new(family);
    let h = 1e-3;
    let e = |u: f64, v: f64| {
        let q: Vec<f64> = (0..2).map(|i| point[i] + u * m1[i] + v * m2[i]).collect();
        exact.energy(&q).unwrap()
    };
    let e0 = e(0.0, 0.0);
    let a = (e(h, 0.0) - 2.0 * e0 + e(-h, 0.0)) / (h * h);
    let b = (e(0.0, h) - 2.0 * e0 + e(0.0, -h)) / (h * h);
    let c = (e(h, h) - e(h, -h) - e(-h, h) + e(-h, -h)) / (4.0 * h * h);
    assert!((test.a - a).abs() < 1e-3, "A {} vs {a}", test.a);
    assert!((test.b - b).abs() < 1e-3, "B {} vs {b}", test.b);
    assert!((test.c - c).abs() < 1e-3, "C {} vs {c}", test.c);
    assert!(test.saddle);
}

#[test]
fn three_atom_surface_is_symmetric() {
    let geometries = vec![vec![0.8, 1.2], vec![1.2, 0.8], vec![0.6, 1.7], vec![1.7, 0.6]];
    let table = bond_scan(&h3([0.74, 1.30]), &geometries, &VqeSetup::excitation()).unwrap();
    let e: Vec<f64> = table.column("E_vqe").unwrap().into_iter().map(Option::unwrap).collect();
    assert!((e[0] - e[1]).abs() < 1e-8, "{} vs {}", e[0], e[1]);
    assert!((e[2] - e[3]).abs() < 1e-8, "{} vs {}", e[2], e[3]);
    assert!(bond_scan(&h3([0.74, 1.30]), &[vec![1.0]], &VqeSetup::excitation()).is_err());
}

#[test]
fn response_signs_and_symmetry() {
    let rep = response_properties(&h2(), 2, 1e-3, &VqeSetup::excitation()).unwrap();
    assert!((rep.mu_net - (rep.mu_nuclear - rep.mu_electronic)).abs() < 1e-15);
    assert!(rep.mu_net.abs() < 1e-6);
    assert!(rep.alpha_energy > 0.0 && (rep.alpha_energy - rep.alpha_dipole).abs() < 1e-3);
    assert!(response_properties(&h2(), 2, 0.0, &VqeSetup::excitation()).is_err());
}

#[test]
fn excited_curves_cover_grid_endpoints() {
    let table = excited_derivative_curves(&h2(), &[0.24, 1.54], &ExcitedSetup::default()).unwrap();
    let r: Vec<f64> = table.column("R_angstrom").unwrap().into_iter().map(Option::unwrap).collect();
    assert!(r.contains(&0.24) && r.contains(&1.54));
    let ground = pes_scan(&h2(), &[0.24, 1.54], &VqeSetup::default()).unwrap();
    let e0: Vec<f64> = ground.column("E_vqe").unwrap().into_iter().map(Option::unwrap).collect();
    let state = table.column_index("state").unwrap();
    let ev = table.column_index("E_vqe").unwrap();
    let firsts: Vec<f64> = table
        .rows
        .iter()
        .filter(|row| row[state].as_f64() == Some(0.0))
        .map(|row| row[ev].as_f64().unwrap())
        .collect();
    for (a, b) in firsts.iter().zip(&e0) {
        assert!((a - b).abs() < 1.6e-3, "{a} vs {b}");
    }
}
