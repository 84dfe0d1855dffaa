use proptest::prelude::*;
use qderiv::applications::{System, VqeSetup};
use qderiv::chem::Molecule;
use qderiv::operators::{ground_energy, spectrum, Encoding, PauliSum};
use qderiv::simulator::*;
use qderiv::vqe::*;

fn h2(r: f64, taper: bool) -> qderiv::derivatives::HamiltonianFamily {
    System::new(Molecule::hydrogen_chain(&[r]).unwrap(), Encoding::BravyiKitaev, taper)
        .bond_family()
        .unwrap()
}

fn energy(h: &PauliSum, c: &ParameterizedCircuit, theta: &[f64]) -> f64 {
    expectation(h, &c.prepare(theta).unwrap()).unwrap()
}

fn fd_gradient(h: &PauliSum, c: &ParameterizedCircuit, theta: &[f64], j: usize) -> f64 {
    let step = 1e-5;
    let mut p = theta.to_vec();
    let mut m = theta.to_vec();
    p[j] += step;
    m[j] -= step;
    (energy(h, c, &p) - energy(h, c, &m)) / (2.0 * step)
}

fn fd_second(h: &PauliSum, c: &ParameterizedCircuit, theta: &[f64], i: usize) -> f64 {
    let step = 1e-3;
    let mut p = theta.to_vec();
    let mut m = theta.to_vec();
    p[i] += step;
    m[i] -= step;
    (energy(h, c, &p) - 2.0 * energy(h, c, theta) + energy(h, c, &m)) / (step * step)
}

fn angles(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-std::f64::consts::PI..std::f64::consts::PI, n)
}

#[test]
fn z_minimum_with_ry() {
    let mut c = ParameterizedCircuit::new(1);
    c.push(Gate::Ry(0, Angle::slot(0))).unwrap();
    let h = PauliSum::from_text("1 Z").unwrap();
    let (_, run) = vqe_minimize_from(&h, &c, vec![0.3], &OptimizerConfig::default(), Engine::Exact).unwrap();
    assert!((run.energy + 1.0).abs() < 1e-6);
    assert!(run.converged);
}

#[test]
fn tapered_h2_reaches_chemical_accuracy() {
    let fam = h2(0.741, true);
    let solver = VqeSetup::tapered().solver_for(&fam).unwrap();
    let (_, run) = solver.solve(fam.base()).unwrap();
    assert!((run.energy - (-1.137)).abs() < 1.6e-3, "{}", run.energy);
}

#[test]
fn gradient_descent_trace_is_non_increasing() {
    let fam = h2(0.741, true);
    let setup = VqeSetup::tapered();
    let reference = basis_state_circuit(2, fam.reference_bits().unwrap()).unwrap();
    let opt = OptimizerConfig {
        learning_rate: 0.1,
        ..OptimizerConfig::default()
    };
    let (_, run) = vqe_minimize(fam.base(), &setup.ansatz_for(&fam).unwrap(), &reference, &opt, Engine::Exact).unwrap();
    for w in run.trace.windows(2) {
        assert!(w[1].energy <= w[0].energy + 1e-12);
    }
}

#[test]
fn ssvqe_reproduces_lowest_eigenvalues() {
    let fam = h2(0.74, false);
    let cfg = SsvqeConfig::determinants(4, 2, Encoding::BravyiKitaev, 4).unwrap();
    let ansatz = excitation_ansatz(4, Encoding::BravyiKitaev, 1).unwrap();
    let opt = OptimizerConfig::bfgs().with_jitter(0.3, 0);
    let res = ssvqe_minimize(fam.base(), &ansatz, &cfg, &opt, Engine::Exact).unwrap();
    let n = fam.number_operator().unwrap();
    let sector = qderiv::operators::sector_spectrum(fam.base(), &n, 2.0).unwrap();
    let states: Vec<PreparedState> = res.states.iter().map(|s| s.state.clone()).collect();
    let kept = particle_filter(&states, &n, 2.0, Engine::Exact).unwrap();
    assert_eq!(kept.len(), 4);
    // Each state sits on some N = 2 eigenvalue, and the ground state is found.
    for s in &res.states {
        assert!(sector.iter().any(|e| (e - s.energy).abs() < 5e-3), "{}", s.energy);
    }
    assert!((res.states[0].energy - sector[0]).abs() < 5e-3);
    for i in 0..states.len() {
        for j in 0..i {
            let ov = states[i].statevector().unwrap().inner(&states[j].statevector().unwrap()).norm_sqr();
            assert!(ov < 1e-6);
        }
    }
}

#[test]
fn ssvqe_is_insensitive_to_initial_state_order() {
    let fam = h2(0.74, false);
    let ansatz = excitation_ansatz(4, Encoding::BravyiKitaev, 1).unwrap();
    let opt = OptimizerConfig::bfgs().with_jitter(0.3, 0);
    let cfg = SsvqeConfig::determinants(4, 2, Encoding::BravyiKitaev, 4).unwrap();
    let mut permuted = cfg.clone();
    permuted.initial_states.reverse();
    let energies = |c: &SsvqeConfig| {
        let mut e: Vec<f64> = ssvqe_minimize(fam.base(), &ansatz, c, &opt, Engine::Exact)
            .unwrap()
            .states
            .iter()
            .map(|s| s.energy)
            .collect();
        e.sort_by(f64::total_cmp);
        e
    };
    for (a, b) in energies(&cfg).iter().zip(energies(&permuted)) {
        assert!((a - b).abs() < 5e-3);
    }
}

#[test]
fn particle_filter_drops_wrong_count() {
    let n = qderiv::operators::number_operator(4, Encoding::JordanWigner);
    let two = PreparedState::new(basis_state_circuit(4, 0b0011).unwrap(), vec![]);
    let one = PreparedState::new(basis_state_circuit(4, 0b0001).unwrap(), vec![]);
    assert_eq!(particle_filter(&[two, one], &n, 2.0, Engine::Exact).unwrap(), vec![0]);
}

#[test]
fn reported_energies_respect_variational_bound() {
    for r in [0.5, 1.0, 1.5] {
        let fam = h2(r, false);
        let solver = VqeSetup::default().solver_for(&fam).unwrap();
        let (_, run) = solver.solve(fam.base()).unwrap();
        let floor = ground_energy(fam.base()).unwrap();
        assert!(run.energy >= floor - 1e-10);
        assert!(run.trace.iter().all(|s| s.energy >= floor - 1e-10));
        assert!(run.energy <= run.trace.iter().map(|s| s.energy).fold(f64::INFINITY, f64::min) + 1e-15);
    }
}

#[test]
fn spsa_is_seed_deterministic() {
    let fam = h2(0.741, true);
    let setup = VqeSetup::tapered();
    let reference = basis_state_circuit(2, fam.reference_bits().unwrap()).unwrap();
    let ansatz = setup.ansatz_for(&fam).unwrap();
    let opt = OptimizerConfig::spsa(11);
    let a = vqe_minimize(fam.base(), &ansatz, &reference, &opt, Engine::Exact).unwrap().1;
    let b = vqe_minimize(fam.base(), &ansatz, &reference, &opt, Engine::Exact).unwrap().1;
    assert_eq!(a.energy.to_bits(), b.energy.to_bits());
    let floor = spectrum(fam.base()).unwrap()[0];
    assert!(a.energy - floor < 1e-2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn shift_rule_matches_finite_difference_on_hea(theta in angles(32), j in 0usize..32) {
        let h = h2(0.741, false).base().clone();
        let c = hea_ansatz(4, 3, Entangler::Cz).unwrap();
        let g = parameter_shift_gradient(&c, &theta, &h, j, std::f64::consts::FRAC_PI_2).unwrap();
        prop_assert!((g - fd_gradient(&h, &c, &theta, j)).abs() < 1e-6);
    }

    #[test]
    fn shift_rule_matches_finite_difference_on_excitations(theta in angles(8), j in 0usize..8) {
        let fam = h2(0.9, false);
        let c = basis_state_circuit(4, fam.reference_bits().unwrap())
            .unwrap()
            .then(&excitation_ansatz(4, Encoding::BravyiKitaev, 1).unwrap())
            .unwrap();
        let h = fam.base();
        let g = parameter_shift_gradient(&c, &theta, h, j, std::f64::consts::FRAC_PI_2).unwrap();
        prop_assert!((g - fd_gradient(h, &c, &theta, j)).abs() < 1e-6);
    }

    #[test]
    fn shift_hessian_is_symmetric_and_matches_fd(theta in angles(16), i in 0usize..16, j in 0usize..16) {
        let h = h2(0.741, false).base().clone();
        let c = hea_ansatz(4, 1, Entangler::Cnot).unwrap();
        let s = std::f64::consts::FRAC_PI_2;
        let hij = parameter_shift_hessian(&c, &theta, &h, i, j, s, s).unwrap();
        let hji = parameter_shift_hessian(&c, &theta, &h, j, i, s, s).unwrap();
        prop_assert!((hij - hji).abs() < 1e-10);
        let hii = parameter_shift_hessian(&c, &theta, &h, i, i, s, s).unwrap();
        prop_assert!((hii - fd_second(&h, &c, &theta, i)).abs() < 1e-4);
    }
}
