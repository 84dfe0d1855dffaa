use proptest::prelude::*;
use qderiv::applications::System;
use qderiv::chem::Molecule;
use qderiv::operators::{ground_energy, Encoding, PauliSum};
use qderiv::simulator::*;

fn h2(r: f64) -> PauliSum {
    let s = System::new(Molecule::hydrogen_chain(&[r]).unwrap(), Encoding::BravyiKitaev, false);
    s.bond_family().unwrap().base().clone()
}

fn angles(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-std::f64::consts::PI..std::f64::consts::PI, n)
}

#[test]
fn hea_slot_count() {
    assert_eq!(hea_ansatz(4, 1, Entangler::Cnot).unwrap().n_slots(), 16);
    assert_eq!(hea_ansatz(4, 3, Entangler::Cz).unwrap().n_slots(), 32);
}

#[test]
fn cz_hea_at_zero_gives_reference_energy() {
    let h = h2(0.741);
    let bits = hf_bits(2, Encoding::BravyiKitaev, 4).unwrap();
    let reference = basis_state_circuit(4, bits).unwrap();
    let c = reference.then(&hea_ansatz(4, 2, Entangler::Cz).unwrap()).unwrap();
    let at_zero = expectation(&h, &c.prepare(&vec![0.0; c.n_slots()]).unwrap()).unwrap();
    let hf = expectation(&h, &Statevector::basis(4, bits).unwrap()).unwrap();
    assert!((at_zero - hf).abs() < 1e-12);
}

#[test]
fn tapered_ansatz_reaches_ground_energy() {
    let s = System::new(Molecule::hydrogen_chain(&[0.741]).unwrap(), Encoding::BravyiKitaev, true);
    let fam = s.bond_family().unwrap();
    let c = basis_state_circuit(2, fam.reference_bits().unwrap())
        .unwrap()
        .then(&tapered_ansatz())
        .unwrap();
    let best = (0..=4000)
        .map(|k| -std::f64::consts::PI + k as f64 * std::f64::consts::PI / 2000.0)
        .map(|t| expectation(fam.base(), &c.prepare(&[t]).unwrap()).unwrap())
        .fold(f64::INFINITY, f64::min);
    assert!((best - (-1.137)).abs() < 1e-3, "{best}");
}

#[test]
fn sampled_energy_within_five_standard_errors() {
    let h = h2(0.741);
    let c = basis_state_circuit(4, hf_bits(2, Encoding::BravyiKitaev, 4).unwrap())
        .unwrap()
        .then(&hea_ansatz(4, 1, Entangler::Cnot).unwrap())
        .unwrap();
    let theta: Vec<f64> = (0..c.n_slots()).map(|k| 0.1 * k as f64).collect();
    let exact = expectation(&h, &c.prepare(&theta).unwrap()).unwrap();
    let norm: f64 = h.terms().iter().filter(|t| !t.string.is_identity()).map(|t| t.coeff.norm()).sum();
    let mut previous = f64::INFINITY;
    for shots in [1_000u64, 10_000, 100_000] {
        // Average error over a few seeds so the trend is not hostage to one draw.
        let err: f64 = (0..8)
            .map(|seed| (sampled_expectation(&h, &c, &theta, shots, seed).unwrap() - exact).abs())
            .sum::<f64>()
            / 8.0;
        assert!(err < 5.0 * norm / (shots as f64).sqrt(), "{shots}: {err}");
        assert!(err < previous, "{shots}: {err} !< {previous}");
        previous = err;
    }
}

#[test]
fn sampled_overlap_estimates_probability() {
    let c = hea_ansatz(3, 1, Entangler::Cnot).unwrap();
    let t1: Vec<f64> = (0..c.n_slots()).map(|k| 0.3 * k as f64).collect();
    let t2: Vec<f64> = (0..c.n_slots()).map(|k| 0.2 - 0.1 * k as f64).collect();
    let exact = overlap_probability(&c, &t1, &c, &t2).unwrap();
    let shots = 100_000;
    let sampled = sampled_overlap_probability(&c, &t1, &c, &t2, shots, 3).unwrap();
    let se = (exact * (1.0 - exact) / shots as f64).sqrt().max(1e-4);
    assert!((sampled - exact).abs() < 5.0 * se);
}

#[test]
fn orthogonal_and_identical_overlaps() {
    let zero = ParameterizedCircuit::new(1);
    let mut one = ParameterizedCircuit::new(1);
    one.push(Gate::X(0)).unwrap();
    assert!(overlap_probability(&zero, &[], &one, &[]).unwrap().abs() < 1e-15);
    assert!((overlap_probability(&one, &[], &one, &[]).unwrap() - 1.0).abs() < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn bound_circuits_preserve_norm(theta in angles(24)) {
        for ent in [Entangler::Cnot, Entangler::Cz] {
            let c = hea_ansatz(4, 2, ent).unwrap();
            let psi = c.prepare(&theta).unwrap();
            prop_assert!((psi.norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn inverse_undoes_circuit(theta in angles(24), bits in 0u64..16) {
        let c = hea_ansatz(4, 2, Entangler::Cnot).unwrap();
        let input = Statevector::basis(4, bits).unwrap();
        let out = c.then(&c.inverse()).unwrap();
        let both: Vec<f64> = theta.iter().chain(&theta).copied().collect();
        let back = out.bind_and_run(&both, &input).unwrap();
        prop_assert!((back.inner(&input).norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn energy_respects_variational_bound(theta in angles(32), r in 0.4..1.6f64) {
        let h = h2(r);
        let c = hea_ansatz(4, 3, Entangler::Cz).unwrap();
        let e = expectation(&h, &c.prepare(&theta).unwrap()).unwrap();
        prop_assert!(e >= ground_energy(&h).unwrap() - 1e-10);
    }

    #[test]
    fn overlap_is_symmetric(t1 in angles(12), t2 in angles(12)) {
        let c = hea_ansatz(3, 1, Entangler::Cnot).unwrap();
        let a = overlap_probability(&c, &t1, &c, &t2).unwrap();
        let b = overlap_probability(&c, &t2, &c, &t1).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
        let direct = c.prepare(&t1).unwrap().inner(&c.prepare(&t2).unwrap()).norm_sqr();
        prop_assert!((a - direct).abs() < 1e-10);
    }

    #[test]
    fn sampling_is_deterministic(seed in any::<u64>()) {
        let h = h2(0.741);
        let c = hea_ansatz(4, 1, Entangler::Cnot).unwrap();
        let theta = vec![0.2; c.n_slots()];
        let a = sampled_expectation(&h, &c, &theta, 500, seed).unwrap();
        let b = sampled_expectation(&h, &c, &theta, 500, seed).unwrap();
        prop_assert_eq!(a.to_bits(), b.to_bits());
    }
}
