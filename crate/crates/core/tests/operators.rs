use num_complex::Complex64;
use proptest::prelude::*;
use qderiv::chem::{spin_orbital_integrals, sto3g_integrals, Molecule, Orbitals};
use qderiv::operators::*;

fn h2_hamiltonian(r: f64, encoding: Encoding) -> PauliSum {
    let mol = Molecule::hydrogen_chain(&[r]).unwrap();
    let ints = sto3g_integrals(&mol).unwrap();
    let orbitals = Orbitals::for_electrons(&ints, 2).unwrap();
    qubit_hamiltonian(&spin_orbital_integrals(&ints, &orbitals).unwrap(), encoding).unwrap()
}

fn string(text: &str) -> PauliString {
    // Leftmost letter acts on qubit 0.
    let letters: Vec<Pauli> = text.chars().map(|c| Pauli::from_symbol(c).unwrap()).collect();
    PauliString::from_letters(&letters)
}

fn commutator_norm(a: &PauliSum, b: &PauliSum) -> f64 {
    let c = sum_simplify(&(&(a * b) - &(b * a)));
    c.terms().iter().map(|t| t.coeff.norm()).fold(0.0, f64::max)
}

#[test]
fn bk_h2_term_set() {
    let h = h2_hamiltonian(0.741, Encoding::BravyiKitaev);
    let expected = [
        "IIII", "IIZI", "IZII", "IZIZ", "IZZZ", "XZXI", "XZXZ", "YZYI", "YZYZ", "ZIII", "ZIZI",
        "ZIZZ", "ZZII", "ZZZI", "ZZZZ",
    ];
    for s in expected {
        assert!(h.coefficient(&string(s)).norm() > 1e-6, "missing {s}");
    }
    assert_eq!(h.len(), expected.len());
    assert!(h.is_real(1e-12));
}

#[test]
fn bk_h2_ground_energy() {
    let h = h2_hamiltonian(0.741, Encoding::BravyiKitaev);
    let e = ground_energy(&h).unwrap();
    assert!((e - (-1.13727)).abs() < 1e-4, "{e}");
}

#[test]
fn jw_and_bk_are_isospectral_for_h2() {
    for r in [0.5, 0.741, 1.3] {
        let a = spectrum(&h2_hamiltonian(r, Encoding::JordanWigner)).unwrap();
        let b = spectrum(&h2_hamiltonian(r, Encoding::BravyiKitaev)).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-10);
        }
    }
}

#[test]
fn hamiltonian_conserves_particle_number() {
    for enc in [Encoding::JordanWigner, Encoding::BravyiKitaev] {
        let h = h2_hamiltonian(0.9, enc);
        let n = number_operator(4, enc);
        assert!(commutator_norm(&h, &n) < 1e-10);
    }
}

#[test]
fn bk_number_operator_form() {
    let n = number_operator(4, Encoding::BravyiKitaev);
    let expected = [("IIII", 2.0), ("ZIII", -0.5), ("ZZII", -0.5), ("IIZI", -0.5), ("IZZZ", -0.5)];
    assert_eq!(n.len(), expected.len());
    for (s, c) in expected {
        assert!((n.coefficient(&string(s)) - Complex64::new(c, 0.0)).norm() < 1e-12, "{s}");
    }
}

#[test]
fn z3_variant_of_bk_number_operator_is_not_conserved() {
    // 2 I - 0.5 Z0 - 0.5 Z3 - 0.5 Z0 Z1 - 0.5 Z1 Z2 Z3
    let variant = PauliSum::from_text("2 I I I I\n-0.5 Z I I I\n-0.5 I I I Z\n-0.5 Z Z I I\n-0.5 I Z Z Z\n").unwrap();
    let derived = number_operator(4, Encoding::BravyiKitaev);
    let h = h2_hamiltonian(0.741, Encoding::BravyiKitaev);
    assert!(commutator_norm(&h, &derived) < 1e-10);
    assert!(commutator_norm(&h, &variant) > 1e-3);
    let gap = sum_simplify(&(&variant - &derived));
    let mut letters: Vec<String> = gap.terms().iter().map(|t| t.string.to_string().replace(' ', "")).collect();
    letters.sort();
    assert_eq!(letters, ["IIIZ", "IIZI"]);
}

#[test]
fn jw_number_operator_form() {
    let n = number_operator(6, Encoding::JordanWigner);
    assert!((n.coefficient(&PauliString::identity(6)).re - 3.0).abs() < 1e-12);
    for q in 0..6 {
        let z = PauliString::from_sparse(6, &[(q, Pauli::Z)]);
        assert!((n.coefficient(&z).re + 0.5).abs() < 1e-12);
    }
}

#[test]
fn tapering_preserves_ground_energy() {
    let h = h2_hamiltonian(0.741, Encoding::BravyiKitaev);
    let qubits = taperable_qubits(&h);
    assert_eq!(qubits, vec![1, 3]);
    let (t, map) = select_sector(&h, &qubits).unwrap();
    assert_eq!(t.n_qubits(), 2);
    assert_eq!(map.n_tapered(), 2);
    let full = ground_energy(&h).unwrap();
    assert!((ground_energy(&t).unwrap() - full).abs() < 1e-10);
    let letters: Vec<String> = t.terms().iter().map(|x| x.string.to_string().replace(' ', "")).collect();
    for s in ["II", "IZ", "ZI", "ZZ", "XX", "YY"] {
        assert!(letters.iter().any(|l| l == s), "{s} not in {letters:?}");
    }
}

#[test]
fn pauli_text_round_trip() {
    let h = h2_hamiltonian(0.741, Encoding::BravyiKitaev);
    let back = PauliSum::from_text(&h.to_text()).unwrap();
    assert!(h.max_difference(&back) < 1e-14);
}

fn dense_product_matches(a: &PauliString, b: &PauliString) -> f64 {
    let ta = PauliTerm::new(1.0, *a);
    let tb = PauliTerm::new(1.0, *b);
    let p = pauli_product(&ta, &tb).unwrap();
    let n = a.n_qubits();
    let ma = to_dense_matrix(&PauliSum::single(1.0, *a)).unwrap();
    let mb = to_dense_matrix(&PauliSum::single(1.0, *b)).unwrap();
    let mp = to_dense_matrix(&PauliSum::from_terms(n, vec![p]).unwrap()).unwrap();
    (ma * mb - mp).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn pauli_string(n: usize) -> impl Strategy<Value = PauliString> {
    (0..1u64 << n, 0..1u64 << n).prop_map(move |(x, z)| PauliString::from_masks(n, x, z))
}

fn pauli_sum(n: usize) -> impl Strategy<Value = PauliSum> {
    prop::collection::vec((pauli_string(n), -2.0..2.0f64, -2.0..2.0f64), 1..6).prop_map(move |ts| {
        let terms = ts.into_iter().map(|(s, re, im)| PauliTerm::new(Complex64::new(re, im), s)).collect();
        PauliSum::from_terms(n, terms).unwrap()
    })
}

/// Random Hermitian one- and two-body operator on two spatial orbitals.
fn hermitian_fermion() -> impl Strategy<Value = FermionOperator> {
    (prop::collection::vec(-1.0..1.0f64, 16), prop::collection::vec(-1.0..1.0f64, 6)).prop_map(|(h1, h2)| {
        let mut op = FermionOperator::zero(4);
        for p in 0..4 {
            for q in 0..4 {
                let c = h1[p * 4 + q] + h1[q * 4 + p];
                op.push(c, vec![Ladder::create(p), Ladder::annihilate(q)]).unwrap();
            }
        }
        let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        for (k, &(p, q)) in pairs.iter().enumerate() {
            let (r, s) = pairs[(k + 1) % 6];
            let c = h2[k];
            op.push(c, vec![Ladder::create(p), Ladder::create(q), Ladder::annihilate(s), Ladder::annihilate(r)])
                .unwrap();
            op.push(c, vec![Ladder::create(r), Ladder::create(s), Ladder::annihilate(q), Ladder::annihilate(p)])
                .unwrap();
        }
        op
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn products_match_dense(a in pauli_string(3), b in pauli_string(3)) {
        prop_assert!(dense_product_matches(&a, &b) < 1e-12);
    }

    #[test]
    fn simplify_is_idempotent(s in pauli_sum(3)) {
        let once = sum_simplify(&s);
        prop_assert_eq!(sum_simplify(&once), once);
    }

    #[test]
    fn product_is_associative(a in pauli_sum(2), b in pauli_sum(2), c in pauli_sum(2)) {
        let left = &(&a * &b) * &c;
        let right = &a * &(&b * &c);
        prop_assert!(left.max_difference(&right) < 1e-10);
    }

    #[test]
    fn encodings_are_isospectral(op in hermitian_fermion()) {
        prop_assert!(op.is_hermitian());
        let a = spectrum(&jordan_wigner(&op).unwrap()).unwrap();
        let b = spectrum(&bravyi_kitaev(&op).unwrap()).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn bk_is_isospectral_on_h2_curve(r in 0.3..2.0f64) {
        let a = spectrum(&h2_hamiltonian(r, Encoding::JordanWigner)).unwrap();
        let b = spectrum(&h2_hamiltonian(r, Encoding::BravyiKitaev)).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }
}
