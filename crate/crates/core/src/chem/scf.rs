use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::integrals::IntegralSet;
use crate::error::{Error, Result};

pub const SCF_TOLERANCE: f64 = 1e-8;
pub const SCF_MAX_CYCLES: usize = 200;

/// Converged restricted Hartree-Fock solution.
#[derive(Debug, Clone)]
pub struct RhfSolution {
    /// MO coefficients, one orbital per column, ascending energy.
    pub coefficients: DMatrix<f64>,
    pub orbital_energies: DVector<f64>,
    /// Total energy including nuclear repulsion and field constant (Hartree).
    pub energy: f64,
    pub cycles: usize,
    pub density: DMatrix<f64>,
}

/// S^{-1/2} by symmetric eigendecomposition.
pub fn inverse_sqrt(s: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let eig = SymmetricEigen::new(s.clone());
    if eig.eigenvalues.iter().any(|&v| v <= 1e-12) {
        return Err(Error::Transform(
            "overlap matrix is not positive definite".into(),
        ));
    }
    let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|v| 1.0 / v.sqrt()));
    Ok(&eig.eigenvectors * d * eig.eigenvectors.transpose())
}

/// Flips each column so that its first significant entry is positive,
/// which keeps orbital phases continuous across nearby geometries.
pub fn fix_phases(c: &mut DMatrix<f64>) {
    for mut col in c.column_iter_mut() {
        if let Some(first) = col.iter().copied().find(|v| v.abs() > 1e-8) {
            if first < 0.0 {
                col.neg_mut();
            }
        }
    }
}

fn sorted_eigen(m: DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = DVector::from_iterator(order.len(), order.iter().map(|&i| eig.eigenvalues[i]));
    let vectors = DMatrix::from_columns(
        &order
            .iter()
            .map(|&i| eig.eigenvectors.column(i).into_owned())
            .collect::<Vec<_>>(),
    );
    (values, vectors)
}

fn fock(ints: &IntegralSet, h: &DMatrix<f64>, p: &DMatrix<f64>) -> DMatrix<f64> {
    let n = ints.n_basis();
    let mut f = h.clone();
    for mu in 0..n {
        for nu in 0..n {
            let mut g = 0.0;
            for la in 0..n {
                for si in 0..n {
                    g += p[(la, si)]
                        * (ints.eri.get(mu, nu, la, si) - 0.5 * ints.eri.get(mu, la, nu, si));
                }
            }
            f[(mu, nu)] += g;
        }
    }
    f
}

fn density(c: &DMatrix<f64>, n_occ: usize) -> DMatrix<f64> {
    let occ = c.columns(0, n_occ);
    2.0 * &occ * occ.transpose()
}

/// Roothaan iterations from the core-Hamiltonian guess.
pub fn run_rhf(ints: &IntegralSet, n_electrons: usize) -> Result<RhfSolution> {
    run_rhf_with(ints, n_electrons, SCF_TOLERANCE, SCF_MAX_CYCLES)
}

pub fn run_rhf_with(
    ints: &IntegralSet,
    n_electrons: usize,
    tolerance: f64,
    max_cycles: usize,
) -> Result<RhfSolution> {
    if !n_electrons.is_multiple_of(2) {
        return Err(Error::RestrictedShell(n_electrons));
    }
    let n_occ = n_electrons / 2;
    let n = ints.n_basis();
    if n_occ > n {
        return Err(Error::Config(format!(
            "{n_electrons} electrons do not fit in {n} spatial orbitals"
        )));
    }
    let x = inverse_sqrt(&ints.overlap)?;
    let h = ints.core_hamiltonian();
    let s = &ints.overlap;

    let diagonalize = |f: &DMatrix<f64>| {
        let fp = x.transpose() * f * &x;
        let (e, cp) = sorted_eigen(fp);
        let mut c = &x * cp;
        fix_phases(&mut c);
        (e, c)
    };

    let (mut energies, mut c) = diagonalize(&h);
    let mut p = density(&c, n_occ);
    let mut residual = f64::INFINITY;
    for cycle in 1..=max_cycles {
        let f = fock(ints, &h, &p);
        let comm = &f * &p * s - s * &p * &f;
        residual = comm.amax();
        if residual < tolerance {
            let e_elec = 0.5 * p.component_mul(&(&h + &f)).sum();
            return Ok(RhfSolution {
                coefficients: c,
                orbital_energies: energies,
                energy: e_elec + ints.constant(),
                cycles: cycle,
                density: p,
            });
        }
        let (e, cn) = diagonalize(&f);
        energies = e;
        c = cn;
        p = density(&c, n_occ);
    }
    Err(Error::ScfFailure {
        cycles: max_cycles,
        residual,
        density: p.as_slice().to_vec(),
    })
}
