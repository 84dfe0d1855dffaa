use nalgebra::DMatrix;

use super::integrals::IntegralSet;
use super::scf::{inverse_sqrt, run_rhf};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitalKind {
    Rhf,
    Lowdin,
}

/// An orthonormal orbital basis expressed in AO coefficients (columns).
#[derive(Debug, Clone)]
pub struct Orbitals {
    pub coefficients: DMatrix<f64>,
    pub kind: OrbitalKind,
}

impl Orbitals {
    /// RHF orbitals for even electron counts, Löwdin orbitals otherwise.
    pub fn for_electrons(ints: &IntegralSet, n_electrons: usize) -> Result<Self> {
        if n_electrons.is_multiple_of(2) {
            Orbitals::rhf(ints, n_electrons)
        } else {
            Orbitals::lowdin(ints)
        }
    }

    pub fn rhf(ints: &IntegralSet, n_electrons: usize) -> Result<Self> {
        Ok(Orbitals {
            coefficients: run_rhf(ints, n_electrons)?.coefficients,
            kind: OrbitalKind::Rhf,
        })
    }

    /// Symmetric orthogonalization S^{-1/2}.
    pub fn lowdin(ints: &IntegralSet) -> Result<Self> {
        Ok(Orbitals {
            coefficients: inverse_sqrt(&ints.overlap)?,
            kind: OrbitalKind::Lowdin,
        })
    }

    pub fn n_orbitals(&self) -> usize {
        self.coefficients.ncols()
    }
}

/// Integrals over spin orbitals with interleaved (α, β) ordering: spin
/// orbital `2p + σ` is spatial orbital `p` with spin `σ`.
///
/// The two-body tensor follows the `Σ h_ijkl a†_i a†_j a_k a_l` ordering, so
/// `h_ijkl = ½ (il|jk)` with the spin of `i` matching `l` and `j` matching `k`.
#[derive(Debug, Clone)]
pub struct SpinOrbitalIntegrals {
    pub one_body: DMatrix<f64>,
    two_body: Vec<f64>,
    n: usize,
    pub constant: f64,
    pub kind: OrbitalKind,
}

impl SpinOrbitalIntegrals {
    pub fn n_spin_orbitals(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn two_body(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let n = self.n;
        self.two_body[((i * n + j) * n + k) * n + l]
    }

    /// Builds integrals with only a one-body part (for dipole-like operators).
    pub fn one_body_only(one_body: DMatrix<f64>, constant: f64, kind: OrbitalKind) -> Self {
        let n = one_body.nrows();
        SpinOrbitalIntegrals {
            one_body,
            two_body: vec![0.0; n * n * n * n],
            n,
            constant,
            kind,
        }
    }

    /// Raw constructor; `two_body` is row-major over (i, j, k, l).
    pub fn from_parts(
        one_body: DMatrix<f64>,
        two_body: Vec<f64>,
        constant: f64,
        kind: OrbitalKind,
    ) -> Result<Self> {
        let n = one_body.nrows();
        if one_body.ncols() != n || two_body.len() != n * n * n * n {
            return Err(Error::Transform("inconsistent integral dimensions".into()));
        }
        Ok(SpinOrbitalIntegrals {
            one_body,
            two_body,
            n,
            constant,
            kind,
        })
    }
}

fn check_orbitals(orbitals: &Orbitals, n_basis: usize) -> Result<()> {
    let c = &orbitals.coefficients;
    if c.nrows() != n_basis || c.ncols() != n_basis {
        return Err(Error::Transform(format!(
            "orbital matrix is {}x{}, basis has {n_basis} functions",
            c.nrows(),
            c.ncols()
        )));
    }
    let sv = c.clone().singular_values();
    let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    if min < 1e-10 {
        return Err(Error::Transform("orbital matrix is singular".into()));
    }
    Ok(())
}

/// Transforms an AO one-body matrix into the spin-orbital basis.
pub fn spin_orbital_one_body(ao: &DMatrix<f64>, orbitals: &Orbitals) -> Result<DMatrix<f64>> {
    check_orbitals(orbitals, ao.nrows())?;
    let c = &orbitals.coefficients;
    let mo = c.transpose() * ao * c;
    let n = mo.nrows();
    let mut so = DMatrix::zeros(2 * n, 2 * n);
    for p in 0..n {
        for q in 0..n {
            for s in 0..2 {
                so[(2 * p + s, 2 * q + s)] = mo[(p, q)];
            }
        }
    }
    Ok(so)
}

/// AO → orbital transform of one- and two-body integrals, expanded to spin
/// orbitals. The constant term carries nuclear repulsion plus any field shift.
pub fn spin_orbital_integrals(
    ints: &IntegralSet,
    orbitals: &Orbitals,
) -> Result<SpinOrbitalIntegrals> {
    let n = ints.n_basis();
    check_orbitals(orbitals, n)?;
    let c = &orbitals.coefficients;
    let one_body = spin_orbital_one_body(&ints.core_hamiltonian(), orbitals)?;

    // (pq|rs) in the orbital basis, one index at a time.
    let idx = |a: usize, b: usize, cc: usize, d: usize| ((a * n + b) * n + cc) * n + d;
    let mut t1 = vec![0.0; n * n * n * n];
    for p in 0..n {
        for nu in 0..n {
            for la in 0..n {
                for si in 0..n {
                    t1[idx(p, nu, la, si)] = (0..n)
                        .map(|mu| c[(mu, p)] * ints.eri.get(mu, nu, la, si))
                        .sum();
                }
            }
        }
    }
    let mut t2 = vec![0.0; n * n * n * n];
    for p in 0..n {
        for q in 0..n {
            for la in 0..n {
                for si in 0..n {
                    t2[idx(p, q, la, si)] = (0..n).map(|nu| c[(nu, q)] * t1[idx(p, nu, la, si)]).sum();
                }
            }
        }
    }
    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                for si in 0..n {
                    t1[idx(p, q, r, si)] = (0..n).map(|la| c[(la, r)] * t2[idx(p, q, la, si)]).sum();
                }
            }
        }
    }
    let mut mo = vec![0.0; n * n * n * n];
    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                for s in 0..n {
                    mo[idx(p, q, r, s)] = (0..n).map(|si| c[(si, s)] * t1[idx(p, q, r, si)]).sum();
                }
            }
        }
    }

    let m = 2 * n;
    let mut two_body = vec![0.0; m * m * m * m];
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                for l in 0..m {
                    if i % 2 != l % 2 || j % 2 != k % 2 {
                        continue;
                    }
                    two_body[((i * m + j) * m + k) * m + l] =
                        0.5 * mo[idx(i / 2, l / 2, j / 2, k / 2)];
                }
            }
        }
    }

    Ok(SpinOrbitalIntegrals {
        one_body,
        two_body,
        n: m,
        constant: ints.constant(),
        kind: orbitals.kind,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chem::{core_integrals, BasisSet, Molecule};

    #[test]
    fn identity_orbitals_keep_one_body_blocks() {
        let mol = Molecule::hydrogen_chain(&[0.74]).unwrap();
        let mut ints = core_integrals(&mol, &BasisSet::sto3g(&mol)).unwrap();
        // Pretend the AO basis is orthonormal.
        ints.overlap = DMatrix::identity(2, 2);
        let orb = Orbitals {
            coefficients: DMatrix::identity(2, 2),
            kind: OrbitalKind::Lowdin,
        };
        let so = spin_orbital_integrals(&ints, &orb).unwrap();
        let h = ints.core_hamiltonian();
        for p in 0..2 {
            for q in 0..2 {
                assert_eq!(so.one_body[(2 * p, 2 * q)], h[(p, q)]);
                assert_eq!(so.one_body[(2 * p + 1, 2 * q + 1)], h[(p, q)]);
                assert_eq!(so.one_body[(2 * p, 2 * q + 1)], 0.0);
                assert_eq!(so.one_body[(2 * p + 1, 2 * q)], 0.0);
            }
        }
        assert_eq!(so.constant, ints.nuclear_repulsion);
    }

    #[test]
    fn singular_orbitals_are_rejected() {
        let mol = Molecule::hydrogen_chain(&[0.74]).unwrap();
        let ints = core_integrals(&mol, &BasisSet::sto3g(&mol)).unwrap();
        let orb = Orbitals {
            coefficients: DMatrix::from_element(2, 2, 1.0),
            kind: OrbitalKind::Rhf,
        };
        assert!(matches!(
            spin_orbital_integrals(&ints, &orb),
            Err(Error::Transform(_))
        ));
    }
}
