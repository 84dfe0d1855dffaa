use std::collections::BTreeMap;

use num_complex::Complex64;

use super::pauli::PRUNE_TOLERANCE;
use crate::chem::SpinOrbitalIntegrals;
use crate::error::{Error, Result};

/// One ladder operator: `a†_mode` when `dagger`, else `a_mode`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ladder {
    pub mode: usize,
    pub dagger: bool,
}

impl Ladder {
    pub fn create(mode: usize) -> Self {
        Ladder { mode, dagger: true }
    }

    pub fn annihilate(mode: usize) -> Self {
        Ladder { mode, dagger: false }
    }
}

pub type LadderProduct = Vec<Ladder>;

/// Linear combination of ladder-operator products on `n_modes` modes.
#[derive(Debug, Clone, PartialEq)]
pub struct FermionOperator {
    n_modes: usize,
    terms: Vec<(Complex64, LadderProduct)>,
}

impl FermionOperator {
    pub fn zero(n_modes: usize) -> Self {
        FermionOperator {
            n_modes,
            terms: Vec::new(),
        }
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn terms(&self) -> &[(Complex64, LadderProduct)] {
        &self.terms
    }

    pub fn push(&mut self, coeff: impl Into<Complex64>, ops: LadderProduct) -> Result<()> {
        if let Some(op) = ops.iter().find(|o| o.mode >= self.n_modes) {
            return Err(Error::Config(format!(
                "mode {} out of range for {} modes",
                op.mode, self.n_modes
            )));
        }
        self.terms.push((coeff.into(), ops));
        Ok(())
    }

    pub fn adjoint(&self) -> FermionOperator {
        FermionOperator {
            n_modes: self.n_modes,
            terms: self
                .terms
                .iter()
                .map(|(c, ops)| {
                    let ops = ops
                        .iter()
                        .rev()
                        .map(|o| Ladder {
                            mode: o.mode,
                            dagger: !o.dagger,
                        })
                        .collect();
                    (c.conj(), ops)
                })
                .collect(),
        }
    }

    /// Normal-ordered canonical form: creators left of annihilators, each
    /// group by descending mode, duplicates merged, |c| < 10⁻¹² dropped.
    pub fn normal_ordered(&self) -> FermionOperator {
        let mut acc: BTreeMap<LadderProduct, Complex64> = BTreeMap::new();
        let mut stack: Vec<(Complex64, LadderProduct)> = self.terms.clone();
        while let Some((c, mut ops)) = stack.pop() {
            let mut swapped = false;
            'outer: for i in 0..ops.len().saturating_sub(1) {
                let (a, b) = (ops[i], ops[i + 1]);
                let out_of_order = match (a.dagger, b.dagger) {
                    (false, true) => true,
                    (true, true) | (false, false) => a.mode < b.mode,
                    (true, false) => false,
                };
                if a.mode == b.mode && a.dagger == b.dagger {
                    // a†a† = aa = 0
                    swapped = true;
                    break 'outer;
                }
                if out_of_order {
                    if !a.dagger && b.dagger && a.mode == b.mode {
                        // a_i a†_i = 1 − a†_i a_i
                        let mut contracted = ops.clone();
                        contracted.drain(i..i + 2);
                        stack.push((c, contracted));
                    }
                    ops.swap(i, i + 1);
                    stack.push((-c, ops.clone()));
                    swapped = true;
                    break 'outer;
                }
            }
            if !swapped {
                *acc.entry(ops).or_default() += c;
            }
        }
        FermionOperator {
            n_modes: self.n_modes,
            terms: acc
                .into_iter()
                .filter(|(_, c)| c.norm() >= PRUNE_TOLERANCE)
                .map(|(ops, c)| (c, ops))
                .collect(),
        }
    }

    /// Largest coefficient difference between the normal-ordered operator
    /// and its adjoint.
    pub fn hermiticity_error(&self) -> f64 {
        let a = self.normal_ordered();
        let b = self.adjoint().normal_ordered();
        let mut diff: BTreeMap<&LadderProduct, Complex64> = BTreeMap::new();
        for (c, ops) in &a.terms {
            *diff.entry(ops).or_default() += c;
        }
        for (c, ops) in &b.terms {
            *diff.entry(ops).or_default() -= c;
        }
        diff.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_error() < 1e-12
    }
}

/// Σ h_ij a†_i a_j + Σ h_ijkl a†_i a†_j a_k a_l + const.
pub fn hamiltonian_from_integrals(so: &SpinOrbitalIntegrals) -> Result<FermionOperator> {
    let n = so.n_spin_orbitals();
    let h = &so.one_body;
    if (h - h.transpose()).amax() > 1e-12 {
        return Err(Error::NotHermitian("one-body matrix is not symmetric".into()));
    }
    let mut op = FermionOperator::zero(n);
    if so.constant != 0.0 {
        op.push(so.constant, vec![])?;
    }
    for i in 0..n {
        for j in 0..n {
            let v = h[(i, j)];
            if v.abs() >= PRUNE_TOLERANCE {
                op.push(v, vec![Ladder::create(i), Ladder::annihilate(j)])?;
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for k in 0..n {
                for l in 0..n {
                    if k == l {
                        continue;
                    }
                    let v = so.two_body(i, j, k, l);
                    if v.abs() >= PRUNE_TOLERANCE {
                        op.push(
                            v,
                            vec![
                                Ladder::create(i),
                                Ladder::create(j),
                                Ladder::annihilate(k),
                                Ladder::annihilate(l),
                            ],
                        )?;
                    }
                }
            }
        }
    }
    Ok(op)
}
