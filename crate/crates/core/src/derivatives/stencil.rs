use std::collections::BTreeMap;

use num_complex::Complex64;

use super::family::HamiltonianFamily;
use crate::error::{Error, Result};
use crate::operators::{sum_simplify, PauliString, PauliSum, PauliTerm};

/// Default step for Hamiltonian differencing, in the parameter's units.
pub const DEFAULT_STEP: f64 = 1e-3;

/// Σ_k w_k S_k accumulated coefficient-wise over the union of strings.
pub fn linear_combination(parts: &[(f64, &PauliSum)]) -> Result<PauliSum> {
    let n = parts.first().map_or(0, |(_, s)| s.n_qubits());
    let mut acc: BTreeMap<PauliString, Complex64> = BTreeMap::new();
    for (w, s) in parts {
        if s.n_qubits() != n {
            return Err(Error::QubitMismatch(n, s.n_qubits()));
        }
        for t in s.terms() {
            *acc.entry(t.string).or_default() += t.coeff * *w;
        }
    }
    let terms = acc.into_iter().map(|(s, c)| PauliTerm::new(c, s)).collect();
    Ok(sum_simplify(&PauliSum::from_terms(n, terms)?))
}

fn check_step(h: f64) -> Result<()> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::Config(format!("step {h} must be positive")));
    }
    Ok(())
}

fn shifted(values: &[f64], moves: &[(usize, f64)]) -> Result<Vec<f64>> {
    let mut v = values.to_vec();
    for &(i, d) in moves {
        let slot = v.get_mut(i).ok_or_else(|| {
            Error::Config(format!("parameter index {i} out of range ({})", values.len()))
        })?;
        *slot += d;
    }
    Ok(v)
}

/// Central difference (H(η + h·e_i) − H(η − h·e_i)) / 2h.
pub fn d_hamiltonian(family: &HamiltonianFamily, values: &[f64], i: usize, h: f64) -> Result<PauliSum> {
    check_step(h)?;
    let plus = family.build(&shifted(values, &[(i, h)])?)?;
    let minus = family.build(&shifted(values, &[(i, -h)])?)?;
    linear_combination(&[(0.5 / h, &plus), (-0.5 / h, &minus)])
}

/// Second difference: three-point on the diagonal, four-point cross stencil
/// off it.
pub fn d2_hamiltonian(
    family: &HamiltonianFamily,
    values: &[f64],
    i: usize,
    j: usize,
    h: f64,
) -> Result<PauliSum> {
    check_step(h)?;
    if i == j {
        let plus = family.build(&shifted(values, &[(i, h)])?)?;
        let mid = family.build(&shifted(values, &[])?)?;
        let minus = family.build(&shifted(values, &[(i, -h)])?)?;
        let w = 1.0 / (h * h);
        return linear_combination(&[(w, &plus), (-2.0 * w, &mid), (w, &minus)]);
    }
    // Order the corner evaluations canonically so (i,j) and (j,i) agree bitwise.
    let (a, b) = (i.min(j), i.max(j));
    let pp = family.build(&shifted(values, &[(a, h), (b, h)])?)?;
    let pm = family.build(&shifted(values, &[(a, h), (b, -h)])?)?;
    let mp = family.build(&shifted(values, &[(a, -h), (b, h)])?)?;
    let mm = family.build(&shifted(values, &[(a, -h), (b, -h)])?)?;
    let w = 0.25 / (h * h);
    linear_combination(&[(w, &pp), (-w, &pm), (-w, &mp), (w, &mm)])
}
