use std::f64::consts::PI;

use super::molecule::Molecule;

/// STO-3G hydrogen 1s (ζ = 1.24): exponents in Bohr⁻² and contraction
/// coefficients of the standard parameterization.
const STO3G_H_EXPONENTS: [f64; 3] = [3.42525091, 0.62391373, 0.16885540];
const STO3G_H_COEFFICIENTS: [f64; 3] = [0.15432897, 0.53532814, 0.44463454];

#[derive(Debug, Clone, PartialEq)]
pub struct Primitive {
    pub exponent: f64,
    /// Contraction coefficient with the primitive normalization folded in.
    pub coefficient: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Shell {
    pub center: usize,
    /// Center position in Bohr.
    pub origin: [f64; 3],
    pub angular_momentum: u8,
    pub primitives: Vec<Primitive>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasisSet {
    pub shells: Vec<Shell>,
}

impl BasisSet {
    pub fn sto3g(mol: &Molecule) -> Self {
        let shells = mol
            .atoms()
            .iter()
            .enumerate()
            .map(|(i, a)| {
                Shell::normalized_s(
                    i,
                    a.position_bohr(),
                    &STO3G_H_EXPONENTS,
                    &STO3G_H_COEFFICIENTS,
                )
            })
            .collect();
        BasisSet { shells }
    }

    pub fn len(&self) -> usize {
        self.shells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shells.is_empty()
    }
}

impl Shell {
    /// Builds an s shell from raw contraction data, normalizing each
    /// primitive and then the contraction to unit self-overlap.
    pub fn normalized_s(center: usize, origin: [f64; 3], exps: &[f64], coefs: &[f64]) -> Self {
        let mut primitives: Vec<Primitive> = exps
            .iter()
            .zip(coefs)
            .map(|(&a, &d)| Primitive {
                exponent: a,
                coefficient: d * (2.0 * a / PI).powf(0.75),
            })
            .collect();
        let mut s = 0.0;
        for p in &primitives {
            for q in &primitives {
                s += p.coefficient * q.coefficient * (PI / (p.exponent + q.exponent)).powf(1.5);
            }
        }
        let scale = 1.0 / s.sqrt();
        for p in &mut primitives {
            p.coefficient *= scale;
        }
        Shell {
            center,
            origin,
            angular_momentum: 0,
            primitives,
        }
    }
}
