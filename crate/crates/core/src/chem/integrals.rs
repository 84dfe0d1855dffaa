//! Closed-form integrals over contracted s-type Gaussians.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use super::basis::{BasisSet, Primitive, Shell};
use super::molecule::{nuclear_dipole, nuclear_repulsion, Molecule};
use crate::error::{Error, Result};

const BOYS_SERIES_CUTOFF: f64 = 1e-4;
const FIELD_GUARD: f64 = 0.1;

/// Zeroth-order Boys function F₀(t).
pub fn boys_f0(t: f64) -> f64 {
    if t < BOYS_SERIES_CUTOFF {
        // Maclaurin series: Σ (−t)^k / (k! (2k+1))
        1.0 - t / 3.0 + t * t / 10.0 - t * t * t / 42.0
    } else {
        let st = t.sqrt();
        0.5 * (PI / t).sqrt() * libm::erf(st)
    }
}

/// Two-electron repulsion integrals (ij|kl) in chemists' notation.
#[derive(Debug, Clone, PartialEq)]
pub struct Eri {
    n: usize,
    data: Vec<f64>,
}

impl Eri {
    pub fn zeros(n: usize) -> Self {
        Eri {
            n,
            data: vec![0.0; n * n * n * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    fn index(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        ((i * self.n + j) * self.n + k) * self.n + l
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.data[self.index(i, j, k, l)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, l: usize, v: f64) {
        let idx = self.index(i, j, k, l);
        self.data[idx] = v;
    }

    /// Largest violation of the 8-fold permutational symmetry.
    pub fn symmetry_error(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let v = self.get(i, j, k, l);
                        for w in [
                            self.get(j, i, k, l),
                            self.get(i, j, l, k),
                            self.get(j, i, l, k),
                            self.get(k, l, i, j),
                            self.get(l, k, i, j),
                            self.get(k, l, j, i),
                            self.get(l, k, j, i),
                        ] {
                            worst = worst.max((v - w).abs());
                        }
                    }
                }
            }
        }
        worst
    }
}

/// AO-basis integrals for one geometry, plus any external-field coupling
/// applied on top.
#[derive(Debug, Clone)]
pub struct IntegralSet {
    pub overlap: DMatrix<f64>,
    pub kinetic: DMatrix<f64>,
    pub nuclear: DMatrix<f64>,
    pub eri: Eri,
    /// Position integrals ⟨μ|r_k − O|ν⟩ about the dipole origin O.
    pub dipole: [DMatrix<f64>; 3],
    pub nuclear_repulsion: f64,
    pub nuclear_dipole: [f64; 3],
    /// Dipole origin in Bohr (centre of nuclear charge).
    pub dipole_origin: [f64; 3],
    /// One-body field coupling accumulated by [`IntegralSet::apply_field`].
    pub field_one_body: DMatrix<f64>,
    /// Constant shift accumulated by [`IntegralSet::apply_field`].
    pub field_constant: f64,
    pub field: [f64; 3],
}

impl IntegralSet {
    pub fn n_basis(&self) -> usize {
        self.overlap.nrows()
    }

    /// T + V + field coupling.
    pub fn core_hamiltonian(&self) -> DMatrix<f64> {
        &self.kinetic + &self.nuclear + &self.field_one_body
    }

    /// Scalar part of the Hamiltonian: nuclear repulsion plus field shift.
    pub fn constant(&self) -> f64 {
        self.nuclear_repulsion + self.field_constant
    }

    /// Couples a uniform field `f` (a.u.): h → h − F·D and the constant term
    /// shifts by +F·μ_N. Rejects |F| > 0.1 a.u.
    pub fn apply_field(&self, f: [f64; 3]) -> Result<IntegralSet> {
        let norm = (f[0] * f[0] + f[1] * f[1] + f[2] * f[2]).sqrt();
        if norm > FIELD_GUARD {
            return Err(Error::FieldOutOfRegime(norm));
        }
        Ok(self.apply_field_unchecked(f))
    }

    /// [`IntegralSet::apply_field`] without the perturbative-regime guard.
    pub fn apply_field_unchecked(&self, f: [f64; 3]) -> IntegralSet {
        let mut out = self.clone();
        for k in 0..3 {
            if f[k] != 0.0 {
                out.field_one_body -= &self.dipole[k] * f[k];
                out.field_constant += f[k] * self.nuclear_dipole[k];
                out.field[k] += f[k];
            }
        }
        out
    }
}

fn dist2(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)
}

fn gaussian_product(a: f64, ra: &[f64; 3], b: f64, rb: &[f64; 3]) -> (f64, [f64; 3], f64) {
    let p = a + b;
    let center = [
        (a * ra[0] + b * rb[0]) / p,
        (a * ra[1] + b * rb[1]) / p,
        (a * ra[2] + b * rb[2]) / p,
    ];
    let k = (-a * b / p * dist2(ra, rb)).exp();
    (p, center, k)
}

fn prim_overlap(a: f64, ra: &[f64; 3], b: f64, rb: &[f64; 3]) -> f64 {
    let (p, _, k) = gaussian_product(a, ra, b, rb);
    (PI / p).powf(1.5) * k
}

fn prim_kinetic(a: f64, ra: &[f64; 3], b: f64, rb: &[f64; 3]) -> f64 {
    let p = a + b;
    let mu = a * b / p;
    mu * (3.0 - 2.0 * mu * dist2(ra, rb)) * prim_overlap(a, ra, b, rb)
}

fn prim_attraction(a: f64, ra: &[f64; 3], b: f64, rb: &[f64; 3], rc: &[f64; 3], z: f64) -> f64 {
    let (p, rp, k) = gaussian_product(a, ra, b, rb);
    -z * 2.0 * PI / p * k * boys_f0(p * dist2(&rp, rc))
}

#[allow(clippy::too_many_arguments)]
fn prim_eri(
    a: f64,
    ra: &[f64; 3],
    b: f64,
    rb: &[f64; 3],
    c: f64,
    rc: &[f64; 3],
    d: f64,
    rd: &[f64; 3],
) -> f64 {
    let (p, rp, kab) = gaussian_product(a, ra, b, rb);
    let (q, rq, kcd) = gaussian_product(c, rc, d, rd);
    2.0 * PI.powf(2.5) / (p * q * (p + q).sqrt())
        * kab
        * kcd
        * boys_f0(p * q / (p + q) * dist2(&rp, &rq))
}

fn contract2(s1: &Shell, s2: &Shell, f: impl Fn(&Primitive, &Primitive) -> f64) -> f64 {
    let mut acc = 0.0;
    for p in &s1.primitives {
        for q in &s2.primitives {
            acc += p.coefficient * q.coefficient * f(p, q);
        }
    }
    acc
}

/// Builds the full AO integral set for `mol` in `basis`.
pub fn core_integrals(mol: &Molecule, basis: &BasisSet) -> Result<IntegralSet> {
    if let Some(s) = basis.shells.iter().find(|s| s.angular_momentum != 0) {
        return Err(Error::UnsupportedBasis(format!(
            "shell on atom {} has l = {}",
            s.center, s.angular_momentum
        )));
    }
    if basis.shells.iter().any(|s| s.center >= mol.atoms().len()) {
        return Err(Error::UnsupportedBasis("shell center outside the molecule".into()));
    }
    let n = basis.len();
    let shells = &basis.shells;
    let origin = mol.charge_center_bohr();
    let nuclei: Vec<([f64; 3], f64)> = mol
        .atoms()
        .iter()
        .map(|a| (a.position_bohr(), a.charge as f64))
        .collect();

    let mut overlap = DMatrix::zeros(n, n);
    let mut kinetic = DMatrix::zeros(n, n);
    let mut nuclear = DMatrix::zeros(n, n);
    let mut dipole = [DMatrix::zeros(n, n), DMatrix::zeros(n, n), DMatrix::zeros(n, n)];
    for i in 0..n {
        for j in 0..=i {
            let (si, sj) = (&shells[i], &shells[j]);
            let s = contract2(si, sj, |p, q| {
                prim_overlap(p.exponent, &si.origin, q.exponent, &sj.origin)
            });
            let t = contract2(si, sj, |p, q| {
                prim_kinetic(p.exponent, &si.origin, q.exponent, &sj.origin)
            });
            let v = contract2(si, sj, |p, q| {
                nuclei
                    .iter()
                    .map(|(rc, z)| {
                        prim_attraction(p.exponent, &si.origin, q.exponent, &sj.origin, rc, *z)
                    })
                    .sum()
            });
            let mut d = [0.0; 3];
            for (k, dk) in d.iter_mut().enumerate() {
                *dk = contract2(si, sj, |p, q| {
                    let (_, rp, _) =
                        gaussian_product(p.exponent, &si.origin, q.exponent, &sj.origin);
                    (rp[k] - origin[k])
                        * prim_overlap(p.exponent, &si.origin, q.exponent, &sj.origin)
                });
            }
            for (m, val) in [(&mut overlap, s), (&mut kinetic, t), (&mut nuclear, v)] {
                m[(i, j)] = val;
                m[(j, i)] = val;
            }
            for k in 0..3 {
                dipole[k][(i, j)] = d[k];
                dipole[k][(j, i)] = d[k];
            }
        }
    }

    let mut eri = Eri::zeros(n);
    for i in 0..n {
        for j in 0..=i {
            for k in 0..n {
                for l in 0..=k {
                    if i * (i + 1) / 2 + j < k * (k + 1) / 2 + l {
                        continue;
                    }
                    let (a, b, c, d) = (&shells[i], &shells[j], &shells[k], &shells[l]);
                    let mut v = 0.0;
                    for pa in &a.primitives {
                        for pb in &b.primitives {
                            for pc in &c.primitives {
                                for pd in &d.primitives {
                                    v += pa.coefficient
                                        * pb.coefficient
                                        * pc.coefficient
                                        * pd.coefficient
                                        * prim_eri(
                                            pa.exponent,
                                            &a.origin,
                                            pb.exponent,
                                            &b.origin,
                                            pc.exponent,
                                            &c.origin,
                                            pd.exponent,
                                            &d.origin,
                                        );
                                }
                            }
                        }
                    }
                    for (w, x, y, z) in [
                        (i, j, k, l),
                        (j, i, k, l),
                        (i, j, l, k),
                        (j, i, l, k),
                        (k, l, i, j),
                        (l, k, i, j),
                        (k, l, j, i),
                        (l, k, j, i),
                    ] {
                        eri.set(w, x, y, z, v);
                    }
                }
            }
        }
    }

    Ok(IntegralSet {
        overlap,
        kinetic,
        nuclear,
        eri,
        dipole,
        nuclear_repulsion: nuclear_repulsion(mol)?,
        nuclear_dipole: nuclear_dipole(mol, origin),
        dipole_origin: origin,
        field_one_body: DMatrix::zeros(n, n),
        field_constant: 0.0,
        field: [0.0; 3],
    })
}
