use super::setup::VqeSetup;
use crate::derivatives::{
    first_order, second_order_from_shifted, shifted_state, theta_gradient_norm,
    HamiltonianFamily, DEFAULT_STEP, STALE_GRADIENT,
};
use crate::error::{Error, Result};
use crate::operators::{sector_spectrum, PauliSum};
use crate::simulator::PreparedState;
use crate::vqe::GroundStateSolver;

/// Energy, gradient and optional Hessian at one point of a surface, in
/// hartree and the family's parameter units.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfacePoint {
    pub coordinates: Vec<f64>,
    pub energy: f64,
    pub gradient: Vec<f64>,
    pub hessian: Option<Vec<Vec<f64>>>,
    pub theta: Option<Vec<f64>>,
    pub warnings: Vec<String>,
}

/// A potential energy surface over the parameters of a Hamiltonian family.
pub trait EnergySurface {
    fn family(&self) -> &HamiltonianFamily;
    fn evaluate(&mut self, coordinates: &[f64], with_hessian: bool) -> Result<SurfacePoint>;
}

/// Ground-state energy of `h` within the family's electron-count sector.
pub fn sector_ground_energy(family: &HamiltonianFamily, h: &PauliSum) -> Result<f64> {
    let n = family.number_operator()?;
    sector_spectrum(h, &n, family.n_electrons() as f64)?
        .first()
        .copied()
        .ok_or_else(|| Error::Config("no state with the molecule's electron count".into()))
}

/// VQE energies with Hellmann–Feynman gradients and response Hessians.
/// Each evaluation warm-starts from the previous optimized state.
pub struct VqeSurface {
    family: HamiltonianFamily,
    solver: GroundStateSolver,
    pub step: f64,
    pub state_step: f64,
    last: Option<PreparedState>,
}

impl VqeSurface {
    pub fn new(family: HamiltonianFamily, setup: &VqeSetup) -> Result<Self> {
        let solver = setup.solver_for(&family)?;
        Ok(VqeSurface {
            family,
            solver,
            step: DEFAULT_STEP,
            state_step: DEFAULT_STEP,
            last: None,
        })
    }

    pub fn solver(&self) -> &GroundStateSolver {
        &self.solver
    }

    /// Forgets the warm-start state.
    pub fn reset(&mut self) {
        self.last = None;
    }

    /// Optimized ground state at `q` (warm-started when possible).
    pub fn ground_state(&mut self, q: &[f64]) -> Result<(PreparedState, f64, bool)> {
        let h = self.family.build(q)?;
        let (state, run) = match &self.last {
            Some(prev) => self.solver.refine(&h, prev, false)?,
            None => self.solver.solve(&h)?,
        };
        self.last = Some(state.clone());
        Ok((state, run.energy, run.converged))
    }
}

impl EnergySurface for VqeSurface {
    fn family(&self) -> &HamiltonianFamily {
        &self.family
    }

    fn evaluate(&mut self, q: &[f64], with_hessian: bool) -> Result<SurfacePoint> {
        let (state, energy, converged) = self.ground_state(q)?;
        let mut warnings = Vec::new();
        if !converged {
            warnings.push("ground-state optimization did not converge".to_string());
        }
        let h = self.family.build(q)?;
        let stale = theta_gradient_norm(&h, &state)?;
        if stale > STALE_GRADIENT {
            warnings.push(format!("state gradient norm {stale:.3e} above {STALE_GRADIENT}"));
        }
        let engine = self.solver.engine;
        let n = q.len();
        let gradient = (0..n)
            .map(|i| first_order(&self.family, q, &state, i, self.step, engine))
            .collect::<Result<Vec<_>>>()?;
        let hessian = if with_hessian {
            let mut m = vec![vec![0.0; n]; n];
            for (i, row) in m.iter_mut().enumerate() {
                let (shifted, ok) = shifted_state(&self.family, q, &state, i, self.state_step, &self.solver)?;
                if !ok {
                    warnings.push(format!("re-optimization along parameter {i} did not converge"));
                }
                for (j, cell) in row.iter_mut().enumerate() {
                    let (c, r) = second_order_from_shifted(
                        &self.family,
                        q,
                        &state,
                        &shifted,
                        i,
                        j,
                        self.step,
                        self.state_step,
                        engine,
                    )?;
                    *cell = c + r;
                }
            }
            // The two response estimates of an off-diagonal element agree to
            // the method tolerance; report their mean.
            for i in 0..n {
                for j in 0..i {
                    let avg = 0.5 * (m[i][j] + m[j][i]);
                    m[i][j] = avg;
                    m[j][i] = avg;
                }
            }
            Some(m)
        } else {
            None
        };
        Ok(SurfacePoint {
            coordinates: q.to_vec(),
            energy,
            gradient,
            hessian,
            theta: Some(state.theta),
            warnings,
        })
    }
}

/// Exact sector ground energies with central finite differences.
pub struct ExactSurface {
    family: HamiltonianFamily,
    pub step: f64,
}

impl ExactSurface {
    pub fn new(family: HamiltonianFamily) -> Self {
        ExactSurface {
            family,
            step: DEFAULT_STEP,
        }
    }

    pub fn energy(&self, q: &[f64]) -> Result<f64> {
        sector_ground_energy(&self.family, &self.family.build(q)?)
    }

    fn shifted(&self, q: &[f64], moves: &[(usize, f64)]) -> Result<f64> {
        let mut v = q.to_vec();
        for &(i, d) in moves {
            v[i] += d;
        }
        self.energy(&v)
    }
}

impl EnergySurface for ExactSurface {
    fn family(&self) -> &HamiltonianFamily {
        &self.family
    }

    fn evaluate(&mut self, q: &[f64], with_hessian: bool) -> Result<SurfacePoint> {
        let h = self.step;
        let n = q.len();
        let energy = self.energy(q)?;
        let gradient = (0..n)
            .map(|i| Ok((self.shifted(q, &[(i, h)])? - self.shifted(q, &[(i, -h)])?) / (2.0 * h)))
            .collect::<Result<Vec<_>>>()?;
        let hessian = if with_hessian {
            let mut m = vec![vec![0.0; n]; n];
            for i in 0..n {
                m[i][i] = (self.shifted(q, &[(i, h)])? - 2.0 * energy + self.shifted(q, &[(i, -h)])?) / (h * h);
                for j in 0..i {
                    let v = (self.shifted(q, &[(i, h), (j, h)])? - self.shifted(q, &[(i, h), (j, -h)])?
                        - self.shifted(q, &[(i, -h), (j, h)])?
                        + self.shifted(q, &[(i, -h), (j, -h)])?)
                        / (4.0 * h * h);
                    m[i][j] = v;
                    m[j][i] = v;
                }
            }
            Some(m)
        } else {
            None
        };
        Ok(SurfacePoint {
            coordinates: q.to_vec(),
            energy,
            gradient,
            hessian,
            theta: None,
            warnings: Vec::new(),
        })
    }
}
