use serde::{Deserialize, Serialize};

use super::geometry::{OptimizationTrajectory, StepMethod, TrajectoryStep};
use super::surface::{EnergySurface, SurfacePoint};
use crate::chem::BOHR_IN_ANGSTROM;
use crate::error::{Error, Result};

/// Reactant and product geometries (generalized coordinates, Å) with the
/// ordered list of modes to search along.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReactionSpec {
    pub reactants: Vec<f64>,
    pub products: Vec<f64>,
    modes: Vec<Vec<f64>>,
    pub collinear: bool,
}

impl ReactionSpec {
    /// Normalizes every mode; rejects zero modes and length mismatches.
    pub fn new(reactants: Vec<f64>, products: Vec<f64>, modes: Vec<Vec<f64>>, collinear: bool) -> Result<Self> {
        let n = reactants.len();
        if products.len() != n || n == 0 {
            return Err(Error::Config(format!(
                "reactants and products have {} and {} coordinates",
                n,
                products.len()
            )));
        }
        if modes.is_empty() {
            return Err(Error::Config("at least one mode is required".into()));
        }
        let modes = modes
            .into_iter()
            .map(|m| {
                let len = norm(&m);
                if m.len() != n || !(len > 1e-12) || !len.is_finite() {
                    return Err(Error::Config(format!("mode {m:?} is not a nonzero {n}-vector")));
                }
                Ok(m.iter().map(|x| x / len).collect())
            })
            .collect::<Result<_>>()?;
        Ok(ReactionSpec {
            reactants,
            products,
            modes,
            collinear,
        })
    }

    /// Symmetric and antisymmetric stretch of a two-bond chain, in that order.
    pub fn two_bond(reactants: [f64; 2], products: [f64; 2]) -> Result<Self> {
        ReactionSpec::new(
            reactants.to_vec(),
            products.to_vec(),
            vec![vec![1.0, 1.0], vec![1.0, -1.0]],
            true,
        )
    }

    pub fn modes(&self) -> &[Vec<f64>] {
        &self.modes
    }

    /// Linear interpolation between reactants (t = 0) and products (t = 1).
    pub fn interpolate(&self, t: f64) -> Vec<f64> {
        self.reactants
            .iter()
            .zip(&self.products)
            .map(|(a, b)| a + t * (b - a))
            .collect()
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn quadratic(m: &[Vec<f64>], a: &[f64], b: &[f64]) -> f64 {
    m.iter().zip(a).map(|(row, ai)| ai * dot(row, b)).sum()
}

/// Relative size below which A·B − C² counts as zero.
pub const DEGENERATE_DISCRIMINANT: f64 = 1e-4;

/// Second-derivative test along two modes, in hartree/Å².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaddleTest {
    /// ∂²E/∂m₁².
    pub a: f64,
    /// ∂²E/∂m₂².
    pub b: f64,
    /// ∂²E/∂m₁∂m₂.
    pub c: f64,
    /// A·B − C².
    pub discriminant: f64,
    pub saddle: bool,
}

impl SaddleTest {
    pub fn from_hessian(hessian: &[Vec<f64>], m1: &[f64], m2: &[f64]) -> Self {
        let a = quadratic(hessian, m1, m1);
        let b = quadratic(hessian, m2, m2);
        let c = 0.5 * (quadratic(hessian, m1, m2) + quadratic(hessian, m2, m1));
        let discriminant = a * b - c * c;
        // |A·B − C²| within difference noise of zero is a degenerate
        // (inconclusive) test, not a saddle.
        let scale = (a * b).abs().max(c * c);
        SaddleTest {
            a,
            b,
            c,
            discriminant,
            saddle: discriminant < -DEGENERATE_DISCRIMINANT * scale,
        }
    }
}

fn hessian_of(point: &SurfacePoint) -> Result<&[Vec<f64>]> {
    point
        .hessian
        .as_deref()
        .ok_or_else(|| Error::Config("surface returned no Hessian".into()))
}

/// Classifies a stationary point with modes `m1`, `m2` (normalized here).
/// Fails with [`Error::NotExtremum`] if ‖∂E/∂Q‖ in hartree/bohr exceeds `ctol`.
pub fn second_derivative_test(
    surface: &mut dyn EnergySurface,
    point: &[f64],
    m1: &[f64],
    m2: &[f64],
    ctol: f64,
) -> Result<(SaddleTest, SurfacePoint)> {
    let n = point.len();
    if m1.len() != n || m2.len() != n {
        return Err(Error::Config(format!("modes must have {n} components")));
    }
    let (l1, l2) = (norm(m1), norm(m2));
    if !(l1 > 1e-12 && l2 > 1e-12) {
        return Err(Error::Config("modes must be nonzero".into()));
    }
    let m1: Vec<f64> = m1.iter().map(|x| x / l1).collect();
    let m2: Vec<f64> = m2.iter().map(|x| x / l2).collect();
    let p = surface.evaluate(point, true)?;
    let g = norm(&p.gradient) * BOHR_IN_ANGSTROM;
    if g >= ctol {
        return Err(Error::NotExtremum(g));
    }
    let test = SaddleTest::from_hessian(hessian_of(&p)?, &m1, &m2);
    Ok((test, p))
}

/// Stationary-point search along one mode from `start`: Newton steps
/// δs = γ·(∂E/∂s)/(∂²E/∂s²) in bohr, stopping once |δs| < ctol.
pub fn mode_search(
    surface: &mut dyn EnergySurface,
    start: &[f64],
    mode: &[f64],
    gamma: f64,
    ctol: f64,
    max_iterations: usize,
) -> Result<OptimizationTrajectory> {
    let mut q = start.to_vec();
    let mut steps = Vec::new();
    for _ in 0..max_iterations {
        let p = surface.evaluate(&q, true)?;
        let h = hessian_of(&p)?;
        let g_s = dot(&p.gradient, mode) * BOHR_IN_ANGSTROM;
        let h_s = quadratic(h, mode, mode) * BOHR_IN_ANGSTROM * BOHR_IN_ANGSTROM;
        let fallback = h_s.abs() < 1e-8;
        let ds = if fallback { gamma * g_s } else { gamma * g_s / h_s };
        let done = ds.abs() < ctol;
        steps.push(TrajectoryStep {
            coordinates: q.clone(),
            energy: p.energy,
            theta: p.theta.clone(),
            gradient: p.gradient.clone(),
            curvature: Some(vec![h_s / (BOHR_IN_ANGSTROM * BOHR_IN_ANGSTROM)]),
            step: vec![ds],
            fallback,
            warnings: p.warnings.clone(),
        });
        if done {
            return Ok(OptimizationTrajectory {
                method: StepMethod::Hessian,
                steps,
                converged: true,
            });
        }
        for (x, m) in q.iter_mut().zip(mode) {
            *x -= ds * m * BOHR_IN_ANGSTROM;
        }
    }
    Ok(OptimizationTrajectory {
        method: StepMethod::Hessian,
        steps,
        converged: false,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeAttempt {
    pub mode: usize,
    pub trajectory: OptimizationTrajectory,
    pub test: Option<SaddleTest>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionState {
    /// Saddle geometry (Å).
    pub geometry: Vec<f64>,
    pub energy: f64,
    pub test: SaddleTest,
    pub attempts: Vec<ModeAttempt>,
}

/// Saddle search: starts midway between reactants and products, finds the
/// stationary point along each mode in turn and applies the second-derivative
/// test with the next mode. Returns on the first saddle.
pub fn transition_state_search(
    surface: &mut dyn EnergySurface,
    spec: &ReactionSpec,
    gamma: f64,
    ctol: f64,
    max_iterations: usize,
) -> Result<(TransitionState, Vec<ModeAttempt>)> {
    if !(gamma > 0.0 && ctol > 0.0) {
        return Err(Error::Config("gamma and ctol must be positive".into()));
    }
    if surface.family().parameters().len() != spec.reactants.len() {
        return Err(Error::Config(format!(
            "reaction has {} coordinates, surface has {}",
            spec.reactants.len(),
            surface.family().parameters().len()
        )));
    }
    let start = spec.interpolate(0.5);
    let modes = spec.modes();
    let mut attempts = Vec::new();
    for (k, mode) in modes.iter().enumerate() {
        let trajectory = mode_search(surface, &start, mode, gamma, ctol, max_iterations)?;
        let mut attempt = ModeAttempt {
            mode: k,
            trajectory,
            test: None,
            note: None,
        };
        if !attempt.trajectory.converged {
            attempt.note = Some("mode search did not converge".into());
            attempts.push(attempt);
            continue;
        }
        let Some(point) = attempt.trajectory.final_coordinates().map(<[f64]>::to_vec) else {
            attempts.push(attempt);
            continue;
        };
        let other = if modes.len() > 1 {
            modes[(k + 1) % modes.len()].clone()
        } else {
            orthogonal(mode)
        };
        match second_derivative_test(surface, &point, mode, &other, ctol) {
            Ok((test, p)) => {
                attempt.test = Some(test);
                attempts.push(attempt);
                if test.saddle {
                    let ts = TransitionState {
                        geometry: point,
                        energy: p.energy,
                        test,
                        attempts: attempts.clone(),
                    };
                    return Ok((ts, attempts));
                }
            }
            Err(e) => {
                attempt.note = Some(e.to_string());
                attempts.push(attempt);
            }
        }
    }
    Err(Error::SearchFailed { modes: modes.len() })
}

/// A unit vector orthogonal to `m` (for single-mode searches).
fn orthogonal(m: &[f64]) -> Vec<f64> {
    let n = m.len();
    if n < 2 {
        return vec![1.0; n];
    }
    let mut v = vec![0.0; n];
    v[0] = -m[1];
    v[1] = m[0];
    let l = norm(&v).max(1e-300);
    v.iter().map(|x| x / l).collect()
}
