use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::surface::EnergySurface;
use crate::chem::BOHR_IN_ANGSTROM;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepMethod {
    /// δq = γ·∂E/∂q.
    #[default]
    Gradient,
    /// δq = γ·(∂E/∂q)/(∂²E/∂q²).
    Hessian,
}

impl StepMethod {
    /// γ used when none is given.
    pub fn default_gamma(&self) -> f64 {
        match self {
            StepMethod::Gradient => 0.4,
            StepMethod::Hessian => 1.0,
        }
    }
}

impl FromStr for StepMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gradient" => Ok(StepMethod::Gradient),
            "hessian" => Ok(StepMethod::Hessian),
            other => Err(Error::Config(format!("unknown method `{other}`"))),
        }
    }
}

impl fmt::Display for StepMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StepMethod::Gradient => "gradient",
            StepMethod::Hessian => "hessian",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometryOptions {
    pub method: StepMethod,
    pub gamma: f64,
    /// Threshold on ‖δQ‖₂ in bohr.
    pub ctol: f64,
    pub max_iterations: usize,
}

impl GeometryOptions {
    pub fn new(method: StepMethod) -> Self {
        GeometryOptions {
            method,
            gamma: method.default_gamma(),
            ctol: 1e-3,
            max_iterations: 100,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0) || !(self.ctol > 0.0) || self.max_iterations == 0 {
            return Err(Error::Config("gamma, ctol and the iteration cap must be positive".into()));
        }
        Ok(())
    }
}

/// One geometry iteration. Coordinates in Å, energies in hartree,
/// derivatives per Å, the step δQ in bohr.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryStep {
    pub coordinates: Vec<f64>,
    pub energy: f64,
    pub theta: Option<Vec<f64>>,
    pub gradient: Vec<f64>,
    pub curvature: Option<Vec<f64>>,
    pub step: Vec<f64>,
    /// Hessian mode fell back to a gradient step for at least one coordinate.
    pub fallback: bool,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationTrajectory {
    pub method: StepMethod,
    pub steps: Vec<TrajectoryStep>,
    pub converged: bool,
}

impl OptimizationTrajectory {
    pub fn iterations(&self) -> usize {
        self.steps.len()
    }

    pub fn last(&self) -> Option<&TrajectoryStep> {
        self.steps.last()
    }

    pub fn final_coordinates(&self) -> Option<&[f64]> {
        self.last().map(|s| s.coordinates.as_slice())
    }

    pub fn final_energy(&self) -> Option<f64> {
        self.last().map(|s| s.energy)
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Steepest-descent or diagonal-Newton search for a minimum. Coordinates
/// are the surface's geometric parameters; steps are taken in bohr and the
/// search stops, without moving, once ‖δQ‖₂ < ctol.
pub fn geometry_optimize(
    surface: &mut dyn EnergySurface,
    start: &[f64],
    options: &GeometryOptions,
) -> Result<OptimizationTrajectory> {
    options.validate()?;
    if surface.family().parameters().entries().iter().any(|p| p.kind.is_field()) {
        return Err(Error::Config("geometry optimization needs geometric parameters only".into()));
    }
    let mut q: Vec<f64> = start.to_vec();
    let mut steps = Vec::new();
    let hessian = options.method == StepMethod::Hessian;
    for _ in 0..options.max_iterations {
        let point = surface.evaluate(&q, hessian)?;
        // Å → bohr: ∂E/∂q_bohr = a₀·∂E/∂R_Å, ∂²E/∂q² = a₀²·∂²E/∂R².
        let g_au: Vec<f64> = point.gradient.iter().map(|g| g * BOHR_IN_ANGSTROM).collect();
        let mut fallback = false;
        let mut curvature = None;
        let delta: Vec<f64> = match &point.hessian {
            Some(m) if hessian => {
                let diag: Vec<f64> = (0..q.len()).map(|i| m[i][i]).collect();
                let d = g_au
                    .iter()
                    .zip(&diag)
                    .map(|(g, c)| {
                        let c_au = c * BOHR_IN_ANGSTROM * BOHR_IN_ANGSTROM;
                        if c_au > 0.0 {
                            options.gamma * g / c_au
                        } else {
                            fallback = true;
                            options.gamma * g
                        }
                    })
                    .collect();
                curvature = Some(diag);
                d
            }
            _ => g_au.iter().map(|g| options.gamma * g).collect(),
        };
        let done = norm(&delta) < options.ctol;
        steps.push(TrajectoryStep {
            coordinates: q.clone(),
            energy: point.energy,
            theta: point.theta,
            gradient: point.gradient,
            curvature,
            step: delta.clone(),
            fallback,
            warnings: point.warnings,
        });
        if done {
            return Ok(OptimizationTrajectory {
                method: options.method,
                steps,
                converged: true,
            });
        }
        for (x, d) in q.iter_mut().zip(&delta) {
            *x -= d * BOHR_IN_ANGSTROM;
        }
    }
    Ok(OptimizationTrajectory {
        method: options.method,
        steps,
        converged: false,
    })
}
