use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OptimizerKind {
    GradientDescent,
    Spsa,
    /// Quasi-Newton with parameter-shift gradients and a line search.
    Bfgs,
}

impl std::str::FromStr for OptimizerKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gd" | "gradient-descent" => Ok(OptimizerKind::GradientDescent),
            "spsa" => Ok(OptimizerKind::Spsa),
            "bfgs" => Ok(OptimizerKind::Bfgs),
            other => Err(Error::Config(format!("unknown optimizer `{other}`"))),
        }
    }
}

/// SPSA gain sequences a_k = a/(k+1+A)^α and c_k = c/(k+1)^γ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpsaGains {
    pub a: f64,
    pub c: f64,
    pub big_a: f64,
    pub alpha: f64,
    pub gamma: f64,
}

impl Default for SpsaGains {
    fn default() -> Self {
        SpsaGains {
            a: 0.2,
            c: 0.1,
            big_a: 10.0,
            alpha: 0.602,
            gamma: 0.101,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub kind: OptimizerKind,
    /// Gradient-descent step size γ.
    pub learning_rate: f64,
    /// Parameter-shift offset s.
    pub shift: f64,
    pub max_iterations: usize,
    /// Converged once |ΔE| stays below this for `window` iterations.
    pub energy_tolerance: f64,
    pub window: usize,
    /// BFGS stops once the gradient norm falls below this.
    pub gradient_tolerance: f64,
    pub spsa: SpsaGains,
    pub seed: u64,
    /// Width of the uniform jitter around zero used for the starting point
    /// (0 starts exactly at θ = 0).
    pub init_jitter: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            kind: OptimizerKind::GradientDescent,
            learning_rate: 0.1,
            shift: FRAC_PI_2,
            max_iterations: 2000,
            energy_tolerance: 1e-7,
            window: 5,
            gradient_tolerance: 1e-7,
            spsa: SpsaGains::default(),
            seed: 0,
            init_jitter: 0.0,
        }
    }
}

impl OptimizerConfig {
    pub fn bfgs() -> Self {
        OptimizerConfig {
            kind: OptimizerKind::Bfgs,
            max_iterations: 500,
            ..Self::default()
        }
    }

    pub fn spsa(seed: u64) -> Self {
        OptimizerConfig {
            kind: OptimizerKind::Spsa,
            seed,
            ..Self::default()
        }
    }

    pub fn with_jitter(mut self, jitter: f64, seed: u64) -> Self {
        self.init_jitter = jitter;
        self.seed = seed;
        self
    }

    /// Copy with the tolerances used for warm-started re-optimizations.
    pub fn tightened(&self) -> Self {
        OptimizerConfig {
            energy_tolerance: self.energy_tolerance.min(1e-8),
            gradient_tolerance: self.gradient_tolerance.min(1e-8),
            init_jitter: 0.0,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::Config(what.to_string()));
        if !(self.learning_rate > 0.0) {
            return bad("learning rate must be positive");
        }
        if !(self.shift > 0.0 && self.shift < std::f64::consts::PI) {
            return bad("shift must lie in (0, π)");
        }
        if !(self.energy_tolerance > 0.0) || !(self.gradient_tolerance > 0.0) {
            return bad("tolerances must be positive");
        }
        if self.window == 0 || self.max_iterations == 0 {
            return bad("window and iteration cap must be positive");
        }
        if !(self.init_jitter >= 0.0) {
            return bad("initial jitter must be non-negative");
        }
        let g = &self.spsa;
        if !(g.a > 0.0 && g.c > 0.0 && g.big_a >= 0.0 && g.alpha > 0.0 && g.gamma > 0.0) {
            return bad("SPSA gains must be positive");
        }
        Ok(())
    }
}
