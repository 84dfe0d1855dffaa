use std::cell::RefCell;
use std::rc::Rc;

use argmin::core::observers::{Observe, ObserverMode};
use argmin::core::{CostFunction, Executor, Gradient, IterState, State, TerminationReason, KV};
use argmin::solver::linesearch::MoreThuenteLineSearch;
use argmin::solver::quasinewton::BFGS;
use rand::distributions::{Distribution, Uniform};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::config::{OptimizerConfig, OptimizerKind};
use super::objective::{EnergyObjective, Objective};
use crate::error::{Error, Result};
use crate::operators::PauliSum;
use crate::simulator::{rng_stream, Engine, ParameterizedCircuit, PreparedState};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub theta: Vec<f64>,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VqeResult {
    pub theta: Vec<f64>,
    pub energy: f64,
    pub trace: Vec<TraceStep>,
    pub converged: bool,
    pub evaluations: u64,
}

impl VqeResult {
    pub fn iterations(&self) -> usize {
        self.trace.len().saturating_sub(1)
    }
}

/// Starting parameters: zeros, or uniform jitter in [−w, w] from the
/// configured seed.
pub fn initial_point(n: usize, cfg: &OptimizerConfig) -> Vec<f64> {
    if cfg.init_jitter == 0.0 {
        return vec![0.0; n];
    }
    let dist = Uniform::new_inclusive(-cfg.init_jitter, cfg.init_jitter);
    let mut rng = rng_stream(cfg.seed, u64::MAX);
    (0..n).map(|_| dist.sample(&mut rng)).collect()
}

/// Minimizes `obj` from `theta0` with the configured optimizer.
pub fn minimize(obj: &dyn Objective, theta0: Vec<f64>, cfg: &OptimizerConfig) -> Result<VqeResult> {
    cfg.validate()?;
    if theta0.len() != obj.n_params() {
        return Err(Error::ParameterLength {
            expected: obj.n_params(),
            got: theta0.len(),
        });
    }
    if theta0.is_empty() {
        let energy = obj.value(&theta0)?;
        return Ok(VqeResult {
            theta: theta0.clone(),
            energy,
            trace: vec![TraceStep { theta: theta0, energy }],
            converged: true,
            evaluations: obj.evaluations(),
        });
    }
    let (trace, converged) = match cfg.kind {
        OptimizerKind::GradientDescent => gradient_descent(obj, theta0, cfg)?,
        OptimizerKind::Spsa => spsa(obj, theta0, cfg)?,
        OptimizerKind::Bfgs => bfgs(obj, theta0, cfg)?,
    };
    let best = trace
        .iter()
        .min_by(|a, b| a.energy.total_cmp(&b.energy))
        .expect("trace is never empty")
        .clone();
    Ok(VqeResult {
        theta: best.theta,
        energy: best.energy,
        trace,
        converged,
        evaluations: obj.evaluations(),
    })
}

struct Window {
    tol: f64,
    needed: usize,
    streak: usize,
}

impl Window {
    fn update(&mut self, prev: f64, next: f64) -> bool {
        if (next - prev).abs() < self.tol {
            self.streak += 1;
        } else {
            self.streak = 0;
        }
        self.streak >= self.needed
    }
}

fn window(cfg: &OptimizerConfig) -> Window {
    Window {
        tol: cfg.energy_tolerance,
        needed: cfg.window,
        streak: 0,
    }
}

fn gradient_descent(
    obj: &dyn Objective,
    mut theta: Vec<f64>,
    cfg: &OptimizerConfig,
) -> Result<(Vec<TraceStep>, bool)> {
    let mut energy = obj.value(&theta)?;
    let mut trace = vec![TraceStep {
        theta: theta.clone(),
        energy,
    }];
    let mut w = window(cfg);
    for _ in 0..cfg.max_iterations {
        let g = obj.gradient(&theta, cfg.shift)?;
        for (t, gj) in theta.iter_mut().zip(&g) {
            *t -= cfg.learning_rate * gj;
        }
        let next = obj.value(&theta)?;
        trace.push(TraceStep {
            theta: theta.clone(),
            energy: next,
        });
        let done = w.update(energy, next);
        energy = next;
        if done {
            return Ok((trace, true));
        }
    }
    Ok((trace, false))
}

fn spsa(
    obj: &dyn Objective,
    mut theta: Vec<f64>,
    cfg: &OptimizerConfig,
) -> Result<(Vec<TraceStep>, bool)> {
    let g = cfg.spsa;
    let mut rng = rng_stream(cfg.seed, u64::MAX - 1);
    let mut energy = obj.value(&theta)?;
    let mut trace = vec![TraceStep {
        theta: theta.clone(),
        energy,
    }];
    let mut w = window(cfg);
    for k in 0..cfg.max_iterations {
        let kf = k as f64;
        let ak = g.a / (kf + 1.0 + g.big_a).powf(g.alpha);
        let ck = g.c / (kf + 1.0).powf(g.gamma);
        let delta: Vec<f64> = (0..theta.len())
            .map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 })
            .collect();
        let shifted = |sign: f64| -> Vec<f64> {
            theta.iter().zip(&delta).map(|(t, d)| t + sign * ck * d).collect()
        };
        let plus = obj.value(&shifted(1.0))?;
        let minus = obj.value(&shifted(-1.0))?;
        let diff = (plus - minus) / (2.0 * ck);
        for (t, d) in theta.iter_mut().zip(&delta) {
            *t -= ak * diff / d;
        }
        let next = obj.value(&theta)?;
        trace.push(TraceStep {
            theta: theta.clone(),
            energy: next,
        });
        let done = w.update(energy, next);
        energy = next;
        if done {
            return Ok((trace, true));
        }
    }
    Ok((trace, false))
}

/// Line-search evaluations allowed per BFGS iteration before the run is
/// abandoned.
const EVALUATIONS_PER_ITERATION: usize = 20;

struct Problem<'a> {
    obj: &'a dyn Objective,
    shift: f64,
    calls: std::cell::Cell<usize>,
    budget: usize,
}

impl Problem<'_> {
    fn spend(&self) -> std::result::Result<(), argmin::core::Error> {
        let n = self.calls.get() + 1;
        self.calls.set(n);
        if n > self.budget {
            return Err(argmin::core::Error::msg("evaluation budget exhausted"));
        }
        Ok(())
    }
}

fn to_argmin(e: Error) -> argmin::core::Error {
    argmin::core::Error::msg(e.to_string())
}

impl CostFunction for Problem<'_> {
    type Param = Vec<f64>;
    type Output = f64;
    fn cost(&self, p: &Vec<f64>) -> std::result::Result<f64, argmin::core::Error> {
        self.spend()?;
        self.obj.value(p).map_err(to_argmin)
    }
}

impl Gradient for Problem<'_> {
    type Param = Vec<f64>;
    type Gradient = Vec<f64>;
    fn gradient(&self, p: &Vec<f64>) -> std::result::Result<Vec<f64>, argmin::core::Error> {
        self.spend()?;
        self.obj.gradient(p, self.shift).map_err(to_argmin)
    }
}

type BfgsState = IterState<Vec<f64>, Vec<f64>, (), Vec<Vec<f64>>, (), f64>;

struct Recorder(Rc<RefCell<Vec<TraceStep>>>);

impl Observe<BfgsState> for Recorder {
    fn observe_iter(&mut self, state: &BfgsState, _kv: &KV) -> std::result::Result<(), argmin::core::Error> {
        if let Some(p) = state.get_param() {
            self.0.borrow_mut().push(TraceStep {
                theta: p.clone(),
                energy: state.get_cost(),
            });
        }
        Ok(())
    }
}

fn bfgs(
    obj: &dyn Objective,
    theta: Vec<f64>,
    cfg: &OptimizerConfig,
) -> Result<(Vec<TraceStep>, bool)> {
    let n = theta.len();
    let energy = obj.value(&theta)?;
    let trace = Rc::new(RefCell::new(vec![TraceStep {
        theta: theta.clone(),
        energy,
    }]));
    let identity: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let linesearch = MoreThuenteLineSearch::new();
    let solver = BFGS::new(linesearch)
        .with_tolerance_grad(cfg.gradient_tolerance)
        .map_err(|e| Error::Config(e.to_string()))?
        .with_tolerance_cost(0.0)
        .map_err(|e| Error::Config(e.to_string()))?;
    let problem = Problem {
        obj,
        shift: cfg.shift,
        calls: std::cell::Cell::new(0),
        budget: cfg.max_iterations.saturating_mul(EVALUATIONS_PER_ITERATION),
    };
    let run = Executor::new(problem, solver)
        .configure(|s| s.param(theta).inv_hessian(identity).max_iters(cfg.max_iterations as u64))
        .add_observer(Recorder(trace.clone()), ObserverMode::Always)
        .run();
    let converged = match run {
        Ok(res) => matches!(
            res.state().get_termination_reason(),
            Some(TerminationReason::SolverConverged)
        ),
        Err(_) => false,
    };
    let trace = trace.take();
    if converged {
        return Ok((trace, true));
    }
    // A failed line search near the optimum still leaves a usable point;
    // accept it when the gradient there is below tolerance.
    let best = trace
        .iter()
        .min_by(|a, b| a.energy.total_cmp(&b.energy))
        .expect("trace is never empty");
    let g = obj.gradient(&best.theta, cfg.shift)?;
    let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
    Ok((trace, norm < cfg.gradient_tolerance))
}

/// Runs VQE on `reference` followed by `ansatz`.
pub fn vqe_minimize(
    h: &PauliSum,
    ansatz: &ParameterizedCircuit,
    reference: &ParameterizedCircuit,
    opt: &OptimizerConfig,
    engine: Engine,
) -> Result<(PreparedState, VqeResult)> {
    let circuit = reference.then(ansatz)?;
    let theta0 = initial_point(circuit.n_slots(), opt);
    vqe_minimize_from(h, &circuit, theta0, opt, engine)
}

/// Runs VQE on a full preparation circuit from a given starting point.
pub fn vqe_minimize_from(
    h: &PauliSum,
    circuit: &ParameterizedCircuit,
    theta0: Vec<f64>,
    opt: &OptimizerConfig,
    engine: Engine,
) -> Result<(PreparedState, VqeResult)> {
    h.require_observable()?;
    if h.n_qubits() != circuit.n_qubits() {
        return Err(Error::QubitMismatch(h.n_qubits(), circuit.n_qubits()));
    }
    let obj = EnergyObjective::new(h, circuit, engine);
    let res = minimize(&obj, theta0, opt)?;
    Ok((PreparedState::new(circuit.clone(), res.theta.clone()), res))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::{Angle, Gate};

    fn ry() -> ParameterizedCircuit {
        let mut c = ParameterizedCircuit::new(1);
        c.push(Gate::Ry(0, Angle::slot(0))).unwrap();
        c
    }

    #[test]
    fn z_minimum_all_optimizers() {
        let z = PauliSum::from_text("1 Z").unwrap();
        let empty = ParameterizedCircuit::new(1);
        for kind in [OptimizerKind::GradientDescent, OptimizerKind::Bfgs] {
            let mut opt = OptimizerConfig {
                kind,
                ..OptimizerConfig::default()
            };
            opt.learning_rate = 0.4;
            opt.init_jitter = 0.3;
            let (_, r) = vqe_minimize(&z, &ry(), &empty, &opt, Engine::Exact).unwrap();
            assert!(r.converged, "{kind:?}");
            assert!((r.energy + 1.0).abs() < 1e-6, "{kind:?}: {}", r.energy);
        }
        let mut opt = OptimizerConfig::spsa(3);
        opt.init_jitter = 0.3;
        let (_, r) = vqe_minimize(&z, &ry(), &empty, &opt, Engine::Exact).unwrap();
        assert!((r.energy + 1.0).abs() < 1e-3, "spsa {}", r.energy);
    }

    #[test]
    fn energy_is_trace_minimum() {
        let z = PauliSum::from_text("1 Z").unwrap();
        let opt = OptimizerConfig {
            max_iterations: 3,
            init_jitter: 0.5,
            ..OptimizerConfig::default()
        };
        let (_, r) = vqe_minimize(&z, &ry(), &ParameterizedCircuit::new(1), &opt, Engine::Exact).unwrap();
        assert!(!r.converged);
        let min = r.trace.iter().map(|s| s.energy).fold(f64::INFINITY, f64::min);
        assert_eq!(r.energy, min);
        assert_eq!(r.iterations(), 3);
    }
}
