//! Fully discrete scheme: backward-Euler convolution quadrature in time,
//! P1 finite elements in space, sine-mode truncated white noise.
//!
//! Each step solves
//!
//! ```text
//! (M/tau + tau^(alpha-1) b_0 S) w_n = M w_{n-1} / tau
//!                                   - tau^(alpha-1) sum_{j<n} b_{n-j} S w_j
//!                                   + (f_n, phi) + (sigma/tau) sum_k dW_k^n (phi_k, phi)
//! ```
//!
//! with `w_n = psi_n - psi_0` when `alpha <= 1` and `w_n = psi_n` otherwise.

use std::fmt;
use std::sync::Arc;

use crate::cq_kernel::{convolve_tail, cq_weights, Branch, FractionalOrder};
use crate::error::{check_len, check_step, Error, Result};
use crate::fem::{
    assemble_mass, assemble_stiffness, l2_project, load_vector, sine_load_matrix, Mesh1D, PiecewiseConstant,
    TriDiagFactor, TriDiagOperator,
};
use crate::noise::{mode_count_for, NoisePath};

pub type SpaceTimeFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
pub type SpaceFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Deterministic forcing `f(x, t)`.
#[derive(Clone)]
pub enum Source {
    Zero,
    /// Time-independent and piecewise constant in `x`; integrated exactly.
    PiecewiseConstant(PiecewiseConstant),
    /// General `f(x, t)`; averaged over each step by Gauss quadrature.
    Function(SpaceTimeFn),
}

impl fmt::Debug for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Zero => write!(f, "Zero"),
            Source::PiecewiseConstant(p) => f.debug_tuple("PiecewiseConstant").field(p).finish(),
            Source::Function(_) => write!(f, "Function(..)"),
        }
    }
}

/// Initial datum `psi_0`.
#[derive(Clone)]
pub enum Initial {
    Zero,
    /// Projected onto the finite element space.
    Function(SpaceFn),
    /// Finite element coefficients, used as `P_h psi_0` verbatim.
    Nodal(Vec<f64>),
}

impl fmt::Debug for Initial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Initial::Zero => write!(f, "Zero"),
            Initial::Function(_) => write!(f, "Function(..)"),
            Initial::Nodal(v) => f.debug_tuple("Nodal").field(v).finish(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SchemeConfig {
    pub alpha: FractionalOrder,
    pub tau: f64,
    pub steps: usize,
    pub sigma: f64,
    pub mesh: Mesh1D,
    pub source: Source,
    pub initial: Initial,
}

impl SchemeConfig {
    /// Deterministic problem with zero data over `steps` steps of size `tau`.
    pub fn new(alpha: FractionalOrder, mesh: Mesh1D, tau: f64, steps: usize) -> Self {
        Self { alpha, tau, steps, sigma: 0.0, mesh, source: Source::Zero, initial: Initial::Zero }
    }

    pub fn with_sigma(mut self, sigma: f64) -> Self {
        self.sigma = sigma;
        self
    }

    pub fn with_source(mut self, source: Source) -> Self {
        self.source = source;
        self
    }

    pub fn with_initial(mut self, initial: Initial) -> Self {
        self.initial = initial;
        self
    }

    pub fn horizon(&self) -> f64 {
        self.tau * self.steps as f64
    }
}

enum LoadPlan {
    Zero,
    Constant(Vec<f64>),
    Function(SpaceTimeFn),
}

const GAUSS5_TIME: [(f64, f64); 5] = [
    (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.0, 0.568_888_888_888_888_9),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.906_179_845_938_664, 0.236_926_885_056_189_1),
];

/// Immutable setup shared by every realization with the same
/// `(alpha, tau, mesh)`: operators, weights, step-matrix factorization and
/// sine-mode loads.
pub struct Scheme {
    alpha: FractionalOrder,
    tau: f64,
    steps: usize,
    sigma: f64,
    mesh: Mesh1D,
    mass: TriDiagOperator,
    stiffness: TriDiagOperator,
    step_matrix: TriDiagOperator,
    factor: TriDiagFactor,
    weights: Vec<f64>,
    memory_scale: f64,
    psi0: Vec<f64>,
    load: LoadPlan,
    modes: usize,
    sine_loads: Vec<f64>,
}

/// Per-realization state.
#[derive(Debug, Clone)]
pub struct SchemeState {
    step: usize,
    psi: Vec<f64>,
    w: Vec<f64>,
    // row j-1 holds S w_j
    history: Vec<f64>,
    rhs: Vec<f64>,
    scratch: Vec<f64>,
}

impl SchemeState {
    pub fn step(&self) -> usize {
        self.step
    }

    pub fn psi(&self) -> &[f64] {
        &self.psi
    }

    /// `S w_j` for `j = 1..=step`, row-major.
    pub fn history(&self) -> &[f64] {
        &self.history
    }
}

/// Result of [`Scheme::run`].
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub final_psi: Vec<f64>,
    /// `psi_0..=psi_N` when requested.
    pub states: Option<Vec<Vec<f64>>>,
}

impl Scheme {
    pub fn new(config: &SchemeConfig) -> Result<Self> {
        check_step(config.tau)?;
        if !(config.sigma >= 0.0 && config.sigma.is_finite()) {
            return Err(Error::Config(format!("sigma must be non-negative, got {}", config.sigma)));
        }
        let mesh = config.mesh;
        let mass = assemble_mass(&mesh);
        let stiffness = assemble_stiffness(&mesh);
        let weights = cq_weights(config.alpha, config.steps)?.as_slice().to_vec();
        let memory_scale = config.tau.powf(config.alpha.value() - 1.0);
        let step_matrix = mass.combine(1.0 / config.tau, &stiffness, memory_scale * weights[0])?;
        let factor = TriDiagFactor::new(&step_matrix)?;
        if !factor.is_positive_definite() {
            return Err(Error::Config("step matrix is not positive definite".into()));
        }
        let dim = mesh.interior_nodes();
        let psi0 = match &config.initial {
            Initial::Zero => vec![0.0; dim],
            Initial::Function(f) => l2_project(|x| f(x), &mesh)?,
            Initial::Nodal(v) => {
                check_len(dim, v.len())?;
                v.clone()
            }
        };
        let load = match &config.source {
            Source::Zero => LoadPlan::Zero,
            Source::PiecewiseConstant(p) => LoadPlan::Constant(p.load_vector(&mesh)),
            Source::Function(f) => LoadPlan::Function(f.clone()),
        };
        let modes = mode_count_for(&mesh);
        let sine_loads = if config.sigma > 0.0 { sine_load_matrix(modes, &mesh) } else { Vec::new() };
        Ok(Self {
            alpha: config.alpha,
            tau: config.tau,
            steps: config.steps,
            sigma: config.sigma,
            mesh,
            mass,
            stiffness,
            step_matrix,
            factor,
            weights,
            memory_scale,
            psi0,
            load,
            modes,
            sine_loads,
        })
    }

    pub fn mesh(&self) -> &Mesh1D {
        &self.mesh
    }

    pub fn mass(&self) -> &TriDiagOperator {
        &self.mass
    }

    pub fn stiffness(&self) -> &TriDiagOperator {
        &self.stiffness
    }

    pub fn step_matrix(&self) -> &TriDiagOperator {
        &self.step_matrix
    }

    pub fn psi0(&self) -> &[f64] {
        &self.psi0
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Noise modes expected per step.
    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn init(&self) -> SchemeState {
        let dim = self.psi0.len();
        let w = match self.alpha.branch() {
            Branch::SubtractInitial => vec![0.0; dim],
            Branch::PlainHistory => self.psi0.clone(),
        };
        SchemeState {
            step: 0,
            psi: self.psi0.clone(),
            w,
            history: Vec::with_capacity(self.steps * dim),
            rhs: vec![0.0; dim],
            scratch: vec![0.0; dim],
        }
    }

    fn add_source(&self, n: usize, rhs: &mut [f64]) {
        match &self.load {
            LoadPlan::Zero => {}
            LoadPlan::Constant(l) => rhs.iter_mut().zip(l).for_each(|(r, v)| *r += v),
            LoadPlan::Function(f) => {
                let (t0, tau) = ((n - 1) as f64 * self.tau, self.tau);
                let avg = |x: f64| {
                    GAUSS5_TIME
                        .iter()
                        .map(|&(s, w)| 0.5 * w * f(x, t0 + 0.5 * (s + 1.0) * tau))
                        .sum::<f64>()
                };
                let l = load_vector(avg, &self.mesh);
                rhs.iter_mut().zip(&l).for_each(|(r, v)| *r += v);
            }
        }
    }

    /// Advances `state` by one step. `noise` holds `dW_j^n` for `j = 1..=M`.
    pub fn step(&self, state: &mut SchemeState, noise: Option<&[f64]>) -> Result<()> {
        if state.step >= self.steps {
            return Err(Error::Finished(self.steps));
        }
        if let Some(dw) = noise {
            check_len(self.modes, dw.len())?;
        }
        let n = state.step + 1;
        let dim = self.psi0.len();

        self.mass.apply_into(&state.w, &mut state.rhs);
        let inv_tau = 1.0 / self.tau;
        state.rhs.iter_mut().for_each(|r| *r *= inv_tau);

        if n > 1 {
            convolve_tail(&self.weights, &state.history, &mut state.scratch);
            let c = self.memory_scale;
            state.rhs.iter_mut().zip(&state.scratch).for_each(|(r, m)| *r -= c * m);
        }

        self.add_source(n, &mut state.rhs);

        if let (Some(dw), true) = (noise, self.sigma > 0.0) {
            let c = self.sigma * inv_tau;
            for (inc, load) in dw.iter().zip(self.sine_loads.chunks_exact(dim)) {
                let a = c * inc;
                state.rhs.iter_mut().zip(load).for_each(|(r, l)| *r += a * l);
            }
        }

        self.factor.solve_in_place(&mut state.rhs);
        std::mem::swap(&mut state.w, &mut state.rhs);

        self.stiffness.apply_into(&state.w, &mut state.scratch);
        state.history.extend_from_slice(&state.scratch);

        match self.alpha.branch() {
            Branch::SubtractInitial => {
                for ((p, w), p0) in state.psi.iter_mut().zip(&state.w).zip(&self.psi0) {
                    *p = w + p0;
                }
            }
            Branch::PlainHistory => state.psi.copy_from_slice(&state.w),
        }
        state.step = n;
        Ok(())
    }

    /// Takes all remaining steps.
    pub fn run(&self, path: Option<&NoisePath>, keep_states: bool) -> Result<Trajectory> {
        if let Some(p) = path {
            self.check_path(p)?;
        }
        let mut state = self.init();
        let mut states = keep_states.then(|| vec![state.psi.clone()]);
        let mut column = vec![0.0; self.modes];
        for n in 1..=self.steps {
            let noise = match path {
                Some(p) => {
                    let steps = p.num_steps();
                    for (j, c) in column.iter_mut().enumerate() {
                        *c = p.increments()[j * steps + n - 1];
                    }
                    Some(column.as_slice())
                }
                None => None,
            };
            self.step(&mut state, noise)?;
            if let Some(s) = states.as_mut() {
                s.push(state.psi.clone());
            }
        }
        Ok(Trajectory { final_psi: state.psi, states })
    }

    fn check_path(&self, p: &NoisePath) -> Result<()> {
        check_len(self.modes, p.num_modes())?;
        check_len(self.steps, p.num_steps())?;
        let rel = (p.tau() - self.tau).abs() / self.tau;
        if rel > 4.0 * f64::EPSILON {
            return Err(Error::Config(format!("noise step {} does not match scheme step {}", p.tau(), self.tau)));
        }
        Ok(())
    }
}

/// One-shot convenience: set up the scheme and run it to the end.
pub fn run(config: &SchemeConfig, path: Option<&NoisePath>, keep_states: bool) -> Result<Trajectory> {
    Scheme::new(config)?.run(path, keep_states)
}
