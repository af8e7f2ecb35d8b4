#![allow(clippy::neg_cmp_op_on_partial_ord)] // negated comparisons also reject NaN

//! Solver and convergence-study harness for the stochastic fractional
//! integro-differential equation
//!
//! ```text
//! d/dt psi - Laplace d_t^(1-alpha) psi = f + sigma dW/dt   on (0, 1),  psi = 0 on the boundary
//! ```
//!
//! discretized by backward-Euler convolution quadrature in time, piecewise
//! linear finite elements in space and a sine-mode truncation of space-time
//! white noise.

pub mod cq_kernel;
pub mod error;
pub mod fem;
pub mod noise;
pub mod oracles;
pub mod parallel;
pub mod stepper;
pub mod study;

pub use cq_kernel::{backward_difference, cq_weights, fractional_convolve, Branch, CqWeights, FractionalOrder};
pub use error::{Error, Result};
pub use fem::{Mesh1D, PiecewiseConstant, TriDiagOperator};
pub use noise::{coarsen_in_time, mode_count, sample_path, NoiseConfig, NoisePath};
pub use stepper::{Initial, Scheme, SchemeConfig, SchemeState, Source, Trajectory};
pub use study::{
    estimate_order, run_study, spatial_study, temporal_study, theoretical_orders, ConvergenceReport, StudyConfig,
    StudyKind,
};
