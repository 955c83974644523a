//! Analog neural-network dynamics for Basis Pursuit,
//! `min ‖x‖₁ subject to Φx = b`.
//!
//! The crate provides the four LPNN-LCA dynamical systems ([`solver`]), the
//! threshold nonlinearities they share ([`lca`]), the random ensembles used to
//! benchmark them ([`model`]), independent reference solvers ([`oracle`]),
//! error statistics ([`metrics`]) and the sweep/verification drivers behind
//! the `bpdyn` binary ([`experiment`]).

pub mod error;
pub mod experiment;
pub mod lca;
pub mod linalg;
pub mod metrics;
pub mod model;
pub mod oracle;
pub mod rng;
pub mod solver;

pub use error::{Error, Result};
pub use lca::{project_box, soft_threshold, Threshold};
pub use model::{gen_instance, gen_matrix, gen_problem, gen_signal, MeasurementMatrix, Problem, SparseSignal};
pub use rng::RngSpec;
pub use solver::{
    derivative, kkt_residuals, lyapunov_trace, solve, step, SolveError, SolverConfig, SolverState, TraceFlags,
    TrialResult, Variant,
};
