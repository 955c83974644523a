//! Neural-network dynamics for Basis Pursuit and their forward-Euler
//! integration.
//!
//! All four systems share an internal state `u ∈ ℝⁿ`, an output
//! `x = T_κ(u)` and Lagrange multipliers `λ ∈ ℝᵐ`. With
//!
//! ```text
//! M = −(u − x + Φᵀλ)        stationarity drive
//! N = Φx − b                primal residual
//! ```
//!
//! the variants differ only in how `M` and `N` are combined:
//!
//! | variant              | du/dt      | dλ/dt    |
//! |----------------------|------------|----------|
//! | `Original`           | M          | N        |
//! | `OriginalAugmented`  | M − ΦᵀN    | N        |
//! | `Improved`           | M          | N + ΦM   |
//! | `ImprovedAugmented`  | M − ΦᵀN    | N + ΦM   |
//!
//! The time constant of the circuit is fixed at 1. Each derivative costs at
//! most four products with `Φ` or `Φᵀ` and no matrix–matrix work.

mod trace;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use thiserror::Error;

pub use trace::{write_trace, TraceRecord, Traces};

use crate::error::{check_len, Error, Result};
use crate::lca::{soft_threshold_into, Threshold};
use crate::linalg::{all_finite, dist2_sq, norm2, norm_inf, LinearOperator};
use crate::model::Problem;
use crate::rng::RngSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    Original,
    OriginalAugmented,
    Improved,
    ImprovedAugmented,
}

impl Variant {
    pub const ALL: [Variant; 4] = [
        Variant::Original,
        Variant::OriginalAugmented,
        Variant::Improved,
        Variant::ImprovedAugmented,
    ];

    /// Adds `−ΦᵀN` to the state derivative.
    pub fn is_augmented(self) -> bool {
        matches!(self, Variant::OriginalAugmented | Variant::ImprovedAugmented)
    }

    /// Adds `ΦM` to the multiplier derivative.
    pub fn is_projected(self) -> bool {
        matches!(self, Variant::Improved | Variant::ImprovedAugmented)
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::Original => "original",
            Variant::OriginalAugmented => "original-augmented",
            Variant::Improved => "improved",
            Variant::ImprovedAugmented => "improved-augmented",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        Variant::ALL.into_iter().find(|v| v.name() == key).ok_or_else(|| {
            Error::invalid(format!(
                "unknown variant {s:?} (expected original, original-augmented, improved or improved-augmented)"
            ))
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TraceFlags {
    /// Keep a copy of every `(u, λ)` visited.
    pub state: bool,
    /// Record `V_k = ½‖w_k − w_final‖²` per iteration.
    pub lyapunov: bool,
    /// Record primal residual and stationarity per iteration.
    pub residual: bool,
    /// Record relative error against the planted truth, when known.
    pub error: bool,
}

impl TraceFlags {
    pub fn any(self) -> bool {
        self.state || self.lyapunov || self.residual || self.error
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub variant: Variant,
    /// Euler step size.
    pub mu: f64,
    pub kappa: f64,
    pub max_iters: usize,
    /// Bound on `‖Φx − b‖₂` at convergence.
    pub tol_residual: f64,
    /// Bound on `max(‖Δu‖∞, ‖Δλ‖∞)` over the last step at convergence.
    pub tol_state: f64,
    pub trace: TraceFlags,
}

impl SolverConfig {
    pub fn new(variant: Variant, mu: f64) -> Self {
        Self {
            variant,
            mu,
            kappa: 1.0,
            max_iters: 10_000,
            tol_residual: 1e-6,
            tol_state: 1e-6,
            trace: TraceFlags::default(),
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol_residual = tol;
        self.tol_state = tol;
        self
    }

    pub fn with_max_iters(mut self, max_iters: usize) -> Self {
        self.max_iters = max_iters;
        self
    }

    pub fn with_kappa(mut self, kappa: f64) -> Self {
        self.kappa = kappa;
        self
    }

    pub fn with_trace(mut self, trace: TraceFlags) -> Self {
        self.trace = trace;
        self
    }

    pub fn threshold(&self) -> Result<Threshold> {
        Threshold::new(self.kappa)
    }

    pub fn validate(&self) -> Result<()> {
        // mu = 0 is allowed for single steps; solve() requires mu > 0
        if !(self.mu >= 0.0 && self.mu.is_finite()) {
            return Err(Error::invalid(format!(
                "step size must be finite and >= 0, got {}",
                self.mu
            )));
        }
        self.threshold()?;
        if self.max_iters == 0 {
            return Err(Error::invalid("max_iters must be >= 1"));
        }
        for (name, tol) in [("tol_residual", self.tol_residual), ("tol_state", self.tol_state)] {
            if tol.is_nan() || tol <= 0.0 {
                return Err(Error::invalid(format!("{name} must be > 0, got {tol}")));
            }
        }
        Ok(())
    }
}

/// Network state: internal potentials `u`, multipliers `λ` and the number of
/// Euler steps taken to reach it. The output `x` is always derived from `u`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverState {
    pub u: Vec<f64>,
    pub lambda: Vec<f64>,
    pub iter: usize,
}

impl SolverState {
    pub fn new(u: Vec<f64>, lambda: Vec<f64>) -> Self {
        Self { u, lambda, iter: 0 }
    }

    pub fn zeros(problem: &Problem) -> Self {
        Self::new(vec![0.0; problem.n()], vec![0.0; problem.m()])
    }

    /// Entries independently uniform in `[−scale, scale]`.
    pub fn random(problem: &Problem, scale: f64, rng: RngSpec) -> Self {
        let mut r = rng.rng();
        let mut draw = |len: usize| -> Vec<f64> { (0..len).map(|_| scale * (2.0 * r.uniform() - 1.0)).collect() };
        let u = draw(problem.n());
        let lambda = draw(problem.m());
        Self::new(u, lambda)
    }

    pub fn x(&self, kappa: f64) -> Result<Vec<f64>> {
        crate::lca::soft_threshold(&self.u, kappa)
    }

    fn check_dims(&self, n: usize, m: usize) -> Result<()> {
        check_len("state u", n, self.u.len())?;
        check_len("state lambda", m, self.lambda.len())
    }

    fn is_finite(&self) -> bool {
        all_finite(&self.u) && all_finite(&self.lambda)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Derivative {
    pub du: Vec<f64>,
    pub dlambda: Vec<f64>,
}

/// Evaluates one of the four vector fields against any linear operator.
/// Holds scratch buffers so repeated evaluations do not allocate.
pub struct Dynamics<'a, A: LinearOperator> {
    op: &'a A,
    b: &'a [f64],
    variant: Variant,
    threshold: Threshold,
    pub(crate) x: Vec<f64>,
    pub(crate) drive: Vec<f64>,
    pub(crate) residual: Vec<f64>,
    pub(crate) du: Vec<f64>,
    pub(crate) dlambda: Vec<f64>,
    scratch_n: Vec<f64>,
    scratch_m: Vec<f64>,
}

impl<'a, A: LinearOperator> Dynamics<'a, A> {
    pub fn new(op: &'a A, b: &'a [f64], variant: Variant, threshold: Threshold) -> Result<Self> {
        check_len("observation", op.rows(), b.len())?;
        let (m, n) = (op.rows(), op.cols());
        Ok(Self {
            op,
            b,
            variant,
            threshold,
            x: vec![0.0; n],
            drive: vec![0.0; n],
            residual: vec![0.0; m],
            du: vec![0.0; n],
            dlambda: vec![0.0; m],
            scratch_n: vec![0.0; n],
            scratch_m: vec![0.0; m],
        })
    }

    /// Fills `x`, `M`, `N`, `du` and `dλ` for the given state.
    pub fn evaluate(&mut self, u: &[f64], lambda: &[f64]) -> Result<()> {
        check_len("state u", self.op.cols(), u.len())?;
        check_len("state lambda", self.op.rows(), lambda.len())?;

        soft_threshold_into(u, self.threshold, &mut self.x);

        // M = −(u − x + Φᵀλ)
        self.op.apply_t(lambda, &mut self.scratch_n);
        for (((d, &ui), &xi), &ti) in self.drive.iter_mut().zip(u).zip(&self.x).zip(&self.scratch_n) {
            *d = -((ui - xi) + ti);
        }

        // N = Φx − b
        self.op.apply(&self.x, &mut self.residual);
        for (r, bi) in self.residual.iter_mut().zip(self.b) {
            *r -= bi;
        }

        self.du.copy_from_slice(&self.drive);
        if self.variant.is_augmented() {
            self.op.apply_t(&self.residual, &mut self.scratch_n);
            for (d, g) in self.du.iter_mut().zip(&self.scratch_n) {
                *d -= g;
            }
        }

        self.dlambda.copy_from_slice(&self.residual);
        if self.variant.is_projected() {
            self.op.apply(&self.drive, &mut self.scratch_m);
            for (d, g) in self.dlambda.iter_mut().zip(&self.scratch_m) {
                *d += g;
            }
        }
        Ok(())
    }

    pub fn primal_residual(&self) -> f64 {
        norm2(&self.residual)
    }

    pub fn stationarity(&self) -> f64 {
        norm_inf(&self.drive)
    }

    pub fn derivative(&self) -> Derivative {
        Derivative {
            du: self.du.clone(),
            dlambda: self.dlambda.clone(),
        }
    }
}

pub fn derivative(state: &SolverState, problem: &Problem, config: &SolverConfig) -> Result<Derivative> {
    let mut dynamics = Dynamics::new(&problem.phi, &problem.b, config.variant, config.threshold()?)?;
    dynamics.evaluate(&state.u, &state.lambda)?;
    Ok(dynamics.derivative())
}

/// One forward-Euler step `w ← w + μ·dw/dt`. The input state is untouched.
pub fn step(state: &SolverState, problem: &Problem, config: &SolverConfig) -> Result<SolverState> {
    config.validate()?;
    let d = derivative(state, problem, config)?;
    let mu = config.mu;
    let next = SolverState {
        u: state.u.iter().zip(&d.du).map(|(u, du)| u + mu * du).collect(),
        lambda: state.lambda.iter().zip(&d.dlambda).map(|(l, dl)| l + mu * dl).collect(),
        iter: state.iter + 1,
    };
    if next.is_finite() {
        Ok(next)
    } else {
        Err(Error::Diverged { iter: next.iter })
    }
}

/// `(‖Φx − b‖₂, ‖u − x + Φᵀλ‖∞)` at `x = T_κ(u)`.
///
/// Since `u − x` always lies in `κ∂‖x‖₁`, a zero second component certifies
/// `0 ∈ κ∂‖x‖₁ + Φᵀλ`.
pub fn kkt_residuals(state: &SolverState, problem: &Problem, kappa: f64) -> Result<(f64, f64)> {
    state.check_dims(problem.n(), problem.m())?;
    let mut dynamics = Dynamics::new(&problem.phi, &problem.b, Variant::Original, Threshold::new(kappa)?)?;
    dynamics.evaluate(&state.u, &state.lambda)?;
    Ok((dynamics.primal_residual(), dynamics.stationarity()))
}

/// `V_k = ½(‖u_k − u*‖² + ‖λ_k − λ*‖²)` for every state against `reference`.
pub fn lyapunov_trace(states: &[SolverState], reference: &SolverState) -> Result<Vec<f64>> {
    if states.is_empty() {
        return Err(Error::invalid("lyapunov trace needs at least one state"));
    }
    states
        .iter()
        .map(|s| {
            s.check_dims(reference.u.len(), reference.lambda.len())?;
            Ok(0.5 * (dist2_sq(&s.u, &reference.u) + dist2_sq(&s.lambda, &reference.lambda)))
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct TrialResult {
    pub x_hat: Vec<f64>,
    pub iters_used: usize,
    pub converged: bool,
    pub final_residual: f64,
    pub final_station: f64,
    pub final_state: SolverState,
    pub traces: Option<Traces>,
    pub wall_time: Duration,
}

/// A run that produced a non-finite state.
#[derive(Debug, Clone)]
pub struct Divergence {
    /// Iteration index of the first non-finite state.
    pub iter: usize,
    pub last_finite: SolverState,
    pub traces: Option<Traces>,
    pub wall_time: Duration,
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error(transparent)]
    Invalid(#[from] Error),
    #[error("diverged: non-finite state at iteration {}", .0.iter)]
    Diverged(Box<Divergence>),
}

/// Integrates from `init` (default `u = 0, λ = 0`) until both the primal
/// residual and the last state change are within tolerance, or `max_iters`
/// steps have been taken.
pub fn solve(problem: &Problem, config: &SolverConfig, init: Option<SolverState>) -> Result<TrialResult, SolveError> {
    solve_with(&problem.phi, problem, config, init)
}

/// [`solve`] with a caller-supplied operator standing in for `Φ`.
pub fn solve_with<A: LinearOperator>(
    op: &A,
    problem: &Problem,
    config: &SolverConfig,
    init: Option<SolverState>,
) -> Result<TrialResult, SolveError> {
    config.validate()?;
    if config.mu <= 0.0 {
        return Err(Error::invalid("solve needs a step size > 0").into());
    }
    check_len("operator rows", problem.m(), op.rows())?;
    check_len("operator cols", problem.n(), op.cols())?;
    let mut state = init.unwrap_or_else(|| SolverState::zeros(problem));
    state.check_dims(problem.n(), problem.m())?;

    let start = Instant::now();
    let flags = config.trace;
    let truth = problem.truth.as_ref().map(|t| t.dense());
    let truth_norm = truth.as_deref().map(norm2).unwrap_or(0.0);
    let keep_states = flags.state || flags.lyapunov;
    let mut records: Vec<TraceRecord> = Vec::new();
    let mut states: Vec<SolverState> = Vec::new();

    let mut dynamics = Dynamics::new(op, &problem.b, config.variant, config.threshold()?)?;
    let mu = config.mu;
    let mut last_change = f64::INFINITY;
    let mut steps = 0usize;
    let mut previous = state.clone();

    let (converged, primal, station) = loop {
        dynamics.evaluate(&state.u, &state.lambda)?;
        let primal = dynamics.primal_residual();
        let station = dynamics.stationarity();

        if flags.any() {
            let rel_error = match (&truth, flags.error) {
                (Some(t), true) if truth_norm > 0.0 => Some(dist2_sq(&dynamics.x, t).sqrt() / truth_norm),
                _ => None,
            };
            records.push(TraceRecord {
                iter: state.iter,
                primal_residual: primal,
                stationarity: station,
                lyapunov: None,
                rel_error,
            });
        }
        if keep_states {
            states.push(state.clone());
        }

        if primal <= config.tol_residual && last_change <= config.tol_state {
            break (true, primal, station);
        }
        if steps == config.max_iters {
            break (false, primal, station);
        }

        previous.u.copy_from_slice(&state.u);
        previous.lambda.copy_from_slice(&state.lambda);
        previous.iter = state.iter;
        let mut change: f64 = 0.0;
        for (u, du) in state.u.iter_mut().zip(&dynamics.du) {
            let old = *u;
            *u += mu * du;
            change = change.max((*u - old).abs());
        }
        for (l, dl) in state.lambda.iter_mut().zip(&dynamics.dlambda) {
            let old = *l;
            *l += mu * dl;
            change = change.max((*l - old).abs());
        }
        state.iter += 1;
        steps += 1;

        if !state.is_finite() || !change.is_finite() {
            let traces = flags.any().then(|| Traces {
                records,
                states: if flags.state { states } else { Vec::new() },
            });
            return Err(SolveError::Diverged(Box::new(Divergence {
                iter: state.iter,
                last_finite: previous,
                traces,
                wall_time: start.elapsed(),
            })));
        }
        last_change = change;
    };

    let x_hat = dynamics.x.clone();
    let traces = if flags.any() {
        if flags.lyapunov {
            let values = lyapunov_trace(&states, &state)?;
            for (rec, v) in records.iter_mut().zip(values) {
                rec.lyapunov = Some(v);
            }
        }
        Some(Traces {
            records,
            states: if flags.state { states } else { Vec::new() },
        })
    } else {
        None
    };

    Ok(TrialResult {
        x_hat,
        iters_used: steps,
        converged,
        final_residual: primal,
        final_station: station,
        final_state: state,
        traces,
        wall_time: start.elapsed(),
    })
}
