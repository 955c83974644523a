//! Reference solvers used to check the dynamics: an exhaustive ℓ0 search for
//! tiny instances and iterative shrinkage (ISTA) for LASSO on anything larger.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::lca::{soft_threshold_into, Threshold};
use crate::linalg::{dist_inf, norm1, norm2, spectral_norm_sq, LinearOperator};
use crate::model::Problem;

pub const L0_MAX_N: usize = 16;
pub const L0_MAX_K: usize = 6;
/// Residual below which a support counts as an exact fit.
pub const FIT_TOL: f64 = 1e-10;
const RIDGE: f64 = 1e-12;
const POWER_ITERS: usize = 50;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub x_star: Vec<f64>,
    /// Sorted indices of the nonzero entries of `x_star`.
    pub support: Vec<usize>,
    /// `‖x‖₀` for the ℓ0 search, `‖x‖₁` for ISTA.
    pub objective: f64,
    pub exact: bool,
    /// How many supports of the minimal size fit exactly. More than one means
    /// the sparsest solution is not unique and the instance is ambiguous.
    pub exact_fits: usize,
    pub iters: usize,
}

fn support_of(x: &[f64]) -> Vec<usize> {
    x.iter()
        .enumerate()
        .filter(|(_, v)| **v != 0.0)
        .map(|(i, _)| i)
        .collect()
}

/// Least squares restricted to `cols`; returns the coefficients and residual norm.
fn fit_support(problem: &Problem, cols: &[usize]) -> (Vec<f64>, f64) {
    let m = problem.m();
    let a = DMatrix::from_fn(m, cols.len(), |i, j| problem.phi.get(i, cols[j]));
    let b = DVector::from_column_slice(&problem.b);
    let mut gram = a.transpose() * &a;
    for d in 0..cols.len() {
        gram[(d, d)] += RIDGE;
    }
    let rhs = a.transpose() * &b;
    let coef = match gram.clone().cholesky() {
        Some(c) => c.solve(&rhs),
        None => gram.lu().solve(&rhs).unwrap_or_else(|| DVector::zeros(cols.len())),
    };
    let resid = (&a * &coef - b).norm();
    (coef.iter().copied().collect(), resid)
}

/// Advances `idx` to the next `k`-combination of `0..n` in lexicographic order.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for pos in (0..k).rev() {
        if idx[pos] < n - k + pos {
            idx[pos] += 1;
            for q in pos + 1..k {
                idx[q] = idx[q - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Sparsest exact fit by enumerating supports of size `1..=k_max` in order.
///
/// The first size that admits an exact fit is returned with its
/// lowest-residual support (lexicographically smallest on ties). With no exact
/// fit the best residual seen at `k_max` is returned with `exact = false`.
pub fn l0_exhaustive(problem: &Problem, k_max: usize) -> Result<OracleResult> {
    let n = problem.n();
    if n > L0_MAX_N || k_max > L0_MAX_K {
        return Err(Error::invalid(format!(
            "exhaustive search limited to n <= {L0_MAX_N}, k_max <= {L0_MAX_K} (got n={n}, k_max={k_max})"
        )));
    }
    if !problem.is_noiseless() {
        return Err(Error::invalid("exhaustive search needs a noiseless problem"));
    }
    if norm2(&problem.b) <= FIT_TOL {
        return Ok(OracleResult {
            x_star: vec![0.0; n],
            support: vec![],
            objective: 0.0,
            exact: true,
            exact_fits: 1,
            iters: 0,
        });
    }

    let mut best: Option<(Vec<usize>, Vec<f64>, f64)> = None;
    for k in 1..=k_max.min(n) {
        let mut idx: Vec<usize> = (0..k).collect();
        let mut level_best: Option<(Vec<usize>, Vec<f64>, f64)> = None;
        let mut fits = 0;
        loop {
            let (coef, resid) = fit_support(problem, &idx);
            if resid <= FIT_TOL {
                fits += 1;
            }
            if level_best.as_ref().is_none_or(|(_, _, r)| resid < *r) {
                level_best = Some((idx.clone(), coef, resid));
            }
            if !next_combination(&mut idx, n) {
                break;
            }
        }
        let (cols, coef, resid) = level_best.expect("at least one support per level");
        if fits > 0 {
            let mut x = vec![0.0; n];
            for (c, v) in cols.iter().zip(&coef) {
                x[*c] = *v;
            }
            let support = support_of(&x);
            return Ok(OracleResult {
                objective: support.len() as f64,
                x_star: x,
                support,
                exact: true,
                exact_fits: fits,
                iters: 0,
            });
        }
        best = Some((cols, coef, resid));
    }

    let mut x = vec![0.0; n];
    if let Some((cols, coef, _)) = best {
        for (c, v) in cols.iter().zip(&coef) {
            x[*c] = *v;
        }
    }
    let support = support_of(&x);
    Ok(OracleResult {
        objective: support.len() as f64,
        x_star: x,
        support,
        exact: false,
        exact_fits: 0,
        iters: 0,
    })
}

/// `½‖b − Φx‖₂² + κ‖x‖₁`
pub fn lasso_objective<A: LinearOperator>(op: &A, b: &[f64], x: &[f64], kappa: f64) -> f64 {
    let mut r = vec![0.0; op.rows()];
    op.apply(x, &mut r);
    let sq: f64 = r.iter().zip(b).map(|(ri, bi)| (ri - bi) * (ri - bi)).sum();
    0.5 * sq + kappa * norm1(x)
}

/// Largest admissible ISTA step, `1/‖Φ‖²` with the norm from a fixed
/// 50-step power iteration.
pub fn ista_step_bound<A: LinearOperator>(op: &A) -> f64 {
    1.0 / spectral_norm_sq(op, POWER_ITERS)
}

/// Proximal gradient for LASSO:
/// `x ← T_{τκ}(x + τΦᵀ(b − Φx))` from `x = 0` until `‖Δx‖∞ ≤ tol`.
pub fn ista_lasso(problem: &Problem, kappa: f64, tau: f64, max_iters: usize, tol: f64) -> Result<OracleResult> {
    ista_lasso_op(&problem.phi, &problem.b, kappa, tau, max_iters, tol, |_| {})
}

/// Operator form of [`ista_lasso`]; `observe` sees every iterate, starting
/// with the initial zero vector.
pub fn ista_lasso_op<A: LinearOperator>(
    op: &A,
    b: &[f64],
    kappa: f64,
    tau: f64,
    max_iters: usize,
    tol: f64,
    mut observe: impl FnMut(&[f64]),
) -> Result<OracleResult> {
    crate::error::check_len("observation", op.rows(), b.len())?;
    let shrink = Threshold::new(kappa)?;
    let bound = ista_step_bound(op);
    if !(tau > 0.0 && tau < bound) {
        return Err(Error::invalid(format!("step must lie in (0, {bound}), got {tau}")));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::invalid(format!("tolerance must be > 0, got {tol}")));
    }
    let shrink = Threshold::new(tau * shrink.get())?;
    let (m, n) = (op.rows(), op.cols());
    let mut x = vec![0.0; n];
    let mut r = vec![0.0; m];
    let mut grad = vec![0.0; n];
    let mut next = vec![0.0; n];
    observe(&x);
    let mut iters = 0;
    while iters < max_iters {
        op.apply(&x, &mut r);
        for (ri, bi) in r.iter_mut().zip(b) {
            *ri = bi - *ri;
        }
        op.apply_t(&r, &mut grad);
        for (g, xi) in grad.iter_mut().zip(&x) {
            *g = xi + tau * *g;
        }
        soft_threshold_into(&grad, shrink, &mut next);
        iters += 1;
        let change = dist_inf(&next, &x);
        std::mem::swap(&mut x, &mut next);
        observe(&x);
        if change <= tol {
            break;
        }
    }
    let support = support_of(&x);
    Ok(OracleResult {
        objective: norm1(&x),
        x_star: x,
        support,
        exact: false,
        exact_fits: 0,
        iters,
    })
}
