//! Recovery error measures and per-cell statistics over repeated trials.
//!
//! Sweep summaries are written as CSV with the fixed header
//!
//! ```text
//! n,m,omega,sigma,variant,mu,trials,diverged,mean_mse,median_mse,std_mse,mean_rel,mean_iters,mean_wall_s
//! ```
//!
//! `sigma` and `mu` are written in plain shortest form (`0.001`), the
//! statistics in shortest round-trip scientific form (`2.5e-15`); both parse
//! back to the same bits. Statistics over an empty set (every trial
//! diverged) are written as `NaN`; so is `mean_wall_s` when timing is off.

use std::io::{self, Write};

use crate::error::{check_len, Error, Result};
use crate::linalg::{dist2_sq, norm2};
use crate::solver::Variant;

pub const CSV_HEADER: &str =
    "n,m,omega,sigma,variant,mu,trials,diverged,mean_mse,median_mse,std_mse,mean_rel,mean_iters,mean_wall_s";

/// `‖x̂ − x‖₂² / n`
pub fn mse(x_hat: &[f64], x_true: &[f64]) -> Result<f64> {
    check_len("estimate vs truth", x_true.len(), x_hat.len())?;
    if x_true.is_empty() {
        return Err(Error::invalid("mse of empty vectors"));
    }
    Ok(dist2_sq(x_hat, x_true) / x_true.len() as f64)
}

/// `‖x̂ − x‖₂ / ‖x‖₂`
pub fn relative_error(x_hat: &[f64], x_true: &[f64]) -> Result<f64> {
    check_len("estimate vs truth", x_true.len(), x_hat.len())?;
    let scale = norm2(x_true);
    if scale == 0.0 {
        return Err(Error::invalid("relative error against a zero signal"));
    }
    Ok(dist2_sq(x_hat, x_true).sqrt() / scale)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialMetrics {
    pub mse: f64,
    pub rel_error: f64,
    pub iters: usize,
    pub converged: bool,
    /// The run hit a non-finite state; its error figures are not meaningful.
    pub diverged: bool,
    /// Seconds, when measured.
    pub wall_time: Option<f64>,
}

impl TrialMetrics {
    pub fn diverged(iters: usize, wall_time: Option<f64>) -> Self {
        Self {
            mse: f64::NAN,
            rel_error: f64::NAN,
            iters,
            converged: false,
            diverged: true,
            wall_time,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepKey {
    pub n: usize,
    pub m: usize,
    pub omega: usize,
    pub sigma: f64,
    pub variant: Variant,
    pub mu: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stats {
    pub mean: f64,
    pub median: f64,
    /// Population standard deviation.
    pub std: f64,
}

impl Stats {
    const EMPTY: Stats = Stats {
        mean: f64::NAN,
        median: f64::NAN,
        std: f64::NAN,
    };

    /// Order-independent: values are sorted before any summation.
    pub fn of(values: &[f64]) -> Stats {
        if values.is_empty() {
            return Self::EMPTY;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        let var = v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
        let mid = v.len() / 2;
        let median = if v.len() % 2 == 1 {
            v[mid]
        } else {
            0.5 * (v[mid - 1] + v[mid])
        };
        Stats {
            mean,
            median,
            std: var.sqrt(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSummary {
    pub key: SweepKey,
    pub trials: usize,
    pub diverged: usize,
    pub converged: usize,
    /// Over non-divergent trials.
    pub mse: Stats,
    pub rel_error: Stats,
    pub iters: Stats,
    /// Mean over all trials; `None` unless every trial was timed.
    pub mean_wall: Option<f64>,
}

pub fn aggregate(trials: &[TrialMetrics], key: SweepKey) -> Result<SweepSummary> {
    if trials.is_empty() {
        return Err(Error::invalid("cannot aggregate zero trials"));
    }
    let kept: Vec<&TrialMetrics> = trials.iter().filter(|t| !t.diverged).collect();
    let mses: Vec<f64> = kept.iter().map(|t| t.mse).collect();
    let rels: Vec<f64> = kept.iter().map(|t| t.rel_error).collect();
    let iters: Vec<f64> = kept.iter().map(|t| t.iters as f64).collect();
    let walls: Option<Vec<f64>> = trials.iter().map(|t| t.wall_time).collect();
    Ok(SweepSummary {
        key,
        trials: trials.len(),
        diverged: trials.len() - kept.len(),
        converged: trials.iter().filter(|t| t.converged).count(),
        mse: Stats::of(&mses),
        rel_error: Stats::of(&rels),
        iters: Stats::of(&iters),
        mean_wall: walls.map(|w| Stats::of(&w).mean),
    })
}

impl SweepSummary {
    pub fn csv_row(&self) -> String {
        let k = &self.key;
        format!(
            "{},{},{},{},{},{},{},{},{:e},{:e},{:e},{:e},{:e},{:e}",
            k.n,
            k.m,
            k.omega,
            k.sigma,
            k.variant,
            k.mu,
            self.trials,
            self.diverged,
            self.mse.mean,
            self.mse.median,
            self.mse.std,
            self.rel_error.mean,
            self.iters.mean,
            self.mean_wall.unwrap_or(f64::NAN),
        )
    }
}

pub fn write_csv<W: Write>(out: &mut W, rows: &[SweepSummary]) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(out, "{}", r.csv_row())?;
    }
    Ok(())
}
