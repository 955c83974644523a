//! Per-iteration solver records and their text dump.
//!
//! The dump has one `#`-prefixed header line naming the columns, then one
//! line per recorded iteration:
//!
//! ```text
//! # iter primal_residual stationarity [lyapunov] [rel_error]
//! 0 2.0000000000000000e0 0.0000000000000000e0 ...
//! ```
//!
//! `lyapunov` and `rel_error` appear only when every record carries them.
//! Reals are written as `{:.16e}`, separated by single spaces.

use std::io::{self, Write};

use super::SolverState;

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub iter: usize,
    pub primal_residual: f64,
    pub stationarity: f64,
    pub lyapunov: Option<f64>,
    pub rel_error: Option<f64>,
}

#[derive(Debug, Clone, Default)]
pub struct Traces {
    pub records: Vec<TraceRecord>,
    /// Every visited state, oldest first; empty unless state tracing is on.
    pub states: Vec<SolverState>,
}

pub fn write_trace<W: Write>(out: &mut W, records: &[TraceRecord]) -> io::Result<()> {
    let with_v = !records.is_empty() && records.iter().all(|r| r.lyapunov.is_some());
    let with_err = !records.is_empty() && records.iter().all(|r| r.rel_error.is_some());
    write!(out, "# iter primal_residual stationarity")?;
    if with_v {
        write!(out, " lyapunov")?;
    }
    if with_err {
        write!(out, " rel_error")?;
    }
    writeln!(out)?;
    for r in records {
        write!(out, "{} {:.16e} {:.16e}", r.iter, r.primal_residual, r.stationarity)?;
        if with_v {
            write!(out, " {:.16e}", r.lyapunov.unwrap())?;
        }
        if with_err {
            write!(out, " {:.16e}", r.rel_error.unwrap())?;
        }
        writeln!(out)?;
    }
    Ok(())
}
