//! Problem ensembles: sparse spike signals, ±1 column-normalized measurement
//! matrices and (optionally noisy) observations.

mod text;

use std::collections::HashMap;

pub use text::{read_problem, write_problem};

use crate::error::{check_len, Error, Result};
use crate::linalg::{norm2, LinearOperator};
use crate::rng::RngSpec;

/// Tolerance on `|‖col‖₂ − 1|` accepted by [`MeasurementMatrix::new`].
pub const COLUMN_NORM_TOL: f64 = 1e-12;

/// Maximum `‖Φx − b‖₂` accepted for a noiseless problem with known truth.
pub const EXACT_FIT_TOL: f64 = 1e-10;

/// A length-`n` vector with an explicit list of nonzero positions.
///
/// The support is kept sorted ascending; `values[k]` is the amplitude at
/// `support[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSignal {
    n: usize,
    support: Vec<usize>,
    values: Vec<f64>,
}

impl SparseSignal {
    pub fn new(n: usize, support: Vec<usize>, values: Vec<f64>) -> Result<Self> {
        check_len("signal values", support.len(), values.len())?;
        let mut pairs: Vec<(usize, f64)> = support.into_iter().zip(values).collect();
        pairs.sort_by_key(|&(i, _)| i);
        for w in pairs.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::invalid(format!("duplicate support index {}", w[0].0)));
            }
        }
        for &(i, v) in &pairs {
            if i >= n {
                return Err(Error::invalid(format!("support index {i} outside [0, {n})")));
            }
            if v == 0.0 || !v.is_finite() {
                return Err(Error::invalid(format!("amplitude at {i} must be finite and nonzero")));
            }
        }
        let (support, values) = pairs.into_iter().unzip();
        Ok(Self { n, support, values })
    }

    /// Builds a signal from a dense vector, keeping its nonzero entries.
    pub fn from_dense(dense: &[f64]) -> Result<Self> {
        let (support, values) = dense
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(i, v)| (i, *v))
            .unzip();
        Self::new(dense.len(), support, values)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn omega(&self) -> usize {
        self.support.len()
    }

    pub fn dense(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.n];
        for (&i, &v) in self.support.iter().zip(&self.values) {
            x[i] = v;
        }
        x
    }
}

/// Dense `m × n` matrix with unit-norm columns, stored row-major: entry
/// `(i, j)` lives at `entries[i * n + j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementMatrix {
    m: usize,
    n: usize,
    entries: Vec<f64>,
}

impl MeasurementMatrix {
    /// Validates shape, finiteness and unit column norms.
    ///
    /// Square matrices are accepted so that small hand-built systems can be
    /// expressed; the generated ensemble is always strictly wide.
    pub fn new(m: usize, n: usize, entries: Vec<f64>) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::invalid("matrix dimensions must be positive"));
        }
        if m > n {
            return Err(Error::invalid(format!("need m <= n, got m={m}, n={n}")));
        }
        check_len("matrix entries", m * n, entries.len())?;
        if !entries.iter().all(|v| v.is_finite()) {
            return Err(Error::invalid("matrix entries must be finite"));
        }
        let phi = Self { m, n, entries };
        for j in 0..n {
            let norm = (0..m).map(|i| phi.get(i, j).powi(2)).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > COLUMN_NORM_TOL {
                return Err(Error::invalid(format!("column {j} has norm {norm}, expected 1")));
            }
        }
        Ok(phi)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.m).map(|i| self.get(i, j)).collect()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.m];
        self.apply(x, &mut out);
        out
    }
}

impl LinearOperator for MeasurementMatrix {
    fn rows(&self) -> usize {
        self.m
    }

    fn cols(&self) -> usize {
        self.n
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n);
        for (o, row) in out.iter_mut().zip(self.entries.chunks_exact(self.n)) {
            *o = row.iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }

    fn apply_t(&self, y: &[f64], out: &mut [f64]) {
        debug_assert_eq!(y.len(), self.m);
        out.iter_mut().for_each(|o| *o = 0.0);
        for (&yi, row) in y.iter().zip(self.entries.chunks_exact(self.n)) {
            if yi == 0.0 {
                continue;
            }
            for (o, a) in out.iter_mut().zip(row) {
                *o += yi * a;
            }
        }
    }
}

/// A Basis Pursuit instance `min ‖x‖₁ s.t. Φx = b`.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub phi: MeasurementMatrix,
    pub b: Vec<f64>,
    pub truth: Option<SparseSignal>,
    pub sigma: Option<f64>,
}

impl Problem {
    pub fn new(phi: MeasurementMatrix, b: Vec<f64>, truth: Option<SparseSignal>, sigma: Option<f64>) -> Result<Self> {
        check_len("observation", phi.m(), b.len())?;
        if !b.iter().all(|v| v.is_finite()) {
            return Err(Error::invalid("observation must be finite"));
        }
        if let Some(s) = sigma {
            if !(s >= 0.0 && s.is_finite()) {
                return Err(Error::invalid(format!("sigma must be finite and >= 0, got {s}")));
            }
        }
        if let Some(t) = &truth {
            check_len("truth", phi.n(), t.n())?;
            if sigma.unwrap_or(0.0) == 0.0 {
                let fit = residual_norm(&phi, &t.dense(), &b);
                if fit > EXACT_FIT_TOL {
                    return Err(Error::invalid(format!(
                        "noiseless problem does not fit its truth: ||Phi x - b|| = {fit:e}"
                    )));
                }
            }
        }
        Ok(Self { phi, b, truth, sigma })
    }

    pub fn m(&self) -> usize {
        self.phi.m()
    }

    pub fn n(&self) -> usize {
        self.phi.n()
    }

    pub fn is_noiseless(&self) -> bool {
        self.sigma.unwrap_or(0.0) == 0.0
    }
}

/// `‖Φx − b‖₂`
pub fn residual_norm(phi: &MeasurementMatrix, x: &[f64], b: &[f64]) -> f64 {
    let mut r = phi.mul_vec(x);
    for (ri, bi) in r.iter_mut().zip(b) {
        *ri -= bi;
    }
    norm2(&r)
}

/// Draws `omega` distinct positions uniformly (partial Fisher–Yates over a
/// sparse swap table) and assigns each `±amplitude` with equal probability.
pub fn gen_signal(n: usize, omega: usize, amplitude: f64, rng: RngSpec) -> Result<SparseSignal> {
    if omega == 0 || omega > n {
        return Err(Error::invalid(format!("need 0 < omega <= n, got omega={omega}, n={n}")));
    }
    if !(amplitude > 0.0 && amplitude.is_finite()) {
        return Err(Error::invalid(format!("amplitude must be positive, got {amplitude}")));
    }
    let mut r = rng.rng();
    let mut swapped: HashMap<usize, usize> = HashMap::with_capacity(2 * omega);
    let mut support = Vec::with_capacity(omega);
    for i in 0..omega {
        let j = i + r.below(n - i);
        let at_j = *swapped.get(&j).unwrap_or(&j);
        let at_i = *swapped.get(&i).unwrap_or(&i);
        swapped.insert(j, at_i);
        support.push(at_j);
    }
    let values = (0..omega)
        .map(|_| if r.coin() { amplitude } else { -amplitude })
        .collect();
    SparseSignal::new(n, support, values)
}

/// `m × n` matrix of independent fair ±1 entries scaled by `1/√m`. Entries are
/// drawn in row-major order.
pub fn gen_matrix(m: usize, n: usize, rng: RngSpec) -> Result<MeasurementMatrix> {
    if m == 0 || m >= n {
        return Err(Error::invalid(format!("need 0 < m < n, got m={m}, n={n}")));
    }
    let scale = 1.0 / (m as f64).sqrt();
    let mut r = rng.rng();
    let entries = (0..m * n).map(|_| if r.coin() { scale } else { -scale }).collect();
    MeasurementMatrix::new(m, n, entries)
}

/// `b = Φx + ε` with `ε ~ N(0, σ²I)`; no noise is drawn when `σ = 0`.
pub fn gen_problem(signal: SparseSignal, phi: MeasurementMatrix, sigma: f64, rng: RngSpec) -> Result<Problem> {
    check_len("signal length vs matrix columns", phi.n(), signal.n())?;
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::invalid(format!("sigma must be finite and >= 0, got {sigma}")));
    }
    let mut b = phi.mul_vec(&signal.dense());
    if sigma > 0.0 {
        let mut r = rng.rng();
        for bi in &mut b {
            *bi += sigma * r.standard_normal();
        }
    }
    Problem::new(phi, b, Some(signal), Some(sigma))
}

/// One planted instance: signal, matrix and noise from three child streams
/// of `rng`.
pub fn gen_instance(n: usize, m: usize, omega: usize, amplitude: f64, sigma: f64, rng: RngSpec) -> Result<Problem> {
    let signal = gen_signal(n, omega, amplitude, rng.derive(0))?;
    let phi = gen_matrix(m, n, rng.derive(1))?;
    gen_problem(signal, phi, sigma, rng.derive(2))
}
