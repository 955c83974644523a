//! Small dense vector helpers and the linear-operator abstraction the solvers
//! are written against.

/// A real `rows × cols` linear map. Solvers only ever need products with the
/// map and its transpose, so this is all they see.
pub trait LinearOperator {
    fn rows(&self) -> usize;
    fn cols(&self) -> usize;
    /// `out = A·x`
    fn apply(&self, x: &[f64], out: &mut [f64]);
    /// `out = Aᵀ·y`
    fn apply_t(&self, y: &[f64], out: &mut [f64]);
}

impl<T: LinearOperator + ?Sized> LinearOperator for &T {
    fn rows(&self) -> usize {
        (**self).rows()
    }
    fn cols(&self) -> usize {
        (**self).cols()
    }
    fn apply(&self, x: &[f64], out: &mut [f64]) {
        (**self).apply(x, out)
    }
    fn apply_t(&self, y: &[f64], out: &mut [f64]) {
        (**self).apply_t(y, out)
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn norm1(a: &[f64]) -> f64 {
    a.iter().map(|x| x.abs()).sum()
}

/// `‖a − b‖∞`
pub fn dist_inf(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// `‖a − b‖₂²`
pub fn dist2_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub fn all_finite(a: &[f64]) -> bool {
    a.iter().all(|x| x.is_finite())
}

/// Largest eigenvalue of `AᵀA` (the squared spectral norm of `A`) by power
/// iteration from the normalized all-ones vector.
pub fn spectral_norm_sq<A: LinearOperator>(op: &A, iters: usize) -> f64 {
    let n = op.cols();
    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    let mut av = vec![0.0; op.rows()];
    let mut w = vec![0.0; n];
    let mut estimate = 0.0;
    for _ in 0..iters {
        op.apply(&v, &mut av);
        op.apply_t(&av, &mut w);
        let nw = norm2(&w);
        if nw == 0.0 {
            return 0.0;
        }
        estimate = dot(&v, &w);
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / nw;
        }
    }
    estimate
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Diag(Vec<f64>);

    impl LinearOperator for Diag {
        fn rows(&self) -> usize {
            self.0.len()
        }
        fn cols(&self) -> usize {
            self.0.len()
        }
        fn apply(&self, x: &[f64], out: &mut [f64]) {
            for i in 0..x.len() {
                out[i] = self.0[i] * x[i];
            }
        }
        fn apply_t(&self, y: &[f64], out: &mut [f64]) {
            self.apply(y, out)
        }
    }

    #[test]
    fn norms() {
        let a = [3.0, -4.0];
        assert_eq!(norm2(&a), 5.0);
        assert_eq!(norm_inf(&a), 4.0);
        assert_eq!(norm1(&a), 7.0);
        assert_eq!(dist_inf(&a, &[0.0, 0.0]), 4.0);
        assert_eq!(dist2_sq(&a, &[3.0, 0.0]), 16.0);
    }

    #[test]
    fn power_method_on_diagonal() {
        let d = Diag(vec![1.0, 3.0, 0.5]);
        let l = spectral_norm_sq(&d, 200);
        assert!((l - 9.0).abs() < 1e-9, "{l}");
    }
}
