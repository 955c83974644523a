//! The two element-wise nonlinearities shared by every solver variant: the
//! soft threshold `T_κ` mapping internal state `u` to output `x`, and its
//! complement, the clamp of `u` onto the box `[−κ, κ]`.
//!
//! For every `u`, `soft_threshold(u) + project_box(u)` reproduces `u` to within
//! one ulp (exactly whenever `|u| ≤ 2κ`). The boundary
//! `|uᵢ| = κ` falls in the inner branch of both maps, so `sign(0)` is never
//! consulted.

use crate::error::{Error, Result};

/// A positive threshold level.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Threshold(f64);

impl Threshold {
    pub fn new(kappa: f64) -> Result<Self> {
        if kappa > 0.0 && kappa.is_finite() {
            Ok(Self(kappa))
        } else {
            Err(Error::invalid(format!("threshold must be finite and > 0, got {kappa}")))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn shrink(self, u: f64) -> f64 {
        let k = self.0;
        if u > k {
            u - k
        } else if u < -k {
            u + k
        } else {
            0.0
        }
    }

    #[inline]
    pub fn clamp(self, u: f64) -> f64 {
        let k = self.0;
        if u > k {
            k
        } else if u < -k {
            -k
        } else {
            u
        }
    }
}

impl Default for Threshold {
    fn default() -> Self {
        Self(1.0)
    }
}

pub fn soft_threshold(u: &[f64], kappa: f64) -> Result<Vec<f64>> {
    let t = Threshold::new(kappa)?;
    Ok(u.iter().map(|&ui| t.shrink(ui)).collect())
}

pub fn project_box(u: &[f64], kappa: f64) -> Result<Vec<f64>> {
    let t = Threshold::new(kappa)?;
    Ok(u.iter().map(|&ui| t.clamp(ui)).collect())
}

pub(crate) fn soft_threshold_into(u: &[f64], t: Threshold, out: &mut [f64]) {
    for (o, &ui) in out.iter_mut().zip(u) {
        *o = t.shrink(ui);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn soft_threshold_examples() {
        assert_eq!(soft_threshold(&[0.5, -0.9], 1.0).unwrap(), vec![0.0, 0.0]);
        assert_eq!(soft_threshold(&[2.0, -3.0], 1.0).unwrap(), vec![1.0, -2.0]);
        assert_eq!(soft_threshold(&[0.0; 5], 0.3).unwrap(), vec![0.0; 5]);
        assert_eq!(soft_threshold(&[1.0, -1.0], 1.0).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn project_box_examples() {
        assert_eq!(project_box(&[0.5], 1.0).unwrap(), vec![0.5]);
        assert_eq!(project_box(&[3.0, -2.0], 1.0).unwrap(), vec![1.0, -1.0]);
        assert_eq!(project_box(&[1.0 + 1e-12], 1.0).unwrap(), vec![1.0]);
    }

    #[test]
    fn rejects_nonpositive_kappa() {
        assert!(matches!(soft_threshold(&[1.0], 0.0), Err(Error::InvalidArgument(_))));
        assert!(matches!(project_box(&[1.0], -1.0), Err(Error::InvalidArgument(_))));
        assert!(Threshold::new(f64::NAN).is_err());
    }

    #[test]
    fn empty_input() {
        assert!(soft_threshold(&[], 1.0).unwrap().is_empty());
    }

    pub(crate) fn ulp(v: f64) -> f64 {
        let a = v.abs();
        if a == 0.0 {
            f64::from_bits(1)
        } else {
            f64::from_bits(a.to_bits() + 1) - a
        }
    }

    proptest! {
        #[test]
        fn decomposition_within_one_ulp(u in prop::collection::vec(-1e3f64..1e3, 1..40), kappa in 1e-3f64..10.0) {
            let x = soft_threshold(&u, kappa).unwrap();
            let g = project_box(&u, kappa).unwrap();
            for i in 0..u.len() {
                prop_assert!((x[i] + g[i] - u[i]).abs() <= ulp(u[i]));
                if u[i].abs() <= 2.0 * kappa {
                    prop_assert_eq!(x[i] + g[i], u[i]);
                }
                prop_assert!(g[i].abs() <= kappa);
                if x[i] != 0.0 {
                    prop_assert_eq!(g[i], kappa * u[i].signum());
                }
            }
        }
    }
}
