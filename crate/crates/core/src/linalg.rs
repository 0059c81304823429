//! Small dense linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};

pub type Vector = DVector<f64>;
pub type Matrix = DMatrix<f64>;

pub const POWER_TOL: f64 = 1e-10;
pub const POWER_MAX_ITERS: usize = 10_000;

/// Largest eigenvalue of a symmetric positive semidefinite operator by power
/// iteration, started from the normalized all-ones vector.
///
/// Stops when the Rayleigh quotient changes by at most `POWER_TOL` relative.
pub fn power_iteration(dim: usize, apply: impl Fn(&Vector) -> Vector) -> f64 {
    let mut v = Vector::from_element(dim, 1.0 / (dim as f64).sqrt());
    let mut lambda = 0.0;
    for _ in 0..POWER_MAX_ITERS {
        let w = apply(&v);
        let next = v.dot(&w);
        let norm = w.norm();
        if norm == 0.0 {
            return 0.0;
        }
        v = w / norm;
        if (next - lambda).abs() <= POWER_TOL * next.abs() {
            return next;
        }
        lambda = next;
    }
    lambda
}

/// Smallest eigenvalue of a symmetric positive definite matrix by inverse
/// power iteration through its Cholesky factor. `None` if the factorization
/// fails.
pub fn smallest_eigenvalue_spd(a: &Matrix) -> Option<f64> {
    let chol = a.clone().cholesky()?;
    let inv_max = power_iteration(a.nrows(), |v| chol.solve(v));
    if inv_max > 0.0 {
        Some(1.0 / inv_max)
    } else {
        None
    }
}

pub fn all_finite(v: &Vector) -> bool {
    v.iter().all(|x| x.is_finite())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_iteration_on_diagonal() {
        let a = Matrix::from_diagonal(&Vector::from_vec(vec![1.0, 5.0, 2.0]));
        let l = power_iteration(3, |v| &a * v);
        assert!((l - 5.0).abs() < 1e-8);
        let m = smallest_eigenvalue_spd(&a).unwrap();
        assert!((m - 1.0).abs() < 1e-8);
    }
}
