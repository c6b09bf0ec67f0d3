//! Norms and Hermitian functional calculus.

use std::ops::Bound;

use num_complex::Complex64;

use super::{herm_eig, EigenDecomposition, Operator};
use crate::config::Tolerances;
use crate::error::Result;

/// Real interval with open, closed or infinite ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lower: Bound<f64>,
    pub upper: Bound<f64>,
}

impl Interval {
    pub fn new(lower: Bound<f64>, upper: Bound<f64>) -> Self {
        Self { lower, upper }
    }

    /// `(-∞, c]`
    pub fn at_most(c: f64) -> Self {
        Self::new(Bound::Unbounded, Bound::Included(c))
    }

    /// `(c, +∞)`
    pub fn above(c: f64) -> Self {
        Self::new(Bound::Excluded(c), Bound::Unbounded)
    }

    /// `[c, +∞)`
    pub fn at_least(c: f64) -> Self {
        Self::new(Bound::Included(c), Bound::Unbounded)
    }

    /// `(-∞, c)`
    pub fn below(c: f64) -> Self {
        Self::new(Bound::Unbounded, Bound::Excluded(c))
    }

    pub fn closed(a: f64, b: f64) -> Self {
        Self::new(Bound::Included(a), Bound::Included(b))
    }

    /// Membership after snapping `x` onto an endpoint within `snap`.
    pub fn contains_snapped(&self, x: f64, snap: f64) -> bool {
        let lower_ok = match self.lower {
            Bound::Unbounded => true,
            Bound::Included(a) => x >= a || (a - x).abs() <= snap,
            Bound::Excluded(a) => x > a && (x - a).abs() > snap,
        };
        let upper_ok = match self.upper {
            Bound::Unbounded => true,
            Bound::Included(b) => x <= b || (x - b).abs() <= snap,
            Bound::Excluded(b) => x < b && (b - x).abs() > snap,
        };
        lower_ok && upper_ok
    }
}

/// Snap width used for a matrix of the given spectral scale.
pub(crate) fn snap_width(scale: f64, tol: &Tolerances) -> f64 {
    tol.snap * (1.0 + scale)
}

/// `χ_I(A)` from an existing decomposition.
pub fn projection_from_eig(e: &EigenDecomposition, interval: &Interval, tol: &Tolerances) -> Operator {
    let scale = e.eigenvalues.iter().fold(0.0f64, |m, l| m.max(l.abs()));
    let snap = snap_width(scale, tol);
    e.reconstruct_with(|l| {
        if interval.contains_snapped(l, snap) {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Spectral projection `χ_I(A) = Σ_{λ_k ∈ I} v_k v_k*`.
pub fn spectral_projection(a: &Operator, interval: &Interval, tol: &Tolerances) -> Result<Operator> {
    let e = herm_eig(a, tol)?;
    Ok(projection_from_eig(&e, interval, tol))
}

/// `U f(Λ) U*`.
pub fn herm_fun(a: &Operator, f: impl Fn(f64) -> Complex64, tol: &Tolerances) -> Result<Operator> {
    Ok(herm_eig(a, tol)?.reconstruct_with(f))
}

/// `e^{itD}` through the eigendecomposition of `D`.
pub fn expi(d: &Operator, t: f64, tol: &Tolerances) -> Result<Operator> {
    let e = herm_eig(d, tol)?;
    Ok(expi_from_eig(&e, t))
}

pub fn expi_from_eig(e: &EigenDecomposition, t: f64) -> Operator {
    e.reconstruct_with(|l| Complex64::from_polar(1.0, t * l))
}

/// Eigenvalues of the smaller Gram matrix (`A*A` or `AA*`), clamped at zero.
fn gram_spectrum(a: &Operator) -> Vec<f64> {
    let tol = Tolerances::default();
    let gram = if a.cols() <= a.rows() { &a.adjoint() * a } else { a * &a.adjoint() };
    let gram = gram.symmetrize();
    match herm_eig(&gram, &tol) {
        Ok(e) => e.eigenvalues.into_iter().map(|l| l.max(0.0)).collect(),
        // A Gram matrix of finite entries is Hermitian and Jacobi converges on it;
        // fall back to a looser sweep cap just in case.
        Err(_) => {
            let mut loose = tol.clone();
            loose.eig_max_sweeps = 1000;
            loose.eig_offdiag = 1e-12;
            herm_eig(&gram, &loose)
                .expect("Gram matrix eigendecomposition")
                .eigenvalues
                .into_iter()
                .map(|l| l.max(0.0))
                .collect()
        }
    }
}

/// Operator norm (largest singular value).
pub fn op_norm(a: &Operator) -> f64 {
    if a.rows() == 0 || a.cols() == 0 {
        return 0.0;
    }
    if a.max_abs() == 0.0 {
        return 0.0;
    }
    if a.rows() == 1 || a.cols() == 1 {
        return a.frobenius_norm();
    }
    gram_spectrum(a).last().copied().unwrap_or(0.0).sqrt()
}

/// Trace norm (sum of singular values).
pub fn trace_norm(a: &Operator) -> f64 {
    if a.rows() == 0 || a.cols() == 0 {
        return 0.0;
    }
    gram_spectrum(a).into_iter().map(f64::sqrt).sum()
}

/// Operator norm of the compression `A[rows, cols]`, with cheap exits:
/// the largest entry bounds it below and the Frobenius norm above.
pub fn block_norm(a: &Operator, rows: &[usize], cols: &[usize]) -> f64 {
    if rows.is_empty() || cols.is_empty() {
        return 0.0;
    }
    op_norm(&a.select(rows, cols))
}

/// Whether `‖A[rows, cols]‖ > threshold`, avoiding an eigensolve when possible.
pub fn block_exceeds(a: &Operator, rows: &[usize], cols: &[usize], threshold: f64) -> bool {
    if rows.is_empty() || cols.is_empty() {
        return false;
    }
    let mut fro = 0.0;
    for &i in rows {
        for &j in cols {
            let v = a.get(i, j).norm();
            if v > threshold {
                return true;
            }
            fro += v * v;
        }
    }
    if fro.sqrt() <= threshold {
        return false;
    }
    block_norm(a, rows, cols) > threshold
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::CounterRng;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn projection_examples() {
        let a = Operator::from_diag(&[-1.0, 0.0, 2.0]);
        let p = spectral_projection(&a, &Interval::at_most(0.0), &tol()).unwrap();
        assert!(p.max_abs_diff(&Operator::from_diag(&[1.0, 1.0, 0.0])) < 1e-15);
        let q = spectral_projection(&a, &Interval::above(2.0), &tol()).unwrap();
        assert_eq!(q.max_abs(), 0.0);
    }

    #[test]
    fn projection_onto_negative_pauli_x_eigenvector() {
        let p = spectral_projection(&Operator::pauli_x(), &Interval::at_most(0.0), &tol()).unwrap();
        let expect = Operator::from_real_rows(&[vec![0.5, -0.5], vec![-0.5, 0.5]]);
        assert!(p.max_abs_diff(&expect) < 1e-12);
    }

    #[test]
    fn snapping_respects_open_endpoint() {
        let a = Operator::from_diag(&[0.0, 2.0 + 1e-14]);
        let q = spectral_projection(&a, &Interval::above(2.0), &tol()).unwrap();
        assert_eq!(q.max_abs(), 0.0);
        let r = spectral_projection(&a, &Interval::at_least(2.0), &tol()).unwrap();
        assert!((r.get(1, 1).re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn norms_on_simple_matrices() {
        assert!((op_norm(&Operator::pauli_x()) - 1.0).abs() < 1e-15);
        assert!((op_norm(&Operator::from_diag(&[-3.0, 2.0])) - 3.0).abs() < 1e-15);
        assert!((trace_norm(&Operator::from_diag(&[1.0, -1.0])) - 2.0).abs() < 1e-15);
        assert!((trace_norm(&Operator::matrix_unit(2, 0, 1)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn expi_of_scalar_phase() {
        let d = Operator::from_diag(&[std::f64::consts::PI, 0.0]);
        let u = expi(&d, 1.0, &tol()).unwrap();
        assert!(u.max_abs_diff(&Operator::from_diag(&[-1.0, 1.0])) < 1e-12);
        let id = expi(&d, 0.0, &tol()).unwrap();
        assert!(id.max_abs_diff(&Operator::identity(2)) < 1e-15);
    }

    #[test]
    fn herm_fun_identity_and_constant() {
        let mut rng = CounterRng::new(3);
        let a = rng.gaussian_hermitian(5);
        let same = herm_fun(&a, |x| Complex64::new(x, 0.0), &tol()).unwrap();
        assert!(same.max_abs_diff(&a) < 1e-10);
        let one = herm_fun(&a, |_| Complex64::new(1.0, 0.0), &tol()).unwrap();
        assert!(one.max_abs_diff(&Operator::identity(5)) < 1e-12);
    }

    #[test]
    fn block_exceeds_agrees_with_norm() {
        let mut rng = CounterRng::new(5);
        let a = rng.gaussian_operator(6, 6);
        let rows = [0, 2, 3];
        let cols = [1, 4];
        let n = block_norm(&a, &rows, &cols);
        assert!(block_exceeds(&a, &rows, &cols, 0.99 * n));
        assert!(!block_exceeds(&a, &rows, &cols, 1.01 * n));
    }
}
