//! Cyclic Jacobi eigensolver for dense Hermitian matrices.

use num_complex::Complex64;

use super::Operator;
use crate::config::Tolerances;
use crate::error::{Error, Result};

/// `A = U diag(eigenvalues) U*`, eigenvalues ascending, eigenvectors in the columns of `U`.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Operator,
}

impl EigenDecomposition {
    /// Column `k` of the eigenvector matrix.
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        self.eigenvectors.column(k)
    }

    /// Rebuilds `U f(Λ) U*`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> Complex64) -> Operator {
        let u = &self.eigenvectors;
        let n = u.rows();
        let fl: Vec<Complex64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let real = fl.iter().all(|z| z.im == 0.0);
        let m = Operator::from_fn(n, n, |i, j| {
            let mut s = Complex64::new(0.0, 0.0);
            for k in 0..n {
                if fl[k] != Complex64::new(0.0, 0.0) {
                    s += u.get(i, k) * fl[k] * u.get(j, k).conj();
                }
            }
            s
        });
        if real {
            m.symmetrize()
        } else {
            m
        }
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Each rotation first removes the phase of `a_pq` and then applies the real
/// symmetric Jacobi rotation, so the result is deterministic for a given input.
pub fn herm_eig(a: &Operator, tol: &Tolerances) -> Result<EigenDecomposition> {
    if !a.is_hermitian(tol) {
        return Err(Error::NonHermitianInput { defect: a.hermitian_defect() });
    }
    let n = a.rows();
    let mut m: Vec<Complex64> = a.symmetrize().data().to_vec();
    let mut u = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        u[i * n + i] = Complex64::new(1.0, 0.0);
    }
    let norm_f = a.frobenius_norm();
    let threshold = tol.eig_offdiag * norm_f;

    let off = |m: &[Complex64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[i * n + j].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while off(&m) > threshold {
        if sweeps == tol.eig_max_sweeps {
            return Err(Error::ConvergenceFailure { sweeps });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                let r = apq.norm();
                if r <= f64::MIN_POSITIVE {
                    continue;
                }
                let app = m[p * n + p].re;
                let aqq = m[q * n + q].re;
                // skip entries already negligible against both diagonal entries
                if r < 1e-18 * (app.abs() + aqq.abs()).max(norm_f) {
                    m[p * n + q] = Complex64::new(0.0, 0.0);
                    m[q * n + p] = Complex64::new(0.0, 0.0);
                    continue;
                }
                let phase = apq / r;
                let theta = (aqq - app) / (2.0 * r);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // V restricted to (p, q): [[c, s], [-s e^{-iφ}, c e^{-iφ}]]
                let vpp = Complex64::new(c, 0.0);
                let vpq = Complex64::new(s, 0.0);
                let vqp = -phase.conj() * s;
                let vqq = phase.conj() * c;
                // A <- A V
                for k in 0..n {
                    let akp = m[k * n + p];
                    let akq = m[k * n + q];
                    m[k * n + p] = akp * vpp + akq * vqp;
                    m[k * n + q] = akp * vpq + akq * vqq;
                }
                // A <- V* A
                for k in 0..n {
                    let apk = m[p * n + k];
                    let aqk = m[q * n + k];
                    m[p * n + k] = vpp.conj() * apk + vqp.conj() * aqk;
                    m[q * n + k] = vpq.conj() * apk + vqq.conj() * aqk;
                }
                m[p * n + q] = Complex64::new(0.0, 0.0);
                m[q * n + p] = Complex64::new(0.0, 0.0);
                m[p * n + p].im = 0.0;
                m[q * n + q].im = 0.0;
                // U <- U V
                for k in 0..n {
                    let ukp = u[k * n + p];
                    let ukq = u[k * n + q];
                    u[k * n + p] = ukp * vpp + ukq * vqp;
                    u[k * n + q] = ukp * vpq + ukq * vqq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m[i * n + i].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]).then(i.cmp(&j)));
    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    let eigenvectors = Operator::from_fn(n, n, |i, k| u[i * n + order[k]]);
    Ok(EigenDecomposition { eigenvalues, eigenvectors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::CounterRng;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn diagonal_input_sorted() {
        let e = herm_eig(&Operator::from_diag(&[3.0, 1.0, 2.0]), &tol()).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn pauli_x_spectrum() {
        let e = herm_eig(&Operator::pauli_x(), &tol()).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-15);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = Operator::matrix_unit(2, 0, 1);
        assert!(matches!(herm_eig(&m, &tol()), Err(Error::NonHermitianInput { .. })));
    }

    #[test]
    fn sweep_cap_reports_convergence_failure() {
        let mut t = tol();
        t.eig_max_sweeps = 0;
        let r = herm_eig(&Operator::pauli_x(), &t);
        assert!(matches!(r, Err(Error::ConvergenceFailure { sweeps: 0 })));
    }

    #[test]
    fn random_hermitian_eigenpairs() {
        let mut rng = CounterRng::new(11);
        for n in [1, 2, 6, 9] {
            let a = rng.gaussian_hermitian(n);
            let e = herm_eig(&a, &tol()).unwrap();
            let norm = a.frobenius_norm();
            for k in 0..n {
                let v = e.vector(k);
                let av = a.matvec(&v);
                let res: f64 =
                    av.iter().zip(&v).map(|(x, y)| (x - y * e.eigenvalues[k]).norm_sqr()).sum::<f64>().sqrt();
                assert!(res <= 1e-10 * norm, "residual {res}");
            }
            assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        }
    }
}
