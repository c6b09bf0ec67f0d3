//! Numerical tolerances shared by every module.
//!
//! All threshold comparisons in the library take a [`Tolerances`] record so a
//! single `--tol-scale` flag can loosen or tighten a whole run consistently.

use serde::{Deserialize, Serialize};

/// Tolerance record with documented defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Hermitian test: `max |A_ij - conj(A_ji)| <= hermitian * (1 + max |A_ij|)`.
    pub hermitian: f64,
    /// Jacobi stops once the off-diagonal Frobenius mass is below `eig_offdiag * ||A||_F`.
    pub eig_offdiag: f64,
    /// Maximum number of cyclic Jacobi sweeps.
    pub eig_max_sweeps: usize,
    /// Eigenvalues within `snap * (1 + ||A||)` of an interval endpoint are snapped onto it.
    pub snap: f64,
    /// A block counts as nonzero when its norm exceeds `support_zero * ||T||`.
    pub support_zero: f64,
    /// Slack on the triangle inequality, relative to the largest distance.
    pub metric_triangle: f64,
    /// Trace and positivity slack for density matrices and probability vectors.
    pub state: f64,
    /// Phase-one infeasibility threshold and pivot magnitude floor of the simplex solver.
    pub lp_feasibility: f64,
    pub lp_pivot: f64,
    /// Admissible primal/dual gap of the transport programs, relative to the metric scale.
    pub duality_gap: f64,
    /// Constant-factor allowance applied to the cutting bounds (partition normalisation).
    pub cut_slack: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermitian: 1e-12,
            eig_offdiag: 1e-14,
            eig_max_sweeps: 100,
            snap: 1e-12,
            support_zero: 1e-12,
            metric_triangle: 1e-12,
            state: 1e-12,
            lp_feasibility: 1e-9,
            lp_pivot: 1e-11,
            duality_gap: 1e-7,
            cut_slack: 4.0,
        }
    }
}

impl Tolerances {
    /// Multiplies every numerical tolerance by `factor`. Sweep caps and the
    /// cutting slack are structural and left alone.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            hermitian: self.hermitian * factor,
            eig_offdiag: self.eig_offdiag * factor,
            eig_max_sweeps: self.eig_max_sweeps,
            snap: self.snap * factor,
            support_zero: self.support_zero * factor,
            metric_triangle: self.metric_triangle * factor,
            state: self.state * factor,
            lp_feasibility: self.lp_feasibility * factor,
            lp_pivot: self.lp_pivot * factor,
            duality_gap: self.duality_gap * factor,
            cut_slack: self.cut_slack,
        }
    }
}
