//! Dense two-phase simplex with Bland's anti-cycling rule.
//!
//! Sized for the transport problems in this crate (a few hundred rows). The
//! tableau is stored row-major with the right-hand side in the last column.

use crate::config::Tolerances;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Eq,
    Ge,
}

/// `maximize c·x` subject to the rows and `x ≥ 0`.
#[derive(Debug, Clone, Default)]
pub struct LinearProgram {
    n_vars: usize,
    objective: Vec<f64>,
    rows: Vec<(Vec<f64>, Cmp, f64)>,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub value: f64,
    pub pivots: usize,
}

impl LinearProgram {
    pub fn new(n_vars: usize) -> Self {
        Self { n_vars, objective: vec![0.0; n_vars], rows: Vec::new() }
    }

    pub fn set_objective(&mut self, c: Vec<f64>) {
        assert_eq!(c.len(), self.n_vars);
        self.objective = c;
    }

    pub fn add_row(&mut self, coeffs: Vec<f64>, cmp: Cmp, rhs: f64) {
        assert_eq!(coeffs.len(), self.n_vars);
        self.rows.push((coeffs, cmp, rhs));
    }

    /// Sparse convenience form of [`add_row`](Self::add_row).
    pub fn add_sparse_row(&mut self, terms: &[(usize, f64)], cmp: Cmp, rhs: f64) {
        let mut coeffs = vec![0.0; self.n_vars];
        for &(j, v) in terms {
            coeffs[j] += v;
        }
        self.add_row(coeffs, cmp, rhs);
    }

    pub fn maximize(&self, tol: &Tolerances) -> Result<LpSolution> {
        Tableau::build(self).solve(self, tol)
    }
}

struct Tableau {
    width: usize,
    data: Vec<f64>,
    m: usize,
    basis: Vec<usize>,
    n_struct: usize,
    first_artificial: usize,
    pivots: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let m = lp.rows.len();
        let n = lp.n_vars;
        let n_slack = lp.rows.iter().filter(|r| r.1 != Cmp::Eq).count();
        let n_art = lp
            .rows
            .iter()
            .filter(|(_, c, b)| match c {
                Cmp::Eq => true,
                Cmp::Le => *b < 0.0,
                Cmp::Ge => *b > 0.0,
            })
            .count();
        let first_artificial = n + n_slack;
        let width = first_artificial + n_art + 1;
        let mut data = vec![0.0; (m + 1) * width];
        let mut basis = vec![0; m];
        let (mut s, mut a) = (n, first_artificial);
        for (i, (coeffs, cmp, rhs)) in lp.rows.iter().enumerate() {
            // Normalise so the right-hand side is nonnegative.
            let flip = *rhs < 0.0;
            let sign = if flip { -1.0 } else { 1.0 };
            let row = &mut data[i * width..(i + 1) * width];
            for j in 0..n {
                row[j] = sign * coeffs[j];
            }
            row[width - 1] = sign * rhs;
            let cmp = match (cmp, flip) {
                (Cmp::Le, true) => Cmp::Ge,
                (Cmp::Ge, true) => Cmp::Le,
                (c, _) => *c,
            };
            match cmp {
                Cmp::Le => {
                    row[s] = 1.0;
                    basis[i] = s;
                    s += 1;
                }
                Cmp::Ge => {
                    row[s] = -1.0;
                    s += 1;
                    row[a] = 1.0;
                    basis[i] = a;
                    a += 1;
                }
                Cmp::Eq => {
                    row[a] = 1.0;
                    basis[i] = a;
                    a += 1;
                }
            }
        }
        Self { width, data, m, basis, n_struct: n, first_artificial, pivots: 0 }
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.width + j]
    }

    fn rhs(&self, i: usize) -> f64 {
        self.at(i, self.width - 1)
    }

    /// Objective row holds reduced costs `c_j - z_j` of the maximisation.
    fn set_objective(&mut self, cost: &[f64]) {
        let (m, w) = (self.m, self.width);
        let obj = &mut self.data[m * w..(m + 1) * w];
        obj.iter_mut().for_each(|v| *v = 0.0);
        obj[..cost.len()].copy_from_slice(cost);
        for i in 0..m {
            let cb = cost.get(self.basis[i]).copied().unwrap_or(0.0);
            if cb != 0.0 {
                for j in 0..w {
                    self.data[m * w + j] -= cb * self.data[i * w + j];
                }
            }
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.width;
        let p = self.data[r * w + c];
        for j in 0..w {
            self.data[r * w + j] /= p;
        }
        self.data[r * w + c] = 1.0;
        let pivot_row: Vec<f64> = self.data[r * w..(r + 1) * w].to_vec();
        for i in 0..=self.m {
            if i == r {
                continue;
            }
            let f = self.data[i * w + c];
            if f != 0.0 {
                let row = &mut self.data[i * w..(i + 1) * w];
                for (v, pr) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pr;
                }
                row[c] = 0.0;
            }
        }
        self.basis[r] = c;
        self.pivots += 1;
    }

    /// Runs simplex iterations over columns `< active`; returns false if unbounded.
    fn iterate(&mut self, active: usize, tol: &Tolerances) -> bool {
        let eps = tol.lp_pivot;
        loop {
            let entering = (0..active).find(|&j| self.at(self.m, j) > eps);
            let Some(c) = entering else { return true };
            let mut best: Option<(f64, usize)> = None;
            for i in 0..self.m {
                let a = self.at(i, c);
                if a > eps {
                    let ratio = self.rhs(i) / a;
                    best = match best {
                        None => Some((ratio, i)),
                        Some((br, bi)) => {
                            if ratio < br - eps || (ratio <= br + eps && self.basis[i] < self.basis[bi]) {
                                Some((ratio, i))
                            } else {
                                Some((br, bi))
                            }
                        }
                    };
                }
            }
            match best {
                None => return false,
                Some((_, r)) => self.pivot(r, c),
            }
        }
    }

    fn solve(mut self, lp: &LinearProgram, tol: &Tolerances) -> Result<LpSolution> {
        let total = self.width - 1;
        if self.first_artificial < total {
            let mut phase1 = vec![0.0; total];
            for v in phase1.iter_mut().skip(self.first_artificial) {
                *v = -1.0;
            }
            self.set_objective(&phase1);
            self.iterate(total, tol);
            let infeasibility: f64 =
                (0..self.m).filter(|&i| self.basis[i] >= self.first_artificial).map(|i| self.rhs(i)).sum();
            let scale = 1.0 + lp.rows.iter().map(|r| r.2.abs()).fold(0.0, f64::max);
            if infeasibility > tol.lp_feasibility * scale {
                return Err(Error::LpInfeasible);
            }
            // Drive remaining (zero-level) artificials out; rows where that is
            // impossible are redundant and dropped.
            let mut i = 0;
            while i < self.m {
                if self.basis[i] >= self.first_artificial {
                    let col = (0..self.first_artificial).find(|&j| self.at(i, j).abs() > tol.lp_pivot);
                    match col {
                        Some(c) => self.pivot(i, c),
                        None => {
                            self.remove_row(i);
                            continue;
                        }
                    }
                }
                i += 1;
            }
            // Zero the artificial columns so they never re-enter.
            for r in 0..=self.m {
                for j in self.first_artificial..total {
                    self.data[r * self.width + j] = 0.0;
                }
            }
        }
        self.set_objective(&lp.objective);
        if !self.iterate(self.first_artificial, tol) {
            return Err(Error::LpUnbounded);
        }
        let mut x = vec![0.0; self.n_struct];
        for i in 0..self.m {
            if self.basis[i] < self.n_struct {
                x[self.basis[i]] = self.rhs(i);
            }
        }
        let value = x.iter().zip(&lp.objective).map(|(a, b)| a * b).sum();
        Ok(LpSolution { x, value, pivots: self.pivots })
    }

    fn remove_row(&mut self, r: usize) {
        let w = self.width;
        self.data.drain(r * w..(r + 1) * w);
        self.basis.remove(r);
        self.m -= 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn textbook_maximum() {
        // max 3x + 5y, x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18 → 36 at (2, 6)
        let mut lp = LinearProgram::new(2);
        lp.set_objective(vec![3.0, 5.0]);
        lp.add_row(vec![1.0, 0.0], Cmp::Le, 4.0);
        lp.add_row(vec![0.0, 2.0], Cmp::Le, 12.0);
        lp.add_row(vec![3.0, 2.0], Cmp::Le, 18.0);
        let s = lp.maximize(&tol()).unwrap();
        assert!((s.value - 36.0).abs() < 1e-12);
        assert!((s.x[0] - 2.0).abs() < 1e-12 && (s.x[1] - 6.0).abs() < 1e-12);
    }

    #[test]
    fn equalities_with_redundant_row() {
        // min x + 2y + 3z with x+y+z = 1, x+y+z = 1, z ≥ 0.25
        let mut lp = LinearProgram::new(3);
        lp.set_objective(vec![-1.0, -2.0, -3.0]);
        lp.add_row(vec![1.0, 1.0, 1.0], Cmp::Eq, 1.0);
        lp.add_row(vec![1.0, 1.0, 1.0], Cmp::Eq, 1.0);
        lp.add_row(vec![0.0, 0.0, 1.0], Cmp::Ge, 0.25);
        let s = lp.maximize(&tol()).unwrap();
        assert!((s.value + 1.5).abs() < 1e-12);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(1);
        lp.add_row(vec![1.0], Cmp::Le, 1.0);
        lp.add_row(vec![1.0], Cmp::Ge, 2.0);
        assert!(matches!(lp.maximize(&tol()), Err(Error::LpInfeasible)));

        let mut lp = LinearProgram::new(2);
        lp.set_objective(vec![1.0, 0.0]);
        lp.add_row(vec![1.0, -1.0], Cmp::Le, 1.0);
        assert!(matches!(lp.maximize(&tol()), Err(Error::LpUnbounded)));
    }

    #[test]
    fn negative_rhs_is_normalised() {
        // max -x with -x ≤ -3  (x ≥ 3) → -3
        let mut lp = LinearProgram::new(1);
        lp.set_objective(vec![-1.0]);
        lp.add_row(vec![-1.0], Cmp::Le, -3.0);
        let s = lp.maximize(&tol()).unwrap();
        assert!((s.value + 3.0).abs() < 1e-12);
    }
}
