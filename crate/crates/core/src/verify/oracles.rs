//! Reference computations and instance generators used by the acceptance
//! checks. Oracles here deliberately avoid the code paths they are compared
//! against.

use num_complex::Complex64;

use crate::config::Tolerances;
use crate::linalg::{herm_eig, Operator};
use crate::metric::MetricSpace;
use crate::rng::CounterRng;

/// Random metric with integer distances on `n` points: integer points on a
/// line, ℓ¹ points in the plane, or shortest paths in a weighted graph.
pub fn random_integer_metric(rng: &mut CounterRng, n: usize) -> MetricSpace {
    let tol = Tolerances::default();
    let dist = match rng.below(3) {
        0 => {
            let mut xs: Vec<i64> = Vec::with_capacity(n);
            let mut cur = 0i64;
            for _ in 0..n {
                xs.push(cur);
                cur += 1 + rng.below(4) as i64;
            }
            grid_dist(&xs.iter().map(|&x| (x, 0)).collect::<Vec<_>>())
        }
        1 => {
            let mut pts: Vec<(i64, i64)> = Vec::with_capacity(n);
            while pts.len() < n {
                let p = (rng.below(8) as i64, rng.below(8) as i64);
                if !pts.contains(&p) {
                    pts.push(p);
                }
            }
            grid_dist(&pts)
        }
        _ => graph_metric(rng, n),
    };
    MetricSpace::new(dist, None, &tol).expect("generated metric is valid")
}

fn grid_dist(pts: &[(i64, i64)]) -> Vec<Vec<f64>> {
    pts.iter().map(|a| pts.iter().map(|b| ((a.0 - b.0).abs() + (a.1 - b.1).abs()) as f64).collect()).collect()
}

/// Floyd–Warshall on a random connected graph with weights in `1..=4`.
fn graph_metric(rng: &mut CounterRng, n: usize) -> Vec<Vec<f64>> {
    let inf = f64::INFINITY;
    let mut d = vec![vec![inf; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for i in 1..n {
        let j = rng.below(i);
        let w = (1 + rng.below(4)) as f64;
        d[i][j] = w;
        d[j][i] = w;
    }
    for _ in 0..n {
        let (i, j) = (rng.below(n), rng.below(n));
        if i != j {
            let w = (1 + rng.below(4)) as f64;
            d[i][j] = d[i][j].min(w);
            d[j][i] = d[i][j];
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

/// Random matrix whose entries are nonzero with probability `density`.
pub fn random_sparse(rng: &mut CounterRng, dim: usize, density: f64) -> Operator {
    let mut t = Operator::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            if rng.bernoulli(density) {
                t.set(i, j, rng.complex_normal());
            }
        }
    }
    t
}

/// Matrix supported on the band `|i − j| ≤ width`.
pub fn random_banded(rng: &mut CounterRng, dim: usize, width: usize) -> Operator {
    Operator::from_fn(
        dim,
        dim,
        |i, j| if i.abs_diff(j) <= width { rng.complex_normal() } else { Complex64::new(0.0, 0.0) },
    )
}

/// Transport cost from a point mass: all of `ν` has to travel from `x0`.
pub fn point_mass_transport(m: &MetricSpace, x0: usize, nu: &[f64]) -> f64 {
    nu.iter().enumerate().map(|(y, w)| w * m.dist(x0, y)).sum()
}

/// `Σ |λ_i(Δ)|` from the eigenvalues of the Hermitian matrix `Δ`.
pub fn eigen_trace_norm(delta: &Operator, tol: &Tolerances) -> f64 {
    herm_eig(&delta.symmetrize(), tol).map(|e| e.eigenvalues.iter().map(|l| l.abs()).sum()).unwrap_or(f64::NAN)
}

/// `sin(x)/x` applied to `D` through its eigendecomposition.
pub fn sinc_of(d: &Operator, tol: &Tolerances) -> Operator {
    herm_eig(d, tol)
        .expect("Hermitian input")
        .reconstruct_with(|l| Complex64::new(if l == 0.0 { 1.0 } else { l.sin() / l }, 0.0))
}

/// `‖[e^{itσ_z}, σ_x]‖ = 2|sin t|`.
pub fn qubit_evolution(t: f64) -> f64 {
    2.0 * t.sin().abs()
}

/// Mean-value bound for `sin ∘ log` on `x > K`: `R · max |cos(log ξ)| / ξ`
/// over `ξ ∈ [K + 1 − R, N]`, maximised on a grid of step `h` with the
/// derivative's own Lipschitz constant added as margin.
pub fn sin_log_mean_value_bound(r: f64, k: usize, n: usize) -> f64 {
    let lo = (k as f64 + 1.0 - r).max(1.0);
    let hi = n as f64;
    let h = 0.05;
    let mut best: f64 = 0.0;
    let mut xi = lo;
    while xi <= hi {
        best = best.max(xi.ln().cos().abs() / xi);
        xi += h;
    }
    // |(cos(log ξ)/ξ)'| ≤ 2/ξ²
    r * (best + h * 2.0 / (lo * lo))
}

/// A compact component of a union as seen by the grid oracle.
#[derive(Debug, Clone)]
pub enum GridComponent {
    /// `M_2` with half-spread seminorm, anchored at `|0⟩⟨0|`.
    Qubit,
    /// Three points with the given distances, anchored at the first point.
    Classical(MetricSpace),
}

impl GridComponent {
    fn params(&self) -> usize {
        match self {
            GridComponent::Qubit => 2,
            GridComponent::Classical(m) => m.len(),
        }
    }

    fn seminorm(&self, v: &[f64]) -> f64 {
        match self {
            GridComponent::Qubit => (v[0] - v[1]).abs() / 2.0,
            GridComponent::Classical(m) => {
                let mut l: f64 = 0.0;
                for x in 0..v.len() {
                    for y in (x + 1)..v.len() {
                        l = l.max((v[x] - v[y]).abs() / m.dist(x, y));
                    }
                }
                l
            }
        }
    }

    fn anchor_value(&self, v: &[f64]) -> f64 {
        v[0]
    }
}

/// `sup |φ_i(a_i) − φ_{i+1}(a_{i+1})| / L(a)` over diagonal elements of the
/// two components whose entries lie on `grid`; every other component holds
/// the neighbouring anchor value as a scalar, so contributes nothing.
pub fn union_anchor_grid(comps: &[GridComponent], gaps: &[f64], i: usize, grid: &[f64]) -> f64 {
    let (a, b) = (&comps[i], &comps[i + 1]);
    let (pa, pb) = (a.params(), b.params());
    let total = pa + pb;
    let g = grid.len();
    let mut idx = vec![0usize; total];
    let mut best: f64 = 0.0;
    loop {
        let va: Vec<f64> = idx[..pa].iter().map(|&k| grid[k]).collect();
        let vb: Vec<f64> = idx[pa..].iter().map(|&k| grid[k]).collect();
        let jump = (a.anchor_value(&va) - b.anchor_value(&vb)).abs();
        let l = a.seminorm(&va).max(b.seminorm(&vb)).max(jump / gaps[i]);
        if l > 0.0 {
            best = best.max(jump / l);
        }
        let mut p = 0;
        while p < total {
            idx[p] += 1;
            if idx[p] < g {
                break;
            }
            idx[p] = 0;
            p += 1;
        }
        if p == total {
            break;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_metrics_are_valid_and_integral() {
        let mut rng = CounterRng::new(3);
        for n in 1..10 {
            let m = random_integer_metric(&mut rng, n);
            assert_eq!(m.len(), n);
            assert!(m.matrix().iter().flatten().all(|d| d.fract() == 0.0));
        }
    }

    #[test]
    fn grid_oracle_on_two_qubits() {
        let v =
            union_anchor_grid(&[GridComponent::Qubit, GridComponent::Qubit], &[1.5], 0, &[-1.5, -0.5, 0.0, 0.5, 1.5]);
        assert_eq!(v, 1.5);
    }

    #[test]
    fn mean_value_bound_dominates_samples() {
        let b = sin_log_mean_value_bound(10.0, 10_000, 20_000);
        assert!(b > 9.7e-4 && b < 1e-3);
    }
}
