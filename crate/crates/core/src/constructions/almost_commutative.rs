use serde::Serialize;

use crate::algebra::{spread, State};
use crate::coarse::{support_prop, witness_radius, RepresentationOverMetric};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{herm_eig, op_norm, Operator};
use crate::metric::MetricSpace;
use crate::rng::CounterRng;

/// `C(X) ⊗ M_k` over a finite base, with the canonical seminorm
/// `max(sup_x Spread(F(x)), Lip(F))`. Operators act on `C^{|X|} ⊗ C^k` with
/// basis index `x*k + i`.
#[derive(Debug, Clone)]
pub struct ACSpace {
    pub base: MetricSpace,
    pub fiber_dim: usize,
    /// Comparability constant carried through the sandwich checks.
    pub c: f64,
}

impl ACSpace {
    pub fn new(base: MetricSpace, fiber_dim: usize) -> Result<Self> {
        if fiber_dim == 0 || base.is_empty() {
            return Err(Error::InvalidArgument("base and fiber must be nonempty".into()));
        }
        Ok(Self { base, fiber_dim, c: 1.0 })
    }

    pub fn element_dim(&self) -> usize {
        self.base.len() * self.fiber_dim
    }

    /// Fiber diameter: 2 for a genuine matrix fiber, 0 for `k = 1`.
    pub fn fiber_diameter(&self) -> f64 {
        if self.fiber_dim >= 2 {
            2.0
        } else {
            0.0
        }
    }

    /// Diagonal blocks `F(x)` of a fiberwise element.
    pub fn fibers_of(&self, a: &Operator) -> Result<Vec<Operator>> {
        let (n, k) = (self.base.len(), self.fiber_dim);
        if a.rows() != n * k || a.cols() != n * k {
            return Err(Error::DimensionMismatch(format!("element is {}x{}, expected {}", a.rows(), a.cols(), n * k)));
        }
        Ok((0..n)
            .map(|x| {
                let idx: Vec<usize> = (x * k..(x + 1) * k).collect();
                a.select(&idx, &idx)
            })
            .collect())
    }

    pub fn from_fibers(&self, fibers: &[Operator]) -> Operator {
        Operator::direct_sum(fibers)
    }

    /// `f ⊗ 1`.
    pub fn scalar_function(&self, f: &[f64]) -> Operator {
        let fibers: Vec<Operator> = f.iter().map(|v| Operator::identity(self.fiber_dim).scale(*v)).collect();
        self.from_fibers(&fibers)
    }

    pub(crate) fn sample_raw(&self, rng: &mut CounterRng) -> Operator {
        let f = crate::algebra::random_lipschitz(&self.base, rng);
        let w = rng.uniform();
        let fibers: Vec<Operator> = f
            .iter()
            .map(|v| {
                let g = rng.gaussian_hermitian(self.fiber_dim).scale(w);
                g.shift(*v)
            })
            .collect();
        self.from_fibers(&fibers)
    }
}

/// `max( max_x Spread(F(x)), max_{x≠y} ‖F(x) − F(y)‖ / d(x, y) )`.
pub fn ac_seminorm(fibers: &[Operator], space: &ACSpace, tol: &Tolerances) -> Result<f64> {
    if fibers.len() != space.base.len() {
        return Err(Error::DimensionMismatch(format!("{} fibers for {} points", fibers.len(), space.base.len())));
    }
    let mut v: f64 = 0.0;
    for f in fibers {
        v = v.max(spread(f, tol)?);
    }
    for x in 0..fibers.len() {
        for y in (x + 1)..fibers.len() {
            v = v.max(op_norm(&(&fibers[x] - &fibers[y])) / space.base.dist(x, y));
        }
    }
    Ok(v)
}

/// `(T_ij)[x][y] = ⟨x ⊗ e_i| T |y ⊗ e_j⟩`.
pub fn ac_block(t: &Operator, space: &ACSpace, i: usize, j: usize) -> Result<Operator> {
    let (n, k) = (space.base.len(), space.fiber_dim);
    for idx in [i, j] {
        if idx >= k {
            return Err(Error::IndexOutOfRange { index: idx, len: k });
        }
    }
    if t.rows() != n * k || t.cols() != n * k {
        return Err(Error::DimensionMismatch(format!("operator is {}x{}, expected {}", t.rows(), t.cols(), n * k)));
    }
    let rows: Vec<usize> = (0..n).map(|x| x * k + i).collect();
    let cols: Vec<usize> = (0..n).map(|y| y * k + j).collect();
    Ok(t.select(&rows, &cols))
}

/// Inverse of [`ac_block`]: `blocks[i][j]` is `T_ij`.
pub fn ac_assemble(blocks: &[Vec<Operator>], space: &ACSpace) -> Operator {
    let (n, k) = (space.base.len(), space.fiber_dim);
    let mut t = Operator::zeros(n * k, n * k);
    for (i, row) in blocks.iter().enumerate() {
        for (j, b) in row.iter().enumerate() {
            for x in 0..n {
                for y in 0..n {
                    t[(x * k + i, y * k + j)] = b.get(x, y);
                }
            }
        }
    }
    t.clear_flag()
}

#[derive(Debug, Clone, Serialize)]
pub struct ACSandwichReport {
    /// `max_ij prop(T_ij)`.
    pub block_prop: f64,
    pub fiber_diameter: f64,
    pub c: f64,
    /// Largest violation radius found among the witnesses.
    pub witness_lower: f64,
    pub witnesses: usize,
    /// `C · (P + R_0)`.
    pub upper_limit: f64,
    pub upper_ok: bool,
    /// `P ≤ C · witness_lower`.
    pub lower_ok: bool,
    pub round_trip_exact: bool,
}

impl ACSandwichReport {
    pub fn ok(&self) -> bool {
        self.upper_ok && self.lower_ok && self.round_trip_exact
    }
}

/// Checks the sandwich `P ≤ C·prop(T)` and `prop(T) ≤ C·(P + R_0)` with
/// `P = max_ij prop(T_ij)` against witnesses from the seminorm's unit ball:
/// `d(·, x) ⊗ 1`, `d(·, x) ⊗ 1 + 1 ⊗ b` with `Spread(b) = 1`, and `samples`
/// random elements.
pub fn ac_prop_sandwich(
    t: &Operator,
    space: &ACSpace,
    samples: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<ACSandwichReport> {
    let k = space.fiber_dim;
    let simple = RepresentationOverMetric::simple(space.base.clone());
    let mut blocks = Vec::with_capacity(k);
    let mut p: f64 = 0.0;
    for i in 0..k {
        let mut row = Vec::with_capacity(k);
        for j in 0..k {
            let b = ac_block(t, space, i, j)?;
            p = p.max(support_prop(&b, &simple, tol)?);
            row.push(b);
        }
        blocks.push(row);
    }
    let round_trip_exact = ac_assemble(&blocks, space).data() == t.data();

    let l = crate::algebra::Seminorm::AlmostCommutative(space.clone());
    let fiber = crate::algebra::Seminorm::Spread { dim: k };
    let mut rng = CounterRng::new(seed);
    let mut witnesses: Vec<Operator> = Vec::new();
    for x in 0..space.base.len() {
        let f = space.base.distance_function(x);
        let base = space.scalar_function(&f);
        witnesses.push(base.clone());
        if k >= 2 {
            let b = fiber.sample_unit(&mut rng, tol);
            let fibers: Vec<Operator> = f.iter().map(|v| b.shift(*v)).collect();
            witnesses.push(space.from_fibers(&fibers));
        }
    }
    for _ in 0..samples {
        witnesses.push(l.sample_unit(&mut rng, tol));
    }
    let mut lower: f64 = 0.0;
    for a in &witnesses {
        lower = lower.max(witness_radius(t, a, tol)?);
    }
    let scale = space.base.scale().max(1.0);
    let upper_limit = space.c * (p + space.fiber_diameter());
    Ok(ACSandwichReport {
        block_prop: p,
        fiber_diameter: space.fiber_diameter(),
        c: space.c,
        witness_lower: lower,
        witnesses: witnesses.len(),
        upper_limit,
        upper_ok: lower <= upper_limit + 1e-9 * scale,
        lower_ok: p <= space.c * lower + 1e-9 * scale,
        round_trip_exact,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CoronaReport {
    pub unital: bool,
    /// Smallest eigenvalue seen when applying the maps (and their 2x2
    /// amplifications) to positive inputs.
    pub min_eigenvalue_phi: f64,
    pub min_eigenvalue_psi: f64,
    pub completely_positive: bool,
    /// `max |φ̄(ψ̄(g)) − g|` over the samples.
    pub left_inverse_defect: f64,
    /// `(K, sup_{x>K} ‖(ψ̄φ̄F − F)(x)‖, sup_{x>K} ‖G(x)‖)` for `F = f⊗1 + G`
    /// with fiberwise traceless, decaying `G`.
    pub tail_curve: Vec<(usize, f64, f64)>,
    pub tail_matches: bool,
}

impl CoronaReport {
    pub fn ok(&self) -> bool {
        self.unital && self.completely_positive && self.left_inverse_defect <= 1e-12 && self.tail_matches
    }
}

/// `φ̄(F)(x) = τ(F(x))`.
pub fn corona_phi(fibers: &[Operator], tau: &State) -> Result<Vec<f64>> {
    fibers.iter().map(|f| tau.expect(f)).collect()
}

/// Checks the maps `φ̄ = id ⊗ τ` and `ψ̄(f) = f ⊗ 1` between `C(X) ⊗ M_k` and `C(X)`.
pub fn corona_maps_check(
    space: &ACSpace,
    tau: &State,
    samples: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<CoronaReport> {
    let tau = tau.validated(tol).map_err(|e| Error::NotAState(e.to_string()))?;
    let k = space.fiber_dim;
    if tau.dim() != k {
        return Err(Error::NotAState(format!("state on M_{} for fiber M_{k}", tau.dim())));
    }
    let n = space.base.len();
    let mut rng = CounterRng::new(seed);

    let ones = vec![Operator::identity(k); n];
    let unital = corona_phi(&ones, &tau)?.iter().all(|v| (v - 1.0).abs() <= 1e-12)
        && space.scalar_function(&vec![1.0; n]) == Operator::identity(n * k);

    let (mut min_phi, mut min_psi) = (f64::INFINITY, f64::INFINITY);
    for _ in 0..samples {
        for level in [1usize, 2] {
            // positive element of M_level(C(X) ⊗ M_k): B*B at every point
            let mut amplified = Operator::zeros(level, level);
            let mut worst_phi = f64::INFINITY;
            for _x in 0..n {
                let b = rng.gaussian_operator(level * k, level * k);
                let p = (&b.adjoint() * &b).symmetrize();
                for r in 0..level {
                    for c in 0..level {
                        let idx_r: Vec<usize> = (r * k..(r + 1) * k).collect();
                        let idx_c: Vec<usize> = (c * k..(c + 1) * k).collect();
                        let block = p.select(&idx_r, &idx_c);
                        amplified[(r, c)] = trace_against(&tau, &block);
                    }
                }
                let m = herm_eig(&amplified.symmetrize(), tol)?.min_eigenvalue();
                worst_phi = worst_phi.min(m / (1.0 + op_norm(&p)));
            }
            min_phi = min_phi.min(worst_phi);
            // ψ̄ ⊗ id on a positive level×level matrix of functions
            let g = rng.gaussian_operator(level, level);
            let q = (&g.adjoint() * &g).symmetrize();
            let lifted = q.kron(&Operator::identity(k));
            let m = herm_eig(&lifted.symmetrize(), tol)?.min_eigenvalue();
            min_psi = min_psi.min(m / (1.0 + op_norm(&q)));
        }
    }
    let completely_positive = min_phi >= -1e-12 && min_psi >= -1e-12;

    let mut left_inverse_defect: f64 = 0.0;
    for _ in 0..samples.max(1) {
        let g: Vec<f64> = (0..n).map(|_| rng.normal()).collect();
        let back = corona_phi(&space.fibers_of(&space.scalar_function(&g))?, &tau)?;
        for (a, b) in back.iter().zip(&g) {
            left_inverse_defect = left_inverse_defect.max((a - b).abs());
        }
    }

    // F = f⊗1 + G with τ(G(x)) = 0 and ‖G(x)‖ decaying like 1/(1+x)
    let f: Vec<f64> = (0..n).map(|_| rng.normal()).collect();
    let traceless = traceless_for(&tau, &mut rng)?;
    let g_norm = op_norm(&traceless);
    let fibers: Vec<Operator> = (0..n).map(|x| traceless.scale(1.0 / (1.0 + x as f64)).shift(f[x])).collect();
    let back = space.scalar_function(&corona_phi(&fibers, &tau)?);
    let diff = space.fibers_of(&(&back - &space.from_fibers(&fibers)))?;
    let mut tail_curve = Vec::new();
    let mut tail_matches = true;
    for cut in 0..n {
        let d = diff[cut..].iter().map(op_norm).fold(0.0, f64::max);
        let g = (cut..n).map(|x| g_norm / (1.0 + x as f64)).fold(0.0, f64::max);
        tail_matches &= (d - g).abs() <= 1e-10 * (1.0 + g);
        tail_curve.push((cut, d, g));
    }
    Ok(CoronaReport {
        unital,
        min_eigenvalue_phi: min_phi,
        min_eigenvalue_psi: min_psi,
        completely_positive,
        left_inverse_defect,
        tail_curve,
        tail_matches,
    })
}

fn trace_against(tau: &State, block: &Operator) -> num_complex::Complex64 {
    let rho = tau.density();
    let k = rho.rows();
    let mut s = num_complex::Complex64::new(0.0, 0.0);
    for i in 0..k {
        for j in 0..k {
            s += rho.get(i, j) * block.get(j, i);
        }
    }
    s
}

/// A Hermitian fiber element with `τ(a) = 0`.
fn traceless_for(tau: &State, rng: &mut CounterRng) -> Result<Operator> {
    let a = rng.gaussian_hermitian(tau.dim());
    let t = tau.expect(&a)?;
    Ok(a.shift(-t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn space(n: usize, k: usize) -> ACSpace {
        ACSpace::new(MetricSpace::integer_interval(0, n as i64 - 1), k).unwrap()
    }

    #[test]
    fn seminorm_examples() {
        let s = space(3, 2);
        let c = vec![Operator::identity(2).scale(3.0); 3];
        assert_eq!(ac_seminorm(&c, &s, &tol()).unwrap(), 0.0);
        let f = [0.0, 2.0, 3.0];
        let fibers: Vec<Operator> = f.iter().map(|v| Operator::identity(2).scale(*v)).collect();
        assert_eq!(ac_seminorm(&fibers, &s, &tol()).unwrap(), 2.0);
        let z = vec![Operator::pauli_z(); 3];
        assert_eq!(ac_seminorm(&z, &s, &tol()).unwrap(), 1.0);
    }

    #[test]
    fn block_examples() {
        let s = space(3, 2);
        let a = Operator::matrix_unit(3, 0, 2);
        let t = a.kron(&Operator::identity(2));
        assert_eq!(ac_block(&t, &s, 0, 0).unwrap(), a);
        assert_eq!(ac_block(&t, &s, 1, 0).unwrap(), Operator::zeros(3, 3));
        let u = Operator::identity(3).kron(&Operator::matrix_unit(2, 0, 1));
        assert_eq!(ac_block(&u, &s, 0, 1).unwrap(), Operator::identity(3));
        assert!(matches!(ac_block(&u, &s, 2, 0), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn sandwich_examples() {
        let s = ACSpace::new(MetricSpace::integer_interval(0, 4), 2).unwrap();
        let a = Operator::matrix_unit(5, 0, 3);
        let t = a.kron(&Operator::identity(2));
        let r = ac_prop_sandwich(&t, &s, 10, 1, &tol()).unwrap();
        assert_eq!(r.block_prop, 3.0);
        assert!(r.ok());
        assert!(r.witness_lower <= 5.0 + 1e-9);

        let d = Operator::from_diag(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0]);
        let r = ac_prop_sandwich(&d, &s, 10, 2, &tol()).unwrap();
        assert_eq!(r.block_prop, 0.0);
        assert!(r.ok() && r.witness_lower <= 2.0 + 1e-9, "{r:?}");

        let u = Operator::identity(5).kron(&Operator::pauli_x());
        let r = ac_prop_sandwich(&u, &s, 10, 3, &tol()).unwrap();
        assert_eq!(r.block_prop, 0.0);
        assert!(r.ok());
    }

    #[test]
    fn corona_examples() {
        let s = space(6, 2);
        let tau = State::Density { block: 0, density: Operator::from_diag(&[0.5, 0.5]) };
        let r = corona_maps_check(&s, &tau, 5, 4, &tol()).unwrap();
        assert!(r.ok(), "{r:?}");

        // f ⊗ a with τ(a) = 0 is sent to zero
        let f = [1.0, -2.0, 0.5, 0.0, 3.0, 1.0];
        let fibers: Vec<Operator> = f.iter().map(|v| Operator::pauli_z().scale(*v)).collect();
        let phi = corona_phi(&fibers, &tau).unwrap();
        assert!(phi.iter().all(|v| *v == 0.0));
        let fx = space(6, 2).from_fibers(&fibers);
        assert_eq!(op_norm(&fx), 3.0);

        let bad = State::Density { block: 0, density: Operator::from_fn(2, 2, |_, _| Complex64::new(1.0, 0.0)) };
        assert!(matches!(corona_maps_check(&s, &bad, 1, 1, &tol()), Err(Error::NotAState(_))));
    }
}
