//! Represented finite-dimensional C*-algebras, states, Lipschitz seminorms and
//! Monge–Kantorovich distances.
//!
//! Algebra elements are always handled as operators on the algebra's defining
//! representation: classical algebras act diagonally, `M_k` acts on `C^k`, a
//! coarse union acts block-diagonally (one block per component) and an
//! almost-commutative algebra acts on `C^{|X|} ⊗ C^k` with index `x*k + i`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::constructions::{ac_seminorm, union_seminorm, ACSpace, UnionSpace};
use crate::error::{Error, Result};
use crate::linalg::{herm_eig, op_norm, Operator};
use crate::lp::{Cmp, LinearProgram};
use crate::metric::{lipschitz_const, MetricSpace};
use crate::rng::CounterRng;

/// Direct sum of full matrix algebras `⊕_b M_{k_b}`, each block repeated
/// `m_b` times in the representation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepresentedAlgebra {
    pub block_dims: Vec<usize>,
    pub multiplicities: Vec<usize>,
    pub unital: bool,
}

impl RepresentedAlgebra {
    pub fn new(block_dims: Vec<usize>, multiplicities: Vec<usize>, unital: bool) -> Result<Self> {
        if block_dims.len() != multiplicities.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} blocks but {} multiplicities",
                block_dims.len(),
                multiplicities.len()
            )));
        }
        if block_dims.contains(&0) {
            return Err(Error::InvalidArgument("block dimensions must be positive".into()));
        }
        Ok(Self { block_dims, multiplicities, unital })
    }

    /// `C(X)` for `|X| = n`, acting by multiplication on `C^n`.
    pub fn classical(n: usize) -> Self {
        Self { block_dims: vec![1; n], multiplicities: vec![1; n], unital: true }
    }

    pub fn matrix(k: usize) -> Self {
        Self { block_dims: vec![k], multiplicities: vec![1], unital: true }
    }

    pub fn rep_dim(&self) -> usize {
        self.block_dims.iter().zip(&self.multiplicities).map(|(k, m)| k * m).sum()
    }

    /// Dimension of the defining (multiplicity-one) representation.
    pub fn defining_dim(&self) -> usize {
        self.block_dims.iter().sum()
    }

    /// `ρ(a)` for `a = (a_b)_b`.
    pub fn embed(&self, blocks: &[Operator]) -> Result<Operator> {
        if blocks.len() != self.block_dims.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} blocks, expected {}",
                blocks.len(),
                self.block_dims.len()
            )));
        }
        let mut copies = Vec::new();
        for ((b, &k), &m) in blocks.iter().zip(&self.block_dims).zip(&self.multiplicities) {
            if b.rows() != k || b.cols() != k {
                return Err(Error::DimensionMismatch(format!(
                    "block of size {}x{}, expected {k}x{k}",
                    b.rows(),
                    b.cols()
                )));
            }
            copies.extend(std::iter::repeat_n(b.clone(), m));
        }
        Ok(Operator::direct_sum(&copies))
    }

    /// Splits an element of the defining representation into its blocks.
    pub fn blocks_of(&self, a: &Operator) -> Result<Vec<Operator>> {
        let n = self.defining_dim();
        if a.rows() != n || a.cols() != n {
            return Err(Error::DimensionMismatch(format!("element is {}x{}, expected {n}x{n}", a.rows(), a.cols())));
        }
        let mut out = Vec::new();
        let mut start = 0;
        for &k in &self.block_dims {
            let idx: Vec<usize> = (start..start + k).collect();
            out.push(a.select(&idx, &idx));
            start += k;
        }
        Ok(out)
    }

    /// Largest defect of `ρ(ab) = ρ(a)ρ(b)` and `ρ(a*) = ρ(a)*` over random pairs.
    pub fn homomorphism_defect(&self, rng: &mut CounterRng, trials: usize) -> f64 {
        let mut worst: f64 = 0.0;
        for _ in 0..trials {
            let a: Vec<Operator> = self.block_dims.iter().map(|&k| rng.gaussian_operator(k, k)).collect();
            let b: Vec<Operator> = self.block_dims.iter().map(|&k| rng.gaussian_operator(k, k)).collect();
            let ab: Vec<Operator> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
            let a_star: Vec<Operator> = a.iter().map(Operator::adjoint).collect();
            let (ra, rb) = (self.embed(&a).unwrap(), self.embed(&b).unwrap());
            worst = worst.max(self.embed(&ab).unwrap().max_abs_diff(&(&ra * &rb)));
            worst = worst.max(self.embed(&a_star).unwrap().max_abs_diff(&ra.adjoint()));
        }
        worst
    }

    /// Every block appears at least once, so `ρ(a) = 0` forces `a = 0`.
    pub fn is_faithful(&self) -> bool {
        self.multiplicities.iter().all(|&m| m > 0)
    }
}

/// A finitely supported state.
///
/// `block` selects the component (coarse unions) or algebra block the state
/// lives on; it defaults to 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum State {
    Density {
        #[serde(default)]
        block: usize,
        density: Operator,
    },
    Probs {
        #[serde(default)]
        block: usize,
        probs: Vec<f64>,
    },
}

impl State {
    pub fn point_mass(n: usize, x: usize) -> Self {
        let mut probs = vec![0.0; n];
        probs[x] = 1.0;
        State::Probs { block: 0, probs }
    }

    pub fn uniform(n: usize) -> Self {
        State::Probs { block: 0, probs: vec![1.0 / n as f64; n] }
    }

    /// Vector state `|e_i⟩⟨e_i|` on `M_k`.
    pub fn pure(k: usize, i: usize) -> Self {
        State::Density { block: 0, density: Operator::matrix_unit(k, i, i) }
    }

    pub fn with_block(self, b: usize) -> Self {
        match self {
            State::Density { density, .. } => State::Density { block: b, density },
            State::Probs { probs, .. } => State::Probs { block: b, probs },
        }
    }

    pub fn block(&self) -> usize {
        match self {
            State::Density { block, .. } | State::Probs { block, .. } => *block,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            State::Density { density, .. } => density.rows(),
            State::Probs { probs, .. } => probs.len(),
        }
    }

    /// Density operator (diagonal for probability vectors).
    pub fn density(&self) -> Operator {
        match self {
            State::Density { density, .. } => density.clone(),
            State::Probs { probs, .. } => Operator::from_diag(probs),
        }
    }

    /// Points (or basis indices) carrying positive weight.
    pub fn support(&self) -> Vec<usize> {
        match self {
            State::Probs { probs, .. } => (0..probs.len()).filter(|&x| probs[x] > 0.0).collect(),
            State::Density { density, .. } => (0..density.rows()).filter(|&i| density.get(i, i).re > 0.0).collect(),
        }
    }

    /// Checks positivity and unit trace within `tol.state`, returning a
    /// cleaned copy (negatives clipped, renormalised, Hermitian flag set).
    pub fn validated(&self, tol: &Tolerances) -> Result<State> {
        match self {
            State::Probs { block, probs } => {
                if probs.is_empty() || probs.iter().any(|p| !p.is_finite()) {
                    return Err(Error::InvalidState("probabilities must be finite and nonempty".into()));
                }
                if let Some(x) = probs.iter().position(|&p| p < -tol.state) {
                    return Err(Error::InvalidState(format!("negative mass {} at point {x}", probs[x])));
                }
                let total: f64 = probs.iter().sum();
                if (total - 1.0).abs() > tol.state * probs.len() as f64 {
                    return Err(Error::InvalidState(format!("total mass {total} is not 1")));
                }
                let clipped: Vec<f64> = probs.iter().map(|p| p.max(0.0)).collect();
                let s: f64 = clipped.iter().sum();
                Ok(State::Probs { block: *block, probs: clipped.iter().map(|p| p / s).collect() })
            }
            State::Density { block, density } => {
                if !density.is_square() || density.rows() == 0 {
                    return Err(Error::InvalidState("density matrix must be square".into()));
                }
                let rho = density
                    .clone()
                    .flag_hermitian(tol)
                    .map_err(|_| Error::InvalidState("density matrix is not Hermitian".into()))?
                    .symmetrize();
                let e = herm_eig(&rho, tol)?;
                if e.min_eigenvalue() < -tol.state.max(1e-12) * (1.0 + rho.dim() as f64) {
                    return Err(Error::InvalidState(format!("negative eigenvalue {}", e.min_eigenvalue())));
                }
                let tr = rho.trace().re;
                if (tr - 1.0).abs() > tol.state * (1.0 + rho.dim() as f64) {
                    return Err(Error::InvalidState(format!("trace {tr} is not 1")));
                }
                Ok(State::Density { block: *block, density: rho.scale(1.0 / tr).symmetrize() })
            }
        }
    }

    /// `μ(a)`: `Σ p_x a_xx` or `Re tr(ρ a)`.
    pub fn expect(&self, a: &Operator) -> Result<f64> {
        if a.rows() != self.dim() || a.cols() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "state on dimension {} applied to a {}x{} element",
                self.dim(),
                a.rows(),
                a.cols()
            )));
        }
        Ok(match self {
            State::Probs { probs, .. } => probs.iter().enumerate().map(|(x, p)| p * a.get(x, x).re).sum(),
            State::Density { density, .. } => {
                let n = density.rows();
                let mut s = Complex64::new(0.0, 0.0);
                for i in 0..n {
                    for j in 0..n {
                        s += density.get(i, j) * a.get(j, i);
                    }
                }
                s.re
            }
        })
    }
}

/// Lipschitz seminorm variants. Every variant vanishes on multiples of the unit.
#[derive(Debug, Clone)]
pub enum Seminorm {
    /// Lipschitz constant of a diagonal element over the metric.
    ClassicalLip(MetricSpace),
    /// `inf_c ‖a − c‖ = (λ_max − λ_min)/2` on `M_dim`.
    Spread {
        dim: usize,
    },
    /// `‖[D, a]‖`.
    CommutatorD(Operator),
    Union(Box<UnionSpace>),
    AlmostCommutative(ACSpace),
}

impl Seminorm {
    /// Dimension of the operators the seminorm is evaluated on.
    pub fn element_dim(&self) -> usize {
        match self {
            Seminorm::ClassicalLip(m) => m.len(),
            Seminorm::Spread { dim } => *dim,
            Seminorm::CommutatorD(d) => d.rows(),
            Seminorm::Union(u) => u.element_dim(),
            Seminorm::AlmostCommutative(s) => s.element_dim(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Seminorm::ClassicalLip(_) => "classical-lipschitz",
            Seminorm::Spread { .. } => "spread",
            Seminorm::CommutatorD(_) => "commutator",
            Seminorm::Union(_) => "union",
            Seminorm::AlmostCommutative(_) => "almost-commutative",
        }
    }

    pub fn is_classical(&self) -> bool {
        matches!(self, Seminorm::ClassicalLip(_))
    }

    /// Defining algebra of the seminorm's domain.
    pub fn algebra(&self) -> RepresentedAlgebra {
        match self {
            Seminorm::ClassicalLip(m) => RepresentedAlgebra::classical(m.len()),
            Seminorm::Spread { dim } => RepresentedAlgebra::matrix(*dim),
            Seminorm::CommutatorD(d) => RepresentedAlgebra::matrix(d.rows()),
            Seminorm::Union(u) => u.algebra(),
            Seminorm::AlmostCommutative(s) => RepresentedAlgebra {
                block_dims: vec![s.fiber_dim; s.base.len()],
                multiplicities: vec![1; s.base.len()],
                unital: true,
            },
        }
    }

    /// Checks dimension, hermiticity and block structure of an element.
    pub fn check_domain(&self, a: &Operator, tol: &Tolerances) -> Result<()> {
        let n = self.element_dim();
        if a.rows() != n || a.cols() != n {
            return Err(Error::DomainMismatch(format!(
                "element is {}x{}, seminorm acts on dimension {n}",
                a.rows(),
                a.cols()
            )));
        }
        if !a.is_hermitian(tol) {
            return Err(Error::DomainMismatch(format!(
                "element is not self-adjoint (defect {:.3e})",
                a.hermitian_defect()
            )));
        }
        let blocks = match self {
            Seminorm::Spread { .. } | Seminorm::CommutatorD(_) => return Ok(()),
            _ => self.algebra().block_dims,
        };
        let mut owner = Vec::with_capacity(n);
        for (b, &k) in blocks.iter().enumerate() {
            owner.extend(std::iter::repeat_n(b, k));
        }
        let limit = tol.hermitian * (1.0 + a.max_abs());
        for i in 0..n {
            for j in 0..n {
                if owner[i] != owner[j] && a.get(i, j).norm() > limit {
                    return Err(Error::DomainMismatch(format!("entry ({i},{j}) lies outside the algebra's blocks")));
                }
            }
        }
        Ok(())
    }

    pub fn eval(&self, a: &Operator, tol: &Tolerances) -> Result<f64> {
        self.check_domain(a, tol)?;
        match self {
            Seminorm::ClassicalLip(m) => {
                let f: Vec<f64> = (0..m.len()).map(|x| a.get(x, x).re).collect();
                Ok(lipschitz_const(&f, m))
            }
            Seminorm::Spread { .. } => spread(a, tol),
            Seminorm::CommutatorD(d) => Ok(op_norm(&d.commutator(a))),
            Seminorm::Union(u) => union_seminorm(&u.split(a)?, u, tol),
            Seminorm::AlmostCommutative(s) => ac_seminorm(&s.fibers_of(a)?, s, tol),
        }
    }

    /// Random element with seminorm exactly 1 (or a constant when the seminorm
    /// kills every sample drawn, which only happens for degenerate inputs).
    pub fn sample_unit(&self, rng: &mut CounterRng, tol: &Tolerances) -> Operator {
        for _ in 0..16 {
            let raw = self.sample_raw(rng);
            let l = self.eval(&raw, tol).unwrap_or(0.0);
            if l > 1e-12 {
                return raw.scale(1.0 / l).symmetrize();
            }
        }
        Operator::zeros(self.element_dim(), self.element_dim())
    }

    fn sample_raw(&self, rng: &mut CounterRng) -> Operator {
        match self {
            Seminorm::ClassicalLip(m) => Operator::from_diag(&random_lipschitz(m, rng)),
            Seminorm::Spread { dim } => rng.gaussian_hermitian(*dim).shift(rng.normal()),
            Seminorm::CommutatorD(d) => rng.gaussian_hermitian(d.rows()),
            Seminorm::Union(u) => u.sample_raw(rng),
            Seminorm::AlmostCommutative(s) => s.sample_raw(rng),
        }
    }
}

/// Half the spectral spread of a Hermitian matrix.
pub fn spread(a: &Operator, tol: &Tolerances) -> Result<f64> {
    if a.rows() <= 1 {
        return Ok(0.0);
    }
    let e = herm_eig(&a.symmetrize(), tol)?;
    Ok(((e.max_eigenvalue() - e.min_eigenvalue()) / 2.0).max(0.0))
}

/// Random real function on the points: either a McShane envelope of random
/// anchors (1-Lipschitz by construction) or Gaussian noise.
pub fn random_lipschitz(m: &MetricSpace, rng: &mut CounterRng) -> Vec<f64> {
    let n = m.len();
    if n == 0 {
        return Vec::new();
    }
    if rng.bernoulli(0.5) {
        let anchors = 1 + rng.below(n.min(4));
        let centers: Vec<(usize, f64)> =
            (0..anchors).map(|_| (rng.below(n), rng.range(0.0, m.scale().max(1.0)))).collect();
        (0..n).map(|x| centers.iter().map(|&(c, v)| v + m.dist(x, c)).fold(f64::INFINITY, f64::min)).collect()
    } else {
        (0..n).map(|_| rng.normal()).collect()
    }
}

/// Certified bracket for a supremum that is not computed exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertifiedInterval {
    pub lower: f64,
    /// `f64::INFINITY` when no finite bound is known (serialised as `null`).
    pub upper: f64,
    pub lower_witness: String,
    pub upper_source: String,
}

impl CertifiedInterval {
    pub fn new(lower: f64, upper: f64, lower_witness: impl Into<String>, upper_source: impl Into<String>) -> Self {
        Self { lower, upper, lower_witness: lower_witness.into(), upper_source: upper_source.into() }
    }

    pub fn exact(value: f64, source: impl Into<String>) -> Self {
        let p = source.into();
        Self::new(value, value, p.clone(), p)
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn is_consistent(&self) -> bool {
        self.lower <= self.upper + 1e-12 * (1.0 + self.lower.abs())
    }
}

/// `seminorm_eval(L, a)`.
pub fn seminorm_eval(l: &Seminorm, a: &Operator, tol: &Tolerances) -> Result<f64> {
    l.eval(a, tol)
}

/// Result of [`mk_classical`]: both programs' values and the dual witness.
#[derive(Debug, Clone, Serialize)]
pub struct MkReport {
    pub value: f64,
    pub primal: f64,
    pub dual: f64,
    pub gap: f64,
    /// 1-Lipschitz function attaining the dual value (McShane-extended to all points).
    pub witness: Vec<f64>,
}

/// Wasserstein-1 distance between probability vectors on `m`, solved both as
/// the Lipschitz-ball program and as the transport program.
pub fn mk_classical(mu: &State, nu: &State, m: &MetricSpace, tol: &Tolerances) -> Result<MkReport> {
    let (mu, nu) = match (mu.validated(tol)?, nu.validated(tol)?) {
        (State::Probs { probs: a, .. }, State::Probs { probs: b, .. }) => (a, b),
        _ => return Err(Error::InvalidState("classical distance needs probability vectors".into())),
    };
    if mu.len() != m.len() || nu.len() != m.len() {
        return Err(Error::DimensionMismatch(format!(
            "states on {} and {} points, space has {}",
            mu.len(),
            nu.len(),
            m.len()
        )));
    }
    let supp_mu: Vec<usize> = (0..m.len()).filter(|&x| mu[x] > 0.0).collect();
    let supp_nu: Vec<usize> = (0..m.len()).filter(|&x| nu[x] > 0.0).collect();
    let mut pts: Vec<usize> = supp_mu.iter().chain(&supp_nu).copied().collect();
    pts.sort_unstable();
    pts.dedup();

    let (dual, u) = dual_program(&mu, &nu, &pts, m, tol)?;
    let primal = primal_program(&mu, &nu, &supp_mu, &supp_nu, m, tol)?;
    let gap = (primal - dual).abs();
    let limit = tol.duality_gap * m.scale().max(f64::MIN_POSITIVE);
    if gap > limit {
        return Err(Error::GapExceeded { gap, limit });
    }
    let witness = (0..m.len())
        .map(|z| pts.iter().zip(&u).map(|(&x, ux)| ux + m.dist(z, x)).fold(f64::INFINITY, f64::min))
        .collect();
    Ok(MkReport { value: dual, primal, dual, gap, witness })
}

/// `max Σ (μ−ν)u` over `u(x) − u(y) ≤ d(x, y)` on the joint support.
/// Variables are shifted by the support diameter so they can be nonnegative.
fn dual_program(mu: &[f64], nu: &[f64], pts: &[usize], m: &MetricSpace, tol: &Tolerances) -> Result<(f64, Vec<f64>)> {
    let k = pts.len();
    if k <= 1 {
        return Ok((0.0, vec![0.0; k]));
    }
    let shift = m.diameter_of(pts);
    let mut lp = LinearProgram::new(k);
    lp.set_objective(pts.iter().map(|&x| mu[x] - nu[x]).collect());
    for a in 0..k {
        for b in 0..k {
            if a != b {
                lp.add_sparse_row(&[(a, 1.0), (b, -1.0)], Cmp::Le, m.dist(pts[a], pts[b]));
            }
        }
    }
    lp.add_sparse_row(&[(0, 1.0)], Cmp::Le, shift);
    let sol = lp.maximize(tol)?;
    let u: Vec<f64> = sol.x.iter().map(|v| v - shift).collect();
    let value = pts.iter().zip(&u).map(|(&x, ux)| (mu[x] - nu[x]) * ux).sum();
    Ok((value, u))
}

/// `min Σ d(x,y) π(x,y)` over couplings of `μ` and `ν`.
fn primal_program(
    mu: &[f64],
    nu: &[f64],
    supp_mu: &[usize],
    supp_nu: &[usize],
    m: &MetricSpace,
    tol: &Tolerances,
) -> Result<f64> {
    let (p, q) = (supp_mu.len(), supp_nu.len());
    let mut lp = LinearProgram::new(p * q);
    let mut cost = Vec::with_capacity(p * q);
    for &x in supp_mu {
        for &y in supp_nu {
            cost.push(-m.dist(x, y));
        }
    }
    lp.set_objective(cost);
    for (a, &x) in supp_mu.iter().enumerate() {
        let terms: Vec<(usize, f64)> = (0..q).map(|b| (a * q + b, 1.0)).collect();
        lp.add_sparse_row(&terms, Cmp::Eq, mu[x]);
    }
    for (b, &y) in supp_nu.iter().enumerate() {
        let terms: Vec<(usize, f64)> = (0..p).map(|a| (a * q + b, 1.0)).collect();
        lp.add_sparse_row(&terms, Cmp::Eq, nu[y]);
    }
    Ok(-lp.maximize(tol)?.value)
}

/// Fiber distance and its maximising element.
#[derive(Debug, Clone)]
pub struct SpreadMk {
    pub value: f64,
    /// `sign(ρ − σ)`, of spread at most 1.
    pub witness: Operator,
}

/// `sup{|tr((ρ−σ)a)| : Spread(a) ≤ 1}`, attained at `a = sign(ρ − σ)`.
pub fn mk_spread(phi: &State, psi: &State, tol: &Tolerances) -> Result<SpreadMk> {
    let (rho, sigma) = (phi.validated(tol)?.density(), psi.validated(tol)?.density());
    if rho.rows() != sigma.rows() {
        return Err(Error::DimensionMismatch(format!("states on M_{} and M_{}", rho.rows(), sigma.rows())));
    }
    let delta = (&rho - &sigma).symmetrize();
    let e = herm_eig(&delta, tol)?;
    let zero = tol.snap * (1.0 + delta.max_abs());
    let witness = e.reconstruct_with(|l| {
        Complex64::new(
            if l > zero {
                1.0
            } else if l < -zero {
                -1.0
            } else {
                0.0
            },
            0.0,
        )
    });
    let value = State::Density { block: 0, density: delta }.expect(&witness)?;
    Ok(SpreadMk { value: value.abs(), witness })
}

/// Lower bound for the distance induced by `‖[D, ·]‖`: ratios `|tr(Δa)|/‖[D,a]‖`
/// over `Δ = ρ − σ` itself and `budget` Gaussian directions refined by
/// projected ascent. The upper end is `+∞` unless a diameter bound is supplied.
pub fn mk_commutator(
    phi: &State,
    psi: &State,
    d: &Operator,
    budget: usize,
    seed: u64,
    diameter_bound: Option<f64>,
    tol: &Tolerances,
) -> Result<CertifiedInterval> {
    if budget == 0 {
        return Err(Error::BudgetZero);
    }
    let (rho, sigma) = (phi.validated(tol)?.density(), psi.validated(tol)?.density());
    if rho.rows() != d.rows() || sigma.rows() != d.rows() {
        return Err(Error::DimensionMismatch("states and D have different dimensions".into()));
    }
    let delta = State::Density { block: 0, density: (&rho - &sigma).symmetrize() };
    let l = Seminorm::CommutatorD(d.clone());
    let ratio = |a: &Operator| -> f64 {
        let num = delta.expect(a).unwrap_or(0.0).abs();
        let den = l.eval(a, tol).unwrap_or(0.0);
        if num <= 1e-12 {
            0.0
        } else if den <= 1e-14 * (1.0 + num) {
            f64::INFINITY
        } else {
            num / den
        }
    };
    let mut best = ratio(&delta.density());
    let mut rng = CounterRng::new(seed);
    for _ in 0..budget {
        let mut a = l.sample_unit(&mut rng, tol);
        for _ in 0..20 {
            a = (&a + &delta.density().scale(0.5)).symmetrize();
            let la = l.eval(&a, tol).unwrap_or(0.0);
            if la > 1e-14 {
                a = a.scale(1.0 / la);
            }
            best = best.max(ratio(&a));
        }
    }
    let (upper, prov) = match diameter_bound {
        Some(b) => (b.max(best), "supplied diameter bound".to_string()),
        None => (f64::INFINITY, "no finite bound known".to_string()),
    };
    Ok(CertifiedInterval::new(best, upper, "best ratio over sampled directions", prov))
}

/// Monge–Kantorovich distance between local states on components `μ.block()`
/// and `ν.block()` of a coarse union.
///
/// Because every component seminorm is invariant under adding scalars, the
/// anchor-constrained inner problems are affine in the anchor value, so the
/// chain optimisation has the closed form
/// `Σ_{k=i}^{j-1} R_k + mk_i(μ, φ_i) + mk_j(φ_j, ν)` for `i < j`.
pub fn mk_union(mu: &State, nu: &State, u: &UnionSpace, tol: &Tolerances) -> Result<f64> {
    let (mut i, mut j) = (mu.block(), nu.block());
    for c in [i, j] {
        if c >= u.components.len() {
            return Err(Error::IndexOutOfRange { index: c, len: u.components.len() });
        }
    }
    let (mut mu, mut nu) = (mu, nu);
    if i > j {
        std::mem::swap(&mut i, &mut j);
        std::mem::swap(&mut mu, &mut nu);
    }
    if i == j {
        return u.components[i].local_distance(mu, nu, tol);
    }
    if j > u.gaps.len() {
        return Err(Error::IndexOutOfRange { index: j - 1, len: u.gaps.len() });
    }
    let chain: f64 = u.gaps[i..j].iter().sum();
    let left = u.components[i].local_distance(mu, &u.components[i].anchor, tol)?;
    let right = u.components[j].local_distance(&u.components[j].anchor, nu, tol)?;
    Ok(chain + left + right)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn spread_examples() {
        let l = Seminorm::Spread { dim: 2 };
        assert_eq!(l.eval(&Operator::from_diag(&[1.0, -1.0]), &tol()).unwrap(), 1.0);
        assert_eq!(l.eval(&Operator::identity(2), &tol()).unwrap(), 0.0);
        let l3 = Seminorm::Spread { dim: 3 };
        assert!((l3.eval(&Operator::from_diag(&[0.0, 1.0, 4.0]), &tol()).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn domain_mismatch() {
        let m = MetricSpace::on_line(&[0.0, 1.0]);
        let l = Seminorm::ClassicalLip(m);
        assert!(matches!(l.eval(&Operator::pauli_x(), &tol()), Err(Error::DomainMismatch(_))));
        assert!(matches!(l.eval(&Operator::identity(3), &tol()), Err(Error::DomainMismatch(_))));
    }

    #[test]
    fn mk_classical_examples() {
        let two = MetricSpace::on_line(&[0.0, 1.0]);
        let r = mk_classical(&State::point_mass(2, 0), &State::point_mass(2, 1), &two, &tol()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);

        let line = MetricSpace::on_line(&[0.0, 1.0, 3.0]);
        let same = mk_classical(&State::uniform(3), &State::uniform(3), &line, &tol()).unwrap();
        assert!(same.value.abs() < 1e-12);

        let r = mk_classical(&State::point_mass(3, 0), &State::uniform(3), &line, &tol()).unwrap();
        assert!((r.value - 4.0 / 3.0).abs() < 1e-9);
        assert!((r.primal - 4.0 / 3.0).abs() < 1e-9);
        assert!(lipschitz_const(&r.witness, &line) <= 1.0 + 1e-9);
    }

    #[test]
    fn mk_classical_rejects_bad_states() {
        let line = MetricSpace::on_line(&[0.0, 1.0]);
        let bad = State::Probs { block: 0, probs: vec![0.7, 0.7] };
        assert!(matches!(mk_classical(&bad, &State::uniform(2), &line, &tol()), Err(Error::InvalidState(_))));
    }

    #[test]
    fn mk_spread_examples() {
        let a = State::pure(2, 0);
        assert!(mk_spread(&a, &a, &tol()).unwrap().value.abs() < 1e-15);
        let r = mk_spread(&State::pure(2, 0), &State::pure(2, 1), &tol()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12);
        let p = State::Density { block: 0, density: Operator::from_diag(&[0.75, 0.25]) };
        let q = State::Density { block: 0, density: Operator::from_diag(&[0.25, 0.75]) };
        assert!((mk_spread(&p, &q, &tol()).unwrap().value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mk_commutator_is_a_lower_bound_for_diagonal_d() {
        // D = diag(0, 1): [D, a] = only off-diagonal entries, so the diagonal of
        // ρ − σ is unconstrained and the distance between e_0 and e_1 is infinite.
        let d = Operator::from_diag(&[0.0, 1.0]);
        let iv = mk_commutator(&State::pure(2, 0), &State::pure(2, 1), &d, 4, 1, None, &tol()).unwrap();
        assert!(iv.lower.is_infinite());
        let plus = State::Density { block: 0, density: Operator::from_real_rows(&[vec![0.5, 0.5], vec![0.5, 0.5]]) };
        let minus = State::Density { block: 0, density: Operator::from_real_rows(&[vec![0.5, -0.5], vec![-0.5, 0.5]]) };
        let iv = mk_commutator(&plus, &minus, &d, 8, 2, None, &tol()).unwrap();
        assert!(iv.lower > 0.0 && iv.upper.is_infinite());
    }

    #[test]
    fn algebra_embedding() {
        let alg = RepresentedAlgebra::new(vec![1, 2], vec![2, 1], true).unwrap();
        assert_eq!(alg.rep_dim(), 4);
        let mut rng = CounterRng::new(3);
        assert!(alg.homomorphism_defect(&mut rng, 5) < 1e-10);
        assert!(alg.is_faithful());
        let a = Operator::direct_sum(&[Operator::from_diag(&[2.0]), Operator::pauli_x()]);
        let blocks = alg.blocks_of(&a).unwrap();
        let rep = alg.embed(&blocks).unwrap();
        assert_eq!(rep.get(0, 0), rep.get(1, 1));
        assert_eq!(rep.get(2, 3).re, 1.0);
    }

    #[test]
    fn state_expectation() {
        let s = State::Probs { block: 0, probs: vec![0.25, 0.75] };
        assert_eq!(s.expect(&Operator::from_diag(&[4.0, 0.0])).unwrap(), 1.0);
        let p = State::pure(2, 1);
        assert_eq!(p.expect(&Operator::pauli_z()).unwrap(), -1.0);
    }

    #[test]
    fn state_json_forms() {
        let s: State = serde_json::from_str(r#"{"probs":[0.5,0.5]}"#).unwrap();
        assert_eq!(s, State::uniform(2));
        let d: State = serde_json::from_str(
            r#"{"block":1,"density":{"rows":1,"cols":1,"re":[[1.0]],"im":[[0.0]],"hermitian":true}}"#,
        )
        .unwrap();
        assert_eq!(d.block(), 1);
    }
}
