use num_rational::Rational64;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::algebra::{mk_classical, mk_spread, RepresentedAlgebra, Seminorm, State};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{op_norm, Operator};
use crate::rng::CounterRng;

/// One compact piece of a coarse union together with its anchor state.
#[derive(Debug, Clone)]
pub struct UnionComponent {
    pub seminorm: Seminorm,
    pub anchor: State,
}

impl UnionComponent {
    pub fn new(seminorm: Seminorm, anchor: State, tol: &Tolerances) -> Result<Self> {
        if matches!(seminorm, Seminorm::Union(_)) {
            return Err(Error::UnsupportedComponentSeminorm("nested unions".into()));
        }
        let anchor = anchor.validated(tol)?;
        if anchor.dim() != seminorm.element_dim() {
            return Err(Error::DimensionMismatch(format!(
                "anchor state has dimension {}, component acts on {}",
                anchor.dim(),
                seminorm.element_dim()
            )));
        }
        Ok(Self { seminorm, anchor })
    }

    pub fn dim(&self) -> usize {
        self.seminorm.element_dim()
    }

    /// Monge–Kantorovich distance inside the component.
    pub fn local_distance(&self, mu: &State, nu: &State, tol: &Tolerances) -> Result<f64> {
        match &self.seminorm {
            Seminorm::ClassicalLip(m) => Ok(mk_classical(mu, nu, m, tol)?.value),
            Seminorm::Spread { .. } => Ok(mk_spread(mu, nu, tol)?.value),
            other => Err(Error::UnsupportedComponentSeminorm(other.name().into())),
        }
    }
}

/// Truncated coarse disjoint union.
///
/// `gaps[n]` is the distance `R_n` between the anchors of components `n` and
/// `n + 1`. When there is one gap per component, the last gap couples the final
/// component to the (zero) tail beyond the truncation.
#[derive(Debug, Clone)]
pub struct UnionSpace {
    pub components: Vec<UnionComponent>,
    pub gaps: Vec<f64>,
}

impl UnionSpace {
    pub fn new(components: Vec<UnionComponent>, gaps: Vec<f64>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidArgument("a union needs at least one component".into()));
        }
        let c = components.len();
        if gaps.len() + 1 != c && gaps.len() != c {
            return Err(Error::DimensionMismatch(format!("{} gaps for {c} components", gaps.len())));
        }
        if let Some(g) = gaps.iter().find(|g| !(**g > 0.0) || !g.is_finite()) {
            return Err(Error::InvalidArgument(format!("gaps must be positive and finite, got {g}")));
        }
        Ok(Self { components, gaps })
    }

    pub fn element_dim(&self) -> usize {
        self.components.iter().map(UnionComponent::dim).sum()
    }

    pub fn algebra(&self) -> RepresentedAlgebra {
        let mut dims = Vec::new();
        for c in &self.components {
            dims.extend(c.seminorm.algebra().block_dims);
        }
        let n = dims.len();
        RepresentedAlgebra {
            block_dims: dims,
            multiplicities: vec![1; n],
            unital: self.gaps.len() < self.components.len(),
        }
    }

    fn offsets(&self) -> Vec<usize> {
        let mut out = vec![0];
        for c in &self.components {
            out.push(out.last().unwrap() + c.dim());
        }
        out
    }

    /// Splits a block-diagonal element into its component parts.
    pub fn split(&self, a: &Operator) -> Result<Vec<Operator>> {
        let n = self.element_dim();
        if a.rows() != n || a.cols() != n {
            return Err(Error::DimensionMismatch(format!("element is {}x{}, union acts on {n}", a.rows(), a.cols())));
        }
        let off = self.offsets();
        Ok(off
            .windows(2)
            .map(|w| {
                let idx: Vec<usize> = (w[0]..w[1]).collect();
                a.select(&idx, &idx)
            })
            .collect())
    }

    pub fn join(&self, parts: &[Operator]) -> Operator {
        Operator::direct_sum(parts)
    }

    /// Component samples shifted by random scalars, to be rescaled by the caller.
    pub(crate) fn sample_raw(&self, rng: &mut CounterRng) -> Operator {
        let tol = Tolerances::default();
        let scale = self.gaps.iter().copied().fold(1.0, f64::max);
        let parts: Vec<Operator> = self
            .components
            .iter()
            .map(|c| c.seminorm.sample_unit(rng, &tol).scale(rng.uniform()).shift(scale * rng.normal()))
            .collect();
        self.join(&parts)
    }
}

/// `max( max_n L_n(a_n), max_n |φ_{n+1}(a_{n+1}) − φ_n(a_n)| / R_n )`.
pub fn union_seminorm(parts: &[Operator], u: &UnionSpace, tol: &Tolerances) -> Result<f64> {
    if parts.len() != u.components.len() {
        return Err(Error::DimensionMismatch(format!("{} parts for {} components", parts.len(), u.components.len())));
    }
    let mut value: f64 = 0.0;
    let mut anchors = Vec::with_capacity(parts.len() + 1);
    for (c, a) in u.components.iter().zip(parts) {
        value = value.max(c.seminorm.eval(a, tol)?);
        anchors.push(c.anchor.expect(a)?);
    }
    anchors.push(0.0);
    for (n, r) in u.gaps.iter().enumerate() {
        value = value.max((anchors[n + 1] - anchors[n]).abs() / r);
    }
    Ok(value)
}

/// Union seminorm of the scalar element `(c_0·1, c_1·1, …)` in exact
/// arithmetic: component terms vanish and only the jump terms remain.
pub fn union_seminorm_scalar(values: &[Rational64], gaps: &[Rational64]) -> Result<Rational64> {
    if gaps.len() + 1 != values.len() && gaps.len() != values.len() {
        return Err(Error::DimensionMismatch(format!("{} gaps for {} components", gaps.len(), values.len())));
    }
    if gaps.iter().any(|g| !g.is_positive()) {
        return Err(Error::InvalidArgument("gaps must be positive".into()));
    }
    let mut best = Rational64::zero();
    for (n, r) in gaps.iter().enumerate() {
        let next = values.get(n + 1).copied().unwrap_or_else(Rational64::zero);
        let jump = (next - values[n]).abs() / r;
        if jump > best {
            best = jump;
        }
    }
    Ok(best)
}

/// `e_n = (1, …, 1, 0, …)` with `n + 1` units, and its union seminorm.
pub fn approx_unit(u: &UnionSpace, n: usize, tol: &Tolerances) -> Result<(Operator, f64)> {
    if n >= u.components.len() {
        return Err(Error::IndexOutOfRange { index: n, len: u.components.len() });
    }
    let parts: Vec<Operator> = u
        .components
        .iter()
        .enumerate()
        .map(|(k, c)| if k <= n { Operator::identity(c.dim()) } else { Operator::zeros(c.dim(), c.dim()) })
        .collect();
    let value = union_seminorm(&parts, u, tol)?;
    Ok((u.join(&parts), value))
}

/// [`approx_unit`]'s seminorm computed in rational arithmetic.
pub fn approx_unit_rational(gaps: &[Rational64], components: usize, n: usize) -> Result<Rational64> {
    if n >= components {
        return Err(Error::IndexOutOfRange { index: n, len: components });
    }
    let values: Vec<Rational64> =
        (0..components).map(|k| if k <= n { Rational64::from_integer(1) } else { Rational64::zero() }).collect();
    union_seminorm_scalar(&values, gaps)
}

/// Sample of `{a : L(a) ≤ 1, φ_0(a_0) = 0}` on the first `trunc` components.
fn probe_samples(
    u: &UnionSpace,
    trunc: usize,
    count: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<(UnionSpace, Vec<Vec<Operator>>)> {
    if trunc == 0 || trunc > u.components.len() {
        return Err(Error::IndexOutOfRange { index: trunc, len: u.components.len() });
    }
    let sub = UnionSpace::new(u.components[..trunc].to_vec(), u.gaps[..trunc - 1].to_vec())?;
    let l = Seminorm::Union(Box::new(sub.clone()));
    let mut rng = CounterRng::new(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let a = l.sample_unit(&mut rng, tol).scale(rng.uniform());
        let mut parts = sub.split(&a)?;
        let c = sub.components[0].anchor.expect(&parts[0])?;
        for p in parts.iter_mut() {
            *p = p.shift(-c);
        }
        out.push(parts);
    }
    Ok((sub, out))
}

fn distance(a: &[Operator], b: &[Operator]) -> f64 {
    a.iter().zip(b).map(|(x, y)| op_norm(&(x - y))).fold(0.0, f64::max)
}

fn greedy_net(samples: &[Vec<Operator>], eps: f64) -> usize {
    let mut net: Vec<&Vec<Operator>> = Vec::new();
    for s in samples {
        if net.iter().all(|c| distance(c, s) > eps) {
            net.push(s);
        }
    }
    net.len()
}

/// Greedy `eps`-net size over `count` samples of the normalised Lipschitz ball
/// restricted to the first `trunc` components.
pub fn covering_number_probe(
    u: &UnionSpace,
    trunc: usize,
    eps: f64,
    seed: u64,
    count: usize,
    tol: &Tolerances,
) -> Result<usize> {
    let (_, samples) = probe_samples(u, trunc, count, seed, tol)?;
    Ok(greedy_net(&samples, eps))
}

#[derive(Debug, Clone, Serialize)]
pub struct CoveringPoint {
    pub eps: f64,
    pub greedy: usize,
    /// Smallest net found at this or any finer radius (every finer net is also
    /// an `eps`-net), hence non-increasing in `eps`.
    pub estimate: usize,
}

/// Covering estimates on an `eps` grid, sharing one sample set.
pub fn covering_curve(
    u: &UnionSpace,
    trunc: usize,
    eps_grid: &[f64],
    seed: u64,
    count: usize,
    tol: &Tolerances,
) -> Result<Vec<CoveringPoint>> {
    let (_, samples) = probe_samples(u, trunc, count, seed, tol)?;
    let mut grid = eps_grid.to_vec();
    grid.sort_by(f64::total_cmp);
    let mut best = usize::MAX;
    Ok(grid
        .into_iter()
        .map(|eps| {
            let greedy = greedy_net(&samples, eps);
            best = best.min(greedy);
            CoveringPoint { eps, greedy, estimate: best }
        })
        .collect())
}
