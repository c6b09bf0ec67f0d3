//! Propagation of operators over a metric space: support-based, spectral
//! (through Lipschitz witnesses), relative to a subalgebra, and the
//! relative-commutant seminorm `L*`.

use std::collections::HashSet;

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::{CertifiedInterval, Seminorm};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{block_exceeds, block_norm, herm_eig, op_norm, projection_from_eig, Interval, Operator};
use crate::metric::MetricSpace;
use crate::rng::CounterRng;

/// Diagonal representation of `C(X)` on `⊕_x C^{m_x}`; the basis vectors of a
/// point are contiguous.
#[derive(Debug, Clone, PartialEq)]
pub struct RepresentationOverMetric {
    pub metric: MetricSpace,
    pub multiplicity: Vec<usize>,
    offsets: Vec<usize>,
}

impl RepresentationOverMetric {
    pub fn new(metric: MetricSpace, multiplicity: Vec<usize>) -> Result<Self> {
        if multiplicity.len() != metric.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} multiplicities for {} points",
                multiplicity.len(),
                metric.len()
            )));
        }
        if multiplicity.contains(&0) {
            return Err(Error::InvalidArgument("multiplicities must be positive".into()));
        }
        let mut offsets = vec![0];
        for m in &multiplicity {
            offsets.push(offsets.last().unwrap() + m);
        }
        Ok(Self { metric, multiplicity, offsets })
    }

    /// Multiplicity one at every point.
    pub fn simple(metric: MetricSpace) -> Self {
        let n = metric.len();
        Self::new(metric, vec![1; n]).expect("positive multiplicities")
    }

    pub fn uniform(metric: MetricSpace, m: usize) -> Result<Self> {
        let n = metric.len();
        Self::new(metric, vec![m; n])
    }

    pub fn dim(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn points(&self) -> usize {
        self.metric.len()
    }

    pub fn indices_of(&self, x: usize) -> std::ops::Range<usize> {
        self.offsets[x]..self.offsets[x + 1]
    }

    pub fn point_of(&self, index: usize) -> usize {
        self.offsets.partition_point(|&o| o <= index) - 1
    }

    /// Basis indices belonging to a set of points.
    pub fn indices_of_set(&self, set: &[usize]) -> Vec<usize> {
        set.iter().flat_map(|&x| self.indices_of(x)).collect()
    }

    /// `χ_{{x}}`.
    pub fn point_projection(&self, x: usize) -> Operator {
        let mut d = vec![0.0; self.dim()];
        for i in self.indices_of(x) {
            d[i] = 1.0;
        }
        Operator::from_diag(&d)
    }

    /// `ρ(f)` for a function on the points.
    pub fn multiplication(&self, f: &[f64]) -> Operator {
        Operator::from_diag(&self.expand(f))
    }

    /// Repeats point values over each point's basis vectors.
    pub fn expand(&self, f: &[f64]) -> Vec<f64> {
        (0..self.dim()).map(|i| f[self.point_of(i)]).collect()
    }

    fn check_dim(&self, t: &Operator) -> Result<()> {
        if t.rows() != self.dim() || t.cols() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "operator is {}x{}, representation has dimension {}",
                t.rows(),
                t.cols(),
                self.dim()
            )));
        }
        Ok(())
    }
}

/// Pairs `(x, y)` with `‖χ_x T χ_y‖ > support_zero · ‖T‖`.
pub fn support_pairs(t: &Operator, rep: &RepresentationOverMetric, tol: &Tolerances) -> Result<Vec<(usize, usize)>> {
    rep.check_dim(t)?;
    let norm = op_norm(t);
    if norm == 0.0 {
        return Ok(Vec::new());
    }
    let thr = tol.support_zero * norm;
    let idx: Vec<Vec<usize>> = (0..rep.points()).map(|x| rep.indices_of(x).collect()).collect();
    let mut pairs = Vec::new();
    for x in 0..rep.points() {
        for y in 0..rep.points() {
            if block_exceeds(t, &idx[x], &idx[y], thr) {
                pairs.push((x, y));
            }
        }
    }
    Ok(pairs)
}

/// `max d(x, y)` over support pairs; 0 when there are none.
pub fn support_prop(t: &Operator, rep: &RepresentationOverMetric, tol: &Tolerances) -> Result<f64> {
    Ok(support_pairs(t, rep, tol)?.into_iter().map(|(x, y)| rep.metric.dist(x, y)).fold(0.0, f64::max))
}

/// `‖χ_{(−∞,0]}(a) T χ_{(R,∞)}(a)‖`.
pub fn spectral_witness(t: &Operator, a: &Operator, r: f64, tol: &Tolerances) -> Result<f64> {
    if a.rows() != t.rows() || a.cols() != t.cols() || !t.is_square() {
        return Err(Error::DimensionMismatch("operator and witness differ in size".into()));
    }
    let e = herm_eig(&a.symmetrize(), tol)?;
    let below = projection_from_eig(&e, &Interval::at_most(0.0), tol);
    let above = projection_from_eig(&e, &Interval::above(r), tol);
    Ok(op_norm(&(&(&below * t) * &above)))
}

/// Largest `R` at which the witness `a` (together with `−a` and all its
/// shifts) still shows `χ_{(−∞,c]}(a) T χ_{(c+R,∞)}(a) ≠ 0`.
///
/// The violation set only changes at differences of eigenvalues, so instead of
/// bisecting over `R` the eigenvalue levels of `a` are scanned directly: the
/// radius is the largest `|λ − λ'|` over level pairs whose block of `T`, written
/// in the eigenbasis of `a`, is nonzero.
pub fn witness_radius(t: &Operator, a: &Operator, tol: &Tolerances) -> Result<f64> {
    if a.rows() != t.rows() || !t.is_square() || !a.is_square() {
        return Err(Error::DimensionMismatch("operator and witness differ in size".into()));
    }
    let norm = op_norm(t);
    if norm == 0.0 {
        return Ok(0.0);
    }
    let e = herm_eig(&a.symmetrize(), tol)?;
    let u = &e.eigenvectors;
    let b = &(&u.adjoint() * t) * u;
    let lam = &e.eigenvalues;
    let snap = tol.snap * (1.0 + lam.iter().fold(0.0f64, |m, l| m.max(l.abs())));
    let mut levels: Vec<(f64, Vec<usize>)> = Vec::new();
    for (k, &l) in lam.iter().enumerate() {
        match levels.last_mut() {
            Some((v, idx)) if l - *v <= snap => idx.push(k),
            _ => levels.push((l, vec![k])),
        }
    }
    let thr = tol.support_zero * norm;
    let m = levels.len();
    let mut best: f64 = 0.0;
    // Scan partners from the farthest level inwards: the first nonzero block
    // found on each side of level i is the largest radius it can contribute.
    for i in 0..m {
        for j in ((i + 1)..m).rev() {
            let gap = levels[j].0 - levels[i].0;
            if gap <= best {
                break;
            }
            if block_exceeds(&b, &levels[i].1, &levels[j].1, thr) {
                best = gap;
                break;
            }
        }
        for j in 0..i {
            let gap = levels[i].0 - levels[j].0;
            if gap <= best {
                break;
            }
            if block_exceeds(&b, &levels[i].1, &levels[j].1, thr) {
                best = gap;
                break;
            }
        }
    }
    Ok(best)
}

/// Everything needed to bracket the spectral propagation of an operator.
#[derive(Debug, Clone)]
pub struct PropContext {
    pub seminorm: Seminorm,
    /// Representation of the classical seminorm's algebra; when present the
    /// operator acts on its space and witnesses are expanded through it.
    pub rep: Option<RepresentationOverMetric>,
    pub diameter_bound: Option<f64>,
    pub samples: usize,
    pub seed: u64,
}

impl PropContext {
    pub fn classical(rep: RepresentationOverMetric) -> Self {
        Self {
            seminorm: Seminorm::ClassicalLip(rep.metric.clone()),
            rep: Some(rep),
            diameter_bound: None,
            samples: 0,
            seed: 0,
        }
    }

    pub fn noncommutative(seminorm: Seminorm, samples: usize, seed: u64) -> Self {
        Self { seminorm, rep: None, diameter_bound: None, samples, seed }
    }

    pub fn with_samples(mut self, samples: usize, seed: u64) -> Self {
        self.samples = samples;
        self.seed = seed;
        self
    }

    pub fn with_diameter_bound(mut self, bound: f64) -> Self {
        self.diameter_bound = Some(bound);
        self
    }

    /// Dimension of the space operators act on.
    pub fn space_dim(&self) -> usize {
        match (&self.rep, &self.seminorm) {
            (Some(rep), Seminorm::ClassicalLip(_)) => rep.dim(),
            _ => self.seminorm.element_dim(),
        }
    }

    /// `ρ(a)` for an element of the seminorm's domain.
    pub fn represent(&self, a: &Operator) -> Operator {
        match (&self.rep, &self.seminorm) {
            (Some(rep), Seminorm::ClassicalLip(_)) => {
                let f: Vec<f64> = (0..rep.points()).map(|x| a.get(x, x).re).collect();
                rep.multiplication(&f)
            }
            _ => a.clone(),
        }
    }

    /// Pulls a gradient on the representation space back to the domain.
    fn pull_back(&self, g: &Operator) -> Operator {
        match (&self.rep, &self.seminorm) {
            (Some(rep), Seminorm::ClassicalLip(_)) => {
                let d: Vec<f64> = (0..rep.points()).map(|x| rep.indices_of(x).map(|i| g.get(i, i).re).sum()).collect();
                Operator::from_diag(&d)
            }
            (_, Seminorm::ClassicalLip(_)) => {
                Operator::from_diag(&g.diagonal().iter().map(|z| z.re).collect::<Vec<_>>())
            }
            (_, Seminorm::Union(u)) => {
                let parts = u.split(g).expect("dimension checked");
                u.join(&parts)
            }
            (_, Seminorm::AlmostCommutative(s)) => s.from_fibers(&s.fibers_of(g).expect("dimension checked")),
            _ => g.clone(),
        }
    }

    /// Deterministic witnesses realising the classical propagation: the
    /// distance functions `d(·, x)` (and, for almost-commutative spaces,
    /// `d(·, x) ⊗ 1`).
    pub fn deterministic_witnesses(&self) -> Vec<(String, Operator)> {
        match &self.seminorm {
            Seminorm::ClassicalLip(m) => (0..m.len())
                .map(|x| (format!("d(.,{})", m.labels()[x]), Operator::from_diag(&m.distance_function(x))))
                .collect(),
            Seminorm::AlmostCommutative(s) => (0..s.base.len())
                .map(|x| {
                    let f = s.base.distance_function(x);
                    let fibers: Vec<Operator> = f.iter().map(|v| Operator::identity(s.fiber_dim).scale(*v)).collect();
                    (format!("d(.,{}) x 1", s.base.labels()[x]), s.from_fibers(&fibers))
                })
                .collect(),
            _ => Vec::new(),
        }
    }
}

/// Bracket for the propagation of an operator.
#[derive(Debug, Clone, Serialize)]
pub struct PropagationReport {
    pub interval: CertifiedInterval,
    pub witness_family: String,
    pub support_pairs: Vec<(usize, usize)>,
    /// Set when the witness family cannot see any propagation at all
    /// (scalar subalgebra).
    pub degenerate: bool,
}

/// Spectral propagation bracket: the lower end is the best witness radius over
/// the deterministic family plus `ctx.samples` random unit-ball elements; the
/// upper end is the support propagation when a classical representation is
/// available, else the supplied diameter bound, else `+∞`.
pub fn prop_interval(t: &Operator, ctx: &PropContext, tol: &Tolerances) -> Result<PropagationReport> {
    let n = ctx.space_dim();
    if t.rows() != n || t.cols() != n {
        return Err(Error::DimensionMismatch(format!("operator is {}x{}, context acts on {n}", t.rows(), t.cols())));
    }
    let mut lower = 0.0;
    let mut lower_witness = "none (zero operator or no violation)".to_string();
    let mut consider = |name: String, a: &Operator| -> Result<()> {
        let r = witness_radius(t, &ctx.represent(a), tol)?;
        if r > lower {
            lower = r;
            lower_witness = name;
        }
        Ok(())
    };
    let deterministic = ctx.deterministic_witnesses();
    let family = if deterministic.is_empty() {
        format!("{} sampled {} unit-ball elements", ctx.samples, ctx.seminorm.name())
    } else {
        format!("{} distance functions + {} sampled unit-ball elements", deterministic.len(), ctx.samples)
    };
    for (name, a) in deterministic {
        consider(name, &a)?;
    }
    let mut rng = CounterRng::new(ctx.seed);
    for s in 0..ctx.samples {
        let a = ctx.seminorm.sample_unit(&mut rng, tol);
        consider(format!("sample {s}"), &a)?;
    }
    let (upper, source, pairs) = match (&ctx.rep, &ctx.seminorm) {
        (Some(rep), Seminorm::ClassicalLip(_)) => {
            let pairs = support_pairs(t, rep, tol)?;
            let p = pairs.iter().map(|&(x, y)| rep.metric.dist(x, y)).fold(0.0, f64::max);
            (p, "support propagation".to_string(), pairs)
        }
        _ => match ctx.diameter_bound {
            Some(b) => (b, "supplied diameter bound".to_string(), Vec::new()),
            None => (f64::INFINITY, "no finite bound known".to_string(), Vec::new()),
        },
    };
    let degenerate = matches!(&ctx.rep, Some(rep) if rep.points() == 1);
    Ok(PropagationReport {
        interval: CertifiedInterval::new(lower, upper.max(lower), lower_witness, source),
        witness_family: family,
        support_pairs: pairs,
        degenerate,
    })
}

/// Propagation relative to a commutative subalgebra `B`, given as a metric on
/// `σ(B)` with the fiber dimension of each point. Equal to classical
/// propagation over `σ(B)`; a one-point `σ(B)` (scalars) is flagged degenerate.
pub fn prop_relative(
    t: &Operator,
    b: &RepresentationOverMetric,
    samples: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<PropagationReport> {
    let ctx = PropContext::classical(b.clone()).with_samples(samples, seed);
    prop_interval(t, &ctx, tol)
}

/// Top singular triple `(σ, u, v)` with `C v = σ u`.
fn top_singular(c: &Operator, tol: &Tolerances) -> Option<(f64, Vec<Complex64>, Vec<Complex64>)> {
    let gram = (&c.adjoint() * c).symmetrize();
    let e = herm_eig(&gram, tol).ok()?;
    let k = e.eigenvalues.len() - 1;
    let sigma = e.eigenvalues[k].max(0.0).sqrt();
    if sigma == 0.0 {
        return None;
    }
    let v = e.vector(k);
    let u: Vec<Complex64> = c.matvec(&v).into_iter().map(|z| z / sigma).collect();
    Some((sigma, u, v))
}

/// `sup{‖[T, ρ(a)]‖ : L(a) ≤ 1}` bracketed between projected supergradient
/// ascent (plus a grid search on classical spaces of at most five points) and
/// `3 · prop · ‖T‖`.
pub fn commutant_seminorm_interval(
    t: &Operator,
    ctx: &PropContext,
    budget: usize,
    tol: &Tolerances,
) -> Result<CertifiedInterval> {
    if budget == 0 {
        return Err(Error::BudgetZero);
    }
    let n = ctx.space_dim();
    if t.rows() != n || t.cols() != n {
        return Err(Error::DimensionMismatch(format!("operator is {}x{}, context acts on {n}", t.rows(), t.cols())));
    }
    let value = |a: &Operator| op_norm(&t.commutator(&ctx.represent(a)));
    let mut best = 0.0;
    let mut witness = "zero element".to_string();
    let mut starts: Vec<(String, Operator)> = ctx.deterministic_witnesses();
    let mut rng = CounterRng::new(ctx.seed ^ 0x5eed);
    for s in 0..budget {
        starts.push((format!("random start {s}"), ctx.seminorm.sample_unit(&mut rng, tol)));
    }
    for (name, start) in starts {
        let (v, a_best) = ascend(t, ctx, start, tol);
        if v > best {
            best = v;
            witness = format!("ascent from {name}");
        }
        debug_assert!(value(&a_best) >= v - 1e-9 * (1.0 + v));
    }
    if let Seminorm::ClassicalLip(m) = &ctx.seminorm {
        if m.len() <= 5 {
            let g = classical_grid_search(m, &value);
            if g > best {
                best = g;
                witness = "grid search over Lipschitz functions".into();
            }
        }
    }
    let (upper, source) = commutant_seminorm_upper(t, ctx, tol)?;
    Ok(CertifiedInterval::new(best, upper.max(best), witness, source))
}

/// Upper end of [`commutant_seminorm_interval`] alone: `3 · prop · ‖T‖`, with
/// the propagation bounded as in [`prop_interval`].
pub fn commutant_seminorm_upper(t: &Operator, ctx: &PropContext, tol: &Tolerances) -> Result<(f64, String)> {
    let n = ctx.space_dim();
    if t.rows() != n || t.cols() != n {
        return Err(Error::DimensionMismatch(format!("operator is {}x{}, context acts on {n}", t.rows(), t.cols())));
    }
    let (prop, source) = match (&ctx.rep, &ctx.seminorm) {
        (Some(rep), Seminorm::ClassicalLip(_)) => (support_prop(t, rep, tol)?, "support propagation".to_string()),
        _ => match ctx.diameter_bound {
            Some(b) => (b, "supplied diameter bound".to_string()),
            None => (f64::INFINITY, "no finite bound known".to_string()),
        },
    };
    let upper = 3.0 * prop * op_norm(t);
    let upper = if upper.is_nan() { f64::INFINITY } else { upper };
    Ok((upper, format!("3 * prop ({source}) * ||T||")))
}

/// Projected supergradient ascent of `a ↦ ‖[T, ρ(a)]‖` on the unit ball.
fn ascend(t: &Operator, ctx: &PropContext, start: Operator, tol: &Tolerances) -> (f64, Operator) {
    let project = |a: Operator| -> Operator {
        let l = ctx.seminorm.eval(&a, tol).unwrap_or(0.0);
        if l > 1.0 {
            a.scale(1.0 / l)
        } else {
            a
        }
    };
    let mut a = project(start.symmetrize());
    let c = t.commutator(&ctx.represent(&a));
    let mut best = (op_norm(&c), a.clone());
    let mut step = 1.0;
    for _ in 0..40 {
        let c = t.commutator(&ctx.represent(&a));
        let Some((_, u, v)) = top_singular(&c, tol) else { break };
        // d/dA Re u*[T,A]v = Herm(v u* T − T v u*)
        let vu = Operator::outer(&v, &u);
        let m = &(&vu * t) - &(t * &vu);
        let g = ctx.pull_back(&m.hermitian_part());
        let gn = g.frobenius_norm();
        if gn < 1e-14 {
            break;
        }
        let cand = project((&a + &g.scale(step / gn)).symmetrize());
        let val = op_norm(&t.commutator(&ctx.represent(&cand)));
        if val > best.0 {
            best = (val, cand.clone());
            a = cand;
        } else {
            step *= 0.5;
            if step < 1e-6 {
                break;
            }
        }
    }
    best
}

/// Exhaustive search over a grid of 1-Lipschitz functions vanishing at point 0.
fn classical_grid_search(m: &MetricSpace, value: &dyn Fn(&Operator) -> f64) -> f64 {
    const STEPS: i32 = 6;
    let n = m.len();
    if n < 2 {
        return 0.0;
    }
    let mut best: f64 = 0.0;
    let mut idx = vec![-STEPS; n - 1];
    loop {
        let mut f = vec![0.0; n];
        for k in 1..n {
            f[k] = m.dist(k, 0) * idx[k - 1] as f64 / STEPS as f64;
        }
        if crate::metric::lipschitz_const(&f, m) <= 1.0 + 1e-12 {
            best = best.max(value(&Operator::from_diag(&f)));
        }
        let mut k = 0;
        loop {
            if k == n - 1 {
                return best;
            }
            idx[k] += 1;
            if idx[k] <= STEPS {
                break;
            }
            idx[k] = -STEPS;
            k += 1;
        }
    }
}

/// Exact quasi-locality score and the sets attaining it.
#[derive(Debug, Clone, Serialize)]
pub struct QuasiLocalScore {
    pub score: f64,
    pub sets: Option<(Vec<usize>, Vec<usize>)>,
    /// False when the space was too large for exhaustive enumeration and only
    /// ball-shaped sets were tried.
    pub exact: bool,
}

const QUASI_LOCAL_EXACT_LIMIT: usize = 16;

/// `max ‖χ_{S1} T χ_{S2}‖` over point sets with `d(S1, S2) > R`.
///
/// Only maximal pairs matter: for a given `S1` the best `S2` is everything
/// farther than `R` from it, after which `S1` may be enlarged the same way.
/// Spaces with at most 16 points are enumerated exhaustively; larger ones use
/// closed balls as `S1`, which gives a lower bound.
pub fn quasi_local_score(t: &Operator, r: f64, rep: &RepresentationOverMetric) -> Result<QuasiLocalScore> {
    rep.check_dim(t)?;
    let n = rep.points();
    let far = |set: u64| -> u64 {
        let mut out = 0u64;
        for y in 0..n {
            if (0..n).filter(|&x| set >> x & 1 == 1).all(|x| rep.metric.dist(x, y) > r) {
                out |= 1 << y;
            }
        }
        out
    };
    let members = |set: u64| -> Vec<usize> { (0..n).filter(|&x| set >> x & 1 == 1).collect() };
    let exact = n <= QUASI_LOCAL_EXACT_LIMIT;
    let mut seeds: Vec<u64> = Vec::new();
    if exact {
        seeds.extend(1..(1u64 << n));
    } else {
        if n > 64 {
            return Err(Error::InvalidArgument("quasi-local score supports at most 64 points".into()));
        }
        for x in 0..n {
            let mut radii: Vec<f64> = (0..n).map(|y| rep.metric.dist(x, y)).collect();
            radii.sort_by(f64::total_cmp);
            radii.dedup();
            for rad in radii {
                seeds.push((0..n).filter(|&y| rep.metric.dist(x, y) <= rad).fold(0u64, |s, y| s | 1 << y));
            }
        }
    }
    let mut seen = HashSet::new();
    let mut best = QuasiLocalScore { score: 0.0, sets: None, exact };
    for s in seeds {
        let s2 = far(s);
        if s2 == 0 {
            continue;
        }
        let s1 = far(s2);
        if !seen.insert((s1, s2)) {
            continue;
        }
        let (a, b) = (members(s1), members(s2));
        let v = block_norm(t, &rep.indices_of_set(&a), &rep.indices_of_set(&b));
        if v > best.score {
            best.score = v;
            best.sets = Some((a, b));
        }
    }
    Ok(best)
}

/// Outcome of [`filtration_check`].
#[derive(Debug, Clone, Serialize)]
pub struct FiltrationReport {
    pub pairs_checked: usize,
    pub sum_ok: bool,
    pub product_ok: bool,
    pub adjoint_ok: bool,
    pub reflexivity_ok: bool,
    pub failures: Vec<String>,
}

impl FiltrationReport {
    pub fn all_ok(&self) -> bool {
        self.sum_ok && self.product_ok && self.adjoint_ok && self.reflexivity_ok
    }
}

/// Whether every pair of point projections `(χ_x, χ_y)` annihilating the
/// propagation-`R` operators (i.e. `d(x, y) > R`) also annihilates `T`.
pub fn annihilator_membership(t: &Operator, r: f64, rep: &RepresentationOverMetric, tol: &Tolerances) -> Result<bool> {
    Ok(support_pairs(t, rep, tol)?.into_iter().all(|(x, y)| rep.metric.dist(x, y) <= r))
}

/// Propagation-filtration axioms on every ordered pair of the sample, plus
/// reflexivity (annihilator reconstruction) at every distance of the space.
pub fn filtration_check(
    sample: &[Operator],
    rep: &RepresentationOverMetric,
    tol: &Tolerances,
) -> Result<FiltrationReport> {
    let props: Vec<f64> = sample.iter().map(|t| support_prop(t, rep, tol)).collect::<Result<_>>()?;
    let slack = 1e-9 * rep.metric.scale().max(1.0);
    let mut report = FiltrationReport {
        pairs_checked: 0,
        sum_ok: true,
        product_ok: true,
        adjoint_ok: true,
        reflexivity_ok: true,
        failures: Vec::new(),
    };
    let mut radii: Vec<f64> = rep.metric.matrix().iter().flatten().copied().collect();
    radii.sort_by(f64::total_cmp);
    radii.dedup();
    for (i, t) in sample.iter().enumerate() {
        let pa = support_prop(&t.adjoint(), rep, tol)?;
        if pa != props[i] {
            report.adjoint_ok = false;
            report.failures.push(format!("prop(T*) = {pa} but prop(T) = {} for sample {i}", props[i]));
        }
        for &r in &radii {
            if annihilator_membership(t, r, rep, tol)? != (props[i] <= r) {
                report.reflexivity_ok = false;
                report.failures.push(format!("annihilator test disagrees with prop for sample {i} at R = {r}"));
            }
        }
        for (j, s) in sample.iter().enumerate() {
            report.pairs_checked += 1;
            let psum = support_prop(&(t + s), rep, tol)?;
            if psum > props[i].max(props[j]) + slack {
                report.sum_ok = false;
                report.failures.push(format!("prop(T+S) = {psum} exceeds max for pair ({i},{j})"));
            }
            let pprod = support_prop(&(t * s), rep, tol)?;
            if pprod > props[i] + props[j] + slack {
                report.product_ok = false;
                report.failures.push(format!("prop(TS) = {pprod} exceeds sum for pair ({i},{j})"));
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn line013() -> RepresentationOverMetric {
        RepresentationOverMetric::simple(MetricSpace::on_line(&[0.0, 1.0, 3.0]))
    }

    #[test]
    fn representation_projections_sum_to_identity() {
        let rep = RepresentationOverMetric::new(MetricSpace::on_line(&[0.0, 2.0, 5.0]), vec![2, 1, 3]).unwrap();
        let mut sum = Operator::zeros(6, 6);
        for x in 0..3 {
            let p = rep.point_projection(x);
            assert_eq!(&p * &p, p);
            sum = &sum + &p;
        }
        assert_eq!(sum, Operator::identity(6));
        assert_eq!(rep.point_of(0), 0);
        assert_eq!(rep.point_of(2), 1);
        assert_eq!(rep.point_of(5), 2);
    }

    #[test]
    fn support_prop_examples() {
        let rep = line013();
        assert_eq!(support_prop(&Operator::from_diag(&[1.0, 2.0, 3.0]), &rep, &tol()).unwrap(), 0.0);
        assert_eq!(support_prop(&Operator::matrix_unit(3, 0, 1), &rep, &tol()).unwrap(), 1.0);
        let dense = Operator::from_fn(3, 3, |_, _| Complex64::new(1.0, 0.0));
        assert_eq!(support_prop(&dense, &rep, &tol()).unwrap(), 3.0);
        assert!(support_prop(&Operator::identity(4), &rep, &tol()).is_err());
    }

    #[test]
    fn spectral_witness_examples() {
        let t = Operator::matrix_unit(3, 0, 1);
        let a = Operator::from_diag(&[0.0, 1.0, 3.0]);
        assert_eq!(spectral_witness(&t, &a, 0.5, &tol()).unwrap(), 1.0);
        assert_eq!(spectral_witness(&t, &a, 1.0, &tol()).unwrap(), 0.0);
        let d = Operator::from_diag(&[1.0, 5.0, 2.0]);
        assert_eq!(spectral_witness(&d, &a, 0.5, &tol()).unwrap(), 0.0);
    }

    #[test]
    fn prop_interval_examples() {
        let ctx = PropContext::classical(line013());
        let r = prop_interval(&Operator::matrix_unit(3, 0, 1), &ctx, &tol()).unwrap();
        assert_eq!((r.interval.lower, r.interval.upper), (1.0, 1.0));
        let r = prop_interval(&Operator::identity(3), &ctx, &tol()).unwrap();
        assert_eq!((r.interval.lower, r.interval.upper), (0.0, 0.0));
    }

    #[test]
    fn prop_relative_examples() {
        let t = Operator::matrix_unit(3, 0, 2);
        let full = prop_relative(&t, &line013(), 0, 1, &tol()).unwrap();
        assert_eq!(full.interval.lower, 3.0);
        let scalars = RepresentationOverMetric::new(MetricSpace::on_line(&[0.0]), vec![3]).unwrap();
        let r = prop_relative(&t, &scalars, 4, 1, &tol()).unwrap();
        assert!(r.degenerate);
        assert_eq!((r.interval.lower, r.interval.upper), (0.0, 0.0));
        // two fibers per point: propagation is read off the quotient metric
        let fibers = RepresentationOverMetric::uniform(MetricSpace::on_line(&[0.0, 4.0]), 2).unwrap();
        let r = prop_relative(&Operator::matrix_unit(4, 1, 2), &fibers, 0, 1, &tol()).unwrap();
        assert_eq!((r.interval.lower, r.interval.upper), (4.0, 4.0));
        let r = prop_relative(&Operator::matrix_unit(4, 0, 1), &fibers, 0, 1, &tol()).unwrap();
        assert_eq!((r.interval.lower, r.interval.upper), (0.0, 0.0));
    }

    #[test]
    fn commutant_interval_examples() {
        let ctx = PropContext::classical(line013());
        let id = commutant_seminorm_interval(&Operator::identity(3), &ctx, 2, &tol()).unwrap();
        assert_eq!((id.lower, id.upper), (0.0, 0.0));
        let e01 = commutant_seminorm_interval(&Operator::matrix_unit(3, 0, 1), &ctx, 2, &tol()).unwrap();
        assert!((e01.lower - 1.0).abs() < 1e-12);
        assert!((e01.upper - 3.0).abs() < 1e-12);
        assert!(matches!(commutant_seminorm_interval(&Operator::identity(3), &ctx, 0, &tol()), Err(Error::BudgetZero)));
    }

    #[test]
    fn quasi_local_examples() {
        let rep = line013();
        let t = Operator::matrix_unit(3, 0, 1);
        assert_eq!(quasi_local_score(&t, 0.5, &rep).unwrap().score, 1.0);
        assert_eq!(quasi_local_score(&t, 1.0, &rep).unwrap().score, 0.0);
        let d = Operator::from_diag(&[1.0, -2.0, 3.0]);
        assert_eq!(quasi_local_score(&d, 0.1, &rep).unwrap().score, 0.0);
    }

    #[test]
    fn filtration_examples() {
        let rep = line013();
        let id = Operator::identity(3);
        assert!(filtration_check(&[id.clone(), id], &rep, &tol()).unwrap().all_ok());
        let t = Operator::matrix_unit(3, 1, 2);
        assert!(!annihilator_membership(&t, 1.0, &rep, &tol()).unwrap());
        assert!(annihilator_membership(&t, 2.0, &rep, &tol()).unwrap());
    }

    #[test]
    fn compact_no_escape_example() {
        let mut rng = CounterRng::new(9);
        let l = Seminorm::Spread { dim: 4 };
        for _ in 0..10 {
            let t = rng.gaussian_operator(4, 4);
            let a = l.sample_unit(&mut rng, &tol());
            let a = a.shift(-herm_eig(&a, &tol()).unwrap().min_eigenvalue());
            assert!(spectral_witness(&t, &a, 2.0, &tol()).unwrap() <= 1e-10);
        }
    }
}
