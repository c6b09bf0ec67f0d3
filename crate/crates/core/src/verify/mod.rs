//! Seeded property checks over randomized instances, one per acceptance
//! criterion. Each check returns a [`CriterionResult`]; domain errors become
//! failures carrying the error text.

pub mod oracles;

use std::time::Instant;

use num_rational::Rational64;
use serde::Serialize;

use crate::algebra::{mk_classical, mk_spread, mk_union, Seminorm, State};
use crate::coarse::{
    commutant_seminorm_interval, commutant_seminorm_upper, filtration_check, prop_interval, spectral_witness,
    support_prop, PropContext, RepresentationOverMetric,
};
use crate::config::Tolerances;
use crate::constructions::{
    ac_prop_sandwich, approx_unit, approx_unit_rational, slow_osc_score, ACSpace, UnionComponent, UnionSpace,
};
use crate::cutting::{cut, disjoint_block_compress};
use crate::error::Result;
use crate::linalg::{op_norm, Operator};
use crate::metric::{grid_cover, BumpFamily, GridBox, GridNorm, MetricSpace};
use crate::rng::CounterRng;
use crate::spectral::{evo_commutator_check, fourier_func_calc, lstar_fourier_check, FourierProfile};
use oracles::GridComponent;

/// Settings for a verification run.
#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub seed: u64,
    pub tol: Tolerances,
    /// Overrides every per-criterion instance count when set.
    pub instances: Option<usize>,
}

impl VerifyConfig {
    pub fn new(seed: u64) -> Self {
        Self { seed, tol: Tolerances::default(), instances: None }
    }

    fn count(&self, default: usize) -> usize {
        self.instances.unwrap_or(default)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub instances: usize,
    /// Largest observed value of the criterion's error statistic.
    pub worst: f64,
    pub detail: String,
    /// Wall-clock time; not serialised so reports stay byte-identical.
    #[serde(skip)]
    pub millis: u128,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2} {:<34} n={:<4} worst={:.3e}  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.instances,
            self.worst,
            self.detail
        )
        .trim_end()
        .to_string()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifySummary {
    pub seed: u64,
    pub passed: bool,
    pub criteria: Vec<CriterionResult>,
}

pub const CRITERIA: [(u32, &str); 14] = [
    (1, "classical propagation equality"),
    (2, "kantorovich duality"),
    (3, "commutant seminorm vs propagation"),
    (4, "disjoint block compression"),
    (5, "cutting construction"),
    (6, "union approximate unit"),
    (7, "union anchor distances"),
    (8, "spread distance identity"),
    (9, "compact no-escape"),
    (10, "almost-commutative sandwich"),
    (11, "evolution bound"),
    (12, "fourier functional calculus"),
    (13, "higson decay"),
    (14, "filtration axioms"),
];

/// Outcome of one check before timing and naming are attached.
struct Outcome {
    passed: bool,
    instances: usize,
    worst: f64,
    detail: String,
}

impl Outcome {
    fn new(instances: usize) -> Self {
        Self { passed: true, instances, worst: 0.0, detail: String::new() }
    }

    fn observe(&mut self, value: f64) {
        if value.is_nan() {
            self.worst = f64::NAN;
        } else if !self.worst.is_nan() {
            self.worst = self.worst.max(value);
        }
    }

    /// Records a failure; only the first message is kept in the detail.
    fn fail(&mut self, msg: impl Into<String>) {
        if self.passed {
            self.detail = msg.into();
        }
        self.passed = false;
    }
}

pub fn run_all(cfg: &VerifyConfig) -> VerifySummary {
    let criteria: Vec<CriterionResult> = CRITERIA.iter().map(|&(id, _)| run_criterion(id, cfg)).collect();
    VerifySummary { seed: cfg.seed, passed: criteria.iter().all(|c| c.passed), criteria }
}

/// Runs the criterion `id` (1–14). Unknown ids yield a failed result.
pub fn run_criterion(id: u32, cfg: &VerifyConfig) -> CriterionResult {
    let name = CRITERIA.iter().find(|c| c.0 == id).map_or("unknown criterion", |c| c.1);
    let rng = CounterRng::new(cfg.seed).fork(id as u64);
    let start = Instant::now();
    let out = match id {
        1 => classical_propagation(cfg, rng),
        2 => kantorovich(cfg, rng),
        3 => commutant_vs_prop(cfg, rng),
        4 => compression(cfg, rng),
        5 => cutting(cfg, rng),
        6 => union_unit(cfg, rng),
        7 => union_anchors(cfg),
        8 => spread_identity(cfg, rng),
        9 => no_escape(cfg, rng),
        10 => ac_sandwich(cfg, rng),
        11 => evolution(cfg, rng),
        12 => fourier(cfg, rng),
        13 => higson(),
        14 => filtration(cfg, rng),
        _ => Ok(Outcome { passed: false, instances: 0, worst: f64::NAN, detail: format!("no criterion {id}") }),
    };
    let out =
        out.unwrap_or_else(|e| Outcome { passed: false, instances: 0, worst: f64::NAN, detail: format!("error: {e}") });
    CriterionResult {
        id,
        name,
        passed: out.passed,
        instances: out.instances,
        worst: out.worst,
        detail: out.detail,
        millis: start.elapsed().as_millis(),
    }
}

fn random_rep(rng: &mut CounterRng, max_points: usize, max_mult: usize) -> Result<RepresentationOverMetric> {
    let n = 1 + rng.below(max_points);
    let m = oracles::random_integer_metric(rng, n);
    let mult = (0..n).map(|_| 1 + rng.below(max_mult)).collect();
    RepresentationOverMetric::new(m, mult)
}

fn classical_propagation(cfg: &VerifyConfig, mut rng: CounterRng) -> Result<Outcome> {
    let count = cfg.count(200);
    let mut out = Outcome::new(count);
    for inst in 0..count {
        let rep = random_rep(&mut rng, 12, 2)?;
        let density = rng.range(0.05, 0.4);
        let t = oracles::random_sparse(&mut rng, rep.dim(), density);
        let scale = rep.metric.scale().max(1.0);
        let report = prop_interval(&t, &PropContext::classical(rep.clone()), &cfg.tol)?;
        let sp = support_prop(&t, &rep, &cfg.tol)?;
        let width = report.interval.width();
        out.observe(width / scale);
        if width > 1e-6 * scale {
            out.fail(format!(
                "instance {inst}: interval [{}, {}] too wide",
                report.interval.lower, report.interval.upper
            ));
        }
        if report.interval.lower != sp {
            out.fail(format!("instance {inst}: lower {} differs from support propagation {sp}", report.interval.lower));
        }
    }
    if out.passed {
        out.detail = "lower end equals support propagation on every instance".into();
    }
    Ok(out)
}

fn kantorovich(cfg: &VerifyConfig, mut rng: CounterRng) -> Result<Outcome> {
    let count = cfg.count(100);
    let mut out = Outcome::new(count + 1);
    let mut point_mass_checked = 0;
    for inst in 0..count {
        let n = 1 + rng.below(30);
        let m = oracles::random_integer_metric(&mut rng, n);
        let scale = m.scale().max(1.0);
        let sparse = |rng: &mut CounterRng| -> Vec<f64> {
            let mut p = rng.probability_vector(n);
            for v in p.iter_mut() {
                if rng.bernoulli(0.3) {
                    *v = 0.0;
                }
            }
            let s: f64 = p.iter().sum();
            if s == 0.0 {
                let mut q = vec![0.0; n];
                q[rng.below(n)] = 1.0;
                q
            } else {
                p.into_iter().map(|v| v / s).collect()
            }
        };
        let x0 = rng.below(n);
        let mu = if inst % 4 == 0 {
            let mut p = vec![0.0; n];
            p[x0] = 1.0;
            p
        } else {
            sparse(&mut rng)
        };
        let nu = sparse(&mut rng);
        let r = mk_classical(
            &State::Probs { block: 0, probs: mu.clone() },
            &State::Probs { block: 0, probs: nu.clone() },
            &m,
            &cfg.tol,
        )?;
        let gap = (r.primal - r.dual).abs();
        out.observe(gap / scale);
        if gap > 1e-7 * scale {
            out.fail(format!("instance {inst}: primal {} vs dual {}", r.primal, r.dual));
        }
        if inst % 4 == 0 {
            point_mass_checked += 1;
            let exact = oracles::point_mass_transport(&m, x0, &nu);
            if (r.value - exact).abs() > 1e-7 * scale {
                out.fail(format!("instance {inst}: value {} vs point-mass transport {exact}", r.value));
            }
        }
    }
    let m = MetricSpace::on_line(&[0.0, 1.0, 3.0]);
    let r = mk_classical(&State::point_mass(3, 0), &State::uniform(3), &m, &cfg.tol)?;
    let exact = oracles::point_mass_transport(&m, 0, &[1.0 / 3.0; 3]);
    if (r.value - exact).abs() > 1e-9 || (exact - 4.0 / 3.0).abs() > 1e-15 {
        out.fail(format!("{{0,1,3}} case gave {} (oracle {exact})", r.value));
    }
    if out.passed {
        out.detail = format!("{{0,1,3}} case = {:.12}; {point_mass_checked} point-mass oracles matched", r.value);
    }
    Ok(out)
}

fn commutant_vs_prop(cfg: &VerifyConfig, mut rng: CounterRng) -> Result<Outcome> {
    let count = cfg.count(200);
    let mut out = Outcome::new(count);
    let mut worst_ratio: f64 = 0.0;
    for inst in 0..count {
        let rep = random_rep(&mut rng, 6, 1)?;
        let n = rep.dim();
        let ctx = PropContext::classical(rep.clone()).with_samples(0, rng.next_u64());
        if inst % 10 == 0 && n >= 2 {
            let x = rng.below(n);
            let y = (x + 1 + rng.below(n - 1)) % n;
            let t = Operator::matrix_unit(n, x, y);
            let iv = commutant_seminorm_interval(&t, &ctx, 2, &cfg.tol)?;
            let d = rep.metric.dist(x, y);
            out.observe((iv.lower - d).abs());
            if (iv.lower - d).abs() > 1e-9 {
                out.fail(format!("instance {inst}: matrix unit ({x},{y}) gave {} but d = {d}", iv.lower));
            }
            continue;
        }
        let t = {
            let p = rng.range(0.1, 0.5);
            oracles::random_sparse(&mut rng, n, p)
        };
        let iv = commutant_seminorm_interval(&t, &ctx, 2, &cfg.tol)?;
        let limit = 3.0 * support_prop(&t, &rep, &cfg.tol)? * op_norm(&t);
        if limit > 0.0 {
            worst_ratio = worst_ratio.max(iv.lower / limit);
        }
        if iv.lower > limit + 1e-9 {
            out.fail(format!("instance {inst}: lower {} exceeds 3 prop ||T|| = {limit}", iv.lower));
        }
    }
    if out.passed {
        out.detail = format!("largest lower / (3 prop ||T||) = {worst_ratio:.4}");
    }
    Ok(out)
}

fn compression(cfg: &VerifyConfig, mut rng: CounterRng) -> Result<Outcome> {
    let count = cfg.count(100);
    let mut out = Outcome::new(count);
    let mut worst_ratio: f64 = 0.0;
    for inst in 0..count {
        let n = 20 + rng.below(31);
        let rep = RepresentationOverMetric::simple(MetricSpace::integer_interval(0, n as i64 - 1));
        let r = (2 + rng.below(7)) as f64;
        let mut functions = Vec::new();
        let mut pos = rng.below(3);
        while pos < n {
            let len = 1 + rng.below(6);
            let end = (pos + len).min(n);
            let f: Vec<f64> =
                (0..n).map(|x| if (pos..end).contains(&x) { rng.range(0.05, 1.0) } else { 0.0 }).collect();
            functions.push(f);
            pos = end - 1 + r as usize;
        }
        let bumps = BumpFamily::from_functions(functions, f64::INFINITY);
        let t = if rng.bernoulli(0.5) {
            {
                let p = rng.below(6);
                oracles::random_banded(&mut rng, n, p)
            }
        } else {
            {
                let p = rng.range(0.05, 0.3);
                oracles::random_sparse(&mut rng, n, p)
            }
        };
        let (lstar_ub, _) = commutant_seminorm_upper(&t, &PropContext::classical(rep.clone()), &cfg.tol)?;
        let rep_out = disjoint_block_compress(&t, &rep, &bumps, lstar_ub, r, &cfg.tol)?;
        if rep_out.bound > 0.0 {
            worst_ratio = worst_ratio.max(rep_out.deviation / rep_out.bound);
            out.observe(rep_out.deviation / rep_out.bound);
        }
        if rep_out.violated {
            out.fail(format!(
                "instance {inst}: n = {n}, R = {r}, {} bumps: deviation {} > bound {}",
                bumps.functions.len(),
                rep_out.deviation,
                rep_out.bound
            ));
        }
    }
    if out.passed {
        out.detail = format!("largest deviation / bound = {worst_ratio:.4}");
    }
    Ok(out)
}

fn cutting(cfg: &VerifyConfig, mut rng: CounterRng) -> Result<Outcome> {
    let count = cfg.count(100);
    let mut out = Outcome::new(count);
    let mut worst_ratio: f64 = 0.0;
    let mut identity_checks = 0;
    for inst in 0..count {
        let bx = if rng.bernoulli(0.5) {
            GridBox::new(vec![0], vec![29 + rng.below(30) as i64], GridNorm::L1)?
        } else {
            let side = 5 + rng.below(3) as i64;
            GridBox::cube(2, side, GridNorm::L1)?
        };
        let m = bx.metric_space();
        let n = m.len();
        let rep = RepresentationOverMetric::simple(m);
        let r = rng.range(3.0, 10.0);
        let cover = grid_cover(&bx, r)?;
        if inst % 5 == 0 {
            identity_checks += 1;
            let d = Operator::from_diag(&(0..n).map(|_| rng.normal()).collect::<Vec<_>>());
            let c = cut(&d, &rep, &cover, r, 0.0, &cfg.tol)?;
            let diff = c.t_prime.max_abs_diff(&d);
            out.observe(diff);
            if diff > 1e-10 {
                out.fail(format!("instance {inst}: commuting input changed by {diff}"));
            }
            continue;
        }
        let t = if bx.dim() == 1 {
            {
                let p = 1 + rng.below(4);
                oracles::random_banded(&mut rng, n, p)
            }
        } else {
            oracles::random_sparse(&mut rng, n, 0.05)
        };
        let (lstar_ub, _) = commutant_seminorm_upper(&t, &PropContext::classical(rep.clone()), &cfg.tol)?;
        let c = cut(&t, &rep, &cover, r, lstar_ub, &cfg.tol)?;
        worst_ratio = worst_ratio.max(c.ratio);
        if !c.prop_ok {
            out.fail(format!("instance {inst}: prop(T') = {} exceeds R/2 + D = {}", c.prop_upper, c.prop_limit));
        }
        if !c.deviation_ok {
            out.fail(format!(
                "instance {inst}: deviation {} exceeds {} x {}",
                c.deviation, c.slack_factor, c.deviation_bound
            ));
        }
    }
    if out.passed {
        out.detail = format!(
            "largest deviation / (16(n+1)^2 L*/R) = {worst_ratio:.4}; {identity_checks} commuting inputs reproduced"
        );
    } else {
        out.detail = format!("{} (largest ratio {worst_ratio:.4})", out.detail);
    }
    out.worst = out.worst.max(worst_ratio);
    Ok(out)
}

fn union_unit(cfg: &VerifyConfig, mut rng: CounterRng) -> Result<Outcome> {
    let count = cfg.count(50);
    let mut out = Outcome::new(count);
    for inst in 0..count {
        let c = 1 + rng.below(5);
        let gap_count = if rng.bernoulli(0.5) { c } else { c - 1 };
        let gaps_q: Vec<Rational64> =
            (0..gap_count).map(|_| Rational64::new(1 + rng.below(40) as i64, 1 + rng.below(12) as i64)).collect();
        let gaps_f: Vec<f64> = gaps_q.iter().map(|g| *g.numer() as f64 / *g.denom() as f64).collect();
        let comps = (0..c)
            .map(|k| {
                if k % 2 == 0 {
                    UnionComponent::new(Seminorm::Spread { dim: 2 }, State::pure(2, 0), &cfg.tol)
                } else {
                    UnionComponent::new(
                        Seminorm::ClassicalLip(MetricSpace::on_line(&[0.0, 1.0, 3.0])),
                        State::point_mass(3, 0),
                        &cfg.tol,
                    )
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let u = UnionSpace::new(comps, gaps_f.clone())?;
        for n in 0..c {
            let expected_q = gaps_q.get(n).map_or(Rational64::from_integer(0), |g| g.recip());
            let got_q = approx_unit_rational(&gaps_q, c, n)?;
            if got_q != expected_q {
                out.fail(format!("instance {inst}: L(e_{n}) = {got_q} in exact arithmetic, expected {expected_q}"));
            }
            let expected_f = gaps_f.get(n).map_or(0.0, |g| 1.0 / g);
            let (_, got_f) = approx_unit(&u, n, &cfg.tol)?;
            out.observe((got_f - expected_f).abs());
            if (got_f - expected_f).abs() > 1e-12 {
                out.fail(format!("instance {inst}: L(e_{n}) = {got_f}, expected {expected_f}"));
            }
        }
    }
    if out.passed {
        out.detail = "exact rational equality on every unit".into();
    }
    Ok(out)
}

fn union_anchors(cfg: &VerifyConfig) -> Result<Outcome> {
    let three = MetricSpace::on_line(&[0.0, 1.0, 3.0]);
    let configs: Vec<(Vec<GridComponent>, Vec<f64>)> = vec![
        (vec![GridComponent::Qubit, GridComponent::Qubit], vec![1.5]),
        (vec![GridComponent::Qubit, GridComponent::Classical(three.clone())], vec![0.5]),
        (vec![GridComponent::Classical(three.clone()), GridComponent::Classical(three.clone())], vec![1.0]),
        (vec![GridComponent::Qubit, GridComponent::Classical(three.clone()), GridComponent::Qubit], vec![1.0, 0.5]),
        (
            vec![GridComponent::Classical(three.clone()), GridComponent::Qubit, GridComponent::Classical(three)],
            vec![1.5, 1.0],
        ),
    ];
    let grid: Vec<f64> = (-3..=3).map(|k| k as f64 * 0.5).collect();
    let mut out = Outcome::new(configs.iter().map(|c| c.1.len()).sum());
    for (ci, (comps, gaps)) in configs.iter().enumerate() {
        let components = comps
            .iter()
            .map(|c| match c {
                GridComponent::Qubit => UnionComponent::new(Seminorm::Spread { dim: 2 }, State::pure(2, 0), &cfg.tol),
                GridComponent::Classical(m) => {
                    UnionComponent::new(Seminorm::ClassicalLip(m.clone()), State::point_mass(3, 0), &cfg.tol)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let u = UnionSpace::new(components, gaps.clone())?;
        for i in 0..gaps.len() {
            let mu = u.components[i].anchor.clone().with_block(i);
            let nu = u.components[i + 1].anchor.clone().with_block(i + 1);
            let d = mk_union(&mu, &nu, &u, &cfg.tol)?;
            let oracle = oracles::union_anchor_grid(comps, gaps, i, &grid);
            let err = (d - oracle).abs().max((d - gaps[i]).abs());
            out.observe(err);
            if err > 1e-7 {
                out.fail(format!("union {ci}, anchors {i}-{}: mk {d}, grid oracle {oracle}, gap {}", i + 1, gaps[i]));
            }
        }
    }
    if out.passed {
        out.detail = "closed form, gap and grid oracle agree".into();
    }
    Ok(out)
}

fn spread_identity(cfg: &VerifyConfig, mut rng: CounterRng) -> Result<Outcome> {
    let count = cfg.count(100);
    let mut out = Outcome::new(count);
    for inst in 0..count {
        let d = 1 + rng.below(6);
        let (rho, sigma) = (rng.density_matrix(d), rng.density_matrix(d));
        let r = mk_spread(
            &State::Density { block: 0, density: rho.clone() },
            &State::Density { block: 0, density: sigma.clone() },
            &cfg.tol,
        )?;
        let oracle = oracles::eigen_trace_norm(&(&rho - &sigma), &cfg.tol);
        let err = (r.value - oracle).abs();
        out.observe(err);
        if !(err <= 1e-9) {
            out.fail(format!("instance {inst} (d = {d}): mk {} vs trace norm {oracle}", r.value));
        }
    }
    Ok(out)
}

fn no_escape(cfg: &VerifyConfig, mut rng: CounterRng) -> Result<Outcome> {
    let count = cfg.count(100);
    let mut out = Outcome::new(count);
    for inst in 0..count {
        let k = 1 + rng.below(6);
        let l = Seminorm::Spread { dim: k };
        let t = rng.gaussian_operator(k, k);
        let a = l.sample_unit(&mut rng, &cfg.tol).scale(rng.range(0.1, 1.0));
        let w = spectral_witness(&t, &a, 2.0, &cfg.tol)?;
        out.observe(w);
        if w > 1e-10 {
            out.fail(format!("instance {inst} (k = {k}): witness {w} at R = 2"));
        }
    }
    Ok(out)
}

fn ac_sandwich(cfg: &VerifyConfig, mut rng: CounterRng) -> Result<Outcome> {
    let count = cfg.count(100);
    let mut out = Outcome::new(count);
    for inst in 0..count {
        let n = 1 + rng.below(10);
        let k = 1 + rng.below(3);
        let space = ACSpace::new(oracles::random_integer_metric(&mut rng, n), k)?;
        let t = {
            let p = rng.range(0.05, 0.4);
            oracles::random_sparse(&mut rng, n * k, p)
        };
        let r = ac_prop_sandwich(&t, &space, 10, rng.next_u64(), &cfg.tol)?;
        out.observe(r.witness_lower - r.upper_limit);
        if !r.upper_ok {
            out.fail(format!(
                "instance {inst}: witness radius {} above C(P + R0) = {}",
                r.witness_lower, r.upper_limit
            ));
        }
        if !r.lower_ok {
            out.fail(format!(
                "instance {inst}: block propagation {} not witnessed (best {})",
                r.block_prop, r.witness_lower
            ));
        }
        if !r.round_trip_exact {
            out.fail(format!("instance {inst}: block round trip not exact"));
        }
    }
    Ok(out)
}

fn evolution(cfg: &VerifyConfig, mut rng: CounterRng) -> Result<Outcome> {
    let count = cfg.count(200);
    let mut out = Outcome::new(count);
    for inst in 0..count {
        let k = 1 + rng.below(8);
        let d = rng.gaussian_hermitian(k);
        let a = rng.gaussian_hermitian(k);
        let t = rng.range(-5.0, 5.0);
        let (lhs, rhs) = evo_commutator_check(&d, &a, t, &cfg.tol)?;
        out.observe(lhs - rhs);
        if lhs > rhs + 1e-9 * (1.0 + rhs) {
            out.fail(format!("instance {inst}: ||[e^itD, a]|| = {lhs} > |t| ||[D, a]|| = {rhs}"));
        }
    }
    for t in [-2.7, -0.4, 0.0, 0.9, 1.5, 3.3] {
        let (lhs, _) = evo_commutator_check(&Operator::pauli_z(), &Operator::pauli_x(), t, &cfg.tol)?;
        if (lhs - oracles::qubit_evolution(t)).abs() > 1e-9 {
            out.fail(format!("qubit at t = {t}: {lhs} vs 2|sin t|"));
        }
    }
    Ok(out)
}

fn fourier(cfg: &VerifyConfig, mut rng: CounterRng) -> Result<Outcome> {
    let count = cfg.count(20);
    let mut out = Outcome::new(count);
    let prof = FourierProfile::sinc(2001)?;
    let mut worst_ratio: f64 = 0.0;
    for inst in 0..count {
        let k = 1 + rng.below(6);
        let g = rng.gaussian_hermitian(k);
        let norm = op_norm(&g);
        let d = if norm > 0.0 { g.scale(rng.range(0.0, 3.0) / norm) } else { g };
        let (phi, bound) = fourier_func_calc(&d, &prof, &cfg.tol)?;
        let err = op_norm(&(&phi - &oracles::sinc_of(&d, &cfg.tol)));
        out.observe(err);
        if err > 1e-6 {
            out.fail(format!("instance {inst}: reconstruction error {err}"));
        }
        if (bound - 0.5).abs() > 1e-6 {
            out.fail(format!("bound evaluated to {bound}"));
        }
        let check = lstar_fourier_check(&d, &prof, 5, rng.next_u64(), &cfg.tol)?;
        worst_ratio = worst_ratio.max(check.max_ratio);
        if !check.ok {
            out.fail(format!("instance {inst}: commutator ratio {}", check.max_ratio));
        }
    }
    if out.passed {
        out.detail = format!("largest commutator / bound ratio {worst_ratio:.6}");
    }
    Ok(out)
}

fn higson() -> Result<Outcome> {
    let mut out = Outcome::new(5);
    let (r, k, n) = (10.0, 10_000, 100_000);
    let f: Vec<f64> = (0..=n).map(|x| if x == 0 { 0.0 } else { (x as f64).ln().sin() }).collect();
    let score = slow_osc_score(&f, r, k)?;
    let bound = oracles::sin_log_mean_value_bound(r, k, n);
    out.observe(score);
    if !(score < 1e-3) || score > bound {
        out.fail(format!("sin(log x): score {score}, mean-value bound {bound}"));
    }
    for k in [10usize, 100, 1_000, 10_000] {
        let g: Vec<f64> = (0..=k + 1_000).map(|x| (x as f64).sin()).collect();
        let s = slow_osc_score(&g, 3.0, k)?;
        if s < 1.0 {
            out.fail(format!("sin: score {s} < 1 at K = {k}"));
        }
    }
    if out.passed {
        out.detail = format!("sin(log x) score {score:.4e} (bound {bound:.4e})");
    }
    Ok(out)
}

fn filtration(cfg: &VerifyConfig, mut rng: CounterRng) -> Result<Outcome> {
    let count = cfg.count(100);
    let mut out = Outcome::new(count);
    for inst in 0..count {
        let rep = random_rep(&mut rng, 10, 2)?;
        let n = rep.dim();
        let sample = [
            {
                let p = rng.range(0.05, 0.4);
                oracles::random_sparse(&mut rng, n, p)
            },
            {
                let p = rng.range(0.05, 0.4);
                oracles::random_sparse(&mut rng, n, p)
            },
        ];
        let r = filtration_check(&sample, &rep, &cfg.tol)?;
        if !r.all_ok() {
            out.fail(format!("instance {inst}: {}", r.failures.join("; ")));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_criterion_fails() {
        let r = run_criterion(99, &VerifyConfig::new(1));
        assert!(!r.passed);
    }

    #[test]
    fn small_run_passes() {
        let cfg = VerifyConfig { instances: Some(3), ..VerifyConfig::new(7) };
        for (id, _) in CRITERIA {
            let r = run_criterion(id, &cfg);
            assert!(r.passed, "{}", r.line());
        }
    }
}
