//! Cover-based cutting: compress an operator to finite propagation with an
//! error controlled by its relative-commutant seminorm.

use serde::Serialize;

use crate::coarse::{support_prop, RepresentationOverMetric};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{op_norm, Operator};
use crate::metric::{bump_around, bump_partition, grid_cover, BumpFamily, Cover, GridBox};

/// Deviation of `eTe` from its block-diagonal compression `Σ_j e_j T e_j`.
#[derive(Debug, Clone, Serialize)]
pub struct CompressReport {
    pub deviation: f64,
    /// `(2/R) · L*` upper estimate.
    pub bound: f64,
    pub violated: bool,
}

/// Checks `‖eTe − Σ_j e_j T e_j‖ ≤ (2/R)·L*(T)` for bumps whose supports are
/// at least `R` apart (`e = Σ_j e_j`).
pub fn disjoint_block_compress(
    t: &Operator,
    rep: &RepresentationOverMetric,
    bumps: &BumpFamily,
    lstar_ub: f64,
    r: f64,
    tol: &Tolerances,
) -> Result<CompressReport> {
    if t.rows() != rep.dim() || t.cols() != rep.dim() {
        return Err(Error::DimensionMismatch(format!(
            "operator is {}x{}, representation has {}",
            t.rows(),
            t.cols(),
            rep.dim()
        )));
    }
    let m = &rep.metric;
    let slack = tol.metric_triangle * m.scale();
    for a in 0..bumps.support_sets.len() {
        for b in (a + 1)..bumps.support_sets.len() {
            let (sa, sb) = (&bumps.support_sets[a], &bumps.support_sets[b]);
            if !sa.is_empty() && !sb.is_empty() && m.set_distance(sa, sb) < r - slack {
                return Err(Error::SupportsNotDisjoint { first: a, second: b, radius: r });
            }
        }
    }
    if let Some(bad) = bumps.functions.iter().flatten().find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(Error::InvalidArgument(format!("bump value {bad} is not in [0, 1]")));
    }
    let e = rep.expand(&bumps.sum());
    let mut compressed = Operator::zeros(t.rows(), t.cols());
    for f in &bumps.functions {
        let ej = rep.expand(f);
        compressed = &compressed + &t.diag_sandwich(&ej, &ej);
    }
    let deviation = op_norm(&(&t.diag_sandwich(&e, &e) - &compressed));
    let bound = 2.0 / r * lstar_ub;
    Ok(CompressReport { deviation, bound, violated: deviation > bound + 1e-8 })
}

/// Outcome of [`cut`].
#[derive(Debug, Clone, Serialize)]
pub struct CutReport {
    #[serde(skip)]
    pub t_prime: Operator,
    pub r: f64,
    pub colors: usize,
    pub diam_bound: f64,
    pub deviation: f64,
    /// `support_prop(T′)`, computed exactly from the support.
    pub prop_upper: f64,
    /// `R/2 + D`.
    pub prop_limit: f64,
    pub prop_ok: bool,
    /// `16 (n+1)² L* / R`.
    pub deviation_bound: f64,
    pub slack_factor: f64,
    pub deviation_ok: bool,
    /// `deviation / deviation_bound` (0 when both vanish).
    pub ratio: f64,
    /// Largest Lipschitz constant of the normalised partition, against `4/R`.
    pub partition_lip: f64,
    pub lstar_ub: f64,
}

/// Builds `T′ = Σ_{ii′} T_{ii′}` from a coloured cover:
///
/// * `T_ii = Σ_j ẽ_j T ẽ_j` over the members of colour `i`;
/// * for `i ≠ i′`, `X = p⁽ⁱ⁾ ẽ⁽ⁱ′⁾ T ẽ⁽ⁱ⁾ p⁽ⁱ′⁾` is cut down by the bumps
///   `f_{jj′}` (1 on the `R/4`-neighbourhoods of `U_j ∩ U_j′`-pairs, gone at
///   `3R/8`): `T_ii′ = Σ_{jj′} f_{jj′} X f_{jj′}`.
///
/// Here `ẽ_j` is the normalised bump partition, `ẽ⁽ⁱ⁾` the sum over colour
/// `i` and `p⁽ⁱ⁾` the indicator of its support.
pub fn cut(
    t: &Operator,
    rep: &RepresentationOverMetric,
    cover: &Cover,
    r: f64,
    lstar_ub: f64,
    tol: &Tolerances,
) -> Result<CutReport> {
    if t.rows() != rep.dim() || t.cols() != rep.dim() {
        return Err(Error::DimensionMismatch(format!(
            "operator is {}x{}, representation has {}",
            t.rows(),
            t.cols(),
            rep.dim()
        )));
    }
    let m = &rep.metric;
    cover.validate(m, r)?;
    let partition = bump_partition(m, cover, r)?;
    let colors = cover.color_count();
    let n_pts = m.len();

    let color_sum: Vec<Vec<f64>> = (0..colors)
        .map(|c| {
            let mut s = vec![0.0; n_pts];
            for j in cover.color_class(c) {
                for x in 0..n_pts {
                    s[x] += partition.normalized[j][x];
                }
            }
            s
        })
        .collect();
    let indicator: Vec<Vec<f64>> =
        color_sum.iter().map(|s| s.iter().map(|&v| if v > 0.0 { 1.0 } else { 0.0 }).collect()).collect();
    let inner: Vec<Vec<f64>> = cover.sets.iter().map(|u| bump_around(m, u, r / 4.0, 8.0 / r)).collect();

    let mut t_prime = Operator::zeros(t.rows(), t.cols());
    for i in 0..colors {
        for j in cover.color_class(i) {
            let e = rep.expand(&partition.normalized[j]);
            t_prime = &t_prime + &t.diag_sandwich(&e, &e);
        }
    }
    for i in 0..colors {
        for ip in 0..colors {
            if i == ip {
                continue;
            }
            let left: Vec<f64> = (0..n_pts).map(|x| indicator[i][x] * color_sum[ip][x]).collect();
            let right: Vec<f64> = (0..n_pts).map(|x| color_sum[i][x] * indicator[ip][x]).collect();
            let x_op = t.diag_sandwich(&rep.expand(&left), &rep.expand(&right));
            // Σ_{jj′} f X f acts entrywise through the weight Σ f(x) f(y).
            let mut weight = vec![vec![0.0; n_pts]; n_pts];
            for j in cover.color_class(i) {
                for jp in cover.color_class(ip) {
                    let f: Vec<f64> = (0..n_pts).map(|x| inner[j][x].min(inner[jp][x])).collect();
                    let supp: Vec<usize> = (0..n_pts).filter(|&x| f[x] > 0.0).collect();
                    for &x in &supp {
                        for &y in &supp {
                            weight[x][y] += f[x] * f[y];
                        }
                    }
                }
            }
            let rows = t.rows();
            let term = Operator::from_fn(rows, rows, |a, b| x_op.get(a, b) * weight[rep.point_of(a)][rep.point_of(b)]);
            t_prime = &t_prime + &term;
        }
    }

    let deviation = op_norm(&(t - &t_prime));
    let prop_upper = support_prop(&t_prime, rep, tol)?;
    let prop_limit = r / 2.0 + cover.diam_bound;
    let colors_f = colors as f64;
    let deviation_bound = 16.0 * colors_f * colors_f * lstar_ub / r;
    let ratio = if deviation_bound > 0.0 {
        deviation / deviation_bound
    } else if deviation <= 1e-10 {
        0.0
    } else {
        f64::INFINITY
    };
    Ok(CutReport {
        t_prime,
        r,
        colors,
        diam_bound: cover.diam_bound,
        deviation,
        prop_upper,
        prop_limit,
        prop_ok: prop_upper <= prop_limit,
        deviation_bound,
        slack_factor: tol.cut_slack,
        deviation_ok: deviation <= tol.cut_slack * deviation_bound + 1e-10 * (1.0 + op_norm(t)),
        ratio,
        partition_lip: partition.max_normalized_lip(),
        lstar_ub,
    })
}

/// Outcome of [`an_approximate`].
#[derive(Debug, Clone, Serialize)]
pub struct AnReport {
    pub cut: CutReport,
    pub alpha: f64,
    /// `C′ = D / R` measured on the cover.
    pub c_prime: f64,
    /// `C = 16 (n+1)² (C′ + 1/2)`.
    pub c_impl: f64,
    pub deviation_ok: bool,
    pub prop_ok: bool,
    /// `‖T′‖ · prop(T′)` and its limit `(1 + ‖T − T′‖/α) · C · L*`.
    pub norm_prop_product: f64,
    pub norm_prop_limit: f64,
}

impl AnReport {
    pub fn ok(&self) -> bool {
        self.deviation_ok
            && self.prop_ok
            && self.cut.prop_ok
            && self.norm_prop_product <= self.norm_prop_limit + 1e-9 * (1.0 + self.norm_prop_limit)
    }
}

/// Finite-propagation approximation at accuracy `alpha` on a lattice box:
/// `R = 16 (n+1)² L*/α`, grid cover at `R`, then [`cut`].
pub fn an_approximate(
    t: &Operator,
    alpha: f64,
    grid: &GridBox,
    rep: &RepresentationOverMetric,
    lstar_ub: f64,
    tol: &Tolerances,
) -> Result<AnReport> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidArgument(format!("alpha must be positive, got {alpha}")));
    }
    let colors = 1usize << grid.dim();
    let cf = colors as f64;
    if lstar_ub == 0.0 {
        // Nothing to cut: T already commutes with every Lipschitz function.
        let p = support_prop(t, rep, tol)?;
        let cut = CutReport {
            t_prime: t.clone(),
            r: 0.0,
            colors,
            diam_bound: 0.0,
            deviation: 0.0,
            prop_upper: p,
            prop_limit: p,
            prop_ok: true,
            deviation_bound: 0.0,
            slack_factor: tol.cut_slack,
            deviation_ok: true,
            ratio: 0.0,
            partition_lip: 0.0,
            lstar_ub,
        };
        return Ok(AnReport {
            cut,
            alpha,
            c_prime: 0.0,
            c_impl: 16.0 * cf * cf * 0.5,
            deviation_ok: true,
            prop_ok: p == 0.0,
            norm_prop_product: op_norm(t) * p,
            norm_prop_limit: 0.0,
        });
    }
    let r = 16.0 * cf * cf * lstar_ub / alpha;
    let cover = grid_cover(grid, r)?;
    let report = cut(t, rep, &cover, r, lstar_ub, tol)?;
    let c_prime = cover.diam_bound / r;
    let n1 = report.colors as f64;
    let c_impl = 16.0 * n1 * n1 * (c_prime + 0.5);
    let prop_limit = c_impl * lstar_ub / alpha;
    let deviation_ok = report.deviation < tol.cut_slack * alpha;
    let prop_ok = report.prop_upper <= prop_limit * (1.0 + 1e-12);
    let norm_prop_product = op_norm(&report.t_prime) * report.prop_upper;
    let norm_prop_limit = (1.0 + report.deviation / alpha) * c_impl * lstar_ub;
    Ok(AnReport { cut: report, alpha, c_prime, c_impl, deviation_ok, prop_ok, norm_prop_product, norm_prop_limit })
}

/// One CSV row of an R-sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    #[serde(rename = "R")]
    pub r: f64,
    pub deviation: f64,
    pub bound: f64,
    pub ratio: f64,
}

/// Cuts with grid covers over a list of radii.
pub fn cut_sweep(
    t: &Operator,
    grid: &GridBox,
    rep: &RepresentationOverMetric,
    radii: &[f64],
    lstar_ub: f64,
    tol: &Tolerances,
) -> Result<Vec<SweepRow>> {
    radii
        .iter()
        .map(|&r| {
            let cover = grid_cover(grid, r)?;
            let c = cut(t, rep, &cover, r, lstar_ub, tol)?;
            Ok(SweepRow { r, deviation: c.deviation, bound: c.deviation_bound, ratio: c.ratio })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{GridNorm, MetricSpace};
    use crate::rng::CounterRng;
    use num_complex::Complex64;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn banded(n: usize, width: usize, rng: &mut CounterRng) -> Operator {
        let g = rng.gaussian_operator(n, n);
        Operator::from_fn(n, n, |i, j| if i.abs_diff(j) <= width { g.get(i, j) } else { Complex64::new(0.0, 0.0) })
    }

    #[test]
    fn compress_examples() {
        let m = MetricSpace::integer_interval(0, 9);
        let rep = RepresentationOverMetric::simple(m.clone());
        let mut rng = CounterRng::new(1);
        let t = rng.gaussian_operator(10, 10);
        let single = BumpFamily::from_functions(vec![vec![0.5; 10]], 0.0);
        let r = disjoint_block_compress(&t, &rep, &single, 1.0, 3.0, &tol()).unwrap();
        assert!(r.deviation < 1e-14);

        let a: Vec<f64> = (0..10).map(|x| if x < 3 { 1.0 } else { 0.0 }).collect();
        let b: Vec<f64> = (0..10).map(|x| if x > 6 { 0.7 } else { 0.0 }).collect();
        let fam = BumpFamily::from_functions(vec![a, b], 0.0);
        let block =
            Operator::from_fn(10, 10, |i, j| if (i < 5) == (j < 5) { t.get(i, j) } else { Complex64::new(0.0, 0.0) });
        let r = disjoint_block_compress(&block, &rep, &fam, 0.0, 4.0, &tol()).unwrap();
        assert!(r.deviation < 1e-14);
        assert!(matches!(
            disjoint_block_compress(&block, &rep, &fam, 0.0, 6.0, &tol()),
            Err(Error::SupportsNotDisjoint { .. })
        ));
    }

    #[test]
    fn cut_reproduces_commuting_operators() {
        let bx = GridBox::new(vec![0], vec![39], GridNorm::L1).unwrap();
        let rep = RepresentationOverMetric::simple(bx.metric_space());
        let cover = grid_cover(&bx, 4.0).unwrap();
        let d = Operator::from_diag(&(0..40).map(|x| (x as f64).sin()).collect::<Vec<_>>());
        let c = cut(&d, &rep, &cover, 4.0, 0.0, &tol()).unwrap();
        assert!(c.deviation <= 1e-10 && c.t_prime.max_abs_diff(&d) <= 1e-10);
        let id = cut(&Operator::identity(40), &rep, &cover, 4.0, 0.0, &tol()).unwrap();
        assert!(id.t_prime.max_abs_diff(&Operator::identity(40)) <= 1e-10);
    }

    #[test]
    fn cut_propagation_bound_and_deviation() {
        let bx = GridBox::new(vec![0], vec![59], GridNorm::L1).unwrap();
        let rep = RepresentationOverMetric::simple(bx.metric_space());
        let mut rng = CounterRng::new(5);
        let t = banded(60, 3, &mut rng);
        let lstar = 3.0 * 3.0 * op_norm(&t);
        for r in [5.0, 10.0, 20.0] {
            let cover = grid_cover(&bx, r).unwrap();
            let c = cut(&t, &rep, &cover, r, lstar, &tol()).unwrap();
            assert!(c.prop_ok, "{c:?}");
            assert!(c.deviation_ok, "{c:?}");
        }
    }

    #[test]
    fn an_approximation_end_to_end() {
        let bx = GridBox::new(vec![0], vec![79], GridNorm::L1).unwrap();
        let rep = RepresentationOverMetric::simple(bx.metric_space());
        let mut rng = CounterRng::new(8);
        let t = banded(80, 2, &mut rng).scale(0.01);
        let lstar = 3.0 * 2.0 * op_norm(&t);
        let rep_report = an_approximate(&t, op_norm(&t), &bx, &rep, lstar, &tol()).unwrap();
        assert!(rep_report.ok(), "{rep_report:?}");
        let zero = an_approximate(&Operator::identity(80), 0.1, &bx, &rep, 0.0, &tol()).unwrap();
        assert!(zero.ok() && zero.cut.t_prime == Operator::identity(80));
    }
}
