//! Finite metric spaces, bounded-multiplicity covers and Lipschitz bump
//! partitions of unity.

use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, MetricViolation, Result};

/// Finite point set with a validated distance matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MetricJson")]
pub struct MetricSpace {
    labels: Vec<String>,
    dist: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
struct MetricJson {
    #[serde(default)]
    labels: Option<Vec<String>>,
    dist: Vec<Vec<f64>>,
}

impl TryFrom<MetricJson> for MetricSpace {
    type Error = String;

    fn try_from(m: MetricJson) -> std::result::Result<Self, String> {
        MetricSpace::new(m.dist, m.labels, &Tolerances::default()).map_err(|e| format!("field `dist`: {e}"))
    }
}

impl MetricSpace {
    /// Validates a candidate distance matrix. Labels default to `0..n`.
    pub fn new(dist: Vec<Vec<f64>>, labels: Option<Vec<String>>, tol: &Tolerances) -> Result<Self> {
        validate_metric(&dist, tol).map_err(Error::InvalidMetric)?;
        let n = dist.len();
        let labels = labels.unwrap_or_else(|| (0..n).map(|i| i.to_string()).collect());
        if labels.len() != n {
            return Err(Error::DimensionMismatch(format!("{} labels for {n} points", labels.len())));
        }
        Ok(Self { labels, dist })
    }

    /// Points on the real line with `|x - y|`.
    pub fn on_line(coords: &[f64]) -> Self {
        let dist = coords.iter().map(|a| coords.iter().map(|b| (a - b).abs()).collect()).collect();
        let labels = coords.iter().map(|c| c.to_string()).collect();
        Self { labels, dist }
    }

    /// Integer interval `[lo, hi]` with the usual distance.
    pub fn integer_interval(lo: i64, hi: i64) -> Self {
        let coords: Vec<f64> = (lo..=hi).map(|x| x as f64).collect();
        Self::on_line(&coords)
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dist(&self, x: usize, y: usize) -> f64 {
        self.dist[x][y]
    }

    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.dist
    }

    /// Largest distance (the "scale" in relative tolerances).
    pub fn scale(&self) -> f64 {
        self.dist.iter().flatten().fold(0.0, |m, &d| m.max(d))
    }

    pub fn diameter_of(&self, set: &[usize]) -> f64 {
        let mut d: f64 = 0.0;
        for &x in set {
            for &y in set {
                d = d.max(self.dist[x][y]);
            }
        }
        d
    }

    pub fn dist_to_set(&self, x: usize, set: &[usize]) -> f64 {
        set.iter().map(|&y| self.dist[x][y]).fold(f64::INFINITY, f64::min)
    }

    pub fn set_distance(&self, a: &[usize], b: &[usize]) -> f64 {
        a.iter().map(|&x| self.dist_to_set(x, b)).fold(f64::INFINITY, f64::min)
    }

    /// The function `d(·, x)`.
    pub fn distance_function(&self, x: usize) -> Vec<f64> {
        self.dist[x].clone()
    }

    /// Sub-space on the given points.
    pub fn restrict(&self, points: &[usize]) -> Self {
        Self {
            labels: points.iter().map(|&i| self.labels[i].clone()).collect(),
            dist: points.iter().map(|&i| points.iter().map(|&j| self.dist[i][j]).collect()).collect(),
        }
    }
}

/// Checks every metric axiom and returns all violations found.
pub fn validate_metric(dist: &[Vec<f64>], tol: &Tolerances) -> std::result::Result<(), Vec<MetricViolation>> {
    let n = dist.len();
    let mut errs = Vec::new();
    if let Some(bad) = dist.iter().find(|r| r.len() != n) {
        return Err(vec![MetricViolation::NotSquare { rows: n, cols: bad.len() }]);
    }
    let mut scale: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            if !dist[i][j].is_finite() {
                errs.push(MetricViolation::NonFinite(i, j));
            } else {
                scale = scale.max(dist[i][j].abs());
            }
        }
    }
    if !errs.is_empty() {
        return Err(errs);
    }
    for i in 0..n {
        if dist[i][i] != 0.0 {
            errs.push(MetricViolation::NonzeroDiagonal(i));
        }
        for j in (i + 1)..n {
            if dist[i][j] != dist[j][i] {
                errs.push(MetricViolation::Asymmetry(i, j));
            }
            if dist[i][j] < 0.0 || dist[j][i] < 0.0 {
                errs.push(MetricViolation::NegativeDistance(i, j));
            } else if dist[i][j] == 0.0 || dist[j][i] == 0.0 {
                errs.push(MetricViolation::ZeroDistance(i, j));
            }
        }
    }
    let slack = tol.metric_triangle * scale;
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if x == y || y == z || x == z || x > z {
                    continue;
                }
                if dist[x][z] > dist[x][y] + dist[y][z] + slack {
                    errs.push(MetricViolation::TriangleViolation(x, y, z));
                }
            }
        }
    }
    if errs.is_empty() {
        Ok(())
    } else {
        Err(errs)
    }
}

/// `max_{x≠y} |f(x) - f(y)| / d(x, y)`.
pub fn lipschitz_const(f: &[f64], m: &MetricSpace) -> f64 {
    assert_eq!(f.len(), m.len(), "function length must match the point count");
    let mut l: f64 = 0.0;
    for x in 0..f.len() {
        for y in (x + 1)..f.len() {
            l = l.max((f[x] - f[y]).abs() / m.dist(x, y));
        }
    }
    l
}

/// A cover by point subsets with a diameter bound and a colouring of its members.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cover {
    pub sets: Vec<Vec<usize>>,
    pub diam_bound: f64,
    pub colors: Vec<usize>,
}

impl Cover {
    pub fn new(sets: Vec<Vec<usize>>, colors: Vec<usize>, m: &MetricSpace) -> Result<Self> {
        if sets.len() != colors.len() {
            return Err(Error::CoverInvalid(format!("{} sets but {} colours", sets.len(), colors.len())));
        }
        if let Some(&bad) = sets.iter().flatten().find(|&&p| p >= m.len()) {
            return Err(Error::CoverInvalid(format!("point index {bad} out of range")));
        }
        let diam_bound = sets.iter().map(|s| m.diameter_of(s)).fold(0.0, f64::max);
        Ok(Self { sets, diam_bound, colors })
    }

    /// Number of colours used (the `n + 1` of the multiplicity bound).
    pub fn color_count(&self) -> usize {
        self.colors.iter().max().map_or(0, |c| c + 1)
    }

    /// Indices of the members carrying colour `c`.
    pub fn color_class(&self, c: usize) -> Vec<usize> {
        (0..self.sets.len()).filter(|&j| self.colors[j] == c).collect()
    }

    pub fn check_covers(&self, m: &MetricSpace) -> Result<()> {
        let mut hit = vec![false; m.len()];
        for &p in self.sets.iter().flatten() {
            hit[p] = true;
        }
        match hit.iter().position(|h| !h) {
            Some(point) => Err(Error::NotACover { point }),
            None => Ok(()),
        }
    }

    /// Full validity check for radius `r`: covering, diameter bound, and
    /// same-colour members at distance `> r`.
    pub fn validate(&self, m: &MetricSpace, r: f64) -> Result<()> {
        self.check_covers(m)?;
        for (j, s) in self.sets.iter().enumerate() {
            if s.is_empty() {
                return Err(Error::CoverInvalid(format!("member {j} is empty")));
            }
            if m.diameter_of(s) > self.diam_bound {
                return Err(Error::CoverInvalid(format!("member {j} exceeds the diameter bound")));
            }
        }
        for a in 0..self.sets.len() {
            for b in (a + 1)..self.sets.len() {
                if self.colors[a] == self.colors[b] && m.set_distance(&self.sets[a], &self.sets[b]) <= r {
                    return Err(Error::CoverInvalid(format!(
                        "members {a} and {b} share colour {} but are not {r}-disjoint",
                        self.colors[a]
                    )));
                }
            }
        }
        Ok(())
    }
}

/// `max_x #{U : B_R(x) ∩ U ≠ ∅}` with closed balls.
pub fn r_multiplicity(cover: &Cover, m: &MetricSpace, r: f64) -> Result<usize> {
    cover.check_covers(m)?;
    Ok((0..m.len()).map(|x| cover.sets.iter().filter(|u| m.dist_to_set(x, u) <= r).count()).max().unwrap_or(0))
}

/// Norm used on an integer lattice box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GridNorm {
    L1,
    LInf,
}

/// Box `Π [lo_k, hi_k]` in `Z^d`, points enumerated in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct GridBox {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
    pub norm: GridNorm,
}

impl GridBox {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>, norm: GridNorm) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() || lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return Err(Error::EmptyBox);
        }
        Ok(Self { lo, hi, norm })
    }

    /// `[0, side-1]^dim`.
    pub fn cube(dim: usize, side: i64, norm: GridNorm) -> Result<Self> {
        if side < 1 {
            return Err(Error::EmptyBox);
        }
        Self::new(vec![0; dim], vec![side - 1; dim], norm)
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn points(&self) -> Vec<Vec<i64>> {
        let mut pts = vec![Vec::new()];
        for k in 0..self.dim() {
            let mut next = Vec::new();
            for p in &pts {
                for c in self.lo[k]..=self.hi[k] {
                    let mut q = p.clone();
                    q.push(c);
                    next.push(q);
                }
            }
            pts = next;
        }
        pts
    }

    fn distance(&self, a: &[i64], b: &[i64]) -> f64 {
        let diffs = a.iter().zip(b).map(|(x, y)| (x - y).unsigned_abs() as f64);
        match self.norm {
            GridNorm::L1 => diffs.sum(),
            GridNorm::LInf => diffs.fold(0.0, f64::max),
        }
    }

    pub fn metric_space(&self) -> MetricSpace {
        let pts = self.points();
        let dist = pts.iter().map(|a| pts.iter().map(|b| self.distance(a, b)).collect()).collect();
        let labels = pts.iter().map(|p| p.iter().map(i64::to_string).collect::<Vec<_>>().join(",")).collect();
        MetricSpace { labels, dist }
    }
}

/// Blocks of side `2⌈R⌉` per axis, coloured by the parity of the block index
/// on each axis (product colouring, `2^d` colours). Same-colour blocks are more
/// than `R` apart and every closed `R`-ball meets at most `2^d` blocks.
pub fn grid_cover(bx: &GridBox, r: f64) -> Result<Cover> {
    if !(r > 0.0) {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {r}")));
    }
    let side = (2.0 * r.ceil()) as i64;
    let pts = bx.points();
    let d = bx.dim();
    let mut index: std::collections::BTreeMap<Vec<i64>, usize> = std::collections::BTreeMap::new();
    let mut sets: Vec<Vec<usize>> = Vec::new();
    let mut colors = Vec::new();
    let mut extents: Vec<Vec<(i64, i64)>> = Vec::new();
    for (p, coords) in pts.iter().enumerate() {
        let block: Vec<i64> = (0..d).map(|k| (coords[k] - bx.lo[k]).div_euclid(side)).collect();
        let j = *index.entry(block.clone()).or_insert_with(|| {
            sets.push(Vec::new());
            colors.push(block.iter().enumerate().map(|(k, b)| ((b & 1) as usize) << k).sum());
            extents.push(coords.iter().map(|&c| (c, c)).collect());
            sets.len() - 1
        });
        sets[j].push(p);
        for k in 0..d {
            let e = &mut extents[j][k];
            e.0 = e.0.min(coords[k]);
            e.1 = e.1.max(coords[k]);
        }
    }
    // Blocks are boxes, so their diameter is read off the extents exactly.
    let diam_bound = extents
        .iter()
        .map(|ext| {
            let widths = ext.iter().map(|(a, b)| (b - a) as f64);
            match bx.norm {
                GridNorm::L1 => widths.sum(),
                GridNorm::LInf => widths.fold(0.0, f64::max),
            }
        })
        .fold(0.0, f64::max);
    // Re-index colours densely so `color_count` reflects the colours in use.
    let mut used: Vec<usize> = colors.clone();
    used.sort_unstable();
    used.dedup();
    let colors = colors.iter().map(|c| used.binary_search(c).unwrap()).collect();
    Ok(Cover { sets, diam_bound, colors })
}

/// Positive contractions indexed like the cover members.
#[derive(Debug, Clone, PartialEq)]
pub struct BumpFamily {
    pub functions: Vec<Vec<f64>>,
    pub lip_bound: f64,
    pub support_sets: Vec<Vec<usize>>,
}

impl BumpFamily {
    pub fn from_functions(functions: Vec<Vec<f64>>, lip_bound: f64) -> Self {
        let support_sets = functions.iter().map(|f| (0..f.len()).filter(|&x| f[x] > 0.0).collect()).collect();
        Self { functions, lip_bound, support_sets }
    }

    /// Pointwise sum of the family.
    pub fn sum(&self) -> Vec<f64> {
        let n = self.functions.first().map_or(0, Vec::len);
        (0..n).map(|x| self.functions.iter().map(|f| f[x]).sum()).collect()
    }
}

/// `clamp(1 - slope · (d(x, U) - inner), 0, 1)`: equal to 1 on the closed
/// `inner`-neighbourhood of `U`, vanishing from distance `inner + 1/slope` on.
pub fn bump_around(m: &MetricSpace, set: &[usize], inner: f64, slope: f64) -> Vec<f64> {
    (0..m.len()).map(|x| (1.0 - slope * (m.dist_to_set(x, set) - inner).max(0.0)).clamp(0.0, 1.0)).collect()
}

/// Output of [`bump_partition`].
#[derive(Debug, Clone)]
pub struct BumpPartition {
    /// Raw bumps `clamp(1 - (4/R) d(x, U_j), 0, 1)`.
    pub raw: BumpFamily,
    /// `e_j / Σ_k e_k`, summing to one at every point.
    pub normalized: Vec<Vec<f64>>,
    /// Measured Lipschitz constant of each normalised member.
    pub normalized_lip: Vec<f64>,
}

impl BumpPartition {
    pub fn max_normalized_lip(&self) -> f64 {
        self.normalized_lip.iter().copied().fold(0.0, f64::max)
    }
}

/// Distance bumps around each cover member, then normalised to a partition of unity.
pub fn bump_partition(m: &MetricSpace, cover: &Cover, r: f64) -> Result<BumpPartition> {
    cover.check_covers(m)?;
    if !(r > 0.0) {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {r}")));
    }
    let slope = 4.0 / r;
    let raw_fns: Vec<Vec<f64>> = cover.sets.iter().map(|u| bump_around(m, u, 0.0, slope)).collect();
    let raw = BumpFamily::from_functions(raw_fns, slope);
    let total = raw.sum();
    let normalized: Vec<Vec<f64>> =
        raw.functions.iter().map(|f| f.iter().zip(&total).map(|(v, s)| v / s).collect()).collect();
    let normalized_lip = normalized.iter().map(|f| lipschitz_const(f, m)).collect();
    Ok(BumpPartition { raw, normalized, normalized_lip })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn validate_examples() {
        let ok = MetricSpace::on_line(&[0.0, 1.0, 3.0]);
        assert!(validate_metric(ok.matrix(), &tol()).is_ok());

        let asym = vec![vec![0.0, 1.0], vec![2.0, 0.0]];
        assert_eq!(validate_metric(&asym, &tol()).unwrap_err(), vec![MetricViolation::Asymmetry(0, 1)]);

        let tri = vec![vec![0.0, 1.0, 5.0], vec![1.0, 0.0, 1.0], vec![5.0, 1.0, 0.0]];
        let errs = validate_metric(&tri, &tol()).unwrap_err();
        assert_eq!(errs, vec![MetricViolation::TriangleViolation(0, 1, 2)]);
    }

    #[test]
    fn validate_collects_every_violation() {
        let bad = vec![vec![0.0, -1.0, 1.0], vec![-1.0, 1.0, 1.0], vec![2.0, 1.0, 0.0]];
        let errs = validate_metric(&bad, &tol()).unwrap_err();
        assert!(errs.contains(&MetricViolation::NonzeroDiagonal(1)));
        assert!(errs.contains(&MetricViolation::NegativeDistance(0, 1)));
        assert!(errs.contains(&MetricViolation::Asymmetry(0, 2)));
    }

    #[test]
    fn lipschitz_examples() {
        let m = MetricSpace::on_line(&[0.0, 1.0, 3.0]);
        assert_eq!(lipschitz_const(&[0.0, 1.0, 3.0], &m), 1.0);
        assert_eq!(lipschitz_const(&[2.0, 2.0, 2.0], &m), 0.0);
        let two = MetricSpace::on_line(&[0.0, 1.0]);
        assert_eq!(lipschitz_const(&[0.0, 2.0], &two), 2.0);
    }

    #[test]
    fn multiplicity_examples() {
        let m = MetricSpace::integer_interval(0, 29);
        let whole = Cover::new(vec![(0..30).collect()], vec![0], &m).unwrap();
        assert_eq!(r_multiplicity(&whole, &m, 2.0).unwrap(), 1);
        let blocks =
            Cover::new(vec![(0..10).collect(), (10..20).collect(), (20..30).collect()], vec![0, 1, 0], &m).unwrap();
        assert_eq!(r_multiplicity(&blocks, &m, 2.0).unwrap(), 2);

        let far = MetricSpace::on_line(&[0.0, 100.0]);
        let pair = Cover::new(vec![vec![0], vec![1]], vec![0, 0], &far).unwrap();
        assert_eq!(r_multiplicity(&pair, &far, 1.0).unwrap(), 1);

        let partial = Cover::new(vec![vec![0]], vec![0], &far).unwrap();
        assert!(matches!(r_multiplicity(&partial, &far, 1.0), Err(Error::NotACover { point: 1 })));
    }

    #[test]
    fn grid_cover_one_dimensional() {
        let bx = GridBox::new(vec![0], vec![99], GridNorm::L1).unwrap();
        let m = bx.metric_space();
        let c = grid_cover(&bx, 5.0).unwrap();
        c.validate(&m, 5.0).unwrap();
        assert_eq!(r_multiplicity(&c, &m, 5.0).unwrap(), 2);
        assert_eq!(c.diam_bound, 9.0);

        let big = grid_cover(&bx, 200.0).unwrap();
        assert_eq!(big.sets.len(), 1);
        assert_eq!(r_multiplicity(&big, &m, 200.0).unwrap(), 1);
    }

    #[test]
    fn grid_cover_two_dimensional() {
        for norm in [GridNorm::L1, GridNorm::LInf] {
            let bx = GridBox::cube(2, 20, norm).unwrap();
            let m = bx.metric_space();
            let c = grid_cover(&bx, 3.0).unwrap();
            c.validate(&m, 3.0).unwrap();
            assert!(r_multiplicity(&c, &m, 3.0).unwrap() <= 4);
            assert_eq!(c.color_count(), 4);
            assert!(c.diam_bound <= 2.0 * 2.0 * 3.0);
        }
    }

    #[test]
    fn empty_box_rejected() {
        assert!(matches!(GridBox::new(vec![3], vec![1], GridNorm::L1), Err(Error::EmptyBox)));
        assert!(matches!(GridBox::new(vec![], vec![], GridNorm::L1), Err(Error::EmptyBox)));
    }

    #[test]
    fn bump_partition_examples() {
        let m = MetricSpace::integer_interval(0, 9);
        let single = Cover::new(vec![(0..10).collect()], vec![0], &m).unwrap();
        let p = bump_partition(&m, &single, 4.0).unwrap();
        assert!(p.normalized[0].iter().all(|&v| v == 1.0));

        // gap 6 > R/2 = 2: raw supports are disjoint
        let m2 = MetricSpace::on_line(&[0.0, 1.0, 7.0, 8.0]);
        let two = Cover::new(vec![vec![0, 1], vec![2, 3]], vec![0, 1], &m2).unwrap();
        let p2 = bump_partition(&m2, &two, 4.0).unwrap();
        assert_eq!(p2.raw.support_sets, vec![vec![0, 1], vec![2, 3]]);
        for f in &p2.raw.functions {
            assert!(lipschitz_const(f, &m2) <= 1.0 + 1e-12);
        }
    }
}
