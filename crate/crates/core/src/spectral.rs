//! Spectral-triple utilities: unitary evolution bounds, Fourier functional
//! calculus and normalising functions.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::Seminorm;
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{expi_from_eig, herm_eig, op_norm, Operator};
use crate::rng::CounterRng;

/// `(‖[e^{itD}, a]‖, |t| · ‖[D, a]‖)`.
pub fn evo_commutator_check(d: &Operator, a: &Operator, t: f64, tol: &Tolerances) -> Result<(f64, f64)> {
    if d.rows() != a.rows() || d.cols() != a.cols() {
        return Err(Error::DimensionMismatch(format!(
            "D is {}x{}, a is {}x{}",
            d.rows(),
            d.cols(),
            a.rows(),
            a.cols()
        )));
    }
    let u = expi_from_eig(&herm_eig(d, tol)?, t);
    Ok((op_norm(&u.commutator(a)), t.abs() * op_norm(&d.commutator(a))))
}

/// Samples of a compactly supported `φ̂` on a uniform grid over `[−T, T]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProfileJson", into = "ProfileJson")]
pub struct FourierProfile {
    tmax: f64,
    values: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct ProfileJson {
    tmax: f64,
    values_re: Vec<f64>,
    #[serde(default)]
    values_im: Option<Vec<f64>>,
}

impl TryFrom<ProfileJson> for FourierProfile {
    type Error = String;

    fn try_from(p: ProfileJson) -> std::result::Result<Self, String> {
        let im = p.values_im.unwrap_or_else(|| vec![0.0; p.values_re.len()]);
        if im.len() != p.values_re.len() {
            return Err(format!("field `values_im` has {} entries, `values_re` has {}", im.len(), p.values_re.len()));
        }
        let values = p.values_re.iter().zip(&im).map(|(&r, &i)| Complex64::new(r, i)).collect();
        FourierProfile::new(p.tmax, values).map_err(|e| e.to_string())
    }
}

impl From<FourierProfile> for ProfileJson {
    fn from(p: FourierProfile) -> Self {
        ProfileJson {
            tmax: p.tmax,
            values_re: p.values.iter().map(|z| z.re).collect(),
            values_im: Some(p.values.iter().map(|z| z.im).collect()),
        }
    }
}

impl FourierProfile {
    pub fn new(tmax: f64, values: Vec<Complex64>) -> Result<Self> {
        if !(tmax > 0.0) || !tmax.is_finite() {
            return Err(Error::ProfileInvalid(format!("support radius must be positive, got {tmax}")));
        }
        if values.len() < 2 {
            return Err(Error::ProfileInvalid("at least two nodes are required".into()));
        }
        if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::ProfileInvalid("non-finite sample".into()));
        }
        Ok(Self { tmax, values })
    }

    /// Samples `f` at `nodes` equispaced points of `[−tmax, tmax]`.
    pub fn from_fn(tmax: f64, nodes: usize, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        if nodes < 2 {
            return Err(Error::ProfileInvalid("at least two nodes are required".into()));
        }
        let h = 2.0 * tmax / (nodes - 1) as f64;
        Self::new(tmax, (0..nodes).map(|m| f(-tmax + m as f64 * h)).collect())
    }

    /// `φ̂ = ½ · 1_{[−1,1]}`, whose inverse transform is `sin(x)/x`.
    pub fn sinc(nodes: usize) -> Result<Self> {
        Self::from_fn(1.0, nodes, |_| Complex64::new(0.5, 0.0))
    }

    /// `φ̂ = (1 − |t|)_+`, with `φ(x) = 2(1 − cos x)/x²`.
    pub fn triangle(nodes: usize) -> Result<Self> {
        Self::from_fn(1.0, nodes, |t| Complex64::new((1.0 - t.abs()).max(0.0), 0.0))
    }

    pub fn tmax(&self) -> f64 {
        self.tmax
    }

    pub fn nodes(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn node(&self, m: usize) -> f64 {
        -self.tmax + m as f64 * self.step()
    }

    pub fn step(&self) -> f64 {
        2.0 * self.tmax / (self.values.len() - 1) as f64
    }

    /// Trapezoid weights.
    pub fn weight(&self, m: usize) -> f64 {
        if m == 0 || m + 1 == self.values.len() {
            self.step() / 2.0
        } else {
            self.step()
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { tmax: self.tmax, values: self.values.iter().map(|z| z * s).collect() }
    }

    /// `∫ |t| |φ̂(t)| dt` by the same quadrature.
    pub fn bound(&self) -> f64 {
        (0..self.nodes()).map(|m| self.weight(m) * self.node(m).abs() * self.values[m].norm()).sum()
    }

    /// `φ(x) = ∫ φ̂(t) e^{itx} dt` at a scalar point.
    pub fn eval(&self, x: f64) -> Complex64 {
        (0..self.nodes()).map(|m| self.values[m] * Complex64::from_polar(self.weight(m), self.node(m) * x)).sum()
    }
}

/// `φ(D) ≈ Σ_m w_m φ̂(t_m) e^{i t_m D}` and the bound `∫ |t||φ̂(t)| dt`.
pub fn fourier_func_calc(d: &Operator, prof: &FourierProfile, tol: &Tolerances) -> Result<(Operator, f64)> {
    let e = herm_eig(d, tol)?;
    let n = d.rows();
    let mut acc = Operator::zeros(n, n);
    for m in 0..prof.nodes() {
        let c = prof.values[m] * prof.weight(m);
        if c == Complex64::new(0.0, 0.0) {
            continue;
        }
        acc = &acc + &expi_from_eig(&e, prof.node(m)).scale_complex(c);
    }
    Ok((acc, prof.bound()))
}

/// Sine integral `Si(x) = ∫_0^x sin(t)/t dt`: power series for `|x| ≤ 4`,
/// continued fraction for `E_1(ix)` beyond.
pub fn sine_integral(x: f64) -> f64 {
    let ax = x.abs();
    let v = if ax <= 4.0 {
        let x2 = ax * ax;
        let mut term = ax;
        let mut sum = ax;
        let mut k = 1.0;
        loop {
            term *= -x2 / ((2.0 * k) * (2.0 * k + 1.0));
            let add = term / (2.0 * k + 1.0);
            sum += add;
            if add.abs() <= 1e-17 * sum.abs() {
                break;
            }
            k += 1.0;
        }
        sum
    } else {
        // Modified Lentz on E_1(ix) = −Ci(x) + i(Si(x) − π/2).
        let tiny = 1e-300;
        let mut b = Complex64::new(1.0, ax);
        let mut c = Complex64::new(1.0 / tiny, 0.0);
        let mut d = Complex64::new(1.0, 0.0) / b;
        let mut h = d;
        for i in 2..1000 {
            let a = -((i - 1) as f64).powi(2);
            b += Complex64::new(2.0, 0.0);
            d = Complex64::new(1.0, 0.0) / (d * a + b);
            c = b + Complex64::new(a, 0.0) / c;
            let del = c * d;
            h *= del;
            if (del - 1.0).norm() < 1e-16 {
                break;
            }
        }
        h *= Complex64::new(ax.cos(), -ax.sin());
        FRAC_PI_2 + h.im
    };
    if x < 0.0 {
        -v
    } else {
        v
    }
}

/// `ψ(x) = (2/π) Si(x/σ)`: odd, tends to `±1`, with Fourier transform supported
/// in `[−1/σ, 1/σ]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalizingFunction {
    pub sigma: f64,
    pub odd: bool,
    /// `ψ(1000σ)` and `ψ(−1000σ)`.
    pub asymptote_plus: f64,
    pub asymptote_minus: f64,
}

impl NormalizingFunction {
    pub fn eval(&self, x: f64) -> f64 {
        2.0 / PI * sine_integral(x / self.sigma)
    }

    pub fn apply(&self, d: &Operator, tol: &Tolerances) -> Result<Operator> {
        Ok(herm_eig(d, tol)?.reconstruct_with(|l| Complex64::new(self.eval(l), 0.0)))
    }
}

pub fn normalizing_fn(sigma: f64) -> Result<NormalizingFunction> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::NonpositiveWidth(sigma));
    }
    let mut f = NormalizingFunction { sigma, odd: true, asymptote_plus: 0.0, asymptote_minus: 0.0 };
    f.asymptote_plus = f.eval(1000.0 * sigma);
    f.asymptote_minus = f.eval(-1000.0 * sigma);
    Ok(f)
}

#[derive(Debug, Clone, Serialize)]
pub struct FourierCheck {
    pub bound: f64,
    pub max_ratio: f64,
    pub samples: usize,
    pub ok: bool,
}

/// For sampled `a` with `‖[D, a]‖ = 1`, compares `‖[φ(D), a]‖` against
/// `∫ |t||φ̂(t)| dt`.
pub fn lstar_fourier_check(
    d: &Operator,
    prof: &FourierProfile,
    samples: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<FourierCheck> {
    let (phi, bound) = fourier_func_calc(d, prof, tol)?;
    let l = Seminorm::CommutatorD(d.clone());
    let mut rng = CounterRng::new(seed);
    let mut max_ratio: f64 = 0.0;
    for _ in 0..samples {
        let a = l.sample_unit(&mut rng, tol);
        let c = op_norm(&phi.commutator(&a));
        let ratio = if bound > 0.0 {
            c / bound
        } else if c <= 1e-12 {
            0.0
        } else {
            f64::INFINITY
        };
        max_ratio = max_ratio.max(ratio);
    }
    Ok(FourierCheck { bound, max_ratio, samples, ok: max_ratio <= 1.0 + 1e-4 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    /// Composite Simpson on sin(t)/t as an independent reference.
    fn si_reference(x: f64) -> f64 {
        let n = 200_000;
        let h = x / n as f64;
        let f = |t: f64| if t == 0.0 { 1.0 } else { t.sin() / t };
        let mut s = f(0.0) + f(x);
        for k in 1..n {
            s += f(k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    }

    #[test]
    fn sine_integral_matches_quadrature() {
        for x in [0.3, 1.0, 2.5, 3.9, 4.0, 4.1, 6.0, 10.0, 25.0] {
            assert!((sine_integral(x) - si_reference(x)).abs() < 1e-12, "x = {x}");
            assert_eq!(sine_integral(-x), -sine_integral(x));
        }
        assert!((sine_integral(1e6) - FRAC_PI_2).abs() < 1e-5);
    }

    #[test]
    fn normalizing_examples() {
        let f = normalizing_fn(0.5).unwrap();
        assert_eq!(f.eval(0.0), 0.0);
        assert!(f.asymptote_plus >= 0.999);
        for k in 0..50 {
            let x = 0.37 * k as f64;
            assert!((f.eval(-x) + f.eval(x)).abs() <= 1e-12);
        }
        assert!(matches!(normalizing_fn(0.0), Err(Error::NonpositiveWidth(_))));
    }

    #[test]
    fn evolution_examples() {
        let (l, r) = evo_commutator_check(&Operator::pauli_z(), &Operator::pauli_x(), 0.0, &tol()).unwrap();
        assert_eq!((l, r), (0.0, 0.0));
        for t in [0.3, -1.2, 2.9] {
            let (l, r) = evo_commutator_check(&Operator::pauli_z(), &Operator::pauli_x(), t, &tol()).unwrap();
            assert!((l - 2.0 * f64::sin(t).abs()).abs() < 1e-12);
            assert!((r - 2.0 * t.abs()).abs() < 1e-12);
        }
    }

    #[test]
    fn fourier_examples() {
        let prof = FourierProfile::sinc(2001).unwrap();
        let (phi, bound) = fourier_func_calc(&Operator::from_diag(&[0.0, PI]), &prof, &tol()).unwrap();
        assert!(phi.max_abs_diff(&Operator::from_diag(&[1.0, 0.0])) < 1e-6);
        assert!((bound - 0.5).abs() < 1e-6);
        let (zero, _) = fourier_func_calc(&Operator::zeros(3, 3), &prof, &tol()).unwrap();
        assert!(zero.max_abs_diff(&Operator::identity(3)) < 1e-12);
        assert!(FourierProfile::new(1.0, vec![Complex64::new(1.0, 0.0)]).is_err());
    }

    #[test]
    fn triangle_converges_at_second_order() {
        let d = Operator::from_diag(&[0.0, 0.7, 2.0, 5.0]);
        let exact = |x: f64| if x == 0.0 { 1.0 } else { 2.0 * (1.0 - x.cos()) / (x * x) };
        let reference = Operator::from_diag(&[exact(0.0), exact(0.7), exact(2.0), exact(5.0)]);
        let errs: Vec<f64> = [101, 201, 401]
            .iter()
            .map(|&n| {
                let (phi, _) = fourier_func_calc(&d, &FourierProfile::triangle(n).unwrap(), &tol()).unwrap();
                op_norm(&(&phi - &reference))
            })
            .collect();
        assert!(errs[0] / errs[1] >= 2.0 && errs[1] / errs[2] >= 2.0, "{errs:?}");
    }

    #[test]
    fn profile_scaling_is_linear() {
        let d = Operator::from_diag(&[0.0, 1.0, 3.0]);
        let p = FourierProfile::sinc(401).unwrap();
        let a = lstar_fourier_check(&d, &p, 10, 3, &tol()).unwrap();
        let b = lstar_fourier_check(&d, &p.scaled(3.0), 10, 3, &tol()).unwrap();
        assert!((b.bound - 3.0 * a.bound).abs() < 1e-12);
        assert!((a.max_ratio - b.max_ratio).abs() < 1e-9);
    }
}
