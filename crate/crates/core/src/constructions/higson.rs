use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{op_norm, Operator};

fn check_cutoff(k: usize, len: usize) -> Result<()> {
    if len == 0 || k + 1 >= len {
        return Err(Error::CutoffOutOfRange { cutoff: k, len });
    }
    Ok(())
}

/// `sup_{x > K} Δ_R f(x)` on the ray `{0, …, N}` (`f` has `N + 1` values),
/// where `Δ_R f(x) = max{|f(x) − f(y)| : |x − y| ≤ R}`.
pub fn slow_osc_score(f: &[f64], r: f64, k: usize) -> Result<f64> {
    check_cutoff(k, f.len())?;
    let reach = r.max(0.0).floor() as usize;
    let mut best: f64 = 0.0;
    for x in (k + 1)..f.len() {
        let lo = x.saturating_sub(reach);
        let hi = (x + reach).min(f.len() - 1);
        for y in lo..=hi {
            best = best.max((f[x] - f[y]).abs());
        }
    }
    Ok(best)
}

/// Operator form for the multiplication operator by `f`: the maximum over the
/// shifts `S_s` (`|s| ≤ R`) of `‖(1 − χ_{[0,K]}) [M_f, S_s]‖`. Each commutator
/// is a weighted shift, so its norm is the largest weight on rows beyond `K`.
pub fn slow_osc_multiplier_score(f: &[f64], r: f64, k: usize) -> Result<f64> {
    check_cutoff(k, f.len())?;
    let reach = r.max(0.0).floor() as i64;
    let n = f.len() as i64;
    let mut best: f64 = 0.0;
    for s in -reach..=reach {
        // [M_f, S_s] e_y = (f(y + s) − f(y)) e_{y+s}
        for y in 0..n {
            let target = y + s;
            if target > k as i64 && target < n {
                best = best.max((f[target as usize] - f[y as usize]).abs());
            }
        }
    }
    Ok(best)
}

/// Dense operator form for an arbitrary operator on `ℓ²({0, …, N})`.
pub fn slow_osc_operator_score(t: &Operator, r: f64, k: usize) -> Result<f64> {
    let n = t.rows();
    if !t.is_square() {
        return Err(Error::DimensionMismatch("operator must be square".into()));
    }
    check_cutoff(k, n)?;
    let reach = r.max(0.0).floor() as i64;
    let mut best: f64 = 0.0;
    let tail: Vec<f64> = (0..n).map(|x| if x > k { 1.0 } else { 0.0 }).collect();
    let ones = vec![1.0; n];
    for s in -reach..=reach {
        let shift = Operator::from_fn(n, n, |i, j| {
            if i as i64 == j as i64 + s {
                num_complex::Complex64::new(1.0, 0.0)
            } else {
                num_complex::Complex64::new(0.0, 0.0)
            }
        });
        let c = t.commutator(&shift).diag_sandwich(&tail, &ones);
        best = best.max(op_norm(&c));
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayRow {
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "R")]
    pub r: f64,
    pub score: f64,
}

/// Scores of `f` over a list of `(K, N)` truncations at fixed `R`.
pub fn decay_curve(f: impl Fn(f64) -> f64, r: f64, truncations: &[(usize, usize)]) -> Result<Vec<DecayRow>> {
    truncations
        .iter()
        .map(|&(k, n)| {
            let values: Vec<f64> = (0..=n).map(|x| f(x as f64)).collect();
            Ok(DecayRow { k, r, score: slow_osc_score(&values, r, k)? })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_and_oscillating() {
        assert_eq!(slow_osc_score(&[2.0; 50], 3.0, 10).unwrap(), 0.0);
        let s: Vec<f64> = (0..=200).map(|x| (x as f64).sin()).collect();
        for k in [0, 50, 150] {
            assert!(slow_osc_score(&s, 3.0, k).unwrap() >= 1.0);
        }
        assert!(matches!(slow_osc_score(&[1.0, 2.0], 1.0, 1), Err(Error::CutoffOutOfRange { .. })));
    }

    #[test]
    fn multiplier_forms_agree() {
        let f: Vec<f64> = (0..=40).map(|x| (0.3 * x as f64).cos() / (1.0 + x as f64)).collect();
        for (r, k) in [(1.0, 5), (3.0, 20), (2.5, 0)] {
            let scalar = slow_osc_score(&f, r, k).unwrap();
            let shifted = slow_osc_multiplier_score(&f, r, k).unwrap();
            let dense = slow_osc_operator_score(&Operator::from_diag(&f), r, k).unwrap();
            assert!((scalar - shifted).abs() < 1e-15);
            assert!((dense - shifted).abs() < 1e-12);
        }
    }

    #[test]
    fn decay_rows() {
        let rows = decay_curve(|x| (1.0 + x).ln().sin(), 10.0, &[(100, 1000), (1000, 10000)]).unwrap();
        assert!(rows[1].score < rows[0].score);
    }
}
