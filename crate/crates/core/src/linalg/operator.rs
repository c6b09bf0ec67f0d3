use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::config::Tolerances;
use crate::error::{Error, Result};

/// Dense complex matrix, row-major.
///
/// The `hermitian` flag records that the matrix was built (or checked) to be
/// Hermitian; operations that preserve hermiticity keep it set.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct Operator {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
    hermitian: bool,
}

/// On-disk matrix layout: separate real and imaginary row arrays.
#[derive(serde::Serialize, serde::Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    re: Vec<Vec<f64>>,
    #[serde(default)]
    im: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    hermitian: bool,
}

impl TryFrom<MatrixJson> for Operator {
    type Error = String;

    fn try_from(m: MatrixJson) -> std::result::Result<Self, String> {
        let check = |name: &str, rows: &[Vec<f64>]| -> std::result::Result<(), String> {
            if rows.len() != m.rows {
                return Err(format!("field `{name}` has {} rows, expected {}", rows.len(), m.rows));
            }
            if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != m.cols) {
                return Err(format!("field `{name}` row {i} has {} entries, expected {}", r.len(), m.cols));
            }
            Ok(())
        };
        check("re", &m.re)?;
        if let Some(im) = &m.im {
            check("im", im)?;
        }
        let mut data = Vec::with_capacity(m.rows * m.cols);
        for i in 0..m.rows {
            for j in 0..m.cols {
                let im = m.im.as_ref().map_or(0.0, |im| im[i][j]);
                data.push(Complex64::new(m.re[i][j], im));
            }
        }
        let op = Operator { rows: m.rows, cols: m.cols, data, hermitian: false };
        if !op.is_finite() {
            return Err("matrix has non-finite entries".into());
        }
        if m.hermitian {
            op.flag_hermitian(&Tolerances::default()).map_err(|e| format!("field `hermitian` is true but {e}"))
        } else {
            Ok(op)
        }
    }
}

impl From<Operator> for MatrixJson {
    fn from(op: Operator) -> Self {
        let part = |f: fn(&Complex64) -> f64| -> Vec<Vec<f64>> {
            (0..op.rows).map(|i| op.row(i).iter().map(f).collect()).collect()
        };
        MatrixJson {
            rows: op.rows,
            cols: op.cols,
            re: part(|z| z.re),
            im: Some(part(|z| z.im)),
            hermitian: op.hermitian,
        }
    }
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

impl Operator {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![ZERO; rows * cols], hermitian: rows == cols }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data, hermitian: false }
    }

    /// Builds from row-major complex entries.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        Ok(Self { rows, cols, data, hermitian: false })
    }

    /// Builds from nested real rows; panics on ragged input.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let mut m = Self::from_fn(r, c, |i, j| Complex64::new(rows[i][j], 0.0));
        m.hermitian = m.is_hermitian(&Tolerances::default());
        m
    }

    /// Real diagonal matrix; always Hermitian.
    pub fn from_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = Complex64::new(d, 0.0);
        }
        m
    }

    /// Matrix unit `|e_i><e_j|` on `C^n`.
    pub fn matrix_unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m.data[i * n + j] = ONE;
        m.hermitian = i == j;
        m
    }

    /// Rank-one operator `|u><v|`.
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    pub fn pauli_x() -> Self {
        Self::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]])
    }

    pub fn pauli_y() -> Self {
        let i = Complex64::new(0.0, 1.0);
        let mut m = Self::from_fn(2, 2, |r, c| match (r, c) {
            (0, 1) => -i,
            (1, 0) => i,
            _ => ZERO,
        });
        m.hermitian = true;
        m
    }

    pub fn pauli_z() -> Self {
        Self::from_diag(&[1.0, -1.0])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn dim(&self) -> usize {
        debug_assert!(self.is_square());
        self.rows
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn is_flagged_hermitian(&self) -> bool {
        self.hermitian
    }

    /// Sets the Hermitian flag after checking the numerical defect.
    pub fn flag_hermitian(mut self, tol: &Tolerances) -> Result<Self> {
        if !self.is_hermitian(tol) {
            return Err(Error::NonHermitianInput { defect: self.hermitian_defect() });
        }
        self.hermitian = true;
        Ok(self)
    }

    pub fn clear_flag(mut self) -> Self {
        self.hermitian = false;
        self
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.hermitian = false;
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> Complex64 {
        self.diagonal().into_iter().sum()
    }

    /// `max |A_ij - conj(A_ji)|`; infinite for non-square input.
    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: &Tolerances) -> bool {
        self.is_square() && self.hermitian_defect() <= tol.hermitian * (1.0 + self.max_abs())
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj());
        m.hermitian = self.hermitian;
        m
    }

    /// `(A + A*) / 2`, flagged Hermitian.
    pub fn hermitian_part(&self) -> Self {
        assert!(self.is_square());
        let mut m = Self::from_fn(self.rows, self.cols, |i, j| (self.get(i, j) + self.get(j, i).conj()) * 0.5);
        m.hermitian = true;
        m
    }

    /// Exactly Hermitian copy: averages the two triangles and zeroes the
    /// imaginary part of the diagonal.
    pub fn symmetrize(&self) -> Self {
        let mut m = self.hermitian_part();
        for i in 0..m.rows {
            let k = i * m.cols + i;
            m.data[k].im = 0.0;
        }
        m
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut m = self.clone();
        m.scale_mut(s);
        m
    }

    pub fn scale_mut(&mut self, s: f64) {
        for z in &mut self.data {
            *z *= s;
        }
    }

    pub fn scale_complex(&self, s: Complex64) -> Self {
        let mut m = self.clone();
        for z in &mut m.data {
            *z *= s;
        }
        m.hermitian = self.hermitian && s.im == 0.0;
        m
    }

    /// `A + c * I`.
    pub fn shift(&self, c: f64) -> Self {
        assert!(self.is_square());
        let mut m = self.clone();
        for i in 0..m.rows {
            let k = i * m.cols + i;
            m.data[k] += c;
        }
        m
    }

    /// `diag(left) * A * diag(right)` for real diagonal factors.
    pub fn diag_sandwich(&self, left: &[f64], right: &[f64]) -> Self {
        assert_eq!(left.len(), self.rows);
        assert_eq!(right.len(), self.cols);
        let mut m = Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j) * (left[i] * right[j]));
        m.hermitian = self.hermitian && left == right;
        m
    }

    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// Rectangular sub-block `rows x cols` by index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut m = Self::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]));
        m.hermitian = self.hermitian && rows == cols;
        m
    }

    /// Kronecker product `A ⊗ B`.
    pub fn kron(&self, other: &Self) -> Self {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut m = Self::from_fn(r, c, |i, j| {
            self.get(i / other.rows, j / other.cols) * other.get(i % other.rows, j % other.cols)
        });
        m.hermitian = self.hermitian && other.hermitian;
        m
    }

    /// `AB - BA`.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(blocks: &[Operator]) -> Self {
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(r, c);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.data[(r0 + i) * c + c0 + j] = b.get(i, j);
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m.hermitian = blocks.iter().all(|b| b.hermitian);
        m
    }

    /// Largest entrywise distance to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

/// Equality compares shape and entries; the Hermitian flag is bookkeeping.
impl PartialEq for Operator {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.data == other.data
    }
}

impl Index<(usize, usize)> for Operator {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Operator {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        self.hermitian = false;
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let (n, m, p) = (self.rows, self.cols, rhs.cols);
        let mut out = vec![ZERO; n * p];
        for i in 0..n {
            let orow = &mut out[i * p..(i + 1) * p];
            for k in 0..m {
                let a = self.data[i * m + k];
                if a == ZERO {
                    continue;
                }
                let brow = &rhs.data[k * p..(k + 1) * p];
                for (o, b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        Operator { rows: n, cols: p, data: out, hermitian: false }
    }
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Operator {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
            hermitian: self.hermitian && rhs.hermitian,
        }
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Operator {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
            hermitian: self.hermitian && rhs.hermitian,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn products_and_units() {
        let e01 = Operator::matrix_unit(3, 0, 1);
        let e10 = Operator::matrix_unit(3, 1, 0);
        let p = &e01 * &e10;
        assert_eq!(p, Operator::matrix_unit(3, 0, 0));
        assert!(!e01.is_hermitian(&Tolerances::default()));
        assert!(Operator::pauli_y().is_hermitian(&Tolerances::default()));
    }

    #[test]
    fn kron_and_direct_sum_shapes() {
        let a = Operator::pauli_x();
        let k = a.kron(&Operator::identity(3));
        assert_eq!((k.rows(), k.cols()), (6, 6));
        assert_eq!(k.get(0, 3), ONE);
        let d = Operator::direct_sum(&[a.clone(), Operator::identity(1)]);
        assert_eq!(d.rows(), 3);
        assert_eq!(d.get(2, 2), ONE);
    }

    #[test]
    fn from_vec_checks_length() {
        assert!(Operator::from_vec(2, 2, vec![ZERO; 3]).is_err());
    }
}
