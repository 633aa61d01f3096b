//! Dense complex matrices with labelled bases.
//!
//! Every scattering operator, symmetry transform and operator block in this
//! crate is a [`ComplexMatrix`]. Rows index the outgoing basis and columns the
//! incoming basis; each basis vector carries a [`BasisLabel`] holding its
//! symmetry eigenvalue `gamma` and an auxiliary multi-index `eta`.

use std::collections::HashSet;
use std::ops::{Index, IndexMut};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default relative Frobenius tolerance for operator comparisons.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Label of one basis vector: symmetry eigenvalue plus the remaining quantum
/// numbers needed to single out the vector.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisLabel {
    pub gamma: Complex64,
    pub eta: Vec<i64>,
}

impl BasisLabel {
    pub fn new(gamma: Complex64, eta: Vec<i64>) -> Self {
        Self { gamma, eta }
    }

    /// Label with a real eigenvalue (generator of a continuous symmetry).
    pub fn real(gamma: f64, eta: Vec<i64>) -> Self {
        Self::new(Complex64::new(gamma, 0.0), eta)
    }

    /// Placeholder label used when a matrix carries no symmetry information.
    pub fn index(i: usize) -> Self {
        Self::real(0.0, vec![i as i64])
    }

    fn key(&self) -> (u64, u64, Vec<i64>) {
        // +0.0 so that -0.0 and 0.0 compare equal
        (
            (self.gamma.re + 0.0).to_bits(),
            (self.gamma.im + 0.0).to_bits(),
            self.eta.clone(),
        )
    }
}

pub(crate) fn index_labels(n: usize) -> Vec<BasisLabel> {
    (0..n).map(BasisLabel::index).collect()
}

fn check_unique(labels: &[BasisLabel], side: &str) -> Result<()> {
    let mut seen = HashSet::with_capacity(labels.len());
    for (i, label) in labels.iter().enumerate() {
        if !label.gamma.re.is_finite() || !label.gamma.im.is_finite() {
            return Err(Error::InvalidLabels(format!("{side} label {i} has a non-finite eigenvalue")));
        }
        if !seen.insert(label.key()) {
            return Err(Error::InvalidLabels(format!(
                "{side} label {i} duplicates (gamma = {}, eta = {:?})",
                label.gamma, label.eta
            )));
        }
    }
    Ok(())
}

/// Dense row-major complex matrix with row and column basis labels.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
    row_labels: Vec<BasisLabel>,
    col_labels: Vec<BasisLabel>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
            row_labels: index_labels(rows),
            col_labels: index_labels(cols),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
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
        Self {
            rows,
            cols,
            data,
            row_labels: index_labels(rows),
            col_labels: index_labels(cols),
        }
    }

    /// Builds a matrix from row-major entries.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::dims("from_vec", rows * cols, data.len()));
        }
        Ok(Self {
            rows,
            cols,
            data,
            row_labels: index_labels(rows),
            col_labels: index_labels(cols),
        })
    }

    /// Builds a matrix from nested rows of complex entries.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let ncols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != ncols) {
            return Err(Error::dims("from_rows", ncols, bad.len()));
        }
        Self::from_vec(rows.len(), ncols, rows.concat())
    }

    /// Convenience constructor for real-valued matrices.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    /// Replaces both label lists, validating sizes and uniqueness.
    pub fn with_labels(mut self, row_labels: Vec<BasisLabel>, col_labels: Vec<BasisLabel>) -> Result<Self> {
        if row_labels.len() != self.rows {
            return Err(Error::dims("with_labels (rows)", self.rows, row_labels.len()));
        }
        if col_labels.len() != self.cols {
            return Err(Error::dims("with_labels (cols)", self.cols, col_labels.len()));
        }
        check_unique(&row_labels, "row")?;
        check_unique(&col_labels, "column")?;
        self.row_labels = row_labels;
        self.col_labels = col_labels;
        Ok(self)
    }

    /// Uses the same labels for the outgoing and incoming bases.
    pub fn with_square_labels(self, labels: Vec<BasisLabel>) -> Result<Self> {
        let cols = labels.clone();
        self.with_labels(labels, cols)
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

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn row_labels(&self) -> &[BasisLabel] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[BasisLabel] {
        &self.col_labels
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    /// Standard matrix product; rows labelled as `self`, columns as `rhs`.
    pub fn matmul(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::dims(
                "matmul",
                format!("{} rows on the right", self.cols),
                rhs.rows,
            ));
        }
        let mut data = vec![Complex64::new(0.0, 0.0); self.rows * rhs.cols];
        for i in 0..self.rows {
            let out = &mut data[i * rhs.cols..(i + 1) * rhs.cols];
            for (k, &a) in self.row(i).iter().enumerate() {
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for (o, &b) in out.iter_mut().zip(rhs.row(k)) {
                    *o += a * b;
                }
            }
        }
        Ok(ComplexMatrix {
            rows: self.rows,
            cols: rhs.cols,
            data,
            row_labels: self.row_labels.clone(),
            col_labels: rhs.col_labels.clone(),
        })
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.cols {
            return Err(Error::dims("apply", self.cols, v.len()));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Conjugate transpose. Labels are swapped.
    pub fn adjoint(&self) -> ComplexMatrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)].conj());
            }
        }
        ComplexMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
            row_labels: self.col_labels.clone(),
            col_labels: self.row_labels.clone(),
        }
    }

    /// Sum of squared moduli of all entries, i.e. `Tr(A^dagger A)`.
    pub fn frobenius_norm_sq(&self) -> f64 {
        self.data.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.frobenius_norm_sq().sqrt()
    }

    pub fn trace(&self) -> Result<Complex64> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                op: "trace",
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok((0..self.rows).map(|i| self[(i, i)]).sum())
    }

    /// `||A^dagger A - I||_F^2`; zero for unitary matrices.
    pub fn unitarity_residual(&self) -> Result<f64> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                op: "unitarity_residual",
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut gram = self.adjoint().matmul(self)?;
        for i in 0..self.rows {
            gram[(i, i)] -= 1.0;
        }
        Ok(gram.frobenius_norm_sq())
    }

    pub fn scale(&self, c: Complex64) -> ComplexMatrix {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|x| *x *= c);
        out
    }

    fn zip_with(&self, rhs: &ComplexMatrix, op: &'static str, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<ComplexMatrix> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::dims(
                op,
                format!("{}x{}", self.rows, self.cols),
                format!("{}x{}", rhs.rows, rhs.cols),
            ));
        }
        let mut out = self.clone();
        for (o, &b) in out.data.iter_mut().zip(&rhs.data) {
            *o = f(*o, b);
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.zip_with(rhs, "add", |a, b| a + b)
    }

    pub fn sub(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.zip_with(rhs, "sub", |a, b| a - b)
    }

    /// `||A - B||_F / max(||A||_F, ||B||_F)`, zero when both vanish.
    pub fn relative_distance(&self, rhs: &ComplexMatrix) -> Result<f64> {
        let diff = self.sub(rhs)?.frobenius_norm();
        let scale = self.frobenius_norm().max(rhs.frobenius_norm());
        Ok(if scale == 0.0 { 0.0 } else { diff / scale })
    }

    /// True when the relative Frobenius distance is within `tol`.
    pub fn approx_eq(&self, rhs: &ComplexMatrix, tol: f64) -> bool {
        self.relative_distance(rhs).is_ok_and(|d| d <= tol)
    }

    /// Submatrix on the given row and column indices, labels preserved.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> ComplexMatrix {
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                data.push(self[(i, j)]);
            }
        }
        ComplexMatrix {
            rows: rows.len(),
            cols: cols.len(),
            data,
            row_labels: rows.iter().map(|&i| self.row_labels[i].clone()).collect(),
            col_labels: cols.iter().map(|&j| self.col_labels[j].clone()).collect(),
        }
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub(crate) fn from_nalgebra(m: &DMatrix<Complex64>) -> ComplexMatrix {
        ComplexMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }

    /// LU factorization with partial pivoting.
    pub fn lu(&self) -> Result<LuFactorization> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                op: "lu",
                rows: self.rows,
                cols: self.cols,
            });
        }
        let lu = self.to_nalgebra().lu();
        if !lu.is_invertible() {
            return Err(Error::Singular);
        }
        Ok(LuFactorization {
            lu,
            norm_one: self.norm_one(),
        })
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Factorized square matrix, reusable across right-hand sides.
pub struct LuFactorization {
    lu: nalgebra::linalg::LU<Complex64, nalgebra::Dyn, nalgebra::Dyn>,
    norm_one: f64,
}

impl LuFactorization {
    pub fn dim(&self) -> usize {
        self.lu.l().nrows()
    }

    pub fn solve_vec(&self, rhs: &[Complex64]) -> Result<Vec<Complex64>> {
        if rhs.len() != self.dim() {
            return Err(Error::dims("solve", self.dim(), rhs.len()));
        }
        let b = nalgebra::DVector::from_column_slice(rhs);
        let x = self.lu.solve(&b).ok_or(Error::Singular)?;
        Ok(x.iter().copied().collect())
    }

    pub fn solve(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rhs.rows() != self.dim() {
            return Err(Error::dims("solve", self.dim(), rhs.rows()));
        }
        let x = self.lu.solve(&rhs.to_nalgebra()).ok_or(Error::Singular)?;
        let mut out = ComplexMatrix::from_nalgebra(&x);
        out.col_labels = rhs.col_labels.clone();
        Ok(out)
    }

    pub fn inverse(&self) -> Result<ComplexMatrix> {
        self.solve(&ComplexMatrix::identity(self.dim()))
    }

    /// 1-norm condition number `||A||_1 ||A^-1||_1`, from the explicit inverse.
    pub fn condition_estimate(&self) -> Result<f64> {
        Ok(self.norm_one * self.inverse()?.norm_one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{random_matrix, random_unitary, rng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn naive_matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::from_fn(a.rows(), b.cols(), |i, j| {
            let mut acc = c(0.0, 0.0);
            for k in 0..a.cols() {
                acc += a[(i, k)] * b[(k, j)];
            }
            acc
        })
    }

    #[test]
    fn identity_is_neutral() {
        let mut r = rng(1);
        let a = random_matrix(&mut r, 2, 2);
        assert_eq!(ComplexMatrix::identity(2).matmul(&a).unwrap().as_slice(), a.as_slice());
    }

    #[test]
    fn reflection_squares_to_identity() {
        let d = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]).unwrap();
        assert_eq!(d.matmul(&d).unwrap(), ComplexMatrix::identity(2));
    }

    #[test]
    fn matmul_matches_triple_loop() {
        let mut r = rng(2);
        let a = random_matrix(&mut r, 3, 3);
        let b = random_matrix(&mut r, 3, 3);
        let fast = a.matmul(&b).unwrap();
        assert!(fast.relative_distance(&naive_matmul(&a, &b)).unwrap() < 1e-15);
    }

    #[test]
    fn matmul_rejects_mismatch() {
        let a = ComplexMatrix::zeros(2, 3);
        assert!(matches!(a.matmul(&a), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn matmul_takes_outer_labels() {
        let a = ComplexMatrix::identity(2)
            .with_square_labels(vec![BasisLabel::real(-1.0, vec![]), BasisLabel::real(1.0, vec![])])
            .unwrap();
        let b = ComplexMatrix::zeros(2, 1);
        let p = a.matmul(&b).unwrap();
        assert_eq!(p.row_labels(), a.row_labels());
        assert_eq!(p.col_labels(), b.col_labels());
    }

    #[test]
    fn adjoint_cases() {
        let sym = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 3.0]]).unwrap();
        assert_eq!(sym.adjoint(), sym);
        let a = ComplexMatrix::from_rows(&[vec![c(0.0, 0.0), c(0.0, 1.0)], vec![c(0.0, 0.0), c(0.0, 0.0)]]).unwrap();
        let expected =
            ComplexMatrix::from_rows(&[vec![c(0.0, 0.0), c(0.0, 0.0)], vec![c(0.0, -1.0), c(0.0, 0.0)]]).unwrap();
        assert_eq!(a.adjoint(), expected);
        let mut r = rng(3);
        let x = random_matrix(&mut r, 3, 5);
        assert_eq!(x.adjoint().adjoint(), x);
    }

    #[test]
    fn frobenius_examples() {
        assert_eq!(ComplexMatrix::identity(3).frobenius_norm_sq(), 3.0);
        let a = ComplexMatrix::from_rows(&[vec![c(1.0, 1.0)]]).unwrap();
        assert_eq!(a.frobenius_norm_sq(), 2.0);
        let mut r = rng(4);
        let x = random_matrix(&mut r, 4, 4);
        let tr = x.adjoint().matmul(&x).unwrap().trace().unwrap();
        assert!((tr.re - x.frobenius_norm_sq()).abs() <= 1e-13 * tr.re);
        assert!(tr.im.abs() <= 1e-13 * tr.re);
    }

    #[test]
    fn trace_cases() {
        assert_eq!(ComplexMatrix::identity(5).trace().unwrap(), c(5.0, 0.0));
        let nil = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert_eq!(nil.trace().unwrap(), c(0.0, 0.0));
        assert!(matches!(ComplexMatrix::zeros(2, 3).trace(), Err(Error::NotSquare { .. })));
        let mut r = rng(5);
        let a = random_matrix(&mut r, 3, 3);
        let b = random_matrix(&mut r, 3, 3);
        let ab = a.matmul(&b).unwrap().trace().unwrap();
        let ba = b.matmul(&a).unwrap().trace().unwrap();
        assert!((ab - ba).norm() < 1e-13);
    }

    #[test]
    fn unitarity_residual_cases() {
        let perm = ComplexMatrix::from_real_rows(&[&[0.0, 0.0, 1.0], &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]]).unwrap();
        assert_eq!(perm.unitarity_residual().unwrap(), 0.0);
        let two = ComplexMatrix::identity(2).scale(c(2.0, 0.0));
        assert_eq!(two.unitarity_residual().unwrap(), 18.0);
        assert!(ComplexMatrix::zeros(1, 2).unitarity_residual().is_err());
    }

    #[test]
    fn duplicate_labels_rejected() {
        let labels = vec![BasisLabel::real(1.0, vec![0]), BasisLabel::real(1.0, vec![0])];
        assert!(matches!(
            ComplexMatrix::identity(2).with_square_labels(labels),
            Err(Error::InvalidLabels(_))
        ));
        let wrong_len = vec![BasisLabel::real(1.0, vec![0])];
        assert!(ComplexMatrix::identity(2).with_square_labels(wrong_len).is_err());
    }

    #[test]
    fn lu_solves_and_inverts() {
        let mut r = rng(6);
        let a = random_matrix(&mut r, 6, 6);
        let lu = a.lu().unwrap();
        let inv = lu.inverse().unwrap();
        assert!(a.matmul(&inv).unwrap().approx_eq(&ComplexMatrix::identity(6), 1e-12));
        assert!(lu.condition_estimate().unwrap() >= 1.0);
        let u = random_unitary(&mut r, 5);
        let cond = u.lu().unwrap().condition_estimate().unwrap();
        assert!(cond < 10.0, "unitary condition {cond}");
    }

    #[test]
    fn singular_matrix_detected() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]).unwrap();
        assert!(matches!(a.lu(), Err(Error::Singular)));
    }
}
