//! Dense complex matrices used as the coordinate carrier for every map.
//!
//! Everything in this crate is at most a few hundred rows, so the type is a
//! plain row-major buffer. Eigenvalue problems and inversion are delegated to
//! `nalgebra`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::MatrixError;

/// Shorthand for a complex zero.
pub const C0: Complex64 = Complex64::new(0.0, 0.0);
/// Shorthand for a complex one.
pub const C1: Complex64 = Complex64::new(1.0, 0.0);

/// Real scalar as a complex number.
#[inline]
pub fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Row-major dense complex matrix.
///
/// Serializes as `{"rows": R, "cols": C, "data": [[re, im], ...]}`.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    data: Vec<[f64; 2]>,
}

impl TryFrom<MatrixRepr> for ComplexMatrix {
    type Error = MatrixError;

    fn try_from(m: MatrixRepr) -> Result<Self, Self::Error> {
        Self::from_vec(m.rows, m.cols, m.data.into_iter().map(|[a, b]| Complex64::new(a, b)).collect())
    }
}

impl From<ComplexMatrix> for MatrixRepr {
    fn from(m: ComplexMatrix) -> Self {
        Self { rows: m.rows, cols: m.cols, data: m.data.into_iter().map(|z| [z.re, z.im]).collect() }
    }
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![C0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C1;
        }
        m
    }

    /// Builds a matrix from row-major entries.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self, MatrixError> {
        if data.len() != rows * cols {
            return Err(MatrixError::EntryCount { rows, cols, got: data.len() });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Square matrix from nested real rows. Panics on ragged input; intended
    /// for literal tables.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == m), "ragged rows");
        Self::from_fn(n, m, |i, j| re(rows[i][j]))
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == m), "ragged rows");
        Self::from_fn(n, m, |i, j| rows[i][j])
    }

    pub fn diag(entries: &[Complex64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &v) in entries.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn column(entries: &[Complex64]) -> Self {
        Self { rows: entries.len(), cols: 1, data: entries.to_vec() }
    }

    pub fn row(entries: &[Complex64]) -> Self {
        Self { rows: 1, cols: entries.len(), data: entries.to_vec() }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.data
    }

    pub fn column_vec(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn row_vec(&self, i: usize) -> Vec<Complex64> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| f(z)).collect() }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Matrix product; panics on shape mismatch (use [`Self::try_mul`] for
    /// checked multiplication of external input).
    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matmul shape mismatch {:?} x {:?}", self.shape(), rhs.shape());
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == C0 {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self, MatrixError> {
        if self.cols != rhs.rows {
            return Err(MatrixError::Shape { left: self.shape(), right: rhs.shape() });
        }
        Ok(self.matmul(rhs))
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Kronecker product, left factor major: `(a ⊗ b)[(i*br + k, j*bc + l)] = a[i,j] b[k,l]`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let (br, bc) = rhs.shape();
        let mut out = Self::zeros(self.rows * br, self.cols * bc);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a == C0 {
                    continue;
                }
                for k in 0..br {
                    for l in 0..bc {
                        out[(i * br + k, j * bc + l)] = a * rhs[(k, l)];
                    }
                }
            }
        }
        out
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Largest entrywise modulus of `self - other`; infinite on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.shape() != other.shape() {
            return f64::INFINITY;
        }
        self.data.iter().zip(&other.data).fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    /// `max |self·self† - I|` and `max |self†·self - I|`, whichever is larger.
    pub fn unitarity_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let id = Self::identity(self.rows);
        let a = self.matmul(&self.adjoint()).max_abs_diff(&id);
        let b = self.adjoint().matmul(self).max_abs_diff(&id);
        a.max(b)
    }

    pub fn hermitian_residual(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub fn from_nalgebra(m: &DMatrix<Complex64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }

    pub fn try_inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        self.to_nalgebra().try_inverse().map(|m| Self::from_nalgebra(&m))
    }

    /// Eigenvalues of a general square matrix via complex Schur decomposition.
    pub fn eigenvalues(&self) -> Result<Vec<Complex64>, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NotSquare(self.shape()));
        }
        if self.rows == 0 {
            return Ok(Vec::new());
        }
        let schur = nalgebra::linalg::Schur::try_new(self.to_nalgebra(), f64::EPSILON, 10_000)
            .ok_or(MatrixError::NoConvergence)?;
        let (_, t) = schur.unpack();
        Ok((0..self.rows).map(|i| t[(i, i)]).collect())
    }

    /// Eigenvalues of the Hermitian part `(A + A†)/2`, ascending.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NotSquare(self.shape()));
        }
        let h = (self + &self.adjoint()).scale_re(0.5).to_nalgebra();
        let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        Ok(ev)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

macro_rules! elementwise {
    ($tr:ident, $f:ident, $op:tt) => {
        impl $tr<&ComplexMatrix> for &ComplexMatrix {
            type Output = ComplexMatrix;
            fn $f(self, rhs: &ComplexMatrix) -> ComplexMatrix {
                assert_eq!(self.shape(), rhs.shape(), "elementwise shape mismatch");
                ComplexMatrix {
                    rows: self.rows,
                    cols: self.cols,
                    data: self.data.iter().zip(&rhs.data).map(|(a, b)| a $op b).collect(),
                }
            }
        }
        impl $tr<ComplexMatrix> for ComplexMatrix {
            type Output = ComplexMatrix;
            fn $f(self, rhs: ComplexMatrix) -> ComplexMatrix {
                (&self).$f(&rhs)
            }
        }
    };
}

elementwise!(Add, add, +);
elementwise!(Sub, sub, -);

impl Mul<&ComplexMatrix> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl Mul<ComplexMatrix> for ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: ComplexMatrix) -> ComplexMatrix {
        self.matmul(&rhs)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.map(|z| -z)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:>9.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Sort eigenvalues by real part, then imaginary part, both descending.
pub fn sort_spectrum(values: &mut [Complex64]) {
    values.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
}

/// Largest pairwise distance between two multisets after sorting both.
/// Infinite when the sizes differ.
pub fn spectrum_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    // Round-trip through a tolerant key first so near-equal real parts with
    // noisy imaginary parts still pair up.
    let key = |z: &Complex64| (z.re * 1e6).round();
    a.sort_by(|x, y| key(y).total_cmp(&key(x)).then(y.im.total_cmp(&x.im)));
    b.sort_by(|x, y| key(y).total_cmp(&key(x)).then(y.im.total_cmp(&x.im)));
    a.iter().zip(&b).fold(0.0, |m, (x, y)| m.max((x - y).norm()))
}
