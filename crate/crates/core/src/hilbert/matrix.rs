use std::fmt;
use std::ops::{Add, Mul, Sub};

use faer::linalg::solvers::Solve;
use faer::{Mat, Side};
use num_complex::Complex64;

use super::vector::Vector;
use crate::error::{Error, Result};

/// Dense complex matrix.
///
/// Storage is delegated to `faer`; the public surface speaks in row-major
/// terms because that is what the file formats use.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    inner: Mat<Complex64>,
}

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

impl ComplexMatrix {
    pub(crate) fn from_faer(inner: Mat<Complex64>) -> Self {
        ComplexMatrix { inner }
    }

    pub(crate) fn as_faer(&self) -> &Mat<Complex64> {
        &self.inner
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidArgument(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if rows * cols != data.len() {
            return Err(Error::dims(
                format!("{} entries for {rows}x{cols}", rows * cols),
                data.len(),
            ));
        }
        if let Some(k) = data.iter().position(|z| !z.is_finite()) {
            return Err(Error::NonFinite {
                row: k / cols,
                col: k % cols,
            });
        }
        Ok(Self::from_fn(rows, cols, |i, j| data[i * cols + j]))
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        ComplexMatrix {
            inner: Mat::from_fn(rows, cols, f),
        }
    }

    /// Builds a matrix from real rows; panics on ragged input.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        let m = rows[0].len();
        assert!(rows.iter().all(|r| r.len() == m), "ragged rows");
        Self::from_fn(n, m, |i, j| Complex64::new(rows[i][j], 0.0))
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let n = rows.len();
        let m = rows[0].len();
        assert!(rows.iter().all(|r| r.len() == m), "ragged rows");
        Self::from_fn(n, m, |i, j| rows[i][j])
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            inner: Mat::zeros(rows, cols),
        }
    }

    pub fn identity(n: usize) -> Self {
        ComplexMatrix {
            inner: Mat::identity(n, n),
        }
    }

    pub fn diag(values: &[Complex64]) -> Self {
        Self::from_fn(values.len(), values.len(), |i, j| {
            if i == j {
                values[i]
            } else {
                ZERO
            }
        })
    }

    pub fn diag_real(values: &[f64]) -> Self {
        Self::from_fn(values.len(), values.len(), |i, j| {
            if i == j {
                Complex64::new(values[i], 0.0)
            } else {
                ZERO
            }
        })
    }

    /// Outer product `u v*`.
    pub fn outer(u: &Vector, v: &Vector) -> Self {
        Self::from_fn(u.dim(), v.dim(), |i, j| u[i] * v[j].conj())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vector]) -> Self {
        let n = cols[0].dim();
        Self::from_fn(n, cols.len(), |i, j| cols[j][i])
    }

    pub fn rows(&self) -> usize {
        self.inner.nrows()
    }

    pub fn cols(&self) -> usize {
        self.inner.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.inner[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        self.inner[(i, j)] = value;
    }

    pub fn row_major(&self) -> Vec<Complex64> {
        let (r, c) = (self.rows(), self.cols());
        let mut out = Vec::with_capacity(r * c);
        for i in 0..r {
            for j in 0..c {
                out.push(self.inner[(i, j)]);
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Vector {
        Vector::new((0..self.rows()).map(|i| self.inner[(i, j)]).collect())
            .expect("matrix entries are finite")
    }

    pub fn is_finite(&self) -> bool {
        (0..self.cols()).all(|j| (0..self.rows()).all(|i| self.inner[(i, j)].is_finite()))
    }

    pub(crate) fn ensure_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows())
        } else {
            Err(Error::NotSquare {
                rows: self.rows(),
                cols: self.cols(),
            })
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        ComplexMatrix {
            inner: self.inner.adjoint().to_owned(),
        }
    }

    pub fn transpose(&self) -> Self {
        ComplexMatrix {
            inner: self.inner.transpose().to_owned(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_fn(self.rows(), self.cols(), |i, j| c * self.inner[(i, j)])
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(Complex64::new(c, 0.0))
    }

    /// `self + c I`.
    pub fn shift(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        for k in 0..self.rows().min(self.cols()) {
            out.inner[(k, k)] += c;
        }
        out
    }

    pub fn apply(&self, v: &Vector) -> Result<Vector> {
        if v.dim() != self.cols() {
            return Err(Error::dims(self.cols(), v.dim()));
        }
        let out = (0..self.rows())
            .map(|i| (0..self.cols()).map(|j| self.inner[(i, j)] * v[j]).sum())
            .collect();
        Vector::new(out)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows().min(self.cols()))
            .map(|k| self.inner[(k, k)])
            .sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner.norm_l2()
    }

    pub fn max_abs(&self) -> f64 {
        self.inner.norm_max()
    }

    /// Singular values in nonincreasing order.
    pub fn singular_values(&self) -> Result<Vec<f64>> {
        self.inner
            .singular_values()
            .map_err(|_| Error::NoConvergence)
    }

    /// Operator 2-norm.
    pub fn op_norm(&self) -> Result<f64> {
        Ok(self.singular_values()?.first().copied().unwrap_or(0.0))
    }

    pub fn min_singular_value(&self) -> Result<f64> {
        Ok(self.singular_values()?.last().copied().unwrap_or(0.0))
    }

    /// `‖A − A*‖_F / ‖A‖_F`, zero for the zero matrix.
    pub fn hermitian_asymmetry(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let scale = self.frobenius_norm();
        if scale == 0.0 {
            return 0.0;
        }
        (self - &self.adjoint()).frobenius_norm() / scale
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_asymmetry() <= tol
    }

    /// `(A + A*) / 2`.
    pub fn hermitian_part(&self) -> Self {
        (self + &self.adjoint()).scale_real(0.5)
    }

    /// Relative commutator defect `‖AA* − A*A‖_F / ‖A‖_F²`.
    pub fn normality_defect(&self) -> f64 {
        let scale = self.frobenius_norm().powi(2);
        if scale == 0.0 {
            return 0.0;
        }
        let a_star = self.adjoint();
        (&(self * &a_star) - &(&a_star * self)).frobenius_norm() / scale
    }

    /// Solves `self · X = rhs` by partial-pivoting LU, rejecting numerically
    /// singular systems.
    pub fn solve(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = self.ensure_square()?;
        if rhs.rows() != n {
            return Err(Error::dims(n, rhs.rows()));
        }
        self.ensure_nonsingular()?;
        let x = self.inner.partial_piv_lu().solve(&rhs.inner);
        let out = ComplexMatrix { inner: x };
        if !out.is_finite() {
            return Err(Error::Factorization(
                "LU solve produced non-finite values".into(),
            ));
        }
        Ok(out)
    }

    /// LU solve without the singularity gate, for systems known to be
    /// nonsingular (shifted Hermitian matrices off the real axis).
    pub(crate) fn solve_unchecked(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix {
            inner: self.inner.partial_piv_lu().solve(&rhs.inner),
        }
    }

    /// Solves `self · X = rhs` for Hermitian positive definite `self` via Cholesky.
    pub fn solve_hpd(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = self.ensure_square()?;
        if rhs.rows() != n {
            return Err(Error::dims(n, rhs.rows()));
        }
        let llt = self
            .inner
            .llt(Side::Lower)
            .map_err(|e| Error::Factorization(format!("Cholesky: {e:?}")))?;
        let out = ComplexMatrix {
            inner: llt.solve(&rhs.inner),
        };
        if !out.is_finite() {
            return Err(Error::Factorization(
                "Cholesky solve produced non-finite values".into(),
            ));
        }
        Ok(out)
    }

    pub fn inverse(&self) -> Result<ComplexMatrix> {
        let n = self.ensure_square()?;
        self.solve(&Self::identity(n))
    }

    /// Relative singularity gate: `σ_min ≤ 1e-14 σ_max` is treated as singular.
    pub(crate) fn ensure_nonsingular(&self) -> Result<()> {
        let sv = self.singular_values()?;
        let (max, min) = (sv[0], *sv.last().unwrap());
        if max == 0.0 || min <= SINGULAR_RTOL * max {
            return Err(Error::Singular { sigma_min: min });
        }
        Ok(())
    }

    /// Assembles a block-diagonal matrix.
    pub fn block_diag(blocks: &[ComplexMatrix]) -> Self {
        let rows: usize = blocks.iter().map(|b| b.rows()).sum();
        let cols: usize = blocks.iter().map(|b| b.cols()).sum();
        let mut out = Mat::<Complex64>::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for j in 0..b.cols() {
                for i in 0..b.rows() {
                    out[(r0 + i, c0 + j)] = b.inner[(i, j)];
                }
            }
            r0 += b.rows();
            c0 += b.cols();
        }
        ComplexMatrix { inner: out }
    }

    /// Assembles `[[a, b], [c, d]]` from four equally sized square blocks.
    pub fn from_blocks(
        a: &ComplexMatrix,
        b: &ComplexMatrix,
        c: &ComplexMatrix,
        d: &ComplexMatrix,
    ) -> Self {
        let n = a.rows();
        Self::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
            (true, true) => a.get(i, j),
            (true, false) => b.get(i, j - n),
            (false, true) => c.get(i - n, j),
            (false, false) => d.get(i - n, j - n),
        })
    }

    /// Copies out the `nrows × ncols` submatrix starting at `(r0, c0)`.
    pub fn submatrix(&self, r0: usize, c0: usize, nrows: usize, ncols: usize) -> Self {
        Self::from_fn(nrows, ncols, |i, j| self.inner[(r0 + i, c0 + j)])
    }

    /// Vertical concatenation `[self; other]`.
    pub fn vstack(&self, other: &ComplexMatrix) -> Result<Self> {
        if self.cols() != other.cols() {
            return Err(Error::dims(self.cols(), other.cols()));
        }
        let r = self.rows();
        Ok(Self::from_fn(r + other.rows(), self.cols(), |i, j| {
            if i < r {
                self.get(i, j)
            } else {
                other.get(i - r, j)
            }
        }))
    }

    pub fn powi(&self, k: u32) -> Result<Self> {
        let n = self.ensure_square()?;
        let mut out = Self::identity(n);
        for _ in 0..k {
            out = &out * self;
        }
        Ok(out)
    }
}

pub(crate) const SINGULAR_RTOL: f64 = 1e-14;

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows(), self.cols())?;
        for i in 0..self.rows() {
            write!(f, "  ")?;
            for j in 0..self.cols() {
                let z = self.get(i, j);
                write!(f, "{:+.6e}{:+.6e}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix {
            inner: &self.inner + &rhs.inner,
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix {
            inner: &self.inner - &rhs.inner,
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix {
            inner: &self.inner * &rhs.inner,
        }
    }
}

/// `‖x − y‖_F / max(1, ‖y‖_F)`.
pub fn relative_residual(x: &ComplexMatrix, y: &ComplexMatrix) -> f64 {
    (x - y).frobenius_norm() / y.frobenius_norm().max(1.0)
}

pub(crate) fn one() -> Complex64 {
    ONE
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn adjoint_examples() {
        let a = ComplexMatrix::diag(&[c(0.0, 1.0)]);
        assert_eq!(a.adjoint().get(0, 0), c(0.0, -1.0));

        let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]);
        assert_eq!(
            a.adjoint(),
            ComplexMatrix::from_real_rows(&[&[1.0, 3.0], &[2.0, 4.0]])
        );

        let shift = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert_eq!(
            shift.adjoint(),
            ComplexMatrix::from_real_rows(&[&[0.0, 0.0], &[1.0, 0.0]])
        );
    }

    #[test]
    fn row_major_roundtrip() {
        let data: Vec<_> = (0..6).map(|k| c(k as f64, -(k as f64))).collect();
        let m = ComplexMatrix::from_row_major(2, 3, data.clone()).unwrap();
        assert_eq!(m.get(1, 0), c(3.0, -3.0));
        assert_eq!(m.row_major(), data);
    }

    #[test]
    fn constructor_invariants() {
        assert!(matches!(
            ComplexMatrix::from_row_major(2, 2, vec![ZERO; 3]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            ComplexMatrix::from_row_major(1, 2, vec![ZERO, c(f64::INFINITY, 0.0)]),
            Err(Error::NonFinite { row: 0, col: 1 })
        ));
        assert!(ComplexMatrix::from_row_major(0, 2, vec![]).is_err());
    }

    #[test]
    fn solve_rejects_singular() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]);
        assert!(matches!(
            a.solve(&ComplexMatrix::identity(2)),
            Err(Error::Singular { .. })
        ));
    }

    #[test]
    fn solvers_agree() {
        let a = ComplexMatrix::from_rows(&[
            vec![c(4.0, 0.0), c(1.0, -1.0)],
            vec![c(1.0, 1.0), c(3.0, 0.0)],
        ]);
        let b = ComplexMatrix::from_rows(&[vec![c(1.0, 2.0)], vec![c(-1.0, 0.5)]]);
        let x1 = a.solve(&b).unwrap();
        let x2 = a.solve_hpd(&b).unwrap();
        assert!((&x1 - &x2).frobenius_norm() < 1e-14);
        assert!((&(&a * &x1) - &b).frobenius_norm() < 1e-14);
    }

    #[test]
    fn block_helpers() {
        let a = ComplexMatrix::diag_real(&[1.0]);
        let b = ComplexMatrix::diag_real(&[2.0, 3.0]);
        let d = ComplexMatrix::block_diag(&[a, b.clone()]);
        assert_eq!(d, ComplexMatrix::diag_real(&[1.0, 2.0, 3.0]));
        assert_eq!(d.submatrix(1, 1, 2, 2), b);
        assert_eq!(b.op_norm().unwrap(), 3.0);
    }
}
