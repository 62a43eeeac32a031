use std::ops::{Add, Index, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A finite-dimensional element of the Hilbert space.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector(Vec<Complex64>);

impl Vector {
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidArgument("vector must be nonempty".into()));
        }
        if let Some(k) = entries.iter().position(|z| !z.is_finite()) {
            return Err(Error::NonFinite { row: k, col: 0 });
        }
        Ok(Vector(entries))
    }

    pub fn from_real(entries: &[f64]) -> Result<Self> {
        Self::new(entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        Vector(vec![Complex64::new(0.0, 0.0); dim])
    }

    /// The `k`-th standard basis vector.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[k] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<Complex64> {
        self.0
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn norm_squared(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn scale(&self, c: Complex64) -> Vector {
        Vector(self.0.iter().map(|z| c * z).collect())
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl Index<usize> for Vector {
    type Output = Complex64;
    fn index(&self, k: usize) -> &Complex64 {
        &self.0[k]
    }
}

fn zip_with(a: &Vector, b: &Vector, f: impl Fn(Complex64, Complex64) -> Complex64) -> Vector {
    assert_eq!(a.dim(), b.dim(), "vector dimension mismatch");
    Vector(a.0.iter().zip(&b.0).map(|(x, y)| f(*x, *y)).collect())
}

impl Add for &Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        zip_with(self, rhs, |x, y| x + y)
    }
}

impl Sub for &Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        zip_with(self, rhs, |x, y| x - y)
    }
}

impl Mul<&Vector> for Complex64 {
    type Output = Vector;
    fn mul(self, rhs: &Vector) -> Vector {
        rhs.scale(self)
    }
}

/// `(f, g) = Σ conj(f_k) g_k`, linear in the second argument.
pub fn inner_product(f: &Vector, g: &Vector) -> Result<Complex64> {
    if f.dim() != g.dim() {
        return Err(Error::dims(f.dim(), g.dim()));
    }
    Ok(f.0.iter().zip(&g.0).map(|(a, b)| a.conj() * b).sum())
}

/// An ordered pair `<f, g>` in the direct sum `H ⊕ H`.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphPair {
    pub first: Vector,
    pub second: Vector,
}

impl GraphPair {
    pub fn new(first: Vector, second: Vector) -> Result<Self> {
        if first.dim() != second.dim() {
            return Err(Error::dims(first.dim(), second.dim()));
        }
        Ok(GraphPair { first, second })
    }

    pub fn norm_squared(&self) -> f64 {
        self.first.norm_squared() + self.second.norm_squared()
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    /// Flattens the pair into a single vector of twice the dimension.
    pub fn concat(&self) -> Vector {
        let mut v = self.first.0.clone();
        v.extend_from_slice(&self.second.0);
        Vector(v)
    }
}

/// Inner product on `H ⊕ H`: sum of the componentwise inner products.
pub fn pair_inner(p: &GraphPair, q: &GraphPair) -> Result<Complex64> {
    if p.first.dim() != q.first.dim() {
        return Err(Error::dims(p.first.dim(), q.first.dim()));
    }
    Ok(inner_product(&p.first, &q.first)? + inner_product(&p.second, &q.second)?)
}
