//! Dense complex vectors and square matrices for small dimensions.
//!
//! Nothing here knows about quantum mechanics; the types are plain
//! containers with the handful of operations the upper layers need.

mod eigen;

pub use eigen::{hermitian_eigensystem, EigenSystem, MAX_SWEEPS};

use crate::error::{Error, Result};

pub type Complex = num_complex::Complex64;

/// Relative Hermiticity tolerance, scaled by the Frobenius norm.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Absolute floor used whenever a tolerance is scaled by a norm.
pub const NORM_FLOOR: f64 = 1e-14;

#[inline]
pub(crate) fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

fn check_finite(entries: &[Complex]) -> Result<()> {
    match entries.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}

fn check_dims(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, actual })
    }
}

/// A column vector in `C^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector {
    entries: Vec<Complex>,
}

impl ComplexVector {
    pub fn new(entries: Vec<Complex>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::DimensionTooSmall { min: 1, actual: 0 });
        }
        check_finite(&entries)?;
        Ok(Self { entries })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| c(x, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            entries: vec![Complex::default(); dim.max(1)],
        }
    }

    /// Standard basis vector `e_k`.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::IndexOutOfRange { index: k, dim });
        }
        let mut v = Self::zeros(dim);
        v.entries[k] = c(1.0, 0.0);
        Ok(v)
    }

    pub(crate) fn from_entries_unchecked(entries: Vec<Complex>) -> Self {
        debug_assert!(!entries.is_empty());
        Self { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Complex] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Complex> {
        self.entries
    }

    /// `<self|other>`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Result<Complex> {
        check_dims(self.dim(), other.dim())?;
        Ok(self.inner_unchecked(other))
    }

    pub(crate) fn inner_unchecked(&self, other: &Self) -> Complex {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(x, y)| x.conj() * y)
            .sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, factor: Complex) -> Self {
        Self {
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim(), other.dim())?;
        Ok(self.zip_with(other, |x, y| x + y))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim(), other.dim())?;
        Ok(self.zip_with(other, |x, y| x - y))
    }

    pub(crate) fn zip_with(&self, other: &Self, f: impl Fn(Complex, Complex) -> Complex) -> Self {
        Self {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&x, &y)| f(x, y))
                .collect(),
        }
    }

    /// Unit vector along `self`.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(self.scale(c(1.0 / n, 0.0)))
    }
}

/// A dense `dim × dim` complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex>,
}

impl ComplexMatrix {
    pub fn new(dim: usize, entries: Vec<Complex>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionTooSmall { min: 1, actual: 0 });
        }
        check_dims(dim * dim, entries.len())?;
        check_finite(&entries)?;
        Ok(Self { dim, entries })
    }

    pub fn from_rows(rows: &[Vec<Complex>]) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            check_dims(dim, row.len())?;
            entries.extend_from_slice(row);
        }
        Self::new(dim, entries)
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<Complex>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| c(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn zeros(dim: usize) -> Self {
        let dim = dim.max(1);
        Self {
            dim,
            entries: vec![Complex::default(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..m.dim {
            m.entries[i * m.dim + i] = c(1.0, 0.0);
        }
        m
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let mut m = Self::zeros(values.len());
        if values.is_empty() {
            return Err(Error::DimensionTooSmall { min: 1, actual: 0 });
        }
        for (i, &x) in values.iter().enumerate() {
            m.entries[i * m.dim + i] = c(x, 0.0);
        }
        check_finite(&m.entries)?;
        Ok(m)
    }

    /// `|v><w|`.
    pub fn outer(v: &ComplexVector, w: &ComplexVector) -> Result<Self> {
        check_dims(v.dim(), w.dim())?;
        let dim = v.dim();
        let mut entries = Vec::with_capacity(dim * dim);
        for x in v.entries() {
            for y in w.entries() {
                entries.push(x * y.conj());
            }
        }
        Ok(Self { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex {
        self.entries[row * self.dim + col]
    }

    pub fn row(&self, row: usize) -> &[Complex] {
        &self.entries[row * self.dim..(row + 1) * self.dim]
    }

    pub fn apply(&self, x: &ComplexVector) -> Result<ComplexVector> {
        check_dims(self.dim, x.dim())?;
        Ok(self.apply_unchecked(x))
    }

    pub(crate) fn apply_unchecked(&self, x: &ComplexVector) -> ComplexVector {
        let entries = (0..self.dim)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x.entries())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect();
        ComplexVector::from_entries_unchecked(entries)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim, other.dim)?;
        let n = self.dim;
        let mut entries = vec![Complex::default(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == Complex::default() {
                    continue;
                }
                for j in 0..n {
                    entries[i * n + j] += a * other.entries[k * n + j];
                }
            }
        }
        Ok(Self { dim: n, entries })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim, other.dim)?;
        Ok(self.zip_with(other, |x, y| x + y))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim, other.dim)?;
        Ok(self.zip_with(other, |x, y| x - y))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex, Complex) -> Complex) -> Self {
        Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&x, &y)| f(x, y))
                .collect(),
        }
    }

    pub fn scale(&self, factor: Complex) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    /// `self - shift * I`.
    pub fn shift_diagonal(&self, shift: f64) -> Self {
        let mut m = self.clone();
        for i in 0..m.dim {
            m.entries[i * m.dim + i] -= c(shift, 0.0);
        }
        m
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(self.entries[j * n + i].conj());
            }
        }
        Self { dim: n, entries }
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    pub fn trace(&self) -> Complex {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise deviation `max |M - M^†|`.
    pub fn hermiticity_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                let d = (self.get(i, j) - self.get(j, i).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Absolute Hermiticity tolerance for this matrix.
    pub fn hermitian_tolerance(&self) -> f64 {
        HERMITIAN_TOL * self.frobenius_norm().max(NORM_FLOOR)
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_residual() <= self.hermitian_tolerance()
    }

    /// Largest entrywise deviation `max |M - N|`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        check_dims(self.dim, other.dim)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}
