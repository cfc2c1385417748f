//! Observables, pure states and their first and second moments.

use crate::error::{Error, Result};
use crate::linalg::{c, hermitian_eigensystem, Complex, ComplexMatrix, ComplexVector, EigenSystem};

/// Allowed `|‖φ‖ - 1|` for a [`PureState`].
pub const NORMALIZATION_TOL: f64 = 1e-12;
/// Relative limit on the imaginary part of an expectation value.
pub const IMAGINARY_RESIDUE_TOL: f64 = 1e-11;
/// Relative limit on the disagreement of two routes to the same quantity.
pub const ROUTE_TOL: f64 = 1e-11;

fn check_dims(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, actual })
    }
}

/// A Hermitian matrix with a short label. Hermiticity is checked once, here.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    matrix: ComplexMatrix,
    label: String,
}

impl Observable {
    pub fn new(label: impl Into<String>, matrix: ComplexMatrix) -> Result<Self> {
        let residual = matrix.hermiticity_residual();
        let tolerance = matrix.hermitian_tolerance();
        if residual > tolerance {
            return Err(Error::NotHermitian { residual, tolerance });
        }
        Ok(Self {
            matrix,
            label: label.into(),
        })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim),
            label: "identity".into(),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        let matrix = self.matrix.add(&other.matrix)?;
        Self::new(format!("{}+{}", self.label, other.label), matrix)
    }

    pub fn difference(&self, other: &Self) -> Result<Self> {
        let matrix = self.matrix.sub(&other.matrix)?;
        Self::new(format!("{}-{}", self.label, other.label), matrix)
    }

    pub fn eigensystem(&self) -> Result<EigenSystem> {
        hermitian_eigensystem(&self.matrix)
    }

    /// Frobenius norm of `[self, other]`.
    pub fn commutator_norm(&self, other: &Self) -> Result<f64> {
        Ok(self.matrix.commutator(&other.matrix)?.frobenius_norm())
    }
}

/// A unit vector `|φ>`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    vector: ComplexVector,
}

impl PureState {
    pub fn new(vector: ComplexVector) -> Result<Self> {
        let residual = (vector.norm() - 1.0).abs();
        if residual > NORMALIZATION_TOL {
            return Err(Error::NotNormalized { residual });
        }
        Ok(Self { vector })
    }

    pub fn from_unnormalized(vector: ComplexVector) -> Result<Self> {
        Ok(Self {
            vector: vector.normalized()?,
        })
    }

    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        Self::new(ComplexVector::basis(dim, k)?)
    }

    pub fn vector(&self) -> &ComplexVector {
        &self.vector
    }

    pub fn dim(&self) -> usize {
        self.vector.dim()
    }
}

/// `⟨F⟩`, `⟨F²⟩`, `ΔF` and `δF|φ⟩` for one observable and state.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSet {
    pub mean: f64,
    pub second_moment: f64,
    /// `‖δF|φ⟩‖`.
    pub std_dev: f64,
    pub deviation_vector: ComplexVector,
}

impl MomentSet {
    pub fn variance(&self) -> f64 {
        self.std_dev * self.std_dev
    }

    /// `sqrt(⟨F²⟩ - ⟨F⟩²)`, clamped at zero.
    pub fn std_dev_from_moments(&self) -> f64 {
        (self.second_moment - self.mean * self.mean).max(0.0).sqrt()
    }
}

/// `C(A,B) = ⟨AB⟩ - ⟨A⟩⟨B⟩` split into its real (classical) and imaginary
/// parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Correlation {
    pub value: Complex,
    pub classical_part: f64,
    pub quantum_part: f64,
}

impl Correlation {
    fn from_value(value: Complex) -> Self {
        Self {
            value,
            classical_part: value.re,
            quantum_part: value.im,
        }
    }

    pub fn modulus(&self) -> f64 {
        self.value.norm()
    }
}

fn norm_scale(x: f64) -> f64 {
    x.max(1.0)
}

pub fn expectation(f: &Observable, phi: &PureState) -> Result<f64> {
    check_dims(f.dim(), phi.dim())?;
    let z = phi.vector.inner_unchecked(&f.matrix.apply_unchecked(&phi.vector));
    let limit = IMAGINARY_RESIDUE_TOL * norm_scale(f.matrix.frobenius_norm());
    if z.im.abs() > limit {
        return Err(Error::ImaginaryResidue {
            residue: z.im.abs(),
            limit,
        });
    }
    Ok(z.re)
}

/// `δF = F - ⟨F⟩ I`.
pub fn deviation_operator(f: &Observable, phi: &PureState) -> Result<Observable> {
    let mean = expectation(f, phi)?;
    Observable::new(format!("δ{}", f.label), f.matrix.shift_diagonal(mean))
}

pub fn moments(f: &Observable, phi: &PureState) -> Result<MomentSet> {
    check_dims(f.dim(), phi.dim())?;
    let f_phi = f.matrix.apply_unchecked(&phi.vector);
    let z = phi.vector.inner_unchecked(&f_phi);
    let limit = IMAGINARY_RESIDUE_TOL * norm_scale(f.matrix.frobenius_norm());
    if z.im.abs() > limit {
        return Err(Error::ImaginaryResidue {
            residue: z.im.abs(),
            limit,
        });
    }
    let mean = z.re;
    let second_moment = f_phi.norm_sqr();
    let deviation_vector = f_phi.zip_with(&phi.vector, |fx, x| fx - mean * x);
    let std_dev = deviation_vector.norm();

    // Compare the two variance routes; the squared form stays well conditioned
    // near eigenstates where the square-root route loses half its digits.
    let divergence = (std_dev * std_dev - (second_moment - mean * mean)).abs();
    let limit = 10.0 * ROUTE_TOL * norm_scale(second_moment);
    if divergence > limit {
        return Err(Error::RouteDivergence {
            quantity: "variance",
            divergence,
            limit,
        });
    }
    Ok(MomentSet {
        mean,
        second_moment,
        std_dev,
        deviation_vector,
    })
}

/// `⟨φ|[A,B]|φ⟩`, evaluated through the matrix commutator.
pub fn commutator_expectation(a: &Observable, b: &Observable, phi: &PureState) -> Result<Complex> {
    check_dims(a.dim(), b.dim())?;
    check_dims(a.dim(), phi.dim())?;
    let comm = a.matrix.commutator(&b.matrix)?;
    Ok(phi.vector.inner_unchecked(&comm.apply_unchecked(&phi.vector)))
}

/// Quantum correlation function, checked against `⟨AB⟩ - ⟨A⟩⟨B⟩` computed
/// from the matrix product.
pub fn correlation(a: &Observable, b: &Observable, phi: &PureState) -> Result<Correlation> {
    check_dims(a.dim(), b.dim())?;
    let ma = moments(a, phi)?;
    let mb = moments(b, phi)?;
    correlation_from_moments(a, b, phi, &ma, &mb)
}

pub(crate) fn correlation_from_moments(
    a: &Observable,
    b: &Observable,
    phi: &PureState,
    ma: &MomentSet,
    mb: &MomentSet,
) -> Result<Correlation> {
    let via_deviations = ma.deviation_vector.inner_unchecked(&mb.deviation_vector);
    let ab = a.matrix.mul(&b.matrix)?;
    let via_product =
        phi.vector.inner_unchecked(&ab.apply_unchecked(&phi.vector)) - c(ma.mean * mb.mean, 0.0);
    let divergence = (via_deviations - via_product).norm();
    let limit = ROUTE_TOL * norm_scale(a.matrix.frobenius_norm() * b.matrix.frobenius_norm());
    if divergence > limit {
        return Err(Error::RouteDivergence {
            quantity: "correlation",
            divergence,
            limit,
        });
    }
    Ok(Correlation::from_value(via_deviations))
}
