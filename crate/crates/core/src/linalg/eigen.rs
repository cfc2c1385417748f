//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq`, then applies
//! the real symmetric Jacobi rotation that annihilates it. The accumulated
//! unitary holds the eigenvectors in its columns.

use super::{c, Complex, ComplexMatrix, ComplexVector, NORM_FLOOR};
use crate::error::{Error, Result};

/// Sweep budget; the solver reports [`Error::NoConvergence`] past this.
pub const MAX_SWEEPS: usize = 100;

const OFF_DIAGONAL_STOP: f64 = 1e-15;
const PIVOT_SKIP: f64 = 1e-17;

/// Eigenvalues in ascending order with matching orthonormal eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    pub values: Vec<f64>,
    pub vectors: Vec<ComplexVector>,
}

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `Σ λ_k |v_k><v_k|`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.dim();
        let mut m = ComplexMatrix::zeros(n);
        for (&lambda, v) in self.values.iter().zip(&self.vectors) {
            let term = ComplexMatrix::outer(v, v)
                .expect("eigenvectors share the matrix dimension")
                .scale(c(lambda, 0.0));
            m = m.add(&term).expect("same dimension");
        }
        m
    }
}

pub fn hermitian_eigensystem(m: &ComplexMatrix) -> Result<EigenSystem> {
    let residual = m.hermiticity_residual();
    let tolerance = m.hermitian_tolerance();
    if residual > tolerance {
        return Err(Error::NotHermitian { residual, tolerance });
    }

    let n = m.dim();
    let scale = m.frobenius_norm().max(NORM_FLOOR);
    // Symmetrize so that rounding in the input cannot leak into the diagonal.
    let mut a = vec![Complex::default(); n * n];
    for i in 0..n {
        a[i * n + i] = c(m.get(i, i).re, 0.0);
        for j in (i + 1)..n {
            let z = 0.5 * (m.get(i, j) + m.get(j, i).conj());
            a[i * n + j] = z;
            a[j * n + i] = z.conj();
        }
    }
    let mut v = vec![Complex::default(); n * n];
    for i in 0..n {
        v[i * n + i] = c(1.0, 0.0);
    }

    let mut converged = n == 1;
    let mut off = off_diagonal_norm(&a, n);
    for _ in 0..MAX_SWEEPS {
        if off <= OFF_DIAGONAL_STOP * scale {
            converged = true;
            break;
        }
        let mut rotated = false;
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                rotated |= rotate(&mut a, &mut v, n, p, q, scale);
            }
        }
        off = off_diagonal_norm(&a, n);
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged && off > OFF_DIAGONAL_STOP * scale {
        return Err(Error::NoConvergence {
            sweeps: MAX_SWEEPS,
            off_norm: off,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].re.total_cmp(&a[j * n + j].re));

    let values = order.iter().map(|&k| a[k * n + k].re).collect();
    let vectors = order
        .iter()
        .map(|&k| fix_phase((0..n).map(|row| v[row * n + k]).collect()))
        .collect();
    Ok(EigenSystem { values, vectors })
}

fn off_diagonal_norm(a: &[Complex], n: usize) -> f64 {
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[i * n + j].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Annihilates `a[p][q]` with `A <- G^† A G`, `V <- V G`. Returns whether a
/// rotation was applied.
fn rotate(a: &mut [Complex], v: &mut [Complex], n: usize, p: usize, q: usize, scale: f64) -> bool {
    let apq = a[p * n + q];
    let r = apq.norm();
    if r <= PIVOT_SKIP * scale {
        return false;
    }
    let phase = apq / r;
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;

    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        let t = 1.0 / (theta.abs() + (theta * theta + 1.0).sqrt());
        if theta < 0.0 {
            -t
        } else {
            t
        }
    };
    let cos = 1.0 / (t * t + 1.0).sqrt();
    let sin = t * cos;

    let g_pp = c(cos, 0.0);
    let g_pq = c(sin, 0.0);
    let g_qp = -sin * phase.conj();
    let g_qq = cos * phase.conj();

    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = akp * g_pp + akq * g_qp;
        a[k * n + q] = akp * g_pq + akq * g_qq;
    }
    for k in 0..n {
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        a[p * n + k] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[q * n + k] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[p * n + q] = Complex::default();
    a[q * n + p] = Complex::default();
    a[p * n + p] = c(app - t * r, 0.0);
    a[q * n + q] = c(aqq + t * r, 0.0);

    for k in 0..n {
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = vkp * g_pp + vkq * g_qp;
        v[k * n + q] = vkp * g_pq + vkq * g_qq;
    }
    true
}

/// First nonzero component made real and non-negative.
fn fix_phase(entries: Vec<Complex>) -> ComplexVector {
    let norm = entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let lead = entries.iter().find(|z| z.norm() > 1e-12 * norm).copied();
    let v = ComplexVector::from_entries_unchecked(entries);
    match lead {
        Some(z) => v.scale(z.conj() / z.norm()),
        None => v,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[allow(clippy::needless_range_loop)]
    fn random_hermitian(dim: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
        let mut rows = vec![vec![Complex::default(); dim]; dim];
        for i in 0..dim {
            rows[i][i] = c(rng.random_range(-2.0..2.0), 0.0);
            for j in (i + 1)..dim {
                let z = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                rows[i][j] = z;
                rows[j][i] = z.conj();
            }
        }
        ComplexMatrix::from_rows(&rows).unwrap()
    }

    fn check_invariants(m: &ComplexMatrix, es: &EigenSystem) {
        let scale = m.frobenius_norm().max(NORM_FLOOR);
        assert!(es.values.windows(2).all(|w| w[0] <= w[1]));
        for (i, vi) in es.vectors.iter().enumerate() {
            for (j, vj) in es.vectors.iter().enumerate() {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((vi.inner(vj).unwrap() - c(expected, 0.0)).norm() <= 1e-10);
            }
            let mv = m.apply(vi).unwrap();
            let resid = mv.sub(&vi.scale(c(es.values[i], 0.0))).unwrap().norm();
            assert!(resid <= 1e-9 * scale, "eigenpair residual {resid}");
        }
        let recon = es.reconstruct().sub(m).unwrap().frobenius_norm();
        assert!(recon <= 1e-9 * scale, "reconstruction residual {recon}");
    }

    #[test]
    fn diagonal_input() {
        let m = ComplexMatrix::diagonal(&[3.0, 1.0, 2.0]).unwrap();
        let es = hermitian_eigensystem(&m).unwrap();
        assert_eq!(es.values, vec![1.0, 2.0, 3.0]);
        assert_eq!(es.vectors[0], ComplexVector::basis(3, 1).unwrap());
        assert_eq!(es.vectors[1], ComplexVector::basis(3, 2).unwrap());
        assert_eq!(es.vectors[2], ComplexVector::basis(3, 0).unwrap());
    }

    #[test]
    fn pauli_x() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let es = hermitian_eigensystem(&m).unwrap();
        assert!((es.values[0] + 1.0).abs() < 1e-15);
        assert!((es.values[1] - 1.0).abs() < 1e-15);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let minus = ComplexVector::from_real(&[h, -h]).unwrap();
        let plus = ComplexVector::from_real(&[h, h]).unwrap();
        assert!(es.vectors[0].sub(&minus).unwrap().norm() < 1e-15);
        assert!(es.vectors[1].sub(&plus).unwrap().norm() < 1e-15);
        check_invariants(&m, &es);
    }

    #[test]
    fn pauli_y_phase_convention() {
        let m = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(0.0, -1.0)],
            vec![c(0.0, 1.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let es = hermitian_eigensystem(&m).unwrap();
        for v in &es.vectors {
            let lead = v.entries()[0];
            assert!(lead.im == 0.0 && lead.re > 0.0);
        }
        check_invariants(&m, &es);
    }

    #[test]
    fn degenerate_identity() {
        let m = ComplexMatrix::identity(4);
        let es = hermitian_eigensystem(&m).unwrap();
        assert_eq!(es.values, vec![1.0; 4]);
        check_invariants(&m, &es);
    }

    #[test]
    fn zero_matrix() {
        let m = ComplexMatrix::zeros(3);
        let es = hermitian_eigensystem(&m).unwrap();
        assert_eq!(es.values, vec![0.0; 3]);
        check_invariants(&m, &es);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(matches!(
            hermitian_eigensystem(&m),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn random_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for dim in 2..=16 {
            for _ in 0..5 {
                let m = random_hermitian(dim, &mut rng);
                let es = hermitian_eigensystem(&m).unwrap();
                check_invariants(&m, &es);
            }
        }
    }

    #[test]
    fn larger_and_degenerate_spectra() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m = random_hermitian(64, &mut rng);
        check_invariants(&m, &hermitian_eigensystem(&m).unwrap());

        // U diag(1,1,2,2,2,5) U^† with a random unitary from a first solve.
        let basis = hermitian_eigensystem(&random_hermitian(6, &mut rng)).unwrap();
        let spectrum = EigenSystem {
            values: vec![1.0, 1.0, 2.0, 2.0, 2.0, 5.0],
            vectors: basis.vectors,
        };
        let m = spectrum.reconstruct();
        let es = hermitian_eigensystem(&m).unwrap();
        for (a, b) in es.values.iter().zip(&spectrum.values) {
            assert!((a - b).abs() < 1e-12);
        }
        check_invariants(&m, &es);
    }
}
