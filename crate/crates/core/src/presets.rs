//! Named demo observables and states.
//!
//! Observables: `pauli-x`, `pauli-y`, `pauli-z` (dimension 2), `identity`,
//! and `spin-x`, `spin-y`, `spin-z` for spin `j = (d - 1) / 2`, `2 ≤ d ≤ 8`.
//! States: `e<k>` (standard basis vector) and `uniform`.

use crate::error::{Error, Result};
use crate::linalg::{c, ComplexMatrix, ComplexVector};
use crate::quantum::{Observable, PureState};

pub const OBSERVABLE_NAMES: &[&str] = &[
    "pauli-x", "pauli-y", "pauli-z", "identity", "spin-x", "spin-y", "spin-z",
];

pub const MAX_SPIN_DIM: usize = 8;

pub fn observable(name: &str, dim: usize) -> Result<Observable> {
    let matrix = match name {
        "pauli-x" | "pauli-y" | "pauli-z" => {
            require_dim(name, dim, 2, 2)?;
            pauli(name)
        }
        "identity" => {
            require_dim(name, dim, 1, usize::MAX)?;
            ComplexMatrix::identity(dim)
        }
        "spin-x" | "spin-y" | "spin-z" => {
            require_dim(name, dim, 2, MAX_SPIN_DIM)?;
            spin(name, dim)
        }
        _ => return Err(Error::UnknownPreset(name.to_string())),
    };
    Observable::new(name, matrix)
}

pub fn state(name: &str, dim: usize) -> Result<PureState> {
    if name == "uniform" {
        let x = 1.0 / (dim as f64).sqrt();
        return PureState::from_unnormalized(ComplexVector::from_real(&vec![x; dim])?);
    }
    let index = name
        .strip_prefix('e')
        .and_then(|k| k.parse::<usize>().ok())
        .ok_or_else(|| Error::UnknownPreset(name.to_string()))?;
    PureState::basis(dim, index)
}

fn require_dim(name: &str, dim: usize, min: usize, max: usize) -> Result<()> {
    if dim < min || dim > max {
        return Err(Error::InvalidArgument(format!(
            "preset `{name}` is not available in dimension {dim}"
        )));
    }
    Ok(())
}

fn pauli(name: &str) -> ComplexMatrix {
    let (o, l, i) = (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
    let rows = match name {
        "pauli-x" => vec![vec![o, l], vec![l, o]],
        "pauli-y" => vec![vec![o, -i], vec![i, o]],
        _ => vec![vec![l, o], vec![o, -l]],
    };
    ComplexMatrix::from_rows(&rows).expect("2x2 literal")
}

/// Spin matrices in the `|j, m>` basis ordered `m = j, j-1, ..., -j`.
fn spin(name: &str, dim: usize) -> ComplexMatrix {
    let j = (dim as f64 - 1.0) / 2.0;
    let m = |k: usize| j - k as f64;
    let mut rows = vec![vec![c(0.0, 0.0); dim]; dim];
    match name {
        "spin-z" => {
            for (k, row) in rows.iter_mut().enumerate() {
                row[k] = c(m(k), 0.0);
            }
        }
        _ => {
            for k in 0..dim - 1 {
                // <m+1|J+|m> with m = m(k+1)
                let mk = m(k + 1);
                let ladder = 0.5 * ((j - mk) * (j + mk + 1.0)).sqrt();
                let (upper, lower) = if name == "spin-x" {
                    (c(ladder, 0.0), c(ladder, 0.0))
                } else {
                    (c(0.0, -ladder), c(0.0, ladder))
                };
                rows[k][k + 1] = upper;
                rows[k + 1][k] = lower;
            }
        }
    }
    ComplexMatrix::from_rows(&rows).expect("square by construction")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paulis_square_to_identity() {
        for name in ["pauli-x", "pauli-y", "pauli-z"] {
            let p = observable(name, 2).unwrap();
            assert_eq!(p.matrix().mul(p.matrix()).unwrap(), ComplexMatrix::identity(2));
        }
        assert!(observable("pauli-x", 3).is_err());
    }

    #[test]
    fn spin_half_is_half_pauli() {
        for (s, p) in [("spin-x", "pauli-x"), ("spin-y", "pauli-y"), ("spin-z", "pauli-z")] {
            let s = observable(s, 2).unwrap();
            let p = observable(p, 2).unwrap();
            assert_eq!(s.matrix(), &p.matrix().scale(c(0.5, 0.0)));
        }
    }

    #[test]
    fn spin_algebra_and_casimir() {
        for dim in 2..=MAX_SPIN_DIM {
            let j = (dim as f64 - 1.0) / 2.0;
            let x = observable("spin-x", dim).unwrap();
            let y = observable("spin-y", dim).unwrap();
            let z = observable("spin-z", dim).unwrap();
            // [Jx, Jy] = i Jz
            let comm = x.matrix().commutator(y.matrix()).unwrap();
            assert!(comm.max_abs_diff(&z.matrix().scale(c(0.0, 1.0))).unwrap() < 1e-13);
            let casimir = x.matrix().mul(x.matrix()).unwrap()
                .add(&y.matrix().mul(y.matrix()).unwrap()).unwrap()
                .add(&z.matrix().mul(z.matrix()).unwrap()).unwrap();
            let expected = ComplexMatrix::identity(dim).scale(c(j * (j + 1.0), 0.0));
            assert!(casimir.max_abs_diff(&expected).unwrap() < 1e-12);
        }
        assert!(observable("spin-x", 9).is_err());
    }

    #[test]
    fn states() {
        assert_eq!(state("e1", 3).unwrap(), PureState::basis(3, 1).unwrap());
        assert!(state("e3", 3).is_err());
        assert!(state("bogus", 3).is_err());
        assert!((state("uniform", 4).unwrap().vector().norm() - 1.0).abs() < 1e-15);
        assert!(matches!(observable("nope", 2), Err(Error::UnknownPreset(_))));
    }
}
