//! JSON problem files: named observables and states in one dimension.
//!
//! ```json
//! {
//!   "dim": 2,
//!   "observables": { "A": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]] },
//!   "states": { "phi": [[1, 0], [0, 0]] }
//! }
//! ```
//!
//! Every complex number is a `[re, im]` pair; matrices are row-major nested
//! arrays. Floats are written in shortest round-trip form, so a file written
//! and re-read reproduces every matrix bit for bit.

use std::collections::BTreeMap;
use std::path::Path;

use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{c, Complex, ComplexMatrix, ComplexVector, HERMITIAN_TOL, NORM_FLOOR};
use crate::quantum::{Observable, PureState, NORMALIZATION_TOL};

/// Allowed `|‖φ‖ - 1|` for states read from a file.
pub const FILE_NORMALIZATION_TOL: f64 = 1e-10;

pub type Pair = [f64; 2];

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ProblemFile {
    pub dim: usize,
    #[serde(default)]
    pub observables: BTreeMap<String, Vec<Vec<Pair>>>,
    #[serde(default)]
    pub states: BTreeMap<String, Vec<Pair>>,
}

/// A validated problem file.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub dim: usize,
    pub observables: BTreeMap<String, Observable>,
    pub states: BTreeMap<String, PureState>,
}

fn pair(z: &Complex) -> Pair {
    [z.re, z.im]
}

pub fn matrix_pairs(m: &ComplexMatrix) -> Vec<Vec<Pair>> {
    (0..m.dim()).map(|i| m.row(i).iter().map(pair).collect()).collect()
}

pub fn vector_pairs(v: &ComplexVector) -> Vec<Pair> {
    v.entries().iter().map(pair).collect()
}

impl ProblemFile {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            ..Default::default()
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut text = self.to_json()?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }

    pub fn insert_observable(&mut self, label: &str, obs: &Observable) {
        self.observables.insert(label.to_string(), matrix_pairs(obs.matrix()));
    }

    pub fn insert_state(&mut self, label: &str, state: &PureState) {
        self.states.insert(label.to_string(), vector_pairs(state.vector()));
    }

    pub fn validate(&self) -> Result<Problem> {
        let dim = self.dim;
        if dim == 0 {
            return Err(problem_error("dim", "dimension must be positive"));
        }
        let mut observables = BTreeMap::new();
        for (label, rows) in &self.observables {
            observables.insert(label.clone(), parse_observable(label, dim, rows)?);
        }
        let mut states = BTreeMap::new();
        for (label, entries) in &self.states {
            states.insert(label.clone(), parse_state(label, dim, entries)?);
        }
        Ok(Problem {
            dim,
            observables,
            states,
        })
    }
}

fn problem_error(label: &str, reason: impl Into<String>) -> Error {
    Error::Problem {
        label: label.to_string(),
        reason: reason.into(),
    }
}

fn parse_observable(label: &str, dim: usize, rows: &[Vec<Pair>]) -> Result<Observable> {
    if rows.len() != dim {
        return Err(problem_error(label, format!("matrix has {} rows, expected {dim}", rows.len())));
    }
    let mut entries = Vec::with_capacity(dim * dim);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != dim {
            return Err(problem_error(
                label,
                format!("row {i} has {} entries, expected {dim}", row.len()),
            ));
        }
        entries.extend(row.iter().map(|p| c(p[0], p[1])));
    }
    let matrix = ComplexMatrix::new(dim, entries).map_err(|e| problem_error(label, e.to_string()))?;
    let residual = matrix.hermiticity_residual();
    let tolerance = HERMITIAN_TOL * matrix.frobenius_norm().max(NORM_FLOOR);
    if residual > tolerance {
        return Err(problem_error(
            label,
            format!("matrix is not Hermitian (residual {residual:.3e}, limit {tolerance:.3e})"),
        ));
    }
    Observable::new(label, matrix).map_err(|e| problem_error(label, e.to_string()))
}

fn parse_state(label: &str, dim: usize, entries: &[Pair]) -> Result<PureState> {
    if entries.len() != dim {
        return Err(problem_error(
            label,
            format!("state has {} entries, expected {dim}", entries.len()),
        ));
    }
    let v = ComplexVector::new(entries.iter().map(|p| c(p[0], p[1])).collect())
        .map_err(|e| problem_error(label, e.to_string()))?;
    let residual = (v.norm() - 1.0).abs();
    if residual > FILE_NORMALIZATION_TOL {
        return Err(problem_error(
            label,
            format!("state is not normalized (|norm - 1| = {residual:.3e}, limit {FILE_NORMALIZATION_TOL:.0e})"),
        ));
    }
    // Keep stored bits when already within the in-memory tolerance.
    let state = if residual <= NORMALIZATION_TOL {
        PureState::new(v)
    } else {
        PureState::from_unnormalized(v)
    };
    state.map_err(|e| problem_error(label, e.to_string()))
}

impl Problem {
    pub fn to_file(&self) -> ProblemFile {
        let mut file = ProblemFile::new(self.dim);
        for (label, obs) in &self.observables {
            file.insert_observable(label, obs);
        }
        for (label, state) in &self.states {
            file.insert_state(label, state);
        }
        file
    }
}

impl Serialize for ComplexVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.dim()))?;
        for z in self.entries() {
            seq.serialize_element(&pair(z))?;
        }
        seq.end()
    }
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        matrix_pairs(self).serialize(serializer)
    }
}

impl Serialize for PureState {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.vector().serialize(serializer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::rng::{stream_rng, Stream};
    use crate::search::sampling::{gue_observable, haar_state};

    fn random_problem(dim: usize) -> Problem {
        let a = gue_observable(dim, &mut stream_rng(3, Stream::Test, 0), "A");
        let b = gue_observable(dim, &mut stream_rng(3, Stream::Test, 1), "B");
        let phi = haar_state(dim, &mut stream_rng(3, Stream::Test, 2));
        let mut file = ProblemFile::new(dim);
        file.insert_observable("A", &a);
        file.insert_observable("B", &b);
        file.insert_state("phi", &phi);
        file.validate().unwrap()
    }

    #[test]
    fn round_trip_is_bit_exact() {
        for dim in [2, 3, 8] {
            let problem = random_problem(dim);
            let text = problem.to_file().to_json().unwrap();
            let back = ProblemFile::from_json(&text).unwrap().validate().unwrap();
            assert_eq!(back, problem);
            for (label, obs) in &problem.observables {
                let other = &back.observables[label];
                for (x, y) in obs.matrix().entries().iter().zip(other.matrix().entries()) {
                    assert_eq!(x.re.to_bits(), y.re.to_bits());
                    assert_eq!(x.im.to_bits(), y.im.to_bits());
                }
            }
        }
    }

    #[test]
    fn rejects_bad_inputs_with_label() {
        let text = r#"{"dim": 2, "observables": {"bad": [[[0,0],[1,0]],[[0,0],[0,0]]]}}"#;
        let err = ProblemFile::from_json(text).unwrap().validate().unwrap_err();
        assert!(matches!(&err, Error::Problem { label, reason } if label == "bad" && reason.contains("Hermitian")), "{err}");

        let text = r#"{"dim": 2, "states": {"psi": [[1,0],[1,0]]}}"#;
        let err = ProblemFile::from_json(text).unwrap().validate().unwrap_err();
        assert!(matches!(&err, Error::Problem { label, reason } if label == "psi" && reason.contains("normalized")), "{err}");

        let text = r#"{"dim": 3, "observables": {"short": [[[1,0],[0,0]],[[0,0],[1,0]]]}}"#;
        let err = ProblemFile::from_json(text).unwrap().validate().unwrap_err();
        assert!(matches!(&err, Error::Problem { label, .. } if label == "short"));

        assert!(ProblemFile::from_json("{\"dim\": ").is_err());
    }

    #[test]
    fn slightly_unnormalized_state_is_renormalized() {
        let x = (0.5f64).sqrt() * (1.0 + 5e-11);
        let text = format!(r#"{{"dim": 2, "states": {{"psi": [[{x},0],[{x},0]]}}}}"#);
        let p = ProblemFile::from_json(&text).unwrap().validate().unwrap();
        assert!((p.states["psi"].vector().norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn state_serializes_as_pairs() {
        let s = PureState::basis(2, 1).unwrap();
        assert_eq!(serde_json::to_string(&s).unwrap(), "[[0.0,0.0],[1.0,0.0]]");
    }
}
