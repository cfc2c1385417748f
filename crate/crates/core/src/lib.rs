//! Uncertainty relations for Hermitian observables on finite-dimensional
//! Hilbert spaces.
//!
//! The crate is layered bottom-up:
//!
//! * [`linalg`]: dense complex vectors and matrices with a Jacobi
//!   eigensolver for Hermitian matrices.
//! * [`quantum`]: observables, pure states, means, standard deviations,
//!   commutator expectations and the quantum correlation function.
//! * [`relations`]: the registry of lower bounds, reverse (upper) bounds,
//!   identities and sandwich chains, each evaluated into a [`RelationReport`].
//! * [`critical`]: eigenstate and uncorrelated-state critical points where
//!   the relations become trivial.
//! * [`search`]: seeded Haar/GUE sampling, Nelder–Mead extremization of
//!   relation gaps and randomized soundness campaigns.
//! * [`problem`] and [`presets`]: the JSON problem-file format and the named
//!   spin/Pauli observables used by the command-line tool.
//!
//! Batch work (fuzz trials, restarts, coarse sampling) runs on rayon when the
//! `parallel` feature is enabled and falls back to a sequential loop
//! otherwise; see [`exec`].

pub mod critical;
pub mod error;
pub mod exec;
pub mod linalg;
pub mod presets;
pub mod problem;
pub mod quantum;
pub mod relations;
pub mod search;

pub use error::{Error, Result};
pub use exec::Execution;
pub use linalg::{Complex, ComplexMatrix, ComplexVector, EigenSystem};
pub use quantum::{Correlation, MomentSet, Observable, PureState};
pub use relations::{EvalOptions, RelationId, RelationKind, RelationReport};
