//! Resolving observable and state labels against a problem file or presets.

use std::path::PathBuf;

use clap::Args;
use uncertainty_core::problem::{Problem, ProblemFile};
use uncertainty_core::{presets, EvalOptions, Observable, PureState};

use crate::Failure;

#[derive(Debug, Args)]
pub struct Inputs {
    /// Problem file with labeled observables and states.
    #[arg(long)]
    pub problem: Option<PathBuf>,
    /// Label of the first observable (problem file first, then presets).
    #[arg(long = "A", value_name = "LABEL")]
    pub a: String,
    /// Label of the second observable.
    #[arg(long = "B", value_name = "LABEL")]
    pub b: String,
    /// Dimension used for presets when no problem file is given.
    #[arg(long, default_value_t = 2)]
    pub preset_dim: usize,
}

#[derive(Debug, Args)]
pub struct Tolerances {
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, default_value_t = 1e-7)]
    pub sat_tol: f64,
}

impl Tolerances {
    pub fn options(&self) -> Result<EvalOptions, Failure> {
        EvalOptions::new(self.tol, self.sat_tol).map_err(Failure::input)
    }
}

pub struct Resolver {
    problem: Option<Problem>,
    dim: usize,
}

impl Resolver {
    pub fn new(inputs: &Inputs) -> Result<Self, Failure> {
        let problem = match &inputs.problem {
            Some(path) => {
                let file = ProblemFile::read(path)
                    .map_err(|e| Failure::input(format!("cannot load {}: {e}", path.display())))?;
                Some(file.validate().map_err(|e| Failure::input(format!("{}: {e}", path.display())))?)
            }
            None => None,
        };
        let dim = problem.as_ref().map_or(inputs.preset_dim, |p| p.dim);
        Ok(Self { problem, dim })
    }

    pub fn observable(&self, label: &str) -> Result<Observable, Failure> {
        if let Some(obs) = self.problem.as_ref().and_then(|p| p.observables.get(label)) {
            return Ok(obs.clone());
        }
        presets::observable(label, self.dim).map_err(|e| Failure::input(format!("observable `{label}`: {e}")))
    }

    pub fn state(&self, label: &str) -> Result<PureState, Failure> {
        if let Some(state) = self.problem.as_ref().and_then(|p| p.states.get(label)) {
            return Ok(state.clone());
        }
        presets::state(label, self.dim).map_err(|e| Failure::input(format!("state `{label}`: {e}")))
    }

    pub fn pair(&self, inputs: &Inputs) -> Result<(Observable, Observable), Failure> {
        let a = self.observable(&inputs.a)?;
        let b = self.observable(&inputs.b)?;
        if a.dim() != b.dim() {
            return Err(Failure::input(format!(
                "dimension mismatch: `{}` is {}-dimensional, `{}` is {}-dimensional",
                inputs.a,
                a.dim(),
                inputs.b,
                b.dim()
            )));
        }
        Ok((a, b))
    }
}
