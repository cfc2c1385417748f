//! Randomized soundness campaigns over the relation registry.

use serde::Serialize;

use super::rng::{stream_rng, Stream};
use super::sampling::{gue_observable, haar_state};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::problem::ProblemFile;
use crate::quantum::{self, Observable, PureState};
use crate::relations::{self, EvalOptions, PairQuantities, RelationId, RelationKind, RelationReport};

#[derive(Debug, Clone)]
pub enum ObservableSource {
    /// Fresh GUE draw per trial; `A` and `B` sources use separate streams.
    Gue { dim: usize, seed: u64 },
    Fixed(Observable),
}

#[derive(Debug, Clone)]
pub enum StateSource {
    Haar { dim: usize, seed: u64 },
    Fixed(PureState),
}

impl ObservableSource {
    fn dim(&self) -> usize {
        match self {
            ObservableSource::Gue { dim, .. } => *dim,
            ObservableSource::Fixed(o) => o.dim(),
        }
    }

    fn draw(&self, stream: Stream, trial: usize, label: &str) -> Observable {
        match self {
            ObservableSource::Gue { dim, seed } => {
                gue_observable(*dim, &mut stream_rng(*seed, stream, trial as u64), label)
            }
            ObservableSource::Fixed(o) => o.clone(),
        }
    }
}

impl StateSource {
    fn dim(&self) -> usize {
        match self {
            StateSource::Haar { dim, .. } => *dim,
            StateSource::Fixed(s) => s.dim(),
        }
    }

    fn draw(&self, trial: usize) -> PureState {
        match self {
            StateSource::Haar { dim, seed } => {
                haar_state(*dim, &mut stream_rng(*seed, Stream::FuzzState, trial as u64))
            }
            StateSource::Fixed(s) => s.clone(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct FuzzCampaign {
    pub a: ObservableSource,
    pub b: ObservableSource,
    pub state: StateSource,
    pub relations: Vec<RelationId>,
    pub trials: usize,
    pub options: EvalOptions,
    pub execution: Execution,
}

impl FuzzCampaign {
    /// GUE pairs and Haar states in `dim`, with all binary relations.
    pub fn random(dim: usize, seed: u64, trials: usize) -> Self {
        Self {
            a: ObservableSource::Gue { dim, seed },
            b: ObservableSource::Gue { dim, seed },
            state: StateSource::Haar { dim, seed },
            relations: RelationId::binary().collect(),
            trials,
            options: EvalOptions::default(),
            execution: Execution::default(),
        }
    }

    pub fn trial_inputs(&self, trial: usize) -> (Observable, Observable, PureState) {
        (
            self.a.draw(Stream::FuzzA, trial, "A"),
            self.b.draw(Stream::FuzzB, trial, "B"),
            self.state.draw(trial),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelationTally {
    pub id: RelationId,
    pub kind: RelationKind,
    pub evaluated: usize,
    pub satisfied: usize,
    pub saturated: usize,
    pub trivial: usize,
    pub violations: usize,
    /// Largest relative residual for identities; smallest relative gap for
    /// bounds and chains.
    pub worst_relative_gap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub trial: usize,
    pub report: RelationReport,
    pub payload: ProblemFile,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialError {
    pub trial: usize,
    pub message: String,
    pub payload: ProblemFile,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CampaignSummary {
    pub dim: usize,
    pub trials: usize,
    pub tolerance: f64,
    pub saturation_tolerance: f64,
    pub tallies: Vec<RelationTally>,
    /// Largest `|‖δF φ‖ - sqrt(⟨F²⟩ - ⟨F⟩²)|` over both observables.
    pub max_std_dev_route_gap: f64,
    pub violations: Vec<Violation>,
    pub errors: Vec<TrialError>,
}

impl CampaignSummary {
    pub fn violation_count(&self) -> usize {
        self.violations.len() + self.errors.len()
    }

    pub fn tally(&self, id: RelationId) -> Option<&RelationTally> {
        self.tallies.iter().find(|t| t.id == id)
    }
}

pub fn payload(a: &Observable, b: &Observable, phi: &PureState) -> ProblemFile {
    let mut file = ProblemFile::new(phi.dim());
    file.insert_observable("A", a);
    file.insert_observable("B", b);
    file.insert_state("phi", phi);
    file
}

fn evaluate_one(
    id: RelationId,
    q: &PairQuantities,
    a: &Observable,
    b: &Observable,
    phi: &PureState,
    opts: &EvalOptions,
) -> Result<RelationReport> {
    if id == RelationId::SumStdN {
        relations::evaluate_sum_n(&[a.clone(), b.clone()], phi, opts)
    } else {
        q.report(id, opts)
    }
}

/// Re-evaluates the relations on a dumped `(A, B, phi)` payload.
pub fn replay(payload: &ProblemFile, relations: &[RelationId], opts: &EvalOptions) -> Result<Vec<RelationReport>> {
    let problem = payload.validate()?;
    let get_obs = |label: &str| {
        problem.observables.get(label).ok_or_else(|| Error::Problem {
            label: label.to_string(),
            reason: "missing from payload".into(),
        })
    };
    let a = get_obs("A")?;
    let b = get_obs("B")?;
    let phi = problem.states.get("phi").ok_or_else(|| Error::Problem {
        label: "phi".into(),
        reason: "missing from payload".into(),
    })?;
    let q = PairQuantities::compute(a, b, phi)?;
    relations
        .iter()
        .map(|&id| evaluate_one(id, &q, a, b, phi, opts))
        .collect()
}

type TrialOutcome = std::result::Result<(Vec<RelationReport>, f64), String>;

fn run_trial(campaign: &FuzzCampaign, trial: usize) -> TrialOutcome {
    let (a, b, phi) = campaign.trial_inputs(trial);
    let run = || -> Result<(Vec<RelationReport>, f64)> {
        let ma = quantum::moments(&a, &phi)?;
        let mb = quantum::moments(&b, &phi)?;
        let route_gap = (ma.std_dev - ma.std_dev_from_moments())
            .abs()
            .max((mb.std_dev - mb.std_dev_from_moments()).abs());
        let q = PairQuantities::compute(&a, &b, &phi)?;
        let reports = campaign
            .relations
            .iter()
            .map(|&id| evaluate_one(id, &q, &a, &b, &phi, &campaign.options))
            .collect::<Result<Vec<_>>>()?;
        Ok((reports, route_gap))
    };
    run().map_err(|e| e.to_string())
}

pub fn fuzz_campaign(campaign: &FuzzCampaign) -> Result<CampaignSummary> {
    let dim = campaign.state.dim();
    for d in [campaign.a.dim(), campaign.b.dim()] {
        if d != dim {
            return Err(Error::DimensionMismatch { expected: dim, actual: d });
        }
    }

    let outcomes: Vec<TrialOutcome> = campaign
        .execution
        .map_indexed(campaign.trials, |t| run_trial(campaign, t));

    let mut tallies: Vec<RelationTally> = campaign
        .relations
        .iter()
        .map(|&id| RelationTally {
            id,
            kind: id.kind(),
            evaluated: 0,
            satisfied: 0,
            saturated: 0,
            trivial: 0,
            violations: 0,
            worst_relative_gap: None,
        })
        .collect();
    let mut violations = Vec::new();
    let mut errors = Vec::new();
    let mut max_route_gap = 0.0f64;

    for (trial, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Ok((reports, route_gap)) => {
                max_route_gap = max_route_gap.max(route_gap);
                for (tally, report) in tallies.iter_mut().zip(reports) {
                    tally.evaluated += 1;
                    tally.satisfied += report.satisfied as usize;
                    tally.saturated += report.saturated as usize;
                    tally.trivial += report.trivial as usize;
                    let rel = report.relative_gap();
                    tally.worst_relative_gap = Some(match (tally.worst_relative_gap, report.kind) {
                        (None, _) => rel,
                        (Some(w), RelationKind::Identity) => w.max(rel),
                        (Some(w), _) => w.min(rel),
                    });
                    if report.is_violation() {
                        tally.violations += 1;
                        let (a, b, phi) = campaign.trial_inputs(trial);
                        violations.push(Violation {
                            trial,
                            report,
                            payload: payload(&a, &b, &phi),
                        });
                    }
                }
            }
            Err(message) => {
                let (a, b, phi) = campaign.trial_inputs(trial);
                errors.push(TrialError {
                    trial,
                    message,
                    payload: payload(&a, &b, &phi),
                });
            }
        }
    }

    Ok(CampaignSummary {
        dim,
        trials: campaign.trials,
        tolerance: campaign.options.tol,
        saturation_tolerance: campaign.options.sat_tol,
        tallies,
        max_std_dev_route_gap: max_route_gap,
        violations,
        errors,
    })
}
