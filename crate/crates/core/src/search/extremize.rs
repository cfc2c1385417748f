//! Derivative-free search for states that minimize or maximize a relation
//! gap.

use serde::{Deserialize, Serialize};

use super::nelder_mead::NelderMead;
use super::rng::{stream_rng, Stream};
use super::sampling::haar_state;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::linalg::{c, ComplexVector};
use crate::quantum::{Observable, PureState};
use crate::relations::{EvalOptions, PairQuantities, RelationId, RelationKind, RelationReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    MinimizeGap,
    MaximizeGap,
}

#[derive(Debug, Clone)]
pub struct ExtremizeRequest {
    pub relation: RelationId,
    pub a: Observable,
    pub b: Observable,
    pub direction: Direction,
    pub restarts: usize,
    pub max_evals_per_restart: usize,
    pub seed: u64,
    pub options: EvalOptions,
    pub record_trace: bool,
    pub execution: Execution,
}

impl ExtremizeRequest {
    /// Default budget: 8 restarts of 1000 evaluations each.
    pub fn new(relation: RelationId, a: Observable, b: Observable, direction: Direction) -> Self {
        Self {
            relation,
            a,
            b,
            direction,
            restarts: 8,
            max_evals_per_restart: 1000,
            seed: 0,
            options: EvalOptions::default(),
            record_trace: false,
            execution: Execution::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub evaluation: usize,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremizeResult {
    pub relation: RelationId,
    pub direction: Direction,
    pub best_state: PureState,
    pub best_gap: f64,
    pub best_report: RelationReport,
    pub best_restart: usize,
    /// Best gap reached by each restart, in restart order.
    pub restart_bests: Vec<f64>,
    pub evaluations_used: usize,
    /// Set if the best gap violates the bound beyond tolerance.
    pub numerical_defect: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TracePoint>>,
}

struct RestartOutcome {
    state: PureState,
    gap: f64,
    evals: usize,
    trace: Vec<f64>,
}

/// Maps `2d` reals to the unit sphere in `C^d`.
pub(crate) fn state_from_params(x: &[f64]) -> Option<PureState> {
    let v = ComplexVector::new(x.chunks_exact(2).map(|p| c(p[0], p[1])).collect()).ok()?;
    PureState::from_unnormalized(v).ok()
}

pub(crate) fn params_from_state(state: &PureState) -> Vec<f64> {
    state
        .vector()
        .entries()
        .iter()
        .flat_map(|z| [z.re, z.im])
        .collect()
}

fn gap_at(req: &ExtremizeRequest, state: &PureState) -> Option<f64> {
    PairQuantities::compute(&req.a, &req.b, state)
        .and_then(|q| q.report(req.relation, &req.options))
        .ok()
        .map(|r| r.gap)
}

pub fn extremize(req: &ExtremizeRequest) -> Result<ExtremizeResult> {
    match req.relation.kind() {
        _ if !req.relation.is_binary() => {
            return Err(Error::InvalidRelation {
                id: req.relation.to_string(),
                reason: "extremization needs a relation on a pair of observables",
            })
        }
        RelationKind::Identity => {
            return Err(Error::InvalidRelation {
                id: req.relation.to_string(),
                reason: "identities have no gap to extremize",
            })
        }
        _ => {}
    }
    if req.restarts == 0 || req.max_evals_per_restart == 0 {
        return Err(Error::InvalidArgument(
            "restarts and evaluations per restart must be positive".into(),
        ));
    }
    let dim = req.a.dim();
    if req.b.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: req.b.dim(),
        });
    }

    let sign = match req.direction {
        Direction::MinimizeGap => 1.0,
        Direction::MaximizeGap => -1.0,
    };
    let nm = NelderMead {
        max_evals: req.max_evals_per_restart,
        x_tol: 1e-10,
        f_target: match req.direction {
            Direction::MinimizeGap => Some(req.options.sat_tol),
            Direction::MaximizeGap => None,
        },
        initial_step: 0.25,
    };

    let outcomes: Vec<RestartOutcome> = req.execution.map_indexed(req.restarts, |r| {
        let start = haar_state(dim, &mut stream_rng(req.seed, Stream::Extremize, r as u64));
        let mut trace = Vec::new();
        let m = nm.minimize(
            |x| match state_from_params(x).and_then(|s| gap_at(req, &s)) {
                Some(gap) => {
                    if req.record_trace {
                        trace.push(gap);
                    }
                    sign * gap
                }
                None => f64::INFINITY,
            },
            &params_from_state(&start),
        );
        let state = state_from_params(&m.x).unwrap_or(start);
        RestartOutcome {
            gap: sign * m.f,
            state,
            evals: m.evals,
            trace,
        }
    });

    let restart_bests: Vec<f64> = outcomes.iter().map(|o| o.gap).collect();
    let best_restart = (0..outcomes.len())
        .min_by(|&i, &j| (sign * restart_bests[i]).total_cmp(&(sign * restart_bests[j])).then(i.cmp(&j)))
        .expect("at least one restart");
    let best = &outcomes[best_restart];
    let best_report = PairQuantities::compute(&req.a, &req.b, &best.state)?.report(req.relation, &req.options)?;
    let evaluations_used = outcomes.iter().map(|o| o.evals).sum();
    let trace = req.record_trace.then(|| {
        let mut points = Vec::new();
        let mut offset = 0;
        for o in &outcomes {
            points.extend(o.trace.iter().enumerate().map(|(k, &gap)| TracePoint {
                evaluation: offset + k,
                gap,
            }));
            offset += o.evals;
        }
        points
    });
    let numerical_defect = best_report.gap < -req.options.tol * best_report.scale() && !best_report.trivial;

    Ok(ExtremizeResult {
        relation: req.relation,
        direction: req.direction,
        best_state: best.state.clone(),
        best_gap: best_report.gap,
        best_report,
        best_restart,
        restart_bests,
        evaluations_used,
        numerical_defect,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::observable;
    use crate::relations::evaluate;

    #[test]
    fn hr_saturates_for_pauli_x_y() {
        let req = ExtremizeRequest::new(
            RelationId::Hr,
            observable("pauli-x", 2).unwrap(),
            observable("pauli-y", 2).unwrap(),
            Direction::MinimizeGap,
        );
        let res = extremize(&req).unwrap();
        assert!(res.best_gap <= 1e-6, "gap {}", res.best_gap);
        assert!(res.best_gap >= -1e-9);
        assert!(res.evaluations_used <= 8 * 1000);
        let again = extremize(&req).unwrap();
        assert_eq!(res, again);
    }

    #[test]
    fn best_gap_matches_recomputed_report() {
        let mut req = ExtremizeRequest::new(
            RelationId::ReverseSum,
            observable("spin-x", 3).unwrap(),
            observable("spin-z", 3).unwrap(),
            Direction::MaximizeGap,
        );
        req.restarts = 3;
        req.max_evals_per_restart = 400;
        req.record_trace = true;
        let res = extremize(&req).unwrap();
        let r = evaluate(req.relation, &req.a, &req.b, &res.best_state, &req.options).unwrap();
        assert!((r.gap - res.best_gap).abs() <= 1e-12);
        assert!((res.best_state.vector().norm() - 1.0).abs() <= 1e-12);
        let max = res.restart_bests.iter().cloned().fold(f64::MIN, f64::max);
        assert_eq!(res.restart_bests[res.best_restart], max);
        let trace = res.trace.unwrap();
        assert!(!trace.is_empty() && trace.len() <= res.evaluations_used);
        assert!(trace.windows(2).all(|w| w[0].evaluation < w[1].evaluation));
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let mut req = ExtremizeRequest::new(
            RelationId::StrongerSum,
            observable("pauli-x", 2).unwrap(),
            observable("pauli-z", 2).unwrap(),
            Direction::MinimizeGap,
        );
        req.restarts = 4;
        let par = extremize(&req).unwrap();
        req.execution = Execution::Sequential;
        assert_eq!(par, extremize(&req).unwrap());
    }

    #[test]
    fn identical_observables_saturate_amgm() {
        let a = observable("spin-x", 4).unwrap();
        let mut req = ExtremizeRequest::new(RelationId::AmgmVariances, a.clone(), a, Direction::MaximizeGap);
        req.restarts = 2;
        req.max_evals_per_restart = 200;
        let res = extremize(&req).unwrap();
        assert!(res.restart_bests.iter().all(|g| g.abs() <= 1e-12));
    }

    #[test]
    fn rejects_identities_and_empty_budgets() {
        let a = observable("pauli-x", 2).unwrap();
        let b = observable("pauli-z", 2).unwrap();
        let req = ExtremizeRequest::new(RelationId::ParallelogramId, a.clone(), b.clone(), Direction::MinimizeGap);
        assert!(matches!(extremize(&req), Err(Error::InvalidRelation { .. })));
        let req = ExtremizeRequest::new(RelationId::SumStdN, a.clone(), b.clone(), Direction::MinimizeGap);
        assert!(extremize(&req).is_err());
        let mut req = ExtremizeRequest::new(RelationId::Hr, a, b, Direction::MinimizeGap);
        req.restarts = 0;
        assert!(matches!(extremize(&req), Err(Error::InvalidArgument(_))));
    }
}
