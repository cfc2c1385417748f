//! Critical points where the relations carry no information: eigenstates of
//! one observable, and states in which the two observables are
//! uncorrelated (`C(A,B) = 0`) while both deviations stay positive.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::quantum::{self, Observable, PureState};
use crate::relations::{EvalOptions, PairQuantities, RelationId};
use crate::search::extremize::{params_from_state, state_from_params};
use crate::search::nelder_mead::NelderMead;
use crate::search::rng::{stream_rng, Stream};
use crate::search::sampling::haar_state;

/// Deviation below which a state counts as an eigenstate.
pub const EIGENSTATE_THRESHOLD: f64 = 1e-8;
/// Penalty weight on deviation shortfalls in the uncorrelated search.
pub const DEVIATION_PENALTY: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Not applicable to this input.
    Skipped,
    /// Failed, but the failure is legitimate for some inputs and needs a look.
    Review,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
    pub status: CheckStatus,
}

impl CheckResult {
    fn at_most(name: &'static str, value: f64, threshold: f64) -> Self {
        Self::from_pass(name, value, threshold, value <= threshold)
    }

    fn above(name: &'static str, value: f64, threshold: f64) -> Self {
        Self::from_pass(name, value, threshold, value > threshold)
    }

    fn from_pass(name: &'static str, value: f64, threshold: f64, pass: bool) -> Self {
        Self {
            name,
            value,
            threshold,
            pass,
            status: if pass { CheckStatus::Pass } else { CheckStatus::Fail },
        }
    }
}

/// True unless some check has [`CheckStatus::Fail`].
pub fn battery_passes(checks: &[CheckResult]) -> bool {
    checks.iter().all(|c| c.status != CheckStatus::Fail)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Which {
    A,
    B,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenstateCase {
    pub which: Which,
    pub observable_label: String,
    pub index: usize,
    pub eigenvalue: f64,
    pub state: PureState,
    pub battery: Vec<CheckResult>,
}

impl EigenstateCase {
    pub fn passes(&self) -> bool {
        battery_passes(&self.battery)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.battery.iter().find(|c| c.name == name)
    }
}

/// Builds the eigenvector `index` (ascending eigenvalue order) of `A` or `B`
/// and runs the trivialization battery on it.
///
/// With `E` the observable supplying the eigenstate and `O` the other one:
///
/// 1. `Δ E ≤ 1e-10`
/// 2. `|⟨[A,B]⟩| ≤ 1e-9 ‖A‖‖B‖`
/// 3. `|Δ(A+B) − Δ O| ≤ 1e-10`
/// 4. `|Δ(A−B) − Δ O| ≤ 1e-10`
/// 5. `SUM_STD` saturated
/// 6. `STRONGER_SUM` gap equals `½ (Δ O)²` within `1e-9`
/// 7. `Δ O > 1e-8` when `‖[A,B]‖ > 1e-8`; a failure is flagged for review,
///    since non-commuting observables can still share an eigenvector when
///    `d ≥ 3`.
pub fn eigenstate_case(
    a: &Observable,
    b: &Observable,
    which: Which,
    index: usize,
    opts: &EvalOptions,
) -> Result<EigenstateCase> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            actual: b.dim(),
        });
    }
    let eigen_obs = match which {
        Which::A => a,
        Which::B => b,
    };
    if index >= eigen_obs.dim() {
        return Err(Error::IndexOutOfRange {
            index,
            dim: eigen_obs.dim(),
        });
    }
    let es = eigen_obs.eigensystem()?;
    let eigenvalue = es.values[index];
    let state = PureState::from_unnormalized(es.vectors[index].clone())?;

    let q = PairQuantities::compute(a, b, &state)?;
    let (dev_eigen, dev_other) = match which {
        Which::A => (q.dev_a, q.dev_b),
        Which::B => (q.dev_b, q.dev_a),
    };
    let norm_product = a.matrix().frobenius_norm() * b.matrix().frobenius_norm();
    let sum_std = q.report(RelationId::SumStd, opts)?;
    let stronger = q.report(RelationId::StrongerSum, opts)?;

    let mut battery = vec![
        CheckResult::at_most("eigen_deviation_vanishes", dev_eigen, 1e-10),
        CheckResult::at_most("commutator_expectation_vanishes", q.commutator.norm(), 1e-9 * norm_product.max(1e-14)),
        CheckResult::at_most("sum_deviation_equals_other", (q.dev_sum - dev_other).abs(), 1e-10),
        CheckResult::at_most("difference_deviation_equals_other", (q.dev_diff - dev_other).abs(), 1e-10),
        CheckResult::from_pass(
            "sum_std_saturated",
            sum_std.gap,
            opts.sat_tol * sum_std.scale(),
            sum_std.saturated,
        ),
        CheckResult::at_most(
            "stronger_sum_gap_is_half_variance",
            (stronger.gap - 0.5 * dev_other * dev_other).abs(),
            1e-9,
        ),
    ];

    let comm_norm = a.commutator_norm(b)?;
    let mut positive = CheckResult::above("other_deviation_positive", dev_other, EIGENSTATE_THRESHOLD);
    if comm_norm <= EIGENSTATE_THRESHOLD {
        positive.status = CheckStatus::Skipped;
    } else if !positive.pass {
        positive.status = CheckStatus::Review;
    }
    battery.push(positive);

    Ok(EigenstateCase {
        which,
        observable_label: eigen_obs.label().to_string(),
        index,
        eigenvalue,
        state,
        battery,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UncorrelatedCase {
    pub state: PureState,
    pub correlation_modulus: f64,
    pub dev_a: f64,
    pub dev_b: f64,
    pub is_eigenstate_of_a: bool,
    pub is_eigenstate_of_b: bool,
    /// `|C|` target the case is judged against.
    pub tolerance: f64,
}

impl UncorrelatedCase {
    pub fn from_state(a: &Observable, b: &Observable, state: PureState, tolerance: f64) -> Result<Self> {
        let corr = quantum::correlation(a, b, &state)?;
        let dev_a = quantum::moments(a, &state)?.std_dev;
        let dev_b = quantum::moments(b, &state)?.std_dev;
        Ok(Self {
            correlation_modulus: corr.modulus(),
            dev_a,
            dev_b,
            is_eigenstate_of_a: dev_a <= EIGENSTATE_THRESHOLD,
            is_eigenstate_of_b: dev_b <= EIGENSTATE_THRESHOLD,
            state,
            tolerance,
        })
    }

    fn meets(&self, min_dev: f64) -> bool {
        self.correlation_modulus <= self.tolerance
            && self.dev_a >= min_dev
            && self.dev_b >= min_dev
            && !self.is_eigenstate_of_a
            && !self.is_eigenstate_of_b
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UncorrelatedSearch {
    pub tol: f64,
    pub min_dev: f64,
    /// Coarse stage draws `ceil(budget / 2)` Haar states.
    pub budget: usize,
    pub seed: u64,
    /// Evaluation cap for each local refinement.
    pub refine_evals: usize,
    pub execution: Execution,
}

impl UncorrelatedSearch {
    pub fn new(tol: f64, min_dev: f64, budget: usize) -> Self {
        Self {
            tol,
            min_dev,
            budget,
            seed: 0,
            refine_evals: 4000,
            execution: Execution::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum UncorrelatedOutcome {
    Found {
        case: UncorrelatedCase,
        objective: f64,
    },
    Infeasible {
        best: UncorrelatedCase,
        objective: f64,
        coarse_samples: usize,
        refinements: usize,
    },
}

impl UncorrelatedOutcome {
    pub fn case(&self) -> &UncorrelatedCase {
        match self {
            UncorrelatedOutcome::Found { case, .. } => case,
            UncorrelatedOutcome::Infeasible { best, .. } => best,
        }
    }

    pub fn objective(&self) -> f64 {
        match self {
            UncorrelatedOutcome::Found { objective, .. } | UncorrelatedOutcome::Infeasible { objective, .. } => *objective,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, UncorrelatedOutcome::Found { .. })
    }
}

/// `|C|² + 10 max(0, m − ΔA)² + 10 max(0, m − ΔB)²`.
pub fn uncorrelated_objective(a: &Observable, b: &Observable, state: &PureState, min_dev: f64) -> Option<f64> {
    let ma = quantum::moments(a, state).ok()?;
    let mb = quantum::moments(b, state).ok()?;
    let corr = ma.deviation_vector.inner_unchecked(&mb.deviation_vector);
    let short_a = (min_dev - ma.std_dev).max(0.0);
    let short_b = (min_dev - mb.std_dev).max(0.0);
    Some(corr.norm_sqr() + DEVIATION_PENALTY * (short_a * short_a + short_b * short_b))
}

/// Staged search for an uncorrelated, non-eigen state.
///
/// The coarse stage scores `ceil(budget / 2)` Haar states; the best state of
/// every power-of-two prefix of that sample is then refined by Nelder–Mead on
/// [`uncorrelated_objective`]. A larger budget only appends samples and
/// prefixes, so the returned objective never gets worse.
pub fn find_uncorrelated_state(a: &Observable, b: &Observable, cfg: &UncorrelatedSearch) -> Result<UncorrelatedOutcome> {
    let dim = a.dim();
    if b.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: b.dim(),
        });
    }
    if dim < 2 {
        return Err(Error::DimensionTooSmall { min: 2, actual: dim });
    }
    if cfg.tol.is_nan() || cfg.tol <= 0.0 || cfg.min_dev.is_nan() || cfg.min_dev <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "tol and min_dev must be positive (got {} and {})",
            cfg.tol, cfg.min_dev
        )));
    }
    if cfg.budget == 0 || cfg.refine_evals == 0 {
        return Err(Error::InvalidArgument("search budget must be positive".into()));
    }

    let objective = |s: &PureState| uncorrelated_objective(a, b, s, cfg.min_dev).unwrap_or(f64::INFINITY);
    let n_coarse = cfg.budget.div_ceil(2);
    let coarse: Vec<(PureState, f64)> = cfg.execution.map_indexed(n_coarse, |i| {
        let s = haar_state(dim, &mut stream_rng(cfg.seed, Stream::Uncorrelated, i as u64));
        let f = objective(&s);
        (s, f)
    });

    let mut prefix_bests = Vec::new();
    let mut best_idx = 0;
    let mut scanned = 0;
    let mut m = 1;
    while m <= n_coarse {
        for i in scanned..m {
            if coarse[i].1 < coarse[best_idx].1 {
                best_idx = i;
            }
        }
        scanned = m;
        if prefix_bests.last() != Some(&best_idx) {
            prefix_bests.push(best_idx);
        }
        m *= 2;
    }

    let target = (1e-4 * cfg.tol).powi(2);
    let mut best: (PureState, f64) = coarse[best_idx].clone();
    let mut refinements = 0;
    for &start in &prefix_bests {
        refinements += 1;
        let (state, f) = refine(&coarse[start].0, &objective, cfg.refine_evals, target);
        let case = UncorrelatedCase::from_state(a, b, state.clone(), cfg.tol)?;
        if case.meets(cfg.min_dev) {
            return Ok(UncorrelatedOutcome::Found { case, objective: f });
        }
        if f < best.1 {
            best = (state, f);
        }
    }

    Ok(UncorrelatedOutcome::Infeasible {
        best: UncorrelatedCase::from_state(a, b, best.0, cfg.tol)?,
        objective: best.1,
        coarse_samples: n_coarse,
        refinements,
    })
}

/// Nelder–Mead, restarted from its own optimum while it keeps improving.
fn refine(start: &PureState, objective: &impl Fn(&PureState) -> f64, max_evals: usize, target: f64) -> (PureState, f64) {
    let mut state = start.clone();
    let mut f = objective(&state);
    let mut remaining = max_evals;
    let mut step = 0.25;
    while remaining > 0 && f > target {
        let nm = NelderMead {
            max_evals: remaining,
            x_tol: 1e-14,
            f_target: Some(target),
            initial_step: step,
        };
        let m = nm.minimize(
            |x| state_from_params(x).map_or(f64::INFINITY, |s| objective(&s)),
            &params_from_state(&state),
        );
        remaining = remaining.saturating_sub(m.evals);
        let candidate = match state_from_params(&m.x) {
            Some(s) => s,
            None => break,
        };
        let fc = objective(&candidate);
        if fc >= f {
            break;
        }
        state = candidate;
        f = fc;
        step = (step * 0.5).max(1e-6);
    }
    (state, f)
}

/// Consequences of `C(A,B) = 0` with both deviations positive:
///
/// 1. `Δ(A±B)² = ΔA² + ΔB²` within `1e-9`
/// 2. HR right side `½|⟨[A,B]⟩| ≤ 1e-9`
/// 3. `ΔA, ΔB > 1e-8`
/// 4. `CORR_BOUND` right side `2|Re C| ≤ 2 tol`
pub fn verify_uncorrelated_consequences(a: &Observable, b: &Observable, case: &UncorrelatedCase) -> Result<Vec<CheckResult>> {
    if case.state.dim() != a.dim() || a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            actual: case.state.dim(),
        });
    }
    let q = PairQuantities::compute(a, b, &case.state)?;
    let var_sum = q.dev_a * q.dev_a + q.dev_b * q.dev_b;
    let perp = (q.dev_sum * q.dev_sum - var_sum)
        .abs()
        .max((q.dev_diff * q.dev_diff - var_sum).abs());
    Ok(vec![
        CheckResult::at_most("perpendicular_deviations", perp, 1e-9),
        CheckResult::at_most("hr_rhs_vanishes", 0.5 * q.commutator.norm(), 1e-9),
        CheckResult::above("both_deviations_positive", q.dev_a.min(q.dev_b), EIGENSTATE_THRESHOLD),
        CheckResult::at_most("corr_bound_rhs_vanishes", 2.0 * q.correlation.re.abs(), 2.0 * case.tolerance),
    ])
}
