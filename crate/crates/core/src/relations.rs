//! Registry of uncertainty relations, reverse relations, identities and
//! sandwich chains, each evaluated on `(A, B, φ)` into a [`RelationReport`].
//!
//! Every bound here follows from the triangle inequality, the
//! parallelogram law or Cauchy–Schwarz applied to the deviation vectors
//! `δA|φ⟩` and `δB|φ⟩`, so a report with `satisfied == false` always means
//! a numerical defect.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Complex;
use crate::quantum::{self, Observable, PureState};

/// Reports whose operands are all below this are flagged `trivial` (0 ≥ 0).
pub const TRIVIAL_FLOOR: f64 = 1e-13;
/// Floor for the relative tolerance scale.
pub const SCALE_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RelationId {
    Hr,
    Schwarz,
    SumStd,
    SumStdN,
    StrongerSum,
    StrongerSumDiff,
    ReverseSum,
    RevTriangleStd,
    AmgmVariances,
    ProdDiffSum,
    ParallelogramId,
    CorrBound,
    CommImId,
    ProductSandwich,
    VarianceSandwichSum,
    VarianceSandwichProd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationKind {
    LowerBound,
    UpperBound,
    Identity,
    Chain,
}

impl RelationId {
    pub const ALL: [RelationId; 16] = [
        RelationId::Hr,
        RelationId::Schwarz,
        RelationId::SumStd,
        RelationId::SumStdN,
        RelationId::StrongerSum,
        RelationId::StrongerSumDiff,
        RelationId::ReverseSum,
        RelationId::RevTriangleStd,
        RelationId::AmgmVariances,
        RelationId::ProdDiffSum,
        RelationId::ParallelogramId,
        RelationId::CorrBound,
        RelationId::CommImId,
        RelationId::ProductSandwich,
        RelationId::VarianceSandwichSum,
        RelationId::VarianceSandwichProd,
    ];

    /// Relations on a pair of observables, in enumeration order.
    pub fn binary() -> impl Iterator<Item = RelationId> {
        Self::ALL.into_iter().filter(|id| id.is_binary())
    }

    pub fn is_binary(self) -> bool {
        self != RelationId::SumStdN
    }

    pub fn kind(self) -> RelationKind {
        use RelationId::*;
        match self {
            Hr | Schwarz | SumStd | SumStdN | StrongerSum | StrongerSumDiff | RevTriangleStd
            | AmgmVariances | CorrBound => RelationKind::LowerBound,
            ReverseSum | ProdDiffSum => RelationKind::UpperBound,
            ParallelogramId | CommImId => RelationKind::Identity,
            ProductSandwich | VarianceSandwichSum | VarianceSandwichProd => RelationKind::Chain,
        }
    }

    pub fn as_str(self) -> &'static str {
        use RelationId::*;
        match self {
            Hr => "HR",
            Schwarz => "SCHWARZ",
            SumStd => "SUM_STD",
            SumStdN => "SUM_STD_N",
            StrongerSum => "STRONGER_SUM",
            StrongerSumDiff => "STRONGER_SUM_DIFF",
            ReverseSum => "REVERSE_SUM",
            RevTriangleStd => "REV_TRIANGLE_STD",
            AmgmVariances => "AMGM_VARIANCES",
            ProdDiffSum => "PROD_DIFF_SUM",
            ParallelogramId => "PARALLELOGRAM_ID",
            CorrBound => "CORR_BOUND",
            CommImId => "COMM_IM_ID",
            ProductSandwich => "PRODUCT_SANDWICH",
            VarianceSandwichSum => "VARIANCE_SANDWICH_SUM",
            VarianceSandwichProd => "VARIANCE_SANDWICH_PROD",
        }
    }

    /// Human-readable form, used by the table renderer.
    pub fn formula(self) -> &'static str {
        use RelationId::*;
        match self {
            Hr => "ΔA·ΔB ≥ ½|⟨[A,B]⟩|",
            Schwarz => "ΔA²·ΔB² ≥ |⟨δA δB⟩|²",
            SumStd => "ΔA + ΔB ≥ Δ(A+B)",
            SumStdN => "Σ ΔA_j ≥ Δ(Σ A_j)",
            StrongerSum => "ΔA² + ΔB² ≥ ½Δ(A+B)²",
            StrongerSumDiff => "ΔA² + ΔB² ≥ ½Δ(A−B)²",
            ReverseSum => "ΔA² + ΔB² ≤ Δ(A−B)² + 2ΔAΔB",
            RevTriangleStd => "Δ(A−B) ≥ |ΔA − ΔB|",
            AmgmVariances => "ΔA² + ΔB² ≥ 2ΔAΔB",
            ProdDiffSum => "Δ(A−B)·Δ(A+B) ≤ ΔA² + ΔB²",
            ParallelogramId => "2(ΔA² + ΔB²) = Δ(A+B)² + Δ(A−B)²",
            CorrBound => "ΔA² + ΔB² ≥ 2|Re C(A,B)|",
            CommImId => "|⟨[A,B]⟩| = 2|Im C(A,B)|",
            ProductSandwich => "½(ΔA² + ΔB²) ≥ ΔAΔB ≥ ½|⟨[A,B]⟩|",
            VarianceSandwichSum => "Δ(A−B)² + 2ΔAΔB ≥ ΔA² + ΔB² ≥ ½Δ(A+B)²",
            VarianceSandwichProd => "Δ(A−B)² + 2ΔAΔB ≥ ΔA² + ΔB² ≥ 2ΔAΔB",
        }
    }
}

impl fmt::Display for RelationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RelationId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let wanted = s.trim().to_ascii_uppercase().replace('-', "_");
        RelationId::ALL
            .into_iter()
            .find(|id| id.as_str() == wanted)
            .ok_or_else(|| Error::UnknownRelation(s.to_string()))
    }
}

/// Relative tolerances used when judging a report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalOptions {
    pub tol: f64,
    /// Gap (relative) below which a satisfied relation counts as saturated.
    pub sat_tol: f64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            sat_tol: 1e-7,
        }
    }
}

impl EvalOptions {
    /// Zero tolerances mean exact comparison.
    pub fn new(tol: f64, sat_tol: f64) -> Result<Self> {
        if !(tol >= 0.0 && tol.is_finite()) || !(sat_tol >= 0.0 && sat_tol.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "tolerances must be non-negative and finite (tol {tol}, sat_tol {sat_tol})"
            )));
        }
        Ok(Self { tol, sat_tol })
    }
}

/// Outcome of one relation on one input.
///
/// For chains, `lhs ≥ middle ≥ rhs` and `gap = min(gap_left, gap_right)`.
/// `tolerance` is the relative tolerance that was applied.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationReport {
    pub id: RelationId,
    pub kind: RelationKind,
    pub lhs: f64,
    pub middle: Option<f64>,
    pub rhs: f64,
    pub gap: f64,
    pub gap_left: Option<f64>,
    pub gap_right: Option<f64>,
    pub satisfied: bool,
    pub saturated: bool,
    pub trivial: bool,
    pub tolerance: f64,
}

impl RelationReport {
    /// Magnitude the relative tolerances are scaled by.
    pub fn scale(&self) -> f64 {
        self.lhs
            .abs()
            .max(self.rhs.abs())
            .max(self.middle.map_or(0.0, f64::abs))
            .max(SCALE_FLOOR)
    }

    pub fn relative_gap(&self) -> f64 {
        self.gap / self.scale()
    }

    pub fn is_violation(&self) -> bool {
        !self.satisfied
    }

    fn two_sided(id: RelationId, lhs: f64, rhs: f64, opts: &EvalOptions) -> Self {
        let kind = id.kind();
        let mut report = Self {
            id,
            kind,
            lhs,
            middle: None,
            rhs,
            gap: 0.0,
            gap_left: None,
            gap_right: None,
            satisfied: false,
            saturated: false,
            trivial: false,
            tolerance: opts.tol,
        };
        let scale = report.scale();
        let (gap, satisfied) = match kind {
            RelationKind::LowerBound => (lhs - rhs, lhs >= rhs - opts.tol * scale),
            RelationKind::UpperBound => (rhs - lhs, lhs <= rhs + opts.tol * scale),
            RelationKind::Identity => {
                let gap = (lhs - rhs).abs();
                (gap, gap <= opts.tol * scale)
            }
            RelationKind::Chain => unreachable!("chains carry a middle term"),
        };
        report.gap = gap;
        report.satisfied = satisfied;
        report.finish(opts);
        report
    }

    fn chain(id: RelationId, upper: f64, middle: f64, lower: f64, opts: &EvalOptions) -> Self {
        let gap_left = upper - middle;
        let gap_right = middle - lower;
        let mut report = Self {
            id,
            kind: RelationKind::Chain,
            lhs: upper,
            middle: Some(middle),
            rhs: lower,
            gap: gap_left.min(gap_right),
            gap_left: Some(gap_left),
            gap_right: Some(gap_right),
            satisfied: false,
            saturated: false,
            trivial: false,
            tolerance: opts.tol,
        };
        let allowed = -opts.tol * report.scale();
        report.satisfied = gap_left >= allowed && gap_right >= allowed;
        report.finish(opts);
        report
    }

    fn finish(&mut self, opts: &EvalOptions) {
        let raw = self
            .lhs
            .abs()
            .max(self.rhs.abs())
            .max(self.middle.map_or(0.0, f64::abs));
        self.trivial = raw <= TRIVIAL_FLOOR;
        if self.trivial {
            self.satisfied = true;
        }
        self.saturated = self.satisfied && (self.trivial || self.gap <= opts.sat_tol * self.scale());
    }
}

/// Every scalar the binary relations consume, computed once per triple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairQuantities {
    pub dev_a: f64,
    pub dev_b: f64,
    /// `Δ(A+B)`, from the moments of the summed matrix.
    pub dev_sum: f64,
    /// `Δ(A−B)`, from the moments of the difference matrix.
    pub dev_diff: f64,
    pub correlation: Complex,
    /// `⟨[A,B]⟩` through the matrix commutator.
    pub commutator: Complex,
}

impl PairQuantities {
    pub fn compute(a: &Observable, b: &Observable, phi: &PureState) -> Result<Self> {
        let ma = quantum::moments(a, phi)?;
        let mb = quantum::moments(b, phi)?;
        let corr = quantum::correlation_from_moments(a, b, phi, &ma, &mb)?;
        let dev_sum = quantum::moments(&a.sum(b)?, phi)?.std_dev;
        let dev_diff = quantum::moments(&a.difference(b)?, phi)?.std_dev;
        let commutator = quantum::commutator_expectation(a, b, phi)?;
        Ok(Self {
            dev_a: ma.std_dev,
            dev_b: mb.std_dev,
            dev_sum,
            dev_diff,
            correlation: corr.value,
            commutator,
        })
    }

    pub fn report(&self, id: RelationId, opts: &EvalOptions) -> Result<RelationReport> {
        use RelationId::*;
        let (da, db) = (self.dev_a, self.dev_b);
        let var_sum = da * da + db * db;
        let prod = da * db;
        let sum2 = self.dev_sum * self.dev_sum;
        let diff2 = self.dev_diff * self.dev_diff;
        let half_comm = 0.5 * self.commutator.norm();
        let reverse_rhs = diff2 + 2.0 * prod;
        let r = |lhs, rhs| RelationReport::two_sided(id, lhs, rhs, opts);
        Ok(match id {
            Hr => r(prod, half_comm),
            Schwarz => r(prod * prod, self.correlation.norm_sqr()),
            SumStd => r(da + db, self.dev_sum),
            StrongerSum => r(var_sum, 0.5 * sum2),
            StrongerSumDiff => r(var_sum, 0.5 * diff2),
            ReverseSum => r(var_sum, reverse_rhs),
            RevTriangleStd => r(self.dev_diff, (da - db).abs()),
            AmgmVariances => r(var_sum, 2.0 * prod),
            ProdDiffSum => r(self.dev_diff * self.dev_sum, var_sum),
            ParallelogramId => r(2.0 * var_sum, sum2 + diff2),
            CorrBound => r(var_sum, 2.0 * self.correlation.re.abs()),
            CommImId => r(self.commutator.norm(), 2.0 * self.correlation.im.abs()),
            ProductSandwich => RelationReport::chain(id, 0.5 * var_sum, prod, half_comm, opts),
            VarianceSandwichSum => RelationReport::chain(id, reverse_rhs, var_sum, 0.5 * sum2, opts),
            VarianceSandwichProd => RelationReport::chain(id, reverse_rhs, var_sum, 2.0 * prod, opts),
            SumStdN => {
                return Err(Error::InvalidRelation {
                    id: id.to_string(),
                    reason: "takes a list of observables; use evaluate_sum_n",
                })
            }
        })
    }
}

pub fn evaluate(
    id: RelationId,
    a: &Observable,
    b: &Observable,
    phi: &PureState,
    opts: &EvalOptions,
) -> Result<RelationReport> {
    if !id.is_binary() {
        return Err(Error::InvalidRelation {
            id: id.to_string(),
            reason: "takes a list of observables; use evaluate_sum_n",
        });
    }
    PairQuantities::compute(a, b, phi)?.report(id, opts)
}

/// `Σ_j ΔA_j ≥ Δ(Σ_j A_j)`.
pub fn evaluate_sum_n(
    observables: &[Observable],
    phi: &PureState,
    opts: &EvalOptions,
) -> Result<RelationReport> {
    let (first, rest) = match observables {
        [first, rest @ ..] if !rest.is_empty() => (first, rest),
        _ => {
            return Err(Error::InvalidArgument(format!(
                "SUM_STD_N needs at least two observables, got {}",
                observables.len()
            )))
        }
    };
    let mut lhs = quantum::moments(first, phi)?.std_dev;
    let mut total = first.clone();
    for obs in rest {
        lhs += quantum::moments(obs, phi)?.std_dev;
        total = total.sum(obs)?;
    }
    let rhs = quantum::moments(&total, phi)?.std_dev;
    Ok(RelationReport::two_sided(RelationId::SumStdN, lhs, rhs, opts))
}

/// One report per binary relation, in enumeration order.
pub fn evaluate_all(
    a: &Observable,
    b: &Observable,
    phi: &PureState,
    opts: &EvalOptions,
) -> Result<Vec<RelationReport>> {
    let q = PairQuantities::compute(a, b, phi)?;
    RelationId::binary().map(|id| q.report(id, opts)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::tests::{ket0, sx, sy, sz, tilted};
    use crate::search::rng::{stream_rng, Stream};
    use crate::search::sampling::{gue_observable, haar_state};

    fn eval(id: RelationId, a: &Observable, b: &Observable, phi: &PureState) -> RelationReport {
        evaluate(id, a, b, phi, &EvalOptions::default()).unwrap()
    }

    #[test]
    fn ids_round_trip_through_text() {
        for id in RelationId::ALL {
            assert_eq!(id.as_str().parse::<RelationId>().unwrap(), id);
            let json = serde_json::to_string(&id).unwrap();
            assert_eq!(json, format!("\"{}\"", id.as_str()));
        }
        assert_eq!("reverse-sum".parse::<RelationId>().unwrap(), RelationId::ReverseSum);
        assert!(matches!("NOPE".parse::<RelationId>(), Err(Error::UnknownRelation(_))));
        assert_eq!(RelationId::binary().count(), 15);
    }

    #[test]
    fn hr_examples() {
        let r = eval(RelationId::Hr, &sx(), &sy(), &ket0());
        assert_eq!((r.lhs, r.rhs), (1.0, 1.0));
        assert!(r.satisfied && r.saturated && !r.trivial);

        let r = eval(RelationId::Hr, &sx(), &sz(), &ket0());
        assert_eq!((r.lhs, r.rhs, r.gap), (0.0, 0.0, 0.0));
        assert!(r.trivial && r.saturated);
    }

    #[test]
    fn sum_relations_at_eigenstate() {
        let r = eval(RelationId::SumStd, &sx(), &sz(), &ket0());
        assert_eq!((r.lhs, r.rhs), (1.0, 1.0));
        assert!(r.saturated);

        let r = eval(RelationId::StrongerSum, &sx(), &sz(), &ket0());
        assert_eq!((r.lhs, r.rhs, r.gap), (1.0, 0.5, 0.5));
        assert!(r.satisfied && !r.saturated);

        let r = eval(RelationId::ReverseSum, &sx(), &sz(), &ket0());
        assert_eq!((r.lhs, r.rhs), (1.0, 1.0));
        assert_eq!(r.kind, RelationKind::UpperBound);
        assert!(r.saturated);

        let r = eval(RelationId::ParallelogramId, &sx(), &sz(), &ket0());
        assert_eq!((r.lhs, r.rhs), (2.0, 2.0));
        assert!(r.satisfied);

        let r = eval(RelationId::ProdDiffSum, &sx(), &sz(), &ket0());
        assert_eq!((r.lhs, r.rhs), (1.0, 1.0));
        assert!(r.saturated);
    }

    #[test]
    fn corr_bound_beats_hr_when_im_c_vanishes() {
        let r = eval(RelationId::CorrBound, &sx(), &sz(), &tilted());
        assert!((r.lhs - 1.0).abs() < 1e-12 && (r.rhs - 1.0).abs() < 1e-12);
        assert!(r.saturated);
        let hr = eval(RelationId::Hr, &sx(), &sz(), &tilted());
        assert!(hr.rhs.abs() < 1e-12);
    }

    #[test]
    fn chains_carry_both_gaps() {
        let r = eval(RelationId::ProductSandwich, &sx(), &sz(), &tilted());
        // ½(½ + ½) ≥ ½ ≥ 0
        assert!((r.lhs - 0.5).abs() < 1e-15);
        assert!((r.middle.unwrap() - 0.5).abs() < 1e-15);
        assert!(r.rhs.abs() < 1e-15);
        assert!((r.gap_left.unwrap()).abs() < 1e-15);
        assert!((r.gap_right.unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(r.gap, r.gap_left.unwrap().min(r.gap_right.unwrap()));
        assert!(r.saturated);
    }

    #[test]
    fn sum_n_examples() {
        let opts = EvalOptions::default();
        let n2 = evaluate_sum_n(&[sx(), sz()], &ket0(), &opts).unwrap();
        let two = eval(RelationId::SumStd, &sx(), &sz(), &ket0());
        assert_eq!(n2.id, RelationId::SumStdN);
        assert_eq!((n2.lhs, n2.rhs, n2.gap, n2.saturated), (two.lhs, two.rhs, two.gap, two.saturated));

        let n3 = evaluate_sum_n(&[sx(), sy(), sz()], &ket0(), &opts).unwrap();
        assert_eq!(n3.lhs, 2.0);
        assert!((n3.rhs - 2f64.sqrt()).abs() < 1e-15);

        let a = sx();
        let r = evaluate_sum_n(&[a.clone(), a], &tilted(), &opts).unwrap();
        assert!((r.lhs - r.rhs).abs() < 1e-15 && r.saturated);

        assert!(evaluate_sum_n(&[sx()], &ket0(), &opts).is_err());
        assert!(evaluate_sum_n(&[sx(), Observable::identity(3)], &ket0(), &opts).is_err());
    }

    #[test]
    fn sum_n_is_rejected_by_evaluate() {
        assert!(matches!(
            evaluate(RelationId::SumStdN, &sx(), &sy(), &ket0(), &EvalOptions::default()),
            Err(Error::InvalidRelation { .. })
        ));
    }

    #[test]
    fn evaluate_all_on_paulis() {
        let reports = evaluate_all(&sx(), &sy(), &ket0(), &EvalOptions::default()).unwrap();
        assert_eq!(reports.len(), 15);
        assert!(reports.iter().all(|r| r.satisfied));
        let ids: Vec<_> = reports.iter().map(|r| r.id).collect();
        assert_eq!(ids, RelationId::binary().collect::<Vec<_>>());
    }

    #[test]
    fn identity_pair_is_all_trivial() {
        let id = Observable::identity(3);
        let phi = haar_state(3, &mut stream_rng(4, Stream::Test, 0));
        for r in evaluate_all(&id, &id, &phi, &EvalOptions::default()).unwrap() {
            assert!(r.trivial && r.satisfied && r.saturated, "{r:?}");
        }
    }

    #[test]
    fn dimension_mismatch() {
        let phi = PureState::basis(3, 0).unwrap();
        assert!(evaluate(RelationId::Hr, &sx(), &sy(), &phi, &EvalOptions::default()).is_err());
    }

    #[test]
    fn report_serializes_in_schema_order() {
        let r = eval(RelationId::ProductSandwich, &sx(), &sy(), &ket0());
        let json = serde_json::to_string(&r).unwrap();
        let keys = [
            "id", "kind", "lhs", "middle", "rhs", "gap", "gap_left", "gap_right", "satisfied",
            "saturated", "trivial", "tolerance",
        ];
        let mut at = 0;
        for k in keys {
            let pos = json[at..].find(&format!("\"{k}\"")).unwrap_or_else(|| panic!("{k} missing"));
            at += pos;
        }
        let back: RelationReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn random_triples_satisfy_everything() {
        let opts = EvalOptions::default();
        for &dim in &[2usize, 3, 4, 8] {
            for i in 0..250u64 {
                let a = gue_observable(dim, &mut stream_rng(21, Stream::Test, 3 * i), "A");
                let b = gue_observable(dim, &mut stream_rng(21, Stream::Test, 3 * i + 1), "B");
                let phi = haar_state(dim, &mut stream_rng(21, Stream::Test, 3 * i + 2));
                let reports = evaluate_all(&a, &b, &phi, &opts).unwrap();
                for r in &reports {
                    assert!(r.satisfied, "{r:?}");
                    if r.kind == RelationKind::Identity {
                        assert!(r.relative_gap() <= 1e-10, "{r:?}");
                    }
                }
                let by_id = |id| reports.iter().find(|r| r.id == id).unwrap();
                if by_id(RelationId::ProductSandwich).satisfied {
                    assert!(by_id(RelationId::Hr).satisfied);
                    assert!(by_id(RelationId::AmgmVariances).satisfied);
                }
            }
        }
    }

    #[test]
    fn eigenstate_sum_std_trivializes() {
        for &dim in &[2usize, 3, 4, 8] {
            let a = gue_observable(dim, &mut stream_rng(5, Stream::Test, 0), "A");
            let b = gue_observable(dim, &mut stream_rng(5, Stream::Test, 1), "B");
            for v in b.eigensystem().unwrap().vectors {
                let psi = PureState::new(v).unwrap();
                let q = PairQuantities::compute(&a, &b, &psi).unwrap();
                let r = q.report(RelationId::SumStd, &EvalOptions::default()).unwrap();
                assert!(q.dev_b <= 1e-10);
                assert!((r.rhs - q.dev_a).abs() <= 1e-10);
                assert!((r.lhs - (q.dev_a + q.dev_b)).abs() <= 1e-15);
                // C vanishes at an eigenstate, so the uncorrelated reduction applies.
                assert!(q.correlation.norm() <= 1e-10);
                let hr = q.report(RelationId::Hr, &EvalOptions::default()).unwrap();
                assert!(hr.rhs <= 1e-9);
                assert!((r.lhs * r.lhs - r.rhs * r.rhs - 2.0 * q.dev_a * q.dev_b).abs() <= 1e-9);
            }
        }
    }
}
