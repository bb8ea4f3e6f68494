//! Bounded semantic testing of relational judgements.
//!
//! A judgement relates two programs under a relational pre/postcondition:
//! from any pre-related pair of initial stores, the two runs co-terminate
//! and the final stores are post-related. The tester enumerates all store
//! pairs over a finite domain and runs both sides in fuel mode with the
//! same fuel bound. Termination can only be refuted, never confirmed, at
//! finite fuel: a pair where exactly one side completes is reported as an
//! inconclusive warning rather than a counterexample.

use crate::domain::{DomainError, TestDomain};
use crate::exec::{self, ExecMode, Verdict};
use crate::lang::{run_fuel, EvalError, Program, Store};

use super::formula::RelFormula;

/// A relational Hoare judgement `related left right pre post`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Judgement {
    pub left: Program,
    pub right: Program,
    pub pre: RelFormula,
    pub post: RelFormula,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RhlError {
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Result of a bounded semantic test of a judgement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SemtestResult {
    Pass,
    /// Both runs completed from a pre-related pair and the postcondition
    /// failed on the final stores.
    Counterexample {
        left: Store,
        right: Store,
        detail: String,
    },
    /// Exactly one side completed within the fuel bound; termination
    /// equivalence cannot be decided at finite fuel.
    InconclusiveTermination { left: Store, right: Store },
}

/// Enumerates all pre-related store pairs over `d` and tests the judgement
/// with fuel `d.fuel_bound` on both sides.
pub fn semtest_judgement(j: &Judgement, d: &TestDomain) -> Result<SemtestResult, RhlError> {
    semtest_judgement_with_mode(j, d, ExecMode::Auto)
}

pub fn semtest_judgement_with_mode(
    j: &Judgement,
    d: &TestDomain,
    mode: ExecMode,
) -> Result<SemtestResult, RhlError> {
    let nl = d.store_count(j.left.vars.len());
    let nr = d.store_count(j.right.vars.len());
    let n = d.charge(nl.and_then(|a| nr.and_then(|b| a.checked_mul(b))))?;
    let fuel = d.fuel_bound;
    let scan = exec::scan(mode, n, |idx| {
        let (sl, sr) = d.store_pair_at(&j.left.vars, &j.right.vars, idx);
        match j.pre.eval(&sl, &sr) {
            Err(e) => return Verdict::Abort(RhlError::Eval(e)),
            Ok(false) => return Verdict::Pass,
            Ok(true) => {}
        }
        let rl = match run_fuel(&j.left, &sl, fuel) {
            Err(e) => return Verdict::Abort(RhlError::Eval(e)),
            Ok(r) => r,
        };
        let rr = match run_fuel(&j.right, &sr, fuel) {
            Err(e) => return Verdict::Abort(RhlError::Eval(e)),
            Ok(r) => r,
        };
        match (rl.completed, rr.completed) {
            (true, true) => match j.post.eval(&rl.store, &rr.store) {
                Err(e) => Verdict::Abort(RhlError::Eval(e)),
                Ok(true) => Verdict::Pass,
                Ok(false) => Verdict::Fail((
                    sl,
                    sr,
                    format!(
                        "postcondition fails on final stores [{}] / [{}]",
                        rl.store, rr.store
                    ),
                )),
            },
            (false, false) => Verdict::Pass,
            (lc, _) => {
                let side = if lc { "right" } else { "left" };
                Verdict::Warn((sl, sr, side))
            }
        }
    })?;
    if let Some((left, right, detail)) = scan.first_fail {
        return Ok(SemtestResult::Counterexample {
            left,
            right,
            detail,
        });
    }
    if let Some((left, right, _side)) = scan.first_warn {
        return Ok(SemtestResult::InconclusiveTermination { left, right });
    }
    Ok(SemtestResult::Pass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse_program;
    use crate::rhl::formula::{CmpOp, RelExp, Side};

    fn d01() -> TestDomain {
        TestDomain::new(vec![0, 1]).unwrap()
    }

    #[test]
    fn skip_skip_trivial() {
        let skip = parse_program("vars x; skip").unwrap();
        let j = Judgement {
            left: skip.clone(),
            right: skip,
            pre: RelFormula::True,
            post: RelFormula::True,
        };
        assert_eq!(semtest_judgement(&j, &d01()).unwrap(), SemtestResult::Pass);
    }

    #[test]
    fn assign_vs_skip_counterexample() {
        let left = parse_program("vars x; x := 0").unwrap();
        let right = parse_program("vars x; skip").unwrap();
        let j = Judgement {
            left,
            right,
            pre: RelFormula::True,
            post: RelFormula::cmp(
                CmpOp::Eq,
                RelExp::var(Side::Left, "x"),
                RelExp::var(Side::Right, "x"),
            ),
        };
        match semtest_judgement(&j, &d01()).unwrap() {
            SemtestResult::Counterexample { right, .. } => {
                assert_eq!(right.get("x"), Some(1));
            }
            other => panic!("expected counterexample, got {other:?}"),
        }
    }

    #[test]
    fn termination_mismatch_is_inconclusive() {
        let left = parse_program("vars x; while (1 != 0) { skip }").unwrap();
        let right = parse_program("vars x; skip").unwrap();
        let j = Judgement {
            left,
            right,
            pre: RelFormula::True,
            post: RelFormula::True,
        };
        assert!(matches!(
            semtest_judgement(&j, &d01()).unwrap(),
            SemtestResult::InconclusiveTermination { .. }
        ));
    }

    #[test]
    fn counterexample_beats_inconclusive() {
        // pairs with x_l=1 diverge on the left (inconclusive); the x_l=0
        // pairs violate the postcondition. The counterexample is decisive.
        let left = parse_program("vars x; while (x != 0) { skip }").unwrap();
        let right = parse_program("vars x; x := x + 1").unwrap();
        let j = Judgement {
            left,
            right,
            pre: RelFormula::True,
            post: RelFormula::cmp(CmpOp::Eq, RelExp::var(Side::Right, "x"), RelExp::Const(99)),
        };
        assert!(matches!(
            semtest_judgement(&j, &d01()).unwrap(),
            SemtestResult::Counterexample { .. }
        ));
    }
}
