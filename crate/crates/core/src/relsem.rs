//! Semantic footprints and footprint-based transformation validators.
//!
//! A footprint declares the variables a command may read (`reads`) and
//! write (`writes`). Both properties are defined semantically:
//!
//! * `writes`: from any initial store, variables outside the write set are
//!   unchanged by a run;
//! * `reads`: two runs from stores agreeing on the read set end in stores
//!   agreeing on the write set.
//!
//! Declarations are validated by bounded-exhaustive enumeration over a
//! [`TestDomain`], never inferred. Runs that end out-of-fuel are excluded
//! from the quantification, mirroring how the loop case is handled by the
//! noninterference checker. Results are bounded evidence over the domain,
//! not proofs.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::domain::{DomainError, TestDomain};
use crate::exec::{self, ExecMode, Verdict};
use crate::lang::{Com, EvalError, Outcome, Program, Store, VarSet};

/// Declared read/write variable sets.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Footprint {
    pub reads: BTreeSet<String>,
    pub writes: BTreeSet<String>,
}

impl Footprint {
    pub fn new<S: Into<String>>(
        reads: impl IntoIterator<Item = S>,
        writes: impl IntoIterator<Item = S>,
    ) -> Footprint {
        Footprint {
            reads: reads.into_iter().map(Into::into).collect(),
            writes: writes.into_iter().map(Into::into).collect(),
        }
    }

    fn check_declared(&self, vars: &VarSet) -> Result<(), RelsemError> {
        for v in self.reads.iter().chain(self.writes.iter()) {
            if !vars.contains(v) {
                return Err(RelsemError::UndeclaredFootprintVar(v.clone()));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Footprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rs: Vec<&str> = self.reads.iter().map(|s| s.as_str()).collect();
        let ws: Vec<&str> = self.writes.iter().map(|s| s.as_str()).collect();
        write!(f, "reads {{{}}} writes {{{}}}", rs.join(","), ws.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RelsemError {
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("footprint names undeclared variable `{0}`")]
    UndeclaredFootprintVar(String),
    #[error("programs declare different variable sets")]
    VarSetMismatch,
    #[error("loop without a `decr` metric: `{0}`")]
    MissingMetric(String),
}

/// Outcome of `check_writes`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WritesCheck {
    Pass,
    Counterexample { store: Store, var: String },
}

/// Outcome of `check_reads`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReadsCheck {
    Pass,
    Counterexample { s0: Store, s1: Store, var: String },
}

/// Outcome of `check_equiv`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquivCheck {
    Pass,
    Counterexample { store: Store, detail: String },
}

/// Outcome of `check_transformation`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransformCheck {
    Pass,
    PreconditionViolation { detail: String },
    Counterexample { store: Store, detail: String },
}

/// The footprint-based transformations validated by `check_transformation`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformKind {
    /// `c1; c2 ~ c2; c1` when both write sets are disjoint and neither
    /// command reads what the other writes.
    Swap,
    /// `c; c ~ c` when the command's read and write sets are disjoint.
    Idempotence,
    /// `c1; c2 ~ c2` when `c1` writes only inside `c2`'s write set and
    /// nothing `c2` reads.
    RedundantWrites,
}

impl TransformKind {
    pub fn name(self) -> &'static str {
        match self {
            TransformKind::Swap => "swap",
            TransformKind::Idempotence => "idem",
            TransformKind::RedundantWrites => "redundant-writes",
        }
    }
}

fn require_metric_mode(p: &Program) -> Result<(), RelsemError> {
    if p.body.all_loops_have_metrics() {
        Ok(())
    } else {
        Err(RelsemError::MissingMetric(p.body.to_string()))
    }
}

/// Validates a declared write set: every variable outside `writes` is
/// unchanged by every terminating run over the domain.
pub fn check_writes(
    p: &Program,
    writes: &BTreeSet<String>,
    d: &TestDomain,
) -> Result<WritesCheck, RelsemError> {
    check_writes_with_mode(p, writes, d, ExecMode::Auto)
}

pub fn check_writes_with_mode(
    p: &Program,
    writes: &BTreeSet<String>,
    d: &TestDomain,
    mode: ExecMode,
) -> Result<WritesCheck, RelsemError> {
    require_metric_mode(p)?;
    Footprint {
        reads: BTreeSet::new(),
        writes: writes.clone(),
    }
    .check_declared(&p.vars)?;
    let n = d.charge(d.store_count(p.vars.len()))?;
    let outside: Vec<usize> = p
        .vars
        .names()
        .enumerate()
        .filter(|(_, name)| !writes.contains(*name))
        .map(|(i, _)| i)
        .collect();
    let scan = exec::scan(mode, n, |idx| {
        let s = d.store_at(&p.vars, idx);
        match crate::lang::run_metric(p, &s) {
            Err(e) => Verdict::<_, (), _>::Abort(RelsemError::Eval(e)),
            Ok(Outcome::OutOfFuel(_)) => Verdict::Pass,
            Ok(Outcome::Normal(s2)) => {
                for &i in &outside {
                    if s2.get_idx(i) != s.get_idx(i) {
                        return Verdict::Fail((s, p.vars.name(i).to_string()));
                    }
                }
                Verdict::Pass
            }
        }
    })?;
    Ok(match scan.first_fail {
        Some((store, var)) => WritesCheck::Counterexample { store, var },
        None => WritesCheck::Pass,
    })
}

/// Validates a declared read set, assuming the write set has already been
/// validated: any two terminating runs from stores agreeing on `reads` end
/// in stores agreeing on `writes`.
pub fn check_reads(
    p: &Program,
    reads: &BTreeSet<String>,
    writes: &BTreeSet<String>,
    d: &TestDomain,
) -> Result<ReadsCheck, RelsemError> {
    check_reads_with_mode(p, reads, writes, d, ExecMode::Auto)
}

pub fn check_reads_with_mode(
    p: &Program,
    reads: &BTreeSet<String>,
    writes: &BTreeSet<String>,
    d: &TestDomain,
    mode: ExecMode,
) -> Result<ReadsCheck, RelsemError> {
    require_metric_mode(p)?;
    Footprint {
        reads: reads.clone(),
        writes: writes.clone(),
    }
    .check_declared(&p.vars)?;
    let per_side = d.store_count(p.vars.len());
    let n = d.charge(per_side.and_then(|c| c.checked_mul(c)))?;
    let read_idx: Vec<usize> = p
        .vars
        .names()
        .enumerate()
        .filter(|(_, name)| reads.contains(*name))
        .map(|(i, _)| i)
        .collect();
    let write_idx: Vec<usize> = p
        .vars
        .names()
        .enumerate()
        .filter(|(_, name)| writes.contains(*name))
        .map(|(i, _)| i)
        .collect();
    let scan = exec::scan(mode, n, |idx| {
        let (s0, s1) = d.store_pair_at(&p.vars, &p.vars, idx);
        if !read_idx.iter().all(|&i| s0.get_idx(i) == s1.get_idx(i)) {
            return Verdict::<_, (), _>::Pass;
        }
        let r0 = match crate::lang::run_metric(p, &s0) {
            Err(e) => return Verdict::Abort(RelsemError::Eval(e)),
            Ok(o) => o,
        };
        let r1 = match crate::lang::run_metric(p, &s1) {
            Err(e) => return Verdict::Abort(RelsemError::Eval(e)),
            Ok(o) => o,
        };
        match (r0, r1) {
            (Outcome::Normal(f0), Outcome::Normal(f1)) => {
                for &i in &write_idx {
                    if f0.get_idx(i) != f1.get_idx(i) {
                        return Verdict::Fail((s0, s1, p.vars.name(i).to_string()));
                    }
                }
                Verdict::Pass
            }
            _ => Verdict::Pass,
        }
    })?;
    Ok(match scan.first_fail {
        Some((s0, s1, var)) => ReadsCheck::Counterexample { s0, s1, var },
        None => ReadsCheck::Pass,
    })
}

/// Checks that two programs over the same variables agree on every initial
/// store over the domain: both runs normal with equal final stores, or both
/// out of fuel.
pub fn check_equiv(p1: &Program, p2: &Program, d: &TestDomain) -> Result<EquivCheck, RelsemError> {
    check_equiv_with_mode(p1, p2, d, ExecMode::Auto)
}

pub fn check_equiv_with_mode(
    p1: &Program,
    p2: &Program,
    d: &TestDomain,
    mode: ExecMode,
) -> Result<EquivCheck, RelsemError> {
    require_metric_mode(p1)?;
    require_metric_mode(p2)?;
    if !p1.vars.same_names(&p2.vars) {
        return Err(RelsemError::VarSetMismatch);
    }
    let n = d.charge(d.store_count(p1.vars.len()))?;
    let scan = exec::scan(mode, n, |idx| {
        let s = d.store_at(&p1.vars, idx);
        let s2 = if p1.vars == p2.vars {
            s.clone()
        } else {
            // same names, different declaration order
            let mut t = Store::zeroed(Arc::clone(&p2.vars));
            for (name, v) in s.entries() {
                t.set(name, v);
            }
            t
        };
        let r1 = match crate::lang::run_metric(p1, &s) {
            Err(e) => return Verdict::<_, (), _>::Abort(RelsemError::Eval(e)),
            Ok(o) => o,
        };
        let r2 = match crate::lang::run_metric(p2, &s2) {
            Err(e) => return Verdict::Abort(RelsemError::Eval(e)),
            Ok(o) => o,
        };
        match (r1, r2) {
            (Outcome::Normal(f1), Outcome::Normal(f2)) => {
                for (name, v1) in f1.entries() {
                    let v2 = f2.get(name).unwrap();
                    if v1 != v2 {
                        return Verdict::Fail((
                            s,
                            format!("final stores differ at {name}: {v1} vs {v2}"),
                        ));
                    }
                }
                Verdict::Pass
            }
            (Outcome::OutOfFuel(_), Outcome::OutOfFuel(_)) => Verdict::Pass,
            (Outcome::Normal(_), Outcome::OutOfFuel(_)) => Verdict::Fail((
                s,
                "left run is normal, right run is out-of-fuel".to_string(),
            )),
            (Outcome::OutOfFuel(_), Outcome::Normal(_)) => Verdict::Fail((
                s,
                "left run is out-of-fuel, right run is normal".to_string(),
            )),
        }
    })?;
    Ok(match scan.first_fail {
        Some((store, detail)) => EquivCheck::Counterexample { store, detail },
        None => EquivCheck::Pass,
    })
}

fn disjoint(a: &BTreeSet<String>, b: &BTreeSet<String>) -> bool {
    a.intersection(b).next().is_none()
}

fn intersection_names(a: &BTreeSet<String>, b: &BTreeSet<String>) -> String {
    let xs: Vec<&str> = a.intersection(b).map(|s| s.as_str()).collect();
    format!("{{{}}}", xs.join(","))
}

fn validate_footprint(
    label: &str,
    p: &Program,
    fp: &Footprint,
    d: &TestDomain,
) -> Result<Option<String>, RelsemError> {
    match check_writes(p, &fp.writes, d)? {
        WritesCheck::Pass => {}
        WritesCheck::Counterexample { store, var } => {
            return Ok(Some(format!(
                "{label} write set is wrong: `{var}` changes from store [{store}]"
            )))
        }
    }
    match check_reads(p, &fp.reads, &fp.writes, d)? {
        ReadsCheck::Pass => Ok(None),
        ReadsCheck::Counterexample { s0, s1, var } => Ok(Some(format!(
            "{label} read set is wrong: runs from [{s0}] and [{s1}] (agreeing on reads) disagree at `{var}`"
        ))),
    }
}

/// Validates a footprint-based transformation: first checks the declared
/// footprints, then the lemma's disjointness/subset side conditions, and
/// finally the equivalence of the two composed forms over the domain.
pub fn check_transformation(
    kind: TransformKind,
    p1: &Program,
    p2: Option<&Program>,
    fp1: &Footprint,
    fp2: Option<&Footprint>,
    d: &TestDomain,
) -> Result<TransformCheck, RelsemError> {
    let (lhs, rhs) = match kind {
        TransformKind::Swap => {
            let p2 = p2.ok_or(RelsemError::VarSetMismatch)?;
            let fp2 = fp2.ok_or(RelsemError::VarSetMismatch)?;
            if !p1.vars.same_names(&p2.vars) {
                return Err(RelsemError::VarSetMismatch);
            }
            if let Some(detail) = validate_footprint("first program's", p1, fp1, d)? {
                return Ok(TransformCheck::PreconditionViolation { detail });
            }
            if let Some(detail) = validate_footprint("second program's", p2, fp2, d)? {
                return Ok(TransformCheck::PreconditionViolation { detail });
            }
            if !disjoint(&fp1.writes, &fp2.writes) {
                return Ok(TransformCheck::PreconditionViolation {
                    detail: format!(
                        "ws1 and ws2 overlap: {}",
                        intersection_names(&fp1.writes, &fp2.writes)
                    ),
                });
            }
            if !disjoint(&fp1.reads, &fp2.writes) {
                return Ok(TransformCheck::PreconditionViolation {
                    detail: format!(
                        "rs1 and ws2 overlap: {}",
                        intersection_names(&fp1.reads, &fp2.writes)
                    ),
                });
            }
            if !disjoint(&fp2.reads, &fp1.writes) {
                return Ok(TransformCheck::PreconditionViolation {
                    detail: format!(
                        "rs2 and ws1 overlap: {}",
                        intersection_names(&fp2.reads, &fp1.writes)
                    ),
                });
            }
            let c1c2 = p1.with_body(Com::seq(p1.body.clone(), p2.body.clone())).unwrap();
            let c2c1 = p1.with_body(Com::seq(p2.body.clone(), p1.body.clone())).unwrap();
            (c1c2, c2c1)
        }
        TransformKind::Idempotence => {
            if let Some(detail) = validate_footprint("the program's", p1, fp1, d)? {
                return Ok(TransformCheck::PreconditionViolation { detail });
            }
            if !disjoint(&fp1.reads, &fp1.writes) {
                return Ok(TransformCheck::PreconditionViolation {
                    detail: format!(
                        "rs and ws overlap: {}",
                        intersection_names(&fp1.reads, &fp1.writes)
                    ),
                });
            }
            let cc = p1.with_body(Com::seq(p1.body.clone(), p1.body.clone())).unwrap();
            (cc, p1.clone())
        }
        TransformKind::RedundantWrites => {
            let p2 = p2.ok_or(RelsemError::VarSetMismatch)?;
            let fp2 = fp2.ok_or(RelsemError::VarSetMismatch)?;
            if !p1.vars.same_names(&p2.vars) {
                return Err(RelsemError::VarSetMismatch);
            }
            if let Some(detail) = validate_footprint("first program's", p1, fp1, d)? {
                return Ok(TransformCheck::PreconditionViolation { detail });
            }
            if let Some(detail) = validate_footprint("second program's", p2, fp2, d)? {
                return Ok(TransformCheck::PreconditionViolation { detail });
            }
            if !disjoint(&fp1.writes, &fp2.reads) {
                return Ok(TransformCheck::PreconditionViolation {
                    detail: format!(
                        "ws1 and rs2 overlap: {}",
                        intersection_names(&fp1.writes, &fp2.reads)
                    ),
                });
            }
            if !fp1.writes.is_subset(&fp2.writes) {
                let extra: Vec<&str> = fp1
                    .writes
                    .difference(&fp2.writes)
                    .map(|s| s.as_str())
                    .collect();
                return Ok(TransformCheck::PreconditionViolation {
                    detail: format!("ws1 is not a subset of ws2: {{{}}}", extra.join(",")),
                });
            }
            let c1c2 = p1.with_body(Com::seq(p1.body.clone(), p2.body.clone())).unwrap();
            (c1c2, p2.clone())
        }
    };
    match check_equiv(&lhs, &rhs, d)? {
        EquivCheck::Pass => Ok(TransformCheck::Pass),
        EquivCheck::Counterexample { store, detail } => {
            Ok(TransformCheck::Counterexample { store, detail })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse_program;

    fn d01() -> TestDomain {
        TestDomain::new(vec![0, 1]).unwrap()
    }

    #[test]
    fn writes_pass_and_counterexample() {
        let p = parse_program("vars x; x := 1").unwrap();
        let ws: BTreeSet<String> = ["x".to_string()].into();
        assert_eq!(check_writes(&p, &ws, &d01()).unwrap(), WritesCheck::Pass);
        let empty = BTreeSet::new();
        match check_writes(&p, &empty, &d01()).unwrap() {
            WritesCheck::Counterexample { store, var } => {
                assert_eq!(var, "x");
                assert_eq!(store.get("x"), Some(0));
            }
            other => panic!("expected counterexample, got {other:?}"),
        }
    }

    #[test]
    fn writes_covers_both_branches() {
        let p = parse_program("vars h,x; if (h == 0) { x := 0 } else { skip }").unwrap();
        let ws: BTreeSet<String> = ["x".to_string()].into();
        assert_eq!(check_writes(&p, &ws, &d01()).unwrap(), WritesCheck::Pass);
    }

    #[test]
    fn reads_pass_and_counterexample() {
        let p = parse_program("vars x,y; x := y").unwrap();
        let rs: BTreeSet<String> = ["y".to_string()].into();
        let ws: BTreeSet<String> = ["x".to_string()].into();
        assert_eq!(
            check_reads(&p, &rs, &ws, &d01()).unwrap(),
            ReadsCheck::Pass
        );
        match check_reads(&p, &BTreeSet::new(), &ws, &d01()).unwrap() {
            ReadsCheck::Counterexample { s0, s1, var } => {
                assert_eq!(var, "x");
                assert_ne!(s0.get("y"), s1.get("y"));
            }
            other => panic!("expected counterexample, got {other:?}"),
        }
    }

    #[test]
    fn skip_has_empty_footprint() {
        let p = parse_program("vars x; skip").unwrap();
        let empty = BTreeSet::new();
        assert_eq!(check_writes(&p, &empty, &d01()).unwrap(), WritesCheck::Pass);
        assert_eq!(
            check_reads(&p, &empty, &empty, &d01()).unwrap(),
            ReadsCheck::Pass
        );
    }

    #[test]
    fn equiv_reflexive_and_counterexample() {
        let p1 = parse_program("vars x; x := 1").unwrap();
        let p2 = parse_program("vars x; x := 2").unwrap();
        assert_eq!(check_equiv(&p1, &p1, &d01()).unwrap(), EquivCheck::Pass);
        assert!(matches!(
            check_equiv(&p1, &p2, &d01()).unwrap(),
            EquivCheck::Counterexample { .. }
        ));
    }

    #[test]
    fn swap_pass() {
        let p1 = parse_program("vars x,y; x := 1").unwrap();
        let p2 = parse_program("vars x,y; y := 2").unwrap();
        let fp1 = Footprint::new::<&str>([], ["x"]);
        let fp2 = Footprint::new::<&str>([], ["y"]);
        assert_eq!(
            check_transformation(TransformKind::Swap, &p1, Some(&p2), &fp1, Some(&fp2), &d01())
                .unwrap(),
            TransformCheck::Pass
        );
    }

    #[test]
    fn swap_precondition_violation() {
        let p1 = parse_program("vars x,y; x := y + 1").unwrap();
        let p2 = parse_program("vars x,y; y := 0").unwrap();
        let fp1 = Footprint::new(["y"], ["x"]);
        let fp2 = Footprint::new::<&str>([], ["y"]);
        match check_transformation(
            TransformKind::Swap,
            &p1,
            Some(&p2),
            &fp1,
            Some(&fp2),
            &d01(),
        )
        .unwrap()
        {
            TransformCheck::PreconditionViolation { detail } => {
                assert!(detail.contains("rs1 and ws2"), "{detail}");
                assert!(detail.contains("y"), "{detail}");
            }
            other => panic!("expected precondition violation, got {other:?}"),
        }
    }

    #[test]
    fn redundant_writes_pass() {
        let p1 = parse_program("vars x,y; x := 5").unwrap();
        let p2 = parse_program("vars x,y; x := y").unwrap();
        let fp1 = Footprint::new::<&str>([], ["x"]);
        let fp2 = Footprint::new(["y"], ["x"]);
        assert_eq!(
            check_transformation(
                TransformKind::RedundantWrites,
                &p1,
                Some(&p2),
                &fp1,
                Some(&fp2),
                &d01()
            )
            .unwrap(),
            TransformCheck::Pass
        );
    }

    #[test]
    fn idempotence_pass_and_violation() {
        let p = parse_program("vars x,y; x := y").unwrap();
        let fp = Footprint::new(["y"], ["x"]);
        assert_eq!(
            check_transformation(TransformKind::Idempotence, &p, None, &fp, None, &d01())
                .unwrap(),
            TransformCheck::Pass
        );
        let p2 = parse_program("vars x,y; x := x + 1").unwrap();
        let fp2 = Footprint::new(["x"], ["x"]);
        assert!(matches!(
            check_transformation(TransformKind::Idempotence, &p2, None, &fp2, None, &d01())
                .unwrap(),
            TransformCheck::PreconditionViolation { .. }
        ));
    }

    #[test]
    fn wrong_declared_footprint_is_reported() {
        // declared write set validates, but the read set misses `y`
        let p1 = parse_program("vars x,y; x := y").unwrap();
        let p2 = parse_program("vars x,y; y := 0").unwrap();
        let fp1 = Footprint::new::<&str>([], ["x"]);
        let fp2 = Footprint::new::<&str>([], ["y"]);
        match check_transformation(
            TransformKind::Swap,
            &p1,
            Some(&p2),
            &fp1,
            Some(&fp2),
            &d01(),
        )
        .unwrap()
        {
            TransformCheck::PreconditionViolation { detail } => {
                assert!(detail.contains("read set is wrong"), "{detail}");
            }
            other => panic!("expected precondition violation, got {other:?}"),
        }
    }

    #[test]
    fn budget_exceeded() {
        let p = parse_program("vars x,y,z; skip").unwrap();
        let d = TestDomain::range(0, 9).unwrap().with_budget(10);
        assert!(matches!(
            check_writes(&p, &BTreeSet::new(), &d),
            Err(RelsemError::Domain(DomainError::BudgetExceeded { .. }))
        ));
    }
}
