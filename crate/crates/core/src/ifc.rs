//! Information-flow control over the WHILE language.
//!
//! * A two-point syntax-directed type system computing each command's
//!   greatest derivable pc label (subsumption is implicit in comparisons).
//! * Bounded semantic noninterference checkers for expressions and
//!   commands; command checking covers both the two-run relation and the
//!   one-run no-write-down property, and is termination-insensitive:
//!   out-of-fuel runs are excluded from the quantification.
//! * A hybrid checker that consults a list of already-verified
//!   `(command, label)` pairs before typing a node syntactically. Lookup
//!   is exact AST equality, so sub-programs must be factored textually the
//!   same way (`;` groups to the left).
//! * A dynamic monitor that tracks expression labels and the pc, halting
//!   with a violation when an assignment check fails, plus its bounded
//!   noninterference checker (error-insensitive: violating and diverging
//!   runs are skipped).
//! * A delimited-release checker that additionally assumes the two runs
//!   agree on declassified expressions.

use std::collections::BTreeMap;
use std::fmt;

use crate::domain::{DomainError, TestDomain};
use crate::exec::{self, ExecMode, Verdict};
use crate::lang::{eval_exp, run_metric, Com, EvalError, Exp, Outcome, Program, Store};

/// The two-point security lattice, `Low ⊑ High`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Label {
    Low,
    High,
}

impl Label {
    pub fn join(self, other: Label) -> Label {
        self.max(other)
    }

    pub fn meet(self, other: Label) -> Label {
        self.min(other)
    }

    pub fn flows_to(self, other: Label) -> bool {
        self <= other
    }

    pub fn parse(s: &str) -> Option<Label> {
        match s {
            "Low" | "low" | "L" => Some(Label::Low),
            "High" | "high" | "H" => Some(Label::High),
            _ => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Low => write!(f, "Low"),
            Label::High => write!(f, "High"),
        }
    }
}

/// Per-variable labeling. Total over the program's variables by the time a
/// check runs; missing entries are rejected up front.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LabelEnv {
    map: BTreeMap<String, Label>,
}

impl LabelEnv {
    pub fn new() -> LabelEnv {
        LabelEnv::default()
    }

    pub fn with(mut self, name: impl Into<String>, label: Label) -> LabelEnv {
        self.map.insert(name.into(), label);
        self
    }

    pub fn set(&mut self, name: impl Into<String>, label: Label) {
        self.map.insert(name.into(), label);
    }

    pub fn get(&self, name: &str) -> Option<Label> {
        self.map.get(name).copied()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, Label)> {
        self.map.iter().map(|(k, v)| (k.as_str(), *v))
    }

    /// Checks the labeling covers every declared variable.
    pub fn check_total(&self, p: &Program) -> Result<(), IfcError> {
        for v in p.vars.names() {
            if self.get(v).is_none() {
                return Err(IfcError::UnlabeledVariable(v.to_string()));
            }
        }
        Ok(())
    }

    fn low_indices(&self, p: &Program) -> Vec<usize> {
        p.vars
            .names()
            .enumerate()
            .filter(|(_, name)| self.get(name) == Some(Label::Low))
            .map(|(i, _)| i)
            .collect()
    }
}

impl fmt::Display for LabelEnv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (name, l) in self.entries() {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{name}={l}")?;
            first = false;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IfcError {
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("variable `{0}` has no label")]
    UnlabeledVariable(String),
    #[error("loop without a `decr` metric: `{0}`")]
    MissingMetric(String),
}

/// A static typing failure, carrying the offending sub-command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeError {
    pub offending: Com,
    pub reason: String,
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ill-typed at `{}`: {}", self.offending, self.reason)
    }
}

impl std::error::Error for TypeError {}

/// Least label of an expression: literals are `Low`, variables take their
/// label, binary operators join.
pub fn tc_exp(env: &LabelEnv, e: &Exp) -> Label {
    match e {
        Exp::IntLit(_) => Label::Low,
        Exp::Var(x) => env.get(x).unwrap_or(Label::High),
        Exp::BinOp(_, l, r) => tc_exp(env, l).join(tc_exp(env, r)),
    }
}

/// Greatest pc label at which the command types, or the first offending
/// sub-command. `skip` types at `High`; an assignment requires the
/// right-hand side to flow to the target and types at the target's label;
/// sequences meet; conditionals and loops require the guard label to flow
/// to the branch/body level. Loop metrics are unconstrained.
pub fn tc_com(env: &LabelEnv, c: &Com) -> Result<Label, TypeError> {
    match c {
        Com::Skip => Ok(Label::High),
        Com::Assign(x, e) => {
            let target = env.get(x).unwrap_or(Label::High);
            let rhs = tc_exp(env, e);
            if rhs.flows_to(target) {
                Ok(target)
            } else {
                Err(TypeError {
                    offending: c.clone(),
                    reason: format!("cannot assign a {rhs} expression to `{x}` ({target})"),
                })
            }
        }
        Com::Seq(a, b) => Ok(tc_com(env, a)?.meet(tc_com(env, b)?)),
        Com::If(g, t, f) => {
            let guard = tc_exp(env, g);
            let body = tc_com(env, t)?.meet(tc_com(env, f)?);
            if guard.flows_to(body) {
                Ok(body)
            } else {
                Err(TypeError {
                    offending: c.clone(),
                    reason: format!(
                        "branching on a {guard} guard around a context writing at {body}"
                    ),
                })
            }
        }
        Com::While(g, body, _metric) => {
            let guard = tc_exp(env, g);
            let level = tc_com(env, body)?;
            if guard.flows_to(level) {
                Ok(level)
            } else {
                Err(TypeError {
                    offending: c.clone(),
                    reason: format!(
                        "looping on a {guard} guard around a body writing at {level}"
                    ),
                })
            }
        }
    }
}

/// A command already known noninterferent at a label, usable by the hybrid
/// checker instead of syntactic typing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrustedEntry {
    pub command: Com,
    pub label: Label,
    pub evidence: Evidence,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Evidence {
    SemanticallyChecked { domain: TestDomain },
    Assumed,
}

/// Like [`tc_com`], but at every node first looks the command up in the
/// trusted list (exact AST equality) and returns the stored label on a hit.
pub fn tc_com_hybrid(
    env: &LabelEnv,
    c: &Com,
    trusted: &[TrustedEntry],
) -> Result<Label, TypeError> {
    if let Some(entry) = trusted.iter().find(|t| &t.command == c) {
        return Ok(entry.label);
    }
    match c {
        Com::Skip => Ok(Label::High),
        Com::Assign(..) => tc_com(env, c),
        Com::Seq(a, b) => Ok(tc_com_hybrid(env, a, trusted)?.meet(tc_com_hybrid(env, b, trusted)?)),
        Com::If(g, t, f) => {
            let guard = tc_exp(env, g);
            let body = tc_com_hybrid(env, t, trusted)?.meet(tc_com_hybrid(env, f, trusted)?);
            if guard.flows_to(body) {
                Ok(body)
            } else {
                Err(TypeError {
                    offending: c.clone(),
                    reason: format!(
                        "branching on a {guard} guard around a context writing at {body}"
                    ),
                })
            }
        }
        Com::While(g, body, _) => {
            let guard = tc_exp(env, g);
            let level = tc_com_hybrid(env, body, trusted)?;
            if guard.flows_to(level) {
                Ok(level)
            } else {
                Err(TypeError {
                    offending: c.clone(),
                    reason: format!(
                        "looping on a {guard} guard around a body writing at {level}"
                    ),
                })
            }
        }
    }
}

/// Result of a two-store counterexample search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PairCheck {
    Pass,
    Counterexample { s0: Store, s1: Store, detail: String },
}

/// Kind of `ni_com_check` counterexample: the two-run noninterference
/// relation or the one-run no-write-down property.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NiComCheck {
    Pass,
    NiCounterexample { s0: Store, s1: Store, detail: String },
    WriteDownCounterexample { store: Store, var: String },
}

fn low_equiv(low_idx: &[usize], a: &Store, b: &Store) -> bool {
    low_idx.iter().all(|&i| a.get_idx(i) == b.get_idx(i))
}

fn require_metric_mode(p: &Program) -> Result<(), IfcError> {
    if p.body.all_loops_have_metrics() {
        Ok(())
    } else {
        Err(IfcError::MissingMetric(p.body.to_string()))
    }
}

/// Noninterference of an expression at a label: vacuous at `High`;
/// at `Low`, low-equivalent stores must evaluate it equally.
pub fn ni_exp_check(
    p: &Program,
    env: &LabelEnv,
    e: &Exp,
    l: Label,
    d: &TestDomain,
) -> Result<PairCheck, IfcError> {
    env.check_total(p)?;
    if l == Label::High {
        return Ok(PairCheck::Pass);
    }
    let low_idx = env.low_indices(p);
    let per_side = d.store_count(p.vars.len());
    let n = d.charge(per_side.and_then(|c| c.checked_mul(c)))?;
    let scan = exec::scan(ExecMode::Auto, n, |idx| {
        let (s0, s1) = d.store_pair_at(&p.vars, &p.vars, idx);
        if !low_equiv(&low_idx, &s0, &s1) {
            return Verdict::Pass;
        }
        let v0 = match eval_exp(&s0, e) {
            Err(err) => return Verdict::Abort(IfcError::Eval(err)),
            Ok(v) => v,
        };
        let v1 = match eval_exp(&s1, e) {
            Err(err) => return Verdict::Abort(IfcError::Eval(err)),
            Ok(v) => v,
        };
        if v0 == v1 {
            Verdict::Pass
        } else {
            Verdict::Fail::<_, (), _>((s0, s1, format!("evaluates to {v0} vs {v1}")))
        }
    })?;
    Ok(match scan.first_fail {
        Some((s0, s1, detail)) => PairCheck::Counterexample { s0, s1, detail },
        None => PairCheck::Pass,
    })
}

/// Noninterference of a command at a pc label: both the two-run relation
/// (low-equivalent inputs, both runs normal, low-equivalent outputs) and
/// the one-run no-write-down property (variables strictly below the pc are
/// unchanged). Out-of-fuel runs are skipped by both conjuncts.
pub fn ni_com_check(
    p: &Program,
    env: &LabelEnv,
    l: Label,
    d: &TestDomain,
) -> Result<NiComCheck, IfcError> {
    ni_com_check_with_mode(p, env, l, d, ExecMode::Auto)
}

pub fn ni_com_check_with_mode(
    p: &Program,
    env: &LabelEnv,
    l: Label,
    d: &TestDomain,
    mode: ExecMode,
) -> Result<NiComCheck, IfcError> {
    env.check_total(p)?;
    require_metric_mode(p)?;
    let low_idx = env.low_indices(p);
    let per_side = d
        .store_count(p.vars.len())
        .ok_or(DomainError::BudgetExceeded {
            needed: u64::MAX,
            budget: d.budget,
        })?;
    d.charge(per_side.checked_mul(per_side))?;

    // One run per store; the pair phase reuses these outcomes.
    let stores: Vec<Store> = (0..per_side).map(|idx| d.store_at(&p.vars, idx)).collect();
    let mut outcomes: Vec<Outcome> = Vec::with_capacity(per_side as usize);
    for s in &stores {
        outcomes.push(run_metric(p, s)?);
    }

    // no-write-down: variables strictly below `l` are unchanged.
    let below: Vec<usize> = p
        .vars
        .names()
        .enumerate()
        .filter(|(_, name)| env.get(name).map_or(false, |vl| vl < l))
        .map(|(i, _)| i)
        .collect();
    for (s, outcome) in stores.iter().zip(outcomes.iter()) {
        if let Outcome::Normal(s2) = outcome {
            for &i in &below {
                if s2.get_idx(i) != s.get_idx(i) {
                    return Ok(NiComCheck::WriteDownCounterexample {
                        store: s.clone(),
                        var: p.vars.name(i).to_string(),
                    });
                }
            }
        }
    }

    // two-run noninterference over low-equivalent pairs
    let scan = exec::scan(mode, per_side * per_side, |idx| {
        let i0 = (idx / per_side) as usize;
        let i1 = (idx % per_side) as usize;
        let (f0, f1) = match (&outcomes[i0], &outcomes[i1]) {
            (Outcome::Normal(f0), Outcome::Normal(f1)) => (f0, f1),
            _ => return Verdict::Pass,
        };
        let (s0, s1) = (&stores[i0], &stores[i1]);
        if !low_equiv(&low_idx, s0, s1) {
            return Verdict::Pass;
        }
        if low_equiv(&low_idx, f0, f1) {
            Verdict::Pass
        } else {
            Verdict::Fail::<_, (), IfcError>((
                s0.clone(),
                s1.clone(),
                format!("final stores [{f0}] / [{f1}] are not low-equivalent"),
            ))
        }
    })?;
    Ok(match scan.first_fail {
        Some((s0, s1, detail)) => NiComCheck::NiCounterexample { s0, s1, detail },
        None => NiComCheck::Pass,
    })
}

/// Outcome of a monitored run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MonitorOutcome {
    Normal(Store),
    OutOfFuel(Store),
    /// An assignment failed its check; carries the store at that point.
    Violation(Store),
}

impl MonitorOutcome {
    pub fn store(&self) -> &Store {
        match self {
            MonitorOutcome::Normal(s)
            | MonitorOutcome::OutOfFuel(s)
            | MonitorOutcome::Violation(s) => s,
        }
    }
}

impl fmt::Display for MonitorOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonitorOutcome::Normal(s) => write!(f, "normal [{s}]"),
            MonitorOutcome::OutOfFuel(s) => write!(f, "out-of-fuel [{s}]"),
            MonitorOutcome::Violation(s) => write!(f, "violation [{s}]"),
        }
    }
}

/// Monitor knobs. `enforce_assign_check` exists so tests can validate that
/// [`dyn_ifc_check`] catches a monitor with the assignment check removed;
/// production callers keep the default.
#[derive(Debug, Clone, Copy)]
pub struct MonitorOptions {
    pub enforce_assign_check: bool,
}

impl Default for MonitorOptions {
    fn default() -> Self {
        MonitorOptions {
            enforce_assign_check: true,
        }
    }
}

/// Runs a program under the dynamic IFC monitor: expressions carry labels
/// (literals `Low`, variables their label, operators join); an assignment
/// `r := e` requires `label(e) ⊔ pc ⊑ label(r)`; branch and loop bodies run
/// at the pc joined with the guard's label. Loops use metric semantics.
pub fn monitor_run(
    env: &LabelEnv,
    pc: Label,
    p: &Program,
    s: &Store,
) -> Result<MonitorOutcome, IfcError> {
    monitor_run_with(MonitorOptions::default(), env, pc, p, s)
}

pub fn monitor_run_with(
    opts: MonitorOptions,
    env: &LabelEnv,
    pc: Label,
    p: &Program,
    s: &Store,
) -> Result<MonitorOutcome, IfcError> {
    env.check_total(p)?;
    require_metric_mode(p)?;
    let mut store = s.clone();
    Ok(match monitor_exec(&opts, env, pc, &p.body, &mut store)? {
        MonStop::Done => MonitorOutcome::Normal(store),
        MonStop::MetricFailed => MonitorOutcome::OutOfFuel(store),
        MonStop::Violation => MonitorOutcome::Violation(store),
    })
}

enum MonStop {
    Done,
    MetricFailed,
    Violation,
}

fn monitor_eval(env: &LabelEnv, s: &Store, e: &Exp) -> Result<(i64, Label), EvalError> {
    let v = eval_exp(s, e)?;
    let l = tc_exp(env, e);
    Ok((v, l))
}

fn monitor_exec(
    opts: &MonitorOptions,
    env: &LabelEnv,
    pc: Label,
    c: &Com,
    s: &mut Store,
) -> Result<MonStop, IfcError> {
    match c {
        Com::Skip => Ok(MonStop::Done),
        Com::Assign(x, e) => {
            let (v, le) = monitor_eval(env, s, e)?;
            let target = env
                .get(x)
                .ok_or_else(|| IfcError::UnlabeledVariable(x.clone()))?;
            if opts.enforce_assign_check && !le.join(pc).flows_to(target) {
                return Ok(MonStop::Violation);
            }
            s.set(x, v);
            Ok(MonStop::Done)
        }
        Com::Seq(a, b) => match monitor_exec(opts, env, pc, a, s)? {
            MonStop::Done => monitor_exec(opts, env, pc, b, s),
            stop => Ok(stop),
        },
        Com::If(g, t, f) => {
            let (v, lg) = monitor_eval(env, s, g)?;
            let inner = pc.join(lg);
            if v == 0 {
                monitor_exec(opts, env, inner, t, s)
            } else {
                monitor_exec(opts, env, inner, f, s)
            }
        }
        Com::While(g, body, metric) => {
            let metric = metric
                .as_ref()
                .ok_or_else(|| IfcError::MissingMetric(c.to_string()))?;
            let (v, lg) = monitor_eval(env, s, g)?;
            let inner = pc.join(lg);
            if v == 0 {
                return Ok(MonStop::Done);
            }
            let mut bound = eval_exp(s, metric)?;
            if bound < 0 {
                return Ok(MonStop::MetricFailed);
            }
            loop {
                match monitor_exec(opts, env, inner, body, s)? {
                    MonStop::Done => {}
                    stop => return Ok(stop),
                }
                let next = eval_exp(s, metric)?;
                if next < 0 || next >= bound {
                    return Ok(MonStop::MetricFailed);
                }
                bound = next;
                if eval_exp(s, g)? == 0 {
                    return Ok(MonStop::Done);
                }
            }
        }
    }
}

/// Error-insensitive noninterference of the monitored semantics: over all
/// low-equivalent pairs, two normal monitored runs end low-equivalent.
/// Violating and out-of-fuel runs are skipped.
pub fn dyn_ifc_check(
    p: &Program,
    env: &LabelEnv,
    pc: Label,
    d: &TestDomain,
) -> Result<PairCheck, IfcError> {
    dyn_ifc_check_with(MonitorOptions::default(), p, env, pc, d)
}

pub fn dyn_ifc_check_with(
    opts: MonitorOptions,
    p: &Program,
    env: &LabelEnv,
    pc: Label,
    d: &TestDomain,
) -> Result<PairCheck, IfcError> {
    env.check_total(p)?;
    require_metric_mode(p)?;
    let low_idx = env.low_indices(p);
    let per_side = d
        .store_count(p.vars.len())
        .ok_or(DomainError::BudgetExceeded {
            needed: u64::MAX,
            budget: d.budget,
        })?;
    d.charge(per_side.checked_mul(per_side))?;
    let stores: Vec<Store> = (0..per_side).map(|idx| d.store_at(&p.vars, idx)).collect();
    let mut outcomes: Vec<MonitorOutcome> = Vec::with_capacity(per_side as usize);
    for s in &stores {
        outcomes.push(monitor_run_with(opts, env, pc, p, s)?);
    }
    let scan = exec::scan(ExecMode::Auto, per_side * per_side, |idx| {
        let i0 = (idx / per_side) as usize;
        let i1 = (idx % per_side) as usize;
        let (f0, f1) = match (&outcomes[i0], &outcomes[i1]) {
            (MonitorOutcome::Normal(f0), MonitorOutcome::Normal(f1)) => (f0, f1),
            _ => return Verdict::Pass,
        };
        let (s0, s1) = (&stores[i0], &stores[i1]);
        if !low_equiv(&low_idx, s0, s1) {
            return Verdict::Pass;
        }
        if low_equiv(&low_idx, f0, f1) {
            Verdict::Pass
        } else {
            Verdict::Fail::<_, (), IfcError>((
                s0.clone(),
                s1.clone(),
                format!("monitored finals [{f0}] / [{f1}] are not low-equivalent"),
            ))
        }
    })?;
    Ok(match scan.first_fail {
        Some((s0, s1, detail)) => PairCheck::Counterexample { s0, s1, detail },
        None => PairCheck::Pass,
    })
}

/// Delimited release: over all pairs that are low-equivalent *and* agree on
/// the value of every declassified expression, two normal runs end
/// low-equivalent.
pub fn delimited_release_check(
    p: &Program,
    env: &LabelEnv,
    declass: &[Exp],
    d: &TestDomain,
) -> Result<PairCheck, IfcError> {
    env.check_total(p)?;
    require_metric_mode(p)?;
    let low_idx = env.low_indices(p);
    let per_side = d.store_count(p.vars.len());
    let n = d.charge(per_side.and_then(|c| c.checked_mul(c)))?;
    let scan = exec::scan(ExecMode::Auto, n, |idx| {
        let (s0, s1) = d.store_pair_at(&p.vars, &p.vars, idx);
        if !low_equiv(&low_idx, &s0, &s1) {
            return Verdict::<_, (), _>::Pass;
        }
        for e in declass {
            let v0 = match eval_exp(&s0, e) {
                Err(err) => return Verdict::Abort(IfcError::Eval(err)),
                Ok(v) => v,
            };
            let v1 = match eval_exp(&s1, e) {
                Err(err) => return Verdict::Abort(IfcError::Eval(err)),
                Ok(v) => v,
            };
            if v0 != v1 {
                return Verdict::Pass;
            }
        }
        let r0 = match run_metric(p, &s0) {
            Err(err) => return Verdict::Abort(IfcError::Eval(err)),
            Ok(o) => o,
        };
        let r1 = match run_metric(p, &s1) {
            Err(err) => return Verdict::Abort(IfcError::Eval(err)),
            Ok(o) => o,
        };
        match (r0, r1) {
            (Outcome::Normal(f0), Outcome::Normal(f1)) => {
                if low_equiv(&low_idx, &f0, &f1) {
                    Verdict::Pass
                } else {
                    Verdict::Fail((
                        s0,
                        s1,
                        format!("finals [{f0}] / [{f1}] are not low-equivalent"),
                    ))
                }
            }
            _ => Verdict::Pass,
        }
    })?;
    Ok(match scan.first_fail {
        Some((s0, s1, detail)) => PairCheck::Counterexample { s0, s1, detail },
        None => PairCheck::Pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{parse_exp_with_vars, parse_program, parse_store_literal};

    fn env_lo_hi() -> LabelEnv {
        LabelEnv::new()
            .with("lo", Label::Low)
            .with("hi", Label::High)
    }

    fn d01() -> TestDomain {
        TestDomain::new(vec![0, 1]).unwrap()
    }

    #[test]
    fn tc_exp_examples() {
        let env = env_lo_hi();
        assert_eq!(tc_exp(&env, &Exp::var("hi")), Label::High);
        assert_eq!(tc_exp(&env, &Exp::lit(42)), Label::Low);
        assert_eq!(
            tc_exp(&env, &Exp::add(Exp::var("lo"), Exp::var("hi"))),
            Label::High
        );
    }

    #[test]
    fn tc_com_examples() {
        let env = env_lo_hi();
        let explicit_flow = Com::assign("lo", Exp::var("hi"));
        assert!(tc_com(&env, &explicit_flow).is_err());
        assert_eq!(tc_com(&env, &Com::Skip).unwrap(), Label::High);
        // the paper's two-assignment sub-program is ill-typed at lo := hi + 1
        let p = parse_program("vars hi,lo; hi := lo + 1; lo := hi + 1").unwrap();
        let err = tc_com(&env, &p.body).unwrap_err();
        assert_eq!(err.offending.to_string(), "lo := hi + 1");
    }

    #[test]
    fn tc_com_high_guard_low_write_rejected() {
        let env = env_lo_hi();
        let p = parse_program("vars hi,lo; if (hi == 0) { lo := 0 } else { skip }").unwrap();
        assert!(tc_com(&env, &p.body).is_err());
        let ok = parse_program("vars hi,lo; if (hi == 0) { hi := 0 } else { skip }").unwrap();
        assert_eq!(tc_com(&env, &ok.body).unwrap(), Label::High);
        let low = parse_program("vars hi,lo; if (lo == 0) { lo := 1 } else { skip }").unwrap();
        assert_eq!(tc_com(&env, &low.body).unwrap(), Label::Low);
    }

    #[test]
    fn ni_exp_examples() {
        let p = parse_program("vars lo,hi; skip").unwrap();
        let env = env_lo_hi();
        let lo = parse_exp_with_vars("lo", &p.vars).unwrap();
        assert_eq!(
            ni_exp_check(&p, &env, &lo, Label::Low, &d01()).unwrap(),
            PairCheck::Pass
        );
        let hi = parse_exp_with_vars("hi", &p.vars).unwrap();
        assert!(matches!(
            ni_exp_check(&p, &env, &hi, Label::Low, &d01()).unwrap(),
            PairCheck::Counterexample { .. }
        ));
        assert_eq!(
            ni_exp_check(&p, &env, &hi, Label::High, &d01()).unwrap(),
            PairCheck::Pass
        );
    }

    #[test]
    fn ni_com_examples() {
        let env = env_lo_hi();
        let d = TestDomain::range(0, 2).unwrap();
        // c_s is semantically noninterferent at Low even though ill-typed
        let c_s = parse_program("vars hi,lo; hi := lo + 1; lo := hi + 1").unwrap();
        assert_eq!(
            ni_com_check(&c_s, &env, Label::Low, &d).unwrap(),
            NiComCheck::Pass
        );
        let leak = parse_program("vars hi,lo; lo := hi").unwrap();
        assert!(matches!(
            ni_com_check(&leak, &env, Label::Low, &d01()).unwrap(),
            NiComCheck::NiCounterexample { .. }
        ));
        let write_down = parse_program("vars hi,lo; lo := 1").unwrap();
        match ni_com_check(&write_down, &env, Label::High, &d01()).unwrap() {
            NiComCheck::WriteDownCounterexample { var, .. } => assert_eq!(var, "lo"),
            other => panic!("expected write-down counterexample, got {other:?}"),
        }
    }

    #[test]
    fn hybrid_examples() {
        let env = LabelEnv::new()
            .with("c", Label::Low)
            .with("hi", Label::High)
            .with("lo", Label::Low);
        let c_loop = parse_program(
            "vars c,hi,lo; while (c != 0) decr c { hi := lo + 1; lo := hi + 1; c := c - 1 }",
        )
        .unwrap();
        let c_s = parse_program("vars c,hi,lo; hi := lo + 1; lo := hi + 1").unwrap();
        assert!(tc_com(&env, &c_loop.body).is_err());
        let trusted = vec![TrustedEntry {
            command: c_s.body.clone(),
            label: Label::Low,
            evidence: Evidence::SemanticallyChecked {
                domain: TestDomain::range(0, 2).unwrap(),
            },
        }];
        assert_eq!(
            tc_com_hybrid(&env, &c_loop.body, &trusted).unwrap(),
            Label::Low
        );
        assert!(tc_com_hybrid(&env, &c_loop.body, &[]).is_err());
        // a root hit short-circuits everything
        let whole = vec![TrustedEntry {
            command: c_loop.body.clone(),
            label: Label::Low,
            evidence: Evidence::Assumed,
        }];
        assert_eq!(
            tc_com_hybrid(&env, &c_loop.body, &whole).unwrap(),
            Label::Low
        );
    }

    #[test]
    fn hybrid_with_empty_list_degenerates_to_static() {
        let env = env_lo_hi();
        for src in [
            "vars hi,lo; lo := lo + 1",
            "vars hi,lo; hi := lo",
            "vars hi,lo; if (lo == 0) { lo := 1 } else { hi := 1 }",
        ] {
            let p = parse_program(src).unwrap();
            assert_eq!(tc_com(&env, &p.body).ok(), tc_com_hybrid(&env, &p.body, &[]).ok());
        }
    }

    #[test]
    fn monitor_examples() {
        let env = env_lo_hi();
        let p = parse_program("vars hi,lo; if (hi == 0) { skip } else { lo := 0 }").unwrap();
        let s0 = parse_store_literal("hi=0,lo=1", &p).unwrap();
        assert!(matches!(
            monitor_run(&env, Label::Low, &p, &s0).unwrap(),
            MonitorOutcome::Normal(_)
        ));
        let s1 = parse_store_literal("hi=1,lo=1", &p).unwrap();
        assert!(matches!(
            monitor_run(&env, Label::Low, &p, &s1).unwrap(),
            MonitorOutcome::Violation(_)
        ));
        let ok = parse_program("vars hi,lo; lo := 5").unwrap();
        let s = parse_store_literal("hi=0,lo=0", &ok).unwrap();
        assert!(matches!(
            monitor_run(&env, Label::Low, &ok, &s).unwrap(),
            MonitorOutcome::Normal(_)
        ));
    }

    #[test]
    fn dyn_ifc_examples() {
        let env = env_lo_hi();
        let leaky_if =
            parse_program("vars hi,lo; if (hi == 0) { skip } else { lo := 0 }").unwrap();
        assert_eq!(
            dyn_ifc_check(&leaky_if, &env, Label::Low, &d01()).unwrap(),
            PairCheck::Pass
        );
        let inc = parse_program("vars hi,lo; lo := lo + 1").unwrap();
        assert_eq!(
            dyn_ifc_check(&inc, &env, Label::Low, &d01()).unwrap(),
            PairCheck::Pass
        );
        // removing the assignment check breaks the theorem on lo := hi
        let leak = parse_program("vars hi,lo; lo := hi").unwrap();
        let broken = MonitorOptions {
            enforce_assign_check: false,
        };
        assert!(matches!(
            dyn_ifc_check_with(broken, &leak, &env, Label::Low, &d01()).unwrap(),
            PairCheck::Counterexample { .. }
        ));
        assert_eq!(
            dyn_ifc_check(&leak, &env, Label::Low, &d01()).unwrap(),
            PairCheck::Pass
        );
    }

    #[test]
    fn delimited_release_transfer() {
        let env = LabelEnv::new()
            .with("k", Label::Low)
            .with("lo", Label::Low)
            .with("hi", Label::High);
        let transfer = parse_program(
            "vars k,hi,lo; if (lt(k,hi) == 0) { skip } else { hi := hi - k; lo := lo + k }",
        )
        .unwrap();
        let d = TestDomain::range(0, 3).unwrap();
        let declass = vec![parse_exp_with_vars("lt(k,hi)", &transfer.vars).unwrap()];
        assert_eq!(
            delimited_release_check(&transfer, &env, &declass, &d).unwrap(),
            PairCheck::Pass
        );
        assert!(matches!(
            delimited_release_check(&transfer, &env, &[], &d).unwrap(),
            PairCheck::Counterexample { .. }
        ));
        let skip = parse_program("vars k,hi,lo; skip").unwrap();
        assert_eq!(
            delimited_release_check(&skip, &env, &declass, &d).unwrap(),
            PairCheck::Pass
        );
    }
}
