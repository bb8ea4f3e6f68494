//! Definitional interpreters for WHILE.
//!
//! Two divergence devices are exposed rather than unified:
//!
//! * **Metric mode** ([`run_metric`]): every loop must carry a `decr`
//!   expression. At loop entry the metric must be nonnegative, and after
//!   every body execution it must be nonnegative and strictly smaller than
//!   before; any failed check ends the run with [`Outcome::OutOfFuel`]
//!   carrying the store at that point. Well-founded descent makes this
//!   interpreter total.
//! * **Fuel mode** ([`run_fuel`]): a global iteration budget. Each loop
//!   iteration consumes one unit; `skip`/assignment/`if`/sequencing are
//!   free. Completion at some fuel is stable at every larger fuel.
//!
//! Arithmetic is 64-bit signed with checked overflow.

use std::fmt;

use super::ast::{BinOp, Com, Exp, Program, Store};

/// Runtime failures of the interpreters (distinct from normal outcomes).
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("arithmetic overflow evaluating `{0}`")]
    ArithmeticOverflow(String),
    #[error("undeclared variable `{0}`")]
    UndeclaredVariable(String),
    #[error("loop without a `decr` metric cannot run in metric mode: `{0}`")]
    MissingMetric(String),
}

/// Result of a metric-mode run. Always produced: the interpreter is total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Normal(Store),
    OutOfFuel(Store),
}

impl Outcome {
    pub fn store(&self) -> &Store {
        match self {
            Outcome::Normal(s) | Outcome::OutOfFuel(s) => s,
        }
    }

    pub fn is_normal(&self) -> bool {
        matches!(self, Outcome::Normal(_))
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Normal(s) => write!(f, "normal [{s}]"),
            Outcome::OutOfFuel(s) => write!(f, "out-of-fuel [{s}]"),
        }
    }
}

/// Result of a fuel-mode run: whether execution finished within the budget,
/// plus the store reached (final store, or the store when fuel ran out).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuelResult {
    pub completed: bool,
    pub store: Store,
}

/// Evaluates an expression in a read-only store.
pub fn eval_exp(store: &Store, e: &Exp) -> Result<i64, EvalError> {
    match e {
        Exp::IntLit(v) => Ok(*v),
        Exp::Var(x) => store
            .get(x)
            .ok_or_else(|| EvalError::UndeclaredVariable(x.clone())),
        Exp::BinOp(op, l, r) => {
            let a = eval_exp(store, l)?;
            let b = eval_exp(store, r)?;
            let out = match op {
                BinOp::Add => a.checked_add(b),
                BinOp::Sub => a.checked_sub(b),
                BinOp::Mul => a.checked_mul(b),
                BinOp::Lt => Some(i64::from(a < b)),
            };
            out.ok_or_else(|| EvalError::ArithmeticOverflow(e.to_string()))
        }
    }
}

/// Runs a program in metric mode. Every `while` must carry a metric.
pub fn run_metric(program: &Program, store: &Store) -> Result<Outcome, EvalError> {
    let mut s = store.clone();
    match exec_metric(&program.body, &mut s)? {
        Stop::Done => Ok(Outcome::Normal(s)),
        Stop::MetricFailed => Ok(Outcome::OutOfFuel(s)),
    }
}

enum Stop {
    Done,
    MetricFailed,
}

fn exec_metric(c: &Com, s: &mut Store) -> Result<Stop, EvalError> {
    match c {
        Com::Skip => Ok(Stop::Done),
        Com::Assign(x, e) => {
            let v = eval_exp(s, e)?;
            if !s.set(x, v) {
                return Err(EvalError::UndeclaredVariable(x.clone()));
            }
            Ok(Stop::Done)
        }
        Com::Seq(a, b) => match exec_metric(a, s)? {
            Stop::Done => exec_metric(b, s),
            stop => Ok(stop),
        },
        Com::If(g, t, f) => {
            if eval_exp(s, g)? == 0 {
                exec_metric(t, s)
            } else {
                exec_metric(f, s)
            }
        }
        Com::While(g, body, metric) => {
            let metric = metric
                .as_ref()
                .ok_or_else(|| EvalError::MissingMetric(c.to_string()))?;
            if eval_exp(s, g)? == 0 {
                return Ok(Stop::Done);
            }
            let mut bound = eval_exp(s, metric)?;
            if bound < 0 {
                return Ok(Stop::MetricFailed);
            }
            loop {
                match exec_metric(body, s)? {
                    Stop::Done => {}
                    stop => return Ok(stop),
                }
                let next = eval_exp(s, metric)?;
                if next < 0 || next >= bound {
                    return Ok(Stop::MetricFailed);
                }
                bound = next;
                if eval_exp(s, g)? == 0 {
                    return Ok(Stop::Done);
                }
            }
        }
    }
}

/// Runs a program in fuel mode: metrics are ignored, each loop iteration
/// consumes one unit of the shared budget.
pub fn run_fuel(program: &Program, store: &Store, fuel: u64) -> Result<FuelResult, EvalError> {
    let mut s = store.clone();
    let mut remaining = fuel;
    let completed = exec_fuel(&program.body, &mut s, &mut remaining)?;
    Ok(FuelResult {
        completed,
        store: s,
    })
}

fn exec_fuel(c: &Com, s: &mut Store, fuel: &mut u64) -> Result<bool, EvalError> {
    match c {
        Com::Skip => Ok(true),
        Com::Assign(x, e) => {
            let v = eval_exp(s, e)?;
            if !s.set(x, v) {
                return Err(EvalError::UndeclaredVariable(x.clone()));
            }
            Ok(true)
        }
        Com::Seq(a, b) => {
            if exec_fuel(a, s, fuel)? {
                exec_fuel(b, s, fuel)
            } else {
                Ok(false)
            }
        }
        Com::If(g, t, f) => {
            if eval_exp(s, g)? == 0 {
                exec_fuel(t, s, fuel)
            } else {
                exec_fuel(f, s, fuel)
            }
        }
        Com::While(g, body, _) => {
            while eval_exp(s, g)? != 0 {
                if *fuel == 0 {
                    return Ok(false);
                }
                *fuel -= 1;
                if !exec_fuel(body, s, fuel)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}
