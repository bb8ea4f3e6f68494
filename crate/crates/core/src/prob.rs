//! Probabilistic semantics over finite random tapes.
//!
//! A sampling program reads q-bit values left-to-right from a tape of
//! fixed size. Assuming the uniform distribution over tapes, the
//! unnormalized mass of an event is the exact count of tapes on which the
//! program's result satisfies it, and a probability is that count divided
//! by the tape count, kept as an exact rational. Everything here is exact
//! enumeration; there is no floating point.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;

use crate::exec::{self, ExecMode};
use crate::sexp::{parse_one, Sexp, SexpError};

/// Default cap on the number of tapes an enumeration may visit.
pub const DEFAULT_TAPE_BUDGET: u64 = 1 << 20;

/// A q-bit vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct BitVec {
    width: u8,
    value: u64,
}

impl BitVec {
    pub fn new(width: u8, value: u64) -> Result<BitVec, ProbError> {
        if width == 0 || width > 32 {
            return Err(ProbError::BadWidth(width));
        }
        if value >> width != 0 {
            return Err(ProbError::ValueTooWide { width, value });
        }
        Ok(BitVec { width, value })
    }

    pub fn zero(width: u8) -> BitVec {
        BitVec { width, value: 0 }
    }

    pub fn width(&self) -> u8 {
        self.width
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn xor(&self, other: &BitVec) -> Result<BitVec, ProbError> {
        if self.width != other.width {
            return Err(ProbError::WidthMismatch {
                left: self.width,
                right: other.width,
            });
        }
        Ok(BitVec {
            width: self.width,
            value: self.value ^ other.value,
        })
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:0width$b}", self.value, width = self.width as usize)
    }
}

/// A finite tape of equal-width bit vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tape {
    width: u8,
    cells: Vec<u64>,
}

impl Tape {
    pub fn new(width: u8, cells: Vec<u64>) -> Result<Tape, ProbError> {
        for &c in &cells {
            BitVec::new(width, c)?;
        }
        Ok(Tape { width, cells })
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn width(&self) -> u8 {
        self.width
    }

    pub fn cell(&self, i: usize) -> Option<BitVec> {
        self.cells.get(i).map(|&v| BitVec {
            width: self.width,
            value: v,
        })
    }

    /// The `idx`-th tape of size `s` over q-bit cells; cell 0 is the least
    /// significant digit of `idx` in base 2^q.
    pub fn from_index(q: u8, s: usize, idx: u64) -> Tape {
        let mask = (1u64 << q) - 1;
        let cells = (0..s).map(|i| (idx >> (i as u32 * q as u32)) & mask).collect();
        Tape { width: q, cells }
    }
}

impl fmt::Display for Tape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, &c) in self.cells.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// Expressions over sampled values, program parameters and constants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VecExp {
    Const(BitVec),
    Param(String),
    Var(String),
    Xor(Box<VecExp>, Box<VecExp>),
}

impl VecExp {
    pub fn xor(l: VecExp, r: VecExp) -> VecExp {
        VecExp::Xor(Box::new(l), Box::new(r))
    }
}

/// A sampling program: a chain of `sample` binders ending in a returned
/// vector expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RandProg {
    Sample { var: String, rest: Box<RandProg> },
    Return(VecExp),
}

impl RandProg {
    pub fn sample(var: impl Into<String>, rest: RandProg) -> RandProg {
        RandProg::Sample {
            var: var.into(),
            rest: Box::new(rest),
        }
    }

    /// Number of samples the program draws.
    pub fn sample_count(&self) -> usize {
        match self {
            RandProg::Sample { rest, .. } => 1 + rest.sample_count(),
            RandProg::Return(_) => 0,
        }
    }
}

/// One-time pad: `sample k; return (m xor k)` with `m` a parameter.
pub fn otp_prog() -> RandProg {
    RandProg::sample(
        "k",
        RandProg::Return(VecExp::xor(
            VecExp::Param("m".to_string()),
            VecExp::Var("k".to_string()),
        )),
    )
}

/// Result of running a sampling program on one tape: the returned value,
/// absent when a sample ran past the end of the tape, plus the final tape
/// position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandResult {
    pub result: Option<BitVec>,
    pub next: usize,
}

pub type Params = BTreeMap<String, BitVec>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProbError {
    #[error("bit width {0} out of range (1..=32)")]
    BadWidth(u8),
    #[error("value {value} does not fit in {width} bits")]
    ValueTooWide { width: u8, value: u64 },
    #[error("width mismatch: {left} vs {right} bits")]
    WidthMismatch { left: u8, right: u8 },
    #[error("unbound name `{0}` in sampling program")]
    Unbound(String),
    #[error("enumerating {needed} tapes exceeds the cap of {budget} (raise the cap to override)")]
    BudgetExceeded { needed: u64, budget: u64 },
    #[error("bad sampling program: {0}")]
    BadProgram(String),
    #[error(transparent)]
    Sexp(#[from] SexpError),
}

fn eval_vecexp(
    e: &VecExp,
    params: &Params,
    bound: &BTreeMap<String, BitVec>,
    width: u8,
) -> Result<BitVec, ProbError> {
    match e {
        VecExp::Const(v) => {
            if v.width() != width {
                return Err(ProbError::WidthMismatch {
                    left: v.width(),
                    right: width,
                });
            }
            Ok(*v)
        }
        VecExp::Param(name) => {
            let v = params
                .get(name)
                .ok_or_else(|| ProbError::Unbound(name.clone()))?;
            if v.width() != width {
                return Err(ProbError::WidthMismatch {
                    left: v.width(),
                    right: width,
                });
            }
            Ok(*v)
        }
        VecExp::Var(name) => bound
            .get(name)
            .copied()
            .ok_or_else(|| ProbError::Unbound(name.clone())),
        VecExp::Xor(l, r) => eval_vecexp(l, params, bound, width)?
            .xor(&eval_vecexp(r, params, bound, width)?),
    }
}

/// Runs a sampling program deterministically against a tape, consuming one
/// cell per `sample` from position 0.
pub fn run_rand(p: &RandProg, params: &Params, tape: &Tape) -> Result<RandResult, ProbError> {
    let mut bound: BTreeMap<String, BitVec> = BTreeMap::new();
    let mut pos = 0usize;
    let mut cur = p;
    loop {
        match cur {
            RandProg::Sample { var, rest } => match tape.cell(pos) {
                Some(v) => {
                    bound.insert(var.clone(), v);
                    pos += 1;
                    cur = rest;
                }
                None => {
                    return Ok(RandResult {
                        result: None,
                        next: pos,
                    })
                }
            },
            RandProg::Return(e) => {
                let v = eval_vecexp(e, params, &bound, tape.width())?;
                return Ok(RandResult {
                    result: Some(v),
                    next: pos,
                });
            }
        }
    }
}

fn tape_count(q: u8, s: usize) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..s {
        acc = acc.checked_mul(1u64 << q)?;
    }
    Some(acc)
}

fn charge(q: u8, s: usize, budget: u64) -> Result<u64, ProbError> {
    match tape_count(q, s) {
        Some(n) if n <= budget => Ok(n),
        Some(n) => Err(ProbError::BudgetExceeded { needed: n, budget }),
        None => Err(ProbError::BudgetExceeded {
            needed: u64::MAX,
            budget,
        }),
    }
}

/// Exact unnormalized mass: the sum of `pred` over the results of `p` on
/// every tape of size `s` over q-bit cells.
pub fn mass(
    p: &RandProg,
    params: &Params,
    pred: &(dyn Fn(Option<&BitVec>) -> u64 + Sync),
    q: u8,
    s: usize,
    budget: u64,
) -> Result<u64, ProbError> {
    mass_with_mode(p, params, pred, q, s, budget, ExecMode::Auto)
}

pub fn mass_with_mode(
    p: &RandProg,
    params: &Params,
    pred: &(dyn Fn(Option<&BitVec>) -> u64 + Sync),
    q: u8,
    s: usize,
    budget: u64,
    mode: ExecMode,
) -> Result<u64, ProbError> {
    BitVec::new(q, 0)?;
    let n = charge(q, s, budget)?;
    // validate names and widths once; per-tape runs are then infallible
    run_rand(p, params, &Tape::from_index(q, s, 0))?;
    Ok(exec::sum(mode, n, |idx| {
        let t = Tape::from_index(q, s, idx);
        let r = run_rand(p, params, &t).expect("validated up front");
        pred(r.result.as_ref())
    }))
}

/// The indicator event "the program returned exactly `v`".
pub fn point(v: BitVec) -> impl Fn(Option<&BitVec>) -> u64 + Sync {
    move |r| u64::from(r == Some(&v))
}

/// Exact probability: `mass / (2^q)^s`.
pub fn pr(
    p: &RandProg,
    params: &Params,
    pred: &(dyn Fn(Option<&BitVec>) -> u64 + Sync),
    q: u8,
    s: usize,
    budget: u64,
) -> Result<Ratio<u64>, ProbError> {
    let m = mass(p, params, pred, q, s, budget)?;
    let total = tape_count(q, s).expect("charged");
    Ok(Ratio::new(m, total))
}

/// A tape-to-tape bijection given by per-cell xor offsets (self-inverse,
/// hence bijective by construction).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TapeBijection {
    offsets: Vec<BitVec>,
}

impl TapeBijection {
    pub fn new(offsets: Vec<BitVec>) -> Result<TapeBijection, ProbError> {
        if let Some(first) = offsets.first() {
            for o in &offsets {
                if o.width() != first.width() {
                    return Err(ProbError::WidthMismatch {
                        left: first.width(),
                        right: o.width(),
                    });
                }
            }
        }
        Ok(TapeBijection { offsets })
    }

    pub fn identity(q: u8, s: usize) -> TapeBijection {
        TapeBijection {
            offsets: vec![BitVec::zero(q); s],
        }
    }

    /// The one-time-pad bijection: offset `m0 ⊕ m1` on cell 0.
    pub fn otp(m0: BitVec, m1: BitVec, s: usize) -> Result<TapeBijection, ProbError> {
        let mut offsets = vec![BitVec::zero(m0.width()); s];
        if s == 0 {
            return Err(ProbError::BadProgram("tape size must be positive".into()));
        }
        offsets[0] = m0.xor(&m1)?;
        TapeBijection::new(offsets)
    }

    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }

    pub fn apply(&self, t: &Tape) -> Result<Tape, ProbError> {
        if t.len() != self.offsets.len() {
            return Err(ProbError::BadProgram(format!(
                "bijection over {} cells applied to a tape of {}",
                self.offsets.len(),
                t.len()
            )));
        }
        let mut cells = Vec::with_capacity(t.len());
        for (i, o) in self.offsets.iter().enumerate() {
            cells.push(t.cell(i).unwrap().xor(o)?.value());
        }
        Tape::new(t.width(), cells)
    }
}

/// Result of [`check_otp_secrecy`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OtpCheck {
    Pass {
        mass0: u64,
        mass1: u64,
        pr: Ratio<u64>,
    },
    Counterexample {
        mass0: u64,
        mass1: u64,
    },
}

/// One-time-pad perfect secrecy for a specific `(m0, m1, c)` triple: the
/// mass of returning `c` is the same whether `m0` or `m1` was encrypted.
pub fn check_otp_secrecy(
    q: u8,
    s: usize,
    m0: BitVec,
    m1: BitVec,
    c: BitVec,
    budget: u64,
) -> Result<OtpCheck, ProbError> {
    for v in [&m0, &m1, &c] {
        if v.width() != q {
            return Err(ProbError::WidthMismatch {
                left: v.width(),
                right: q,
            });
        }
    }
    let prog = otp_prog();
    let params0: Params = [("m".to_string(), m0)].into();
    let params1: Params = [("m".to_string(), m1)].into();
    let pred = point(c);
    let mass0 = mass(&prog, &params0, &pred, q, s, budget)?;
    let mass1 = mass(&prog, &params1, &pred, q, s, budget)?;
    if mass0 == mass1 {
        let total = tape_count(q, s).expect("charged");
        Ok(OtpCheck::Pass {
            mass0,
            mass1,
            pr: Ratio::new(mass0, total),
        })
    } else {
        Ok(OtpCheck::Counterexample { mass0, mass1 })
    }
}

/// Result of [`mass_leq_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MassLeqCheck {
    Pass { mass1: u64, mass2: u64 },
    Counterexample { tape: Tape, detail: String },
}

/// Checks the pointwise premise of the mass-inequality lemma: for every
/// tape `t`, `pred1(run p1 t) <= pred2(run p2 (bij t))`. On success the
/// conclusion `mass p1 pred1 <= mass p2 pred2` is recomputed directly as a
/// cross-check (it must hold, `bij` being a bijection).
#[allow(clippy::too_many_arguments)]
pub fn mass_leq_check(
    p1: &RandProg,
    p2: &RandProg,
    params: &Params,
    pred1: &(dyn Fn(Option<&BitVec>) -> u64 + Sync),
    pred2: &(dyn Fn(Option<&BitVec>) -> u64 + Sync),
    bij: &TapeBijection,
    q: u8,
    s: usize,
    budget: u64,
) -> Result<MassLeqCheck, ProbError> {
    if bij.len() != s {
        return Err(ProbError::BadProgram(format!(
            "bijection covers {} cells, tape size is {s}",
            bij.len()
        )));
    }
    let n = charge(q, s, budget)?;
    // validate names and widths once
    run_rand(p1, params, &Tape::from_index(q, s, 0))?;
    run_rand(p2, params, &bij.apply(&Tape::from_index(q, s, 0))?)?;
    let scan = exec::scan(ExecMode::Auto, n, |idx| {
        let t = Tape::from_index(q, s, idx);
        let mapped = bij.apply(&t).expect("validated up front");
        let r1 = run_rand(p1, params, &t).expect("validated up front");
        let r2 = run_rand(p2, params, &mapped).expect("validated up front");
        let v1 = pred1(r1.result.as_ref());
        let v2 = pred2(r2.result.as_ref());
        if v1 <= v2 {
            exec::Verdict::Pass
        } else {
            exec::Verdict::Fail::<_, (), ProbError>((
                t,
                format!("pointwise premise fails: {v1} > {v2} (image tape {mapped})"),
            ))
        }
    })?;
    if let Some((tape, detail)) = scan.first_fail {
        return Ok(MassLeqCheck::Counterexample { tape, detail });
    }
    let m1 = mass(p1, params, pred1, q, s, budget)?;
    let m2 = mass(p2, params, pred2, q, s, budget)?;
    assert!(
        m1 <= m2,
        "pointwise premise held but mass inequality failed ({m1} > {m2}); \
         the bijection cannot be a bijection"
    );
    Ok(MassLeqCheck::Pass {
        mass1: m1,
        mass2: m2,
    })
}

/// Parses the sampling-program file format, e.g.
/// `(sample k (return (xor (param m) (var k))))`.
pub fn parse_randprog(src: &str, q: u8) -> Result<RandProg, ProbError> {
    prog_from_sexp(&parse_one(src)?, q)
}

fn prog_from_sexp(e: &Sexp, q: u8) -> Result<RandProg, ProbError> {
    let items = e
        .list()
        .ok_or_else(|| ProbError::BadProgram("expected a list".into()))?;
    let head = items
        .first()
        .and_then(|h| h.atom())
        .ok_or_else(|| ProbError::BadProgram("expected (sample ...) or (return ...)".into()))?;
    match head {
        "sample" => {
            if items.len() != 3 {
                return Err(ProbError::BadProgram(
                    "(sample <var> <rest>) takes two arguments".into(),
                ));
            }
            let var = items[1]
                .atom()
                .ok_or_else(|| ProbError::BadProgram("sample needs a variable name".into()))?;
            Ok(RandProg::sample(var, prog_from_sexp(&items[2], q)?))
        }
        "return" => {
            if items.len() != 2 {
                return Err(ProbError::BadProgram("(return <exp>) takes one argument".into()));
            }
            Ok(RandProg::Return(vecexp_from_sexp(&items[1], q)?))
        }
        other => Err(ProbError::BadProgram(format!("unknown form `{other}`"))),
    }
}

fn vecexp_from_sexp(e: &Sexp, q: u8) -> Result<VecExp, ProbError> {
    if let Some(a) = e.atom() {
        let v: u64 = a
            .parse()
            .map_err(|_| ProbError::BadProgram(format!("expected integer, got `{a}`")))?;
        return Ok(VecExp::Const(BitVec::new(q, v)?));
    }
    let items = e
        .list()
        .ok_or_else(|| ProbError::BadProgram("bad vector expression".into()))?;
    let head = items
        .first()
        .and_then(|h| h.atom())
        .ok_or_else(|| ProbError::BadProgram("vector expression needs a head".into()))?;
    match head {
        "param" | "var" => {
            if items.len() != 2 {
                return Err(ProbError::BadProgram(format!("({head} <name>) takes one name")));
            }
            let name = items[1]
                .atom()
                .ok_or_else(|| ProbError::BadProgram(format!("({head} <name>) needs a name")))?;
            Ok(if head == "param" {
                VecExp::Param(name.to_string())
            } else {
                VecExp::Var(name.to_string())
            })
        }
        "xor" => {
            if items.len() != 3 {
                return Err(ProbError::BadProgram("(xor e e) takes two arguments".into()));
            }
            Ok(VecExp::xor(
                vecexp_from_sexp(&items[1], q)?,
                vecexp_from_sexp(&items[2], q)?,
            ))
        }
        other => Err(ProbError::BadProgram(format!("unknown expression `{other}`"))),
    }
}
