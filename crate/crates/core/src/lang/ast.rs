//! Deep-embedded WHILE AST: expressions, commands, programs and stores.
//!
//! A [`Program`] declares a fixed, ordered set of integer variables and a
//! single command. Stores are total maps over exactly that variable set;
//! there is no allocation and no scoping beyond the declaration list.

use std::fmt;
use std::sync::Arc;

/// Binary operators on integers. `Lt` yields 1 for true and 0 for false.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Lt,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Lt => "lt",
        }
    }
}

/// Integer expressions. Expressions read the store but never modify it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Exp {
    IntLit(i64),
    Var(String),
    BinOp(BinOp, Box<Exp>, Box<Exp>),
}

impl Exp {
    pub fn var(name: impl Into<String>) -> Exp {
        Exp::Var(name.into())
    }

    pub fn lit(v: i64) -> Exp {
        Exp::IntLit(v)
    }

    pub fn bin(op: BinOp, l: Exp, r: Exp) -> Exp {
        Exp::BinOp(op, Box::new(l), Box::new(r))
    }

    pub fn add(l: Exp, r: Exp) -> Exp {
        Exp::bin(BinOp::Add, l, r)
    }

    pub fn sub(l: Exp, r: Exp) -> Exp {
        Exp::bin(BinOp::Sub, l, r)
    }

    pub fn mul(l: Exp, r: Exp) -> Exp {
        Exp::bin(BinOp::Mul, l, r)
    }

    pub fn lt(l: Exp, r: Exp) -> Exp {
        Exp::bin(BinOp::Lt, l, r)
    }

    /// Variables mentioned anywhere in the expression.
    pub fn vars(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Exp::IntLit(_) => {}
            Exp::Var(x) => {
                if !out.contains(&x.as_str()) {
                    out.push(x);
                }
            }
            Exp::BinOp(_, l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }
}

/// Commands. `If` takes the then-branch when the guard evaluates to 0;
/// `While` iterates while the guard is nonzero. The optional `decr`
/// expression is the termination metric used by the metric-mode interpreter
/// and ignored in fuel mode.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Com {
    Skip,
    Assign(String, Exp),
    Seq(Box<Com>, Box<Com>),
    If(Exp, Box<Com>, Box<Com>),
    While(Exp, Box<Com>, Option<Exp>),
}

impl Com {
    pub fn assign(target: impl Into<String>, rhs: Exp) -> Com {
        Com::Assign(target.into(), rhs)
    }

    pub fn seq(first: Com, second: Com) -> Com {
        Com::Seq(Box::new(first), Box::new(second))
    }

    /// Left-associated sequence of a nonempty statement list.
    pub fn seq_all(mut coms: Vec<Com>) -> Com {
        let mut acc = coms.remove(0);
        for c in coms {
            acc = Com::seq(acc, c);
        }
        acc
    }

    pub fn if_zero(guard: Exp, then_branch: Com, else_branch: Com) -> Com {
        Com::If(guard, Box::new(then_branch), Box::new(else_branch))
    }

    pub fn while_nonzero(guard: Exp, body: Com, metric: Option<Exp>) -> Com {
        Com::While(guard, Box::new(body), metric)
    }

    /// Variables read or written anywhere in the command.
    pub fn vars(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars<'a>(&'a self, out: &mut Vec<&'a str>) {
        let mut push = |name: &'a str| {
            if !out.contains(&name) {
                out.push(name);
            }
        };
        match self {
            Com::Skip => {}
            Com::Assign(x, e) => {
                push(x);
                for v in e.vars() {
                    if !out.contains(&v) {
                        out.push(v);
                    }
                }
            }
            Com::Seq(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Com::If(g, t, f) => {
                for v in g.vars() {
                    if !out.contains(&v) {
                        out.push(v);
                    }
                }
                t.collect_vars(out);
                f.collect_vars(out);
            }
            Com::While(g, body, metric) => {
                for v in g.vars() {
                    if !out.contains(&v) {
                        out.push(v);
                    }
                }
                body.collect_vars(out);
                if let Some(m) = metric {
                    for v in m.vars() {
                        if !out.contains(&v) {
                            out.push(v);
                        }
                    }
                }
            }
        }
    }

    /// True when every loop in the command carries a metric expression.
    pub fn all_loops_have_metrics(&self) -> bool {
        match self {
            Com::Skip | Com::Assign(..) => true,
            Com::Seq(a, b) => a.all_loops_have_metrics() && b.all_loops_have_metrics(),
            Com::If(_, t, f) => t.all_loops_have_metrics() && f.all_loops_have_metrics(),
            Com::While(_, body, metric) => metric.is_some() && body.all_loops_have_metrics(),
        }
    }
}

/// The ordered, duplicate-free list of variables a program declares.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarSet {
    names: Vec<String>,
}

impl VarSet {
    /// Builds a variable set, rejecting duplicates.
    pub fn new(names: Vec<String>) -> Result<VarSet, String> {
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(n.clone());
            }
        }
        Ok(VarSet { names })
    }

    pub fn from_names(names: &[&str]) -> VarSet {
        VarSet::new(names.iter().map(|s| s.to_string()).collect())
            .expect("duplicate variable name")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index_of(name).is_some()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.names.iter().map(|s| s.as_str())
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.names[idx]
    }

    /// Same names, ignoring declaration order.
    pub fn same_names(&self, other: &VarSet) -> bool {
        self.len() == other.len() && self.names().all(|n| other.contains(n))
    }
}

/// A WHILE program: declared variables plus a body command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    pub vars: Arc<VarSet>,
    pub body: Com,
}

impl Program {
    /// Builds a program, checking that every identifier in the body is declared.
    pub fn new(vars: VarSet, body: Com) -> Result<Program, String> {
        for v in body.vars() {
            if !vars.contains(v) {
                return Err(v.to_string());
            }
        }
        Ok(Program {
            vars: Arc::new(vars),
            body,
        })
    }

    /// A program over the same variables with a different body.
    pub fn with_body(&self, body: Com) -> Result<Program, String> {
        for v in body.vars() {
            if !self.vars.contains(v) {
                return Err(v.to_string());
            }
        }
        Ok(Program {
            vars: Arc::clone(&self.vars),
            body,
        })
    }
}

/// A total store over a program's declared variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Store {
    vars: Arc<VarSet>,
    values: Vec<i64>,
}

impl Store {
    pub fn zeroed(vars: Arc<VarSet>) -> Store {
        let n = vars.len();
        Store {
            vars,
            values: vec![0; n],
        }
    }

    pub fn from_values(vars: Arc<VarSet>, values: Vec<i64>) -> Store {
        assert_eq!(vars.len(), values.len(), "store/domain size mismatch");
        Store { vars, values }
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    pub fn get(&self, name: &str) -> Option<i64> {
        self.vars.index_of(name).map(|i| self.values[i])
    }

    pub fn get_idx(&self, idx: usize) -> i64 {
        self.values[idx]
    }

    pub fn set(&mut self, name: &str, v: i64) -> bool {
        match self.vars.index_of(name) {
            Some(i) => {
                self.values[i] = v;
                true
            }
            None => false,
        }
    }

    pub fn set_idx(&mut self, idx: usize, v: i64) {
        self.values[idx] = v;
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    /// Iterates `(name, value)` pairs in declaration order.
    pub fn entries(&self) -> impl Iterator<Item = (&str, i64)> {
        self.vars
            .names
            .iter()
            .map(|s| s.as_str())
            .zip(self.values.iter().copied())
    }
}

impl fmt::Display for Store {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (name, v) in self.entries() {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{name}={v}")?;
            first = false;
        }
        Ok(())
    }
}

fn exp_prec(e: &Exp) -> u8 {
    match e {
        Exp::IntLit(_) | Exp::Var(_) => 3,
        Exp::BinOp(BinOp::Lt, _, _) => 3,
        Exp::BinOp(BinOp::Mul, _, _) => 2,
        Exp::BinOp(BinOp::Add | BinOp::Sub, _, _) => 1,
    }
}

fn fmt_exp(e: &Exp, min_prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let prec = exp_prec(e);
    let parens = prec < min_prec;
    if parens {
        write!(f, "(")?;
    }
    match e {
        Exp::IntLit(v) => write!(f, "{v}")?,
        Exp::Var(x) => write!(f, "{x}")?,
        Exp::BinOp(BinOp::Lt, l, r) => {
            write!(f, "lt(")?;
            fmt_exp(l, 0, f)?;
            write!(f, ",")?;
            fmt_exp(r, 0, f)?;
            write!(f, ")")?;
        }
        Exp::BinOp(op, l, r) => {
            // left-associative: the right operand needs strictly higher precedence
            fmt_exp(l, prec, f)?;
            write!(f, " {} ", op.symbol())?;
            fmt_exp(r, prec + 1, f)?;
        }
    }
    if parens {
        write!(f, ")")?;
    }
    Ok(())
}

impl fmt::Display for Exp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_exp(self, 0, f)
    }
}

impl fmt::Display for Com {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Com::Skip => write!(f, "skip"),
            Com::Assign(x, e) => write!(f, "{x} := {e}"),
            Com::Seq(a, b) => write!(f, "{a}; {b}"),
            Com::If(g, t, e) => write!(f, "if ({g} == 0) {{ {t} }} else {{ {e} }}"),
            Com::While(g, body, metric) => {
                write!(f, "while ({g} != 0)")?;
                if let Some(m) = metric {
                    write!(f, " decr {m}")?;
                }
                write!(f, " {{ {body} }}")
            }
        }
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "vars ")?;
        let mut first = true;
        for n in self.vars.names() {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
            first = false;
        }
        write!(f, "; {}", self.body)
    }
}
