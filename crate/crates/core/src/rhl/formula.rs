//! Relational assertions over pairs of stores.
//!
//! A [`RelExp`] reads one side of a store pair (`L(x)` or `R(x)`); a
//! [`RelFormula`] is a boolean combination of comparisons between such
//! expressions. Formulas interpret the pre- and postconditions of
//! relational judgements.

use std::fmt;

use crate::lang::{BinOp, EvalError, Exp, Store};

/// Which of the two related runs an expression reads from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn tag(self) -> &'static str {
        match self {
            Side::Left => "L",
            Side::Right => "R",
        }
    }
}

/// Integer expressions over a pair of stores.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RelExp {
    Const(i64),
    Var(Side, String),
    Arith(BinOp, Box<RelExp>, Box<RelExp>),
}

impl RelExp {
    pub fn var(side: Side, name: impl Into<String>) -> RelExp {
        RelExp::Var(side, name.into())
    }

    pub fn bin(op: BinOp, l: RelExp, r: RelExp) -> RelExp {
        RelExp::Arith(op, Box::new(l), Box::new(r))
    }

    /// Embeds a one-sided object-language expression.
    pub fn embed(side: Side, e: &Exp) -> RelExp {
        match e {
            Exp::IntLit(v) => RelExp::Const(*v),
            Exp::Var(x) => RelExp::Var(side, x.clone()),
            Exp::BinOp(op, l, r) => {
                RelExp::bin(*op, RelExp::embed(side, l), RelExp::embed(side, r))
            }
        }
    }

    pub fn eval(&self, left: &Store, right: &Store) -> Result<i64, EvalError> {
        match self {
            RelExp::Const(v) => Ok(*v),
            RelExp::Var(side, x) => {
                let store = match side {
                    Side::Left => left,
                    Side::Right => right,
                };
                store
                    .get(x)
                    .ok_or_else(|| EvalError::UndeclaredVariable(format!("{}({x})", side.tag())))
            }
            RelExp::Arith(op, l, r) => {
                let a = l.eval(left, right)?;
                let b = r.eval(left, right)?;
                let out = match op {
                    BinOp::Add => a.checked_add(b),
                    BinOp::Sub => a.checked_sub(b),
                    BinOp::Mul => a.checked_mul(b),
                    BinOp::Lt => Some(i64::from(a < b)),
                };
                out.ok_or_else(|| EvalError::ArithmeticOverflow(self.to_string()))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
        }
    }
}

/// Relational formulas over store pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RelFormula {
    True,
    And(Box<RelFormula>, Box<RelFormula>),
    Or(Box<RelFormula>, Box<RelFormula>),
    Not(Box<RelFormula>),
    Cmp(CmpOp, RelExp, RelExp),
}

impl RelFormula {
    pub fn and(l: RelFormula, r: RelFormula) -> RelFormula {
        RelFormula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: RelFormula, r: RelFormula) -> RelFormula {
        RelFormula::Or(Box::new(l), Box::new(r))
    }

    pub fn not(f: RelFormula) -> RelFormula {
        RelFormula::Not(Box::new(f))
    }

    pub fn cmp(op: CmpOp, l: RelExp, r: RelExp) -> RelFormula {
        RelFormula::Cmp(op, l, r)
    }

    /// Conjunction of a list, `True` when empty.
    pub fn and_all(fs: Vec<RelFormula>) -> RelFormula {
        let mut it = fs.into_iter();
        match it.next() {
            None => RelFormula::True,
            Some(first) => it.fold(first, RelFormula::and),
        }
    }

    /// `iff(a, b)` as a boolean combination.
    pub fn iff(a: RelFormula, b: RelFormula) -> RelFormula {
        RelFormula::or(
            RelFormula::and(a.clone(), b.clone()),
            RelFormula::and(RelFormula::not(a), RelFormula::not(b)),
        )
    }

    /// The formula "the guard `e` is true (nonzero) on `side`".
    pub fn guard_true(side: Side, e: &Exp) -> RelFormula {
        RelFormula::cmp(CmpOp::Ne, RelExp::embed(side, e), RelExp::Const(0))
    }

    /// The formula "the guard `e` is false (zero) on `side`".
    pub fn guard_false(side: Side, e: &Exp) -> RelFormula {
        RelFormula::cmp(CmpOp::Eq, RelExp::embed(side, e), RelExp::Const(0))
    }

    pub fn eval(&self, left: &Store, right: &Store) -> Result<bool, EvalError> {
        match self {
            RelFormula::True => Ok(true),
            RelFormula::And(a, b) => Ok(a.eval(left, right)? && b.eval(left, right)?),
            RelFormula::Or(a, b) => Ok(a.eval(left, right)? || b.eval(left, right)?),
            RelFormula::Not(f) => Ok(!f.eval(left, right)?),
            RelFormula::Cmp(op, l, r) => {
                let a = l.eval(left, right)?;
                let b = r.eval(left, right)?;
                Ok(match op {
                    CmpOp::Eq => a == b,
                    CmpOp::Ne => a != b,
                    CmpOp::Lt => a < b,
                    CmpOp::Le => a <= b,
                })
            }
        }
    }
}

impl fmt::Display for RelExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelExp::Const(v) => write!(f, "{v}"),
            RelExp::Var(side, x) => write!(f, "({} {x})", side.tag()),
            RelExp::Arith(op, l, r) => write!(f, "({} {l} {r})", op.symbol()),
        }
    }
}

impl fmt::Display for RelFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelFormula::True => write!(f, "true"),
            RelFormula::And(a, b) => write!(f, "(and {a} {b})"),
            RelFormula::Or(a, b) => write!(f, "(or {a} {b})"),
            RelFormula::Not(x) => write!(f, "(not {x})"),
            RelFormula::Cmp(op, l, r) => write!(f, "({} {l} {r})", op.symbol()),
        }
    }
}
