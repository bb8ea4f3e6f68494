//! Text format for proof scripts and relational formulas.
//!
//! A proof script is one s-expression:
//!
//! ```text
//! (proof :vars (I N X Y)
//!   (rwhile :phi (and (= (L I) (R I)) (= (L N) (R N)))
//!     :left "while (lt(I,N) != 0) { I := I + 1 }"
//!     :right "while (lt(I,N) != 0) { I := I + 1 }"
//!     (premise (rassign))))
//! ```
//!
//! Rule names are the lowercase [`RuleName`] spellings. Keyword arguments:
//! `:left`/`:right` hold command text, `:pre`/`:post`/`:mid`/`:phi` hold
//! formulas. Premises are `(premise <node>)` children. Formulas:
//!
//! ```text
//! f := true | (and f f ...) | (or f f ...) | (not f) | (iff f f)
//!    | (= e e) | (!= e e) | (< e e) | (<= e e)
//! e := <integer> | (L x) | (R x) | (+ e e) | (- e e) | (* e e) | (lt e e)
//! ```

use std::sync::Arc;

use crate::lang::{parse_com_with_vars, BinOp, VarSet};
use crate::sexp::{parse_one, Sexp, SexpError};

use super::formula::{CmpOp, RelExp, RelFormula, Side};
use super::proof::{ProofNode, ProofScript, RuleName};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScriptError {
    #[error(transparent)]
    Sexp(#[from] SexpError),
    #[error("script error: {0}")]
    Shape(String),
    #[error("bad command text `{text}`: {err}")]
    Command {
        text: String,
        err: crate::lang::ParseError,
    },
}

fn shape(msg: impl Into<String>) -> ScriptError {
    ScriptError::Shape(msg.into())
}

/// Parses a relational formula from source text.
pub fn parse_formula(src: &str, vars: &VarSet) -> Result<RelFormula, ScriptError> {
    formula_from_sexp(&parse_one(src)?, vars)
}

pub fn formula_from_sexp(e: &Sexp, vars: &VarSet) -> Result<RelFormula, ScriptError> {
    if let Some(a) = e.atom() {
        return match a {
            "true" => Ok(RelFormula::True),
            other => Err(shape(format!("unknown formula atom `{other}`"))),
        };
    }
    let items = e.list().ok_or_else(|| shape("formula must be an atom or list"))?;
    let head = items
        .first()
        .and_then(|h| h.atom())
        .ok_or_else(|| shape("formula list needs a head atom"))?;
    let args = &items[1..];
    match head {
        "and" | "or" => {
            if args.len() < 2 {
                return Err(shape(format!("({head} ...) needs at least two arguments")));
            }
            let parts: Result<Vec<RelFormula>, ScriptError> =
                args.iter().map(|a| formula_from_sexp(a, vars)).collect();
            let mut parts = parts?.into_iter();
            let first = parts.next().unwrap();
            Ok(parts.fold(first, |acc, f| {
                if head == "and" {
                    RelFormula::and(acc, f)
                } else {
                    RelFormula::or(acc, f)
                }
            }))
        }
        "not" => {
            if args.len() != 1 {
                return Err(shape("(not f) takes one argument"));
            }
            Ok(RelFormula::not(formula_from_sexp(&args[0], vars)?))
        }
        "iff" => {
            if args.len() != 2 {
                return Err(shape("(iff f g) takes two arguments"));
            }
            Ok(RelFormula::iff(
                formula_from_sexp(&args[0], vars)?,
                formula_from_sexp(&args[1], vars)?,
            ))
        }
        "=" | "!=" | "<" | "<=" => {
            if args.len() != 2 {
                return Err(shape(format!("({head} e e) takes two arguments")));
            }
            let op = match head {
                "=" => CmpOp::Eq,
                "!=" => CmpOp::Ne,
                "<" => CmpOp::Lt,
                _ => CmpOp::Le,
            };
            Ok(RelFormula::cmp(
                op,
                relexp_from_sexp(&args[0], vars)?,
                relexp_from_sexp(&args[1], vars)?,
            ))
        }
        other => Err(shape(format!("unknown formula head `{other}`"))),
    }
}

fn relexp_from_sexp(e: &Sexp, vars: &VarSet) -> Result<RelExp, ScriptError> {
    if let Some(a) = e.atom() {
        return a
            .parse::<i64>()
            .map(RelExp::Const)
            .map_err(|_| shape(format!("expected integer or (L x)/(R x), got `{a}`")));
    }
    let items = e.list().ok_or_else(|| shape("bad relational expression"))?;
    let head = items
        .first()
        .and_then(|h| h.atom())
        .ok_or_else(|| shape("relational expression needs a head atom"))?;
    let args = &items[1..];
    match head {
        "L" | "R" => {
            if args.len() != 1 {
                return Err(shape(format!("({head} x) takes one variable")));
            }
            let name = args[0]
                .atom()
                .ok_or_else(|| shape("side reference needs a variable name"))?;
            if !vars.contains(name) {
                return Err(shape(format!("undeclared variable `{name}` in formula")));
            }
            let side = if head == "L" { Side::Left } else { Side::Right };
            Ok(RelExp::var(side, name))
        }
        "+" | "-" | "*" | "lt" => {
            if args.len() != 2 {
                return Err(shape(format!("({head} e e) takes two arguments")));
            }
            let op = match head {
                "+" => BinOp::Add,
                "-" => BinOp::Sub,
                "*" => BinOp::Mul,
                _ => BinOp::Lt,
            };
            Ok(RelExp::bin(
                op,
                relexp_from_sexp(&args[0], vars)?,
                relexp_from_sexp(&args[1], vars)?,
            ))
        }
        other => Err(shape(format!("unknown expression head `{other}`"))),
    }
}

/// Parses a full proof script.
pub fn parse_proof_script(src: &str) -> Result<ProofScript, ScriptError> {
    let top = parse_one(src)?;
    let items = top
        .list()
        .ok_or_else(|| shape("expected (proof :vars (...) <node>)"))?;
    if items.first().and_then(|h| h.atom()) != Some("proof") {
        return Err(shape("expected the top-level form to be (proof ...)"));
    }
    let mut vars: Option<VarSet> = None;
    let mut node: Option<&Sexp> = None;
    let mut i = 1;
    while i < items.len() {
        match items[i].atom() {
            Some(":vars") => {
                let list = items
                    .get(i + 1)
                    .and_then(|v| v.list())
                    .ok_or_else(|| shape(":vars needs a list of names"))?;
                let names: Result<Vec<String>, ScriptError> = list
                    .iter()
                    .map(|v| {
                        v.atom()
                            .map(|s| s.to_string())
                            .ok_or_else(|| shape(":vars entries must be names"))
                    })
                    .collect();
                vars = Some(
                    VarSet::new(names?)
                        .map_err(|dup| shape(format!("duplicate variable `{dup}` in :vars")))?,
                );
                i += 2;
            }
            _ => {
                if node.is_some() {
                    return Err(shape("more than one root node in (proof ...)"));
                }
                node = Some(&items[i]);
                i += 1;
            }
        }
    }
    let vars = vars.ok_or_else(|| shape("missing :vars"))?;
    let node = node.ok_or_else(|| shape("missing root node"))?;
    let root = node_from_sexp(node, &vars)?;
    Ok(ProofScript {
        vars: Arc::new(vars),
        root,
    })
}

fn node_from_sexp(e: &Sexp, vars: &VarSet) -> Result<ProofNode, ScriptError> {
    let items = e.list().ok_or_else(|| shape("proof node must be a list"))?;
    let head = items
        .first()
        .and_then(|h| h.atom())
        .ok_or_else(|| shape("proof node needs a rule name"))?;
    let rule = RuleName::from_name(head)
        .ok_or_else(|| shape(format!("unknown rule `{head}`")))?;
    let mut node = ProofNode::leaf(rule);
    let mut i = 1;
    while i < items.len() {
        if let Some(kw) = items[i].atom().filter(|a| a.starts_with(':')) {
            let value = items
                .get(i + 1)
                .ok_or_else(|| shape(format!("{kw} needs a value")))?;
            match kw {
                ":left" | ":right" => {
                    let text = value
                        .text()
                        .ok_or_else(|| shape(format!("{kw} needs command text")))?;
                    let com = parse_com_with_vars(text, vars).map_err(|err| {
                        ScriptError::Command {
                            text: text.to_string(),
                            err,
                        }
                    })?;
                    if kw == ":left" {
                        node.left = Some(com);
                    } else {
                        node.right = Some(com);
                    }
                }
                ":pre" | ":post" | ":mid" | ":phi" => {
                    let f = formula_from_sexp(value, vars)?;
                    match kw {
                        ":pre" => node.pre = Some(f),
                        ":post" => node.post = Some(f),
                        ":mid" => node.mid = Some(f),
                        _ => node.phi = Some(f),
                    }
                }
                other => return Err(shape(format!("unknown keyword `{other}`"))),
            }
            i += 2;
        } else {
            let list = items[i]
                .list()
                .filter(|l| l.first().and_then(|h| h.atom()) == Some("premise"))
                .ok_or_else(|| shape("expected (premise <node>) or :keyword value"))?;
            if list.len() != 2 {
                return Err(shape("(premise ...) wraps exactly one node"));
            }
            node.premises.push(node_from_sexp(&list[1], vars)?);
            i += 1;
        }
    }
    Ok(node)
}
