//! The WHILE object language: AST, concrete syntax, and interpreters.

mod ast;
mod interp;
mod parser;

pub use ast::{BinOp, Com, Exp, Program, Store, VarSet};
pub use interp::{eval_exp, run_fuel, run_metric, EvalError, FuelResult, Outcome};
pub use parser::{
    parse_com_with_vars, parse_exp_with_vars, parse_program, parse_store_literal, ParseError,
    ParseErrorKind,
};
