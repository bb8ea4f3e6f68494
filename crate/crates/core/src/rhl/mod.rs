//! Relational Hoare logic: assertions over store pairs, a bounded semantic
//! tester for judgements, and a proof checker for the Benton-style rules.

mod formula;
mod proof;
mod script;
mod semtest;

pub use formula::{CmpOp, RelExp, RelFormula, Side};
pub use proof::{
    check_proof, NodeReport, NodeStatus, ProofError, ProofNode, ProofReport, ProofScript,
    RuleName,
};
pub use script::{parse_formula, parse_proof_script, ScriptError};
pub use semtest::{
    semtest_judgement, semtest_judgement_with_mode, Judgement, RhlError, SemtestResult,
};
