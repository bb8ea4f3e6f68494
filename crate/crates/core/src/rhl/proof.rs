//! A syntax-directed checker for relational-Hoare-logic proof trees.
//!
//! Each node claims a judgement and names the rule that derives it. Side
//! conditions are discharged semantically: the checker enumerates store
//! pairs over the test domain, executes the commands involved, and checks
//! the formulas, so every accepted node is bounded evidence over the
//! domain rather than a proof.
//!
//! Rule-determined formulas (`RWhile`, `DeadWhileL/R`) and parent-imposed
//! premise formulas may be omitted from a node and are filled in by the
//! checker; where a node states its own formulas they must be semantically
//! equivalent (over the domain) to what the rule or parent requires.
//! Weakening is not fused into premise edges: it only happens through an
//! explicit `RConseq` node, whose premise must state its own formulas.
//!
//! The skip-elimination rules accept either orientation of the structural
//! equation `skip; c = c = c; skip` (the premise or the conclusion may
//! carry the `skip`), since the equation is symmetric.

use std::fmt;
use std::sync::Arc;

use crate::domain::TestDomain;
use crate::exec::{self, ExecMode, Verdict};
use crate::lang::{eval_exp, Com, EvalError, Exp, Program, Store, VarSet};

use super::formula::{RelFormula, Side};
use super::semtest::{semtest_judgement, Judgement, RhlError, SemtestResult};

/// The thirteen rules the checker understands. Benton's remaining
/// equations are reachable only through the `Semantic` escape rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleName {
    RSkip,
    RAssign,
    RSeq,
    RIf,
    RWhile,
    RConseq,
    DeadAssignL,
    DeadAssignR,
    DeadWhileL,
    DeadWhileR,
    SkipElimL,
    SkipElimR,
    Semantic,
}

impl RuleName {
    pub fn name(self) -> &'static str {
        match self {
            RuleName::RSkip => "rskip",
            RuleName::RAssign => "rassign",
            RuleName::RSeq => "rseq",
            RuleName::RIf => "rif",
            RuleName::RWhile => "rwhile",
            RuleName::RConseq => "rconseq",
            RuleName::DeadAssignL => "deadassignl",
            RuleName::DeadAssignR => "deadassignr",
            RuleName::DeadWhileL => "deadwhilel",
            RuleName::DeadWhileR => "deadwhiler",
            RuleName::SkipElimL => "skipeliml",
            RuleName::SkipElimR => "skipelimr",
            RuleName::Semantic => "semantic",
        }
    }

    pub fn from_name(s: &str) -> Option<RuleName> {
        Some(match s {
            "rskip" => RuleName::RSkip,
            "rassign" => RuleName::RAssign,
            "rseq" => RuleName::RSeq,
            "rif" => RuleName::RIf,
            "rwhile" => RuleName::RWhile,
            "rconseq" => RuleName::RConseq,
            "deadassignl" => RuleName::DeadAssignL,
            "deadassignr" => RuleName::DeadAssignR,
            "deadwhilel" => RuleName::DeadWhileL,
            "deadwhiler" => RuleName::DeadWhileR,
            "skipeliml" => RuleName::SkipElimL,
            "skipelimr" => RuleName::SkipElimR,
            "semantic" => RuleName::Semantic,
            _ => return None,
        })
    }

    pub const ALL: [RuleName; 13] = [
        RuleName::RSkip,
        RuleName::RAssign,
        RuleName::RSeq,
        RuleName::RIf,
        RuleName::RWhile,
        RuleName::RConseq,
        RuleName::DeadAssignL,
        RuleName::DeadAssignR,
        RuleName::DeadWhileL,
        RuleName::DeadWhileR,
        RuleName::SkipElimL,
        RuleName::SkipElimR,
        RuleName::Semantic,
    ];
}

impl fmt::Display for RuleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// An unchecked proof-tree node. Commands and formulas omitted here are
/// inherited from the parent rule's requirements or from the node's own
/// rule where it determines them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofNode {
    pub rule: RuleName,
    pub left: Option<Com>,
    pub right: Option<Com>,
    pub pre: Option<RelFormula>,
    pub post: Option<RelFormula>,
    /// Intermediate formula for `RSeq`.
    pub mid: Option<RelFormula>,
    /// Loop invariant for `RWhile` / `DeadWhileL/R`.
    pub phi: Option<RelFormula>,
    pub premises: Vec<ProofNode>,
}

impl ProofNode {
    pub fn leaf(rule: RuleName) -> ProofNode {
        ProofNode {
            rule,
            left: None,
            right: None,
            pre: None,
            post: None,
            mid: None,
            phi: None,
            premises: Vec::new(),
        }
    }
}

/// A proof script: one variable set shared by both sides, plus the tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofScript {
    pub vars: Arc<VarSet>,
    pub root: ProofNode,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProofError {
    #[error("malformed proof at node {path}: {message}")]
    Malformed { path: String, message: String },
    #[error(transparent)]
    Rhl(#[from] RhlError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeStatus {
    Ok,
    /// Checked, but with an inconclusive-termination warning.
    Warn,
    /// A side condition has a counterexample.
    Fail,
}

impl fmt::Display for NodeStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeStatus::Ok => write!(f, "ok"),
            NodeStatus::Warn => write!(f, "warn"),
            NodeStatus::Fail => write!(f, "fail"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeReport {
    pub path: String,
    pub rule: RuleName,
    pub summary: String,
    pub status: NodeStatus,
    pub findings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofReport {
    pub nodes: Vec<NodeReport>,
}

impl ProofReport {
    pub fn all_ok(&self) -> bool {
        self.nodes.iter().all(|n| n.status == NodeStatus::Ok)
    }

    pub fn any_fail(&self) -> bool {
        self.nodes.iter().any(|n| n.status == NodeStatus::Fail)
    }

    pub fn any_warn(&self) -> bool {
        self.nodes.iter().any(|n| n.status == NodeStatus::Warn)
    }
}

/// Checks a proof tree. Shape problems (wrong premise count, commands that
/// do not match the rule, missing formulas) raise [`ProofError::Malformed`];
/// side-condition counterexamples are recorded per node in the report.
pub fn check_proof(script: &ProofScript, d: &TestDomain) -> Result<ProofReport, ProofError> {
    let mut nodes = Vec::new();
    let mut ctx = Ctx {
        vars: Arc::clone(&script.vars),
        d: d.clone(),
    };
    ctx.check_node(&script.root, Requirement::none(), "1".to_string(), &mut nodes)?;
    Ok(ProofReport { nodes })
}

/// What a parent rule demands of a premise node. `None` fields are freely
/// chosen by the child (commands must then be explicit on the child).
struct Requirement {
    left: Option<Com>,
    right: Option<Com>,
    pre: Option<RelFormula>,
    post: Option<RelFormula>,
}

impl Requirement {
    fn none() -> Requirement {
        Requirement {
            left: None,
            right: None,
            pre: None,
            post: None,
        }
    }
}

struct Ctx {
    vars: Arc<VarSet>,
    d: TestDomain,
}

impl Ctx {
    fn malformed(&self, path: &str, message: impl Into<String>) -> ProofError {
        ProofError::Malformed {
            path: path.to_string(),
            message: message.into(),
        }
    }

    fn program(&self, com: &Com, path: &str) -> Result<Program, ProofError> {
        Program::new((*self.vars).clone(), com.clone())
            .map_err(|v| self.malformed(path, format!("command mentions undeclared variable `{v}`")))
    }

    /// Enumerates store pairs over the domain, reporting the first pair on
    /// which `trial` yields a violation message.
    fn pairs_check(
        &self,
        trial: impl Fn(&Store, &Store) -> Result<Option<String>, EvalError> + Sync,
    ) -> Result<Option<(Store, Store, String)>, RhlError> {
        let per_side = self.d.store_count(self.vars.len());
        let n = self
            .d
            .charge(per_side.and_then(|c| c.checked_mul(c)))?;
        let scan = exec::scan(ExecMode::Auto, n, |idx| {
            let (sl, sr) = self.d.store_pair_at(&self.vars, &self.vars, idx);
            match trial(&sl, &sr) {
                Err(e) => Verdict::Abort(RhlError::Eval(e)),
                Ok(None) => Verdict::Pass,
                Ok(Some(msg)) => Verdict::Fail::<_, (), _>((sl, sr, msg)),
            }
        })?;
        Ok(scan.first_fail)
    }

    /// `f ⇒ g` over all store pairs; returns the first violating pair.
    fn implication_gap(
        &self,
        f: &RelFormula,
        g: &RelFormula,
        what: &str,
    ) -> Result<Option<String>, RhlError> {
        let gap = self.pairs_check(|sl, sr| {
            Ok(if f.eval(sl, sr)? && !g.eval(sl, sr)? {
                Some(String::new())
            } else {
                None
            })
        })?;
        Ok(gap.map(|(sl, sr, _)| format!("{what} fails at [{sl}] / [{sr}]")))
    }

    /// `f ≡ g` over all store pairs.
    fn equivalence_gap(
        &self,
        f: &RelFormula,
        g: &RelFormula,
        what: &str,
    ) -> Result<Option<String>, RhlError> {
        if f == g {
            return Ok(None);
        }
        let gap = self.pairs_check(|sl, sr| {
            Ok(if f.eval(sl, sr)? != g.eval(sl, sr)? {
                Some(String::new())
            } else {
                None
            })
        })?;
        Ok(gap.map(|(sl, sr, _)| format!("{what} differ at [{sl}] / [{sr}]")))
    }

    fn check_node(
        &mut self,
        node: &ProofNode,
        required: Requirement,
        path: String,
        out: &mut Vec<NodeReport>,
    ) -> Result<Judgement, ProofError> {
        let left = self.resolve_com(node.left.as_ref(), required.left.as_ref(), "left", &path)?;
        let right =
            self.resolve_com(node.right.as_ref(), required.right.as_ref(), "right", &path)?;

        // Rule-determined formulas, where the rule fixes them.
        let determined = self.determined_formulas(node, &left, &right, &path)?;

        let pre = node
            .pre
            .clone()
            .or_else(|| determined.as_ref().map(|(p, _)| p.clone()))
            .or_else(|| required.pre.clone())
            .ok_or_else(|| self.malformed(&path, "no precondition given or inferable"))?;
        let post = node
            .post
            .clone()
            .or_else(|| determined.as_ref().map(|(_, q)| q.clone()))
            .or_else(|| required.post.clone())
            .ok_or_else(|| self.malformed(&path, "no postcondition given or inferable"))?;

        let judgement = Judgement {
            left: self.program(&left, &path)?,
            right: self.program(&right, &path)?,
            pre,
            post,
        };

        let mut findings: Vec<String> = Vec::new();

        // The claimed formulas must agree with what the parent requires and
        // with what the rule determines.
        if let Some(req_pre) = &required.pre {
            if let Some(msg) =
                self.equivalence_gap(&judgement.pre, req_pre, "claimed and required preconditions")?
            {
                findings.push(msg);
            }
        }
        if let Some(req_post) = &required.post {
            if let Some(msg) = self.equivalence_gap(
                &judgement.post,
                req_post,
                "claimed and required postconditions",
            )? {
                findings.push(msg);
            }
        }
        if let Some((det_pre, det_post)) = &determined {
            if let Some(msg) = self.equivalence_gap(
                &judgement.pre,
                det_pre,
                "claimed and rule-determined preconditions",
            )? {
                findings.push(msg);
            }
            if let Some(msg) = self.equivalence_gap(
                &judgement.post,
                det_post,
                "claimed and rule-determined postconditions",
            )? {
                findings.push(msg);
            }
        }

        // Reserve the slot so the report lists parents before children.
        let slot = out.len();
        out.push(NodeReport {
            path: path.clone(),
            rule: node.rule,
            summary: String::new(),
            status: NodeStatus::Ok,
            findings: Vec::new(),
        });

        let mut warned = false;
        self.apply_rule(node, &judgement, &path, &mut findings, &mut warned, out)?;

        let status = if findings.iter().any(|f| !f.starts_with("warning:")) {
            NodeStatus::Fail
        } else if warned || !findings.is_empty() {
            NodeStatus::Warn
        } else {
            NodeStatus::Ok
        };
        out[slot] = NodeReport {
            path,
            rule: node.rule,
            summary: format!(
                "{} ~ {} : {} => {}",
                judgement.left.body, judgement.right.body, judgement.pre, judgement.post
            ),
            status,
            findings,
        };
        Ok(judgement)
    }

    fn resolve_com(
        &self,
        explicit: Option<&Com>,
        required: Option<&Com>,
        side: &str,
        path: &str,
    ) -> Result<Com, ProofError> {
        match (explicit, required) {
            (Some(e), Some(r)) => {
                if e == r {
                    Ok(e.clone())
                } else {
                    Err(self.malformed(
                        path,
                        format!("{side} command `{e}` does not match the required `{r}`"),
                    ))
                }
            }
            (Some(e), None) => Ok(e.clone()),
            (None, Some(r)) => Ok(r.clone()),
            (None, None) => Err(self.malformed(path, format!("no {side} command given"))),
        }
    }

    /// For `RWhile` and `DeadWhileL/R`, the exact conclusion formulas the
    /// rule derives.
    fn determined_formulas(
        &self,
        node: &ProofNode,
        left: &Com,
        right: &Com,
        path: &str,
    ) -> Result<Option<(RelFormula, RelFormula)>, ProofError> {
        match node.rule {
            RuleName::RWhile => {
                let phi = node
                    .phi
                    .clone()
                    .ok_or_else(|| self.malformed(path, "rwhile needs :phi"))?;
                let (bl, _) = while_parts(left)
                    .ok_or_else(|| self.malformed(path, "rwhile: left must be a while loop"))?;
                let (br, _) = while_parts(right)
                    .ok_or_else(|| self.malformed(path, "rwhile: right must be a while loop"))?;
                let b_l = RelFormula::guard_true(Side::Left, bl);
                let b_r = RelFormula::guard_true(Side::Right, br);
                let pre = RelFormula::and(phi.clone(), RelFormula::iff(b_l.clone(), b_r.clone()));
                let post = RelFormula::and(phi, RelFormula::not(RelFormula::or(b_l, b_r)));
                Ok(Some((pre, post)))
            }
            RuleName::DeadWhileL => {
                let phi = node
                    .phi
                    .clone()
                    .ok_or_else(|| self.malformed(path, "deadwhilel needs :phi"))?;
                let (b, _) = while_parts(left)
                    .ok_or_else(|| self.malformed(path, "deadwhilel: left must be a while loop"))?;
                let f = RelFormula::and(phi, RelFormula::guard_false(Side::Left, b));
                Ok(Some((f.clone(), f)))
            }
            RuleName::DeadWhileR => {
                let phi = node
                    .phi
                    .clone()
                    .ok_or_else(|| self.malformed(path, "deadwhiler needs :phi"))?;
                let (b, _) = while_parts(right).ok_or_else(|| {
                    self.malformed(path, "deadwhiler: right must be a while loop")
                })?;
                let f = RelFormula::and(phi, RelFormula::guard_false(Side::Right, b));
                Ok(Some((f.clone(), f)))
            }
            _ => Ok(None),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn apply_rule(
        &mut self,
        node: &ProofNode,
        j: &Judgement,
        path: &str,
        findings: &mut Vec<String>,
        warned: &mut bool,
        out: &mut Vec<NodeReport>,
    ) -> Result<(), ProofError> {
        let expect_premises = |n: usize, me: &Ctx| -> Result<(), ProofError> {
            if node.premises.len() == n {
                Ok(())
            } else {
                Err(me.malformed(
                    path,
                    format!(
                        "{} takes {} premise(s), found {}",
                        node.rule,
                        n,
                        node.premises.len()
                    ),
                ))
            }
        };
        match node.rule {
            RuleName::RSkip => {
                expect_premises(0, self)?;
                if j.left.body != Com::Skip || j.right.body != Com::Skip {
                    return Err(self.malformed(path, "rskip: both commands must be skip"));
                }
                if let Some(msg) = self.implication_gap(&j.pre, &j.post, "pre => post")? {
                    findings.push(msg);
                }
            }
            RuleName::RAssign => {
                expect_premises(0, self)?;
                let (xl, el) = assign_parts(&j.left.body)
                    .ok_or_else(|| self.malformed(path, "rassign: left must be an assignment"))?;
                let (xr, er) = assign_parts(&j.right.body)
                    .ok_or_else(|| self.malformed(path, "rassign: right must be an assignment"))?;
                let gap = self.pairs_check(|sl, sr| {
                    if !j.pre.eval(sl, sr)? {
                        return Ok(None);
                    }
                    let sl2 = exec_assign(sl, xl, el)?;
                    let sr2 = exec_assign(sr, xr, er)?;
                    Ok(if j.post.eval(&sl2, &sr2)? {
                        None
                    } else {
                        Some("postcondition fails after the assignments".to_string())
                    })
                })?;
                if let Some((sl, sr, msg)) = gap {
                    findings.push(format!("{msg} from [{sl}] / [{sr}]"));
                }
            }
            RuleName::RSeq => {
                expect_premises(2, self)?;
                let mid = node
                    .mid
                    .clone()
                    .ok_or_else(|| self.malformed(path, "rseq needs :mid"))?;
                let (l1, l2) = seq_parts(&j.left.body)
                    .ok_or_else(|| self.malformed(path, "rseq: left must be a sequence"))?;
                let (r1, r2) = seq_parts(&j.right.body)
                    .ok_or_else(|| self.malformed(path, "rseq: right must be a sequence"))?;
                self.check_node(
                    &node.premises[0],
                    Requirement {
                        left: Some(l1.clone()),
                        right: Some(r1.clone()),
                        pre: Some(j.pre.clone()),
                        post: Some(mid.clone()),
                    },
                    format!("{path}.1"),
                    out,
                )?;
                self.check_node(
                    &node.premises[1],
                    Requirement {
                        left: Some(l2.clone()),
                        right: Some(r2.clone()),
                        pre: Some(mid),
                        post: Some(j.post.clone()),
                    },
                    format!("{path}.2"),
                    out,
                )?;
            }
            RuleName::RIf => {
                expect_premises(2, self)?;
                let (gl, tl, fl) = if_parts(&j.left.body)
                    .ok_or_else(|| self.malformed(path, "rif: left must be a conditional"))?;
                let (gr, tr, fr) = if_parts(&j.right.body)
                    .ok_or_else(|| self.malformed(path, "rif: right must be a conditional"))?;
                let gap = self.pairs_check(|sl, sr| {
                    if !j.pre.eval(sl, sr)? {
                        return Ok(None);
                    }
                    let a = eval_exp(sl, gl)? == 0;
                    let b = eval_exp(sr, gr)? == 0;
                    Ok(if a == b {
                        None
                    } else {
                        Some("guards disagree under the precondition".to_string())
                    })
                })?;
                if let Some((sl, sr, msg)) = gap {
                    findings.push(format!("{msg} at [{sl}] / [{sr}]"));
                }
                let both_zero = RelFormula::and(
                    j.pre.clone(),
                    RelFormula::and(
                        RelFormula::guard_false(Side::Left, gl),
                        RelFormula::guard_false(Side::Right, gr),
                    ),
                );
                let both_nonzero = RelFormula::and(
                    j.pre.clone(),
                    RelFormula::and(
                        RelFormula::guard_true(Side::Left, gl),
                        RelFormula::guard_true(Side::Right, gr),
                    ),
                );
                self.check_node(
                    &node.premises[0],
                    Requirement {
                        left: Some(tl.clone()),
                        right: Some(tr.clone()),
                        pre: Some(both_zero),
                        post: Some(j.post.clone()),
                    },
                    format!("{path}.1"),
                    out,
                )?;
                self.check_node(
                    &node.premises[1],
                    Requirement {
                        left: Some(fl.clone()),
                        right: Some(fr.clone()),
                        pre: Some(both_nonzero),
                        post: Some(j.post.clone()),
                    },
                    format!("{path}.2"),
                    out,
                )?;
            }
            RuleName::RWhile => {
                expect_premises(1, self)?;
                let phi = node.phi.clone().expect("checked in determined_formulas");
                let (bl, cl) = while_parts(&j.left.body).expect("checked");
                let (br, cr) = while_parts(&j.right.body).expect("checked");
                let b_l = RelFormula::guard_true(Side::Left, bl);
                let b_r = RelFormula::guard_true(Side::Right, br);
                let body_pre = RelFormula::and(phi.clone(), RelFormula::and(b_l.clone(), b_r.clone()));
                let body_post = RelFormula::and(phi, RelFormula::iff(b_l, b_r));
                self.check_node(
                    &node.premises[0],
                    Requirement {
                        left: Some(cl.clone()),
                        right: Some(cr.clone()),
                        pre: Some(body_pre),
                        post: Some(body_post),
                    },
                    format!("{path}.1"),
                    out,
                )?;
            }
            RuleName::RConseq => {
                expect_premises(1, self)?;
                let premise = &node.premises[0];
                if premise.pre.is_none() && !formulas_determined(premise.rule) {
                    return Err(self.malformed(
                        path,
                        "rconseq premise must state its own :pre (or use a rule that determines it)",
                    ));
                }
                if premise.post.is_none() && !formulas_determined(premise.rule) {
                    return Err(self.malformed(
                        path,
                        "rconseq premise must state its own :post (or use a rule that determines it)",
                    ));
                }
                let pj = self.check_node(
                    premise,
                    Requirement {
                        left: Some(j.left.body.clone()),
                        right: Some(j.right.body.clone()),
                        pre: None,
                        post: None,
                    },
                    format!("{path}.1"),
                    out,
                )?;
                if let Some(msg) =
                    self.implication_gap(&j.pre, &pj.pre, "pre => premise pre")?
                {
                    findings.push(msg);
                }
                if let Some(msg) =
                    self.implication_gap(&pj.post, &j.post, "premise post => post")?
                {
                    findings.push(msg);
                }
            }
            RuleName::DeadAssignL | RuleName::DeadAssignR => {
                expect_premises(0, self)?;
                let (assign_side, skip_side) = match node.rule {
                    RuleName::DeadAssignL => (&j.left.body, &j.right.body),
                    _ => (&j.right.body, &j.left.body),
                };
                let (x, e) = assign_parts(assign_side).ok_or_else(|| {
                    self.malformed(path, format!("{}: expected an assignment", node.rule))
                })?;
                if skip_side != &Com::Skip {
                    return Err(self.malformed(
                        path,
                        format!("{}: the other command must be skip", node.rule),
                    ));
                }
                let on_left = node.rule == RuleName::DeadAssignL;
                let gap = self.pairs_check(|sl, sr| {
                    if !j.pre.eval(sl, sr)? {
                        return Ok(None);
                    }
                    let (sl2, sr2) = if on_left {
                        (exec_assign(sl, x, e)?, sr.clone())
                    } else {
                        (sl.clone(), exec_assign(sr, x, e)?)
                    };
                    Ok(if j.post.eval(&sl2, &sr2)? {
                        None
                    } else {
                        Some("postcondition fails after the dead assignment".to_string())
                    })
                })?;
                if let Some((sl, sr, msg)) = gap {
                    findings.push(format!("{msg} from [{sl}] / [{sr}]"));
                }
            }
            RuleName::DeadWhileL | RuleName::DeadWhileR => {
                expect_premises(0, self)?;
                let (loop_side, skip_side) = match node.rule {
                    RuleName::DeadWhileL => (&j.left.body, &j.right.body),
                    _ => (&j.right.body, &j.left.body),
                };
                if while_parts(loop_side).is_none() {
                    return Err(
                        self.malformed(path, format!("{}: expected a while loop", node.rule))
                    );
                }
                if skip_side != &Com::Skip {
                    return Err(self.malformed(
                        path,
                        format!("{}: the other command must be skip", node.rule),
                    ));
                }
                // Conclusion formulas are rule-determined; their agreement
                // with the claimed judgement was already checked.
            }
            RuleName::SkipElimL | RuleName::SkipElimR => {
                expect_premises(1, self)?;
                let premise = &node.premises[0];
                let (conclusion_c, premise_explicit, side) = match node.rule {
                    RuleName::SkipElimL => (&j.left.body, premise.left.as_ref(), "left"),
                    _ => (&j.right.body, premise.right.as_ref(), "right"),
                };
                let premise_c = premise_explicit.ok_or_else(|| {
                    self.malformed(
                        path,
                        format!("{}: the premise must state its {side} command", node.rule),
                    )
                })?;
                if !skip_related(conclusion_c, premise_c) {
                    return Err(self.malformed(
                        path,
                        format!(
                            "{}: `{}` and `{}` do not differ by one skip in a sequence",
                            node.rule, conclusion_c, premise_c
                        ),
                    ));
                }
                let req = match node.rule {
                    RuleName::SkipElimL => Requirement {
                        left: Some(premise_c.clone()),
                        right: Some(j.right.body.clone()),
                        pre: Some(j.pre.clone()),
                        post: Some(j.post.clone()),
                    },
                    _ => Requirement {
                        left: Some(j.left.body.clone()),
                        right: Some(premise_c.clone()),
                        pre: Some(j.pre.clone()),
                        post: Some(j.post.clone()),
                    },
                };
                self.check_node(premise, req, format!("{path}.1"), out)?;
            }
            RuleName::Semantic => {
                expect_premises(0, self)?;
                match semtest_judgement(j, &self.d)? {
                    SemtestResult::Pass => {}
                    SemtestResult::Counterexample {
                        left,
                        right,
                        detail,
                    } => findings.push(format!(
                        "semantic test counterexample at [{left}] / [{right}]: {detail}"
                    )),
                    SemtestResult::InconclusiveTermination { left, right } => {
                        findings.push(format!(
                            "warning: termination mismatch within the fuel bound at [{left}] / [{right}]"
                        ));
                        *warned = true;
                    }
                }
            }
        }
        Ok(())
    }
}

fn formulas_determined(rule: RuleName) -> bool {
    matches!(
        rule,
        RuleName::RWhile | RuleName::DeadWhileL | RuleName::DeadWhileR
    )
}

fn assign_parts(c: &Com) -> Option<(&String, &Exp)> {
    match c {
        Com::Assign(x, e) => Some((x, e)),
        _ => None,
    }
}

fn seq_parts(c: &Com) -> Option<(&Com, &Com)> {
    match c {
        Com::Seq(a, b) => Some((a, b)),
        _ => None,
    }
}

fn if_parts(c: &Com) -> Option<(&Exp, &Com, &Com)> {
    match c {
        Com::If(g, t, f) => Some((g, t, f)),
        _ => None,
    }
}

fn while_parts(c: &Com) -> Option<(&Exp, &Com)> {
    match c {
        Com::While(g, body, _) => Some((g, body)),
        _ => None,
    }
}

/// True when one command is the other with a `skip` sequenced before or
/// after it (in either direction).
fn skip_related(a: &Com, b: &Com) -> bool {
    let adds_skip = |plain: &Com, seq: &Com| match seq {
        Com::Seq(x, y) => {
            (**x == Com::Skip && **y == *plain) || (**y == Com::Skip && **x == *plain)
        }
        _ => false,
    };
    adds_skip(a, b) || adds_skip(b, a)
}

fn exec_assign(s: &Store, x: &str, e: &Exp) -> Result<Store, EvalError> {
    let v = eval_exp(s, e)?;
    let mut s2 = s.clone();
    if !s2.set(x, v) {
        return Err(EvalError::UndeclaredVariable(x.to_string()));
    }
    Ok(s2)
}
