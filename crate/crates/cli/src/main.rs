//! `relcheck` — command-line front end for the relational checking
//! workbench: program execution, equivalence and footprint validation,
//! relational-Hoare proof checking, information-flow checks, exact
//! tape-based probability, memoization and union-find refinements.
//!
//! Exit codes: 0 pass, 1 fail (counterexample/violation/type error),
//! 2 usage or input error, 3 inconclusive-only.

mod report;

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use relcheck_core::domain::TestDomain;
use relcheck_core::ifc::{
    delimited_release_check, monitor_run, ni_com_check, tc_com, tc_com_hybrid,
    Evidence as TrustEvidence, Label, LabelEnv, MonitorOutcome, NiComCheck, PairCheck,
    TrustedEntry,
};
use relcheck_core::lang::{
    parse_exp_with_vars, parse_program, parse_store_literal, run_fuel, run_metric, Exp, Outcome,
    Program,
};
use relcheck_core::memo::{
    builtin_skeleton, computes_check, fixp, memoize_rec, CallTrace, ComputesCheck, MemoState,
    StateSampler,
};
use relcheck_core::prob::{
    check_otp_secrecy, mass, parse_randprog, point, pr, BitVec, OtpCheck, Params,
    DEFAULT_TAPE_BUDGET,
};
use relcheck_core::relsem::{
    check_equiv, check_reads, check_transformation, check_writes, EquivCheck, Footprint,
    ReadsCheck, TransformCheck, TransformKind, WritesCheck,
};
use relcheck_core::rhl::{
    check_proof, parse_formula, parse_proof_script, semtest_judgement, Judgement, NodeStatus,
    SemtestResult,
};
use relcheck_core::unionfind::{
    find_compress_refinement_check, rank_independence_check, union_by_rank_refinement_check,
    GenParams, RefineCheck, UFForest,
};

use report::{emit_report, Evidence, Finding, Format, Report, Status};

#[derive(Parser)]
#[command(
    name = "relcheck",
    about = "Relational verification workbench for a small WHILE language",
    version
)]
struct CliArgs {
    /// Emit the machine-readable JSON report instead of human text.
    #[arg(long, global = true)]
    json: bool,

    /// Seed for randomized checks (echoed in the report).
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Enumeration budget: maximum configurations per invocation.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    budget: u64,

    /// Value domain for bounded checks: "LO..HI" (inclusive) or "a,b,c".
    #[arg(long, global = true, default_value = "0..2")]
    values: String,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a program on a store (metric mode, or fuel mode with --fuel).
    Run {
        file: PathBuf,
        /// Store literal, e.g. "x=1,y=2"; unmentioned variables are 0.
        #[arg(long, default_value = "")]
        store: String,
        /// Run in fuel mode with this budget instead of metric mode.
        #[arg(long)]
        fuel: Option<u64>,
    },
    /// Check two programs agree on every store over the value domain.
    Equiv { file1: PathBuf, file2: PathBuf },
    /// Validate a declared read/write footprint of a program.
    Footprint {
        file: PathBuf,
        /// Comma-separated read set (may be empty).
        #[arg(long, default_value = "")]
        reads: String,
        /// Comma-separated write set (may be empty).
        #[arg(long, default_value = "")]
        writes: String,
    },
    /// Validate a footprint-based transformation (swap, idem, redundant-writes).
    Transform {
        kind: String,
        file1: PathBuf,
        file2: Option<PathBuf>,
        /// Footprint of the first program as "reads/writes", e.g. "y/x".
        #[arg(long)]
        fp1: String,
        /// Footprint of the second program, where the kind takes one.
        #[arg(long)]
        fp2: Option<String>,
    },
    /// Relational Hoare logic.
    #[command(subcommand)]
    Rhl(RhlCommand),
    /// Information-flow control.
    #[command(subcommand)]
    Ifc(IfcCommand),
    /// Probabilistic tape semantics.
    #[command(subcommand)]
    Prob(ProbCommand),
    /// Memoization checks.
    #[command(subcommand)]
    Memo(MemoCommand),
    /// Union-find refinement checks.
    #[command(subcommand)]
    Unionfind(UnionfindCommand),
    /// Worked demonstrations.
    #[command(subcommand)]
    Demo(DemoCommand),
}

#[derive(Subcommand)]
enum RhlCommand {
    /// Check a proof script (s-expression file).
    Check {
        proof: PathBuf,
        #[arg(long, default_value_t = 8)]
        fuel: u64,
    },
    /// Semantically test a judgement over the value domain.
    Semtest {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        /// Precondition formula, e.g. "(= (L x) (R x))".
        #[arg(long)]
        pre: String,
        /// Postcondition formula.
        #[arg(long)]
        post: String,
        #[arg(long, default_value_t = 8)]
        fuel: u64,
    },
}

#[derive(Subcommand)]
enum IfcCommand {
    /// Static typecheck: greatest pc label or a type error.
    Check {
        file: PathBuf,
        /// Per-variable labels, e.g. "lo=Low,hi=High" (all variables).
        #[arg(long)]
        labels: String,
    },
    /// Semantic noninterference check at a pc level.
    Semcheck {
        file: PathBuf,
        #[arg(long)]
        labels: String,
        #[arg(long, default_value = "Low")]
        level: String,
    },
    /// Hybrid typecheck with trusted sub-commands: "file:Label[:checked]".
    Hybrid {
        file: PathBuf,
        #[arg(long)]
        labels: String,
        #[arg(long)]
        trusted: Vec<String>,
    },
    /// Run the dynamic monitor on one store.
    Monitor {
        file: PathBuf,
        #[arg(long)]
        labels: String,
        #[arg(long, default_value = "Low")]
        pc: String,
        #[arg(long, default_value = "")]
        store: String,
    },
    /// Delimited release: noninterference modulo declassified expressions.
    Declass {
        file: PathBuf,
        #[arg(long)]
        labels: String,
        /// Declassified expressions, e.g. --declass "lt(k,hi)".
        #[arg(long)]
        declass: Vec<String>,
    },
}

#[derive(Subcommand)]
enum ProbCommand {
    /// One-time-pad perfect secrecy.
    Otp {
        #[arg(long)]
        q: u8,
        /// Tape size.
        #[arg(long)]
        tape: usize,
        #[arg(long)]
        m0: Option<u64>,
        #[arg(long)]
        m1: Option<u64>,
        #[arg(long)]
        c: Option<u64>,
        /// Check every (m0, m1, c) triple exhaustively.
        #[arg(long)]
        all: bool,
    },
    /// Exact mass and probability of an event of a sampling program.
    Mass {
        #[arg(long)]
        prog: PathBuf,
        /// Event: "point:V" for the program returning exactly V.
        #[arg(long)]
        pred: String,
        #[arg(long)]
        q: u8,
        #[arg(long)]
        tape: usize,
        /// Parameters, e.g. --param m=3 (repeatable).
        #[arg(long)]
        param: Vec<String>,
    },
}

#[derive(Subcommand)]
enum MemoCommand {
    /// Check a memoized fixed point computes its reference.
    Computes {
        #[arg(long)]
        skeleton: String,
        #[arg(long, default_value_t = 15)]
        bound: u64,
        #[arg(long, default_value_t = 100)]
        trials: u64,
    },
}

#[derive(Subcommand)]
enum UnionfindCommand {
    /// Run one of the refinement checks.
    Refine {
        /// One of: rank, union-rank, compress.
        #[arg(long)]
        check: String,
        #[arg(long)]
        n: usize,
        /// Exhaustive over parent forests of bounded depth.
        #[arg(long)]
        exhaustive: bool,
        /// Depth bound for --exhaustive.
        #[arg(long, default_value_t = 2)]
        depth: usize,
        /// Randomized trials (ignored with --exhaustive).
        #[arg(long, default_value_t = 1000)]
        trials: u64,
    },
}

#[derive(Subcommand)]
enum DemoCommand {
    /// Memoized Fibonacci-style computation with its call trace.
    Memo(DemoMemoArgs),
    /// A random union-find workout with invariant checking.
    Unionfind {
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        ops: usize,
    },
}

#[derive(Args)]
struct DemoMemoArgs {
    #[arg(long, default_value = "fib")]
    skeleton: String,
    #[arg(long, default_value_t = 20)]
    x: u64,
}

/// Input or configuration problems; rendered to stderr with exit code 2.
#[derive(Debug)]
struct CliError(String);

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<E: std::error::Error> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError(e.to_string())
    }
}

fn err(msg: impl Into<String>) -> CliError {
    CliError(msg.into())
}

fn main() -> ExitCode {
    let args = CliArgs::parse();
    let format = if args.json {
        Format::Machine
    } else {
        Format::Human
    };
    let started = Instant::now();
    match dispatch(&args) {
        Ok(mut report) => {
            report.timing_millis = started.elapsed().as_millis() as u64;
            report.check_well_formed();
            print!("{}", emit_report(&report, format));
            if format == Format::Machine {
                println!();
            }
            ExitCode::from(report.status.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("relcheck: {e}");
            ExitCode::from(2)
        }
    }
}

fn parse_values(text: &str) -> Result<Vec<i64>, CliError> {
    let text = text.trim();
    if let Some((lo, hi)) = text.split_once("..") {
        let lo: i64 = lo
            .trim()
            .parse()
            .map_err(|_| err(format!("bad bound `{lo}`")))?;
        let hi: i64 = hi
            .trim()
            .parse()
            .map_err(|_| err(format!("bad bound `{hi}`")))?;
        if lo > hi {
            return Err(err(format!("empty range {lo}..{hi}")));
        }
        return Ok((lo..=hi).collect());
    }
    text.split(',')
        .map(|v| {
            v.trim()
                .parse()
                .map_err(|_| err(format!("bad value `{v}` in --values")))
        })
        .collect()
}

fn domain(args: &CliArgs) -> Result<TestDomain, CliError> {
    Ok(TestDomain::new(parse_values(&args.values)?)
        .map_err(|e| err(e.to_string()))?
        .with_budget(args.budget))
}

fn load_program(path: &PathBuf) -> Result<Program, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| err(format!("cannot read {}: {e}", path.display())))?;
    parse_program(&text).map_err(|e| err(format!("{}: {e}", path.display())))
}

fn parse_labels(text: &str, p: &Program) -> Result<LabelEnv, CliError> {
    let mut env = LabelEnv::new();
    for part in text.split(',').filter(|s| !s.trim().is_empty()) {
        let (name, label) = part
            .split_once('=')
            .ok_or_else(|| err(format!("expected name=Label in `{part}`")))?;
        let label = Label::parse(label.trim())
            .ok_or_else(|| err(format!("unknown label `{label}` (use Low or High)")))?;
        if !p.vars.contains(name.trim()) {
            return Err(err(format!("label for undeclared variable `{name}`")));
        }
        env.set(name.trim(), label);
    }
    for v in p.vars.names() {
        if env.get(v).is_none() {
            return Err(err(format!("variable `{v}` has no label (pass --labels)")));
        }
    }
    Ok(env)
}

fn parse_name_set(text: &str) -> BTreeSet<String> {
    text.split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

fn parse_footprint(text: &str) -> Result<Footprint, CliError> {
    let (reads, writes) = text
        .split_once('/')
        .ok_or_else(|| err(format!("footprint `{text}` must be \"reads/writes\"")))?;
    Ok(Footprint {
        reads: parse_name_set(reads),
        writes: parse_name_set(writes),
    })
}

fn exhaustive_evidence(d: &TestDomain, nvars: usize, sides: u32) -> Evidence {
    let per_side = d.store_count(nvars).unwrap_or(u64::MAX);
    Evidence::Exhaustive {
        domain: format!("{}^{}", d.describe(), nvars * sides as usize),
        configurations: per_side.saturating_pow(sides),
    }
}

fn store_finding(kind: &str, message: &str, pairs: &[(&str, String)]) -> Finding {
    let mut f = Finding::new(kind, message);
    for (k, v) in pairs {
        f = f.with(*k, v.clone());
    }
    f
}

fn dispatch(args: &CliArgs) -> Result<Report, CliError> {
    match &args.command {
        Command::Run { file, store, fuel } => {
            let p = load_program(file)?;
            let s = parse_store_literal(store, &p)?;
            let mut r = Report::new("run", Status::Pass, Evidence::Execution);
            match fuel {
                None => match run_metric(&p, &s)? {
                    Outcome::Normal(f) => {
                        r = r.finding(Finding::new("normal", format!("final store {f}")));
                    }
                    Outcome::OutOfFuel(f) => {
                        r = r.finding(Finding::new(
                            "out-of-fuel",
                            format!("metric check failed at store {f}"),
                        ));
                    }
                },
                Some(fuel) => {
                    let res = run_fuel(&p, &s, *fuel)?;
                    let kind = if res.completed {
                        "completed"
                    } else {
                        "incomplete"
                    };
                    r = r.finding(Finding::new(
                        kind,
                        format!("store {} after fuel {fuel}", res.store),
                    ));
                }
            }
            Ok(r)
        }

        Command::Equiv { file1, file2 } => {
            let p1 = load_program(file1)?;
            let p2 = load_program(file2)?;
            let d = domain(args)?;
            let evidence = exhaustive_evidence(&d, p1.vars.len(), 1);
            match check_equiv(&p1, &p2, &d)? {
                EquivCheck::Pass => Ok(Report::new("equiv", Status::Pass, evidence)),
                EquivCheck::Counterexample { store, detail } => {
                    Ok(Report::new("equiv", Status::Fail, evidence).finding(store_finding(
                        "counterexample",
                        &detail,
                        &[("store", store.to_string())],
                    )))
                }
            }
        }

        Command::Footprint {
            file,
            reads,
            writes,
        } => {
            let p = load_program(file)?;
            let d = domain(args)?;
            let reads = parse_name_set(reads);
            let writes = parse_name_set(writes);
            let evidence = exhaustive_evidence(&d, p.vars.len(), 2);
            match check_writes(&p, &writes, &d)? {
                WritesCheck::Pass => {}
                WritesCheck::Counterexample { store, var } => {
                    return Ok(Report::new("footprint", Status::Fail, evidence).finding(
                        store_finding(
                            "counterexample",
                            &format!("variable `{var}` outside the write set changes"),
                            &[("store", store.to_string()), ("var", var)],
                        ),
                    ));
                }
            }
            match check_reads(&p, &reads, &writes, &d)? {
                ReadsCheck::Pass => Ok(Report::new("footprint", Status::Pass, evidence)),
                ReadsCheck::Counterexample { s0, s1, var } => {
                    Ok(Report::new("footprint", Status::Fail, evidence).finding(store_finding(
                        "counterexample",
                        &format!("runs agreeing on the read set disagree at `{var}`"),
                        &[
                            ("s0", s0.to_string()),
                            ("s1", s1.to_string()),
                            ("var", var),
                        ],
                    )))
                }
            }
        }

        Command::Transform {
            kind,
            file1,
            file2,
            fp1,
            fp2,
        } => {
            let kind = match kind.as_str() {
                "swap" => TransformKind::Swap,
                "idem" => TransformKind::Idempotence,
                "redundant-writes" => TransformKind::RedundantWrites,
                other => return Err(err(format!("unknown transformation `{other}`"))),
            };
            let p1 = load_program(file1)?;
            let p2 = file2.as_ref().map(load_program).transpose()?;
            let fp1 = parse_footprint(fp1)?;
            let fp2 = fp2.as_deref().map(parse_footprint).transpose()?;
            let d = domain(args)?;
            let evidence = exhaustive_evidence(&d, p1.vars.len(), 2);
            let tool = format!("transform {}", kind.name());
            match check_transformation(kind, &p1, p2.as_ref(), &fp1, fp2.as_ref(), &d)? {
                TransformCheck::Pass => Ok(Report::new(tool, Status::Pass, evidence)),
                TransformCheck::PreconditionViolation { detail } => {
                    Ok(Report::new(tool, Status::Fail, evidence)
                        .finding(Finding::new("precondition-violation", detail)))
                }
                TransformCheck::Counterexample { store, detail } => {
                    Ok(Report::new(tool, Status::Fail, evidence).finding(store_finding(
                        "counterexample",
                        &detail,
                        &[("store", store.to_string())],
                    )))
                }
            }
        }

        Command::Rhl(RhlCommand::Check { proof, fuel }) => {
            let text = std::fs::read_to_string(proof)
                .map_err(|e| err(format!("cannot read {}: {e}", proof.display())))?;
            let script = parse_proof_script(&text)?;
            let d = domain(args)?.with_fuel(*fuel);
            let evidence = exhaustive_evidence(&d, script.vars.len(), 2);
            let report = check_proof(&script, &d)?;
            let mut out = Report::new("rhl check", Status::Pass, evidence);
            for node in &report.nodes {
                let kind = match node.status {
                    NodeStatus::Ok => "node-ok",
                    NodeStatus::Warn => "node-warning",
                    NodeStatus::Fail => "node-counterexample",
                };
                let mut f = Finding::new(
                    kind,
                    format!("{} {}: {}", node.path, node.rule, node.summary),
                );
                for (i, detail) in node.findings.iter().enumerate() {
                    f = f.with(format!("detail{i}"), detail.clone());
                }
                out = out.finding(f);
            }
            out.status = if report.any_fail() {
                Status::Fail
            } else if report.any_warn() {
                Status::Inconclusive
            } else {
                Status::Pass
            };
            Ok(out)
        }

        Command::Rhl(RhlCommand::Semtest {
            left,
            right,
            pre,
            post,
            fuel,
        }) => {
            let pl = load_program(left)?;
            let pr_right = load_program(right)?;
            let d = domain(args)?.with_fuel(*fuel);
            let evidence = Evidence::Exhaustive {
                domain: format!("{}^{}", d.describe(), pl.vars.len() + pr_right.vars.len()),
                configurations: d
                    .store_count(pl.vars.len() + pr_right.vars.len())
                    .unwrap_or(u64::MAX),
            };
            let j = Judgement {
                pre: parse_formula(pre, &pl.vars)
                    .or_else(|_| parse_formula(pre, &pr_right.vars))
                    .map_err(|e| err(format!("--pre: {e}")))?,
                post: parse_formula(post, &pl.vars)
                    .or_else(|_| parse_formula(post, &pr_right.vars))
                    .map_err(|e| err(format!("--post: {e}")))?,
                left: pl,
                right: pr_right,
            };
            match semtest_judgement(&j, &d)? {
                SemtestResult::Pass => Ok(Report::new("rhl semtest", Status::Pass, evidence)),
                SemtestResult::Counterexample {
                    left,
                    right,
                    detail,
                } => Ok(
                    Report::new("rhl semtest", Status::Fail, evidence).finding(store_finding(
                        "counterexample",
                        &detail,
                        &[("s0", left.to_string()), ("s1", right.to_string())],
                    )),
                ),
                SemtestResult::InconclusiveTermination { left, right } => {
                    Ok(
                        Report::new("rhl semtest", Status::Inconclusive, evidence).finding(
                            store_finding(
                                "termination-mismatch",
                                "exactly one side completed within the fuel bound",
                                &[("s0", left.to_string()), ("s1", right.to_string())],
                            ),
                        ),
                    )
                }
            }
        }

        Command::Ifc(cmd) => ifc_dispatch(args, cmd),
        Command::Prob(cmd) => prob_dispatch(args, cmd),

        Command::Memo(MemoCommand::Computes {
            skeleton,
            bound,
            trials,
        }) => {
            let sk = builtin_skeleton(skeleton)
                .ok_or_else(|| err(format!("unknown skeleton `{skeleton}` (fib, triangle)")))?;
            let evidence = Evidence::Randomized {
                trials: *trials,
                seed: args.seed,
            };
            let reference = |x: u64| fixp(sk, x).unwrap();
            let memoized = |x: u64, st: &MemoState| {
                let mut trace = CallTrace::default();
                memoize_rec(sk, x, st, &mut trace)
            };
            match computes_check(
                &memoized,
                &reference,
                *bound,
                StateSampler::Random { seed: args.seed },
                *trials,
            )? {
                ComputesCheck::Pass { checked } => {
                    Ok(Report::new("memo computes", Status::Pass, evidence).finding(
                        Finding::new("checked", format!("{checked} (state, input) combinations")),
                    ))
                }
                ComputesCheck::Counterexample { x, state, detail } => {
                    Ok(Report::new("memo computes", Status::Fail, evidence).finding(
                        store_finding(
                            "counterexample",
                            &detail,
                            &[("x", x.to_string()), ("state", state.to_string())],
                        ),
                    ))
                }
            }
        }

        Command::Unionfind(UnionfindCommand::Refine {
            check,
            n,
            exhaustive,
            depth,
            trials,
        }) => {
            let params = if *exhaustive {
                GenParams::Exhaustive { max_depth: *depth }
            } else {
                GenParams::Randomized {
                    trials: *trials,
                    seed: args.seed,
                }
            };
            let evidence = if *exhaustive {
                Evidence::Exhaustive {
                    domain: format!("forests n={n} depth<={depth}"),
                    configurations: 0,
                }
            } else {
                Evidence::Randomized {
                    trials: *trials,
                    seed: args.seed,
                }
            };
            let result = match check.as_str() {
                "rank" => rank_independence_check(*n, params),
                "union-rank" => union_by_rank_refinement_check(*n, params),
                "compress" => find_compress_refinement_check(*n, params),
                other => {
                    return Err(err(format!(
                        "unknown check `{other}` (rank, union-rank, compress)"
                    )))
                }
            };
            let tool = format!("unionfind refine {check}");
            match result {
                RefineCheck::Pass { instances } => {
                    let mut evidence = evidence;
                    if let Evidence::Exhaustive { configurations, .. } = &mut evidence {
                        *configurations = instances;
                    }
                    Ok(Report::new(tool, Status::Pass, evidence))
                }
                RefineCheck::Counterexample { detail } => Ok(Report::new(
                    tool,
                    Status::Fail,
                    evidence,
                )
                .finding(Finding::new("counterexample", detail))),
            }
        }

        Command::Demo(DemoCommand::Memo(dm)) => {
            let sk = builtin_skeleton(&dm.skeleton)
                .ok_or_else(|| err(format!("unknown skeleton `{}`", dm.skeleton)))?;
            let mut trace = CallTrace::default();
            let (value, state) = memoize_rec(sk, dm.x, &MemoState::empty(), &mut trace)?;
            Ok(Report::new("demo memo", Status::Pass, Evidence::Execution)
                .finding(Finding::new(
                    "value",
                    format!("{}({}) = {value}", sk.name(), dm.x),
                ))
                .finding(Finding::new("cache-size", state.len().to_string()))
                .finding(Finding::new("call-trace", trace.to_string())))
        }

        Command::Demo(DemoCommand::Unionfind { n, ops }) => {
            use rand::Rng;
            let mut rng = relcheck_core::gen::rng_from_seed(args.seed);
            let mut uf = UFForest::new(*n);
            let mut log = Vec::new();
            for step in 0..*ops {
                let i = rng.gen_range(0..*n);
                let j = rng.gen_range(0..*n);
                let (what, next) = match rng.gen_range(0..3) {
                    0 => (format!("union({i},{j})"), uf.union(i, j)?),
                    1 => (format!("union_by_rank({i},{j})"), uf.union_by_rank(i, j)?),
                    _ => {
                        let (r, next) = uf.find_compress(i)?;
                        (format!("find_compress({i}) = {r}"), next)
                    }
                };
                uf = next;
                if let Err(v) = uf.check_invariants() {
                    return Ok(Report::new(
                        "demo unionfind",
                        Status::Fail,
                        Evidence::Randomized {
                            trials: *ops as u64,
                            seed: args.seed,
                        },
                    )
                    .finding(Finding::new(
                        "invariant-violation",
                        format!("after step {step} ({what}): {v}"),
                    )));
                }
                log.push(what);
            }
            Ok(Report::new(
                "demo unionfind",
                Status::Pass,
                Evidence::Randomized {
                    trials: *ops as u64,
                    seed: args.seed,
                },
            )
            .finding(Finding::new("ops", log.join("; ")))
            .finding(Finding::new("forest", uf.to_string()))
            .finding(Finding::new("max-height", uf.max_height().to_string())))
        }
    }
}

fn ifc_dispatch(args: &CliArgs, cmd: &IfcCommand) -> Result<Report, CliError> {
    match cmd {
        IfcCommand::Check { file, labels } => {
            let p = load_program(file)?;
            let env = parse_labels(labels, &p)?;
            match tc_com(&env, &p.body) {
                Ok(label) => Ok(Report::new("ifc check", Status::Pass, Evidence::Execution)
                    .finding(Finding::new("pc-label", label.to_string()))),
                Err(te) => Ok(
                    Report::new("ifc check", Status::Fail, Evidence::Execution).finding(
                        Finding::new("type-error", te.to_string())
                            .with("at", te.offending.to_string()),
                    ),
                ),
            }
        }

        IfcCommand::Semcheck {
            file,
            labels,
            level,
        } => {
            let p = load_program(file)?;
            let env = parse_labels(labels, &p)?;
            let level = Label::parse(level).ok_or_else(|| err("bad --level"))?;
            let d = domain(args)?;
            let evidence = exhaustive_evidence(&d, p.vars.len(), 2);
            match ni_com_check(&p, &env, level, &d)? {
                NiComCheck::Pass => Ok(Report::new("ifc semcheck", Status::Pass, evidence)),
                NiComCheck::NiCounterexample { s0, s1, detail } => {
                    Ok(Report::new("ifc semcheck", Status::Fail, evidence).finding(
                        store_finding(
                            "ni-counterexample",
                            &detail,
                            &[("s0", s0.to_string()), ("s1", s1.to_string())],
                        ),
                    ))
                }
                NiComCheck::WriteDownCounterexample { store, var } => {
                    Ok(Report::new("ifc semcheck", Status::Fail, evidence).finding(
                        store_finding(
                            "write-down-counterexample",
                            &format!("`{var}` below the pc level is modified"),
                            &[("store", store.to_string()), ("var", var)],
                        ),
                    ))
                }
            }
        }

        IfcCommand::Hybrid {
            file,
            labels,
            trusted,
        } => {
            let p = load_program(file)?;
            let env = parse_labels(labels, &p)?;
            let d = domain(args)?;
            let mut entries = Vec::new();
            let mut findings = Vec::new();
            for spec_str in trusted {
                let mut parts = spec_str.split(':');
                let path = parts.next().unwrap_or("");
                let label = Label::parse(parts.next().unwrap_or("")).ok_or_else(|| {
                    err(format!("bad --trusted `{spec_str}` (file:Label[:checked])"))
                })?;
                let checked = match parts.next() {
                    None => false,
                    Some("checked") => true,
                    Some(other) => {
                        return Err(err(format!("bad trusted flag `{other}` (use :checked)")))
                    }
                };
                let sub = load_program(&PathBuf::from(path))?;
                let evidence = if checked {
                    match ni_com_check(&sub, &env, label, &d)? {
                        NiComCheck::Pass => {}
                        other => {
                            return Ok(Report::new(
                                "ifc hybrid",
                                Status::Fail,
                                exhaustive_evidence(&d, sub.vars.len(), 2),
                            )
                            .finding(Finding::new(
                                "untrusted-entry",
                                format!("{path} is not noninterferent at {label}: {other:?}"),
                            )));
                        }
                    }
                    findings.push(Finding::new(
                        "trusted-checked",
                        format!("{path} noninterferent at {label} over {}", d.describe()),
                    ));
                    TrustEvidence::SemanticallyChecked { domain: d.clone() }
                } else {
                    findings.push(Finding::new(
                        "trusted-assumed",
                        format!("{path} at {label}"),
                    ));
                    TrustEvidence::Assumed
                };
                entries.push(TrustedEntry {
                    command: sub.body.clone(),
                    label,
                    evidence,
                });
            }
            match tc_com_hybrid(&env, &p.body, &entries) {
                Ok(label) => Ok(Report::new("ifc hybrid", Status::Pass, Evidence::Execution)
                    .findings(findings)
                    .finding(Finding::new("pc-label", label.to_string()))),
                Err(te) => Ok(
                    Report::new("ifc hybrid", Status::Fail, Evidence::Execution)
                        .findings(findings)
                        .finding(
                            Finding::new("type-error", te.to_string())
                                .with("at", te.offending.to_string()),
                        ),
                ),
            }
        }

        IfcCommand::Monitor {
            file,
            labels,
            pc,
            store,
        } => {
            let p = load_program(file)?;
            let env = parse_labels(labels, &p)?;
            let pc = Label::parse(pc).ok_or_else(|| err("bad --pc"))?;
            let s = parse_store_literal(store, &p)?;
            match monitor_run(&env, pc, &p, &s)? {
                MonitorOutcome::Normal(f) => Ok(Report::new(
                    "ifc monitor",
                    Status::Pass,
                    Evidence::Execution,
                )
                .finding(Finding::new("normal", format!("final store {f}")))),
                MonitorOutcome::OutOfFuel(f) => Ok(Report::new(
                    "ifc monitor",
                    Status::Pass,
                    Evidence::Execution,
                )
                .finding(Finding::new(
                    "out-of-fuel",
                    format!("metric check failed at store {f}"),
                ))),
                MonitorOutcome::Violation(f) => Ok(Report::new(
                    "ifc monitor",
                    Status::Fail,
                    Evidence::Execution,
                )
                .finding(Finding::new(
                    "violation",
                    format!("assignment check failed at store {f}"),
                ))),
            }
        }

        IfcCommand::Declass {
            file,
            labels,
            declass,
        } => {
            let p = load_program(file)?;
            let env = parse_labels(labels, &p)?;
            let d = domain(args)?;
            let evidence = exhaustive_evidence(&d, p.vars.len(), 2);
            let exps: Vec<Exp> = declass
                .iter()
                .map(|t| {
                    parse_exp_with_vars(t, &p.vars).map_err(|e| err(format!("--declass `{t}`: {e}")))
                })
                .collect::<Result<_, _>>()?;
            match delimited_release_check(&p, &env, &exps, &d)? {
                PairCheck::Pass => Ok(Report::new("ifc declass", Status::Pass, evidence)),
                PairCheck::Counterexample { s0, s1, detail } => {
                    Ok(Report::new("ifc declass", Status::Fail, evidence).finding(
                        store_finding(
                            "counterexample",
                            &detail,
                            &[("s0", s0.to_string()), ("s1", s1.to_string())],
                        ),
                    ))
                }
            }
        }
    }
}

fn prob_dispatch(args: &CliArgs, cmd: &ProbCommand) -> Result<Report, CliError> {
    let budget = if args.budget == 10_000_000 {
        DEFAULT_TAPE_BUDGET
    } else {
        args.budget
    };
    match cmd {
        ProbCommand::Otp {
            q,
            tape,
            m0,
            m1,
            c,
            all,
        } => {
            let side = 1u64 << q;
            let evidence = Evidence::Exhaustive {
                domain: format!("tapes ({side})^{tape}"),
                configurations: side.pow(*tape as u32),
            };
            if *all {
                let mut prs = BTreeSet::new();
                for m0 in 0..side {
                    for m1 in 0..side {
                        for c in 0..side {
                            let (m0, m1, c) = (
                                BitVec::new(*q, m0)?,
                                BitVec::new(*q, m1)?,
                                BitVec::new(*q, c)?,
                            );
                            match check_otp_secrecy(*q, *tape, m0, m1, c, budget)? {
                                OtpCheck::Pass { pr, .. } => {
                                    prs.insert(pr.to_string());
                                }
                                OtpCheck::Counterexample { mass0, mass1 } => {
                                    return Ok(Report::new("prob otp", Status::Fail, evidence)
                                        .finding(Finding::new(
                                            "counterexample",
                                            format!(
                                                "masses differ for m0={m0} m1={m1} c={c}: \
                                                 {mass0} vs {mass1}"
                                            ),
                                        )));
                                }
                            }
                        }
                    }
                }
                let triples = side * side * side;
                return Ok(
                    Report::new("prob otp", Status::Pass, evidence).finding(Finding::new(
                        "secrecy",
                        format!(
                            "all {triples} (m0,m1,c) triples agree; Pr = {} in every case",
                            prs.iter().cloned().collect::<Vec<_>>().join(", ")
                        ),
                    )),
                );
            }
            let (m0, m1, c) = match (m0, m1, c) {
                (Some(m0), Some(m1), Some(c)) => (*m0, *m1, *c),
                _ => return Err(err("pass --m0, --m1 and --c, or --all")),
            };
            let (m0, m1, c) = (
                BitVec::new(*q, m0)?,
                BitVec::new(*q, m1)?,
                BitVec::new(*q, c)?,
            );
            match check_otp_secrecy(*q, *tape, m0, m1, c, budget)? {
                OtpCheck::Pass { mass0, mass1, pr } => {
                    Ok(Report::new("prob otp", Status::Pass, evidence).finding(Finding::new(
                        "secrecy",
                        format!("mass {mass0} = {mass1}, Pr = {pr}"),
                    )))
                }
                OtpCheck::Counterexample { mass0, mass1 } => Ok(Report::new(
                    "prob otp",
                    Status::Fail,
                    evidence,
                )
                .finding(Finding::new(
                    "counterexample",
                    format!("masses differ: {mass0} vs {mass1}"),
                ))),
            }
        }

        ProbCommand::Mass {
            prog,
            pred,
            q,
            tape,
            param,
        } => {
            let text = std::fs::read_to_string(prog)
                .map_err(|e| err(format!("cannot read {}: {e}", prog.display())))?;
            let program = parse_randprog(&text, *q)?;
            let mut params = Params::new();
            for pdef in param {
                let (name, value) = pdef
                    .split_once('=')
                    .ok_or_else(|| err(format!("bad --param `{pdef}` (name=value)")))?;
                let value: u64 = value
                    .parse()
                    .map_err(|_| err(format!("bad value in --param `{pdef}`")))?;
                params.insert(name.to_string(), BitVec::new(*q, value)?);
            }
            let target = pred
                .strip_prefix("point:")
                .ok_or_else(|| err(format!("unknown predicate `{pred}` (use point:V)")))?;
            let target: u64 = target
                .parse()
                .map_err(|_| err(format!("bad value in `{pred}`")))?;
            let predicate = point(BitVec::new(*q, target)?);
            let side = 1u64 << q;
            let evidence = Evidence::Exhaustive {
                domain: format!("tapes ({side})^{tape}"),
                configurations: side.pow(*tape as u32),
            };
            let m = mass(&program, &params, &predicate, *q, *tape, budget)?;
            let probability = pr(&program, &params, &predicate, *q, *tape, budget)?;
            Ok(Report::new("prob mass", Status::Pass, evidence)
                .finding(Finding::new("mass", m.to_string()))
                .finding(Finding::new("pr", probability.to_string())))
        }
    }
}
