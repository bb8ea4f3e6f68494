//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line (visible with `cargo test --test acceptance -- --nocapture`).

use std::collections::BTreeSet;
use std::time::Instant;

use rayon::prelude::*;

use relcheck_core::domain::TestDomain;
use relcheck_core::gen::{all_label_envs, gen_program, rng_from_seed, GenConfig};
use relcheck_core::ifc::{
    delimited_release_check, dyn_ifc_check, dyn_ifc_check_with, monitor_run, ni_com_check,
    tc_com, tc_com_hybrid, Evidence, IfcError, Label, LabelEnv, MonitorOptions, MonitorOutcome,
    NiComCheck, PairCheck, TrustedEntry,
};
use relcheck_core::lang::{
    parse_exp_with_vars, parse_program, parse_store_literal, run_fuel, run_metric, EvalError,
    Outcome, Program, Store,
};
use relcheck_core::memo::{
    computes_check, fixp, memoize, memoize_rec, CallTrace, ComputesCheck, FibSkeleton,
    MemoState, StateSampler,
};
use relcheck_core::prob::{
    check_otp_secrecy, mass_leq_check, otp_prog, point, pr, BitVec, MassLeqCheck, OtpCheck,
    Params, RandProg, TapeBijection, VecExp, DEFAULT_TAPE_BUDGET,
};
use relcheck_core::relsem::{
    check_equiv, check_reads, check_transformation, check_writes, EquivCheck, Footprint,
    ReadsCheck, TransformCheck, TransformKind, WritesCheck,
};
use relcheck_core::rhl::{
    check_proof, parse_proof_script, semtest_judgement, Judgement, NodeStatus, SemtestResult,
};
use relcheck_core::unionfind::{
    find_compress_refinement_check, find_compress_refinement_check_with,
    rank_independence_check, rank_independence_check_with, union_by_rank_refinement_check,
    union_by_rank_refinement_check_with, Entry, GenParams, RefineCheck, UFForest,
};

fn report(id: u32, name: &str, started: Instant, ok: bool) {
    let ms = started.elapsed().as_millis();
    println!(
        "criterion {id:2} [{}] {name} ({ms} ms)",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {id} failed: {name}");
}

/// 1. One-time-pad perfect secrecy: exact mass equality and pr = 1/2^q for
/// every message pair and ciphertext, q in 1..=3, tape sizes 1 and 2.
#[test]
fn criterion_01_otp_perfect_secrecy() {
    let t0 = Instant::now();
    let mut ok = true;
    for q in 1u8..=3 {
        let side = 1u64 << q;
        for s in 1usize..=2 {
            for m0 in 0..side {
                for m1 in 0..side {
                    for c in 0..side {
                        let (m0, m1, c) = (
                            BitVec::new(q, m0).unwrap(),
                            BitVec::new(q, m1).unwrap(),
                            BitVec::new(q, c).unwrap(),
                        );
                        match check_otp_secrecy(q, s, m0, m1, c, DEFAULT_TAPE_BUDGET).unwrap() {
                            OtpCheck::Pass { pr: p, .. } => {
                                if p != num_rational::Ratio::new(1, side) {
                                    ok = false;
                                }
                            }
                            OtpCheck::Counterexample { .. } => ok = false,
                        }
                    }
                }
            }
        }
    }
    report(1, "one-time-pad perfect secrecy, exact", t0, ok);
}

fn otp_with_message(m: BitVec) -> RandProg {
    RandProg::sample(
        "k",
        RandProg::Return(VecExp::xor(VecExp::Const(m), VecExp::Var("k".to_string()))),
    )
}

/// 2. The mass-inequality lemma: the one-time-pad bijection satisfies the
/// pointwise premise on every tape (and the mass conclusion); the identity
/// bijection with distinct messages yields a concrete counterexample tape.
#[test]
fn criterion_02_mass_leq_bijection() {
    let t0 = Instant::now();
    let mut ok = true;
    for q in 1u8..=2 {
        let side = 1u64 << q;
        for s in 1usize..=2 {
            for m0 in 0..side {
                for m1 in 0..side {
                    for c in 0..side {
                        let m0 = BitVec::new(q, m0).unwrap();
                        let m1 = BitVec::new(q, m1).unwrap();
                        let c = BitVec::new(q, c).unwrap();
                        let p1 = otp_with_message(m0);
                        let p2 = otp_with_message(m1);
                        let bij = TapeBijection::otp(m0, m1, s).unwrap();
                        let r = mass_leq_check(
                            &p1,
                            &p2,
                            &Params::new(),
                            &point(c),
                            &point(c),
                            &bij,
                            q,
                            s,
                            DEFAULT_TAPE_BUDGET,
                        )
                        .unwrap();
                        match r {
                            MassLeqCheck::Pass { mass1, mass2 } => {
                                if mass1 != mass2 {
                                    ok = false; // otp masses are equal, not just <=
                                }
                            }
                            MassLeqCheck::Counterexample { .. } => ok = false,
                        }
                    }
                }
            }
        }
    }
    // identity bijection with m0 != m1: premise must fail on the tape
    // where otp(m0) hits c
    let q = 2;
    let (m0, m1, c) = (
        BitVec::new(q, 1).unwrap(),
        BitVec::new(q, 2).unwrap(),
        BitVec::new(q, 3).unwrap(),
    );
    let r = mass_leq_check(
        &otp_with_message(m0),
        &otp_with_message(m1),
        &Params::new(),
        &point(c),
        &point(c),
        &TapeBijection::identity(q, 1),
        q,
        1,
        DEFAULT_TAPE_BUDGET,
    )
    .unwrap();
    match r {
        MassLeqCheck::Counterexample { tape, .. } => {
            if tape.cell(0).unwrap() != c.xor(&m0).unwrap() {
                ok = false;
            }
        }
        MassLeqCheck::Pass { .. } => ok = false,
    }
    report(2, "mass-inequality bijection lemma", t0, ok);
}

// The accumulating sums, counting up and counting down. The recursion
// position lives in a scratch counter `i` (the interval bounds are inputs,
// not state), zeroed on exit so equivalence is over the full store.
const SUM_UP: &str = "vars r,lo,hi,i; \
    i := lo; while (i - hi != 0) decr (hi - i) { r := r + i; i := i + 1 }; i := 0";
const SUM_DN: &str = "vars r,lo,hi,i; \
    i := hi; while (i - lo != 0) decr (i - lo) { r := r + i - 1; i := i - 1 }; i := 0";

/// 3. Counting up and counting down compute the same sums: semantic
/// equivalence over the full box, plus an arithmetic-series oracle for the
/// final accumulator on the lo <= hi triangle.
#[test]
fn criterion_03_sum_up_dn_equivalence() {
    let t0 = Instant::now();
    let up = parse_program(SUM_UP).unwrap();
    let dn = parse_program(SUM_DN).unwrap();
    let d = TestDomain::range(-2, 4).unwrap();
    let mut ok = check_equiv(&up, &dn, &d).unwrap() == EquivCheck::Pass;
    for r in -2i64..=2 {
        for lo in 0i64..=4 {
            for hi in lo..=4 {
                let expected = r + (lo..hi).sum::<i64>();
                for p in [&up, &dn] {
                    let s =
                        parse_store_literal(&format!("r={r},lo={lo},hi={hi},i=0"), p).unwrap();
                    match run_metric(p, &s).unwrap() {
                        Outcome::Normal(f) => {
                            if f.get("r") != Some(expected) {
                                ok = false;
                            }
                        }
                        Outcome::OutOfFuel(_) => ok = false,
                    }
                }
            }
        }
    }
    report(3, "sum-up/sum-down equivalence with series oracle", t0, ok);
}

/// 4. Type-system soundness: every generated program accepted by the
/// typechecker passes the semantic noninterference check, for all label
/// environments, over {0,1,2}.
#[test]
fn criterion_04_ifc_type_soundness() {
    let t0 = Instant::now();
    let cfg = GenConfig::default();
    let programs: Vec<Program> = {
        let mut rng = rng_from_seed(0x1f2e3d);
        (0..10_000).map(|_| gen_program(&mut rng, &cfg)).collect()
    };
    let envs = all_label_envs(&programs[0].vars);
    let d = TestDomain::range(0, 2).unwrap();
    let violations: usize = programs
        .par_iter()
        .map(|p| {
            let mut bad = 0;
            for env in &envs {
                let Ok(label) = tc_com(env, &p.body) else {
                    continue;
                };
                match ni_com_check(p, env, label, &d) {
                    Ok(NiComCheck::Pass) => {}
                    Ok(_) => bad += 1,
                    // overflow in a generated program: outside the checked
                    // semantics, skip
                    Err(IfcError::Eval(EvalError::ArithmeticOverflow(_))) => {}
                    Err(e) => panic!("unexpected error: {e}"),
                }
            }
            bad
        })
        .sum();
    report(
        4,
        "IFC type-system soundness on 10k generated programs",
        t0,
        violations == 0,
    );
}

/// 5. Hybrid checking: the loop and its inner two-assignment command are
/// ill-typed, the inner command is semantically noninterferent at Low, and
/// trusting it lets the typechecker accept the loop at Low.
#[test]
fn criterion_05_hybrid_checking() {
    let t0 = Instant::now();
    let env = LabelEnv::new()
        .with("c", Label::Low)
        .with("hi", Label::High)
        .with("lo", Label::Low);
    let c_loop = parse_program(
        "vars c,hi,lo; while (c != 0) decr c { hi := lo + 1; lo := hi + 1; c := c - 1 }",
    )
    .unwrap();
    let c_s = parse_program("vars c,hi,lo; hi := lo + 1; lo := hi + 1").unwrap();
    let d = TestDomain::range(0, 2).unwrap();
    let mut ok = tc_com(&env, &c_s.body).is_err();
    ok &= tc_com(&env, &c_loop.body).is_err();
    ok &= ni_com_check(&c_s, &env, Label::Low, &d).unwrap() == NiComCheck::Pass;
    let trusted = vec![TrustedEntry {
        command: c_s.body.clone(),
        label: Label::Low,
        evidence: Evidence::SemanticallyChecked { domain: d },
    }];
    ok &= tc_com_hybrid(&env, &c_loop.body, &trusted) == Ok(Label::Low);
    report(5, "hybrid static/semantic IFC checking", t0, ok);
}

/// 6. The dynamic monitor: concrete runs of the leaky conditional, monitor
/// noninterference on 10k generated programs, and mutant detection when
/// the assignment check is disabled.
#[test]
fn criterion_06_monitor() {
    let t0 = Instant::now();
    let env = LabelEnv::new()
        .with("hi", Label::High)
        .with("lo", Label::Low);
    let leaky = parse_program("vars hi,lo; if (hi == 0) { skip } else { lo := 0 }").unwrap();
    let mut ok = true;
    let s = parse_store_literal("hi=0,lo=1", &leaky).unwrap();
    ok &= matches!(
        monitor_run(&env, Label::Low, &leaky, &s).unwrap(),
        MonitorOutcome::Normal(_)
    );
    for hi in [1, 2, -1] {
        let s = parse_store_literal(&format!("hi={hi},lo=1"), &leaky).unwrap();
        ok &= matches!(
            monitor_run(&env, Label::Low, &leaky, &s).unwrap(),
            MonitorOutcome::Violation(_)
        );
    }

    let cfg = GenConfig::default();
    let programs: Vec<Program> = {
        let mut rng = rng_from_seed(0xabcdef);
        (0..10_000).map(|_| gen_program(&mut rng, &cfg)).collect()
    };
    let envs = all_label_envs(&programs[0].vars);
    let d = TestDomain::range(0, 2).unwrap();
    let violations: usize = programs
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            let env = &envs[i % envs.len()];
            match dyn_ifc_check(p, env, Label::Low, &d) {
                Ok(PairCheck::Pass) => 0,
                Ok(PairCheck::Counterexample { .. }) => 1,
                Err(IfcError::Eval(EvalError::ArithmeticOverflow(_))) => 0,
                Err(e) => panic!("unexpected error: {e}"),
            }
        })
        .sum();
    ok &= violations == 0;

    // removing the assignment check breaks the theorem on a direct leak
    let leak = parse_program("vars hi,lo; lo := hi").unwrap();
    let broken = MonitorOptions {
        enforce_assign_check: false,
    };
    ok &= matches!(
        dyn_ifc_check_with(broken, &leak, &env, Label::Low, &d).unwrap(),
        PairCheck::Counterexample { .. }
    );
    report(6, "IFC monitor: runs, 10k-program soundness, mutant", t0, ok);
}

/// 7. Delimited release: the transfer program leaks exactly the
/// declassified comparison and nothing more.
#[test]
fn criterion_07_delimited_release() {
    let t0 = Instant::now();
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
    let mut ok =
        delimited_release_check(&transfer, &env, &declass, &d).unwrap() == PairCheck::Pass;
    match delimited_release_check(&transfer, &env, &[], &d).unwrap() {
        PairCheck::Counterexample { s0, s1, .. } => {
            // a concrete witness pair: low-equivalent but distinguishable
            ok &= s0.get("k") == s1.get("k") && s0.get("lo") == s1.get("lo");
            ok &= s0.get("hi") != s1.get("hi");
        }
        PairCheck::Pass => ok = false,
    }
    report(7, "delimited release of lt(k,hi)", t0, ok);
}

const HOISTING: &str = include_str!("../../cli/corpus/hoisting.sexp");

fn rule_instances() -> Vec<(&'static str, String, String)> {
    let eqx = "(= (L x) (R x))";
    let mut cases: Vec<(&'static str, String, String)> = Vec::new();
    cases.push((
        "rskip",
        format!(r#"(rskip :left "skip" :right "skip" :pre {eqx} :post {eqx})"#),
        format!(r#"(rskip :left "skip" :right "skip" :pre true :post {eqx})"#),
    ));
    cases.push((
        "rassign",
        format!(r#"(rassign :left "x := 1" :right "x := 1" :pre true :post {eqx})"#),
        format!(r#"(rassign :left "x := 1" :right "x := 2" :pre true :post {eqx})"#),
    ));
    cases.push((
        "rseq",
        format!(
            r#"(rseq :left "x := 1; x := x + 1" :right "x := 2; skip"
                 :pre true :post {eqx}
                 :mid (and (= (L x) 1) (= (R x) 2))
                 (premise (rassign)) (premise (deadassignl)))"#
        ),
        format!(
            r#"(rseq :left "x := 1; x := x + 1" :right "x := 2; skip"
                 :pre true :post {eqx}
                 :mid (and (= (L x) 2) (= (R x) 2))
                 (premise (rassign)) (premise (deadassignl)))"#
        ),
    ));
    cases.push((
        "rif",
        format!(
            r#"(rif :left "if (x == 0) {{ y := 1 }} else {{ y := 2 }}"
                :right "if (x == 0) {{ y := 1 }} else {{ y := 2 }}"
                :pre (= (L x) (R x)) :post (= (L y) (R y))
                (premise (rassign)) (premise (rassign)))"#
        ),
        format!(
            r#"(rif :left "if (x == 0) {{ y := 1 }} else {{ y := 2 }}"
                :right "if (y == 0) {{ y := 1 }} else {{ y := 2 }}"
                :pre (= (L x) (R x)) :post (= (L y) (R y))
                (premise (rassign)) (premise (rassign)))"#
        ),
    ));
    cases.push((
        "rwhile",
        format!(
            r#"(rwhile :phi {eqx}
                 :left "while (x != 0) {{ x := x - 1 }}"
                 :right "while (x != 0) {{ x := x - 1 }}"
                 (premise (rassign)))"#
        ),
        format!(
            r#"(rwhile :phi {eqx}
                 :left "while (x != 0) {{ x := x - 1 }}"
                 :right "while (x != 0) {{ x := x - 2 }}"
                 (premise (rassign)))"#
        ),
    ));
    cases.push((
        "rconseq",
        format!(
            r#"(rconseq :left "x := 1" :right "x := 1"
                 :pre (= (L y) (R y)) :post {eqx}
                 (premise (rassign :pre true :post {eqx})))"#
        ),
        format!(
            r#"(rconseq :left "x := 1" :right "x := 1"
                 :pre (= (L y) (R y)) :post (= (L y) (R y))
                 (premise (rassign :pre true :post {eqx})))"#
        ),
    ));
    cases.push((
        "deadassignl",
        format!(r#"(deadassignl :left "x := y" :right "skip" :pre true :post (= (L x) (L y)))"#),
        format!(
            r#"(deadassignl :left "x := y" :right "skip" :pre true :post (= (L x) (+ (L y) 1)))"#
        ),
    ));
    cases.push((
        "deadassignr",
        format!(r#"(deadassignr :left "skip" :right "x := y" :pre true :post (= (R x) (R y)))"#),
        format!(
            r#"(deadassignr :left "skip" :right "x := y" :pre true :post (= (R x) (+ (R y) 1)))"#
        ),
    ));
    cases.push((
        "deadwhilel",
        format!(
            r#"(deadwhilel :phi (= (L y) (R y))
                 :left "while (x != 0) decr x {{ x := x - 1 }}" :right "skip")"#
        ),
        format!(
            r#"(deadwhilel :phi (= (L y) (R y))
                 :left "while (x != 0) decr x {{ x := x - 1 }}" :right "skip"
                 :pre (and (= (L y) (R y)) (!= (L x) 0))
                 :post (and (= (L y) (R y)) (= (L x) 0)))"#
        ),
    ));
    cases.push((
        "deadwhiler",
        format!(
            r#"(deadwhiler :phi (= (L y) (R y))
                 :left "skip" :right "while (x != 0) decr x {{ x := x - 1 }}")"#
        ),
        format!(
            r#"(deadwhiler :phi (= (L y) (R y))
                 :left "skip" :right "while (x != 0) decr x {{ x := x - 1 }}"
                 :pre (and (= (L y) (R y)) (!= (R x) 0))
                 :post (and (= (L y) (R y)) (= (R x) 0)))"#
        ),
    ));
    cases.push((
        "skipeliml",
        format!(
            r#"(skipeliml :left "x := 1" :right "x := 1" :pre true :post {eqx}
                 (premise (semantic :left "skip; x := 1")))"#
        ),
        format!(
            r#"(skipeliml :left "x := 1" :right "x := 1" :pre true :post (= (L x) (+ (R x) 1))
                 (premise (semantic :left "skip; x := 1")))"#
        ),
    ));
    cases.push((
        "skipelimr",
        format!(
            r#"(skipelimr :left "x := 1" :right "x := 1" :pre true :post {eqx}
                 (premise (semantic :right "x := 1; skip")))"#
        ),
        format!(
            r#"(skipelimr :left "x := 1" :right "x := 1" :pre true :post (= (L x) (+ (R x) 1))
                 (premise (semantic :right "x := 1; skip")))"#
        ),
    ));
    cases.push((
        "semantic",
        format!(
            r#"(semantic :left "x := x + 1; x := x - 1" :right "skip" :pre {eqx} :post {eqx})"#
        ),
        format!(r#"(semantic :left "x := 0" :right "skip" :pre true :post {eqx})"#),
    ));
    cases
}

/// 8. Relational Hoare logic: the hoisting script checks with every node
/// ok and its root judgement survives the semantic tester; each of the 13
/// rules has a checking positive instance and a perturbed negative one
/// that reports a side-condition counterexample.
#[test]
fn criterion_08_rhl() {
    let t0 = Instant::now();
    let d = TestDomain::range(0, 2).unwrap().with_fuel(8);
    let mut ok = true;

    let script = parse_proof_script(HOISTING).unwrap();
    let hoisting = check_proof(&script, &d).unwrap();
    ok &= hoisting.nodes.iter().all(|n| n.status == NodeStatus::Ok);

    let left =
        parse_program("vars I,N,X,Y; while (lt(I,N) != 0) { X := Y + 1; I := I + X }").unwrap();
    let right =
        parse_program("vars I,N,X,Y; X := Y + 1; while (lt(I,N) != 0) { I := I + X }").unwrap();
    let root = Judgement {
        left,
        right,
        pre: script.root.pre.clone().unwrap(),
        post: script.root.post.clone().unwrap(),
    };
    ok &= semtest_judgement(&root, &d).unwrap() == SemtestResult::Pass;

    for (rule, positive, negative) in rule_instances() {
        let pos = format!("(proof :vars (x y) {positive})");
        let neg = format!("(proof :vars (x y) {negative})");
        let pos_report = check_proof(&parse_proof_script(&pos).unwrap(), &d)
            .unwrap_or_else(|e| panic!("{rule} positive raised: {e}"));
        if !pos_report.nodes.iter().all(|n| n.status == NodeStatus::Ok) {
            println!(
                "  {rule} positive instance not ok: {:?}",
                pos_report
                    .nodes
                    .iter()
                    .flat_map(|n| n.findings.clone())
                    .collect::<Vec<_>>()
            );
            ok = false;
        }
        let neg_report = check_proof(&parse_proof_script(&neg).unwrap(), &d)
            .unwrap_or_else(|e| panic!("{rule} negative raised: {e}"));
        if !neg_report.nodes.iter().any(|n| n.status == NodeStatus::Fail) {
            println!("  {rule} negative instance was not rejected");
            ok = false;
        }
    }
    report(8, "RHL: hoisting proof and 13-rule instances", t0, ok);
}

/// 9. Fuel monotonicity: once a run completes at fuel f, every larger fuel
/// gives the identical result.
#[test]
fn criterion_09_fuel_monotonicity() {
    let t0 = Instant::now();
    let cfg = GenConfig {
        with_metrics: false,
        ..GenConfig::default()
    };
    let d = TestDomain::range(0, 2).unwrap();
    let mut rng = rng_from_seed(0x90901);
    let mut cases: Vec<(Program, Store, u64)> = Vec::new();
    while cases.len() < 10_000 {
        let p = gen_program(&mut rng, &cfg);
        let per_side = d.store_count(p.vars.len()).unwrap();
        for idx in 0..per_side {
            let s = d.store_at(&p.vars, idx);
            let Ok(probe) = run_fuel(&p, &s, 12) else {
                continue; // overflow, outside the checked semantics
            };
            if !probe.completed {
                continue;
            }
            let mut f = 0;
            while !run_fuel(&p, &s, f).unwrap().completed {
                f += 1;
            }
            cases.push((p.clone(), s, f));
        }
    }
    cases.truncate(10_000);
    let violations: usize = cases
        .par_iter()
        .map(|(p, s, f)| {
            let base = run_fuel(p, s, *f).unwrap();
            let mut bad = 0;
            for fp in [*f + 1, *f + 3, 2 * *f + 7, *f + 50] {
                if run_fuel(p, s, fp).unwrap() != base {
                    bad += 1;
                }
            }
            bad
        })
        .sum();
    report(
        9,
        "fuel monotonicity on 10k completed runs",
        t0,
        violations == 0,
    );
}

fn names(xs: &[&str]) -> BTreeSet<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

/// 10. Footprint lemmas: swap, idempotence and redundant-writes pass on
/// the positive examples and report violations on the negatives; the
/// sequential composition of validated footprints validates at the union.
#[test]
fn criterion_10_footprints() {
    let t0 = Instant::now();
    let d = TestDomain::new(vec![0, 1]).unwrap();
    let mut ok = true;

    let p = |src: &str| parse_program(src).unwrap();
    // swap
    let r = check_transformation(
        TransformKind::Swap,
        &p("vars x,y; x := 1"),
        Some(&p("vars x,y; y := 2")),
        &Footprint::new::<&str>([], ["x"]),
        Some(&Footprint::new::<&str>([], ["y"])),
        &d,
    )
    .unwrap();
    ok &= r == TransformCheck::Pass;
    let r = check_transformation(
        TransformKind::Swap,
        &p("vars x,y; x := y + 1"),
        Some(&p("vars x,y; y := 0")),
        &Footprint::new(["y"], ["x"]),
        Some(&Footprint::new::<&str>([], ["y"])),
        &d,
    )
    .unwrap();
    ok &= matches!(r, TransformCheck::PreconditionViolation { ref detail } if detail.contains("rs1 and ws2"));

    // idempotence
    let r = check_transformation(
        TransformKind::Idempotence,
        &p("vars x,y; x := y"),
        None,
        &Footprint::new(["y"], ["x"]),
        None,
        &d,
    )
    .unwrap();
    ok &= r == TransformCheck::Pass;
    let r = check_transformation(
        TransformKind::Idempotence,
        &p("vars x,y; x := x + 1"),
        None,
        &Footprint::new(["x"], ["x"]),
        None,
        &d,
    )
    .unwrap();
    ok &= matches!(r, TransformCheck::PreconditionViolation { .. });

    // redundant writes
    let r = check_transformation(
        TransformKind::RedundantWrites,
        &p("vars x,y,z; x := 5"),
        Some(&p("vars x,y,z; x := y")),
        &Footprint::new::<&str>([], ["x"]),
        Some(&Footprint::new(["y"], ["x"])),
        &d,
    )
    .unwrap();
    ok &= r == TransformCheck::Pass;
    let r = check_transformation(
        TransformKind::RedundantWrites,
        &p("vars x,y,z; x := 5; z := 1"),
        Some(&p("vars x,y,z; x := y")),
        &Footprint::new::<&str>([], ["x", "z"]),
        Some(&Footprint::new(["y"], ["x"])),
        &d,
    )
    .unwrap();
    ok &= matches!(r, TransformCheck::PreconditionViolation { ref detail } if detail.contains("subset"));

    // sequential footprint union on generated pairs
    let cfg = GenConfig {
        max_depth: 2,
        ..GenConfig::default()
    };
    let mut rng = rng_from_seed(0x700);
    for _ in 0..200 {
        let p1 = gen_program(&mut rng, &cfg);
        let p2 = p1.with_body(gen_program(&mut rng, &cfg).body).unwrap();
        let (fp1, fp2) = (syntactic_footprint(&p1), syntactic_footprint(&p2));
        for (prog, fp) in [(&p1, &fp1), (&p2, &fp2)] {
            if check_writes(prog, &fp.writes, &d).unwrap() != WritesCheck::Pass
                || check_reads(prog, &fp.reads, &fp.writes, &d).unwrap() != ReadsCheck::Pass
            {
                ok = false;
            }
        }
        let seq = p1
            .with_body(relcheck_core::lang::Com::seq(
                p1.body.clone(),
                p2.body.clone(),
            ))
            .unwrap();
        let reads: BTreeSet<String> = fp1.reads.union(&fp2.reads).cloned().collect();
        let writes: BTreeSet<String> = fp1.writes.union(&fp2.writes).cloned().collect();
        if check_writes(&seq, &writes, &d).unwrap() != WritesCheck::Pass
            || check_reads(&seq, &reads, &writes, &d).unwrap() != ReadsCheck::Pass
        {
            ok = false;
        }
    }
    report(10, "footprint transformation lemmas", t0, ok);
}

fn syntactic_footprint(p: &Program) -> Footprint {
    fn walk(c: &relcheck_core::lang::Com, reads: &mut BTreeSet<String>, writes: &mut BTreeSet<String>) {
        use relcheck_core::lang::Com;
        match c {
            Com::Skip => {}
            Com::Assign(x, e) => {
                writes.insert(x.clone());
                for v in e.vars() {
                    reads.insert(v.to_string());
                }
            }
            Com::Seq(a, b) => {
                walk(a, reads, writes);
                walk(b, reads, writes);
            }
            Com::If(g, t, f) => {
                for v in g.vars() {
                    reads.insert(v.to_string());
                }
                walk(t, reads, writes);
                walk(f, reads, writes);
            }
            Com::While(g, body, metric) => {
                for v in g.vars() {
                    reads.insert(v.to_string());
                }
                if let Some(m) = metric {
                    for v in m.vars() {
                        reads.insert(v.to_string());
                    }
                }
                walk(body, reads, writes);
            }
        }
    }
    let mut fp = Footprint::default();
    walk(&p.body, &mut fp.reads, &mut fp.writes);
    // final stores must agree on all of `writes`, including variables a
    // particular run never touches, so writes must be readable too
    fp.reads.extend(fp.writes.iter().cloned());
    fp
}

/// 11. Memoization: both memoizers compute their references, the memoized
/// fixed point matches an independent naive recursion, and a corrupted
/// memoizer is caught.
#[test]
fn criterion_11_memoization() {
    let t0 = Instant::now();
    let mut ok = true;

    fn square(x: u64) -> i64 {
        (x * x) as i64
    }
    let memo_square = |x: u64, st: &MemoState| {
        let mut trace = CallTrace::default();
        Ok(memoize(&square, x, st, &mut trace))
    };
    ok &= matches!(
        computes_check(&memo_square, &square, 20, StateSampler::Random { seed: 42 }, 100)
            .unwrap(),
        ComputesCheck::Pass { .. }
    );

    let memo_fib = |x: u64, st: &MemoState| {
        let mut trace = CallTrace::default();
        memoize_rec(&FibSkeleton, x, st, &mut trace)
    };
    let fib_fix = |x: u64| fixp(&FibSkeleton, x).unwrap();
    ok &= matches!(
        computes_check(&memo_fib, &fib_fix, 15, StateSampler::Random { seed: 42 }, 100)
            .unwrap(),
        ComputesCheck::Pass { .. }
    );

    // independent oracle: textbook recursion, written here, not in the crate
    fn naive_fib(n: u64) -> i64 {
        if n <= 1 {
            1
        } else {
            naive_fib(n - 1) + naive_fib(n - 2)
        }
    }
    ok &= fixp(&FibSkeleton, 20).unwrap() == 10946 && naive_fib(20) == 10946;
    for x in 0..=20 {
        let mut trace = CallTrace::default();
        let (y, _) = memoize_rec(&FibSkeleton, x, &MemoState::empty(), &mut trace).unwrap();
        ok &= y == naive_fib(x);
    }

    let corrupted = |x: u64, st: &MemoState| {
        let y = square(x);
        Ok((y, st.insert(x, y + 1)))
    };
    ok &= matches!(
        computes_check(&corrupted, &square, 20, StateSampler::EmptyOnly, 0).unwrap(),
        ComputesCheck::Counterexample { .. }
    );
    report(11, "memoization computes its references", t0, ok);
}

/// 12. Union-find: invariants survive random operation sequences; the
/// three refinement checks pass exhaustively (n <= 5, depth <= 2) and on
/// 1000 randomized trials (n = 8); each check catches its mutant.
#[test]
fn criterion_12_unionfind() {
    let t0 = Instant::now();
    let mut ok = true;

    let mut rng = rng_from_seed(0x0f0f);
    for _ in 0..1_000 {
        use rand::Rng;
        let n = rng.gen_range(1..=8usize);
        let mut uf = UFForest::new(n);
        for _ in 0..rng.gen_range(0..=20usize) {
            let i = rng.gen_range(0..n);
            let j = rng.gen_range(0..n);
            uf = match rng.gen_range(0..3) {
                0 => uf.union(i, j).unwrap(),
                1 => uf.union_by_rank(i, j).unwrap(),
                _ => uf.find_compress(i).unwrap().1,
            };
            if uf.check_invariants().is_err() {
                ok = false;
            }
        }
    }

    for n in 2..=5usize {
        let p = GenParams::Exhaustive { max_depth: 2 };
        ok &= matches!(rank_independence_check(n, p), RefineCheck::Pass { .. });
        ok &= matches!(
            union_by_rank_refinement_check(n, p),
            RefineCheck::Pass { .. }
        );
        ok &= matches!(
            find_compress_refinement_check(n, p),
            RefineCheck::Pass { .. }
        );
    }
    let p = GenParams::Randomized {
        trials: 1_000,
        seed: 42,
    };
    ok &= matches!(rank_independence_check(8, p), RefineCheck::Pass { .. });
    ok &= matches!(
        union_by_rank_refinement_check(8, p),
        RefineCheck::Pass { .. }
    );
    ok &= matches!(
        find_compress_refinement_check(8, p),
        RefineCheck::Pass { .. }
    );

    // mutants
    let pe = GenParams::Exhaustive { max_depth: 2 };
    ok &= matches!(
        rank_independence_check_with(4, pe, &|uf, i| uf.find(i), &|uf, i, j| uf
            .union_by_rank(i, j)),
        RefineCheck::Counterexample { .. }
    );
    ok &= matches!(
        union_by_rank_refinement_check_with(3, pe, &|uf, i, _j| uf.union_by_rank(i, i)),
        RefineCheck::Counterexample { .. }
    );
    let detach = |uf: &UFForest, i: usize| {
        let root = uf.find(i)?;
        let mut entries: Vec<Entry> = (0..uf.len())
            .map(|k| Entry {
                parent: uf.parent(k),
                rank: uf.rank(k),
                subtree: uf.subtree(k).clone(),
            })
            .collect();
        entries[i].parent = i;
        Ok((root, UFForest::from_raw_entries(entries)))
    };
    ok &= matches!(
        find_compress_refinement_check_with(3, pe, &detach),
        RefineCheck::Counterexample { .. }
    );
    report(12, "union-find invariants and refinements", t0, ok);
}
