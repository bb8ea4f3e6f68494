//! Seeded random generation of WHILE programs and label environments, used
//! by the bulk property suites and the benches.
//!
//! Generated loops carry a countdown structure (`while (v != 0) decr v
//! { ...; v := v - 1 }`) often enough that a useful fraction of runs
//! terminate normally; arbitrary guarded loops are mixed in since checks
//! must also cope with out-of-fuel runs. Constants stay tiny so checked
//! arithmetic essentially never overflows at the generated sizes.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ifc::{Label, LabelEnv};
use crate::lang::{BinOp, Com, Exp, Program, VarSet};

#[derive(Debug, Clone)]
pub struct GenConfig {
    pub var_names: Vec<String>,
    pub max_depth: usize,
    /// Loops get a metric (required for metric-mode checks).
    pub with_metrics: bool,
    /// Allow multiplication in expressions.
    pub allow_mul: bool,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            var_names: vec!["x".into(), "y".into(), "z".into()],
            max_depth: 3,
            with_metrics: true,
            allow_mul: true,
        }
    }
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gen_exp(rng: &mut ChaCha8Rng, cfg: &GenConfig, depth: usize) -> Exp {
    if depth == 0 || rng.gen_bool(0.45) {
        return if rng.gen_bool(0.5) {
            Exp::lit(rng.gen_range(0..=2))
        } else {
            Exp::var(cfg.var_names[rng.gen_range(0..cfg.var_names.len())].clone())
        };
    }
    let op = match rng.gen_range(0..if cfg.allow_mul { 4 } else { 3 }) {
        0 => BinOp::Add,
        1 => BinOp::Sub,
        2 => BinOp::Lt,
        _ => BinOp::Mul,
    };
    Exp::bin(
        op,
        gen_exp(rng, cfg, depth - 1),
        gen_exp(rng, cfg, depth - 1),
    )
}

fn gen_com(rng: &mut ChaCha8Rng, cfg: &GenConfig, depth: usize) -> Com {
    let choice = if depth == 0 {
        rng.gen_range(0..2)
    } else {
        rng.gen_range(0..10)
    };
    match choice {
        0 => Com::Skip,
        1..=4 => {
            let target = cfg.var_names[rng.gen_range(0..cfg.var_names.len())].clone();
            Com::Assign(target, gen_exp(rng, cfg, depth.min(2)))
        }
        5 | 6 => Com::seq(
            gen_com(rng, cfg, depth - 1),
            gen_com(rng, cfg, depth - 1),
        ),
        7 | 8 => Com::if_zero(
            gen_exp(rng, cfg, depth.min(2)),
            gen_com(rng, cfg, depth - 1),
            gen_com(rng, cfg, depth - 1),
        ),
        _ => {
            let v = cfg.var_names[rng.gen_range(0..cfg.var_names.len())].clone();
            if rng.gen_bool(0.7) {
                // countdown loop: terminates from any store with v >= 0
                let inner = gen_com(rng, cfg, depth - 1);
                let body = Com::seq(
                    inner,
                    Com::Assign(v.clone(), Exp::sub(Exp::var(v.clone()), Exp::lit(1))),
                );
                Com::while_nonzero(
                    Exp::var(v.clone()),
                    body,
                    cfg.with_metrics.then(|| Exp::var(v)),
                )
            } else {
                let guard = gen_exp(rng, cfg, 1);
                let body = gen_com(rng, cfg, depth - 1);
                let metric = cfg.with_metrics.then(|| gen_exp(rng, cfg, 1));
                Com::while_nonzero(guard, body, metric)
            }
        }
    }
}

/// A random program over the configured variables.
pub fn gen_program(rng: &mut ChaCha8Rng, cfg: &GenConfig) -> Program {
    let vars = VarSet::new(cfg.var_names.clone()).expect("unique names");
    let body = gen_com(rng, cfg, cfg.max_depth);
    Program {
        vars: Arc::new(vars),
        body,
    }
}

/// Every labeling of the given variables (2^n environments).
pub fn all_label_envs(vars: &VarSet) -> Vec<LabelEnv> {
    let names: Vec<&str> = vars.names().collect();
    let mut out = Vec::with_capacity(1 << names.len());
    for mask in 0..(1u32 << names.len()) {
        let mut env = LabelEnv::new();
        for (i, name) in names.iter().enumerate() {
            let label = if mask & (1 << i) != 0 {
                Label::High
            } else {
                Label::Low
            };
            env.set(*name, label);
        }
        out.push(env);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic() {
        let cfg = GenConfig::default();
        let a: Vec<Program> = {
            let mut rng = rng_from_seed(11);
            (0..20).map(|_| gen_program(&mut rng, &cfg)).collect()
        };
        let b: Vec<Program> = {
            let mut rng = rng_from_seed(11);
            (0..20).map(|_| gen_program(&mut rng, &cfg)).collect()
        };
        assert_eq!(a, b);
    }

    #[test]
    fn metric_flag_is_respected() {
        let cfg = GenConfig::default();
        let mut rng = rng_from_seed(3);
        for _ in 0..200 {
            let p = gen_program(&mut rng, &cfg);
            assert!(p.body.all_loops_have_metrics());
        }
    }

    #[test]
    fn all_envs_cover_the_lattice() {
        let vars = VarSet::from_names(&["a", "b"]);
        let envs = all_label_envs(&vars);
        assert_eq!(envs.len(), 4);
    }
}
