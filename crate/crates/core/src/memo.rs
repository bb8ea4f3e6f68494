//! Memoization of total and recursive functions over naturals, with
//! semantic correctness checking.
//!
//! Recursive functions are supplied as *skeletons*: evaluators that receive
//! an oracle for recursive calls. The oracle only answers at points
//! strictly below the current one; the descent discipline is enforced
//! dynamically, so a skeleton that asks for `y >= x` fails with
//! [`MemoError::WellFoundednessViolation`] instead of looping.
//!
//! Memo states are immutable values threaded through calls. A state is
//! *valid* for a reference function when it is a subset of the function's
//! graph; both memoizers preserve validity, checked by [`computes_check`].

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Immutable memoization state: the domain points cached so far.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MemoState {
    entries: BTreeMap<u64, i64>,
}

impl MemoState {
    pub fn empty() -> MemoState {
        MemoState::default()
    }

    pub fn get(&self, x: u64) -> Option<i64> {
        self.entries.get(&x).copied()
    }

    /// A new state with `x ↦ y` added.
    pub fn insert(&self, x: u64, y: i64) -> MemoState {
        let mut entries = self.entries.clone();
        entries.insert(x, y);
        MemoState { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains_all(&self, other: &MemoState) -> bool {
        other
            .entries
            .iter()
            .all(|(x, y)| self.get(*x) == Some(*y))
    }

    /// Every cached pair agrees with the reference function.
    pub fn valid_for(&self, reference: &dyn Fn(u64) -> i64) -> bool {
        self.entries.iter().all(|(&x, &y)| y == reference(x))
    }

    pub fn entries(&self) -> impl Iterator<Item = (u64, i64)> + '_ {
        self.entries.iter().map(|(&x, &y)| (x, y))
    }
}

impl fmt::Display for MemoState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (x, y)) in self.entries().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}->{y}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MemoError {
    #[error("well-foundedness violation: evaluating at {at} requested the value at {requested}")]
    WellFoundednessViolation { at: u64, requested: u64 },
    #[error("arithmetic overflow in skeleton at {0}")]
    Overflow(u64),
}

/// Call counters for observing memoization behavior.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CallTrace {
    /// Reference-function or skeleton evaluations.
    pub reference_calls: u64,
    /// Recursive-call requests made by skeletons.
    pub oracle_calls: u64,
    /// Requests answered from the cache.
    pub cache_hits: u64,
}

impl fmt::Display for CallTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "evals={} oracle-calls={} cache-hits={}",
            self.reference_calls, self.oracle_calls, self.cache_hits
        )
    }
}

/// A recursive function with its call sites made explicit: evaluating at
/// `x` may request values only at points strictly below `x`.
pub trait Skeleton: Sync {
    fn eval(
        &self,
        x: u64,
        oracle: &mut dyn FnMut(u64) -> Result<i64, MemoError>,
    ) -> Result<i64, MemoError>;

    fn name(&self) -> &str;
}

/// Fibonacci with `fib(0) = fib(1) = 1`.
pub struct FibSkeleton;

impl Skeleton for FibSkeleton {
    fn eval(
        &self,
        x: u64,
        oracle: &mut dyn FnMut(u64) -> Result<i64, MemoError>,
    ) -> Result<i64, MemoError> {
        if x <= 1 {
            return Ok(1);
        }
        let a = oracle(x - 1)?;
        let b = oracle(x - 2)?;
        a.checked_add(b).ok_or(MemoError::Overflow(x))
    }

    fn name(&self) -> &str {
        "fib"
    }
}

/// Triangular numbers: `tri(0) = 0`, `tri(x) = x + tri(x - 1)`.
pub struct TriangleSkeleton;

impl Skeleton for TriangleSkeleton {
    fn eval(
        &self,
        x: u64,
        oracle: &mut dyn FnMut(u64) -> Result<i64, MemoError>,
    ) -> Result<i64, MemoError> {
        if x == 0 {
            return Ok(0);
        }
        let rest = oracle(x - 1)?;
        rest.checked_add(x as i64).ok_or(MemoError::Overflow(x))
    }

    fn name(&self) -> &str {
        "triangle"
    }
}

/// A deliberately broken skeleton that violates the descent discipline at
/// its argument; used to exercise the dynamic check.
pub struct AscendingSkeleton;

impl Skeleton for AscendingSkeleton {
    fn eval(
        &self,
        x: u64,
        oracle: &mut dyn FnMut(u64) -> Result<i64, MemoError>,
    ) -> Result<i64, MemoError> {
        oracle(x + 1)
    }

    fn name(&self) -> &str {
        "ascending"
    }
}

pub fn builtin_skeleton(name: &str) -> Option<&'static dyn Skeleton> {
    match name {
        "fib" => Some(&FibSkeleton),
        "triangle" => Some(&TriangleSkeleton),
        _ => None,
    }
}

/// The fixed point of a skeleton at `x`, by plain recursion.
pub fn fixp(sk: &dyn Skeleton, x: u64) -> Result<i64, MemoError> {
    sk.eval(x, &mut |y| {
        if y >= x {
            return Err(MemoError::WellFoundednessViolation { at: x, requested: y });
        }
        fixp(sk, y)
    })
}

/// Memoizes one call of a total function: a cache hit skips the function.
pub fn memoize(
    g: &dyn Fn(u64) -> i64,
    x: u64,
    st: &MemoState,
    trace: &mut CallTrace,
) -> (i64, MemoState) {
    match st.get(x) {
        Some(y) => {
            trace.cache_hits += 1;
            (y, st.clone())
        }
        None => {
            trace.reference_calls += 1;
            let y = g(x);
            (y, st.insert(x, y))
        }
    }
}

/// Memoized fixed point: every point, including `x` itself, is served from
/// the cache when present and cached once computed.
pub fn memoize_rec(
    sk: &dyn Skeleton,
    x: u64,
    st: &MemoState,
    trace: &mut CallTrace,
) -> Result<(i64, MemoState), MemoError> {
    if let Some(y) = st.get(x) {
        trace.cache_hits += 1;
        return Ok((y, st.clone()));
    }
    trace.reference_calls += 1;
    let mut state = st.clone();
    let mut failure: Option<MemoError> = None;
    let y = {
        let mut oracle = |y: u64| -> Result<i64, MemoError> {
            trace.oracle_calls += 1;
            if y >= x {
                let e = MemoError::WellFoundednessViolation { at: x, requested: y };
                failure = Some(e.clone());
                return Err(e);
            }
            let (v, st2) = memoize_rec(sk, y, &state, trace)?;
            state = st2;
            Ok(v)
        };
        sk.eval(x, &mut oracle)?
    };
    if let Some(e) = failure {
        return Err(e);
    }
    Ok((y, state.insert(x, y)))
}

/// How `computes_check` samples valid initial states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateSampler {
    /// Only the empty state.
    EmptyOnly,
    /// Seeded random subsets of the reference graph, plus the empty and
    /// full states.
    Random { seed: u64 },
}

/// Result of [`computes_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ComputesCheck {
    Pass { checked: u64 },
    Counterexample { x: u64, state: MemoState, detail: String },
}

/// Checks that a pair-returning memoized function computes `reference`:
/// from any sampled valid state and any `x <= dom_bound`, the result equals
/// `reference(x)`, the output state stays valid, and the cache only grows.
pub fn computes_check(
    memoized: &dyn Fn(u64, &MemoState) -> Result<(i64, MemoState), MemoError>,
    reference: &dyn Fn(u64) -> i64,
    dom_bound: u64,
    sampler: StateSampler,
    trials: u64,
) -> Result<ComputesCheck, MemoError> {
    let graph: Vec<(u64, i64)> = (0..=dom_bound).map(|x| (x, reference(x))).collect();
    let mut states: Vec<MemoState> = vec![MemoState::empty()];
    if let StateSampler::Random { seed } = sampler {
        let mut full = MemoState::empty();
        for &(x, y) in &graph {
            full = full.insert(x, y);
        }
        states.push(full);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..trials {
            let mut st = MemoState::empty();
            for &(x, y) in &graph {
                if rng.gen_bool(0.5) {
                    st = st.insert(x, y);
                }
            }
            states.push(st);
        }
    }
    let mut checked = 0u64;
    for st in &states {
        debug_assert!(st.valid_for(reference));
        for x in 0..=dom_bound {
            let (y, st2) = memoized(x, st)?;
            checked += 1;
            if y != reference(x) {
                return Ok(ComputesCheck::Counterexample {
                    x,
                    state: st.clone(),
                    detail: format!("returned {y}, reference gives {}", reference(x)),
                });
            }
            if !st2.valid_for(reference) {
                return Ok(ComputesCheck::Counterexample {
                    x,
                    state: st.clone(),
                    detail: format!("output state {st2} is not a subset of the reference graph"),
                });
            }
            if !st2.contains_all(st) {
                return Ok(ComputesCheck::Counterexample {
                    x,
                    state: st.clone(),
                    detail: "output state dropped cached entries".to_string(),
                });
            }
        }
    }
    Ok(ComputesCheck::Pass { checked })
}
