//! Data-parallel scan primitives used by every enumeration-based check.
//!
//! Trials are indexed `0..n` and classified independently; results are
//! merged by smallest index, so reports are identical whether a scan runs
//! on one thread or many. With the `parallel` feature (default) large scans
//! run on rayon; without it, or with [`ExecMode::Sequential`], everything
//! runs on the calling thread.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How to drive a scan. `Auto` picks rayon when available and the trial
/// count is large enough to amortize the fork/join overhead.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExecMode {
    #[default]
    Auto,
    Sequential,
}

/// Minimum trial count before `Auto` bothers spawning parallel work.
const PAR_THRESHOLD: u64 = 2048;

/// Classification of one trial.
#[derive(Debug, Clone)]
pub enum Verdict<F, W, E> {
    Pass,
    /// Non-fatal observation (e.g. a termination mismatch at finite fuel).
    Warn(W),
    /// A counterexample; the scan's decisive result.
    Fail(F),
    /// Trial could not be evaluated; aborts the scan with an error.
    Abort(E),
}

/// Merged scan result: the first failure and the first warning in index
/// order. A failure earlier than an abort wins; an abort earlier than any
/// failure surfaces as `Err`.
#[derive(Debug)]
pub struct ScanOutcome<F, W> {
    pub first_fail: Option<F>,
    pub first_warn: Option<W>,
}

enum Decisive<F, E> {
    Fail(F),
    Abort(E),
}

struct Acc<F, W, E> {
    decisive: Option<(u64, Decisive<F, E>)>,
    warn: Option<(u64, W)>,
}

impl<F, W, E> Acc<F, W, E> {
    fn empty() -> Self {
        Acc {
            decisive: None,
            warn: None,
        }
    }

    fn add(mut self, idx: u64, v: Verdict<F, W, E>) -> Self {
        match v {
            Verdict::Pass => {}
            Verdict::Warn(w) => {
                if self.warn.as_ref().map_or(true, |(i, _)| idx < *i) {
                    self.warn = Some((idx, w));
                }
            }
            Verdict::Fail(f) => {
                if self.decisive.as_ref().map_or(true, |(i, _)| idx < *i) {
                    self.decisive = Some((idx, Decisive::Fail(f)));
                }
            }
            Verdict::Abort(e) => {
                if self.decisive.as_ref().map_or(true, |(i, _)| idx < *i) {
                    self.decisive = Some((idx, Decisive::Abort(e)));
                }
            }
        }
        self
    }

    fn merge(mut self, other: Self) -> Self {
        if let Some((i, d)) = other.decisive {
            if self.decisive.as_ref().map_or(true, |(j, _)| i < *j) {
                self.decisive = Some((i, d));
            }
        }
        if let Some((i, w)) = other.warn {
            if self.warn.as_ref().map_or(true, |(j, _)| i < *j) {
                self.warn = Some((i, w));
            }
        }
        self
    }

    fn finish(self) -> Result<ScanOutcome<F, W>, E> {
        match self.decisive {
            Some((_, Decisive::Abort(e))) => Err(e),
            Some((_, Decisive::Fail(f))) => Ok(ScanOutcome {
                first_fail: Some(f),
                first_warn: self.warn.map(|(_, w)| w),
            }),
            None => Ok(ScanOutcome {
                first_fail: None,
                first_warn: self.warn.map(|(_, w)| w),
            }),
        }
    }
}

/// Runs `classify` on every index in `0..n` and merges the verdicts.
pub fn scan<F, W, E>(
    mode: ExecMode,
    n: u64,
    classify: impl Fn(u64) -> Verdict<F, W, E> + Sync,
) -> Result<ScanOutcome<F, W>, E>
where
    F: Send,
    W: Send,
    E: Send,
{
    if use_parallel(mode, n) {
        scan_par(n, &classify)
    } else {
        scan_seq(n, classify)
    }
}

/// Sequential scan. Stops at the first failure or abort; keeps the first
/// warning seen before that point.
pub fn scan_seq<F, W, E>(
    n: u64,
    classify: impl Fn(u64) -> Verdict<F, W, E>,
) -> Result<ScanOutcome<F, W>, E> {
    let mut warn = None;
    for idx in 0..n {
        match classify(idx) {
            Verdict::Pass => {}
            Verdict::Warn(w) => {
                if warn.is_none() {
                    warn = Some(w);
                }
            }
            Verdict::Fail(f) => {
                return Ok(ScanOutcome {
                    first_fail: Some(f),
                    first_warn: warn,
                })
            }
            Verdict::Abort(e) => return Err(e),
        }
    }
    Ok(ScanOutcome {
        first_fail: None,
        first_warn: warn,
    })
}

#[cfg(feature = "parallel")]
fn scan_par<F, W, E>(
    n: u64,
    classify: &(impl Fn(u64) -> Verdict<F, W, E> + Sync),
) -> Result<ScanOutcome<F, W>, E>
where
    F: Send,
    W: Send,
    E: Send,
{
    (0..n)
        .into_par_iter()
        .fold(Acc::empty, |acc, idx| acc.add(idx, classify(idx)))
        .reduce(Acc::empty, Acc::merge)
        .finish()
}

#[cfg(not(feature = "parallel"))]
fn scan_par<F, W, E>(
    n: u64,
    classify: &(impl Fn(u64) -> Verdict<F, W, E> + Sync),
) -> Result<ScanOutcome<F, W>, E> {
    scan_seq(n, classify)
}

/// Sums `f(idx)` over `0..n`.
pub fn sum(mode: ExecMode, n: u64, f: impl Fn(u64) -> u64 + Sync) -> u64 {
    if use_parallel(mode, n) {
        sum_par(n, &f)
    } else {
        sum_seq(n, f)
    }
}

pub fn sum_seq(n: u64, f: impl Fn(u64) -> u64) -> u64 {
    (0..n).map(f).sum()
}

#[cfg(feature = "parallel")]
fn sum_par(n: u64, f: &(impl Fn(u64) -> u64 + Sync)) -> u64 {
    (0..n).into_par_iter().map(f).sum()
}

#[cfg(not(feature = "parallel"))]
fn sum_par(n: u64, f: &(impl Fn(u64) -> u64 + Sync)) -> u64 {
    sum_seq(n, f)
}

fn use_parallel(mode: ExecMode, n: u64) -> bool {
    match mode {
        ExecMode::Sequential => false,
        ExecMode::Auto => cfg!(feature = "parallel") && n >= PAR_THRESHOLD,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_fail_is_by_index_not_schedule() {
        // fails at every even index; the reported one must be idx 2
        let classify = |idx: u64| -> Verdict<u64, (), ()> {
            if idx >= 2 && idx % 2 == 0 {
                Verdict::Fail(idx)
            } else {
                Verdict::Pass
            }
        };
        for mode in [ExecMode::Auto, ExecMode::Sequential] {
            let out = scan(mode, 100_000, classify).unwrap();
            assert_eq!(out.first_fail, Some(2));
        }
    }

    #[test]
    fn abort_earlier_than_fail_wins() {
        let classify = |idx: u64| -> Verdict<u64, (), &'static str> {
            match idx {
                3 => Verdict::Abort("boom"),
                5 => Verdict::Fail(5),
                _ => Verdict::Pass,
            }
        };
        assert_eq!(scan(ExecMode::Auto, 10_000, classify).unwrap_err(), "boom");
        // and a fail earlier than the abort is reported as the fail
        let classify2 = |idx: u64| -> Verdict<u64, (), &'static str> {
            match idx {
                1 => Verdict::Fail(1),
                3 => Verdict::Abort("boom"),
                _ => Verdict::Pass,
            }
        };
        let out = scan(ExecMode::Auto, 10_000, classify2).unwrap();
        assert_eq!(out.first_fail, Some(1));
    }

    #[test]
    fn warn_is_tracked_when_no_fail() {
        let classify = |idx: u64| -> Verdict<(), u64, ()> {
            if idx == 7 || idx == 4 {
                Verdict::Warn(idx)
            } else {
                Verdict::Pass
            }
        };
        let out = scan(ExecMode::Auto, 50_000, classify).unwrap();
        assert_eq!(out.first_fail, None);
        assert_eq!(out.first_warn, Some(4));
    }

    #[test]
    fn sums_agree() {
        let f = |idx: u64| idx % 7;
        assert_eq!(sum(ExecMode::Auto, 100_000, f), sum_seq(100_000, f));
    }
}
