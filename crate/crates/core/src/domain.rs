//! Finite test domains and store enumeration.
//!
//! Bounded-exhaustive checks quantify over all stores whose values are
//! drawn from a declared finite value set. Stores are indexed in
//! lexicographic order over the declared-variable order (first variable
//! most significant), which fixes which counterexample is "first".

use std::sync::Arc;

use crate::lang::{Store, VarSet};

pub const DEFAULT_BUDGET: u64 = 10_000_000;
pub const DEFAULT_FUEL_BOUND: u64 = 8;

/// A finite value set plus the fuel bound for fuel-mode comparisons and the
/// enumeration budget an invocation is willing to spend.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestDomain {
    values: Vec<i64>,
    pub fuel_bound: u64,
    pub budget: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DomainError {
    #[error("enumeration of {needed} configurations exceeds the budget of {budget} (raise --budget to override)")]
    BudgetExceeded { needed: u64, budget: u64 },
    #[error("test domain must contain at least one value")]
    EmptyDomain,
}

impl TestDomain {
    pub fn new(mut values: Vec<i64>) -> Result<TestDomain, DomainError> {
        if values.is_empty() {
            return Err(DomainError::EmptyDomain);
        }
        values.sort_unstable();
        values.dedup();
        Ok(TestDomain {
            values,
            fuel_bound: DEFAULT_FUEL_BOUND,
            budget: DEFAULT_BUDGET,
        })
    }

    /// Inclusive integer range `lo..=hi`.
    pub fn range(lo: i64, hi: i64) -> Result<TestDomain, DomainError> {
        if lo > hi {
            return Err(DomainError::EmptyDomain);
        }
        TestDomain::new((lo..=hi).collect())
    }

    pub fn with_fuel(mut self, fuel_bound: u64) -> TestDomain {
        self.fuel_bound = fuel_bound;
        self
    }

    pub fn with_budget(mut self, budget: u64) -> TestDomain {
        self.budget = budget;
        self
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    /// `|values|^nvars`, or `None` on overflow.
    pub fn store_count(&self, nvars: usize) -> Option<u64> {
        let base = self.values.len() as u64;
        let mut acc: u64 = 1;
        for _ in 0..nvars {
            acc = acc.checked_mul(base)?;
        }
        Some(acc)
    }

    /// Checks that `trials` configurations fit the budget.
    pub fn charge(&self, trials: Option<u64>) -> Result<u64, DomainError> {
        match trials {
            Some(t) if t <= self.budget => Ok(t),
            Some(t) => Err(DomainError::BudgetExceeded {
                needed: t,
                budget: self.budget,
            }),
            None => Err(DomainError::BudgetExceeded {
                needed: u64::MAX,
                budget: self.budget,
            }),
        }
    }

    /// The `idx`-th store over `vars` in lexicographic order.
    pub fn store_at(&self, vars: &Arc<VarSet>, idx: u64) -> Store {
        let base = self.values.len() as u64;
        let n = vars.len();
        let mut values = vec![0i64; n];
        let mut rem = idx;
        for slot in (0..n).rev() {
            values[slot] = self.values[(rem % base) as usize];
            rem /= base;
        }
        debug_assert_eq!(rem, 0, "store index out of range");
        Store::from_values(Arc::clone(vars), values)
    }

    /// A pair of stores addressed by a single index: `idx = l * count_r + r`,
    /// so the left store is the more significant digit and pairs enumerate
    /// lexicographically as (left, right).
    pub fn store_pair_at(
        &self,
        left_vars: &Arc<VarSet>,
        right_vars: &Arc<VarSet>,
        idx: u64,
    ) -> (Store, Store) {
        let right_count = self
            .store_count(right_vars.len())
            .expect("pair index overflow");
        let l = idx / right_count;
        let r = idx % right_count;
        (
            self.store_at(left_vars, l),
            self.store_at(right_vars, r),
        )
    }

    /// Human-readable description, e.g. `{0,1,2}`.
    pub fn describe(&self) -> String {
        let parts: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        format!("{{{}}}", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::VarSet;

    #[test]
    fn stores_enumerate_lexicographically() {
        let d = TestDomain::new(vec![0, 1]).unwrap();
        let vars = Arc::new(VarSet::from_names(&["a", "b"]));
        let all: Vec<Vec<i64>> = (0..d.store_count(2).unwrap())
            .map(|i| d.store_at(&vars, i).values().to_vec())
            .collect();
        assert_eq!(
            all,
            vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]
        );
    }

    #[test]
    fn values_are_sorted_and_deduped() {
        let d = TestDomain::new(vec![3, 1, 3, 0]).unwrap();
        assert_eq!(d.values(), &[0, 1, 3]);
        assert_eq!(d.describe(), "{0,1,3}");
    }

    #[test]
    fn budget_is_enforced() {
        let d = TestDomain::range(0, 9).unwrap().with_budget(99);
        assert!(d.charge(d.store_count(2)).is_err());
        assert_eq!(d.charge(d.store_count(1)).unwrap(), 10);
    }
}
