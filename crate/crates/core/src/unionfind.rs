//! Union-find forests as immutable values, with union-by-rank and
//! path-compression optimizations and relational refinement checks.
//!
//! Each entry carries its parent, a rank, and the set of nodes in its
//! subtree. The subtree sets play no algorithmic role; they exist so the
//! structural invariants (liveness, containment, disjointness of root
//! subtrees, acyclicity) can be stated and checked. After path compression
//! they remain valid overapproximations of the actual descendants.
//!
//! Operations return new forests, which makes the n-ary relational checks
//! plain value comparisons:
//!
//! * rank independence: `find`/`union` ignore ranks;
//! * union-by-rank refinement: `union` and `union_by_rank` induce the same
//!   partition;
//! * path-compression refinement: `find_compress` returns the same root as
//!   `find` and preserves every node's partition.

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// One node of the forest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub parent: usize,
    pub rank: u64,
    pub subtree: BTreeSet<usize>,
}

/// A union-find forest over elements `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UFForest {
    entries: Vec<Entry>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum UFError {
    #[error("index {index} out of range for a forest of {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("parent chain from {0} does not reach a root (cycle)")]
    Cyclic(usize),
}

/// A structural invariant violation, found by [`UFForest::check_invariants`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invariant violated at node {node}: {detail}")]
pub struct InvariantViolation {
    pub node: usize,
    pub detail: String,
}

impl UFForest {
    /// Fresh forest: every element is its own root with rank 0.
    pub fn new(n: usize) -> UFForest {
        UFForest {
            entries: (0..n)
                .map(|i| Entry {
                    parent: i,
                    rank: 0,
                    subtree: BTreeSet::from([i]),
                })
                .collect(),
        }
    }

    /// Builds a forest from parent and rank vectors, deriving the subtree
    /// sets. Fails on cycles.
    pub fn from_parents_ranks(parents: &[usize], ranks: &[u64]) -> Result<UFForest, UFError> {
        let n = parents.len();
        assert_eq!(n, ranks.len(), "parents/ranks length mismatch");
        for (i, &p) in parents.iter().enumerate() {
            if p >= n {
                return Err(UFError::IndexOutOfRange { index: p, size: n });
            }
            // detect cycles by walking with a step bound
            let mut cur = i;
            let mut steps = 0;
            while parents[cur] != cur {
                cur = parents[cur];
                steps += 1;
                if steps > n {
                    return Err(UFError::Cyclic(i));
                }
            }
        }
        let mut entries: Vec<Entry> = parents
            .iter()
            .zip(ranks.iter())
            .map(|(&parent, &rank)| Entry {
                parent,
                rank,
                subtree: BTreeSet::new(),
            })
            .collect();
        for i in 0..n {
            // i belongs to the subtree of every node on its parent chain
            let mut cur = i;
            loop {
                entries[cur].subtree.insert(i);
                if entries[cur].parent == cur {
                    break;
                }
                cur = entries[cur].parent;
            }
        }
        Ok(UFForest { entries })
    }

    /// Raw constructor bypassing all validation. Exists so tests can build
    /// deliberately broken forests and operation mutants.
    #[doc(hidden)]
    pub fn from_raw_entries(entries: Vec<Entry>) -> UFForest {
        UFForest { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn parent(&self, i: usize) -> usize {
        self.entries[i].parent
    }

    pub fn rank(&self, i: usize) -> u64 {
        self.entries[i].rank
    }

    pub fn subtree(&self, i: usize) -> &BTreeSet<usize> {
        &self.entries[i].subtree
    }

    pub fn is_root(&self, i: usize) -> bool {
        self.entries[i].parent == i
    }

    fn check_index(&self, i: usize) -> Result<(), UFError> {
        if i < self.entries.len() {
            Ok(())
        } else {
            Err(UFError::IndexOutOfRange {
                index: i,
                size: self.entries.len(),
            })
        }
    }

    /// Root of `i`'s tree. The forest is unchanged.
    pub fn find(&self, i: usize) -> Result<usize, UFError> {
        self.check_index(i)?;
        let mut cur = i;
        let mut steps = 0;
        while self.entries[cur].parent != cur {
            cur = self.entries[cur].parent;
            steps += 1;
            if steps > self.entries.len() {
                return Err(UFError::Cyclic(i));
            }
        }
        Ok(cur)
    }

    /// Merges the partitions of `i1` and `i2`: `r1`'s root points to `r2`,
    /// whose subtree becomes the union. Same root: unchanged.
    pub fn union(&self, i1: usize, i2: usize) -> Result<UFForest, UFError> {
        let r1 = self.find(i1)?;
        let r2 = self.find(i2)?;
        if r1 == r2 {
            return Ok(self.clone());
        }
        let mut out = self.clone();
        out.entries[r1].parent = r2;
        let s1 = out.entries[r1].subtree.clone();
        out.entries[r2].subtree.extend(s1);
        Ok(out)
    }

    /// Rank-directed union: the lower-rank root points to the higher-rank
    /// root; on a tie `r2` points to `r1` and `r1`'s rank increments.
    pub fn union_by_rank(&self, i1: usize, i2: usize) -> Result<UFForest, UFError> {
        let r1 = self.find(i1)?;
        let r2 = self.find(i2)?;
        if r1 == r2 {
            return Ok(self.clone());
        }
        let mut out = self.clone();
        let (d1, d2) = (out.entries[r1].rank, out.entries[r2].rank);
        if d1 < d2 {
            out.entries[r1].parent = r2;
            let s1 = out.entries[r1].subtree.clone();
            out.entries[r2].subtree.extend(s1);
        } else {
            out.entries[r2].parent = r1;
            if d1 == d2 {
                out.entries[r1].rank = d1 + 1;
            }
            let s2 = out.entries[r2].subtree.clone();
            out.entries[r1].subtree.extend(s2);
        }
        Ok(out)
    }

    /// Root of `i`'s tree, plus a forest where every node on the walked
    /// path points directly at the root. Ranks and subtree sets are kept.
    pub fn find_compress(&self, i: usize) -> Result<(usize, UFForest), UFError> {
        let root = self.find(i)?;
        let mut out = self.clone();
        let mut cur = i;
        while out.entries[cur].parent != cur {
            let next = out.entries[cur].parent;
            out.entries[cur].parent = root;
            cur = next;
        }
        Ok((root, out))
    }

    /// Checks the structural invariants: subtree membership and bounds,
    /// strict containment along parent links, disjointness of root
    /// subtrees, and acyclicity.
    pub fn check_invariants(&self) -> Result<(), InvariantViolation> {
        let n = self.entries.len();
        for (i, e) in self.entries.iter().enumerate() {
            if e.parent >= n {
                return Err(InvariantViolation {
                    node: i,
                    detail: format!("parent {} out of range", e.parent),
                });
            }
            if !e.subtree.contains(&i) {
                return Err(InvariantViolation {
                    node: i,
                    detail: "node missing from its own subtree".to_string(),
                });
            }
            if e.subtree.iter().any(|&j| j >= n) {
                return Err(InvariantViolation {
                    node: i,
                    detail: "subtree mentions an out-of-range node".to_string(),
                });
            }
            if e.parent != i {
                let parent_subtree = &self.entries[e.parent].subtree;
                if !e.subtree.is_subset(parent_subtree) || e.subtree == *parent_subtree {
                    return Err(InvariantViolation {
                        node: i,
                        detail: "subtree is not strictly contained in the parent's".to_string(),
                    });
                }
            }
            if self.find(i).is_err() {
                return Err(InvariantViolation {
                    node: i,
                    detail: "parent chain does not reach a root".to_string(),
                });
            }
        }
        for i in 0..n {
            if !self.is_root(i) {
                continue;
            }
            for j in (i + 1)..n {
                if !self.is_root(j) {
                    continue;
                }
                if !self.entries[i].subtree.is_disjoint(&self.entries[j].subtree) {
                    return Err(InvariantViolation {
                        node: i,
                        detail: format!("root subtrees of {i} and {j} overlap"),
                    });
                }
            }
        }
        Ok(())
    }

    /// Height of the tallest tree (a root alone has height 0).
    pub fn max_height(&self) -> usize {
        (0..self.len())
            .map(|i| {
                let mut cur = i;
                let mut h = 0;
                while self.entries[cur].parent != cur {
                    cur = self.entries[cur].parent;
                    h += 1;
                }
                h
            })
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for UFForest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parents [")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", e.parent)?;
        }
        write!(f, "] ranks [")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", e.rank)?;
        }
        write!(f, "]")
    }
}

/// `∀ i`: parents and subtrees agree; ranks are unconstrained.
pub fn equal_but_rank(a: &UFForest, b: &UFForest) -> bool {
    a.len() == b.len()
        && (0..a.len()).all(|i| a.parent(i) == b.parent(i) && a.subtree(i) == b.subtree(i))
}

/// How a refinement check generates its instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenParams {
    /// All valid parent vectors of depth at most `max_depth`.
    Exhaustive { max_depth: usize },
    /// Seeded random forests built by applying random unions.
    Randomized { trials: u64, seed: u64 },
}

/// Result of a refinement check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RefineCheck {
    Pass { instances: u64 },
    Counterexample { detail: String },
}

/// All parent vectors over `0..n` that form forests of depth <= max_depth.
pub fn exhaustive_parent_vectors(n: usize, max_depth: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut parents = vec![0usize; n];
    enumerate_parents(n, 0, &mut parents, &mut out);
    out.retain(|p| forest_depth(p).map_or(false, |d| d <= max_depth));
    out
}

fn enumerate_parents(n: usize, i: usize, parents: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if i == n {
        out.push(parents.clone());
        return;
    }
    for p in 0..n {
        parents[i] = p;
        enumerate_parents(n, i + 1, parents, out);
    }
}

fn forest_depth(parents: &[usize]) -> Option<usize> {
    let n = parents.len();
    let mut max = 0;
    for mut cur in 0..n {
        let mut steps = 0;
        while parents[cur] != cur {
            cur = parents[cur];
            steps += 1;
            if steps > n {
                return None; // cycle
            }
        }
        max = max.max(steps);
    }
    Some(max)
}

/// A random forest built by `ops` random unions (alternating plain and
/// by-rank) on a fresh forest; invariants hold by construction.
pub fn random_forest(n: usize, ops: usize, rng: &mut ChaCha8Rng) -> UFForest {
    let mut uf = UFForest::new(n);
    for k in 0..ops {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        uf = if k % 2 == 0 {
            uf.union_by_rank(i, j).expect("indices in range")
        } else {
            uf.union(i, j).expect("indices in range")
        };
    }
    uf
}

fn perturb_ranks(uf: &UFForest, rng: &mut ChaCha8Rng, max_rank: u64) -> UFForest {
    let mut out = uf.clone();
    for e in &mut out.entries {
        e.rank = rng.gen_range(0..=max_rank);
    }
    out
}

type FindFn<'a> = &'a dyn Fn(&UFForest, usize) -> Result<usize, UFError>;
type UnionFn<'a> = &'a dyn Fn(&UFForest, usize, usize) -> Result<UFForest, UFError>;

/// Rank independence: on two forests equal except for ranks, `find`
/// returns equal roots (leaving the forests equal-but-rank), and `union`
/// results remain equal-but-rank. Checked for all elements and pairs on
/// each generated forest pair.
pub fn rank_independence_check(n: usize, params: GenParams) -> RefineCheck {
    rank_independence_check_with(n, params, &|uf, i| uf.find(i), &|uf, i, j| uf.union(i, j))
}

pub fn rank_independence_check_with(
    n: usize,
    params: GenParams,
    find_fn: FindFn,
    union_fn: UnionFn,
) -> RefineCheck {
    let mut instances = 0u64;
    let mut run_pair = |h1: &UFForest, h2: &UFForest| -> Option<String> {
        for i in 0..n {
            instances += 1;
            match (find_fn(h1, i), find_fn(h2, i)) {
                (Ok(r1), Ok(r2)) => {
                    if r1 != r2 {
                        return Some(format!(
                            "find({i}) differs: {r1} vs {r2} on {h1} / {h2}"
                        ));
                    }
                }
                (e1, e2) => return Some(format!("find({i}) errored: {e1:?} / {e2:?}")),
            }
        }
        for i1 in 0..n {
            for i2 in 0..n {
                instances += 1;
                match (union_fn(h1, i1, i2), union_fn(h2, i1, i2)) {
                    (Ok(u1), Ok(u2)) => {
                        if !equal_but_rank(&u1, &u2) {
                            return Some(format!(
                                "union({i1},{i2}) results differ beyond ranks on {h1} / {h2}"
                            ));
                        }
                    }
                    (e1, e2) => {
                        return Some(format!("union({i1},{i2}) errored: {e1:?} / {e2:?}"))
                    }
                }
            }
        }
        None
    };
    match params {
        GenParams::Exhaustive { max_depth } => {
            // rank-zero forests against every rank vector over {0,1,2}
            for parents in exhaustive_parent_vectors(n, max_depth) {
                let h1 = UFForest::from_parents_ranks(&parents, &vec![0; n]).expect("valid");
                let mut ranks = vec![0u64; n];
                loop {
                    let h2 = UFForest::from_parents_ranks(&parents, &ranks).expect("valid");
                    if let Some(detail) = run_pair(&h1, &h2) {
                        return RefineCheck::Counterexample { detail };
                    }
                    if !next_rank_vector(&mut ranks, 2) {
                        break;
                    }
                }
            }
        }
        GenParams::Randomized { trials, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..trials {
                let ops = rng.gen_range(0..=2 * n);
                let h1 = random_forest(n, ops, &mut rng);
                let h2 = perturb_ranks(&h1, &mut rng, 3);
                if let Some(detail) = run_pair(&h1, &h2) {
                    return RefineCheck::Counterexample { detail };
                }
            }
        }
    }
    RefineCheck::Pass { instances }
}

fn next_rank_vector(ranks: &mut [u64], max: u64) -> bool {
    for r in ranks.iter_mut() {
        if *r < max {
            *r += 1;
            return true;
        }
        *r = 0;
    }
    false
}

/// Union-by-rank refinement: `union` and `union_by_rank` from the same
/// forest put every pair `(j1, j2)` in the same partition if and only if
/// the other does.
pub fn union_by_rank_refinement_check(n: usize, params: GenParams) -> RefineCheck {
    union_by_rank_refinement_check_with(n, params, &|uf, i, j| uf.union_by_rank(i, j))
}

pub fn union_by_rank_refinement_check_with(
    n: usize,
    params: GenParams,
    union_by_rank_fn: UnionFn,
) -> RefineCheck {
    let mut instances = 0u64;
    let mut run_one = |uf: &UFForest, i1: usize, i2: usize| -> Option<String> {
        let h1 = match uf.union(i1, i2) {
            Ok(h) => h,
            Err(e) => return Some(format!("union errored: {e}")),
        };
        let h2 = match union_by_rank_fn(uf, i1, i2) {
            Ok(h) => h,
            Err(e) => return Some(format!("union_by_rank errored: {e}")),
        };
        for j1 in 0..n {
            for j2 in 0..n {
                instances += 1;
                let roots = (h1.find(j1), h1.find(j2), h2.find(j1), h2.find(j2));
                let (a1, a2, b1, b2) = match roots {
                    (Ok(a1), Ok(a2), Ok(b1), Ok(b2)) => (a1, a2, b1, b2),
                    other => return Some(format!("find errored after union: {other:?}")),
                };
                let (same1, same2) = (a1 == a2, b1 == b2);
                if same1 != same2 {
                    return Some(format!(
                        "partitions disagree for ({j1},{j2}) after union({i1},{i2}) on {uf}: \
                         plain {same1}, by-rank {same2}"
                    ));
                }
            }
        }
        None
    };
    match params {
        GenParams::Exhaustive { max_depth } => {
            for parents in exhaustive_parent_vectors(n, max_depth) {
                // rank values only matter through comparisons at the two
                // roots; {0,1} covers less/equal/greater
                let mut ranks = vec![0u64; n];
                loop {
                    let uf = UFForest::from_parents_ranks(&parents, &ranks).expect("valid");
                    for i1 in 0..n {
                        for i2 in 0..n {
                            if let Some(detail) = run_one(&uf, i1, i2) {
                                return RefineCheck::Counterexample { detail };
                            }
                        }
                    }
                    if !next_rank_vector(&mut ranks, 1) {
                        break;
                    }
                }
            }
        }
        GenParams::Randomized { trials, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..trials {
                let ops = rng.gen_range(0..=2 * n);
                let uf = random_forest(n, ops, &mut rng);
                let i1 = rng.gen_range(0..n);
                let i2 = rng.gen_range(0..n);
                if let Some(detail) = run_one(&uf, i1, i2) {
                    return RefineCheck::Counterexample { detail };
                }
            }
        }
    }
    RefineCheck::Pass { instances }
}

type CompressFn<'a> = &'a dyn Fn(&UFForest, usize) -> Result<(usize, UFForest), UFError>;

/// Path-compression refinement: `find` and `find_compress` return the same
/// root, and every node has the same root before and after compression.
pub fn find_compress_refinement_check(n: usize, params: GenParams) -> RefineCheck {
    find_compress_refinement_check_with(n, params, &|uf, i| uf.find_compress(i))
}

pub fn find_compress_refinement_check_with(
    n: usize,
    params: GenParams,
    compress_fn: CompressFn,
) -> RefineCheck {
    let mut instances = 0u64;
    let mut run_one = |uf: &UFForest, i: usize| -> Option<String> {
        let r1 = match uf.find(i) {
            Ok(r) => r,
            Err(e) => return Some(format!("find errored: {e}")),
        };
        let (r2, h2) = match compress_fn(uf, i) {
            Ok(x) => x,
            Err(e) => return Some(format!("find_compress errored: {e}")),
        };
        if r1 != r2 {
            return Some(format!("roots differ for {i} on {uf}: {r1} vs {r2}"));
        }
        for j in 0..n {
            instances += 1;
            let a = uf.find(j).ok();
            let b = h2.find(j).ok();
            if a.is_none() || a != b {
                return Some(format!(
                    "root of {j} changed after find_compress({i}) on {uf}: {a:?} vs {b:?}"
                ));
            }
        }
        None
    };
    match params {
        GenParams::Exhaustive { max_depth } => {
            for parents in exhaustive_parent_vectors(n, max_depth) {
                let uf = UFForest::from_parents_ranks(&parents, &vec![0; n]).expect("valid");
                for i in 0..n {
                    if let Some(detail) = run_one(&uf, i) {
                        return RefineCheck::Counterexample { detail };
                    }
                }
            }
        }
        GenParams::Randomized { trials, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..trials {
                let ops = rng.gen_range(0..=2 * n);
                let uf = random_forest(n, ops, &mut rng);
                let i = rng.gen_range(0..n);
                if let Some(detail) = run_one(&uf, i) {
                    return RefineCheck::Counterexample { detail };
                }
            }
        }
    }
    RefineCheck::Pass { instances }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_find_is_identity() {
        let uf = UFForest::new(4);
        for i in 0..4 {
            assert_eq!(uf.find(i).unwrap(), i);
        }
        assert!(uf.find(4).is_err());
    }

    #[test]
    fn chain_find_follows_parents() {
        let uf = UFForest::from_parents_ranks(&[1, 2, 2], &[0, 0, 0]).unwrap();
        assert_eq!(uf.find(0).unwrap(), 2);
        uf.check_invariants().unwrap();
    }

    #[test]
    fn union_examples() {
        let uf = UFForest::new(3);
        let u = uf.union(0, 1).unwrap();
        assert_eq!(
            (u.parent(0), u.parent(1), u.parent(2)),
            (1, 1, 2)
        );
        assert_eq!(u.subtree(1), &BTreeSet::from([0, 1]));
        assert_eq!(u.find(0).unwrap(), 1);
        u.check_invariants().unwrap();

        // same root: unchanged
        assert_eq!(u.union(0, 1).unwrap(), u);

        let u2 = u.union(1, 2).unwrap();
        for i in 0..3 {
            assert_eq!(u2.find(i).unwrap(), 2);
        }
        u2.check_invariants().unwrap();
    }

    #[test]
    fn union_by_rank_examples() {
        // tie: r2 points to r1, r1's rank increments
        let uf = UFForest::new(2);
        let u = uf.union_by_rank(0, 1).unwrap();
        assert_eq!(u.parent(1), 0);
        assert_eq!(u.rank(0), 1);
        u.check_invariants().unwrap();

        // lower rank points to higher
        let uf = UFForest::from_parents_ranks(&[0, 1], &[0, 1]).unwrap();
        let u = uf.union_by_rank(0, 1).unwrap();
        assert_eq!(u.parent(0), 1);
        assert_eq!((u.rank(0), u.rank(1)), (0, 1));

        // same root: unchanged
        assert_eq!(u.union_by_rank(0, 1).unwrap(), u);
    }

    #[test]
    fn find_compress_examples() {
        let uf = UFForest::from_parents_ranks(&[1, 2, 2], &[0, 0, 0]).unwrap();
        let (r, c) = uf.find_compress(0).unwrap();
        assert_eq!(r, 2);
        assert_eq!(
            (c.parent(0), c.parent(1), c.parent(2)),
            (2, 2, 2)
        );
        c.check_invariants().unwrap();

        // on a root: unchanged
        let (r, c) = uf.find_compress(2).unwrap();
        assert_eq!(r, 2);
        assert_eq!(c, uf);

        // depth-1 child: root returned, forest unchanged
        let (r, c) = uf.find_compress(1).unwrap();
        assert_eq!(r, 2);
        assert_eq!(c, uf);
    }

    #[test]
    fn invariants_catch_corruption() {
        let uf = UFForest::new(2);
        let mut broken = uf.clone();
        broken.entries[0].subtree.clear();
        assert!(broken.check_invariants().is_err());

        let cyclic = UFForest::from_parents_ranks(&[1, 0], &[0, 0]);
        assert!(matches!(cyclic, Err(UFError::Cyclic(_))));
    }

    #[test]
    fn exhaustive_generation_counts() {
        // all forests on 3 nodes: 16 (Cayley: (n+1)^(n-1)); depth<=1 excludes chains
        assert_eq!(exhaustive_parent_vectors(3, 2).len(), 16);
        assert!(exhaustive_parent_vectors(3, 1).len() < 16);
    }

    #[test]
    fn refinement_checks_pass_small() {
        let p = GenParams::Exhaustive { max_depth: 2 };
        assert!(matches!(
            rank_independence_check(3, p),
            RefineCheck::Pass { .. }
        ));
        assert!(matches!(
            union_by_rank_refinement_check(3, p),
            RefineCheck::Pass { .. }
        ));
        assert!(matches!(
            find_compress_refinement_check(3, p),
            RefineCheck::Pass { .. }
        ));
    }

    #[test]
    fn mutants_are_caught() {
        let p = GenParams::Exhaustive { max_depth: 2 };
        // a union that consults ranks is not rank-independent
        let rank_consulting: UnionFn = &|uf, i, j| uf.union_by_rank(i, j);
        assert!(matches!(
            rank_independence_check_with(4, p, &|uf, i| uf.find(i), rank_consulting),
            RefineCheck::Counterexample { .. }
        ));

        // a by-rank union that ignores its second argument merges nothing
        let wrong_roots: UnionFn = &|uf, i, _j| uf.union_by_rank(i, i);
        assert!(matches!(
            union_by_rank_refinement_check_with(3, p, wrong_roots),
            RefineCheck::Counterexample { .. }
        ));

        // a compress that points the node at itself splits its partition
        let detach: CompressFn = &|uf, i| {
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
        assert!(matches!(
            find_compress_refinement_check_with(3, p, detach),
            RefineCheck::Counterexample { .. }
        ));
    }

    #[test]
    fn random_forests_satisfy_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let uf = random_forest(6, 10, &mut rng);
            uf.check_invariants().unwrap();
        }
    }
}
