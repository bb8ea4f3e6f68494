//! Relational checking for a small imperative WHILE language.
//!
//! The crate bundles a family of checkers that replace deductive proof
//! machinery with definitional interpreters and bounded-exhaustive
//! enumeration over finite domains:
//!
//! * [`lang`] — the WHILE AST, concrete syntax, and two interpreters
//!   (termination metrics vs. a global fuel budget);
//! * [`relsem`] — semantic read/write footprints, command equivalence, and
//!   validators for footprint-based transformations (swap, idempotence,
//!   redundant writes);
//! * [`rhl`] — relational Hoare judgements, a bounded semantic tester, and
//!   a proof checker for a Benton-style rule set;
//! * [`ifc`] — an information-flow type system, semantic noninterference
//!   checkers, a hybrid static/semantic checker, a dynamic monitor, and
//!   delimited release;
//! * [`prob`] — exact probabilistic reasoning over finite random tapes,
//!   with the one-time-pad secrecy check;
//! * [`memo`] — memoized fixed points of recursive skeletons with dynamic
//!   descent checking;
//! * [`unionfind`] — union-find refinement checks (rank independence,
//!   union-by-rank, path compression) over immutable forests.
//!
//! Enumerations run data-parallel on rayon under the `parallel` feature
//! (enabled by default) and sequentially without it; reported
//! counterexamples are the first in enumeration order either way.

pub mod domain;
pub mod exec;
pub mod gen;
pub mod ifc;
pub mod lang;
pub mod memo;
pub mod prob;
pub mod relsem;
pub mod rhl;
pub mod sexp;
pub mod unionfind;

pub use domain::TestDomain;
