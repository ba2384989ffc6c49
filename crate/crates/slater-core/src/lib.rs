//! Exact tournament solving around the Slater rule, plus the reduction
//! pipeline that builds hard Slater instances out of CNF formulas.
//!
//! The library has three layers:
//!
//! * [`tournament`], [`modules`] and [`solver`] hold the combinatorial core:
//!   tournaments, linear orders, voter profiles, module partitions, quotient
//!   digraphs, and exact minimum-feedback-arc-set / Slater computations
//!   (permutation brute force and a subset DP, with module acceleration).
//! * [`formulas`], [`pipeline`], [`gadget`] and [`voters`] implement the
//!   reduction chain: independent-set parity on a graph, Max Model on a CNF,
//!   the clause-splitting restriction, the module-gadget tournament, and the
//!   seven voter orders whose majority aggregation reproduces that tournament.
//! * [`io`] defines the plain-text file formats used by the command line
//!   tool, and [`verify`] packages the randomized/exhaustive cross-check
//!   suites that tie the solvers to the independent oracles.

pub mod formulas;
pub mod gadget;
pub mod io;
pub mod modules;
pub mod pipeline;
pub mod rng;
pub mod solver;
pub mod tournament;
pub mod verify;
pub mod voters;

pub use formulas::{Assignment, Cnf, Graph, MaxModelInstance, PartitionedCnf};
pub use modules::{ModulePartition, WeightedDigraph};
pub use solver::SolveResult;
pub use tournament::{LinearOrder, Profile, Tournament};
