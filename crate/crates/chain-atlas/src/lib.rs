//! Analysis of matrix-chain parenthesisations.
//!
//! A chain of `n` matrices with dimension tuple `k_0..k_n` can be evaluated
//! with any of the `C_{n-1}` parenthesisations (orderings), whose costs can
//! differ enormously. This crate provides:
//!
//! - exact optimal orderings by dynamic programming, with a brute-force
//!   oracle over the full enumeration ([`dp_solve`], [`brute_force_solve`],
//!   [`enumerate_orderings`]);
//! - the fan-out family: the `n+1` orderings whose removal can hurt by an
//!   unbounded factor, and the cheapest of them, which is always within a
//!   factor of two of the optimum ([`fan_out`], [`essential_set`],
//!   [`best_essential`]);
//! - exact penalties for forbidding any subset of orderings
//!   ([`penalty_of_removal`], [`penalty_nonessential_removed`]);
//! - synthesis of witness instances on which a chosen ordering is
//!   uniquely optimal, with verification ([`synthesize`],
//!   [`verify_uniquely_optimal`]);
//! - a reproducible sampling study of the penalty of keeping only the
//!   fan-out family ([`run_experiment`]).
//!
//! Costs are unbounded integers and penalties exact rationals, so no
//! computation silently overflows or rounds.

mod cost;
mod error;
mod instance;
mod ordering;

pub mod experiment;
pub mod penalty;
pub mod solvers;
pub mod synthesis;

pub use cost::{chain_cost, cost_triplet, Cost};
pub use error::{ChainError, Result};
pub use experiment::{
    run_experiment, summarize, write_records_csv, write_summary_json, ExperimentConfig,
    ExperimentSummary, SampleRecord,
};
pub use instance::Instance;
pub use ordering::{
    enumerate_orderings, enumerate_orderings_with_limit, Ordering, OrderingEnumeration, Triplet,
    TripletSet, DEFAULT_ENUM_LIMIT,
};
pub use penalty::{
    penalty_nonessential_removed, penalty_of_removal, penalty_of_removal_with_limit, PenaltyReport,
};
pub use solvers::{
    best_essential, brute_force_solve, brute_force_solve_with_limit, chin_condition, dp_solve,
    essential_set, fan_out, BestEssential, SolveMethod, SolveResult,
};
pub use synthesis::{
    growth_sequence, synthesize, verify_uniquely_optimal, verify_uniquely_optimal_with,
    GrowthSequence, VerifyPath, VerifyReport,
};

pub use num_bigint::BigUint;
pub use num_rational::BigRational;
