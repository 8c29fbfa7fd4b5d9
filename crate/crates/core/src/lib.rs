//! Weak subgame perfect equilibria in multiplayer Boolean games on graphs.
//!
//! This crate decides the constrained existence of weak subgame perfect
//! equilibria for the classical ω-regular objective classes, and constructs
//! independently verifiable certificates:
//!
//! * [`game`] — arenas, objectives, lassoes, and gain evaluation;
//! * [`graph`] — deterministic reachability, SCC, and shortest-path helpers;
//! * [`oracle`] — existence of plays with an exact payoff in a restricted
//!   subgraph, with constructive witnesses;
//! * [`fixpoint`] — the remove/adjust labeling fixpoint and the decision
//!   procedure;
//! * [`witness`] — good symbolic witnesses, lasso compaction, and the
//!   exhaustive ground-truth search;
//! * [`strategy`] — finite-memory strategy profiles and the one-shot
//!   deviation verifier;
//! * [`reductions`] — the Reachability/Safety product, formula-game
//!   generation with a naive truth oracle, and seeded random games;
//! * [`json`] — stable serialization of every artifact.

pub mod fixpoint;
pub mod game;
pub mod graph;
pub mod json;
pub mod oracle;
pub mod reductions;
pub mod strategy;
pub mod witness;

pub use fixpoint::{decide_constraint, run_fixpoint, Decision, LabelingTable, RemovalOrder};
pub use game::{Game, GameError, Lasso, ObjectiveClass, ObjectiveSpec, Payoff, Player, Vertex};
pub use oracle::{payoff_path, OracleError, PathWitness};
pub use reductions::{
    parse_qdimacs, qbf_eval, qbf_to_game, random_game, reach_safety_product, QbfFormula,
    QbfVariant, RandomGameParams,
};
pub use strategy::{synthesize_profile, verify_weak_spe, MooreProfile, VerifyReport};
pub use witness::{
    brute_force_witness_search, build_witness, check_goodness, witness_index, Compaction,
    SymbolicWitness, WitnessError,
};

#[cfg(test)]
pub(crate) mod testutil;
