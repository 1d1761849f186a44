//! Exact analysis of strict and subset Avoider-Enforcer positional games.
//!
//! Two players alternately claim vertices of a hypergraph; Avoider loses by
//! meeting a constraint's claim threshold, and wins if the board fills
//! without that happening. This crate provides:
//!
//! * an immutable game model with the structural relations behind sound move
//!   filtering ([`model`]),
//! * game mechanics and residual-game construction ([`engine`]),
//! * a perfect-play solver with a transposition table, dominance pruning and
//!   optional move-order restrictions ([`solver`]),
//! * a 3SAT-to-game translation with strategy and assignment certificates,
//!   plus an end-to-end verification harness ([`reduction`]),
//! * deliberately naive reference implementations for cross-checking
//!   ([`oracle`]),
//! * text formats for formulas, games and reports ([`io`]), and seeded
//!   instance generators ([`generate`]).

pub mod engine;
pub mod generate;
pub mod io;
pub mod model;
pub mod oracle;
pub mod reduction;
pub mod solver;

pub use model::{Constraint, GameSpec, Player, Position, VertexId, VertexSet};
