//! Discrete pursuit-evasion laboratory.
//!
//! The crate is organized around a small match engine ([`engine::play`])
//! that pits a [`engine::CopController`] against a
//! [`engine::RobberController`] on a lattice board ([`board::BoardKind`])
//! under one of four win conditions. Strategy families live in [`cops`] and
//! [`robbers`]; [`solver`] computes exact values on instances small enough
//! to enumerate, and serves as the oracle the strategies are tested against.

pub mod audit;
pub mod board;
pub mod cops;
pub mod engine;
pub mod error;
pub mod robbers;
pub mod solver;
pub mod trace;

pub use audit::{AuditReport, EventKind, StrategyEvent};
pub use board::{reflect, BoardKind, Coord, Rect};
pub use engine::{
    coincident, default_horizon, play, Agent, CopController, GameState, GameVariant,
    MatchObserver, MatchResult,
    MatchSpec, NullObserver, Outcome, Phase, RobberController, WinReason,
};
pub use error::{Error, Result};
pub use solver::{
    cops_can_catch, cops_can_cover, fixed_time_value, fixed_trajectory_coverable, min_cops,
    solve_covering, CoverRules, CoveringSolve, OracleRobber, SolveBudget, SolveRecord,
};
