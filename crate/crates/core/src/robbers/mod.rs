//! Robber-side strategies.

pub mod basic;
pub mod density;
pub mod interval;
pub mod looper;
pub mod quadrant;

pub use basic::{FuzzRobber, GreedyEvader, ScriptedRobber, Sprinter, TunnelSprinter};
pub use density::{density, exponent_feasible, DensityConfig, DensityDescender};
pub use interval::{in_request_band, request_threshold, IntervalConfig, IntervalRequester, RequestLedger};
pub use looper::{BanCounters, GridLooper};
pub use quadrant::QuadrantDescender;
