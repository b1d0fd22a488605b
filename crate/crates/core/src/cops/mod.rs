//! Cop-side strategies.

pub mod basic;
pub mod fixed_time;
pub mod guards;
pub mod hole;
pub mod net;
pub mod pad;
pub mod scheduler;
pub mod tiler;
pub mod torus;

pub use basic::{GreedyChaser, ScriptedCops, Stationary};
pub use fixed_time::{midpoint_target, FixedTimeCatcher};
pub use guards::{BlockGuard, PathGuard};
pub use hole::{hole_shift, HoleEnd};
pub use net::{FastRobberNet, NetConfig, RugbyNet};
pub use pad::PaddedCover;
pub use scheduler::CoveringScheduler;
pub use tiler::{RecursiveTiler, TileBaseFactory, TileConfig};
pub use torus::{quadrant_reflections, GridFromTorus, TorusLifter};
