//! Exact-time capture on lattices.
//!
//! The robber starts at a known cell and moves up to 2 per axis per turn;
//! the cops must have someone standing on him immediately after cop turn T,
//! where T is a power of 4. The construction is per-axis: a cop anchored at
//! c0 chases the moving target ceil((c0 + r)/2), which shifts by at most 1
//! when the robber shifts by at most 2, so once the cop touches the target
//! he rides it forever. At turn T the rider sits exactly on the robber's
//! cell iff c0 is the robber's final coordinate or one below it. Anchors
//! laid out on [-3T, 3T] with spacing 2^(m-1) put such a c0 within every
//! cop's reach for every coordinate the robber can end on, per axis, and
//! the d-dimensional team is the product lattice of the 1-dimensional one.
//!
//! For m >= 2 the spacing alone leaves gaps between the riders' landing
//! windows, and the chase recurses instead: ride for 3T/4 turns, at which
//! point every cop within reach stands exactly on the midpoint of its old
//! anchor and the robber, re-anchor everyone where they stand (halving the
//! effective spacing around the robber), and play the remaining T/4 the
//! same way down to the base window of 4 turns.

use crate::audit::{AuditReport, EventKind};
use crate::board::{BoardKind, Coord};
use crate::engine::{CopController, GameState, MatchSpec};
use crate::error::{Error, Result};

/// The moving rendezvous point of the midpoint chase.
pub fn midpoint_target(c0: i64, r: i64) -> i64 {
    (c0 + r + 1).div_euclid(2)
}

/// Smallest m >= 1 with 4^m >= t, if t fits one.
fn power_of_four_at_least(t: u64) -> Option<u32> {
    let mut m = 1u32;
    let mut val = 4u64;
    while val < t {
        val = val.checked_mul(4)?;
        m += 1;
    }
    Some(m)
}

/// Cops per axis for scale m; the d-dimensional team is this to the d-th.
pub fn axis_team_size(m: u32) -> u64 {
    6 * 2u64.pow(m + 1) + 1
}

pub struct FixedTimeCatcher {
    t: u64,
    m: u32,
    d: usize,
    anchors: Vec<Coord>,
    virtuals: Vec<Coord>,
    audit: AuditReport,
}

impl FixedTimeCatcher {
    /// `round_up: false` insists on t being a power of 4; `true` plays for
    /// the next power of 4 instead.
    pub fn new(t: u64, d: usize, round_up: bool) -> Result<Self> {
        if t == 0 || d == 0 {
            return Err(Error::config("fixed-time catcher needs t >= 1 and d >= 1"));
        }
        let m = power_of_four_at_least(t)
            .ok_or_else(|| Error::config(format!("t={t} overflows the 4^m ladder")))?;
        let rounded = 4u64.pow(m);
        if rounded != t && !round_up {
            return Err(Error::config(format!(
                "t={t} is not a power of 4; pass round_up to play for {rounded}"
            )));
        }
        Ok(FixedTimeCatcher {
            t: rounded,
            m,
            d,
            anchors: Vec::new(),
            virtuals: Vec::new(),
            audit: AuditReport::default(),
        })
    }

    /// The turn this controller actually plays for (after rounding).
    pub fn target_time(&self) -> u64 {
        self.t
    }

    pub fn required_cops(&self) -> usize {
        (axis_team_size(self.m) as usize).pow(self.d as u32)
    }

    fn spacing(&self) -> i64 {
        1 << (self.m - 1)
    }

    fn check(&self, spec: &MatchSpec) -> Result<()> {
        if spec.board.is_wrapped() {
            return Err(Error::config(
                "fixed-time catcher needs an unwrapped board (midpoints break on a torus)",
            ));
        }
        if spec.board.axes() != self.d {
            return Err(Error::config(format!(
                "catcher built for {} axes, board has {}",
                self.d,
                spec.board.axes()
            )));
        }
        if spec.variant != (crate::engine::GameVariant::FixedTime { t: self.t }) {
            return Err(Error::config(format!(
                "catcher plays for turn {} but the match variant is {:?}",
                self.t, spec.variant
            )));
        }
        if spec.robber_speed > 2 {
            return Err(Error::config(
                "midpoint targets are only 1-Lipschitz against speed <= 2 robbers",
            ));
        }
        if spec.cop_count < self.required_cops() {
            return Err(Error::config(format!(
                "fixed-time catcher at t={} d={} needs {} cops, got {}",
                self.t,
                self.d,
                self.required_cops(),
                spec.cop_count
            )));
        }
        Ok(())
    }

    fn place_lattice(&mut self, spec: &MatchSpec, start: &Coord) {
        let radius = 3 * self.t as i64;
        let mut offsets: Vec<Vec<i64>> = vec![Vec::new()];
        for _ in 0..self.d {
            let mut next = Vec::new();
            for base in &offsets {
                let mut off = -radius;
                while off <= radius {
                    let mut row = base.clone();
                    row.push(off);
                    next.push(row);
                    off += self.spacing();
                }
            }
            offsets = next;
        }
        self.anchors = offsets
            .into_iter()
            .map(|row| {
                let mut p = start.clone();
                for (a, off) in row.iter().enumerate() {
                    p[a] += off;
                }
                p
            })
            .collect();
        // Spare cops beyond the lattice park on the start cell.
        while self.anchors.len() < spec.cop_count {
            self.anchors.push(start.clone());
        }
        self.virtuals = self.anchors.clone();
    }

    fn emit(&mut self, board: &BoardKind, time: u64) -> Vec<Coord> {
        let mut out = Vec::with_capacity(self.virtuals.len());
        let mut clamped = false;
        for v in &self.virtuals {
            let real = board.clamp(v);
            clamped |= real != *v;
            out.push(real);
        }
        if clamped {
            self.audit.record(
                EventKind::ClampedMove,
                time,
                "anchor lattice exceeds the board; prescriptions clamped",
            );
        }
        out
    }
}

impl CopController for FixedTimeCatcher {
    fn name(&self) -> &'static str {
        "fixed_time_catcher"
    }

    fn place(&mut self, spec: &MatchSpec) -> Result<Vec<Coord>> {
        self.check(spec)?;
        let start = spec.board.center();
        self.place_lattice(spec, &start);
        Ok(self.emit(&spec.board, 0))
    }

    fn turn(&mut self, spec: &MatchSpec, state: &GameState) -> Result<Vec<Coord>> {
        let tau = state.time + 1;
        // Phase boundary of the recursion: with 4^j turns left (j >= 1,
        // short of the whole game) everyone re-anchors where they stand.
        let left = self.t + 1 - tau.min(self.t);
        if left < self.t && left >= 4 && left.is_power_of_two() && left.trailing_zeros() % 2 == 0 {
            self.anchors = self.virtuals.clone();
        }
        for i in 0..self.virtuals.len() {
            for a in 0..self.d {
                let g = midpoint_target(self.anchors[i][a], state.robber[a]);
                let step = (g - self.virtuals[i][a]).clamp(-1, 1);
                self.virtuals[i][a] += step;
            }
        }
        Ok(self.emit(&spec.board, tau))
    }

    fn audit(&self) -> AuditReport {
        self.audit.clone()
    }
}
