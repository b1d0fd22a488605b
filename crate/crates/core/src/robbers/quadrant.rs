//! Quadrant descent for fixed-time games.
//!
//! Playing to survive exactly `t = 4^m - 1` turns, the robber repeatedly
//! splits the board at his own position into sign quadrants (half-lines in
//! one dimension, quadrants in two), counts cops in each, and commits to the
//! emptiest one for a long diagonal sprint: `3 * 4^(l-1)` turns of `+-2` per
//! axis at level `l`, with `l` running from `m` down to 1. The sprint
//! lengths sum to exactly `4^m - 1`, so the schedule fills the game.
//!
//! The point of the shrinking sprints is the usual one: a cop can only
//! matter if he is already on the chosen side, and each decision throws away
//! at least half... in `d` dimensions all but roughly a `2^-d` fraction of
//! the remaining cops. Starting from fewer than `2^(d(m-1))` cops, the last
//! level begins with no cop close enough to intercept a speed-2 runner.

use crate::audit::AuditReport;
use crate::board::{BoardKind, Coord};
use crate::engine::{GameState, GameVariant, MatchSpec, RobberController};
use crate::error::{Error, Result};

/// Level `m` such that `t = 4^m - 1`, if there is one with `m >= 1`.
pub fn level_for_horizon(t: u64) -> Option<u32> {
    let mut m = 1u32;
    let mut pow = 4u64;
    while pow - 1 <= t {
        if pow - 1 == t {
            return Some(m);
        }
        m += 1;
        pow = pow.checked_mul(4)?;
    }
    None
}

pub struct QuadrantDescender {
    /// Axes the walk actually uses; width-1 axes are pinned and skipped.
    active: Vec<usize>,
    signs: Vec<i64>,
    level: u32,
    remaining: u64,
    audit: AuditReport,
}

impl QuadrantDescender {
    pub fn new() -> Self {
        QuadrantDescender {
            active: Vec::new(),
            signs: Vec::new(),
            level: 0,
            remaining: 0,
            audit: AuditReport::default(),
        }
    }

    /// Pick the sign pattern whose quadrant holds the fewest cops. Cops on a
    /// boundary hyperplane count in every quadrant they touch, and ties go
    /// to the lexicographically first pattern (all-minus first).
    fn decide(&mut self, state: &GameState) {
        let r = &state.robber;
        let k = self.active.len();
        let mut best: Option<(usize, Vec<i64>)> = None;
        for mask in 0..(1usize << k) {
            let sigma: Vec<i64> = (0..k)
                .map(|j| if mask & (1 << (k - 1 - j)) == 0 { -1 } else { 1 })
                .collect();
            let count = state
                .cops
                .iter()
                .filter(|c| {
                    self.active
                        .iter()
                        .enumerate()
                        .all(|(j, &a)| sigma[j] * (c[a] - r[a]) >= 0)
                })
                .count();
            if best.as_ref().map_or(true, |(b, _)| count < *b) {
                best = Some((count, sigma));
            }
        }
        let (count, sigma) = best.expect("at least one quadrant");
        self.audit.note(
            state.time,
            format!(
                "level {}: sprinting into quadrant {:?} with {} cops",
                self.level, sigma, count
            ),
        );
        self.signs = sigma;
    }
}

impl Default for QuadrantDescender {
    fn default() -> Self {
        Self::new()
    }
}

impl RobberController for QuadrantDescender {
    fn name(&self) -> &'static str {
        "quadrant_descender"
    }

    fn place(&mut self, spec: &MatchSpec, _cops: &[Coord]) -> Result<Coord> {
        let t = match spec.variant {
            GameVariant::FixedTime { t } => t,
            _ => {
                return Err(Error::config(
                    "the quadrant descent plays fixed-time games only",
                ))
            }
        };
        let m = level_for_horizon(t).ok_or_else(|| {
            Error::config(format!("horizon {t} is not of the form 4^m - 1"))
        })?;
        if m > 8 {
            return Err(Error::Budget(format!(
                "4^{m} - 1 turns is past the supported range"
            )));
        }
        if spec.robber_speed < 2 {
            return Err(Error::config("the sprints take steps of length 2"));
        }
        let centre = spec.board.center();
        // Worst case every sprint shares a direction: 2 cells per turn for
        // 4^m - 1 turns from the centre.
        let reach = 2 * (4i64.pow(m) - 1);
        self.active.clear();
        for a in 0..spec.board.axes() {
            match spec.board.axis_bounds(a) {
                None => self.active.push(a),
                Some((lo, hi)) if lo == hi => {} // pinned
                Some((lo, hi)) => {
                    if centre[a] - reach < lo || centre[a] + reach > hi {
                        return Err(Error::config(format!(
                            "axis {a} has no room for a level-{m} descent \
                             (needs the centre +-{reach})"
                        )));
                    }
                    self.active.push(a);
                }
            }
        }
        if self.active.is_empty() {
            return Err(Error::config("every axis is pinned; nowhere to run"));
        }
        self.level = m;
        self.remaining = 0;
        Ok(centre)
    }

    fn turn(&mut self, _spec: &MatchSpec, state: &GameState) -> Result<Coord> {
        if self.remaining == 0 {
            if self.level == 0 {
                return Ok(state.robber.clone());
            }
            self.decide(state);
            self.remaining = 3 * 4u64.pow(self.level - 1);
            self.level -= 1;
        }
        self.remaining -= 1;
        let mut dest = state.robber.clone();
        for (j, &a) in self.active.iter().enumerate() {
            dest[a] += 2 * self.signs[j];
        }
        Ok(dest)
    }

    fn audit(&self) -> AuditReport {
        self.audit.clone()
    }
}
