//! Padding a covering strategy so it also covers after the robber moves.
//!
//! In the harder covering game the robber must be covered at the end of
//! his own turns too. A strategy that only promises coverage at cop-turn
//! ends is upgraded by brute force: every cop it prescribes is replaced by
//! the full Chebyshev ball of radius equal to the robber's speed, centred
//! on the prescription. Wherever the robber steps, he is still inside the
//! ball of the cop that covered him a half-turn ago. The cost is a factor
//! of (2s+1)^d, 25 on a two-dimensional board against a speed-2 robber.

use crate::audit::AuditReport;
use crate::board::Coord;
use crate::engine::{CopController, GameState, MatchSpec};
use crate::error::{Error, Result};

pub struct PaddedCover {
    base: Box<dyn CopController>,
    base_count: usize,
    base_positions: Vec<Coord>,
    offsets: Vec<Vec<i64>>,
}

impl PaddedCover {
    pub fn new(base_count: usize, base: Box<dyn CopController>) -> Self {
        PaddedCover {
            base,
            base_count,
            base_positions: Vec::new(),
            offsets: Vec::new(),
        }
    }

    pub fn required_cops(base_count: usize, axes: usize, robber_speed: i64) -> usize {
        base_count * (2 * robber_speed + 1).pow(axes as u32) as usize
    }

    fn sub_spec(&self, spec: &MatchSpec) -> MatchSpec {
        MatchSpec {
            cop_count: self.base_count,
            cover_after_robber: false,
            ..spec.clone()
        }
    }

    fn sub_state(&self, state: &GameState) -> GameState {
        GameState {
            cops: self.base_positions.clone(),
            covered_now: self.base_positions.contains(&state.robber),
            ..state.clone()
        }
    }

    /// Every padded cell, clamped onto the board; near an edge the ball
    /// folds onto it, so the emitted count never changes.
    fn emit(&self, spec: &MatchSpec) -> Vec<Coord> {
        let mut out = Vec::with_capacity(self.base_positions.len() * self.offsets.len());
        for base in &self.base_positions {
            for off in &self.offsets {
                let mut p = base.clone();
                for a in 0..p.dim() {
                    p[a] += off[a];
                }
                out.push(spec.board.clamp(&p));
            }
        }
        out
    }
}

fn cube(axes: usize, radius: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..axes {
        let mut next = Vec::new();
        for prefix in &out {
            for step in -radius..=radius {
                let mut p = prefix.clone();
                p.push(step);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

impl CopController for PaddedCover {
    fn name(&self) -> &'static str {
        "padded_cover"
    }

    fn place(&mut self, spec: &MatchSpec) -> Result<Vec<Coord>> {
        let axes = spec.board.axes();
        let needed = Self::required_cops(self.base_count, axes, spec.robber_speed);
        if spec.cop_count != needed {
            return Err(Error::config(format!(
                "padding {} cops on a {axes}-axis board against speed {} needs \
                 exactly {needed} cops, got {}",
                self.base_count, spec.robber_speed, spec.cop_count
            )));
        }
        self.offsets = cube(axes, spec.robber_speed);
        self.base_positions = self.base.place(&self.sub_spec(spec))?;
        if self.base_positions.len() != self.base_count {
            return Err(Error::config(format!(
                "base strategy placed {} cops, expected {}",
                self.base_positions.len(),
                self.base_count
            )));
        }
        Ok(self.emit(spec))
    }

    fn turn(&mut self, spec: &MatchSpec, state: &GameState) -> Result<Vec<Coord>> {
        let sub = self.sub_state(state);
        self.base_positions = self.base.turn(&self.sub_spec(spec), &sub)?;
        Ok(self.emit(spec))
    }

    fn audit(&self) -> AuditReport {
        self.base.audit()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::board::BoardKind;
    use crate::cops::{BlockGuard, PathGuard};
    use crate::engine::{play, Agent, GameVariant, NullObserver, Outcome};
    use crate::robbers::{FuzzRobber, Sprinter};

    fn spec(board: BoardKind, cops: usize, after_robber: bool) -> MatchSpec {
        MatchSpec {
            board,
            variant: GameVariant::Covering { horizon: 200 },
            cop_count: cops,
            robber_speed: 2,
            seed: 0,
            cover_at_start: false,
            cover_after_robber: after_robber,
        }
    }

    #[test]
    fn the_cube_has_the_advertised_size() {
        assert_eq!(PaddedCover::required_cops(4, 1, 2), 20);
        assert_eq!(PaddedCover::required_cops(1, 2, 2), 25);
        assert_eq!(cube(2, 2).len(), 25);
    }

    #[test]
    fn an_unpadded_guard_loses_the_after_robber_game() {
        let spec = spec(BoardKind::Grid { n: 8, d: 1 }, 4, true);
        let mut cops = PathGuard::new(8);
        let mut robber = Sprinter;
        let result = play(&spec, &mut cops, &mut robber, &mut NullObserver).unwrap();
        assert!(
            matches!(result.outcome, Outcome::RobberWins { .. }),
            "got {:?}",
            result.outcome
        );
    }

    #[test]
    fn padding_wins_it_back() {
        let spec = spec(BoardKind::Grid { n: 8, d: 1 }, 20, true);
        for seed in 0..10 {
            let mut cops = PaddedCover::new(4, Box::new(PathGuard::new(8)));
            let mut robber = FuzzRobber::new(seed, None);
            let result = play(&spec, &mut cops, &mut robber, &mut NullObserver).unwrap();
            match result.outcome {
                Outcome::HorizonExhausted { verdict } => assert_eq!(verdict, Agent::Cops),
                Outcome::CopsWin { .. } => {}
                other => panic!("seed {seed}: {other:?}"),
            }
        }
        let mut cops = PaddedCover::new(4, Box::new(PathGuard::new(8)));
        let mut robber = Sprinter;
        let result = play(&spec, &mut cops, &mut robber, &mut NullObserver).unwrap();
        assert!(
            !matches!(result.outcome, Outcome::RobberWins { .. }),
            "got {:?}",
            result.outcome
        );
    }

    #[test]
    fn two_axis_padding_carries_a_block_guard() {
        let base = BlockGuard::new(6, 2);
        let base_cops = base.required_cops();
        let total = PaddedCover::required_cops(base_cops, 2, 2);
        let spec = spec(BoardKind::Grid { n: 6, d: 2 }, total, true);
        for seed in 0..5 {
            let mut cops = PaddedCover::new(base_cops, Box::new(BlockGuard::new(6, 2)));
            let mut robber = FuzzRobber::new(seed, None);
            let result = play(&spec, &mut cops, &mut robber, &mut NullObserver).unwrap();
            match result.outcome {
                Outcome::HorizonExhausted { verdict } => assert_eq!(verdict, Agent::Cops),
                Outcome::CopsWin { .. } => {}
                other => panic!("seed {seed}: {other:?}"),
            }
        }
    }

    #[test]
    fn the_cop_budget_must_match_exactly() {
        let spec = spec(BoardKind::Grid { n: 8, d: 1 }, 19, true);
        let mut cops = PaddedCover::new(4, Box::new(PathGuard::new(8)));
        let err = cops.place(&spec).unwrap_err();
        assert!(err.is_config(), "got {err}");
    }
}
