//! Baseline cop controllers: a camper, a greedy chaser, and a scripted
//! replay. Useful as opponents in tests and as fodder for the solver
//! comparisons; none of them is good.

use crate::board::{BoardKind, Coord};
use crate::engine::{CopController, GameState, MatchSpec};
use crate::error::Result;

/// Places everyone at the board center and never moves.
pub struct Stationary;

impl CopController for Stationary {
    fn name(&self) -> &'static str {
        "stationary"
    }

    fn place(&mut self, spec: &MatchSpec) -> Result<Vec<Coord>> {
        Ok(vec![spec.board.center(); spec.cop_count])
    }

    fn turn(&mut self, _spec: &MatchSpec, state: &GameState) -> Result<Vec<Coord>> {
        Ok(state.cops.clone())
    }
}

/// One step toward the shorter wrap direction on a torus, plain sign of the
/// difference elsewhere. Every axis has the same length, so the axis index
/// is moot; kept for call-site readability.
pub(crate) fn step_toward(board: &BoardKind, _axis: usize, from: i64, to: i64) -> i64 {
    let d = match *board {
        BoardKind::Torus { n, .. } => {
            let fwd = (to - from).rem_euclid(n);
            if fwd == 0 {
                0
            } else if fwd <= n - fwd {
                1
            } else {
                -1
            }
        }
        _ => (to - from).signum(),
    };
    from + d
}

/// Every cop independently steps one cell toward the robber on each axis.
pub struct GreedyChaser;

impl CopController for GreedyChaser {
    fn name(&self) -> &'static str {
        "greedy_chaser"
    }

    fn place(&mut self, spec: &MatchSpec) -> Result<Vec<Coord>> {
        Ok(vec![spec.board.center(); spec.cop_count])
    }

    fn turn(&mut self, spec: &MatchSpec, state: &GameState) -> Result<Vec<Coord>> {
        let board = &spec.board;
        Ok(state
            .cops
            .iter()
            .map(|c| {
                let mut next = c.clone();
                for a in 0..board.axes() {
                    next[a] = step_toward(board, a, c[a], state.robber[a]);
                }
                board.clamp(&next)
            })
            .collect())
    }
}

/// Replays a fixed placement and per-turn move list, standing still once the
/// script runs out.
pub struct ScriptedCops {
    placement: Vec<Coord>,
    moves: Vec<Vec<Coord>>,
    next: usize,
}

impl ScriptedCops {
    pub fn new(placement: Vec<Coord>, moves: Vec<Vec<Coord>>) -> Self {
        ScriptedCops {
            placement,
            moves,
            next: 0,
        }
    }
}

impl CopController for ScriptedCops {
    fn name(&self) -> &'static str {
        "scripted"
    }

    fn place(&mut self, _spec: &MatchSpec) -> Result<Vec<Coord>> {
        Ok(self.placement.clone())
    }

    fn turn(&mut self, _spec: &MatchSpec, state: &GameState) -> Result<Vec<Coord>> {
        let mv = self.moves.get(self.next).cloned();
        self.next += 1;
        Ok(mv.unwrap_or_else(|| state.cops.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coord;
    use crate::engine::{play, GameVariant, NullObserver, Outcome, WinReason};
    use crate::robbers::basic::ScriptedRobber;

    #[test]
    fn greedy_chaser_catches_a_sitting_robber() {
        let spec = MatchSpec {
            board: BoardKind::Grid { n: 9, d: 2 },
            variant: GameVariant::Capture { horizon: 30 },
            cop_count: 1,
            robber_speed: 1,
            seed: 0,
            cover_at_start: false,
            cover_after_robber: false,
        };
        let mut cop = GreedyChaser;
        let mut robber = ScriptedRobber::new(coord![1, 9], vec![]);
        let res = play(&spec, &mut cop, &mut robber, &mut NullObserver).unwrap();
        // Center (5,5) to corner (1,9) is Chebyshev 4.
        assert_eq!(
            res.outcome,
            Outcome::CopsWin {
                reason: WinReason::Caught,
                turn: 4
            }
        );
    }

    #[test]
    fn greedy_chaser_wraps_the_short_way_on_a_torus() {
        let board = BoardKind::Torus { n: 10, d: 1 };
        assert_eq!(step_toward(&board, 0, 1, 9), 0); // wraps down past the seam
        assert_eq!(step_toward(&board, 0, 9, 2), 10);
        assert_eq!(step_toward(&board, 0, 4, 4), 4);
    }
}
