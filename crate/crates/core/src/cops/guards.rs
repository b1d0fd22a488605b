//! Territorial guards for the covering game on grids.
//!
//! The whole trick is that a 2-cell interval (or a 2^d block) has Chebyshev
//! diameter 1, so a cop who never leaves his block can always jump straight
//! onto a robber standing anywhere in it. One cop per block covers the
//! robber at the end of every cop turn no matter how fast the robber is,
//! which pins the covering number of the path at ceil(n/2) and of the
//! square at ceil(n/2)^2.

use crate::board::{BoardKind, Coord};
use crate::engine::{CopController, GameState, MatchSpec};
use crate::error::{Error, Result};

/// One cop per 2^d block of `Grid(n, d)`; the cop owning the robber's block
/// jumps onto him, everyone else sits at his block's low corner.
pub struct BlockGuard {
    n: i64,
    d: usize,
}

impl BlockGuard {
    pub fn new(n: i64, d: usize) -> Self {
        BlockGuard { n, d }
    }

    /// Blocks per axis.
    fn side(&self) -> i64 {
        self.n.div_euclid(2) + self.n.rem_euclid(2)
    }

    pub fn required_cops(&self) -> usize {
        (self.side() as usize).pow(self.d as u32)
    }

    fn check(&self, spec: &MatchSpec) -> Result<()> {
        let want = BoardKind::Grid {
            n: self.n,
            d: self.d,
        };
        if spec.board != want {
            return Err(Error::config(format!(
                "block guard built for {want:?} cannot play on {:?}",
                spec.board
            )));
        }
        if spec.cop_count < self.required_cops() {
            return Err(Error::config(format!(
                "block guard on n={} d={} needs {} cops, got {}",
                self.n,
                self.d,
                self.required_cops(),
                spec.cop_count
            )));
        }
        Ok(())
    }

    /// Low corner of block `j`, blocks numbered in mixed radix over axes.
    fn home(&self, j: usize) -> Coord {
        let side = self.side() as usize;
        let mut rest = j;
        let mut xs = Vec::with_capacity(self.d);
        for _ in 0..self.d {
            xs.push(2 * (rest % side) as i64 + 1);
            rest /= side;
        }
        Coord::from(xs)
    }

    /// Index of the block containing `p`.
    fn owner(&self, p: &Coord) -> usize {
        let side = self.side() as usize;
        let mut j = 0usize;
        for a in (0..self.d).rev() {
            j = j * side + ((p[a] - 1).div_euclid(2)) as usize;
        }
        j
    }

    fn park(&self) -> Coord {
        Coord::from(vec![self.n; self.d])
    }
}

impl CopController for BlockGuard {
    fn name(&self) -> &'static str {
        "block_guard"
    }

    fn place(&mut self, spec: &MatchSpec) -> Result<Vec<Coord>> {
        self.check(spec)?;
        let blocks = self.required_cops();
        Ok((0..spec.cop_count)
            .map(|j| if j < blocks { self.home(j) } else { self.park() })
            .collect())
    }

    fn turn(&mut self, spec: &MatchSpec, state: &GameState) -> Result<Vec<Coord>> {
        let blocks = self.required_cops();
        let owner = self.owner(&state.robber);
        Ok((0..spec.cop_count)
            .map(|j| {
                if j == owner {
                    // Jump onto the robber; both cells are in my block, so
                    // the step is legal from wherever I stand in it.
                    state.robber.clone()
                } else if j < blocks {
                    self.home(j)
                } else {
                    self.park()
                }
            })
            .collect())
    }
}

/// The 1-dimensional guard: cop i (1-based) holds {2i-1, 2i} from home
/// vertex 2i-1. A thin wrapper kept as its own strategy because the path
/// case is the canonical example and gets exercised separately.
pub struct PathGuard {
    inner: BlockGuard,
}

impl PathGuard {
    pub fn new(n: i64) -> Self {
        PathGuard {
            inner: BlockGuard::new(n, 1),
        }
    }

    pub fn required_cops(&self) -> usize {
        self.inner.required_cops()
    }
}

impl CopController for PathGuard {
    fn name(&self) -> &'static str {
        "path_guard"
    }

    fn place(&mut self, spec: &MatchSpec) -> Result<Vec<Coord>> {
        self.inner.place(spec)
    }

    fn turn(&mut self, spec: &MatchSpec, state: &GameState) -> Result<Vec<Coord>> {
        self.inner.turn(spec, state)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coord;
    use crate::engine::{play, Agent, GameVariant, MatchObserver, NullObserver, Outcome, Phase};
    use crate::robbers::basic::{FuzzRobber, ScriptedRobber};

    fn covering_spec(board: BoardKind, cop_count: usize, horizon: u64) -> MatchSpec {
        MatchSpec {
            board,
            variant: GameVariant::Covering { horizon },
            cop_count,
            robber_speed: 2,
            seed: 0,
            cover_at_start: false,
            cover_after_robber: false,
        }
    }

    /// Asserts coverage at the end of every cop turn as the match runs.
    struct CopTurnCoverage {
        checked: u64,
    }

    impl MatchObserver for CopTurnCoverage {
        fn on_state(&mut self, state: &GameState) {
            if state.phase == Phase::RobberToMove {
                assert!(state.covered_now, "uncovered after cop turn {}", state.time + 1);
                self.checked += 1;
            }
        }
    }

    #[test]
    fn path_guard_places_on_odd_vertices() {
        let spec = covering_spec(BoardKind::Grid { n: 5, d: 1 }, 3, 10);
        let mut guard = PathGuard::new(5);
        assert_eq!(
            guard.place(&spec).unwrap(),
            vec![coord![1], coord![3], coord![5]]
        );
    }

    #[test]
    fn path_guard_refuses_understaffed_matches() {
        let spec = covering_spec(BoardKind::Grid { n: 5, d: 1 }, 2, 10);
        let err = PathGuard::new(5).place(&spec).unwrap_err();
        assert!(err.is_config());
    }

    #[test]
    fn path_guard_covers_an_oscillating_robber() {
        let spec = covering_spec(BoardKind::Grid { n: 5, d: 1 }, 3, 12);
        let mut guard = PathGuard::new(5);
        let mut robber = ScriptedRobber::new(
            coord![1],
            (0..12)
                .map(|i| if i % 2 == 0 { coord![2] } else { coord![1] })
                .collect(),
        );
        let mut obs = CopTurnCoverage { checked: 0 };
        let res = play(&spec, &mut guard, &mut robber, &mut obs).unwrap();
        assert_eq!(res.outcome.winner(), Agent::Cops);
        assert_eq!(obs.checked, 12);
    }

    #[test]
    fn single_vertex_path_pins_the_cop() {
        let spec = covering_spec(BoardKind::Grid { n: 1, d: 1 }, 1, 5);
        let mut guard = PathGuard::new(1);
        let mut robber = ScriptedRobber::new(coord![1], vec![]);
        let res = play(&spec, &mut guard, &mut robber, &mut NullObserver).unwrap();
        assert_eq!(res.outcome.winner(), Agent::Cops);
    }

    #[test]
    fn block_guard_homes_tile_the_square() {
        let spec = covering_spec(BoardKind::Grid { n: 4, d: 2 }, 4, 10);
        let mut guard = BlockGuard::new(4, 2);
        assert_eq!(
            guard.place(&spec).unwrap(),
            vec![coord![1, 1], coord![3, 1], coord![1, 3], coord![3, 3]]
        );

        let whole = covering_spec(BoardKind::Grid { n: 2, d: 2 }, 1, 10);
        assert_eq!(
            BlockGuard::new(2, 2).place(&whole).unwrap(),
            vec![coord![1, 1]]
        );
    }

    #[test]
    fn block_guard_survives_a_fuzz_robber() {
        let n = 7;
        let spec = MatchSpec {
            seed: 41,
            ..covering_spec(
                BoardKind::Grid { n, d: 2 },
                BlockGuard::new(n, 2).required_cops(),
                500,
            )
        };
        let mut guard = BlockGuard::new(n, 2);
        let mut robber = FuzzRobber::new(spec.seed, None);
        let mut obs = CopTurnCoverage { checked: 0 };
        let res = play(&spec, &mut guard, &mut robber, &mut obs).unwrap();
        assert!(matches!(
            res.outcome,
            Outcome::HorizonExhausted {
                verdict: Agent::Cops
            }
        ));
        assert_eq!(obs.checked, 500);
    }

    #[test]
    fn block_guard_matches_the_solver_on_small_paths() {
        // The guard count is exactly the solver's minimum on small 1-D
        // boards, so the construction is not merely sufficient but tight.
        for n in 1..=6 {
            let board = BoardKind::Grid { n, d: 1 };
            let min = crate::solver::min_cops(
                &board,
                &GameVariant::Covering { horizon: 0 },
                4,
                2,
                crate::solver::CoverRules::default(),
                crate::solver::SolveBudget::default(),
            )
            .unwrap();
            assert_eq!(min, Some(PathGuard::new(n).required_cops()), "n = {n}");
        }
    }
}
