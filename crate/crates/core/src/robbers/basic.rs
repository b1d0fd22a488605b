//! Baseline robber controllers.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::board::{BoardKind, Coord, Rect};
use crate::engine::{GameState, MatchSpec, RobberController};
use crate::error::{Error, Result};

/// Uniformly random placement and moves, optionally confined to a placement
/// region. The workhorse of the fuzz campaigns.
pub struct FuzzRobber {
    rng: ChaCha8Rng,
    place_region: Option<Rect>,
}

impl FuzzRobber {
    pub fn new(seed: u64, place_region: Option<Rect>) -> Self {
        FuzzRobber {
            rng: ChaCha8Rng::seed_from_u64(seed),
            place_region,
        }
    }
}

impl RobberController for FuzzRobber {
    fn name(&self) -> &'static str {
        "fuzz"
    }

    fn place(&mut self, spec: &MatchSpec, _cops: &[Coord]) -> Result<Coord> {
        let board = &spec.board;
        if let Some(region) = &self.place_region {
            if region.dim() != board.axes() {
                return Err(Error::config(format!(
                    "place_region has {} axes, board has {}",
                    region.dim(),
                    board.axes()
                )));
            }
            let mut p = region.lo().clone();
            for a in 0..region.dim() {
                p[a] = self.rng.gen_range(region.lo()[a]..=region.hi()[a]);
            }
            if !board.contains(&p) {
                return Err(Error::config(format!(
                    "place_region point {p} is off the board"
                )));
            }
            return Ok(p);
        }
        let n = board.n();
        let mut xs = Vec::with_capacity(board.axes());
        for a in 0..board.axes() {
            xs.push(match board.axis_bounds(a) {
                Some((lo, hi)) => self.rng.gen_range(lo..=hi),
                None => self.rng.gen_range(-n..=n),
            });
        }
        Ok(Coord::from(xs))
    }

    fn turn(&mut self, spec: &MatchSpec, state: &GameState) -> Result<Coord> {
        let ball = spec.board.ball(&state.robber, spec.robber_speed)?;
        Ok(ball[self.rng.gen_range(0..ball.len())].clone())
    }
}

/// Starts in the low corner and runs up the diagonal two cells per axis per
/// turn, then parks in the high corner. The canonical coverage-stressing
/// trajectory: it forces guards to hand the robber off down the whole board.
pub struct Sprinter;

impl RobberController for Sprinter {
    fn name(&self) -> &'static str {
        "sprinter"
    }

    fn place(&mut self, spec: &MatchSpec, _cops: &[Coord]) -> Result<Coord> {
        let board = &spec.board;
        let xs: Vec<i64> = (0..board.axes())
            .map(|a| if board.axis_bounds(a).is_some() { 1 } else { 0 })
            .collect();
        Ok(Coord::from(xs))
    }

    fn turn(&mut self, spec: &MatchSpec, state: &GameState) -> Result<Coord> {
        let step = spec.robber_speed.min(2);
        let mut next = state.robber.clone();
        for a in 0..next.dim() {
            next[a] += step;
        }
        Ok(spec.board.clamp(&next))
    }
}

/// Runs along the unbounded axis at full speed, holding its lane. Meant for
/// tunnel games where crossing is the whole point.
pub struct TunnelSprinter;

impl RobberController for TunnelSprinter {
    fn name(&self) -> &'static str {
        "tunnel_sprinter"
    }

    fn place(&mut self, spec: &MatchSpec, _cops: &[Coord]) -> Result<Coord> {
        Ok(spec.board.center())
    }

    fn turn(&mut self, spec: &MatchSpec, state: &GameState) -> Result<Coord> {
        let mut next = state.robber.clone();
        next[0] += spec.robber_speed;
        Ok(spec.board.clamp(&next))
    }
}

/// Moves to the reachable cell maximizing distance to the nearest cop,
/// breaking ties lexicographically. Places the same way when possible.
pub struct GreedyEvader;

fn nearest_cop_distance(board: &BoardKind, cops: &[Coord], p: &Coord) -> i64 {
    cops.iter()
        .map(|c| board.chebyshev(c, p).unwrap_or(i64::MAX))
        .min()
        .unwrap_or(i64::MAX)
}

impl RobberController for GreedyEvader {
    fn name(&self) -> &'static str {
        "greedy_evader"
    }

    fn place(&mut self, spec: &MatchSpec, cops: &[Coord]) -> Result<Coord> {
        let board = &spec.board;
        if matches!(board, BoardKind::Tunnel { .. }) {
            // No farthest cell exists; start at the center like everyone else.
            return Ok(board.center());
        }
        Ok(board
            .cells()?
            .into_iter()
            .max_by_key(|p| (nearest_cop_distance(board, cops, p), std::cmp::Reverse(p.clone())))
            .expect("boards have at least one cell"))
    }

    fn turn(&mut self, spec: &MatchSpec, state: &GameState) -> Result<Coord> {
        let board = &spec.board;
        let ball = board.ball(&state.robber, spec.robber_speed)?;
        Ok(ball
            .into_iter()
            .max_by_key(|p| (nearest_cop_distance(board, &state.cops, p), std::cmp::Reverse(p.clone())))
            .expect("move ball is never empty"))
    }
}

/// Replays a fixed start and move list, standing still afterwards.
pub struct ScriptedRobber {
    start: Coord,
    moves: Vec<Coord>,
    next: usize,
}

impl ScriptedRobber {
    pub fn new(start: Coord, moves: Vec<Coord>) -> Self {
        ScriptedRobber {
            start,
            moves,
            next: 0,
        }
    }
}

impl RobberController for ScriptedRobber {
    fn name(&self) -> &'static str {
        "scripted"
    }

    fn place(&mut self, _spec: &MatchSpec, _cops: &[Coord]) -> Result<Coord> {
        Ok(self.start.clone())
    }

    fn turn(&mut self, _spec: &MatchSpec, state: &GameState) -> Result<Coord> {
        let mv = self.moves.get(self.next).cloned();
        self.next += 1;
        Ok(mv.unwrap_or_else(|| state.robber.clone()))
    }
}
