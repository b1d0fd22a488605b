//! Match engine: game specs, state, the controller interface, adjudication.
//!
//! A match runs as: cops place, robber places (seeing the cops), then rounds
//! of a cop half-turn followed by a robber half-turn. `time` counts completed
//! rounds, so the cops' move in round `t` is made having observed `t - 1`
//! robber moves. Cops always move at speed 1; the robber moves at
//! `robber_speed`.
//!
//! Four win conditions are supported:
//!
//! * `Covering`: after every cop half-turn some cop must stand on the
//!   robber's own vertex; the robber wins at the first check that finds him
//!   alone. `cover_at_start` adds a check right after placement and
//!   `cover_after_robber` adds one after each robber half-turn. Surviving
//!   the horizon is a cop win.
//! * `FixedTime { t }`: exactly one check, after the cops' move in round
//!   `t`: a cop standing on the robber wins, anything else loses. No capture
//!   before or after counts.
//! * `Rugby { finish_x, horizon }`: on a tunnel board. The robber starts far
//!   left of the cops and wins by reaching `x >= finish_x`; any coincidence
//!   with a cop is a capture. Surviving the horizon is a cop win.
//! * `Capture`: classic pursuit, coincidence at the end of any half-turn
//!   wins for the cops; the horizon is a robber win.
//!
//! Controllers returning illegal moves forfeit the match (the engine never
//! panics on a bad strategy); controllers returning `Err` abort it.

use serde::{Deserialize, Serialize};

use crate::audit::AuditReport;
use crate::board::{BoardKind, Coord};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Agent {
    Cops,
    Robber,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "game", rename_all = "snake_case")]
pub enum GameVariant {
    Covering { horizon: u64 },
    FixedTime { t: u64 },
    Rugby { finish_x: i64, horizon: u64 },
    Capture { horizon: u64 },
}

impl GameVariant {
    /// Rounds the match can run before it is adjudicated by exhaustion.
    pub fn total_rounds(&self) -> u64 {
        match *self {
            GameVariant::Covering { horizon }
            | GameVariant::Rugby { horizon, .. }
            | GameVariant::Capture { horizon } => horizon,
            GameVariant::FixedTime { t } => t,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatchSpec {
    pub board: BoardKind,
    pub variant: GameVariant,
    pub cop_count: usize,
    pub robber_speed: i64,
    #[serde(default)]
    pub seed: u64,
    /// Covering only: also require coverage immediately after placement.
    #[serde(default)]
    pub cover_at_start: bool,
    /// Covering only: also require coverage after each robber move.
    #[serde(default)]
    pub cover_after_robber: bool,
}

impl MatchSpec {
    pub fn validate(&self) -> Result<()> {
        self.board.validate()?;
        if self.robber_speed < 1 {
            return Err(Error::config(format!(
                "robber speed {} must be >= 1",
                self.robber_speed
            )));
        }
        match self.variant {
            GameVariant::FixedTime { t } if t == 0 => {
                return Err(Error::config("fixed-time game needs t >= 1"));
            }
            GameVariant::Rugby { .. } if !matches!(self.board, BoardKind::Tunnel { .. }) => {
                return Err(Error::config(
                    "the rugby game is played on a tunnel board",
                ));
            }
            _ => {}
        }
        Ok(())
    }
}

/// Horizon used when a config does not pin one: generous enough that every
/// constructive strategy settles, small enough that sweeps stay fast.
pub fn default_horizon(board: &BoardKind, cop_count: usize) -> u64 {
    20 * board.n() as u64 * (cop_count as u64 + 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    CopsToMove,
    RobberToMove,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameState {
    /// Completed rounds.
    pub time: u64,
    pub cops: Vec<Coord>,
    pub robber: Coord,
    pub phase: Phase,
    /// Some cop stands exactly on the robber's vertex.
    pub covered_now: bool,
    /// A coincidence has happened at the end of any half-turn so far.
    #[serde(default)]
    pub ever_covered: bool,
    /// Covering only: some cop half-turn has already ended uncovered.
    #[serde(default)]
    pub coverage_broken_at_cop_turn: bool,
    /// Rugby only: largest x the robber has reached so far.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub max_robber_x: Option<i64>,
}

impl GameState {
    /// The round currently being played (1-based); equals `time` once the
    /// robber has moved.
    pub fn round(&self) -> u64 {
        match self.phase {
            Phase::CopsToMove => self.time + 1,
            Phase::RobberToMove => self.time + 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WinReason {
    /// A cop stands on the robber.
    Caught,
    /// Fixed-time game: coincidence at exactly the target turn.
    ExactTimeCapture,
    /// Fixed-time game: no coincidence at the target turn.
    ExactTimeMiss,
    /// Covering game: a coverage check found the robber uncovered.
    CoverageBroken,
    /// Rugby: the robber reached the finish column.
    FinishCrossed,
    /// The other side returned an illegal placement or move.
    Forfeit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Outcome {
    CopsWin { reason: WinReason, turn: u64 },
    RobberWins { reason: WinReason, turn: u64 },
    /// The horizon ran out; the side that wins by default depends on the
    /// game (cops for covering and rugby, robber for capture).
    HorizonExhausted { verdict: Agent },
}

impl Outcome {
    pub fn winner(&self) -> Agent {
        match *self {
            Outcome::CopsWin { .. } => Agent::Cops,
            Outcome::RobberWins { .. } => Agent::Robber,
            Outcome::HorizonExhausted { verdict } => verdict,
        }
    }

    pub fn reason(&self) -> Option<WinReason> {
        match *self {
            Outcome::CopsWin { reason, .. } | Outcome::RobberWins { reason, .. } => Some(reason),
            Outcome::HorizonExhausted { .. } => None,
        }
    }

    /// Turn of a genuine capture, if the cops won by one.
    pub fn capture_turn(&self) -> Option<u64> {
        match *self {
            Outcome::CopsWin {
                reason: WinReason::Caught | WinReason::ExactTimeCapture,
                turn,
            } => Some(turn),
            _ => None,
        }
    }
}

/// Cop-side strategy. `place` runs once before the robber exists; `turn`
/// must return one destination per cop, each within distance 1 of the cop's
/// current cell.
pub trait CopController {
    fn name(&self) -> &'static str;

    fn place(&mut self, spec: &MatchSpec) -> Result<Vec<Coord>>;

    fn turn(&mut self, spec: &MatchSpec, state: &GameState) -> Result<Vec<Coord>>;

    /// Extra cells worth marking in a rendering (e.g. a deliberately
    /// unmanned hole). Purely cosmetic.
    fn overlay(&self) -> Vec<Coord> {
        Vec::new()
    }

    fn audit(&self) -> AuditReport {
        AuditReport::default()
    }
}

/// Robber-side strategy. `place` sees the cop placement. In games with a
/// prescribed start (fixed-time, rugby) the engine overrides the returned
/// placement with the game's own.
pub trait RobberController {
    fn name(&self) -> &'static str;

    fn place(&mut self, spec: &MatchSpec, cops: &[Coord]) -> Result<Coord>;

    fn turn(&mut self, spec: &MatchSpec, state: &GameState) -> Result<Coord>;

    fn audit(&self) -> AuditReport {
        AuditReport::default()
    }
}

/// Streaming sink for match progress. Long sweeps with thousands of cops
/// cannot afford to accumulate full traces in memory, so the engine pushes
/// each half-turn state through here and forgets it.
pub trait MatchObserver {
    fn on_spec(&mut self, _spec: &MatchSpec) {}
    fn on_state(&mut self, _state: &GameState) {}
    fn on_outcome(&mut self, _outcome: &Outcome) {}
}

/// Observer that drops everything.
pub struct NullObserver;

impl MatchObserver for NullObserver {}

#[derive(Clone, Debug)]
pub struct MatchResult {
    pub outcome: Outcome,
    /// Completed rounds when the match ended.
    pub rounds: u64,
    pub max_robber_x: Option<i64>,
    /// Description of the rule violation behind a forfeit outcome.
    pub violation: Option<String>,
    pub cop_audit: AuditReport,
    pub robber_audit: AuditReport,
    pub final_state: Option<GameState>,
}

/// True if some cop stands exactly on the robber. This single predicate is
/// the whole win condition everywhere: covering checks it after cop turns,
/// capture at any half-turn end, fixed-time exactly once.
pub fn coincident(cops: &[Coord], robber: &Coord) -> bool {
    cops.iter().any(|c| c == robber)
}

pub(crate) enum Half {
    Placement,
    CopMove,
    RobberMove,
}

pub(crate) fn adjudicate(
    spec: &MatchSpec,
    state: &GameState,
    half: Half,
    round: u64,
) -> Option<Outcome> {
    match spec.variant {
        GameVariant::Covering { .. } => {
            let check = match half {
                Half::Placement => spec.cover_at_start,
                Half::CopMove => true,
                Half::RobberMove => spec.cover_after_robber,
            };
            if check && !state.covered_now {
                return Some(Outcome::RobberWins {
                    reason: WinReason::CoverageBroken,
                    turn: round,
                });
            }
            None
        }
        GameVariant::FixedTime { t } => {
            if matches!(half, Half::CopMove) && round == t {
                Some(if coincident(&state.cops, &state.robber) {
                    Outcome::CopsWin {
                        reason: WinReason::ExactTimeCapture,
                        turn: round,
                    }
                } else {
                    Outcome::RobberWins {
                        reason: WinReason::ExactTimeMiss,
                        turn: round,
                    }
                })
            } else {
                None
            }
        }
        GameVariant::Capture { .. } => {
            if coincident(&state.cops, &state.robber) {
                Some(Outcome::CopsWin {
                    reason: WinReason::Caught,
                    turn: round,
                })
            } else {
                None
            }
        }
        GameVariant::Rugby { finish_x, .. } => {
            if coincident(&state.cops, &state.robber) {
                return Some(Outcome::CopsWin {
                    reason: WinReason::Caught,
                    turn: round,
                });
            }
            if state.robber[0] >= finish_x {
                return Some(Outcome::RobberWins {
                    reason: WinReason::FinishCrossed,
                    turn: round,
                });
            }
            None
        }
    }
}

fn cop_placement_violation(spec: &MatchSpec, cops: &[Coord]) -> Option<String> {
    if cops.len() != spec.cop_count {
        return Some(format!(
            "cop placement returned {} cops, spec says {}",
            cops.len(),
            spec.cop_count
        ));
    }
    for (i, c) in cops.iter().enumerate() {
        if c.dim() != spec.board.axes() || !spec.board.contains(c) {
            return Some(format!("cop {i} placed off board at {c}"));
        }
    }
    None
}

pub(crate) fn cop_move_violation(spec: &MatchSpec, old: &[Coord], new: &[Coord]) -> Option<String> {
    if new.len() != old.len() {
        return Some(format!(
            "cop move returned {} cops, expected {}",
            new.len(),
            old.len()
        ));
    }
    for i in 0..old.len() {
        let c = &new[i];
        if c.dim() != spec.board.axes() || !spec.board.contains(c) {
            return Some(format!("cop {i} moved off board to {c}"));
        }
        match spec.board.chebyshev(&old[i], c) {
            Ok(d) if d <= 1 => {}
            _ => return Some(format!("cop {i} moved {} -> {c}, farther than 1", old[i])),
        }
    }
    None
}

pub(crate) fn robber_move_violation(spec: &MatchSpec, old: &Coord, new: &Coord) -> Option<String> {
    if new.dim() != spec.board.axes() || !spec.board.contains(new) {
        return Some(format!("robber moved off board to {new}"));
    }
    match spec.board.chebyshev(old, new) {
        Ok(d) if d <= spec.robber_speed => None,
        _ => Some(format!(
            "robber moved {old} -> {new}, farther than speed {}",
            spec.robber_speed
        )),
    }
}

/// Prescribed rugby start: well to the left of the leftmost cop, centered on
/// the bounded axes.
fn rugby_start(board: &BoardKind, cops: &[Coord]) -> Coord {
    let min_x = cops.iter().map(|c| c[0]).min().unwrap_or(0);
    let mut p = board.center();
    p[0] = min_x - 2 * board.n();
    p
}

fn finish(
    observer: &mut dyn MatchObserver,
    cop: &dyn CopController,
    robber: &dyn RobberController,
    outcome: Outcome,
    state: Option<GameState>,
    violation: Option<String>,
) -> MatchResult {
    observer.on_outcome(&outcome);
    MatchResult {
        rounds: state.as_ref().map(|s| s.time).unwrap_or(0),
        max_robber_x: state.as_ref().and_then(|s| s.max_robber_x),
        outcome,
        violation,
        cop_audit: cop.audit(),
        robber_audit: robber.audit(),
        final_state: state,
    }
}

/// Run one match to completion.
pub fn play(
    spec: &MatchSpec,
    cop: &mut dyn CopController,
    robber: &mut dyn RobberController,
    observer: &mut dyn MatchObserver,
) -> Result<MatchResult> {
    spec.validate()?;
    observer.on_spec(spec);
    let board = spec.board;

    let cops = cop.place(spec)?;
    if let Some(detail) = cop_placement_violation(spec, &cops) {
        let outcome = Outcome::RobberWins {
            reason: WinReason::Forfeit,
            turn: 0,
        };
        return Ok(finish(observer, cop, robber, outcome, None, Some(detail)));
    }

    let suggested = robber.place(spec, &cops)?;
    let start = match spec.variant {
        GameVariant::FixedTime { .. } => board.center(),
        GameVariant::Rugby { .. } => rugby_start(&board, &cops),
        _ => {
            if suggested.dim() != board.axes() || !board.contains(&suggested) {
                let outcome = Outcome::CopsWin {
                    reason: WinReason::Forfeit,
                    turn: 0,
                };
                let detail = format!("robber placed off board at {suggested}");
                return Ok(finish(observer, cop, robber, outcome, None, Some(detail)));
            }
            suggested
        }
    };

    let covered_now = coincident(&cops, &start);
    let mut state = GameState {
        time: 0,
        covered_now,
        ever_covered: covered_now,
        coverage_broken_at_cop_turn: false,
        max_robber_x: matches!(spec.variant, GameVariant::Rugby { .. }).then(|| start[0]),
        cops,
        robber: start,
        phase: Phase::CopsToMove,
    };
    observer.on_state(&state);
    if let Some(outcome) = adjudicate(spec, &state, Half::Placement, 0) {
        return Ok(finish(observer, cop, robber, outcome, Some(state), None));
    }

    for round in 1..=spec.variant.total_rounds() {
        let moves = cop.turn(spec, &state)?;
        if let Some(detail) = cop_move_violation(spec, &state.cops, &moves) {
            let outcome = Outcome::RobberWins {
                reason: WinReason::Forfeit,
                turn: round,
            };
            return Ok(finish(observer, cop, robber, outcome, Some(state), Some(detail)));
        }
        state.cops = moves;
        state.phase = Phase::RobberToMove;
        state.covered_now = coincident(&state.cops, &state.robber);
        state.ever_covered |= state.covered_now;
        if matches!(spec.variant, GameVariant::Covering { .. }) && !state.covered_now {
            state.coverage_broken_at_cop_turn = true;
        }
        observer.on_state(&state);
        if let Some(outcome) = adjudicate(spec, &state, Half::CopMove, round) {
            return Ok(finish(observer, cop, robber, outcome, Some(state), None));
        }

        let dest = robber.turn(spec, &state)?;
        if let Some(detail) = robber_move_violation(spec, &state.robber, &dest) {
            let outcome = Outcome::CopsWin {
                reason: WinReason::Forfeit,
                turn: round,
            };
            return Ok(finish(observer, cop, robber, outcome, Some(state), Some(detail)));
        }
        state.robber = dest;
        state.phase = Phase::CopsToMove;
        state.time = round;
        state.covered_now = coincident(&state.cops, &state.robber);
        state.ever_covered |= state.covered_now;
        if let Some(mx) = state.max_robber_x {
            state.max_robber_x = Some(mx.max(state.robber[0]));
        }
        observer.on_state(&state);
        if let Some(outcome) = adjudicate(spec, &state, Half::RobberMove, round) {
            return Ok(finish(observer, cop, robber, outcome, Some(state), None));
        }
    }

    let verdict = match spec.variant {
        GameVariant::Covering { .. } | GameVariant::Rugby { .. } => Agent::Cops,
        GameVariant::Capture { .. } => Agent::Robber,
        GameVariant::FixedTime { .. } => {
            unreachable!("fixed-time games always end at their target turn")
        }
    };
    let outcome = Outcome::HorizonExhausted { verdict };
    Ok(finish(observer, cop, robber, outcome, Some(state), None))
}

/// ASCII picture of a 1- or 2-axis position: `C` cop, `R` robber, `X` both,
/// `·` overlay marks, `.` empty. Rows are printed with the second axis
/// increasing upward.
pub fn render_state(
    board: &BoardKind,
    state: &GameState,
    overlay: &[Coord],
) -> Result<String> {
    let axes = board.axes();
    if axes > 2 {
        return Err(Error::Unsupported(format!(
            "rendering a {axes}-axis board"
        )));
    }
    let window = |axis: usize| -> (i64, i64) {
        match board.axis_bounds(axis) {
            Some(b) => b,
            None => {
                let xs = state
                    .cops
                    .iter()
                    .map(|c| c[axis])
                    .chain(std::iter::once(state.robber[axis]));
                let lo = xs.clone().min().unwrap_or(0);
                let hi = xs.max().unwrap_or(0);
                (lo - 2, hi + 2)
            }
        }
    };
    let (x_lo, x_hi) = window(0);
    if x_hi - x_lo > 200 {
        return Err(Error::Unsupported(format!(
            "rendering a window {} cells wide",
            x_hi - x_lo + 1
        )));
    }
    let (y_lo, y_hi) = if axes == 2 { window(1) } else { (0, 0) };

    let glyph = |p: &Coord| -> char {
        let on_cop = state.cops.iter().any(|c| c == p);
        let on_robber = &state.robber == p;
        match (on_cop, on_robber) {
            (true, true) => 'X',
            (true, false) => 'C',
            (false, true) => 'R',
            (false, false) => {
                if overlay.contains(p) {
                    '·'
                } else {
                    '.'
                }
            }
        }
    };

    let mut out = String::new();
    for y in (y_lo..=y_hi).rev() {
        for x in x_lo..=x_hi {
            let p = if axes == 2 {
                crate::coord![x, y]
            } else {
                crate::coord![x]
            };
            out.push(glyph(&p));
        }
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coord;

    /// Replays a fixed placement and a fixed list of per-turn positions,
    /// standing still once the script runs out.
    struct ScriptCops {
        start: Vec<Coord>,
        script: Vec<Vec<Coord>>,
        i: usize,
    }

    impl CopController for ScriptCops {
        fn name(&self) -> &'static str {
            "script"
        }
        fn place(&mut self, _spec: &MatchSpec) -> Result<Vec<Coord>> {
            Ok(self.start.clone())
        }
        fn turn(&mut self, _spec: &MatchSpec, state: &GameState) -> Result<Vec<Coord>> {
            let mv = self.script.get(self.i).cloned();
            self.i += 1;
            Ok(mv.unwrap_or_else(|| state.cops.clone()))
        }
    }

    struct ScriptRobber {
        start: Coord,
        script: Vec<Coord>,
        i: usize,
    }

    impl RobberController for ScriptRobber {
        fn name(&self) -> &'static str {
            "script"
        }
        fn place(&mut self, _spec: &MatchSpec, _cops: &[Coord]) -> Result<Coord> {
            Ok(self.start.clone())
        }
        fn turn(&mut self, _spec: &MatchSpec, state: &GameState) -> Result<Coord> {
            let mv = self.script.get(self.i).cloned();
            self.i += 1;
            Ok(mv.unwrap_or_else(|| state.robber.clone()))
        }
    }

    fn run(
        spec: &MatchSpec,
        cops: ScriptCops,
        robber: ScriptRobber,
    ) -> MatchResult {
        let mut c = cops;
        let mut r = robber;
        play(spec, &mut c, &mut r, &mut NullObserver).unwrap()
    }

    fn spec_on(board: BoardKind, variant: GameVariant, cop_count: usize) -> MatchSpec {
        MatchSpec {
            board,
            variant,
            cop_count,
            robber_speed: 1,
            seed: 0,
            cover_at_start: false,
            cover_after_robber: false,
        }
    }

    #[test]
    fn capture_adjudicated_at_coincidence() {
        let spec = spec_on(
            BoardKind::Grid { n: 5, d: 1 },
            GameVariant::Capture { horizon: 10 },
            1,
        );
        let cops = ScriptCops {
            start: vec![coord![3]],
            script: vec![vec![coord![4]], vec![coord![5]]],
            i: 0,
        };
        let robber = ScriptRobber {
            start: coord![5],
            script: vec![],
            i: 0,
        };
        let res = run(&spec, cops, robber);
        assert_eq!(
            res.outcome,
            Outcome::CopsWin {
                reason: WinReason::Caught,
                turn: 2
            }
        );
        assert_eq!(res.outcome.capture_turn(), Some(2));
    }

    #[test]
    fn capture_horizon_goes_to_robber() {
        let spec = spec_on(
            BoardKind::Grid { n: 9, d: 1 },
            GameVariant::Capture { horizon: 3 },
            1,
        );
        let cops = ScriptCops {
            start: vec![coord![1]],
            script: vec![],
            i: 0,
        };
        let robber = ScriptRobber {
            start: coord![9],
            script: vec![],
            i: 0,
        };
        let res = run(&spec, cops, robber);
        assert_eq!(
            res.outcome,
            Outcome::HorizonExhausted {
                verdict: Agent::Robber
            }
        );
        assert_eq!(res.rounds, 3);
    }

    #[test]
    fn covering_breaks_at_first_uncovered_cop_turn() {
        let spec = spec_on(
            BoardKind::Grid { n: 5, d: 1 },
            GameVariant::Covering { horizon: 10 },
            2,
        );
        let cops = ScriptCops {
            start: vec![coord![1], coord![2]],
            script: vec![],
            i: 0,
        };
        // Cop 2 stands on the robber through turn 1; the step to 3 leaves
        // the stationary cops behind, so the check after cop turn 2 fails.
        let robber = ScriptRobber {
            start: coord![2],
            script: vec![coord![3]],
            i: 0,
        };
        let res = run(&spec, cops, robber);
        assert_eq!(
            res.outcome,
            Outcome::RobberWins {
                reason: WinReason::CoverageBroken,
                turn: 2
            }
        );
        let end = res.final_state.unwrap();
        assert!(end.coverage_broken_at_cop_turn);
        assert!(end.ever_covered);
    }

    #[test]
    fn covering_flags_tighten_the_checks() {
        let board = BoardKind::Grid { n: 5, d: 1 };
        // Uncovered placement only matters with cover_at_start.
        let mut spec = spec_on(board, GameVariant::Covering { horizon: 2 }, 1);
        spec.cover_at_start = true;
        let cops = ScriptCops {
            start: vec![coord![1]],
            script: vec![],
            i: 0,
        };
        let robber = ScriptRobber {
            start: coord![5],
            script: vec![],
            i: 0,
        };
        let res = run(&spec, cops, robber);
        assert_eq!(
            res.outcome,
            Outcome::RobberWins {
                reason: WinReason::CoverageBroken,
                turn: 0
            }
        );

        // The same escape move is caught one half-turn earlier with
        // cover_after_robber.
        let mut spec = spec_on(board, GameVariant::Covering { horizon: 10 }, 1);
        spec.cover_after_robber = true;
        let cops = ScriptCops {
            start: vec![coord![3]],
            script: vec![],
            i: 0,
        };
        let robber = ScriptRobber {
            start: coord![3],
            script: vec![coord![4]],
            i: 0,
        };
        let res = run(&spec, cops, robber);
        assert_eq!(
            res.outcome,
            Outcome::RobberWins {
                reason: WinReason::CoverageBroken,
                turn: 1
            }
        );
        // The robber-half check does not set the cop-turn flag.
        assert!(!res.final_state.unwrap().coverage_broken_at_cop_turn);
    }

    #[test]
    fn covering_horizon_goes_to_cops() {
        let spec = spec_on(
            BoardKind::Grid { n: 3, d: 1 },
            GameVariant::Covering { horizon: 4 },
            3,
        );
        let cops = ScriptCops {
            start: vec![coord![1], coord![2], coord![3]],
            script: vec![],
            i: 0,
        };
        let robber = ScriptRobber {
            start: coord![2],
            script: vec![],
            i: 0,
        };
        let res = run(&spec, cops, robber);
        assert_eq!(
            res.outcome,
            Outcome::HorizonExhausted {
                verdict: Agent::Cops
            }
        );
        assert!(!res.final_state.unwrap().coverage_broken_at_cop_turn);
    }

    #[test]
    fn fixed_time_checks_exactly_once() {
        let board = BoardKind::Grid { n: 5, d: 1 };
        // Robber is auto-placed at the center (3) and stays; the cop walks
        // onto it at turn 2 exactly.
        let spec = spec_on(board, GameVariant::FixedTime { t: 2 }, 1);
        let cops = ScriptCops {
            start: vec![coord![1]],
            script: vec![vec![coord![2]], vec![coord![3]]],
            i: 0,
        };
        let robber = ScriptRobber {
            start: coord![1], // ignored: prescribed start is the center
            script: vec![],
            i: 0,
        };
        let res = run(&spec, cops, robber);
        assert_eq!(
            res.outcome,
            Outcome::CopsWin {
                reason: WinReason::ExactTimeCapture,
                turn: 2
            }
        );

        // Standing on the robber at turn 1 is worthless if t = 2: the cop
        // must coincide at the target turn, not before.
        let cops = ScriptCops {
            start: vec![coord![2]],
            script: vec![vec![coord![3]], vec![coord![4]]],
            i: 0,
        };
        let robber = ScriptRobber {
            start: coord![1],
            script: vec![],
            i: 0,
        };
        let res = run(&spec, cops, robber);
        assert_eq!(
            res.outcome,
            Outcome::RobberWins {
                reason: WinReason::ExactTimeMiss,
                turn: 2
            }
        );
    }

    #[test]
    fn rugby_finish_and_capture() {
        let board = BoardKind::Tunnel { n: 3, d: 1 };
        let variant = GameVariant::Rugby {
            finish_x: 1,
            horizon: 20,
        };
        // Start is prescribed: leftmost cop x minus 2n = 5 - 6 = -1.
        let mut spec = spec_on(board, variant, 1);
        spec.robber_speed = 2;
        let cops = ScriptCops {
            start: vec![coord![5, 2]],
            script: vec![],
            i: 0,
        };
        let robber = ScriptRobber {
            start: coord![0, 1], // ignored
            script: vec![coord![1, 2]],
            i: 0,
        };
        let res = run(&spec, cops, robber);
        assert_eq!(
            res.outcome,
            Outcome::RobberWins {
                reason: WinReason::FinishCrossed,
                turn: 1
            }
        );
        assert_eq!(res.max_robber_x, Some(1));

        // Walking onto a cop is a capture even in rugby.
        let mut spec = spec_on(board, variant, 1);
        spec.robber_speed = 2;
        let cops = ScriptCops {
            start: vec![coord![0, 2]],
            script: vec![],
            i: 0,
        };
        let robber = ScriptRobber {
            start: coord![0, 1],
            script: vec![coord![-4, 2], coord![-2, 2], coord![0, 2]],
            i: 0,
        };
        let res = run(&spec, cops, robber);
        assert_eq!(
            res.outcome,
            Outcome::CopsWin {
                reason: WinReason::Caught,
                turn: 3
            }
        );
        assert!(res.final_state.unwrap().ever_covered);
    }

    #[test]
    fn illegal_moves_forfeit() {
        let spec = spec_on(
            BoardKind::Grid { n: 5, d: 1 },
            GameVariant::Capture { horizon: 10 },
            1,
        );
        // Cop teleports two cells.
        let cops = ScriptCops {
            start: vec![coord![1]],
            script: vec![vec![coord![3]]],
            i: 0,
        };
        let robber = ScriptRobber {
            start: coord![5],
            script: vec![],
            i: 0,
        };
        let res = run(&spec, cops, robber);
        assert_eq!(
            res.outcome,
            Outcome::RobberWins {
                reason: WinReason::Forfeit,
                turn: 1
            }
        );
        assert!(res.violation.unwrap().contains("farther than 1"));

        // Robber steps off the board.
        let cops = ScriptCops {
            start: vec![coord![1]],
            script: vec![],
            i: 0,
        };
        let robber = ScriptRobber {
            start: coord![5],
            script: vec![coord![6]],
            i: 0,
        };
        let res = run(&spec, cops, robber);
        assert_eq!(
            res.outcome,
            Outcome::CopsWin {
                reason: WinReason::Forfeit,
                turn: 1
            }
        );
    }

    #[test]
    fn observer_sees_every_half_turn() {
        #[derive(Default)]
        struct Counter {
            specs: usize,
            states: usize,
            outcomes: usize,
        }
        impl MatchObserver for Counter {
            fn on_spec(&mut self, _: &MatchSpec) {
                self.specs += 1;
            }
            fn on_state(&mut self, _: &GameState) {
                self.states += 1;
            }
            fn on_outcome(&mut self, _: &Outcome) {
                self.outcomes += 1;
            }
        }

        let spec = spec_on(
            BoardKind::Grid { n: 9, d: 1 },
            GameVariant::Capture { horizon: 3 },
            1,
        );
        let mut cops = ScriptCops {
            start: vec![coord![1]],
            script: vec![],
            i: 0,
        };
        let mut robber = ScriptRobber {
            start: coord![9],
            script: vec![],
            i: 0,
        };
        let mut obs = Counter::default();
        play(&spec, &mut cops, &mut robber, &mut obs).unwrap();
        // Placement + 3 rounds x 2 half-turns.
        assert_eq!((obs.specs, obs.states, obs.outcomes), (1, 7, 1));
    }

    #[test]
    fn render_smoke() {
        let board = BoardKind::Grid { n: 3, d: 2 };
        let state = GameState {
            time: 0,
            cops: vec![coord![1, 1], coord![2, 2]],
            robber: coord![3, 1],
            phase: Phase::CopsToMove,
            covered_now: false,
            ever_covered: false,
            coverage_broken_at_cop_turn: false,
            max_robber_x: None,
        };
        let pic = render_state(&board, &state, &[coord![3, 3]]).unwrap();
        assert_eq!(pic, "..·\n.C.\nC.R\n");
    }
}
