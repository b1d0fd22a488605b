//! A speed-2 robber that circles a square grid clockwise forever.
//!
//! The runner starts somewhere in the n/6-square whose bottom-left corner
//! sits at (0, 2n/3), sprints right along the top band, and turns clockwise
//! whenever its leg coordinate reaches the window between 2n/3 and 5n/6 of
//! the traverse (mirrored to [n/6, n/3] on the return legs). A start cell or
//! corner cell is acceptable only when every scale passes a headcount: at
//! most t^i/4 cops inside the 2k^i-square centred on the cell, checked in
//! exact integer arithmetic. Rejections are tallied per scale in
//! [`BanCounters`]; a counting argument promises the tallies stay below
//! 64·k^{2i}·copCount/t^i, and the audit checks that bound as computed
//! numbers rather than asymptotics.
//!
//! Along a straightaway the runner faces the same problem as the tunnel
//! runner, so it reuses the request machinery from [`super::interval`] with
//! "forward" and "lateral" read in the frame of the current heading. Turning
//! a corner cancels any open requests; the ledger counts those cancellations
//! separately from completions.

use serde::{Deserialize, Serialize};

use crate::audit::{AuditReport, EventKind};
use crate::board::{BoardKind, Coord};
use crate::coord;
use crate::engine::{GameState, GameVariant, MatchSpec, RobberController};
use crate::error::{Error, Result};

use super::interval::{IntervalConfig, RequestEngine, RequestLedger};

/// Clockwise headings and, for each, the direction that counts as "up" in
/// the request engine's frame (the heading rotated a quarter turn
/// counter-clockwise).
const HEADINGS: [(i64, i64); 4] = [(1, 0), (0, -1), (-1, 0), (0, 1)];
const LATERALS: [(i64, i64); 4] = [(0, 1), (1, 0), (0, -1), (-1, 0)];
const HEADING_NAMES: [&str; 4] = ["right", "down", "left", "up"];

/// Per-scale tallies of rejected start and corner cells.
///
/// A cell is banned at scale i when more than t^i/4 cops stand within
/// Chebyshev distance k^i of it. Each cop can only ban so many cells, which
/// caps the tally C_i at 64·k^{2i}·copCount/t^i; `within_bound` checks that
/// cap exactly (both sides squared, with t² = 3/2).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BanCounters {
    k: i64,
    tallies: Vec<u64>,
}

impl BanCounters {
    fn new(k: i64, levels: usize) -> Self {
        BanCounters {
            k,
            tallies: vec![0; levels],
        }
    }

    fn ban(&mut self, level: usize) {
        self.tallies[level - 1] += 1;
    }

    /// Tally for scale `level` (1-based).
    pub fn tally(&self, level: usize) -> u64 {
        self.tallies[level - 1]
    }

    pub fn tallies(&self) -> &[u64] {
        &self.tallies
    }

    /// C_i · t^i ≤ 64 · k^{2i} · copCount, squared to stay in integers:
    /// C_i² · 3^i ≤ 2^i · (64 · k^{2i} · copCount)². Treats overflow of the
    /// right side as a pass, since the bound is then astronomically loose.
    pub fn within_bound(&self, level: usize, cop_count: usize) -> bool {
        let c = self.tallies[level - 1] as i128;
        let lhs = match 3i128
            .checked_pow(level as u32)
            .and_then(|p| (c * c).checked_mul(p))
        {
            Some(v) => v,
            None => return false,
        };
        let k2i = (self.k as i128).pow(2 * level as u32);
        let cap = 64i128
            .checked_mul(k2i)
            .and_then(|v| v.checked_mul(cop_count as i128));
        let rhs = cap
            .and_then(|v| v.checked_mul(v))
            .and_then(|v| v.checked_mul(1i128 << level));
        match rhs {
            Some(v) => lhs <= v,
            None => true,
        }
    }
}

/// More than t^i/4 cops near the cell? Exact check: 16·c²·2^i > 3^i.
fn headcount_bans(count: usize, level: usize) -> bool {
    let c = count as i128;
    16 * c * c * (1i128 << level) > 3i128.pow(level as u32)
}

/// The clockwise loop runner.
pub struct GridLooper {
    cfg: IntervalConfig,
    engine: Option<RequestEngine>,
    heading: usize,
    n: i64,
    levels: usize,
    bans: BanCounters,
    audit: AuditReport,
    clamp_noted: bool,
    bound_flagged: Vec<bool>,
}

impl GridLooper {
    pub fn new(cfg: IntervalConfig) -> Self {
        GridLooper {
            cfg,
            engine: None,
            heading: 0,
            n: 0,
            levels: 0,
            bans: BanCounters::new(1, 0),
            audit: AuditReport::default(),
            clamp_noted: false,
            bound_flagged: Vec::new(),
        }
    }

    pub fn ban_counters(&self) -> &BanCounters {
        &self.bans
    }

    pub fn ledger(&self) -> Option<&RequestLedger> {
        self.engine.as_ref().map(|e| e.ledger())
    }

    /// First scale whose headcount bans this cell, if any.
    fn cell_banned(&self, cell: &Coord, cops: &[Coord]) -> Option<usize> {
        let mut radius = 1i64;
        for level in 1..=self.levels {
            radius *= self.cfg.k;
            let count = cops
                .iter()
                .filter(|c| {
                    (c[0] - cell[0]).abs().max((c[1] - cell[1]).abs()) <= radius
                })
                .count();
            if headcount_bans(count, level) {
                return Some(level);
            }
        }
        None
    }

    fn check_tally_bounds(&mut self, cop_count: usize, time: u64) {
        for level in 1..=self.levels {
            if !self.bans.within_bound(level, cop_count) && !self.bound_flagged[level - 1] {
                self.bound_flagged[level - 1] = true;
                self.audit.record(
                    EventKind::InvariantBroken,
                    time,
                    format!(
                        "ban tally C_{} = {} exceeds the pigeonhole cap for {} cops",
                        level,
                        self.bans.tally(level),
                        cop_count
                    ),
                );
            }
        }
    }

    fn turn_corner(&mut self, time: u64, at: &Coord) {
        self.heading = (self.heading + 1) % 4;
        if let Some(engine) = self.engine.as_mut() {
            engine.cancel_all(time, &mut self.audit, "corner turn");
        }
        self.audit.record(
            EventKind::Note,
            time,
            format!("heading {} at {:?}", HEADING_NAMES[self.heading], at),
        );
    }
}

impl RobberController for GridLooper {
    fn name(&self) -> &'static str {
        "grid_looper"
    }

    fn place(&mut self, spec: &MatchSpec, cops: &[Coord]) -> Result<Coord> {
        let n = match spec.board {
            BoardKind::Grid { n, d: 2 } => n,
            _ => {
                return Err(Error::Unsupported(
                    "the loop runner needs a two-dimensional square grid".into(),
                ))
            }
        };
        if !matches!(spec.variant, GameVariant::Capture { .. }) {
            return Err(Error::config(
                "the loop runner plays plain capture; pick the capture variant",
            ));
        }
        if spec.robber_speed < 2 {
            return Err(Error::config("the loop runner needs speed at least 2"));
        }
        self.cfg.validate()?;
        let levels = self.cfg.levels_for(n);
        if levels == 0 {
            return Err(Error::config(format!(
                "grid side {n} is too small for k = {}; need n >= 2k",
                self.cfg.k
            )));
        }
        self.n = n;
        self.levels = levels;
        self.heading = 0;
        self.bans = BanCounters::new(self.cfg.k, levels);
        self.bound_flagged = vec![false; levels];
        self.clamp_noted = false;
        self.audit = AuditReport::default();

        let x_hi = n / 6;
        let y_lo = 2 * n / 3 + 1;
        let y_hi = y_lo + n / 6 - 1;
        let mut skipped = 0u64;
        for x in 1..=x_hi {
            for y in y_lo..=y_hi {
                let cell = coord![x, y];
                match self.cell_banned(&cell, cops) {
                    Some(level) => {
                        self.bans.ban(level);
                        skipped += 1;
                    }
                    None => {
                        self.check_tally_bounds(cops.len(), 0);
                        self.audit.record(
                            EventKind::Note,
                            0,
                            format!(
                                "start accepted at {:?} after {} banned cells; tallies {:?}",
                                cell,
                                skipped,
                                self.bans.tallies()
                            ),
                        );
                        self.engine = Some(RequestEngine::new(&self.cfg, levels));
                        return Ok(cell);
                    }
                }
            }
        }
        Err(Error::config(format!(
            "every start cell in the corner square is banned; tallies by level: {:?}",
            self.bans.tallies()
        )))
    }

    fn turn(&mut self, spec: &MatchSpec, state: &GameState) -> Result<Coord> {
        let r = state.robber.clone();
        let n = self.n;
        let axis = if self.heading % 2 == 0 { 0 } else { 1 };
        let forward_leg = self.heading == 0 || self.heading == 3;
        let p = r[axis];
        let (in_window, at_end) = if forward_leg {
            (p >= 2 * n / 3, p >= 5 * n / 6)
        } else {
            (p <= n / 3, p <= n / 6)
        };
        if in_window {
            match self.cell_banned(&r, &state.cops) {
                None => self.turn_corner(state.time, &r),
                Some(level) => {
                    self.bans.ban(level);
                    self.check_tally_bounds(state.cops.len(), state.time);
                    if at_end {
                        self.audit.record(
                            EventKind::InvariantBroken,
                            state.time,
                            format!(
                                "no clear corner cell before the window ran out; forcing the turn at {:?}",
                                r
                            ),
                        );
                        self.turn_corner(state.time, &r);
                    }
                }
            }
        }

        let h = HEADINGS[self.heading];
        let l = LATERALS[self.heading];
        let rel: Vec<(i64, i64)> = state
            .cops
            .iter()
            .map(|c| {
                let dx = c[0] - r[0];
                let dy = c[1] - r[1];
                (dx * h.0 + dy * h.1, dx * l.0 + dy * l.1)
            })
            .collect();
        let engine = self.engine.as_mut().expect("turn before placement");
        let dy = engine.step(&rel, state.time, &mut self.audit);
        let dest = coord![r[0] + 2 * h.0 + dy * l.0, r[1] + 2 * h.1 + dy * l.1];
        let clamped = spec.board.clamp(&dest);
        if clamped != dest && !self.clamp_noted {
            self.clamp_noted = true;
            self.audit.record(
                EventKind::ClampedMove,
                state.time,
                format!("dodge clamped onto the board at {clamped:?}"),
            );
        }
        let actual = (clamped[0] - r[0]) * l.0 + (clamped[1] - r[1]) * l.1;
        engine.record_motion(actual);
        Ok(clamped)
    }

    fn audit(&self) -> AuditReport {
        self.audit.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cops::basic::{ScriptedCops, Stationary};
    use crate::engine::{play, Agent, NullObserver, Phase};

    fn capture_spec(n: i64, cop_count: usize, horizon: u64) -> MatchSpec {
        MatchSpec {
            board: BoardKind::Grid { n, d: 2 },
            variant: GameVariant::Capture { horizon },
            cop_count,
            robber_speed: 2,
            seed: 7,
            cover_at_start: false,
            cover_after_robber: false,
        }
    }

    fn turn_notes(report: &AuditReport) -> Vec<String> {
        report
            .events
            .iter()
            .filter(|e| e.kind == EventKind::Note && e.detail.starts_with("heading "))
            .map(|e| e.detail.clone())
            .collect()
    }

    #[test]
    fn an_empty_board_loops_clockwise_from_the_known_corner() {
        let mut probe = GridLooper::new(IntervalConfig::desk());
        let spec = capture_spec(240, 0, 2400);
        assert_eq!(probe.place(&spec, &[]).unwrap(), coord![1, 161]);

        let mut cops = Stationary;
        let mut robber = GridLooper::new(IntervalConfig::desk());
        let result = play(&spec, &mut cops, &mut robber, &mut NullObserver).unwrap();
        assert_eq!(result.outcome.winner(), Agent::Robber);

        let report = result.robber_audit;
        assert_eq!(report.violations().count(), 0);
        let notes = turn_notes(&report);
        assert!(notes.len() >= 8, "only {} turns taken", notes.len());
        for (note, dir) in notes.iter().zip(["down", "left", "up", "right"]) {
            assert!(note.contains(dir), "expected {dir} in {note}");
        }
        assert!(notes[0].contains("(161,161)"));
        assert_eq!(robber.ban_counters().tallies(), &[0, 0]);
    }

    #[test]
    fn a_cop_near_the_square_shifts_the_start() {
        let mut robber = GridLooper::new(IntervalConfig::desk());
        let spec = capture_spec(1200, 1, 100);
        let start = robber.place(&spec, &[coord![50, 850]]).unwrap();
        assert_eq!(start, coord![1, 951]);
        assert_eq!(robber.ban_counters().tallies(), &[0, 150]);
    }

    #[test]
    fn a_cop_inside_the_square_blocks_every_start_at_desk_scale() {
        let mut robber = GridLooper::new(IntervalConfig::desk());
        let spec = capture_spec(240, 1, 100);
        let err = robber.place(&spec, &[coord![20, 180]]).unwrap_err();
        assert!(err.is_config());
        assert!(err.to_string().contains("tallies"), "{err}");
    }

    #[test]
    fn corner_bans_count_scales_and_force_the_turn_at_the_window_end() {
        let spec = capture_spec(240, 1, 100);
        let mut robber = GridLooper::new(IntervalConfig::desk());
        robber.place(&spec, &[]).unwrap();

        assert_eq!(
            robber.cell_banned(&coord![120, 120], &[coord![125, 115]]),
            Some(1)
        );
        assert_eq!(
            robber.cell_banned(&coord![120, 120], &[coord![220, 120]]),
            Some(2)
        );
        assert_eq!(
            robber.cell_banned(&coord![120, 120], &[coord![221, 120]]),
            None
        );

        // Window end on the first leg is x = 200; a cop camped there defers
        // the corner and finally forces it.
        let state = GameState {
            time: 9,
            cops: vec![coord![203, 163]],
            robber: coord![201, 161],
            phase: Phase::RobberToMove,
            covered_now: false,
            ever_covered: false,
            coverage_broken_at_cop_turn: false,
            max_robber_x: None,
        };
        let dest = robber.turn(&spec, &state).unwrap();
        assert_eq!(dest, coord![201, 159], "forced turn should head down");
        let report = robber.audit();
        assert_eq!(report.violations().count(), 1);
        assert!(report
            .events
            .iter()
            .any(|e| e.kind == EventKind::InvariantBroken && e.detail.contains("forcing")));
        assert_eq!(robber.ban_counters().tally(1), 1);
    }

    #[test]
    fn the_tally_cap_is_checked_exactly() {
        let mut bans = BanCounters::new(10, 2);
        bans.tallies[0] = 5225;
        assert!(bans.within_bound(1, 1));
        bans.tallies[0] = 5226;
        assert!(!bans.within_bound(1, 1));
    }

    #[test]
    fn a_centre_cop_is_dodged_once_and_the_loop_settles() {
        let spec = capture_spec(1200, 1, 12000);
        let mut cops = ScriptedCops::new(vec![coord![600, 600]], vec![]);
        let mut robber = GridLooper::new(IntervalConfig::desk());
        let result = play(&spec, &mut cops, &mut robber, &mut NullObserver).unwrap();
        assert_eq!(result.outcome.winner(), Agent::Robber);

        let ledger = robber.ledger().unwrap();
        assert_eq!(ledger.stats[1].opened, 1, "one dodge around the centre");
        assert_eq!(ledger.stats[1].cancelled, 1, "the corner cancels it");
        assert_eq!(ledger.stats[0].opened, 0);
        assert_eq!(ledger.bad.len(), 1);
        assert!(ledger.system_breaks >= 1);

        let report = result.robber_audit;
        assert_eq!(
            report
                .events
                .iter()
                .filter(|e| e.kind == EventKind::InvariantBroken)
                .count(),
            0,
            "no forced corners and no tally violations"
        );
        assert!(turn_notes(&report).len() >= 8);
    }
}
