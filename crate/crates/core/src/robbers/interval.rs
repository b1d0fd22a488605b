//! Interval bookkeeping for a robber outrunning slower cops down a tunnel.
//!
//! The robber advances two columns every turn, no exceptions, so a cop that
//! falls behind is gone for good and only the cops ahead matter. Those are
//! binned by distance into geometric bands: level `i` watches the window
//! `[r_x + 0.9 k^i, r_x + 3.1 k^i]`. Because the robber closes 1 to 3
//! columns per turn on any cop, a cop slides through band `i` for a while
//! before showing up in band `i-1`, and the robber gets progressively
//! louder warnings about the same pack.
//!
//! When band `i` accumulates at least `t^i / 2` cops (t^2 = 3/2) that have
//! not been seen before, the robber files a level-`i` request: dodge
//! vertically, away from where most of the offenders sit, for the next
//! `3.1 k^i` turns. Requests from smaller bands are more urgent and steal
//! the vertical step while they run; the longer request keeps its clock
//! ticking regardless and simply resumes if it outlives the interruption.
//! All cops that triggered a request are marked bad, once and forever, so a
//! pack never files twice. The exponential request thresholds against the
//! exponential band widths mean total vertical movement stays sublinear in
//! the tunnel height.
//!
//! Everything observable lives in a [`RequestLedger`]: per-level counts,
//! the monotone bad set, the active requests, displacement tallies, and the
//! count of system breaks, i.e. turns where some enlarged window
//! `[r_x + 0.5 k^i, r_x + 3.5 k^i]` held more than `t^(i+1) / 2` cops.
//! That bound is what the no-overlap guarantee rests on; if the opposition
//! is heavy enough to break it, the ledger says so and the robber keeps
//! running on a best-effort basis.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::audit::{AuditReport, EventKind};
use crate::board::{BoardKind, Coord};
use crate::engine::{GameState, MatchSpec, RobberController};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntervalConfig {
    /// Band ratio. The analysis wants this large (hundreds); small values
    /// still run but the thresholds lose their slack, so anything at or
    /// below 50 is flagged in the audit rather than rejected.
    pub k: i64,
    /// Vertical cells moved per served request turn (1 or 2; 2 is the
    /// default and stays within a speed-2 move alongside the +2 drift).
    pub v_step: i64,
}

impl IntervalConfig {
    pub fn full_scale() -> Self {
        IntervalConfig { k: 700, v_step: 2 }
    }

    pub fn desk() -> Self {
        IntervalConfig { k: 10, v_step: 2 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(Error::config(format!("band ratio k={} must be >= 2", self.k)));
        }
        if !(1..=2).contains(&self.v_step) {
            return Err(Error::config("vertical step must be 1 or 2"));
        }
        Ok(())
    }

    /// Levels available on a tunnel of height `n`: the largest `m` with
    /// `k^m <= n / 2`.
    pub fn levels_for(&self, n: i64) -> usize {
        let mut m = 0usize;
        let mut pow = self.k as i128;
        while pow <= (n as i128) / 2 {
            m += 1;
            pow *= self.k as i128;
        }
        m
    }
}

fn pow_k(k: i64, i: usize) -> i128 {
    (k as i128).pow(i as u32)
}

/// Is a cop `dx` columns ahead inside the level-`i` watch band
/// `[0.9 k^i, 3.1 k^i]`? Integer arithmetic throughout (everything x10).
pub fn in_request_band(k: i64, i: usize, dx: i64) -> bool {
    let p = pow_k(k, i);
    let v = 10 * dx as i128;
    9 * p <= v && v <= 31 * p
}

fn in_enlarged_band(k: i64, i: usize, dx: i64) -> bool {
    let p = pow_k(k, i);
    let v = 10 * dx as i128;
    5 * p <= v && v <= 35 * p
}

/// Does `count` reach the request threshold `t^i / 2`, `t = sqrt(3/2)`?
/// Exact: `count >= t^i / 2  <=>  4 count^2 2^i >= 3^i`.
pub fn request_threshold(count: usize, i: usize) -> bool {
    let c = count as i128;
    4 * c * c * (1i128 << i) >= 3i128.pow(i as u32)
}

/// The system-break bar for level `i`: strictly more than `t^(i+1) / 2`
/// cops in the enlarged band.
fn break_threshold(count: usize, i: usize) -> bool {
    let c = count as i128;
    4 * c * c * (1i128 << (i + 1)) > 3i128.pow(i as u32 + 1)
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LevelStats {
    pub opened: u64,
    pub completed: u64,
    pub cancelled: u64,
    /// Triggers that fired while this level was already serving a request.
    /// The analysis says this cannot happen below the system-break bar.
    pub overlap_rejections: u64,
    pub marked_bad: u64,
    /// Completed requests that failed the progress bound (served strictly
    /// fewer than `3 span / 4 + 3 k^(i-1)` turns in their own direction).
    pub progress_shortfalls: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ActiveRequest {
    pub level: usize,
    /// +1 dodges up, -1 down.
    pub direction: i64,
    pub span: i64,
    pub remaining: i64,
    pub opened_at: u64,
    /// Turns the global move actually followed this request.
    pub served: i64,
    overlap_flagged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RequestLedger {
    pub k: i64,
    pub levels: usize,
    pub stats: Vec<LevelStats>,
    /// Cop indices ever marked bad. Grows monotonically.
    pub bad: BTreeSet<usize>,
    /// Requests currently being served, one slot per level.
    pub active: Vec<Option<ActiveRequest>>,
    pub system_breaks: u64,
    /// Net vertical displacement requested so far and the largest absolute
    /// value it ever reached.
    pub net_displacement: i64,
    pub max_abs_displacement: i64,
}

impl RequestLedger {
    fn new(k: i64, levels: usize) -> Self {
        RequestLedger {
            k,
            levels,
            stats: vec![LevelStats::default(); levels],
            bad: BTreeSet::new(),
            active: vec![None; levels],
            system_breaks: 0,
            net_displacement: 0,
            max_abs_displacement: 0,
        }
    }

    pub fn open_request_count(&self) -> usize {
        self.active.iter().flatten().count()
    }
}

/// The band/request/bad-cop machine, shared by the tunnel runner here and
/// the looping grid robber. Callers feed it cop positions already mapped to
/// run-relative coordinates: `forward` columns ahead along the run and
/// `lateral` offset across it.
pub(crate) struct RequestEngine {
    k: i64,
    v_step: i64,
    ledger: RequestLedger,
    /// Latches so a persisting break condition logs once, not every turn.
    breaking: Vec<bool>,
}

impl RequestEngine {
    pub(crate) fn new(cfg: &IntervalConfig, levels: usize) -> Self {
        RequestEngine {
            k: cfg.k,
            v_step: cfg.v_step,
            ledger: RequestLedger::new(cfg.k, levels),
            breaking: vec![false; levels],
        }
    }

    pub(crate) fn ledger(&self) -> &RequestLedger {
        &self.ledger
    }

    /// One robber turn. `rel` holds `(forward, lateral)` per cop, indexed by
    /// stable cop id; cops behind the run (forward < 0) are ignored by the
    /// bands on their own. Returns the lateral move to take this turn.
    pub(crate) fn step(
        &mut self,
        rel: &[(i64, i64)],
        time: u64,
        audit: &mut AuditReport,
    ) -> i64 {
        let levels = self.ledger.levels;
        // A cop counts for a band only if it could still intercept the
        // runner: closing speed is at least 1 column a turn and at most the
        // cop's own speed sideways, so anything with |lateral| > forward can
        // never meet the run line in time. This check ignores the robber's
        // own future dodges, which only ever widens the set.
        let reachable = |fwd: i64, lat: i64| lat.abs() <= fwd;

        for i in 1..=levels {
            let in_band: Vec<usize> = rel
                .iter()
                .enumerate()
                .filter(|(id, (fwd, lat))| {
                    in_request_band(self.k, i, *fwd)
                        && reachable(*fwd, *lat)
                        && !self.ledger.bad.contains(id)
                })
                .map(|(id, _)| id)
                .collect();
            if !in_band.is_empty() && request_threshold(in_band.len(), i) {
                for id in &in_band {
                    self.ledger.bad.insert(*id);
                }
                self.ledger.stats[i - 1].marked_bad += in_band.len() as u64;
                if let Some(req) = &mut self.ledger.active[i - 1] {
                    self.ledger.stats[i - 1].overlap_rejections += 1;
                    if !req.overlap_flagged {
                        req.overlap_flagged = true;
                        audit.record(
                            EventKind::OverlapViolation,
                            time,
                            format!(
                                "level {i} triggered again {} turns into its own request",
                                req.span - req.remaining
                            ),
                        );
                    }
                } else {
                    // Dodge away from the side where most of the bad cops
                    // sit right now (ties go up).
                    let beneath = rel
                        .iter()
                        .enumerate()
                        .filter(|(id, (_, lat))| self.ledger.bad.contains(id) && *lat < 0)
                        .count();
                    let above = rel
                        .iter()
                        .enumerate()
                        .filter(|(id, (_, lat))| self.ledger.bad.contains(id) && *lat > 0)
                        .count();
                    let direction = if beneath >= above { 1 } else { -1 };
                    let span = (31 * pow_k(self.k, i) / 10) as i64;
                    self.ledger.active[i - 1] = Some(ActiveRequest {
                        level: i,
                        direction,
                        span,
                        remaining: span,
                        opened_at: time,
                        served: 0,
                        overlap_flagged: false,
                    });
                    self.ledger.stats[i - 1].opened += 1;
                    audit.note(
                        time,
                        format!(
                            "level {i} request: {} cops in band, dodging {} for {span} turns",
                            in_band.len(),
                            if direction > 0 { "up" } else { "down" }
                        ),
                    );
                }
            }
        }

        for i in 1..=levels {
            let crowd = rel
                .iter()
                .filter(|(fwd, lat)| in_enlarged_band(self.k, i, *fwd) && reachable(*fwd, *lat))
                .count();
            if break_threshold(crowd, i) {
                if !self.breaking[i - 1] {
                    self.breaking[i - 1] = true;
                    self.ledger.system_breaks += 1;
                    audit.record(
                        EventKind::SystemBreak,
                        time,
                        format!(
                            "{crowd} cops in the enlarged level-{i} window; \
                             past the bound the request discipline relies on"
                        ),
                    );
                }
            } else {
                self.breaking[i - 1] = false;
            }
        }

        // Smallest active level wins the turn; every active clock ticks.
        let direction = self
            .ledger
            .active
            .iter()
            .flatten()
            .next()
            .map_or(0, |req| req.direction);
        let k = self.k;
        let v_step = self.v_step;
        for slot in self.ledger.active.iter_mut() {
            if let Some(req) = slot {
                if direction == req.direction {
                    req.served += 1;
                }
                req.remaining -= 1;
                if req.remaining == 0 {
                    let floor = 3 * req.span / 4 + 3 * pow_k(k, req.level - 1) as i64;
                    let stats = &mut self.ledger.stats[req.level - 1];
                    stats.completed += 1;
                    if req.served < floor {
                        stats.progress_shortfalls += 1;
                        audit.note(
                            time,
                            format!(
                                "level {} request closed with {}/{} turns served \
                                 (progress bound wanted {floor})",
                                req.level, req.served, req.span
                            ),
                        );
                    }
                    *slot = None;
                }
            }
        }

        direction * v_step
    }

    /// Fold the lateral motion that actually happened (post-clamp) into the
    /// displacement tallies.
    pub(crate) fn record_motion(&mut self, dy: i64) {
        self.ledger.net_displacement += dy;
        self.ledger.max_abs_displacement = self
            .ledger
            .max_abs_displacement
            .max(self.ledger.net_displacement.abs());
    }

    /// Drop all running requests (the grid robber does this when it turns a
    /// corner and the lateral axis changes meaning).
    pub(crate) fn cancel_all(&mut self, time: u64, audit: &mut AuditReport, reason: &str) {
        for slot in self.ledger.active.iter_mut() {
            if let Some(req) = slot.take() {
                self.ledger.stats[req.level - 1].cancelled += 1;
                audit.note(
                    time,
                    format!("level {} request cancelled: {reason}", req.level),
                );
            }
        }
    }
}

/// Tunnel runner: +2 every turn, vertical dodges on request.
pub struct IntervalRequester {
    cfg: IntervalConfig,
    engine: Option<RequestEngine>,
    audit: AuditReport,
    clamp_noted: bool,
}

impl IntervalRequester {
    pub fn new(cfg: IntervalConfig) -> Self {
        IntervalRequester {
            cfg,
            engine: None,
            audit: AuditReport::default(),
            clamp_noted: false,
        }
    }

    pub fn ledger(&self) -> Option<&RequestLedger> {
        self.engine.as_ref().map(|e| e.ledger())
    }

    pub fn ledger_json(&self) -> Result<String> {
        let ledger = self
            .ledger()
            .ok_or_else(|| Error::invalid("no match played yet"))?;
        serde_json::to_string_pretty(ledger).map_err(|e| Error::invalid(e.to_string()))
    }
}

impl RobberController for IntervalRequester {
    fn name(&self) -> &'static str {
        "interval_requester"
    }

    fn place(&mut self, spec: &MatchSpec, _cops: &[Coord]) -> Result<Coord> {
        self.cfg.validate()?;
        let n = match spec.board {
            BoardKind::Tunnel { n, d: 1 } => n,
            _ => {
                return Err(Error::Unsupported(
                    "the interval runner wants a 1-high tunnel (Z x [1,n])".into(),
                ))
            }
        };
        if spec.robber_speed < 2 {
            return Err(Error::config("the run drifts +2 a turn"));
        }
        let m = self.cfg.levels_for(n);
        if m == 0 {
            return Err(Error::config(format!(
                "tunnel height {n} gives no request levels for k={}; need n >= 2k",
                self.cfg.k
            )));
        }
        if self.cfg.k <= 50 {
            self.audit.note(
                0,
                format!(
                    "k={} is below the analysed regime (k > 50); thresholds \
                     have no slack at this scale",
                    self.cfg.k
                ),
            );
        }
        self.engine = Some(RequestEngine::new(&self.cfg, m));
        Ok(spec.board.center())
    }

    fn turn(&mut self, spec: &MatchSpec, state: &GameState) -> Result<Coord> {
        let engine = self.engine.as_mut().expect("placed");
        let r = &state.robber;
        let rel: Vec<(i64, i64)> = state
            .cops
            .iter()
            .map(|c| (c[0] - r[0], c[1] - r[1]))
            .collect();
        let dy = engine.step(&rel, state.time, &mut self.audit);
        let dest = coord![r[0] + 2, r[1] + dy];
        let clamped = spec.board.clamp(&dest);
        if clamped != dest && !self.clamp_noted {
            self.clamp_noted = true;
            self.audit.record(
                EventKind::ClampedMove,
                state.time,
                format!("dodge clamped onto the tunnel at {clamped}"),
            );
        }
        engine.record_motion(clamped[1] - r[1]);
        Ok(clamped)
    }

    fn audit(&self) -> AuditReport {
        self.audit.clone()
    }
}

use crate::coord;
