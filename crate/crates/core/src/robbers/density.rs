//! Density-guided evasion on large grids.
//!
//! The robber treats the board as a square of side `2^e - offset` and walks
//! its main diagonal, pausing at a fixed ladder of stops. Each stop looks
//! into one or more sub-squares (again of side `2^e' - offset`) placed just
//! off the diagonal, and the robber drops into the first one whose cop
//! density is better than the square it is currently in. Density here is
//! `cops / side^f` for a tunable exponent `f`, so a sub-square a fraction of
//! the size only has to be mildly emptier in absolute terms to look
//! attractive. Summing `side^f` over all checked sub-squares beats the
//! parent's `side^f` exactly when the series
//!
//! ```text
//! S(f) = 4^-f * (3 + q / (1 - q)),   q = 2^(1-f)
//! ```
//!
//! exceeds 1, which happens iff `f < log2((1 + sqrt(17)) / 2)`, about
//! 1.35702. In that regime the walk cannot run out of stops: if every
//! candidate were at least as dense as its parent, the candidates (which are
//! pairwise disjoint) would jointly hold more cops than the parent does.
//! `exponent_feasible` evaluates the series test; the descender reports a
//! system break if the arithmetic contradiction ever materialises at run
//! time, which with honest inputs means the cop set moved underneath it.
//!
//! Recursion stops once a square is too small to host any stops. An empty
//! base square is a win: the robber parks in its middle and dodges locally.
//! A populated base square is the broken guarantee, reported loudly.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::audit::{AuditReport, EventKind};
use crate::board::{BoardKind, Coord, Rect};
use crate::coord;
use crate::engine::{GameState, MatchSpec, RobberController};
use crate::error::{Error, Result};

/// Cops inside `rect` divided by `side^exponent`, where side is the length
/// of the rect along axis 0 (the rects this crate cares about are squares).
pub fn density(rect: &Rect, cops: &[Coord], exponent: f64) -> f64 {
    let count = cops.iter().filter(|c| rect.contains(c)).count();
    count as f64 / (rect.side(0) as f64).powf(exponent)
}

/// Whether the descent's bookkeeping series `S(f)` exceeds 1, i.e. whether
/// the checked sub-squares jointly outweigh their parent and the walk is
/// guaranteed a strictly less dense square to drop into.
///
/// Only `1 < f < 2` is meaningful: at `f <= 1` the geometric part of the
/// series stops converging, and at `f >= 2` density degenerates into plain
/// area fraction.
pub fn exponent_feasible(exponent: f64) -> Result<bool> {
    if !(exponent > 1.0 && exponent < 2.0) {
        return Err(Error::config(format!(
            "density exponent {exponent} out of range; need 1 < f < 2"
        )));
    }
    let q = 2f64.powf(1.0 - exponent);
    let s = 4f64.powf(-exponent) * (3.0 + q / (1.0 - q));
    Ok(s > 1.0)
}

/// One sub-square a stop may drop into. Coordinates are frame-relative and
/// 1-based: `corner` is the cell the robber enters at, and the square spans
/// `side` cells in the direction of `signs` on each axis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub corner: Coord,
    pub signs: [i64; 2],
    pub side: i64,
    /// Enter only on strictly smaller density. The centre stop's squares
    /// use `false` (enter on less-or-equal), which is what makes a cop-free
    /// board descend at all: 0 <= 0 holds, 0 < 0 does not.
    pub strict: bool,
}

/// A pause on the diagonal walk: at frame position `(at, at)` the robber
/// inspects `candidates` in order and enters the first acceptable one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScaleStop {
    pub at: i64,
    pub candidates: Vec<Candidate>,
}

/// Tuning for [`DensityDescender`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DensityConfig {
    /// Density exponent `f`. Must satisfy `1 < f < 2`; the descent is only
    /// guaranteed below the feasibility threshold (see [`exponent_feasible`]).
    pub exponent: f64,
    /// Board sides are `2^e - offset`. The stock layout is built for 33.
    pub offset: i64,
    /// Advisory bar on the whole-board cop density. Exceeding it does not
    /// stop the robber, it just voids the guarantee; a note is recorded.
    pub threshold: f64,
    /// Replace the generated stop ladder with a custom one (applied to the
    /// top frame and to any sub-square whose side matches a generated
    /// exponent; squares with no layout are treated as base squares).
    pub layout: Option<Vec<ScaleStop>>,
}

impl DensityConfig {
    /// The regime the construction is stated for: a `2^n - 33` sided board
    /// with a vanishing cop density.
    pub fn full_scale() -> Self {
        DensityConfig {
            exponent: 1.2,
            offset: 33,
            threshold: (2f64).powi(-22),
            layout: None,
        }
    }

    /// Bench-sized: a 991-board (`2^10 - 33`) with a permissive density bar.
    /// 991 clips the two finest stop scales (their squares would have
    /// negative side), leaving stops at 123, 247, 379 and the centre 495.
    pub fn desk() -> Self {
        DensityConfig {
            exponent: 1.2,
            offset: 33,
            threshold: 0.01,
            layout: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.exponent > 1.0 && self.exponent < 2.0) {
            return Err(Error::config(format!(
                "density exponent {} out of range; need 1 < f < 2",
                self.exponent
            )));
        }
        if self.offset < 1 {
            return Err(Error::config("offset must be positive"));
        }
        if let Some(layout) = &self.layout {
            for stop in layout {
                if stop.at < 1 {
                    return Err(Error::config("stop position must be >= 1"));
                }
                for cand in &stop.candidates {
                    if cand.side < 1 {
                        return Err(Error::config("candidate side must be >= 1"));
                    }
                    if cand.signs.iter().any(|s| s.abs() != 1) {
                        return Err(Error::config("candidate signs must be +-1"));
                    }
                    if cand.corner.dim() != 2 {
                        return Err(Error::config("candidate corner must be 2-d"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Stop ladder for a square of side `2^exp - offset`.
///
/// Three scales of off-diagonal squares, finest first: scale `j` (0, 1, 2)
/// contributes stops at `(2i+1) * 2^(exp-4+j) - (2^(j+1) + 1)` for every odd
/// `2i+1 < 2^(3-j)`, each offering a square of side `2^(exp-5+j) - offset`
/// up-left and another down-right. The centre stop at `2^(exp-1) - 17` adds
/// three squares of side `2^(exp-2) - offset` (up-left, down-right and
/// up-right). Scales whose squares would have non-positive side are dropped,
/// which is what happens near the bottom of the recursion.
pub fn default_stops(exp: u32, offset: i64) -> Vec<ScaleStop> {
    let mut stops: Vec<ScaleStop> = Vec::new();
    let pow = |e: i64| -> i64 {
        if e < 0 {
            0
        } else {
            1i64 << e
        }
    };
    let e = exp as i64;
    let parent_side = pow(e) - offset;
    for j in 0..=2i64 {
        let side = pow(e - 5 + j) - offset;
        if side < 1 {
            continue;
        }
        let mut odd = 1;
        while odd < pow(3 - j) {
            let at = odd * pow(e - 4 + j) - (pow(j + 1) + 1);
            let cands = vec![
                Candidate {
                    corner: coord![at, at + 2],
                    signs: [-1, 1],
                    side,
                    strict: true,
                },
                Candidate {
                    corner: coord![at + 2, at],
                    signs: [1, -1],
                    side,
                    strict: true,
                },
            ];
            stops.push(ScaleStop {
                at,
                candidates: cands,
            });
            odd += 2;
        }
    }
    let centre_side = pow(e - 2) - offset;
    if centre_side >= 1 {
        let at = pow(e - 1) - 17;
        stops.push(ScaleStop {
            at,
            candidates: vec![
                Candidate {
                    corner: coord![at, at + 2],
                    signs: [-1, 1],
                    side: centre_side,
                    strict: false,
                },
                Candidate {
                    corner: coord![at + 2, at],
                    signs: [1, -1],
                    side: centre_side,
                    strict: false,
                },
                Candidate {
                    corner: coord![at + 2, at + 2],
                    signs: [1, 1],
                    side: centre_side,
                    strict: false,
                },
            ],
        });
    }
    stops.retain(|s| {
        s.candidates
            .iter()
            .all(|c| candidate_fits(s.at, c, parent_side))
    });
    stops.sort_by_key(|s| s.at);
    stops
}

fn candidate_fits(at: i64, cand: &Candidate, parent_side: i64) -> bool {
    if at + 2 + 2 > parent_side {
        return false;
    }
    for axis in 0..2 {
        let start = cand.corner[axis];
        let end = start + cand.signs[axis] * (cand.side - 1);
        let (lo, hi) = (start.min(end), start.max(end));
        if lo < 1 || hi > parent_side {
            return false;
        }
    }
    true
}

/// Orientation-carrying coordinate frame: frame cell `(1,1)` sits at
/// `origin` and frame axes run in the direction of `signs`.
#[derive(Clone, Debug)]
struct Frame {
    origin: Coord,
    signs: [i64; 2],
    side: i64,
    /// Density of this square measured at entry, kept for reporting.
    alpha_at_entry: f64,
    /// Board time at which the robber entered this square.
    entered_at: u64,
    /// Cop index sets seen in candidate rects at this frame's stops, for the
    /// disjointness audit.
    checked: Vec<BTreeSet<usize>>,
}

impl Frame {
    fn to_abs(&self, u: i64, v: i64) -> Coord {
        coord![
            self.origin[0] + self.signs[0] * (u - 1),
            self.origin[1] + self.signs[1] * (v - 1)
        ]
    }

    fn to_frame(&self, p: &Coord) -> (i64, i64) {
        (
            self.signs[0] * (p[0] - self.origin[0]) + 1,
            self.signs[1] * (p[1] - self.origin[1]) + 1,
        )
    }

    fn rect(&self) -> Rect {
        let a = self.to_abs(1, 1);
        let b = self.to_abs(self.side, self.side);
        let lo = coord![a[0].min(b[0]), a[1].min(b[1])];
        let hi = coord![a[0].max(b[0]), a[1].max(b[1])];
        Rect::new(lo, hi).expect("frame corners ordered")
    }

    fn candidate_rect(&self, at: i64, cand: &Candidate) -> Rect {
        let _ = at;
        let a = self.to_abs(cand.corner[0], cand.corner[1]);
        let b = self.to_abs(
            cand.corner[0] + cand.signs[0] * (cand.side - 1),
            cand.corner[1] + cand.signs[1] * (cand.side - 1),
        );
        let lo = coord![a[0].min(b[0]), a[1].min(b[1])];
        let hi = coord![a[0].max(b[0]), a[1].max(b[1])];
        Rect::new(lo, hi).expect("candidate corners ordered")
    }
}

enum Mode {
    /// Heading for `stops[next]` of the innermost frame (diagonal steps).
    Walking { next: usize },
    /// Inside a base square, heading for its middle.
    ToRest { target: i64 },
    /// Standing in (or near) the middle of a base square, dodging locally.
    Parked,
}

/// The walking robber. Covering game on `Grid(2^e - offset, 2)`.
pub struct DensityDescender {
    cfg: DensityConfig,
    frames: Vec<Frame>,
    mode: Mode,
    initial_cops: Vec<Coord>,
    audit: AuditReport,
    broke: bool,
}

impl DensityDescender {
    pub fn new(cfg: DensityConfig) -> Self {
        DensityDescender {
            cfg,
            frames: Vec::new(),
            mode: Mode::Walking { next: 0 },
            initial_cops: Vec::new(),
            audit: AuditReport::default(),
            broke: false,
        }
    }

    /// Stops for a square of the given side: the custom layout if one is
    /// configured (top frame only), else the generated ladder when the side
    /// is of the `2^e - offset` form, else nothing (a base square).
    fn stops_for(&self, side: i64, top: bool) -> Vec<ScaleStop> {
        if top {
            if let Some(layout) = &self.cfg.layout {
                return layout.clone();
            }
        }
        match side_exponent(side, self.cfg.offset) {
            Some(e) => default_stops(e, self.cfg.offset),
            None => Vec::new(),
        }
    }

    fn cur(&self) -> &Frame {
        self.frames.last().expect("placed")
    }

    /// Record per-frame candidate cop sets and flag any overlap. The descent
    /// arithmetic charges each cop to at most one checked square; a cop
    /// appearing in two of them means the cop set shifted under the walk.
    fn audit_disjoint(&mut self, time: u64, seen: BTreeSet<usize>, rect: &Rect) {
        let frame = self.frames.last_mut().expect("placed");
        for prior in &frame.checked {
            if !prior.is_disjoint(&seen) {
                self.audit.record(
                    EventKind::InvariantBroken,
                    time,
                    format!(
                        "cop counted in two checked squares (latest {:?}..{:?}); \
                         the cop set moved during the walk",
                        rect.lo(),
                        rect.hi()
                    ),
                );
                break;
            }
        }
        frame.checked.push(seen);
    }

    /// Cops that started outside the parent square cannot have reached the
    /// square being entered unless they out-ran the clock.
    fn audit_reachability(&mut self, time: u64, parent_rect: &Rect, child: &Rect) {
        for p in &self.initial_cops {
            if parent_rect.contains(p) {
                continue;
            }
            let dist = (0..2)
                .map(|a| {
                    let lo = child.lo()[a];
                    let hi = child.hi()[a];
                    (lo - p[a]).max(p[a] - hi).max(0)
                })
                .max()
                .unwrap_or(0);
            if (dist as u64) <= time {
                self.audit.record(
                    EventKind::InvariantBroken,
                    time,
                    format!(
                        "cop starting at {:?} outside the current square could have \
                         reached the entered square within {} turns",
                        p, time
                    ),
                );
                return;
            }
        }
    }

    fn system_break(&mut self, time: u64, detail: String) {
        if !self.broke {
            self.audit.record(EventKind::SystemBreak, time, detail);
            self.broke = true;
        }
    }

    fn enter(&mut self, state: &GameState, cand: &Candidate, child_rect: Rect, d_child: f64) {
        let parent = self.cur();
        let parent_rect = parent.rect();
        let origin = child_rect
            .project(&parent.to_abs(cand.corner[0], cand.corner[1]))
            .expect("corner in rect");
        let signs = [
            parent.signs[0] * cand.signs[0],
            parent.signs[1] * cand.signs[1],
        ];
        let side = cand.side;
        self.audit_reachability(state.time, &parent_rect, &child_rect);
        self.audit.note(
            state.time,
            format!(
                "entered a side-{} square at {:?} (density {:.6} vs parent {:.6})",
                side,
                origin,
                d_child,
                density(&parent_rect, &state.cops, self.cfg.exponent)
            ),
        );
        self.frames.push(Frame {
            origin,
            signs,
            side,
            alpha_at_entry: d_child,
            entered_at: state.time,
            checked: Vec::new(),
        });
        let stops = self.stops_for(side, false);
        if stops.is_empty() {
            let inside = state
                .cops
                .iter()
                .filter(|c| self.cur().rect().contains(c))
                .count();
            if inside > 0 {
                self.system_break(
                    state.time,
                    format!(
                        "base square of side {} holds {} cops; the density \
                         guarantee is broken",
                        side, inside
                    ),
                );
            }
            // Rest near the middle; diagonal steps of 2 from cell 1 visit
            // odd frame coordinates only.
            let mut target = side / 2;
            if target % 2 == 0 {
                target = (target - 1).max(1);
            }
            self.mode = Mode::ToRest { target };
        } else {
            self.mode = Mode::Walking { next: 0 };
        }
    }

    /// Sidestep away from the nearest cop, staying inside the current base
    /// square. Used once parked; keeps the robber honest about not being
    /// covered by a stray wanderer.
    fn dodge(&self, state: &GameState) -> Coord {
        let rect = self.cur().rect();
        let r = &state.robber;
        let nearest = state
            .cops
            .iter()
            .min_by_key(|c| (0..2).map(|a| (c[a] - r[a]).abs()).max().unwrap_or(0));
        if let Some(c) = nearest {
            let d = (0..2).map(|a| (c[a] - r[a]).abs()).max().unwrap_or(i64::MAX);
            if d <= 4 {
                let step = coord![
                    r[0] + 2 * (r[0] - c[0]).signum(),
                    r[1] + 2 * (r[1] - c[1]).signum()
                ];
                return rect.project(&step).expect("same dim");
            }
        }
        r.clone()
    }
}

fn side_exponent(side: i64, offset: i64) -> Option<u32> {
    let total = side + offset;
    if total > 0 && (total as u64).is_power_of_two() {
        Some(total.trailing_zeros())
    } else {
        None
    }
}

impl RobberController for DensityDescender {
    fn name(&self) -> &'static str {
        "density_descender"
    }

    fn place(&mut self, spec: &MatchSpec, cops: &[Coord]) -> Result<Coord> {
        self.cfg.validate()?;
        let n = match spec.board {
            BoardKind::Grid { n, d: 2 } => n,
            _ => {
                return Err(Error::Unsupported(
                    "density descent needs a 2-d grid".into(),
                ))
            }
        };
        if self.cfg.layout.is_none() && side_exponent(n, self.cfg.offset).is_none() {
            return Err(Error::config(format!(
                "board side {n} is not 2^e - {}; pass an explicit layout instead",
                self.cfg.offset
            )));
        }
        if spec.robber_speed < 2 {
            return Err(Error::config("the diagonal walk takes steps of length 2"));
        }
        match exponent_feasible(self.cfg.exponent) {
            Ok(true) => {}
            Ok(false) => self.audit.note(
                0,
                format!(
                    "exponent {} is beyond the feasibility threshold; the walk \
                     may run out of squares",
                    self.cfg.exponent
                ),
            ),
            Err(e) => return Err(e),
        }
        self.initial_cops = cops.to_vec();
        let top = Frame {
            origin: coord![1, 1],
            signs: [1, 1],
            side: n,
            alpha_at_entry: 0.0,
            entered_at: 0,
            checked: Vec::new(),
        };
        let alpha = density(&top.rect(), cops, self.cfg.exponent);
        self.frames = vec![Frame {
            alpha_at_entry: alpha,
            ..top
        }];
        if alpha > self.cfg.threshold {
            self.audit.note(
                0,
                format!(
                    "whole-board density {alpha:.8} exceeds the advisory bar {}; \
                     no evasion guarantee",
                    self.cfg.threshold
                ),
            );
        }
        let stops = self.stops_for(n, true);
        self.mode = if stops.is_empty() {
            Mode::ToRest {
                target: {
                    let mut t = n / 2;
                    if t % 2 == 0 {
                        t = (t - 1).max(1);
                    }
                    t
                },
            }
        } else {
            Mode::Walking { next: 0 }
        };
        Ok(coord![1, 1])
    }

    fn turn(&mut self, _spec: &MatchSpec, state: &GameState) -> Result<Coord> {
        let (u, v) = self.cur().to_frame(&state.robber);
        match self.mode {
            Mode::Parked => Ok(self.dodge(state)),
            Mode::ToRest { target } => {
                if u >= target {
                    self.mode = Mode::Parked;
                    self.audit
                        .note(state.time, "parked in the middle of a base square");
                    return Ok(self.dodge(state));
                }
                let step = (target - u).min(2);
                Ok(self.cur().to_abs(u + step, v + step))
            }
            Mode::Walking { next } => {
                let stops = self.stops_for(self.cur().side, self.frames.len() == 1);
                debug_assert!(u == v, "the walk stays on the frame diagonal");
                if next >= stops.len() {
                    // Exhausted without entering anywhere: the contradiction.
                    self.system_break(
                        state.time,
                        "no candidate square was less dense than its parent; \
                         density contradiction"
                            .into(),
                    );
                    self.mode = Mode::Parked;
                    return Ok(self.dodge(state));
                }
                let stop = stops[next].clone();
                if u < stop.at {
                    let step = (stop.at - u).min(2);
                    return Ok(self.cur().to_abs(u + step, v + step));
                }
                // At the stop: inspect candidates in listed order.
                let frame_rect = self.cur().rect();
                let alpha_live = density(&frame_rect, &state.cops, self.cfg.exponent);
                for cand in &stop.candidates {
                    let rect = self.cur().candidate_rect(stop.at, cand);
                    let seen: BTreeSet<usize> = state
                        .cops
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| rect.contains(c))
                        .map(|(i, _)| i)
                        .collect();
                    let d_child = density(&rect, &state.cops, self.cfg.exponent);
                    self.audit_disjoint(state.time, seen, &rect);
                    let enters = if cand.strict {
                        d_child < alpha_live
                    } else {
                        d_child <= alpha_live
                    };
                    if enters {
                        let mv = self.cur().to_abs(cand.corner[0], cand.corner[1]);
                        self.enter(state, cand, rect, d_child);
                        return Ok(mv);
                    }
                }
                self.mode = Mode::Walking { next: next + 1 };
                if next + 1 < stops.len() {
                    let step = (stops[next + 1].at - u).min(2);
                    Ok(self.cur().to_abs(u + step, v + step))
                } else {
                    self.turn(_spec, state)
                }
            }
        }
    }

    fn audit(&self) -> AuditReport {
        self.audit.clone()
    }
}

/// Depth of the square the robber currently occupies (0 = whole board) plus
/// the entry densities down the chain. Exposed for tests and reporting.
impl DensityDescender {
    pub fn descent_depth(&self) -> usize {
        self.frames.len().saturating_sub(1)
    }

    pub fn entry_densities(&self) -> Vec<f64> {
        self.frames.iter().map(|f| f.alpha_at_entry).collect()
    }

    pub fn entered_at(&self) -> Vec<u64> {
        self.frames.iter().map(|f| f.entered_at).collect()
    }
}
