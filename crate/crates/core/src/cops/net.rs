//! Translating walled rectangles ("nets") that stop a fast robber.
//!
//! A net is a one-cop-thick rectangle of cops sitting in a tunnel, right
//! edge on the column the robber must not pass. The robber moves two cells
//! a turn and the cops one, so the net cannot mirror him; instead its
//! vertical centre tracks half his offset from the tunnel's centre row.
//! Tracking at half speed is enough because the robber's offset from the
//! *net's* centre then never exceeds a quarter of the tunnel width, and the
//! walls extend a guard margin beyond that. Walls one cop thick hold
//! because a speed-2 robber cannot cross a wall line without first ending a
//! move on the wall or adjacent to it, and any cop that starts its turn
//! next to the robber simply steps onto him, which ends the game.
//!
//! At depth 2 the vertical walls are pierced by periodic gaps (the cops
//! saved this way are what makes the construction recurse), and each gap is
//! guarded behaviourally: when the robber comes near a gap's home cell, the
//! line of cops between the home and the far end of the wall advances one
//! cell in lockstep, teleporting the vacancy out of his reach; once he
//! leaves, the line steps back. A relocation moves wall cops vertically, so
//! it cannot share a turn with the net's own vertical tracking step; the
//! net pauses for that turn, and the validator demands extra wall rows to
//! absorb the lag those pauses can accumulate.
//!
//! The same rectangle, swept sideways one column a turn, pins a fast
//! robber on a bounded grid: he cannot circle the net vertically (that is
//! the margin invariant again), so the leading wall herds him into the
//! board edge. If he is ever strictly inside the hull, the walls stop
//! sweeping and shrink around him instead.

use crate::audit::{AuditReport, EventKind};
use crate::board::{BoardKind, Coord};
use crate::coord;
use crate::engine::{CopController, GameState, MatchSpec};
use crate::error::{Error, Result};

/// A gap in a wall starts sliding away when the robber's Chebyshev distance
/// to its home cell drops to this.
const HOLE_TRIGGER: i64 = 6;

/// A displaced gap returns home once the robber is this far from the home
/// cell. Strictly more than `HOLE_TRIGGER` so the gap cannot flap, and
/// small enough that the robber cannot reach the wall end where the gap is
/// parked before the return fires.
const HOLE_RELEASE: i64 = 12;

/// Wall dimensions for a net. `v_side` and `h_side` are the vertical and
/// horizontal extents; the vertical walls span `v_side / 2` rows above and
/// below the net's centre. `gap_period` is the vertical spacing of wall
/// gaps at depth 2 and `guard_margin` is how far the walls must reach
/// beyond the worst-case tracking offset.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct NetConfig {
    pub v_side: i64,
    pub h_side: i64,
    pub gap_period: i64,
    pub guard_margin: i64,
}

impl NetConfig {
    /// The full-scale constants: a 5050 by 30 net with gaps every 28 rows
    /// and a guard margin of 25, sized exactly for a width-10000 tunnel.
    pub fn full_scale() -> Self {
        NetConfig {
            v_side: 5050,
            h_side: 30,
            gap_period: 28,
            guard_margin: 25,
        }
    }

    /// Desk-scale preset used throughout the test runs.
    pub fn desk() -> Self {
        NetConfig {
            v_side: 50,
            h_side: 6,
            gap_period: 28,
            guard_margin: 5,
        }
    }

    /// The smallest depth-1 net that satisfies the margin invariant on a
    /// width-`n` tunnel, keeping the other desk-scale dimensions.
    pub fn fitted(n: i64) -> Self {
        let mut cfg = NetConfig::desk();
        cfg.v_side = 2 * (vertical_need(n) + cfg.guard_margin) + 1;
        cfg
    }

    /// Like `fitted`, but with the extra rows depth 2 needs to absorb
    /// tracking pauses during gap relocations.
    pub fn fitted_depth2(n: i64) -> Self {
        let mut cfg = NetConfig::fitted(n);
        while cfg.required_half_span(n, 2) > cfg.v_half() {
            cfg.v_side += 2;
        }
        cfg
    }

    pub fn v_half(&self) -> i64 {
        self.v_side / 2
    }

    /// Home row offsets of the wall gaps: every `gap_period` rows, keeping
    /// the top and bottom `guard_margin` rows of each wall solid.
    fn gap_homes(&self) -> Vec<i64> {
        let band = self.v_half() - self.guard_margin;
        let mut homes = Vec::new();
        let mut o = -band;
        while o <= band {
            homes.push(o);
            o += self.gap_period;
        }
        homes
    }

    /// How many rows above the centre the vertical walls must reach on a
    /// width-`n` tunnel. Depth 2 adds one pause row per possible gap
    /// relocation in a monotone robber run (a shift and a return per gap),
    /// plus one.
    pub fn required_half_span(&self, n: i64, depth: u32) -> i64 {
        let pause_slack = if depth >= 2 {
            2 * self.gap_homes().len() as i64 + 1
        } else {
            0
        };
        vertical_need(n) + self.guard_margin + pause_slack
    }

    fn validate(&self) -> Result<()> {
        if self.h_side < 2 || self.v_side < 2 {
            return Err(Error::config(format!(
                "net sides {}x{} leave no room for walls",
                self.v_side, self.h_side
            )));
        }
        if self.gap_period < 1 || self.guard_margin < 1 {
            return Err(Error::config(
                "gap_period and guard_margin must be at least 1",
            ));
        }
        if self.v_half() <= self.guard_margin {
            return Err(Error::config(format!(
                "vSide {} cannot hold a guard margin of {}",
                self.v_side, self.guard_margin
            )));
        }
        Ok(())
    }

    fn check_margin_feasible(&self, n: i64, depth: u32) -> Result<()> {
        let need = self.required_half_span(n, depth);
        if self.v_half() < need {
            return Err(Error::config(format!(
                "net parameters too small for the margin invariant: width-{n} tunnel \
                 needs a half span of {need} rows, vSide {} gives {}",
                self.v_side,
                self.v_half()
            )));
        }
        Ok(())
    }
}

/// Worst-case distance between the robber's row and the tracked centre,
/// over all rows of a width-`n` board whose centre tracking target is
/// `centre + floor(offset / 2)`.
fn vertical_need(n: i64) -> i64 {
    let center = n / 2 + 1;
    (1..=n)
        .map(|r| {
            let off = r - center;
            (off - off.div_euclid(2)).abs()
        })
        .max()
        .unwrap_or(0)
}

fn chebyshev(a: &Coord, b: &Coord) -> i64 {
    (0..a.dim()).map(|i| (a[i] - b[i]).abs()).max().unwrap_or(0)
}

#[derive(Clone, Debug)]
struct Gap {
    home: i64,
    /// Offset the gap is parked at while displaced, `None` when at home.
    parked: Option<i64>,
}

impl Gap {
    fn current(&self) -> i64 {
        self.parked.unwrap_or(self.home)
    }
}

/// Net that keeps a fast robber from ever crossing the column x = 0 of a
/// tunnel. Depth 1 has solid walls; depth 2 pierces the vertical walls
/// with guarded gaps.
pub struct RugbyNet {
    cfg: NetConfig,
    depth: u32,
    n: i64,
    center: i64,
    /// Current net centre row (bookkeeping value, may hang over the board
    /// edge; emission clamps).
    c: i64,
    /// Gaps per vertical wall; index 0 is the right wall at x = 0, index 1
    /// the left wall at x = -h_side.
    gaps: [Vec<Gap>; 2],
    extras: usize,
    last: Vec<Coord>,
    enclosed: bool,
    clamp_noted: bool,
    audit: AuditReport,
}

impl RugbyNet {
    pub fn new(cfg: NetConfig, depth: u32) -> Self {
        RugbyNet {
            cfg,
            depth,
            n: 0,
            center: 0,
            c: 0,
            gaps: [Vec::new(), Vec::new()],
            extras: 0,
            last: Vec::new(),
            enclosed: false,
            clamp_noted: false,
            audit: AuditReport::default(),
        }
    }

    /// Cops a net with this configuration needs.
    pub fn required_cops(cfg: &NetConfig, depth: u32) -> usize {
        let vertical = 2 * cfg.v_half() + 1;
        let gaps = if depth >= 2 {
            cfg.gap_homes().len() as i64
        } else {
            0
        };
        (2 * (vertical - gaps) + 2 * (cfg.h_side - 1)) as usize
    }

    /// The robber has been strictly inside the hull at some point.
    pub fn enclosed(&self) -> bool {
        self.enclosed
    }

    /// Current net centre row.
    pub fn center_row(&self) -> i64 {
        self.c
    }

    /// Gaps currently away from their home offsets.
    pub fn displaced_gaps(&self) -> usize {
        self.gaps
            .iter()
            .flatten()
            .filter(|g| g.parked.is_some())
            .count()
    }

    fn wall_x(&self, wall: usize) -> i64 {
        if wall == 0 {
            0
        } else {
            -self.cfg.h_side
        }
    }

    fn wall_has(&self, wall: usize, off: i64) -> bool {
        off.abs() <= self.cfg.v_half() && !self.gaps[wall].iter().any(|g| g.current() == off)
    }

    /// Virtual cop positions in a fixed slot order: right wall bottom to
    /// top, left wall, top cap, bottom cap, extras. Gap shifts and net
    /// translation each move every slot at most one cell, and never both in
    /// the same turn.
    fn wall_positions(&self) -> Vec<Coord> {
        let vh = self.cfg.v_half();
        let mut out = Vec::new();
        for wall in 0..2 {
            let x = self.wall_x(wall);
            for off in -vh..=vh {
                if self.wall_has(wall, off) {
                    out.push(coord![x, self.c + off]);
                }
            }
        }
        for &row in &[self.c + vh, self.c - vh] {
            for x in (-self.cfg.h_side + 1)..=-1 {
                out.push(coord![x, row]);
            }
        }
        for _ in 0..self.extras {
            out.push(coord![0, self.c]);
        }
        out
    }

    fn emit(&mut self, spec: &MatchSpec, now: u64) -> Vec<Coord> {
        let mut out = self.wall_positions();
        let mut clamped = false;
        for p in &mut out {
            let q = spec.board.clamp(p);
            if q != *p {
                clamped = true;
                *p = q;
            }
        }
        if clamped && !self.clamp_noted {
            self.clamp_noted = true;
            self.audit.record(
                EventKind::ClampedMove,
                now,
                "wall rows hanging over the tunnel edge are parked on it",
            );
        }
        out
    }

    /// Advance displaced/returning gaps. Returns true if any line of cops
    /// moved, which costs the net its tracking step this turn.
    fn update_gaps(&mut self, robber: &Coord, now: u64) -> bool {
        let mut moved = false;
        for wall in 0..2 {
            let x = self.wall_x(wall);
            let c = self.c;
            let vh = self.cfg.v_half();
            for gap in &mut self.gaps[wall] {
                let home_cell = coord![x, c + gap.home];
                let d = chebyshev(&home_cell, robber);
                match gap.parked {
                    None if d <= HOLE_TRIGGER => {
                        // Park at the end of the wall on the far side of
                        // the net's midline from the robber; ties go up.
                        gap.parked = Some(if robber[1] > c { -vh } else { vh });
                        moved = true;
                        self.audit.note(
                            now,
                            format!(
                                "gap at row {} slides to the {} end of wall x={x}",
                                c + gap.home,
                                if robber[1] > c { "bottom" } else { "top" }
                            ),
                        );
                    }
                    Some(_) if d > HOLE_RELEASE => {
                        gap.parked = None;
                        moved = true;
                        self.audit
                            .note(now, format!("gap returns home to row {}", c + gap.home));
                    }
                    _ => {}
                }
            }
            let parked = self.gaps[wall].iter().filter(|g| g.parked.is_some()).count();
            if parked > 1 {
                self.audit.record(
                    EventKind::InvariantBroken,
                    now,
                    format!("{parked} gaps of wall x={x} displaced at once"),
                );
            }
        }
        moved
    }

    fn check_margin(&mut self, robber: &Coord, now: u64) {
        if robber[0] >= -self.cfg.h_side {
            return;
        }
        for row in [
            robber[1] + self.cfg.guard_margin,
            robber[1] - self.cfg.guard_margin,
        ] {
            let off = row - self.c;
            if off.abs() > self.cfg.v_half() {
                self.audit.record(
                    EventKind::InvariantBroken,
                    now,
                    format!("guard row {row} beyond the walls (robber row {})", robber[1]),
                );
                continue;
            }
            if self.wall_has(0, off) || self.wall_has(1, off) {
                continue;
            }
            // The guard row crosses a gap that is at home in both walls. A
            // gap may only be open while the robber is beyond its trigger
            // range (approaching it parks it), so the escort protocol is
            // standing in for the stationary cop here; verify that.
            for wall in 0..2 {
                let cell = coord![self.wall_x(wall), row];
                if !self.wall_has(wall, off) && chebyshev(&cell, robber) <= HOLE_TRIGGER {
                    self.audit.record(
                        EventKind::InvariantBroken,
                        now,
                        format!("gap open within trigger range at guard row {row}"),
                    );
                }
            }
        }
    }

    fn note_enclosure(&mut self, robber: &Coord, now: u64) {
        if self.enclosed {
            return;
        }
        let inside_x = -self.cfg.h_side < robber[0] && robber[0] < 0;
        let inside_y = (robber[1] - self.c).abs() < self.cfg.v_half();
        if inside_x && inside_y {
            self.enclosed = true;
            self.audit
                .note(now, "robber is strictly inside the net's hull");
        }
    }
}

impl CopController for RugbyNet {
    fn name(&self) -> &'static str {
        "rugby_net"
    }

    fn place(&mut self, spec: &MatchSpec) -> Result<Vec<Coord>> {
        let n = match spec.board {
            BoardKind::Tunnel { n, d: 1 } => n,
            BoardKind::Tunnel { .. } => {
                return Err(Error::Unsupported(
                    "the net is a two-dimensional construction; use Tunnel(n, 1)".into(),
                ))
            }
            _ => {
                return Err(Error::Unsupported(
                    "rugby_net runs on tunnel boards".into(),
                ))
            }
        };
        match self.depth {
            0 => return Err(Error::config("a depth-0 net has no walls")),
            1 | 2 => {}
            d => {
                return Err(Error::Unsupported(format!(
                    "net depth {d} is not implemented; the walls recurse at most once"
                )))
            }
        }
        if spec.robber_speed > 2 {
            return Err(Error::Unsupported(
                "one-cop-thick walls only hold robbers of speed at most 2".into(),
            ));
        }
        self.cfg.validate()?;
        self.cfg.check_margin_feasible(n, self.depth)?;
        let needed = Self::required_cops(&self.cfg, self.depth);
        if spec.cop_count < needed {
            return Err(Error::config(format!(
                "copCount {} below the net population {needed}",
                spec.cop_count
            )));
        }
        self.n = n;
        self.center = n / 2 + 1;
        self.c = self.center;
        self.extras = spec.cop_count - needed;
        if self.depth >= 2 {
            let homes: Vec<Gap> = self
                .cfg
                .gap_homes()
                .into_iter()
                .map(|home| Gap { home, parked: None })
                .collect();
            self.gaps = [homes.clone(), homes];
        }
        let out = self.emit(spec, 0);
        self.last = out.clone();
        Ok(out)
    }

    fn turn(&mut self, spec: &MatchSpec, state: &GameState) -> Result<Vec<Coord>> {
        let r = state.robber.clone();
        let now = state.time;
        let target = self.center + (r[1] - self.center).div_euclid(2);
        let mut dc = (target - self.c).signum();

        if self.depth >= 2 && self.update_gaps(&r, now) && dc != 0 {
            dc = 0;
            self.audit
                .note(now, "gap relocation pauses the net's tracking for a turn");
        }
        self.c += dc;

        self.check_margin(&r, now);
        self.note_enclosure(&r, now);

        let mut out = self.emit(spec, now);
        for (i, prev) in self.last.iter().enumerate() {
            if chebyshev(prev, &r) <= 1 {
                // A cop already next to the robber steps onto him; the
                // coincidence ends the game, so abandoning his slot for
                // this one turn costs nothing.
                out[i] = r.clone();
                break;
            }
        }
        self.last = out.clone();
        Ok(out)
    }

    fn audit(&self) -> AuditReport {
        self.audit.clone()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum FastNetStage {
    Sweeping,
    Shrinking,
}

/// The net again, on a bounded grid: it sweeps sideways one column a turn
/// toward the robber until the leading wall herds him into the board edge,
/// where a wall cop steps onto him. A robber strictly inside the hull
/// (possible only by initial placement, since the walls cannot be crossed)
/// switches the net to shrinking: the wall farthest from him steps inward
/// each turn, corner cops doubling up, until the box closes.
pub struct FastRobberNet {
    cfg: NetConfig,
    n: i64,
    center: i64,
    c: i64,
    /// Right wall column during the sweep.
    x_r: i64,
    stage: FastNetStage,
    /// Hull bounds once shrinking: x left/right, y bottom/top.
    hull: (i64, i64, i64, i64),
    /// Explicit cop positions once shrinking.
    cops: Vec<Coord>,
    extras: usize,
    last: Vec<Coord>,
    clamp_noted: bool,
    /// The centre has reached its tracking target at least once. The
    /// robber places after the cops, anywhere on the grid, so the walls
    /// need a convergence run first; after it, the centre ends every cop
    /// turn exactly on target and the margin binds.
    margin_attained: bool,
    audit: AuditReport,
}

impl FastRobberNet {
    pub fn new(cfg: NetConfig) -> Self {
        FastRobberNet {
            cfg,
            n: 0,
            center: 0,
            c: 0,
            x_r: 0,
            stage: FastNetStage::Sweeping,
            hull: (0, 0, 0, 0),
            cops: Vec::new(),
            extras: 0,
            last: Vec::new(),
            clamp_noted: false,
            margin_attained: false,
            audit: AuditReport::default(),
        }
    }

    pub fn required_cops(cfg: &NetConfig) -> usize {
        RugbyNet::required_cops(cfg, 1)
    }

    pub fn shrinking(&self) -> bool {
        self.stage == FastNetStage::Shrinking
    }

    fn x_l(&self) -> i64 {
        self.x_r - self.cfg.h_side
    }

    /// Clamped vertical extent of the walls on the board.
    fn y_caps(&self) -> (i64, i64) {
        let vh = self.cfg.v_half();
        ((self.c - vh).max(1), (self.c + vh).min(self.n))
    }

    fn sweep_positions(&self) -> Vec<Coord> {
        let vh = self.cfg.v_half();
        let mut out = Vec::new();
        for x in [self.x_r, self.x_l()] {
            for off in -vh..=vh {
                out.push(coord![x, self.c + off]);
            }
        }
        for &row in &[self.c + vh, self.c - vh] {
            for x in (self.x_l() + 1)..self.x_r {
                out.push(coord![x, row]);
            }
        }
        for _ in 0..self.extras {
            out.push(coord![self.x_r, self.c]);
        }
        out
    }

    fn emit_sweep(&mut self, spec: &MatchSpec, now: u64) -> Vec<Coord> {
        let mut out = self.sweep_positions();
        let mut clamped = false;
        for p in &mut out {
            let q = spec.board.clamp(p);
            if q != *p {
                clamped = true;
                *p = q;
            }
        }
        if clamped && !self.clamp_noted {
            self.clamp_noted = true;
            self.audit.record(
                EventKind::ClampedMove,
                now,
                "wall rows hanging over the grid edge are parked on it",
            );
        }
        out
    }

    fn enter_shrinking(&mut self, now: u64) {
        let (y_b, y_t) = self.y_caps();
        self.hull = (self.x_l(), self.x_r, y_b, y_t);
        self.cops = self.last.clone();
        self.stage = FastNetStage::Shrinking;
        self.audit
            .note(now, "robber enclosed; the net stops sweeping and shrinks");
    }

    fn shrink_step(&mut self, robber: &Coord) {
        let (x_l, x_r, y_b, y_t) = self.hull;
        // Wall distances from the robber; move the farthest wall that is
        // not already about to step onto him, preferring left, right,
        // bottom, top on ties.
        let sides = [
            (robber[0] - x_l, 0usize),
            (x_r - robber[0], 1),
            (robber[1] - y_b, 2),
            (y_t - robber[1], 3),
        ];
        let pick = sides
            .iter()
            .filter(|(d, _)| *d >= 2)
            .max_by_key(|(d, side)| (*d, std::cmp::Reverse(*side)))
            .map(|(_, side)| *side);
        let Some(side) = pick else { return };
        for p in &mut self.cops {
            match side {
                0 if p[0] == x_l => p[0] += 1,
                1 if p[0] == x_r => p[0] -= 1,
                2 if p[1] == y_b => p[1] += 1,
                _ if side == 3 && p[1] == y_t => p[1] -= 1,
                _ => {}
            }
        }
        match side {
            0 => self.hull.0 += 1,
            1 => self.hull.1 -= 1,
            2 => self.hull.2 += 1,
            _ => self.hull.3 -= 1,
        }
    }

    fn check_margin(&mut self, robber: &Coord, now: u64) {
        if !self.margin_attained {
            return;
        }
        if self.x_l() <= robber[0] && robber[0] <= self.x_r {
            return;
        }
        let vh = self.cfg.v_half();
        for row in [
            robber[1] + self.cfg.guard_margin,
            robber[1] - self.cfg.guard_margin,
        ] {
            // Guard rows hanging off the board block no escape route.
            if row >= 1 && row <= self.n && (row - self.c).abs() > vh {
                self.audit.record(
                    EventKind::InvariantBroken,
                    now,
                    format!("lost guard row {row} (robber row {})", robber[1]),
                );
            }
        }
    }
}

impl CopController for FastRobberNet {
    fn name(&self) -> &'static str {
        "fast_robber_net"
    }

    fn place(&mut self, spec: &MatchSpec) -> Result<Vec<Coord>> {
        let n = match spec.board {
            BoardKind::Grid { n, d: 2 } => n,
            _ => {
                return Err(Error::Unsupported(
                    "fast_robber_net runs on two-dimensional grids".into(),
                ))
            }
        };
        if spec.robber_speed > 2 {
            return Err(Error::Unsupported(
                "one-cop-thick walls only hold robbers of speed at most 2".into(),
            ));
        }
        self.cfg.validate()?;
        self.cfg.check_margin_feasible(n, 1)?;
        let needed = Self::required_cops(&self.cfg);
        if spec.cop_count < needed {
            return Err(Error::config(format!(
                "copCount {} below the net population {needed}",
                spec.cop_count
            )));
        }
        self.n = n;
        self.center = n / 2 + 1;
        self.c = self.center;
        self.x_r = self.center + self.cfg.h_side / 2;
        if self.x_l() < 1 || self.x_r > n {
            return Err(Error::config(format!(
                "hSide {} net does not fit a width-{n} grid",
                self.cfg.h_side
            )));
        }
        self.extras = spec.cop_count - needed;
        let out = self.emit_sweep(spec, 0);
        self.last = out.clone();
        Ok(out)
    }

    fn turn(&mut self, spec: &MatchSpec, state: &GameState) -> Result<Vec<Coord>> {
        let r = state.robber.clone();
        let now = state.time;

        if self.stage == FastNetStage::Sweeping {
            let (y_b, y_t) = self.y_caps();
            if self.x_l() < r[0] && r[0] < self.x_r && y_b < r[1] && r[1] < y_t {
                self.enter_shrinking(now);
            }
        }

        let mut out = match self.stage {
            FastNetStage::Sweeping => {
                let mid = self.x_r - self.cfg.h_side / 2;
                let mut dx = (r[0] - mid).signum();
                if (dx < 0 && self.x_l() - 1 < 1) || (dx > 0 && self.x_r + 1 > self.n) {
                    dx = 0;
                }
                self.x_r += dx;
                let target = self.center + (r[1] - self.center).div_euclid(2);
                self.c += (target - self.c).signum();
                if self.c == target {
                    self.margin_attained = true;
                }
                self.check_margin(&r, now);
                self.emit_sweep(spec, now)
            }
            FastNetStage::Shrinking => {
                self.shrink_step(&r);
                self.cops.clone()
            }
        };

        for (i, prev) in self.last.iter().enumerate() {
            if chebyshev(prev, &r) <= 1 {
                out[i] = r.clone();
                if self.stage == FastNetStage::Shrinking {
                    self.cops[i] = r.clone();
                }
                break;
            }
        }
        self.last = out.clone();
        Ok(out)
    }

    fn audit(&self) -> AuditReport {
        self.audit.clone()
    }
}
