//! Perpetual coverage built from exact-time catches.
//!
//! Split the cops into period = n + k teams, where k is n/4 rounded up to
//! a power of four. Team i owes a coincidence with the robber at every cop
//! turn congruent to i modulo the period. Most teams start parked on a
//! station lattice spread around the board center and catch on schedule by
//! riding the midpoint chase for the last k turns before their time; the
//! rider's target is a phantom robber that is born at the center, closes
//! on the real robber at speed 2, and copies him exactly from first
//! contact, so landing on the phantom's final position is landing on the
//! robber. After a catch the team walks back to its stations (it is at
//! most k steps away) and repeats one period later.
//!
//! Teams 0..k-1 cannot fit a k-turn run before their first scheduled time,
//! so they bootstrap as spacing-2 blankets: the cop owning the robber's
//! block jumps onto him every turn. Team i leaves the blanket after its
//! catch at turn i; team 0 keeps its blanket up through turn period, which
//! is also the last turn not yet owned by a full cycle. Blanket homes sit
//! within one step of a station per axis, so the switch to the lattice
//! costs a team well under the n walking turns it has.

use std::collections::HashSet;

use crate::audit::{AuditReport, EventKind};
use crate::board::{BoardKind, Coord};
use crate::cops::fixed_time::{axis_team_size, midpoint_target};
use crate::engine::{CopController, GameState, MatchSpec};
use crate::error::{Error, Result};

struct TeamState {
    /// Turn of the team's most recent scheduled catch. Station teams start
    /// with the virtual value first_time - period, which lines their first
    /// catch up with the common cycle arithmetic.
    last_catch: i64,
    /// False while the team is still playing the bootstrap blanket.
    cycling: bool,
    phantom: Coord,
    contacted: bool,
}

pub struct CoveringScheduler {
    n: i64,
    d: usize,
    /// Catch window k = 4^m.
    m: u32,
    k: u64,
    period: u64,
    /// Blanket guards per team: one per spacing-2 block.
    side: usize,
    teams: Vec<TeamState>,
    /// Station lattice (spacing 2^{m-1} around the center, clipped to the
    /// stretch whose catch windows meet the board), sorted.
    stations: Vec<Coord>,
    stations_axis: Vec<i64>,
    /// Per-axis map from blanket home rank to its station value.
    home_station_axis: Vec<i64>,
    virtuals: Vec<Coord>,
    anchors: Vec<Option<Coord>>,
    audit: AuditReport,
    clamped_once: bool,
}

impl CoveringScheduler {
    pub fn new(n: i64, d: usize) -> Result<Self> {
        if !(4..=64).contains(&n) || d == 0 {
            // Above n = 64 the catch window would need spacing-4 stations,
            // whose riders no longer cover every cell between them.
            return Err(Error::config(
                "covering scheduler supports 4 <= n <= 64 and d >= 1",
            ));
        }
        let quarter = (n as u64).div_ceil(4);
        let mut m = 1u32;
        while 4u64.pow(m) < quarter {
            m += 1;
        }
        let k = 4u64.pow(m);
        Ok(CoveringScheduler {
            n,
            d,
            m,
            k,
            period: n as u64 + k,
            side: (n as usize).div_ceil(2),
            teams: Vec::new(),
            stations: Vec::new(),
            stations_axis: Vec::new(),
            home_station_axis: Vec::new(),
            virtuals: Vec::new(),
            anchors: Vec::new(),
            audit: AuditReport::default(),
            clamped_once: false,
        })
    }

    pub fn team_size(&self) -> usize {
        (axis_team_size(self.m) as usize).pow(self.d as u32)
    }

    pub fn team_count(&self) -> usize {
        self.period as usize
    }

    pub fn required_cops(&self) -> usize {
        self.team_count() * self.team_size()
    }

    fn check(&self, spec: &MatchSpec) -> Result<()> {
        let want = BoardKind::Grid {
            n: self.n,
            d: self.d,
        };
        if spec.board != want {
            return Err(Error::config(format!(
                "scheduler built for {want:?} cannot play on {:?}",
                spec.board
            )));
        }
        if spec.robber_speed > 2 {
            return Err(Error::config("scheduler is proven for robber speed <= 2"));
        }
        if spec.cop_count < self.required_cops() {
            return Err(Error::config(format!(
                "scheduler on n={} d={} needs {} cops ({} teams of {}), got {}",
                self.n,
                self.d,
                self.required_cops(),
                self.team_count(),
                self.team_size(),
                spec.cop_count
            )));
        }
        Ok(())
    }

    fn center_value(&self) -> i64 {
        self.n.div_euclid(2) + 1
    }

    fn center(&self) -> Coord {
        Coord::from(vec![self.center_value(); self.d])
    }

    fn product(values: &[i64], d: usize) -> Vec<Coord> {
        let mut rows: Vec<Vec<i64>> = vec![Vec::new()];
        for _ in 0..d {
            let mut next = Vec::new();
            for base in &rows {
                for &v in values {
                    let mut row = base.clone();
                    row.push(v);
                    next.push(row);
                }
            }
            rows = next;
        }
        rows.into_iter().map(Coord::from).collect()
    }

    fn build_geometry(&mut self) {
        let center = self.center_value();
        let spacing = 1i64 << (self.m - 1);
        let reach = 3 * self.k as i64;
        let mut axis = Vec::new();
        let mut off = -reach;
        while off <= reach {
            let v = center + off;
            // A station at v catches finals on {v, v+1}; drop stations
            // whose window misses the board so every walk fits in n turns.
            if v >= 0 && v <= self.n {
                axis.push(v);
            }
            off += spacing;
        }
        self.stations_axis = axis;

        self.home_station_axis = (0..self.side as i64)
            .map(|b| {
                let h = 2 * b + 1;
                *self
                    .stations_axis
                    .iter()
                    .min_by_key(|&&v| ((v - h).abs(), -v))
                    .expect("station lattice spans the board")
            })
            .collect();

        let mut stations = Self::product(&self.stations_axis, self.d);
        stations.sort();
        self.stations = stations;
    }

    fn slot(&self, team: usize, i: usize) -> usize {
        team * self.team_size() + i
    }

    fn home(&self, i: usize) -> Coord {
        let mut rest = i;
        let mut v = Vec::with_capacity(self.d);
        for _ in 0..self.d {
            v.push(2 * (rest % self.side) as i64 + 1);
            rest /= self.side;
        }
        Coord::from(v)
    }

    fn guard_anchor(&self, i: usize) -> Coord {
        let mut rest = i;
        let mut v = Vec::with_capacity(self.d);
        for _ in 0..self.d {
            v.push(self.home_station_axis[rest % self.side]);
            rest /= self.side;
        }
        Coord::from(v)
    }

    fn blanket_size(&self) -> usize {
        self.side.pow(self.d as u32)
    }

    /// Blanket prescription: the cop owning the robber's block jumps onto
    /// him, the other guards hold their homes, spares hold the center.
    fn guard_turn(&mut self, team: usize, robber: &Coord) {
        let mut owner = 0usize;
        for a in (0..self.d).rev() {
            owner = owner * self.side + ((robber[a] - 1).div_euclid(2)) as usize;
        }
        let center = self.center();
        let blanket = self.blanket_size();
        for i in 0..self.team_size() {
            let s = self.slot(team, i);
            self.virtuals[s] = if i == owner {
                robber.clone()
            } else if i < blanket {
                self.home(i)
            } else {
                center.clone()
            };
        }
    }

    /// Give every cop of the team its station: guards take the station
    /// matching their home (one step away per axis at most), spares fill
    /// the remaining stations, leftovers anchor on the center.
    fn assign_anchors(&mut self, team: usize) {
        let blanket = self.blanket_size();
        let mut taken = HashSet::new();
        for i in 0..blanket {
            let a = self.guard_anchor(i);
            taken.insert(a.clone());
            let s = self.slot(team, i);
            self.anchors[s] = Some(a);
        }
        let center = self.center();
        let mut free = self.stations.iter().filter(|st| !taken.contains(*st));
        for i in blanket..self.team_size() {
            let s = self.slot(team, i);
            self.anchors[s] = Some(free.next().cloned().unwrap_or_else(|| center.clone()));
        }
    }

    fn update_phantom(&mut self, team: usize, robber: &Coord) {
        let st = &mut self.teams[team];
        if st.contacted {
            st.phantom = robber.clone();
            return;
        }
        let within = (0..robber.dim()).all(|a| (st.phantom[a] - robber[a]).abs() <= 2);
        if within {
            st.phantom = robber.clone();
            st.contacted = true;
        } else {
            for a in 0..robber.dim() {
                let gap = robber[a] - st.phantom[a];
                st.phantom[a] += gap.clamp(-2, 2);
            }
        }
    }

    fn emit(&mut self, board: &BoardKind, cop_count: usize) -> Vec<Coord> {
        let mut out = Vec::with_capacity(cop_count);
        for v in self.virtuals.iter().take(cop_count) {
            let real = board.clamp(v);
            if real != *v && !self.clamped_once {
                self.clamped_once = true;
                self.audit.record(
                    EventKind::ClampedMove,
                    0,
                    "off-board prescriptions are clamped to the board (recurs)",
                );
            }
            out.push(real);
        }
        out
    }
}

impl CopController for CoveringScheduler {
    fn name(&self) -> &'static str {
        "covering_scheduler"
    }

    fn place(&mut self, spec: &MatchSpec) -> Result<Vec<Coord>> {
        self.check(spec)?;
        self.build_geometry();
        let center = self.center();
        self.virtuals = vec![center.clone(); spec.cop_count];
        self.anchors = vec![None; spec.cop_count];
        self.teams = (0..self.team_count())
            .map(|_| TeamState {
                last_catch: 0,
                cycling: false,
                phantom: center.clone(),
                contacted: false,
            })
            .collect();
        for team in 0..self.team_count() {
            if team < self.k as usize {
                // Bootstrap blanket; spares already sit on the center.
                for i in 0..self.blanket_size() {
                    let s = self.slot(team, i);
                    self.virtuals[s] = self.home(i);
                }
            } else {
                // Straight to the stations; the first catch at turn `team`
                // runs through the shared cycle arithmetic below.
                self.assign_anchors(team);
                let st = &mut self.teams[team];
                st.cycling = true;
                st.last_catch = team as i64 - self.period as i64;
                for i in 0..self.team_size() {
                    let s = self.slot(team, i);
                    self.virtuals[s] = self.anchors[s].clone().unwrap();
                }
            }
        }
        Ok(self.emit(&spec.board, spec.cop_count))
    }

    fn turn(&mut self, spec: &MatchSpec, state: &GameState) -> Result<Vec<Coord>> {
        let tau = state.time + 1;
        let robber = state.robber.clone();
        let walk_turns = self.n as u64;
        for team in 0..self.team_count() {
            if !self.teams[team].cycling {
                self.guard_turn(team, &robber);
                let first = if team == 0 { self.period } else { team as u64 };
                if tau == first {
                    self.assign_anchors(team);
                    let st = &mut self.teams[team];
                    st.cycling = true;
                    st.last_catch = tau as i64;
                    st.phantom = spec.board.center();
                    st.contacted = false;
                }
                continue;
            }

            self.update_phantom(team, &robber);
            let k_in = (tau as i64 - self.teams[team].last_catch) as u64;
            let ts = self.team_size();
            if k_in <= walk_turns {
                for i in 0..ts {
                    let s = self.slot(team, i);
                    let anchor = self.anchors[s].clone().expect("cycling team has anchors");
                    for a in 0..self.d {
                        let step = (anchor[a] - self.virtuals[s][a]).clamp(-1, 1);
                        self.virtuals[s][a] += step;
                    }
                }
                if k_in == walk_turns {
                    let arrived = (0..ts).all(|i| {
                        let s = self.slot(team, i);
                        self.anchors[s].as_ref() == Some(&self.virtuals[s])
                    });
                    if !arrived {
                        self.audit.record(
                            EventKind::InvariantBroken,
                            tau,
                            format!("team {team} failed to reach its stations in {walk_turns} turns"),
                        );
                    }
                    if self.teams[team].last_catch >= 0 && !self.teams[team].contacted {
                        self.audit.record(
                            EventKind::InvariantBroken,
                            tau,
                            format!("team {team} phantom never reached the robber during the walk"),
                        );
                    }
                }
            } else {
                let phantom = self.teams[team].phantom.clone();
                for i in 0..ts {
                    let s = self.slot(team, i);
                    let anchor = self.anchors[s].clone().expect("cycling team has anchors");
                    for a in 0..self.d {
                        let g = midpoint_target(anchor[a], phantom[a]);
                        let step = (g - self.virtuals[s][a]).clamp(-1, 1);
                        self.virtuals[s][a] += step;
                    }
                }
                if k_in == self.period {
                    let covered =
                        (0..ts).any(|i| spec.board.clamp(&self.virtuals[self.slot(team, i)]) == robber);
                    if !covered {
                        self.audit.record(
                            EventKind::InvariantBroken,
                            tau,
                            format!("team {team} missed its scheduled coincidence"),
                        );
                    }
                    let st = &mut self.teams[team];
                    st.last_catch = tau as i64;
                    st.phantom = spec.board.center();
                    st.contacted = false;
                }
            }
        }
        Ok(self.emit(&spec.board, spec.cop_count))
    }

    fn audit(&self) -> AuditReport {
        self.audit.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{play, Agent, GameVariant, MatchObserver, Outcome, Phase};
    use crate::robbers::basic::{FuzzRobber, GreedyEvader};

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

    fn covering_spec(n: i64, d: usize, cop_count: usize, horizon: u64, seed: u64) -> MatchSpec {
        MatchSpec {
            board: BoardKind::Grid { n, d },
            variant: GameVariant::Covering { horizon },
            cop_count,
            robber_speed: 2,
            seed,
            cover_at_start: false,
            cover_after_robber: false,
        }
    }

    #[test]
    fn the_sixteen_board_uses_twenty_teams_of_twentyfive() {
        let s = CoveringScheduler::new(16, 1).unwrap();
        assert_eq!(s.team_count(), 20);
        assert_eq!(s.team_size(), 25);
        assert_eq!(s.required_cops(), 500);
        let s2 = CoveringScheduler::new(16, 2).unwrap();
        assert_eq!(s2.required_cops(), 20 * 625);
    }

    #[test]
    fn awkward_sides_pad_the_catch_window() {
        // n=10: a quarter of the side rounds up to 4, so the cycle is 10+4.
        let s = CoveringScheduler::new(10, 1).unwrap();
        assert_eq!(s.team_count(), 14);
        assert_eq!(s.team_size(), 25);
        // n=17 tips the window to 16 and the team to 49.
        let s = CoveringScheduler::new(17, 1).unwrap();
        assert_eq!(s.team_count(), 33);
        assert_eq!(s.team_size(), 49);
    }

    #[test]
    fn out_of_range_boards_are_refused() {
        assert!(CoveringScheduler::new(3, 1).err().unwrap().is_config());
        assert!(CoveringScheduler::new(65, 1).err().unwrap().is_config());
        assert!(CoveringScheduler::new(16, 0).err().unwrap().is_config());
    }

    #[test]
    fn understaffed_scheduler_refuses() {
        let spec = covering_spec(16, 1, 499, 100, 0);
        let err = CoveringScheduler::new(16, 1).unwrap().place(&spec).unwrap_err();
        assert!(err.is_config());
        let torus = MatchSpec {
            board: BoardKind::Torus { n: 16, d: 1 },
            ..covering_spec(16, 1, 500, 100, 0)
        };
        let err = CoveringScheduler::new(16, 1).unwrap().place(&torus).unwrap_err();
        assert!(err.is_config());
    }

    #[test]
    fn covers_every_turn_against_fuzz() {
        // Three full cycles; coverage must hold from the very first turn.
        let spec = covering_spec(16, 1, 500, 65, 11);
        let mut cops = CoveringScheduler::new(16, 1).unwrap();
        let mut robber = FuzzRobber::new(11, None);
        let mut obs = CopTurnCoverage { checked: 0 };
        let res = play(&spec, &mut cops, &mut robber, &mut obs).unwrap();
        assert!(matches!(
            res.outcome,
            Outcome::HorizonExhausted {
                verdict: Agent::Cops
            }
        ));
        assert_eq!(obs.checked, 65);
        assert!(
            cops.audit().is_clean(),
            "{:?}",
            cops.audit().violations().collect::<Vec<_>>()
        );
    }

    #[test]
    fn covers_a_greedy_evader() {
        let spec = covering_spec(16, 1, 500, 45, 0);
        let mut cops = CoveringScheduler::new(16, 1).unwrap();
        let mut robber = GreedyEvader;
        let mut obs = CopTurnCoverage { checked: 0 };
        let res = play(&spec, &mut cops, &mut robber, &mut obs).unwrap();
        assert_eq!(res.outcome.winner(), Agent::Cops);
        assert!(cops.audit().is_clean());
    }

    #[test]
    fn wide_boards_use_the_spacing_two_lattice() {
        // n=62 puts the center on an even cell, so blanket homes sit one
        // step off the lattice; two full cycles must still stay clean.
        let s = CoveringScheduler::new(62, 1).unwrap();
        let spec = covering_spec(62, 1, s.required_cops(), 160, 7);
        let mut cops = CoveringScheduler::new(62, 1).unwrap();
        let mut robber = FuzzRobber::new(7, None);
        let mut obs = CopTurnCoverage { checked: 0 };
        let res = play(&spec, &mut cops, &mut robber, &mut obs).unwrap();
        assert_eq!(res.outcome.winner(), Agent::Cops);
        assert_eq!(obs.checked, 160);
        assert!(
            cops.audit().is_clean(),
            "{:?}",
            cops.audit().violations().collect::<Vec<_>>()
        );
    }

    #[test]
    fn two_dimensional_boards_cover_too() {
        let s = CoveringScheduler::new(16, 2).unwrap();
        let spec = covering_spec(16, 2, s.required_cops(), 45, 3);
        let mut cops = CoveringScheduler::new(16, 2).unwrap();
        let mut robber = FuzzRobber::new(3, None);
        let mut obs = CopTurnCoverage { checked: 0 };
        let res = play(&spec, &mut cops, &mut robber, &mut obs).unwrap();
        assert_eq!(res.outcome.winner(), Agent::Cops);
        assert_eq!(obs.checked, 45);
        assert!(
            cops.audit().is_clean(),
            "{:?}",
            cops.audit().violations().collect::<Vec<_>>()
        );
    }

    /// The chase fact the cycle leans on, settled adversarially: a rider
    /// parked on its station, chasing a speed-2 target that may start
    /// anywhere (the phantom mid-pursuit), stands on the target after the
    /// k-turn window whenever the target ends on {station, station+1}.
    /// Stations and targets are translated so the station is at 0; the
    /// midpoint rounds the same way under any integer shift.
    #[test]
    fn station_rider_lemma_holds_for_arbitrary_target_starts() {
        for (k, span) in [(4u32, 20i64), (16, 70)] {
            let mut layer: HashSet<(i64, i64)> = (-span..=span)
                .map(|u1| {
                    let g = midpoint_target(0, u1);
                    (g.clamp(-1, 1), u1)
                })
                .collect();
            for _ in 2..=k {
                let mut next = HashSet::new();
                for &(p, u) in &layer {
                    for delta in -2i64..=2 {
                        let u2 = (u + delta).clamp(-span, span);
                        let g = midpoint_target(0, u2);
                        let p2 = p + (g - p).clamp(-1, 1);
                        next.insert((p2, u2));
                    }
                }
                layer = next;
            }
            for &(p, u) in &layer {
                if u == 0 || u == 1 {
                    assert_eq!(p, u, "window {k}: target finishing on {u} escaped");
                }
            }
        }
    }
}
