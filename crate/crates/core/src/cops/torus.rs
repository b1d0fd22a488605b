//! Factor-4 transfers between Covering on the torus and on the grid.
//!
//! Both directions ride the same picture: reflecting a point of [n]^2 in
//! the two middle lines x = (n+1)/2 and y = (n+1)/2 yields four points,
//! one per quadrant, and the set of four is unchanged by a wrap of the
//! original across the seam. So four grid teams can each chase one
//! quadrant's reflection of a torus robber and one of them is always
//! chasing the robber himself; conversely a torus cop can be impersonated
//! on the grid by four cops holding its four reflections, and they move
//! legally (no jumps) even when the torus cop wraps.

use crate::audit::{AuditReport, EventKind};
use crate::board::{BoardKind, Coord};
use crate::coord;
use crate::engine::{CopController, GameState, MatchSpec};
use crate::error::{Error, Result};

/// The four reflections of `p` in the middle lines of [n]^2, in quadrant
/// order: low-low, high-low, low-high, high-high (x before y). Points on a
/// middle line repeat across the quadrants that share them.
pub fn quadrant_reflections(n: i64, p: &Coord) -> [Coord; 4] {
    let (x, y) = (p[0], p[1]);
    let (xa, xb) = (x.min(n + 1 - x), x.max(n + 1 - x));
    let (ya, yb) = (y.min(n + 1 - y), y.max(n + 1 - y));
    [
        coord![xa, ya],
        coord![xb, ya],
        coord![xa, yb],
        coord![xb, yb],
    ]
}

/// Plays Covering on Torus(n,2) with four copies of a controller that wins
/// Covering on Grid(n,2): team q chases the quadrant-q reflection of the
/// robber, and whichever reflection is the robber himself is covered by
/// its team.
pub struct TorusLifter {
    n: i64,
    per_team: usize,
    teams: Vec<Box<dyn CopController>>,
    team_cops: Vec<Vec<Coord>>,
    sub_spec: Option<MatchSpec>,
    audit: AuditReport,
}

impl TorusLifter {
    pub fn new<F>(n: i64, per_team: usize, mut make_grid_ctrl: F) -> Self
    where
        F: FnMut() -> Box<dyn CopController>,
    {
        TorusLifter {
            n,
            per_team,
            teams: (0..4).map(|_| make_grid_ctrl()).collect(),
            team_cops: vec![Vec::new(); 4],
            sub_spec: None,
            audit: AuditReport::default(),
        }
    }

    pub fn required_cops(&self) -> usize {
        4 * self.per_team
    }

    fn sub_state(&self, state: &GameState, q: usize, phantom: Coord) -> GameState {
        GameState {
            time: state.time,
            cops: self.team_cops[q].clone(),
            robber: phantom.clone(),
            phase: state.phase,
            covered_now: self.team_cops[q].contains(&phantom),
            ever_covered: state.ever_covered,
            coverage_broken_at_cop_turn: false,
            max_robber_x: state.max_robber_x,
        }
    }

    fn collect(&self, cop_count: usize) -> Vec<Coord> {
        let mut out: Vec<Coord> = self.team_cops.iter().flatten().cloned().collect();
        let center = coord![(self.n / 2) + 1, (self.n / 2) + 1];
        while out.len() < cop_count {
            out.push(center.clone());
        }
        out
    }
}

impl CopController for TorusLifter {
    fn name(&self) -> &'static str {
        "torus_lifter"
    }

    fn place(&mut self, spec: &MatchSpec) -> Result<Vec<Coord>> {
        if spec.board != (BoardKind::Torus { n: self.n, d: 2 }) {
            return Err(Error::config(format!(
                "torus lifter for n={} needs Torus(n,2), got {:?}",
                self.n, spec.board
            )));
        }
        if spec.cop_count < self.required_cops() {
            return Err(Error::config(format!(
                "torus lifter needs 4 teams of {} cops, got {}",
                self.per_team, spec.cop_count
            )));
        }
        let sub = MatchSpec {
            board: BoardKind::Grid { n: self.n, d: 2 },
            cop_count: self.per_team,
            ..spec.clone()
        };
        for (q, team) in self.teams.iter_mut().enumerate() {
            self.team_cops[q] = team.place(&sub)?;
        }
        self.sub_spec = Some(sub);
        Ok(self.collect(spec.cop_count))
    }

    fn turn(&mut self, spec: &MatchSpec, state: &GameState) -> Result<Vec<Coord>> {
        let sub = self.sub_spec.clone().expect("turn before place");
        let phantoms = quadrant_reflections(self.n, &state.robber);
        if !phantoms.contains(&state.robber) {
            self.audit.record(
                EventKind::InvariantBroken,
                state.time + 1,
                "no quadrant reflection equals the robber",
            );
        }
        for (q, phantom) in phantoms.iter().enumerate() {
            let sub_state = self.sub_state(state, q, phantom.clone());
            self.team_cops[q] = self.teams[q].turn(&sub, &sub_state)?;
        }
        Ok(self.collect(spec.cop_count))
    }

    fn audit(&self) -> AuditReport {
        let mut merged = self.audit.clone();
        for team in &self.teams {
            merged.events.extend(team.audit().events);
        }
        merged
    }
}

/// Plays Covering on Grid(n,2) with four cops per torus cop: a controller
/// that wins on Torus(n,2) runs unchanged (the grid robber is a legal if
/// handicapped torus robber), and each of its cops is materialized as the
/// four reflections of its position, so a torus coincidence is a grid
/// coincidence.
pub struct GridFromTorus {
    n: i64,
    per_torus: usize,
    inner: Box<dyn CopController>,
    inner_cops: Vec<Coord>,
    sub_spec: Option<MatchSpec>,
}

impl GridFromTorus {
    pub fn new(n: i64, per_torus: usize, torus_ctrl: Box<dyn CopController>) -> Self {
        GridFromTorus {
            n,
            per_torus,
            inner: torus_ctrl,
            inner_cops: Vec::new(),
            sub_spec: None,
        }
    }

    pub fn required_cops(&self) -> usize {
        4 * self.per_torus
    }

    fn materialize(&self, cop_count: usize) -> Vec<Coord> {
        let mut out = Vec::with_capacity(cop_count);
        for c in &self.inner_cops {
            out.extend(quadrant_reflections(self.n, c));
        }
        let center = coord![(self.n / 2) + 1, (self.n / 2) + 1];
        while out.len() < cop_count {
            out.push(center.clone());
        }
        out
    }
}

impl CopController for GridFromTorus {
    fn name(&self) -> &'static str {
        "grid_from_torus"
    }

    fn place(&mut self, spec: &MatchSpec) -> Result<Vec<Coord>> {
        if spec.board != (BoardKind::Grid { n: self.n, d: 2 }) {
            return Err(Error::config(format!(
                "grid-from-torus for n={} needs Grid(n,2), got {:?}",
                self.n, spec.board
            )));
        }
        if spec.cop_count < self.required_cops() {
            return Err(Error::config(format!(
                "grid-from-torus needs 4x{} cops, got {}",
                self.per_torus, spec.cop_count
            )));
        }
        let sub = MatchSpec {
            board: BoardKind::Torus { n: self.n, d: 2 },
            cop_count: self.per_torus,
            ..spec.clone()
        };
        self.inner_cops = self.inner.place(&sub)?;
        self.sub_spec = Some(sub);
        Ok(self.materialize(spec.cop_count))
    }

    fn turn(&mut self, spec: &MatchSpec, state: &GameState) -> Result<Vec<Coord>> {
        let sub = self.sub_spec.clone().expect("turn before place");
        let sub_state = GameState {
            time: state.time,
            cops: self.inner_cops.clone(),
            robber: state.robber.clone(),
            phase: state.phase,
            covered_now: self.inner_cops.contains(&state.robber),
            ever_covered: state.ever_covered,
            coverage_broken_at_cop_turn: false,
            max_robber_x: state.max_robber_x,
        };
        let moved = self.inner.turn(&sub, &sub_state)?;
        self.inner_cops = moved.iter().map(|c| sub.board.clamp(c)).collect();
        Ok(self.materialize(spec.cop_count))
    }

    fn audit(&self) -> AuditReport {
        self.inner.audit()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cops::basic::GreedyChaser;
    use crate::cops::guards::BlockGuard;
    use crate::engine::{play, Agent, GameVariant, MatchObserver, Phase};
    use crate::robbers::basic::FuzzRobber;

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
    fn reflections_land_one_per_quadrant() {
        let [r11, r12, r21, r22] = quadrant_reflections(4, &coord![1, 2]);
        assert_eq!(r11, coord![1, 2]);
        assert_eq!(r12, coord![4, 2]);
        assert_eq!(r21, coord![1, 3]);
        assert_eq!(r22, coord![4, 3]);
    }

    #[test]
    fn robber_on_the_middle_lines_coincides_with_every_phantom() {
        // n odd: the reflection lines pass through cells, and a robber on
        // both of them is his own four reflections.
        let phantoms = quadrant_reflections(5, &coord![3, 3]);
        assert!(phantoms.iter().all(|p| *p == coord![3, 3]));
    }

    #[test]
    fn reflection_set_is_stable_across_the_seam() {
        // A torus wrap x: n -> 1 is a speed-1 move; no phantom jumps.
        let before = quadrant_reflections(4, &coord![4, 2]);
        let after = quadrant_reflections(4, &coord![1, 2]);
        for (b, a) in before.iter().zip(after.iter()) {
            let d = (0..2).map(|ax| (b[ax] - a[ax]).abs()).max().unwrap();
            assert!(d <= 1, "{b} jumped to {a}");
        }
    }

    #[test]
    fn lifted_block_guard_covers_the_torus() {
        let mut cops = TorusLifter::new(4, 4, || Box::new(BlockGuard::new(4, 2)));
        let spec = MatchSpec {
            board: BoardKind::Torus { n: 4, d: 2 },
            variant: GameVariant::Covering { horizon: 200 },
            cop_count: 16,
            robber_speed: 2,
            seed: 5,
            cover_at_start: false,
            cover_after_robber: false,
        };
        let mut robber = FuzzRobber::new(5, None);
        let mut obs = CopTurnCoverage { checked: 0 };
        let res = play(&spec, &mut cops, &mut robber, &mut obs).unwrap();
        assert_eq!(res.outcome.winner(), Agent::Cops);
        assert_eq!(obs.checked, 200);
        assert!(cops.audit().is_clean());
    }

    #[test]
    fn grid_from_torus_covers_with_a_torus_winner() {
        // On Torus(3,2) every cell is adjacent to every other, so a single
        // greedy chaser wins Covering there; its grid shadow uses 4 cops.
        let mut cops = GridFromTorus::new(3, 1, Box::new(GreedyChaser));
        let spec = MatchSpec {
            board: BoardKind::Grid { n: 3, d: 2 },
            variant: GameVariant::Covering { horizon: 200 },
            cop_count: 4,
            robber_speed: 2,
            seed: 8,
            cover_at_start: false,
            cover_after_robber: false,
        };
        let mut robber = FuzzRobber::new(8, None);
        let mut obs = CopTurnCoverage { checked: 0 };
        let res = play(&spec, &mut cops, &mut robber, &mut obs).unwrap();
        assert_eq!(res.outcome.winner(), Agent::Cops);
        assert_eq!(obs.checked, 200);
    }

    #[test]
    fn round_trip_multiplies_cops_by_sixteen() {
        let lifter = TorusLifter::new(3, 4, || {
            Box::new(GridFromTorus::new(3, 1, Box::new(GreedyChaser)))
        });
        assert_eq!(lifter.required_cops(), 16);
    }

    #[test]
    fn wrong_boards_are_refused() {
        let mut lifter = TorusLifter::new(4, 4, || Box::new(BlockGuard::new(4, 2)));
        let spec = MatchSpec {
            board: BoardKind::Grid { n: 4, d: 2 },
            variant: GameVariant::Covering { horizon: 10 },
            cop_count: 16,
            robber_speed: 2,
            seed: 0,
            cover_at_start: false,
            cover_after_robber: false,
        };
        assert!(lifter.place(&spec).unwrap_err().is_config());
    }
}
