//! Match traces: one JSON object per line.
//!
//! A trace is `spec` line, then one `state` line per half-turn (starting
//! with the placement state), then an `outcome` line. [`TraceWriter`] plugs
//! into the engine as an observer; [`validate_trace`] replays a trace and
//! checks move legality, coverage bookkeeping, and that the recorded outcome
//! is the one the rules actually produce.

use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::engine::{
    adjudicate, coincident, cop_move_violation, robber_move_violation, GameState, GameVariant,
    Half, MatchObserver, MatchSpec, Outcome, Phase, WinReason,
};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TraceRecord {
    Spec {
        #[serde(flatten)]
        spec: MatchSpec,
    },
    State {
        #[serde(flatten)]
        state: GameState,
    },
    Outcome {
        #[serde(flatten)]
        outcome: Outcome,
    },
}

/// Observer that streams records to a writer as JSONL. IO errors are held
/// until [`TraceWriter::finish`] since observer callbacks cannot fail.
pub struct TraceWriter<W: Write> {
    w: W,
    err: Option<io::Error>,
}

impl<W: Write> TraceWriter<W> {
    pub fn new(w: W) -> Self {
        TraceWriter { w, err: None }
    }

    fn emit(&mut self, record: &TraceRecord) {
        if self.err.is_some() {
            return;
        }
        let res = serde_json::to_string(record)
            .map_err(io::Error::other)
            .and_then(|line| writeln!(self.w, "{line}"));
        if let Err(e) = res {
            self.err = Some(e);
        }
    }

    /// Flush and surface any IO error hit along the way.
    pub fn finish(mut self) -> Result<W> {
        if let Some(e) = self.err {
            return Err(e.into());
        }
        self.w.flush()?;
        Ok(self.w)
    }
}

impl<W: Write> MatchObserver for TraceWriter<W> {
    fn on_spec(&mut self, spec: &MatchSpec) {
        self.emit(&TraceRecord::Spec { spec: spec.clone() });
    }
    fn on_state(&mut self, state: &GameState) {
        self.emit(&TraceRecord::State {
            state: state.clone(),
        });
    }
    fn on_outcome(&mut self, outcome: &Outcome) {
        self.emit(&TraceRecord::Outcome { outcome: *outcome });
    }
}

#[derive(Clone, Debug, Default)]
pub struct TraceReport {
    pub states: usize,
    pub issues: Vec<String>,
}

impl TraceReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Check a trace against the rules. Collects every issue found rather than
/// stopping at the first; malformed framing (bad JSON, missing spec) is a
/// hard error instead.
pub fn validate_trace<R: BufRead>(reader: R) -> Result<TraceReport> {
    let mut records = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: TraceRecord = serde_json::from_str(&line)
            .map_err(|e| Error::invalid(format!("line {}: {e}", i + 1)))?;
        records.push(rec);
    }

    let mut it = records.into_iter();
    let spec = match it.next() {
        Some(TraceRecord::Spec { spec }) => spec,
        _ => return Err(Error::invalid("trace must start with a spec record")),
    };
    spec.validate()?;

    let mut states: Vec<GameState> = Vec::new();
    let mut outcome: Option<Outcome> = None;
    for rec in it {
        match rec {
            TraceRecord::Spec { .. } => {
                return Err(Error::invalid("trace contains a second spec record"))
            }
            TraceRecord::State { state } => {
                if outcome.is_some() {
                    return Err(Error::invalid("state record after the outcome"));
                }
                states.push(state);
            }
            TraceRecord::Outcome { outcome: o } => {
                if outcome.is_some() {
                    return Err(Error::invalid("trace contains a second outcome record"));
                }
                outcome = Some(o);
            }
        }
    }
    let outcome = outcome.ok_or_else(|| Error::invalid("trace has no outcome record"))?;

    let mut report = TraceReport {
        states: states.len(),
        ..TraceReport::default()
    };
    let mut issue = |msg: String| report.issues.push(msg);

    if states.is_empty() {
        // Legal only for a placement forfeit.
        if outcome.reason() != Some(WinReason::Forfeit) {
            issue("no states recorded but the outcome is not a placement forfeit".into());
        }
        return Ok(report);
    }

    // Placement state.
    let first = &states[0];
    if first.time != 0 || first.phase != Phase::CopsToMove {
        issue(format!(
            "placement state should be time 0, cops to move; got time {} {:?}",
            first.time, first.phase
        ));
    }
    if first.cops.len() != spec.cop_count {
        issue(format!(
            "trace has {} cops, spec says {}",
            first.cops.len(),
            spec.cop_count
        ));
    }
    for (i, c) in first.cops.iter().enumerate() {
        if !spec.board.contains(c) {
            issue(format!("cop {i} placed off board at {c}"));
        }
    }
    if !spec.board.contains(&first.robber) {
        issue(format!("robber placed off board at {}", first.robber));
    }

    // Half-turn transitions.
    for w in states.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        match a.phase {
            Phase::CopsToMove => {
                if b.phase != Phase::RobberToMove || b.time != a.time {
                    issue(format!(
                        "bad phase transition at time {}: cop move should keep time and flip phase",
                        a.time
                    ));
                }
                if b.robber != a.robber {
                    issue(format!("robber changed during a cop half-turn at time {}", a.time));
                }
                if let Some(v) = cop_move_violation(&spec, &a.cops, &b.cops) {
                    issue(format!("time {}: {v}", a.time));
                }
            }
            Phase::RobberToMove => {
                if b.phase != Phase::CopsToMove || b.time != a.time + 1 {
                    issue(format!(
                        "bad phase transition at time {}: robber move should advance time",
                        a.time
                    ));
                }
                if b.cops != a.cops {
                    issue(format!("cops changed during a robber half-turn at time {}", a.time));
                }
                if let Some(v) = robber_move_violation(&spec, &a.robber, &b.robber) {
                    issue(format!("time {}: {v}", a.time));
                }
            }
        }
    }

    // Bookkeeping fields.
    let mut max_x = states[0].robber[0];
    let mut ever = false;
    let mut broken = false;
    for (i, s) in states.iter().enumerate() {
        let cov = coincident(&s.cops, &s.robber);
        if s.covered_now != cov {
            issue(format!("state {i}: covered_now is {} but should be {cov}", s.covered_now));
        }
        ever |= cov;
        if s.ever_covered != ever {
            issue(format!("state {i}: ever_covered is {} but should be {ever}", s.ever_covered));
        }
        // The cop-turn break flag trips only on states produced by a cop
        // half-turn (phase already flipped to the robber) in covering games.
        if i > 0
            && s.phase == Phase::RobberToMove
            && matches!(spec.variant, GameVariant::Covering { .. })
            && !cov
        {
            broken = true;
        }
        if s.coverage_broken_at_cop_turn != broken {
            issue(format!(
                "state {i}: coverage_broken_at_cop_turn is {} but should be {broken}",
                s.coverage_broken_at_cop_turn
            ));
        }
        if matches!(spec.variant, GameVariant::Rugby { .. }) {
            max_x = max_x.max(s.robber[0]);
            if s.max_robber_x != Some(max_x) {
                issue(format!(
                    "state {i}: max_robber_x is {:?} but should be {max_x}",
                    s.max_robber_x
                ));
            }
        }
    }

    // Re-adjudicate: the first check that fires must match the recorded
    // outcome, and nothing may fire before the end of the trace.
    let mut derived: Option<Outcome> = None;
    'adj: for (i, s) in states.iter().enumerate() {
        let (half, round) = if i == 0 {
            (Half::Placement, 0)
        } else if s.phase == Phase::RobberToMove {
            (Half::CopMove, s.time + 1)
        } else {
            (Half::RobberMove, s.time)
        };
        if let Some(o) = adjudicate(&spec, s, half, round) {
            if i + 1 != states.len() {
                issue(format!(
                    "match should have ended at state {i} with {o:?}, but the trace continues"
                ));
            }
            derived = Some(o);
            break 'adj;
        }
    }
    match derived {
        Some(o) => {
            if o != outcome {
                issue(format!("recorded outcome {outcome:?} but rules give {o:?}"));
            }
        }
        None => {
            // Nothing fired: the trace must end in a forfeit or exhaustion.
            let last = states.last().unwrap();
            let ok = match outcome {
                Outcome::HorizonExhausted { .. } => {
                    last.time >= spec.variant.total_rounds() && last.phase == Phase::CopsToMove
                }
                Outcome::CopsWin { reason, .. } | Outcome::RobberWins { reason, .. } => {
                    reason == WinReason::Forfeit
                }
            };
            if !ok {
                issue(format!(
                    "recorded outcome {outcome:?} but no rule fired by the end of the trace"
                ));
            }
        }
    }

    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::board::BoardKind;
    use crate::coord;
    use crate::engine::{play, CopController, RobberController};
    use crate::error::Result as CResult;

    struct Camper;
    impl CopController for Camper {
        fn name(&self) -> &'static str {
            "camper"
        }
        fn place(&mut self, _spec: &MatchSpec) -> CResult<Vec<crate::board::Coord>> {
            Ok(vec![coord![2]])
        }
        fn turn(&mut self, _spec: &MatchSpec, state: &GameState) -> CResult<Vec<crate::board::Coord>> {
            let mut cops = state.cops.clone();
            if cops[0][0] < state.robber[0] {
                cops[0][0] += 1;
            }
            Ok(cops)
        }
    }

    struct Sitter;
    impl RobberController for Sitter {
        fn name(&self) -> &'static str {
            "sitter"
        }
        fn place(&mut self, _spec: &MatchSpec, _cops: &[crate::board::Coord]) -> CResult<crate::board::Coord> {
            Ok(coord![5])
        }
        fn turn(&mut self, _spec: &MatchSpec, state: &GameState) -> CResult<crate::board::Coord> {
            Ok(state.robber.clone())
        }
    }

    fn capture_spec() -> MatchSpec {
        MatchSpec {
            board: BoardKind::Grid { n: 5, d: 1 },
            variant: GameVariant::Capture { horizon: 10 },
            cop_count: 1,
            robber_speed: 1,
            seed: 0,
            cover_at_start: false,
            cover_after_robber: false,
        }
    }

    fn record_match() -> Vec<u8> {
        let spec = capture_spec();
        let mut tw = TraceWriter::new(Vec::new());
        play(&spec, &mut Camper, &mut Sitter, &mut tw).unwrap();
        tw.finish().unwrap()
    }

    #[test]
    fn recorded_trace_validates() {
        let buf = record_match();
        let report = validate_trace(buf.as_slice()).unwrap();
        assert!(report.is_valid(), "issues: {:?}", report.issues);
        assert!(report.states > 0);
    }

    #[test]
    fn tampered_trace_is_flagged() {
        let buf = record_match();
        let text = String::from_utf8(buf).unwrap();

        // Teleport a cop in some mid-trace state line.
        let tampered: String = text
            .lines()
            .map(|l| {
                if l.contains("\"kind\":\"state\"") && l.contains("\"time\":1") {
                    l.replace("[3]", "[1]")
                } else {
                    l.to_string()
                }
            })
            .collect::<Vec<_>>()
            .join("\n");
        assert_ne!(text, tampered, "tamper target not found");
        let report = validate_trace(tampered.as_bytes()).unwrap();
        assert!(!report.is_valid());

        // Flip the outcome.
        let flipped = text.replace("\"result\":\"cops_win\"", "\"result\":\"robber_wins\"");
        assert_ne!(text, flipped);
        let report = validate_trace(flipped.as_bytes()).unwrap();
        assert!(!report.is_valid());
    }

    #[test]
    fn trace_round_trips_through_serde() {
        let buf = record_match();
        let text = String::from_utf8(buf).unwrap();
        for line in text.lines() {
            let rec: TraceRecord = serde_json::from_str(line).unwrap();
            let again = serde_json::to_string(&rec).unwrap();
            let a: serde_json::Value = serde_json::from_str(line).unwrap();
            let b: serde_json::Value = serde_json::from_str(&again).unwrap();
            assert_eq!(a, b);
        }
    }
}
