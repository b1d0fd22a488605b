//! Self-reported strategy diagnostics.
//!
//! Constructive strategies maintain internal invariants (ledgers, margins,
//! phase schedules). When one breaks at runtime we do not want a panic in
//! the middle of a long sweep; the controller records a [`StrategyEvent`]
//! and keeps playing as best it can. Tests and the trace validator read the
//! report afterwards and can fail on anything unexpected.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    /// An internal invariant failed (the strategy's own fault or a
    /// configuration outside its proven envelope).
    InvariantBroken,
    /// Two service requests overlapped where the design forbids it.
    OverlapViolation,
    /// A count or density exceeded the bound the strategy relies on.
    SystemBreak,
    /// A prescribed move had to be clamped onto the board.
    ClampedMove,
    /// Free-form diagnostic worth surfacing but not an error.
    Note,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyEvent {
    pub kind: EventKind,
    /// Game time (completed rounds) when the event fired.
    pub time: u64,
    pub detail: String,
}

/// Everything a controller chose to report about a finished match.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub events: Vec<StrategyEvent>,
}

impl AuditReport {
    pub fn record(&mut self, kind: EventKind, time: u64, detail: impl Into<String>) {
        self.events.push(StrategyEvent {
            kind,
            time,
            detail: detail.into(),
        });
    }

    pub fn note(&mut self, time: u64, detail: impl Into<String>) {
        self.record(EventKind::Note, time, detail);
    }

    /// Events that indicate an actual problem (everything except notes and
    /// benign clamps).
    pub fn violations(&self) -> impl Iterator<Item = &StrategyEvent> {
        self.events.iter().filter(|e| {
            matches!(
                e.kind,
                EventKind::InvariantBroken | EventKind::OverlapViolation | EventKind::SystemBreak
            )
        })
    }

    pub fn is_clean(&self) -> bool {
        self.violations().next().is_none()
    }
}
