//! Structured progress events.
//!
//! Every descent run (merit minimization, residual minimization, certificate
//! fitting) reports exactly one event carrying its gradient-step count, and
//! the structural layers (two-phase split, tau search, index fixing) report
//! zero-step markers. Summing `steps` over a run's events therefore
//! reproduces the driver's total gradient-step count, which tests rely on.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TracePhase {
    /// Feasibility split: solving the slack-extended problem.
    TwoPhase,
    /// One tau probe inside the primal-dual search.
    Inner,
    /// One index-fixing round of the recursion.
    Outer,
    /// A restarted gradient descent run (carries its step count).
    Fgm,
    /// The dual-certificate fit (carries its step count).
    Cert,
    /// Driver-level control flow (imbalance-guess doubling).
    Driver,
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceEvent {
    pub phase: TracePhase,
    /// Human-readable note ("merit descent", "fixing 2 indices", ...).
    pub label: String,
    /// Gradient evaluations spent in this event (0 for structural markers).
    pub steps: usize,
    /// Objective / merit value reached, if meaningful.
    pub value: Option<f64>,
    /// Threshold guess in play, if any.
    pub tau: Option<f64>,
    /// Recursion depth of the surrounding solve (0 at the top level).
    pub depth: usize,
}

impl TraceEvent {
    pub fn marker(phase: TracePhase, label: impl Into<String>, depth: usize) -> Self {
        TraceEvent {
            phase,
            label: label.into(),
            steps: 0,
            value: None,
            tau: None,
            depth,
        }
    }

    pub fn descent(
        phase: TracePhase,
        label: impl Into<String>,
        steps: usize,
        value: f64,
        depth: usize,
    ) -> Self {
        TraceEvent {
            phase,
            label: label.into(),
            steps,
            value: Some(value),
            tau: None,
            depth,
        }
    }

    pub fn with_tau(mut self, tau: f64) -> Self {
        self.tau = Some(tau);
        self
    }
}

/// Receiver for progress events. Implementations must be cheap; the solver
/// calls them on the hot path.
pub trait TraceSink {
    fn record(&mut self, event: &TraceEvent);
}

/// Discards everything.
pub struct NullSink;

impl TraceSink for NullSink {
    fn record(&mut self, _event: &TraceEvent) {}
}

/// Collects events in memory (tests, CLI summaries).
#[derive(Default)]
pub struct VecSink {
    pub events: Vec<TraceEvent>,
}

impl TraceSink for VecSink {
    fn record(&mut self, event: &TraceEvent) {
        self.events.push(event.clone());
    }
}
