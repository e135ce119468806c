//! Structured reports for region detection and the inspect command.

use serde::Serialize;

use crate::nfa::StateId;

#[derive(Debug, Clone, Serialize)]
pub struct SccSummary {
    pub size: usize,
    pub min_state: StateId,
    pub distance: u32,
    pub stickiness_sum: u64,
    /// Sum with accept states excluded; this is what the σ threshold is
    /// compared against.
    pub stickiness_sum_non_accept: u64,
}

/// Outcome of evaluating one candidate SCC during detection.
#[derive(Debug, Clone, Serialize)]
pub struct CandidateOutcome {
    pub scc_min_state: StateId,
    pub distance: u32,
    pub stickiness_sum: u64,
    pub region_size: usize,
    pub start: StateId,
    pub leakiness: f64,
    pub accepted: bool,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct DetectionReport {
    pub state_count: u32,
    pub scc_count: usize,
    pub sccs: Vec<SccSummary>,
    pub candidates: Vec<CandidateOutcome>,
    pub decision: String,
}
