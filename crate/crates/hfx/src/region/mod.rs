//! Hyper-region detection: SCC selection, breadth-first expansion and
//! leakiness-based acceptance.

mod leak;
mod scc;

pub use leak::{edge_bundles, region_leakiness, transit_probability, EdgeBundle};
pub use scc::{
    all_stickiness, bfs_distances, compute_sccs, scc_distance, state_stickiness, SccInfo,
};

use crate::dfa::Dfa;
use crate::error::ConfigError;
use crate::nfa::StateId;
use crate::report::{CandidateOutcome, DetectionReport, SccSummary};
use crate::rng::Rng;

/// Largest admissible region: lane 63 of the 64-lane vectors is reserved
/// as the out-of-bounds sink.
pub const REGION_CAPACITY: usize = 63;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegionMode {
    /// Full detection: SCC selection, stickiness and leakiness tests.
    Hyper,
    /// Baseline that picks a start near the DFA entry at random and skips
    /// the quality tests.
    Random,
    /// Never build a region; scalar-only databases.
    None,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectorConfig {
    /// Stickiness-sum threshold an SCC must exceed (σ).
    pub sigma: u32,
    /// Leakiness acceptance threshold (λ); a region is accepted only if
    /// its score is strictly below this.
    pub lambda: f64,
    /// Leak evaluation depth d.
    pub depth: u32,
    /// Region size cap; at most [`REGION_CAPACITY`].
    pub cap: usize,
    pub mode: RegionMode,
    /// Seed for `RegionMode::Random`.
    pub seed: u64,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        DetectorConfig {
            sigma: 30,
            lambda: 0.05,
            depth: 9,
            cap: REGION_CAPACITY,
            mode: RegionMode::Hyper,
            seed: 0,
        }
    }
}

impl DetectorConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(1..=REGION_CAPACITY).contains(&self.cap) {
            return Err(ConfigError::new(format!(
                "region cap {} outside 1..={REGION_CAPACITY}",
                self.cap
            )));
        }
        if !(0.0..=1.0).contains(&self.lambda) {
            return Err(ConfigError::new(format!(
                "lambda {} outside [0, 1]",
                self.lambda
            )));
        }
        if self.depth < 1 {
            return Err(ConfigError::new("leak depth must be at least 1"));
        }
        Ok(())
    }
}

/// An accepted (or candidate) hyper region.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionPlan {
    /// Member states in order of addition; the start state is first.
    pub members: Vec<StateId>,
    pub start: StateId,
    /// Accept-excluded stickiness sum of the source SCC.
    pub stickiness_sum: u64,
    /// Leakiness score of the expanded region (0 when untested).
    pub leakiness: f64,
}

impl RegionPlan {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// First SCC, in ascending (distance, smallest member) order, whose
/// accept-excluded stickiness sum exceeds σ.
pub fn select_start_scc<'a>(
    dfa: &Dfa,
    sccs: &'a [SccInfo],
    cfg: &DetectorConfig,
) -> Option<&'a SccInfo> {
    ordered_candidates(dfa, sccs, cfg).into_iter().next()
}

/// All qualifying SCCs in selection order, since a rejected region means
/// detection moves on to the next candidate.
fn ordered_candidates<'a>(
    dfa: &Dfa,
    sccs: &'a [SccInfo],
    cfg: &DetectorConfig,
) -> Vec<&'a SccInfo> {
    let stickiness = all_stickiness(dfa);
    let mut order: Vec<&SccInfo> = sccs.iter().collect();
    order.sort_by_key(|scc| (scc.distance, scc.members[0]));
    order
        .into_iter()
        .filter(|scc| {
            let sum = accept_excluded_sum(dfa, scc, &stickiness);
            sum > u64::from(cfg.sigma)
        })
        .collect()
}

fn accept_excluded_sum(dfa: &Dfa, scc: &SccInfo, stickiness: &[u32]) -> u64 {
    scc.members
        .iter()
        .filter(|&&s| !dfa.is_accept(s))
        .map(|&s| u64::from(stickiness[s as usize]))
        .sum()
}

/// Expands a selected SCC into a region plan: breadth-first from the
/// member nearest the DFA start, preferring SCC members over outsiders at
/// equal depth (ties by smallest id), never adding accept states, and
/// stopping at the capacity cap.
pub fn expand_region(dfa: &Dfa, scc: &SccInfo, cfg: &DetectorConfig) -> RegionPlan {
    let distances = bfs_distances(dfa);
    let start = scc
        .members
        .iter()
        .copied()
        .filter(|&s| !dfa.is_accept(s))
        .min_by_key(|&s| (distances[s as usize], s))
        .expect("selected SCC has at least one non-accept member");

    let stickiness = all_stickiness(dfa);
    let members = bfs_expand(dfa, start, cfg.cap, Some(&scc.members));
    RegionPlan {
        members,
        start,
        stickiness_sum: accept_excluded_sum(dfa, scc, &stickiness),
        leakiness: 0.0,
    }
}

/// Level-order expansion from `start`. Accept states are never added (and
/// never expanded through). Within one level, preferred states come
/// first, then by ascending id.
fn bfs_expand(
    dfa: &Dfa,
    start: StateId,
    cap: usize,
    preferred: Option<&[StateId]>,
) -> Vec<StateId> {
    let n = dfa.state_count() as usize;
    let mut in_preferred = vec![false; n];
    if let Some(pref) = preferred {
        for &s in pref {
            in_preferred[s as usize] = true;
        }
    }
    let mut visited = vec![false; n];
    let mut members = Vec::new();
    let mut level = vec![start];
    visited[start as usize] = true;
    while !level.is_empty() && members.len() < cap {
        let mut next: Vec<StateId> = Vec::new();
        for &u in &level {
            members.push(u);
            if members.len() == cap {
                return members;
            }
        }
        for &u in &level {
            for t in dfa.successors(u) {
                if !visited[t as usize] && !dfa.is_accept(t) {
                    visited[t as usize] = true;
                    next.push(t);
                }
            }
        }
        next.sort_by_key(|&s| (!in_preferred[s as usize], s));
        level = next;
    }
    members
}

/// Runs detection in the configured mode. Hyper mode walks qualifying
/// SCCs in selection order and accepts the first expanded region whose
/// leakiness is strictly below λ and whose size is at least 2.
pub fn detect(dfa: &Dfa, cfg: &DetectorConfig) -> Option<RegionPlan> {
    detect_with_report(dfa, cfg).0
}

/// Like [`detect`], additionally returning the per-candidate outcomes for
/// reporting and inspection.
pub fn detect_with_report(
    dfa: &Dfa,
    cfg: &DetectorConfig,
) -> (Option<RegionPlan>, DetectionReport) {
    let sccs = compute_sccs(dfa);
    let stickiness = all_stickiness(dfa);
    let mut report = DetectionReport {
        state_count: dfa.state_count(),
        scc_count: sccs.len(),
        sccs: sccs
            .iter()
            .map(|scc| SccSummary {
                size: scc.members.len(),
                min_state: scc.members[0],
                distance: scc.distance,
                stickiness_sum: scc.stickiness_sum,
                stickiness_sum_non_accept: accept_excluded_sum(dfa, scc, &stickiness),
            })
            .collect(),
        candidates: Vec::new(),
        decision: String::new(),
    };

    match cfg.mode {
        RegionMode::None => {
            report.decision = "region detection disabled".to_string();
            (None, report)
        }
        RegionMode::Random => {
            let plan = random_region(dfa, cfg);
            report.decision = match &plan {
                Some(plan) => format!("random region of {} states accepted", plan.len()),
                None => "no eligible random start state".to_string(),
            };
            (plan, report)
        }
        RegionMode::Hyper => {
            for scc in ordered_candidates(dfa, &sccs, cfg) {
                let mut plan = expand_region(dfa, scc, cfg);
                plan.leakiness = region_leakiness(dfa, &plan.members, plan.start, cfg.depth);
                let (accepted, reason) = if plan.len() < 2 {
                    (false, format!("region size {} below minimum 2", plan.len()))
                } else if plan.leakiness < cfg.lambda {
                    (
                        true,
                        format!("leakiness {:.6} < lambda {}", plan.leakiness, cfg.lambda),
                    )
                } else {
                    (
                        false,
                        format!("leakiness {:.6} >= lambda {}", plan.leakiness, cfg.lambda),
                    )
                };
                report.candidates.push(CandidateOutcome {
                    scc_min_state: scc.members[0],
                    distance: scc.distance,
                    stickiness_sum: accept_excluded_sum(dfa, scc, &stickiness),
                    region_size: plan.len(),
                    start: plan.start,
                    leakiness: plan.leakiness,
                    accepted,
                    reason: reason.clone(),
                });
                if accepted {
                    report.decision = format!(
                        "region of {} states starting at state {} accepted ({reason})",
                        plan.len(),
                        plan.start
                    );
                    return (Some(plan), report);
                }
            }
            report.decision = if report.candidates.is_empty() {
                "no SCC exceeds the stickiness threshold".to_string()
            } else {
                "all candidate regions rejected".to_string()
            };
            (None, report)
        }
    }
}

/// Baseline region: a seeded uniform pick among non-accept states within
/// BFS distance 2 of the start state, expanded without stickiness or
/// leakiness tests.
pub fn random_region(dfa: &Dfa, cfg: &DetectorConfig) -> Option<RegionPlan> {
    let distances = bfs_distances(dfa);
    let eligible: Vec<StateId> = (0..dfa.state_count())
        .filter(|&s| distances[s as usize] <= 2 && !dfa.is_accept(s))
        .collect();
    if eligible.is_empty() {
        return None;
    }
    let mut rng = Rng::seeded(cfg.seed);
    let start = eligible[rng.below(eligible.len() as u64) as usize];
    let members = bfs_expand(dfa, start, cfg.cap, None);
    if members.len() < 2 {
        return None;
    }
    Some(RegionPlan {
        members,
        start,
        stickiness_sum: 0,
        leakiness: 0.0,
    })
}
