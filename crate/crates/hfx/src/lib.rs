/*!
Multi-pattern regex matching over a hybrid DFA.

The compiler turns a set of byte-oriented regexes into one minimized,
unanchored DFA. A detector then looks for a "hyper region": a subgraph of
at most 63 states, anchored near the start state, that a scan is likely
to circulate in rather than leave. When such a region exists, its
transitions are laid out as 64-lane per-byte vectors so the scanner can
process input in batches of byte-shuffle applications, falling back to
the ordinary table walk everywhere else and handing off exactly at region
boundaries.

The pipeline is `compile_pattern_set` → `detect` → `assemble`, producing
a [`HybridDb`] that can be serialized, shared, and scanned:

```
use hfx::{compile_pattern_set, detect, assemble, CompileConfig,
          DetectorConfig, EngineParams, Engine, scan_stream, StreamState};

let dfa = compile_pattern_set(&["mode+l"], &CompileConfig::default()).unwrap();
let plan = detect(&dfa, &DetectorConfig::default());
let db = assemble(&dfa, plan.as_ref(), EngineParams::default()).unwrap();

let mut events = Vec::new();
let state = StreamState::start_of(&db);
scan_stream(&db, state, b"hmodel", Engine::Hybrid, &mut |ev| events.push(ev)).unwrap();
assert_eq!(events.len(), 1);
assert_eq!(events[0].offset, 6);
```
*/

mod byteset;
mod compile;
mod dfa;
pub mod dot;
mod engine;
mod error;
mod hybrid;
mod nfa;
pub mod region;
pub mod report;
pub mod rng;
mod syntax;
pub mod workload;

pub use byteset::ByteSet;
pub use compile::{compile_pattern_set, parse_rule_file, rule_line_numbers, CompileConfig};
pub use dfa::{determinize, minimize, Dfa, DEFAULT_MAX_DFA_STATES};
pub use engine::{
    batch_step, compose_chain, find_earliest_escape, find_earliest_escape_linear, hybrid_scan,
    permute64, permute64_portable, scalar_scan, scalar_step, scan_stream, BatchOutcome, Engine,
    MatchEvent, StreamState, Vector64,
};
pub use error::{
    BuildError, CompileError, ConfigError, DecodeError, ParseError, ParseErrorKind, PatternError,
    ScanError,
};
pub use hybrid::{
    assemble, build_outer_table, build_shuffle_tables, deserialize, renumber, serialize,
    EngineParams, GutterTable, HybridDb, OuterTable, RegionTables, ShuffleTable, StateRenumbering,
    FORMAT_VERSION, GUTTER_SINK,
};
pub use nfa::{build_nfa, Nfa, StateId, DEFAULT_MAX_NFA_STATES};
pub use region::{
    compute_sccs, detect, detect_with_report, edge_bundles, random_region, region_leakiness,
    scc_distance, state_stickiness, transit_probability, DetectorConfig, EdgeBundle, RegionMode,
    RegionPlan, SccInfo, REGION_CAPACITY,
};
pub use syntax::{parse_pattern, Ast};

/// Zero-based index of a pattern within a compiled set, stable across
/// compilations of the same input.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize,
)]
#[serde(transparent)]
pub struct PatternId(pub u32);

impl std::fmt::Display for PatternId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}
