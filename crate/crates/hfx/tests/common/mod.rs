//! Shared helpers for the integration and acceptance suites.

// Each test target compiles this module separately and none uses every
// helper.
#![allow(dead_code)]

use std::collections::BTreeSet;

use hfx::{
    assemble, build_nfa, compile_pattern_set, detect, hybrid_scan, scalar_scan, CompileConfig,
    DetectorConfig, Dfa, Engine, EngineParams, HybridDb, MatchEvent, PatternId, RegionPlan,
    StreamState, DEFAULT_MAX_NFA_STATES,
};

pub fn compile(patterns: &[&str]) -> Dfa {
    compile_pattern_set(patterns, &CompileConfig::default()).expect("patterns compile")
}

/// Compile + detect + assemble with explicit knobs.
pub fn build_db(patterns: &[&str], cfg: &DetectorConfig, params: EngineParams) -> HybridDb {
    let dfa = compile(patterns);
    let plan = detect(&dfa, cfg);
    assemble(&dfa, plan.as_ref(), params).expect("assemble")
}

/// A detector setup that accepts nearly any region, for tests that need
/// batching to actually engage.
pub fn permissive_detector() -> DetectorConfig {
    DetectorConfig {
        sigma: 0,
        lambda: 0.99,
        ..DetectorConfig::default()
    }
}

pub fn assemble_with_plan(dfa: &Dfa, plan: &RegionPlan, batch: u32) -> HybridDb {
    let params = EngineParams {
        batch,
        ..EngineParams::default()
    };
    assemble(dfa, Some(plan), params).expect("assemble")
}

/// Runs one engine over the whole input from the start state.
pub fn scan_events(db: &HybridDb, engine: Engine, input: &[u8]) -> (StreamState, Vec<MatchEvent>) {
    let mut events = Vec::new();
    let st = StreamState::start_of(db);
    let out = match engine {
        Engine::Scalar => scalar_scan(db, st, input, &mut |ev| events.push(ev)),
        Engine::Hybrid => hybrid_scan(db, st, input, &mut |ev| events.push(ev)),
        Engine::HybridNoGutter => {
            hfx::scan_stream(db, st, input, Engine::HybridNoGutter, &mut |ev| {
                events.push(ev)
            })
            .expect("valid start state")
        }
    };
    (out, events)
}

/// Ground truth for the whole pipeline: per pattern and per start
/// offset, simulate the Thompson NFA and record every end offset. The
/// empty match before any input (end offset 0) is not an event.
pub fn oracle_matches(patterns: &[&str], input: &[u8]) -> BTreeSet<(u32, u64)> {
    let mut out = BTreeSet::new();
    for (pid, pattern) in patterns.iter().enumerate() {
        let ast = hfx::parse_pattern(pattern).expect("pattern parses");
        let nfa = build_nfa(&ast, PatternId(pid as u32), DEFAULT_MAX_NFA_STATES).expect("nfa");
        for start in 0..=input.len() {
            for end in nfa.match_ends(&input[start..]) {
                let offset = (start + end) as u64;
                if offset > 0 {
                    out.insert((pid as u32, offset));
                }
            }
        }
    }
    out
}

pub fn event_set(events: &[MatchEvent]) -> BTreeSet<(u32, u64)> {
    events.iter().map(|e| (e.pattern.0, e.offset)).collect()
}

/// Odometer enumeration of every byte string over `alphabet` with length
/// up to `max_len`, in length-then-lexicographic order.
pub fn for_all_inputs(alphabet: &[u8], max_len: usize, mut f: impl FnMut(&[u8])) {
    let mut buf = Vec::with_capacity(max_len);
    f(&buf);
    let mut idx = vec![0usize; max_len];
    for len in 1..=max_len {
        idx[..len].fill(0);
        loop {
            buf.clear();
            buf.extend(idx[..len].iter().map(|&i| alphabet[i]));
            f(&buf);
            let mut pos = len;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < alphabet.len() {
                    break;
                }
                idx[pos] = 0;
            }
            if pos == 0 && idx[0] == 0 {
                break;
            }
        }
    }
}
