//! Scan execution: the scalar table walk, the batched hybrid walk with
//! gutter-based escape handling, and chunked streaming on top of either.

mod batch;
mod vector;

pub use batch::{batch_step, find_earliest_escape, find_earliest_escape_linear, BatchOutcome};
pub use vector::{compose_chain, permute64, permute64_portable, Vector64};

pub(crate) use batch::{batch_step_tables, TableChoice};

use crate::error::ScanError;
use crate::hybrid::HybridDb;
use crate::PatternId;

/// Per-stream scanning cursor. The state id is always a live runtime id
/// of the owning database; offsets are absolute across chunks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamState {
    pub state: u32,
    pub consumed: u64,
}

impl StreamState {
    pub fn start_of(db: &HybridDb) -> StreamState {
        StreamState {
            state: db.start,
            consumed: 0,
        }
    }
}

/// A reported match: which pattern ended, and after how many input
/// bytes. Matches ending at the same offset arrive in ascending pattern
/// id; each (pattern, offset) pair is reported once.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct MatchEvent {
    pub pattern: PatternId,
    pub offset: u64,
}

/// Engine selection. `HybridNoGutter` batches through the raw shuffle
/// vectors instead of the gutter vectors; it reproduces the out-region
/// error and exists only for ablation testing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Hybrid,
    Scalar,
    HybridNoGutter,
}

/// One transition through the full runtime table.
#[inline]
pub fn scalar_step(db: &HybridDb, state: u32, byte: u8) -> u32 {
    db.outer.next(state, byte)
}

#[inline]
fn emit_accepts(db: &HybridDb, state: u32, offset: u64, sink: &mut impl FnMut(MatchEvent)) {
    for &pattern in db.accepts_of(state) {
        sink(MatchEvent { pattern, offset });
    }
}

/// Scans `input` with the traditional per-byte table walk, emitting
/// accept events after every consumed byte.
pub fn scalar_scan(
    db: &HybridDb,
    mut st: StreamState,
    input: &[u8],
    sink: &mut impl FnMut(MatchEvent),
) -> StreamState {
    for &b in input {
        st.state = scalar_step(db, st.state, b);
        st.consumed += 1;
        if !db.accepts_of(st.state).is_empty() {
            emit_accepts(db, st.state, st.consumed, sink);
        }
    }
    st
}

/// Scans `input` with batched in-region transitions where possible.
///
/// While the state is inside the region and at least one whole batch of
/// input remains, transitions run through the gutter vectors; a
/// completed batch needs no accept checks because the region holds no
/// accept states. On an escape, the scan replays scalar steps from the
/// last known in-region state and keeps stepping scalar until the state
/// re-enters the region. Output is identical to [`scalar_scan`] on every
/// input.
pub fn hybrid_scan(
    db: &HybridDb,
    st: StreamState,
    input: &[u8],
    sink: &mut impl FnMut(MatchEvent),
) -> StreamState {
    hybrid_scan_impl(db, st, input, TableChoice::Gutter, sink)
}

/// The deliberately broken pre-gutter batcher; see [`Engine::HybridNoGutter`].
pub fn hybrid_scan_no_gutter(
    db: &HybridDb,
    st: StreamState,
    input: &[u8],
    sink: &mut impl FnMut(MatchEvent),
) -> StreamState {
    hybrid_scan_impl(db, st, input, TableChoice::Shuffle, sink)
}

fn hybrid_scan_impl(
    db: &HybridDb,
    mut st: StreamState,
    input: &[u8],
    choice: TableChoice,
    sink: &mut impl FnMut(MatchEvent),
) -> StreamState {
    let Some(region) = &db.region else {
        return scalar_scan(db, st, input, sink);
    };
    let l = db.params.batch.max(1) as usize;
    let limit = region.s_limit;
    let mut pos = 0usize;
    while pos < input.len() {
        if st.state > limit || input.len() - pos < l {
            st.state = scalar_step(db, st.state, input[pos]);
            pos += 1;
            if !db.accepts_of(st.state).is_empty() {
                emit_accepts(db, st.state, st.consumed + pos as u64, sink);
            }
            continue;
        }
        match batch_step_tables(region, choice, st.state, &input[pos..pos + l]) {
            BatchOutcome::Completed(state) => {
                st.state = state;
                pos += l;
            }
            BatchOutcome::Escaped {
                index,
                replay_state,
            } => {
                // Replay from the last in-region checkpoint; the next
                // loop turns stay scalar until the region is re-entered.
                st.state = replay_state;
                pos += index - 1;
                st.state = scalar_step(db, st.state, input[pos]);
                pos += 1;
                if !db.accepts_of(st.state).is_empty() {
                    emit_accepts(db, st.state, st.consumed + pos as u64, sink);
                }
            }
        }
    }
    st.consumed += input.len() as u64;
    st
}

/// Continues a stream with one more chunk. Matches spanning chunk
/// boundaries are found exactly as if the chunks were concatenated, and
/// offsets are absolute across the stream. Fails if `prior` does not
/// name a live state of `db`.
pub fn scan_stream(
    db: &HybridDb,
    prior: StreamState,
    chunk: &[u8],
    engine: Engine,
    sink: &mut impl FnMut(MatchEvent),
) -> Result<StreamState, ScanError> {
    if !db.state_is_valid(prior.state) {
        return Err(ScanError::StateMismatch { state: prior.state });
    }
    Ok(match engine {
        Engine::Hybrid => hybrid_scan(db, prior, chunk, sink),
        Engine::Scalar => scalar_scan(db, prior, chunk, sink),
        Engine::HybridNoGutter => hybrid_scan_no_gutter(db, prior, chunk, sink),
    })
}
