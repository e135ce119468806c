//! Batched in-region transitions: the two-chain decomposition, gutter
//! latching and earliest-escape identification.

use crate::engine::vector::Vector64;
use crate::hybrid::{HybridDb, RegionTables};

/// Result of one batch of `l` in-region transitions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BatchOutcome {
    /// Every position stayed in the region; the payload is the state
    /// after all `l` bytes.
    Completed(u32),
    /// Some position left the region.
    Escaped {
        /// 1-based batch position from which scalar replay must resume.
        /// For first-chain escapes this is the exact escaping position;
        /// for second-chain escapes it is the first second-chain
        /// position, and replay recovers the exact point.
        index: usize,
        /// In-region state after `index - 1` bytes; replay starts here.
        replay_state: u32,
    },
}

/// Linear-scan earliest escape: the normative semantics. Returns the
/// 1-based position of the first value strictly greater than `limit`.
pub fn find_earliest_escape_linear(states: &[u8], limit: u8) -> Option<usize> {
    states.iter().position(|&s| s > limit).map(|i| i + 1)
}

/// Branch-free earliest-escape over up to eight chain states.
///
/// The states are packed into one 64-bit word with per-state shifts and
/// XOR merges, every lane is compared against the boundary in parallel
/// (equality with the boundary counts as in-region), the escape lanes
/// are condensed to a flag mask, and a count-trailing-zeros picks the
/// first one. Agrees exactly with [`find_earliest_escape_linear`].
pub fn find_earliest_escape(states: [u8; 4], limit: u8) -> Option<usize> {
    find_earliest_escape_packed(&states, limit)
}

pub(crate) fn find_earliest_escape_packed(states: &[u8], limit: u8) -> Option<usize> {
    debug_assert!(states.len() <= 8);
    let mut packed: u64 = 0;
    for (i, &s) in states.iter().enumerate() {
        packed ^= u64::from(s) << (8 * i);
    }
    // Split byte lanes into 16-bit half-lanes so an escape test per lane
    // is a single borrow-free subtraction: lane >= limit+1 exactly when
    // (lane | 0x100) - (limit+1) keeps bit 8 set.
    const HALF: u64 = 0x00FF_00FF_00FF_00FF;
    const BIT8: u64 = 0x0100_0100_0100_0100;
    const ONES: u64 = 0x0001_0001_0001_0001;
    let bound = u64::from(limit) + 1;
    let even = packed & HALF;
    let odd = (packed >> 8) & HALF;
    let even_escape = ((even | BIT8) - bound * ONES) & BIT8;
    let odd_escape = ((odd | BIT8) - bound * ONES) & BIT8;
    // Condense to one flag byte per original lane.
    let flags = (even_escape >> 8) | odd_escape;
    let flags = flags & lane_mask(states.len());
    if flags == 0 {
        None
    } else {
        Some(flags.trailing_zeros() as usize / 8 + 1)
    }
}

fn lane_mask(lanes: usize) -> u64 {
    if lanes >= 8 {
        u64::MAX
    } else {
        (1u64 << (8 * lanes)) - 1
    }
}

/// Runs one batch of `l = db.params.batch` transitions from the
/// in-region state `s0` using the gutter vectors.
///
/// The first chain applies the first `l/2` byte vectors sequentially,
/// keeping each intermediate state. The second chain composes the
/// remaining vectors independently of the first (the two halves could
/// run in parallel) and applies the product once. Escapes latch to the
/// sink lane 63, so checking the last state of each chain suffices.
pub fn batch_step(db: &HybridDb, s0: u32, bytes: &[u8]) -> BatchOutcome {
    let region = db.region.as_ref().expect("batch_step requires a region");
    batch_step_tables(region, TableChoice::Gutter, s0, bytes)
}

/// Table selection for [`batch_step_tables`]. `Shuffle` reproduces the
/// pre-gutter behaviour in which a mid-batch escape wraps modulo 64 and
/// can silently corrupt the scan; it exists for ablation tests and the
/// difftest regression demonstration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableChoice {
    Gutter,
    Shuffle,
}

pub(crate) fn batch_step_tables(
    region: &RegionTables,
    choice: TableChoice,
    s0: u32,
    bytes: &[u8],
) -> BatchOutcome {
    let limit = region.s_limit;
    assert!(s0 <= limit, "batch must start inside the region");
    let l = bytes.len();
    debug_assert!(l >= 1);
    let split = l / 2;
    let vector = |b: u8| -> &Vector64 {
        match choice {
            TableChoice::Gutter => region.gutter.vector(b),
            TableChoice::Shuffle => region.shuffle.vector(b),
        }
    };

    // Chain 1: sequential lane lookups through the first half. Each
    // lookup is one broadcast shuffle in vector form.
    let mut state = s0 as u8;
    let escape = if split <= 8 {
        let mut chain = [0u8; 8];
        for (i, &b) in bytes[..split].iter().enumerate() {
            state = vector(b).lane(state as usize);
            chain[i] = state;
        }
        find_earliest_escape_packed(&chain[..split], limit as u8).map(|index| {
            (
                index,
                if index == 1 {
                    s0
                } else {
                    u32::from(chain[index - 2])
                },
            )
        })
    } else {
        // Oversized batch splits fall back to a heap buffer and the
        // linear scan; only l <= 16 is tuned.
        let mut chain = Vec::with_capacity(split);
        for &b in &bytes[..split] {
            state = vector(b).lane(state as usize);
            chain.push(state);
        }
        find_earliest_escape_linear(&chain, limit as u8).map(|index| {
            (
                index,
                if index == 1 {
                    s0
                } else {
                    u32::from(chain[index - 2])
                },
            )
        })
    };
    if let Some((index, replay_state)) = escape {
        return BatchOutcome::Escaped {
            index,
            replay_state,
        };
    }

    // Chain 2: compose the remaining vectors independently of chain 1,
    // then apply the product once. With the gutter vectors an escape
    // anywhere in this half latches to the sink, so the single final
    // check is sufficient.
    let final_state = chain2_final(region, choice, &bytes[split..], state);
    if u32::from(final_state) > limit {
        return BatchOutcome::Escaped {
            index: split + 1,
            replay_state: u32::from(state),
        };
    }
    BatchOutcome::Completed(u32::from(final_state))
}

/// Lane `start` of the composition of the per-byte vectors for `bytes`.
///
/// The hardware path builds the full 64-lane product with one byte
/// shuffle per table, all in registers; the portable path walks the one
/// lane that is actually needed, which is the same value by the
/// composition contract (see `compose_chain`).
#[inline]
fn chain2_final(region: &RegionTables, choice: TableChoice, bytes: &[u8], start: u8) -> u8 {
    #[cfg(target_arch = "x86_64")]
    {
        if crate::engine::vector::avx512_available() {
            // SAFETY: feature presence checked at runtime.
            return unsafe { chain2_final_avx512(region, choice, bytes, start) };
        }
    }
    let mut lane = start;
    for &b in bytes {
        lane = match choice {
            TableChoice::Gutter => region.gutter.vector(b).lane(lane as usize),
            TableChoice::Shuffle => region.shuffle.vector(b).lane(lane as usize),
        };
    }
    lane
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx512f,avx512vbmi")]
unsafe fn chain2_final_avx512(
    region: &RegionTables,
    choice: TableChoice,
    bytes: &[u8],
    start: u8,
) -> u8 {
    use std::arch::x86_64::*;
    let vector = |b: u8| -> *const std::arch::x86_64::__m512i {
        let v = match choice {
            TableChoice::Gutter => region.gutter.vector(b),
            TableChoice::Shuffle => region.shuffle.vector(b),
        };
        v.0.as_ptr() as *const _
    };
    let mut acc = _mm512_loadu_si512(vector(bytes[0]));
    for &b in &bytes[1..] {
        let table = _mm512_loadu_si512(vector(b));
        acc = _mm512_permutexvar_epi8(acc, table);
    }
    let mut lanes = [0u8; 64];
    _mm512_storeu_si512(lanes.as_mut_ptr() as *mut _, acc);
    lanes[(start & 63) as usize]
}
