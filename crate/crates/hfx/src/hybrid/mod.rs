//! Runtime database construction: state renumbering around the accepted
//! region, the outer transition table, and the per-byte shuffle/gutter
//! vectors.

mod format;

pub use format::{deserialize, serialize, FORMAT_VERSION};

use crate::dfa::Dfa;
use crate::engine::Vector64;
use crate::error::BuildError;
use crate::nfa::StateId;
use crate::region::{RegionPlan, REGION_CAPACITY};
use crate::PatternId;

/// Runtime id reserved as the absorbing out-of-bounds sink in the gutter
/// vectors. It never names a real state.
pub const GUTTER_SINK: u32 = 63;

/// First runtime id handed to outer-region states.
const OUTER_BASE: u32 = 64;

/// Bijection between original DFA states and runtime ids.
///
/// Region members take 0..k-1 in order of addition; id 63 is reserved;
/// outer states take 64, 65, ... in ascending original id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateRenumbering {
    to_runtime: Vec<u32>,
    to_original: Vec<Option<StateId>>,
}

impl StateRenumbering {
    pub fn runtime(&self, original: StateId) -> u32 {
        self.to_runtime[original as usize]
    }

    pub fn original(&self, runtime: u32) -> Option<StateId> {
        self.to_original.get(runtime as usize).copied().flatten()
    }

    /// Total runtime table rows: 64 reserved slots plus the outer states.
    pub fn runtime_rows(&self) -> u32 {
        self.to_original.len() as u32
    }
}

/// Renumbers states around an accepted region plan.
pub fn renumber(dfa: &Dfa, plan: &RegionPlan) -> Result<StateRenumbering, BuildError> {
    let k = plan.members.len();
    if k > REGION_CAPACITY {
        return Err(BuildError::RegionTooLarge { size: k });
    }
    let n = dfa.state_count() as usize;
    let rows = OUTER_BASE as usize + (n - k);
    let mut to_runtime = vec![u32::MAX; n];
    let mut to_original: Vec<Option<StateId>> = vec![None; rows];
    for (i, &s) in plan.members.iter().enumerate() {
        to_runtime[s as usize] = i as u32;
        to_original[i] = Some(s);
    }
    let mut next = OUTER_BASE;
    for s in 0..n as u32 {
        if to_runtime[s as usize] == u32::MAX {
            to_runtime[s as usize] = next;
            to_original[next as usize] = Some(s);
            next += 1;
        }
    }
    debug_assert_eq!(next as usize, rows);
    Ok(StateRenumbering {
        to_runtime,
        to_original,
    })
}

/// Dense transition table over runtime ids. Covers every live state,
/// hyper rows included, so scalar replay after an escape can step from
/// in-region states exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OuterTable {
    rows: u32,
    table: Vec<u32>,
}

impl OuterTable {
    pub fn rows(&self) -> u32 {
        self.rows
    }

    #[inline]
    pub fn next(&self, state: u32, byte: u8) -> u32 {
        self.table[state as usize * 256 + byte as usize]
    }

    pub fn row(&self, state: u32) -> &[u32] {
        &self.table[state as usize * 256..(state as usize + 1) * 256]
    }

    /// Raw constructor for builders and synthetic-database tooling; the
    /// caller upholds entry validity.
    pub fn from_raw(rows: u32, table: Vec<u32>) -> OuterTable {
        assert_eq!(table.len(), rows as usize * 256);
        OuterTable { rows, table }
    }
}

/// Builds the full runtime transition table. Row 63 self-loops on the
/// sink; dead rows between the region and 63 point at the runtime start
/// state and are never consulted.
pub fn build_outer_table(dfa: &Dfa, map: &StateRenumbering) -> OuterTable {
    let rows = map.runtime_rows();
    let runtime_start = map.runtime(dfa.start());
    let mut table = vec![runtime_start; rows as usize * 256];
    for rt in 0..rows {
        match map.original(rt) {
            Some(orig) => {
                let row = &mut table[rt as usize * 256..(rt as usize + 1) * 256];
                for (b, slot) in row.iter_mut().enumerate() {
                    *slot = map.runtime(dfa.next(orig, b as u8));
                }
            }
            None if rt == GUTTER_SINK => {
                table[rt as usize * 256..(rt as usize + 1) * 256].fill(GUTTER_SINK);
            }
            None => {}
        }
    }
    OuterTable::from_raw(rows, table)
}

/// Per-byte 64-lane successor vectors for the hyper region. Lanes with
/// out-of-region successors hold the runtime id truncated to six bits —
/// an unspecified value the scanner must never trust.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShuffleTable(pub Box<[Vector64; 256]>);

/// The shuffle vectors with every out-of-region successor replaced by
/// the absorbing sink 63, which latches: once a lane reads 63 it stays
/// 63 under any further application.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GutterTable(pub Box<[Vector64; 256]>);

impl ShuffleTable {
    #[inline]
    pub fn vector(&self, byte: u8) -> &Vector64 {
        &self.0[byte as usize]
    }
}

impl GutterTable {
    #[inline]
    pub fn vector(&self, byte: u8) -> &Vector64 {
        &self.0[byte as usize]
    }
}

/// Builds the shuffle and gutter vector tables for a region of size
/// `k >= 2` (lanes `k..=63` are filler: unspecified in the shuffle
/// table, sink in the gutter table).
pub fn build_shuffle_tables(dfa: &Dfa, map: &StateRenumbering) -> (ShuffleTable, GutterTable) {
    let k = (0..REGION_CAPACITY as u32)
        .take_while(|&rt| map.original(rt).is_some())
        .count();
    debug_assert!(k >= 2, "region of {k} states is below the minimum of 2");
    let mut shuffle = Box::new([Vector64::splat(GUTTER_SINK as u8); 256]);
    let mut gutter = Box::new([Vector64::splat(GUTTER_SINK as u8); 256]);
    for b in 0..=255u8 {
        for lane in 0..k {
            let orig = map.original(lane as u32).unwrap();
            let succ = map.runtime(dfa.next(orig, b));
            if succ < k as u32 {
                shuffle[b as usize].0[lane] = succ as u8;
                gutter[b as usize].0[lane] = succ as u8;
            } else {
                shuffle[b as usize].0[lane] = (succ & 63) as u8;
                gutter[b as usize].0[lane] = GUTTER_SINK as u8;
            }
        }
    }
    (ShuffleTable(shuffle), GutterTable(gutter))
}

/// Scan-time parameters carried inside the database.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngineParams {
    /// Batch length l: bytes consumed per hyper-region iteration.
    pub batch: u32,
    /// Detector parameters recorded for inspection.
    pub sigma: u32,
    pub lambda: f64,
    pub depth: u32,
}

impl Default for EngineParams {
    fn default() -> Self {
        EngineParams {
            batch: 9,
            sigma: 30,
            lambda: 0.05,
            depth: 9,
        }
    }
}

/// The region-specific half of a database.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionTables {
    /// Region size k (2..=63).
    pub k: u32,
    /// Largest in-region runtime id; ids strictly greater are outside.
    pub s_limit: u32,
    pub shuffle: ShuffleTable,
    pub gutter: GutterTable,
}

/// Immutable runtime database: renumbered transition table, optional
/// region vectors, accept attribution and engine parameters. Safe to
/// share across any number of concurrent scans.
#[derive(Debug, Clone, PartialEq)]
pub struct HybridDb {
    pub version: u32,
    pub outer: OuterTable,
    pub region: Option<RegionTables>,
    /// Runtime id of the DFA start state.
    pub start: u32,
    /// Pattern ids per runtime state id (empty for non-accepting).
    pub accepts: Vec<Vec<PatternId>>,
    pub params: EngineParams,
}

impl HybridDb {
    /// Largest in-region runtime id, or -1 when the database is
    /// scalar-only.
    pub fn s_limit(&self) -> i64 {
        self.region.as_ref().map_or(-1, |r| i64::from(r.s_limit))
    }

    #[inline]
    pub fn accepts_of(&self, state: u32) -> &[PatternId] {
        &self.accepts[state as usize]
    }

    /// True for ids that denote a live state of this database.
    pub fn state_is_valid(&self, state: u32) -> bool {
        match &self.region {
            Some(region) => state < region.k || (OUTER_BASE..self.outer.rows()).contains(&state),
            None => state < self.outer.rows(),
        }
    }
}

/// Assembles the runtime database. Without a plan the original table is
/// kept as-is (original ids, no region, scalar-only scanning).
pub fn assemble(
    dfa: &Dfa,
    plan: Option<&RegionPlan>,
    params: EngineParams,
) -> Result<HybridDb, BuildError> {
    match plan {
        None => {
            let rows = dfa.state_count();
            let mut table = Vec::with_capacity(rows as usize * 256);
            for s in 0..rows {
                table.extend_from_slice(dfa.row(s));
            }
            let mut accepts = vec![Vec::new(); rows as usize];
            for (&s, pats) in dfa.accept_map() {
                accepts[s as usize] = pats.iter().copied().collect();
            }
            Ok(HybridDb {
                version: FORMAT_VERSION,
                outer: OuterTable::from_raw(rows, table),
                region: None,
                start: dfa.start(),
                accepts,
                params,
            })
        }
        Some(plan) => {
            let map = renumber(dfa, plan)?;
            let outer = build_outer_table(dfa, &map);
            let (shuffle, gutter) = build_shuffle_tables(dfa, &map);
            let k = plan.members.len() as u32;
            let mut accepts = vec![Vec::new(); outer.rows() as usize];
            for (&s, pats) in dfa.accept_map() {
                accepts[map.runtime(s) as usize] = pats.iter().copied().collect();
            }
            Ok(HybridDb {
                version: FORMAT_VERSION,
                outer,
                region: Some(RegionTables {
                    k,
                    s_limit: k - 1,
                    shuffle,
                    gutter,
                }),
                start: map.runtime(dfa.start()),
                accepts,
                params,
            })
        }
    }
}
