//! Dense DFA representation, unanchored determinization and
//! attribution-preserving minimization.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::CompileError;
use crate::nfa::{Nfa, StateId};
use crate::PatternId;

/// Default ceiling on determinized state count.
pub const DEFAULT_MAX_DFA_STATES: usize = 65_536;

/// A dense, total DFA over the 256 byte values.
///
/// Every `(state, byte)` pair has exactly one successor, every state is
/// reachable from the start state, and accept states carry the set of
/// pattern ids they report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    table: Vec<StateId>,
    state_count: u32,
    start: StateId,
    accepts: BTreeMap<StateId, BTreeSet<PatternId>>,
}

impl Dfa {
    /// Builds a DFA from raw parts, checking totality and reachability.
    /// Intended for tests and tools that hand-construct automata.
    pub fn from_parts(
        state_count: u32,
        table: Vec<StateId>,
        start: StateId,
        accepts: BTreeMap<StateId, BTreeSet<PatternId>>,
    ) -> Dfa {
        assert_eq!(
            table.len(),
            state_count as usize * 256,
            "table must be total"
        );
        assert!(start < state_count);
        assert!(
            table.iter().all(|&t| t < state_count),
            "dangling transition"
        );
        assert!(
            accepts.keys().all(|&s| s < state_count),
            "dangling accept state"
        );
        let dfa = Dfa {
            table,
            state_count,
            start,
            accepts,
        };
        let mut seen = vec![false; state_count as usize];
        let mut stack = vec![start];
        seen[start as usize] = true;
        while let Some(s) = stack.pop() {
            for b in 0..=255u8 {
                let t = dfa.next(s, b);
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    stack.push(t);
                }
            }
        }
        assert!(seen.iter().all(|&v| v), "unreachable state");
        dfa
    }

    pub fn state_count(&self) -> u32 {
        self.state_count
    }

    pub fn start(&self) -> StateId {
        self.start
    }

    #[inline]
    pub fn next(&self, s: StateId, b: u8) -> StateId {
        self.table[s as usize * 256 + b as usize]
    }

    pub fn row(&self, s: StateId) -> &[StateId] {
        &self.table[s as usize * 256..(s as usize + 1) * 256]
    }

    pub fn accept_map(&self) -> &BTreeMap<StateId, BTreeSet<PatternId>> {
        &self.accepts
    }

    pub fn is_accept(&self, s: StateId) -> bool {
        self.accepts.contains_key(&s)
    }

    /// Distinct successors of `s`, ascending.
    pub fn successors(&self, s: StateId) -> Vec<StateId> {
        let mut out: Vec<StateId> = self.row(s).to_vec();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Determinizes `nfa` into an unanchored search DFA by subset
/// construction. The start closure is folded into every subset, so the
/// automaton restarts implicitly instead of dying on a mismatch — a scan
/// from the start state finds matches beginning anywhere.
pub fn determinize(nfa: &Nfa, max_states: usize) -> Result<Dfa, CompileError> {
    let mut start_closure = vec![nfa.start()];
    nfa.epsilon_close(&mut start_closure);

    let mut accept_of: HashMap<StateId, PatternId> = HashMap::new();
    for &(s, id) in nfa.accepts() {
        accept_of.insert(s, id);
    }

    let mut subset_ids: HashMap<Box<[StateId]>, StateId> = HashMap::new();
    let mut subsets: Vec<Box<[StateId]>> = Vec::new();
    let mut table: Vec<StateId> = Vec::new();
    let mut accepts: BTreeMap<StateId, BTreeSet<PatternId>> = BTreeMap::new();

    let mut intern = |set: Box<[StateId]>,
                      subsets: &mut Vec<Box<[StateId]>>,
                      accepts: &mut BTreeMap<StateId, BTreeSet<PatternId>>|
     -> Result<StateId, CompileError> {
        if let Some(&id) = subset_ids.get(&set) {
            return Ok(id);
        }
        if subsets.len() >= max_states {
            return Err(CompileError::DfaTooLarge { limit: max_states });
        }
        let id = subsets.len() as StateId;
        let pats: BTreeSet<PatternId> = set
            .iter()
            .filter_map(|s| accept_of.get(s).copied())
            .collect();
        if !pats.is_empty() {
            accepts.insert(id, pats);
        }
        subset_ids.insert(set.clone(), id);
        subsets.push(set);
        Ok(id)
    };

    let start_id = intern(
        start_closure.clone().into_boxed_slice(),
        &mut subsets,
        &mut accepts,
    )?;
    debug_assert_eq!(start_id, 0);

    let mut cursor = 0usize;
    let mut step = Vec::new();
    while cursor < subsets.len() {
        let subset = subsets[cursor].clone();
        for b in 0..=255u8 {
            step.clear();
            for &s in subset.iter() {
                for &(set, t) in nfa.byte_edges(s) {
                    if set.contains(b) {
                        step.push(t);
                    }
                }
            }
            nfa.epsilon_close(&mut step);
            // Keep the start closure alive: closure(step ∪ start) is the
            // union of the two already-closed sets.
            let mut merged = Vec::with_capacity(step.len() + start_closure.len());
            merge_sorted(&step, &start_closure, &mut merged);
            let id = intern(merged.into_boxed_slice(), &mut subsets, &mut accepts)?;
            table.push(id);
        }
        cursor += 1;
    }

    Ok(Dfa {
        table,
        state_count: subsets.len() as u32,
        start: 0,
        accepts,
    })
}

fn merge_sorted(a: &[StateId], b: &[StateId], out: &mut Vec<StateId>) {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
}

/// Minimizes `dfa` by partition refinement. The initial partition splits
/// accept states by their pattern-id set, so multi-pattern attribution
/// survives merging. The result is renumbered canonically (breadth-first
/// from the start state, bytes ascending).
pub fn minimize(dfa: &Dfa) -> Dfa {
    let n = dfa.state_count() as usize;

    // Initial blocks: states grouped by accept pattern set (non-accept
    // states share the `None` class). Ids are dense over the classes
    // that actually occur, in first-occurrence order; an empty phantom
    // block would defeat the fixed-point check below.
    let mut class_ids: HashMap<Option<&BTreeSet<PatternId>>, u32> = HashMap::new();
    let mut block_of: Vec<u32> = Vec::with_capacity(n);
    for s in 0..n as u32 {
        let key = dfa.accept_map().get(&s);
        let next = class_ids.len() as u32;
        block_of.push(*class_ids.entry(key).or_insert(next));
    }
    let mut block_count = class_ids.len() as u32;

    loop {
        // Signature of a state: its block plus the blocks of all 256
        // successors. States sharing a signature stay together.
        let mut sig_ids: HashMap<Vec<u32>, u32> = HashMap::new();
        let mut next_block: Vec<u32> = vec![0; n];
        let mut next_count = 0u32;
        for s in 0..n {
            let mut sig = Vec::with_capacity(257);
            sig.push(block_of[s]);
            sig.extend(dfa.row(s as StateId).iter().map(|&t| block_of[t as usize]));
            let id = *sig_ids.entry(sig).or_insert_with(|| {
                let id = next_count;
                next_count += 1;
                id
            });
            next_block[s] = id;
        }
        if next_count == block_count {
            break;
        }
        block_of = next_block;
        block_count = next_count;
    }

    // Quotient automaton, renumbered by BFS discovery order from the
    // start block so equal inputs produce byte-identical databases.
    let mut rep_of_block: Vec<Option<StateId>> = vec![None; block_count as usize];
    for (s, &block) in block_of.iter().enumerate() {
        let b = block as usize;
        if rep_of_block[b].is_none() {
            rep_of_block[b] = Some(s as StateId);
        }
    }
    let mut new_id_of_block: Vec<Option<StateId>> = vec![None; block_count as usize];
    let mut order: Vec<u32> = Vec::with_capacity(block_count as usize);
    let start_block = block_of[dfa.start() as usize];
    new_id_of_block[start_block as usize] = Some(0);
    order.push(start_block);
    let mut cursor = 0;
    while cursor < order.len() {
        let block = order[cursor];
        let rep = rep_of_block[block as usize].unwrap();
        for b in 0..=255u8 {
            let succ_block = block_of[dfa.next(rep, b) as usize];
            if new_id_of_block[succ_block as usize].is_none() {
                new_id_of_block[succ_block as usize] = Some(order.len() as StateId);
                order.push(succ_block);
            }
        }
        cursor += 1;
    }

    let m = order.len();
    let mut table = vec![0 as StateId; m * 256];
    let mut accepts: BTreeMap<StateId, BTreeSet<PatternId>> = BTreeMap::new();
    for (new_id, &block) in order.iter().enumerate() {
        let rep = rep_of_block[block as usize].unwrap();
        for b in 0..=255u8 {
            let succ_block = block_of[dfa.next(rep, b) as usize];
            table[new_id * 256 + b as usize] = new_id_of_block[succ_block as usize].unwrap();
        }
        if let Some(pats) = dfa.accept_map().get(&rep) {
            accepts.insert(new_id as StateId, pats.clone());
        }
    }

    Dfa {
        table,
        state_count: m as u32,
        start: 0,
        accepts,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nfa::build_nfa;
    use crate::syntax::parse_pattern;

    fn compile_one(pattern: &str) -> Dfa {
        let ast = parse_pattern(pattern).unwrap();
        let nfa = build_nfa(&ast, PatternId(0), 1_000_000).unwrap();
        let union = Nfa::union(&[nfa]);
        minimize(&determinize(&union, 65_536).unwrap())
    }

    #[test]
    fn golden_table_rows() {
        let dfa = compile_one("mode+l");
        assert_eq!(dfa.state_count(), 6);
        // State 0: 'm' -> 1, everything else -> 0.
        for b in 0..=255u8 {
            let expect = if b == b'm' { 1 } else { 0 };
            assert_eq!(dfa.next(0, b), expect, "state 0 byte {:#04x}", b);
        }
        assert_eq!(dfa.next(2, b'd'), 3);
        assert_eq!(dfa.next(3, b'e'), 4);
        assert_eq!(dfa.next(4, b'e'), 4);
        assert_eq!(dfa.next(4, b'l'), 5);
        assert_eq!(dfa.next(5, b'm'), 1);
        assert!(dfa.is_accept(5));
        assert_eq!(dfa.accept_map().len(), 1);
    }

    #[test]
    fn unanchored_restart_on_m() {
        // Reading 'm' mid-pattern starts a fresh candidate match.
        let dfa = compile_one("mode+l");
        for s in 0..6u32 {
            assert_eq!(dfa.next(s, b'm'), 1, "state {s} on 'm'");
        }
    }

    #[test]
    fn totality_and_reachability() {
        let dfa = compile_one("a[bc]{2}");
        let n = dfa.state_count();
        let mut seen = vec![false; n as usize];
        seen[dfa.start() as usize] = true;
        let mut stack = vec![dfa.start()];
        while let Some(s) = stack.pop() {
            for b in 0..=255u8 {
                let t = dfa.next(s, b);
                assert!(t < n);
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    stack.push(t);
                }
            }
        }
        assert!(seen.iter().all(|&v| v));
    }

    #[test]
    fn minimize_keeps_attribution_when_every_state_accepts() {
        // "a*" makes every subset accepting, so there is no non-accept
        // block; minimization must still keep {0} and {0,1} apart.
        let asts = [parse_pattern("a*").unwrap(), parse_pattern("a{2}").unwrap()];
        let nfas: Vec<Nfa> = asts
            .iter()
            .enumerate()
            .map(|(i, ast)| build_nfa(ast, PatternId(i as u32), 1_000_000).unwrap())
            .collect();
        let union = Nfa::union(&nfas);
        let raw = determinize(&union, 65_536).unwrap();
        let min = minimize(&raw);
        assert_eq!(min.state_count(), 3);
        let mut s = min.start();
        assert_eq!(min.accept_map()[&s].len(), 1);
        s = min.next(s, b'a');
        assert_eq!(min.accept_map()[&s].len(), 1);
        s = min.next(s, b'a');
        assert_eq!(
            min.accept_map()[&s].len(),
            2,
            "second 'a' accepts both patterns"
        );
    }

    #[test]
    fn minimize_shrinks_or_keeps() {
        let ast = parse_pattern("(ab|ac)d").unwrap();
        let nfa = build_nfa(&ast, PatternId(0), 1_000_000).unwrap();
        let union = Nfa::union(&[nfa]);
        let raw = determinize(&union, 65_536).unwrap();
        let min = minimize(&raw);
        assert!(min.state_count() <= raw.state_count());
    }
}
