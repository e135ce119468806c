//! Strongly connected components, state stickiness and start-distance
//! analysis over the DFA transition digraph.

use crate::dfa::Dfa;
use crate::nfa::StateId;

/// One strongly connected component of the transition graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SccInfo {
    /// Member state ids, ascending.
    pub members: Vec<StateId>,
    /// Sum of state stickiness over all members (accepting or not).
    pub stickiness_sum: u64,
    /// Minimum BFS distance from the start state to any member.
    pub distance: u32,
}

/// Partitions the DFA digraph into SCCs (edge multiplicity ignored).
/// Singleton states without self-loops form their own components. The
/// returned list is ordered by smallest member id.
pub fn compute_sccs(dfa: &Dfa) -> Vec<SccInfo> {
    let n = dfa.state_count() as usize;
    let stickiness = all_stickiness(dfa);
    let distance = bfs_distances(dfa);

    let mut comps = tarjan(dfa);
    for members in comps.iter_mut() {
        members.sort_unstable();
    }
    comps.sort_by_key(|members| members[0]);

    debug_assert_eq!(comps.iter().map(Vec::len).sum::<usize>(), n);

    comps
        .into_iter()
        .map(|members| {
            let stickiness_sum = members.iter().map(|&s| stickiness[s as usize] as u64).sum();
            let dist = members.iter().map(|&s| distance[s as usize]).min().unwrap();
            SccInfo {
                members,
                stickiness_sum,
                distance: dist,
            }
        })
        .collect()
}

/// Iterative Tarjan over deduplicated successor lists.
fn tarjan(dfa: &Dfa) -> Vec<Vec<StateId>> {
    let n = dfa.state_count() as usize;
    let succs: Vec<Vec<StateId>> = (0..n as u32).map(|s| dfa.successors(s)).collect();

    const UNVISITED: u32 = u32::MAX;
    let mut index = vec![UNVISITED; n];
    let mut lowlink = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<StateId> = Vec::new();
    let mut next_index = 0u32;
    let mut sccs: Vec<Vec<StateId>> = Vec::new();

    // Explicit DFS frames: (state, next successor position).
    let mut frames: Vec<(StateId, usize)> = Vec::new();
    for root in 0..n as u32 {
        if index[root as usize] != UNVISITED {
            continue;
        }
        frames.push((root, 0));
        index[root as usize] = next_index;
        lowlink[root as usize] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root as usize] = true;

        while let Some(&mut (v, ref mut pos)) = frames.last_mut() {
            if let Some(&w) = succs[v as usize].get(*pos) {
                *pos += 1;
                if index[w as usize] == UNVISITED {
                    index[w as usize] = next_index;
                    lowlink[w as usize] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w as usize] = true;
                    frames.push((w, 0));
                } else if on_stack[w as usize] {
                    lowlink[v as usize] = lowlink[v as usize].min(index[w as usize]);
                }
            } else {
                frames.pop();
                if let Some(&mut (parent, _)) = frames.last_mut() {
                    lowlink[parent as usize] = lowlink[parent as usize].min(lowlink[v as usize]);
                }
                if lowlink[v as usize] == index[v as usize] {
                    let mut members = Vec::new();
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w as usize] = false;
                        members.push(w);
                        if w == v {
                            break;
                        }
                    }
                    sccs.push(members);
                }
            }
        }
    }
    sccs
}

/// Number of distinct byte labels on the in-edges of `s`.
pub fn state_stickiness(dfa: &Dfa, s: StateId) -> u32 {
    let mut seen = [false; 256];
    let mut count = 0u32;
    for u in 0..dfa.state_count() {
        for b in 0..=255u8 {
            if dfa.next(u, b) == s && !seen[b as usize] {
                seen[b as usize] = true;
                count += 1;
            }
        }
    }
    count
}

/// Stickiness of every state in one pass over the table.
pub fn all_stickiness(dfa: &Dfa) -> Vec<u32> {
    let n = dfa.state_count() as usize;
    let mut in_bytes = vec![[0u64; 4]; n];
    for u in 0..dfa.state_count() {
        let row = dfa.row(u);
        for (b, &t) in row.iter().enumerate() {
            in_bytes[t as usize][b >> 6] |= 1u64 << (b & 63);
        }
    }
    in_bytes
        .into_iter()
        .map(|words| words.iter().map(|w| w.count_ones()).sum())
        .collect()
}

/// Unweighted BFS distance from the start state to every state. All
/// states are reachable by the `Dfa` construction invariant.
pub fn bfs_distances(dfa: &Dfa) -> Vec<u32> {
    let n = dfa.state_count() as usize;
    let mut dist = vec![u32::MAX; n];
    let mut queue = std::collections::VecDeque::new();
    dist[dfa.start() as usize] = 0;
    queue.push_back(dfa.start());
    while let Some(u) = queue.pop_front() {
        let d = dist[u as usize];
        for t in dfa.successors(u) {
            if dist[t as usize] == u32::MAX {
                dist[t as usize] = d + 1;
                queue.push_back(t);
            }
        }
    }
    dist
}

/// Minimum BFS distance from the start state to any member of `scc`.
pub fn scc_distance(dfa: &Dfa, scc: &SccInfo) -> u32 {
    let dist = bfs_distances(dfa);
    scc.members.iter().map(|&s| dist[s as usize]).min().unwrap()
}
