//! Thompson NFA construction and reference simulation.

use crate::byteset::ByteSet;
use crate::error::CompileError;
use crate::syntax::Ast;
use crate::PatternId;

pub type StateId = u32;

/// Default ceiling on NFA construction size.
pub const DEFAULT_MAX_NFA_STATES: usize = 1_000_000;

/// A nondeterministic automaton over bytes with epsilon edges. Accept
/// states each carry exactly one pattern id.
#[derive(Debug, Clone)]
pub struct Nfa {
    eps: Vec<Vec<StateId>>,
    edges: Vec<Vec<(ByteSet, StateId)>>,
    start: StateId,
    accepts: Vec<(StateId, PatternId)>,
}

impl Nfa {
    pub fn state_count(&self) -> usize {
        self.eps.len()
    }

    pub fn start(&self) -> StateId {
        self.start
    }

    pub fn accepts(&self) -> &[(StateId, PatternId)] {
        &self.accepts
    }

    pub fn epsilon_edges(&self, s: StateId) -> &[StateId] {
        &self.eps[s as usize]
    }

    pub fn byte_edges(&self, s: StateId) -> &[(ByteSet, StateId)] {
        &self.edges[s as usize]
    }

    /// Epsilon-closes `set` in place, leaving it sorted and deduplicated.
    pub fn epsilon_close(&self, set: &mut Vec<StateId>) {
        let mut seen = vec![false; self.state_count()];
        let mut stack: Vec<StateId> = Vec::new();
        for &s in set.iter() {
            if !seen[s as usize] {
                seen[s as usize] = true;
                stack.push(s);
            }
        }
        while let Some(s) = stack.pop() {
            for &t in &self.eps[s as usize] {
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    stack.push(t);
                }
            }
        }
        set.clear();
        set.extend(
            seen.iter()
                .enumerate()
                .filter_map(|(i, &v)| v.then_some(i as StateId)),
        );
    }

    /// All prefix lengths `j` such that this NFA accepts `bytes[..j]`.
    ///
    /// This is a direct subset simulation, used as an independent oracle
    /// against the determinized pipeline.
    pub fn match_ends(&self, bytes: &[u8]) -> Vec<usize> {
        let mut ends = Vec::new();
        let mut current = vec![self.start];
        self.epsilon_close(&mut current);
        if self.any_accept(&current) {
            ends.push(0);
        }
        let mut next = Vec::new();
        for (i, &b) in bytes.iter().enumerate() {
            next.clear();
            for &s in &current {
                for &(set, t) in &self.edges[s as usize] {
                    if set.contains(b) {
                        next.push(t);
                    }
                }
            }
            self.epsilon_close(&mut next);
            std::mem::swap(&mut current, &mut next);
            if current.is_empty() {
                break;
            }
            if self.any_accept(&current) {
                ends.push(i + 1);
            }
        }
        ends
    }

    fn any_accept(&self, sorted: &[StateId]) -> bool {
        self.accepts
            .iter()
            .any(|(s, _)| sorted.binary_search(s).is_ok())
    }

    /// Merges several per-pattern NFAs under a fresh start state joined by
    /// epsilon edges. Pattern tags are preserved.
    pub fn union(parts: &[Nfa]) -> Nfa {
        let total: usize = 1 + parts.iter().map(|n| n.state_count()).sum::<usize>();
        let mut nfa = Nfa {
            eps: Vec::with_capacity(total),
            edges: Vec::with_capacity(total),
            start: 0,
            accepts: Vec::new(),
        };
        nfa.eps.push(Vec::new());
        nfa.edges.push(Vec::new());
        let mut offset = 1u32;
        for part in parts {
            nfa.eps[0].push(part.start + offset);
            for s in 0..part.state_count() as u32 {
                nfa.eps
                    .push(part.eps[s as usize].iter().map(|t| t + offset).collect());
                nfa.edges.push(
                    part.edges[s as usize]
                        .iter()
                        .map(|&(set, t)| (set, t + offset))
                        .collect(),
                );
            }
            for &(s, id) in &part.accepts {
                nfa.accepts.push((s + offset, id));
            }
            offset += part.state_count() as u32;
        }
        nfa
    }
}

/// Compiles a syntax tree into an NFA with a single accept state tagged
/// with `id`. Fails if construction exceeds `max_states`.
pub fn build_nfa(tree: &Ast, id: PatternId, max_states: usize) -> Result<Nfa, CompileError> {
    let mut builder = Builder {
        eps: Vec::new(),
        edges: Vec::new(),
        max_states,
    };
    let (start, end) = builder.compile(tree)?;
    Ok(Nfa {
        eps: builder.eps,
        edges: builder.edges,
        start,
        accepts: vec![(end, id)],
    })
}

struct Builder {
    eps: Vec<Vec<StateId>>,
    edges: Vec<Vec<(ByteSet, StateId)>>,
    max_states: usize,
}

impl Builder {
    fn add_state(&mut self) -> Result<StateId, CompileError> {
        if self.eps.len() >= self.max_states {
            return Err(CompileError::NfaTooLarge {
                limit: self.max_states,
            });
        }
        self.eps.push(Vec::new());
        self.edges.push(Vec::new());
        Ok((self.eps.len() - 1) as StateId)
    }

    fn eps_edge(&mut self, from: StateId, to: StateId) {
        self.eps[from as usize].push(to);
    }

    /// Returns the (start, end) fragment for `node`.
    fn compile(&mut self, node: &Ast) -> Result<(StateId, StateId), CompileError> {
        match node {
            Ast::Literal(b) => self.set_fragment(ByteSet::singleton(*b)),
            Ast::Class(set) => self.set_fragment(*set),
            Ast::Group(inner) => self.compile(inner),
            Ast::Concat(items) => {
                let start = self.add_state()?;
                let mut end = start;
                for item in items {
                    let (s, e) = self.compile(item)?;
                    self.eps_edge(end, s);
                    end = e;
                }
                Ok((start, end))
            }
            Ast::Alternate(branches) => {
                let start = self.add_state()?;
                let end = self.add_state()?;
                for branch in branches {
                    let (s, e) = self.compile(branch)?;
                    self.eps_edge(start, s);
                    self.eps_edge(e, end);
                }
                Ok((start, end))
            }
            Ast::Repeat { node, min, max } => self.compile_repeat(node, *min, *max),
        }
    }

    fn set_fragment(&mut self, set: ByteSet) -> Result<(StateId, StateId), CompileError> {
        let start = self.add_state()?;
        let end = self.add_state()?;
        self.edges[start as usize].push((set, end));
        Ok((start, end))
    }

    /// `x{m,n}` expands to m required copies followed by either `x*`
    /// (unbounded) or n-m optional copies.
    fn compile_repeat(
        &mut self,
        node: &Ast,
        min: u32,
        max: Option<u32>,
    ) -> Result<(StateId, StateId), CompileError> {
        let start = self.add_state()?;
        let mut end = start;
        for _ in 0..min {
            let (s, e) = self.compile(node)?;
            self.eps_edge(end, s);
            end = e;
        }
        match max {
            None => {
                let (s, e) = self.star(node)?;
                self.eps_edge(end, s);
                end = e;
            }
            Some(n) => {
                for _ in min..n {
                    let (s, e) = self.optional(node)?;
                    self.eps_edge(end, s);
                    end = e;
                }
            }
        }
        Ok((start, end))
    }

    fn star(&mut self, node: &Ast) -> Result<(StateId, StateId), CompileError> {
        let start = self.add_state()?;
        let end = self.add_state()?;
        let (s, e) = self.compile(node)?;
        self.eps_edge(start, s);
        self.eps_edge(start, end);
        self.eps_edge(e, s);
        self.eps_edge(e, end);
        Ok((start, end))
    }

    fn optional(&mut self, node: &Ast) -> Result<(StateId, StateId), CompileError> {
        let start = self.add_state()?;
        let end = self.add_state()?;
        let (s, e) = self.compile(node)?;
        self.eps_edge(start, s);
        self.eps_edge(start, end);
        self.eps_edge(e, end);
        Ok((start, end))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_pattern;

    fn nfa_for(pattern: &str) -> Nfa {
        let ast = parse_pattern(pattern).unwrap();
        build_nfa(&ast, PatternId(0), DEFAULT_MAX_NFA_STATES).unwrap()
    }

    fn accepts_exactly(nfa: &Nfa, input: &[u8]) -> bool {
        nfa.match_ends(input).contains(&input.len())
    }

    #[test]
    fn single_literal_fragment() {
        let nfa = nfa_for("a");
        assert_eq!(nfa.state_count(), 2);
        assert_eq!(nfa.byte_edges(nfa.start()).len(), 1);
        assert!(accepts_exactly(&nfa, b"a"));
        assert!(!accepts_exactly(&nfa, b"b"));
    }

    #[test]
    fn kleene_plus() {
        let nfa = nfa_for("e+");
        assert!(accepts_exactly(&nfa, b"e"));
        assert!(accepts_exactly(&nfa, b"ee"));
        assert!(!accepts_exactly(&nfa, b""));
    }

    #[test]
    fn golden_language() {
        let nfa = nfa_for("mode+l");
        assert!(accepts_exactly(&nfa, b"model"));
        assert!(accepts_exactly(&nfa, b"modeel"));
        assert!(!accepts_exactly(&nfa, b"modl"));
        assert!(!accepts_exactly(&nfa, b"model "));
    }

    #[test]
    fn bounded_repeats() {
        let nfa = nfa_for("[^a]{2,3}");
        assert!(accepts_exactly(&nfa, b"bb"));
        assert!(accepts_exactly(&nfa, b"bbb"));
        assert!(!accepts_exactly(&nfa, b"b"));
        assert!(!accepts_exactly(&nfa, b"bbbb"));
        assert!(!accepts_exactly(&nfa, b"ab"));
    }

    #[test]
    fn capacity_error() {
        let ast = parse_pattern("a{100,200}").unwrap();
        let err = build_nfa(&ast, PatternId(0), 50).unwrap_err();
        assert!(matches!(err, CompileError::NfaTooLarge { limit: 50 }));
    }

    #[test]
    fn union_tags_patterns() {
        let a = nfa_for("ab");
        let ast = parse_pattern("bc").unwrap();
        let b = build_nfa(&ast, PatternId(1), DEFAULT_MAX_NFA_STATES).unwrap();
        let u = Nfa::union(&[a, b]);
        assert_eq!(u.accepts().len(), 2);
        let ids: Vec<u32> = u.accepts().iter().map(|&(_, id)| id.0).collect();
        assert_eq!(ids, vec![0, 1]);
    }
}
