//! Pattern-set compilation: parse, build NFAs, determinize, minimize.

use crate::dfa::{determinize, minimize, Dfa, DEFAULT_MAX_DFA_STATES};
use crate::error::{CompileError, PatternError};
use crate::nfa::{build_nfa, Nfa, DEFAULT_MAX_NFA_STATES};
use crate::syntax::parse_pattern;
use crate::PatternId;

#[derive(Debug, Clone)]
pub struct CompileConfig {
    /// Ceiling on total NFA states across the pattern set.
    pub max_nfa_states: usize,
    /// Ceiling on determinized DFA states.
    pub max_dfa_states: usize,
    /// Minimization can be disabled to compare against the raw automaton.
    pub minimize: bool,
}

impl Default for CompileConfig {
    fn default() -> Self {
        CompileConfig {
            max_nfa_states: DEFAULT_MAX_NFA_STATES,
            max_dfa_states: DEFAULT_MAX_DFA_STATES,
            minimize: true,
        }
    }
}

/// Compiles a pattern set into a single unanchored search DFA. Pattern
/// ids are the zero-based indices into `patterns`. Parse failures are
/// aggregated across the whole set before reporting.
pub fn compile_pattern_set<S: AsRef<str>>(
    patterns: &[S],
    config: &CompileConfig,
) -> Result<Dfa, CompileError> {
    if patterns.is_empty() {
        return Err(CompileError::NoPatterns);
    }
    let mut parse_errors = Vec::new();
    let mut asts = Vec::with_capacity(patterns.len());
    for (index, pattern) in patterns.iter().enumerate() {
        match parse_pattern(pattern.as_ref()) {
            Ok(ast) => asts.push(ast),
            Err(error) => parse_errors.push(PatternError { index, error }),
        }
    }
    if !parse_errors.is_empty() {
        return Err(CompileError::Parse(parse_errors));
    }

    let mut budget = config.max_nfa_states;
    let mut nfas = Vec::with_capacity(asts.len());
    for (index, ast) in asts.iter().enumerate() {
        let nfa = build_nfa(ast, PatternId(index as u32), budget)?;
        budget = budget.saturating_sub(nfa.state_count());
        nfas.push(nfa);
    }
    let union = Nfa::union(&nfas);

    let dfa = determinize(&union, config.max_dfa_states)?;
    Ok(if config.minimize { minimize(&dfa) } else { dfa })
}

/// Extracts patterns from rule-file text: one regex per line, `#` comment
/// lines and blank lines ignored. Pattern ids are indices among the
/// remaining lines.
pub fn parse_rule_file(text: &str) -> Vec<&str> {
    text.lines()
        .map(|line| line.trim_end_matches('\r'))
        .filter(|line| !line.is_empty() && !line.starts_with('#'))
        .collect()
}

/// Line numbers (1-based) of the rules returned by [`parse_rule_file`],
/// for error reporting.
pub fn rule_line_numbers(text: &str) -> Vec<usize> {
    text.lines()
        .enumerate()
        .filter(|(_, line)| {
            let line = line.trim_end_matches('\r');
            !line.is_empty() && !line.starts_with('#')
        })
        .map(|(i, _)| i + 1)
        .collect()
}
