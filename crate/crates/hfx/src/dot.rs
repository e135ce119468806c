//! DOT export of the DFA graph with optional hyper-region highlighting.

use crate::dfa::Dfa;
use crate::nfa::StateId;
use crate::region::edge_bundles;

/// Renders the automaton as a DOT digraph. Transitions are condensed to
/// one edge per (source, destination) pair labeled with its byte set;
/// region members are drawn filled, accept states double-circled.
pub fn dfa_to_dot(dfa: &Dfa, region: Option<&[StateId]>) -> String {
    let mut in_region = vec![false; dfa.state_count() as usize];
    if let Some(members) = region {
        for &s in members {
            in_region[s as usize] = true;
        }
    }
    let mut out = String::new();
    out.push_str("digraph dfa {\n");
    out.push_str("  rankdir=LR;\n");
    out.push_str("  node [shape=circle];\n");
    for s in 0..dfa.state_count() {
        let mut attrs = Vec::new();
        if dfa.is_accept(s) {
            attrs.push("shape=doublecircle".to_string());
        }
        if in_region[s as usize] {
            attrs.push("style=filled".to_string());
            attrs.push("fillcolor=lightblue".to_string());
            attrs.push("region=hyper".to_string());
        }
        if s == dfa.start() {
            attrs.push("penwidth=2".to_string());
        }
        if attrs.is_empty() {
            out.push_str(&format!("  s{s};\n"));
        } else {
            out.push_str(&format!("  s{s} [{}];\n", attrs.join(", ")));
        }
    }
    for s in 0..dfa.state_count() {
        for bundle in edge_bundles(dfa, s) {
            out.push_str(&format!(
                "  s{} -> s{} [label=\"{}\"];\n",
                s,
                bundle.dest,
                label_for(&bundle.bytes.iter().collect::<Vec<u8>>())
            ));
        }
    }
    out.push_str("}\n");
    out
}

/// Compact byte-set label: up to three ranges, then a count.
fn label_for(bytes: &[u8]) -> String {
    let mut ranges: Vec<(u8, u8)> = Vec::new();
    for &b in bytes {
        match ranges.last_mut() {
            Some((_, hi)) if u16::from(*hi) + 1 == u16::from(b) => *hi = b,
            _ => ranges.push((b, b)),
        }
    }
    if ranges.len() > 3 {
        return format!("{} bytes", bytes.len());
    }
    ranges
        .iter()
        .map(|&(lo, hi)| {
            if lo == hi {
                fmt_byte(lo)
            } else {
                format!("{}-{}", fmt_byte(lo), fmt_byte(hi))
            }
        })
        .collect::<Vec<_>>()
        .join(",")
}

fn fmt_byte(b: u8) -> String {
    if b.is_ascii_graphic() && b != b'"' && b != b'\\' {
        (b as char).to_string()
    } else {
        format!("\\\\x{b:02x}")
    }
}
