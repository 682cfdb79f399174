//! Graphviz export of visited bilattice pairs.

use std::fmt::Write as _;

use flp_core::{InterpretationPair, Signature};

use crate::output::decimal_row;

/// A graph of pairs joined by labelled operator steps. Equal pairs share a
/// node.
#[derive(Debug, Default)]
pub struct TraceGraph {
    nodes: Vec<InterpretationPair>,
    edges: Vec<(usize, usize, &'static str)>,
}

impl TraceGraph {
    fn node(&mut self, pair: &InterpretationPair) -> usize {
        match self.nodes.iter().position(|n| n == pair) {
            Some(i) => i,
            None => {
                self.nodes.push(pair.clone());
                self.nodes.len() - 1
            }
        }
    }

    /// Adds consecutive steps of one iteration.
    pub fn add_sequence(&mut self, label: &'static str, sequence: &[InterpretationPair]) {
        let ids: Vec<usize> = sequence.iter().map(|p| self.node(p)).collect();
        for w in ids.windows(2) {
            if !self.edges.contains(&(w[0], w[1], label)) {
                self.edges.push((w[0], w[1], label));
            }
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn to_dot(&self, signature: &Signature) -> String {
        let names: Vec<&str> = signature.atoms().iter().map(|a| a.name()).collect();
        let mut out = String::from("digraph bilattice {\n  rankdir=BT;\n  node [shape=box, fontname=\"monospace\"];\n");
        let _ = writeln!(out, "  label=\"atoms ({})\";", names.join(", "));
        for (i, pair) in self.nodes.iter().enumerate() {
            let _ = writeln!(
                out,
                "  n{i} [label=\"upper {}\\nlower {}\"];",
                decimal_row(pair.upper().values()),
                decimal_row(pair.lower().values())
            );
        }
        for (from, to, label) in &self.edges {
            let _ = writeln!(out, "  n{from} -> n{to} [label=\"{label}\"];");
        }
        out.push_str("}\n");
        out
    }
}
