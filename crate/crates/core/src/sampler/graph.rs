//! Sampling graphs: which group may follow which, and in which splits.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::config::Variant;
use crate::fnalg::GroupId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Node {
    #[serde(rename = "IN")]
    In,
    #[serde(rename = "OUT")]
    Out,
    #[serde(untagged)]
    Group(GroupId),
}

impl Node {
    fn is_terminal(self) -> bool {
        matches!(self, Node::In | Node::Out)
    }

    pub fn label(self) -> &'static str {
        match self {
            Node::In => "IN",
            Node::Out => "OUT",
            Node::Group(g) => g.as_str(),
        }
    }
}

/// Edge colour: black, blue and red respectively.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeMode {
    TrainAndTest,
    TrainOnly,
    TestOnly,
}

impl EdgeMode {
    pub fn usable_in_train(self) -> bool {
        matches!(self, EdgeMode::TrainAndTest | EdgeMode::TrainOnly)
    }

    pub fn usable_in_test(self) -> bool {
        matches!(self, EdgeMode::TrainAndTest | EdgeMode::TestOnly)
    }

    fn colour(self) -> &'static str {
        match self {
            EdgeMode::TrainAndTest => "black",
            EdgeMode::TrainOnly => "blue",
            EdgeMode::TestOnly => "red",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub from: Node,
    pub to: Node,
    pub mode: EdgeMode,
}

/// Which edges a walk may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phase {
    Train,
    Test,
}

impl Phase {
    fn allows(self, mode: EdgeMode) -> bool {
        match self {
            Phase::Train => mode.usable_in_train(),
            Phase::Test => mode.usable_in_test(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplingGraph {
    pub variant: Variant,
    pub edges: Vec<Edge>,
}

impl SamplingGraph {
    pub fn build(variant: Variant) -> Self {
        use EdgeMode::*;
        use GroupId::*;
        let e = |from, to, mode| Edge { from, to, mode };
        let g = Node::Group;
        let edges = match variant {
            Variant::A | Variant::R => {
                let (cross, same) = if variant == Variant::A {
                    (TrainOnly, TestOnly)
                } else {
                    (TestOnly, TrainOnly)
                };
                vec![
                    e(Node::In, g(Ga), TrainAndTest),
                    e(Node::In, g(Gb), TrainAndTest),
                    e(g(Ga), g(Gb), cross),
                    e(g(Gb), g(Ga), cross),
                    e(g(Ga), g(Ga), same),
                    e(g(Gb), g(Gb), same),
                    e(g(Ga), Node::Out, TrainAndTest),
                    e(g(Gb), Node::Out, TrainAndTest),
                ]
            }
            Variant::S => vec![
                e(Node::In, g(Ga1), TrainAndTest),
                e(Node::In, g(Gb1), TrainAndTest),
                e(g(Ga1), g(Ga2), TrainOnly),
                e(g(Gb1), g(Gb2), TrainOnly),
                e(g(Ga1), g(Go), TrainOnly),
                e(g(Gb1), g(Go), TrainOnly),
                e(g(Ga1), g(Gb2), TestOnly),
                e(g(Gb1), g(Ga2), TestOnly),
                e(g(Ga2), Node::Out, TrainAndTest),
                e(g(Gb2), Node::Out, TrainAndTest),
                e(g(Go), Node::Out, TrainAndTest),
                // chaining: a finished pair may start another one
                e(Node::Out, Node::In, TrainAndTest),
            ],
        };
        Self { variant, edges }
    }

    pub fn mode(&self, from: Node, to: Node) -> Option<EdgeMode> {
        self.edges
            .iter()
            .find(|e| e.from == from && e.to == to)
            .map(|e| e.mode)
    }

    pub fn nodes(&self) -> BTreeSet<Node> {
        self.edges.iter().flat_map(|e| [e.from, e.to]).collect()
    }

    /// Nodes reachable from `start` via zero or more terminal (IN/OUT) hops,
    /// using only edges allowed in `phase`. The start itself is included.
    fn terminal_closure(&self, start: Node, phase: Phase) -> BTreeSet<Node> {
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(n) = stack.pop() {
            for e in self.edges.iter().filter(|e| e.from == n && phase.allows(e.mode)) {
                if e.to.is_terminal() && seen.insert(e.to) {
                    stack.push(e.to);
                }
            }
        }
        seen
    }

    /// Group nodes that may consume the next function after `from`.
    pub fn next_groups(&self, from: Node, phase: Phase) -> BTreeSet<GroupId> {
        let closure = self.terminal_closure(from, phase);
        self.edges
            .iter()
            .filter(|e| closure.contains(&e.from) && phase.allows(e.mode))
            .filter_map(|e| match e.to {
                Node::Group(g) => Some(g),
                _ => None,
            })
            .collect()
    }

    /// True iff the group sequence is a walk IN → g1 → … → gk → OUT over
    /// edges allowed in `phase`, with only IN/OUT nodes between groups.
    pub fn accepts(&self, groups: &[GroupId], phase: Phase) -> bool {
        if groups.is_empty() {
            return false;
        }
        let mut at = Node::In;
        for &g in groups {
            if !self.next_groups(at, phase).contains(&g) {
                return false;
            }
            at = Node::Group(g);
        }
        self.terminal_closure(at, phase).contains(&Node::Out)
    }

    pub fn to_json(&self) -> String {
        let edges: Vec<_> = self
            .edges
            .iter()
            .map(|e| {
                serde_json::json!({
                    "from": e.from.label(),
                    "to": e.to.label(),
                    "mode": e.mode,
                })
            })
            .collect();
        let doc = serde_json::json!({ "variant": self.variant, "edges": edges });
        serde_json::to_string_pretty(&doc).expect("graph json")
    }

    pub fn to_dot(&self) -> String {
        let mut out = format!("digraph variant_{} {{\n  rankdir=LR;\n", self.variant);
        for n in self.nodes() {
            let shape = if n.is_terminal() { "box" } else { "circle" };
            let _ = writeln!(out, "  {} [shape={shape}];", n.label());
        }
        for e in &self.edges {
            let _ = writeln!(
                out,
                "  {} -> {} [color={}, label=\"{}\"];",
                e.from.label(),
                e.to.label(),
                e.mode.colour(),
                serde_json::to_value(e.mode).unwrap().as_str().unwrap()
            );
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use GroupId::*;

    fn g(x: GroupId) -> Node {
        Node::Group(x)
    }

    #[test]
    fn edge_colours() {
        let a = SamplingGraph::build(Variant::A);
        assert_eq!(a.mode(g(Ga), g(Ga)), Some(EdgeMode::TestOnly));
        assert_eq!(a.mode(g(Ga), g(Gb)), Some(EdgeMode::TrainOnly));
        let r = SamplingGraph::build(Variant::R);
        assert_eq!(r.mode(g(Ga), g(Gb)), Some(EdgeMode::TestOnly));
        assert_eq!(r.mode(g(Gb), g(Gb)), Some(EdgeMode::TrainOnly));
        let s = SamplingGraph::build(Variant::S);
        assert_eq!(s.mode(g(Ga1), g(Gb2)), Some(EdgeMode::TestOnly));
        assert_eq!(s.mode(g(Gb1), g(Ga2)), Some(EdgeMode::TestOnly));
        assert_eq!(s.mode(g(Ga1), g(Go)), Some(EdgeMode::TrainOnly));
        assert_eq!(s.mode(Node::Out, Node::In), Some(EdgeMode::TrainAndTest));
    }

    #[test]
    fn a_and_r_are_complements() {
        let a = SamplingGraph::build(Variant::A);
        let r = SamplingGraph::build(Variant::R);
        let of = |gr: &SamplingGraph, m: EdgeMode| -> BTreeSet<(Node, Node)> {
            gr.edges.iter().filter(|e| e.mode == m).map(|e| (e.from, e.to)).collect()
        };
        assert_eq!(of(&a, EdgeMode::TrainOnly), of(&r, EdgeMode::TestOnly));
        assert_eq!(of(&a, EdgeMode::TestOnly), of(&r, EdgeMode::TrainOnly));
        assert_eq!(of(&a, EdgeMode::TrainAndTest), of(&r, EdgeMode::TrainAndTest));
    }

    #[test]
    fn walks() {
        let a = SamplingGraph::build(Variant::A);
        assert!(a.accepts(&[Ga, Gb, Ga], Phase::Train));
        assert!(!a.accepts(&[Ga, Ga], Phase::Train));
        assert!(a.accepts(&[Ga, Ga], Phase::Test));
        assert!(a.accepts(&[Gb], Phase::Train));
        let s = SamplingGraph::build(Variant::S);
        assert!(s.accepts(&[Ga1, Ga2, Gb1, Go], Phase::Train));
        assert!(!s.accepts(&[Ga1], Phase::Train));
        assert!(!s.accepts(&[Ga1, Ga2, Ga2], Phase::Train));
        assert!(!s.accepts(&[Ga2, Ga1], Phase::Train));
        assert!(!s.accepts(&[Ga1, Gb2], Phase::Train));
        assert!(s.accepts(&[Ga1, Gb2, Gb1, Ga2], Phase::Test));
        assert!(!s.accepts(&[Ga1, Go], Phase::Test));
    }

    #[test]
    fn every_group_reachable_in_training() {
        for v in Variant::ALL {
            let graph = SamplingGraph::build(v);
            for &grp in GroupId::for_variant(v) {
                // reachable from IN and reaching OUT over train edges
                let reach_in = {
                    let mut frontier = graph.next_groups(Node::In, Phase::Train);
                    let mut seen = frontier.clone();
                    while !frontier.is_empty() {
                        let mut next = BTreeSet::new();
                        for f in &frontier {
                            for h in graph.next_groups(Node::Group(*f), Phase::Train) {
                                if seen.insert(h) {
                                    next.insert(h);
                                }
                            }
                        }
                        frontier = next;
                    }
                    seen
                };
                assert!(reach_in.contains(&grp), "{v}: {grp} unreachable");
            }
        }
    }

    #[test]
    fn json_export_shape() {
        let json = SamplingGraph::build(Variant::A).to_json();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        let edges = v["edges"].as_array().unwrap();
        assert_eq!(edges.len(), 8);
        assert!(edges.iter().any(|e| e["from"] == "Ga" && e["to"] == "Ga" && e["mode"] == "test_only"));
        assert!(SamplingGraph::build(Variant::S).to_dot().contains("Ga1 -> Gb2 [color=red"));
    }
}
