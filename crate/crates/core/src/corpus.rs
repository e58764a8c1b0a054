//! Example programs compiled into the binary.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Example {
    pub name: &'static str,
    pub description: &'static str,
    pub source: &'static str,
}

const EXAMPLES: &[Example] = &[
    Example {
        name: "lp_didactic.lp",
        description: "link prediction on a four-node graph with attributes",
        source: include_str!("../corpus/lp_didactic.lp"),
    },
    Example {
        name: "anomaly_rules.lp",
        description: "two link predictors compared on a synthesized student/company graph",
        source: include_str!("../corpus/anomaly_rules.lp"),
    },
    Example {
        name: "stress_reachability.lp",
        description: "recursive reachability over 20 nodes with count-based sources and sinks",
        source: include_str!("../corpus/stress_reachability.lp"),
    },
    Example {
        name: "stress_supports.lp",
        description: "atoms with several supports, mutual recursion, zero-arity predicates",
        source: include_str!("../corpus/stress_supports.lp"),
    },
];

pub fn list_examples() -> &'static [Example] {
    EXAMPLES
}

pub fn example(name: &str) -> Option<&'static Example> {
    EXAMPLES
        .iter()
        .find(|e| e.name == name || e.name.strip_suffix(".lp") == Some(name))
}
