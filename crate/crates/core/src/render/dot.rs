use std::collections::BTreeMap;
use std::fmt::Write;

use super::RenderOptions;
use crate::explain::{Explanation, JustificationTree};

fn escape(label: &str) -> String {
    label.replace('\\', "\\\\").replace('"', "\\\"")
}

/// One node per tree node, numbered in preorder (node, its subtrees, then
/// its test leaves). Solid edges lead to subtrees, dashed edges to tested
/// literals.
pub fn tree_to_dot(tree: &JustificationTree, options: &RenderOptions) -> String {
    let mut nodes = String::new();
    let mut edges = String::new();
    let mut next = 0;
    walk(tree, options, &mut next, &mut nodes, &mut edges);
    format!("digraph justification {{\n  node [shape=box];\n{nodes}{edges}}}\n")
}

fn walk(
    tree: &JustificationTree,
    options: &RenderOptions,
    next: &mut usize,
    nodes: &mut String,
    edges: &mut String,
) -> usize {
    let id = *next;
    *next += 1;
    let style = if tree.is_fact() {
        ", style=filled, fillcolor=lightgrey"
    } else {
        ""
    };
    let _ = writeln!(
        nodes,
        "  n{id} [label=\"{}\"{style}];",
        escape(&tree.root.to_string())
    );
    for child in &tree.children {
        let c = walk(child, options, next, nodes, edges);
        let _ = writeln!(edges, "  n{id} -> n{c};");
    }
    if options.show_test_leaves {
        for lit in &tree.test_leaves {
            let t = *next;
            *next += 1;
            let _ = writeln!(
                nodes,
                "  n{t} [label=\"{}\", shape=ellipse];",
                escape(&lit.to_string())
            );
            let _ = writeln!(edges, "  n{id} -> n{t} [style=dashed];");
        }
    }
    id
}

/// Dependency graph over a set of explanations: one node per distinct atom,
/// one node per tested literal occurrence.
pub fn explanations_to_dot(explanations: &[Explanation], options: &RenderOptions) -> String {
    let mut ids: BTreeMap<String, usize> = BTreeMap::new();
    let mut nodes = String::new();
    let mut edges = String::new();
    let mut atom_node = |label: String, nodes: &mut String| -> usize {
        let n = ids.len();
        *ids.entry(label.clone()).or_insert_with(|| {
            let _ = writeln!(nodes, "  a{n} [label=\"{}\"];", escape(&label));
            n
        })
    };
    let mut tests = 0;
    for e in explanations {
        let head = atom_node(e.head.to_string(), &mut nodes);
        for b in &e.positive_body {
            let child = atom_node(b.to_string(), &mut nodes);
            let _ = writeln!(edges, "  a{head} -> a{child} [label=\"{}\"];", e.rule_id);
        }
        if options.show_test_leaves {
            for lit in &e.test_body {
                let _ = writeln!(
                    nodes,
                    "  t{tests} [label=\"{}\", shape=ellipse];",
                    escape(&lit.to_string())
                );
                let _ = writeln!(edges, "  a{head} -> t{tests} [style=dashed];");
                tests += 1;
            }
        }
    }
    format!("digraph explanations {{\n  node [shape=box];\n{nodes}{edges}}}\n")
}
