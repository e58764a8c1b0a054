use std::fmt::Write;

use super::RenderOptions;
use crate::engine::{GroundAtom, Substitution};
use crate::explain::{Explanation, JustificationTree, Support};

/// Atoms on one space-separated line, the usual model output convention.
/// An empty set renders as the empty string.
pub fn answer_set_to_text<'a>(atoms: impl IntoIterator<Item = &'a GroundAtom>) -> String {
    let line = atoms
        .into_iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ");
    if line.is_empty() {
        line
    } else {
        line + "\n"
    }
}

fn join<T: ToString>(items: &[T]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

/// `HEAD-is_supported_by-([HEAD]-[POS,...]-[TEST,...])`
pub fn explanation_to_text(explanation: &Explanation) -> String {
    format!(
        "{head}-is_supported_by-([{head}]-[{pos}]-[{test}])",
        head = explanation.head,
        pos = join(&explanation.positive_body),
        test = join(&explanation.test_body),
    )
}

fn wrapped(explanation: &Explanation, width: usize) -> String {
    let line = explanation_to_text(explanation);
    if line.chars().count() <= width {
        return line;
    }
    format!(
        "{head}-is_supported_by-\n   ([{head}]-[{pos}]-\n    [{test}])",
        head = explanation.head,
        pos = join(&explanation.positive_body),
        test = join(&explanation.test_body),
    )
}

pub fn explanations_to_text(explanations: &[Explanation], options: &RenderOptions) -> String {
    let mut out = String::new();
    for e in explanations {
        match options.max_width {
            Some(w) => out.push_str(&wrapped(e, w)),
            None => out.push_str(&explanation_to_text(e)),
        }
        out.push('\n');
    }
    out
}

fn theta_text(theta: &Substitution) -> String {
    theta
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(",")
}

/// Indented tree, two spaces per level. Test leaves are marked `?`.
pub fn tree_to_text(tree: &JustificationTree, options: &RenderOptions) -> String {
    let mut out = String::new();
    write_tree(&mut out, tree, 0, options);
    out
}

fn write_tree(out: &mut String, tree: &JustificationTree, depth: usize, options: &RenderOptions) {
    let indent = "  ".repeat(depth);
    match &tree.support {
        Support::Fact => {
            let _ = writeln!(out, "{indent}{} [fact]", tree.root);
        }
        Support::RuleInstance { rule_id, theta } => {
            let _ = if theta.is_empty() {
                writeln!(out, "{indent}{} [rule {rule_id}]", tree.root)
            } else {
                writeln!(
                    out,
                    "{indent}{} [rule {rule_id}: {}]",
                    tree.root,
                    theta_text(theta)
                )
            };
        }
    }
    for child in &tree.children {
        write_tree(out, child, depth + 1, options);
    }
    if options.show_test_leaves {
        for lit in &tree.test_leaves {
            let _ = writeln!(out, "{indent}  ? {lit} [tested]");
        }
    }
}
