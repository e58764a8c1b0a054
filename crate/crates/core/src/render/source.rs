use std::fmt::Write;

use crate::syntax::{write_atom, write_literal, Program, Rule};

const SEP: &str = ", ";

pub fn rule_to_source(rule: &Rule) -> String {
    let mut out = String::new();
    let _ = write_atom(&mut out, &rule.head, SEP);
    if !rule.body.is_empty() {
        out.push_str(" :- ");
        for (i, lit) in rule.body.iter().enumerate() {
            if i > 0 {
                out.push_str(SEP);
            }
            let _ = write_literal(&mut out, lit, SEP);
        }
    }
    out.push('.');
    out
}

/// One statement per line: `#const` definitions, then rules in order, then
/// `#show` directives. The output parses back to the same program.
pub fn program_to_source(program: &Program) -> String {
    let mut out = String::new();
    for (name, value) in &program.consts {
        let _ = writeln!(out, "#const {name}={value}.");
    }
    for rule in &program.statements {
        out.push_str(&rule_to_source(rule));
        out.push('\n');
    }
    for p in &program.shows {
        let _ = writeln!(out, "#show {p}.");
    }
    out
}
