//! Lexing, parsing, and static checks for the input language.
//!
//! The accepted language is a small Clingo-compatible subset: facts
//! (optionally with integer intervals), normal rules whose bodies mix
//! positive atoms with test literals (`not`, comparisons and
//! `bound = #count{Vars : atom}`), `#const name=int.` and `#show p/n.`.

mod ast;
mod lexer;
mod parser;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

pub(crate) use ast::{write_atom, write_literal};
pub use ast::{Atom, CompareOp, Literal, Predicate, Program, Rule, Term};
pub use lexer::{tokenize, Position, Token, TokenKind};
pub use parser::{parse_atom, parse_ground_atom, parse_program};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("{pos}: illegal character `{ch}`")]
    IllegalCharacter { pos: Position, ch: char },
    #[error("{pos}: integer literal `{literal}` out of range")]
    IntegerOverflow { pos: Position, literal: String },
    #[error("{pos}: unexpected {found}, expected one of: {}", .expected.join(" "))]
    Unexpected {
        pos: Position,
        found: String,
        expected: Vec<String>,
    },
    #[error("{pos}: unexpected end of input, expected one of: {}", .expected.join(" "))]
    UnexpectedEof {
        pos: Position,
        expected: Vec<String>,
    },
    #[error("{pos}: intervals are only allowed in fact heads")]
    IntervalOutsideFact { pos: Position },
    #[error("{pos}: empty interval {lo}..{hi}")]
    EmptyInterval { pos: Position, lo: i64, hi: i64 },
    #[error("{pos}: constant `{name}` defined twice")]
    DuplicateConst { pos: Position, name: String },
    #[error("{pos}: negative arity {arity} in #show")]
    NegativeArity { pos: Position, arity: i64 },
    #[error("atom `{atom}` is not ground (variable {variable})")]
    NotGround { atom: String, variable: String },
}

impl SyntaxError {
    pub fn position(&self) -> Option<Position> {
        match self {
            SyntaxError::IllegalCharacter { pos, .. }
            | SyntaxError::IntegerOverflow { pos, .. }
            | SyntaxError::Unexpected { pos, .. }
            | SyntaxError::UnexpectedEof { pos, .. }
            | SyntaxError::IntervalOutsideFact { pos }
            | SyntaxError::EmptyInterval { pos, .. }
            | SyntaxError::DuplicateConst { pos, .. }
            | SyntaxError::NegativeArity { pos, .. } => Some(*pos),
            SyntaxError::NotGround { .. } => None,
        }
    }
}

/// Replaces `#const` names occurring as comparison operands or count bounds
/// by their integer values. Atom arguments are left alone.
pub fn resolve_consts(program: &Program) -> Program {
    let mut out = program.clone();
    if program.consts.is_empty() {
        return out;
    }
    let resolve = |t: &mut Term| {
        if let Term::Symbol(name) = t {
            if let Some(&v) = program.consts.get(name.as_str()) {
                *t = Term::Integer(v);
            }
        }
    };
    for rule in &mut out.statements {
        for lit in &mut rule.body {
            match lit {
                Literal::Comparison { left, right, .. } => {
                    resolve(left);
                    resolve(right);
                }
                Literal::CountEquality { bound, .. } => resolve(bound),
                Literal::Positive(_) | Literal::Negated(_) => {}
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ViolationKind {
    /// Head variable without a positive body occurrence.
    UnsafeHead,
    /// Variable under `not` without a positive body occurrence.
    UnsafeNegation,
    UnsafeComparison,
    /// Count bound variable without a positive body occurrence.
    UnsafeCountBound,
    /// Global variable of a count condition without a positive occurrence.
    UnsafeCountCondition,
    /// Count-local variable that also occurs outside its aggregate.
    CountLocalEscapes,
    /// Count-local variable missing from the condition.
    CountLocalUnused,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ViolationKind::UnsafeHead => "occurs in the head but in no positive body atom",
            ViolationKind::UnsafeNegation => "occurs under `not` but in no positive body atom",
            ViolationKind::UnsafeComparison => {
                "occurs in a comparison but in no positive body atom"
            }
            ViolationKind::UnsafeCountBound => {
                "is a count bound but occurs in no positive body atom"
            }
            ViolationKind::UnsafeCountCondition => {
                "is global in a count condition but occurs in no positive body atom"
            }
            ViolationKind::CountLocalEscapes => "is local to a count but also occurs outside it",
            ViolationKind::CountLocalUnused => "is local to a count but missing from its condition",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SafetyViolation {
    pub source_index: usize,
    pub variable: String,
    pub kind: ViolationKind,
}

impl fmt::Display for SafetyViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "rule #{}: variable {} {}",
            self.source_index + 1,
            self.variable,
            self.kind
        )
    }
}

/// Checks range restriction for every rule. Violations are returned as
/// data, sorted by rule then variable.
pub fn safety_check(program: &Program) -> Result<(), Vec<SafetyViolation>> {
    let mut violations = BTreeSet::new();
    for rule in &program.statements {
        check_rule(rule, &mut violations);
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations.into_iter().collect())
    }
}

fn term_vars(t: &Term) -> Option<&str> {
    t.as_variable()
}

fn check_rule(rule: &Rule, out: &mut BTreeSet<SafetyViolation>) {
    let positive: BTreeSet<&str> = rule.positive_body().flat_map(Atom::variables).collect();
    let mut flag = |variable: &str, kind| {
        out.insert(SafetyViolation {
            source_index: rule.source_index,
            variable: variable.to_owned(),
            kind,
        });
    };

    // Variables occurring outside each count aggregate, for locality checks.
    let mut outside_counts: Vec<BTreeSet<&str>> = Vec::new();
    for (i, _) in rule.body.iter().enumerate() {
        let mut vars: BTreeSet<&str> = rule.head.variables().collect();
        for (j, lit) in rule.body.iter().enumerate() {
            if i == j {
                if let Literal::CountEquality { bound, .. } = lit {
                    vars.extend(term_vars(bound));
                }
                continue;
            }
            vars.extend(literal_vars(lit));
        }
        outside_counts.push(vars);
    }

    for v in rule.head.variables() {
        if !positive.contains(v) {
            flag(v, ViolationKind::UnsafeHead);
        }
    }
    for (i, lit) in rule.body.iter().enumerate() {
        match lit {
            Literal::Positive(_) => {}
            Literal::Negated(a) => {
                for v in a.variables() {
                    if !positive.contains(v) {
                        flag(v, ViolationKind::UnsafeNegation);
                    }
                }
            }
            Literal::Comparison { left, right, .. } => {
                for v in [left, right].into_iter().filter_map(term_vars) {
                    if !positive.contains(v) {
                        flag(v, ViolationKind::UnsafeComparison);
                    }
                }
            }
            Literal::CountEquality {
                bound,
                local_vars,
                condition,
            } => {
                if let Some(v) = term_vars(bound) {
                    if !positive.contains(v) {
                        flag(v, ViolationKind::UnsafeCountBound);
                    }
                }
                let cond_vars: BTreeSet<&str> = condition.variables().collect();
                for v in local_vars {
                    if !cond_vars.contains(v.as_str()) {
                        flag(v, ViolationKind::CountLocalUnused);
                    }
                    if outside_counts[i].contains(v.as_str()) {
                        flag(v, ViolationKind::CountLocalEscapes);
                    }
                }
                for v in cond_vars {
                    if !local_vars.iter().any(|l| l == v) && !positive.contains(v) {
                        flag(v, ViolationKind::UnsafeCountCondition);
                    }
                }
            }
        }
    }
}

fn literal_vars(lit: &Literal) -> Vec<&str> {
    match lit {
        Literal::Positive(a) | Literal::Negated(a) => a.variables().collect(),
        Literal::Comparison { left, right, .. } => {
            [left, right].into_iter().filter_map(term_vars).collect()
        }
        Literal::CountEquality {
            bound,
            local_vars,
            condition,
        } => term_vars(bound)
            .into_iter()
            .chain(local_vars.iter().map(String::as_str))
            .chain(condition.variables())
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DIDACTIC: &str = include_str!("../../corpus/lp_didactic.lp");

    #[test]
    fn resolve_replaces_count_bound() {
        let p = parse_program("#const n=1. p(Y) :- q(Y), n=#count{X:r(X,Y)}.").unwrap();
        let r = resolve_consts(&p);
        match &r.statements[0].body[1] {
            Literal::CountEquality { bound, .. } => assert_eq!(bound, &Term::Integer(1)),
            other => panic!("{other:?}"),
        }
        let p2 = parse_program("#const n=2. p(Y) :- q(Y), n=#count{X:r(X,Y)}.").unwrap();
        match &resolve_consts(&p2).statements[0].body[1] {
            Literal::CountEquality { bound, .. } => assert_eq!(bound, &Term::Integer(2)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn resolve_leaves_atom_arguments() {
        let p = parse_program("#const k=3. p(k) :- q(k), X<k, r(X).").unwrap();
        let r = resolve_consts(&p);
        assert_eq!(r.statements[0].head.args, vec![Term::Symbol("k".into())]);
        assert_eq!(
            r.statements[0].body[1],
            Literal::Comparison {
                left: Term::Variable("X".into()),
                op: CompareOp::Lt,
                right: Term::Integer(3)
            }
        );
    }

    #[test]
    fn resolve_without_consts_is_identity() {
        let p = parse_program("p(X) :- q(X), X != a.").unwrap();
        assert_eq!(resolve_consts(&p), p);
    }

    #[test]
    fn safe_rule() {
        assert!(safety_check(&parse_program("p(X) :- q(X).").unwrap()).is_ok());
    }

    #[test]
    fn unsafe_negation() {
        let v = safety_check(&parse_program("p(X) :- not q(X).").unwrap()).unwrap_err();
        assert!(v.contains(&SafetyViolation {
            source_index: 0,
            variable: "X".into(),
            kind: ViolationKind::UnsafeNegation
        }));
        assert!(v.iter().any(|v| v.kind == ViolationKind::UnsafeHead));
    }

    #[test]
    fn unsafe_fact_and_comparison() {
        let v = safety_check(&parse_program("p(X). q :- r(Y), Y < Z.").unwrap()).unwrap_err();
        let kinds: Vec<_> = v.iter().map(|v| (v.source_index, v.kind)).collect();
        assert_eq!(
            kinds,
            vec![
                (0, ViolationKind::UnsafeHead),
                (1, ViolationKind::UnsafeComparison)
            ]
        );
    }

    #[test]
    fn count_locality() {
        let escapes =
            safety_check(&parse_program("p(X) :- q(X), 1=#count{X:r(X)}.").unwrap()).unwrap_err();
        assert!(escapes
            .iter()
            .any(|v| v.kind == ViolationKind::CountLocalEscapes));

        let unused =
            safety_check(&parse_program("p(Y) :- q(Y), 1=#count{X:r(Y)}.").unwrap()).unwrap_err();
        assert!(unused
            .iter()
            .any(|v| v.kind == ViolationKind::CountLocalUnused));

        let bound = safety_check(&parse_program("p :- q, N=#count{X:r(X)}.").unwrap()).unwrap_err();
        assert_eq!(bound[0].kind, ViolationKind::UnsafeCountBound);

        let global =
            safety_check(&parse_program("p :- q, 1=#count{X:r(X,Y)}.").unwrap()).unwrap_err();
        assert_eq!(global[0].kind, ViolationKind::UnsafeCountCondition);

        assert!(
            safety_check(&parse_program("p(Y) :- q(Y,N), N=#count{X:r(X,Y)}.").unwrap()).is_ok()
        );
    }

    #[test]
    fn didactic_program_is_safe() {
        let p = parse_program(DIDACTIC).unwrap();
        assert_eq!(safety_check(&p), Ok(()));
    }
}
