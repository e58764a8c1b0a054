//! Rule instrumentation.
//!
//! Every numbered rule `A :- B1, ..., Bn, C1, ..., Cm.` (positive atoms `B`,
//! test literals `C`) gets a companion
//!
//! ```text
//! rule_fired(j, X1, ..., Xk) :- A, B1, ..., Bn, C1, ..., Cm.
//! ```
//!
//! where `j` is the rule's id and `X1..Xk` are the distinct variables of the
//! head and positive body in first-occurrence order. The extended program is
//! the original followed by all companions; each recording atom in its answer
//! set names one fired ground instance of an original rule.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::engine::{expand_intervals, AnswerSet, GroundAtom, Value};
use crate::syntax::{Atom, Literal, Predicate, Program, Rule, Term};

pub const DEFAULT_RECORDING_PREDICATE: &str = "rule_fired";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstrumentOptions {
    pub recording_predicate: String,
    /// Also number and instrument facts. Interval facts are expanded first.
    pub number_facts: bool,
}

impl Default for InstrumentOptions {
    fn default() -> Self {
        Self {
            recording_predicate: DEFAULT_RECORDING_PREDICATE.to_owned(),
            number_facts: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstrumentError {
    #[error("recording predicate `{name}` already occurs in the program (as {found})")]
    ReservedPredicate { name: String, found: Predicate },
    #[error("rule #{} has no rule id", .source_index + 1)]
    Unnumbered { source_index: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstrumentedProgram {
    /// The numbered input program.
    pub original: Program,
    pub fired_rules: Vec<Rule>,
    pub extended: Program,
    pub rule_ids: BTreeMap<u32, Rule>,
    pub recording_predicate: String,
}

impl InstrumentedProgram {
    pub fn rule(&self, id: u32) -> Option<&Rule> {
        self.rule_ids.get(&id)
    }

    pub fn is_recording(&self, predicate: &str) -> bool {
        predicate == self.recording_predicate
    }

    /// Recording atoms of `extended` whose rule derives a shown predicate
    /// (all of them when the program has no `#show`).
    pub fn shown_recording_atoms(&self, extended: &AnswerSet) -> BTreeSet<GroundAtom> {
        let shows: BTreeSet<&Predicate> = self.original.shows.iter().collect();
        extended
            .atoms()
            .filter(|a| self.is_recording(&a.predicate))
            .filter(|a| {
                shows.is_empty()
                    || match a.args.first() {
                        Some(Value::Int(id)) => u32::try_from(*id)
                            .ok()
                            .and_then(|id| self.rule_ids.get(&id))
                            .is_some_and(|r| shows.contains(&r.head.signature())),
                        _ => false,
                    }
            })
            .cloned()
            .collect()
    }
}

/// Assigns consecutive ids from 1 in source order to rules (and to facts
/// too when `number_facts` is set).
pub fn number_rules(program: &Program, number_facts: bool) -> Program {
    let mut out = program.clone();
    let mut next = 1;
    for rule in &mut out.statements {
        rule.rule_id = if number_facts || !rule.is_fact() {
            next += 1;
            Some(next - 1)
        } else {
            None
        };
    }
    out
}

/// Splits the body into positive atoms and test literals, keeping the
/// relative order within each class.
pub fn partition_body(rule: &Rule) -> (Vec<Atom>, Vec<Literal>) {
    (
        rule.positive_body().cloned().collect(),
        rule.test_body().cloned().collect(),
    )
}

/// Distinct variables of the head, then of the positive body, in order of
/// first occurrence.
pub fn projected_vars(rule: &Rule) -> Vec<String> {
    let mut seen = BTreeSet::new();
    std::iter::once(&rule.head)
        .chain(rule.positive_body())
        .flat_map(Atom::variables)
        .filter(|v| seen.insert(*v))
        .map(str::to_owned)
        .collect()
}

pub fn instrument_rule(rule: &Rule, recording_predicate: &str) -> Result<Rule, InstrumentError> {
    let id = rule.rule_id.ok_or(InstrumentError::Unnumbered {
        source_index: rule.source_index,
    })?;
    let mut args = vec![Term::Integer(i64::from(id))];
    args.extend(projected_vars(rule).into_iter().map(Term::Variable));
    let mut body = Vec::with_capacity(rule.body.len() + 1);
    body.push(Literal::Positive(rule.head.clone()));
    body.extend(rule.body.iter().cloned());
    Ok(Rule {
        head: Atom::new(recording_predicate, args),
        body,
        source_index: rule.source_index,
        rule_id: None,
    })
}

pub fn instrument_program(
    program: &Program,
    options: &InstrumentOptions,
) -> Result<InstrumentedProgram, InstrumentError> {
    let name = &options.recording_predicate;
    if let Some(found) = program.atoms().find(|a| &a.predicate == name) {
        return Err(InstrumentError::ReservedPredicate {
            name: name.clone(),
            found: found.signature(),
        });
    }
    if let Some(found) = program.shows.iter().find(|p| &p.name == name) {
        return Err(InstrumentError::ReservedPredicate {
            name: name.clone(),
            found: found.clone(),
        });
    }

    let original = if options.number_facts {
        number_rules(&expand_intervals(program), true)
    } else {
        number_rules(program, false)
    };

    let mut fired_rules = Vec::new();
    let mut rule_ids = BTreeMap::new();
    for rule in original.statements.iter().filter(|r| r.rule_id.is_some()) {
        let mut fired = instrument_rule(rule, name)?;
        fired.source_index = original.statements.len() + fired_rules.len();
        fired_rules.push(fired);
        rule_ids.insert(rule.rule_id.expect("filtered"), rule.clone());
    }

    let mut extended = original.clone();
    extended.statements.extend(fired_rules.iter().cloned());
    if !original.shows.is_empty() {
        let arities: BTreeSet<usize> = fired_rules.iter().map(|r| r.head.args.len()).collect();
        extended
            .shows
            .extend(arities.into_iter().map(|k| Predicate::new(name.clone(), k)));
    }

    Ok(InstrumentedProgram {
        original,
        fired_rules,
        extended,
        rule_ids,
        recording_predicate: name.clone(),
    })
}
