//! Bottom-up evaluation of stratified programs.
//!
//! Strata are evaluated lowest first. Within a stratum, rules are applied
//! semi-naively: after the first round, a rule instance is only considered
//! if at least one of its positive body atoms from the current stratum was
//! derived in the previous round. Every atom is tagged with the stratum of
//! its predicate and the round of its first derivation (facts are round 0),
//! which gives the explanation layer a well-founded order on supports.

mod eval;
mod strata;
mod value;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::syntax::{Literal, Predicate, Program, Rule, SafetyViolation, Term};

pub use eval::{eval_count, AtomLookup};
pub use strata::{
    dependency_graph, stratify, stratify_graph, DependencyEdge, DependencyGraph, EdgeKind,
    StratificationResult, UnstratifiableError,
};
pub use value::{GroundAtom, Substitution, Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Unstratifiable(#[from] UnstratifiableError),
    #[error("unknown constant `{name}` used as count bound in rule #{}", .source_index + 1)]
    UnknownConst { name: String, source_index: usize },
    #[error("unsafe program: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Unsafe(Vec<SafetyViolation>),
    #[error("literal `{0}` is not ground")]
    NotGround(String),
}

/// Stratum and first-derivation round of an atom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtomMeta {
    pub stratum: usize,
    pub round: usize,
    pub is_fact: bool,
}

impl AtomMeta {
    /// Key for the well-founded order used by justification trees.
    pub fn rank(&self) -> (usize, usize) {
        (self.stratum, self.round)
    }
}

/// The unique answer set of a stratified program.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AnswerSet {
    meta: BTreeMap<GroundAtom, AtomMeta>,
}

impl AnswerSet {
    pub fn from_meta(meta: BTreeMap<GroundAtom, AtomMeta>) -> Self {
        Self { meta }
    }

    pub fn len(&self) -> usize {
        self.meta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.meta.is_empty()
    }

    /// Atoms in predicate-then-arguments order.
    pub fn atoms(&self) -> impl Iterator<Item = &GroundAtom> {
        self.meta.keys()
    }

    pub fn atom_set(&self) -> BTreeSet<GroundAtom> {
        self.meta.keys().cloned().collect()
    }

    pub fn contains(&self, atom: &GroundAtom) -> bool {
        self.meta.contains_key(atom)
    }

    pub fn meta(&self, atom: &GroundAtom) -> Option<&AtomMeta> {
        self.meta.get(atom)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GroundAtom, &AtomMeta)> {
        self.meta.iter()
    }

    /// Keeps the atoms satisfying `keep`, with their metadata.
    pub fn filtered(&self, mut keep: impl FnMut(&GroundAtom) -> bool) -> AnswerSet {
        AnswerSet {
            meta: self
                .meta
                .iter()
                .filter(|(a, _)| keep(a))
                .map(|(a, m)| (a.clone(), *m))
                .collect(),
        }
    }

    /// Evaluates a ground test literal (count-local variables may remain)
    /// against this set.
    pub fn holds(&self, literal: &Literal) -> Result<bool, EngineError> {
        eval::ground_literal_holds(literal, self)
    }
}

impl AtomLookup for AnswerSet {
    fn contains_atom(&self, atom: &GroundAtom) -> bool {
        self.contains(atom)
    }

    fn atoms_of<'a>(&'a self, pred: &Predicate) -> Box<dyn Iterator<Item = &'a GroundAtom> + 'a> {
        let name = pred.name.clone();
        let arity = pred.arity;
        let start = GroundAtom::new(pred.name.clone(), Vec::new());
        Box::new(
            self.meta
                .range(start..)
                .map(|(a, _)| a)
                .take_while(move |a| a.predicate == name)
                .filter(move |a| a.args.len() == arity),
        )
    }
}

/// Replaces interval facts by one fact per integer, in ascending order.
/// Source indices are renumbered to stay consecutive.
pub fn expand_intervals(program: &Program) -> Program {
    let mut statements = Vec::with_capacity(program.statements.len());
    for rule in &program.statements {
        if !rule.head.has_interval() {
            statements.push(rule.clone());
            continue;
        }
        let mut heads = vec![Vec::new()];
        for arg in &rule.head.args {
            let choices: Vec<Term> = match arg {
                Term::Interval(lo, hi) => (*lo..=*hi).map(Term::Integer).collect(),
                other => vec![other.clone()],
            };
            heads = heads
                .into_iter()
                .flat_map(|prefix: Vec<Term>| {
                    choices.iter().map(move |c| {
                        let mut next = prefix.clone();
                        next.push(c.clone());
                        next
                    })
                })
                .collect();
        }
        for args in heads {
            let mut fact = rule.clone();
            fact.head.args = args;
            statements.push(fact);
        }
    }
    for (i, rule) in statements.iter_mut().enumerate() {
        rule.source_index = i;
    }
    Program {
        consts: program.consts.clone(),
        statements,
        shows: program.shows.clone(),
    }
}

/// How rules are re-applied inside a stratum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    SemiNaive,
    /// Re-derive everything each round. Used to cross-check semi-naive.
    Naive,
}

/// Computes the answer set. Constants are resolved and intervals expanded
/// first; both steps are idempotent.
pub fn evaluate(program: &Program) -> Result<AnswerSet, EngineError> {
    evaluate_with(program, Strategy::SemiNaive)
}

pub fn evaluate_with(program: &Program, strategy: Strategy) -> Result<AnswerSet, EngineError> {
    let prepared = prepare(program)?;
    let strata = stratify(&prepared)?;
    Ok(eval::run(&prepared, &strata, strategy))
}

/// Resolves constants, expands intervals and checks the static conditions
/// evaluation relies on.
pub fn prepare(program: &Program) -> Result<Program, EngineError> {
    let prepared = expand_intervals(&crate::syntax::resolve_consts(program));
    crate::syntax::safety_check(&prepared).map_err(EngineError::Unsafe)?;
    for rule in &prepared.statements {
        check_bounds(rule)?;
    }
    Ok(prepared)
}

fn check_bounds(rule: &Rule) -> Result<(), EngineError> {
    for lit in &rule.body {
        if let Literal::CountEquality {
            bound: Term::Symbol(name),
            ..
        } = lit
        {
            return Err(EngineError::UnknownConst {
                name: name.clone(),
                source_index: rule.source_index,
            });
        }
    }
    Ok(())
}

/// The atoms selected by `#show`; everything when there is no directive.
pub fn filter_shown(answer_set: &AnswerSet, program: &Program) -> BTreeSet<GroundAtom> {
    if program.shows.is_empty() {
        return answer_set.atom_set();
    }
    let shown: BTreeSet<&Predicate> = program.shows.iter().collect();
    answer_set
        .atoms()
        .filter(|a| shown.contains(&a.signature()))
        .cloned()
        .collect()
}
