//! Explanations reconstructed from recording atoms, and justification
//! trees built from them.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::engine::{AnswerSet, GroundAtom, Substitution, Value};
use crate::instrument::{partition_body, projected_vars, InstrumentedProgram};
use crate::syntax::{resolve_consts, Atom, Literal, Predicate, Program, Rule};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExplainError {
    #[error("recording atom `{atom}` has arity {found}, rule {rule_id} needs {expected}")]
    ArityMismatch {
        atom: String,
        rule_id: u32,
        expected: usize,
        found: usize,
    },
    #[error("recording atom `{0}` does not name a known rule")]
    UnknownRule(String),
    #[error("rule {rule_id} does not ground under the recorded substitution")]
    NotGround { rule_id: u32 },
    #[error("`{0}` is not in the answer set")]
    NotInAnswerSet(String),
    #[error("justification of `{atom}` exceeds depth {max_depth}")]
    DepthExceeded { atom: String, max_depth: usize },
    #[error("`{0}` has no support that is well-founded in the derivation order")]
    NoWellFoundedSupport(String),
}

/// A fired ground rule instance supporting `head`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Explanation {
    pub head: GroundAtom,
    pub rule_id: u32,
    pub theta: Substitution,
    pub positive_body: Vec<GroundAtom>,
    /// Test literals under `theta`; count-local variables stay unbound.
    pub test_body: Vec<Literal>,
}

impl Explanation {
    fn sort_key(&self) -> (u32, Vec<&Value>) {
        (self.rule_id, self.theta.values().collect())
    }

    /// Re-checks the explanation against an answer set: head and positive
    /// body present, every test literal true. `consts` resolves symbolic
    /// count bounds.
    pub fn is_sound(&self, answer_set: &AnswerSet, consts: &BTreeMap<String, i64>) -> bool {
        if !answer_set.contains(&self.head) {
            return false;
        }
        if !self.positive_body.iter().all(|a| answer_set.contains(a)) {
            return false;
        }
        let probe = Program {
            consts: consts.clone(),
            statements: vec![Rule {
                head: Atom::new("probe", vec![]),
                body: self.test_body.clone(),
                source_index: 0,
                rule_id: None,
            }],
            shows: Vec::new(),
        };
        resolve_consts(&probe).statements[0]
            .body
            .iter()
            .all(|lit| answer_set.holds(lit).unwrap_or(false))
    }
}

/// Removes the recording atoms, keeping the metadata of everything else.
pub fn strip_extension(extended: &AnswerSet, recording_predicate: &str) -> AnswerSet {
    extended.filtered(|a| a.predicate != recording_predicate)
}

/// Reads rule id and substitution off a recording atom: argument `i + 1`
/// binds the rule's `i`-th projected variable.
pub fn extract_substitution(
    recording: &GroundAtom,
    rule_ids: &BTreeMap<u32, Rule>,
) -> Result<(u32, Substitution), ExplainError> {
    let unknown = || ExplainError::UnknownRule(recording.to_string());
    let id = match recording.args.first() {
        Some(Value::Int(i)) => u32::try_from(*i).map_err(|_| unknown())?,
        _ => return Err(unknown()),
    };
    let rule = rule_ids.get(&id).ok_or_else(unknown)?;
    let vars = projected_vars(rule);
    if vars.len() + 1 != recording.args.len() {
        return Err(ExplainError::ArityMismatch {
            atom: recording.to_string(),
            rule_id: id,
            expected: vars.len() + 1,
            found: recording.args.len(),
        });
    }
    let theta = vars
        .into_iter()
        .zip(recording.args[1..].iter().cloned())
        .collect();
    Ok((id, theta))
}

/// Instantiates rule `rule_id` under `theta`.
pub fn explanation_for(
    rule_id: u32,
    rule: &Rule,
    theta: Substitution,
) -> Result<Explanation, ExplainError> {
    let not_ground = || ExplainError::NotGround { rule_id };
    let (positive, tests) = partition_body(rule);
    let head = theta.ground_atom(&rule.head).ok_or_else(not_ground)?;
    let positive_body = positive
        .iter()
        .map(|a| theta.ground_atom(a))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(not_ground)?;
    let test_body = tests.iter().map(|l| theta.apply_literal(l)).collect();
    Ok(Explanation {
        head,
        rule_id,
        theta,
        positive_body,
        test_body,
    })
}

/// One explanation per recording atom, ordered by rule id and then by the
/// substitution's values.
pub fn build_explanations(
    extended: &AnswerSet,
    program: &InstrumentedProgram,
) -> Result<Vec<Explanation>, ExplainError> {
    let mut out = Vec::new();
    for atom in extended
        .atoms()
        .filter(|a| program.is_recording(&a.predicate))
    {
        let (id, theta) = extract_substitution(atom, &program.rule_ids)?;
        out.push(explanation_for(id, &program.rule_ids[&id], theta)?);
    }
    out.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    Ok(out)
}

/// Which explanation heads to keep. Both criteria apply when both are set.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Selection {
    pub predicates: Option<BTreeSet<Predicate>>,
    /// Pattern atom; variables match anything (consistently).
    pub atom: Option<Atom>,
}

impl Selection {
    pub fn predicates(preds: impl IntoIterator<Item = Predicate>) -> Self {
        Self {
            predicates: Some(preds.into_iter().collect()),
            atom: None,
        }
    }

    pub fn atom(pattern: Atom) -> Self {
        Self {
            predicates: None,
            atom: Some(pattern),
        }
    }

    pub fn matches(&self, head: &GroundAtom) -> bool {
        if let Some(preds) = &self.predicates {
            if !preds.iter().any(|p| head.has_signature(p)) {
                return false;
            }
        }
        match &self.atom {
            Some(pattern) => pattern_matches(pattern, head),
            None => true,
        }
    }
}

fn pattern_matches(pattern: &Atom, atom: &GroundAtom) -> bool {
    if pattern.predicate != atom.predicate || pattern.args.len() != atom.args.len() {
        return false;
    }
    let mut theta = Substitution::new();
    pattern
        .args
        .iter()
        .zip(&atom.args)
        .all(|(t, v)| match t.as_variable() {
            Some(x) => match theta.get(x) {
                Some(b) => b == v,
                None => {
                    theta.bind(x, v.clone());
                    true
                }
            },
            None => Value::from_term(t).as_ref() == Some(v),
        })
}

pub fn select_explanations(
    explanations: &[Explanation],
    selection: &Selection,
) -> Vec<Explanation> {
    explanations
        .iter()
        .filter(|e| selection.matches(&e.head))
        .cloned()
        .collect()
}

/// Every explanation whose head is `atom`.
pub fn all_supports(atom: &GroundAtom, explanations: &[Explanation]) -> Vec<Explanation> {
    explanations
        .iter()
        .filter(|e| &e.head == atom)
        .cloned()
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Support {
    Fact,
    RuleInstance { rule_id: u32, theta: Substitution },
}

/// Facts and tested literals are leaves; positive body atoms of the chosen
/// support become subtrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JustificationTree {
    pub root: GroundAtom,
    pub support: Support,
    pub children: Vec<JustificationTree>,
    pub test_leaves: Vec<Literal>,
}

impl JustificationTree {
    /// Atom nodes plus test leaves.
    pub fn node_count(&self) -> usize {
        1 + self.test_leaves.len() + self.children.iter().map(Self::node_count).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children.iter().map(Self::depth).max().unwrap_or(0)
    }

    pub fn is_fact(&self) -> bool {
        self.support == Support::Fact
    }
}

/// Builds the canonical tree for `atom`: at every derived node, the support
/// with smallest rule id and then smallest substitution among those whose
/// positive body atoms all rank strictly below the node.
pub fn build_justification_tree(
    atom: &GroundAtom,
    explanations: &[Explanation],
    answer_set: &AnswerSet,
    max_depth: Option<usize>,
) -> Result<JustificationTree, ExplainError> {
    if !answer_set.contains(atom) {
        return Err(ExplainError::NotInAnswerSet(atom.to_string()));
    }
    let mut by_head: HashMap<&GroundAtom, Vec<&Explanation>> = HashMap::new();
    for e in explanations {
        by_head.entry(&e.head).or_default().push(e);
    }
    for supports in by_head.values_mut() {
        supports.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    }
    let builder = TreeBuilder {
        by_head,
        answer_set,
        max_depth,
    };
    builder.build(atom, 1)
}

struct TreeBuilder<'a> {
    by_head: HashMap<&'a GroundAtom, Vec<&'a Explanation>>,
    answer_set: &'a AnswerSet,
    max_depth: Option<usize>,
}

impl TreeBuilder<'_> {
    fn build(&self, atom: &GroundAtom, depth: usize) -> Result<JustificationTree, ExplainError> {
        if self.max_depth.is_some_and(|m| depth > m) {
            return Err(ExplainError::DepthExceeded {
                atom: atom.to_string(),
                max_depth: self.max_depth.unwrap_or_default(),
            });
        }
        let meta = self
            .answer_set
            .meta(atom)
            .ok_or_else(|| ExplainError::NotInAnswerSet(atom.to_string()))?;
        if meta.is_fact {
            return Ok(JustificationTree {
                root: atom.clone(),
                support: Support::Fact,
                children: Vec::new(),
                test_leaves: Vec::new(),
            });
        }
        let rank = meta.rank();
        let chosen = self
            .by_head
            .get(atom)
            .into_iter()
            .flatten()
            .find(|e| {
                e.positive_body
                    .iter()
                    .all(|b| self.answer_set.meta(b).is_some_and(|m| m.rank() < rank))
            })
            .ok_or_else(|| ExplainError::NoWellFoundedSupport(atom.to_string()))?;
        let children = chosen
            .positive_body
            .iter()
            .map(|b| self.build(b, depth + 1))
            .collect::<Result<_, _>>()?;
        Ok(JustificationTree {
            root: atom.clone(),
            support: Support::RuleInstance {
                rule_id: chosen.rule_id,
                theta: chosen.theta.clone(),
            },
            children,
            test_leaves: chosen.test_body.clone(),
        })
    }
}
