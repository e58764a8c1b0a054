//! JSON output. Field order is fixed by the structs below; maps keep
//! insertion order.

use serde::ser::{Serialize, SerializeMap, Serializer};
use serde::Serialize as DeriveSerialize;

use crate::engine::{AnswerSet, GroundAtom, Substitution};
use crate::explain::{Explanation, JustificationTree, Support};

struct Ordered<V>(Vec<(String, V)>);

impl<V: Serialize> Serialize for Ordered<V> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

fn theta(theta: &Substitution) -> Ordered<String> {
    Ordered(
        theta
            .iter()
            .map(|(k, v)| (k.to_owned(), v.to_string()))
            .collect(),
    )
}

#[derive(DeriveSerialize)]
struct AtomJson<'a> {
    pred: &'a str,
    args: Vec<String>,
}

#[derive(DeriveSerialize)]
struct MetaJson {
    stratum: usize,
    round: usize,
    fact: bool,
}

#[derive(DeriveSerialize)]
struct AnswerSetJson<'a> {
    atoms: Vec<AtomJson<'a>>,
    meta: Ordered<MetaJson>,
}

/// `{"atoms":[{"pred":..,"args":[..]}],"meta":{"atom":{..}}}` for the
/// given atoms, in the order given; atoms missing from `answer_set` are
/// listed without metadata.
pub fn answer_set_to_json<'a>(
    atoms: impl IntoIterator<Item = &'a GroundAtom>,
    answer_set: &AnswerSet,
) -> String {
    let mut out = AnswerSetJson {
        atoms: Vec::new(),
        meta: Ordered(Vec::new()),
    };
    for atom in atoms {
        out.atoms.push(AtomJson {
            pred: &atom.predicate,
            args: atom.args.iter().map(ToString::to_string).collect(),
        });
        if let Some(m) = answer_set.meta(atom) {
            out.meta.0.push((
                atom.to_string(),
                MetaJson {
                    stratum: m.stratum,
                    round: m.round,
                    fact: m.is_fact,
                },
            ));
        }
    }
    serde_json::to_string(&out).expect("serializable")
}

#[derive(DeriveSerialize)]
struct ExplanationJson {
    head: String,
    rule: u32,
    theta: Ordered<String>,
    pos: Vec<String>,
    test: Vec<String>,
}

impl From<&Explanation> for ExplanationJson {
    fn from(e: &Explanation) -> Self {
        Self {
            head: e.head.to_string(),
            rule: e.rule_id,
            theta: theta(&e.theta),
            pos: e.positive_body.iter().map(ToString::to_string).collect(),
            test: e.test_body.iter().map(ToString::to_string).collect(),
        }
    }
}

pub fn explanation_to_json(explanation: &Explanation) -> String {
    serde_json::to_string(&ExplanationJson::from(explanation)).expect("serializable")
}

pub fn explanations_to_json(explanations: &[Explanation]) -> String {
    let list: Vec<ExplanationJson> = explanations.iter().map(Into::into).collect();
    serde_json::to_string(&list).expect("serializable")
}

#[derive(DeriveSerialize)]
#[serde(untagged)]
enum SupportJson {
    Fact(&'static str),
    Rule { rule: u32, theta: Ordered<String> },
}

#[derive(DeriveSerialize)]
struct TreeJson {
    atom: String,
    support: SupportJson,
    children: Vec<TreeJson>,
    tests: Vec<String>,
}

impl TreeJson {
    fn new(tree: &JustificationTree, show_tests: bool) -> Self {
        Self {
            atom: tree.root.to_string(),
            support: match &tree.support {
                Support::Fact => SupportJson::Fact("fact"),
                Support::RuleInstance { rule_id, theta: t } => SupportJson::Rule {
                    rule: *rule_id,
                    theta: theta(t),
                },
            },
            children: tree
                .children
                .iter()
                .map(|c| Self::new(c, show_tests))
                .collect(),
            tests: if show_tests {
                tree.test_leaves.iter().map(ToString::to_string).collect()
            } else {
                Vec::new()
            },
        }
    }
}

pub fn tree_to_json(tree: &JustificationTree, show_test_leaves: bool) -> String {
    serde_json::to_string(&TreeJson::new(tree, show_test_leaves)).expect("serializable")
}
