//! Shared test helpers: a random generator of safe stratified programs and
//! a naive evaluator written independently of the engine.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use xasp::engine::{AnswerSet, GroundAtom};
use xasp::explain::{Explanation, JustificationTree, Support};
use xasp::syntax::{CompareOp, Literal, Program, Term};

pub const CORPUS: &[(&str, &str)] = &[
    (
        "lp_didactic.lp",
        include_str!("../../corpus/lp_didactic.lp"),
    ),
    (
        "anomaly_rules.lp",
        include_str!("../../corpus/anomaly_rules.lp"),
    ),
    (
        "stress_reachability.lp",
        include_str!("../../corpus/stress_reachability.lp"),
    ),
    (
        "stress_supports.lp",
        include_str!("../../corpus/stress_supports.lp"),
    ),
];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

struct Pred {
    name: String,
    arity: usize,
    level: usize,
}

const VARS: [&str; 3] = ["X", "Y", "Z"];
const POOL: [&str; 7] = ["0", "1", "2", "3", "a", "b", "c"];

/// Source text of a random safe stratified program with at most 5
/// predicates, 4 constants and 10 statements. Negation and counts only
/// look at predicates of a strictly lower level, so the program is
/// stratified by construction.
pub fn random_program(rng: &mut impl Rng) -> String {
    let n_preds = rng.random_range(2..=5);
    let mut preds: Vec<Pred> = (0..n_preds)
        .map(|i| Pred {
            name: format!("p{i}"),
            arity: rng.random_range(0..=2),
            level: if i == 0 { 0 } else { rng.random_range(0..=2) },
        })
        .collect();
    if preds.iter().all(|p| p.level == 0) {
        preds[n_preds - 1].level = 1;
    }
    let n_consts = rng.random_range(1..=4);
    let consts: Vec<&str> = POOL.choose_multiple(rng, n_consts).copied().collect();
    let use_k = rng.random_bool(0.2);

    let mut out = String::new();
    if use_k {
        out.push_str(&format!("#const k={}.\n", rng.random_range(0..=2)));
    }

    let n_facts = rng.random_range(2..=5);
    let base: Vec<&Pred> = preds.iter().filter(|p| p.level == 0).collect();
    for _ in 0..n_facts {
        let p = if rng.random_bool(0.8) {
            *base.choose(rng).unwrap()
        } else {
            preds.choose(rng).unwrap()
        };
        let ints: Vec<&str> = consts
            .iter()
            .copied()
            .filter(|c| c.parse::<i64>().is_ok())
            .collect();
        if p.arity == 1 && ints.len() >= 2 && rng.random_bool(0.2) {
            let mut v: Vec<i64> = ints.iter().map(|c| c.parse().unwrap()).collect();
            v.sort();
            out.push_str(&format!("{}({}..{}).\n", p.name, v[0], v[v.len() - 1]));
            continue;
        }
        let args: Vec<&str> = (0..p.arity).map(|_| *consts.choose(rng).unwrap()).collect();
        out.push_str(&format!("{}.\n", atom_text(&p.name, &args)));
    }

    let n_rules = rng.random_range(1..=10 - n_facts);
    for _ in 0..n_rules {
        let heads: Vec<&Pred> = preds.iter().filter(|p| p.level > 0).collect();
        let head = *heads.choose(rng).unwrap();
        let mut body = Vec::new();
        let mut bound: Vec<&str> = Vec::new();

        let n_pos = rng.random_range(1..=2);
        for _ in 0..n_pos {
            let below: Vec<&Pred> = preds.iter().filter(|p| p.level < head.level).collect();
            let upto: Vec<&Pred> = preds.iter().filter(|p| p.level <= head.level).collect();
            let candidates = if below.is_empty() || rng.random_bool(0.3) {
                upto
            } else {
                below
            };
            let p = candidates.choose(rng).unwrap();
            let args: Vec<&str> = (0..p.arity)
                .map(|_| {
                    if rng.random_bool(0.85) {
                        *VARS.choose(rng).unwrap()
                    } else {
                        *consts.choose(rng).unwrap()
                    }
                })
                .collect();
            for a in &args {
                if a.starts_with(char::is_uppercase) && !bound.contains(a) {
                    bound.push(a);
                }
            }
            body.push(atom_text(&p.name, &args));
        }

        let pick = |rng: &mut dyn rand::RngCore, bound: &[&'static str]| -> &'static str {
            if !bound.is_empty() && rng.random_bool(0.7) {
                bound.choose(rng).unwrap()
            } else {
                consts.choose(rng).unwrap()
            }
        };

        let lower: Vec<&Pred> = preds.iter().filter(|p| p.level < head.level).collect();
        for local_name in ["W", "V"].into_iter().take(rng.random_range(0..=2)) {
            match rng.random_range(0..3) {
                0 if !lower.is_empty() => {
                    let p = lower.choose(rng).unwrap();
                    let args: Vec<&str> = (0..p.arity).map(|_| pick(rng, &bound)).collect();
                    body.push(format!("not {}", atom_text(&p.name, &args)));
                }
                1 => {
                    let op = ["=", "!=", "<", "<=", ">", ">="].choose(rng).unwrap();
                    body.push(format!("{}{op}{}", pick(rng, &bound), pick(rng, &bound)));
                }
                _ => {
                    let with_args: Vec<&&Pred> = lower.iter().filter(|p| p.arity > 0).collect();
                    let Some(p) = with_args.choose(rng) else {
                        continue;
                    };
                    let local = rng.random_range(0..p.arity);
                    let args: Vec<&str> = (0..p.arity)
                        .map(|i| {
                            if i == local {
                                local_name
                            } else {
                                pick(rng, &bound)
                            }
                        })
                        .collect();
                    let b = if use_k && rng.random_bool(0.5) {
                        "k".to_string()
                    } else {
                        rng.random_range(0..=2).to_string()
                    };
                    body.push(format!(
                        "{b}=#count{{{local_name}:{}}}",
                        atom_text(&p.name, &args)
                    ));
                }
            }
        }

        let head_args: Vec<&str> = (0..head.arity).map(|_| pick(rng, &bound)).collect();
        out.push_str(&format!(
            "{} :- {}.\n",
            atom_text(&head.name, &head_args),
            body.join(", ")
        ));
    }

    if rng.random_bool(0.3) {
        let p = preds.choose(rng).unwrap();
        out.push_str(&format!("#show {}/{}.\n", p.name, p.arity));
    }
    out
}

fn atom_text(name: &str, args: &[&str]) -> String {
    if args.is_empty() {
        name.to_owned()
    } else {
        format!("{name}({})", args.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum V {
    I(i64),
    S(String),
}

impl std::fmt::Display for V {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            V::I(i) => write!(f, "{i}"),
            V::S(s) => f.write_str(s),
        }
    }
}

type Fact = (String, Vec<V>);

fn show(fact: &Fact) -> String {
    if fact.1.is_empty() {
        fact.0.clone()
    } else {
        let args: Vec<String> = fact.1.iter().map(ToString::to_string).collect();
        format!("{}({})", fact.0, args.join(","))
    }
}

fn collect_values(term: &Term, out: &mut BTreeSet<V>) {
    match term {
        Term::Integer(i) => {
            out.insert(V::I(*i));
        }
        Term::Symbol(s) => {
            out.insert(V::S(s.clone()));
        }
        Term::Interval(lo, hi) => out.extend((*lo..=*hi).map(V::I)),
        Term::Variable(_) => {}
    }
}

fn value(term: &Term, env: &BTreeMap<&str, V>, consts: &BTreeMap<String, i64>) -> V {
    match term {
        Term::Integer(i) => V::I(*i),
        Term::Symbol(s) => V::S(s.clone()),
        Term::Variable(x) => env[x.as_str()].clone(),
        Term::Interval(..) => unreachable!("intervals are expanded first"),
    }
    .resolve(consts)
}

impl V {
    fn resolve(self, consts: &BTreeMap<String, i64>) -> V {
        match &self {
            V::S(s) => consts.get(s).map_or(self.clone(), |i| V::I(*i)),
            V::I(_) => self,
        }
    }
}

fn ground(atom: &xasp::syntax::Atom, env: &BTreeMap<&str, V>) -> Fact {
    let none = BTreeMap::new();
    (
        atom.predicate.clone(),
        atom.args.iter().map(|t| value(t, env, &none)).collect(),
    )
}

fn holds(
    lit: &Literal,
    env: &BTreeMap<&str, V>,
    interp: &BTreeSet<Fact>,
    universe: &[V],
    consts: &BTreeMap<String, i64>,
) -> bool {
    match lit {
        Literal::Positive(a) => interp.contains(&ground(a, env)),
        Literal::Negated(a) => !interp.contains(&ground(a, env)),
        Literal::Comparison { left, op, right } => {
            let (l, r) = (value(left, env, consts), value(right, env, consts));
            match op {
                CompareOp::Eq => l == r,
                CompareOp::Ne => l != r,
                _ => match (l, r) {
                    (V::I(a), V::I(b)) => match op {
                        CompareOp::Lt => a < b,
                        CompareOp::Le => a <= b,
                        CompareOp::Gt => a > b,
                        _ => a >= b,
                    },
                    _ => false,
                },
            }
        }
        Literal::CountEquality {
            bound,
            local_vars,
            condition,
        } => {
            let V::I(bound) = value(bound, env, consts) else {
                return false;
            };
            let mut n = 0;
            for tuple in assignments(local_vars.len(), universe) {
                let mut inner = env.clone();
                for (x, v) in local_vars.iter().zip(tuple) {
                    inner.insert(x.as_str(), v);
                }
                if interp.contains(&ground(condition, &inner)) {
                    n += 1;
                }
            }
            n == bound
        }
    }
}

fn assignments(k: usize, universe: &[V]) -> Vec<Vec<V>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                universe.iter().map(move |v| {
                    let mut p = prefix.clone();
                    p.push(v.clone());
                    p
                })
            })
            .collect();
    }
    out
}

fn rule_vars(rule: &xasp::syntax::Rule) -> Vec<&str> {
    let mut vars: BTreeSet<&str> = rule.head.variables().collect();
    for lit in &rule.body {
        match lit {
            Literal::Positive(a) | Literal::Negated(a) => vars.extend(a.variables()),
            Literal::Comparison { left, right, .. } => {
                vars.extend(left.as_variable());
                vars.extend(right.as_variable());
            }
            Literal::CountEquality {
                bound,
                local_vars,
                condition,
            } => {
                vars.extend(bound.as_variable());
                vars.extend(
                    condition
                        .variables()
                        .filter(|v| !local_vars.iter().any(|l| l == v)),
                );
            }
        }
    }
    vars.into_iter().collect()
}

/// Predicate levels: positive dependencies at most, test dependencies
/// strictly below. `None` when no such assignment exists.
fn levels(program: &Program) -> Option<BTreeMap<(String, usize), usize>> {
    let mut level: BTreeMap<(String, usize), usize> = BTreeMap::new();
    for rule in &program.statements {
        level.insert((rule.head.predicate.clone(), rule.head.args.len()), 0);
        for lit in &rule.body {
            if let Literal::Positive(a)
            | Literal::Negated(a)
            | Literal::CountEquality { condition: a, .. } = lit
            {
                level.insert((a.predicate.clone(), a.args.len()), 0);
            }
        }
    }
    let limit = level.len();
    loop {
        let mut changed = false;
        for rule in &program.statements {
            let h = (rule.head.predicate.clone(), rule.head.args.len());
            for lit in &rule.body {
                let (a, strict) = match lit {
                    Literal::Positive(a) => (a, 0),
                    Literal::Negated(a) | Literal::CountEquality { condition: a, .. } => (a, 1),
                    Literal::Comparison { .. } => continue,
                };
                let need = level[&(a.predicate.clone(), a.args.len())] + strict;
                if level[&h] < need {
                    if need > limit {
                        return None;
                    }
                    level.insert(h.clone(), need);
                    changed = true;
                }
            }
        }
        if !changed {
            return Some(level);
        }
    }
}

/// Evaluates stratum by stratum, re-deriving everything from every ground
/// instance over the program's constants until nothing changes. Returns the
/// answer set as atom strings, or `None` if the program is not stratified.
pub fn naive_model(program: &Program) -> Option<BTreeSet<String>> {
    let level = levels(program)?;
    let mut universe = BTreeSet::new();
    for rule in &program.statements {
        for a in std::iter::once(&rule.head).chain(rule.body.iter().filter_map(|l| l.dependency()))
        {
            for t in &a.args {
                collect_values(t, &mut universe);
            }
        }
    }
    let universe: Vec<V> = universe.into_iter().collect();

    let mut interp: BTreeSet<Fact> = BTreeSet::new();
    let top = level.values().copied().max().unwrap_or(0);
    for s in 0..=top {
        let rules: Vec<_> = program
            .statements
            .iter()
            .filter(|r| level[&(r.head.predicate.clone(), r.head.args.len())] == s)
            .collect();
        loop {
            let mut next = interp.clone();
            for rule in &rules {
                if rule.head.has_interval() {
                    let mut heads = vec![Vec::new()];
                    for t in &rule.head.args {
                        let mut vals = BTreeSet::new();
                        collect_values(t, &mut vals);
                        heads = heads
                            .into_iter()
                            .flat_map(|h: Vec<V>| {
                                vals.iter().map(move |v| {
                                    let mut h = h.clone();
                                    h.push(v.clone());
                                    h
                                })
                            })
                            .collect();
                    }
                    next.extend(
                        heads
                            .into_iter()
                            .map(|args| (rule.head.predicate.clone(), args)),
                    );
                    continue;
                }
                let vars = rule_vars(rule);
                for tuple in assignments(vars.len(), &universe) {
                    let env: BTreeMap<&str, V> = vars.iter().copied().zip(tuple).collect();
                    if rule
                        .body
                        .iter()
                        .all(|l| holds(l, &env, &interp, &universe, &program.consts))
                    {
                        next.insert(ground(&rule.head, &env));
                    }
                }
            }
            if next == interp {
                break;
            }
            interp = next;
        }
    }
    Some(interp.iter().map(show).collect())
}

/// True iff every ground instance of every rule whose body holds in `model`
/// has its head in `model`.
pub fn is_model(program: &Program, model: &BTreeSet<String>) -> bool {
    let mut universe = BTreeSet::new();
    let mut interp = BTreeSet::new();
    for text in model {
        let atom = xasp::engine::GroundAtom::parse(text).unwrap();
        let args: Vec<V> = atom
            .args
            .iter()
            .map(|v| match v {
                xasp::engine::Value::Int(i) => V::I(*i),
                xasp::engine::Value::Sym(s) => V::S(s.clone()),
            })
            .collect();
        universe.extend(args.iter().cloned());
        interp.insert((atom.predicate.clone(), args));
    }
    for rule in &program.statements {
        for a in std::iter::once(&rule.head).chain(rule.body.iter().filter_map(|l| l.dependency()))
        {
            for t in &a.args {
                collect_values(t, &mut universe);
            }
        }
    }
    let universe: Vec<V> = universe.into_iter().collect();
    let expanded = xasp::engine::expand_intervals(program);
    expanded.statements.iter().all(|rule| {
        let vars = rule_vars(rule);
        assignments(vars.len(), &universe).into_iter().all(|tuple| {
            let env: BTreeMap<&str, V> = vars.iter().copied().zip(tuple).collect();
            !rule
                .body
                .iter()
                .all(|l| holds(l, &env, &interp, &universe, &program.consts))
                || interp.contains(&ground(&rule.head, &env))
        })
    })
}

pub fn atom_strings<'a>(
    atoms: impl IntoIterator<Item = &'a xasp::engine::GroundAtom>,
) -> BTreeSet<String> {
    atoms.into_iter().map(ToString::to_string).collect()
}

/// Fact nodes are leaves; a rule node's children are exactly its support's
/// positive body, each ranked strictly lower, and its test leaves are the
/// support's test literals.
pub fn tree_ok(tree: &JustificationTree, explanations: &[Explanation], answer: &AnswerSet) -> bool {
    match &tree.support {
        Support::Fact => {
            tree.children.is_empty()
                && tree.test_leaves.is_empty()
                && answer.meta(&tree.root).is_some_and(|m| m.is_fact)
        }
        Support::RuleInstance { rule_id, theta } => {
            let Some(e) = explanations
                .iter()
                .find(|e| e.head == tree.root && e.rule_id == *rule_id && &e.theta == theta)
            else {
                return false;
            };
            let rank = answer.meta(&tree.root).unwrap().rank();
            let roots: Vec<&GroundAtom> = tree.children.iter().map(|c| &c.root).collect();
            roots == e.positive_body.iter().collect::<Vec<_>>()
                && tree.test_leaves == e.test_body
                && tree
                    .children
                    .iter()
                    .all(|c| answer.meta(&c.root).unwrap().rank() < rank)
                && tree
                    .children
                    .iter()
                    .all(|c| tree_ok(c, explanations, answer))
        }
    }
}
