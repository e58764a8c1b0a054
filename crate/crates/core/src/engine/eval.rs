use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use super::{
    AnswerSet, AtomMeta, EngineError, GroundAtom, Strategy, StratificationResult, Substitution,
    Value,
};
use crate::syntax::{Atom, CompareOp, Literal, Predicate, Program, Rule, Term};

/// Read access to a set of ground atoms, indexed by predicate.
pub trait AtomLookup {
    fn contains_atom(&self, atom: &GroundAtom) -> bool;
    fn atoms_of<'a>(&'a self, pred: &Predicate) -> Box<dyn Iterator<Item = &'a GroundAtom> + 'a>;
}

#[derive(Default)]
struct Store {
    by_pred: HashMap<Predicate, Vec<GroundAtom>>,
    meta: HashMap<GroundAtom, AtomMeta>,
}

impl Store {
    fn insert(&mut self, atom: GroundAtom, meta: AtomMeta) {
        if self.meta.contains_key(&atom) {
            return;
        }
        self.by_pred
            .entry(atom.signature())
            .or_default()
            .push(atom.clone());
        self.meta.insert(atom, meta);
    }

    fn slice(&self, pred: &Predicate) -> &[GroundAtom] {
        self.by_pred.get(pred).map_or(&[], Vec::as_slice)
    }
}

impl AtomLookup for Store {
    fn contains_atom(&self, atom: &GroundAtom) -> bool {
        self.meta.contains_key(atom)
    }

    fn atoms_of<'a>(&'a self, pred: &Predicate) -> Box<dyn Iterator<Item = &'a GroundAtom> + 'a> {
        Box::new(self.slice(pred).iter())
    }
}

struct Plan<'a> {
    rule: &'a Rule,
    positive: Vec<(&'a Atom, Predicate)>,
    tests: Vec<&'a Literal>,
}

impl<'a> Plan<'a> {
    fn new(rule: &'a Rule) -> Self {
        Self {
            rule,
            positive: rule.positive_body().map(|a| (a, a.signature())).collect(),
            tests: rule.test_body().collect(),
        }
    }
}

/// Atoms derived in one round, in derivation order.
#[derive(Default)]
struct Derived {
    order: Vec<GroundAtom>,
    seen: HashSet<GroundAtom>,
}

impl Derived {
    fn push(&mut self, atom: GroundAtom) {
        if self.seen.insert(atom.clone()) {
            self.order.push(atom);
        }
    }
}

pub(super) fn run(
    program: &Program,
    strata: &StratificationResult,
    strategy: Strategy,
) -> AnswerSet {
    let mut store = Store::default();
    let stratum_of = |p: &Predicate| strata.stratum(p).unwrap_or(0);

    for fact in program.facts() {
        let atom = GroundAtom::from_atom(&fact.head).expect("prepared facts are ground");
        let stratum = stratum_of(&atom.signature());
        store.insert(
            atom,
            AtomMeta {
                stratum,
                round: 0,
                is_fact: true,
            },
        );
    }

    let mut by_stratum: Vec<Vec<Plan>> = (0..strata.len()).map(|_| Vec::new()).collect();
    for rule in program.rules() {
        by_stratum[stratum_of(&rule.head.signature())].push(Plan::new(rule));
    }

    for (stratum, plans) in by_stratum.iter().enumerate() {
        if plans.is_empty() {
            continue;
        }
        let empty = HashMap::new();
        let mut fresh = Derived::default();
        for plan in plans {
            fire(plan, &store, None, &empty, &mut fresh);
        }

        let mut round = 1;
        while !fresh.order.is_empty() {
            let mut delta: HashMap<Predicate, Vec<GroundAtom>> = HashMap::new();
            for atom in fresh.order {
                delta
                    .entry(atom.signature())
                    .or_default()
                    .push(atom.clone());
                store.insert(
                    atom,
                    AtomMeta {
                        stratum,
                        round,
                        is_fact: false,
                    },
                );
            }
            round += 1;
            fresh = Derived::default();
            for plan in plans {
                match strategy {
                    Strategy::Naive => fire(plan, &store, None, &empty, &mut fresh),
                    Strategy::SemiNaive => {
                        for (i, (_, sig)) in plan.positive.iter().enumerate() {
                            if delta.contains_key(sig) {
                                fire(plan, &store, Some(i), &delta, &mut fresh);
                            }
                        }
                    }
                }
            }
        }
    }

    AnswerSet::from_meta(store.meta.into_iter().collect::<BTreeMap<_, _>>())
}

/// Derives every new head of `plan` against `store`. With `delta_at`, the
/// positive atom at that position only ranges over `delta`.
fn fire(
    plan: &Plan,
    store: &Store,
    delta_at: Option<usize>,
    delta: &HashMap<Predicate, Vec<GroundAtom>>,
    out: &mut Derived,
) {
    let mut theta = Substitution::new();
    join(plan, store, 0, delta_at, delta, &mut theta, &mut |theta| {
        let holds = plan
            .tests
            .iter()
            .all(|lit| literal_holds(lit, theta, store) == Some(true));
        if !holds {
            return;
        }
        let head = theta
            .ground_atom(&plan.rule.head)
            .expect("safe rules ground their heads");
        if !store.contains_atom(&head) {
            out.push(head);
        }
    });
}

fn join(
    plan: &Plan,
    store: &Store,
    i: usize,
    delta_at: Option<usize>,
    delta: &HashMap<Predicate, Vec<GroundAtom>>,
    theta: &mut Substitution,
    emit: &mut dyn FnMut(&Substitution),
) {
    let Some((atom, sig)) = plan.positive.get(i) else {
        emit(theta);
        return;
    };
    let candidates: &[GroundAtom] = if delta_at == Some(i) {
        delta.get(sig).map_or(&[], Vec::as_slice)
    } else {
        store.slice(sig)
    };
    for cand in candidates {
        let mark = theta.len();
        if unify(atom, cand, theta) {
            join(plan, store, i + 1, delta_at, delta, theta, emit);
        }
        theta.truncate(mark);
    }
}

/// Extends `theta` so that `pattern` maps onto `ground`. On failure the
/// caller truncates `theta` back.
fn unify(pattern: &Atom, ground: &GroundAtom, theta: &mut Substitution) -> bool {
    for (t, v) in pattern.args.iter().zip(&ground.args) {
        match t {
            Term::Variable(x) => match theta.get(x) {
                Some(bound) if bound != v => return false,
                Some(_) => {}
                None => theta.push_unchecked(x, v.clone()),
            },
            Term::Symbol(s) => {
                if !matches!(v, Value::Sym(w) if w == s) {
                    return false;
                }
            }
            Term::Integer(i) => {
                if *v != Value::Int(*i) {
                    return false;
                }
            }
            Term::Interval(..) => return false,
        }
    }
    true
}

fn compare(left: &Value, op: CompareOp, right: &Value) -> bool {
    match op {
        CompareOp::Eq => left == right,
        CompareOp::Ne => left != right,
        _ => match (left, right) {
            (Value::Int(l), Value::Int(r)) => match op {
                CompareOp::Lt => l < r,
                CompareOp::Le => l <= r,
                CompareOp::Gt => l > r,
                CompareOp::Ge => l >= r,
                CompareOp::Eq | CompareOp::Ne => unreachable!(),
            },
            _ => false,
        },
    }
}

/// `None` when the literal is not ground under `theta`.
fn literal_holds(lit: &Literal, theta: &Substitution, db: &dyn AtomLookup) -> Option<bool> {
    Some(match lit {
        Literal::Positive(a) => db.contains_atom(&theta.ground_atom(a)?),
        Literal::Negated(a) => !db.contains_atom(&theta.ground_atom(a)?),
        Literal::Comparison { left, op, right } => {
            compare(&theta.ground_term(left)?, *op, &theta.ground_term(right)?)
        }
        Literal::CountEquality {
            bound,
            local_vars,
            condition,
        } => match theta.ground_term(bound)? {
            Value::Int(b) => eval_count(
                b,
                local_vars,
                condition,
                theta,
                db.atoms_of(&condition.signature()),
            ),
            Value::Sym(_) => false,
        },
    })
}

pub(super) fn ground_literal_holds(
    lit: &Literal,
    db: &dyn AtomLookup,
) -> Result<bool, EngineError> {
    if let Literal::CountEquality {
        bound: Term::Symbol(name),
        ..
    } = lit
    {
        return Err(EngineError::UnknownConst {
            name: name.clone(),
            source_index: 0,
        });
    }
    literal_holds(lit, &Substitution::new(), db)
        .ok_or_else(|| EngineError::NotGround(lit.to_string()))
}

/// True iff the number of distinct `local_vars` tuples for which the
/// condition, instantiated by `outer`, matches one of `atoms` equals `bound`.
pub fn eval_count<'a>(
    bound: i64,
    local_vars: &[String],
    condition: &Atom,
    outer: &Substitution,
    atoms: impl IntoIterator<Item = &'a GroundAtom>,
) -> bool {
    let mut tuples: BTreeSet<Vec<Option<Value>>> = BTreeSet::new();
    'atoms: for atom in atoms {
        if atom.predicate != condition.predicate || atom.args.len() != condition.args.len() {
            continue;
        }
        let mut local = Substitution::new();
        for (t, v) in condition.args.iter().zip(&atom.args) {
            match t {
                Term::Variable(x) if local_vars.contains(x) => match local.get(x) {
                    Some(b) if b != v => continue 'atoms,
                    Some(_) => {}
                    None => local.push_unchecked(x, v.clone()),
                },
                Term::Variable(x) => {
                    if outer.get(x) != Some(v) {
                        continue 'atoms;
                    }
                }
                Term::Symbol(_) | Term::Integer(_) => {
                    if Value::from_term(t).as_ref() != Some(v) {
                        continue 'atoms;
                    }
                }
                Term::Interval(..) => continue 'atoms,
            }
        }
        tuples.insert(local_vars.iter().map(|x| local.get(x).cloned()).collect());
    }
    i64::try_from(tuples.len()).is_ok_and(|n| n == bound)
}
