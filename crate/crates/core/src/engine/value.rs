use std::fmt;

use crate::syntax::{parse_ground_atom, Atom, Literal, Predicate, SyntaxError, Term};

/// A ground term. Integers order before symbols.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Int(i64),
    Sym(String),
}

impl Value {
    pub fn from_term(term: &Term) -> Option<Value> {
        match term {
            Term::Integer(i) => Some(Value::Int(*i)),
            Term::Symbol(s) => Some(Value::Sym(s.clone())),
            Term::Variable(_) | Term::Interval(..) => None,
        }
    }

    pub fn to_term(&self) -> Term {
        match self {
            Value::Int(i) => Term::Integer(*i),
            Value::Sym(s) => Term::Symbol(s.clone()),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(i) => write!(f, "{i}"),
            Value::Sym(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundAtom {
    pub predicate: String,
    pub args: Vec<Value>,
}

impl GroundAtom {
    pub fn new(predicate: impl Into<String>, args: Vec<Value>) -> Self {
        Self {
            predicate: predicate.into(),
            args,
        }
    }

    pub fn from_atom(atom: &Atom) -> Option<Self> {
        let args = atom
            .args
            .iter()
            .map(Value::from_term)
            .collect::<Option<_>>()?;
        Some(Self::new(atom.predicate.clone(), args))
    }

    pub fn parse(text: &str) -> Result<Self, SyntaxError> {
        let atom = parse_ground_atom(text)?;
        Ok(Self::from_atom(&atom).expect("parse_ground_atom returns ground atoms"))
    }

    pub fn to_atom(&self) -> Atom {
        Atom::new(
            self.predicate.clone(),
            self.args.iter().map(Value::to_term).collect(),
        )
    }

    pub fn signature(&self) -> Predicate {
        Predicate::new(self.predicate.clone(), self.args.len())
    }

    pub fn has_signature(&self, pred: &Predicate) -> bool {
        self.predicate == pred.name && self.args.len() == pred.arity
    }
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, v) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{v}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Variable bindings in insertion order.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Substitution {
    bindings: Vec<(String, Value)>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, var: &str) -> Option<&Value> {
        self.bindings
            .iter()
            .find_map(|(v, val)| (v == var).then_some(val))
    }

    /// Adds a binding; a variable that is already bound keeps its value.
    pub fn bind(&mut self, var: impl Into<String>, value: Value) {
        let var = var.into();
        if self.get(&var).is_none() {
            self.bindings.push((var, value));
        }
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Value)> {
        self.bindings.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// The bound values in binding order.
    pub fn values(&self) -> impl Iterator<Item = &Value> {
        self.bindings.iter().map(|(_, v)| v)
    }

    pub(crate) fn truncate(&mut self, len: usize) {
        self.bindings.truncate(len);
    }

    pub(crate) fn push_unchecked(&mut self, var: &str, value: Value) {
        self.bindings.push((var.to_owned(), value));
    }

    pub fn apply_term(&self, term: &Term) -> Term {
        match term {
            Term::Variable(v) => self.get(v).map_or_else(|| term.clone(), Value::to_term),
            other => other.clone(),
        }
    }

    pub fn apply_atom(&self, atom: &Atom) -> Atom {
        Atom::new(
            atom.predicate.clone(),
            atom.args.iter().map(|t| self.apply_term(t)).collect(),
        )
    }

    pub fn ground_atom(&self, atom: &Atom) -> Option<GroundAtom> {
        GroundAtom::from_atom(&self.apply_atom(atom))
    }

    pub fn ground_term(&self, term: &Term) -> Option<Value> {
        Value::from_term(&self.apply_term(term))
    }

    /// Applies the bindings to a literal. Count-local variables are never
    /// substituted.
    pub fn apply_literal(&self, literal: &Literal) -> Literal {
        match literal {
            Literal::Positive(a) => Literal::Positive(self.apply_atom(a)),
            Literal::Negated(a) => Literal::Negated(self.apply_atom(a)),
            Literal::Comparison { left, op, right } => Literal::Comparison {
                left: self.apply_term(left),
                op: *op,
                right: self.apply_term(right),
            },
            Literal::CountEquality {
                bound,
                local_vars,
                condition,
            } => {
                let args = condition
                    .args
                    .iter()
                    .map(|t| match t {
                        Term::Variable(v) if local_vars.contains(v) => t.clone(),
                        _ => self.apply_term(t),
                    })
                    .collect();
                Literal::CountEquality {
                    bound: self.apply_term(bound),
                    local_vars: local_vars.clone(),
                    condition: Atom::new(condition.predicate.clone(), args),
                }
            }
        }
    }
}

impl FromIterator<(String, Value)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (String, Value)>>(iter: I) -> Self {
        let mut s = Substitution::new();
        for (k, v) in iter {
            s.bind(k, v);
        }
        s
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, v)) in self.bindings.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}\u{21a6}{v}")?;
        }
        f.write_str("}")
    }
}
