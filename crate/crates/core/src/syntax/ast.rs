//! Abstract syntax of the accepted program subset.

use std::collections::BTreeMap;
use std::fmt;

/// Predicate identity: name plus arity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Predicate {
    pub name: String,
    pub arity: usize,
}

impl Predicate {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        Self {
            name: name.into(),
            arity,
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

impl std::str::FromStr for Predicate {
    type Err = String;

    /// Parses `name/arity`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (name, arity) = s
            .rsplit_once('/')
            .ok_or_else(|| format!("`{s}` is not of the form name/arity"))?;
        let mut chars = name.chars();
        let valid = chars.next().is_some_and(|c| c.is_ascii_lowercase())
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !valid {
            return Err(format!("`{name}` is not a predicate name"));
        }
        let arity = arity
            .parse()
            .map_err(|_| format!("`{arity}` is not a valid arity"))?;
        Ok(Predicate::new(name, arity))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    /// Identifier starting with an uppercase letter.
    Variable(String),
    /// Identifier starting with a lowercase letter.
    Symbol(String),
    Integer(i64),
    /// `lo..hi`, only legal as an argument of a fact head.
    Interval(i64, i64),
}

impl Term {
    pub fn is_variable(&self) -> bool {
        matches!(self, Term::Variable(_))
    }

    pub fn as_variable(&self) -> Option<&str> {
        match self {
            Term::Variable(v) => Some(v),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Self {
            predicate: predicate.into(),
            args,
        }
    }

    pub fn signature(&self) -> Predicate {
        Predicate::new(self.predicate.clone(), self.args.len())
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.args.iter().filter_map(Term::as_variable)
    }

    pub fn has_interval(&self) -> bool {
        self.args.iter().any(|t| matches!(t, Term::Interval(..)))
    }

    pub fn is_ground(&self) -> bool {
        self.args
            .iter()
            .all(|t| matches!(t, Term::Symbol(_) | Term::Integer(_)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CompareOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CompareOp {
    pub fn as_str(self) -> &'static str {
        match self {
            CompareOp::Eq => "=",
            CompareOp::Ne => "!=",
            CompareOp::Lt => "<",
            CompareOp::Le => "<=",
            CompareOp::Gt => ">",
            CompareOp::Ge => ">=",
        }
    }
}

impl fmt::Display for CompareOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A body literal. Everything except `Positive` is a test literal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Literal {
    Positive(Atom),
    /// Default negation, `not a(X)`.
    Negated(Atom),
    Comparison {
        left: Term,
        op: CompareOp,
        right: Term,
    },
    /// `bound = #count{V1,...,Vk : condition}`.
    CountEquality {
        bound: Term,
        local_vars: Vec<String>,
        condition: Atom,
    },
}

impl Literal {
    pub fn is_test(&self) -> bool {
        !matches!(self, Literal::Positive(_))
    }

    /// The atom whose predicate this literal depends on, if any.
    pub fn dependency(&self) -> Option<&Atom> {
        match self {
            Literal::Positive(a) | Literal::Negated(a) => Some(a),
            Literal::CountEquality { condition, .. } => Some(condition),
            Literal::Comparison { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub head: Atom,
    pub body: Vec<Literal>,
    /// Zero-based ordinal of the rule among the program's rule statements.
    pub source_index: usize,
    pub rule_id: Option<u32>,
}

impl Rule {
    pub fn is_fact(&self) -> bool {
        self.body.is_empty()
    }

    pub fn positive_body(&self) -> impl Iterator<Item = &Atom> {
        self.body.iter().filter_map(|l| match l {
            Literal::Positive(a) => Some(a),
            _ => None,
        })
    }

    pub fn test_body(&self) -> impl Iterator<Item = &Literal> {
        self.body.iter().filter(|l| l.is_test())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Program {
    /// `#const` definitions. Values stay symbolic in rules until resolved.
    pub consts: BTreeMap<String, i64>,
    pub statements: Vec<Rule>,
    pub shows: Vec<Predicate>,
}

impl Program {
    pub fn rules(&self) -> impl Iterator<Item = &Rule> {
        self.statements.iter().filter(|r| !r.is_fact())
    }

    pub fn facts(&self) -> impl Iterator<Item = &Rule> {
        self.statements.iter().filter(|r| r.is_fact())
    }

    /// Every atom occurring anywhere in the program's rules.
    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.statements.iter().flat_map(|r| {
            std::iter::once(&r.head).chain(r.body.iter().filter_map(Literal::dependency))
        })
    }

    pub fn mentions_predicate_name(&self, name: &str) -> bool {
        self.atoms().any(|a| a.predicate == name) || self.shows.iter().any(|p| p.name == name)
    }
}

/// Compact printing, as used for answer sets and explanations: no space
/// after commas.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Variable(v) | Term::Symbol(v) => f.write_str(v),
            Term::Integer(i) => write!(f, "{i}"),
            Term::Interval(lo, hi) => write!(f, "{lo}..{hi}"),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_atom(f, self, ",")
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_literal(f, self, ",")
    }
}

pub(crate) fn write_atom(f: &mut impl fmt::Write, atom: &Atom, sep: &str) -> fmt::Result {
    f.write_str(&atom.predicate)?;
    if !atom.args.is_empty() {
        f.write_char('(')?;
        for (i, t) in atom.args.iter().enumerate() {
            if i > 0 {
                f.write_str(sep)?;
            }
            write!(f, "{t}")?;
        }
        f.write_char(')')?;
    }
    Ok(())
}

pub(crate) fn write_literal(f: &mut impl fmt::Write, lit: &Literal, sep: &str) -> fmt::Result {
    match lit {
        Literal::Positive(a) => write_atom(f, a, sep),
        Literal::Negated(a) => {
            f.write_str("not ")?;
            write_atom(f, a, sep)
        }
        Literal::Comparison { left, op, right } => write!(f, "{left}{op}{right}"),
        Literal::CountEquality {
            bound,
            local_vars,
            condition,
        } => {
            write!(f, "{bound}=#count{{{}:", local_vars.join(sep))?;
            write_atom(f, condition, sep)?;
            f.write_char('}')
        }
    }
}
