//! Recursive-descent parser over the token stream.

use std::collections::btree_map::Entry;

use super::ast::{Atom, CompareOp, Literal, Predicate, Program, Rule, Term};
use super::lexer::{tokenize, Position, Token, TokenKind};
use super::SyntaxError;

struct Parser {
    tokens: Vec<Token>,
    at: usize,
    end: Position,
}

impl Parser {
    fn new(text: &str) -> Result<Self, SyntaxError> {
        let tokens = tokenize(text)?;
        let end = end_position(text);
        Ok(Self { tokens, at: 0, end })
    }

    fn peek(&self) -> Option<&TokenKind> {
        self.tokens.get(self.at).map(|t| &t.kind)
    }

    fn peek_at(&self, n: usize) -> Option<&TokenKind> {
        self.tokens.get(self.at + n).map(|t| &t.kind)
    }

    fn pos(&self) -> Position {
        self.tokens.get(self.at).map_or(self.end, |t| t.pos)
    }

    fn is_done(&self) -> bool {
        self.at >= self.tokens.len()
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.at).cloned();
        self.at += 1;
        t
    }

    fn unexpected(&self, expected: &[&'static str]) -> SyntaxError {
        let expected = expected.iter().map(|s| s.to_string()).collect();
        match self.tokens.get(self.at) {
            Some(t) => SyntaxError::Unexpected {
                pos: t.pos,
                found: t.kind.to_string(),
                expected,
            },
            None => SyntaxError::UnexpectedEof {
                pos: self.end,
                expected,
            },
        }
    }

    fn expect(&mut self, kind: TokenKind, label: &'static str) -> Result<(), SyntaxError> {
        if self.peek() == Some(&kind) {
            self.at += 1;
            Ok(())
        } else {
            Err(self.unexpected(&[label]))
        }
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek() == Some(kind) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<String, SyntaxError> {
        match self.peek() {
            Some(TokenKind::Ident(_)) => match self.next().map(|t| t.kind) {
                Some(TokenKind::Ident(s)) => Ok(s),
                _ => unreachable!(),
            },
            _ => Err(self.unexpected(&["identifier"])),
        }
    }

    fn integer(&mut self) -> Result<i64, SyntaxError> {
        match self.peek() {
            Some(&TokenKind::Integer(i)) => {
                self.at += 1;
                Ok(i)
            }
            _ => Err(self.unexpected(&["integer"])),
        }
    }

    fn program(&mut self) -> Result<Program, SyntaxError> {
        let mut program = Program::default();
        while !self.is_done() {
            match self.peek() {
                Some(TokenKind::Const) => {
                    let pos = self.pos();
                    self.at += 1;
                    let name = self.ident()?;
                    self.expect(TokenKind::Eq, "=")?;
                    let value = self.integer()?;
                    self.expect(TokenKind::Dot, ".")?;
                    match program.consts.entry(name) {
                        Entry::Vacant(e) => {
                            e.insert(value);
                        }
                        Entry::Occupied(e) => {
                            return Err(SyntaxError::DuplicateConst {
                                pos,
                                name: e.key().clone(),
                            })
                        }
                    }
                }
                Some(TokenKind::Show) => {
                    self.at += 1;
                    let name = self.ident()?;
                    self.expect(TokenKind::Slash, "/")?;
                    let pos = self.pos();
                    let arity = self.integer()?;
                    let arity = usize::try_from(arity)
                        .map_err(|_| SyntaxError::NegativeArity { pos, arity })?;
                    self.expect(TokenKind::Dot, ".")?;
                    program.shows.push(Predicate::new(name, arity));
                }
                Some(TokenKind::Ident(_)) => {
                    let index = program.statements.len();
                    program.statements.push(self.rule(index)?);
                }
                _ => return Err(self.unexpected(&["#const", "#show", "identifier"])),
            }
        }
        Ok(program)
    }

    fn rule(&mut self, source_index: usize) -> Result<Rule, SyntaxError> {
        let head_pos = self.pos();
        let head = self.atom(true)?;
        let mut body = Vec::new();
        if self.eat(&TokenKind::If) {
            loop {
                body.push(self.literal()?);
                if !self.eat(&TokenKind::Comma) {
                    break;
                }
            }
            if head.has_interval() {
                return Err(SyntaxError::IntervalOutsideFact { pos: head_pos });
            }
        }
        if !self.eat(&TokenKind::Dot) {
            let expected: &[&str] = if body.is_empty() {
                &[".", ":-"]
            } else {
                &[".", ","]
            };
            return Err(self.unexpected(expected));
        }
        Ok(Rule {
            head,
            body,
            source_index,
            rule_id: None,
        })
    }

    fn atom(&mut self, allow_interval: bool) -> Result<Atom, SyntaxError> {
        let predicate = self.ident()?;
        let args = self.atom_args(allow_interval)?;
        Ok(Atom { predicate, args })
    }

    fn atom_args(&mut self, allow_interval: bool) -> Result<Vec<Term>, SyntaxError> {
        let mut args = Vec::new();
        if self.eat(&TokenKind::LParen) {
            loop {
                args.push(self.term(allow_interval)?);
                if !self.eat(&TokenKind::Comma) {
                    break;
                }
            }
            if !self.eat(&TokenKind::RParen) {
                return Err(self.unexpected(&[",", ")"]));
            }
        }
        Ok(args)
    }

    fn term(&mut self, allow_interval: bool) -> Result<Term, SyntaxError> {
        let pos = self.pos();
        match self.next().map(|t| t.kind) {
            Some(TokenKind::Variable(v)) => Ok(Term::Variable(v)),
            Some(TokenKind::Ident(s)) => Ok(Term::Symbol(s)),
            Some(TokenKind::Integer(lo)) => {
                if self.peek() != Some(&TokenKind::DotDot) {
                    return Ok(Term::Integer(lo));
                }
                if !allow_interval {
                    return Err(SyntaxError::IntervalOutsideFact { pos });
                }
                self.at += 1;
                let hi = self.integer()?;
                if lo > hi {
                    return Err(SyntaxError::EmptyInterval { pos, lo, hi });
                }
                Ok(Term::Interval(lo, hi))
            }
            _ => {
                self.at -= 1;
                Err(self.unexpected(&["variable", "identifier", "integer"]))
            }
        }
    }

    fn compare_op(&mut self) -> Option<CompareOp> {
        let op = match self.peek()? {
            TokenKind::Eq => CompareOp::Eq,
            TokenKind::Ne => CompareOp::Ne,
            TokenKind::Lt => CompareOp::Lt,
            TokenKind::Le => CompareOp::Le,
            TokenKind::Gt => CompareOp::Gt,
            TokenKind::Ge => CompareOp::Ge,
            _ => return None,
        };
        self.at += 1;
        Some(op)
    }

    fn literal(&mut self) -> Result<Literal, SyntaxError> {
        if self.eat(&TokenKind::Not) {
            return Ok(Literal::Negated(self.atom(false)?));
        }
        // An identifier followed by `(` or by a non-operator is an atom;
        // anything else starts a comparison or a count.
        if let Some(TokenKind::Ident(_)) = self.peek() {
            let starts_comparison = matches!(
                self.peek_at(1),
                Some(
                    TokenKind::Eq
                        | TokenKind::Ne
                        | TokenKind::Lt
                        | TokenKind::Le
                        | TokenKind::Gt
                        | TokenKind::Ge
                )
            );
            if !starts_comparison {
                return Ok(Literal::Positive(self.atom(false)?));
            }
        }
        let left = self.term(false)?;
        let Some(op) = self.compare_op() else {
            return Err(self.unexpected(&["=", "!=", "<", "<=", ">", ">="]));
        };
        if op == CompareOp::Eq && self.peek() == Some(&TokenKind::Count) {
            self.at += 1;
            return self.count(left);
        }
        let right = self.term(false)?;
        Ok(Literal::Comparison { left, op, right })
    }

    fn count(&mut self, bound: Term) -> Result<Literal, SyntaxError> {
        self.expect(TokenKind::LBrace, "{")?;
        let mut local_vars = Vec::new();
        loop {
            match self.next().map(|t| t.kind) {
                Some(TokenKind::Variable(v)) => local_vars.push(v),
                _ => {
                    self.at -= 1;
                    return Err(self.unexpected(&["variable"]));
                }
            }
            if !self.eat(&TokenKind::Comma) {
                break;
            }
        }
        self.expect(TokenKind::Colon, ":")?;
        let condition = self.atom(false)?;
        self.expect(TokenKind::RBrace, "}")?;
        Ok(Literal::CountEquality {
            bound,
            local_vars,
            condition,
        })
    }
}

fn end_position(text: &str) -> Position {
    let line = text.matches('\n').count() + 1;
    let column = text.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    Position { line, column }
}

/// Parses a whole program. `#const` values are not substituted here.
pub fn parse_program(text: &str) -> Result<Program, SyntaxError> {
    Parser::new(text)?.program()
}

/// Parses a single atom such as `cn_lp(1,3)`; variables are allowed, so
/// the result can serve as a match pattern.
pub fn parse_atom(text: &str) -> Result<Atom, SyntaxError> {
    let mut p = Parser::new(text)?;
    let atom = p.atom(false)?;
    if !p.is_done() {
        return Err(p.unexpected(&["end of input"]));
    }
    Ok(atom)
}

/// Parses a single ground atom; rejects variables.
pub fn parse_ground_atom(text: &str) -> Result<Atom, SyntaxError> {
    let atom = parse_atom(text)?;
    if let Some(v) = atom.variables().next() {
        return Err(SyntaxError::NotGround {
            atom: atom.to_string(),
            variable: v.to_owned(),
        });
    }
    Ok(atom)
}
