use std::fmt;

use super::SyntaxError;

/// 1-based line and column of a token's first character.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    /// Lowercase-initial identifier.
    Ident(String),
    /// Uppercase-initial identifier.
    Variable(String),
    Integer(i64),
    Not,
    Const,
    Count,
    Show,
    If,
    Dot,
    DotDot,
    Comma,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Colon,
    Slash,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TokenKind::Ident(s) => return write!(f, "identifier `{s}`"),
            TokenKind::Variable(s) => return write!(f, "variable `{s}`"),
            TokenKind::Integer(i) => return write!(f, "integer `{i}`"),
            TokenKind::Not => "not",
            TokenKind::Const => "#const",
            TokenKind::Count => "#count",
            TokenKind::Show => "#show",
            TokenKind::If => ":-",
            TokenKind::Dot => ".",
            TokenKind::DotDot => "..",
            TokenKind::Comma => ",",
            TokenKind::LParen => "(",
            TokenKind::RParen => ")",
            TokenKind::LBrace => "{",
            TokenKind::RBrace => "}",
            TokenKind::Colon => ":",
            TokenKind::Slash => "/",
            TokenKind::Eq => "=",
            TokenKind::Ne => "!=",
            TokenKind::Lt => "<",
            TokenKind::Le => "<=",
            TokenKind::Gt => ">",
            TokenKind::Ge => ">=",
        };
        write!(f, "`{s}`")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub pos: Position,
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    src: &'a str,
    line: usize,
    column: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Self {
            chars: src.char_indices().peekable(),
            src,
            line: 1,
            column: 1,
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().map(|&(_, c)| c)
    }

    fn peek_second(&self) -> Option<char> {
        let mut it = self.chars.clone();
        it.next();
        it.next().map(|(_, c)| c)
    }

    fn offset(&mut self) -> usize {
        self.chars.peek().map_or(self.src.len(), |&(i, _)| i)
    }

    fn bump(&mut self) -> Option<char> {
        let (_, c) = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn pos(&self) -> Position {
        Position {
            line: self.line,
            column: self.column,
        }
    }

    fn eat_while(&mut self, pred: impl Fn(char) -> bool) -> &'a str {
        let start = self.offset();
        while self.peek().is_some_and(&pred) {
            self.bump();
        }
        let end = self.offset();
        &self.src[start..end]
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Splits program text into tokens. `%` comments run to end of line.
pub fn tokenize(text: &str) -> Result<Vec<Token>, SyntaxError> {
    let mut cur = Cursor::new(text);
    let mut tokens = Vec::new();

    while let Some(c) = cur.peek() {
        let pos = cur.pos();
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        if c == '%' {
            cur.eat_while(|c| c != '\n');
            continue;
        }

        let kind = if c.is_ascii_lowercase() {
            let word = cur.eat_while(is_ident_char);
            if word == "not" {
                TokenKind::Not
            } else {
                TokenKind::Ident(word.to_owned())
            }
        } else if c.is_ascii_uppercase() {
            TokenKind::Variable(cur.eat_while(is_ident_char).to_owned())
        } else if c.is_ascii_digit()
            || (c == '-' && cur.peek_second().is_some_and(|d| d.is_ascii_digit()))
        {
            let negative = c == '-';
            if negative {
                cur.bump();
            }
            let digits = cur.eat_while(|c| c.is_ascii_digit());
            let literal = if negative {
                format!("-{digits}")
            } else {
                digits.to_owned()
            };
            let value = literal
                .parse::<i64>()
                .map_err(|_| SyntaxError::IntegerOverflow { pos, literal })?;
            TokenKind::Integer(value)
        } else if c == '#' {
            cur.bump();
            let word = cur.eat_while(is_ident_char);
            match word {
                "const" => TokenKind::Const,
                "count" => TokenKind::Count,
                "show" => TokenKind::Show,
                _ => return Err(SyntaxError::IllegalCharacter { pos, ch: '#' }),
            }
        } else {
            cur.bump();
            let next = cur.peek();
            let mut two = |kind| {
                cur.bump();
                kind
            };
            match (c, next) {
                (':', Some('-')) => two(TokenKind::If),
                ('.', Some('.')) => two(TokenKind::DotDot),
                ('!', Some('=')) => two(TokenKind::Ne),
                ('<', Some('=')) => two(TokenKind::Le),
                ('>', Some('=')) => two(TokenKind::Ge),
                ('.', _) => TokenKind::Dot,
                (',', _) => TokenKind::Comma,
                ('(', _) => TokenKind::LParen,
                (')', _) => TokenKind::RParen,
                ('{', _) => TokenKind::LBrace,
                ('}', _) => TokenKind::RBrace,
                (':', _) => TokenKind::Colon,
                ('/', _) => TokenKind::Slash,
                ('=', _) => TokenKind::Eq,
                ('<', _) => TokenKind::Lt,
                ('>', _) => TokenKind::Gt,
                _ => return Err(SyntaxError::IllegalCharacter { pos, ch: c }),
            }
        };
        tokens.push(Token { kind, pos });
    }
    Ok(tokens)
}
