//! Tokenizer shared by the query parser and the Turtle-lite loader.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl SyntaxError {
    pub(crate) fn new(pos: Pos, message: impl Into<String>) -> Self {
        SyntaxError {
            line: pos.line,
            column: pos.column,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub(crate) struct Pos {
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Var(String),
    IriRef(String),
    PName { prefix: String, local: String },
    Blank(String),
    Integer(String),
    Str(String),
    Word(String),
    AtWord(String),
    Caret2,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Dot,
    Star,
    Comma,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    AndAnd,
    OrOr,
    Bang,
    Plus,
    Minus,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Var(v) => write!(f, "?{v}"),
            Tok::IriRef(i) => write!(f, "<{i}>"),
            Tok::PName { prefix, local } => write!(f, "{prefix}:{local}"),
            Tok::Blank(b) => write!(f, "_:{b}"),
            Tok::Integer(i) => f.write_str(i),
            Tok::Str(s) => write!(f, "{s:?}"),
            Tok::Word(w) => f.write_str(w),
            Tok::AtWord(w) => write!(f, "@{w}"),
            Tok::Caret2 => f.write_str("^^"),
            Tok::LBrace => f.write_str("{"),
            Tok::RBrace => f.write_str("}"),
            Tok::LParen => f.write_str("("),
            Tok::RParen => f.write_str(")"),
            Tok::Dot => f.write_str("."),
            Tok::Star => f.write_str("*"),
            Tok::Comma => f.write_str(","),
            Tok::Eq => f.write_str("="),
            Tok::Ne => f.write_str("!="),
            Tok::Lt => f.write_str("<"),
            Tok::Le => f.write_str("<="),
            Tok::Gt => f.write_str(">"),
            Tok::Ge => f.write_str(">="),
            Tok::AndAnd => f.write_str("&&"),
            Tok::OrOr => f.write_str("||"),
            Tok::Bang => f.write_str("!"),
            Tok::Plus => f.write_str("+"),
            Tok::Minus => f.write_str("-"),
        }
    }
}

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn is_local_char(c: char) -> bool {
    is_name_char(c) || c == '-'
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<(Tok, Pos)>, SyntaxError> {
    Lexer {
        chars: src.chars().collect(),
        at: 0,
        pos: Pos { line: 1, column: 1 },
    }
    .run()
}

struct Lexer {
    chars: Vec<char>,
    at: usize,
    pos: Pos,
}

impl Lexer {
    fn peek(&self, ahead: usize) -> Option<char> {
        self.chars.get(self.at + ahead).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek(0)?;
        self.at += 1;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.column = 1;
        } else {
            self.pos.column += 1;
        }
        Some(c)
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> String {
        let mut out = String::new();
        while let Some(c) = self.peek(0).filter(|&c| pred(c)) {
            out.push(c);
            self.bump();
        }
        out
    }

    /// `<` starts an IRI only if a `>` closes it before any whitespace.
    fn iri_ahead(&self) -> bool {
        let mut i = self.at + 1;
        while let Some(&c) = self.chars.get(i) {
            match c {
                '>' => return true,
                c if c.is_whitespace() || "<\"{}|^`\\".contains(c) => return false,
                _ => i += 1,
            }
        }
        false
    }

    fn run(mut self) -> Result<Vec<(Tok, Pos)>, SyntaxError> {
        let mut out = Vec::new();
        while let Some(c) = self.peek(0) {
            if c.is_whitespace() {
                self.bump();
                continue;
            }
            if c == '#' {
                self.take_while(|c| c != '\n');
                continue;
            }
            let start = self.pos;
            let tok = self.token(c, start)?;
            out.push((tok, start));
        }
        Ok(out)
    }

    fn token(&mut self, c: char, start: Pos) -> Result<Tok, SyntaxError> {
        let two = |s: &Self, next: char| s.peek(1) == Some(next);
        let tok = match c {
            '?' | '$' => {
                self.bump();
                let name = self.take_while(is_name_char);
                if name.is_empty() {
                    return Err(SyntaxError::new(start, "expected a variable name"));
                }
                Tok::Var(name)
            }
            '<' if self.iri_ahead() => {
                self.bump();
                let iri = self.take_while(|c| c != '>');
                self.bump();
                if iri.is_empty() {
                    return Err(SyntaxError::new(start, "empty IRI"));
                }
                Tok::IriRef(iri)
            }
            '<' if two(self, '=') => self.punct(2, Tok::Le),
            '<' => self.punct(1, Tok::Lt),
            '>' if two(self, '=') => self.punct(2, Tok::Ge),
            '>' => self.punct(1, Tok::Gt),
            '!' if two(self, '=') => self.punct(2, Tok::Ne),
            '!' => self.punct(1, Tok::Bang),
            '&' if two(self, '&') => self.punct(2, Tok::AndAnd),
            '|' if two(self, '|') => self.punct(2, Tok::OrOr),
            '^' if two(self, '^') => self.punct(2, Tok::Caret2),
            '=' => self.punct(1, Tok::Eq),
            '+' => self.punct(1, Tok::Plus),
            '-' => self.punct(1, Tok::Minus),
            '{' => self.punct(1, Tok::LBrace),
            '}' => self.punct(1, Tok::RBrace),
            '(' => self.punct(1, Tok::LParen),
            ')' => self.punct(1, Tok::RParen),
            '.' => self.punct(1, Tok::Dot),
            '*' => self.punct(1, Tok::Star),
            ',' => self.punct(1, Tok::Comma),
            '"' => Tok::Str(self.string(start)?),
            '@' => {
                self.bump();
                let word = self.take_while(is_name_char);
                if word.is_empty() {
                    return Err(SyntaxError::new(start, "expected a directive after `@`"));
                }
                Tok::AtWord(word)
            }
            '_' if two(self, ':') => {
                self.bump();
                self.bump();
                let label = self.take_while(is_local_char);
                if label.is_empty() {
                    return Err(SyntaxError::new(start, "empty blank node label"));
                }
                Tok::Blank(label)
            }
            ':' => {
                self.bump();
                Tok::PName {
                    prefix: String::new(),
                    local: self.take_while(is_local_char),
                }
            }
            c if c.is_ascii_digit() => Tok::Integer(self.take_while(|c| c.is_ascii_digit())),
            c if c.is_ascii_alphabetic() => {
                let word = self.take_while(is_name_char);
                if self.peek(0) == Some(':') {
                    self.bump();
                    Tok::PName {
                        prefix: word,
                        local: self.take_while(is_local_char),
                    }
                } else {
                    Tok::Word(word)
                }
            }
            other => {
                return Err(SyntaxError::new(
                    start,
                    format!("unexpected character `{other}`"),
                ))
            }
        };
        Ok(tok)
    }

    fn punct(&mut self, len: usize, tok: Tok) -> Tok {
        for _ in 0..len {
            self.bump();
        }
        tok
    }

    fn string(&mut self, start: Pos) -> Result<String, SyntaxError> {
        self.bump();
        let mut out = String::new();
        loop {
            match self.bump() {
                None | Some('\n') => {
                    return Err(SyntaxError::new(start, "unterminated string literal"))
                }
                Some('"') => return Ok(out),
                Some('\\') => match self.bump() {
                    Some('"') => out.push('"'),
                    Some('\\') => out.push('\\'),
                    Some('n') => out.push('\n'),
                    Some('r') => out.push('\r'),
                    Some('t') => out.push('\t'),
                    _ => return Err(SyntaxError::new(start, "bad escape in string literal")),
                },
                Some(c) => out.push(c),
            }
        }
    }
}

/// Cursor over a token stream with helpers both parsers use.
pub(crate) struct Cursor {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    end: Pos,
}

impl Cursor {
    pub fn new(src: &str) -> Result<Self, SyntaxError> {
        let toks = tokenize(src)?;
        let end = src.lines().enumerate().last().map_or(
            Pos { line: 1, column: 1 },
            |(i, l)| Pos {
                line: i + 1,
                column: l.chars().count() + 1,
            },
        );
        Ok(Cursor { toks, at: 0, end })
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    pub fn peek_at(&self, ahead: usize) -> Option<&Tok> {
        self.toks.get(self.at + ahead).map(|(t, _)| t)
    }

    pub fn pos(&self) -> Pos {
        self.toks.get(self.at).map_or(self.end, |(_, p)| *p)
    }

    pub fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(t, _)| t.clone());
        if t.is_some() {
            self.at += 1;
        }
        t
    }

    pub fn at_end(&self) -> bool {
        self.at >= self.toks.len()
    }

    pub fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    pub fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Word(w)) if w.eq_ignore_ascii_case(kw))
    }

    pub fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.is_keyword(kw) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, tok: &Tok) -> Result<(), SyntaxError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{tok}`")))
        }
    }

    pub fn expect_keyword(&mut self, kw: &str) -> Result<(), SyntaxError> {
        if self.eat_keyword(kw) {
            Ok(())
        } else {
            Err(self.unexpected(kw))
        }
    }

    pub fn unexpected(&self, wanted: &str) -> SyntaxError {
        let found = match self.peek() {
            Some(t) => format!("`{t}`"),
            None => "end of input".to_owned(),
        };
        SyntaxError::new(self.pos(), format!("expected {wanted}, found {found}"))
    }
}
