//! Recursive-descent parser for the ASCII formula grammar.
//!
//! ```text
//! formula := iff
//! iff     := imp ( "<->" imp )*          left-assoc
//! imp     := disj ( "->" imp )?          right-assoc
//! disj    := conj ( "|" conj )*
//! conj    := sum ( "&" sum )*
//! sum     := prod ( "+" prod )*          ⊕
//! prod    := unary ( "*" unary )*        ⊙
//! unary   := "~" unary | atom postfix*
//! postfix := "^" INT
//! atom    := IDENT | "0" | "1" | "(" formula ")" | INT "." atom
//! ```
//!
//! Modal formulas add the atom `"P(" formula ")"` whose argument may not
//! contain `P` again.

use crate::error::{Error, Result};

use super::{BinaryOp, EventFormula, Formula};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Token {
    Ident(String),
    Int(u32),
    LParen,
    RParen,
    Tilde,
    Caret,
    Dot,
    Plus,
    Star,
    Amp,
    Bar,
    Arrow,
    DoubleArrow,
    Modal,
    Eof,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Ident(s) => format!("identifier `{s}`"),
            Token::Int(n) => format!("integer `{n}`"),
            Token::LParen => "`(`".into(),
            Token::RParen => "`)`".into(),
            Token::Tilde => "`~`".into(),
            Token::Caret => "`^`".into(),
            Token::Dot => "`.`".into(),
            Token::Plus => "`+`".into(),
            Token::Star => "`*`".into(),
            Token::Amp => "`&`".into(),
            Token::Bar => "`|`".into(),
            Token::Arrow => "`->`".into(),
            Token::DoubleArrow => "`<->`".into(),
            Token::Modal => "`P`".into(),
            Token::Eof => "end of input".into(),
        }
    }
}

pub(crate) fn syntax(offset: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        offset,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Token, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'(' => Token::LParen,
            b')' => Token::RParen,
            b'~' => Token::Tilde,
            b'^' => Token::Caret,
            b'.' => Token::Dot,
            b'+' => Token::Plus,
            b'*' => Token::Star,
            b'&' => Token::Amp,
            b'|' => Token::Bar,
            b'P' => Token::Modal,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Token::Arrow
            }
            b'<' if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') => {
                i += 2;
                Token::DoubleArrow
            }
            b'a'..=b'z' => {
                let mut j = i + 1;
                while j < bytes.len()
                    && (bytes[j].is_ascii_lowercase() || bytes[j].is_ascii_digit() || bytes[j] == b'_')
                {
                    j += 1;
                }
                out.push((Token::Ident(text[i..j].to_string()), start));
                i = j;
                continue;
            }
            b'0'..=b'9' => {
                let mut j = i + 1;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                let n: u32 = text[i..j]
                    .parse()
                    .map_err(|_| syntax(start, "integer too large"))?;
                out.push((Token::Int(n), start));
                i = j;
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(syntax(start, format!("unknown token `{ch}`")));
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Token::Eof, text.len()));
    Ok(out)
}

/// Atom types that know their own concrete syntax.
pub trait AtomSyntax: Sized + Clone + PartialEq {
    /// Parses an atom at the current position, or returns `None` when the
    /// next token does not start one.
    fn parse_atom(p: &mut Parser) -> Result<Option<Self>>;
    fn write_atom(&self, out: &mut String);
}

impl AtomSyntax for String {
    fn parse_atom(p: &mut Parser) -> Result<Option<Self>> {
        match p.peek().clone() {
            Token::Ident(name) => {
                p.bump();
                Ok(Some(name))
            }
            Token::Modal => {
                let msg = if p.modal_depth > 0 {
                    "nested modality"
                } else {
                    "modality `P` is not allowed in an event formula"
                };
                Err(syntax(p.offset(), msg))
            }
            _ => Ok(None),
        }
    }

    fn write_atom(&self, out: &mut String) {
        out.push_str(self);
    }
}

pub struct Parser {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    pub(crate) modal_depth: usize,
}

impl Parser {
    pub fn new(text: &str) -> Result<Self> {
        Ok(Parser {
            tokens: lex(text)?,
            pos: 0,
            modal_depth: 0,
        })
    }

    pub(crate) fn peek(&self) -> &Token {
        &self.tokens[self.pos].0
    }

    pub(crate) fn offset(&self) -> usize {
        self.tokens[self.pos].1
    }

    pub(crate) fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].0.clone();
        if t != Token::Eof {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn expect(&mut self, want: Token) -> Result<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(syntax(
                self.offset(),
                format!("expected {}, found {}", want.describe(), self.peek().describe()),
            ))
        }
    }

    /// Parses a complete input as one formula.
    pub fn parse_complete<A: AtomSyntax>(mut self) -> Result<Formula<A>> {
        let f = self.formula()?;
        if *self.peek() != Token::Eof {
            return Err(syntax(
                self.offset(),
                format!("unexpected {}", self.peek().describe()),
            ));
        }
        Ok(f)
    }

    pub fn formula<A: AtomSyntax>(&mut self) -> Result<Formula<A>> {
        let mut lhs = self.imp()?;
        while *self.peek() == Token::DoubleArrow {
            self.bump();
            let rhs = self.imp()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn imp<A: AtomSyntax>(&mut self) -> Result<Formula<A>> {
        let lhs = self.chain(Token::Bar, BinaryOp::Or, 0)?;
        if *self.peek() == Token::Arrow {
            self.bump();
            let rhs = self.imp()?;
            return Ok(Formula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    // Left-associative levels: | & + *
    fn chain<A: AtomSyntax>(&mut self, tok: Token, op: BinaryOp, level: usize) -> Result<Formula<A>> {
        const LEVELS: [(Token, BinaryOp); 4] = [
            (Token::Bar, BinaryOp::Or),
            (Token::Amp, BinaryOp::And),
            (Token::Plus, BinaryOp::OPlus),
            (Token::Star, BinaryOp::OTimes),
        ];
        let next = |p: &mut Self| -> Result<Formula<A>> {
            match LEVELS.get(level + 1) {
                Some((t, o)) => p.chain(t.clone(), *o, level + 1),
                None => p.unary(),
            }
        };
        let mut lhs = next(self)?;
        while *self.peek() == tok {
            self.bump();
            let rhs = next(self)?;
            lhs = Formula::binary(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary<A: AtomSyntax>(&mut self) -> Result<Formula<A>> {
        if *self.peek() == Token::Tilde {
            self.bump();
            return Ok(Formula::neg(self.unary()?));
        }
        let mut f = self.atom()?;
        while *self.peek() == Token::Caret {
            self.bump();
            let n = self.positive_int("power exponent")?;
            f = Formula::power(f, n);
        }
        Ok(f)
    }

    fn positive_int(&mut self, what: &str) -> Result<u32> {
        let at = self.offset();
        match self.bump() {
            Token::Int(0) => Err(syntax(at, format!("{what} must be at least 1"))),
            Token::Int(n) => Ok(n),
            t => Err(syntax(at, format!("expected {what}, found {}", t.describe()))),
        }
    }

    fn atom<A: AtomSyntax>(&mut self) -> Result<Formula<A>> {
        if let Some(a) = A::parse_atom(self)? {
            return Ok(Formula::Atom(a));
        }
        let at = self.offset();
        match self.peek().clone() {
            Token::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Token::RParen)?;
                Ok(f)
            }
            Token::Int(n) => {
                self.bump();
                if *self.peek() == Token::Dot {
                    self.bump();
                    if n == 0 {
                        return Err(syntax(at, "multiple must be at least 1"));
                    }
                    let f = self.atom()?;
                    return Ok(Formula::multiple(n, f));
                }
                match n {
                    0 => Ok(Formula::Bot),
                    1 => Ok(Formula::Top),
                    _ => Err(syntax(at, format!("bare integer `{n}` is not a formula"))),
                }
            }
            t => Err(syntax(at, format!("unexpected {}", t.describe()))),
        }
    }
}

pub fn parse_event(text: &str) -> Result<EventFormula> {
    Parser::new(text)?.parse_complete()
}
