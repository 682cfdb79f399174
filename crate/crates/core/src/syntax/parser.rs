// Recursive-descent parser for the `.flp` program format:
//
//   program  := { decl | rule }
//   decl     := "atoms" atom { "," atom } "."
//   rule     := atom "<-" [ "[" family "]" ] [ "{" weight "}" ] body "."
//   body     := conj { "\/" [ "[" family "]" ] conj }
//   conj     := unit { "/\" [ "[" family "]" ] unit }
//   unit     := constant | atom | "~" atom | aggname "(" body { "," body } ")" | "(" body ")"
//   constant := decimal | num "/" den        (within [0, 1])
//
// `%` starts a comment that runs to the end of the line.

use std::fmt;

use thiserror::Error;

use super::{Formula, Program, Rule};
use crate::connectives::{Family, Registry};
use crate::error::Error;
use crate::lattice::Atom;
use crate::number::TruthValue;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(String),
    Arrow,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Dot,
    Tilde,
    Or,
    And,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Number(s) => write!(f, "number `{s}`"),
            Tok::Arrow => f.write_str("`<-`"),
            Tok::LBracket => f.write_str("`[`"),
            Tok::RBracket => f.write_str("`]`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Tilde => f.write_str("`~`"),
            Tok::Or => f.write_str("`\\/`"),
            Tok::And => f.write_str("`/\\`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let err = |line, col, message: String| ParseError { line, col, message };
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let peek = chars.get(i + 1).copied();
        let mut advance = |n: usize, i: &mut usize| {
            *i += n;
            col += n;
        };
        let tok = match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => {
                advance(1, &mut i);
                continue;
            }
            '%' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            '<' if peek == Some('-') => {
                advance(2, &mut i);
                Tok::Arrow
            }
            '\\' if peek == Some('/') => {
                advance(2, &mut i);
                Tok::Or
            }
            '/' if peek == Some('\\') => {
                advance(2, &mut i);
                Tok::And
            }
            '[' => {
                advance(1, &mut i);
                Tok::LBracket
            }
            ']' => {
                advance(1, &mut i);
                Tok::RBracket
            }
            '{' => {
                advance(1, &mut i);
                Tok::LBrace
            }
            '}' => {
                advance(1, &mut i);
                Tok::RBrace
            }
            '(' => {
                advance(1, &mut i);
                Tok::LParen
            }
            ')' => {
                advance(1, &mut i);
                Tok::RParen
            }
            ',' => {
                advance(1, &mut i);
                Tok::Comma
            }
            '.' => {
                advance(1, &mut i);
                Tok::Dot
            }
            '~' => {
                advance(1, &mut i);
                Tok::Tilde
            }
            c if c.is_ascii_digit() => {
                let start = i;
                let digits = |i: &mut usize| {
                    while *i < chars.len() && chars[*i].is_ascii_digit() {
                        *i += 1;
                    }
                };
                digits(&mut i);
                let next_is_digit = |k: usize| chars.get(k).is_some_and(|c| c.is_ascii_digit());
                if i < chars.len() && matches!(chars[i], '.' | '/') && next_is_digit(i + 1) {
                    i += 1;
                    digits(&mut i);
                }
                col += i - start;
                Tok::Number(chars[start..i].iter().collect())
            }
            c if c.is_alphabetic() => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                col += i - start;
                Tok::Ident(chars[start..i].iter().collect())
            }
            other => return Err(err(tl, tc, format!("unexpected character `{other}`"))),
        };
        out.push(Spanned { tok, line: tl, col: tc });
    }
    out.push(Spanned { tok: Tok::Eof, line, col });
    Ok(out)
}

/// Parser state; holds the registry used to resolve connective names.
pub struct Parser<'r> {
    registry: &'r Registry,
    default_family: Family,
    toks: Vec<Spanned>,
    pos: usize,
}

impl<'r> Parser<'r> {
    pub fn new(registry: &'r Registry, default_family: Family) -> Parser<'r> {
        Parser {
            registry,
            default_family,
            toks: Vec::new(),
            pos: 0,
        }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let s = &self.toks[self.pos];
        ParseError {
            line: s.line,
            col: s.col,
            message: message.into(),
        }
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected {want}, found {}", self.peek())))
        }
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                let a = Atom::new(&name).map_err(|e| self.error(e.to_string()))?;
                self.bump();
                Ok(a)
            }
            other => Err(self.error(format!("expected an atom, found {other}"))),
        }
    }

    fn family_tag(&mut self) -> Result<Option<Family>, ParseError> {
        if *self.peek() != Tok::LBracket {
            return Ok(None);
        }
        self.bump();
        let name = match self.peek().clone() {
            Tok::Ident(n) => n,
            other => return Err(self.error(format!("expected a family name, found {other}"))),
        };
        let family = self.registry.family(&name).map_err(|e| self.error(e.to_string()))?;
        self.bump();
        self.expect(Tok::RBracket)?;
        Ok(Some(family))
    }

    fn constant(&mut self, text: &str) -> Result<TruthValue, ParseError> {
        let v = TruthValue::parse(text).map_err(|e| match e {
            Error::OutOfRange(_) => self.error(format!("constant {text} is outside [0, 1]")),
            other => self.error(other.to_string()),
        })?;
        self.bump();
        Ok(v)
    }

    pub fn parse(mut self, text: &str) -> Result<Program, ParseError> {
        self.toks = lex(text)?;
        self.pos = 0;
        let mut rules = Vec::new();
        let mut declared = Vec::new();
        while *self.peek() != Tok::Eof {
            if matches!(self.peek(), Tok::Ident(k) if k == "atoms") && matches!(self.peek_at(1), Tok::Ident(_)) {
                self.bump();
                declared.push(self.atom()?);
                while *self.peek() == Tok::Comma {
                    self.bump();
                    declared.push(self.atom()?);
                }
                self.expect(Tok::Dot)?;
            } else {
                rules.push(self.rule()?);
            }
        }
        Ok(Program::new(rules, declared))
    }

    fn rule(&mut self) -> Result<Rule, ParseError> {
        let head = self.atom()?;
        self.expect(Tok::Arrow)?;
        let family = self.family_tag()?.unwrap_or_else(|| self.default_family.clone());
        let weight = if *self.peek() == Tok::LBrace {
            self.bump();
            let v = match self.peek().clone() {
                Tok::Number(n) => self.constant(&n)?,
                other => return Err(self.error(format!("expected a weight, found {other}"))),
            };
            self.expect(Tok::RBrace)?;
            v
        } else {
            TruthValue::one()
        };
        let body = self.body()?;
        self.expect(Tok::Dot)?;
        Ok(Rule::new(head, weight, family, body))
    }

    fn body(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.conj()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let fam = self.family_tag()?.unwrap_or_else(|| self.default_family.clone());
            let right = self.conj()?;
            left = Formula::disj(&fam, left, right);
        }
        Ok(left)
    }

    fn conj(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.unit()?;
        while *self.peek() == Tok::And {
            self.bump();
            let fam = self.family_tag()?.unwrap_or_else(|| self.default_family.clone());
            let right = self.unit()?;
            left = Formula::conj(&fam, left, right);
        }
        Ok(left)
    }

    fn unit(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Number(n) => Ok(Formula::Const(self.constant(&n)?)),
            Tok::Tilde => {
                self.bump();
                match self.peek().clone() {
                    Tok::Ident(_) if *self.peek_at(1) != Tok::LParen => Ok(Formula::NegAtom(self.atom()?)),
                    Tok::Tilde | Tok::LParen | Tok::Ident(_) => {
                        Err(self.error("nested negation: `~` may only be applied directly to an atom in a normal fuzzy formula"))
                    }
                    other => Err(self.error(format!("`~` may only be applied to an atom, found {other}"))),
                }
            }
            Tok::Ident(name) if *self.peek_at(1) == Tok::LParen => {
                let agg = self.registry.aggregator(&name).map_err(|e| self.error(e.to_string()))?;
                self.bump();
                self.bump();
                let mut args = vec![self.body()?];
                while *self.peek() == Tok::Comma {
                    self.bump();
                    args.push(self.body()?);
                }
                self.expect(Tok::RParen)?;
                Ok(Formula::Agg(agg, args))
            }
            Tok::Ident(_) => Ok(Formula::Atom(self.atom()?)),
            Tok::LParen => {
                self.bump();
                let f = self.body()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            other => Err(self.error(format!("expected a formula, found {other}"))),
        }
    }
}

/// Parses with the builtin registry and Gödel as the default family.
pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    let registry = Registry::builtin();
    parse_program_with(text, &registry, registry.godel())
}

pub fn parse_program_with(text: &str, registry: &Registry, default_family: Family) -> Result<Program, ParseError> {
    Parser::new(registry, default_family).parse(text)
}
