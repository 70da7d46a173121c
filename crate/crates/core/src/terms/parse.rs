//! Recursive-descent parser for the statement grammar:
//!
//! ```text
//! statement := term ("<=" | "==") term
//! join      := meet ( "\/" meet )*
//! meet      := prod ( "/\" prod )*
//! prod      := factor ( "*" factor )*
//! factor    := atom ( "^-1" | "^n" | "^-n" )*
//! atom      := "e" | VAR | "(" join ")"
//! ```
//!
//! All binary operators associate to the left.

use super::{FRESH_PREFIX, LTerm, MonWord, Statement, StatementKind, Var};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default)]
pub struct ParseOptions {
    /// Accept variables with the reserved fresh-variable prefix. Machine-generated
    /// statements (inverse elimination, right-order queries) need this.
    pub allow_reserved_prefix: bool,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(u64),
    Star,
    MeetOp,
    JoinOp,
    Caret,
    Minus,
    LParen,
    RParen,
    Le,
    EqEq,
    End,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn tokenize(input: &str) -> Result<Vec<Spanned>> {
    let chars: Vec<char> = input.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, column);
        if c == '\n' {
            line += 1;
            column = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            column += 1;
            i += 1;
            continue;
        }
        let next = chars.get(i + 1).copied();
        let (tok, width) = match (c, next) {
            ('/', Some('\\')) => (Tok::MeetOp, 2),
            ('\\', Some('/')) => (Tok::JoinOp, 2),
            ('<', Some('=')) => (Tok::Le, 2),
            ('=', Some('=')) => (Tok::EqEq, 2),
            ('*', _) => (Tok::Star, 1),
            ('^', _) => (Tok::Caret, 1),
            ('-', _) => (Tok::Minus, 1),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            _ if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let n = text.parse::<u64>().map_err(|_| Error::Syntax {
                    line: l0,
                    column: c0,
                    message: format!("exponent `{text}` out of range"),
                })?;
                column += i - start;
                out.push(Spanned {
                    tok: Tok::Int(n),
                    line: l0,
                    column: c0,
                });
                continue;
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                column += i - start;
                out.push(Spanned {
                    tok: Tok::Ident(chars[start..i].iter().collect()),
                    line: l0,
                    column: c0,
                });
                continue;
            }
            _ => {
                return Err(Error::Syntax {
                    line: l0,
                    column: c0,
                    message: format!("unexpected character `{c}`"),
                })
            }
        };
        out.push(Spanned {
            tok,
            line: l0,
            column: c0,
        });
        i += width;
        column += width;
    }
    out.push(Spanned {
        tok: Tok::End,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    opts: ParseOptions,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        let t = &self.toks[self.pos];
        Err(Error::Syntax {
            line: t.line,
            column: t.column,
            message: message.into(),
        })
    }

    fn join(&mut self) -> Result<LTerm> {
        let mut t = self.meet()?;
        while *self.peek() == Tok::JoinOp {
            self.bump();
            t = LTerm::join(t, self.meet()?);
        }
        Ok(t)
    }

    fn meet(&mut self) -> Result<LTerm> {
        let mut t = self.prod()?;
        while *self.peek() == Tok::MeetOp {
            self.bump();
            t = LTerm::meet(t, self.prod()?);
        }
        Ok(t)
    }

    fn prod(&mut self) -> Result<LTerm> {
        let mut t = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            t = LTerm::product(t, self.factor()?);
        }
        Ok(t)
    }

    fn factor(&mut self) -> Result<LTerm> {
        let mut t = self.atom()?;
        while *self.peek() == Tok::Caret {
            self.bump();
            let negative = *self.peek() == Tok::Minus;
            if negative {
                self.bump();
            }
            let n = match self.peek().clone() {
                Tok::Int(n) if n >= 1 => n,
                Tok::Int(_) => return self.error("exponent must be a positive integer"),
                _ => return self.error("expected exponent after `^`"),
            };
            self.bump();
            let base = if negative { LTerm::inverse(t) } else { t };
            t = (1..n).fold(base.clone(), |acc, _| LTerm::product(acc, base.clone()));
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<LTerm> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let t = self.join()?;
                if *self.peek() != Tok::RParen {
                    return self.error("expected `)`");
                }
                self.bump();
                Ok(t)
            }
            Tok::Ident(name) if name == "e" => {
                self.bump();
                Ok(LTerm::Identity)
            }
            Tok::Ident(name) => {
                let t = self.bump();
                if !self.opts.allow_reserved_prefix && name.starts_with(FRESH_PREFIX) {
                    return Err(Error::Reserved {
                        name,
                        line: t.line,
                        column: t.column,
                    });
                }
                Ok(LTerm::Variable(Var::new(&name)))
            }
            Tok::End => self.error("unexpected end of input"),
            other => self.error(format!("unexpected token {other:?}")),
        }
    }

    fn expect_end(&self) -> Result<()> {
        if *self.peek() != Tok::End {
            return self.error(format!("unexpected trailing token {:?}", self.peek()));
        }
        Ok(())
    }
}

fn parser(input: &str, opts: ParseOptions) -> Result<Parser> {
    Ok(Parser {
        toks: tokenize(input)?,
        pos: 0,
        opts,
    })
}

pub fn parse_statement_with(input: &str, opts: ParseOptions) -> Result<Statement> {
    let mut p = parser(input, opts)?;
    let lhs = p.join()?;
    let kind = match p.peek() {
        Tok::Le => StatementKind::Leq,
        Tok::EqEq => StatementKind::Eq,
        _ => return p.error("expected `<=` or `==`"),
    };
    p.bump();
    let rhs = p.join()?;
    p.expect_end()?;
    Ok(Statement { kind, lhs, rhs })
}

/// Parses user input; the reserved `_y` prefix is rejected.
pub fn parse_statement(input: &str) -> Result<Statement> {
    parse_statement_with(input, ParseOptions::default())
}

pub fn parse_term_with(input: &str, opts: ParseOptions) -> Result<LTerm> {
    let mut p = parser(input, opts)?;
    let t = p.join()?;
    p.expect_end()?;
    Ok(t)
}

pub fn parse_term(input: &str) -> Result<LTerm> {
    parse_term_with(input, ParseOptions::default())
}

/// Parses a monoid word such as `x*y*x`, `x^2*y` or `e`.
pub fn parse_word(input: &str, opts: ParseOptions) -> Result<MonWord> {
    parse_term_with(input, opts)?.as_mon_word().ok_or_else(|| Error::Syntax {
        line: 1,
        column: 1,
        message: format!("`{}` is not a monoid word", input.trim()),
    })
}
