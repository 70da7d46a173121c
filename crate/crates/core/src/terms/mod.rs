//! Terms over the signature `{/\, \/, *, ^-1, e}`, statements between them, and the
//! monoid and group words the decision procedures operate on.

mod parse;
mod word;

use std::collections::BTreeSet;
use std::fmt;

pub use parse::{parse_statement, parse_statement_with, parse_term, parse_term_with, parse_word, ParseOptions};
pub use word::{reduce_group_word, FreshVarSupply, GrpWord, Letter, MonWord, Var, FRESH_PREFIX};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum LTerm {
    Identity,
    Variable(Var),
    Inverse(Box<LTerm>),
    Product(Box<LTerm>, Box<LTerm>),
    Meet(Box<LTerm>, Box<LTerm>),
    Join(Box<LTerm>, Box<LTerm>),
}

impl LTerm {
    pub fn var(name: &str) -> LTerm {
        LTerm::Variable(Var::new(name))
    }

    pub fn inverse(t: LTerm) -> LTerm {
        LTerm::Inverse(Box::new(t))
    }

    pub fn product(a: LTerm, b: LTerm) -> LTerm {
        LTerm::Product(Box::new(a), Box::new(b))
    }

    pub fn meet(a: LTerm, b: LTerm) -> LTerm {
        LTerm::Meet(Box::new(a), Box::new(b))
    }

    pub fn join(a: LTerm, b: LTerm) -> LTerm {
        LTerm::Join(Box::new(a), Box::new(b))
    }

    /// Left-associated product of the letters; `e` for the empty word.
    pub fn from_word(w: &MonWord) -> LTerm {
        w.letters()
            .iter()
            .map(|v| LTerm::Variable(v.clone()))
            .reduce(LTerm::product)
            .unwrap_or(LTerm::Identity)
    }

    pub fn from_group_word(w: &GrpWord) -> LTerm {
        w.letters()
            .iter()
            .map(|l| {
                let v = LTerm::Variable(l.var.clone());
                if l.inverted {
                    LTerm::inverse(v)
                } else {
                    v
                }
            })
            .reduce(LTerm::product)
            .unwrap_or(LTerm::Identity)
    }

    /// Left-associated meet. Panics on an empty iterator.
    pub fn meet_all<I: IntoIterator<Item = LTerm>>(terms: I) -> LTerm {
        terms.into_iter().reduce(LTerm::meet).expect("empty meet")
    }

    /// Left-associated join. Panics on an empty iterator.
    pub fn join_all<I: IntoIterator<Item = LTerm>>(terms: I) -> LTerm {
        terms.into_iter().reduce(LTerm::join).expect("empty join")
    }

    pub fn is_inverse_free(&self) -> bool {
        match self {
            LTerm::Identity | LTerm::Variable(_) => true,
            LTerm::Inverse(_) => false,
            LTerm::Product(a, b) | LTerm::Meet(a, b) | LTerm::Join(a, b) => {
                a.is_inverse_free() && b.is_inverse_free()
            }
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            LTerm::Identity => {}
            LTerm::Variable(v) => {
                out.insert(v.clone());
            }
            LTerm::Inverse(a) => a.collect_vars(out),
            LTerm::Product(a, b) | LTerm::Meet(a, b) | LTerm::Join(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    /// Flattens a term built only from products, variables and `e`.
    pub fn as_mon_word(&self) -> Option<MonWord> {
        fn walk(t: &LTerm, out: &mut Vec<Var>) -> bool {
            match t {
                LTerm::Identity => true,
                LTerm::Variable(v) => {
                    out.push(v.clone());
                    true
                }
                LTerm::Product(a, b) => walk(a, out) && walk(b, out),
                _ => false,
            }
        }
        let mut letters = Vec::new();
        walk(self, &mut letters).then(|| MonWord::new(letters))
    }

    fn precedence(&self) -> u8 {
        match self {
            LTerm::Join(..) => 1,
            LTerm::Meet(..) => 2,
            LTerm::Product(..) => 3,
            LTerm::Inverse(..) | LTerm::Identity | LTerm::Variable(_) => 4,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            f.write_str("(")?;
            self.fmt_at(f, 0)?;
            return f.write_str(")");
        }
        match self {
            LTerm::Identity => f.write_str("e"),
            LTerm::Variable(v) => write!(f, "{v}"),
            LTerm::Inverse(a) => {
                a.fmt_at(f, 4)?;
                f.write_str("^-1")
            }
            LTerm::Product(a, b) => {
                a.fmt_at(f, 3)?;
                f.write_str("*")?;
                b.fmt_at(f, 4)
            }
            LTerm::Meet(a, b) => {
                a.fmt_at(f, 2)?;
                f.write_str(" /\\ ")?;
                b.fmt_at(f, 3)
            }
            LTerm::Join(a, b) => {
                a.fmt_at(f, 1)?;
                f.write_str(" \\/ ")?;
                b.fmt_at(f, 2)
            }
        }
    }
}

impl fmt::Display for LTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum StatementKind {
    /// `s <= t`, shorthand for `s /\ t == s`.
    Leq,
    Eq,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Statement {
    pub kind: StatementKind,
    pub lhs: LTerm,
    pub rhs: LTerm,
}

impl Statement {
    pub fn leq(lhs: LTerm, rhs: LTerm) -> Self {
        Statement {
            kind: StatementKind::Leq,
            lhs,
            rhs,
        }
    }

    pub fn eq(lhs: LTerm, rhs: LTerm) -> Self {
        Statement {
            kind: StatementKind::Eq,
            lhs,
            rhs,
        }
    }

    pub fn is_inverse_free(&self) -> bool {
        self.lhs.is_inverse_free() && self.rhs.is_inverse_free()
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.lhs.collect_vars(&mut out);
        self.rhs.collect_vars(&mut out);
        out
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.kind {
            StatementKind::Leq => "<=",
            StatementKind::Eq => "==",
        };
        write!(f, "{} {op} {}", self.lhs, self.rhs)
    }
}

pub fn render_statement(s: &Statement) -> String {
    s.to_string()
}
