//! Normalization of statements into basic inequalities `/\ meets <= \/ joins` over words.
//!
//! Terms are pushed bottom-up into two shapes: a join of meets (used for left-hand
//! sides) and a meet of joins (used for right-hand sides). Products distribute over
//! both lattice operations on either side, and inverses are pushed to the letters by
//! `(a \/ b)^-1 = a^-1 /\ b^-1`, `(a /\ b)^-1 = a^-1 \/ b^-1`, `(ab)^-1 = b^-1 a^-1`.
//! Everything is computed over reduced group words; the monoid mode is the inverse-free
//! special case.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::terms::{GrpWord, LTerm, Letter, MonWord, Statement, StatementKind};

pub const DEFAULT_SIZE_CAP: usize = 1_000_000;

/// A set of sets of words. Read as a join of meets or a meet of joins depending on context.
type Nested = BTreeSet<BTreeSet<GrpWord>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Monoid,
    Group,
}

/// `/\ meets <= \/ joins`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct BasicIneq<W> {
    pub meets: BTreeSet<W>,
    pub joins: BTreeSet<W>,
}

impl BasicIneq<MonWord> {
    pub fn to_statement(&self) -> Statement {
        Statement::leq(
            LTerm::meet_all(self.meets.iter().map(LTerm::from_word)),
            LTerm::join_all(self.joins.iter().map(LTerm::from_word)),
        )
    }
}

impl BasicIneq<GrpWord> {
    pub fn to_statement(&self) -> Statement {
        Statement::leq(
            LTerm::meet_all(self.meets.iter().map(LTerm::from_group_word)),
            LTerm::join_all(self.joins.iter().map(LTerm::from_group_word)),
        )
    }

    fn to_monoid(&self) -> Option<BasicIneq<MonWord>> {
        let conv = |ws: &BTreeSet<GrpWord>| -> Option<BTreeSet<MonWord>> {
            ws.iter().map(GrpWord::to_mon_word).collect()
        };
        Some(BasicIneq {
            meets: conv(&self.meets)?,
            joins: conv(&self.joins)?,
        })
    }
}

impl<W: fmt::Display> fmt::Display for BasicIneq<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |ws: &BTreeSet<W>, sep: &str| {
            ws.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(sep)
        };
        write!(f, "{} <= {}", join(&self.meets, " /\\ "), join(&self.joins, " \\/ "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BasicInequalities {
    Monoid(Vec<BasicIneq<MonWord>>),
    Group(Vec<BasicIneq<GrpWord>>),
}

struct Normalizer {
    cap: usize,
}

impl Normalizer {
    fn check(&self, n: Nested) -> Result<Nested> {
        let size: usize = n.iter().map(BTreeSet::len).sum();
        if size > self.cap {
            return Err(Error::SizeCapExceeded { cap: self.cap });
        }
        Ok(n)
    }

    fn singleton(w: GrpWord) -> Nested {
        BTreeSet::from([BTreeSet::from([w])])
    }

    /// Pairwise union of components: meet of two joins-of-meets, or join of two meets-of-joins.
    fn cross_union(&self, a: &Nested, b: &Nested) -> Result<Nested> {
        let mut out = Nested::new();
        for x in a {
            for y in b {
                out.insert(x.union(y).cloned().collect());
            }
        }
        self.check(out)
    }

    /// Product of two normal forms of the same shape. `(/\A)(/\B) = /\{ab}` and
    /// `(\/A)(\/B) = \/{ab}` both hold by distributivity of the product.
    fn cross_product(&self, a: &Nested, b: &Nested) -> Result<Nested> {
        let mut out = Nested::new();
        for x in a {
            for y in b {
                let mut comp = BTreeSet::new();
                for u in x {
                    for v in y {
                        comp.insert(u.concat(v));
                    }
                }
                out.insert(comp);
            }
        }
        self.check(out)
    }

    fn invert(n: &Nested) -> Nested {
        n.iter()
            .map(|comp| comp.iter().map(GrpWord::inverse).collect())
            .collect()
    }

    /// Join of meets.
    fn dnf(&self, t: &LTerm) -> Result<Nested> {
        match t {
            LTerm::Identity => Ok(Self::singleton(GrpWord::identity())),
            LTerm::Variable(v) => Ok(Self::singleton(GrpWord::letter(Letter::pos(v.clone())))),
            LTerm::Inverse(a) => Ok(Self::invert(&self.cnf(a)?)),
            LTerm::Product(a, b) => self.cross_product(&self.dnf(a)?, &self.dnf(b)?),
            LTerm::Meet(a, b) => self.cross_union(&self.dnf(a)?, &self.dnf(b)?),
            LTerm::Join(a, b) => {
                let mut out = self.dnf(a)?;
                out.extend(self.dnf(b)?);
                self.check(out)
            }
        }
    }

    /// Meet of joins.
    fn cnf(&self, t: &LTerm) -> Result<Nested> {
        match t {
            LTerm::Identity => Ok(Self::singleton(GrpWord::identity())),
            LTerm::Variable(v) => Ok(Self::singleton(GrpWord::letter(Letter::pos(v.clone())))),
            LTerm::Inverse(a) => Ok(Self::invert(&self.dnf(a)?)),
            LTerm::Product(a, b) => self.cross_product(&self.cnf(a)?, &self.cnf(b)?),
            LTerm::Join(a, b) => self.cross_union(&self.cnf(a)?, &self.cnf(b)?),
            LTerm::Meet(a, b) => {
                let mut out = self.cnf(a)?;
                out.extend(self.cnf(b)?);
                self.check(out)
            }
        }
    }

    fn basic(&self, s: &Statement) -> Result<Vec<BasicIneq<GrpWord>>> {
        let directions: Vec<(&LTerm, &LTerm)> = match s.kind {
            StatementKind::Leq => vec![(&s.lhs, &s.rhs)],
            StatementKind::Eq => vec![(&s.lhs, &s.rhs), (&s.rhs, &s.lhs)],
        };
        let mut out = BTreeSet::new();
        for (lhs, rhs) in directions {
            let left = self.dnf(lhs)?;
            let right = self.cnf(rhs)?;
            for meets in &left {
                for joins in &right {
                    out.insert(BasicIneq {
                        meets: meets.clone(),
                        joins: joins.clone(),
                    });
                }
            }
        }
        let size: usize = out.iter().map(|b| b.meets.len() + b.joins.len()).sum();
        if size > self.cap {
            return Err(Error::SizeCapExceeded { cap: self.cap });
        }
        Ok(out.into_iter().collect())
    }
}

/// Group-mode basic inequalities: all words are freely reduced group words.
pub fn group_basic_inequalities(s: &Statement, cap: usize) -> Result<Vec<BasicIneq<GrpWord>>> {
    Normalizer { cap }.basic(s)
}

/// Monoid-mode basic inequalities. Fails with [`Error::NotInverseFree`] on inverses.
pub fn monoid_basic_inequalities(s: &Statement, cap: usize) -> Result<Vec<BasicIneq<MonWord>>> {
    if !s.is_inverse_free() {
        return Err(Error::NotInverseFree);
    }
    Ok(group_basic_inequalities(s, cap)?
        .iter()
        .map(|b| b.to_monoid().expect("inverse-free input yields monoid words"))
        .collect())
}

pub fn to_basic_inequalities(s: &Statement, mode: Mode, cap: usize) -> Result<BasicInequalities> {
    match mode {
        Mode::Monoid => monoid_basic_inequalities(s, cap).map(BasicInequalities::Monoid),
        Mode::Group => group_basic_inequalities(s, cap).map(BasicInequalities::Group),
    }
}

/// Join-sets `u_1, ..., u_k` with `t` equivalent in lattice-ordered groups to
/// `/\_i \/ u_i`.
pub fn group_normal_meet_of_joins(t: &LTerm, cap: usize) -> Result<Vec<BTreeSet<GrpWord>>> {
    Ok(Normalizer { cap }.cnf(t)?.into_iter().collect())
}
