//! Brute-force ground truth: all order-endomorphisms of small chains, all totally ordered
//! monoids of small size, and exhaustive evaluation over them.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::models::{eval_in_end, ChainEndo};
use crate::rightorder::FiniteMonoid;
use crate::search::Budget;
use crate::terms::{LTerm, Statement, StatementKind, Var};

/// All order-preserving self-maps of `0..n` in lexicographic order; there are
/// `C(2n-1, n-1)` of them.
pub fn enumerate_endomorphisms(n: usize) -> Vec<ChainEndo> {
    fn extend(n: usize, cur: &mut Vec<usize>, out: &mut Vec<ChainEndo>) {
        if cur.len() == n {
            out.push(ChainEndo::new(cur.clone()).expect("nondecreasing by construction"));
            return;
        }
        let from = cur.last().copied().unwrap_or(0);
        for v in from..n {
            cur.push(v);
            extend(n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        extend(n, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

/// The monoid of order-endomorphisms of the `n`-chain, elements indexed as in
/// [`enumerate_endomorphisms`], with `a*b` meaning `a` then `b`.
pub fn end_monoid(n: usize) -> FiniteMonoid {
    let elems = enumerate_endomorphisms(n);
    let index: BTreeMap<&ChainEndo, usize> = elems.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let table = elems
        .iter()
        .map(|f| elems.iter().map(|g| index[&f.then(g)]).collect())
        .collect();
    let unit = index[&ChainEndo::identity(n)];
    FiniteMonoid::new(unit, table).expect("composition is associative")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleVerdict {
    Valid,
    Invalid { assignment: BTreeMap<Var, ChainEndo>, point: usize },
}

impl OracleVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, OracleVerdict::Valid)
    }
}

/// Default cap on assignments examined by [`oracle_dlm_validity`].
pub const DEFAULT_MAX_ASSIGNMENTS: u64 = 10_000_000;

/// Checks an inverse-free statement in the endomorphisms of the `n`-chain under every
/// assignment and at every point. The witness is the first failure in enumeration order.
pub fn oracle_dlm_validity(s: &Statement, n: usize, max_assignments: u64) -> Result<OracleVerdict> {
    if !s.is_inverse_free() {
        return Err(Error::NotInverseFree);
    }
    if n == 0 {
        return Err(Error::Range("chain size must be positive".into()));
    }
    let vars: Vec<Var> = s.vars().into_iter().collect();
    let endos = enumerate_endomorphisms(n);
    let total = (endos.len() as u64)
        .checked_pow(vars.len() as u32)
        .filter(|&t| t <= max_assignments)
        .ok_or(Error::BudgetExceeded {
            nodes: max_assignments,
            elapsed: std::time::Duration::ZERO,
        })?;
    let decode = |mut idx: u64| -> BTreeMap<Var, ChainEndo> {
        let mut a = BTreeMap::new();
        for v in vars.iter().rev() {
            let e = endos.len() as u64;
            a.insert(v.clone(), endos[(idx % e) as usize].clone());
            idx /= e;
        }
        a
    };
    let failure = (0..total).into_par_iter().find_map_first(|idx| {
        let a = decode(idx);
        (0..n)
            .find(|&p| {
                let l = eval_in_end(&a, &s.lhs, p).expect("assignment covers the statement");
                let r = eval_in_end(&a, &s.rhs, p).expect("assignment covers the statement");
                match s.kind {
                    StatementKind::Leq => l > r,
                    StatementKind::Eq => l != r,
                }
            })
            .map(|point| (a, point))
    });
    Ok(match failure {
        None => OracleVerdict::Valid,
        Some((assignment, point)) => OracleVerdict::Invalid { assignment, point },
    })
}

/// A finite monoid totally ordered by `0 < 1 < ... < size-1`, with multiplication
/// order-preserving in both arguments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedMonoid {
    pub monoid: FiniteMonoid,
}

impl OrderedMonoid {
    pub fn new(unit: usize, table: Vec<Vec<usize>>) -> Result<Self> {
        let monoid = FiniteMonoid::new(unit, table)?;
        let k = monoid.size();
        for a in 0..k {
            for c in 0..k {
                if a + 1 < k {
                    let b = a + 1;
                    if monoid.mul(a, c) > monoid.mul(b, c) || monoid.mul(c, a) > monoid.mul(c, b) {
                        return Err(Error::InvalidMonoid(format!(
                            "multiplication by {c} is not order-preserving"
                        )));
                    }
                }
            }
        }
        Ok(OrderedMonoid { monoid })
    }

    pub fn size(&self) -> usize {
        self.monoid.size()
    }
}

pub fn eval_in_ordered_monoid(
    m: &OrderedMonoid,
    assignment: &BTreeMap<Var, usize>,
    t: &LTerm,
) -> Result<usize> {
    Ok(match t {
        LTerm::Identity => m.monoid.unit(),
        LTerm::Variable(v) => *assignment
            .get(v)
            .ok_or_else(|| Error::Unassigned(v.to_string()))?,
        LTerm::Inverse(_) => return Err(Error::NotInverseFree),
        LTerm::Product(a, b) => m
            .monoid
            .mul(eval_in_ordered_monoid(m, assignment, a)?, eval_in_ordered_monoid(m, assignment, b)?),
        LTerm::Meet(a, b) => eval_in_ordered_monoid(m, assignment, a)?
            .min(eval_in_ordered_monoid(m, assignment, b)?),
        LTerm::Join(a, b) => eval_in_ordered_monoid(m, assignment, a)?
            .max(eval_in_ordered_monoid(m, assignment, b)?),
    })
}

/// First assignment (in lexicographic order over the sorted variables) falsifying `s`.
pub fn ordered_monoid_counterexample(
    m: &OrderedMonoid,
    s: &Statement,
) -> Result<Option<BTreeMap<Var, usize>>> {
    let vars: Vec<Var> = s.vars().into_iter().collect();
    let k = m.size();
    let mut digits = vec![0usize; vars.len()];
    loop {
        let a: BTreeMap<Var, usize> = vars.iter().cloned().zip(digits.iter().copied()).collect();
        let l = eval_in_ordered_monoid(m, &a, &s.lhs)?;
        let r = eval_in_ordered_monoid(m, &a, &s.rhs)?;
        let fails = match s.kind {
            StatementKind::Leq => l > r,
            StatementKind::Eq => l != r,
        };
        if fails {
            return Ok(Some(a));
        }
        // Odometer increment, last variable fastest.
        let mut i = digits.len();
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < k {
                break;
            }
            digits[i] = 0;
        }
    }
}

struct TableSearch<'a> {
    n: usize,
    table: Vec<Vec<Option<usize>>>,
    nodes: u64,
    budget: &'a Budget,
    start: std::time::Instant,
    out: Vec<OrderedMonoid>,
}

impl TableSearch<'_> {
    /// Monotonicity of cell `(a, b)` against its known neighbours in row and column.
    fn monotone_at(&self, a: usize, b: usize) -> bool {
        let v = self.table[a][b].expect("cell assigned");
        let t = &self.table;
        (0..self.n).all(|c| {
            let col_ok = match t[c][b] {
                Some(w) => (c < a && w <= v) || (c > a && w >= v) || c == a,
                None => true,
            };
            let row_ok = match t[a][c] {
                Some(w) => (c < b && w <= v) || (c > b && w >= v) || c == b,
                None => true,
            };
            col_ok && row_ok
        })
    }

    /// Associativity on every triple whose products are all known.
    fn associative_so_far(&self) -> bool {
        let t = &self.table;
        let n = self.n;
        for a in 0..n {
            for b in 0..n {
                let Some(ab) = t[a][b] else { continue };
                for c in 0..n {
                    let (Some(bc), Some(ab_c)) = (t[b][c], t[ab][c]) else { continue };
                    if let Some(a_bc) = t[a][bc] {
                        if ab_c != a_bc {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    fn fill(&mut self, unit: usize, cell: usize) -> Result<()> {
        self.nodes += 1;
        let out_of_time = self.budget.max_time.is_some_and(|t| self.start.elapsed() > t);
        if self.nodes > self.budget.max_nodes || out_of_time {
            return Err(Error::BudgetExceeded {
                nodes: self.nodes,
                elapsed: self.start.elapsed(),
            });
        }
        let n = self.n;
        if cell == n * n {
            let table = self
                .table
                .iter()
                .map(|row| row.iter().map(|v| v.expect("complete table")).collect())
                .collect();
            self.out.push(OrderedMonoid::new(unit, table)?);
            return Ok(());
        }
        let (a, b) = (cell / n, cell % n);
        if self.table[a][b].is_some() {
            return self.fill(unit, cell + 1);
        }
        for v in 0..n {
            self.table[a][b] = Some(v);
            if self.monotone_at(a, b) && self.associative_so_far() {
                self.fill(unit, cell + 1)?;
            }
        }
        self.table[a][b] = None;
        Ok(())
    }
}

/// Every totally ordered monoid on `0 < ... < n-1`, as distinct tables (isomorphic copies
/// are kept). The unit is chosen first, then cells are filled in row-major order.
pub fn enumerate_ordered_monoids(n: usize, budget: &Budget) -> Result<Vec<OrderedMonoid>> {
    let mut search = TableSearch {
        n,
        table: Vec::new(),
        nodes: 0,
        budget,
        start: std::time::Instant::now(),
        out: Vec::new(),
    };
    for unit in 0..n {
        search.table = vec![vec![None; n]; n];
        for a in 0..n {
            search.table[unit][a] = Some(a);
            search.table[a][unit] = Some(a);
        }
        let consistent = (0..n).all(|a| search.monotone_at(unit, a) && search.monotone_at(a, unit));
        if consistent {
            search.fill(unit, 0)?;
        }
    }
    Ok(search.out)
}

/// Whether `f g = id` implies `g f = id` for all `f, g` in the endomorphisms of the
/// `n`-chain.
pub fn one_sided_inverses_are_two_sided(n: usize) -> bool {
    let endos = enumerate_endomorphisms(n);
    let id = ChainEndo::identity(n);
    endos.iter().all(|f| {
        endos
            .iter()
            .all(|g| f.then(g) != id || g.then(f) == id)
    })
}

/// First `(f, g, h)` with `f h = g h` and `f != g` among the endomorphisms of the
/// `n`-chain.
pub fn right_cancellation_failure(n: usize) -> Option<(ChainEndo, ChainEndo, ChainEndo)> {
    let endos = enumerate_endomorphisms(n);
    for f in &endos {
        for g in &endos {
            if f == g {
                continue;
            }
            for h in &endos {
                if f.then(h) == g.then(h) {
                    return Some((f.clone(), g.clone(), h.clone()));
                }
            }
        }
    }
    None
}
