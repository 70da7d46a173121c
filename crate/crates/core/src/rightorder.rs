//! Right orders: total orders with `a <= b` implying `ac <= bc`.
//!
//! On a free monoid, the strict constraints `s_1 < t_1, ..., s_n < t_n` extend to a right
//! order exactly when `/\ t_i y_i <= \/ s_i y_i` fails in some distributive lattice-ordered
//! monoid, for distinct fresh `y_i`. The same answer decides extendability to a right order
//! on the free group. On an explicit finite monoid the orders are searched directly.

use std::collections::BTreeSet;

use serde_json::{json, Value as Json};

use crate::decide::{decide_dlm, SolverConfig, Verdict};
use crate::error::{Error, Result};
use crate::search::{deadline_for, solve, Budget, OrderProblem, SearchStats, Tracker};
use crate::terms::{FreshVarSupply, LTerm, MonWord, Statement};

/// Strict constraints `s < t` over a free monoid.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OrderQuery {
    pub constraints: BTreeSet<(MonWord, MonWord)>,
}

impl OrderQuery {
    pub fn new<I: IntoIterator<Item = (MonWord, MonWord)>>(constraints: I) -> Self {
        OrderQuery {
            constraints: constraints.into_iter().collect(),
        }
    }

    /// `/\ t_i y_i <= \/ s_i y_i` with fresh `y_i`; `None` for an empty query.
    pub fn to_statement(&self) -> Option<Statement> {
        let vars = self
            .constraints
            .iter()
            .flat_map(|(s, t)| s.vars().chain(t.vars()).cloned());
        let mut fresh = FreshVarSupply::new(vars);
        let (meets, joins): (Vec<LTerm>, Vec<LTerm>) = self
            .constraints
            .iter()
            .map(|(s, t)| {
                let y = fresh.next_var();
                (LTerm::from_word(&t.with(&y)), LTerm::from_word(&s.with(&y)))
            })
            .unzip();
        if meets.is_empty() {
            return None;
        }
        Some(Statement::leq(LTerm::meet_all(meets), LTerm::join_all(joins)))
    }
}

#[derive(Clone, Debug)]
pub struct FreeOrderAnswer {
    pub exists: bool,
    /// The statement whose failure is equivalent to existence; absent for an empty query.
    pub statement: Option<Statement>,
    /// When the order exists, the verdict carries the countermodel as evidence.
    pub verdict: Option<Verdict>,
}

pub fn right_order_exists_free(q: &OrderQuery, cfg: &SolverConfig) -> Result<FreeOrderAnswer> {
    let Some(statement) = q.to_statement() else {
        return Ok(FreeOrderAnswer {
            exists: true,
            statement: None,
            verdict: None,
        });
    };
    let verdict = decide_dlm(&statement, cfg)?;
    Ok(FreeOrderAnswer {
        exists: !verdict.is_valid(),
        statement: Some(statement),
        verdict: Some(verdict),
    })
}

/// A finite monoid on `0..size`, validated on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMonoid {
    size: usize,
    unit: usize,
    table: Vec<Vec<usize>>,
}

impl FiniteMonoid {
    pub fn new(unit: usize, table: Vec<Vec<usize>>) -> Result<Self> {
        let k = table.len();
        let bad = |m: String| Err(Error::InvalidMonoid(m));
        if k == 0 {
            return bad("empty carrier".into());
        }
        if unit >= k {
            return bad(format!("unit {unit} outside 0..{k}"));
        }
        for (a, row) in table.iter().enumerate() {
            if row.len() != k {
                return bad(format!("row {a} has {} entries, expected {k}", row.len()));
            }
            if let Some(&v) = row.iter().find(|&&v| v >= k) {
                return bad(format!("entry {v} in row {a} outside 0..{k}"));
            }
        }
        for a in 0..k {
            if table[unit][a] != a || table[a][unit] != a {
                return bad(format!("{unit} is not a unit for {a}"));
            }
        }
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return bad(format!("({a}*{b})*{c} differs from {a}*({b}*{c})"));
                    }
                }
            }
        }
        Ok(FiniteMonoid {
            size: k,
            unit,
            table,
        })
    }

    /// `{0, ..., n-1}` under addition mod `n`.
    pub fn cyclic_group(n: usize) -> Result<Self> {
        Self::new(0, (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect())
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn from_json(v: &Json) -> Result<Self> {
        let bad = |m: &str| Error::Malformed(m.to_string());
        let size = v["size"].as_u64().ok_or_else(|| bad("missing size"))? as usize;
        let unit = v["unit"].as_u64().ok_or_else(|| bad("missing unit"))? as usize;
        let table = v["table"]
            .as_array()
            .ok_or_else(|| bad("missing table"))?
            .iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(|| bad("table rows must be arrays"))?
                    .iter()
                    .map(|x| x.as_u64().map(|x| x as usize).ok_or_else(|| bad("bad table entry")))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if table.len() != size {
            return Err(Error::InvalidMonoid(format!(
                "size {size} but the table has {} rows",
                table.len()
            )));
        }
        Self::new(unit, table)
    }

    pub fn to_json(&self) -> Json {
        json!({ "size": self.size, "unit": self.unit, "table": self.table })
    }
}

/// A total order on a finite monoid, listed from least to greatest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoidOrder {
    pub ascending: Vec<usize>,
}

impl MonoidOrder {
    pub fn position(&self, a: usize) -> usize {
        self.ascending.iter().position(|&x| x == a).expect("element of the carrier")
    }

    /// Total, and `a <= b` implies `ac <= bc` for every `c`.
    pub fn is_right_order_of(&self, m: &FiniteMonoid) -> bool {
        let k = m.size();
        let mut sorted = self.ascending.clone();
        sorted.sort_unstable();
        if sorted != (0..k).collect::<Vec<_>>() {
            return false;
        }
        let pos: Vec<usize> = (0..k).map(|a| self.position(a)).collect();
        (0..k).all(|a| {
            (0..k).all(|b| {
                pos[a] > pos[b] || (0..k).all(|c| pos[m.mul(a, c)] <= pos[m.mul(b, c)])
            })
        })
    }
}

/// Complete search for a right order on `m`; `Ok((None, _))` means there is none.
pub fn right_order_exists_finite_monoid(
    m: &FiniteMonoid,
    budget: &Budget,
) -> Result<(Option<MonoidOrder>, SearchStats)> {
    let k = m.size();
    let shifts = (0..k)
        .map(|c| (0..k).map(|a| Some(m.mul(a, c))).collect())
        .collect();
    let problem = OrderProblem::new(k, shifts, Vec::new(), false, true);
    let mut tracker = Tracker::new(budget, deadline_for(budget));
    let found = solve(&problem, &mut tracker)?;
    let order = found.map(|rel| {
        let mut ascending: Vec<usize> = (0..k).collect();
        ascending.sort_by_key(|&a| (0..k).filter(|&b| rel.get(b, a).known() == Some(true)).count());
        MonoidOrder { ascending }
    });
    if let Some(o) = &order {
        if !o.is_right_order_of(m) {
            return Err(Error::CertificateRejected(format!(
                "search returned {:?}, which is not a right order",
                o.ascending
            )));
        }
    }
    Ok((order, tracker.stats()))
}
