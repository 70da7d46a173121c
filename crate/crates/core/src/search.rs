//! Three-valued propagation and backtracking over total (pre)orders.
//!
//! A relation on `0..n` is a matrix of [`Tri`] cells, `le[i][j]` meaning `i <= j`.
//! Propagation runs to a fixpoint over these rules:
//!
//! - reflexivity, and the required strict pairs `a < b` (`le[a][b]`, `!le[b][a]`);
//! - totality: `!le[i][j]` forces `le[j][i]`;
//! - transitivity and both of its contrapositives;
//! - invariance under each generator `g` (a partial map on `0..n`):
//!   `le[i][j]` forces `le[g(i)][g(j)]`, and contrapositively;
//! - strict invariance (optional): `!le[j][i]` forces `!le[g(j)][g(i)]`, and contrapositively;
//! - antisymmetry (optional, for orders rather than preorders).
//!
//! Search branches on an unknown cell, `true` first, and is complete: exhausting the
//! stack means no relation satisfies the rules.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Tri {
    Unknown,
    True,
    False,
}

impl Tri {
    pub fn from_bool(b: bool) -> Tri {
        if b {
            Tri::True
        } else {
            Tri::False
        }
    }

    pub fn known(self) -> Option<bool> {
        match self {
            Tri::Unknown => None,
            Tri::True => Some(true),
            Tri::False => Some(false),
        }
    }
}

/// Square matrix of three-valued cells.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct TriMatrix {
    n: usize,
    cells: Vec<Tri>,
}

impl TriMatrix {
    pub fn new(n: usize) -> Self {
        TriMatrix {
            n,
            cells: vec![Tri::Unknown; n * n],
        }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut m = TriMatrix::new(n);
        for i in 0..n {
            for j in 0..n {
                m.cells[i * n + j] = Tri::from_bool(f(i, j));
            }
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Tri {
        self.cells[i * self.n + j]
    }

    #[inline]
    pub fn put(&mut self, i: usize, j: usize, v: Tri) {
        self.cells[i * self.n + j] = v;
    }

    pub fn is_determined(&self) -> bool {
        !self.cells.contains(&Tri::Unknown)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: u64,
    pub max_time: Option<Duration>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_nodes: 10_000_000,
            max_time: Some(Duration::from_secs(60)),
        }
    }
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget {
            max_nodes: u64::MAX,
            max_time: None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub conflicts: u64,
}

impl std::ops::AddAssign for SearchStats {
    fn add_assign(&mut self, o: SearchStats) {
        self.nodes += o.nodes;
        self.conflicts += o.conflicts;
    }
}

/// Node and wall-clock accounting for one search.
pub(crate) struct Tracker {
    max_nodes: u64,
    start: Instant,
    deadline: Option<Instant>,
    stats: SearchStats,
}

impl Tracker {
    pub(crate) fn new(budget: &Budget, deadline: Option<Instant>) -> Self {
        Tracker {
            max_nodes: budget.max_nodes,
            start: Instant::now(),
            deadline,
            stats: SearchStats::default(),
        }
    }

    fn tick(&mut self) -> Result<()> {
        self.stats.nodes += 1;
        let out_of_time = self.deadline.is_some_and(|d| Instant::now() > d);
        if self.stats.nodes > self.max_nodes || out_of_time {
            return Err(Error::BudgetExceeded {
                nodes: self.stats.nodes,
                elapsed: self.start.elapsed(),
            });
        }
        Ok(())
    }

    pub(crate) fn stats(&self) -> SearchStats {
        self.stats
    }
}

pub(crate) fn deadline_for(budget: &Budget) -> Option<Instant> {
    budget.max_time.map(|t| Instant::now() + t)
}

/// A search instance: carrier `0..n`, generators acting on the right, and required
/// strict pairs.
#[derive(Clone, Debug)]
pub(crate) struct OrderProblem {
    pub n: usize,
    shifts: Vec<Vec<Option<usize>>>,
    preimages: Vec<Vec<Vec<usize>>>,
    pub strict_pairs: Vec<(usize, usize)>,
    pub strict_invariance: bool,
    pub antisymmetric: bool,
}

impl OrderProblem {
    pub fn new(
        n: usize,
        shifts: Vec<Vec<Option<usize>>>,
        strict_pairs: Vec<(usize, usize)>,
        strict_invariance: bool,
        antisymmetric: bool,
    ) -> Self {
        let preimages = shifts
            .iter()
            .map(|g| {
                let mut pre = vec![Vec::new(); n];
                for (i, img) in g.iter().enumerate() {
                    if let Some(k) = img {
                        pre[*k].push(i);
                    }
                }
                pre
            })
            .collect();
        OrderProblem {
            n,
            shifts,
            preimages,
            strict_pairs,
            strict_invariance,
            antisymmetric,
        }
    }
}

struct Propagator<'a> {
    p: &'a OrderProblem,
    m: TriMatrix,
    queue: Vec<(usize, usize)>,
}

impl Propagator<'_> {
    /// Returns false on conflict.
    #[inline]
    fn set(&mut self, i: usize, j: usize, v: Tri) -> bool {
        let cur = self.m.get(i, j);
        if cur == v {
            return true;
        }
        if cur != Tri::Unknown {
            return false;
        }
        self.m.put(i, j, v);
        self.queue.push((i, j));
        true
    }

    fn run(&mut self) -> bool {
        let n = self.p.n;
        while let Some((i, j)) = self.queue.pop() {
            let ok = match self.m.get(i, j) {
                Tri::True => self.on_true(i, j, n),
                Tri::False => self.on_false(i, j, n),
                Tri::Unknown => unreachable!("queued cells are assigned"),
            };
            if !ok {
                return false;
            }
        }
        true
    }

    fn on_true(&mut self, i: usize, j: usize, n: usize) -> bool {
        if self.p.antisymmetric && i != j && !self.set(j, i, Tri::False) {
            return false;
        }
        for k in 0..n {
            if self.m.get(j, k) == Tri::True && !self.set(i, k, Tri::True) {
                return false;
            }
            if self.m.get(k, i) == Tri::True && !self.set(k, j, Tri::True) {
                return false;
            }
            if self.m.get(i, k) == Tri::False && !self.set(j, k, Tri::False) {
                return false;
            }
            if self.m.get(k, j) == Tri::False && !self.set(k, i, Tri::False) {
                return false;
            }
        }
        let p = self.p;
        for (g, shift) in p.shifts.iter().enumerate() {
            if let (Some(a), Some(b)) = (shift[i], shift[j]) {
                if !self.set(a, b, Tri::True) {
                    return false;
                }
            }
            if p.strict_invariance {
                for &a in &p.preimages[g][i] {
                    for &b in &p.preimages[g][j] {
                        if !self.set(a, b, Tri::True) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    fn on_false(&mut self, i: usize, j: usize, n: usize) -> bool {
        if !self.set(j, i, Tri::True) {
            return false;
        }
        for k in 0..n {
            if self.m.get(i, k) == Tri::True && !self.set(k, j, Tri::False) {
                return false;
            }
            if self.m.get(k, j) == Tri::True && !self.set(i, k, Tri::False) {
                return false;
            }
        }
        let p = self.p;
        for (g, shift) in p.shifts.iter().enumerate() {
            for &a in &p.preimages[g][i] {
                for &b in &p.preimages[g][j] {
                    if !self.set(a, b, Tri::False) {
                        return false;
                    }
                }
            }
            if p.strict_invariance {
                if let (Some(a), Some(b)) = (shift[i], shift[j]) {
                    if !self.set(a, b, Tri::False) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Most-constrained unknown cell: maximizes the number of known cells in the two rows
/// involved; ties go to the first cell in row-major order.
fn choose(m: &TriMatrix) -> Option<(usize, usize)> {
    let n = m.size();
    let known: Vec<usize> = (0..n)
        .map(|i| (0..n).filter(|&j| m.get(i, j) != Tri::Unknown).count())
        .collect();
    let mut best: Option<((usize, usize), usize)> = None;
    for i in 0..n {
        for j in 0..n {
            if m.get(i, j) == Tri::Unknown {
                let score = known[i] + known[j];
                if best.is_none_or(|(_, s)| score > s) {
                    best = Some(((i, j), score));
                }
            }
        }
    }
    best.map(|(cell, _)| cell)
}

/// Complete search. `Ok(None)` means the space was exhausted without a solution.
pub(crate) fn solve(p: &OrderProblem, tracker: &mut Tracker) -> Result<Option<TriMatrix>> {
    let mut root = Propagator {
        p,
        m: TriMatrix::new(p.n),
        queue: Vec::new(),
    };
    let mut ok = true;
    for i in 0..p.n {
        ok &= root.set(i, i, Tri::True);
    }
    for &(a, b) in &p.strict_pairs {
        ok = ok && root.set(a, b, Tri::True) && root.set(b, a, Tri::False);
    }
    tracker.tick()?;
    if !ok || !root.run() {
        tracker.stats.conflicts += 1;
        return Ok(None);
    }

    let mut stack: Vec<(TriMatrix, Option<(usize, usize, Tri)>)> = vec![(root.m, None)];
    while let Some((m, decision)) = stack.pop() {
        let mut prop = Propagator {
            p,
            m,
            queue: Vec::new(),
        };
        if let Some((i, j, v)) = decision {
            tracker.tick()?;
            if !prop.set(i, j, v) || !prop.run() {
                tracker.stats.conflicts += 1;
                continue;
            }
        }
        match choose(&prop.m) {
            None => return Ok(Some(prop.m)),
            Some((i, j)) => {
                stack.push((prop.m.clone(), Some((i, j, Tri::False))));
                stack.push((prop.m, Some((i, j, Tri::True))));
            }
        }
    }
    Ok(None)
}
