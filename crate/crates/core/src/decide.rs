//! Decision procedure for inverse-free statements.
//!
//! A basic inequality `/\ t_i <= \/ s_j` fails in some distributive lattice-ordered monoid
//! exactly when there is a total right-invariant preorder on the initial subterms of
//! `S = {(s_j, t_i)}` with every `s_j` strictly below every `t_i`; it fails in some
//! lattice-ordered group exactly when such a preorder exists that is also strictly
//! right-invariant. Both are finite searches.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::models::{build_end_countermodel, build_pl_countermodel, Countermodel};
use crate::normalform::{monoid_basic_inequalities, BasicIneq, DEFAULT_SIZE_CAP};
use crate::search::{deadline_for, solve, Budget, OrderProblem, SearchStats, Tracker, Tri, TriMatrix};
use crate::terms::{MonWord, Statement, Var};

/// Ordered pairs `(s, t)` that must satisfy `s < t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairSet {
    pairs: Vec<(MonWord, MonWord)>,
    alphabet: BTreeSet<Var>,
}

impl PairSet {
    pub fn new<I: IntoIterator<Item = (MonWord, MonWord)>>(pairs: I) -> Self {
        let pairs: BTreeSet<(MonWord, MonWord)> = pairs.into_iter().collect();
        let alphabet = pairs
            .iter()
            .flat_map(|(s, t)| s.vars().chain(t.vars()).cloned())
            .collect();
        PairSet {
            pairs: pairs.into_iter().collect(),
            alphabet,
        }
    }

    /// `S = {(s_j, t_i)}` for `/\ t_i <= \/ s_j`.
    pub fn from_inequality(b: &BasicIneq<MonWord>) -> Self {
        PairSet::new(
            b.joins
                .iter()
                .flat_map(|s| b.meets.iter().map(move |t| (s.clone(), t.clone()))),
        )
    }

    pub fn pairs(&self) -> &[(MonWord, MonWord)] {
        &self.pairs
    }

    pub fn alphabet(&self) -> &BTreeSet<Var> {
        &self.alphabet
    }

    /// The inequality refuted by any model separating all pairs: the meet of the second
    /// components below the join of the first components.
    pub fn to_inequality(&self) -> BasicIneq<MonWord> {
        BasicIneq {
            meets: self.pairs.iter().map(|(_, t)| t.clone()).collect(),
            joins: self.pairs.iter().map(|(s, _)| s.clone()).collect(),
        }
    }
}

/// A prefix-closed set of words containing `e`, indexed in shortlex order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubtermSet {
    words: Vec<MonWord>,
    index: HashMap<MonWord, usize>,
    alphabet: Vec<Var>,
    /// `ext[g][i]`: index of `words[i]` followed by `alphabet[g]`, when present.
    ext: Vec<Vec<Option<usize>>>,
}

impl SubtermSet {
    /// Builds the set from explicit words; fails unless they are prefix-closed.
    pub fn from_words<I: IntoIterator<Item = MonWord>>(words: I) -> Result<Self> {
        let set: BTreeSet<MonWord> = words.into_iter().collect();
        for w in &set {
            if !w.is_empty() && !set.contains(&w.prefix(w.len() - 1)) {
                return Err(Error::Precondition(format!(
                    "universe is not prefix-closed: missing a prefix of {w}"
                )));
            }
        }
        if !set.contains(&MonWord::identity()) {
            return Err(Error::Precondition("universe does not contain e".into()));
        }
        Ok(Self::build(set))
    }

    fn build(set: BTreeSet<MonWord>) -> Self {
        let words: Vec<MonWord> = set.into_iter().collect();
        let index: HashMap<MonWord, usize> =
            words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let alphabet: Vec<Var> = words
            .iter()
            .flat_map(|w| w.vars().cloned())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let ext = alphabet
            .iter()
            .map(|x| words.iter().map(|w| index.get(&w.with(x)).copied()).collect())
            .collect();
        SubtermSet {
            words,
            index,
            alphabet,
            ext,
        }
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[MonWord] {
        &self.words
    }

    pub fn word(&self, i: usize) -> &MonWord {
        &self.words[i]
    }

    pub fn index_of(&self, w: &MonWord) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn alphabet(&self) -> &[Var] {
        &self.alphabet
    }

    /// Index of `words[i] * alphabet[g]`, if it belongs to the set.
    pub fn extend(&self, i: usize, g: usize) -> Option<usize> {
        self.ext[g][i]
    }

    pub(crate) fn shifts(&self) -> Vec<Vec<Option<usize>>> {
        self.ext.clone()
    }
}

/// All prefixes of all words occurring in `s`, including `e`.
pub fn initial_subterms(s: &PairSet) -> SubtermSet {
    let mut set = BTreeSet::from([MonWord::identity()]);
    for (a, b) in &s.pairs {
        for w in [a, b] {
            for len in 1..=w.len() {
                set.insert(w.prefix(len));
            }
        }
    }
    SubtermSet::build(set)
}

/// A three-valued relation over a [`SubtermSet`]; `le(u, v)` reads `u ⪯ v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreorderRel {
    universe: Arc<SubtermSet>,
    rel: TriMatrix,
}

impl PreorderRel {
    pub fn new(universe: Arc<SubtermSet>, rel: TriMatrix) -> Result<Self> {
        if rel.size() != universe.len() {
            return Err(Error::Precondition(format!(
                "relation of size {} over a universe of {} words",
                rel.size(),
                universe.len()
            )));
        }
        Ok(PreorderRel { universe, rel })
    }

    pub fn from_fn(universe: Arc<SubtermSet>, f: impl Fn(usize, usize) -> bool) -> Self {
        let rel = TriMatrix::from_fn(universe.len(), f);
        PreorderRel { universe, rel }
    }

    /// Builds a total preorder from a rank per word (`u ⪯ v` iff `rank(u) <= rank(v)`).
    pub fn from_ranks(universe: Arc<SubtermSet>, rank: &[usize]) -> Self {
        Self::from_fn(universe, |i, j| rank[i] <= rank[j])
    }

    /// Builds a total preorder from classes listed bottom to top.
    pub fn from_classes(universe: Arc<SubtermSet>, classes: &[Vec<MonWord>]) -> Result<Self> {
        let mut rank = vec![usize::MAX; universe.len()];
        for (r, class) in classes.iter().enumerate() {
            for w in class {
                let i = universe
                    .index_of(w)
                    .ok_or_else(|| Error::Precondition(format!("{w} is not in the universe")))?;
                rank[i] = r;
            }
        }
        if let Some(i) = rank.iter().position(|&r| r == usize::MAX) {
            return Err(Error::Precondition(format!(
                "{} is not assigned a class",
                universe.word(i)
            )));
        }
        Ok(Self::from_ranks(universe, &rank))
    }

    pub fn universe(&self) -> &Arc<SubtermSet> {
        &self.universe
    }

    pub fn matrix(&self) -> &TriMatrix {
        &self.rel
    }

    pub fn get(&self, i: usize, j: usize) -> Tri {
        self.rel.get(i, j)
    }

    /// `u ⪯ v`; unknown cells read as false.
    pub fn le(&self, i: usize, j: usize) -> bool {
        self.rel.get(i, j) == Tri::True
    }

    /// `u ≺ v`.
    pub fn lt(&self, i: usize, j: usize) -> bool {
        self.le(i, j) && !self.le(j, i)
    }

    /// `u ∼ v`.
    pub fn equiv(&self, i: usize, j: usize) -> bool {
        self.le(i, j) && self.le(j, i)
    }

    pub fn is_determined(&self) -> bool {
        self.rel.is_determined()
    }

    /// Equivalence classes of a total preorder, listed bottom to top; each class is in
    /// index order.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut order: Vec<usize> = (0..self.universe.len()).collect();
        order.sort_by(|&a, &b| match (self.le(a, b), self.le(b, a)) {
            (true, true) => a.cmp(&b),
            (true, false) => std::cmp::Ordering::Less,
            _ => std::cmp::Ordering::Greater,
        });
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for i in order {
            match classes.last_mut() {
                Some(c) if self.equiv(c[0], i) => c.push(i),
                _ => classes.push(vec![i]),
            }
        }
        classes
    }

    /// Class rank of every word.
    pub fn ranks(&self) -> Vec<usize> {
        let mut rank = vec![0; self.universe.len()];
        for (r, class) in self.classes().iter().enumerate() {
            for &i in class {
                rank[i] = r;
            }
        }
        rank
    }
}

/// Renders a total preorder as `x ∼ yx ≺ e ∼ y`.
impl fmt::Display for PreorderRel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .classes()
            .iter()
            .map(|c| {
                c.iter()
                    .map(|&i| self.universe.word(i).to_string())
                    .collect::<Vec<_>>()
                    .join(" ∼ ")
            })
            .collect();
        f.write_str(&parts.join(" ≺ "))
    }
}

pub(crate) fn order_problem(universe: &SubtermSet, s: &PairSet, strict: bool) -> OrderProblem {
    let pairs = s
        .pairs
        .iter()
        .map(|(a, b)| {
            (
                universe.index_of(a).expect("pair word in universe"),
                universe.index_of(b).expect("pair word in universe"),
            )
        })
        .collect();
    OrderProblem::new(universe.len(), universe.shifts(), pairs, strict, false)
}

fn search_with(
    s: &PairSet,
    strict: bool,
    budget: &Budget,
    deadline: Option<std::time::Instant>,
) -> Result<(Option<PreorderRel>, SearchStats)> {
    let universe = Arc::new(initial_subterms(s));
    let problem = order_problem(&universe, s, strict);
    let mut tracker = Tracker::new(budget, deadline);
    let found = solve(&problem, &mut tracker)?;
    let rel = found.map(|m| PreorderRel {
        universe: universe.clone(),
        rel: m,
    });
    Ok((rel, tracker.stats()))
}

/// Complete search for a total (strictly, if `strict`) right-invariant preorder on the
/// initial subterms of `s` with `a ≺ b` for every pair. `Ok((None, _))` means none exists.
pub fn search_preorder(
    s: &PairSet,
    strict: bool,
    budget: &Budget,
) -> Result<(Option<PreorderRel>, SearchStats)> {
    search_with(s, strict, budget, deadline_for(budget))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    pub budget: Budget,
    pub size_cap: usize,
    /// Worker threads for independent basic inequalities; results do not depend on it.
    pub threads: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            budget: Budget::default(),
            size_cap: DEFAULT_SIZE_CAP,
            threads: 1,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Refutation {
    /// The basic inequality that fails.
    pub inequality: BasicIneq<MonWord>,
    pub pairs: PairSet,
    pub preorder: PreorderRel,
    pub countermodel: Countermodel,
}

#[derive(Clone, Debug)]
pub enum Verdict {
    Valid { inequalities: usize, stats: SearchStats },
    Invalid { refutation: Box<Refutation>, stats: SearchStats },
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid { .. })
    }

    pub fn refutation(&self) -> Option<&Refutation> {
        match self {
            Verdict::Valid { .. } => None,
            Verdict::Invalid { refutation, .. } => Some(refutation),
        }
    }

    pub fn stats(&self) -> SearchStats {
        match self {
            Verdict::Valid { stats, .. } | Verdict::Invalid { stats, .. } => *stats,
        }
    }
}

type Searched = Result<(Option<PreorderRel>, SearchStats)>;

fn run_searches(
    pairsets: &[PairSet],
    strict: bool,
    cfg: &SolverConfig,
) -> Result<Vec<Searched>> {
    let deadline = deadline_for(&cfg.budget);
    let one = |s: &PairSet| search_with(s, strict, &cfg.budget, deadline);
    if cfg.threads <= 1 || pairsets.len() <= 1 {
        // Sequential: stop at the first inequality that is not valid.
        let mut out = Vec::new();
        for s in pairsets {
            let r = one(s);
            let stop = !matches!(r, Ok((None, _)));
            out.push(r);
            if stop {
                break;
            }
        }
        return Ok(out);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;
    Ok(pool.install(|| pairsets.par_iter().map(one).collect()))
}

fn decide_inverse_free(s: &Statement, cfg: &SolverConfig, strict: bool) -> Result<Verdict> {
    let ineqs = monoid_basic_inequalities(s, cfg.size_cap)?;
    let pairsets: Vec<PairSet> = ineqs.iter().map(PairSet::from_inequality).collect();
    let mut stats = SearchStats::default();
    for (k, result) in run_searches(&pairsets, strict, cfg)?.into_iter().enumerate() {
        let (found, st) = result?;
        stats += st;
        let Some(preorder) = found else { continue };
        let pairs = &pairsets[k];
        let mut countermodel = if strict {
            build_pl_countermodel(&preorder, pairs)?
        } else {
            build_end_countermodel(&preorder, pairs)?
        };
        countermodel.pad_identity(&s.vars());
        countermodel.verify()?;
        countermodel.check_refutes(s)?;
        return Ok(Verdict::Invalid {
            refutation: Box::new(Refutation {
                inequality: ineqs[k].clone(),
                pairs: pairs.clone(),
                preorder,
                countermodel,
            }),
            stats,
        });
    }
    Ok(Verdict::Valid {
        inequalities: ineqs.len(),
        stats,
    })
}

/// Validity in all distributive lattice-ordered monoids. Invalid verdicts carry a
/// finite-chain countermodel that has been re-evaluated.
pub fn decide_dlm(s: &Statement, cfg: &SolverConfig) -> Result<Verdict> {
    decide_inverse_free(s, cfg, false)
}

/// Validity of an inverse-free statement in all lattice-ordered groups, by strict-preorder
/// search. Invalid verdicts carry a countermodel of piecewise-linear automorphisms of ℚ.
pub fn decide_lg_inverse_free(s: &Statement, cfg: &SolverConfig) -> Result<Verdict> {
    decide_inverse_free(s, cfg, true)
}
