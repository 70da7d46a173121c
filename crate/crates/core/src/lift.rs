//! Turning a total right-invariant preorder into a strictly right-invariant one, and
//! checking preorder properties.
//!
//! Write a word as `x_k ... x_1`, and let `P(u, i) = x_k ... x_i` be `u` with its last
//! `i - 1` letters removed (`e` once `i > k`). Given a total right-invariant preorder `⪯`
//! with equivalence `∼` and strict part `≺`:
//!
//! - `u ◁ v` iff for some `j` in `1..=l+1` (`l = |v|`), `P(u, i) ∼ P(v, i)` for all `i < j`
//!   and either `P(u, j) ≺ P(v, j)` or `j = k + 2`;
//! - `u ≡ v` iff `|u| = |v|` and `P(u, i) ∼ P(v, i)` for every `i`;
//! - the result is `⊴ = ◁ ∪ ≡`. It is total, strictly right-invariant, and extends `≺`.

use std::fmt;

use crate::decide::{PairSet, PreorderRel};
use crate::error::{Error, Result};
use crate::search::Tri;
use crate::terms::{MonWord, Var};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Undetermined { u: MonWord, v: MonWord },
    Reflexivity { u: MonWord },
    Totality { u: MonWord, v: MonWord },
    /// `u ⪯ v ⪯ w` but not `u ⪯ w`.
    Transitivity { u: MonWord, v: MonWord, w: MonWord },
    /// `u ⪯ v` but not `ux ⪯ vx`.
    Invariance { u: MonWord, v: MonWord, letter: Var },
    /// `u ≺ v` but not `ux ≺ vx`; `collapsed` when `ux ∼ vx`.
    StrictInvariance { u: MonWord, v: MonWord, letter: Var, collapsed: bool },
    /// A required `s ≺ t` fails.
    Constraint { s: MonWord, t: MonWord },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Undetermined { u, v } => write!(f, "{u} ⪯ {v} is undetermined"),
            Violation::Reflexivity { u } => write!(f, "{u} ⪯ {u} fails"),
            Violation::Totality { u, v } => write!(f, "{u} and {v} are incomparable"),
            Violation::Transitivity { u, v, w } => {
                write!(f, "{u} ⪯ {v} ⪯ {w} but not {u} ⪯ {w}")
            }
            Violation::Invariance { u, v, letter } => {
                write!(f, "{u} ⪯ {v} but not {} ⪯ {}", u.with(letter), v.with(letter))
            }
            Violation::StrictInvariance { u, v, letter, collapsed } => {
                let (ux, vx) = (u.with(letter), v.with(letter));
                if *collapsed {
                    write!(f, "{u} ≺ {v} but {ux} ∼ {vx}")
                } else {
                    write!(f, "{u} ≺ {v} but {vx} ≺ {ux}")
                }
            }
            Violation::Constraint { s, t } => write!(f, "required {s} ≺ {t} fails"),
        }
    }
}

/// Every violated property of `p`: reflexivity, totality, transitivity, right-invariance,
/// strict right-invariance when `strict`, and the pairs of `s` when given. An
/// undetermined relation is reported as such and nothing else is checked.
pub fn verify_preorder(p: &PreorderRel, strict: bool, s: Option<&PairSet>) -> Vec<Violation> {
    let u = p.universe();
    let n = u.len();
    let w = |i: usize| u.word(i).clone();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if p.get(i, j) == Tri::Unknown {
                out.push(Violation::Undetermined { u: w(i), v: w(j) });
            }
        }
    }
    if !out.is_empty() {
        return out;
    }
    for i in 0..n {
        if !p.le(i, i) {
            out.push(Violation::Reflexivity { u: w(i) });
        }
        for j in i + 1..n {
            if !p.le(i, j) && !p.le(j, i) {
                out.push(Violation::Totality { u: w(i), v: w(j) });
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if !p.le(i, j) {
                continue;
            }
            for k in 0..n {
                if p.le(j, k) && !p.le(i, k) {
                    out.push(Violation::Transitivity { u: w(i), v: w(j), w: w(k) });
                }
            }
        }
    }
    for (g, letter) in u.alphabet().iter().enumerate() {
        for i in 0..n {
            for j in 0..n {
                let (Some(a), Some(b)) = (u.extend(i, g), u.extend(j, g)) else {
                    continue;
                };
                if p.le(i, j) && !p.le(a, b) {
                    out.push(Violation::Invariance { u: w(i), v: w(j), letter: letter.clone() });
                }
                if strict && p.lt(i, j) && !p.lt(a, b) {
                    out.push(Violation::StrictInvariance {
                        u: w(i),
                        v: w(j),
                        letter: letter.clone(),
                        collapsed: p.equiv(a, b),
                    });
                }
            }
        }
    }
    if let Some(s) = s {
        for (a, b) in s.pairs() {
            let ok = match (u.index_of(a), u.index_of(b)) {
                (Some(i), Some(j)) => p.lt(i, j),
                _ => false,
            };
            if !ok {
                out.push(Violation::Constraint { s: a.clone(), t: b.clone() });
            }
        }
    }
    out
}

/// Fails with the first violation unless `p` is a valid (strict, if asked) solution.
pub(crate) fn require_solution(p: &PreorderRel, strict: bool, s: Option<&PairSet>) -> Result<()> {
    match verify_preorder(p, strict, s).first() {
        None => Ok(()),
        Some(v) => Err(Error::Precondition(format!("not a valid preorder: {v}"))),
    }
}

/// The strictly right-invariant preorder `⊴` built from a total right-invariant `p`.
pub fn lift_preorder(p: &PreorderRel) -> Result<PreorderRel> {
    require_solution(p, false, None)?;
    let universe = p.universe().clone();
    let n = universe.len();
    // prefix[a][m] = index of the length-m prefix of word a.
    let prefix: Vec<Vec<usize>> = (0..n)
        .map(|a| {
            let word = universe.word(a);
            (0..=word.len())
                .map(|m| universe.index_of(&word.prefix(m)).expect("prefix-closed universe"))
                .collect()
        })
        .collect();
    let len = |a: usize| universe.word(a).len();
    // P(u, i) for i >= 1.
    let path = |a: usize, i: usize| -> usize {
        let k = len(a);
        prefix[a][(k + 1).saturating_sub(i)]
    };
    let below = |a: usize, b: usize| -> bool {
        let (k, l) = (len(a), len(b));
        for j in 1..=l + 1 {
            if p.lt(path(a, j), path(b, j)) || j == k + 2 {
                return true;
            }
            if !p.equiv(path(a, j), path(b, j)) {
                return false;
            }
        }
        false
    };
    let same = |a: usize, b: usize| -> bool {
        len(a) == len(b) && (1..=len(a)).all(|i| p.equiv(path(a, i), path(b, i)))
    };
    Ok(PreorderRel::from_fn(universe.clone(), |a, b| below(a, b) || same(a, b)))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::decide::{initial_subterms, SubtermSet};

    fn w(s: &str) -> MonWord {
        MonWord::from_chars(s)
    }

    fn classes(list: &[&[&str]]) -> Vec<Vec<MonWord>> {
        list.iter().map(|c| c.iter().map(|s| w(s)).collect()).collect()
    }

    fn example() -> (PreorderRel, PairSet) {
        let s = PairSet::new([(w("xyx"), w("yxy"))]);
        let universe = Arc::new(initial_subterms(&s));
        let p = PreorderRel::from_classes(
            universe,
            &classes(&[&["x", "yx", "xyx"], &["", "y", "xy", "yxy"]]),
        )
        .unwrap();
        (p, s)
    }

    fn chain(p: &PreorderRel) -> Vec<String> {
        p.classes()
            .iter()
            .map(|c| {
                assert_eq!(c.len(), 1);
                p.universe().word(c[0]).to_string()
            })
            .collect()
    }

    #[test]
    fn example_preorder_is_invariant_but_not_strictly() {
        let (p, s) = example();
        assert!(verify_preorder(&p, false, Some(&s)).is_empty());
        let report: Vec<String> = verify_preorder(&p, true, Some(&s))
            .iter()
            .map(|v| v.to_string())
            .collect();
        assert!(report.contains(&"x ≺ e but xy ∼ y".to_string()), "{report:?}");
    }

    #[test]
    fn example_lift() {
        let (p, s) = example();
        let lifted = lift_preorder(&p).unwrap();
        assert_eq!(chain(&lifted), ["x", "xyx", "yx", "e", "xy", "yxy", "y"]);
        assert!(verify_preorder(&lifted, true, Some(&s)).is_empty());
    }

    #[test]
    fn singleton_universe() {
        let universe = Arc::new(SubtermSet::from_words([MonWord::identity()]).unwrap());
        let p = PreorderRel::from_fn(universe, |_, _| true);
        assert_eq!(lift_preorder(&p).unwrap(), p);
    }

    #[test]
    fn already_strict_order() {
        // xx ≺ x ≺ e is strictly invariant (x ≺ e forces xx ≺ x); lifting keeps it.
        let universe = Arc::new(SubtermSet::from_words([w(""), w("x"), w("xx")]).unwrap());
        let p = PreorderRel::from_classes(universe.clone(), &classes(&[&["xx"], &["x"], &[""]])).unwrap();
        let bad = PreorderRel::from_classes(universe, &classes(&[&["x"], &[""], &["xx"]])).unwrap();
        assert!(!verify_preorder(&bad, false, None).is_empty());
        assert!(verify_preorder(&p, true, None).is_empty());
        let lifted = lift_preorder(&p).unwrap();
        assert!(verify_preorder(&lifted, true, None).is_empty());
        assert_eq!(chain(&lifted), ["xx", "x", "e"]);
    }

    #[test]
    fn rejects_invalid_input() {
        let universe = Arc::new(SubtermSet::from_words([w(""), w("x"), w("y"), w("xy")]).unwrap());
        // x ≺ e but xy above y: violates invariance.
        let p = PreorderRel::from_classes(universe, &classes(&[&["x", "y"], &[""], &["xy"]])).unwrap();
        assert!(!verify_preorder(&p, false, None).is_empty());
        assert!(matches!(lift_preorder(&p), Err(Error::Precondition(_))));
    }
}
