//! Piecewise-linear order-automorphisms of ℚ with finitely many breakpoints and slope 1
//! outside them, in exact rational arithmetic.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::terms::{LTerm, Var};

pub type Rational = BigRational;

pub fn rational(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn integer(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Stored in canonical form (no breakpoint where the slope does not change, a single
/// breakpoint `(0, d)` for a translation by `d`, none for the identity), so derived
/// equality is equality of functions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PlBijection {
    breakpoints: Vec<(Rational, Rational)>,
}

impl PlBijection {
    pub fn identity() -> Self {
        PlBijection {
            breakpoints: Vec::new(),
        }
    }

    pub fn translation(d: Rational) -> Self {
        Self::canonical(vec![(Rational::zero(), d)])
    }

    /// The interpolating bijection through `points`, which must be strictly increasing in
    /// both coordinates.
    pub fn new(points: Vec<(Rational, Rational)>) -> Result<Self> {
        for w in points.windows(2) {
            if w[0].0 >= w[1].0 || w[0].1 >= w[1].1 {
                return Err(Error::Precondition(format!(
                    "breakpoints ({}, {}) and ({}, {}) are not strictly increasing",
                    w[0].0, w[0].1, w[1].0, w[1].1
                )));
            }
        }
        Ok(Self::canonical(points))
    }

    fn canonical(points: Vec<(Rational, Rational)>) -> Self {
        let n = points.len();
        let slope = |i: usize, j: usize| -> Rational {
            (&points[j].1 - &points[i].1) / (&points[j].0 - &points[i].0)
        };
        let one = Rational::one();
        let keep: Vec<bool> = (0..n)
            .map(|i| {
                let left = if i == 0 { one.clone() } else { slope(i - 1, i) };
                let right = if i + 1 == n { one.clone() } else { slope(i, i + 1) };
                left != right
            })
            .collect();
        let shift = points.first().map(|(x, y)| y - x);
        let mut kept: Vec<_> = points
            .into_iter()
            .zip(keep)
            .filter_map(|(p, k)| k.then_some(p))
            .collect();
        if kept.is_empty() {
            if let Some(d) = shift.filter(|d| !d.is_zero()) {
                kept.push((Rational::zero(), d));
            }
        }
        PlBijection { breakpoints: kept }
    }

    pub fn breakpoints(&self) -> &[(Rational, Rational)] {
        &self.breakpoints
    }

    pub fn is_identity(&self) -> bool {
        self.breakpoints.is_empty()
    }

    pub fn apply(&self, q: &Rational) -> Rational {
        apply_points(&self.breakpoints, q)
    }

    pub fn inverse(&self) -> PlBijection {
        PlBijection {
            breakpoints: self
                .breakpoints
                .iter()
                .map(|(x, y)| (y.clone(), x.clone()))
                .collect(),
        }
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &PlBijection) -> PlBijection {
        let inv = self.inverse();
        let mut xs: Vec<Rational> = self.breakpoints.iter().map(|(x, _)| x.clone()).collect();
        xs.extend(other.breakpoints.iter().map(|(x, _)| inv.apply(x)));
        xs.sort();
        xs.dedup();
        let points = xs
            .into_iter()
            .map(|x| {
                let y = other.apply(&self.apply(&x));
                (x, y)
            })
            .collect();
        Self::canonical(points)
    }

    pub fn min(&self, other: &PlBijection) -> PlBijection {
        self.pointwise(other, |a, b| if a <= b { a } else { b })
    }

    pub fn max(&self, other: &PlBijection) -> PlBijection {
        self.pointwise(other, |a, b| if a >= b { a } else { b })
    }

    fn pointwise(
        &self,
        other: &PlBijection,
        pick: impl Fn(Rational, Rational) -> Rational,
    ) -> PlBijection {
        let mut xs: Vec<Rational> = self
            .breakpoints
            .iter()
            .chain(&other.breakpoints)
            .map(|(x, _)| x.clone())
            .collect();
        xs.sort();
        xs.dedup();
        // Both maps are affine between consecutive breakpoints; add the crossing points.
        let mut crossings = Vec::new();
        for w in xs.windows(2) {
            let d0 = self.apply(&w[0]) - other.apply(&w[0]);
            let d1 = self.apply(&w[1]) - other.apply(&w[1]);
            if d0.signum() * d1.signum() == -Rational::one() {
                let t = &d0 / (&d0 - &d1);
                crossings.push(&w[0] + t * (&w[1] - &w[0]));
            }
        }
        xs.extend(crossings);
        xs.sort();
        let points = xs
            .into_iter()
            .map(|x| {
                let y = pick(self.apply(&x), other.apply(&x));
                (x, y)
            })
            .collect();
        Self::canonical(points)
    }

    /// Strictly increasing breakpoints in both coordinates.
    pub fn is_valid(&self) -> bool {
        self.breakpoints
            .windows(2)
            .all(|w| w[0].0 < w[1].0 && w[0].1 < w[1].1)
    }
}

fn apply_points(points: &[(Rational, Rational)], q: &Rational) -> Rational {
    let (Some(first), Some(last)) = (points.first(), points.last()) else {
        return q.clone();
    };
    if q <= &first.0 {
        return &first.1 + (q - &first.0);
    }
    if q >= &last.0 {
        return &last.1 + (q - &last.0);
    }
    let i = points.partition_point(|(x, _)| x <= q) - 1;
    let (x0, y0) = &points[i];
    let (x1, y1) = &points[i + 1];
    y0 + (q - x0) * (y1 - y0) / (x1 - x0)
}

impl fmt::Display for PlBijection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.breakpoints.is_empty() {
            return f.write_str("id");
        }
        let parts: Vec<String> = self
            .breakpoints
            .iter()
            .map(|(x, y)| format!("{x}↦{y}"))
            .collect();
        write!(f, "PL[{}]", parts.join(", "))
    }
}

impl fmt::Debug for PlBijection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The automorphism a term denotes under `assignment`.
pub fn term_to_pl(assignment: &BTreeMap<Var, PlBijection>, t: &LTerm) -> Result<PlBijection> {
    Ok(match t {
        LTerm::Identity => PlBijection::identity(),
        LTerm::Variable(v) => assignment
            .get(v)
            .ok_or_else(|| Error::Unassigned(v.to_string()))?
            .clone(),
        LTerm::Inverse(a) => term_to_pl(assignment, a)?.inverse(),
        LTerm::Product(a, b) => term_to_pl(assignment, a)?.then(&term_to_pl(assignment, b)?),
        LTerm::Meet(a, b) => term_to_pl(assignment, a)?.min(&term_to_pl(assignment, b)?),
        LTerm::Join(a, b) => term_to_pl(assignment, a)?.max(&term_to_pl(assignment, b)?),
    })
}

/// Value of `t` at `q`. Inverse-free subterms are evaluated pointwise; only inverted
/// subterms are built as functions.
pub fn eval_in_aut_q(
    assignment: &BTreeMap<Var, PlBijection>,
    t: &LTerm,
    q: &Rational,
) -> Result<Rational> {
    Ok(match t {
        LTerm::Identity => q.clone(),
        LTerm::Variable(v) => assignment
            .get(v)
            .ok_or_else(|| Error::Unassigned(v.to_string()))?
            .apply(q),
        LTerm::Inverse(a) => term_to_pl(assignment, a)?.inverse().apply(q),
        LTerm::Product(a, b) => eval_in_aut_q(assignment, b, &eval_in_aut_q(assignment, a, q)?)?,
        LTerm::Meet(a, b) => {
            let (l, r) = (eval_in_aut_q(assignment, a, q)?, eval_in_aut_q(assignment, b, q)?);
            l.min(r)
        }
        LTerm::Join(a, b) => {
            let (l, r) = (eval_in_aut_q(assignment, a, q)?, eval_in_aut_q(assignment, b, q)?);
            l.max(r)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::parse_term;

    fn shift() -> BTreeMap<Var, PlBijection> {
        BTreeMap::from([(Var::new("x"), PlBijection::translation(integer(1)))])
    }

    fn at(t: &str, q: i64) -> Rational {
        eval_in_aut_q(&shift(), &parse_term(t).unwrap(), &integer(q)).unwrap()
    }

    #[test]
    fn shift_evaluations() {
        assert_eq!(at("x", 0), integer(1));
        assert_eq!(at("x*x^-1", 5), integer(5));
        assert_eq!(at("x \\/ x^-1", 0), integer(1));
        assert_eq!(at("x /\\ x^-1", 0), integer(-1));
    }

    #[test]
    fn single_point_is_a_translation() {
        let f = PlBijection::new(vec![(integer(0), integer(1))]).unwrap();
        assert_eq!(f, PlBijection::translation(integer(1)));
        assert_eq!(f.apply(&rational(7, 3)), rational(10, 3));
        let g = PlBijection::new(vec![(integer(2), integer(2))]).unwrap();
        assert!(g.is_identity());
    }

    #[test]
    fn interpolation_and_tails() {
        let f = PlBijection::new(vec![(integer(0), integer(0)), (integer(2), integer(1))]).unwrap();
        assert_eq!(f.apply(&integer(1)), rational(1, 2));
        assert_eq!(f.apply(&integer(-3)), integer(-3));
        assert_eq!(f.apply(&integer(5)), integer(4));
        assert_eq!(f.inverse().apply(&rational(1, 2)), integer(1));
        assert!(f.then(&f.inverse()).is_identity());
        assert!(f.inverse().then(&f).is_identity());
    }

    #[test]
    fn min_max_cross() {
        let f = PlBijection::new(vec![(integer(0), integer(0)), (integer(2), integer(1))]).unwrap();
        let g = PlBijection::translation(rational(-1, 2));
        let lo = f.min(&g);
        let hi = f.max(&g);
        for q in [-4, -1, 0, 1, 2, 3, 10] {
            let q = integer(q);
            assert_eq!(lo.apply(&q), f.apply(&q).min(g.apply(&q)));
            assert_eq!(hi.apply(&q), f.apply(&q).max(g.apply(&q)));
        }
        assert!(lo.is_valid() && hi.is_valid());
    }

    #[test]
    fn rejects_non_monotone_points() {
        assert!(PlBijection::new(vec![(integer(0), integer(1)), (integer(1), integer(1))]).is_err());
    }
}
