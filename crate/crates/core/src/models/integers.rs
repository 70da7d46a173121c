//! The totally ordered group `⟨ℤ, min, max, +, 0⟩`.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::terms::{LTerm, Var};

pub fn eval_in_integers(assignment: &BTreeMap<Var, BigInt>, t: &LTerm) -> Result<BigInt> {
    Ok(match t {
        LTerm::Identity => BigInt::from(0),
        LTerm::Variable(v) => assignment
            .get(v)
            .ok_or_else(|| Error::Unassigned(v.to_string()))?
            .clone(),
        LTerm::Inverse(a) => -eval_in_integers(assignment, a)?,
        LTerm::Product(a, b) => eval_in_integers(assignment, a)? + eval_in_integers(assignment, b)?,
        LTerm::Meet(a, b) => eval_in_integers(assignment, a)?.min(eval_in_integers(assignment, b)?),
        LTerm::Join(a, b) => eval_in_integers(assignment, a)?.max(eval_in_integers(assignment, b)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::parse_term;

    fn assign(pairs: &[(&str, i64)]) -> BTreeMap<Var, BigInt> {
        pairs.iter().map(|(v, n)| (Var::new(v), BigInt::from(*n))).collect()
    }

    fn eval(a: &BTreeMap<Var, BigInt>, t: &str) -> i64 {
        eval_in_integers(a, &parse_term(t).unwrap()).unwrap().try_into().unwrap()
    }

    #[test]
    fn witness_values() {
        let a = assign(&[("x", -3), ("y", 2)]);
        assert_eq!(eval(&a, "x*y^2"), 1);
        assert_eq!(eval(&a, "e \\/ x^2*y^3"), 0);
    }

    #[test]
    fn zero_and_negation() {
        let a = assign(&[("x", 0), ("y", 0)]);
        assert_eq!(eval(&a, "x*y^-1 \\/ (y /\\ x^3)"), 0);
        let a = assign(&[("x", 1)]);
        assert_eq!(eval(&a, "x /\\ x^-1"), -1);
    }
}
