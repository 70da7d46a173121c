//! Countermodel certificates: finite chains of order-endomorphisms, piecewise-linear
//! automorphisms of ℚ, and the integers. Certificates are checked by re-evaluating the
//! refuted inequality with the evaluators here, never by trusting the search.

mod chain;
mod integers;
mod pl;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value as Json};

pub use chain::{eval_in_end, ChainEndo};
pub use integers::eval_in_integers;
pub use pl::{eval_in_aut_q, integer, rational, term_to_pl, PlBijection, Rational};

use crate::decide::{PairSet, PreorderRel};
use crate::error::{Error, Result};
use crate::lift::require_solution;
use crate::terms::{
    parse_statement_with, LTerm, MonWord, ParseOptions, Statement, StatementKind, Var,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Model {
    EndChain { chain_size: usize, assignment: BTreeMap<Var, ChainEndo> },
    AutQ { assignment: BTreeMap<Var, PlBijection> },
    /// Each variable acts on ℤ by translation.
    Integers { assignment: BTreeMap<Var, BigInt> },
}

/// A point of the model's underlying chain.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Point {
    Chain(usize),
    Rational(Rational),
    Integer(BigInt),
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Chain(p) => write!(f, "{p}"),
            Point::Rational(q) => write!(f, "{q}"),
            Point::Integer(n) => write!(f, "{n}"),
        }
    }
}

/// A model, a base point, and an inequality whose left side is strictly above its right
/// side at that point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Countermodel {
    pub model: Model,
    pub base_point: Point,
    pub lhs_value: Point,
    pub rhs_value: Point,
    pub inequality: Statement,
}

impl Countermodel {
    pub fn kind(&self) -> &'static str {
        match self.model {
            Model::EndChain { .. } => "end-chain",
            Model::AutQ { .. } => "aut-q",
            Model::Integers { .. } => "integers",
        }
    }

    pub fn chain_size(&self) -> Option<usize> {
        match self.model {
            Model::EndChain { chain_size, .. } => Some(chain_size),
            _ => None,
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        match &self.model {
            Model::EndChain { assignment, .. } => assignment.keys().cloned().collect(),
            Model::AutQ { assignment } => assignment.keys().cloned().collect(),
            Model::Integers { assignment } => assignment.keys().cloned().collect(),
        }
    }

    /// Value of `t` at the base point.
    pub fn evaluate(&self, t: &LTerm) -> Result<Point> {
        match (&self.model, &self.base_point) {
            (Model::EndChain { assignment, .. }, Point::Chain(p)) => {
                Ok(Point::Chain(eval_in_end(assignment, t, *p)?))
            }
            (Model::AutQ { assignment }, Point::Rational(q)) => {
                Ok(Point::Rational(eval_in_aut_q(assignment, t, q)?))
            }
            (Model::Integers { assignment }, Point::Integer(n)) => {
                Ok(Point::Integer(n + eval_in_integers(assignment, t)?))
            }
            _ => Err(Error::Malformed(format!(
                "base point {} does not belong to a {} model",
                self.base_point,
                self.kind()
            ))),
        }
    }

    /// Assigns the identity to every variable of `vars` not yet assigned.
    pub fn pad_identity(&mut self, vars: &BTreeSet<Var>) {
        for v in vars {
            match &mut self.model {
                Model::EndChain { chain_size, assignment } => {
                    let k = *chain_size;
                    assignment.entry(v.clone()).or_insert_with(|| ChainEndo::identity(k));
                }
                Model::AutQ { assignment } => {
                    assignment.entry(v.clone()).or_insert_with(PlBijection::identity);
                }
                Model::Integers { assignment } => {
                    assignment.entry(v.clone()).or_insert_with(|| BigInt::from(0));
                }
            }
        }
    }

    /// Re-evaluates the inequality: both claimed values must be reproduced and the left
    /// one must be strictly greater.
    pub fn verify(&self) -> Result<()> {
        let reject = |m: String| Err(Error::CertificateRejected(m));
        if self.inequality.kind != StatementKind::Leq {
            return reject("certificate inequality must use <=".into());
        }
        if let Model::EndChain { chain_size, assignment } = &self.model {
            if let Some((v, f)) = assignment.iter().find(|(_, f)| f.chain_size() != *chain_size) {
                return reject(format!(
                    "{v} acts on a chain of size {}, expected {chain_size}",
                    f.chain_size()
                ));
            }
        }
        let lhs = self.evaluate(&self.inequality.lhs)?;
        let rhs = self.evaluate(&self.inequality.rhs)?;
        if lhs != self.lhs_value || rhs != self.rhs_value {
            return reject(format!(
                "claimed values {} and {} but evaluation gives {lhs} and {rhs}",
                self.lhs_value, self.rhs_value
            ));
        }
        if lhs <= rhs {
            return reject(format!("{lhs} is not above {rhs}"));
        }
        Ok(())
    }

    /// Checks that `s` fails at the base point.
    pub fn check_refutes(&self, s: &Statement) -> Result<()> {
        let lhs = self.evaluate(&s.lhs)?;
        let rhs = self.evaluate(&s.rhs)?;
        let fails = match s.kind {
            StatementKind::Leq => lhs > rhs,
            StatementKind::Eq => lhs != rhs,
        };
        if fails {
            Ok(())
        } else {
            Err(Error::CertificateRejected(format!(
                "`{s}` holds at the base point ({lhs} against {rhs})"
            )))
        }
    }

    pub fn to_json(&self) -> Result<Json> {
        let mut obj = Map::new();
        obj.insert("kind".into(), json!(self.kind()));
        let assignment: Map<String, Json> = match &self.model {
            Model::EndChain { chain_size, assignment } => {
                obj.insert("chain_size".into(), json!(chain_size));
                assignment
                    .iter()
                    .map(|(v, f)| (v.to_string(), json!(f.map())))
                    .collect()
            }
            Model::AutQ { assignment } => assignment
                .iter()
                .map(|(v, f)| {
                    let bps = f
                        .breakpoints()
                        .iter()
                        .map(|(x, y)| {
                            let [a, b] = rational_parts(x)?;
                            let [c, d] = rational_parts(y)?;
                            Ok(json!([a, b, c, d]))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    Ok((v.to_string(), json!({ "breakpoints": bps })))
                })
                .collect::<Result<_>>()?,
            Model::Integers { assignment } => assignment
                .iter()
                .map(|(v, n)| Ok((v.to_string(), json!(int_to_i64(n)?))))
                .collect::<Result<_>>()?,
        };
        obj.insert("assignment".into(), Json::Object(assignment));
        obj.insert("base_point".into(), point_json(&self.base_point)?);
        obj.insert("lhs_value".into(), point_json(&self.lhs_value)?);
        obj.insert("rhs_value".into(), point_json(&self.rhs_value)?);
        obj.insert("inequality".into(), json!(self.inequality.to_string()));
        Ok(Json::Object(obj))
    }

    /// Parses a certificate; the result is not verified.
    pub fn from_json(v: &Json) -> Result<Self> {
        let bad = |m: &str| Error::Malformed(m.to_string());
        let obj = v.as_object().ok_or_else(|| bad("certificate must be an object"))?;
        let kind = obj.get("kind").and_then(Json::as_str).ok_or_else(|| bad("missing kind"))?;
        let assignment = obj
            .get("assignment")
            .and_then(Json::as_object)
            .ok_or_else(|| bad("missing assignment"))?;
        let inequality = obj
            .get("inequality")
            .and_then(Json::as_str)
            .ok_or_else(|| bad("missing inequality"))?;
        let inequality = parse_statement_with(
            inequality,
            ParseOptions {
                allow_reserved_prefix: true,
            },
        )?;
        let field = |k: &str| obj.get(k).ok_or_else(|| bad(&format!("missing {k}")));
        let (model, point): (Model, fn(&Json) -> Result<Point>) = match kind {
            "end-chain" => {
                let chain_size = field("chain_size")?
                    .as_u64()
                    .ok_or_else(|| bad("chain_size must be a nonnegative integer"))?
                    as usize;
                let assignment = assignment
                    .iter()
                    .map(|(name, m)| {
                        let map = m
                            .as_array()
                            .ok_or_else(|| bad("endomorphism must be an array"))?
                            .iter()
                            .map(|p| p.as_u64().map(|p| p as usize).ok_or_else(|| bad("bad chain point")))
                            .collect::<Result<Vec<_>>>()?;
                        Ok((Var::new(name), ChainEndo::new(map)?))
                    })
                    .collect::<Result<_>>()?;
                (Model::EndChain { chain_size, assignment }, |p| {
                    p.as_u64()
                        .map(|p| Point::Chain(p as usize))
                        .ok_or_else(|| Error::Malformed("bad chain point".into()))
                })
            }
            "aut-q" => {
                let assignment = assignment
                    .iter()
                    .map(|(name, f)| {
                        let bps = f
                            .get("breakpoints")
                            .and_then(Json::as_array)
                            .ok_or_else(|| bad("missing breakpoints"))?;
                        let points = bps
                            .iter()
                            .map(|b| {
                                let n = b
                                    .as_array()
                                    .filter(|a| a.len() == 4)
                                    .ok_or_else(|| bad("breakpoint must have four integers"))?;
                                let n = n
                                    .iter()
                                    .map(|x| x.as_i64().ok_or_else(|| bad("bad breakpoint entry")))
                                    .collect::<Result<Vec<_>>>()?;
                                Ok((checked_rational(n[0], n[1])?, checked_rational(n[2], n[3])?))
                            })
                            .collect::<Result<Vec<_>>>()?;
                        Ok((Var::new(name), PlBijection::new(points)?))
                    })
                    .collect::<Result<_>>()?;
                (Model::AutQ { assignment }, |p| {
                    let a = p
                        .as_array()
                        .filter(|a| a.len() == 2)
                        .and_then(|a| Some((a[0].as_i64()?, a[1].as_i64()?)))
                        .ok_or_else(|| Error::Malformed("rational must be [num, den]".into()))?;
                    Ok(Point::Rational(checked_rational(a.0, a.1)?))
                })
            }
            "integers" => {
                let assignment = assignment
                    .iter()
                    .map(|(name, n)| {
                        let n = n.as_i64().ok_or_else(|| bad("integer expected"))?;
                        Ok((Var::new(name), BigInt::from(n)))
                    })
                    .collect::<Result<_>>()?;
                (Model::Integers { assignment }, |p| {
                    p.as_i64()
                        .map(|n| Point::Integer(BigInt::from(n)))
                        .ok_or_else(|| Error::Malformed("integer expected".into()))
                })
            }
            other => return Err(bad(&format!("unknown kind `{other}`"))),
        };
        Ok(Countermodel {
            model,
            base_point: point(field("base_point")?)?,
            lhs_value: point(field("lhs_value")?)?,
            rhs_value: point(field("rhs_value")?)?,
            inequality,
        })
    }
}

impl fmt::Display for Countermodel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.model {
            Model::EndChain { chain_size, assignment } => {
                writeln!(f, "order-endomorphisms of the chain 0 < ... < {}", chain_size - 1)?;
                for (v, m) in assignment {
                    writeln!(f, "  {v} ↦ {m}")?;
                }
            }
            Model::AutQ { assignment } => {
                writeln!(f, "piecewise-linear automorphisms of ℚ")?;
                for (v, m) in assignment {
                    writeln!(f, "  {v} ↦ {m}")?;
                }
            }
            Model::Integers { assignment } => {
                writeln!(f, "integers under +, min, max")?;
                for (v, n) in assignment {
                    writeln!(f, "  {v} ↦ {n}")?;
                }
            }
        }
        write!(
            f,
            "at {}: `{}` gives {} > {}",
            self.base_point, self.inequality, self.lhs_value, self.rhs_value
        )
    }
}

fn int_to_i64(n: &BigInt) -> Result<i64> {
    n.to_i64()
        .ok_or_else(|| Error::Range(format!("{n} does not fit in 64 bits")))
}

fn rational_parts(q: &Rational) -> Result<[i64; 2]> {
    Ok([int_to_i64(q.numer())?, int_to_i64(q.denom())?])
}

fn checked_rational(n: i64, d: i64) -> Result<Rational> {
    if d == 0 {
        return Err(Error::Malformed("zero denominator".into()));
    }
    Ok(rational(n, d))
}

fn point_json(p: &Point) -> Result<Json> {
    Ok(match p {
        Point::Chain(p) => json!(p),
        Point::Rational(q) => json!(rational_parts(q)?),
        Point::Integer(n) => json!(int_to_i64(n)?),
    })
}

/// Class ranks of `p`, and per variable the map `[u] -> [ux]` on ranks.
fn class_maps(p: &PreorderRel) -> Result<(Vec<usize>, BTreeMap<Var, BTreeMap<usize, usize>>)> {
    let rank = p.ranks();
    let u = p.universe();
    let mut maps = BTreeMap::new();
    for (g, x) in u.alphabet().iter().enumerate() {
        let mut m = BTreeMap::new();
        for i in 0..u.len() {
            if let Some(k) = u.extend(i, g) {
                if let Some(prev) = m.insert(rank[i], rank[k]) {
                    if prev != rank[k] {
                        return Err(Error::Precondition(format!(
                            "the map induced by {x} is not well defined on classes"
                        )));
                    }
                }
            }
        }
        maps.insert(x.clone(), m);
    }
    Ok((rank, maps))
}

fn claimed_values(p: &PreorderRel, s: &PairSet, rank: &[usize]) -> (usize, usize) {
    let r = |w: &MonWord| rank[p.universe().index_of(w).expect("pair word in universe")];
    let lhs = s.pairs().iter().map(|(_, t)| r(t)).min().expect("nonempty pair set");
    let rhs = s.pairs().iter().map(|(s, _)| r(s)).max().expect("nonempty pair set");
    (lhs, rhs)
}

fn check_pairs(p: &PreorderRel, s: &PairSet) -> Result<()> {
    if s.pairs().is_empty() {
        return Err(Error::Precondition("empty pair set".into()));
    }
    if s.pairs()
        .iter()
        .any(|(a, b)| p.universe().index_of(a).is_none() || p.universe().index_of(b).is_none())
    {
        return Err(Error::Precondition("pair words missing from the universe".into()));
    }
    Ok(())
}

/// Finite-chain countermodel: the classes of `p` in order, each variable acting by
/// `[u] ↦ [ux]` extended to a total map, evaluated at `[e]`.
pub fn build_end_countermodel(p: &PreorderRel, s: &PairSet) -> Result<Countermodel> {
    check_pairs(p, s)?;
    require_solution(p, false, Some(s))?;
    let (rank, maps) = class_maps(p)?;
    let k = rank.iter().max().map_or(1, |m| m + 1);
    let assignment = maps
        .iter()
        .map(|(v, m)| Ok((v.clone(), ChainEndo::totalize(k, m)?)))
        .collect::<Result<_>>()?;
    let e = rank[p.universe().index_of(&MonWord::identity()).expect("e in universe")];
    let (lhs, rhs) = claimed_values(p, s, &rank);
    let cm = Countermodel {
        model: Model::EndChain { chain_size: k, assignment },
        base_point: Point::Chain(e),
        lhs_value: Point::Chain(lhs),
        rhs_value: Point::Chain(rhs),
        inequality: s.to_inequality().to_statement(),
    };
    cm.verify()?;
    Ok(cm)
}

/// Countermodel in the automorphisms of ℚ: classes of a strictly invariant `p` sit at
/// integer points and each variable interpolates `[u] ↦ [ux]` with slope-1 tails.
pub fn build_pl_countermodel(p: &PreorderRel, s: &PairSet) -> Result<Countermodel> {
    check_pairs(p, s)?;
    require_solution(p, true, Some(s))?;
    let (rank, maps) = class_maps(p)?;
    let to_q = |r: usize| integer(r as i64);
    let assignment = maps
        .iter()
        .map(|(v, m)| {
            let points = m.iter().map(|(a, b)| (to_q(*a), to_q(*b))).collect();
            Ok((v.clone(), PlBijection::new(points)?))
        })
        .collect::<Result<_>>()?;
    let e = rank[p.universe().index_of(&MonWord::identity()).expect("e in universe")];
    let (lhs, rhs) = claimed_values(p, s, &rank);
    let cm = Countermodel {
        model: Model::AutQ { assignment },
        base_point: Point::Rational(to_q(e)),
        lhs_value: Point::Rational(to_q(lhs)),
        rhs_value: Point::Rational(to_q(rhs)),
        inequality: s.to_inequality().to_statement(),
    };
    cm.verify()?;
    Ok(cm)
}

/// An integer countermodel for a `<=` statement, built from a given assignment.
pub fn integer_countermodel(s: &Statement, assignment: BTreeMap<Var, BigInt>) -> Result<Countermodel> {
    let mut cm = Countermodel {
        model: Model::Integers { assignment },
        base_point: Point::Integer(BigInt::from(0)),
        lhs_value: Point::Integer(BigInt::from(0)),
        rhs_value: Point::Integer(BigInt::from(0)),
        inequality: s.clone(),
    };
    cm.lhs_value = cm.evaluate(&s.lhs)?;
    cm.rhs_value = cm.evaluate(&s.rhs)?;
    cm.verify()?;
    Ok(cm)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::decide::initial_subterms;
    use crate::lift::lift_preorder;
    use crate::terms::parse_statement;

    fn w(s: &str) -> MonWord {
        MonWord::from_chars(s)
    }

    fn preorder(s: &PairSet, classes: &[&[&str]]) -> PreorderRel {
        let classes: Vec<Vec<MonWord>> =
            classes.iter().map(|c| c.iter().map(|x| w(x)).collect()).collect();
        PreorderRel::from_classes(Arc::new(initial_subterms(s)), &classes).unwrap()
    }

    fn example() -> (PreorderRel, PairSet) {
        let s = PairSet::new([(w("xyx"), w("yxy"))]);
        let p = preorder(&s, &[&["x", "yx", "xyx"], &["", "y", "xy", "yxy"]]);
        (p, s)
    }

    #[test]
    fn example_chain_model() {
        let (p, s) = example();
        let cm = build_end_countermodel(&p, &s).unwrap();
        let Model::EndChain { chain_size, assignment } = &cm.model else { panic!() };
        assert_eq!(*chain_size, 2);
        assert_eq!(assignment[&Var::new("x")].map(), &[0, 0]);
        assert_eq!(assignment[&Var::new("y")].map(), &[1, 1]);
        assert_eq!(cm.base_point, Point::Chain(1));
        assert_eq!((cm.lhs_value.clone(), cm.rhs_value.clone()), (Point::Chain(1), Point::Chain(0)));
        assert_eq!(cm.inequality.to_string(), "y*x*y <= x*y*x");
    }

    #[test]
    fn two_letter_chain_model() {
        let s = PairSet::new([(w("x"), w("y"))]);
        let p = preorder(&s, &[&["x"], &["", "y"]]);
        let cm = build_end_countermodel(&p, &s).unwrap();
        assert_eq!(cm.chain_size(), Some(2));
        assert_eq!(cm.base_point, Point::Chain(1));
        assert_eq!(cm.evaluate(&LTerm::var("x")).unwrap(), Point::Chain(0));
        assert_eq!(cm.evaluate(&LTerm::var("y")).unwrap(), Point::Chain(1));
    }

    #[test]
    fn pl_model_of_lifted_example() {
        let (p, s) = example();
        let lifted = lift_preorder(&p).unwrap();
        assert!(build_pl_countermodel(&p, &s).is_err());
        let cm = build_pl_countermodel(&lifted, &s).unwrap();
        assert_eq!(cm.base_point, Point::Rational(integer(3)));
        let yxy = cm.evaluate(&parse_statement("y*x*y <= x*y*x").unwrap().lhs).unwrap();
        let xyx = cm.evaluate(&parse_statement("y*x*y <= x*y*x").unwrap().rhs).unwrap();
        assert!(yxy > xyx);
    }

    #[test]
    fn json_round_trip() {
        let (p, s) = example();
        for cm in [
            build_end_countermodel(&p, &s).unwrap(),
            build_pl_countermodel(&lift_preorder(&p).unwrap(), &s).unwrap(),
        ] {
            let j = cm.to_json().unwrap();
            let back = Countermodel::from_json(&j).unwrap();
            assert_eq!(back, cm);
            back.verify().unwrap();
        }
        let j = build_end_countermodel(&p, &s).unwrap().to_json().unwrap();
        let keys: Vec<&str> = j.as_object().unwrap().keys().map(String::as_str).collect();
        for k in ["kind", "chain_size", "assignment", "base_point", "lhs_value", "rhs_value", "inequality"] {
            assert!(keys.contains(&k), "{k}");
        }
    }

    #[test]
    fn tampered_certificate_is_rejected() {
        let (p, s) = example();
        let mut cm = build_end_countermodel(&p, &s).unwrap();
        cm.lhs_value = Point::Chain(0);
        assert!(matches!(cm.verify(), Err(Error::CertificateRejected(_))));
        let mut j = build_end_countermodel(&p, &s).unwrap().to_json().unwrap();
        j["assignment"]["y"] = json!([0, 0]);
        assert!(Countermodel::from_json(&j).unwrap().verify().is_err());
    }

    #[test]
    fn integer_witness() {
        let s = parse_statement("x*y^2 <= e \\/ x^2*y^3").unwrap();
        let a = BTreeMap::from([(Var::new("x"), BigInt::from(-3)), (Var::new("y"), BigInt::from(2))]);
        let cm = integer_countermodel(&s, a).unwrap();
        assert_eq!(cm.lhs_value, Point::Integer(BigInt::from(1)));
        assert_eq!(cm.rhs_value, Point::Integer(BigInt::from(0)));
        let back = Countermodel::from_json(&cm.to_json().unwrap()).unwrap();
        assert_eq!(back, cm);
    }
}
