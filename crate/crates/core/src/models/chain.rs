//! Order-endomorphisms of a finite chain `0 < 1 < ... < k-1`, composed and applied on the
//! right: `(p)(fg) = ((p)f)g`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::terms::{LTerm, Var};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChainEndo {
    map: Vec<usize>,
}

impl ChainEndo {
    /// Fails unless `map` is a nondecreasing self-map of `0..map.len()`.
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let k = map.len();
        if k == 0 {
            return Err(Error::Range("endomorphism of an empty chain".into()));
        }
        if let Some(&p) = map.iter().find(|&&p| p >= k) {
            return Err(Error::Range(format!("value {p} outside chain of size {k}")));
        }
        if map.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Precondition(format!("{map:?} is not order-preserving")));
        }
        Ok(ChainEndo { map })
    }

    pub fn identity(k: usize) -> Self {
        ChainEndo {
            map: (0..k).collect(),
        }
    }

    pub fn chain_size(&self) -> usize {
        self.map.len()
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, p: usize) -> usize {
        self.map[p]
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &ChainEndo) -> ChainEndo {
        assert_eq!(self.chain_size(), other.chain_size(), "chain sizes differ");
        ChainEndo {
            map: self.map.iter().map(|&p| other.map[p]).collect(),
        }
    }

    pub fn meet(&self, other: &ChainEndo) -> ChainEndo {
        ChainEndo {
            map: self.map.iter().zip(&other.map).map(|(a, b)| *a.min(b)).collect(),
        }
    }

    pub fn join(&self, other: &ChainEndo) -> ChainEndo {
        ChainEndo {
            map: self.map.iter().zip(&other.map).map(|(a, b)| *a.max(b)).collect(),
        }
    }

    /// Pointwise order.
    pub fn le(&self, other: &ChainEndo) -> bool {
        self.map.iter().zip(&other.map).all(|(a, b)| a <= b)
    }

    /// Extends a partial map `point -> image` on `0..k` to a total order-preserving map:
    /// an undefined point takes the image of the greatest defined point below it, or of
    /// the least defined point if there is none. An empty partial map gives the identity.
    pub fn totalize(k: usize, partial: &BTreeMap<usize, usize>) -> Result<ChainEndo> {
        let Some((_, &lowest)) = partial.iter().next() else {
            return Ok(ChainEndo::identity(k));
        };
        let mut map = Vec::with_capacity(k);
        let mut current = lowest;
        for p in 0..k {
            if let Some(&img) = partial.get(&p) {
                current = img;
            }
            map.push(current);
        }
        ChainEndo::new(map)
    }
}

impl fmt::Display for ChainEndo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.map.iter().map(|p| p.to_string()).collect();
        write!(f, "⟨{}⟩", parts.join(","))
    }
}

impl fmt::Debug for ChainEndo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Value of an inverse-free term at point `p` of the chain.
pub fn eval_in_end(assignment: &BTreeMap<Var, ChainEndo>, t: &LTerm, p: usize) -> Result<usize> {
    if let Some((v, f)) = assignment.iter().find(|(_, f)| p >= f.chain_size()) {
        return Err(Error::Range(format!(
            "point {p} outside the chain of size {} assigned to {v}",
            f.chain_size()
        )));
    }
    let sizes: Vec<usize> = assignment.values().map(ChainEndo::chain_size).collect();
    if sizes.windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::Range("assigned endomorphisms act on chains of different sizes".into()));
    }
    eval(assignment, t, p)
}

fn eval(assignment: &BTreeMap<Var, ChainEndo>, t: &LTerm, p: usize) -> Result<usize> {
    Ok(match t {
        LTerm::Identity => p,
        LTerm::Variable(v) => assignment
            .get(v)
            .ok_or_else(|| Error::Unassigned(v.to_string()))?
            .apply(p),
        LTerm::Inverse(_) => {
            return Err(Error::NotInverseFree);
        }
        LTerm::Product(a, b) => eval(assignment, b, eval(assignment, a, p)?)?,
        LTerm::Meet(a, b) => eval(assignment, a, p)?.min(eval(assignment, b, p)?),
        LTerm::Join(a, b) => eval(assignment, a, p)?.max(eval(assignment, b, p)?),
    })
}
