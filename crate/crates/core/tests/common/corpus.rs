//! Seeded random statements: up to three variables, words of length at most three, and at
//! most two meet/join components per side.

#![allow(dead_code)]

use dlmcheck::terms::{LTerm, MonWord, Statement, Var};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const NAMES: [&str; 3] = ["x", "y", "z"];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_word<R: Rng>(rng: &mut R, vars: &[Var], max_len: usize) -> MonWord {
    let len = rng.gen_range(0..=max_len);
    MonWord::new((0..len).map(|_| vars.choose(rng).unwrap().clone()).collect())
}

fn word_term<R: Rng>(rng: &mut R, vars: &[Var]) -> LTerm {
    LTerm::from_word(&random_word(rng, vars, 3))
}

/// A word, a meet or join of two words, or a word times a join of two words.
pub fn random_side<R: Rng>(rng: &mut R, vars: &[Var]) -> LTerm {
    match rng.gen_range(0..10) {
        0..=3 => word_term(rng, vars),
        4..=5 => LTerm::meet(word_term(rng, vars), word_term(rng, vars)),
        6..=8 => LTerm::join(word_term(rng, vars), word_term(rng, vars)),
        _ => {
            let a = LTerm::from_word(&random_word(rng, vars, 1));
            let b = LTerm::join(
                LTerm::from_word(&random_word(rng, vars, 2)),
                LTerm::from_word(&random_word(rng, vars, 2)),
            );
            if rng.gen_bool(0.5) {
                LTerm::product(a, b)
            } else {
                LTerm::product(b, a)
            }
        }
    }
}

pub fn random_statement<R: Rng>(rng: &mut R, max_vars: usize) -> Statement {
    let n = rng.gen_range(1..=max_vars);
    let vars: Vec<Var> = NAMES[..n].iter().map(|v| Var::new(v)).collect();
    let lhs = random_side(rng, &vars);
    let rhs = random_side(rng, &vars);
    if rng.gen_range(0..10) == 0 {
        Statement::eq(lhs, rhs)
    } else {
        Statement::leq(lhs, rhs)
    }
}

pub fn corpus(seed: u64, count: usize, max_vars: usize) -> Vec<Statement> {
    let mut rng = rng(seed);
    (0..count).map(|_| random_statement(&mut rng, max_vars)).collect()
}

/// Inserts inverses at random positions of a random inverse-free statement.
pub fn random_group_statement<R: Rng>(rng: &mut R, max_vars: usize) -> Statement {
    fn sprinkle<R: Rng>(rng: &mut R, t: LTerm) -> LTerm {
        let t = match t {
            LTerm::Product(a, b) => LTerm::product(sprinkle(rng, *a), sprinkle(rng, *b)),
            LTerm::Meet(a, b) => LTerm::meet(sprinkle(rng, *a), sprinkle(rng, *b)),
            LTerm::Join(a, b) => LTerm::join(sprinkle(rng, *a), sprinkle(rng, *b)),
            other => other,
        };
        if rng.gen_range(0..4) == 0 {
            LTerm::inverse(t)
        } else {
            t
        }
    }
    let s = random_statement(rng, max_vars);
    Statement {
        kind: s.kind,
        lhs: sprinkle(rng, s.lhs),
        rhs: sprinkle(rng, s.rhs),
    }
}
