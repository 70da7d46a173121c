//! Removing inverses from lattice-ordered group statements.
//!
//! A statement becomes `e <= u_1 /\ ... /\ u_k` with each `u_i` a join of group words.
//! Each inequality `t0 <= t_1 \/ ... \/ t_n` is then rewritten one inverse at a time: with
//! `t_m = u r^-1 v` (`r^-1` the leftmost inverted letter) and `y` a fresh variable,
//!
//! ```text
//! r y t0 <= r y t_1 \/ ... (j != m) ... \/ r y u y t0 \/ v
//! ```
//!
//! holds in all lattice-ordered groups iff the original does, and has one inverse fewer.
//! When no inverses remain, validity can be decided by [`decide_dlm`].

use crate::decide::{decide_dlm, SolverConfig, Verdict};
use crate::error::{Error, Result};
use crate::normalform::group_normal_meet_of_joins;
use crate::terms::{FreshVarSupply, GrpWord, LTerm, Letter, MonWord, Statement, StatementKind};

/// `t0 <= \/ joins`, with the variable supply shared by every step.
#[derive(Clone, Debug)]
pub struct JoinForm {
    pub t0: MonWord,
    pub joins: Vec<GrpWord>,
    pub fresh: FreshVarSupply,
}

impl JoinForm {
    pub fn inverse_count(&self) -> usize {
        self.joins.iter().map(GrpWord::inverse_count).sum()
    }

    /// First join containing an inverse.
    pub fn first_target(&self) -> Option<usize> {
        self.joins.iter().position(|w| !w.is_inverse_free())
    }

    /// The inequality as a statement; `None` while inverses remain.
    pub fn to_statement(&self) -> Option<Statement> {
        let joins = self
            .joins
            .iter()
            .map(|w| w.to_mon_word().map(|m| LTerm::from_word(&m)))
            .collect::<Option<Vec<_>>>()?;
        Some(Statement::leq(LTerm::from_word(&self.t0), LTerm::join_all(joins)))
    }
}

/// One rewriting step on `joins[target]`, at its leftmost inverted letter.
pub fn density_step(jf: &JoinForm, target: usize) -> Result<JoinForm> {
    let word = jf
        .joins
        .get(target)
        .ok_or_else(|| Error::Precondition(format!("no join term at index {target}")))?;
    let i = word.first_inverse().ok_or(Error::NoInverse(target))?;
    let (u, letter, v) = word.split_at_letter(i);
    let mut fresh = jf.fresh.clone();
    let y = fresh.next_var();
    let r = letter.var;
    let ry = GrpWord::letter(Letter::pos(r.clone())).concat(&GrpWord::letter(Letter::pos(y.clone())));
    let t0 = jf.t0.to_group_word();
    let mut joins: Vec<GrpWord> = jf
        .joins
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != target)
        .map(|(_, t)| ry.concat(t))
        .collect();
    joins.push(
        ry.concat(&u)
            .concat(&GrpWord::letter(Letter::pos(y.clone())))
            .concat(&t0),
    );
    joins.push(v);
    Ok(JoinForm {
        t0: MonWord::new(vec![r, y]).concat(&jf.t0),
        joins,
        fresh,
    })
}

/// The term `t` with `LG |= s iff LG |= e <= t`.
fn positive_part(s: &Statement) -> LTerm {
    let inv = |t: &LTerm| LTerm::inverse(t.clone());
    match s.kind {
        StatementKind::Leq => LTerm::product(inv(&s.lhs), s.rhs.clone()),
        StatementKind::Eq => LTerm::meet(
            LTerm::product(inv(&s.lhs), s.rhs.clone()),
            LTerm::product(s.lhs.clone(), inv(&s.rhs)),
        ),
    }
}

/// Inverse-free statements that all hold in every distributive lattice-ordered monoid iff
/// `s` holds in every lattice-ordered group. Inverse-free input is returned unchanged.
pub fn eliminate_inverses(s: &Statement, size_cap: usize) -> Result<Vec<Statement>> {
    if s.is_inverse_free() {
        return Ok(vec![s.clone()]);
    }
    let components = group_normal_meet_of_joins(&positive_part(s), size_cap)?;
    let mut fresh = FreshVarSupply::new(s.vars());
    let mut out = Vec::with_capacity(components.len());
    for joins in components {
        let mut jf = JoinForm {
            t0: MonWord::identity(),
            joins: joins.into_iter().collect(),
            fresh,
        };
        while let Some(target) = jf.first_target() {
            jf = density_step(&jf, target)?;
        }
        out.push(jf.to_statement().expect("inverse-free after elimination"));
        fresh = jf.fresh;
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct LgVerdict {
    pub eliminated: Vec<Statement>,
    /// The first eliminated statement that is not valid, if any.
    pub failing: Option<usize>,
    /// Verdict on the failing statement, or the combined verdict when all are valid.
    pub verdict: Verdict,
}

impl LgVerdict {
    pub fn is_valid(&self) -> bool {
        self.verdict.is_valid()
    }
}

/// Validity in all lattice-ordered groups: eliminate inverses, then decide each result.
pub fn decide_lg(s: &Statement, cfg: &SolverConfig) -> Result<LgVerdict> {
    let eliminated = eliminate_inverses(s, cfg.size_cap)?;
    let mut inequalities = 0;
    let mut stats = Default::default();
    for (k, e) in eliminated.iter().enumerate() {
        match decide_dlm(e, cfg)? {
            Verdict::Valid { inequalities: n, stats: st } => {
                inequalities += n;
                stats += st;
            }
            Verdict::Invalid { refutation, stats: st } => {
                stats += st;
                return Ok(LgVerdict {
                    eliminated,
                    failing: Some(k),
                    verdict: Verdict::Invalid { refutation, stats },
                });
            }
        }
    }
    Ok(LgVerdict {
        eliminated,
        failing: None,
        verdict: Verdict::Valid { inequalities, stats },
    })
}
