use std::collections::BTreeSet;

use dlmcheck::decide::{search_preorder, PairSet};
use dlmcheck::lift::verify_preorder;
use dlmcheck::models::{rational, ChainEndo, PlBijection, Rational};
use dlmcheck::normalform::{group_basic_inequalities, DEFAULT_SIZE_CAP};
use dlmcheck::search::Budget;
use dlmcheck::terms::{
    parse_statement, reduce_group_word, FreshVarSupply, LTerm, Letter, MonWord, Statement, Var,
};
use proptest::prelude::*;

fn var() -> impl Strategy<Value = Var> {
    prop_oneof![Just("x"), Just("y"), Just("z"), Just("a1"), Just("b_2")].prop_map(Var::new)
}

fn term() -> impl Strategy<Value = LTerm> {
    let leaf = prop_oneof![Just(LTerm::Identity), var().prop_map(LTerm::Variable)];
    leaf.prop_recursive(5, 40, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(LTerm::inverse),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| LTerm::product(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| LTerm::meet(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| LTerm::join(a, b)),
        ]
    })
}

fn letters() -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec(
        (prop_oneof![Just("x"), Just("y")], any::<bool>()).prop_map(|(v, inv)| Letter {
            var: Var::new(v),
            inverted: inv,
        }),
        0..12,
    )
}

fn word() -> impl Strategy<Value = MonWord> {
    prop::collection::vec(prop_oneof![Just("x"), Just("y")].prop_map(Var::new), 0..4)
        .prop_map(MonWord::new)
}

fn pl() -> impl Strategy<Value = PlBijection> {
    prop::collection::vec((1i64..5, 1i64..3, 1i64..5, 1i64..3), 0..5).prop_flat_map(|steps| {
        (-5i64..5, -5i64..5).prop_map(move |(x0, y0)| {
            let (mut x, mut y) = (rational(x0, 1), rational(y0, 1));
            let points = steps
                .iter()
                .map(|&(a, b, c, d)| {
                    x = &x + rational(a, b);
                    y = &y + rational(c, d);
                    (x.clone(), y.clone())
                })
                .collect();
            PlBijection::new(points).unwrap()
        })
    })
}

fn point() -> impl Strategy<Value = Rational> {
    (-40i64..40, 1i64..7).prop_map(|(n, d)| rational(n, d))
}

fn endo(k: usize) -> impl Strategy<Value = ChainEndo> {
    prop::collection::vec(0..k, k).prop_map(|mut v| {
        v.sort_unstable();
        ChainEndo::new(v).unwrap()
    })
}

proptest! {
    #[test]
    fn render_then_parse_is_identity(l in term(), r in term(), eq in any::<bool>()) {
        let s = if eq { Statement::eq(l, r) } else { Statement::leq(l, r) };
        let text = s.to_string();
        prop_assert_eq!(parse_statement(&text).unwrap(), s);
    }

    #[test]
    fn group_reduction(ls in letters()) {
        let w = reduce_group_word(ls.clone());
        prop_assert!(w.len() <= ls.len());
        prop_assert_eq!(reduce_group_word(w.letters().to_vec()), w.clone());
        for pair in w.letters().windows(2) {
            prop_assert!(!(pair[0].var == pair[1].var && pair[0].inverted != pair[1].inverted));
        }
        let formal_inverse: Vec<Letter> = ls.iter().rev().map(Letter::inverse).collect();
        prop_assert_eq!(reduce_group_word(formal_inverse), w.inverse());
        prop_assert!(w.concat(&w.inverse()).is_empty());
    }

    #[test]
    fn group_normal_form_words_are_reduced(t in term()) {
        let s = Statement::leq(t, LTerm::var("x"));
        if let Ok(ineqs) = group_basic_inequalities(&s, 10_000) {
            for b in ineqs {
                for w in b.meets.iter().chain(&b.joins) {
                    prop_assert_eq!(&reduce_group_word(w.letters().to_vec()), w);
                }
            }
        }
    }

    #[test]
    fn fresh_variables_avoid_everything(forbidden in prop::collection::btree_set(0usize..6, 0..4), n in 0usize..6) {
        let forbidden: BTreeSet<Var> = forbidden.iter().map(|i| Var::new(&format!("_y{i}"))).collect();
        let mut supply = FreshVarSupply::new(forbidden.iter().cloned());
        let out = supply.fresh_variables(n);
        let distinct: BTreeSet<&Var> = out.iter().collect();
        prop_assert_eq!(distinct.len(), n);
        prop_assert!(out.iter().all(|v| !forbidden.contains(v)));
    }

    #[test]
    fn pl_inverse_round_trip(f in pl(), q in point()) {
        prop_assert!(f.is_valid());
        prop_assert_eq!(f.inverse().apply(&f.apply(&q)), q.clone());
        prop_assert_eq!(f.apply(&f.inverse().apply(&q)), q);
        prop_assert!(f.then(&f.inverse()).is_identity());
    }

    #[test]
    fn pl_operations_are_pointwise(f in pl(), g in pl(), h in pl(), p in point(), q in point()) {
        let fg = f.then(&g);
        let lo = f.min(&g);
        let hi = f.max(&g);
        for r in [&p, &q] {
            prop_assert_eq!(fg.apply(r), g.apply(&f.apply(r)));
            prop_assert_eq!(lo.apply(r), f.apply(r).min(g.apply(r)));
            prop_assert_eq!(hi.apply(r), f.apply(r).max(g.apply(r)));
        }
        prop_assert!(fg.is_valid() && lo.is_valid() && hi.is_valid());
        prop_assert_eq!(fg.then(&h), f.then(&g.then(&h)));
        if p < q {
            for m in [&fg, &lo, &hi, &fg.inverse()] {
                prop_assert!(m.apply(&p) < m.apply(&q));
            }
        }
    }

    #[test]
    fn chain_endo_monoid_laws(f in endo(4), g in endo(4), h in endo(4)) {
        prop_assert_eq!(f.then(&g).then(&h), f.then(&g.then(&h)));
        prop_assert_eq!(f.then(&ChainEndo::identity(4)), f.clone());
        prop_assert_eq!(ChainEndo::identity(4).then(&f), f.clone());
        let c = f.then(&g);
        prop_assert!(c.map().windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(f.meet(&g).le(&f.join(&g)));
    }

    #[test]
    fn search_results_satisfy_every_property(
        pairs in prop::collection::vec((word(), word()), 1..4),
        strict in any::<bool>(),
    ) {
        let s = PairSet::new(pairs);
        let (found, _) = search_preorder(&s, strict, &Budget::unlimited()).unwrap();
        if let Some(p) = found {
            prop_assert!(p.is_determined());
            let report = verify_preorder(&p, strict, Some(&s));
            prop_assert!(report.is_empty(), "{:?}", report);
        }
    }
}

#[test]
fn normal_form_size_cap_is_an_error() {
    let s = parse_statement("(x \\/ y)*(x \\/ y)*(x \\/ y)*(x \\/ y) <= e").unwrap();
    assert!(group_basic_inequalities(&s, DEFAULT_SIZE_CAP).is_ok());
    assert!(matches!(
        group_basic_inequalities(&s, 4),
        Err(dlmcheck::Error::SizeCapExceeded { .. })
    ));
}
