//! Worked examples with known answers.

use std::collections::BTreeSet;
use std::sync::Arc;

use dlmcheck::decide::{
    decide_dlm, decide_lg_inverse_free, initial_subterms, search_preorder, PairSet, PreorderRel,
    SolverConfig,
};
use dlmcheck::lift::{lift_preorder, verify_preorder};
use dlmcheck::models::{build_end_countermodel, Model, Point};
use dlmcheck::normalform::{
    group_normal_meet_of_joins, to_basic_inequalities, BasicInequalities, Mode, DEFAULT_SIZE_CAP,
};
use dlmcheck::search::Budget;
use dlmcheck::terms::{parse_statement, parse_term, MonWord, Var};

fn w(s: &str) -> MonWord {
    MonWord::from_chars(s)
}

fn cfg() -> SolverConfig {
    SolverConfig::default()
}

fn example_pairs() -> PairSet {
    PairSet::new([(w("xyx"), w("yxy"))])
}

fn example_preorder() -> PreorderRel {
    let classes = vec![
        vec![w("x"), w("yx"), w("xyx")],
        vec![w(""), w("y"), w("xy"), w("yxy")],
    ];
    PreorderRel::from_classes(Arc::new(initial_subterms(&example_pairs())), &classes).unwrap()
}

#[test]
fn basic_inequalities_of_simple_statements() {
    let s = parse_statement("x*(y\\/z) <= w").unwrap();
    let BasicInequalities::Monoid(b) = to_basic_inequalities(&s, Mode::Monoid, DEFAULT_SIZE_CAP).unwrap() else {
        panic!()
    };
    let text: Vec<String> = b.iter().map(|b| b.to_statement().to_string()).collect();
    assert_eq!(text, ["x*y <= w", "x*z <= w"]);

    let s = parse_statement("e <= (x/\\y)^-1").unwrap();
    let BasicInequalities::Group(b) = to_basic_inequalities(&s, Mode::Group, DEFAULT_SIZE_CAP).unwrap() else {
        panic!()
    };
    assert_eq!(b.len(), 1);
    assert_eq!(b[0].to_statement().to_string(), "e <= x^-1 \\/ y^-1");
}

#[test]
fn group_meets_of_joins() {
    let render = |t: &str| -> Vec<Vec<String>> {
        group_normal_meet_of_joins(&parse_term(t).unwrap(), DEFAULT_SIZE_CAP)
            .unwrap()
            .iter()
            .map(|j| j.iter().map(|w| w.to_string()).collect())
            .collect()
    };
    assert_eq!(render("x^-1"), [["x^-1"]]);
    assert_eq!(render("(x \\/ y)^-1"), [["x^-1"], ["y^-1"]]);
    let mut joins = render("x \\/ x^-1");
    assert_eq!(joins.len(), 1);
    joins[0].sort();
    assert_eq!(joins[0], ["x", "x^-1"]);
}

#[test]
fn worked_example_subterms_and_search() {
    let s = example_pairs();
    let sub: Vec<String> = initial_subterms(&s).words().iter().map(|w| w.to_string()).collect();
    assert_eq!(sub, ["e", "x", "y", "xy", "yx", "xyx", "yxy"]);
    for strict in [false, true] {
        let (found, _) = search_preorder(&s, strict, &Budget::unlimited()).unwrap();
        let p = found.unwrap();
        assert!(verify_preorder(&p, strict, Some(&s)).is_empty());
    }
}

#[test]
fn worked_example_certificates() {
    let s = parse_statement("y*x*y <= x*y*x").unwrap();
    let v = decide_dlm(&s, &cfg()).unwrap();
    let r = v.refutation().unwrap();
    assert!(r.countermodel.chain_size().unwrap() <= 7);
    r.countermodel.verify().unwrap();

    let cm = build_end_countermodel(&example_preorder(), &example_pairs()).unwrap();
    let Model::EndChain { chain_size, assignment } = &cm.model else { panic!() };
    assert_eq!(*chain_size, 2);
    assert_eq!(assignment[&Var::new("x")].map(), &[0, 0]);
    assert_eq!(assignment[&Var::new("y")].map(), &[1, 1]);
    assert_eq!(cm.base_point, Point::Chain(1));
    assert_eq!(cm.evaluate(&s.lhs).unwrap(), Point::Chain(1));
    assert_eq!(cm.evaluate(&s.rhs).unwrap(), Point::Chain(0));

    let v = decide_lg_inverse_free(&s, &cfg()).unwrap();
    assert_eq!(v.refutation().unwrap().countermodel.kind(), "aut-q");
}

#[test]
fn worked_example_lift() {
    let p = example_preorder();
    let report: Vec<String> = verify_preorder(&p, true, None).iter().map(|v| v.to_string()).collect();
    assert!(report.iter().any(|v| v == "x ≺ e but xy ∼ y"));
    let lifted = lift_preorder(&p).unwrap();
    assert_eq!(lifted.to_string(), "x ≺ xyx ≺ yx ≺ e ≺ xy ≺ yxy ≺ y");
    assert!(verify_preorder(&lifted, true, Some(&example_pairs())).is_empty());
}

#[test]
fn lifted_example_is_reverse_lexicographic_on_paths() {
    // Read each word as the classes of its prefixes, longest first. On this example the
    // lift is exactly the lexicographic order of those sequences.
    let p = example_preorder();
    let lifted = lift_preorder(&p).unwrap();
    let u = p.universe();
    let rank = p.ranks();
    let path = |i: usize| -> Vec<usize> {
        let word = u.word(i);
        (0..=word.len())
            .rev()
            .map(|m| rank[u.index_of(&word.prefix(m)).unwrap()])
            .collect()
    };
    let mut order: Vec<usize> = (0..u.len()).collect();
    order.sort_by_key(|&i| lifted.ranks()[i]);
    let paths: Vec<Vec<usize>> = order.iter().map(|&i| path(i)).collect();
    assert_eq!(
        paths,
        [
            vec![0, 1],
            vec![0, 1, 0, 1],
            vec![0, 1, 1],
            vec![1],
            vec![1, 0, 1],
            vec![1, 0, 1, 1],
            vec![1, 1],
        ]
    );
    assert!(paths.windows(2).all(|w| w[0] < w[1]));
    let distinct: BTreeSet<Vec<usize>> = paths.iter().cloned().collect();
    assert_eq!(distinct.len(), paths.len());
}

#[test]
fn lattice_and_trivial_statements() {
    for s in ["x /\\ y <= x \\/ y", "x <= x", "e <= e", "x*(y \\/ z) == x*y \\/ x*z", "(x \\/ y)*z == x*z \\/ y*z"] {
        let st = parse_statement(s).unwrap();
        assert!(decide_dlm(&st, &cfg()).unwrap().is_valid(), "{s}");
        assert!(decide_lg_inverse_free(&st, &cfg()).unwrap().is_valid(), "{s}");
    }
}

#[test]
fn ordered_algebra_fixtures_are_invalid() {
    let fixtures = [
        "z1*y1*z2 /\\ w1*y2*w2 <= z1*y2*z2 \\/ w1*y1*w2",
        "x1*x2*x3 /\\ x4*x5*x6 /\\ x7*x8*x9 <= x1*x4*x7 \\/ x2*x5*x8 \\/ x3*x6*x9",
        "x*y^2 <= e \\/ x^2*y^3",
        "x1*x2*x3 /\\ x5*x4*x6 /\\ x9*x7*x8 /\\ x1*x3*x2 /\\ x5*x6*x4 /\\ x9*x8*x7 \
         <= x1*x4*x7 \\/ x5*x2*x8 \\/ x9*x6*x3 \\/ x1*x7*x4 \\/ x5*x8*x2 \\/ x9*x3*x6",
    ];
    for s in fixtures {
        let st = parse_statement(s).unwrap();
        for v in [decide_dlm(&st, &cfg()).unwrap(), decide_lg_inverse_free(&st, &cfg()).unwrap()] {
            let r = v.refutation().unwrap_or_else(|| panic!("{s} should be invalid"));
            r.countermodel.verify().unwrap();
            r.countermodel.check_refutes(&st).unwrap();
        }
    }
}
