//! Totally ordered monoids, endomorphism monoids, and right orders on finite monoids.

use std::collections::BTreeMap;

use dlmcheck::models::{eval_in_integers, ChainEndo};
use dlmcheck::oracle::{
    end_monoid, enumerate_endomorphisms, enumerate_ordered_monoids,
    one_sided_inverses_are_two_sided, ordered_monoid_counterexample, right_cancellation_failure,
    OrderedMonoid,
};
use dlmcheck::rightorder::{right_order_exists_finite_monoid, FiniteMonoid, MonoidOrder};
use dlmcheck::search::Budget;
use dlmcheck::terms::{parse_statement, Var};
use num_bigint::BigInt;

/// Every table with unit `u` whose multiplication is associative and monotone, by plain
/// enumeration of the cells outside the unit's row and column.
fn brute_force_ordered_monoids(n: usize) -> Vec<(usize, Vec<Vec<usize>>)> {
    let mut out = Vec::new();
    for unit in 0..n {
        let free: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| a != unit && b != unit)
            .collect();
        let total = n.pow(free.len() as u32);
        for code in 0..total {
            let mut t = vec![vec![0; n]; n];
            for a in 0..n {
                t[unit][a] = a;
                t[a][unit] = a;
            }
            let mut c = code;
            for &(a, b) in &free {
                t[a][b] = c % n;
                c /= n;
            }
            let monotone = (0..n).all(|a| {
                (0..n).all(|b| {
                    (0..n).all(|c| a > b || (t[a][c] <= t[b][c] && t[c][a] <= t[c][b]))
                })
            });
            let assoc = (0..n)
                .all(|a| (0..n).all(|b| (0..n).all(|c| t[t[a][b]][c] == t[a][t[b][c]])));
            if monotone && assoc {
                out.push((unit, t));
            }
        }
    }
    out.sort();
    out
}

#[test]
fn ordered_monoid_counts() {
    let counts: Vec<usize> = (1..=4)
        .map(|n| enumerate_ordered_monoids(n, &Budget::unlimited()).unwrap().len())
        .collect();
    assert_eq!(counts, [1, 2, 8, 34]);
}

#[test]
fn ordered_monoids_match_brute_force() {
    for n in 1..=4 {
        let mut found: Vec<(usize, Vec<Vec<usize>>)> = enumerate_ordered_monoids(n, &Budget::unlimited())
            .unwrap()
            .iter()
            .map(|m| (m.monoid.unit(), m.monoid.table().to_vec()))
            .collect();
        found.sort();
        let before = found.len();
        found.dedup();
        assert_eq!(before, found.len(), "duplicates at n = {n}");
        assert_eq!(found, brute_force_ordered_monoids(n), "n = {n}");
    }
}

#[test]
fn ordered_monoid_budget() {
    let tiny = Budget {
        max_nodes: 5,
        max_time: None,
    };
    assert!(enumerate_ordered_monoids(3, &tiny).is_err());
}

#[test]
fn square_bound_holds_in_small_ordered_monoids() {
    let s = parse_statement("x*y^2 <= e \\/ x^2*y^3").unwrap();
    for n in 1..=4 {
        for m in enumerate_ordered_monoids(n, &Budget::unlimited()).unwrap() {
            assert_eq!(ordered_monoid_counterexample(&m, &s).unwrap(), None, "{m:?}");
        }
    }
    let a = BTreeMap::from([(Var::new("x"), BigInt::from(-3)), (Var::new("y"), BigInt::from(2))]);
    assert_eq!(eval_in_integers(&a, &s.lhs).unwrap(), BigInt::from(1));
    assert_eq!(eval_in_integers(&a, &s.rhs).unwrap(), BigInt::from(0));
}

#[test]
fn ordered_monoids_can_fail_other_statements() {
    // Commutativity fails in a 3-element totally ordered monoid.
    let s = parse_statement("x*y <= y*x").unwrap();
    let failing = enumerate_ordered_monoids(3, &Budget::unlimited())
        .unwrap()
        .iter()
        .filter(|m| ordered_monoid_counterexample(m, &s).unwrap().is_some())
        .count();
    assert!(failing > 0);
    assert!(OrderedMonoid::new(0, vec![vec![0, 1], vec![1, 0]]).is_err());
}

#[test]
fn endomorphism_quasiequations() {
    for n in 1..=4 {
        assert!(one_sided_inverses_are_two_sided(n), "n = {n}");
    }
    let (f, g, h) = right_cancellation_failure(2).unwrap();
    assert_ne!(f, g);
    assert_eq!(f.then(&h), g.then(&h));
    // Left cancellation fails as well; checked directly.
    let endos = enumerate_endomorphisms(2);
    assert!(endos.iter().any(|h| endos
        .iter()
        .any(|f| endos.iter().any(|g| f != g && h.then(f) == h.then(g)))));
}

#[test]
fn right_orders_on_endomorphism_monoids() {
    let (two, _) = right_order_exists_finite_monoid(&end_monoid(2), &Budget::unlimited()).unwrap();
    let two = two.unwrap();
    assert!(two.is_right_order_of(&end_monoid(2)));
    for n in 3..=4 {
        let (none, _) = right_order_exists_finite_monoid(&end_monoid(n), &Budget::unlimited()).unwrap();
        assert!(none.is_none(), "End({n})");
    }
    let (z2, _) = right_order_exists_finite_monoid(&FiniteMonoid::cyclic_group(2).unwrap(), &Budget::unlimited()).unwrap();
    assert!(z2.is_none());
}

/// All permutations of `0..k`.
fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, k - 1);
            out.push(q);
        }
    }
    out
}

#[test]
fn right_order_search_matches_brute_force() {
    let monoids = [
        end_monoid(2),
        FiniteMonoid::cyclic_group(2).unwrap(),
        FiniteMonoid::cyclic_group(3).unwrap(),
        // {1, a, 0} with a·a = 0: right-orderable.
        FiniteMonoid::new(0, vec![vec![0, 1, 2], vec![1, 2, 2], vec![2, 2, 2]]).unwrap(),
        // Left-zero band with an adjoined unit.
        FiniteMonoid::new(0, vec![vec![0, 1, 2], vec![1, 1, 1], vec![2, 2, 2]]).unwrap(),
    ];
    for m in monoids {
        let any = permutations(m.size())
            .into_iter()
            .any(|p| MonoidOrder { ascending: p }.is_right_order_of(&m));
        let (found, _) = right_order_exists_finite_monoid(&m, &Budget::unlimited()).unwrap();
        assert_eq!(any, found.is_some(), "{m:?}");
    }
}

#[test]
fn end_monoid_is_composition() {
    let endos = enumerate_endomorphisms(3);
    let m = end_monoid(3);
    for (i, f) in endos.iter().enumerate() {
        for (j, g) in endos.iter().enumerate() {
            assert_eq!(endos[m.mul(i, j)], f.then(g));
        }
    }
    assert_eq!(endos[m.unit()], ChainEndo::identity(3));
}
