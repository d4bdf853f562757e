use std::collections::BTreeSet;
use std::sync::OnceLock;

use sehgalkit::autenum::vec_elem;
use sehgalkit::construct::*;
use sehgalkit::esolve::SolveOptions;
use sehgalkit::sehgal::{algorithm1, algorithm2, Verdict};

fn pairs_7_13() -> &'static Vec<MatchedPair> {
    static P: OnceLock<Vec<MatchedPair>> = OnceLock::new();
    P.get_or_init(|| match_pairs(7, 13, SolveOptions::default()).unwrap())
}

fn candidate() -> &'static Candidate {
    static C: OnceLock<Candidate> = OnceLock::new();
    C.get_or_init(|| build_candidate(&pairs_7_13()[0]).unwrap())
}

#[test]
fn pairs_for_91() {
    let pairs = pairs_7_13();
    assert_eq!(pairs.len(), 9);
    for m in pairs {
        assert_eq!((m.kp.label.as_str(), m.tp.order), ("C16", 48));
        assert_eq!(m.kq.iso_type(), "C12×C4");
        assert_eq!(m.r, 3);
        assert!(m.check_values().is_ok());
        // both quotients have the same order
        assert_eq!(m.tp.order / m.kp.order, m.tq.order / m.kq.order);
        assert_eq!(m.gd_type(), None);
    }
}

#[test]
fn candidate_for_91_verifies() {
    let c = candidate();
    assert_eq!(c.gamma_order, 2304);
    let rep = verify_candidate(c, true, SolveOptions::default()).unwrap();
    let names: Vec<&str> = rep.checks.iter().map(|c| c.name).collect();
    for n in [
        "value-condition",
        "gamma-order",
        "restrictions-onto-T",
        "centralizer-of-point",
        "kernel-images",
        "symmetric-formula",
        "epsilon-shape",
        "algorithm2-reports-epsilon",
    ] {
        assert!(names.contains(&n), "missing check {n}");
    }
    assert!(rep.passed, "{:?}", rep.first_failure());
}

#[test]
fn epsilon_shape() {
    let c = candidate();
    let e = &c.epsilon;
    assert_eq!(e.total(), 1);
    assert!(e.min_value() < 0);
    let pair = &c.pair;
    let n = c.n.combine(&vec_elem(pair.np), &vec_elem(pair.nq), &[pair.p]);
    assert_eq!(e.eval(&n), pair.fp.eval(&vec_elem(pair.np)));
    // supported on elements of order pq only
    for cl in e.support() {
        assert_eq!(c.n.element_order(&cl.rep), pair.p * pair.q);
    }
}

#[test]
fn algorithm2_witnesses_come_from_algorithm1() {
    let g = &candidate().group;
    let two = algorithm2(g, SolveOptions::default()).unwrap();
    assert_eq!(two.verdict, Verdict::Open);
    let eps: BTreeSet<_> = two.witnesses.iter().map(|w| w.epsilon.key()).collect();
    for p in [7, 13] {
        let one = algorithm1(g, p, SolveOptions::default()).unwrap();
        let from_p: BTreeSet<_> = one.witnesses.iter().map(|w| w.epsilon.key()).collect();
        assert!(eps.is_subset(&from_p), "p = {p}");
    }
    assert!(eps.contains(&candidate().epsilon.key()));
}

#[test]
fn corrupted_gluing_is_rejected() {
    let bad = corrupt_alpha(&pairs_7_13()[0]).expect("some unit breaks the values");
    let c = build_candidate(&bad).unwrap();
    let rep = verify_candidate(&c, false, SolveOptions::default()).unwrap();
    assert!(!rep.passed);
    assert_eq!(rep.first_failure().unwrap().name, "value-condition");
}

#[test]
fn eleven_matches_nothing() {
    let eleven = table_rows(11, SolveOptions::default()).unwrap();
    for p in [7, 13] {
        let other = table_rows(p, SolveOptions::default()).unwrap();
        assert!(match_rows(&eleven, &other).unwrap().is_empty(), "11 and {p}");
    }
}

#[test]
fn tuple_sets_are_canonical() {
    for row in table_rows(13, SolveOptions::default()).unwrap() {
        assert_eq!(canonical_tuple_set(&row.tuples), row.tuples);
        assert!(row.tuples.len() <= row.solutions.len());
        for t in &row.tuples {
            assert_eq!(t.len() as u64, row.quotient);
            assert_eq!(t.iter().sum::<i64>(), 1);
        }
    }
}
