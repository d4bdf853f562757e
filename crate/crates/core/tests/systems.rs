use std::collections::BTreeSet;

use proptest::prelude::*;
use sehgalkit::abgroup::FinAbGroup;
use sehgalkit::autenum::{singer_subgroup, Mat2};
use sehgalkit::esolve::*;
use sehgalkit::matact::AutGroup;

fn c5() -> (FinAbGroup, AutGroup) {
    let a = FinAbGroup::elementary_rank2(5).unwrap();
    let s = AutGroup::full(a.clone()).unwrap();
    (a, s)
}

fn nonzero_system(s: &AutGroup, h: &AutGroup) -> EConstraintSystem {
    let local = s
        .local_classes()
        .into_iter()
        .find(|l| !l[0].is_identity())
        .unwrap();
    build_system(s, h, &local).unwrap()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Each listed inequality, after renaming variables, is one of the system's
/// cone rows or a bound `x_j ≥ 0` the system already has.
fn listed_rows_present(sys: &EConstraintSystem, listed: &[&[i64]]) -> bool {
    let n = sys.nvars();
    let ours: BTreeSet<Vec<i64>> = sys.cone_rows.iter().cloned().collect();
    permutations(n).into_iter().any(|perm| {
        listed.iter().all(|row| {
            let mut r = vec![0; n];
            for (i, &c) in row.iter().enumerate() {
                r[perm[i]] = c;
            }
            let support: Vec<usize> = (0..n).filter(|&j| r[j] != 0).collect();
            ours.contains(&r) || (support.len() == 1 && sys.lower_bounds[support[0]] >= 0)
        })
    })
}

fn group(a: &FinAbGroup, gens: &[[i64; 4]]) -> AutGroup {
    let g = gens.iter().map(|m| Mat2::new(5, *m).to_aut(a).unwrap()).collect();
    AutGroup::new(a.clone(), g).unwrap()
}

#[test]
fn q5_displayed_systems() {
    let (a, s) = c5();
    let k1: &[&[i64]] = &[&[1, 1, 0, 0], &[2, 0, 2, 1], &[0, 2, 1, 2], &[0, 0, 1, 1], &[2, 1, 0, 2], &[1, 2, 2, 0]];
    let k2: &[&[i64]] = &[
        &[1, 0, 0, 0, 0, 0],
        &[0, 1, 0, 0, 0, 0],
        &[0, 0, 1, 0, 0, 0],
        &[0, 0, 0, 1, 0, 0],
        &[0, 0, 0, 0, 1, 1],
        &[1, 0, 1, 0, 2, 1],
        &[0, 1, 0, 1, 1, 2],
        &[2, 1, 0, 0, 0, 2],
        &[0, 0, 2, 1, 0, 2],
        &[0, 2, 1, 0, 2, 0],
        &[1, 0, 0, 2, 2, 0],
    ];
    let k5: &[&[i64]] = &[
        &[1, 0, 0, 0, 0],
        &[0, 1, 0, 0, 0],
        &[0, 0, 1, 0, 0],
        &[0, 0, 0, 1, 1],
        &[0, 1, 0, 4, 0],
        &[0, 0, 1, 0, 4],
    ];
    let k7 = k1;
    let cases: [(&[[i64; 4]], &[&[i64]]); 4] = [
        (&[[0, 1, -1, 1]], k1),
        (&[[-1, 1, 0, 1], [-1, 1, -1, 0]], k2),
        (&[[-1, 0, 0, -1], [2, 0, -1, 1]], k5),
        (&[[1, -1, 0, -1], [0, 1, -1, 1]], k7),
    ];
    for (gens, listed) in cases {
        let h = group(&a, gens);
        let sys = nonzero_system(&s, &h);
        assert_eq!(sys.nvars(), listed[0].len());
        assert!(listed_rows_present(&sys, listed), "{gens:?}");
        let pts = enumerate_feasible(&sys, SolveOptions::default()).unwrap();
        assert_eq!(pts.len(), sys.nvars());
        assert!(pts.iter().all(|x| x.iter().sum::<i64>() == 1 && x.iter().all(|&v| v == 0 || v == 1)));
    }
}

#[test]
fn seven_singer_system() {
    let a = FinAbGroup::elementary_rank2(7).unwrap();
    let s = AutGroup::full(a).unwrap();
    let h = singer_subgroup(7, 16).unwrap().to_aut_group().unwrap();
    let sys = nonzero_system(&s, &h);
    assert_eq!(sys.nvars(), 3);
    assert_eq!(sys.lower_bounds, vec![-2; 3]);
    // rows are rotations of (1,2,4) in some variable order
    let listed: &[&[i64]] = &[&[2, 4, 1], &[4, 1, 2], &[1, 2, 4]];
    assert!(listed_rows_present(&sys, listed));
    let sols = enumerate_solutions(&sys, SolveOptions::default()).unwrap();
    assert_eq!(sols.len(), 3);
    let oracle = brute_force_solutions(&sys).unwrap();
    let k: BTreeSet<_> = sols.iter().map(|s| s.values.clone()).collect();
    let o: BTreeSet<_> = oracle.iter().map(|s| s.values.clone()).collect();
    assert_eq!(k, o);
}

#[test]
fn system_text_lists_every_relation() {
    let a = FinAbGroup::elementary_rank2(7).unwrap();
    let s = AutGroup::full(a).unwrap();
    let h = singer_subgroup(7, 16).unwrap().to_aut_group().unwrap();
    let sys = nonzero_system(&s, &h);
    let t = sys.to_text();
    assert!(t.contains("1 1 1 = 1"));
    assert_eq!(t.lines().filter(|l| l.ends_with(">= 0")).count(), sys.cone_rows.len());
    assert_eq!(t.lines().filter(|l| l.ends_with(">= -2")).count(), 3);
}

#[test]
fn cyclic_groups_have_empty_sets() {
    let a = FinAbGroup::parse("7^[1]x5^[2]").unwrap();
    let s = AutGroup::full(a.clone()).unwrap();
    let h = AutGroup::trivial(a).unwrap();
    assert!(e_set(&s, &h, SolveOptions::default()).unwrap().is_empty());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn engine_matches_box_scan(
        n in 1usize..5,
        rows in prop::collection::vec(prop::collection::vec(-2i64..5, 4), 0..5),
        lower in prop::collection::vec(-3i64..1, 4),
    ) {
        let ls = LinearSystem {
            sum: 1,
            rows: rows.into_iter().map(|r| r[..n].to_vec()).collect(),
            lower: lower[..n].to_vec(),
            upper: None,
        };
        let brute = ls.brute_force().unwrap();
        prop_assert_eq!(ls.enumerate(EnumOptions { lp: true }), brute.clone());
        prop_assert_eq!(ls.enumerate(EnumOptions { lp: false }), brute.clone());
        for x in &brute {
            prop_assert!(ls.satisfies(x));
        }
    }
}
