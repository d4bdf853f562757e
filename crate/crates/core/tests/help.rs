use std::collections::BTreeSet;

use sehgalkit::abgroup::FinAbGroup;
use sehgalkit::helpcmp::*;
use sehgalkit::quadfield::QuadField;
use sehgalkit::sehgal::{algorithm3, Alg3Options, Alg3Verdict};
use sehgalkit::Error;

#[test]
fn counting_agrees_with_scan() {
    for (p, q, d) in [(5, 7, 3), (5, 7, 2), (7, 5, 6)] {
        let g = GdGroup::new(p, q, d).unwrap();
        for i in 0..d {
            for r in 0..p {
                for s in 0..q {
                    assert_eq!(mu(&g, i, r, s).unwrap(), mu_brute(&g, i, r, s), "{p} {q} {d}: {i} {r} {s}");
                }
            }
        }
    }
}

fn triples(g: &GdGroup) -> BTreeSet<Vec<u64>> {
    mu_table(g).distinct_rows().into_keys().collect()
}

#[test]
fn triples_do_not_depend_on_the_generator_for_25() {
    let base = triples(&GdGroup::new(5, 7, 3).unwrap());
    let moduli = QuadField::primitive_moduli(5);
    assert!(moduli.len() >= 3);
    for fp in moduli {
        let g = GdGroup::with_fields(3, fp, QuadField::new(7).unwrap()).unwrap();
        assert_eq!(triples(&g), base);
    }
}

#[test]
fn generator_for_49_at_most_reverses_the_index() {
    let base = triples(&GdGroup::new(5, 7, 3).unwrap());
    // m_i ↦ m_{-i}
    let reversed: BTreeSet<Vec<u64>> = base.iter().map(|t| vec![t[0], t[2], t[1]]).collect();
    for fq in QuadField::primitive_moduli(7) {
        let t = triples(&GdGroup::with_fields(3, QuadField::new(5).unwrap(), fq).unwrap());
        assert!(t == base || t == reversed, "{t:?}");
    }
}

#[test]
fn one_orbit_on_cyclic_subgroups_of_order_35() {
    let g = GdGroup::new(5, 7, 3).unwrap();
    assert!(transitivity_check(5, 7, 3));
    assert_eq!(pq_subgroup_orbits(&g), 1);
}

#[test]
fn feasible_set_for_5_7_3() {
    let sys = help_system(&GdGroup::new(5, 7, 3).unwrap()).unwrap();
    let sols = help_solutions(&sys).unwrap();
    // box scan, last coordinate fixed by the sum
    let mut scan = Vec::new();
    for a in -20i64..=20 {
        for b in -20i64..=20 {
            let x = vec![a, b, 1 - a - b];
            if sys.satisfies(&x) {
                scan.push(x);
            }
        }
    }
    scan.sort();
    assert_eq!(sols, scan);
    for i in 0..3 {
        let mut e = vec![0; 3];
        e[i] = 1;
        assert!(sols.contains(&e));
    }
    assert!(sols.contains(&vec![2, 0, -1]));
    assert!(sols.len() > 3);
    let five = algorithm3(&FinAbGroup::elementary_rank2(5).unwrap(), Alg3Options::default()).unwrap();
    assert_eq!(five.verdict, Alg3Verdict::True);
}

#[test]
fn non_transitive_parameters_are_refused() {
    let g = GdGroup::new(3, 7, 4).unwrap();
    assert!(matches!(help_system(&g), Err(Error::Hypothesis(_))));
    assert!(GdGroup::new(5, 7, 5).is_err());
    assert!(GdGroup::new(5, 5, 1).is_err());
}

#[test]
fn column_sums_are_the_index() {
    for (p, q, d) in [(5, 7, 3), (7, 19, 3), (13, 17, 4)] {
        let g = GdGroup::new(p, q, d).unwrap();
        let sums = mu_table(&g).column_sums();
        assert!(sums.iter().all(|&s| s == g.index()), "{p} {q} {d}: {sums:?}");
    }
}
