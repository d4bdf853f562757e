use std::collections::BTreeSet;

use num_rational::Ratio;
use sehgalkit::abgroup::{AbElem, FinAbGroup};
use sehgalkit::arith::factorize;

fn partitions(n: u32, max: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (1..=n.min(max)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn all_groups(order: u64) -> Vec<FinAbGroup> {
    let mut specs: Vec<Vec<(u64, Vec<u32>)>> = vec![vec![]];
    for (p, e) in factorize(order) {
        specs = specs
            .into_iter()
            .flat_map(|s| {
                partitions(e, e).into_iter().map(move |part| {
                    let mut t = s.clone();
                    t.push((p, part));
                    t
                })
            })
            .collect();
    }
    specs.iter().map(|s| FinAbGroup::new(s).unwrap()).collect()
}

#[test]
fn h_vanishes_exactly_on_cyclic_groups() {
    let mut seen = 0;
    for n in 2..=200u64 {
        for a in all_groups(n) {
            let cyclic = a.elements().iter().any(|x| a.element_order(x) == n);
            assert_eq!(a.h_invariant().unwrap() == Ratio::from_integer(0), cyclic, "{a}");
            seen += 1;
        }
    }
    assert!(seen > 300);
}

#[test]
fn parts_split_every_element() {
    for spec in ["7^[1,1]x13^[1]", "2^[2,1]x3^[1]x5^[1]", "5^[1]x7^[1]"] {
        let a = FinAbGroup::parse(spec).unwrap();
        let primes = a.primes();
        for mask in 0..(1u32 << primes.len()) {
            let pi: Vec<u64> = primes.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p).collect();
            let rest = a.complement_primes(&pi);
            for x in a.elements() {
                let (u, v) = (a.part(&x, &pi), a.part(&x, &rest));
                assert_eq!(a.multiply(&u, &v), x);
                let (ou, ov) = (a.element_order(&u), a.element_order(&v));
                assert_eq!(num_integer::gcd(ou, ov), 1);
                assert!(pi.is_empty() || factorize(ou).iter().all(|(p, _)| pi.contains(p)));
            }
        }
    }
    // order-35 element: its 5-part is the power of it that has order 5 and
    // multiplies with the 7-part back to it
    let a = FinAbGroup::parse("5^[1]x7^[1]").unwrap();
    let x = a.elem(&[1, 1]).unwrap();
    let five = a.part(&x, &[5]);
    let powers: Vec<AbElem> = (0..35).map(|k| a.power(&x, k)).collect();
    assert!(powers.contains(&five));
    assert_eq!(a.element_order(&five), 5);
    assert_eq!(a.multiply(&five, &a.part(&x, &[7])), x);
}

/// All subgroups generated by at most two elements, with cyclic quotient,
/// and minimal among such.
fn minimal_cocyclic_by_scan(a: &FinAbGroup) -> BTreeSet<Vec<AbElem>> {
    let els = a.elements();
    let mut subs: BTreeSet<Vec<AbElem>> = BTreeSet::new();
    for x in &els {
        for y in &els {
            subs.insert(a.subgroup(&[x.clone(), y.clone()]).elements);
        }
    }
    let n = a.order();
    let cocyclic: Vec<Vec<AbElem>> = subs
        .into_iter()
        .filter(|k| {
            let index = n / k.len() as u64;
            els.iter().any(|g| {
                // order of g modulo k
                let mut m = 1;
                let mut y = g.clone();
                while k.binary_search(&y).is_err() {
                    y = a.multiply(&y, g);
                    m += 1;
                }
                m == index
            })
        })
        .collect();
    cocyclic
        .iter()
        .filter(|k| !cocyclic.iter().any(|l| l.len() < k.len() && l.iter().all(|x| k.binary_search(x).is_ok())))
        .cloned()
        .collect()
}

#[test]
fn minimal_cocyclic_subgroups_match_scan() {
    for spec in ["7^[1,1]", "5^[1,1]", "2^[2,1]", "2^[1,1]x3^[1,1]", "3^[2,1]", "2^[1]x3^[1]"] {
        let a = FinAbGroup::parse(spec).unwrap();
        let got: BTreeSet<Vec<AbElem>> = a
            .minimal_cocyclic_subgroups()
            .unwrap()
            .into_iter()
            .map(|k| k.elements)
            .collect();
        assert_eq!(got, minimal_cocyclic_by_scan(&a), "{spec}");
    }
}

#[test]
fn minimal_cosets_partition_the_group() {
    for spec in ["7^[1,1]", "2^[1,1]x3^[1,1]", "3^[2,1]"] {
        let a = FinAbGroup::parse(spec).unwrap();
        let cosets = a.minimal_cocyclic_cosets().unwrap();
        for k in a.minimal_cocyclic_subgroups().unwrap() {
            let mut covered: Vec<AbElem> = cosets
                .iter()
                .filter(|c| c.subgroup.elements == k.elements)
                .flat_map(|c| c.elements(&a))
                .collect();
            covered.sort();
            assert_eq!(covered, a.elements(), "{spec}");
        }
        let distinct: BTreeSet<Vec<AbElem>> = cosets.iter().map(|c| c.elements(&a)).collect();
        assert_eq!(distinct.len(), cosets.len());
    }
}

#[test]
fn cocyclic_cosets_are_unions_of_minimal_ones() {
    let a = FinAbGroup::elementary_rank2(7).unwrap();
    let minimal = a.minimal_cocyclic_subgroups().unwrap();
    let cocyclic = a.cocyclic_subgroups().unwrap();
    assert_eq!(cocyclic.len(), 9);
    for k in &cocyclic {
        let l = minimal.iter().find(|l| l.is_subgroup_of(k)).expect("a minimal one inside");
        for rep in a.cosets(k) {
            let coset: BTreeSet<AbElem> = k.elements.iter().map(|x| a.multiply(&rep, x)).collect();
            // the L-cosets through points of the coset stay inside it
            for x in &coset {
                assert!(l.elements.iter().all(|y| coset.contains(&a.multiply(x, y))));
            }
            assert_eq!(coset.len() as u64 % l.order(), 0);
        }
    }
}
