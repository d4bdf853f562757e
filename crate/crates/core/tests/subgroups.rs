use std::collections::BTreeSet;

use sehgalkit::abgroup::FinAbGroup;
use sehgalkit::autenum::*;
use sehgalkit::matact::AutGroup;

fn multiset<T: Ord>(mut v: Vec<T>) -> Vec<T> {
    v.sort();
    v
}

#[test]
fn gl25_classes_agree_with_oracle() {
    let fast = subgroup_class_reps(5).unwrap();
    let slow = subgroup_class_reps_oracle(5).unwrap();
    assert_eq!(fast.len(), 48);
    assert_eq!(slow.len(), 48);
    let key = |k: &Gl2Subgroup| (k.order, k.iso_type());
    assert_eq!(multiset(fast.iter().map(key).collect()), multiset(slow.iter().map(key).collect()));
}

/// The four predicates recomputed from raw matrices.
fn shape_by_hand(k: &Gl2Subgroup) -> bool {
    let q = k.q;
    let els = k.elements();
    let scalars = (1..q).all(|a| els.contains(&Mat2::scalar(q, a)));
    let a = FinAbGroup::elementary_rank2(q).unwrap();
    let h = k.to_aut_group().unwrap();
    let transitive = h.orbit(&vec_elem((1, 0))).len() as u64 == q * q - 1;
    els.len() as u64 > q && els.len() as u64 % q != 0 && !scalars && !transitive && a.order() == q * q
}

#[test]
fn gl25_filter() {
    let all = subgroup_class_reps(5).unwrap();
    for k in &all {
        assert_eq!(k.is_candidate_shape(), shape_by_hand(k), "{}", k.label);
    }
    let kept: Vec<&Gl2Subgroup> = all.iter().filter(|k| k.is_candidate_shape()).collect();
    assert_eq!(kept.len(), 7);
    // the abelian survivors are exactly the abelian candidates
    let abelian: BTreeSet<String> = kept.iter().filter(|k| k.is_abelian()).map(|k| k.iso_type()).collect();
    let cands: BTreeSet<String> = abelian_candidates(5).unwrap().iter().map(Gl2Subgroup::iso_type).collect();
    assert_eq!(abelian, cands);
}

#[test]
fn abelian_candidates_for_seven() {
    let ks = abelian_candidates(7).unwrap();
    assert!(!ks.is_empty());
    for k in &ks {
        assert!(k.is_abelian(), "{}", k.label);
        assert!(shape_by_hand(k), "{}", k.label);
        assert_eq!(dichotomy_classify(k).unwrap(), k.kind);
        if k.kind == SubgroupKind::SingerCyclic {
            // semiregular on the nonzero vectors
            assert!(k.orbit_sizes().iter().all(|&s| s as u64 == k.order));
            assert!(inside_singer(k));
        } else {
            assert!(inside_torus(k));
        }
    }
    let orders: Vec<u64> = ks.iter().filter(|k| k.kind == SubgroupKind::SingerCyclic).map(|k| k.order).collect();
    assert_eq!(orders, vec![8, 16]);
}

#[test]
fn dichotomy_on_all_abelian_classes() {
    for q in [3u64, 5] {
        for k in subgroup_class_reps(q).unwrap().iter().filter(|k| k.is_abelian()) {
            let Ok(kind) = dichotomy_classify(k) else { continue };
            let g = AutGroup::new(
                FinAbGroup::elementary_rank2(q).unwrap(),
                k.to_aut_group().unwrap().generators().to_vec(),
            )
            .unwrap();
            // a Singer-type group fixes no line; a diagonalizable one fixes two
            let parallel = |w: (u64, u64), v: (u64, u64)| (w.0 * v.1 + q * q - w.1 * v.0) % q == 0;
            let fixed_lines = (0..q)
                .map(|s| (s, 1))
                .chain([(1, 0)])
                .filter(|&v| g.orbit(&vec_elem(v)).iter().all(|x| parallel((x.0[0], x.0[1]), v)))
                .count();
            match kind {
                SubgroupKind::SingerCyclic => assert_eq!(fixed_lines, 0, "{}", k.label),
                SubgroupKind::Diagonalizable => assert!(fixed_lines >= 2, "{}", k.label),
                SubgroupKind::General => unreachable!(),
            }
        }
    }
}

#[test]
fn torus_labels_round_trip() {
    for q in [7u64, 13] {
        for k in abelian_candidates(q).unwrap() {
            if k.kind != SubgroupKind::Diagonalizable {
                continue;
            }
            let pairs = parse_pairs(&k.label).unwrap();
            let again = diagonal_subgroup(q, &pairs).unwrap();
            assert_eq!(torus_elements(&again), torus_elements(&k));
            assert_eq!(format_pairs(&pairs), k.label);
        }
    }
}
