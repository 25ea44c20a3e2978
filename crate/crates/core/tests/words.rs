use std::collections::BTreeSet;

use tropmult::cartan::{RootDatum, WeylElt};
use tropmult::words::{
    all_decorated_reduced, bipartite_class_bound, double_word_move, double_word_parts, enumerate_equivalence_classes, DoubleWord, Move,
};

fn datum(name: &str) -> RootDatum {
    RootDatum::parse(name).unwrap()
}

#[test]
fn moves_match_double_word_moves() {
    for name in ["A2", "A3"] {
        let dt = datum(name);
        let mut checked = 0;
        for d in all_decorated_reduced(&dt, &dt.longest_element(), 100_000).unwrap() {
            for (mv, pos, target) in d.applicable_moves(&dt) {
                let Ok(e) = d.apply_move(&dt, mv, pos) else {
                    assert_eq!(mv, Move::T4, "{d:?} {mv:?} at {pos}");
                    continue;
                };
                let moved = double_word_move(&dt, &d.double_word(), mv, target).unwrap();
                assert_eq!(e.double_word(), moved, "{d:?} {mv:?} at {pos}");
                checked += 1;
            }
        }
        assert!(checked > 0);
    }
}

#[test]
fn simple_moves_preserve_decorated_reducedness() {
    let dt = datum("A3");
    for d in all_decorated_reduced(&dt, &dt.longest_element(), 100_000).unwrap() {
        for (mv, pos, _) in d.applicable_moves(&dt) {
            if mv != Move::T4 {
                assert!(d.apply_move(&dt, mv, pos).unwrap().is_decorated_reduced(&dt).unwrap());
            }
        }
    }
}

fn shuffles(a: &[i64], b: &[i64], prefix: &mut Vec<i64>, out: &mut BTreeSet<DoubleWord>) {
    if a.is_empty() && b.is_empty() {
        out.insert(prefix.clone());
        return;
    }
    for (x, y, first) in [(a, b, true), (b, a, false)] {
        if let Some((&h, rest)) = x.split_first() {
            prefix.push(h);
            if first {
                shuffles(rest, y, prefix, out);
            } else {
                shuffles(y, rest, prefix, out);
            }
            prefix.pop();
        }
    }
}

/// Double reduced words of all `(v1, v2)` with `v1^{-1} v2 = w` and lengths adding up.
fn double_reduced_words(dt: &RootDatum, w: &WeylElt) -> BTreeSet<DoubleWord> {
    let mut out = BTreeSet::new();
    for v1 in dt.elements() {
        let v2 = dt.compose(&v1, w);
        if v1.length() + v2.length() != w.length() {
            continue;
        }
        for a in dt.reduced_words(&v1) {
            let neg: Vec<i64> = a.iter().map(|&i| -(i as i64)).collect();
            for b in dt.reduced_words(&v2) {
                let pos: Vec<i64> = b.iter().map(|&i| i as i64).collect();
                shuffles(&neg, &pos, &mut vec![], &mut out);
            }
        }
    }
    out
}

#[test]
fn image_of_double_word_map() {
    for name in ["A2", "A3"] {
        let dt = datum(name);
        for w in [dt.longest_element(), dt.weyl_from_word(&[1, 2]).unwrap()] {
            let image: BTreeSet<DoubleWord> =
                all_decorated_reduced(&dt, &w, 100_000).unwrap().iter().map(|d| d.double_word()).collect();
            assert_eq!(image, double_reduced_words(&dt, &w), "{name} {:?}", w.word());
            for dw in &image {
                assert!(double_word_parts(&dt, dw).unwrap().is_some());
            }
        }
    }
}

#[test]
fn class_counts_meet_lower_bounds() {
    for name in ["A2", "A3"] {
        let dt = datum(name);
        let classes = enumerate_equivalence_classes(&dt, &dt.longest_element(), 100_000).unwrap();
        let bound = bipartite_class_bound(&dt).unwrap();
        assert!(classes.representatives.len() >= bound, "{name}: {} < {bound}", classes.representatives.len());
        assert_eq!(classes.sizes.iter().sum::<usize>(), classes.total);
    }
    // w = aba with a = s1 s3, b = s2 in A3.
    let a3 = datum("A3");
    let w = a3.weyl_from_word(&[1, 3, 2, 1, 3]).unwrap();
    assert_eq!(w.length(), 5);
    let classes = enumerate_equivalence_classes(&a3, &w, 100_000).unwrap();
    assert!(classes.representatives.len() >= 4);
}

#[test]
fn enumeration_is_deterministic() {
    let dt = datum("A3");
    let a = enumerate_equivalence_classes(&dt, &dt.longest_element(), 100_000).unwrap();
    let b = enumerate_equivalence_classes(&dt, &dt.longest_element(), 100_000).unwrap();
    assert_eq!(a.representatives, b.representatives);
    assert_eq!(a.tau4_edges, b.tau4_edges);
}
