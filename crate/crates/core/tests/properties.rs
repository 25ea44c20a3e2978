use proptest::prelude::*;
use tropmult::cartan::{RootDatum, Weight};
use tropmult::laurent::{LaurentPoly, RationalFn};
use tropmult::oracle::{tensor_mult_oracle, weight_multiplicities, weyl_dimension};

const VARS: [&str; 4] = ["x1", "x2", "x3", "x4"];

fn vars() -> Vec<String> {
    VARS.iter().map(|s| s.to_string()).collect()
}

/// Positive Laurent polynomial in `x1..x4` with 1 to 6 terms.
fn positive_poly() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((prop::collection::vec(-3i32..=3, 4), 1i64..5), 1..=6).prop_map(|terms| {
        terms.iter().fold(LaurentPoly::zero(), |acc, (e, c)| {
            let f: Vec<(&str, i32)> = VARS.iter().copied().zip(e.iter().copied()).collect();
            &acc + &LaurentPoly::monomial(&f, *c)
        })
    })
}

fn trop(f: &LaurentPoly, x: &[i64]) -> i64 {
    f.tropicalize().unwrap().over(&vars()).unwrap().eval(x).unwrap()
}

fn trop_rf(f: &RationalFn, x: &[i64]) -> i64 {
    f.tropicalize().unwrap().over(&vars()).unwrap().eval(x).unwrap()
}

fn grid() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-5i64..=5, 4)
}

fn datum() -> impl Strategy<Value = RootDatum> {
    prop::sample::select(vec!["A1", "A2", "A3", "A4", "B2", "C2", "G2", "B3", "C3", "D4"]).prop_map(|n| RootDatum::parse(n).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn tropicalization_is_a_semifield_map(f in positive_poly(), g in positive_poly(), x in grid()) {
        prop_assert_eq!(trop(&(&f * &g), &x), trop(&f, &x) + trop(&g, &x));
        prop_assert_eq!(trop(&(&f + &g), &x), trop(&f, &x).min(trop(&g, &x)));
    }

    #[test]
    fn tropical_value_is_min_over_monomials(f in positive_poly(), x in grid()) {
        let want = f.exponents_over(&vars()).unwrap().iter().map(|(e, _)| e.iter().zip(&x).map(|(a, b)| a * b).sum::<i64>()).min().unwrap();
        prop_assert_eq!(trop(&f, &x), want);
    }

    #[test]
    fn exact_division_inverts_multiplication(f in positive_poly(), g in positive_poly()) {
        prop_assert_eq!((&f * &g).exact_div(&g).unwrap(), f);
    }

    #[test]
    fn tropicalization_ignores_presentation(f in positive_poly(), g in positive_poly(), e in prop::collection::vec(-2i32..=2, 4), x in grid()) {
        let h: Vec<(&str, i32)> = VARS.iter().copied().zip(e).collect();
        let h = LaurentPoly::monomial(&h, 1);
        let a = RationalFn::new(f.clone(), g.clone()).unwrap();
        let b = RationalFn::new(&f * &h, &g * &h).unwrap();
        prop_assert_eq!(trop_rf(&a, &x), trop_rf(&b, &x));
        prop_assert_eq!(trop_rf(&a, &x), trop(&f, &x) - trop(&g, &x));
    }

    #[test]
    fn lengths_are_subadditive(dt in datum(), u in prop::collection::vec(1usize..=4, 0..=6), w in prop::collection::vec(1usize..=4, 0..=6)) {
        let r = dt.rank();
        let u: Vec<usize> = u.into_iter().map(|i| (i - 1) % r + 1).collect();
        let w: Vec<usize> = w.into_iter().map(|i| (i - 1) % r + 1).collect();
        let (eu, ew) = (dt.weyl_from_word(&u).unwrap(), dt.weyl_from_word(&w).unwrap());
        let uw = dt.compose(&eu, &ew);
        prop_assert!(uw.length() <= eu.length() + ew.length());
        let (ru, rw) = (eu.word().to_vec(), ew.word().to_vec());
        let joined: Vec<usize> = ru.iter().chain(&rw).copied().collect();
        prop_assert_eq!(uw.length() == ru.len() + rw.len(), dt.is_reduced(&joined).unwrap());
    }

    #[test]
    fn longest_element_negates_dominant_cone(dt in datum(), c in prop::collection::vec(0i64..5, 4)) {
        let l = Weight::new(c[..dt.rank()].to_vec());
        prop_assert!(dt.weyl_act(&dt.longest_element(), &l).unwrap().neg().is_dominant());
    }

    #[test]
    fn weight_multiplicities_are_weyl_invariant(name in prop::sample::select(vec!["A2", "B2", "G2", "A3"]), c in prop::collection::vec(0i64..3, 3)) {
        let dt = RootDatum::parse(name).unwrap();
        let l = Weight::new(c[..dt.rank()].to_vec());
        let table = weight_multiplicities(&dt, &l).unwrap();
        prop_assert_eq!(table.mult(&l), 1);
        prop_assert_eq!(table.dim(), weyl_dimension(&dt, &l));
        for w in dt.elements() {
            for mu in [l.clone(), l.sub(&dt.simple_root(1))] {
                prop_assert_eq!(table.mult(&dt.weyl_act(&w, &mu).unwrap()), table.mult(&mu));
            }
        }
    }

    #[test]
    fn oracle_is_symmetric(c in prop::collection::vec(0i64..3, 6)) {
        let dt = RootDatum::parse("A2").unwrap();
        let (l, n) = (Weight::new(c[..2].to_vec()), Weight::new(c[2..4].to_vec()));
        let m = Weight::new(c[4..].to_vec());
        prop_assert_eq!(tensor_mult_oracle(&dt, &l, &n, &m).unwrap(), tensor_mult_oracle(&dt, &n, &l, &m).unwrap());
    }
}

#[test]
fn minimal_lift_weights() {
    for name in ["A1", "A2", "A3", "A4", "B2", "C2", "G2"] {
        let dt = RootDatum::parse(name).unwrap();
        for i in 1..=dt.rank() {
            let got = dt.minimal_lift_weight(i).unwrap();
            assert!(got.is_dominant());
            let want: Vec<i64> = (1..=dt.rank()).map(|j| if j == i { 0 } else { -dt.a(j, i) }).collect();
            assert_eq!(got.coords, want, "{name} i={i}");
        }
        assert_eq!(dt.langlands_dual().langlands_dual(), dt);
    }
}

#[test]
fn a1_clebsch_gordan() {
    let dt = RootDatum::parse("A1").unwrap();
    for a in 0..=10 {
        for b in 0..=10 {
            for c in 0..=20 {
                let want = (c <= a + b && c >= (a - b as i64).abs() && (a + b - c) % 2 == 0) as i64;
                let got = tensor_mult_oracle(&dt, &Weight::new(vec![a]), &Weight::new(vec![b]), &Weight::new(vec![c])).unwrap();
                assert_eq!(got, want, "{a} {b} {c}");
            }
        }
    }
}
