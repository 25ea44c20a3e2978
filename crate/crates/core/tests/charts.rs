use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use tropmult::cartan::RootDatum;
use tropmult::groupsym::{chart, det_of, generalized_minor, weyl_lift, weyl_lift_word, SymMatrix};
use tropmult::laurent::RationalFn;
use tropmult::words::{all_decorated_reduced, r_factors, DecoratedWord};

fn rf(s: &str) -> RationalFn {
    RationalFn::parse(s).unwrap()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n).filter(|m| m.count_ones() as usize == k).map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect()).collect()
}

#[test]
fn sl4_chart() {
    let a3 = RootDatum::parse("A3").unwrap();
    let d = DecoratedWord::new(vec![1, 2, 3, 1, 2, 1], [1, 2, 3], [1, 2, 5]).unwrap();
    let c = chart(&a3, &d).unwrap();
    assert_eq!(d.double_word(), vec![-3, -2, 1, 2, -1, 1]);
    assert_eq!(c.vk, a3.weyl_from_word(&[3, 2, 1]).unwrap());
    // The printed matrix, with "2t6" in place of the (1,2) entry.
    let printed = [
        ["1", "2*t6", "t2 + t4", "t1"],
        ["0", "1", "t2*t3 + t2*t6^-1 + t4*t6^-1", "t1*t3 + t1*t6^-1"],
        ["0", "0", "1", "t1*t2^-1"],
        ["0", "0", "0", "1"],
    ];
    let t5_as_t6: HashMap<String, RationalFn> = [("t5".to_string(), rf("t6"))].into();
    for (i, row) in printed.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            let got = c.xi.get(i, j);
            if (i, j) == (0, 1) {
                assert_eq!(*got, rf("t5 + t6"));
            } else if got.num().used_vars().contains(&"t5".to_string()) || got.den().used_vars().contains(&"t5".to_string()) {
                // Printed with t6 where the computation has t5.
                assert_ne!(*got, rf(e));
                assert_eq!(got.subst(&t5_as_t6).unwrap(), rf(e), "entry ({i},{j})");
            } else {
                assert_eq!(*got, rf(e), "entry ({i},{j})");
            }
        }
    }
}

#[test]
fn minor_monomial_law() {
    // Δ_{v_K ω_i, w0 ω_i}(x(t)) is the monomial with exponent <ω_{i*}, r_l α_{|j_l|}^∨> in t_l.
    for name in ["A2", "A3"] {
        let dt = RootDatum::parse(name).unwrap();
        let w0 = dt.longest_element();
        for d in all_decorated_reduced(&dt, &w0, 100_000).unwrap() {
            let c = chart(&dt, &d).unwrap();
            let dw = d.double_word();
            let r = r_factors(&dt, &dw).unwrap();
            for i in 1..=dt.rank() {
                let m = generalized_minor(&dt, &c.x, &c.vk, &w0, i).unwrap().as_laurent().unwrap();
                assert!(m.is_monomial(), "{d:?} i={i}: {m}");
                let (ex, coeff) = m.exponents_over(&c.vars).unwrap().remove(0);
                assert_eq!(coeff, BigInt::from(1));
                let want: Vec<i64> = dw
                    .iter()
                    .zip(&r)
                    .map(|(j, rl)| {
                        let co = dt.weyl_act_coweight(rl, &dt.simple_coroot(j.unsigned_abs() as usize)).unwrap();
                        dt.pairing(&dt.fundamental_weight(dt.star(i)), &co).to_integer()
                    })
                    .collect();
                assert_eq!(ex, want, "{d:?} i={i}");
            }
        }
    }
}

#[test]
fn gauss_recomposition() {
    let a2 = RootDatum::parse("A2").unwrap();
    for d in all_decorated_reduced(&a2, &a2.longest_element(), 1000).unwrap() {
        let c = chart(&a2, &d).unwrap();
        let g = weyl_lift(&a2, &c.vk).unwrap().transpose().mul(&c.x);
        let (l, h, u) = g.gauss_parts().unwrap();
        assert_eq!(l.mul(&h).mul(&u).rows(), g.rows(), "{d:?}");
    }
}

#[test]
fn braid_invariance_of_lifts() {
    for name in ["A2", "A3"] {
        let dt = RootDatum::parse(name).unwrap();
        let w0 = dt.longest_element();
        let first = weyl_lift(&dt, &w0).unwrap().rows();
        for word in dt.reduced_words(&w0) {
            assert_eq!(weyl_lift_word(&dt, &word).unwrap().rows(), first, "{word:?}");
        }
    }
}

fn eval(m: &SymMatrix, vars: &[String], t: &[(i64, i64)]) -> Vec<Vec<BigRational>> {
    let point: HashMap<String, BigRational> =
        vars.iter().zip(t).map(|(v, &(p, q))| (v.clone(), BigRational::new(p.into(), q.into()))).collect();
    m.eval(&point).unwrap()
}

/// `ξ(t)` at positive `t` is totally positive in `U`: every minor not forced to vanish is positive.
fn assert_totally_positive(m: &[Vec<BigRational>]) {
    let n = m.len();
    let zero = BigRational::from_integer(0.into());
    for k in 1..n {
        for rows in subsets(n, k) {
            for cols in subsets(n, k) {
                let v = det_of(&|i, j| m[i][j].clone(), &rows, &cols);
                if rows.iter().zip(&cols).all(|(r, c)| r <= c) {
                    assert!(v > zero, "minor {rows:?} {cols:?} = {v}");
                } else {
                    assert!(v == zero);
                }
            }
        }
    }
}

fn all_words(name: &str) -> (RootDatum, Vec<DecoratedWord>) {
    let dt = RootDatum::parse(name).unwrap();
    let all = all_decorated_reduced(&dt, &dt.longest_element(), 100_000).unwrap();
    (dt, all)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn charts_are_positive_on_a2(idx in 0usize..1000, t in prop::collection::vec((1i64..20, 1i64..20), 3)) {
        let (dt, all) = all_words("A2");
        let c = chart(&dt, &all[idx % all.len()]).unwrap();
        assert_totally_positive(&eval(&c.xi, &c.vars, &t));
    }

    #[test]
    fn charts_are_positive_on_a3(idx in 0usize..100_000, t in prop::collection::vec((1i64..9, 1i64..9), 6)) {
        let (dt, all) = all_words("A3");
        let c = chart(&dt, &all[idx % all.len()]).unwrap();
        assert_totally_positive(&eval(&c.xi, &c.vars, &t));
    }
}
