use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::Zero;
use tropmult::laurent::RationalFn;
use tropmult::potential::gl2;

fn r(s: &str) -> RationalFn {
    RationalFn::parse(s).unwrap()
}

fn same(a: &RationalFn, b: &RationalFn) -> bool {
    a.sub(b).is_zero()
}

fn charges(v: Vec<tropmult::potential::CentralCharge>) -> HashMap<String, RationalFn> {
    v.into_iter().map(|c| (c.label, c.value)).collect()
}

#[test]
fn associator_formula() {
    let (u1p, u2p) = gl2::psi_symbolic().unwrap();
    assert!(same(&u1p, &r("e2/(u1*f2) + u2")));
    assert!(same(&u2p, &r("u1*u2*f2/(u1^-1*e2 + f2*u2)")));
}

#[test]
fn central_charges_on_m3() {
    let c = charges(gl2::central_charges3().unwrap());
    let (u1p, u2p) = gl2::psi_symbolic().unwrap();
    let expect = [
        ("c0.m1", r("u2")),
        ("c1.m1", r("e1*e2/(f1*f2) * u1^-2 * u2^-1")),
        ("c2.m1", r("e3/f3 * u2^-1")),
        ("c0.m2", u2p.clone()),
        ("c1.m2", r("e1/f1").div(&u2p).unwrap()),
        ("c2.m2", r("e2*e3/(f2*f3)").div(&u1p.mul(&u1p).mul(&u2p)).unwrap()),
        ("c0.p3", u1p.clone()),
        ("c0.q3", r("u1")),
    ];
    assert_eq!(c.len(), 8);
    for (k, v) in expect {
        assert!(same(&c[k], &v), "{k}: {} vs {}", c[k], v);
    }
}

#[test]
fn central_charges_on_lower_borel() {
    let c = charges(gl2::central_charges3_lower().unwrap());
    let x12 = r("1/(b1*a2 + c1*b2)");
    let x23 = r("1/(b2*a3 + c2*b3)");
    let y = r("1/(b1*a2*a3 + c1*b2*a3 + c1*c2*b3)");
    let yi = y.inv().unwrap();
    // Phi^l(x_i) = a_i / b_i and Phi^r(x_i) = c_i / b_i.
    let expect = [
        ("c0.m1", r("b3^-1").mul(&x12).mul(&yi)),
        ("c1.m1", r("a1*a2*c1*c2*b3").mul(&x12).mul(&y)),
        ("c2.m1", r("a3*c3/b3").div(&x12).unwrap().mul(&y)),
        ("c0.m2", r("b1^-1").mul(&x23).mul(&yi)),
        ("c1.m2", r("a1*c1/b1").div(&x23).unwrap().mul(&y)),
        ("c2.m2", r("a2*a3*c2*c3*b1").mul(&x23).mul(&y)),
        ("c0.p3", r("1/(b2*b3)").div(&x23).unwrap()),
        ("c0.q3", r("1/(b1*b2)").div(&x12).unwrap()),
    ];
    for (k, v) in expect {
        assert!(same(&c[k], &v), "{k}: {} vs {}", c[k], v);
    }
}

#[test]
fn delta2_is_sum_of_central_charges() {
    let (d, _) = gl2::deltan_bar(2, false).unwrap();
    let c = gl2::central_charges2().unwrap();
    let sum = c.iter().fold(RationalFn::zero(), |a, x| a.add(&x.value));
    assert!(same(&sum, &RationalFn::from(d)));
}

#[test]
fn howe_residual() {
    for n in 2..=4 {
        let res = gl2::howe_residual(n).unwrap();
        assert!(same(&res, &r("x1 + 2")), "n = {n}: {res}");
    }
}

#[test]
fn coordinates_of_f123() {
    let m = gl2::f123_coordinates().unwrap();
    let x12 = r("1/(b1*a2 + c1*b2)");
    let yi = r("b1*a2*a3 + c1*b2*a3 + c1*c2*b3");
    assert!(same(&m["u1"], &r("1/(b1*b2)").div(&x12).unwrap()));
    assert!(same(&m["u2"], &x12.mul(&yi).div(&r("b3")).unwrap()));
    for k in 1..=3 {
        assert!(same(&m[&format!("e{k}")], &r(&format!("a{k}*c{k}/b{k}"))));
    }
}

#[test]
fn associator_relates_two_bracketings() {
    let a = gl2::f123_coordinates().unwrap();
    let b = gl2::f1_23_coordinates().unwrap();
    let (u1p, u2p) = gl2::psi_symbolic().unwrap();
    assert!(same(&u1p.subst(&a).unwrap(), &b["u1"]));
    assert!(same(&u2p.subst(&a).unwrap(), &b["u2"]));
}

fn grid(n: usize, dim: usize) -> Vec<Vec<i64>> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    (0..n).map(|_| (0..dim).map(|_| rng.gen_range(-20..=20)).collect()).collect()
}

// Tropicalization turns the multiplicative relations
// c0.m2 c0.p3 = c0.m1 c0.q3 (tropically) and
// (c1.m1 c0.m1 c0.q3^2)(c2.m1 c0.m1) = (c1.m2 c0.m2)(c2.m2 c0.p3^2 c0.m2)
// into linear ones, so the eight tropical functions span only six dimensions.
#[test]
fn tropical_span_of_central_charges() {
    let m: Vec<String> = ["u1", "u2", "e1", "e2", "e3", "f1", "f2", "f3"].iter().map(|s| s.to_string()).collect();
    let forms: Vec<_> = gl2::central_charges3().unwrap().iter().map(|c| c.tropicalize(&m).unwrap()).collect();
    assert_eq!(tropmult::tropical::tropical_rank(&forms, &grid(200, 8)).unwrap(), 6);
    let abc: Vec<String> = (1..=3).flat_map(|k| ["a", "b", "c"].map(|s| format!("{s}{k}"))).collect();
    let forms: Vec<_> = gl2::central_charges3_lower().unwrap().iter().map(|c| c.tropicalize(&abc).unwrap()).collect();
    assert_eq!(tropmult::tropical::tropical_rank(&forms, &grid(200, 9)).unwrap(), 6);
}

#[test]
fn central_charges_are_linearly_independent() {
    let cs = gl2::central_charges3().unwrap();
    let names = ["u1", "u2", "e1", "e2", "e3", "f1", "f2", "f3"];
    let rows: Vec<Vec<BigRational>> = grid(12, 8)
        .into_iter()
        .map(|p| {
            let pt: HashMap<String, BigRational> =
                names.iter().zip(p).map(|(n, x)| (n.to_string(), BigRational::from_integer((x.abs() + 1).into()))).collect();
            cs.iter().map(|c| c.value.eval(&pt).unwrap()).collect()
        })
        .collect();
    assert_eq!(rational_rank(rows), 8);
}

fn rational_rank(mut m: Vec<Vec<BigRational>>) -> usize {
    let cols = m[0].len();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, p);
        for r in rank + 1..m.len() {
            let f = &m[r][c] / &m[rank][c];
            for k in c..cols {
                let v = &m[rank][k] * &f;
                m[r][k] -= v;
            }
        }
        rank += 1;
    }
    rank
}
