use std::sync::OnceLock;

use proptest::prelude::*;
use tropmult::cartan::{RootDatum, Weight};
use tropmult::oracle::{branching_mult, nfold_oracle, tensor_decomposition, tensor_mult_oracle};
use tropmult::tropical::{
    enumerate_lattice_points, n_fold, reduction_multiplicity, reduction_polytope_potential, ExplicitSystem, ShiftIndex, TensorSystem,
};
use tropmult::words::{enumerate_equivalence_classes, DecoratedWord};

const CAP: usize = 1_000_000;

struct Rank {
    datum: RootDatum,
    words: Vec<DecoratedWord>,
    systems: Vec<TensorSystem>,
}

/// Three inequivalent decorated words of w0 and their tensor systems.
fn rank(name: &str) -> &'static Rank {
    static CACHE: OnceLock<Vec<Rank>> = OnceLock::new();
    let all = CACHE.get_or_init(|| {
        ["A1", "A2", "A3"]
            .iter()
            .map(|n| {
                let datum = RootDatum::parse(n).unwrap();
                let reps = enumerate_equivalence_classes(&datum, &datum.longest_element(), 100_000).unwrap().representatives;
                let picks = [0, reps.len() / 2, reps.len() - 1];
                let words: Vec<DecoratedWord> = picks.iter().map(|&i| reps[i].clone()).collect();
                let systems = words.iter().map(|d| TensorSystem::new(&datum, std::slice::from_ref(d)).unwrap()).collect();
                Rank { datum, words, systems }
            })
            .collect()
    });
    &all[name[1..].parse::<usize>().unwrap() - 1]
}

fn weight(rank: usize, max: i64) -> impl Strategy<Value = Weight> {
    prop::collection::vec(0..=max, rank).prop_map(Weight::new)
}

fn triple(name: &'static str, max: i64) -> impl Strategy<Value = (&'static str, Weight, Weight, Weight)> {
    let r = name[1..].parse().unwrap();
    (weight(r, max), weight(r, max), weight(r, max)).prop_map(move |(l, n, m)| (name, l, n, m))
}

fn small_triple() -> impl Strategy<Value = (&'static str, Weight, Weight, Weight)> {
    prop_oneof![triple("A1", 6), triple("A2", 3), triple("A3", 2)]
}

fn count(ts: &TensorSystem, l: &Weight, n: &Weight, m: &Weight) -> u64 {
    ts.multiplicity(&[l.clone(), n.clone()], m, CAP, false).unwrap().count
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn matches_oracle_on_every_chart((name, l, n, m) in small_triple()) {
        let rk = rank(name);
        let want = tensor_mult_oracle(&rk.datum, &l, &n, &m).unwrap();
        for (ts, d) in rk.systems.iter().zip(&rk.words) {
            prop_assert_eq!(count(ts, &l, &n, &m) as i64, want, "{:?}", d);
        }
    }

    #[test]
    fn symmetric_in_the_factors((name, l, n, m) in small_triple()) {
        let ts = &rank(name).systems[1];
        prop_assert_eq!(count(ts, &l, &n, &m), count(ts, &n, &l, &m));
    }

    #[test]
    fn top_component_and_parity((name, l, n, m) in small_triple()) {
        let rk = rank(name);
        let ts = &rk.systems[2];
        prop_assert_eq!(count(ts, &l, &n, &l.add(&n)), 1);
        if rk.datum.weight_in_root_lattice(&l.add(&n).sub(&m)).is_none() {
            prop_assert_eq!(count(ts, &l, &n, &m), 0);
        }
    }

    #[test]
    fn explicit_route_matches((name, l, n, m) in prop_oneof![triple("A2", 3), triple("A3", 2)]) {
        let rk = rank(name);
        for (ts, d) in rk.systems.iter().zip(&rk.words) {
            let p = ExplicitSystem::new(&rk.datum, d).unwrap().polytope(&l, &n, &m, ShiftIndex::Dual).unwrap();
            prop_assert_eq!(enumerate_lattice_points(&p, CAP, false).unwrap().count, count(ts, &l, &n, &m));
        }
    }

    #[test]
    fn points_and_q_polynomials_agree_with_counts((name, l, n, m) in prop_oneof![triple("A1", 4), triple("A2", 2)]) {
        let rk = rank(name);
        let mut ts = TensorSystem::new(&rk.datum, &rk.words[..1]).unwrap();
        let plain = ts.multiplicity(&[l.clone(), n.clone()], &m, CAP, true).unwrap();
        let points = plain.points.clone().unwrap();
        prop_assert_eq!(points.len() as u64, plain.count);
        let p = ts.polytope(&[l.clone(), n.clone()], &m).unwrap();
        prop_assert!(points.iter().all(|t| p.contains(t)));
        for label in ["c0", "c1", "c2"] {
            let q = ts.deformed(label, &[l.clone(), n.clone()], &m, CAP).unwrap().q_poly.unwrap();
            prop_assert_eq!(q.values().sum::<u64>(), plain.count);
            prop_assert!(q.keys().all(|&e| e >= 0));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn nfold_is_associative(ws in prop_oneof![
        prop::collection::vec(weight(1, 3), 4).prop_map(|w| ("A1", w)),
        prop::collection::vec(weight(2, 1), 4).prop_map(|w| ("A2", w)),
    ]) {
        let (name, ws) = ws;
        let rk = rank(name);
        let (lambdas, mu) = (&ws[..3], &ws[3]);
        let got = n_fold(&rk.datum, &rk.words[..2], lambdas, mu, CAP).unwrap().count as i64;
        let mut want = 0;
        for (kappa, a) in tensor_decomposition(&rk.datum, &lambdas[0], &lambdas[1]).unwrap() {
            want += a * count(&rk.systems[0], &kappa, &lambdas[2], mu) as i64;
        }
        prop_assert_eq!(got, want);
        prop_assert_eq!(got, nfold_oracle(&rk.datum, lambdas, mu).unwrap());
    }

    #[test]
    fn reduction_routes_agree(name in prop_oneof![Just("A2"), Just("A3")], mask in 0usize..8, l in weight(3, 2), b in prop::collection::vec(-3i64..=3, 3)) {
        let dt = RootDatum::parse(name).unwrap();
        let r = dt.rank();
        let j: Vec<usize> = (1..=r).filter(|i| mask >> (i - 1) & 1 == 1).collect();
        let lambda = Weight::new(l.coords[..r].to_vec());
        let beta = Weight::new(b[..r].to_vec());
        prop_assume!(j.iter().all(|&i| beta.coords[i - 1] >= 0));
        let want = branching_mult(&dt, &j, &lambda, &beta).unwrap();
        prop_assert_eq!(reduction_multiplicity(&dt, &j, &lambda, &beta, CAP).unwrap().count as i64, want);
        let p = reduction_polytope_potential(&dt, &j, &lambda, &beta).unwrap();
        prop_assert_eq!(enumerate_lattice_points(&p, CAP, false).unwrap().count as i64, want);
    }
}
