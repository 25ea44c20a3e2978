//! Character-theoretic ground truth: weight multiplicities (Freudenthal), tensor product
//! decompositions (Brauer–Klimyk) and branching to Levi subalgebras.
//!
//! Nothing here touches charts or potentials.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_rational::Ratio;

use crate::cartan::{RootDatum, Weight};
use crate::error::{Error, Result};

/// Weight multiplicities of one irreducible module.
#[derive(Debug, Clone)]
pub struct CharacterTable {
    pub highest: Weight,
    pub mults: BTreeMap<Weight, i64>,
}

impl CharacterTable {
    pub fn dim(&self) -> i64 {
        self.mults.values().sum()
    }
    pub fn mult(&self, mu: &Weight) -> i64 {
        self.mults.get(mu).copied().unwrap_or(0)
    }
}

type Cache = Mutex<HashMap<(Vec<Vec<i64>>, Vec<i64>), Arc<CharacterTable>>>;

fn cache() -> &'static Cache {
    static C: OnceLock<Cache> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

struct Form {
    d: Vec<i64>,
    roots: Vec<Vec<i64>>,
}

impl Form {
    fn new(datum: &RootDatum) -> Self {
        Form { d: datum.symmetrizer(), roots: datum.positive_roots() }
    }
    /// `(beta, mu)` for `beta` in simple-root coordinates and `mu` in weight coordinates.
    fn root_weight(&self, beta: &[i64], mu: &[i64]) -> i64 {
        beta.iter().zip(&self.d).zip(mu).map(|((b, d), m)| b * d * m).sum()
    }
}

fn check_dominant(datum: &RootDatum, lambda: &Weight) -> Result<()> {
    if lambda.coords.len() != datum.rank() {
        return Err(Error::SizeMismatch(format!("weight has {} coordinates, rank is {}", lambda.coords.len(), datum.rank())));
    }
    if !lambda.is_dominant() {
        return Err(Error::Validation(format!("{lambda} is not dominant")));
    }
    Ok(())
}

/// Weyl dimension formula.
pub fn weyl_dimension(datum: &RootDatum, lambda: &Weight) -> i64 {
    let form = Form::new(datum);
    let rho = datum.rho();
    let lr = lambda.add(&rho);
    let mut num = Ratio::from_integer(1i128);
    for beta in &form.roots {
        num *= Ratio::new(form.root_weight(beta, &lr.coords) as i128, form.root_weight(beta, &rho.coords) as i128);
    }
    assert!(num.is_integer());
    *num.numer() as i64
}

/// Freudenthal's recursion over the dominant weights below `lambda`.
pub fn weight_multiplicities(datum: &RootDatum, lambda: &Weight) -> Result<Arc<CharacterTable>> {
    check_dominant(datum, lambda)?;
    let key = (datum.cartan().to_vec(), lambda.coords.clone());
    if let Some(t) = cache().lock().unwrap().get(&key) {
        return Ok(t.clone());
    }
    let table = Arc::new(freudenthal(datum, lambda));
    cache().lock().unwrap().insert(key, table.clone());
    Ok(table)
}

fn freudenthal(datum: &RootDatum, lambda: &Weight) -> CharacterTable {
    let form = Form::new(datum);
    let r = datum.rank();
    let rho2: Vec<i64> = vec![2; r];
    // Dominant weights below lambda, found by subtracting positive roots.
    let mut depth_of: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
    depth_of.insert(lambda.coords.clone(), 0);
    let mut frontier = vec![lambda.coords.clone()];
    while let Some(mu) = frontier.pop() {
        for beta in &form.roots {
            let nu: Vec<i64> = (0..r).map(|j| mu[j] - (0..r).map(|k| datum.cartan()[j][k] * beta[k]).sum::<i64>()).collect();
            if nu.iter().all(|&c| c >= 0) && !depth_of.contains_key(&nu) {
                let diff = datum.weight_in_root_lattice(&Weight::new(lambda.coords.iter().zip(&nu).map(|(a, b)| a - b).collect()));
                let depth = diff.expect("difference of weights in one module lies in the root lattice").iter().sum();
                depth_of.insert(nu.clone(), depth);
                frontier.push(nu);
            }
        }
    }
    let mut order: Vec<(i64, Vec<i64>)> = depth_of.iter().map(|(w, d)| (*d, w.clone())).collect();
    order.sort();
    let mut dom_mult: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
    let below = |nu: &[i64]| -> bool {
        let diff = Weight::new(lambda.coords.iter().zip(nu).map(|(a, b)| a - b).collect());
        matches!(datum.weight_in_root_lattice(&diff), Some(e) if e.iter().all(|&x| x >= 0))
    };
    for (depth, mu) in order {
        if depth == 0 {
            dom_mult.insert(mu, 1);
            continue;
        }
        // (lambda - mu, lambda + mu + 2 rho), with lambda - mu in root coordinates.
        let diff = datum
            .weight_in_root_lattice(&Weight::new(lambda.coords.iter().zip(&mu).map(|(a, b)| a - b).collect()))
            .unwrap();
        let sum: Vec<i64> = (0..r).map(|j| lambda.coords[j] + mu[j] + rho2[j]).collect();
        let lhs = form.root_weight(&diff, &sum);
        let mut rhs = 0i64;
        for beta in &form.roots {
            let alpha_w: Vec<i64> = (0..r).map(|j| (0..r).map(|k| datum.cartan()[j][k] * beta[k]).sum()).collect();
            let mut k = 1;
            loop {
                let nu: Vec<i64> = (0..r).map(|j| mu[j] + k * alpha_w[j]).collect();
                if !below(&nu) {
                    break;
                }
                let (dom, _) = datum.dominant_rep(&Weight::new(nu.clone()));
                let m = dom_mult.get(&dom.coords).copied().unwrap_or(0);
                rhs += 2 * m * form.root_weight(beta, &nu);
                k += 1;
            }
        }
        assert!(lhs > 0 && rhs % lhs == 0, "Freudenthal recursion produced a non-integer");
        dom_mult.insert(mu, rhs / lhs);
    }
    let mut mults = BTreeMap::new();
    for (mu, m) in dom_mult {
        if m == 0 {
            continue;
        }
        for w in datum.orbit(&Weight::new(mu)) {
            mults.insert(w, m);
        }
    }
    let table = CharacterTable { highest: lambda.clone(), mults };
    assert_eq!(table.dim(), weyl_dimension(datum, lambda), "dimension check failed for {lambda}");
    table
}

/// Decomposition of `V_lambda ⊗ V_nu` into irreducibles.
pub fn tensor_decomposition(datum: &RootDatum, lambda: &Weight, nu: &Weight) -> Result<BTreeMap<Weight, i64>> {
    check_dominant(datum, lambda)?;
    check_dominant(datum, nu)?;
    let table = weight_multiplicities(datum, lambda)?;
    let rho = datum.rho();
    let mut out: BTreeMap<Weight, i64> = BTreeMap::new();
    for (mu, m) in &table.mults {
        let shifted = mu.add(nu).add(&rho);
        let (dom, len) = datum.dominant_rep(&shifted);
        if dom.coords.iter().any(|&c| c == 0) {
            continue;
        }
        let sign = if len % 2 == 0 { 1 } else { -1 };
        *out.entry(dom.sub(&rho)).or_insert(0) += sign * m;
    }
    out.retain(|_, c| *c != 0);
    assert!(out.values().all(|&c| c > 0), "negative tensor multiplicity");
    let total: i64 = out.iter().map(|(k, c)| c * weyl_dimension(datum, k)).sum();
    assert_eq!(total, weyl_dimension(datum, lambda) * weyl_dimension(datum, nu), "tensor dimension check failed");
    Ok(out)
}

pub fn tensor_mult_oracle(datum: &RootDatum, lambda: &Weight, nu: &Weight, mu: &Weight) -> Result<i64> {
    check_dominant(datum, mu)?;
    Ok(tensor_decomposition(datum, lambda, nu)?.get(mu).copied().unwrap_or(0))
}

/// Decomposition of `V_{l1} ⊗ ... ⊗ V_{ln}`, bracketed from the left.
pub fn nfold_decomposition(datum: &RootDatum, lambdas: &[Weight]) -> Result<BTreeMap<Weight, i64>> {
    let Some(first) = lambdas.first() else {
        return Err(Error::Validation("need at least one weight".into()));
    };
    check_dominant(datum, first)?;
    let mut acc: BTreeMap<Weight, i64> = [(first.clone(), 1)].into_iter().collect();
    for lam in &lambdas[1..] {
        let mut next = BTreeMap::new();
        for (kappa, c) in &acc {
            for (mu, d) in tensor_decomposition(datum, kappa, lam)? {
                *next.entry(mu).or_insert(0) += c * d;
            }
        }
        acc = next;
    }
    Ok(acc)
}

pub fn nfold_oracle(datum: &RootDatum, lambdas: &[Weight], mu: &Weight) -> Result<i64> {
    Ok(nfold_decomposition(datum, lambdas)?.get(mu).copied().unwrap_or(0))
}

/// The Levi subdatum on `j` (sorted, 1-based) as a standalone Cartan matrix.
pub fn levi_datum(datum: &RootDatum, j: &[usize]) -> Result<Option<RootDatum>> {
    if j.is_empty() {
        return Ok(None);
    }
    let cartan: Vec<Vec<i64>> = j.iter().map(|&a| j.iter().map(|&b| datum.a(a, b)).collect()).collect();
    RootDatum::from_cartan(cartan).map(Some)
}

fn check_subset(datum: &RootDatum, j: &[usize]) -> Result<Vec<usize>> {
    let mut v = j.to_vec();
    v.sort();
    v.dedup();
    if let Some(&bad) = v.iter().find(|&&x| x == 0 || x > datum.rank()) {
        return Err(Error::IndexOutOfRange { index: bad as i64, rank: datum.rank() });
    }
    Ok(v)
}

/// Restriction of `V_lambda` to the Levi subalgebra on `J`: highest weight `beta` -> multiplicity.
pub fn branching_oracle(datum: &RootDatum, j: &[usize], lambda: &Weight) -> Result<BTreeMap<Weight, i64>> {
    check_dominant(datum, lambda)?;
    let j = check_subset(datum, j)?;
    let table = weight_multiplicities(datum, lambda)?;
    let levi = levi_datum(datum, &j)?;
    let mut remaining: BTreeMap<Weight, i64> = table.mults.clone();
    let depth = |mu: &Weight| -> i64 { datum.weight_in_root_lattice(&lambda.sub(mu)).unwrap().iter().sum() };
    let mut out = BTreeMap::new();
    while let Some(beta) = remaining.iter().filter(|(_, &m)| m != 0).map(|(w, _)| w.clone()).min_by_key(|w| (depth(w), w.clone())) {
        let m = remaining[&beta];
        assert!(m > 0, "negative remainder while peeling");
        assert!(j.iter().all(|&x| beta.coords[x - 1] >= 0), "peeled weight is not J-dominant");
        out.insert(beta.clone(), m);
        match &levi {
            None => {
                *remaining.get_mut(&beta).unwrap() -= m;
            }
            Some(ld) => {
                let sub = Weight::new(j.iter().map(|&x| beta.coords[x - 1]).collect());
                let sub_table = weight_multiplicities(ld, &sub)?;
                for (nu, k) in &sub_table.mults {
                    let e = ld.weight_in_root_lattice(&sub.sub(nu)).expect("levi weights differ by roots");
                    let mut full = beta.clone();
                    for (pos, &x) in j.iter().enumerate() {
                        full = full.sub(&datum.simple_root(x).scale(e[pos]));
                    }
                    let slot = remaining.entry(full).or_insert(0);
                    *slot -= m * k;
                }
            }
        }
        remaining.retain(|_, v| *v != 0);
    }
    assert!(remaining.is_empty(), "branching peel left negative weights");
    let total: i64 = out
        .iter()
        .map(|(b, m)| {
            let d = match &levi {
                None => 1,
                Some(ld) => weyl_dimension(ld, &Weight::new(j.iter().map(|&x| b.coords[x - 1]).collect())),
            };
            m * d
        })
        .sum();
    assert_eq!(total, table.dim(), "branching dimension check failed");
    Ok(out)
}

pub fn branching_mult(datum: &RootDatum, j: &[usize], lambda: &Weight, beta: &Weight) -> Result<i64> {
    Ok(branching_oracle(datum, j, lambda)?.get(beta).copied().unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(c: &[i64]) -> Weight {
        Weight::new(c.to_vec())
    }

    #[test]
    fn weights() {
        let a1 = RootDatum::parse("A1").unwrap();
        let t = weight_multiplicities(&a1, &w(&[4])).unwrap();
        assert_eq!(t.mults.len(), 5);
        assert!(t.mults.values().all(|&m| m == 1));
        let a2 = RootDatum::parse("A2").unwrap();
        let t = weight_multiplicities(&a2, &w(&[1, 1])).unwrap();
        assert_eq!(t.mult(&w(&[0, 0])), 2);
        assert_eq!(t.dim(), 8);
        let a3 = RootDatum::parse("A3").unwrap();
        let t = weight_multiplicities(&a3, &w(&[1, 0, 0])).unwrap();
        assert_eq!(t.mults.len(), 4);
        for name in ["B2", "G2", "C3", "D4", "F4"] {
            let d = RootDatum::parse(name).unwrap();
            let mut l = vec![0; d.rank()];
            l[0] = 1;
            l[d.rank() - 1] += 1;
            weight_multiplicities(&d, &w(&l)).unwrap();
        }
    }

    #[test]
    fn tensors() {
        let a1 = RootDatum::parse("A1").unwrap();
        let dec = tensor_decomposition(&a1, &w(&[1]), &w(&[1])).unwrap();
        assert_eq!(dec, [(w(&[0]), 1), (w(&[2]), 1)].into_iter().collect());
        for l in 0..=10 {
            for n in 0..=10 {
                for m in 0..=20 {
                    let expect = i64::from(m >= (l - n as i64).abs() && m <= l + n && (l + n - m) % 2 == 0);
                    assert_eq!(tensor_mult_oracle(&a1, &w(&[l]), &w(&[n]), &w(&[m])).unwrap(), expect);
                }
            }
        }
        let a2 = RootDatum::parse("A2").unwrap();
        assert_eq!(tensor_mult_oracle(&a2, &w(&[1, 1]), &w(&[1, 1]), &w(&[1, 1])).unwrap(), 2);
        let dec = tensor_decomposition(&a2, &w(&[1, 0]), &w(&[0, 1])).unwrap();
        assert_eq!(dec, [(w(&[0, 0]), 1), (w(&[1, 1]), 1)].into_iter().collect());
        let g2 = RootDatum::parse("G2").unwrap();
        assert_eq!(tensor_mult_oracle(&g2, &w(&[1, 0]), &w(&[0, 1]), &w(&[1, 1])).unwrap(), 1);
        assert_eq!(nfold_oracle(&a1, &[w(&[1]), w(&[1]), w(&[1])], &w(&[1])).unwrap(), 2);
    }

    #[test]
    fn branching() {
        let a2 = RootDatum::parse("A2").unwrap();
        let b = branching_oracle(&a2, &[1, 2], &w(&[2, 1])).unwrap();
        assert_eq!(b, [(w(&[2, 1]), 1)].into_iter().collect());
        let b = branching_oracle(&a2, &[1], &w(&[1, 0])).unwrap();
        assert_eq!(b.values().sum::<i64>(), 2);
        assert_eq!(b.get(&w(&[1, 0])), Some(&1));
        let b = branching_oracle(&a2, &[], &w(&[1, 1])).unwrap();
        assert_eq!(b.get(&w(&[0, 0])), Some(&2));
        let a3 = RootDatum::parse("A3").unwrap();
        branching_oracle(&a3, &[1, 3], &w(&[1, 2, 1])).unwrap();
    }
}
