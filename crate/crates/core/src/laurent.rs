//! Laurent polynomials with integer coefficients and their fractions.
//!
//! Variables are named; binary operations on polynomials over different variable lists
//! work over the union of the lists.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponent vector, ordered by total degree then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mono(pub Vec<i32>);

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        let da: i64 = self.0.iter().map(|&e| e as i64).sum();
        let db: i64 = other.0.iter().map(|&e| e as i64).sum();
        da.cmp(&db).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Mono {
    fn add(&self, o: &Mono) -> Mono {
        Mono(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
    fn sub(&self, o: &Mono) -> Mono {
        Mono(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

#[derive(Debug, Clone)]
pub struct LaurentPoly {
    vars: Arc<Vec<String>>,
    terms: BTreeMap<Mono, BigInt>,
}

fn union_vars(a: &Arc<Vec<String>>, b: &Arc<Vec<String>>) -> Arc<Vec<String>> {
    if Arc::ptr_eq(a, b) || a == b {
        return a.clone();
    }
    let mut v: Vec<String> = a.as_ref().clone();
    for x in b.iter() {
        if !v.contains(x) {
            v.push(x.clone());
        }
    }
    if v.len() == b.len() {
        return b.clone();
    }
    Arc::new(v)
}

impl LaurentPoly {
    pub fn zero_in(vars: Arc<Vec<String>>) -> Self {
        LaurentPoly { vars, terms: BTreeMap::new() }
    }

    pub fn zero() -> Self {
        Self::zero_in(Arc::new(vec![]))
    }

    pub fn constant_in(vars: Arc<Vec<String>>, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut p = Self::zero_in(vars);
        if !c.is_zero() {
            let n = p.vars.len();
            p.terms.insert(Mono(vec![0; n]), c);
        }
        p
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::constant_in(Arc::new(vec![]), c)
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn var(name: &str) -> Self {
        Self::monomial(&[(name, 1)], 1)
    }

    /// `c * prod name^exp`.
    pub fn monomial(factors: &[(&str, i32)], c: impl Into<BigInt>) -> Self {
        let mut vars: Vec<String> = vec![];
        for (n, _) in factors {
            if !vars.iter().any(|v| v == n) {
                vars.push(n.to_string());
            }
        }
        let mut e = vec![0; vars.len()];
        for (n, k) in factors {
            let i = vars.iter().position(|v| v == n).unwrap();
            e[i] += k;
        }
        let mut p = Self::zero_in(Arc::new(vars));
        let c = c.into();
        if !c.is_zero() {
            p.terms.insert(Mono(e), c);
        }
        p
    }

    pub fn vars(&self) -> &Arc<Vec<String>> {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms as (exponents by variable name, coefficient), variables with exponent 0 omitted.
    pub fn terms(&self) -> Vec<(BTreeMap<String, i32>, BigInt)> {
        self.terms
            .iter()
            .map(|(m, c)| {
                let e = self
                    .vars
                    .iter()
                    .zip(&m.0)
                    .filter(|(_, &k)| k != 0)
                    .map(|(v, &k)| (v.clone(), k))
                    .collect();
                (e, c.clone())
            })
            .collect()
    }

    /// Exponent of `name` in each term, in the raw order of `raw_terms`.
    pub fn raw_terms(&self) -> impl Iterator<Item = (&[i32], &BigInt)> {
        self.terms.iter().map(|(m, c)| (m.0.as_slice(), c))
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().0.iter().all(|&e| e == 0))
    }

    pub fn constant_value(&self) -> Option<BigInt> {
        if self.terms.is_empty() {
            return Some(BigInt::zero());
        }
        if self.is_constant() {
            return Some(self.terms.values().next().unwrap().clone());
        }
        None
    }

    /// All coefficients strictly positive (and at least one term).
    pub fn is_positive(&self) -> bool {
        !self.terms.is_empty() && self.terms.values().all(|c| c.is_positive())
    }

    /// Re-express over `vars`, which must contain every variable in use.
    pub fn embed(&self, vars: &Arc<Vec<String>>) -> LaurentPoly {
        if Arc::ptr_eq(&self.vars, vars) || self.vars == *vars {
            return LaurentPoly { vars: vars.clone(), terms: self.terms.clone() };
        }
        let idx: Vec<Option<usize>> = self.vars.iter().map(|v| vars.iter().position(|w| w == v)).collect();
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut e = vec![0; vars.len()];
            for (k, &x) in m.0.iter().enumerate() {
                if x != 0 {
                    let j = idx[k].unwrap_or_else(|| panic!("variable {} missing from target context", self.vars[k]));
                    e[j] = x;
                }
            }
            terms.insert(Mono(e), c.clone());
        }
        LaurentPoly { vars: vars.clone(), terms }
    }

    fn aligned(&self, other: &LaurentPoly) -> (LaurentPoly, LaurentPoly) {
        let v = union_vars(&self.vars, &other.vars);
        (self.embed(&v), other.embed(&v))
    }

    fn insert_term(terms: &mut BTreeMap<Mono, BigInt>, m: Mono, c: BigInt) {
        use std::collections::btree_map::Entry;
        match terms.entry(m) {
            Entry::Vacant(e) => {
                if !c.is_zero() {
                    e.insert(c);
                }
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, k: &BigInt) -> LaurentPoly {
        if k.is_zero() {
            return Self::zero_in(self.vars.clone());
        }
        LaurentPoly { vars: self.vars.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect() }
    }

    pub fn pow(&self, n: u32) -> LaurentPoly {
        let mut acc = Self::constant_in(self.vars.clone(), 1);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Integer power; negative exponents only for monomials.
    pub fn powi(&self, n: i32) -> Result<LaurentPoly> {
        if n >= 0 {
            return Ok(self.pow(n as u32));
        }
        let inv = self.monomial_inverse()?;
        Ok(inv.pow((-n) as u32))
    }

    /// Inverse of a unit `+-x^m`.
    pub fn monomial_inverse(&self) -> Result<LaurentPoly> {
        if !self.is_monomial() {
            return Err(Error::NotMonomial(self.to_string()));
        }
        let (m, c) = self.terms.iter().next().unwrap();
        if !c.abs().is_one() {
            return Err(Error::NotDivisible(format!("1 / {self}")));
        }
        let mut terms = BTreeMap::new();
        terms.insert(Mono(m.0.iter().map(|e| -e).collect()), c.clone());
        Ok(LaurentPoly { vars: self.vars.clone(), terms })
    }

    /// Graded-lexicographic leading term.
    pub fn leading(&self) -> Option<(&Mono, &BigInt)> {
        self.terms.iter().next_back()
    }

    /// Componentwise minimum of exponents (the largest monomial dividing every term).
    pub fn monomial_content(&self) -> Mono {
        let n = self.vars.len();
        let mut lo = vec![i32::MAX; n];
        for m in self.terms.keys() {
            for (l, &e) in lo.iter_mut().zip(&m.0) {
                *l = (*l).min(e);
            }
        }
        if self.terms.is_empty() {
            lo = vec![0; n];
        }
        Mono(lo)
    }

    pub fn integer_content(&self) -> BigInt {
        self.terms.values().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn shift(&self, m: &Mono) -> LaurentPoly {
        LaurentPoly { vars: self.vars.clone(), terms: self.terms.iter().map(|(k, c)| (k.add(m), c.clone())).collect() }
    }

    fn mono_in(&self, m: Vec<i32>) -> Mono {
        Mono(m)
    }

    /// Exact quotient `self / g` in the Laurent ring.
    pub fn exact_div(&self, g: &LaurentPoly) -> Result<LaurentPoly> {
        if g.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (f, g) = self.aligned(g);
        if f.is_zero() {
            return Ok(f);
        }
        let gm = g.monomial_content();
        let neg_gm = Mono(gm.0.iter().map(|e| -e).collect());
        let g0 = g.shift(&neg_gm);
        let fm = f.monomial_content();
        let neg_fm = Mono(fm.0.iter().map(|e| -e).collect());
        let mut r = f.shift(&neg_fm);
        let (lg_m, lg_c) = {
            let (m, c) = g0.leading().unwrap();
            (m.clone(), c.clone())
        };
        let mut q: BTreeMap<Mono, BigInt> = BTreeMap::new();
        while let Some((lm, lc)) = r.leading().map(|(m, c)| (m.clone(), c.clone())) {
            let qm = lm.sub(&lg_m);
            if qm.0.iter().any(|&e| e < 0) {
                return Err(Error::NotDivisible(format!("{self} / {g}")));
            }
            let (qc, rem) = lc.div_rem(&lg_c);
            if !rem.is_zero() {
                return Err(Error::NotDivisible(format!("{self} / {g}")));
            }
            for (m, c) in &g0.terms {
                Self::insert_term(&mut r.terms, m.add(&qm), -(c * &qc));
            }
            q.insert(qm, qc);
        }
        let shift = fm.sub(&gm);
        let quotient = LaurentPoly { vars: f.vars.clone(), terms: q };
        Ok(quotient.shift(&self.mono_in(shift.0)))
    }

    pub fn eval(&self, point: &HashMap<String, BigRational>) -> Result<BigRational> {
        let vals: Vec<Option<&BigRational>> = self.vars.iter().map(|v| point.get(v)).collect();
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = BigRational::from_integer(c.clone());
            for (k, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let v = vals[k].ok_or_else(|| Error::Validation(format!("no value for {}", self.vars[k])))?;
                if v.is_zero() && e < 0 {
                    return Err(Error::DivisionByZero);
                }
                let p = num_traits::pow(v.clone(), e.unsigned_abs() as usize);
                t = if e > 0 { t * p } else { t / p };
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Substitute rational functions for variables; unmapped variables are kept.
    pub fn subst(&self, map: &HashMap<String, RationalFn>) -> Result<RationalFn> {
        let images: Vec<RationalFn> = self
            .vars
            .iter()
            .map(|v| map.get(v).cloned().unwrap_or_else(|| RationalFn::from_poly(LaurentPoly::var(v))))
            .collect();
        let mut acc = RationalFn::zero();
        for (m, c) in &self.terms {
            let mut t = RationalFn::from_poly(LaurentPoly::constant(c.clone()));
            for (k, &e) in m.0.iter().enumerate() {
                if e != 0 {
                    t = t.mul(&images[k].powi(e)?);
                }
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// Substitute Laurent polynomials for variables; negative powers need monomial images.
    pub fn subst_poly(&self, map: &HashMap<String, LaurentPoly>) -> Result<LaurentPoly> {
        let images: Vec<LaurentPoly> =
            self.vars.iter().map(|v| map.get(v).cloned().unwrap_or_else(|| LaurentPoly::var(v))).collect();
        let mut acc = LaurentPoly::zero();
        for (m, c) in &self.terms {
            let mut t = LaurentPoly::constant(c.clone());
            for (k, &e) in m.0.iter().enumerate() {
                if e != 0 {
                    t = &t * &images[k].powi(e)?;
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Drop variables that do not occur.
    pub fn compact(&self) -> LaurentPoly {
        let n = self.vars.len();
        let used: Vec<usize> = (0..n).filter(|&k| self.terms.keys().any(|m| m.0[k] != 0)).collect();
        if used.len() == n {
            return self.clone();
        }
        let vars: Vec<String> = used.iter().map(|&k| self.vars[k].clone()).collect();
        let terms = self.terms.iter().map(|(m, c)| (Mono(used.iter().map(|&k| m.0[k]).collect()), c.clone())).collect();
        LaurentPoly { vars: Arc::new(vars), terms }
    }

    /// Names of variables that occur with a nonzero exponent.
    pub fn used_vars(&self) -> Vec<String> {
        self.compact().vars.as_ref().clone()
    }

    pub fn parse(s: &str) -> Result<LaurentPoly> {
        parse_poly(s)
    }
}

impl LaurentPoly {
    /// Exponent vectors and coefficients over the given variable order.
    pub fn exponents_over(&self, vars: &[String]) -> Result<Vec<(Vec<i64>, BigInt)>> {
        let idx: Vec<Option<usize>> = self.vars.iter().map(|v| vars.iter().position(|w| w == v)).collect();
        let mut out = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut e = vec![0i64; vars.len()];
            for (k, &x) in m.0.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                match idx[k] {
                    Some(j) => e[j] = x as i64,
                    None => return Err(Error::Validation(format!("variable {} not in target list", self.vars[k]))),
                }
            }
            out.push((e, c.clone()));
        }
        Ok(out)
    }

    /// JSON term list `[{"exp": [...], "coef": "..."}]` over the given variable order.
    pub fn to_json_terms(&self, vars: &[String]) -> Result<serde_json::Value> {
        let terms = self
            .exponents_over(vars)?
            .into_iter()
            .map(|(e, c)| serde_json::json!({"exp": e, "coef": c.to_string()}))
            .collect();
        Ok(serde_json::Value::Array(terms))
    }

    pub fn tropicalize(&self) -> Result<TropicalForm> {
        RationalFn::from_poly(self.clone()).tropicalize()
    }
}

fn max_norm(p: &LaurentPoly) -> BigInt {
    p.terms.values().map(|c| c.abs()).max().unwrap_or_else(BigInt::zero)
}

/// Replace variable `k` by the integer `x`; negative exponents are not expected.
fn eval_var(p: &LaurentPoly, k: usize, x: &BigInt) -> LaurentPoly {
    let mut terms: BTreeMap<Mono, BigInt> = BTreeMap::new();
    for (m, c) in &p.terms {
        let e = m.0[k];
        let mut m2 = m.0.clone();
        m2[k] = 0;
        let v = c * num_traits::pow(x.clone(), e.max(0) as usize);
        LaurentPoly::insert_term(&mut terms, Mono(m2), v);
    }
    LaurentPoly { vars: p.vars.clone(), terms }
}

fn mod_sym(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

/// Rebuild a polynomial in variable `k` from its value at `x_k = xi` by xi-adic expansion.
fn xi_adic(gamma: &LaurentPoly, k: usize, xi: &BigInt) -> LaurentPoly {
    let mut e = gamma.clone();
    let mut out: BTreeMap<Mono, BigInt> = BTreeMap::new();
    let mut i = 0i32;
    while !e.is_zero() {
        let g: BTreeMap<Mono, BigInt> =
            e.terms.iter().map(|(m, c)| (m.clone(), mod_sym(c, xi))).filter(|(_, c)| !c.is_zero()).collect();
        for (m, c) in &g {
            let mut m2 = m.0.clone();
            m2[k] = i;
            LaurentPoly::insert_term(&mut out, Mono(m2), c.clone());
        }
        let mut next = BTreeMap::new();
        for (m, c) in &e.terms {
            let gc = g.get(m).cloned().unwrap_or_else(BigInt::zero);
            LaurentPoly::insert_term(&mut next, m.clone(), (c - gc) / xi);
        }
        e = LaurentPoly { vars: e.vars.clone(), terms: next };
        i += 1;
    }
    LaurentPoly { vars: gamma.vars.clone(), terms: out }
}

fn primitive(p: &LaurentPoly) -> LaurentPoly {
    let c = p.integer_content();
    let mut q = if c.is_zero() || c.is_one() {
        p.clone()
    } else {
        LaurentPoly { vars: p.vars.clone(), terms: p.terms.iter().map(|(m, x)| (m.clone(), x / &c)).collect() }
    };
    if q.leading().is_some_and(|(_, c)| c.is_negative()) {
        q = -&q;
    }
    q
}

/// Heuristic gcd of two polynomials (no negative exponents) over the variables in `left`.
fn gcd_heu(a: &LaurentPoly, b: &LaurentPoly, left: &[usize]) -> Option<LaurentPoly> {
    if a.is_zero() {
        return Some(primitive(b));
    }
    if b.is_zero() {
        return Some(primitive(a));
    }
    let k = left.iter().rev().copied().find(|&k| a.terms.keys().chain(b.terms.keys()).any(|m| m.0[k] != 0));
    let content = a.integer_content().gcd(&b.integer_content());
    let Some(k) = k else {
        return Some(LaurentPoly::constant_in(a.vars.clone(), content));
    };
    let rest: Vec<usize> = left.iter().copied().filter(|&j| j != k).collect();
    let (pa, pb) = (primitive(a), primitive(b));
    let mut xi: BigInt = max_norm(&pa).min(max_norm(&pb)) * 2 + 29;
    for _ in 0..6 {
        let ga = eval_var(&pa, k, &xi);
        let gb = eval_var(&pb, k, &xi);
        if let Some(gamma) = gcd_heu(&ga, &gb, &rest) {
            let g = primitive(&xi_adic(&gamma, k, &xi));
            if !g.is_zero() && pa.exact_div(&g).is_ok() && pb.exact_div(&g).is_ok() {
                return Some(g.scale(&content));
            }
        }
        xi = xi * 73794 / 27011;
    }
    None
}

impl LaurentPoly {
    /// A greatest common divisor up to monomial units. Falls back to 1 when the heuristic
    /// cannot certify a divisor, so the result always divides both inputs.
    pub fn gcd(&self, o: &LaurentPoly) -> LaurentPoly {
        let (a, b) = self.aligned(o);
        let strip = |p: &LaurentPoly| {
            let m = p.monomial_content();
            p.shift(&Mono(m.0.iter().map(|e| -e).collect()))
        };
        let (a, b) = (strip(&a), strip(&b));
        let left: Vec<usize> = (0..a.vars.len()).collect();
        gcd_heu(&a, &b, &left).unwrap_or_else(|| LaurentPoly::constant_in(a.vars.clone(), 1))
    }
}

/// Min-plus shadow of a subtraction-free fraction: `min num_forms - min den_forms`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TropicalForm {
    pub vars: Vec<String>,
    pub num_forms: Vec<Vec<i64>>,
    pub den_forms: Vec<Vec<i64>>,
}

fn min_form(forms: &[Vec<i64>], x: &[i64]) -> i64 {
    forms.iter().map(|f| f.iter().zip(x).map(|(a, b)| a * b).sum::<i64>()).min().expect("nonempty forms")
}

impl TropicalForm {
    pub fn eval(&self, x: &[i64]) -> Result<i64> {
        if x.len() != self.vars.len() {
            return Err(Error::SizeMismatch(format!("expected {} coordinates, got {}", self.vars.len(), x.len())));
        }
        Ok(min_form(&self.num_forms, x) - min_form(&self.den_forms, x))
    }

    /// The same form over another variable order; variables not present get coefficient 0.
    pub fn over(&self, vars: &[String]) -> Result<TropicalForm> {
        let map = |f: &Vec<i64>| -> Result<Vec<i64>> {
            let mut e = vec![0; vars.len()];
            for (v, &c) in self.vars.iter().zip(f) {
                if c == 0 {
                    continue;
                }
                let j = vars
                    .iter()
                    .position(|w| w == v)
                    .ok_or_else(|| Error::Validation(format!("variable {v} not in target list")))?;
                e[j] = c;
            }
            Ok(e)
        };
        Ok(TropicalForm {
            vars: vars.to_vec(),
            num_forms: self.num_forms.iter().map(map).collect::<Result<_>>()?,
            den_forms: self.den_forms.iter().map(map).collect::<Result<_>>()?,
        })
    }

    /// True when the denominator is a single monomial, so the form is a min of affine forms.
    pub fn is_concave_min(&self) -> bool {
        self.den_forms.len() == 1
    }

    /// Linear forms `num_k - den` when the denominator is one monomial.
    pub fn min_forms(&self) -> Result<Vec<Vec<i64>>> {
        if !self.is_concave_min() {
            return Err(Error::NotMonomial(format!("denominator with {} terms", self.den_forms.len())));
        }
        let d = &self.den_forms[0];
        Ok(self.num_forms.iter().map(|f| f.iter().zip(d).map(|(a, b)| a - b).collect()).collect())
    }
}

/// `f^t(ξ)` for a tropical form.
pub fn tropical_eval(t: &TropicalForm, x: &[i64]) -> Result<i64> {
    t.eval(x)
}

impl PartialEq for LaurentPoly {
    fn eq(&self, other: &Self) -> bool {
        (self - other).is_zero()
    }
}
impl Eq for LaurentPoly {}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let (mut a, b) = self.aligned(rhs);
        for (m, c) in b.terms {
            LaurentPoly::insert_term(&mut a.terms, m, c);
        }
        a
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let (mut a, b) = self.aligned(rhs);
        for (m, c) in b.terms {
            LaurentPoly::insert_term(&mut a.terms, m, -c);
        }
        a
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let (a, b) = self.aligned(rhs);
        let mut terms = BTreeMap::new();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                LaurentPoly::insert_term(&mut terms, ma.add(mb), ca * cb);
            }
        }
        LaurentPoly { vars: a.vars, terms }
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(&BigInt::from(-1))
    }
}

macro_rules! owned_ops {
    ($t:ty, $($tr:ident $f:ident),*) => {$(
        impl $tr<$t> for $t {
            type Output = $t;
            fn $f(self, rhs: $t) -> $t { (&self).$f(&rhs) }
        }
    )*};
}
owned_ops!(LaurentPoly, Add add, Sub sub, Mul mul);

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let factors: Vec<String> = self
                .vars
                .iter()
                .zip(&m.0)
                .filter(|(_, &e)| e != 0)
                .map(|(v, &e)| if e == 1 { v.clone() } else { format!("{v}^{e}") })
                .collect();
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            if factors.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{a}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

fn parse_poly(s: &str) -> Result<LaurentPoly> {
    let bad = |msg: &str| Error::Validation(format!("cannot parse polynomial {s:?}: {msg}"));
    let src: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if src.is_empty() {
        return Err(bad("empty"));
    }
    // Split into signed terms at top-level + and - that do not follow '^'.
    let chars: Vec<char> = src.chars().collect();
    let mut pieces: Vec<(bool, String)> = vec![];
    let mut cur = String::new();
    let mut neg = false;
    for (i, &ch) in chars.iter().enumerate() {
        if (ch == '+' || ch == '-') && i > 0 && chars[i - 1] != '^' {
            pieces.push((neg, std::mem::take(&mut cur)));
            neg = ch == '-';
        } else if (ch == '+' || ch == '-') && i == 0 {
            neg = ch == '-';
        } else {
            cur.push(ch);
        }
    }
    pieces.push((neg, cur));
    let mut acc = LaurentPoly::zero();
    for (neg, body) in pieces {
        if body.is_empty() {
            return Err(bad("empty term"));
        }
        let mut coeff = BigInt::one();
        let mut factors: Vec<(String, i32)> = vec![];
        for f in body.split('*') {
            if f.is_empty() {
                return Err(bad("empty factor"));
            }
            if f.chars().all(|c| c.is_ascii_digit()) {
                coeff *= f.parse::<BigInt>().map_err(|_| bad("bad integer"))?;
                continue;
            }
            let (name, exp) = match f.split_once('^') {
                Some((n, e)) => (n, e.parse::<i32>().map_err(|_| bad("bad exponent"))?),
                None => (f, 1),
            };
            let valid = name.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
                && name.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'');
            if !valid {
                return Err(bad(&format!("bad variable {name:?}")));
            }
            factors.push((name.to_string(), exp));
        }
        if neg {
            coeff = -coeff;
        }
        let refs: Vec<(&str, i32)> = factors.iter().map(|(n, e)| (n.as_str(), *e)).collect();
        acc = &acc + &LaurentPoly::monomial(&refs, coeff);
    }
    Ok(acc)
}

impl Serialize for LaurentPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_poly(&s).map_err(serde::de::Error::custom)
    }
}

/// A fraction of Laurent polynomials, kept in a light normal form.
#[derive(Debug, Clone)]
pub struct RationalFn {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RationalFn {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        let vars = p.vars.clone();
        RationalFn { num: p, den: LaurentPoly::constant_in(vars, 1) }
    }

    pub fn zero() -> Self {
        Self::from_poly(LaurentPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(LaurentPoly::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::from_poly(LaurentPoly::constant(c))
    }

    pub fn var(name: &str) -> Self {
        Self::from_poly(LaurentPoly::var(name))
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    fn normalized(num: LaurentPoly, den: LaurentPoly) -> Self {
        let (mut num, mut den) = num.aligned(&den);
        if num.is_zero() {
            let v = num.vars.clone();
            return RationalFn { num, den: LaurentPoly::constant_in(v, 1) };
        }
        if den.is_monomial() {
            let (m, c) = den.leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
            let inv = Mono(m.0.iter().map(|e| -e).collect());
            num = num.shift(&inv);
            den = LaurentPoly::constant_in(num.vars.clone(), c);
        } else if let Ok(q) = num.exact_div(&den) {
            // Keep subtraction-free fractions subtraction-free.
            if q.is_positive() || !num.is_positive() || !den.is_positive() {
                let v = q.vars.clone();
                return RationalFn { num: q, den: LaurentPoly::constant_in(v, 1) };
            }
        }
        let mn = num.monomial_content();
        let md = den.monomial_content();
        num = num.shift(&Mono(mn.0.iter().map(|e| -e).collect()));
        den = den.shift(&Mono(md.0.iter().map(|e| -e).collect()));
        let shift = mn.sub(&md);
        num = num.shift(&shift);
        let g = num.integer_content().gcd(&den.integer_content());
        if !g.is_one() && !g.is_zero() {
            num = LaurentPoly { vars: num.vars.clone(), terms: num.terms.into_iter().map(|(m, c)| (m, c / &g)).collect() };
            den = LaurentPoly { vars: den.vars.clone(), terms: den.terms.into_iter().map(|(m, c)| (m, c / &g)).collect() };
        }
        if den.leading().unwrap().1.is_negative() {
            num = -&num;
            den = -&den;
        }
        RationalFn { num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_laurent(&self) -> bool {
        self.den.is_constant() && self.den.constant_value().map(|c| c.abs().is_one()).unwrap_or(false)
    }

    /// The Laurent polynomial equal to this fraction, if there is one.
    pub fn as_laurent(&self) -> Option<LaurentPoly> {
        if self.is_laurent() {
            return Some(self.num.scale(&self.den.constant_value().unwrap()));
        }
        self.num.exact_div(&self.den).ok()
    }

    pub fn add(&self, o: &RationalFn) -> RationalFn {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return Self::normalized(&self.num + &o.num, self.den.clone());
        }
        Self::normalized(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }

    pub fn sub(&self, o: &RationalFn) -> RationalFn {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> RationalFn {
        RationalFn { num: -&self.num, den: self.den.clone() }
    }

    pub fn mul(&self, o: &RationalFn) -> RationalFn {
        if self.is_zero() || o.is_zero() {
            return RationalFn::zero();
        }
        Self::normalized(&self.num * &o.num, &self.den * &o.den)
    }

    pub fn inv(&self) -> Result<RationalFn> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, o: &RationalFn) -> Result<RationalFn> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn powi(&self, n: i32) -> Result<RationalFn> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let mut acc = RationalFn::one();
        for _ in 0..n.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    pub fn eval(&self, point: &HashMap<String, BigRational>) -> Result<BigRational> {
        let d = self.den.eval(point)?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.num.eval(point)? / d)
    }

    pub fn subst(&self, map: &HashMap<String, RationalFn>) -> Result<RationalFn> {
        self.num.subst(map)?.div(&self.den.subst(map)?)
    }

    /// Subtraction-free: both numerator and denominator have positive coefficients.
    pub fn is_positive(&self) -> bool {
        self.num.is_positive() && self.den.is_positive()
    }

    /// Cancel the polynomial gcd of numerator and denominator. A cancellation that would
    /// turn a subtraction-free fraction into one with signs is skipped.
    pub fn reduced(&self) -> RationalFn {
        if self.num.is_zero() || self.den.is_monomial() {
            return self.clone();
        }
        let g = self.num.gcd(&self.den);
        if g.is_constant() {
            return self.clone();
        }
        let (Ok(n), Ok(d)) = (self.num.exact_div(&g), self.den.exact_div(&g)) else {
            return self.clone();
        };
        let r = Self::normalized(n, d);
        if self.is_positive() && !r.is_positive() {
            return self.clone();
        }
        r
    }

    /// Tropicalization of a subtraction-free fraction over its own variables.
    pub fn tropicalize(&self) -> Result<TropicalForm> {
        if self.num.is_zero() || !self.is_positive() {
            return Err(Error::NotPositive(self.to_string()));
        }
        let vars: Vec<String> = self.num.vars.as_ref().clone();
        let forms = |p: &LaurentPoly| -> Vec<Vec<i64>> {
            let p = p.embed(&self.num.vars);
            p.terms.keys().map(|m| m.0.iter().map(|&e| e as i64).collect()).collect()
        };
        Ok(TropicalForm { num_forms: forms(&self.num), den_forms: forms(&self.den), vars })
    }

    /// Parse a rational expression built from integers, variables, `+ - * /`, `^` with an
    /// integer exponent, and parentheses.
    pub fn parse(s: &str) -> Result<RationalFn> {
        let toks: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut p = ExprParser { toks: &toks, pos: 0, src: s };
        let v = p.expr()?;
        if p.pos != toks.len() {
            return Err(p.bad("trailing input"));
        }
        Ok(v)
    }
}

struct ExprParser<'a> {
    toks: &'a [char],
    pos: usize,
    src: &'a str,
}

impl ExprParser<'_> {
    fn bad(&self, msg: &str) -> Error {
        Error::Validation(format!("cannot parse expression {:?}: {msg} at {}", self.src, self.pos))
    }

    fn peek(&self) -> Option<char> {
        self.toks.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<RationalFn> {
        let mut acc = match self.peek() {
            Some('-') => {
                self.pos += 1;
                self.term()?.neg()
            }
            Some('+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        while let Some(c @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == '+' { acc.add(&t) } else { acc.sub(&t) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RationalFn> {
        let mut acc = self.power()?;
        while let Some(c @ ('*' | '/')) = self.peek() {
            self.pos += 1;
            let f = self.power()?;
            acc = if c == '*' { acc.mul(&f) } else { acc.div(&f)? };
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<RationalFn> {
        let base = self.atom()?;
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        let start = self.pos;
        if matches!(self.peek(), Some('-' | '+')) {
            self.pos += 1;
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let e: String = self.toks[start..self.pos].iter().collect();
        let e = e.parse::<i32>().map_err(|_| self.bad("bad exponent"))?;
        base.powi(e)
    }

    fn atom(&mut self) -> Result<RationalFn> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.bad("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let n: String = self.toks[start..self.pos].iter().collect();
                Ok(RationalFn::constant(n.parse::<BigInt>().map_err(|_| self.bad("bad integer"))?))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_alphanumeric() || c == '_' || c == '\'') {
                    self.pos += 1;
                }
                let n: String = self.toks[start..self.pos].iter().collect();
                Ok(RationalFn::var(&n))
            }
            _ => Err(self.bad("unexpected token")),
        }
    }
}

impl PartialEq for RationalFn {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}
impl Eq for RationalFn {}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_laurent() {
            return write!(f, "{}", self.num.scale(&self.den.constant_value().unwrap()));
        }
        write!(f, "({})/({})", self.num, self.den)
    }
}

impl Serialize for RationalFn {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RationalFn {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        RationalFn::parse(&s).map_err(serde::de::Error::custom)
    }
}

impl From<LaurentPoly> for RationalFn {
    fn from(p: LaurentPoly) -> Self {
        RationalFn::from_poly(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> LaurentPoly {
        LaurentPoly::parse(s).unwrap()
    }

    #[test]
    fn parse_display_roundtrip() {
        let f = p("t1^2*t2^-1 + 3*e1 - 2");
        assert_eq!(p(&f.to_string()), f);
        assert_eq!(p("x - x"), LaurentPoly::zero());
        assert!(LaurentPoly::parse("x + ").is_err());
        assert!(LaurentPoly::parse("2x").is_err());
    }

    #[test]
    fn contexts_merge() {
        let f = &p("x + y") * &p("z - x");
        assert_eq!(f, p("x*z + y*z - x^2 - x*y"));
    }

    #[test]
    fn exact_division() {
        let f = &p("x^-1 + y") * &p("x*y - 2*z^3");
        assert_eq!(f.exact_div(&p("x*y - 2*z^3")).unwrap(), p("x^-1 + y"));
        assert_eq!(f.exact_div(&p("x^-1 + y")).unwrap(), p("x*y - 2*z^3"));
        assert!(p("x + 1").exact_div(&p("x + 2")).is_err());
        assert!(p("x + 1").exact_div(&p("2")).is_err());
        assert_eq!(p("2*x + 2").exact_div(&p("2")).unwrap(), p("x + 1"));
    }

    #[test]
    fn fractions() {
        let a = RationalFn::parse("(x + y)/(x*y)").unwrap();
        assert!(a.is_laurent());
        assert_eq!(a, RationalFn::parse("y^-1 + x^-1").unwrap());
        let b = RationalFn::parse("1/(x + 1)").unwrap();
        let c = a.add(&b);
        assert_eq!(c.sub(&b), a);
        let half = RationalFn::parse("(x^3 + 1)/(x + 1)").unwrap();
        // Not collapsed to x^2 - x + 1, which is not subtraction-free.
        assert!(half.is_positive());
        assert_eq!(half, RationalFn::parse("x^2 - x + 1").unwrap());
        let pt: HashMap<String, BigRational> =
            [("x".to_string(), BigRational::from_integer(2.into())), ("y".to_string(), BigRational::new(1.into(), 3.into()))]
                .into_iter()
                .collect();
        assert_eq!(a.eval(&pt).unwrap(), BigRational::new(7.into(), 2.into()));
    }

    #[test]
    fn substitution() {
        let f = p("x^2*y^-1 + 1");
        let map: HashMap<String, RationalFn> =
            [("x".to_string(), RationalFn::parse("a + b").unwrap()), ("y".to_string(), RationalFn::parse("a").unwrap())]
                .into_iter()
                .collect();
        let g = f.subst(&map).unwrap();
        assert_eq!(g, RationalFn::parse("(a^2 + 2*a*b + b^2 + a)/(a)").unwrap());
    }

    #[test]
    fn gcd_and_reduce() {
        let a = p("x + y");
        let b = p("x^2 + 3*y*z");
        let c = p("2*x - z");
        let g = (&a * &b).gcd(&(&a * &c));
        assert_eq!(primitive(&g), a);
        let r = RationalFn::new(&(&a * &b) - &(&a * &c), &a * &p("x*y + 1")).unwrap().reduced();
        assert_eq!(r.den(), &p("x*y + 1"));
        let f = RationalFn::parse("(u^2*e + u^3*f)/(e*u + u^2*f + e + u*f)").unwrap().reduced();
        assert_eq!(f, RationalFn::parse("u^2/(u + 1)").unwrap());
        assert!(f.is_positive());
    }

    #[test]
    fn tropical_forms() {
        let t = RationalFn::parse("(u^2 + e)/(u)").unwrap().tropicalize().unwrap();
        let t = t.over(&["u".to_string(), "e".to_string()]).unwrap();
        assert_eq!(tropical_eval(&t, &[3, 4]).unwrap(), 1);
        assert_eq!(p("2").tropicalize().unwrap().eval(&[]).unwrap(), 0);
        assert!(p("x - y").tropicalize().is_err());
        let m = p("t1^3*t2^-1").tropicalize().unwrap();
        assert_eq!(m.min_forms().unwrap(), vec![vec![3, -1]]);
    }

    #[test]
    fn json() {
        let f = p("3*x^-2*y + 1");
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(serde_json::from_str::<LaurentPoly>(&s).unwrap(), f);
    }
}
