//! Tropical fibers as integer linear systems, lattice-point enumeration, and multiplicities.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::cartan::{RootDatum, Weight, WeylElt};
use crate::error::{Error, Result};
use crate::groupsym::{elementary, generalized_minor, SymMatrix};
use crate::laurent::{LaurentPoly, RationalFn, TropicalForm};
use crate::potential::{
    self, alpha_characters, explicit_terms, geometric_multiplicity, torus_var, CentralCharge, GeomMult,
};
use crate::words::{r_factors, DecoratedWord};

pub const DEFAULT_CAP: usize = 1_000_000;

/// Enumeration cap, overridden by the `MULT_CAP` environment variable.
pub fn cap_from_env() -> usize {
    std::env::var("MULT_CAP").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_CAP)
}

/// `<a, t> + c >= 0` for inequalities and `= 0` for equalities.
pub type Constraint = (Vec<i64>, i64);

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolytopeSpec {
    pub dim: usize,
    pub inequalities: Vec<Constraint>,
    pub equalities: Vec<Constraint>,
}

impl PolytopeSpec {
    pub fn new(dim: usize) -> Self {
        PolytopeSpec { dim, inequalities: vec![], equalities: vec![] }
    }

    /// A system with no solutions.
    pub fn empty(dim: usize) -> Self {
        PolytopeSpec { dim, inequalities: vec![(vec![0; dim], -1)], equalities: vec![] }
    }

    pub fn validate(&self) -> Result<()> {
        for (a, _) in self.inequalities.iter().chain(&self.equalities) {
            if a.len() != self.dim {
                return Err(Error::SizeMismatch(format!("constraint of length {} in dimension {}", a.len(), self.dim)));
            }
        }
        Ok(())
    }

    pub fn contains(&self, t: &[i64]) -> bool {
        let val = |(a, c): &Constraint| a.iter().zip(t).map(|(x, y)| (*x as i128) * (*y as i128)).sum::<i128>() + *c as i128;
        self.inequalities.iter().all(|k| val(k) >= 0) && self.equalities.iter().all(|k| val(k) == 0)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct MultiplicityResult {
    pub count: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<Vec<i64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_poly: Option<BTreeMap<i64, u64>>,
}

type Q = Ratio<i128>;

/// Integer constraint `<a, f> + c >= 0` over the free coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Row {
    a: Vec<i128>,
    c: i128,
}

impl Row {
    fn from_rational(a: &[Q], c: &Q) -> Row {
        let l = a.iter().chain(std::iter::once(c)).fold(1i128, |l, x| l.lcm(x.denom()));
        let a: Vec<i128> = a.iter().map(|x| x.numer() * (l / x.denom())).collect();
        let c = c.numer() * (l / c.denom());
        Row { a, c }.normalized()
    }

    fn normalized(mut self) -> Row {
        let g = self.a.iter().fold(0i128, |g, x| g.gcd(x));
        if g > 1 {
            for x in &mut self.a {
                *x /= g;
            }
            // Integer points satisfy <a, f> >= -c iff <a/g, f> >= ceil(-c/g).
            self.c = -Integer::div_ceil(&-self.c, &g);
        }
        self
    }
}

/// Equalities solved for pivot coordinates: `t_p = c + <r, f>` over the free coordinates.
struct Solved {
    pivots: Vec<(usize, Vec<Q>, Q)>,
    free: Vec<usize>,
}

fn solve_equalities(dim: usize, eqs: &[Constraint]) -> Option<Solved> {
    let mut m: Vec<Vec<Q>> = eqs
        .iter()
        .map(|(a, c)| a.iter().map(|&x| Q::from(x as i128)).chain(std::iter::once(Q::from(*c as i128))).collect())
        .collect();
    let mut pivot_cols = vec![];
    let mut row = 0;
    for col in 0..dim {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in &mut m[row] {
            *x *= inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col];
                for k in 0..=dim {
                    let v = m[row][k] * f;
                    m[r][k] -= v;
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
    }
    if m[row..].iter().any(|r| !r[dim].is_zero()) {
        return None;
    }
    let free: Vec<usize> = (0..dim).filter(|c| !pivot_cols.contains(c)).collect();
    let pivots = pivot_cols
        .iter()
        .enumerate()
        .map(|(r, &p)| (p, free.iter().map(|&f| -m[r][f]).collect(), -m[r][dim]))
        .collect();
    Some(Solved { pivots, free })
}

/// Fourier-Motzkin levels: `levels[j]` bounds free coordinate `j` given coordinates `< j`.
fn fm_levels(k: usize, rows: Vec<Row>) -> Option<Vec<Vec<Row>>> {
    let mut levels = vec![vec![]; k];
    let mut cur: HashSet<Row> = rows.into_iter().collect();
    for j in (0..k).rev() {
        let (with, without): (Vec<Row>, Vec<Row>) = cur.into_iter().partition(|r| r.a[j] != 0);
        let (pos, neg): (Vec<&Row>, Vec<&Row>) = with.iter().partition(|r| r.a[j] > 0);
        let mut next: HashSet<Row> = without.into_iter().collect();
        for p in &pos {
            for n in &neg {
                let (u, v) = (-n.a[j], p.a[j]);
                let a: Vec<i128> = p.a.iter().zip(&n.a).map(|(x, y)| u * x + v * y).collect();
                let r = Row { a, c: u * p.c + v * n.c }.normalized();
                if r.a.iter().all(|x| *x == 0) {
                    if r.c < 0 {
                        return None;
                    }
                } else {
                    next.insert(r);
                }
            }
        }
        let mut w = with;
        w.sort_by(|x, y| (&x.a, x.c).cmp(&(&y.a, y.c)));
        levels[j] = w;
        cur = next;
    }
    if cur.iter().any(|r| r.c < 0) {
        return None;
    }
    Some(levels)
}

struct Enumerator<'a> {
    p: &'a PolytopeSpec,
    solved: Solved,
    levels: Vec<Vec<Row>>,
    budget: u64,
    nodes: u64,
}

impl Enumerator<'_> {
    fn dfs(&mut self, f: &mut Vec<i64>, visit: &mut dyn FnMut(&[i64])) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::CapExceeded(self.budget as usize));
        }
        let j = f.len();
        if j == self.solved.free.len() {
            if let Some(t) = self.leaf(f) {
                visit(&t);
            }
            return Ok(());
        }
        let (mut lo, mut hi): (Option<i128>, Option<i128>) = (None, None);
        for r in &self.levels[j] {
            let rest: i128 = r.c + r.a[..j].iter().zip(f.iter()).map(|(a, x)| a * (*x as i128)).sum::<i128>();
            let a = r.a[j];
            if a > 0 {
                let b = Integer::div_ceil(&-rest, &a);
                lo = Some(lo.map_or(b, |l| l.max(b)));
            } else {
                let b = Integer::div_floor(&rest, &-a);
                hi = Some(hi.map_or(b, |h| h.min(b)));
            }
        }
        let (Some(lo), Some(hi)) = (lo, hi) else {
            return Err(Error::Unbounded(self.solved.free[j]));
        };
        for x in lo..=hi {
            f.push(x as i64);
            self.dfs(f, visit)?;
            f.pop();
        }
        Ok(())
    }

    fn leaf(&self, f: &[i64]) -> Option<Vec<i64>> {
        let mut t = vec![0i64; self.p.dim];
        for (&c, &x) in self.solved.free.iter().zip(f) {
            t[c] = x;
        }
        for (p, r, c) in &self.solved.pivots {
            let v = r.iter().zip(f).fold(*c, |acc, (a, x)| acc + a * Q::from(*x as i128));
            if !v.is_integer() {
                return None;
            }
            t[*p] = v.to_integer().to_i64()?;
        }
        self.p.contains(&t).then_some(t)
    }
}

/// Visit every integer point of `P` in lexicographic order of its free coordinates.
/// `budget` bounds the number of search nodes.
pub fn for_each_lattice_point(p: &PolytopeSpec, budget: u64, mut visit: impl FnMut(&[i64])) -> Result<()> {
    p.validate()?;
    let Some(solved) = solve_equalities(p.dim, &p.equalities) else { return Ok(()) };
    let rows: Vec<Row> = p
        .inequalities
        .iter()
        .map(|(a, c)| {
            let mut coef = vec![Q::zero(); solved.free.len()];
            let mut cst = Q::from(*c as i128);
            for (k, &fc) in solved.free.iter().enumerate() {
                coef[k] += Q::from(a[fc] as i128);
            }
            for (pc, r, pcst) in &solved.pivots {
                let ap = Q::from(a[*pc] as i128);
                for k in 0..coef.len() {
                    coef[k] += ap * r[k];
                }
                cst += ap * pcst;
            }
            Row::from_rational(&coef, &cst)
        })
        .collect();
    let mut trivially_false = false;
    let rows: Vec<Row> = rows
        .into_iter()
        .filter(|r| {
            if r.a.iter().all(|x| *x == 0) {
                trivially_false |= r.c < 0;
                false
            } else {
                true
            }
        })
        .collect();
    if trivially_false {
        return Ok(());
    }
    let k = solved.free.len();
    let Some(levels) = fm_levels(k, rows) else { return Ok(()) };
    let mut e = Enumerator { p, solved, levels, budget, nodes: 0 };
    e.dfs(&mut Vec::with_capacity(k), &mut visit)
}

/// Count the integer points of `P`. At most `cap` points are kept when `emit_points` is set;
/// past that the list is dropped and only the count is reported. The search itself is
/// limited to `1000 * cap` nodes, past which `CapExceeded` is returned.
pub fn enumerate_lattice_points(p: &PolytopeSpec, cap: usize, emit_points: bool) -> Result<MultiplicityResult> {
    let mut count = 0u64;
    let mut points = vec![];
    for_each_lattice_point(p, search_budget(cap), |t| {
        count += 1;
        if emit_points && points.len() <= cap {
            points.push(t.to_vec());
        }
    })?;
    let points = (emit_points && points.len() <= cap).then(|| {
        points.sort();
        points
    });
    Ok(MultiplicityResult { count, points, q_poly: None })
}

fn search_budget(cap: usize) -> u64 {
    (cap as u64).saturating_mul(1000).max(1000)
}

/// Exponent vectors of the monomials of `f` over `vars`; none when `f = 0`.
pub fn trail_vectors(f: &RationalFn, vars: &[String]) -> Result<Vec<Vec<i64>>> {
    let p = f.as_laurent().ok_or_else(|| Error::NotDivisible(f.to_string()))?;
    if !p.is_zero() && !p.is_positive() {
        return Err(Error::NotPositive(p.to_string()));
    }
    Ok(p.exponents_over(vars)?.into_iter().map(|(e, _)| e).collect())
}

fn check_dominant(datum: &RootDatum, ws: &[&Weight]) -> Result<()> {
    for w in ws {
        if w.coords.len() != datum.rank() {
            return Err(Error::SizeMismatch(format!("weight {:?} for rank {}", w.coords, datum.rank())));
        }
        if !w.is_dominant() {
            return Err(Error::Validation(format!("{:?} is not dominant", w.coords)));
        }
    }
    Ok(())
}

/// Inequalities `trop(potential) >= 0` and equalities `trop(hw) = mu` with the torus
/// coordinates fixed, over the chart coordinates.
fn fiber_system(geom: &GeomMult, torus: &HashMap<String, i64>, mu: &[i64]) -> Result<PolytopeSpec> {
    let pot = &geom.potential;
    let vars = pot.vars();
    let m = pot.chart_vars.len();
    let split = |e: &[i64]| -> (Vec<i64>, i64) {
        let c = pot.torus_vars.iter().zip(&e[m..]).map(|(v, x)| x * torus.get(v).copied().unwrap_or(0)).sum();
        (e[..m].to_vec(), c)
    };
    let mut p = PolytopeSpec::new(m);
    for e in pot.exponent_matrix()? {
        p.inequalities.push(split(&e));
    }
    for (row, &muj) in geom.hw.linear_forms(&vars)?.iter().zip(mu) {
        let (a, c) = split(row);
        p.equalities.push((a, c - muj));
    }
    Ok(p)
}

/// The fiber of `(hw_n, pi_n)` over `(mu; lambda_1, .., lambda_n)` for a fixed set of charts.
pub struct TensorSystem {
    pub datum: RootDatum,
    pub geom: GeomMult,
    charges: Option<Vec<CentralCharge>>,
}

impl TensorSystem {
    /// Multiplicities of the dual group's modules are computed on the charts of `datum`'s group;
    /// for type A the two coincide.
    pub fn new(datum: &RootDatum, ds: &[DecoratedWord]) -> Result<Self> {
        if !datum.is_type_a() {
            return Err(Error::Unsupported(format!("symbolic charts for {}", datum.name())));
        }
        Ok(TensorSystem { datum: datum.clone(), geom: geometric_multiplicity(datum, ds)?, charges: None })
    }

    pub fn n(&self) -> usize {
        self.geom.words.len() + 1
    }

    pub fn polytope(&self, lambdas: &[Weight], mu: &Weight) -> Result<PolytopeSpec> {
        if lambdas.len() != self.n() {
            return Err(Error::SizeMismatch(format!("{} weights for a {}-fold product", lambdas.len(), self.n())));
        }
        let mut all: Vec<&Weight> = lambdas.iter().collect();
        all.push(mu);
        check_dominant(&self.datum, &all)?;
        Ok(fiber_system(&self.geom, &self.torus_values(lambdas), &mu.coords)?)
    }

    fn torus_values(&self, lambdas: &[Weight]) -> HashMap<String, i64> {
        let mut torus = HashMap::new();
        for (k, l) in lambdas.iter().enumerate() {
            for (j, &x) in l.coords.iter().enumerate() {
                torus.insert(torus_var(k + 1, j + 1), x);
            }
        }
        torus
    }

    pub fn multiplicity(&self, lambdas: &[Weight], mu: &Weight, cap: usize, emit_points: bool) -> Result<MultiplicityResult> {
        enumerate_lattice_points(&self.polytope(lambdas, mu)?, cap, emit_points)
    }

    pub fn central_charges(&mut self) -> Result<&[CentralCharge]> {
        if self.charges.is_none() {
            self.charges = Some(potential::central_charges(&self.datum, &self.geom.words)?);
        }
        Ok(self.charges.as_deref().unwrap_or_default())
    }

    /// `sum_a q^{c^t(a)}` over the fiber, for the central charge labelled `label`.
    pub fn deformed(&mut self, label: &str, lambdas: &[Weight], mu: &Weight, cap: usize) -> Result<MultiplicityResult> {
        let vars = self.geom.potential.vars();
        let form = {
            let charges = self.central_charges()?;
            let c = charges
                .iter()
                .find(|c| c.label == label)
                .ok_or_else(|| Error::Validation(format!("unknown central charge {label:?}")))?;
            c.tropicalize(&vars)?
        };
        let p = self.polytope(lambdas, mu)?;
        let torus = self.torus_values(lambdas);
        let tail: Vec<i64> = self.geom.potential.torus_vars.iter().map(|v| torus[v]).collect();
        deformed_count(&p, &form, &tail, cap)
    }
}

/// `sum_a q^{form(a, tail)}` over the integer points `a` of `p`.
pub fn deformed_count(p: &PolytopeSpec, form: &TropicalForm, tail: &[i64], cap: usize) -> Result<MultiplicityResult> {
    let mut q: BTreeMap<i64, u64> = BTreeMap::new();
    let mut count = 0;
    let mut err = None;
    for_each_lattice_point(p, search_budget(cap), |t| {
        let x: Vec<i64> = t.iter().chain(tail).copied().collect();
        match form.eval(&x) {
            Ok(e) => *q.entry(e).or_default() += 1,
            Err(e) => err = Some(e),
        }
        count += 1;
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    Ok(MultiplicityResult { count, points: None, q_poly: Some(q) })
}

/// Rank of an integer matrix over the rationals.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<Q>> = rows.iter().map(|r| r.iter().map(|&x| Q::from(x as i128)).collect()).collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, p);
        for r in rank + 1..m.len() {
            let f = m[r][c] / m[rank][c];
            for k in c..cols {
                let v = m[rank][k] * f;
                m[r][k] -= v;
            }
        }
        rank += 1;
    }
    rank
}

/// Dimension of the span of the functions `f_1^t, .., f_k^t` restricted to `points`.
pub fn tropical_rank(forms: &[TropicalForm], points: &[Vec<i64>]) -> Result<usize> {
    let rows = points.iter().map(|x| forms.iter().map(|f| f.eval(x)).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
    Ok(rank(&rows))
}

/// Trivial decoration of the lexicographically minimal reduced word of `w0`.
pub fn default_word(datum: &RootDatum) -> Result<DecoratedWord> {
    Ok(DecoratedWord::trivial(datum.longest_element().word().to_vec()))
}

pub fn tensor_multiplicity(
    datum: &RootDatum,
    d: &DecoratedWord,
    lambda: &Weight,
    nu: &Weight,
    mu: &Weight,
    cap: usize,
) -> Result<MultiplicityResult> {
    TensorSystem::new(datum, std::slice::from_ref(d))?.multiplicity(&[lambda.clone(), nu.clone()], mu, cap, false)
}

pub fn n_fold(datum: &RootDatum, ds: &[DecoratedWord], lambdas: &[Weight], mu: &Weight, cap: usize) -> Result<MultiplicityResult> {
    TensorSystem::new(datum, ds)?.multiplicity(lambdas, mu, cap, false)
}

pub fn deformed_multiplicity(
    datum: &RootDatum,
    ds: &[DecoratedWord],
    label: &str,
    lambdas: &[Weight],
    mu: &Weight,
    cap: usize,
) -> Result<MultiplicityResult> {
    TensorSystem::new(datum, ds)?.deformed(label, lambdas, mu, cap)
}

/// Right-hand sides of the explicit system for the minors attached to `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftIndex {
    /// `<omega_{i*}, lambda + s_{i*} nu - mu>` and `<omega_{i*}, s_{i*} lambda + nu - mu>`,
    /// as produced by the potential.
    Dual,
    /// `<omega_i, lambda + s_i nu - mu>` and `<omega_i, s_i lambda + nu - mu>`.
    Same,
}

/// The explicit system for a tensor multiplicity on one chart: trail inequalities for the
/// three families of minors and `sum_l t_l r_l alpha_{|j_l|} = lambda + nu - mu`.
pub struct ExplicitSystem {
    pub datum: RootDatum,
    pub word: DecoratedWord,
    /// `(i, family, trail vector)`; family 0 has right-hand side 0, family 1 is shifted by
    /// `nu`, family 2 by `lambda`.
    pub trails: Vec<(usize, u8, Vec<i64>)>,
    /// `r_l alpha_{|j_l|}` in simple-root coordinates, one column per chart coordinate.
    pub roots: Vec<Vec<i64>>,
}

impl ExplicitSystem {
    pub fn new(datum: &RootDatum, d: &DecoratedWord) -> Result<Self> {
        if !datum.is_type_a() {
            return Err(Error::Unsupported(format!("symbolic charts for {}", datum.name())));
        }
        let vars: Vec<String> = (1..=d.len()).map(|l| format!("t{l}")).collect();
        let mut trails = vec![];
        for t in explicit_terms(datum, d)? {
            for (fam, f) in [(0u8, &t.first), (1, &t.second), (2, &t.third)] {
                for (e, c) in f.exponents_over(&vars)? {
                    if c <= 0.into() {
                        return Err(Error::NotPositive(f.to_string()));
                    }
                    trails.push((t.i, fam, e));
                }
            }
        }
        let dw = d.double_word();
        let r = r_factors(datum, &dw)?;
        let mut roots = vec![];
        for (&j, rl) in dw.iter().zip(&r) {
            let a = datum.simple_root(j.unsigned_abs() as usize);
            let img = datum.weyl_act(rl, &a)?;
            roots.push(root_coords(datum, &img)?);
        }
        Ok(ExplicitSystem { datum: datum.clone(), word: d.clone(), trails, roots })
    }

    pub fn polytope(&self, lambda: &Weight, nu: &Weight, mu: &Weight, shift: ShiftIndex) -> Result<PolytopeSpec> {
        check_dominant(&self.datum, &[lambda, nu, mu])?;
        let m = self.word.len();
        let diff = lambda.add(nu).sub(mu);
        let Ok(gamma) = root_coords(&self.datum, &diff) else { return Ok(PolytopeSpec::empty(m)) };
        let mut p = PolytopeSpec::new(m);
        for (k, &g) in gamma.iter().enumerate() {
            p.equalities.push((self.roots.iter().map(|r| r[k]).collect(), -g));
        }
        for (i, fam, a) in &self.trails {
            let idx = match shift {
                ShiftIndex::Dual => self.datum.star(*i),
                ShiftIndex::Same => *i,
            };
            // <omega_k, lambda + s_k nu - mu> = gamma_k - nu_k, and likewise for lambda.
            let rhs = match fam {
                0 => 0,
                1 => gamma[idx - 1] - nu.coords[idx - 1],
                _ => gamma[idx - 1] - lambda.coords[idx - 1],
            };
            p.inequalities.push((a.clone(), -rhs));
        }
        Ok(p)
    }
}

/// Simple-root coordinates of a weight in the root lattice.
fn root_coords(datum: &RootDatum, w: &Weight) -> Result<Vec<i64>> {
    datum
        .weight_root_coords(w)
        .into_iter()
        .map(|x| if x.is_integer() { Ok(x.to_integer()) } else { Err(Error::Validation("not in the root lattice".into())) })
        .collect()
}

/// `d_k = <gamma_{k-1}, alpha_{i_k}^vee> - c_k` along the trail with exponents `c`
/// starting at `gamma_0 = top`, where `gamma_k = gamma_{k-1} - c_k alpha_{i_k}`.
fn trail_d(datum: &RootDatum, word: &[usize], top: &Weight, c: &[i64]) -> Vec<i64> {
    let mut g = top.clone();
    let mut d = vec![];
    for (&i, &ck) in word.iter().zip(c) {
        d.push(g.coords[i - 1] - ck);
        g = g.sub(&datum.simple_root(i).scale(ck));
    }
    d
}

fn chart_names(n: usize) -> Vec<String> {
    (1..=n).map(|l| format!("t{l}")).collect()
}

fn product_of(size: usize, letters: impl Iterator<Item = (i64, String)>) -> Result<SymMatrix> {
    let mut x = SymMatrix::identity(size);
    for (j, v) in letters {
        x = x.mul(&elementary(size, j, &RationalFn::var(&v))?);
    }
    Ok(x)
}

/// The reduction potential on the chart `x = x_{-i_1}(t_1) .. x_{-i_n}(t_n)` of the Levi cell,
/// with the torus coordinate `h` (variables `h_j` for `h^{alpha_j}`):
/// `Phi_L = sum_i Delta_{w_P omega_i, s_i omega_i}(x) + sum_i h^{alpha_i} Delta_{s_i omega_i, omega_i}(x) / Delta_{omega_i, omega_i}(x)`.
/// Returns the potential, the characters `([x]_0)^{alpha_j}` and the chart variables.
pub fn reduction_potential(datum: &RootDatum, j: &[usize]) -> Result<(LaurentPoly, Vec<LaurentPoly>, Vec<String>)> {
    let (word, w0j) = reduction_word(datum, j)?;
    let rank = datum.rank();
    let wp = datum.compose(&datum.inverse(&w0j), &datum.longest_element());
    let vars = chart_names(word.len());
    let x = product_of(rank + 1, word.iter().map(|&i| -(i as i64)).zip(vars.iter().cloned()))?;
    let e = datum.identity();
    let mut acc = LaurentPoly::zero();
    for i in 1..=rank {
        let si = datum.simple(i)?;
        let first = generalized_minor(datum, &x, &wp, &si, i)?;
        let second = generalized_minor(datum, &x, &si, &e, i)?.div(&generalized_minor(datum, &x, &e, &e, i)?)?;
        let h = RationalFn::var(&format!("h_{i}"));
        for f in [first, h.mul(&second)] {
            let p = f.as_laurent().ok_or_else(|| Error::NotDivisible(f.to_string()))?;
            acc = &acc + &p;
        }
    }
    if !acc.is_zero() && !acc.is_positive() {
        return Err(Error::NotPositive(acc.to_string()));
    }
    let diag: Vec<LaurentPoly> = (0..=rank)
        .map(|k| x.get(k, k).as_laurent().ok_or_else(|| Error::NotDivisible(x.get(k, k).to_string())))
        .collect::<Result<_>>()?;
    Ok((acc, alpha_characters(&diag)?, vars))
}

/// Validate `J`; returns the reduced word of `w_P = (w0^J)^{-1} w0` used for the chart, and `w0^J`.
fn reduction_word(datum: &RootDatum, j: &[usize]) -> Result<(Vec<usize>, WeylElt)> {
    if !datum.is_type_a() {
        return Err(Error::Unsupported(format!("symbolic charts for {}", datum.name())));
    }
    for &x in j {
        if x == 0 || x > datum.rank() {
            return Err(Error::IndexOutOfRange { index: x as i64, rank: datum.rank() });
        }
    }
    let w0j = datum.longest_of_parabolic(j);
    let wp = datum.compose(&datum.inverse(&w0j), &datum.longest_element());
    Ok((wp.word().to_vec(), w0j))
}

/// The systems for the multiplicity of `V^J_beta` in `V_lambda`, built once per `(datum, J)`.
#[derive(Debug, Clone)]
pub struct ReductionSystem {
    pub datum: RootDatum,
    pub j: Vec<usize>,
    pub word: Vec<usize>,
    /// Trail inequalities `sum_k d_k t_k >= 0` of the explicit system.
    pub trails: Vec<Vec<i64>>,
    /// Exponents of the reduction potential: chart part and `h` part.
    pub terms: Vec<(Vec<i64>, Vec<i64>)>,
    /// Linear forms of `trop([x]_0)^{alpha_j}`.
    pub x0: Vec<Vec<i64>>,
}

impl ReductionSystem {
    pub fn new(datum: &RootDatum, j: &[usize]) -> Result<Self> {
        let (word, w0j) = reduction_word(datum, j)?;
        let n = word.len();
        let vars = chart_names(n);
        let x = product_of(datum.rank() + 1, word.iter().map(|&i| i as i64).zip(vars.iter().cloned()))?;
        let w0 = datum.longest_element();
        let mut trails = vec![];
        for i in 1..=datum.rank() {
            let w0si = datum.compose(&w0, &datum.simple(i)?);
            let top = datum.weyl_act(&w0j, &datum.fundamental_weight(i))?;
            for c in trail_vectors(&generalized_minor(datum, &x, &w0j, &w0si, i)?, &vars)? {
                trails.push(trail_d(datum, &word, &top, &c));
            }
        }
        let (phi, x0, pvars) = reduction_potential(datum, j)?;
        let mut all = pvars.clone();
        all.extend((1..=datum.rank()).map(|i| format!("h_{i}")));
        let terms = phi.exponents_over(&all)?.into_iter().map(|(e, _)| (e[..n].to_vec(), e[n..].to_vec())).collect();
        let x0 = x0.iter().map(|m| Ok(m.exponents_over(&pvars)?.remove(0).0)).collect::<Result<_>>()?;
        Ok(ReductionSystem { datum: datum.clone(), j: j.to_vec(), word, trails, terms, x0 })
    }

    fn check(&self, lambda: &Weight, beta: &Weight) -> Result<()> {
        check_dominant(&self.datum, &[lambda])?;
        if beta.coords.len() != self.datum.rank() {
            return Err(Error::SizeMismatch("beta has the wrong rank".into()));
        }
        for &x in &self.j {
            if beta.coords[x - 1] < 0 {
                return Err(Error::Validation(format!("beta is not dominant for J at {x}")));
            }
        }
        Ok(())
    }

    /// The explicit system: `sum_k d_k(pi) t_k >= 0` over the trails of
    /// `Delta_{w0^J omega_i, w0 s_i omega_i}(x_i(t))`, `sum t_k alpha_{i_k} = lambda - beta`,
    /// and `t_k + sum_{l > k} a_{i_k i_l} t_l <= lambda_{i_k}`.
    pub fn polytope_explicit(&self, lambda: &Weight, beta: &Weight) -> Result<PolytopeSpec> {
        self.check(lambda, beta)?;
        let (datum, word, n) = (&self.datum, &self.word, self.word.len());
        let Ok(gamma) = root_coords(datum, &lambda.sub(beta)) else { return Ok(PolytopeSpec::empty(n)) };
        let mut p = PolytopeSpec::new(n);
        p.inequalities = self.trails.iter().map(|d| (d.clone(), 0)).collect();
        for (k, &g) in gamma.iter().enumerate() {
            p.equalities.push((word.iter().map(|&i| (i == k + 1) as i64).collect(), -g));
        }
        for k in 0..n {
            let mut a = vec![0i64; n];
            a[k] = -1;
            for l in k + 1..n {
                a[l] = -datum.a(word[k], word[l]);
            }
            p.inequalities.push((a, lambda.coords[word[k] - 1]));
        }
        Ok(p)
    }

    /// The tropical fiber of the reduction potential: `trop(Phi_L) >= 0` with `h = beta`, and
    /// `lambda = beta - trop([x]_0)`.
    pub fn polytope_potential(&self, lambda: &Weight, beta: &Weight) -> Result<PolytopeSpec> {
        self.check(lambda, beta)?;
        let mut p = PolytopeSpec::new(self.word.len());
        for (t, h) in &self.terms {
            p.inequalities.push((t.clone(), h.iter().zip(&beta.coords).map(|(a, b)| a * b).sum()));
        }
        for (k, e) in self.x0.iter().enumerate() {
            p.equalities.push((e.iter().map(|x| -x).collect(), beta.coords[k] - lambda.coords[k]));
        }
        Ok(p)
    }

    pub fn multiplicity(&self, lambda: &Weight, beta: &Weight, cap: usize) -> Result<MultiplicityResult> {
        enumerate_lattice_points(&self.polytope_explicit(lambda, beta)?, cap, false)
    }
}

pub fn reduction_polytope_explicit(datum: &RootDatum, j: &[usize], lambda: &Weight, beta: &Weight) -> Result<PolytopeSpec> {
    ReductionSystem::new(datum, j)?.polytope_explicit(lambda, beta)
}

pub fn reduction_polytope_potential(datum: &RootDatum, j: &[usize], lambda: &Weight, beta: &Weight) -> Result<PolytopeSpec> {
    ReductionSystem::new(datum, j)?.polytope_potential(lambda, beta)
}

/// Multiplicity of `V^J_beta` in `V_lambda`, from the explicit system.
pub fn reduction_multiplicity(datum: &RootDatum, j: &[usize], lambda: &Weight, beta: &Weight, cap: usize) -> Result<MultiplicityResult> {
    ReductionSystem::new(datum, j)?.multiplicity(lambda, beta, cap)
}
