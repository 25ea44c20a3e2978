//! Potentials, highest-weight maps and central charges on toric charts.
//!
//! Torus factors of `SL_n` are recorded by their simple-root characters: the variable
//! `h{k}_{j}` stands for `h_k^{alpha_j}`, so the diagonal entries of `h_k` are
//! `a_i = prod_{j >= i} h{k}_j` (with `a_n = 1`). Every potential below is invariant
//! under scalar matrices, so this choice of representative is harmless.

use std::collections::HashMap;

use serde::Serialize;

use crate::cartan::{RootDatum, WeylElt};
use crate::error::{Error, Result};
use crate::groupsym::{chart_named, chi_st, generalized_minor, weyl_lift, SymMatrix};
use crate::laurent::{LaurentPoly, RationalFn, TropicalForm};
use crate::words::DecoratedWord;

/// A Laurent potential on a chart, with its chart and torus coordinates.
#[derive(Debug, Clone, Serialize)]
pub struct PotentialOnChart {
    pub chart_vars: Vec<String>,
    pub torus_vars: Vec<String>,
    pub value: LaurentPoly,
}

impl PotentialOnChart {
    pub fn vars(&self) -> Vec<String> {
        self.chart_vars.iter().chain(&self.torus_vars).cloned().collect()
    }

    /// One exponent vector per monomial, over [`PotentialOnChart::vars`].
    pub fn exponent_matrix(&self) -> Result<Vec<Vec<i64>>> {
        Ok(self.value.exponents_over(&self.vars())?.into_iter().map(|(e, _)| e).collect())
    }
}

/// A map to a torus given by one Laurent monomial per target coordinate.
#[derive(Debug, Clone, Serialize)]
pub struct MonomialMap {
    pub coords: Vec<String>,
    pub monomials: Vec<LaurentPoly>,
}

impl MonomialMap {
    pub fn new(coords: Vec<String>, monomials: Vec<LaurentPoly>) -> Result<Self> {
        if coords.len() != monomials.len() {
            return Err(Error::SizeMismatch("one monomial per coordinate".into()));
        }
        for (c, m) in coords.iter().zip(&monomials) {
            if !m.is_monomial() {
                return Err(Error::NotMonomial(format!("{c} = {m}")));
            }
        }
        Ok(MonomialMap { coords, monomials })
    }

    /// Exponent rows over `vars`; the tropicalization of the map.
    pub fn linear_forms(&self, vars: &[String]) -> Result<Vec<Vec<i64>>> {
        self.monomials.iter().map(|m| Ok(m.exponents_over(vars)?.remove(0).0)).collect()
    }
}

/// An `n`-fold product of `H` on charts: potential, highest weight, and projection to `H^n`.
#[derive(Debug, Clone, Serialize)]
pub struct GeomMult {
    pub words: Vec<DecoratedWord>,
    pub potential: PotentialOnChart,
    /// Coordinates `hw^{alpha_j}`.
    pub hw: MonomialMap,
    /// Coordinates `h_k^{alpha_j}`.
    pub pi: MonomialMap,
}

/// A named positive function on the chart of `M^(n)`.
#[derive(Debug, Clone, Serialize)]
pub struct CentralCharge {
    pub label: String,
    pub value: RationalFn,
}

impl CentralCharge {
    pub fn tropicalize(&self, vars: &[String]) -> Result<TropicalForm> {
        self.value.tropicalize()?.over(vars)
    }
}

pub fn torus_var(k: usize, j: usize) -> String {
    format!("h{k}_{j}")
}

pub fn torus_vars(rank: usize, k: usize) -> Vec<String> {
    (1..=rank).map(|j| torus_var(k, j)).collect()
}

/// Diagonal entries of `h_k` as monomials in `h{k}_j`.
pub fn sl_torus(rank: usize, k: usize) -> Vec<LaurentPoly> {
    (1..=rank + 1)
        .map(|i| {
            let names: Vec<String> = (i..=rank).map(|j| torus_var(k, j)).collect();
            let f: Vec<(&str, i32)> = names.iter().map(|n| (n.as_str(), 1)).collect();
            LaurentPoly::monomial(&f, 1)
        })
        .collect()
}

/// Simple-root characters `d_j / d_{j+1}` of a diagonal matrix with monomial entries.
pub fn alpha_characters(diag: &[LaurentPoly]) -> Result<Vec<LaurentPoly>> {
    diag.windows(2).map(|w| Ok(&w[0] * &w[1].monomial_inverse()?)).collect()
}

fn laurent(f: &RationalFn) -> Result<LaurentPoly> {
    f.as_laurent().ok_or_else(|| Error::NotDivisible(f.to_string()))
}

fn diag_matrix(d: &[LaurentPoly]) -> SymMatrix {
    SymMatrix::diagonal(&d.iter().cloned().map(RationalFn::from).collect::<Vec<_>>())
}

fn w0_with_si(datum: &RootDatum, i: usize) -> Result<(WeylElt, WeylElt, WeylElt)> {
    let w0 = datum.longest_element();
    let si = datum.simple(i)?;
    let w0si = datum.compose(&w0, &si);
    Ok((w0, si, w0si))
}

/// `Phi^r(g) = sum_i Delta_{w0 omega_i, s_i omega_i}(g) / Delta_{w0 omega_i, omega_i}(g)`.
pub fn phi_r(datum: &RootDatum, g: &SymMatrix) -> Result<RationalFn> {
    let e = datum.identity();
    let mut acc = RationalFn::zero();
    for i in 1..=datum.rank() {
        let (w0, si, _) = w0_with_si(datum, i)?;
        let den = generalized_minor(datum, g, &w0, &e, i)?;
        acc = acc.add(&generalized_minor(datum, g, &w0, &si, i)?.div(&den)?);
    }
    Ok(acc)
}

/// `Phi^l(g) = sum_i Delta_{w0 s_i omega_i, omega_i}(g) / Delta_{w0 omega_i, omega_i}(g)`.
pub fn phi_l(datum: &RootDatum, g: &SymMatrix) -> Result<RationalFn> {
    let e = datum.identity();
    let mut acc = RationalFn::zero();
    for i in 1..=datum.rank() {
        let (w0, _, w0si) = w0_with_si(datum, i)?;
        let den = generalized_minor(datum, g, &w0, &e, i)?;
        acc = acc.add(&generalized_minor(datum, g, &w0si, &e, i)?.div(&den)?);
    }
    Ok(acc)
}

/// The potential `Phi_BK = Phi^l + Phi^r` on the big cell.
pub fn phi_bk(datum: &RootDatum, g: &SymMatrix) -> Result<RationalFn> {
    Ok(phi_l(datum, g)?.add(&phi_r(datum, g)?))
}

/// `Phi_BK` term by term, each term simplified to a Laurent polynomial.
fn phi_bk_laurent(datum: &RootDatum, g: &SymMatrix) -> Result<LaurentPoly> {
    let e = datum.identity();
    let mut acc = LaurentPoly::zero();
    for i in 1..=datum.rank() {
        let (w0, si, w0si) = w0_with_si(datum, i)?;
        let den = generalized_minor(datum, g, &w0, &e, i)?;
        let num = generalized_minor(datum, g, &w0, &si, i)?.add(&generalized_minor(datum, g, &w0si, &e, i)?);
        acc = &acc + &laurent(&num.div(&den)?)?;
    }
    Ok(acc)
}

/// `hw(g)` for `g` in the big cell, as diagonal entries: `(h^{w0})_i` is the ratio of
/// consecutive minors `Delta_{w0 omega_i, omega_i}(g)`.
pub fn hw_diagonal(datum: &RootDatum, g: &SymMatrix) -> Result<Vec<LaurentPoly>> {
    let n = g.size();
    let w0 = datum.longest_element();
    let e = datum.identity();
    let mut minors = vec![LaurentPoly::one()];
    for i in 1..n {
        minors.push(laurent(&generalized_minor(datum, g, &w0, &e, i)?)?);
    }
    minors.push(laurent(&g.det())?);
    let mut hh = vec![];
    for i in 1..=n {
        let m = &minors[i - 1];
        if !m.is_monomial() || !minors[i].is_monomial() {
            return Err(Error::NotMonomial(format!("minor {} of hw", i)));
        }
        hh.push(&minors[i] * &m.monomial_inverse()?);
    }
    hh.reverse();
    Ok(hh)
}

/// One step of the convolution: `u` on the chart of `d`, torus factors with the given
/// diagonal entries. Returns `Delta_bar_2(u; h1, h2)` and the diagonal of `hw_2`.
pub fn star_step(
    datum: &RootDatum,
    d: &DecoratedWord,
    tvars: Vec<String>,
    h1: &[LaurentPoly],
    h2: &[LaurentPoly],
) -> Result<(LaurentPoly, Vec<LaurentPoly>)> {
    let chart = chart_named(datum, d, tvars)?;
    let u = &chart.xi;
    let w0 = weyl_lift(datum, &datum.longest_element())?;
    let h1m = diag_matrix(h1);
    let h2m = diag_matrix(h2);
    let h1w0 = w0.transpose().mul(&h1m).mul(&w0);
    let g = h2m.mul(&u.transpose()).mul(&h1w0);
    let chi = chi_st(u);
    let mut value = laurent(&chi)?;
    value = &value + &phi_bk_laurent(datum, &g)?;
    if !value.is_positive() {
        return Err(Error::NotPositive(value.to_string()));
    }
    let big = h1m.mul(&w0).mul(u).mul(&h2m).mul(&w0);
    Ok((value, hw_diagonal(datum, &big)?))
}

fn factor_tvars(k: usize, len: usize, n: usize) -> Vec<String> {
    if n == 2 {
        (1..=len).map(|l| format!("t{l}")).collect()
    } else {
        (1..=len).map(|l| format!("t{k}_{l}")).collect()
    }
}

/// The `n`-fold product `(..(H * H) * ..) * H` on the charts `ds` (one per factor `u_k`).
/// Chart variables are `t1..tm` for `n = 2` and `t{k}_{l}` otherwise.
pub fn geometric_multiplicity(datum: &RootDatum, ds: &[DecoratedWord]) -> Result<GeomMult> {
    if ds.is_empty() {
        return Err(Error::Validation("need at least one chart".into()));
    }
    let w0 = datum.longest_element();
    for d in ds {
        d.validate(datum)?;
        if datum.weyl_from_word(&d.word)? != w0 {
            return Err(Error::Validation(format!("{:?} is not a word for the longest element", d.word)));
        }
    }
    let n = ds.len() + 1;
    let r = datum.rank();
    let mut chart_vars = vec![];
    let mut hh = sl_torus(r, 1);
    let mut value = LaurentPoly::zero();
    for (k, d) in ds.iter().enumerate() {
        let tv = factor_tvars(k + 1, d.len(), n);
        chart_vars.extend(tv.iter().cloned());
        let (p, next) = star_step(datum, d, tv, &hh, &sl_torus(r, k + 2))?;
        value = &value + &p;
        hh = next;
    }
    let torus: Vec<String> = (1..=n).flat_map(|k| torus_vars(r, k)).collect();
    let hw = MonomialMap::new((1..=r).map(|j| format!("hw_{j}")).collect(), alpha_characters(&hh)?)?;
    let pi = MonomialMap::new(torus.clone(), torus.iter().map(|v| LaurentPoly::var(v)).collect())?;
    Ok(GeomMult {
        words: ds.to_vec(),
        potential: PotentialOnChart { chart_vars, torus_vars: torus, value },
        hw,
        pi,
    })
}

/// `Delta_bar_2 = chi^st(u) + Phi_BK(h_2 u^T h_1^{w0})` on the chart of `d`.
pub fn delta2_bar(datum: &RootDatum, d: &DecoratedWord) -> Result<PotentialOnChart> {
    Ok(geometric_multiplicity(datum, std::slice::from_ref(d))?.potential)
}

pub fn deltan_bar(datum: &RootDatum, ds: &[DecoratedWord]) -> Result<PotentialOnChart> {
    Ok(geometric_multiplicity(datum, ds)?.potential)
}

/// `(hw_n, pi_n)` for the charts `ds`.
pub fn hw_map(datum: &RootDatum, ds: &[DecoratedWord]) -> Result<(MonomialMap, MonomialMap)> {
    let m = geometric_multiplicity(datum, ds)?;
    Ok((m.hw, m.pi))
}

/// Terms of `Delta_bar_2` written through minors of `x = x_I(t)` rather than of `u`.
#[derive(Debug, Clone)]
pub struct ExplicitTerms {
    pub i: usize,
    /// `Delta_{v omega_i, s_i omega_i}(x)`.
    pub first: LaurentPoly,
    /// `Delta_{v omega_i, w0 s_i omega_i}(x)`.
    pub second: LaurentPoly,
    /// `F_{lambda_i}((v^{-1} x)^T)` with `F_{lambda_i}(Y) = Delta_{w0 omega_i, s_i omega_i}([Y]_-) prod_j Delta_{omega_j}(Y)^{-a_ji}`.
    pub third: LaurentPoly,
    /// `Delta_{v omega_i, w0 omega_i}(x)`, a monomial.
    pub den: LaurentPoly,
}

pub fn explicit_terms(datum: &RootDatum, d: &DecoratedWord) -> Result<Vec<ExplicitTerms>> {
    let chart = chart_named(datum, d, factor_tvars(1, d.len(), 2))?;
    let x = &chart.x;
    let v = &chart.vk;
    let vbar = weyl_lift(datum, v)?;
    let y = vbar.transpose().mul(x).transpose();
    let (ylow, _, _) = y.gauss_parts()?;
    let lead: Vec<RationalFn> = (1..=datum.rank()).map(|j| y.leading_minor(j)).collect();
    let mut out = vec![];
    for i in 1..=datum.rank() {
        let (w0, si, w0si) = w0_with_si(datum, i)?;
        let den = laurent(&generalized_minor(datum, x, v, &w0, i)?)?;
        if !den.is_monomial() {
            return Err(Error::NotMonomial(format!("Delta_(v omega_{i}, w0 omega_{i}) = {den}")));
        }
        let mut f = generalized_minor(datum, &ylow, &w0, &si, i)?;
        for (j, dj) in lead.iter().enumerate() {
            f = f.mul(&dj.powi(-datum.a(j + 1, i) as i32)?);
        }
        out.push(ExplicitTerms {
            i,
            first: laurent(&generalized_minor(datum, x, v, &si, i)?)?,
            second: laurent(&generalized_minor(datum, x, v, &w0si, i)?)?,
            third: laurent(&f)?,
            den,
        });
    }
    Ok(out)
}

/// `Delta_bar_2` assembled from [`explicit_terms`]:
/// `sum_i first + h_2^{alpha_{i*}} second / den + h_1^{alpha_{i*}} third / den`.
pub fn explicit_delta2(datum: &RootDatum, d: &DecoratedWord) -> Result<LaurentPoly> {
    let mut acc = LaurentPoly::zero();
    for t in explicit_terms(datum, d)? {
        let s = datum.star(t.i);
        let inv = t.den.monomial_inverse()?;
        acc = &acc + &t.first;
        acc = &acc + &(&(&LaurentPoly::var(&torus_var(2, s)) * &t.second) * &inv);
        acc = &acc + &(&(&LaurentPoly::var(&torus_var(1, s)) * &t.third) * &inv);
    }
    Ok(acc)
}

/// Lifts `(g_1, ..., g_n)` in `G^n` of a point of `M^(n)` in the canonical bracketing:
/// `g_1 = h_1 w0`, `g_{k+1} = v_k^{-1} u_k h_{k+1} w0` with `v_k = [w0^{-1} g_1 .. g_k]_+`.
pub fn canonical_lifts(datum: &RootDatum, us: &[SymMatrix], tori: &[Vec<LaurentPoly>]) -> Result<Vec<SymMatrix>> {
    if tori.len() != us.len() + 1 {
        return Err(Error::SizeMismatch("need one more torus factor than unipotent factors".into()));
    }
    let w0 = weyl_lift(datum, &datum.longest_element())?;
    let mut gs = vec![diag_matrix(&tori[0]).mul(&w0)];
    let mut prod = gs[0].clone();
    for (k, u) in us.iter().enumerate() {
        let g = if k == 0 {
            u.mul(&diag_matrix(&tori[1])).mul(&w0)
        } else {
            let v = w0.transpose().mul(&prod).upper_part()?;
            v.inverse()?.mul(u).mul(&diag_matrix(&tori[k + 1])).mul(&w0)
        };
        prod = prod.mul(&g);
        gs.push(g);
    }
    Ok(gs)
}

fn product(gs: &[SymMatrix]) -> SymMatrix {
    SymMatrix::product(gs[0].size(), gs.iter())
}

/// The central charges `C_n` for `n = 2` (`c0, c1, c2`) and `n = 3` (eight functions),
/// evaluated on lifts `g_1, .., g_n`.
pub fn central_charges_of_lifts(datum: &RootDatum, gs: &[SymMatrix]) -> Result<Vec<CentralCharge>> {
    let pl = |g: &SymMatrix| phi_l(datum, g);
    let pr = |g: &SymMatrix| phi_r(datum, g);
    let c0 = |a: &SymMatrix, b: &SymMatrix| Ok::<_, Error>(pr(a)?.add(&pl(b)?));
    let c1 = |a: &SymMatrix, b: &SymMatrix| Ok::<_, Error>(pl(a)?.sub(&pl(&a.mul(b))?));
    let c2 = |a: &SymMatrix, b: &SymMatrix| Ok::<_, Error>(pr(b)?.sub(&pr(&a.mul(b))?));
    let list: Vec<(&str, RationalFn)> = match gs.len() {
        2 => vec![("c0", c0(&gs[0], &gs[1])?), ("c1", c1(&gs[0], &gs[1])?), ("c2", c2(&gs[0], &gs[1])?)],
        3 => {
            let g12 = product(&gs[..2]);
            let g23 = product(&gs[1..]);
            vec![
                ("c0.m1", c0(&g12, &gs[2])?),
                ("c1.m1", c1(&g12, &gs[2])?),
                ("c2.m1", c2(&g12, &gs[2])?),
                ("c0.m2", c0(&gs[0], &g23)?),
                ("c1.m2", c1(&gs[0], &g23)?),
                ("c2.m2", c2(&gs[0], &g23)?),
                ("c0.p3", c0(&gs[1], &gs[2])?),
                ("c0.q3", c0(&gs[0], &gs[1])?),
            ]
        }
        n => return Err(Error::Unsupported(format!("central charges for n = {n}"))),
    };
    list.into_iter()
        .map(|(label, v)| {
            let value = v.reduced();
            if !value.is_positive() {
                return Err(Error::NotPositive(format!("{label} = {value}")));
            }
            Ok(CentralCharge { label: label.to_string(), value })
        })
        .collect()
}

/// `C_n` on the chart of `M^(n)` given by `ds`, in the variables of [`geometric_multiplicity`].
pub fn central_charges(datum: &RootDatum, ds: &[DecoratedWord]) -> Result<Vec<CentralCharge>> {
    let n = ds.len() + 1;
    let r = datum.rank();
    let us = ds
        .iter()
        .enumerate()
        .map(|(k, d)| Ok(chart_named(datum, d, factor_tvars(k + 1, d.len(), n))?.xi))
        .collect::<Result<Vec<_>>>()?;
    let tori: Vec<Vec<LaurentPoly>> = (1..=n).map(|k| sl_torus(r, k)).collect();
    central_charges_of_lifts(datum, &canonical_lifts(datum, &us, &tori)?)
}

/// Evaluate a monomial map after substituting a point of the chart.
pub fn eval_monomials(m: &MonomialMap, point: &HashMap<String, num_rational::BigRational>) -> Result<Vec<num_rational::BigRational>> {
    m.monomials.iter().map(|p| p.eval(point)).collect()
}

pub mod gl2 {
    //! Worked examples for `GL_2`: torus factors `diag(e_k, f_k)`, unipotent coordinates `u_k`.

    use super::*;

    pub fn datum() -> RootDatum {
        RootDatum::parse("A1").expect("A1 parses")
    }

    pub fn torus(k: usize) -> Vec<LaurentPoly> {
        vec![LaurentPoly::var(&format!("e{k}")), LaurentPoly::var(&format!("f{k}"))]
    }

    pub fn unipotent(name: &str) -> SymMatrix {
        let mut u = SymMatrix::identity(2);
        u.set(0, 1, RationalFn::var(name));
        u
    }

    fn word() -> DecoratedWord {
        DecoratedWord::trivial(vec![1])
    }

    /// `Delta_bar_n(u_1, .., u_{n-1}; h_1, .., h_n)` and the diagonal of `hw_n`.
    pub fn deltan_bar(n: usize, restricted: bool) -> Result<(LaurentPoly, Vec<LaurentPoly>)> {
        let a1 = datum();
        let tor = |k: usize| {
            if restricted {
                vec![LaurentPoly::var(&format!("e{k}")), LaurentPoly::one()]
            } else {
                torus(k)
            }
        };
        let mut hh = tor(1);
        let mut value = LaurentPoly::zero();
        for k in 1..n {
            let (p, next) = star_step(&a1, &word(), vec![format!("u{k}")], &hh, &tor(k + 1))?;
            value = &value + &p;
            hh = next;
        }
        Ok((value, hh))
    }

    /// The associator on `M^(3)`: `(u_1, u_2) -> (e_2/(u_1 f_2) + u_2, u_1 u_2 f_2 / (u_1^{-1} e_2 + f_2 u_2))`.
    pub fn psi(u1: &RationalFn, u2: &RationalFn, e2: &RationalFn, f2: &RationalFn) -> Result<(RationalFn, RationalFn)> {
        let u1p = e2.div(&u1.mul(f2))?.add(u2);
        let u2p = u1.mul(u2).mul(f2).div(&e2.div(u1)?.add(&f2.mul(u2)))?;
        Ok((u1p, u2p))
    }

    pub fn psi_symbolic() -> Result<(RationalFn, RationalFn)> {
        let v = RationalFn::var;
        psi(&v("u1"), &v("u2"), &v("e2"), &v("f2"))
    }

    /// Lifts of `(u_1, u_2; h_1, h_2, h_3)` in the canonical bracketing.
    pub fn lifts3() -> Result<Vec<SymMatrix>> {
        canonical_lifts(&datum(), &[unipotent("u1"), unipotent("u2")], &[torus(1), torus(2), torus(3)])
    }

    /// `C_3` on `M^(3)` computed from the lifts.
    pub fn central_charges3() -> Result<Vec<CentralCharge>> {
        central_charges_of_lifts(&datum(), &lifts3()?)
    }

    /// `C_2 = (c0, c1, c2)` on `M^(2)`.
    pub fn central_charges2() -> Result<Vec<CentralCharge>> {
        let gs = canonical_lifts(&datum(), &[unipotent("u1")], &[torus(1), torus(2)])?;
        central_charges_of_lifts(&datum(), &gs)
    }

    /// `B_-` element `[[a_k, 0], [b_k, c_k]]`.
    pub fn lower(k: usize) -> SymMatrix {
        let v = |s: &str| RationalFn::var(&format!("{s}{k}"));
        SymMatrix::from_rows(vec![vec![v("a"), RationalFn::zero()], vec![v("b"), v("c")]]).expect("2x2")
    }

    /// Coordinates of `F_{12,3}(x_1, x_2, x_3)`: `u_1 = c0(x_1*x_2)`, `u_2 = c0(x_1x_2*x_3)`,
    /// `e_k = a_k c_k / b_k`, `f_k = b_k`.
    pub fn f123_coordinates() -> Result<HashMap<String, RationalFn>> {
        let a1 = datum();
        let xs: Vec<SymMatrix> = (1..=3).map(lower).collect();
        let c0 = |a: &SymMatrix, b: &SymMatrix| Ok::<_, Error>(phi_r(&a1, a)?.add(&phi_l(&a1, b)?));
        let mut m = HashMap::new();
        m.insert("u1".to_string(), c0(&xs[0], &xs[1])?.reduced());
        m.insert("u2".to_string(), c0(&xs[0].mul(&xs[1]), &xs[2])?.reduced());
        for k in 1..=3 {
            let v = |s: &str| RationalFn::var(&format!("{s}{k}"));
            m.insert(format!("e{k}"), v("a").mul(&v("c")).div(&v("b"))?);
            m.insert(format!("f{k}"), v("b"));
        }
        Ok(m)
    }

    /// The same coordinates for `F_{1,23}`.
    pub fn f1_23_coordinates() -> Result<HashMap<String, RationalFn>> {
        let a1 = datum();
        let xs: Vec<SymMatrix> = (1..=3).map(lower).collect();
        let c0 = |a: &SymMatrix, b: &SymMatrix| Ok::<_, Error>(phi_r(&a1, a)?.add(&phi_l(&a1, b)?));
        let mut m = f123_coordinates()?;
        m.insert("u1".to_string(), c0(&xs[1], &xs[2])?.reduced());
        m.insert("u2".to_string(), c0(&xs[0], &xs[1].mul(&xs[2]))?.reduced());
        Ok(m)
    }

    /// `C_3` on `B_- x B_- x B_-`, from `Phi^l(x) = a/b`, `Phi^r(x) = c/b` on products.
    pub fn central_charges3_lower() -> Result<Vec<CentralCharge>> {
        let xs: Vec<SymMatrix> = (1..=3).map(lower).collect();
        central_charges_of_lifts(&datum(), &xs)
    }

    /// Howe comparison: `Phi_n + eps_n - Delta_bar_n(u_i = y_{i+1}, e_i = x_i y_i)` with `y_1 = 1`.
    pub fn howe_residual(n: usize) -> Result<RationalFn> {
        let (dn, _) = deltan_bar(n, true)?;
        let x = |i: usize| LaurentPoly::var(&format!("x{i}"));
        let y = |i: usize| if i == 1 { LaurentPoly::one() } else { LaurentPoly::var(&format!("y{i}")) };
        let mut map = HashMap::new();
        for i in 1..n {
            map.insert(format!("u{i}"), y(i + 1));
        }
        for i in 1..=n {
            map.insert(format!("e{i}"), &x(i) * &y(i));
        }
        let pulled = dn.subst_poly(&map)?;
        let phi = (1..=n).fold(LaurentPoly::zero(), |acc, i| &(&acc + &x(i)) + &y(i));
        Ok(RationalFn::from(&(&phi + &epsilon(n)?) - &pulled))
    }

    /// `eps_n(x) = sum_{i=0}^{n-1} x_1..x_i / (y_1..y_{i+1})` with `y_1 = 1`.
    pub fn epsilon(n: usize) -> Result<LaurentPoly> {
        let mut acc = LaurentPoly::zero();
        for i in 0..n {
            let mut f: Vec<(String, i32)> = (1..=i).map(|k| (format!("x{k}"), 1)).collect();
            f.extend((2..=i + 1).map(|k| (format!("y{k}"), -1)));
            let refs: Vec<(&str, i32)> = f.iter().map(|(s, e)| (s.as_str(), *e)).collect();
            acc = &acc + &LaurentPoly::monomial(&refs, 1);
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> LaurentPoly {
        LaurentPoly::parse(s).unwrap()
    }

    #[test]
    fn a1_delta2() {
        let a1 = RootDatum::parse("A1").unwrap();
        let m = geometric_multiplicity(&a1, &[DecoratedWord::trivial(vec![1])]).unwrap();
        assert_eq!(m.potential.value, p("t1 + h1_1*t1^-1 + h2_1*t1^-1"));
        assert_eq!(m.hw.monomials[0], p("h1_1*h2_1*t1^-2"));
    }

    #[test]
    fn gl2_delta2() {
        let (d, hw) = gl2::deltan_bar(2, false).unwrap();
        assert_eq!(d, p("u1 + e1*f1^-1*u1^-1 + e2*f2^-1*u1^-1"));
        assert_eq!(hw, vec![p("e1*e2*u1^-1"), p("f1*f2*u1")]);
    }
}

