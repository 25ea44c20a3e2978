//! Symbolic matrices for SL_n / GL_n over Laurent fractions: elementary factors, Weyl lifts,
//! generalized minors, Gauss decomposition and the toric charts of decorated words.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::cartan::{RootDatum, WeylElt};
use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, RationalFn};
use crate::words::DecoratedWord;

/// Minimal ring interface used by the determinant routine.
pub trait Ring: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
}

impl Ring for LaurentPoly {
    fn zero() -> Self {
        LaurentPoly::zero()
    }
    fn one() -> Self {
        LaurentPoly::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        LaurentPoly::is_zero(self)
    }
}

impl Ring for RationalFn {
    fn zero() -> Self {
        RationalFn::zero()
    }
    fn one() -> Self {
        RationalFn::one()
    }
    fn add(&self, o: &Self) -> Self {
        RationalFn::add(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        RationalFn::mul(self, o)
    }
    fn neg(&self) -> Self {
        RationalFn::neg(self)
    }
    fn is_zero(&self) -> bool {
        RationalFn::is_zero(self)
    }
}

impl Ring for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

/// Determinant of the submatrix with the given rows and columns, in the given orders.
pub fn det_of<T: Ring>(get: &dyn Fn(usize, usize) -> T, rows: &[usize], cols: &[usize]) -> T {
    assert_eq!(rows.len(), cols.len());
    let k = rows.len();
    if k == 0 {
        return T::one();
    }
    let mut memo: HashMap<u32, T> = HashMap::new();
    // Expand along rows in order; state is the set of still-unused column slots.
    fn rec<T: Ring>(
        get: &dyn Fn(usize, usize) -> T,
        rows: &[usize],
        cols: &[usize],
        depth: usize,
        mask: u32,
        memo: &mut HashMap<u32, T>,
    ) -> T {
        if depth == rows.len() {
            return T::one();
        }
        if let Some(v) = memo.get(&mask) {
            return v.clone();
        }
        let mut acc = T::zero();
        let mut seen = 0;
        for (slot, &c) in cols.iter().enumerate() {
            if mask & (1 << slot) == 0 {
                continue;
            }
            let entry = get(rows[depth], c);
            if !entry.is_zero() {
                let sub = rec(get, rows, cols, depth + 1, mask & !(1 << slot), memo);
                if !sub.is_zero() {
                    let term = entry.mul(&sub);
                    acc = if seen % 2 == 0 { acc.add(&term) } else { acc.add(&term.neg()) };
                }
            }
            seen += 1;
        }
        memo.insert(mask, acc.clone());
        acc
    }
    rec(get, rows, cols, 0, (1u32 << k) - 1, &mut memo)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymMatrix {
    n: usize,
    e: Vec<RationalFn>,
}

impl SymMatrix {
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> RationalFn) -> Self {
        let mut e = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                e.push(f(i, j));
            }
        }
        SymMatrix { n, e }
    }

    pub fn from_rows(rows: Vec<Vec<RationalFn>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::SizeMismatch("matrix must be square".into()));
        }
        Ok(SymMatrix { n, e: rows.into_iter().flatten().collect() })
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { RationalFn::one() } else { RationalFn::zero() })
    }

    pub fn diagonal(d: &[RationalFn]) -> Self {
        Self::from_fn(d.len(), |i, j| if i == j { d[i].clone() } else { RationalFn::zero() })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// Entry at 0-based `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> &RationalFn {
        &self.e[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RationalFn) {
        self.e[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<RationalFn>> {
        self.e.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn mul(&self, o: &SymMatrix) -> SymMatrix {
        assert_eq!(self.n, o.n);
        let n = self.n;
        SymMatrix::from_fn(n, |i, j| {
            let mut acc = RationalFn::zero();
            for k in 0..n {
                let (a, b) = (self.get(i, k), o.get(k, j));
                if !a.is_zero() && !b.is_zero() {
                    acc = acc.add(&a.mul(b));
                }
            }
            acc
        })
    }

    pub fn product<'a>(n: usize, factors: impl IntoIterator<Item = &'a SymMatrix>) -> SymMatrix {
        factors.into_iter().fold(SymMatrix::identity(n), |acc, f| acc.mul(f))
    }

    pub fn transpose(&self) -> SymMatrix {
        SymMatrix::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    /// Entries as Laurent polynomials, if they all are.
    pub fn as_laurent(&self) -> Option<Vec<LaurentPoly>> {
        self.e.iter().map(|x| x.as_laurent()).collect()
    }

    /// Determinant of the submatrix on 0-based rows and columns (order matters for the sign).
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> RationalFn {
        if let Some(lp) = self.as_laurent() {
            let n = self.n;
            let get = |i: usize, j: usize| lp[i * n + j].clone();
            return RationalFn::from_poly(det_of(&get, rows, cols));
        }
        let get = |i: usize, j: usize| self.get(i, j).clone();
        det_of(&get, rows, cols)
    }

    pub fn det(&self) -> RationalFn {
        let all: Vec<usize> = (0..self.n).collect();
        self.minor(&all, &all)
    }

    /// Leading principal `k x k` minor.
    pub fn leading_minor(&self, k: usize) -> RationalFn {
        let idx: Vec<usize> = (0..k).collect();
        self.minor(&idx, &idx)
    }

    pub fn inverse(&self) -> Result<SymMatrix> {
        let d = self.det();
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.n;
        let mut out = SymMatrix::identity(n);
        for i in 0..n {
            for j in 0..n {
                // (g^{-1})_{ij} = (-1)^{i+j} M_{ji} / det.
                let rows: Vec<usize> = (0..n).filter(|&r| r != j).collect();
                let cols: Vec<usize> = (0..n).filter(|&c| c != i).collect();
                let m = self.minor(&rows, &cols);
                let m = if (i + j) % 2 == 1 { m.neg() } else { m };
                out.set(i, j, m.div(&d)?);
            }
        }
        Ok(out)
    }

    /// Matrix form of the anti-automorphism fixing `x_i(t)`, `y_i(t)` and inverting the torus.
    pub fn iota(&self) -> Result<SymMatrix> {
        let inv = self.inverse()?;
        Ok(SymMatrix::from_fn(self.n, |i, j| if (i + j) % 2 == 1 { inv.get(i, j).neg() } else { inv.get(i, j).clone() }))
    }

    /// `g = [g]_- [g]_0 [g]_+` with unipotent lower, diagonal, unipotent upper parts.
    pub fn gauss_parts(&self) -> Result<(SymMatrix, SymMatrix, SymMatrix)> {
        let n = self.n;
        let lead: Vec<RationalFn> = (0..=n).map(|k| self.leading_minor(k)).collect();
        for (k, d) in lead.iter().enumerate().skip(1) {
            if d.is_zero() {
                return Err(Error::GaussUndefined(k));
            }
        }
        let mut lower = SymMatrix::identity(n);
        let mut upper = SymMatrix::identity(n);
        let mut diag = vec![];
        for i in 1..=n {
            diag.push(lead[i].div(&lead[i - 1])?);
            for j in i + 1..=n {
                let rows: Vec<usize> = (0..i).collect();
                let mut cols: Vec<usize> = (0..i - 1).collect();
                cols.push(j - 1);
                upper.set(i - 1, j - 1, self.minor(&rows, &cols).div(&lead[i])?);
                let mut rows2: Vec<usize> = (0..i - 1).collect();
                rows2.push(j - 1);
                let cols2: Vec<usize> = (0..i).collect();
                lower.set(j - 1, i - 1, self.minor(&rows2, &cols2).div(&lead[i])?);
            }
        }
        Ok((lower, SymMatrix::diagonal(&diag), upper))
    }

    pub fn upper_part(&self) -> Result<SymMatrix> {
        Ok(self.gauss_parts()?.2)
    }

    pub fn eval(&self, point: &HashMap<String, BigRational>) -> Result<Vec<Vec<BigRational>>> {
        let mut rows = vec![];
        for i in 0..self.n {
            let mut r = vec![];
            for j in 0..self.n {
                r.push(self.get(i, j).eval(point)?);
            }
            rows.push(r);
        }
        Ok(rows)
    }

    pub fn subst(&self, map: &HashMap<String, RationalFn>) -> Result<SymMatrix> {
        let mut e = vec![];
        for x in &self.e {
            e.push(x.subst(map)?);
        }
        Ok(SymMatrix { n: self.n, e })
    }

    /// Entries as strings, row by row.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.rows().into_iter().map(|r| r.into_iter().map(|x| x.to_string()).collect()).collect()
    }
}

impl fmt::Display for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.to_strings();
        let width: Vec<usize> = (0..self.n).map(|j| s.iter().map(|r| r[j].chars().count()).max().unwrap_or(1)).collect();
        for row in &s {
            let cells: Vec<String> = row.iter().zip(&width).map(|(c, w)| format!("{c:>w$}")).collect();
            writeln!(f, "[ {} ]", cells.join("  "))?;
        }
        Ok(())
    }
}

fn check_type_a(datum: &RootDatum) -> Result<usize> {
    if !datum.is_type_a() {
        return Err(Error::Unsupported(format!("symbolic matrices are only built for type A, not {}", datum.name())));
    }
    Ok(datum.rank() + 1)
}

/// `x_i(t)` for `j = i > 0`, `x_{-i}(t) = y_i(t) t^{-alpha_i^vee}` for `j = -i < 0`, in `n x n` matrices.
pub fn elementary(n: usize, j: i64, t: &RationalFn) -> Result<SymMatrix> {
    let i = j.unsigned_abs() as usize;
    if i == 0 || i >= n {
        return Err(Error::IndexOutOfRange { index: j, rank: n - 1 });
    }
    let mut m = SymMatrix::identity(n);
    if j > 0 {
        m.set(i - 1, i, t.clone());
    } else {
        m.set(i - 1, i - 1, t.inv()?);
        m.set(i, i, t.clone());
        m.set(i, i - 1, RationalFn::one());
    }
    Ok(m)
}

/// `y_i(t) = I + t E_{i+1,i}`.
pub fn elementary_lower(n: usize, i: usize, t: &RationalFn) -> Result<SymMatrix> {
    if i == 0 || i >= n {
        return Err(Error::IndexOutOfRange { index: i as i64, rank: n - 1 });
    }
    let mut m = SymMatrix::identity(n);
    m.set(i, i - 1, t.clone());
    Ok(m)
}

/// `t^{alpha_i^vee}`: `t` at slot `i`, `t^{-1}` at slot `i + 1`.
pub fn coroot_torus(n: usize, i: usize, t: &RationalFn) -> Result<SymMatrix> {
    let mut d = vec![RationalFn::one(); n];
    d[i - 1] = t.clone();
    d[i] = t.inv()?;
    Ok(SymMatrix::diagonal(&d))
}

/// `s̄_i = x_i(-1) y_i(1) x_i(-1)`.
pub fn sbar(n: usize, i: usize) -> Result<SymMatrix> {
    let m1 = RationalFn::constant(-1);
    let x = elementary(n, i as i64, &m1)?;
    let y = elementary_lower(n, i, &RationalFn::one())?;
    Ok(x.mul(&y).mul(&x))
}

pub fn weyl_lift(datum: &RootDatum, w: &WeylElt) -> Result<SymMatrix> {
    weyl_lift_word(datum, w.word())
}

pub fn weyl_lift_word(datum: &RootDatum, word: &[usize]) -> Result<SymMatrix> {
    let n = check_type_a(datum)?;
    let mut m = SymMatrix::identity(n);
    for &i in word {
        m = m.mul(&sbar(n, i)?);
    }
    Ok(m)
}

/// Signed permutation data of `w̄`: column `c` of `w̄` is `sign[c] * e_{target[c]}`.
fn lift_columns(datum: &RootDatum, w: &WeylElt) -> Result<(Vec<usize>, Vec<i64>)> {
    let m = weyl_lift(datum, w)?;
    let n = m.size();
    let mut target = vec![0; n];
    let mut sign = vec![0; n];
    for c in 0..n {
        for r in 0..n {
            let v = m.get(r, c).as_laurent().and_then(|p| p.constant_value()).expect("lift is a signed permutation");
            if !v.is_zero() {
                target[c] = r;
                sign[c] = if v == BigInt::from(1) { 1 } else { -1 };
            }
        }
    }
    Ok((target, sign))
}

/// `Δ_{u ω_i, v ω_i}(g)`: leading `i x i` minor of `ū^{-1} g v̄`.
pub fn generalized_minor(datum: &RootDatum, g: &SymMatrix, u: &WeylElt, v: &WeylElt, i: usize) -> Result<RationalFn> {
    let n = check_type_a(datum)?;
    if g.size() != n {
        return Err(Error::SizeMismatch(format!("expected {n}x{n} matrix")));
    }
    if i == 0 || i > datum.rank() {
        return Err(Error::IndexOutOfRange { index: i as i64, rank: datum.rank() });
    }
    let (ru, su) = lift_columns(datum, u)?;
    let (rv, sv) = lift_columns(datum, v)?;
    // ū^{-1} = ū^T, so (ū^T g v̄)_{ab} = su[a] sv[b] g[ru[a], rv[b]].
    let rows: Vec<usize> = ru[..i].to_vec();
    let cols: Vec<usize> = rv[..i].to_vec();
    let sign: i64 = su[..i].iter().product::<i64>() * sv[..i].iter().product::<i64>();
    let m = g.minor(&rows, &cols);
    Ok(if sign < 0 { m.neg() } else { m })
}

/// `χ^st(u) = Σ u_{i,i+1}`.
pub fn chi_st(u: &SymMatrix) -> RationalFn {
    (0..u.size().saturating_sub(1)).fold(RationalFn::zero(), |acc, i| acc.add(u.get(i, i + 1)))
}

/// Names `t1 .. tn` of chart coordinates.
pub fn chart_vars(n: usize) -> Vec<String> {
    (1..=n).map(|k| format!("t{k}")).collect()
}

/// `x_𝕀(t) = x_{j_1}(t_1) ... x_{j_n}(t_n)`.
pub fn x_double_word(datum: &RootDatum, dw: &[i64], vars: &[String]) -> Result<SymMatrix> {
    let n = check_type_a(datum)?;
    let mut m = SymMatrix::identity(n);
    for (j, v) in dw.iter().zip(vars) {
        m = m.mul(&elementary(n, *j, &RationalFn::var(v))?);
    }
    Ok(m)
}

#[derive(Debug, Clone)]
pub struct ChartPoint {
    pub word: DecoratedWord,
    pub vars: Vec<String>,
    /// `x_𝕀(t)`.
    pub x: SymMatrix,
    /// `ξ_𝕀(t) = [v̄_K^{-1} x_𝕀(t)]_+`.
    pub xi: SymMatrix,
    pub vk: WeylElt,
    pub wk: WeylElt,
}

pub fn chart(datum: &RootDatum, d: &DecoratedWord) -> Result<ChartPoint> {
    chart_named(datum, d, chart_vars(d.len()))
}

/// As [`chart`], with caller-chosen coordinate names.
pub fn chart_named(datum: &RootDatum, d: &DecoratedWord, vars: Vec<String>) -> Result<ChartPoint> {
    if vars.len() != d.len() {
        return Err(Error::SizeMismatch(format!("{} names for a word of length {}", vars.len(), d.len())));
    }
    let (vk, wk) = d.vk_wk(datum)?;
    let x = x_double_word(datum, &d.double_word(), &vars)?;
    let vbar = weyl_lift(datum, &vk)?;
    let xi = vbar.transpose().mul(&x).upper_part()?;
    Ok(ChartPoint { word: d.clone(), vars, x, xi, vk, wk })
}

/// A formal product of generators, used to check the matrix form of `ι`.
#[derive(Debug, Clone, PartialEq)]
pub enum Factor {
    X(usize, RationalFn),
    Y(usize, RationalFn),
    /// Diagonal torus element.
    H(Vec<RationalFn>),
}

pub fn factor_matrix(n: usize, f: &Factor) -> Result<SymMatrix> {
    match f {
        Factor::X(i, t) => elementary(n, *i as i64, t),
        Factor::Y(i, t) => elementary_lower(n, *i, t),
        Factor::H(d) => Ok(SymMatrix::diagonal(d)),
    }
}

pub fn factors_matrix(n: usize, fs: &[Factor]) -> Result<SymMatrix> {
    let mut m = SymMatrix::identity(n);
    for f in fs {
        m = m.mul(&factor_matrix(n, f)?);
    }
    Ok(m)
}

/// `ι` on a formal product: reverse the order, fix `x_i`, `y_i`, invert torus factors.
pub fn iota_factors(fs: &[Factor]) -> Result<Vec<Factor>> {
    fs.iter()
        .rev()
        .map(|f| {
            Ok(match f {
                Factor::H(d) => Factor::H(d.iter().map(|x| x.inv()).collect::<Result<Vec<_>>>()?),
                other => other.clone(),
            })
        })
        .collect()
}
