//! Reduced words, decorated words `(i, K, L)`, their double words, and the moves between them.
//!
//! Positions in `K` and `L` are 1-based.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::cartan::{RootDatum, WeylElt};
use crate::error::{Error, Result};

pub type Word = Vec<usize>;
pub type DoubleWord = Vec<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DecoratedWord {
    pub word: Word,
    #[serde(rename = "K")]
    pub k: BTreeSet<usize>,
    #[serde(rename = "L")]
    pub l: BTreeSet<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Move {
    T1,
    T2,
    T3,
    T4,
}

/// The maps of a pair `(K, L)` with `|K| = |L|` inside `[1, n]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaRho {
    /// Order-preserving bijection `K -> L`.
    pub sigma: BTreeMap<usize, usize>,
    /// Order-reversing bijection `K -> L`.
    pub rho: BTreeMap<usize, usize>,
    /// Permutation of `[1, n]`: `rho` on `K`, order-preserving `K̄ -> L̄` elsewhere. Index 0 unused.
    pub perm: Vec<usize>,
}

fn complement(s: &BTreeSet<usize>, n: usize) -> Vec<usize> {
    (1..=n).filter(|x| !s.contains(x)).collect()
}

pub fn sigma_rho(k: &BTreeSet<usize>, l: &BTreeSet<usize>, n: usize) -> Result<SigmaRho> {
    if k.len() != l.len() {
        return Err(Error::SizeMismatch(format!("|K| = {} but |L| = {}", k.len(), l.len())));
    }
    if k.iter().chain(l.iter()).any(|&x| x == 0 || x > n) {
        return Err(Error::Validation(format!("positions must lie in [1, {n}]")));
    }
    let kv: Vec<usize> = k.iter().copied().collect();
    let lv: Vec<usize> = l.iter().copied().collect();
    let sigma = kv.iter().zip(&lv).map(|(&a, &b)| (a, b)).collect();
    let rho: BTreeMap<usize, usize> = kv.iter().zip(lv.iter().rev()).map(|(&a, &b)| (a, b)).collect();
    let mut perm = vec![0; n + 1];
    for (&a, &b) in &rho {
        perm[a] = b;
    }
    for (a, b) in complement(k, n).into_iter().zip(complement(l, n)) {
        perm[a] = b;
    }
    Ok(SigmaRho { sigma, rho, perm })
}

fn product(datum: &RootDatum, word: &[usize]) -> Result<WeylElt> {
    datum.weyl_from_word(word)
}

fn subword(word: &[usize], set: &BTreeSet<usize>, inside: bool) -> Vec<usize> {
    word.iter().enumerate().filter(|(p, _)| set.contains(&(p + 1)) == inside).map(|(_, &x)| x).collect()
}

/// `w_{i_K} w_{i_K̄} = w_i`.
pub fn is_compatible(datum: &RootDatum, word: &[usize], k: &BTreeSet<usize>) -> Result<bool> {
    if !datum.is_reduced(word)? {
        return Err(Error::NotReduced(word.to_vec()));
    }
    if k.iter().any(|&x| x == 0 || x > word.len()) {
        return Err(Error::Validation(format!("K must lie in [1, {}]", word.len())));
    }
    let wk = product(datum, &subword(word, k, true))?;
    let wkb = product(datum, &subword(word, k, false))?;
    Ok(datum.compose(&wk, &wkb) == product(datum, word)?)
}

impl DecoratedWord {
    pub fn new(word: Word, k: impl IntoIterator<Item = usize>, l: impl IntoIterator<Item = usize>) -> Result<Self> {
        let d = DecoratedWord { word, k: k.into_iter().collect(), l: l.into_iter().collect() };
        d.check_shape()?;
        Ok(d)
    }

    pub fn trivial(word: Word) -> Self {
        DecoratedWord { word, k: BTreeSet::new(), l: BTreeSet::new() }
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    fn check_shape(&self) -> Result<()> {
        sigma_rho(&self.k, &self.l, self.word.len()).map(|_| ())
    }

    /// Reduced word with compatible `K`, for the element it spells.
    pub fn is_decorated_reduced(&self, datum: &RootDatum) -> Result<bool> {
        self.check_shape()?;
        if !datum.is_reduced(&self.word)? {
            return Ok(false);
        }
        is_compatible(datum, &self.word, &self.k)
    }

    pub fn validate(&self, datum: &RootDatum) -> Result<()> {
        self.check_shape()?;
        for &i in &self.word {
            if i == 0 || i > datum.rank() {
                return Err(Error::IndexOutOfRange { index: i as i64, rank: datum.rank() });
            }
        }
        if !datum.is_reduced(&self.word)? {
            return Err(Error::NotReduced(self.word.clone()));
        }
        if !is_compatible(datum, &self.word, &self.k)? {
            return Err(Error::Incompatible(self.k.iter().copied().collect()));
        }
        Ok(())
    }

    /// `(-i_K^op) shuffled into L, with i_K̄ filling the remaining positions in order`.
    pub fn double_word(&self) -> DoubleWord {
        let n = self.word.len();
        let sr = sigma_rho(&self.k, &self.l, n).expect("shape checked");
        let mut out = vec![0i64; n];
        for (p, &letter) in self.word.iter().enumerate() {
            let pos = p + 1;
            let sign = if self.k.contains(&pos) { -1 } else { 1 };
            out[sr.perm[pos] - 1] = sign * letter as i64;
        }
        out
    }

    /// `v_K = w_{i_K}^{-1}` and `w_K = w_{i_K̄}`.
    pub fn vk_wk(&self, datum: &RootDatum) -> Result<(WeylElt, WeylElt)> {
        self.validate(datum)?;
        let vk = datum.inverse(&product(datum, &subword(&self.word, &self.k, true))?);
        let wk = product(datum, &subword(&self.word, &self.k, false))?;
        Ok((vk, wk))
    }

    /// Where the corresponding double-word move acts, if `mv` applies at `pos`.
    pub fn move_target(&self, datum: &RootDatum, mv: Move, pos: usize) -> Option<usize> {
        let n = self.word.len();
        let na = || None;
        match mv {
            Move::T1 => {
                if pos == 0 || pos >= n {
                    return na();
                }
                let sep = self.k.contains(&pos) != self.k.contains(&(pos + 1));
                let sr = sigma_rho(&self.k, &self.l, n).ok()?;
                let (a, b) = (sr.perm[pos], sr.perm[pos + 1]);
                let commute = datum.a(self.word[pos - 1], self.word[pos]) == 0;
                if !sep && a.abs_diff(b) == 1 && commute && self.word[pos - 1] != self.word[pos] {
                    Some(a.min(b))
                } else {
                    na()
                }
            }
            Move::T2 | Move::T4 => {
                if pos == 0 || pos >= n || self.l.contains(&pos) == self.l.contains(&(pos + 1)) {
                    return na();
                }
                let dw = self.double_word();
                let same = dw[pos - 1].abs() == dw[pos].abs();
                if same == (mv == Move::T4) {
                    Some(pos)
                } else {
                    na()
                }
            }
            Move::T3 => {
                // Applicable when 1 is in L and K is an initial segment [1, k].
                let kmax = *self.k.iter().next_back()?;
                if self.l.contains(&1) && self.k.len() == kmax {
                    Some(1)
                } else {
                    na()
                }
            }
        }
    }

    pub fn apply_move(&self, datum: &RootDatum, mv: Move, pos: usize) -> Result<DecoratedWord> {
        let bad = || Error::MoveNotApplicable { mv: format!("{mv:?}"), pos };
        self.move_target(datum, mv, pos).ok_or_else(bad)?;
        let mut out = self.clone();
        match mv {
            Move::T1 => out.word.swap(pos - 1, pos),
            Move::T2 | Move::T4 => {
                for p in [pos, pos + 1] {
                    if !out.l.remove(&p) {
                        out.l.insert(p);
                    }
                }
            }
            Move::T3 => {
                let last = *out.k.iter().next_back().unwrap();
                out.k.remove(&last);
                out.l.remove(&1);
            }
        }
        if !out.is_decorated_reduced(datum)? {
            return Err(bad());
        }
        Ok(out)
    }

    /// Every applicable move as (move, upstairs position, double-word position).
    pub fn applicable_moves(&self, datum: &RootDatum) -> Vec<(Move, usize, usize)> {
        let mut out = vec![];
        for mv in [Move::T1, Move::T2, Move::T3, Move::T4] {
            let range: Vec<usize> = if mv == Move::T3 { vec![1] } else { (1..self.word.len()).collect() };
            for pos in range {
                if let Some(t) = self.move_target(datum, mv, pos) {
                    out.push((mv, pos, t));
                }
            }
        }
        out
    }
}

/// Moves on double words. `pos` is the left position of the swapped pair (or 1 for the flip).
pub fn double_word_move(datum: &RootDatum, dw: &[i64], mv: Move, pos: usize) -> Result<DoubleWord> {
    let bad = || Error::MoveNotApplicable { mv: format!("{mv:?}'"), pos };
    let n = dw.len();
    let mut out = dw.to_vec();
    match mv {
        Move::T3 => {
            if pos != 1 || n == 0 || dw[0] >= 0 {
                return Err(bad());
            }
            out[0] = -dw[0];
        }
        _ => {
            if pos == 0 || pos >= n {
                return Err(bad());
            }
            let (a, b) = (dw[pos - 1], dw[pos]);
            let ok = match mv {
                Move::T1 => a * b > 0 && a != b && datum.a(a.unsigned_abs() as usize, b.unsigned_abs() as usize) == 0,
                Move::T2 => a * b < 0 && a.abs() != b.abs(),
                Move::T4 => a * b < 0 && a.abs() == b.abs(),
                Move::T3 => unreachable!(),
            };
            if !ok {
                return Err(bad());
            }
            out.swap(pos - 1, pos);
        }
    }
    Ok(out)
}

/// `r_l = prod_{k > l, j_k > 0} s_{j_k}` with `k` decreasing; returns `r_1 .. r_n`.
pub fn r_factors(datum: &RootDatum, dw: &[i64]) -> Result<Vec<WeylElt>> {
    let n = dw.len();
    let mut out = vec![datum.identity(); n];
    let mut letters: Vec<usize> = vec![];
    for l in (1..=n).rev() {
        out[l - 1] = datum.weyl_from_word(&letters)?;
        if dw[l - 1] > 0 {
            letters.push(dw[l - 1] as usize);
        }
    }
    Ok(out)
}

/// Is `dw` a double reduced word for `(v1, v2)`?
pub fn double_word_parts(datum: &RootDatum, dw: &[i64]) -> Result<Option<(WeylElt, WeylElt)>> {
    let neg: Vec<usize> = dw.iter().filter(|&&j| j < 0).map(|&j| (-j) as usize).collect();
    let pos: Vec<usize> = dw.iter().filter(|&&j| j > 0).map(|&j| j as usize).collect();
    if !datum.is_reduced(&neg)? || !datum.is_reduced(&pos)? {
        return Ok(None);
    }
    Ok(Some((datum.weyl_from_word(&neg)?, datum.weyl_from_word(&pos)?)))
}

fn subsets_of_size(n: usize, k: usize) -> Vec<BTreeSet<usize>> {
    let mut out = vec![];
    let mut cur = vec![];
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<BTreeSet<usize>>) {
        if cur.len() == k {
            out.push(cur.iter().copied().collect());
            return;
        }
        for x in start..=n {
            if n - x + 1 < k - cur.len() {
                break;
            }
            cur.push(x);
            rec(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(1, n, k, &mut cur, &mut out);
    out
}

/// All decorated reduced words of `w`, sorted; `CapExceeded` if there are more than `cap`.
pub fn all_decorated_reduced(datum: &RootDatum, w: &WeylElt, cap: usize) -> Result<Vec<DecoratedWord>> {
    let n = w.length();
    let mut out = vec![];
    for word in datum.reduced_words(w) {
        for size in 0..=n {
            for k in subsets_of_size(n, size) {
                if !is_compatible(datum, &word, &k)? {
                    continue;
                }
                for l in subsets_of_size(n, size) {
                    out.push(DecoratedWord { word: word.clone(), k: k.clone(), l });
                    if out.len() > cap {
                        return Err(Error::CapExceeded(cap));
                    }
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceClasses {
    /// Lexicographically smallest member of each class, sorted.
    pub representatives: Vec<DecoratedWord>,
    pub sizes: Vec<usize>,
    /// Pairs of class indices joined by a τ4 move.
    pub tau4_edges: BTreeSet<(usize, usize)>,
    pub total: usize,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

/// Partition the decorated reduced words of `w` into classes under τ1–τ3.
pub fn enumerate_equivalence_classes(datum: &RootDatum, w: &WeylElt, cap: usize) -> Result<EquivalenceClasses> {
    let all = all_decorated_reduced(datum, w, cap)?;
    let index: HashMap<&DecoratedWord, usize> = all.iter().enumerate().map(|(i, d)| (d, i)).collect();
    let mut uf = UnionFind((0..all.len()).collect());
    let mut t4 = vec![];
    for (i, d) in all.iter().enumerate() {
        for (mv, pos, _) in d.applicable_moves(datum) {
            let Ok(e) = d.apply_move(datum, mv, pos) else { continue };
            let j = *index.get(&e).expect("moves stay inside the set of decorated reduced words");
            if mv == Move::T4 {
                t4.push((i, j));
            } else {
                uf.union(i, j);
            }
        }
    }
    // Since `all` is sorted and unions keep the smaller index, roots are lex-minimal members.
    let mut class_of: BTreeMap<usize, usize> = BTreeMap::new();
    let mut sizes = vec![];
    let mut representatives = vec![];
    let mut assign = vec![0; all.len()];
    for i in 0..all.len() {
        let r = uf.find(i);
        let c = *class_of.entry(r).or_insert_with(|| {
            representatives.push(all[r].clone());
            sizes.push(0);
            representatives.len() - 1
        });
        sizes[c] += 1;
        assign[i] = c;
    }
    let tau4_edges = t4
        .into_iter()
        .map(|(i, j)| (assign[i], assign[j]))
        .filter(|(a, b)| a != b)
        .map(|(a, b)| (a.min(b), a.max(b)))
        .collect();
    Ok(EquivalenceClasses { representatives, sizes, tau4_edges, total: all.len() })
}

/// Lower bound on the number of classes for `w0 = (ab)^n a^eps`.
pub fn bipartite_class_bound(datum: &RootDatum) -> Result<usize> {
    let bp = datum.bipartite_w0()?;
    let (la, lb) = (bp.a.length() as u32, bp.b.length() as u32);
    Ok(bp.n.pow(la) + bp.n.pow(lb))
}
