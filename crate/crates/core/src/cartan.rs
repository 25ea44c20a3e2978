//! Root data of finite type, Weyl group elements, weights and coweights.
//!
//! Indices of simple roots are 1-based in the public API. Weights are stored in the basis of
//! fundamental weights, coweights in the basis of fundamental coweights. The Cartan matrix
//! entry `a(i, j)` is `<alpha_i^vee, alpha_j>`, so the simple root `alpha_i` is column `i`.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Series {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    Custom,
}

impl Series {
    pub fn from_char(c: char) -> Option<Series> {
        Some(match c.to_ascii_uppercase() {
            'A' => Series::A,
            'B' => Series::B,
            'C' => Series::C,
            'D' => Series::D,
            'E' => Series::E,
            'F' => Series::F,
            'G' => Series::G,
            _ => return None,
        })
    }

    pub fn letter(self) -> &'static str {
        match self {
            Series::A => "A",
            Series::B => "B",
            Series::C => "C",
            Series::D => "D",
            Series::E => "E",
            Series::F => "F",
            Series::G => "G",
            Series::Custom => "X",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RootDatum {
    series: Series,
    rank: usize,
    cartan: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight {
    pub coords: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Coweight {
    pub coords: Vec<i64>,
}

impl Weight {
    pub fn new(coords: Vec<i64>) -> Self {
        Weight { coords }
    }
    pub fn zero(rank: usize) -> Self {
        Weight { coords: vec![0; rank] }
    }
    pub fn is_dominant(&self) -> bool {
        self.coords.iter().all(|&c| c >= 0)
    }
    pub fn add(&self, other: &Weight) -> Weight {
        Weight::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect())
    }
    pub fn sub(&self, other: &Weight) -> Weight {
        Weight::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect())
    }
    pub fn scale(&self, k: i64) -> Weight {
        Weight::new(self.coords.iter().map(|a| a * k).collect())
    }
    pub fn neg(&self) -> Weight {
        self.scale(-1)
    }
}

impl Coweight {
    pub fn new(coords: Vec<i64>) -> Self {
        Coweight { coords }
    }
    pub fn is_dominant(&self) -> bool {
        self.coords.iter().all(|&c| c >= 0)
    }
    /// The same coordinate vector read as a weight of the Langlands dual datum.
    pub fn as_dual_weight(&self) -> Weight {
        Weight::new(self.coords.clone())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.coords.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","))
    }
}

/// A Weyl group element: its matrix on the weight lattice plus a reduced word.
///
/// The stored word is the lexicographically smallest reduced word, so derived equality
/// is equality of group elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeylElt {
    rank: usize,
    mat: Vec<i64>,
    word: Vec<usize>,
}

impl WeylElt {
    pub fn rank(&self) -> usize {
        self.rank
    }
    pub fn word(&self) -> &[usize] {
        &self.word
    }
    pub fn length(&self) -> usize {
        self.word.len()
    }
    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }
    /// Row-major matrix of the action on fundamental-weight coordinates.
    pub fn matrix(&self) -> Vec<Vec<i64>> {
        self.mat.chunks(self.rank).map(|r| r.to_vec()).collect()
    }
    pub fn act(&self, lambda: &Weight) -> Weight {
        let r = self.rank;
        Weight::new(
            (0..r).map(|i| (0..r).map(|j| self.mat[i * r + j] * lambda.coords[j]).sum()).collect(),
        )
    }
}

/// Bipartite presentation `w0 = (ab)^n a^eps` of the longest element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartite {
    pub a: WeylElt,
    pub b: WeylElt,
    pub a_nodes: Vec<usize>,
    pub b_nodes: Vec<usize>,
    pub n: usize,
    pub epsilon: usize,
}

fn standard_cartan(series: Series, rank: usize) -> Result<Vec<Vec<i64>>> {
    let bad = || Error::InvalidDatum(format!("no root system {}{}", series.letter(), rank));
    let mut a = vec![vec![0i64; rank]; rank];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    let link = |a: &mut Vec<Vec<i64>>, i: usize, j: usize| {
        a[i][j] = -1;
        a[j][i] = -1;
    };
    match series {
        Series::A => {
            if rank < 1 {
                return Err(bad());
            }
            for i in 0..rank.saturating_sub(1) {
                link(&mut a, i, i + 1);
            }
        }
        Series::B | Series::C => {
            if rank < 2 {
                return Err(bad());
            }
            for i in 0..rank - 1 {
                link(&mut a, i, i + 1);
            }
            // B: alpha_r short, so <alpha_r^vee, alpha_{r-1}> = -2.
            if series == Series::B {
                a[rank - 1][rank - 2] = -2;
            } else {
                a[rank - 2][rank - 1] = -2;
            }
        }
        Series::D => {
            if rank < 4 {
                return Err(bad());
            }
            for i in 0..rank - 2 {
                link(&mut a, i, i + 1);
            }
            link(&mut a, rank - 3, rank - 1);
        }
        Series::E => {
            if !(6..=8).contains(&rank) {
                return Err(bad());
            }
            link(&mut a, 0, 2);
            link(&mut a, 1, 3);
            for i in 2..rank - 1 {
                link(&mut a, i, i + 1);
            }
        }
        Series::F => {
            if rank != 4 {
                return Err(bad());
            }
            link(&mut a, 0, 1);
            link(&mut a, 1, 2);
            link(&mut a, 2, 3);
            a[2][1] = -2;
        }
        Series::G => {
            if rank != 2 {
                return Err(bad());
            }
            a[0][1] = -3;
            a[1][0] = -1;
        }
        Series::Custom => return Err(bad()),
    }
    Ok(a)
}

fn leading_minors_positive(a: &[Vec<i64>]) -> bool {
    let n = a.len();
    let mut m: Vec<Vec<Ratio<i64>>> =
        a.iter().map(|r| r.iter().map(|&x| Ratio::from_integer(x)).collect()).collect();
    for k in 0..n {
        if m[k][k] <= Ratio::from_integer(0) {
            return false;
        }
        for i in k + 1..n {
            let f = m[i][k] / m[k][k];
            for j in k..n {
                let v = m[k][j] * f;
                m[i][j] -= v;
            }
        }
    }
    true
}

impl RootDatum {
    pub fn new(series: Series, rank: usize) -> Result<Self> {
        let cartan = standard_cartan(series, rank)?;
        Ok(RootDatum { series, rank, cartan })
    }

    /// Parse names like `A3`, `b2`, `G2`.
    pub fn parse(name: &str) -> Result<Self> {
        let name = name.trim();
        let mut chars = name.chars();
        let c = chars.next().ok_or_else(|| Error::Validation("empty datum name".into()))?;
        let series =
            Series::from_char(c).ok_or_else(|| Error::Validation(format!("unknown series in {name}")))?;
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::Validation(format!("bad rank in {name}")))?;
        RootDatum::new(series, rank)
    }

    /// Build from an explicit Cartan matrix, recognising the standard series when possible.
    pub fn from_cartan(cartan: Vec<Vec<i64>>) -> Result<Self> {
        let rank = cartan.len();
        if rank == 0 || cartan.iter().any(|r| r.len() != rank) {
            return Err(Error::InvalidDatum("Cartan matrix must be square and nonempty".into()));
        }
        for i in 0..rank {
            if cartan[i][i] != 2 {
                return Err(Error::InvalidDatum(format!("diagonal entry {} is not 2", i + 1)));
            }
            for j in 0..rank {
                if i != j {
                    if cartan[i][j] > 0 {
                        return Err(Error::InvalidDatum("positive off-diagonal entry".into()));
                    }
                    if (cartan[i][j] == 0) != (cartan[j][i] == 0) {
                        return Err(Error::InvalidDatum("zero pattern is not symmetric".into()));
                    }
                    if cartan[i][j] * cartan[j][i] > 3 {
                        return Err(Error::InvalidDatum("not of finite type".into()));
                    }
                }
            }
        }
        if !leading_minors_positive(&cartan) {
            return Err(Error::InvalidDatum("not of finite type".into()));
        }
        for s in [Series::A, Series::B, Series::C, Series::D, Series::E, Series::F, Series::G] {
            if let Ok(std) = standard_cartan(s, rank) {
                if std == cartan {
                    return Ok(RootDatum { series: s, rank, cartan });
                }
            }
        }
        Ok(RootDatum { series: Series::Custom, rank, cartan })
    }

    pub fn series(&self) -> Series {
        self.series
    }
    pub fn rank(&self) -> usize {
        self.rank
    }
    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }
    /// `a(i, j) = <alpha_i^vee, alpha_j>`, 1-based.
    pub fn a(&self, i: usize, j: usize) -> i64 {
        self.cartan[i - 1][j - 1]
    }
    pub fn name(&self) -> String {
        match self.series {
            Series::Custom => format!("custom{}", self.rank),
            s => format!("{}{}", s.letter(), self.rank),
        }
    }
    pub fn is_type_a(&self) -> bool {
        self.series == Series::A
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.rank {
            return Err(Error::IndexOutOfRange { index: i as i64, rank: self.rank });
        }
        Ok(())
    }

    fn check_len(&self, v: &[i64]) -> Result<()> {
        if v.len() != self.rank {
            return Err(Error::SizeMismatch(format!("expected {} coordinates, got {}", self.rank, v.len())));
        }
        Ok(())
    }

    /// Simple root `alpha_i` in fundamental-weight coordinates.
    pub fn simple_root(&self, i: usize) -> Weight {
        Weight::new((0..self.rank).map(|j| self.cartan[j][i - 1]).collect())
    }

    /// Simple coroot `alpha_i^vee` in fundamental-coweight coordinates.
    pub fn simple_coroot(&self, i: usize) -> Coweight {
        Coweight::new(self.cartan[i - 1].clone())
    }

    pub fn fundamental_weight(&self, i: usize) -> Weight {
        let mut c = vec![0; self.rank];
        c[i - 1] = 1;
        Weight::new(c)
    }

    pub fn rho(&self) -> Weight {
        Weight::new(vec![1; self.rank])
    }

    fn reflect_in_place(&self, i0: usize, v: &mut [i64]) {
        let c = v[i0];
        if c != 0 {
            for (j, x) in v.iter_mut().enumerate() {
                *x -= c * self.cartan[j][i0];
            }
        }
    }

    fn coreflect_in_place(&self, i0: usize, v: &mut [i64]) {
        let c = v[i0];
        if c != 0 {
            for (j, x) in v.iter_mut().enumerate() {
                *x -= c * self.cartan[i0][j];
            }
        }
    }

    pub fn simple_reflection(&self, i: usize, lambda: &Weight) -> Result<Weight> {
        self.check_index(i)?;
        self.check_len(&lambda.coords)?;
        let mut v = lambda.coords.clone();
        self.reflect_in_place(i - 1, &mut v);
        Ok(Weight::new(v))
    }

    pub fn simple_coreflection(&self, i: usize, xi: &Coweight) -> Result<Coweight> {
        self.check_index(i)?;
        self.check_len(&xi.coords)?;
        let mut v = xi.coords.clone();
        self.coreflect_in_place(i - 1, &mut v);
        Ok(Coweight::new(v))
    }

    pub fn identity(&self) -> WeylElt {
        let r = self.rank;
        let mut mat = vec![0; r * r];
        for i in 0..r {
            mat[i * r + i] = 1;
        }
        WeylElt { rank: r, mat, word: vec![] }
    }

    fn mat_of_word(&self, word: &[usize]) -> Vec<i64> {
        let r = self.rank;
        // Columns of the matrix are images of the fundamental weights.
        let mut mat = vec![0; r * r];
        for col in 0..r {
            let mut v = vec![0; r];
            v[col] = 1;
            for &i in word.iter().rev() {
                self.reflect_in_place(i - 1, &mut v);
            }
            for row in 0..r {
                mat[row * r + col] = v[row];
            }
        }
        mat
    }

    /// Lexicographically smallest reduced word of the element with matrix `mat`.
    fn canonical_word(&self, mat: &[i64]) -> Vec<usize> {
        let r = self.rank;
        // v = w(rho); the smallest i with v_i < 0 is the smallest left descent.
        let mut v: Vec<i64> = (0..r).map(|i| (0..r).map(|j| mat[i * r + j]).sum()).collect();
        let mut word = vec![];
        while let Some(i0) = v.iter().position(|&x| x < 0) {
            word.push(i0 + 1);
            self.reflect_in_place(i0, &mut v);
        }
        word
    }

    pub fn weyl_from_word(&self, word: &[usize]) -> Result<WeylElt> {
        for &i in word {
            self.check_index(i)?;
        }
        let mat = self.mat_of_word(word);
        let canon = self.canonical_word(&mat);
        Ok(WeylElt { rank: self.rank, mat, word: canon })
    }

    pub fn simple(&self, i: usize) -> Result<WeylElt> {
        self.weyl_from_word(&[i])
    }

    pub fn compose(&self, u: &WeylElt, w: &WeylElt) -> WeylElt {
        let mut word = u.word.clone();
        word.extend_from_slice(&w.word);
        self.weyl_from_word(&word).expect("letters already validated")
    }

    pub fn inverse(&self, w: &WeylElt) -> WeylElt {
        let word: Vec<usize> = w.word.iter().rev().copied().collect();
        self.weyl_from_word(&word).expect("letters already validated")
    }

    pub fn power(&self, w: &WeylElt, n: usize) -> WeylElt {
        let mut word = vec![];
        for _ in 0..n {
            word.extend_from_slice(&w.word);
        }
        self.weyl_from_word(&word).expect("letters already validated")
    }

    pub fn weyl_act(&self, w: &WeylElt, lambda: &Weight) -> Result<Weight> {
        self.check_len(&lambda.coords)?;
        Ok(w.act(lambda))
    }

    pub fn weyl_act_coweight(&self, w: &WeylElt, xi: &Coweight) -> Result<Coweight> {
        self.check_len(&xi.coords)?;
        let mut v = xi.coords.clone();
        for &i in w.word.iter().rev() {
            self.coreflect_in_place(i - 1, &mut v);
        }
        Ok(Coweight::new(v))
    }

    /// True when the word is a reduced expression.
    pub fn is_reduced(&self, word: &[usize]) -> Result<bool> {
        Ok(self.weyl_from_word(word)?.length() == word.len())
    }

    pub fn longest_element(&self) -> WeylElt {
        self.longest_of_parabolic(&(1..=self.rank).collect::<Vec<_>>())
    }

    /// Longest element of the parabolic subgroup generated by `s_j`, `j` in `subset`.
    pub fn longest_of_parabolic(&self, subset: &[usize]) -> WeylElt {
        let r = self.rank;
        let mut v = vec![1i64; r];
        let mut word = vec![];
        while let Some(&j) = subset.iter().find(|&&j| v[j - 1] > 0) {
            word.push(j);
            self.reflect_in_place(j - 1, &mut v);
        }
        word.reverse();
        self.weyl_from_word(&word).expect("valid letters")
    }

    pub fn num_positive_roots(&self) -> usize {
        self.longest_element().length()
    }

    pub fn coxeter_number(&self) -> usize {
        2 * self.num_positive_roots() / self.rank
    }

    /// Positive roots in simple-root coordinates, sorted by height then lexicographically.
    pub fn positive_roots(&self) -> Vec<Vec<i64>> {
        let r = self.rank;
        let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
        let mut queue = VecDeque::new();
        for i in 0..r {
            let mut e = vec![0; r];
            e[i] = 1;
            seen.insert(e.clone());
            queue.push_back(e);
        }
        while let Some(beta) = queue.pop_front() {
            for i in 0..r {
                let pairing: i64 = (0..r).map(|k| beta[k] * self.cartan[i][k]).sum();
                let mut g = beta.clone();
                g[i] -= pairing;
                if g.iter().all(|&x| x >= 0) && g.iter().any(|&x| x > 0) && seen.insert(g.clone()) {
                    queue.push_back(g);
                }
            }
        }
        let mut roots: Vec<_> = seen.into_iter().collect();
        roots.sort_by_key(|b| (b.iter().sum::<i64>(), b.clone()));
        roots
    }

    /// Convert simple-root coordinates to fundamental-weight coordinates.
    pub fn root_to_weight(&self, e: &[i64]) -> Weight {
        let r = self.rank;
        Weight::new((0..r).map(|j| (0..r).map(|k| self.cartan[j][k] * e[k]).sum()).collect())
    }

    /// Convert simple-coroot coordinates to fundamental-coweight coordinates.
    pub fn coroot_to_coweight(&self, e: &[i64]) -> Coweight {
        let r = self.rank;
        Coweight::new((0..r).map(|j| (0..r).map(|k| self.cartan[k][j] * e[k]).sum()).collect())
    }

    fn solve_rational(&self, transpose: bool, rhs: &[i64]) -> Vec<Ratio<i64>> {
        let r = self.rank;
        let mut m: Vec<Vec<Ratio<i64>>> = (0..r)
            .map(|i| {
                let mut row: Vec<Ratio<i64>> = (0..r)
                    .map(|j| Ratio::from_integer(if transpose { self.cartan[j][i] } else { self.cartan[i][j] }))
                    .collect();
                row.push(Ratio::from_integer(rhs[i]));
                row
            })
            .collect();
        for k in 0..r {
            let p = (k..r).find(|&i| m[i][k] != Ratio::from_integer(0)).expect("Cartan matrix is invertible");
            m.swap(k, p);
            let piv = m[k][k];
            for j in k..=r {
                m[k][j] /= piv;
            }
            for i in 0..r {
                if i != k && m[i][k] != Ratio::from_integer(0) {
                    let f = m[i][k];
                    for j in k..=r {
                        let v = m[k][j] * f;
                        m[i][j] -= v;
                    }
                }
            }
        }
        m.into_iter().map(|row| row[r]).collect()
    }

    /// Simple-root coordinates of a weight (rational in general).
    pub fn weight_root_coords(&self, lambda: &Weight) -> Vec<Ratio<i64>> {
        self.solve_rational(false, &lambda.coords)
    }

    /// Simple-root coordinates if the weight lies in the root lattice.
    pub fn weight_in_root_lattice(&self, lambda: &Weight) -> Option<Vec<i64>> {
        let q = self.weight_root_coords(lambda);
        q.iter().map(|x| if x.is_integer() { Some(x.to_integer()) } else { None }).collect()
    }

    /// Simple-coroot coordinates of a coweight if it lies in the coroot lattice.
    pub fn coweight_in_coroot_lattice(&self, xi: &Coweight) -> Option<Vec<i64>> {
        let q = self.solve_rational(true, &xi.coords);
        q.iter().map(|x| if x.is_integer() { Some(x.to_integer()) } else { None }).collect()
    }

    /// Natural pairing `<lambda, xi>` of a weight with a coweight.
    pub fn pairing(&self, lambda: &Weight, xi: &Coweight) -> Ratio<i64> {
        let e = self.weight_root_coords(lambda);
        e.iter().zip(&xi.coords).map(|(a, b)| a * Ratio::from_integer(*b)).sum()
    }

    /// Transpose of the Cartan matrix.
    pub fn langlands_dual(&self) -> RootDatum {
        let r = self.rank;
        let cartan: Vec<Vec<i64>> = (0..r).map(|i| (0..r).map(|j| self.cartan[j][i]).collect()).collect();
        RootDatum::from_cartan(cartan).expect("transpose of a finite Cartan matrix")
    }

    /// `lambda_i = omega_i + s_i omega_i = -sum_{j != i} a_{ji} omega_j`.
    pub fn minimal_lift_weight(&self, i: usize) -> Result<Weight> {
        self.check_index(i)?;
        let w = self.fundamental_weight(i);
        Ok(w.add(&self.simple_reflection(i, &w)?))
    }

    /// Index `i*` with `w0 omega_i = -omega_{i*}`.
    pub fn star(&self, i: usize) -> usize {
        let w0 = self.longest_element();
        let v = w0.act(&self.fundamental_weight(i));
        v.coords.iter().position(|&c| c == -1).expect("w0 permutes -omega") + 1
    }

    /// Dominant representative of the W-orbit and the length of a minimal element taking it there.
    pub fn dominant_rep(&self, lambda: &Weight) -> (Weight, usize) {
        let mut v = lambda.coords.clone();
        let mut len = 0;
        while let Some(i0) = v.iter().position(|&x| x < 0) {
            self.reflect_in_place(i0, &mut v);
            len += 1;
        }
        (Weight::new(v), len)
    }

    /// The W-orbit of a weight, sorted.
    pub fn orbit(&self, lambda: &Weight) -> Vec<Weight> {
        let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(lambda.coords.clone());
        queue.push_back(lambda.coords.clone());
        while let Some(v) = queue.pop_front() {
            for i in 0..self.rank {
                if v[i] != 0 {
                    let mut g = v.clone();
                    self.reflect_in_place(i, &mut g);
                    if seen.insert(g.clone()) {
                        queue.push_back(g);
                    }
                }
            }
        }
        seen.into_iter().map(Weight::new).collect()
    }

    /// Every element of W (small ranks only).
    pub fn elements(&self) -> Vec<WeylElt> {
        let rho = self.rho();
        self.orbit(&rho)
            .into_iter()
            .map(|v| {
                // Recover w from w(rho) by sorting back to rho.
                let mut c = v.coords.clone();
                let mut word = vec![];
                while let Some(i0) = c.iter().position(|&x| x < 0) {
                    word.push(i0 + 1);
                    self.reflect_in_place(i0, &mut c);
                }
                self.weyl_from_word(&word).expect("valid")
            })
            .collect()
    }

    /// All reduced words of `w`, sorted lexicographically.
    pub fn reduced_words(&self, w: &WeylElt) -> Vec<Vec<usize>> {
        let mut memo: HashMap<Vec<i64>, Vec<Vec<usize>>> = HashMap::new();
        let rho = self.rho();
        let start = w.act(&rho).coords;
        let mut out = self.reduced_words_rec(start, &mut memo);
        out.sort();
        out
    }

    fn reduced_words_rec(&self, v: Vec<i64>, memo: &mut HashMap<Vec<i64>, Vec<Vec<usize>>>) -> Vec<Vec<usize>> {
        if let Some(r) = memo.get(&v) {
            return r.clone();
        }
        let mut out = vec![];
        let mut any = false;
        for i0 in 0..self.rank {
            if v[i0] < 0 {
                any = true;
                let mut g = v.clone();
                self.reflect_in_place(i0, &mut g);
                for mut tail in self.reduced_words_rec(g, memo) {
                    tail.insert(0, i0 + 1);
                    out.push(tail);
                }
            }
        }
        if !any {
            out.push(vec![]);
        }
        memo.insert(v, out.clone());
        out
    }

    /// Two-colouring of the Dynkin diagram; the class containing node 1 comes first.
    pub fn bipartition(&self) -> (Vec<usize>, Vec<usize>) {
        let r = self.rank;
        let mut colour = vec![usize::MAX; r];
        for s in 0..r {
            if colour[s] != usize::MAX {
                continue;
            }
            colour[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(i) = queue.pop_front() {
                for j in 0..r {
                    if j != i && self.cartan[i][j] != 0 && colour[j] == usize::MAX {
                        colour[j] = 1 - colour[i];
                        queue.push_back(j);
                    }
                }
            }
        }
        let a = (0..r).filter(|&i| colour[i] == 0).map(|i| i + 1).collect();
        let b = (0..r).filter(|&i| colour[i] == 1).map(|i| i + 1).collect();
        (a, b)
    }

    pub fn bipartite_w0(&self) -> Result<Bipartite> {
        let (a_nodes, b_nodes) = self.bipartition();
        let a = self.weyl_from_word(&a_nodes)?;
        let b = self.weyl_from_word(&b_nodes)?;
        let ab = self.compose(&a, &b);
        let h = self.coxeter_number();
        let w0 = self.longest_element();
        let (n, epsilon) = if h % 2 == 0 { (h / 2, 0) } else { ((h - 1) / 2, 1) };
        let mut cand = self.power(&ab, n);
        if epsilon == 1 {
            cand = self.compose(&cand, &a);
        }
        if cand != w0 {
            return Err(Error::InvalidDatum(format!("no bipartite presentation of w0 for {}", self.name())));
        }
        Ok(Bipartite { a, b, a_nodes, b_nodes, n, epsilon })
    }

    /// Lexicographically smallest reduced word of `w0`.
    pub fn w0_lexmin_word(&self) -> Vec<usize> {
        self.longest_element().word().to_vec()
    }

    /// Symmetrizer `d` with `d_i a_ij = d_j a_ji`, smallest positive integers.
    pub fn symmetrizer(&self) -> Vec<i64> {
        let r = self.rank;
        let mut d: Vec<Option<Ratio<i64>>> = vec![None; r];
        for s in 0..r {
            if d[s].is_some() {
                continue;
            }
            d[s] = Some(Ratio::from_integer(1));
            let mut queue = VecDeque::from([s]);
            while let Some(i) = queue.pop_front() {
                for j in 0..r {
                    if j != i && self.cartan[i][j] != 0 && d[j].is_none() {
                        d[j] = Some(d[i].unwrap() * Ratio::new(self.cartan[i][j], self.cartan[j][i]));
                        queue.push_back(j);
                    }
                }
            }
        }
        let d: Vec<Ratio<i64>> = d.into_iter().map(|x| x.unwrap()).collect();
        let lcm = d.iter().fold(1i64, |acc, x| num_integer::lcm(acc, *x.denom()));
        d.iter().map(|x| (x * Ratio::from_integer(lcm)).to_integer()).collect()
    }
}

impl Serialize for RootDatum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(None)?;
        match self.series {
            Series::Custom => m.serialize_entry("cartan", &self.cartan)?,
            series => {
                m.serialize_entry("series", series.letter())?;
                m.serialize_entry("rank", &self.rank)?;
            }
        }
        m.end()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum DatumRepr {
    Named { series: String, rank: usize },
    Explicit { cartan: Vec<Vec<i64>> },
    Short(String),
}

impl<'de> Deserialize<'de> for RootDatum {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = DatumRepr::deserialize(d)?;
        let res = match repr {
            DatumRepr::Named { series, rank } => {
                let c = series.chars().next().ok_or_else(|| Error::Validation("empty series".into()));
                c.and_then(|c| Series::from_char(c).ok_or_else(|| Error::Validation(format!("unknown series {series}"))))
                    .and_then(|s| RootDatum::new(s, rank))
            }
            DatumRepr::Explicit { cartan } => RootDatum::from_cartan(cartan),
            DatumRepr::Short(name) => RootDatum::parse(&name),
        };
        res.map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(c: &[i64]) -> Weight {
        Weight::new(c.to_vec())
    }

    #[test]
    fn reflections_follow_cartan_columns() {
        let a1 = RootDatum::parse("A1").unwrap();
        assert_eq!(a1.simple_reflection(1, &w(&[1])).unwrap(), w(&[-1]));
        let a2 = RootDatum::parse("A2").unwrap();
        assert_eq!(a2.simple_reflection(1, &w(&[1, 1])).unwrap(), w(&[-1, 2]));
        assert!(a2.simple_reflection(3, &w(&[1, 1])).is_err());
    }

    #[test]
    fn longest_elements() {
        let a2 = RootDatum::parse("A2").unwrap();
        let w0 = a2.longest_element();
        assert_eq!(w0.word(), &[1, 2, 1]);
        assert_eq!(w0.act(&w(&[1, 0])), w(&[0, -1]));
        let a3 = RootDatum::parse("A3").unwrap();
        let w0 = a3.longest_element();
        assert_eq!(w0.length(), 6);
        for i in 1..=3 {
            let img = w0.act(&a3.fundamental_weight(i));
            assert_eq!(img, a3.fundamental_weight(4 - i).neg());
        }
        for (name, m) in [("B3", 9), ("D4", 12), ("G2", 6), ("F4", 24), ("E6", 36)] {
            assert_eq!(RootDatum::parse(name).unwrap().num_positive_roots(), m, "{name}");
        }
    }

    #[test]
    fn bipartite_presentations() {
        let a2 = RootDatum::parse("A2").unwrap();
        let bp = a2.bipartite_w0().unwrap();
        assert_eq!((bp.a_nodes.clone(), bp.b_nodes.clone(), bp.n, bp.epsilon), (vec![1], vec![2], 1, 1));
        let a3 = RootDatum::parse("A3").unwrap();
        let bp = a3.bipartite_w0().unwrap();
        assert_eq!((bp.a_nodes.clone(), bp.b_nodes.clone(), bp.n, bp.epsilon), (vec![1, 3], vec![2], 2, 0));
        let a1 = RootDatum::parse("A1").unwrap();
        let bp = a1.bipartite_w0().unwrap();
        assert!(bp.b.is_identity());
        assert_eq!(bp.a, a1.longest_element());
        for name in ["B2", "C3", "D4", "G2", "F4", "A4", "E6"] {
            RootDatum::parse(name).unwrap().bipartite_w0().unwrap();
        }
    }

    #[test]
    fn duals() {
        let b2 = RootDatum::parse("B2").unwrap();
        let c2 = RootDatum::parse("C2").unwrap();
        assert_eq!(b2.langlands_dual(), c2);
        let g2 = RootDatum::parse("G2").unwrap();
        let g2d = g2.langlands_dual();
        assert_eq!((g2.a(1, 2), g2.a(2, 1)), (-3, -1));
        assert_eq!((g2d.a(1, 2), g2d.a(2, 1)), (-1, -3));
        assert_eq!(g2d.langlands_dual(), g2);
    }

    #[test]
    fn minimal_lifts() {
        let a4 = RootDatum::parse("A4").unwrap();
        for i in 1..=4 {
            let mut expect = vec![0; 4];
            if i > 1 {
                expect[i - 2] = 1;
            }
            if i < 4 {
                expect[i] = 1;
            }
            assert_eq!(a4.minimal_lift_weight(i).unwrap().coords, expect);
        }
        assert_eq!(RootDatum::parse("A1").unwrap().minimal_lift_weight(1).unwrap().coords, vec![0]);
        let b2 = RootDatum::parse("B2").unwrap();
        assert_eq!(b2.minimal_lift_weight(1).unwrap().coords, vec![0, -b2.a(2, 1)]);
    }

    #[test]
    fn json_forms() {
        let d: RootDatum = serde_json::from_str(r#"{"series":"A","rank":3}"#).unwrap();
        assert_eq!(d.name(), "A3");
        let d: RootDatum = serde_json::from_str(r#"{"cartan":[[2,-1],[-3,2]]}"#).unwrap();
        assert_eq!(d.series(), Series::Custom);
        let d: RootDatum = serde_json::from_str(r#"{"cartan":[[2,-3],[-1,2]]}"#).unwrap();
        assert_eq!(d.series(), Series::G);
        assert!(serde_json::from_str::<RootDatum>(r#"{"cartan":[[2,-2],[-2,2]]}"#).is_err());
        assert_eq!(serde_json::to_string(&d).unwrap(), r#"{"series":"G","rank":2}"#);
    }

    #[test]
    fn reduced_word_counts() {
        let a3 = RootDatum::parse("A3").unwrap();
        assert_eq!(a3.reduced_words(&a3.longest_element()).len(), 16);
        assert_eq!(a3.elements().len(), 24);
        let b2 = RootDatum::parse("B2").unwrap();
        assert_eq!(b2.reduced_words(&b2.longest_element()), vec![vec![1, 2, 1, 2], vec![2, 1, 2, 1]]);
    }
}
