//! Command-line front end: argument parsing, dispatch, and JSON output.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::cartan::{RootDatum, Weight, WeylElt};
use crate::error::{Error, Result};
use crate::groupsym::chart;
use crate::oracle::{branching_mult, nfold_oracle, tensor_mult_oracle};
use crate::potential::geometric_multiplicity;
use crate::tropical::{
    cap_from_env, default_word, enumerate_lattice_points, reduction_polytope_explicit, reduction_polytope_potential,
    ExplicitSystem, MultiplicityResult, ShiftIndex, TensorSystem,
};
use crate::words::{bipartite_class_bound, enumerate_equivalence_classes, DecoratedWord};

#[derive(Debug, Parser)]
#[command(name = "tropmult", version, about = "Multiplicities from tropicalized potentials on decorated toric charts")]
pub struct Cli {
    /// Print compact single-line JSON.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tensor, n-fold, deformed and branching multiplicities.
    #[command(subcommand)]
    Mult(MultCmd),
    /// Decorated reduced words.
    #[command(subcommand)]
    Words(WordsCmd),
    /// Toric charts on the unipotent group.
    #[command(subcommand)]
    Charts(ChartsCmd),
    /// Potentials on charts.
    #[command(subcommand)]
    Potential(PotentialCmd),
    /// Comparisons against the character-theoretic oracle.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Debug, Args, Clone)]
pub struct WordArgs {
    /// Reduced word of the longest element, e.g. 1,2,1 (default: lexicographically smallest).
    #[arg(long)]
    pub word: Option<String>,
    /// 1-based positions of the K decoration.
    #[arg(long = "K", default_value = "")]
    pub k: String,
    /// 1-based positions of the L decoration.
    #[arg(long = "L", default_value = "")]
    pub l: String,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum TensorRoute {
    Potential,
    Explicit,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ReduceRoute {
    Explicit,
    Potential,
}

#[derive(Debug, Subcommand)]
pub enum MultCmd {
    /// Multiplicity of V_mu in V_lambda ⊗ V_nu
    Tensor {
        #[arg(long)]
        datum: String,
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        nu: String,
        #[arg(long)]
        mu: String,
        #[command(flatten)]
        word: WordArgs,
        #[arg(long)]
        emit_points: bool,
        /// Central charge (c0, c1, c2) whose tropicalization gives the q-grading.
        #[arg(long)]
        q_charge: Option<String>,
        #[arg(long, value_enum, default_value = "potential")]
        route: TensorRoute,
    },
    /// Multiplicity of V_mu in an n-fold tensor product
    Nfold {
        #[arg(long)]
        datum: String,
        /// Semicolon-separated weights, e.g. "1,0;0,1;1,1".
        #[arg(long)]
        lambdas: String,
        #[arg(long)]
        mu: String,
        /// Chart used for every factor.
        #[command(flatten)]
        word: WordArgs,
        #[arg(long)]
        emit_points: bool,
    },
    /// q-deformed multiplicity graded by a central charge
    Deform {
        #[arg(long)]
        datum: String,
        #[arg(long)]
        lambdas: String,
        #[arg(long)]
        mu: String,
        /// Label of a central charge, e.g. c0.q3.
        #[arg(long)]
        charge: String,
        #[command(flatten)]
        word: WordArgs,
    },
    /// Multiplicity of the Levi module V^J_beta in V_lambda
    Reduce {
        #[arg(long)]
        datum: String,
        /// Levi subset, e.g. 1,3 (empty for the torus).
        #[arg(long = "J", default_value = "")]
        j: String,
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        beta: String,
        #[arg(long, value_enum, default_value = "explicit")]
        route: ReduceRoute,
        #[arg(long)]
        emit_points: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum WordsCmd {
    /// Equivalence classes of decorated reduced words
    Enumerate {
        #[arg(long)]
        datum: String,
        /// `longest` or a word such as 1,2,1.
        #[arg(long, default_value = "longest")]
        w: String,
        #[arg(long, default_value_t = 10000)]
        cap: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum ChartsCmd {
    /// The chart of a decorated word
    Show {
        #[arg(long)]
        datum: String,
        #[command(flatten)]
        word: WordArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum PotentialCmd {
    /// The potential and highest-weight map on a chart
    Dump {
        #[arg(long)]
        datum: String,
        #[command(flatten)]
        word: WordArgs,
        /// Number of tensor factors.
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum VerifyCmd {
    /// Compare tensor multiplicities with the oracle on a box of weights
    Oracle {
        #[arg(long)]
        datum: String,
        #[arg(long, default_value_t = 2)]
        max: i64,
        #[command(flatten)]
        word: WordArgs,
    },
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(vec![]);
    }
    s.split(',')
        .map(|x| x.trim().parse::<T>().map_err(|_| Error::Validation(format!("bad {what} entry {x:?} in {s:?}"))))
        .collect()
}

fn parse_weight(datum: &RootDatum, s: &str, what: &str) -> Result<Weight> {
    let v: Vec<i64> = parse_list(s, what)?;
    if v.len() != datum.rank() {
        return Err(Error::SizeMismatch(format!("{what} has {} coordinates, rank is {}", v.len(), datum.rank())));
    }
    Ok(Weight::new(v))
}

fn parse_weights(datum: &RootDatum, s: &str) -> Result<Vec<Weight>> {
    s.split(';').map(|w| parse_weight(datum, w, "lambdas")).collect()
}

fn parse_word(datum: &RootDatum, w: &WordArgs) -> Result<DecoratedWord> {
    let d = match &w.word {
        None if w.k.is_empty() && w.l.is_empty() => default_word(datum)?,
        None => DecoratedWord::new(default_word(datum)?.word, parse_list(&w.k, "K")?, parse_list(&w.l, "L")?)?,
        Some(s) => DecoratedWord::new(parse_list(s, "word")?, parse_list(&w.k, "K")?, parse_list(&w.l, "L")?)?,
    };
    d.validate(datum)?;
    Ok(d)
}

fn parse_weyl(datum: &RootDatum, s: &str) -> Result<WeylElt> {
    if s == "longest" {
        Ok(datum.longest_element())
    } else {
        datum.weyl_from_word(&parse_list::<usize>(s, "w")?)
    }
}

fn word_json(d: &DecoratedWord) -> Value {
    json!({"word": d.word, "K": d.k, "L": d.l})
}

fn mult_json(r: &MultiplicityResult) -> Value {
    let mut v = json!({"count": r.count});
    if let Some(p) = &r.points {
        v["points"] = json!(p);
    }
    if let Some(q) = &r.q_poly {
        v["q_poly"] = q.iter().map(|(k, c)| (k.to_string(), json!(c))).collect::<serde_json::Map<_, _>>().into();
    }
    v
}

/// Run one command, returning the JSON result.
pub fn run(cli: &Cli) -> Result<Value> {
    let cap = cap_from_env();
    match &cli.command {
        Command::Mult(MultCmd::Tensor { datum, lambda, nu, mu, word, emit_points, q_charge, route }) => {
            let dt = RootDatum::parse(datum)?;
            let (l, n, m) = (parse_weight(&dt, lambda, "lambda")?, parse_weight(&dt, nu, "nu")?, parse_weight(&dt, mu, "mu")?);
            let d = parse_word(&dt, word)?;
            let r = match (route, q_charge) {
                (_, Some(c)) => TensorSystem::new(&dt, &[d])?.deformed(c, &[l, n], &m, cap)?,
                (TensorRoute::Potential, None) => TensorSystem::new(&dt, &[d])?.multiplicity(&[l, n], &m, cap, *emit_points)?,
                (TensorRoute::Explicit, None) => {
                    let p = ExplicitSystem::new(&dt, &d)?.polytope(&l, &n, &m, ShiftIndex::Dual)?;
                    enumerate_lattice_points(&p, cap, *emit_points)?
                }
            };
            Ok(mult_json(&r))
        }
        Command::Mult(MultCmd::Nfold { datum, lambdas, mu, word, emit_points }) => {
            let dt = RootDatum::parse(datum)?;
            let ls = parse_weights(&dt, lambdas)?;
            if ls.len() < 2 {
                return Err(Error::Validation("need at least two weights".into()));
            }
            let d = parse_word(&dt, word)?;
            let ts = TensorSystem::new(&dt, &vec![d; ls.len() - 1])?;
            Ok(mult_json(&ts.multiplicity(&ls, &parse_weight(&dt, mu, "mu")?, cap, *emit_points)?))
        }
        Command::Mult(MultCmd::Deform { datum, lambdas, mu, charge, word }) => {
            let dt = RootDatum::parse(datum)?;
            let ls = parse_weights(&dt, lambdas)?;
            if ls.len() < 2 {
                return Err(Error::Validation("need at least two weights".into()));
            }
            let d = parse_word(&dt, word)?;
            let mut ts = TensorSystem::new(&dt, &vec![d; ls.len() - 1])?;
            Ok(mult_json(&ts.deformed(charge, &ls, &parse_weight(&dt, mu, "mu")?, cap)?))
        }
        Command::Mult(MultCmd::Reduce { datum, j, lambda, beta, route, emit_points }) => {
            let dt = RootDatum::parse(datum)?;
            let j: Vec<usize> = parse_list(j, "J")?;
            let (l, b) = (parse_weight(&dt, lambda, "lambda")?, parse_weight(&dt, beta, "beta")?);
            let p = match route {
                ReduceRoute::Explicit => reduction_polytope_explicit(&dt, &j, &l, &b)?,
                ReduceRoute::Potential => reduction_polytope_potential(&dt, &j, &l, &b)?,
            };
            Ok(mult_json(&enumerate_lattice_points(&p, cap, *emit_points)?))
        }
        Command::Words(WordsCmd::Enumerate { datum, w, cap }) => {
            let dt = RootDatum::parse(datum)?;
            let w = parse_weyl(&dt, w)?;
            let classes = enumerate_equivalence_classes(&dt, &w, *cap)?;
            let rows: Vec<Value> = classes
                .representatives
                .iter()
                .zip(&classes.sizes)
                .map(|(d, s)| json!({"representative": word_json(d), "size": s}))
                .collect();
            let mut out = json!({
                "classes": rows,
                "count": classes.representatives.len(),
                "total": classes.total,
                "tau4_edges": classes.tau4_edges,
            });
            if w == dt.longest_element() {
                if let Ok(b) = bipartite_class_bound(&dt) {
                    out["lower_bound"] = json!(b);
                }
            }
            Ok(out)
        }
        Command::Charts(ChartsCmd::Show { datum, word }) => {
            let dt = RootDatum::parse(datum)?;
            let d = parse_word(&dt, word)?;
            let c = chart(&dt, &d)?;
            Ok(json!({
                "double_word": d.double_word(),
                "vars": c.vars,
                "vk": c.vk.word(),
                "wk": c.wk.word(),
                "word": word_json(&d),
                "x": c.x.to_strings(),
                "xi": c.xi.to_strings(),
            }))
        }
        Command::Potential(PotentialCmd::Dump { datum, word, n }) => {
            let dt = RootDatum::parse(datum)?;
            if *n < 2 {
                return Err(Error::Validation("n must be at least 2".into()));
            }
            let d = parse_word(&dt, word)?;
            let g = geometric_multiplicity(&dt, &vec![d.clone(); n - 1])?;
            let vars = g.potential.vars();
            Ok(json!({
                "chart_vars": g.potential.chart_vars,
                "hw": g.hw.monomials.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
                "hw_forms": g.hw.linear_forms(&vars)?,
                "potential": g.potential.value.to_string(),
                "terms": g.potential.value.to_json_terms(&vars)?,
                "torus_vars": g.potential.torus_vars,
                "vars": vars,
                "word": word_json(&d),
            }))
        }
        Command::Verify(VerifyCmd::Oracle { datum, max, word }) => {
            let dt = RootDatum::parse(datum)?;
            let d = parse_word(&dt, word)?;
            verify_oracle(&dt, &d, *max, cap)
        }
    }
}

/// Dominant weights with all coordinates in `0..=max`.
pub fn dominant_box(rank: usize, max: i64) -> Vec<Weight> {
    let mut out: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..rank {
        out = out.into_iter().flat_map(|v| (0..=max).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    out.into_iter().map(Weight::new).collect()
}

fn verify_oracle(dt: &RootDatum, d: &DecoratedWord, max: i64, cap: usize) -> Result<Value> {
    let ts = TensorSystem::new(dt, std::slice::from_ref(d))?;
    let ws = dominant_box(dt.rank(), max);
    let mut checked = 0;
    let mut mismatches = vec![];
    for l in &ws {
        for n in &ws {
            for m in &ws {
                let got = ts.multiplicity(&[l.clone(), n.clone()], m, cap, false)?.count as i64;
                let want = tensor_mult_oracle(&dt.langlands_dual(), l, n, m)?;
                checked += 1;
                if got != want {
                    mismatches.push(json!({"lambda": l.coords, "mu": m.coords, "nu": n.coords, "got": got, "oracle": want}));
                }
            }
        }
    }
    Ok(json!({
        "checked": checked,
        "datum": dt.name(),
        "mismatch_list": mismatches,
        "mismatches": mismatches.len(),
        "word": word_json(d),
    }))
}

/// Oracle value for an n-fold multiplicity, used by `verify`-style sweeps.
pub fn oracle_nfold(dt: &RootDatum, lambdas: &[Weight], mu: &Weight) -> Result<i64> {
    nfold_oracle(&dt.langlands_dual(), lambdas, mu)
}

/// Oracle value for a branching multiplicity.
pub fn oracle_branching(dt: &RootDatum, j: &[usize], lambda: &Weight, beta: &Weight) -> Result<i64> {
    branching_mult(&dt.langlands_dual(), j, lambda, beta)
}

/// Exit code for an error: 2 bad input, 3 broken construction, 4 cap exceeded.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::CapExceeded(_) => 4,
        e if e.is_internal() => 3,
        _ => 2,
    }
}

pub fn error_json(e: &Error) -> Value {
    json!({"error": {"kind": e.kind(), "message": e.to_string()}})
}

pub fn render(v: &Value, compact: bool) -> String {
    if compact {
        v.to_string()
    } else {
        serde_json::to_string_pretty(v).expect("JSON values serialize")
    }
}
