//! Verification suites: closed forms on named graphs, lower bounds on the
//! extremal families, characterization self-consistency, invariant chains
//! and oracle equivalence on random graphs.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::generators::{complete, generate, path, star, Family, NamedGraphSpec};
use crate::graph::{Graph, PieceKind};
use crate::invariant::Invariant;
use crate::iso::{characterize, contains_induced, family_leq, ForbiddenFamily};
use crate::naive;
use crate::solvers::{
    chromatic_number, min_cover, min_partition, solve_invariant, SolveConfig, SolveStatus,
};

/// Serialized and parsed by its CLI name.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    ClosedForms,
    LowerBounds,
    Characterizations,
    Chains,
    Oracle,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::ClosedForms,
        Suite::LowerBounds,
        Suite::Characterizations,
        Suite::Chains,
        Suite::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::ClosedForms => "lemma41",
            Suite::LowerBounds => "lemma42",
            Suite::Characterizations => "theorems",
            Suite::Chains => "chains",
            Suite::Oracle => "oracle",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

impl Serialize for Suite {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckLine {
    pub item: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

impl CheckLine {
    fn new(
        item: impl Into<String>,
        expected: impl fmt::Display,
        actual: impl fmt::Display,
        pass: bool,
    ) -> Self {
        CheckLine {
            item: item.into(),
            expected: expected.to_string(),
            actual: actual.to_string(),
            pass,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub lines: Vec<CheckLine>,
    pub pass: bool,
}

impl SuiteReport {
    fn new(suite: Suite, lines: Vec<CheckLine>) -> Self {
        let pass = lines.iter().all(|l| l.pass);
        SuiteReport { suite, lines, pass }
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckLine> {
        self.lines.iter().filter(|l| !l.pass)
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Random graphs for the chains suite.
    pub chain_graphs: usize,
    pub chain_max_order: usize,
    /// Random graphs for the oracle suite.
    pub oracle_graphs: usize,
    /// Largest `m` for the extremal families.
    pub lower_bound_max_m: usize,
    pub solve: SolveConfig,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 0,
            chain_graphs: 200,
            chain_max_order: 10,
            oracle_graphs: 5000,
            lower_bound_max_m: 4,
            solve: SolveConfig::default(),
        }
    }
}

/// A connected graph on `n` vertices: a random recursive tree on a random
/// labelling plus each remaining pair with probability `p`.
pub fn random_connected_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    let mut labels: Vec<usize> = (0..n).collect();
    labels.shuffle(rng);
    let mut edges = Vec::new();
    for i in 1..n {
        let j = rng.gen_range(0..i);
        edges.push((labels[i], labels[j]));
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).expect("indices in range")
}

/// Uniform `G(n, p)`.
pub fn gnp<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).expect("indices in range")
}

/// `count` random connected graphs with orders in `orders`, deterministic in
/// `seed`.
pub fn random_corpus(
    seed: u64,
    count: usize,
    orders: std::ops::RangeInclusive<usize>,
) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(orders.clone());
            let p = rng.gen_range(0.0..0.6);
            random_connected_graph(&mut rng, n, p)
        })
        .collect()
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<SuiteReport> {
    let lines = match suite {
        Suite::ClosedForms => closed_forms(cfg)?,
        Suite::LowerBounds => lower_bounds(cfg)?,
        Suite::Characterizations => characterizations()?,
        Suite::Chains => chains(cfg)?,
        Suite::Oracle => oracle(cfg)?,
    };
    Ok(SuiteReport::new(suite, lines))
}

fn named(family: Family, n: usize) -> Graph {
    generate(&NamedGraphSpec::new(family, n)).expect("valid parameters")
}

fn exact(g: &Graph, inv: Invariant, cfg: &SolveConfig) -> Result<(usize, bool)> {
    let s = solve_invariant(g, inv, cfg)?;
    Ok((s.value(), s.status == SolveStatus::Optimal))
}

fn equality(
    item: String,
    g: &Graph,
    inv: Invariant,
    want: usize,
    cfg: &SolveConfig,
) -> Result<CheckLine> {
    let (v, optimal) = exact(g, inv, cfg)?;
    let actual = if optimal {
        v.to_string()
    } else {
        format!("{v} (timeout)")
    };
    Ok(CheckLine::new(item, want, actual, optimal && v == want))
}

fn closed_forms(cfg: &VerifyConfig) -> Result<Vec<CheckLine>> {
    let c = &cfg.solve;
    let mut out = Vec::new();
    for n in 2..=8 {
        out.push(equality(
            format!("inspc(K_{n})"),
            &complete(n),
            Invariant::Inspc,
            n.div_ceil(2),
            c,
        )?);
        out.push(equality(
            format!("inspc(S*_{n})"),
            &named(Family::SStar, n),
            Invariant::Inspc,
            n.div_ceil(2),
            c,
        )?);
    }
    for n in 2..=6 {
        out.push(equality(
            format!("inspp(S~_{n})"),
            &named(Family::STilde, n),
            Invariant::Inspp,
            n + 1,
            c,
        )?);
    }
    for n in 2..=10 {
        out.push(equality(
            format!("inpc(K_1,{n})"),
            &star(n),
            Invariant::Inpc,
            n.div_ceil(2),
            c,
        )?);
    }
    for n in 2..=12 {
        out.push(equality(
            format!("insc(P_{n})"),
            &path(n),
            Invariant::Insc,
            n.div_ceil(3),
            c,
        )?);
    }
    Ok(out)
}

/// Extremal family, invariant, and the lower bound as a function of `m`.
type LowerBoundCase = (Family, Invariant, fn(usize) -> usize);

fn lower_bounds(cfg: &VerifyConfig) -> Result<Vec<CheckLine>> {
    let cases: [LowerBoundCase; 5] = [
        (Family::H1, Invariant::Inspc, |m| (m + 1).div_ceil(2)),
        (Family::H2, Invariant::Inspc, |m| (m + 1).div_ceil(2)),
        (Family::H3, Invariant::Inspc, |m| m),
        (Family::H4, Invariant::Inspp, |m| m),
        (Family::H5, Invariant::Inspp, |m| m),
    ];
    let mut out = Vec::new();
    for m in 2..=cfg.lower_bound_max_m {
        for n in 3..=4 {
            for (family, inv, bound) in cases {
                let g = generate(&NamedGraphSpec::with_m(family, m, n))?;
                let s = solve_invariant(&g, inv, &cfg.solve)?;
                // A timed-out search still certifies its lower bound.
                let lower = if s.status == SolveStatus::Optimal {
                    s.value()
                } else {
                    s.lower_bound
                };
                let actual = if s.status == SolveStatus::Optimal {
                    s.value().to_string()
                } else {
                    format!("lower bound {lower} (timeout)")
                };
                let item = format!("{}({}:{m},{n})", inv.name(), family.name());
                out.push(CheckLine::new(
                    item,
                    format!(">= {}", bound(m)),
                    actual,
                    lower >= bound(m),
                ));
            }
        }
    }
    Ok(out)
}

fn characterizations() -> Result<Vec<CheckLine>> {
    let mut out = Vec::new();
    for inv in Invariant::ALL {
        for n in 4..=5 {
            let got = characterize(&inv.target(n), inv)?;
            out.push(CheckLine::new(
                format!("characterize(target_{n}, {inv})"),
                n,
                fmt_opt(got),
                got == Some(n),
            ));
        }
    }
    let p4 = ForbiddenFamily::new(vec![path(4)]);
    let got = characterize(&p4, Invariant::Inspc)?;
    out.push(CheckLine::new(
        "characterize({P_4}, inspc)",
        "none",
        fmt_opt(got),
        got.is_none(),
    ));
    let k2 = ForbiddenFamily::new(vec![complete(2)]);
    let got = characterize(&k2, Invariant::Inspc)?;
    out.push(CheckLine::new(
        "characterize({K_2}, inspc)",
        4,
        fmt_opt(got),
        got == Some(4),
    ));
    for inv in Invariant::ALL {
        for n in 4..=7 {
            let ok = family_leq(&inv.target(n), &inv.target(n + 1));
            out.push(CheckLine::new(
                format!("target_{n}({inv}) <= target_{}", n + 1),
                true,
                ok,
                ok,
            ));
        }
    }
    let tags = [
        Family::Complete,
        Family::Star,
        Family::Path,
        Family::SStar,
        Family::STilde,
    ]
    .into_iter()
    .chain([Family::F1, Family::F2, Family::F3, Family::F4, Family::F5]);
    for family in tags {
        for n in 4..=7 {
            let ok = contains_induced(&named(family, n + 1), &named(family, n)).is_some();
            out.push(CheckLine::new(
                format!("{}:{n} in {}:{}", family.name(), family.name(), n + 1),
                true,
                ok,
                ok,
            ));
        }
    }
    Ok(out)
}

fn fmt_opt(v: Option<usize>) -> String {
    v.map_or_else(|| "none".to_string(), |n| n.to_string())
}

/// `(lhs, rhs)` pairs with `lhs <= rhs` for every graph.
pub const CHAINS: [(Invariant, Invariant); 10] = [
    (Invariant::Inspc, Invariant::Inspp),
    (Invariant::Inspc, Invariant::Insc),
    (Invariant::Insc, Invariant::Insp),
    (Invariant::Inspp, Invariant::Insp),
    (Invariant::Inspc, Invariant::Inpc),
    (Invariant::Inpc, Invariant::Inpp),
    (Invariant::Inspp, Invariant::Inpp),
    (Invariant::Inpc, Invariant::Ispc),
    (Invariant::Inpp, Invariant::Ispp),
    (Invariant::Ispc, Invariant::Ispp),
];

/// All eight invariants of `g` (indexed like [`Invariant::ALL`]) and whether
/// every solve was optimal.
pub fn all_invariants(g: &Graph, cfg: &SolveConfig) -> Result<([usize; 8], bool)> {
    let mut values = [0; 8];
    let mut optimal = true;
    for (i, inv) in Invariant::ALL.into_iter().enumerate() {
        let (v, ok) = exact(g, inv, cfg)?;
        values[i] = v;
        optimal &= ok;
    }
    Ok((values, optimal))
}

/// Violated chain inequalities of one graph, as readable strings.
pub fn chain_violations(g: &Graph, values: &[usize; 8]) -> Vec<String> {
    let at = |inv: Invariant| values[Invariant::ALL.iter().position(|&x| x == inv).unwrap()];
    let mut bad: Vec<String> = CHAINS
        .iter()
        .filter(|(a, b)| at(*a) > at(*b))
        .map(|(a, b)| format!("{a}={} > {b}={}", at(*a), at(*b)))
        .collect();
    let chi = chromatic_number(g);
    if chi > 2 * at(Invariant::Inspc) {
        bad.push(format!("chi={chi} > 2 inspc={}", 2 * at(Invariant::Inspc)));
    }
    bad
}

fn chains(cfg: &VerifyConfig) -> Result<Vec<CheckLine>> {
    let corpus = random_corpus(cfg.seed, cfg.chain_graphs, 1..=cfg.chain_max_order);
    corpus
        .par_iter()
        .enumerate()
        .map(|(i, g)| {
            let (values, optimal) = all_invariants(g, &cfg.solve)?;
            let bad = chain_violations(g, &values);
            let actual = if !optimal {
                "timeout".to_string()
            } else if bad.is_empty() {
                "all hold".to_string()
            } else {
                bad.join("; ")
            };
            Ok(CheckLine::new(
                format!("graph {i} ({})", crate::io::to_graph6(g)),
                "all hold",
                actual,
                optimal && bad.is_empty(),
            ))
        })
        .collect()
}

fn oracle(cfg: &VerifyConfig) -> Result<Vec<CheckLine>> {
    let corpus = random_corpus(cfg.seed.wrapping_add(1), cfg.oracle_graphs, 4..=7);
    let mismatches: Vec<CheckLine> = corpus
        .par_iter()
        .enumerate()
        .map(|(i, g)| -> Result<Vec<CheckLine>> {
            let mut out = Vec::new();
            for kind in PieceKind::ALL {
                let c = min_cover(g, kind, &cfg.solve)?;
                let p = min_partition(g, kind, &cfg.solve)?;
                let (nc, np) = (
                    naive::min_cover_value(g, kind),
                    naive::min_partition_value(g, kind),
                );
                if c.value() != nc || c.status != SolveStatus::Optimal {
                    out.push(CheckLine::new(
                        format!("graph {i} cover {}", kind.name()),
                        nc,
                        c.value(),
                        false,
                    ));
                }
                if p.value() != np || p.status != SolveStatus::Optimal {
                    out.push(CheckLine::new(
                        format!("graph {i} partition {}", kind.name()),
                        np,
                        p.value(),
                        false,
                    ));
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let summary = CheckLine::new(
        format!("{} graphs x 4 kinds x 2 modes", corpus.len()),
        "0 mismatches",
        format!("{} mismatches", mismatches.len()),
        mismatches.is_empty(),
    );
    Ok(std::iter::once(summary).chain(mismatches).collect())
}
