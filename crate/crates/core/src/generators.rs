//! Constructors for the named graph families.
//!
//! Every family has a fixed vertex numbering so that certificates and traces
//! are reproducible:
//!
//! * `S*_n`, `S~_n`, `F^(2)_n`: `x_1 = 0`, `y_i = i`, `z_i = n + i`.
//! * `F^(1)_n`, `F^(4)_n`, `F^(5)_n`: `x_1 = 0`, `x_2 = 1`, `y_i = 1 + i`,
//!   `z_i = 1 + n + i`.
//! * `F^(3)_n`: `x_i = i - 1`, `y_i = n + i - 1`, `z_i = 2n + i - 1`.
//! * `K*_n`: clique on `0..n`, the pendant of vertex `i` is `n + i`.
//! * `H^(k)_{m,n}`: `u^(j)_i = (i - 1) n + (j - 1)`, so the paths
//!   `Q_1, .., Q_m` come first; connectors follow in order of `i`:
//!   `v_i, w_i` pairs for `H^(1)`, `v_i` for `H^(2)`, and `v_{i,1}, v_{i,2}, ..`
//!   for `H^(3..5)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    Complete,
    Star,
    Path,
    Cycle,
    EmptyComplement,
    SStar,
    STilde,
    F1,
    F2,
    F3,
    F4,
    F5,
    KStar,
    H1,
    H2,
    H3,
    H4,
    H5,
}

impl Family {
    const NAMES: [(Family, &'static str); 18] = [
        (Family::Complete, "complete"),
        (Family::Star, "star"),
        (Family::Path, "path"),
        (Family::Cycle, "cycle"),
        (Family::EmptyComplement, "empty"),
        (Family::SStar, "sstar"),
        (Family::STilde, "stilde"),
        (Family::F1, "f1"),
        (Family::F2, "f2"),
        (Family::F3, "f3"),
        (Family::F4, "f4"),
        (Family::F5, "f5"),
        (Family::KStar, "kstar"),
        (Family::H1, "h1"),
        (Family::H2, "h2"),
        (Family::H3, "h3"),
        (Family::H4, "h4"),
        (Family::H5, "h5"),
    ];

    pub fn name(self) -> &'static str {
        Self::NAMES.iter().find(|(f, _)| *f == self).unwrap().1
    }

    pub fn is_two_parameter(self) -> bool {
        matches!(
            self,
            Family::H1 | Family::H2 | Family::H3 | Family::H4 | Family::H5
        )
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        let alias = match lower.as_str() {
            "k" => "complete",
            "p" => "path",
            "c" => "cycle",
            "kbar" => "empty",
            other => other,
        };
        Self::NAMES
            .iter()
            .find(|(_, name)| *name == alias)
            .map(|(f, _)| *f)
            .ok_or_else(|| Error::Parse(format!("unknown graph family `{s}`")))
    }
}

/// A named graph: family plus size parameters (`m` only for `H` families).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NamedGraphSpec {
    pub family: Family,
    pub n: usize,
    pub m: Option<usize>,
}

impl NamedGraphSpec {
    pub fn new(family: Family, n: usize) -> Self {
        NamedGraphSpec { family, n, m: None }
    }

    pub fn with_m(family: Family, m: usize, n: usize) -> Self {
        NamedGraphSpec {
            family,
            n,
            m: Some(m),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        let bad = |msg: String| Err(Error::BadParameter(msg));
        match self.family {
            f if f.is_two_parameter() => match self.m {
                Some(m) if m >= 2 && n >= 3 => Ok(()),
                Some(m) => bad(format!(
                    "{} needs m >= 2 and n >= 3, got m = {m}, n = {n}",
                    f.name()
                )),
                None => bad(format!("{} needs two parameters m,n", f.name())),
            },
            _ if self.m.is_some() => bad(format!("{} takes one parameter", self.family.name())),
            Family::SStar
            | Family::STilde
            | Family::F1
            | Family::F2
            | Family::F3
            | Family::F4
            | Family::F5
                if n < 2 =>
            {
                bad(format!("{} needs n >= 2, got {n}", self.family.name()))
            }
            Family::Cycle if n < 3 => bad(format!("cycle needs n >= 3, got {n}")),
            Family::Complete
            | Family::Star
            | Family::Path
            | Family::EmptyComplement
            | Family::KStar
                if n < 1 =>
            {
                bad(format!("{} needs n >= 1", self.family.name()))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for NamedGraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.m {
            Some(m) => write!(f, "{}:{},{}", self.family.name(), m, self.n),
            None => write!(f, "{}:{}", self.family.name(), self.n),
        }
    }
}

impl FromStr for NamedGraphSpec {
    type Err = Error;

    /// Parses `family:n` or `family:m,n`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, params) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected family:params, got `{s}`")))?;
        let family: Family = name.trim().parse()?;
        let nums = params
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad number `{p}` in `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        let spec = match (family.is_two_parameter(), nums.as_slice()) {
            (true, [m, n]) => NamedGraphSpec::with_m(family, *m, *n),
            (false, [n]) => NamedGraphSpec::new(family, *n),
            _ => {
                return Err(Error::Parse(format!(
                    "`{s}`: {} expects {} parameter(s)",
                    family.name(),
                    if family.is_two_parameter() { 2 } else { 1 }
                )))
            }
        };
        Ok(spec)
    }
}

/// Builds the named graph.
pub fn generate(spec: &NamedGraphSpec) -> Result<Graph> {
    spec.validate()?;
    let n = spec.n;
    let mut b = Builder::default();
    match spec.family {
        Family::Complete => {
            b.order = n;
            for u in 0..n {
                for v in u + 1..n {
                    b.edge(u, v);
                }
            }
        }
        Family::Star => {
            b.order = n + 1;
            for i in 1..=n {
                b.edge(0, i);
            }
        }
        Family::Path => {
            b.order = n;
            for i in 1..n {
                b.edge(i - 1, i);
            }
        }
        Family::Cycle => {
            b.order = n;
            for i in 0..n {
                b.edge(i, (i + 1) % n);
            }
        }
        Family::EmptyComplement => b.order = n,
        Family::SStar | Family::STilde => {
            b.order = 2 * n + 1;
            for i in 1..=n {
                b.edge(0, i);
                b.edge(i, n + i);
                if spec.family == Family::STilde {
                    b.edge(0, n + i);
                }
            }
        }
        Family::F1 | Family::F4 | Family::F5 => {
            b.order = 2 * n + 2;
            let y = |i: usize| 1 + i;
            let z = |i: usize| 1 + n + i;
            if spec.family == Family::F1 {
                b.edge(0, 1);
                b.edge(0, y(1));
                b.edge(0, z(1));
            } else {
                for x in [0, 1] {
                    b.edge(x, y(1));
                    b.edge(x, z(1));
                }
                if spec.family == Family::F5 {
                    b.edge(0, 1);
                }
            }
            b.two_tails(y, z, n);
        }
        Family::F2 => {
            b.order = 2 * n + 1;
            let y = |i: usize| i;
            let z = |i: usize| n + i;
            b.edge(0, y(1));
            b.edge(0, z(1));
            b.edge(y(1), z(1));
            b.two_tails(y, z, n);
        }
        Family::F3 => {
            b.order = 3 * n;
            let y = |i: usize| n + i - 1;
            let z = |i: usize| 2 * n + i - 1;
            for x in 0..n {
                b.edge(x, y(1));
                b.edge(x, z(1));
            }
            b.two_tails(y, z, n);
        }
        Family::KStar => {
            b.order = 2 * n;
            for u in 0..n {
                b.edge(u, n + u);
                for v in u + 1..n {
                    b.edge(u, v);
                }
            }
        }
        Family::H1 | Family::H2 | Family::H3 | Family::H4 | Family::H5 => {
            let m = spec.m.expect("validated");
            let u = |i: usize, j: usize| (i - 1) * n + (j - 1);
            let base = m * n;
            let connectors = match spec.family {
                Family::H1 => 2,
                Family::H2 => 1,
                Family::H3 => m,
                _ => 2,
            };
            b.order = base + connectors * (m - 1);
            for i in 1..=m {
                for j in 1..n {
                    b.edge(u(i, j), u(i, j + 1));
                }
            }
            for i in 1..m {
                let first = base + (i - 1) * connectors;
                let (end, start) = (u(i, n), u(i + 1, 1));
                match spec.family {
                    Family::H1 => {
                        let (v, w) = (first, first + 1);
                        b.edge(v, w);
                        b.edge(v, end);
                        b.edge(v, start);
                    }
                    Family::H2 => {
                        b.edge(first, end);
                        b.edge(first, start);
                        b.edge(end, start);
                    }
                    _ => {
                        for j in 0..connectors {
                            b.edge(first + j, end);
                            b.edge(first + j, start);
                        }
                        if spec.family == Family::H5 {
                            b.edge(first, first + 1);
                        }
                    }
                }
            }
        }
    }
    Ok(b.finish()?.with_label(spec.to_string()))
}

#[derive(Default)]
struct Builder {
    order: usize,
    edges: Vec<(usize, usize)>,
}

impl Builder {
    fn edge(&mut self, u: usize, v: usize) {
        self.edges.push((u, v));
    }

    fn two_tails(&mut self, y: impl Fn(usize) -> usize, z: impl Fn(usize) -> usize, n: usize) {
        for i in 1..n {
            self.edge(y(i), y(i + 1));
            self.edge(z(i), z(i + 1));
        }
    }

    fn finish(self) -> Result<Graph> {
        Graph::from_edges(self.order, &self.edges)
    }
}

/// The complement graph.
pub fn complement(g: &Graph) -> Graph {
    let n = g.order();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if !g.has_edge(u, v) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).expect("complement of a valid graph")
}

fn named(family: Family, n: usize) -> Graph {
    generate(&NamedGraphSpec::new(family, n)).expect("valid parameter")
}

/// `K_n`.
pub fn complete(n: usize) -> Graph {
    named(Family::Complete, n)
}

/// `P_n` on `n` vertices.
pub fn path(n: usize) -> Graph {
    named(Family::Path, n)
}

/// `C_n`.
pub fn cycle(n: usize) -> Graph {
    named(Family::Cycle, n)
}

/// `K_{1,n}`, center `0`.
pub fn star(n: usize) -> Graph {
    named(Family::Star, n)
}

/// `K̄_n`.
pub fn empty(n: usize) -> Graph {
    named(Family::EmptyComplement, n)
}
